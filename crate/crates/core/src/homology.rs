//! Finite-depth chain complex of the relations `R(σⁿ)` and their H₀.
//!
//! At depth `d ≥ n`, two paths `μ, ν ∈ E^d` are `σⁿ`-related when their
//! length-`(d − n)` tails agree (for `d = n`, when `s(μ) = s(ν)`). A
//! [`RelFun`] is an integer combination of the compact open sets
//! `{(x, y) : x ∈ Z(μ), y ∈ Z(ν), σⁿx = σⁿy}` over related pairs.
//!
//! The class of `f` in `H₀(R(σⁿ))` is represented by its fiber sum
//! `Tₙ(f)(ν) = Σ_{μ ∈ Eⁿ, s(μ) = r(ν)} f(μν)`; lattice membership in
//! `Im ∂₁` is kept as an independent check of that representation.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::dynamics::{phi_push, CylFun, CylFunRecord, Section, TransferMatrix};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::linalg::{IntMatrix, LatticeSolver};

/// `E^d` split into `σⁿ`-classes, ordered by least member.
#[derive(Debug, Clone)]
pub struct TailPartition {
    pub power: usize,
    pub depth: usize,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Shared tail per class, as an index into `E^{d−n}`.
    pub tail_index: Vec<usize>,
}

pub fn tail_partition(g: &Graph, n: usize, d: usize) -> Result<TailPartition> {
    if d < n {
        return Err(Error::InvalidArgument(format!("depth {d} below power {n}")));
    }
    let table = g.path_table(d);
    let tails = g.path_table(d - n);
    let mut by_tail: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, p) in table.paths().iter().enumerate() {
        let t = tails
            .index_of(&p.tail(g, d - n))
            .expect("tail of a path is a path");
        by_tail.entry(t).or_default().push(i);
    }
    let mut classes: Vec<(usize, Vec<usize>)> = by_tail.into_iter().collect();
    classes.sort_by_key(|(_, members)| members[0]);
    let mut class_of = vec![0; table.len()];
    for (c, (_, members)) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    Ok(TailPartition {
        power: n,
        depth: d,
        tail_index: classes.iter().map(|(t, _)| *t).collect(),
        classes: classes.into_iter().map(|(_, m)| m).collect(),
        class_of,
    })
}

fn check_power_depth(n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("relation power must be >= 1".into()));
    }
    if d < n {
        return Err(Error::InvalidArgument(format!("depth {d} below power {n}")));
    }
    Ok(())
}

/// Integer function on the depth-`d` model of `R(σⁿ)`, keyed by path-index
/// pairs `(μ, ν)`; absent keys are 0.
#[derive(Clone)]
pub struct RelFun<'g> {
    graph: &'g Graph,
    power: usize,
    depth: usize,
    partition: std::sync::Arc<TailPartition>,
    coeffs: BTreeMap<(usize, usize), i64>,
}

impl std::fmt::Debug for RelFun<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "RelFun(power {}, depth {}, {:?})",
            self.power, self.depth, self.coeffs
        )
    }
}

impl PartialEq for RelFun<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.power == other.power
            && self.depth == other.depth
            && self.graph == other.graph
            && self.coeffs == other.coeffs
    }
}

impl<'g> RelFun<'g> {
    pub fn zero(graph: &'g Graph, power: usize, depth: usize) -> Result<Self> {
        check_power_depth(power, depth)?;
        Ok(RelFun {
            graph,
            power,
            depth,
            partition: std::sync::Arc::new(tail_partition(graph, power, depth)?),
            coeffs: BTreeMap::new(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn partition(&self) -> &TailPartition {
        &self.partition
    }

    /// Nonzero entries as `((μ, ν), value)` over path indices in `E^d`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn get(&self, mu: usize, nu: usize) -> i64 {
        self.coeffs.get(&(mu, nu)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn related(&self, mu: usize, nu: usize) -> bool {
        let len = self.partition.class_of.len();
        mu < len && nu < len && self.partition.class_of[mu] == self.partition.class_of[nu]
    }

    /// Adds `c` at `(μ, ν)`; the pair must be `σⁿ`-related.
    pub fn add_at(&mut self, mu: usize, nu: usize, c: i64) -> Result<()> {
        if !self.related(mu, nu) {
            return Err(Error::InvalidArgument(format!(
                "paths #{mu} and #{nu} do not share a tail of length {}",
                self.depth - self.power
            )));
        }
        let slot = self.coeffs.entry((mu, nu)).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&(mu, nu));
        }
        Ok(())
    }

    pub fn add_at_paths(&mut self, mu: &Path, nu: &Path, c: i64) -> Result<()> {
        let table = self.graph.path_table(self.depth);
        let find = |p: &Path| {
            table
                .index_of(p)
                .ok_or_else(|| Error::InvalidPath(format!("{p:?} is not in E^{}", self.depth)))
        };
        let (i, j) = (find(mu)?, find(nu)?);
        self.add_at(i, j, c)
    }

    /// Indicator of the basic set over the related pair `(μ, ν)`.
    pub fn basis(
        graph: &'g Graph,
        power: usize,
        depth: usize,
        mu: usize,
        nu: usize,
    ) -> Result<Self> {
        let mut f = RelFun::zero(graph, power, depth)?;
        f.add_at(mu, nu, 1)?;
        Ok(f)
    }

    /// Every related ordered pair, diagonal included.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for class in &self.partition.classes {
            for &a in class {
                for &b in class {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Random combination of `terms` basic sets with coefficients in [−3, 3].
    pub fn random<R: Rng>(
        graph: &'g Graph,
        power: usize,
        depth: usize,
        terms: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut f = RelFun::zero(graph, power, depth)?;
        let pairs = f.pairs();
        if pairs.is_empty() {
            return Ok(f);
        }
        for _ in 0..terms {
            let &(a, b) = pairs.choose(rng).expect("nonempty");
            f.add_at(a, b, rng.gen_range(-3..=3))?;
        }
        Ok(f)
    }

    pub fn add(&self, other: &RelFun<'g>) -> Result<Self> {
        if self.power != other.power || self.depth != other.depth || self.graph != other.graph {
            return Err(Error::Dimension(
                "relation functions differ in power or depth".into(),
            ));
        }
        let mut out = self.clone();
        for (&(a, b), &c) in &other.coeffs {
            out.add_at(a, b, c)?;
        }
        Ok(out)
    }

    /// Same function with keys swapped: `F(ν, μ)`.
    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(&(a, b), &c)| ((b, a), c))
            .collect();
        out
    }
}

/// `∂₁ = s_* − r_*`: `coeff(ν) = Σ_μ [F(μ, ν) − F(ν, μ)]`.
pub fn boundary_1<'g>(f: &RelFun<'g>) -> CylFun<'g> {
    let g = f.graph;
    let mut coeffs = vec![0i64; g.path_table(f.depth).len()];
    for (&(mu, nu), &c) in &f.coeffs {
        coeffs[nu] += c;
        coeffs[mu] -= c;
    }
    CylFun::from_coeffs(g, f.depth, coeffs).expect("sized from the path table")
}

/// Fiber sum over `σⁿ`. Inputs shallower than `n` are refined first.
pub fn fiber_sum_t<'g>(f: &CylFun<'g>, n: usize) -> Result<CylFun<'g>> {
    if n == 0 {
        return Err(Error::InvalidArgument("fiber sum needs n >= 1".into()));
    }
    let g = f.graph();
    g.require_no_sinks_or_sources()?;
    let f = if f.depth() < n {
        f.refine(n)?
    } else {
        f.clone()
    };
    let d = f.depth();
    let table = g.path_table(d);
    let tails = g.path_table(d - n);
    let mut out = vec![0i64; tails.len()];
    for (p, &c) in table.paths().iter().zip(f.coeffs()) {
        if c != 0 {
            out[tails.index_of(&p.tail(g, d - n)).expect("tail exists")] += c;
        }
    }
    CylFun::from_coeffs(g, d - n, out)
}

/// A class in `H₀(R(σⁿ))`, held as its fiber-sum canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct H0Class<'g> {
    pub level: usize,
    pub rep: CylFun<'g>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H0ClassRecord {
    pub level: usize,
    pub rep: CylFunRecord,
}

impl<'g> H0Class<'g> {
    pub fn is_positive(&self) -> bool {
        self.rep.is_nonneg()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &H0Class<'g>) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::InvalidArgument("classes at different levels".into()));
        }
        Ok(H0Class {
            level: self.level,
            rep: self.rep.add(&other.rep)?,
        })
    }

    pub fn neg(&self) -> Self {
        H0Class {
            level: self.level,
            rep: self.rep.scale(-1),
        }
    }

    /// A non-negative function in this class, when the class is positive.
    pub fn nonneg_representative(&self, section: &Section) -> Result<Option<CylFun<'g>>> {
        if !self.is_positive() {
            return Ok(None);
        }
        phi_push(&self.rep, section, self.level).map(Some)
    }

    pub fn to_record(&self) -> H0ClassRecord {
        H0ClassRecord {
            level: self.level,
            rep: self.rep.to_record(),
        }
    }
}

pub fn h0_class<'g>(f: &CylFun<'g>, n: usize) -> Result<H0Class<'g>> {
    Ok(H0Class {
        level: n,
        rep: fiber_sum_t(f, n)?,
    })
}

pub fn h0_equivalent<'g>(f: &CylFun<'g>, g: &CylFun<'g>, n: usize) -> Result<bool> {
    fiber_sum_t(f, n)?.same_function(&fiber_sum_t(g, n)?)
}

/// `σ*` on relation functions. Power-`(n−1)` results with `n = 1` live on
/// the unit space and come back as a diagonal [`CylFun`].
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaRelImage<'g> {
    Relation(RelFun<'g>),
    Diagonal(CylFun<'g>),
}

/// `σ*(F)(x, y) = Σ_{σu = x, σv = y} F(u, v)`: every key `(eμ', e'ν')`
/// drops its first edges and lands on `(μ', ν')`.
pub fn sigma_star_rel<'g>(f: &RelFun<'g>) -> Result<SigmaRelImage<'g>> {
    let g = f.graph;
    let d = f.depth;
    let src = g.path_table(d);
    let dst = g.path_table(d - 1);
    let drop = |i: usize| {
        dst.index_of(&src.get(i).tail(g, d - 1))
            .expect("tail of a path is a path")
    };
    if f.power == 1 {
        let mut coeffs = vec![0i64; dst.len()];
        for (&(mu, nu), &c) in &f.coeffs {
            let (a, b) = (drop(mu), drop(nu));
            if a != b {
                return Err(Error::Internal("power-1 pair does not collapse".into()));
            }
            coeffs[a] += c;
        }
        return Ok(SigmaRelImage::Diagonal(CylFun::from_coeffs(
            g,
            d - 1,
            coeffs,
        )?));
    }
    let mut out = RelFun::zero(g, f.power - 1, d - 1)?;
    for (&(mu, nu), &c) in &f.coeffs {
        out.add_at(drop(mu), drop(nu), c)?;
    }
    Ok(SigmaRelImage::Relation(out))
}

/// Whether `∂₁(σ*F) = σ*(∂₁F)`; expected to hold for every `F`.
pub fn check_commutation(f: &RelFun<'_>) -> Result<bool> {
    let lhs = match sigma_star_rel(f)? {
        SigmaRelImage::Relation(r) => boundary_1(&r),
        // ∂₁ vanishes on the unit space
        SigmaRelImage::Diagonal(c) => CylFun::zero(c.graph(), c.depth()),
    };
    let rhs = boundary_1(f).sigma_star()?;
    lhs.same_function(&rhs)
}

/// Integer 2-chain on composable pairs `((μ, ν), (ν, λ))` of the depth-`d`
/// model of `R(σⁿ)`, keyed by `(μ, ν, λ)`.
#[derive(Debug, Clone)]
pub struct TwoChain<'g> {
    graph: &'g Graph,
    power: usize,
    depth: usize,
    coeffs: BTreeMap<(usize, usize, usize), i64>,
}

impl<'g> TwoChain<'g> {
    pub fn zero(graph: &'g Graph, power: usize, depth: usize) -> Result<Self> {
        check_power_depth(power, depth)?;
        Ok(TwoChain {
            graph,
            power,
            depth,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn add_at(&mut self, key: (usize, usize, usize), c: i64) {
        *self.coeffs.entry(key).or_insert(0) += c;
    }

    pub fn random<R: Rng>(
        graph: &'g Graph,
        power: usize,
        depth: usize,
        terms: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let partition = tail_partition(graph, power, depth)?;
        let mut out = TwoChain::zero(graph, power, depth)?;
        if partition.classes.is_empty() {
            return Ok(out);
        }
        for _ in 0..terms {
            let class = partition.classes.choose(rng).expect("nonempty");
            let pick = |rng: &mut R| *class.choose(rng).expect("classes are nonempty");
            let key = (pick(rng), pick(rng), pick(rng));
            out.add_at(key, rng.gen_range(-3..=3));
        }
        Ok(out)
    }
}

/// `∂₂ = Σᵢ (−1)ⁱ (dᵢ)_*` with `d₀(g₁, g₂) = g₂`, `d₁(g₁, g₂) = g₁g₂`,
/// `d₂(g₁, g₂) = g₁`.
pub fn boundary_2<'g>(f: &TwoChain<'g>) -> Result<RelFun<'g>> {
    let mut out = RelFun::zero(f.graph, f.power, f.depth)?;
    for (&(mu, nu, lambda), &c) in &f.coeffs {
        out.add_at(nu, lambda, c)?;
        out.add_at(mu, lambda, -c)?;
        out.add_at(mu, nu, c)?;
    }
    Ok(out)
}

/// Checks `∂₁∘∂₂ = 0` on `trials` random 2-chains.
pub fn boundary_2_composition_zero<R: Rng>(
    g: &Graph,
    n: usize,
    d: usize,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    for _ in 0..trials {
        let terms = rng.gen_range(1..=6);
        let chain = TwoChain::random(g, n, d, terms, rng)?;
        if !boundary_1(&boundary_2(&chain)?).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The lattice `∂₁(C_c(R(σⁿ), ℤ))` at one depth, with a cached Smith form.
///
/// Columns are `∂₁` of the basic sets `(μ, ν)` with `μ < ν`; the reversed
/// and diagonal ones add only negatives and zeros, so the span is the same.
pub struct BoundaryLattice<'g> {
    graph: &'g Graph,
    power: usize,
    depth: usize,
    pairs: Vec<(usize, usize)>,
    solver: LatticeSolver,
}

impl<'g> BoundaryLattice<'g> {
    pub fn new(graph: &'g Graph, power: usize, depth: usize) -> Result<Self> {
        let zero = RelFun::zero(graph, power, depth)?;
        let pairs: Vec<(usize, usize)> = zero.pairs().into_iter().filter(|&(a, b)| a < b).collect();
        let rows = graph.path_table(depth).len();
        let mut m = IntMatrix::zeros(rows, pairs.len());
        for (col, &(mu, nu)) in pairs.iter().enumerate() {
            m[(nu, col)] = BigInt::from(1);
            m[(mu, col)] = BigInt::from(-1);
        }
        Ok(BoundaryLattice {
            graph,
            power,
            depth,
            pairs,
            solver: LatticeSolver::new(&m),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The reduced form of `f` (refined to this depth); see
    /// [`LatticeSolver::reduce`].
    pub fn reduce(&self, f: &CylFun<'g>) -> Result<Vec<BigInt>> {
        let f = f.refine(self.depth)?;
        let b: Vec<BigInt> = f.coeffs().iter().map(|&c| BigInt::from(c)).collect();
        self.solver
            .reduce(&b)
            .ok_or_else(|| Error::Internal("lattice dimension mismatch".into()))
    }

    pub fn contains_reduced(&self, c: &[BigInt]) -> bool {
        self.solver.contains_reduced(c)
    }

    /// An integral `F` with `∂₁F = f`, if `f` (refined to this depth) is a
    /// boundary.
    pub fn preimage(&self, f: &CylFun<'g>) -> Result<Option<RelFun<'g>>> {
        let f = f.refine(self.depth)?;
        let b: Vec<BigInt> = f.coeffs().iter().map(|&c| BigInt::from(c)).collect();
        let Some(x) = self.solver.solve(&b) else {
            return Ok(None);
        };
        let mut out = RelFun::zero(self.graph, self.power, self.depth)?;
        for (&(mu, nu), c) in self.pairs.iter().zip(&x) {
            let c = c
                .to_i64()
                .ok_or_else(|| Error::Internal("boundary preimage overflows i64".into()))?;
            if c != 0 {
                out.add_at(mu, nu, c)?;
            }
        }
        Ok(Some(out))
    }
}

/// The smallest depth `≤ d_max` at which `f` lies in `Im ∂₁`, if any.
pub fn im_boundary_depth(f: &CylFun<'_>, n: usize, d_max: usize) -> Result<Option<usize>> {
    let start = f.depth().max(n);
    for d in start..=d_max {
        let lattice = BoundaryLattice::new(f.graph(), n, d)?;
        if lattice.preimage(f)?.is_some() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

pub fn im_boundary_member(f: &CylFun<'_>, n: usize, d_max: usize) -> Result<bool> {
    Ok(im_boundary_depth(f, n, d_max)?.is_some())
}

/// An element of the inductive limit of the H₀ groups under `σ*`, with
/// `(n, g) ≡ (n + 1, σ*(g))`.
#[derive(Debug, Clone)]
pub struct LimitClass<'g> {
    pub level: usize,
    pub element: CylFun<'g>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitClassRecord {
    pub level: usize,
    pub rep: CylFunRecord,
}

impl<'g> LimitClass<'g> {
    pub fn new(level: usize, element: CylFun<'g>) -> Self {
        LimitClass { level, element }
    }

    /// Pushes the element down to depth 0, raising the level to match.
    pub fn reduce(&self) -> Result<(usize, Vec<i64>)> {
        let d = self.element.depth();
        let base = self.element.sigma_star_pow(d)?;
        Ok((self.level + d, base.coeffs().to_vec()))
    }

    pub fn to_record(&self) -> LimitClassRecord {
        LimitClassRecord {
            level: self.level,
            rep: self.element.to_record(),
        }
    }
}

fn apply_power(b: &TransferMatrix, v: &[i64], k: usize) -> Vec<i64> {
    (0..k).fold(v.to_vec(), |acc, _| b.apply(&acc))
}

/// Whether `a` and `b` agree once both are pushed `extra` levels past the
/// larger of their reduced levels.
pub fn limit_equal_after<'g>(a: &LimitClass<'g>, b: &LimitClass<'g>, extra: usize) -> Result<bool> {
    let g = a.element.graph();
    if g != b.element.graph() {
        return Err(Error::GraphMismatch);
    }
    let (la, ua) = a.reduce()?;
    let (lb, ub) = b.reduce()?;
    let top = la.max(lb);
    let t = TransferMatrix::of(g);
    let xa = apply_power(&t, &ua, top - la + extra);
    let xb = apply_power(&t, &ub, top - lb + extra);
    Ok(xa == xb)
}

/// Equality in the limit. The kernel chain `ker Bᵏ` stabilises by
/// `k = |E⁰|`, so agreement after that many extra steps is decisive.
pub fn limit_equal<'g>(a: &LimitClass<'g>, b: &LimitClass<'g>) -> Result<bool> {
    limit_equal_after(a, b, a.element.graph().vertex_count())
}

pub fn limit_sigma_star<'g>(a: &LimitClass<'g>) -> Result<LimitClass<'g>> {
    Ok(LimitClass {
        level: a.level,
        element: a.element.sigma_star()?,
    })
}

/// Bounded eventual-positivity check: the first `k ≤ k_max` extra steps
/// after which the reduced vector is non-negative, or `None` (unresolved).
pub fn limit_nonneg_within(a: &LimitClass<'_>, k_max: usize) -> Result<Option<usize>> {
    let t = TransferMatrix::of(a.element.graph());
    let (_, mut u) = a.reduce()?;
    for k in 0..=k_max {
        if u.iter().all(|&x| x >= 0) {
            return Ok(Some(k));
        }
        u = t.apply(&u);
    }
    Ok(None)
}

/// Map from a path label to its index, handy for fixtures.
pub fn path_index(g: &Graph, d: usize) -> HashMap<String, usize> {
    g.path_table(d)
        .paths()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.label(g), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{make_section, SectionPolicy};
    use crate::graph::{bouquet, parse_graph, random_graph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fixture() -> Graph {
        parse_graph("vertex v\nvertex w\nedge e v v\nedge g w v\nedge h v w\n").unwrap()
    }

    fn ind<'g>(g: &'g Graph, label: &str) -> CylFun<'g> {
        CylFun::indicator(g, &g.parse_path(label).unwrap()).unwrap()
    }

    #[test]
    fn partitions() {
        let b2 = bouquet(2).unwrap();
        let p = tail_partition(&b2, 1, 1).unwrap();
        assert_eq!(p.classes, vec![vec![0, 1]]);
        let p = tail_partition(&b2, 1, 2).unwrap();
        // aa, ab, ba, bb → {aa, ba}, {ab, bb}
        assert_eq!(p.classes, vec![vec![0, 2], vec![1, 3]]);
        let lp = bouquet(1).unwrap();
        assert_eq!(tail_partition(&lp, 2, 3).unwrap().classes, vec![vec![0]]);
    }

    #[test]
    fn fiber_sum_examples() {
        let b2 = bouquet(2).unwrap();
        assert_eq!(fiber_sum_t(&ind(&b2, "a.a"), 2).unwrap().coeffs(), &[1]);
        let f = ind(&b2, "a.b");
        assert_eq!(fiber_sum_t(&f, 1).unwrap(), f.sigma_star().unwrap());
        let t2 = fiber_sum_t(&f, 2).unwrap();
        assert_eq!(t2, fiber_sum_t(&fiber_sum_t(&f, 1).unwrap(), 1).unwrap());
        // depth-0 input is refined first
        assert_eq!(
            fiber_sum_t(&CylFun::constant(&b2, 1), 1).unwrap().coeffs(),
            &[2]
        );
        let s = make_section(&b2, SectionPolicy::FirstEdge).unwrap();
        let g0 = CylFun::from_coeffs(&b2, 1, vec![4, -1]).unwrap();
        assert_eq!(fiber_sum_t(&phi_push(&g0, &s, 2).unwrap(), 2).unwrap(), g0);
        let src = parse_graph("vertex v\nvertex w\nedge e v w\nedge l w w").unwrap();
        assert!(fiber_sum_t(&CylFun::constant(&src, 1), 1).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let b2 = bouquet(2).unwrap();
        let a = ind(&b2, "a");
        assert!(h0_equivalent(&a, &a, 1).unwrap());
        assert!(h0_equivalent(&a, &ind(&b2, "b"), 1).unwrap());
        let lp = bouquet(1).unwrap();
        let one = CylFun::constant(&lp, 1);
        assert!(!h0_equivalent(&one, &one.scale(2), 1).unwrap());
    }

    #[test]
    fn boundary_examples() {
        let b2 = bouquet(2).unwrap();
        let idx = path_index(&b2, 2);
        let (aa, ba) = (idx["a.a"], idx["b.a"]);
        let mut sym = RelFun::zero(&b2, 1, 2).unwrap();
        sym.add_at(aa, ba, 2).unwrap();
        sym.add_at(ba, aa, 2).unwrap();
        assert!(boundary_1(&sym).is_zero());
        let f = RelFun::basis(&b2, 1, 2, aa, ba).unwrap();
        let expected = ind(&b2, "b.a").sub(&ind(&b2, "a.a")).unwrap();
        assert_eq!(boundary_1(&f), expected);
        let diag = RelFun::basis(&b2, 1, 2, aa, aa).unwrap();
        assert!(boundary_1(&diag).is_zero());
        assert!(RelFun::basis(&b2, 1, 2, aa, idx["a.b"]).is_err());
    }

    #[test]
    fn sigma_star_rel_basis() {
        // the block (μ, ν) drops to (σμ, σν) at power n − 1
        let b2 = bouquet(2).unwrap();
        let idx3 = path_index(&b2, 3);
        let idx2 = path_index(&b2, 2);
        let f = RelFun::basis(&b2, 2, 3, idx3["a.b.a"], idx3["b.a.a"]).unwrap();
        let SigmaRelImage::Relation(r) = sigma_star_rel(&f).unwrap() else {
            panic!("power 2 drops to power 1");
        };
        assert_eq!(
            r,
            RelFun::basis(&b2, 1, 2, idx2["b.a"], idx2["a.a"]).unwrap()
        );
        // direct summation over prepended edges
        for (mu2, nu2) in RelFun::zero(&b2, 1, 2).unwrap().pairs() {
            let mut total = 0;
            for (mu3, nu3) in f.pairs() {
                let drop = |i: usize| idx2[&b2.path_table(3).get(i).tail(&b2, 2).label(&b2)];
                if drop(mu3) == mu2 && drop(nu3) == nu2 {
                    total += f.get(mu3, nu3);
                }
            }
            assert_eq!(r.get(mu2, nu2), total);
        }
        let z = RelFun::zero(&b2, 1, 2).unwrap();
        assert_eq!(
            sigma_star_rel(&z).unwrap(),
            SigmaRelImage::Diagonal(CylFun::zero(&b2, 1))
        );
    }

    #[test]
    fn commutation_examples() {
        let b2 = bouquet(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = RelFun::random(&b2, 2, 3, 5, &mut rng).unwrap();
            assert!(check_commutation(&f).unwrap());
        }
        assert!(check_commutation(&RelFun::zero(&b2, 1, 1).unwrap()).unwrap());
        let g = fixture();
        for (n, d) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let z = RelFun::zero(&g, n, d).unwrap();
            for (a, b) in z.pairs() {
                assert!(check_commutation(&RelFun::basis(&g, n, d, a, b).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn boundary_2_examples() {
        let b2 = bouquet(2).unwrap();
        let mut single = TwoChain::zero(&b2, 1, 2).unwrap();
        single.add_at((0, 2, 0), 1);
        let d2 = boundary_2(&single).unwrap();
        // δ(ν,λ) − δ(μ,λ) + δ(μ,ν) with μ = λ = aa, ν = ba
        assert_eq!(d2.get(2, 0), 1);
        assert_eq!(d2.get(0, 2), 1);
        assert_eq!(d2.get(0, 0), -1);
        assert!(boundary_1(&d2).is_zero());
        assert!(boundary_2(&TwoChain::zero(&b2, 1, 2).unwrap())
            .unwrap()
            .is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(boundary_2_composition_zero(&fixture(), 2, 3, 30, &mut rng).unwrap());
    }

    #[test]
    fn lattice_membership_examples() {
        let b2 = bouquet(2).unwrap();
        assert!(im_boundary_member(&CylFun::zero(&b2, 1), 1, 1).unwrap());
        let diff = ind(&b2, "b.a").sub(&ind(&b2, "a.a")).unwrap();
        assert!(im_boundary_member(&diff, 1, 2).unwrap());
        let lattice = BoundaryLattice::new(&b2, 1, 2).unwrap();
        let pre = lattice.preimage(&diff).unwrap().unwrap();
        assert_eq!(boundary_1(&pre), diff);
        assert!(lattice.contains_reduced(&lattice.reduce(&diff).unwrap()));
        assert!(!lattice.contains_reduced(&lattice.reduce(&ind(&b2, "a.a")).unwrap()));
        let lp = bouquet(1).unwrap();
        assert_eq!(
            im_boundary_depth(&CylFun::constant(&lp, 1), 1, 5).unwrap(),
            None
        );
    }

    #[test]
    fn limit_examples() {
        let b2 = bouquet(2).unwrap();
        let f = ind(&b2, "a.b");
        let a = LimitClass::new(1, f.clone());
        let b = LimitClass::new(2, f.sigma_star().unwrap());
        assert!(limit_equal(&a, &b).unwrap());
        let lp = bouquet(1).unwrap();
        let two = LimitClass::new(1, CylFun::constant(&lp, 2));
        let three = LimitClass::new(1, CylFun::constant(&lp, 3));
        assert!(!limit_equal(&two, &three).unwrap());
        let a = LimitClass::new(1, ind(&b2, "a"));
        let b = LimitClass::new(1, ind(&b2, "b"));
        assert!(limit_equal(&a, &b).unwrap());
        let s = limit_sigma_star(&a).unwrap();
        assert_eq!(s.element.coeffs(), &[1]);
    }

    #[test]
    fn limit_bound_matches_larger_horizons() {
        // equality decided at k = |E⁰| agrees with much longer horizons
        for seed in 0..60 {
            let g = random_graph(seed, 3, 5, true).unwrap();
            for code in 0..81 {
                let u: Vec<i64> = (0..3).map(|i| (code / 3i64.pow(i)) % 3 - 1).collect();
                let a = LimitClass::new(0, CylFun::from_coeffs(&g, 0, u).unwrap());
                let b = LimitClass::new(1, CylFun::zero(&g, 0));
                let decided = limit_equal(&a, &b).unwrap();
                assert_eq!(decided, limit_equal_after(&a, &b, 12).unwrap());
            }
        }
    }

    #[test]
    fn bounded_positivity() {
        let b2 = bouquet(2).unwrap();
        let a = LimitClass::new(0, CylFun::constant(&b2, 1));
        assert_eq!(limit_nonneg_within(&a, 3).unwrap(), Some(0));
        let neg = LimitClass::new(0, CylFun::constant(&b2, -1));
        assert_eq!(limit_nonneg_within(&neg, 3).unwrap(), None);
    }
}
