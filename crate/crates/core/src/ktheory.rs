//! K₀ of the finite truncations `R(σⁿ)` at depth `d`: exact rational
//! projections in the amplified block algebras, their per-class traces, and
//! the map ν onto H₀.
//!
//! The depth-`d` model of `C*(R(σⁿ))` is `⊕_C M_{|C|}` over the tail classes
//! `C ⊆ E^d`, so a projection is one symmetric idempotent block per class.
//! Murray–von Neumann equivalence is tested as equality of trace vectors.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use serde::Serialize;

use crate::dynamics::{CylFun, Section};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::homology::{tail_partition, H0Class, TailPartition};
use crate::linalg::{Rat, RatMatrix};

/// The finite equivalence relation on `E^d` given by equal
/// length-`(d − n)` tails.
#[derive(Debug, Clone)]
pub struct FinEqRel<'g> {
    graph: &'g Graph,
    partition: TailPartition,
}

pub fn truncation_rel(g: &Graph, n: usize, d: usize) -> Result<FinEqRel<'_>> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation needs n >= 1".into()));
    }
    g.require_no_sinks_or_sources()?;
    Ok(FinEqRel {
        graph: g,
        partition: tail_partition(g, n, d)?,
    })
}

impl<'g> FinEqRel<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn power(&self) -> usize {
        self.partition.power
    }

    pub fn depth(&self) -> usize {
        self.partition.depth
    }

    pub fn base_len(&self) -> usize {
        self.partition.class_of.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.partition.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.partition.class_of[x]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.partition.classes.iter().map(Vec::len).collect()
    }

    /// The shared tail of class `c`, a path of length `d − n`.
    pub fn tail(&self, c: usize) -> Path {
        self.graph
            .path_table(self.depth() - self.power())
            .get(self.partition.tail_index[c])
            .clone()
    }

    pub fn labels(&self) -> Vec<Vec<String>> {
        let table = self.graph.path_table(self.depth());
        self.classes()
            .iter()
            .map(|c| c.iter().map(|&x| table.get(x).label(self.graph)).collect())
            .collect()
    }

    fn same_shape(&self, p: &Projection) -> bool {
        p.sizes == self.class_sizes()
    }
}

/// An exact projection in `M_k(⊕_C M_{|C|})`. The block for class `C` has
/// size `k·|C|` and is indexed copy-major: `copy·|C| + position in C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    amplification: usize,
    sizes: Vec<usize>,
    blocks: Vec<RatMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRecord {
    pub class: usize,
    /// Row-major `[numerator, denominator]` pairs.
    pub entries: Vec<Vec<(i64, i64)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionRecord {
    pub amplification: usize,
    pub blocks: Vec<BlockRecord>,
}

impl Projection {
    pub fn new(rel: &FinEqRel<'_>, amplification: usize, blocks: Vec<RatMatrix>) -> Result<Self> {
        if amplification == 0 {
            return Err(Error::InvalidArgument("amplification must be >= 1".into()));
        }
        let sizes = rel.class_sizes();
        if blocks.len() != sizes.len() {
            return Err(Error::Dimension(format!(
                "{} blocks for {} classes",
                blocks.len(),
                sizes.len()
            )));
        }
        for (c, (b, &s)) in blocks.iter().zip(&sizes).enumerate() {
            let dim = amplification * s;
            if b.rows() != dim || b.cols() != dim {
                return Err(Error::Dimension(format!(
                    "block {c} is {}x{}, expected {dim}x{dim}",
                    b.rows(),
                    b.cols()
                )));
            }
            if !b.is_symmetric() {
                return Err(Error::NotProjection(format!("block {c} is not symmetric")));
            }
            if &b.mul_mat(b)? != b {
                return Err(Error::NotProjection(format!("block {c} is not idempotent")));
            }
        }
        Ok(Projection {
            amplification,
            sizes,
            blocks,
        })
    }

    pub fn zero(rel: &FinEqRel<'_>, amplification: usize) -> Self {
        let sizes = rel.class_sizes();
        let blocks = sizes
            .iter()
            .map(|&s| RatMatrix::zeros(amplification * s, amplification * s))
            .collect();
        Projection {
            amplification: amplification.max(1),
            sizes,
            blocks,
        }
    }

    pub fn identity(rel: &FinEqRel<'_>) -> Self {
        let sizes = rel.class_sizes();
        let blocks = sizes.iter().map(|&s| RatMatrix::identity(s)).collect();
        Projection {
            amplification: 1,
            sizes,
            blocks,
        }
    }

    pub fn amplification(&self) -> usize {
        self.amplification
    }

    pub fn blocks(&self) -> &[RatMatrix] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    /// Exact trace of each block; each must be a non-negative integer.
    pub fn class_traces(&self) -> Result<Vec<i64>> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(c, b)| {
                let t = b.trace();
                if !t.is_integer() || t.is_negative() {
                    return Err(Error::NonIntegerTrace(format!("block {c} has trace {t}")));
                }
                t.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Internal("trace overflows i64".into()))
            })
            .collect()
    }

    /// Per-block rank by exact elimination, independent of the trace.
    pub fn rank_vector(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.rank() as i64).collect()
    }

    /// Sum of squared entries per block; zero exactly when the block is.
    pub fn block_norms(&self) -> Vec<Rat> {
        self.blocks
            .iter()
            .map(|b| {
                (0..b.rows())
                    .flat_map(|i| b.row(i).iter())
                    .fold(Rat::zero(), |acc, x| acc + x * x)
            })
            .collect()
    }

    pub fn to_record(&self) -> Result<ProjectionRecord> {
        let pair = |x: &Rat| -> Result<(i64, i64)> {
            match (x.numer().to_i64(), x.denom().to_i64()) {
                (Some(n), Some(d)) => Ok((n, d)),
                _ => Err(Error::Internal("projection entry overflows i64".into())),
            }
        };
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(class, b)| {
                let entries = (0..b.rows())
                    .map(|i| b.row(i).iter().map(pair).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(BlockRecord { class, entries })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjectionRecord {
            amplification: self.amplification,
            blocks,
        })
    }
}

/// `p ⊕ q` in `M_{k+l}`: per class, `p`'s copies first, then `q`'s.
pub fn direct_sum(p: &Projection, q: &Projection) -> Result<Projection> {
    if p.sizes != q.sizes {
        return Err(Error::InvalidArgument(
            "projections over different relations".into(),
        ));
    }
    let blocks = p
        .blocks
        .iter()
        .zip(&q.blocks)
        .map(|(a, b)| {
            let n = a.rows() + b.rows();
            let mut m = RatMatrix::zeros(n, n);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m[(i, j)] = a[(i, j)].clone();
                }
            }
            let o = a.rows();
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(o + i, o + j)] = b[(i, j)].clone();
                }
            }
            m
        })
        .collect();
    Ok(Projection {
        amplification: p.amplification + q.amplification,
        sizes: p.sizes.clone(),
        blocks,
    })
}

/// Diagonal 0/1 projection onto the base points in `v`.
pub fn indicator_projection(rel: &FinEqRel<'_>, v: &[usize]) -> Result<Projection> {
    let mut p = Projection::zero(rel, 1);
    for &x in v {
        if x >= rel.base_len() {
            return Err(Error::InvalidArgument(format!(
                "base point {x} out of range"
            )));
        }
        let c = rel.class_of(x);
        let pos = rel.classes()[c]
            .iter()
            .position(|&y| y == x)
            .expect("member of its class");
        p.blocks[c][(pos, pos)] = Rat::one();
    }
    Ok(p)
}

/// Rank vector over the classes of a relation; arbitrary signs stand for
/// formal differences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K0Vector(pub Vec<i64>);

impl K0Vector {
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &K0Vector) -> Result<K0Vector> {
        if self.0.len() != other.0.len() {
            return Err(Error::Dimension("K0 vectors of different length".into()));
        }
        Ok(K0Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }
}

pub fn k0_class(p: &Projection) -> Result<K0Vector> {
    p.class_traces().map(K0Vector)
}

pub fn k0_equivalent(p: &Projection, q: &Projection) -> Result<bool> {
    if p.sizes != q.sizes {
        return Err(Error::InvalidArgument(
            "projections over different relations".into(),
        ));
    }
    Ok(k0_class(p)? == k0_class(q)?)
}

/// One chosen base point per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representatives(pub Vec<usize>);

/// Least member of each class.
pub fn least_representatives(rel: &FinEqRel<'_>) -> Representatives {
    Representatives(rel.classes().iter().map(|c| c[0]).collect())
}

/// For the class with tail `τ`, the point `φⁿ(τ) = e_n⋯e_1 τ`.
pub fn section_representatives(rel: &FinEqRel<'_>, section: &Section) -> Result<Representatives> {
    let g = rel.graph;
    let table = g.path_table(rel.depth());
    let reps = (0..rel.classes().len())
        .map(|c| {
            let tau = rel.tail(c);
            let x = section
                .chain(g, tau.range(), rel.power())
                .concat(&tau)
                .ok_or_else(|| Error::Internal("section chain does not compose".into()))?;
            let i = table
                .index_of(&x)
                .ok_or_else(|| Error::Internal("representative is not a path".into()))?;
            if rel.class_of(i) != c {
                return Err(Error::Internal("representative outside its class".into()));
            }
            Ok(i)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Representatives(reps))
}

/// `tr_φ(p)` as a depth-`d` function: the class trace placed at the chosen
/// representative of each class.
pub fn trace_phi<'g>(
    rel: &FinEqRel<'g>,
    p: &Projection,
    reps: &Representatives,
) -> Result<CylFun<'g>> {
    if !rel.same_shape(p) || reps.0.len() != p.sizes.len() {
        return Err(Error::InvalidArgument(
            "projection does not match relation".into(),
        ));
    }
    let traces = p.class_traces()?;
    let mut coeffs = vec![0i64; rel.base_len()];
    for (c, (&x, t)) in reps.0.iter().zip(traces).enumerate() {
        if rel.class_of(x) != c {
            return Err(Error::InvalidArgument(format!(
                "representative {x} is not in class {c}"
            )));
        }
        coeffs[x] = t;
    }
    CylFun::from_coeffs(rel.graph, rel.depth(), coeffs)
}

/// ν: the rank vector read at the class tails as a depth-`(d − n)` function.
pub fn nu<'g>(rel: &FinEqRel<'g>, v: &K0Vector) -> Result<H0Class<'g>> {
    if v.0.len() != rel.classes().len() {
        return Err(Error::Dimension("K0 vector does not match relation".into()));
    }
    let g = rel.graph;
    let mut coeffs = vec![0i64; g.path_table(rel.depth() - rel.power()).len()];
    for (c, &x) in v.0.iter().enumerate() {
        coeffs[rel.partition.tail_index[c]] += x;
    }
    Ok(H0Class {
        level: rel.power(),
        rep: CylFun::from_coeffs(g, rel.depth() - rel.power(), coeffs)?,
    })
}

/// Checks that singleton indicators give the standard basis vector of each
/// class, so indicator classes generate the positive cone.
pub fn cone_generated_by_indicators(rel: &FinEqRel<'_>) -> Result<bool> {
    let classes = rel.classes().len();
    if k0_class(&indicator_projection(rel, &[])?)? != K0Vector(vec![0; classes]) {
        return Ok(false);
    }
    for (c, members) in rel.classes().iter().enumerate() {
        let mut e = vec![0; classes];
        e[c] = 1;
        if k0_class(&indicator_projection(rel, &[members[0]])?)?.0 != e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subsets `V₁, V₂, …` whose indicator classes sum to `target`, filling each
/// class from its least members.
pub fn indicator_decomposition(rel: &FinEqRel<'_>, target: &K0Vector) -> Result<Vec<Vec<usize>>> {
    if !target.is_positive() || target.0.len() != rel.classes().len() {
        return Err(Error::InvalidArgument(
            "target must be a non-negative vector over the classes".into(),
        ));
    }
    let mut remaining: Vec<usize> = target.0.iter().map(|&x| x as usize).collect();
    let mut out = Vec::new();
    while remaining.iter().any(|&r| r > 0) {
        let mut v = Vec::new();
        for (c, members) in rel.classes().iter().enumerate() {
            let take = remaining[c].min(members.len());
            v.extend_from_slice(&members[..take]);
            remaining[c] -= take;
        }
        v.sort_unstable();
        out.push(v);
    }
    Ok(out)
}

/// Random subset of the base.
pub fn random_subset<R: Rng>(rel: &FinEqRel<'_>, rng: &mut R) -> Vec<usize> {
    (0..rel.base_len()).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Families of exact random projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionFamily {
    /// A 0/1 diagonal conjugated by a permutation.
    PermutedDiagonal,
    /// `vvᵀ / |v|²` for an integer vector `v ≠ 0`.
    RankOne,
    /// Orthogonal projection onto the span of random integer columns.
    Span,
}

fn random_block<R: Rng>(dim: usize, family: ProjectionFamily, rng: &mut R) -> RatMatrix {
    match family {
        ProjectionFamily::PermutedDiagonal => {
            let mut perm: Vec<usize> = (0..dim).collect();
            perm.shuffle(rng);
            let mut m = RatMatrix::zeros(dim, dim);
            for &i in &perm {
                if rng.gen_bool(0.5) {
                    m[(i, i)] = Rat::one();
                }
            }
            m
        }
        ProjectionFamily::RankOne => {
            let mut v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if v.iter().all(|&x| x == 0) {
                v[rng.gen_range(0..dim)] = 1;
            }
            span_projection(&[v])
        }
        ProjectionFamily::Span => {
            let cols = rng.gen_range(0..=dim);
            let vs: Vec<Vec<i64>> = (0..cols)
                .map(|_| (0..dim).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            if vs.is_empty() {
                return RatMatrix::zeros(dim, dim);
            }
            span_projection(&vs)
        }
    }
}

/// Orthogonal projection onto `span(vs)`, via Gram–Schmidt over ℚ.
fn span_projection(vs: &[Vec<i64>]) -> RatMatrix {
    let dim = vs[0].len();
    let dot = |a: &[Rat], b: &[Rat]| a.iter().zip(b).fold(Rat::zero(), |s, (x, y)| s + x * y);
    let mut basis: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for v in vs {
        let mut u: Vec<Rat> = v
            .iter()
            .map(|&x| Rat::from_integer(BigInt::from(x)))
            .collect();
        for (b, nb) in &basis {
            let c = dot(&u, b) / nb;
            for (ui, bi) in u.iter_mut().zip(b) {
                *ui -= &c * bi;
            }
        }
        let n = dot(&u, &u);
        if !n.is_zero() {
            basis.push((u, n));
        }
    }
    let mut m = RatMatrix::zeros(dim, dim);
    for (b, nb) in &basis {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += &b[i] * &b[j] / nb;
            }
        }
    }
    m
}

/// Random validated projection with amplification in `1..=max_amp`.
pub fn random_projection<R: Rng>(
    rel: &FinEqRel<'_>,
    max_amp: usize,
    rng: &mut R,
) -> Result<Projection> {
    let k = rng.gen_range(1..=max_amp.max(1));
    let families = [
        ProjectionFamily::PermutedDiagonal,
        ProjectionFamily::RankOne,
        ProjectionFamily::Span,
    ];
    let blocks = rel
        .class_sizes()
        .iter()
        .map(|&s| {
            let family = *families.iter().choose(rng).expect("nonempty");
            random_block(k * s, family, rng)
        })
        .collect();
    Projection::new(rel, k, blocks)
}
