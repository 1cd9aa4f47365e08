//! Integer functions on the infinite path space, the shift's transfer
//! operator `σ*`, and sections of the shift.
//!
//! For a finite graph the infinite path space is compact, so every
//! continuous integer function is constant on the cylinders `Z(μ)` of some
//! fixed depth `d`. A [`CylFun`] stores one coefficient per path in `E^d`
//! (depth 0 means one coefficient per vertex cylinder `Z(v)`). Refining to a
//! larger depth copies each coefficient onto the extensions of its path and
//! leaves the function unchanged.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path};
use crate::linalg::Matrix;

#[derive(Clone)]
pub struct CylFun<'g> {
    graph: &'g Graph,
    depth: usize,
    coeffs: Vec<i64>,
}

impl fmt::Debug for CylFun<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CylFun(depth {}, {:?})", self.depth, self.coeffs)
    }
}

/// JSON form `{depth, paths, coeffs}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylFunRecord {
    pub depth: usize,
    pub paths: Vec<String>,
    pub coeffs: Vec<i64>,
}

impl<'g> CylFun<'g> {
    pub fn zero(graph: &'g Graph, depth: usize) -> Self {
        let len = graph.path_table(depth).len();
        CylFun {
            graph,
            depth,
            coeffs: vec![0; len],
        }
    }

    pub fn from_coeffs(graph: &'g Graph, depth: usize, coeffs: Vec<i64>) -> Result<Self> {
        let len = graph.path_table(depth).len();
        if coeffs.len() != len {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} paths of length {}",
                coeffs.len(),
                len,
                depth
            )));
        }
        Ok(CylFun {
            graph,
            depth,
            coeffs,
        })
    }

    /// `1_{Z(μ)}` at depth `|μ|`.
    pub fn indicator(graph: &'g Graph, mu: &Path) -> Result<Self> {
        let table = graph.path_table(mu.len());
        let i = table
            .index_of(mu)
            .ok_or_else(|| Error::InvalidPath(format!("{mu:?} is not a path of this graph")))?;
        let mut f = CylFun::zero(graph, mu.len());
        f.coeffs[i] = 1;
        Ok(f)
    }

    /// The constant function `c`, at depth 0.
    pub fn constant(graph: &'g Graph, c: i64) -> Self {
        CylFun {
            graph,
            depth: 0,
            coeffs: vec![c; graph.vertex_count()],
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, mu: &Path) -> Option<i64> {
        self.graph
            .path_table(self.depth)
            .index_of(mu)
            .map(|i| self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Rewrites the function at depth `target ≥ depth`; requires a graph
    /// without sources so every path extends.
    pub fn refine(&self, target: usize) -> Result<Self> {
        if target < self.depth {
            return Err(Error::DepthBelow {
                requested: target,
                current: self.depth,
            });
        }
        if target == self.depth {
            return Ok(self.clone());
        }
        self.graph.require_no_sources()?;
        let g = self.graph;
        let table = g.path_table(self.depth);
        let fine = g.path_table(target);
        let coeffs = fine
            .paths()
            .iter()
            .map(|p| {
                let i = table
                    .index_of(&p.prefix(g, self.depth))
                    .expect("prefix of a path is a path");
                self.coeffs[i]
            })
            .collect();
        Ok(CylFun {
            graph: g,
            depth: target,
            coeffs,
        })
    }

    fn check_same_graph(&self, other: &CylFun<'_>) -> Result<()> {
        if std::ptr::eq(self.graph, other.graph) || self.graph == other.graph {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    /// Both functions at their common (larger) depth.
    pub fn align(&self, other: &CylFun<'g>) -> Result<(CylFun<'g>, CylFun<'g>)> {
        self.check_same_graph(other)?;
        let d = self.depth.max(other.depth);
        Ok((self.refine(d)?, other.refine(d)?))
    }

    fn zip_with(&self, other: &CylFun<'g>, op: impl Fn(i64, i64) -> i64) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| op(x, y))
            .collect();
        Ok(CylFun {
            graph: a.graph,
            depth: a.depth,
            coeffs,
        })
    }

    pub fn add(&self, other: &CylFun<'g>) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &CylFun<'g>) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn scale(&self, c: i64) -> Self {
        CylFun {
            graph: self.graph,
            depth: self.depth,
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    /// Equality as functions on the infinite path space.
    pub fn same_function(&self, other: &CylFun<'g>) -> Result<bool> {
        let (a, b) = self.align(other)?;
        Ok(a.coeffs == b.coeffs)
    }

    /// `σ*(f)(y) = Σ_{σ(x)=y} f(x)`.
    ///
    /// At depth `d ≥ 1` the result has depth `d − 1` with
    /// `coeff(ν) = Σ_{s(e)=r(ν)} f(eν)`; at depth 0 it is the transfer
    /// matrix applied to the vertex coefficients.
    pub fn sigma_star(&self) -> Result<Self> {
        let g = self.graph;
        g.require_no_sinks()?;
        if self.depth == 0 {
            let mut out = vec![0; g.vertex_count()];
            for e in g.edges() {
                out[e.source] += self.coeffs[e.range];
            }
            return Ok(CylFun {
                graph: g,
                depth: 0,
                coeffs: out,
            });
        }
        let d = self.depth;
        let table = g.path_table(d);
        let shorter = g.path_table(d - 1);
        let mut out = vec![0; shorter.len()];
        for (p, &c) in table.paths().iter().zip(&self.coeffs) {
            if c == 0 {
                continue;
            }
            let nu = p.tail(g, d - 1);
            out[shorter.index_of(&nu).expect("tail of a path is a path")] += c;
        }
        Ok(CylFun {
            graph: g,
            depth: d - 1,
            coeffs: out,
        })
    }

    pub fn sigma_star_pow(&self, k: usize) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..k {
            f = f.sigma_star()?;
        }
        Ok(f)
    }

    /// `σ*(f) − f`, compared at the depth of `f`.
    pub fn sigma_star_minus_id(&self) -> Result<Self> {
        self.sigma_star()?.sub(self)
    }

    pub fn to_record(&self) -> CylFunRecord {
        let table = self.graph.path_table(self.depth);
        CylFunRecord {
            depth: self.depth,
            paths: table.paths().iter().map(|p| p.label(self.graph)).collect(),
            coeffs: self.coeffs.clone(),
        }
    }
}

impl PartialEq for CylFun<'_> {
    fn eq(&self, other: &Self) -> bool {
        if self.depth == other.depth {
            return self.check_same_graph(other).is_ok() && self.coeffs == other.coeffs;
        }
        self.same_function(other).unwrap_or(false)
    }
}

/// Parses `label=coeff` terms separated by commas or whitespace into a
/// function at `depth`; each label is a path of length at most `depth`
/// (dot-joined edge ids, or a vertex id). Repeated labels add up.
pub fn parse_function<'g>(graph: &'g Graph, depth: usize, text: &str) -> Result<CylFun<'g>> {
    let mut f = CylFun::zero(graph, depth);
    for term in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if term.is_empty() {
            continue;
        }
        let (label, value) = term.split_once('=').ok_or_else(|| Error::Malformed {
            line: 1,
            token: term.to_string(),
            reason: "expected `path=coefficient`".into(),
        })?;
        let c: i64 = value.parse().map_err(|_| Error::Malformed {
            line: 1,
            token: value.to_string(),
            reason: "coefficient is not an integer".into(),
        })?;
        let mu = graph.parse_path(label)?;
        if mu.len() > depth {
            return Err(Error::InvalidArgument(format!(
                "path `{label}` is longer than depth {depth}"
            )));
        }
        let term = CylFun::indicator(graph, &mu)?.scale(c).refine(depth)?;
        for (x, y) in f.coeffs.iter_mut().zip(&term.coeffs) {
            *x = x
                .checked_add(*y)
                .ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?;
        }
    }
    Ok(f)
}

/// Vertex-level form of `σ*`: `B[w][v] = #{e : s(e) = w, r(e) = v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    matrix: Matrix<i64>,
}

impl TransferMatrix {
    pub fn of(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut matrix = Matrix::zeros(n, n);
        for e in g.edges() {
            matrix[(e.source, e.range)] += 1;
        }
        TransferMatrix { matrix }
    }

    pub fn matrix(&self) -> &Matrix<i64> {
        &self.matrix
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.mul_vec(v).expect("vertex-indexed vector")
    }

    /// Column sums: the number of edges with each range.
    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.matrix.cols())
            .map(|j| (0..self.matrix.rows()).map(|i| self.matrix[(i, j)]).sum())
            .collect()
    }
}

pub fn transfer_matrix(g: &Graph) -> TransferMatrix {
    TransferMatrix::of(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionPolicy {
    FirstEdge,
    LastEdge,
}

/// A right inverse of the shift on vertex cylinders: one edge `e_v` with
/// `s(e_v) = v` per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    edge_for: Vec<usize>,
}

impl Section {
    pub fn edge_for(&self, v: usize) -> usize {
        self.edge_for[v]
    }

    /// The path `e_n ⋯ e_1` with `s(e_1) = v`, each `e_{i+1} = φ(r(e_i))`.
    pub fn chain(&self, g: &Graph, v: usize, n: usize) -> Path {
        let mut rev = Vec::with_capacity(n);
        let mut w = v;
        for _ in 0..n {
            let e = self.edge_for[w];
            rev.push(e);
            w = g.edge(e).range;
        }
        if n == 0 {
            return Path::vertex(v);
        }
        rev.reverse();
        Path::from_edges(g, rev).expect("section chains compose")
    }
}

pub fn make_section(g: &Graph, policy: SectionPolicy) -> Result<Section> {
    g.require_no_sinks()?;
    let edge_for = (0..g.vertex_count())
        .map(|v| {
            let es = g.edges_with_source(v);
            match policy {
                SectionPolicy::FirstEdge => es[0],
                SectionPolicy::LastEdge => es[es.len() - 1],
            }
        })
        .collect();
    Ok(Section { edge_for })
}

/// Lifts `f` at depth `k` to depth `k + n` along the section: the value at
/// `ν` moves to `φⁿ(ν) = e_n⋯e_1 ν` and every other path gets 0. Fiber
/// summation over `σⁿ` undoes this.
pub fn phi_push<'g>(f: &CylFun<'g>, section: &Section, n: usize) -> Result<CylFun<'g>> {
    let g = f.graph();
    g.require_no_sinks()?;
    let k = f.depth();
    let src = g.path_table(k);
    let dst = g.path_table(k + n);
    let mut out = CylFun::zero(g, k + n);
    for (nu, &c) in src.paths().iter().zip(f.coeffs()) {
        let lifted = section
            .chain(g, nu.range(), n)
            .concat(nu)
            .expect("chain ends at r(ν)");
        out.coeffs[dst.index_of(&lifted).expect("lifted path exists")] = c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle_graph, parse_graph, random_graph};
    use proptest::prelude::*;

    fn fixture() -> Graph {
        parse_graph("vertex v\nvertex w\nedge e v v\nedge g w v\nedge h v w\n").unwrap()
    }

    /// σ*(f) evaluated from the definition: for each path y of length
    /// d − 1 sum f over the preimages e·y.
    fn sigma_star_pointwise(f: &CylFun<'_>) -> Vec<i64> {
        let g = f.graph();
        g.enumerate_paths(f.depth() - 1)
            .iter()
            .map(|y| {
                (0..g.edge_count())
                    .filter_map(|e| Path::from_edges(g, vec![e]).unwrap().concat(y))
                    .map(|x| f.coeff(&x).unwrap())
                    .sum()
            })
            .collect()
    }

    #[test]
    fn indicators() {
        let lp = bouquet(1).unwrap();
        let f = CylFun::indicator(&lp, &lp.parse_path("a").unwrap()).unwrap();
        assert_eq!((f.depth(), f.coeffs()), (1, &[1][..]));
        let b2 = bouquet(2).unwrap();
        let f = CylFun::indicator(&b2, &b2.parse_path("a").unwrap()).unwrap();
        assert_eq!(f.coeffs(), &[1, 0]);
        let g = fixture();
        let f = CylFun::indicator(&g, &Path::vertex(0)).unwrap();
        assert_eq!((f.depth(), f.coeffs()), (0, &[1, 0][..]));
        assert!(CylFun::indicator(&g, &Path::vertex(9)).is_err());
    }

    #[test]
    fn refinement() {
        let lp = bouquet(1).unwrap();
        let f = CylFun::from_coeffs(&lp, 1, vec![1]).unwrap();
        assert_eq!(f.refine(3).unwrap().coeffs(), &[1]);
        let b2 = bouquet(2).unwrap();
        let a = CylFun::indicator(&b2, &b2.parse_path("a").unwrap()).unwrap();
        assert_eq!(a.refine(2).unwrap().coeffs(), &[1, 1, 0, 0]);
        assert_eq!(a.refine(1).unwrap().coeffs(), a.coeffs());
        assert!(a.refine(0).is_err());
        let with_source = parse_graph("vertex v\nvertex w\nedge e v w").unwrap();
        let f = CylFun::constant(&with_source, 1);
        assert!(matches!(f.refine(1), Err(Error::Sources(_))));
    }

    #[test]
    fn sigma_star_examples() {
        let lp = bouquet(1).unwrap();
        let e = CylFun::indicator(&lp, &lp.parse_path("a").unwrap()).unwrap();
        assert_eq!(e.sigma_star().unwrap(), CylFun::constant(&lp, 1));

        let b2 = bouquet(2).unwrap();
        let one = CylFun::constant(&b2, 1);
        assert_eq!(one.sigma_star().unwrap().coeffs(), &[2]);

        let sink = parse_graph("vertex v\nvertex w\nedge e w v\nedge l v v").unwrap();
        assert!(matches!(
            CylFun::constant(&sink, 1).sigma_star(),
            Err(Error::Sinks(_))
        ));
    }

    #[test]
    fn push_down_law_on_fixture() {
        let g = fixture();
        for d in 0..=3 {
            for mu in g.enumerate_paths(d) {
                let lhs = CylFun::indicator(&g, &mu)
                    .unwrap()
                    .sigma_star_pow(d + 1)
                    .unwrap();
                let mut rhs = CylFun::zero(&g, 0);
                for &e in g.edges_with_range(mu.source()) {
                    rhs = rhs
                        .add(&CylFun::indicator(&g, &Path::vertex(g.edge(e).source)).unwrap())
                        .unwrap();
                }
                assert_eq!(lhs.coeffs(), rhs.coeffs(), "{}", mu.label(&g));
            }
        }
    }

    #[test]
    fn transfer_matrices() {
        assert_eq!(
            transfer_matrix(&bouquet(1).unwrap()).matrix().to_rows(),
            vec![vec![1]]
        );
        for n in 1..5 {
            assert_eq!(
                transfer_matrix(&bouquet(n).unwrap()).matrix().to_rows(),
                vec![vec![n as i64]]
            );
        }
        let b = transfer_matrix(&fixture());
        assert_eq!(b.matrix().to_rows(), vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(b.column_sums(), vec![2, 1]);
        let c3 = transfer_matrix(&cycle_graph(3).unwrap());
        assert!(c3.column_sums().iter().all(|&s| s == 1));
    }

    #[test]
    fn sections() {
        let lp = bouquet(1).unwrap();
        assert_eq!(
            make_section(&lp, SectionPolicy::FirstEdge)
                .unwrap()
                .edge_for(0),
            0
        );
        let b2 = bouquet(2).unwrap();
        assert_eq!(
            make_section(&b2, SectionPolicy::FirstEdge)
                .unwrap()
                .edge_for(0),
            0
        );
        assert_eq!(
            make_section(&b2, SectionPolicy::LastEdge)
                .unwrap()
                .edge_for(0),
            1
        );
        let c2 = cycle_graph(2).unwrap();
        let s = make_section(&c2, SectionPolicy::FirstEdge).unwrap();
        for v in 0..2 {
            assert_eq!(c2.edge(s.edge_for(v)).source, v);
        }
        let sink = parse_graph("vertex v\nvertex w\nedge e w v\nedge l v v").unwrap();
        assert!(make_section(&sink, SectionPolicy::FirstEdge).is_err());
    }

    #[test]
    fn phi_push_examples() {
        let g = fixture();
        let s = make_section(&g, SectionPolicy::FirstEdge).unwrap();
        for v in 0..2 {
            let f = CylFun::indicator(&g, &Path::vertex(v)).unwrap();
            let pushed = phi_push(&f, &s, 1).unwrap();
            let expected =
                CylFun::indicator(&g, &Path::from_edges(&g, vec![s.edge_for(v)]).unwrap()).unwrap();
            assert_eq!(pushed.coeffs(), expected.coeffs());
        }
        let b2 = bouquet(2).unwrap();
        let s = make_section(&b2, SectionPolicy::FirstEdge).unwrap();
        let pushed = phi_push(&CylFun::constant(&b2, 3), &s, 2).unwrap();
        assert_eq!(
            pushed,
            CylFun::indicator(&b2, &b2.parse_path("a.a").unwrap())
                .unwrap()
                .scale(3)
        );
        // fiber summation over σ² recovers the input
        assert_eq!(pushed.sigma_star_pow(2).unwrap().coeffs(), &[3]);
        assert!(phi_push(&CylFun::zero(&b2, 1), &s, 2).unwrap().is_zero());
    }

    #[test]
    fn function_parser() {
        let b2 = bouquet(2).unwrap();
        let f = parse_function(&b2, 2, "a.a=1, a.b=-2 b=3").unwrap();
        assert_eq!(f.coeffs(), &[1, -2, 3, 3]);
        assert_eq!(parse_function(&b2, 1, "").unwrap(), CylFun::zero(&b2, 1));
        assert!(parse_function(&b2, 1, "a.a=1").is_err());
        assert!(parse_function(&b2, 1, "a=x").is_err());
        assert!(parse_function(&b2, 1, "a").is_err());
        assert!(parse_function(&b2, 1, "c=1").is_err());
        assert_eq!(parse_function(&b2, 0, "v=2").unwrap().coeffs(), &[2]);
    }

    fn graph_and_function() -> impl Strategy<Value = (u64, usize, usize, usize, Vec<i64>)> {
        (0u64..500, 1usize..=4, 0usize..=6, 0usize..=3)
            .prop_map(|(seed, v, extra, d)| (seed, v, v + extra, d))
            .prop_flat_map(|(seed, v, e, d)| {
                (
                    Just(seed),
                    Just(v),
                    Just(e),
                    Just(d),
                    prop::collection::vec(-3i64..=3, 64),
                )
            })
    }

    proptest! {
        #[test]
        fn sigma_star_properties((seed, v, e, d, raw) in graph_and_function()) {
            let g = random_graph(seed, v, e, true).unwrap();
            let n = g.path_table(d).len();
            prop_assume!(n <= raw.len() / 2);
            let f = CylFun::from_coeffs(&g, d, raw[..n].to_vec()).unwrap();
            let h = CylFun::from_coeffs(&g, d, raw[n..2 * n].to_vec()).unwrap();
            let sf = f.sigma_star().unwrap();

            // linearity
            prop_assert_eq!(f.add(&h).unwrap().sigma_star().unwrap(), sf.add(&h.sigma_star().unwrap()).unwrap());
            prop_assert_eq!(f.scale(-3).sigma_star().unwrap(), sf.scale(-3));

            // refinement compatibility
            let target = d.max(1) + 1;
            prop_assert_eq!(
                f.refine(target).unwrap().sigma_star().unwrap().coeffs().to_vec(),
                sf.refine(target - 1).unwrap().coeffs().to_vec()
            );

            // pointwise definition
            if d >= 1 {
                prop_assert_eq!(sf.coeffs(), &sigma_star_pointwise(&f)[..]);
            } else {
                prop_assert_eq!(sf.coeffs(), &transfer_matrix(&g).apply(f.coeffs())[..]);
            }

            // positivity
            let abs = CylFun::from_coeffs(&g, d, f.coeffs().iter().map(|x| x.abs()).collect()).unwrap();
            let s_abs = abs.sigma_star().unwrap();
            prop_assert!(s_abs.is_nonneg());
            prop_assert_eq!(abs.is_zero(), s_abs.is_zero());

            // phi_push is a right inverse of the fiber sum
            let s = make_section(&g, SectionPolicy::LastEdge).unwrap();
            let pushed = phi_push(&f, &s, 2).unwrap();
            prop_assert_eq!(pushed.sigma_star_pow(2).unwrap().coeffs().to_vec(), f.coeffs().to_vec());
            prop_assert_eq!(phi_push(&abs, &s, 1).unwrap().is_nonneg(), true);
        }

    }

    #[test]
    fn monotone_chains() {
        // every depth-0 f in [−2, 2]^V with σ*(f) ≥ f keeps growing
        for seed in 0..40 {
            let g = random_graph(seed, 3, 5, true).unwrap();
            for code in 0..125 {
                let coeffs = (0..3).map(|i| (code / 5i64.pow(i)) % 5 - 2).collect();
                let f = CylFun::from_coeffs(&g, 0, coeffs).unwrap();
                if !f.sigma_star_minus_id().unwrap().is_nonneg() {
                    continue;
                }
                let mut prev = f;
                for _ in 1..=4 {
                    let next = prev.sigma_star().unwrap();
                    assert!(next.sub(&prev).unwrap().is_nonneg());
                    prev = next;
                }
            }
        }
    }
}
