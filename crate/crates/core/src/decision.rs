//! AF-embeddability of the graph-shift groupoid algebra.
//!
//! The decision is taken at the vertex level: the algebra fails to be AF
//! embeddable exactly when some integer vertex vector `f` has `(B − I)f ≥ 0`
//! and `(B − I)f ≠ 0`, where `B` is the transfer matrix. A cylinder witness
//! `f` at depth `d` pushes down to the vertex witness `σ*ᵈ f`, since `σ*`
//! keeps non-negative non-zero functions non-negative and non-zero.
//!
//! Non-AFE verdicts carry a verified integer witness; AFE verdicts carry a
//! strictly positive `y` with `yᵀ(B − I) = 0`, which rules out every witness.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::{CylFun, CylFunRecord, TransferMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{
    clear_denominators, feasible_nonneg_strict, positive_left_kernel, primitive, to_i64_vec,
    IntMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "AFE")]
    Afe,
    #[serde(rename = "NotAFE")]
    NotAfe,
    /// No witness inside the searched box; never a final answer.
    #[serde(rename = "AFE-within-bounds")]
    AfeWithinBounds,
}

impl Verdict {
    pub fn is_not_afe(self) -> bool {
        self == Verdict::NotAfe
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Afe => "AFE",
            Verdict::NotAfe => "NotAFE",
            Verdict::AfeWithinBounds => "AFE-within-bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Lp,
    Brute,
    GraphCondition,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub lp: Option<Verdict>,
    pub brute: Option<Verdict>,
    pub graph_condition: Option<Verdict>,
    /// `lp = NotAFE ⟺ some cycle has an entrance`.
    pub lp_matches_graph_condition: Option<bool>,
    /// `brute = NotAFE ⟹ lp = NotAFE`.
    pub brute_implies_lp: Option<bool>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<i64>>,
    pub method: Method,
    pub checks: Checks,
    /// Strictly positive `y` with `yᵀ(Bⁿ − I) = 0`, backing an AFE verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<i64>>,
    /// The cylinder-level function a brute-force witness came from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cylinder_witness: Option<CylFunRecord>,
    pub bounded: bool,
}

/// Whether `(M − I)f ≥ 0` and `(M − I)f ≠ 0`.
pub fn verify_witness(m: &IntMatrix, f: &[i64]) -> bool {
    let f: Vec<BigInt> = f.iter().map(|&x| BigInt::from(x)).collect();
    let Ok(h) = m.minus_identity().and_then(|a| a.mul_vec(&f)) else {
        return false;
    };
    h.iter().all(|x| !x.is_negative()) && h.iter().any(|x| !x.is_zero())
}

fn transfer_big(g: &Graph) -> IntMatrix {
    TransferMatrix::of(g).matrix().to_big()
}

/// A witness among the unit vectors, when one is.
fn unit_witness(m: &IntMatrix) -> Option<Vec<i64>> {
    (0..m.rows()).find_map(|v| {
        let mut f = vec![0; m.rows()];
        f[v] = 1;
        verify_witness(m, &f).then_some(f)
    })
}

fn lp_witness(a: &IntMatrix) -> Result<Option<Vec<i64>>> {
    for j in 0..a.rows() {
        if let Some(f) = feasible_nonneg_strict(a, j) {
            let f = primitive(&clear_denominators(&f));
            return to_i64_vec(&f)
                .map(Some)
                .ok_or_else(|| Error::Internal("witness overflows i64".into()));
        }
    }
    Ok(None)
}

fn decide_matrix(m: &IntMatrix) -> Result<Decision> {
    let a = m.minus_identity()?;
    // the LP decides; a unit-vector witness is preferred for reporting
    if let Some(f) = lp_witness(&a)? {
        let f = unit_witness(m).unwrap_or(f);
        if !verify_witness(m, &f) {
            return Err(Error::Internal(format!(
                "lp witness {f:?} fails verification"
            )));
        }
        return Ok(Decision {
            verdict: Verdict::NotAfe,
            witness: Some(f),
            method: Method::Lp,
            checks: Checks {
                lp: Some(Verdict::NotAfe),
                agree: true,
                ..Checks::default()
            },
            certificate: None,
            cylinder_witness: None,
            bounded: false,
        });
    }
    let y = positive_left_kernel(&a)
        .ok_or_else(|| Error::Internal("no witness and no positive left kernel".into()))?;
    let y = to_i64_vec(&y).ok_or_else(|| Error::Internal("certificate overflows i64".into()))?;
    Ok(Decision {
        verdict: Verdict::Afe,
        witness: None,
        method: Method::Lp,
        checks: Checks {
            lp: Some(Verdict::Afe),
            agree: true,
            ..Checks::default()
        },
        certificate: Some(y),
        cylinder_witness: None,
        bounded: false,
    })
}

/// Exact decision through one feasibility LP per vertex coordinate.
pub fn decide_afe(g: &Graph) -> Result<Decision> {
    g.require_no_sinks_or_sources()?;
    decide_matrix(&transfer_big(g))
}

/// The same decision for `σ*ⁿ`, i.e. with `Bⁿ` in place of `B`.
pub fn decide_afe_power(g: &Graph, n: u32) -> Result<Decision> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be >= 1".into()));
    }
    g.require_no_sinks_or_sources()?;
    decide_matrix(&transfer_big(g).pow(n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BruteForceBounds {
    pub vertex_bound: i64,
    pub depth: usize,
    pub coeff_bound: i64,
    /// Boxes with more points than this are sampled instead of enumerated.
    pub budget: usize,
    pub seed: u64,
}

impl Default for BruteForceBounds {
    fn default() -> Self {
        BruteForceBounds {
            vertex_bound: 3,
            depth: 2,
            coeff_bound: 2,
            budget: 50_000,
            seed: 0,
        }
    }
}

/// Sparse linear map `f ↦ σ*f − f` on depth-`d` coefficient vectors, stored
/// by columns.
struct CylinderMap {
    rows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl CylinderMap {
    fn vertex(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut cols = vec![Vec::new(); n];
        for e in g.edges() {
            cols[e.range].push((e.source, 1));
        }
        for (v, col) in cols.iter_mut().enumerate() {
            col.push((v, -1));
        }
        CylinderMap { rows: n, cols }
    }

    /// At depth `d ≥ 1`, `σ*1_{Z(π)} = 1_{Z(σπ)}`, which refines to the
    /// paths of length `d` starting with `σπ`.
    fn at_depth(g: &Graph, d: usize) -> Self {
        let table = g.path_table(d);
        let shorter = g.path_table(d - 1);
        let mut by_prefix = vec![Vec::new(); shorter.len()];
        for (i, p) in table.paths().iter().enumerate() {
            by_prefix[shorter
                .index_of(&p.prefix(g, d - 1))
                .expect("prefix exists")]
            .push(i);
        }
        let cols = table
            .paths()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let t = shorter.index_of(&p.tail(g, d - 1)).expect("tail exists");
                let mut col: Vec<(usize, i64)> = by_prefix[t].iter().map(|&j| (j, 1)).collect();
                col.push((i, -1));
                col
            })
            .collect();
        CylinderMap {
            rows: table.len(),
            cols,
        }
    }

    fn apply(&self, f: &[i64]) -> Vec<i64> {
        let mut h = vec![0i64; self.rows];
        for (col, &x) in self.cols.iter().zip(f) {
            if x != 0 {
                for &(r, c) in col {
                    h[r] += c * x;
                }
            }
        }
        h
    }
}

fn is_witness_image(h: &[i64]) -> bool {
    h.iter().all(|&x| x >= 0) && h.iter().any(|&x| x != 0)
}

/// Enumerates `[−b, b]^N` in odometer order, updating the image
/// incrementally.
fn search_box(map: &CylinderMap, b: i64) -> Option<Vec<i64>> {
    let n = map.cols.len();
    let mut f = vec![-b; n];
    let mut h = map.apply(&f);
    loop {
        if is_witness_image(&h) {
            return Some(f);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            if f[k] < b {
                f[k] += 1;
                for &(r, c) in &map.cols[k] {
                    h[r] += c;
                }
                break;
            }
            for &(r, c) in &map.cols[k] {
                h[r] -= 2 * b * c;
            }
            f[k] = -b;
            k += 1;
        }
    }
}

/// Budgeted search: every vector with at most two nonzero entries, every
/// vector constant on each of the given groups, then random vectors.
fn search_sampled<R: Rng>(
    map: &CylinderMap,
    b: i64,
    groups: &[Vec<usize>],
    budget: usize,
    rng: &mut R,
) -> Option<Vec<i64>> {
    let n = map.cols.len();
    let test = |f: &Vec<i64>| is_witness_image(&map.apply(f));
    for i in 0..n {
        for x in (-b..=b).filter(|&x| x != 0) {
            let mut f = vec![0; n];
            f[i] = x;
            if test(&f) {
                return Some(f);
            }
            for j in i + 1..n {
                for y in (-b..=b).filter(|&y| y != 0) {
                    f[j] = y;
                    if test(&f) {
                        return Some(f);
                    }
                }
                f[j] = 0;
            }
        }
    }
    // group-constant vectors: (2b + 1)^groups, enumerated when small enough
    let width = (2 * b + 1) as usize;
    if (width as f64).powi(groups.len() as i32) <= budget as f64 {
        let total = width.pow(groups.len() as u32);
        for code in 0..total {
            let mut f = vec![0; n];
            let mut c = code;
            for grp in groups {
                let x = (c % width) as i64 - b;
                c /= width;
                for &i in grp {
                    f[i] = x;
                }
            }
            if test(&f) {
                return Some(f);
            }
        }
    }
    for _ in 0..budget {
        let f: Vec<i64> = (0..n).map(|_| rng.gen_range(-b..=b)).collect();
        if test(&f) {
            return Some(f);
        }
    }
    None
}

fn box_fits(n: usize, b: i64, budget: usize) -> bool {
    ((2 * b + 1) as f64).powi(n as i32) <= budget as f64
}

/// A depth-`d` function with coefficients in `[−coeff_bound, coeff_bound]`
/// and `σ*f − f ≥ 0`, `σ*f − f ≠ 0`, if the search finds one.
pub fn cylinder_witness<'g>(
    g: &'g Graph,
    d: usize,
    bounds: &BruteForceBounds,
) -> Result<Option<CylFun<'g>>> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "cylinder search needs depth >= 1".into(),
        ));
    }
    g.require_no_sinks_or_sources()?;
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed ^ d as u64);
    let map = CylinderMap::at_depth(g, d);
    let n = map.cols.len();
    let hit = if box_fits(n, bounds.coeff_bound, bounds.budget) {
        search_box(&map, bounds.coeff_bound)
    } else {
        // functions constant on the cylinders of each vertex
        let table = g.path_table(d);
        let mut groups = vec![Vec::new(); g.vertex_count()];
        for (i, p) in table.paths().iter().enumerate() {
            groups[p.range()].push(i);
        }
        search_sampled(&map, bounds.coeff_bound, &groups, bounds.budget, &mut rng)
    };
    let Some(coeffs) = hit else {
        return Ok(None);
    };
    let f = CylFun::from_coeffs(g, d, coeffs)?;
    let h = f.sigma_star_minus_id()?;
    if !h.is_nonneg() || h.is_zero() {
        return Err(Error::Internal(
            "cylinder search returned a non-witness".into(),
        ));
    }
    Ok(Some(f))
}

/// Oracle search for a witness among vertex vectors in
/// `[−vertex_bound, vertex_bound]^{E⁰}` and cylinder functions of depth
/// `1..=depth` with coefficients in `[−coeff_bound, coeff_bound]`.
///
/// A find is reported as a verified vertex witness (pushed down when it came
/// from a cylinder); otherwise the verdict is only AFE-within-bounds.
pub fn brute_force_afe(g: &Graph, bounds: &BruteForceBounds) -> Result<Decision> {
    if bounds.vertex_bound < 1 || bounds.coeff_bound < 1 || bounds.depth < 1 {
        return Err(Error::InvalidArgument(
            "brute-force bounds must be >= 1".into(),
        ));
    }
    g.require_no_sinks_or_sources()?;
    let b = transfer_big(g);
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let found = |witness: Vec<i64>, cyl: Option<CylFunRecord>| Decision {
        verdict: Verdict::NotAfe,
        witness: Some(witness),
        method: Method::Brute,
        checks: Checks {
            brute: Some(Verdict::NotAfe),
            agree: true,
            ..Checks::default()
        },
        certificate: None,
        cylinder_witness: cyl,
        bounded: false,
    };

    let vmap = CylinderMap::vertex(g);
    let vgroups: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| vec![v]).collect();
    let hit = if box_fits(g.vertex_count(), bounds.vertex_bound, bounds.budget) {
        search_box(&vmap, bounds.vertex_bound)
    } else {
        search_sampled(
            &vmap,
            bounds.vertex_bound,
            &vgroups,
            bounds.budget,
            &mut rng,
        )
    };
    if let Some(f) = hit {
        if !verify_witness(&b, &f) {
            return Err(Error::Internal(
                "vertex search returned a non-witness".into(),
            ));
        }
        return Ok(found(f, None));
    }

    for d in 1..=bounds.depth {
        if let Some(f) = cylinder_witness(g, d, bounds)? {
            let pushed = f.sigma_star_pow(d)?;
            let w = pushed.coeffs().to_vec();
            if !verify_witness(&b, &w) {
                return Err(Error::Internal(format!(
                    "push-down of cylinder witness {:?} is not a vertex witness",
                    f.to_record()
                )));
            }
            return Ok(found(w, Some(f.to_record())));
        }
    }

    Ok(Decision {
        verdict: Verdict::AfeWithinBounds,
        witness: None,
        method: Method::Brute,
        checks: Checks {
            brute: Some(Verdict::AfeWithinBounds),
            agree: true,
            ..Checks::default()
        },
        certificate: None,
        cylinder_witness: None,
        bounded: true,
    })
}

/// Runs the LP decision, the brute-force oracle and the graph condition.
/// The reported verdict is the LP one.
pub fn cross_check_with(g: &Graph, bounds: &BruteForceBounds) -> Result<Decision> {
    let mut lp = decide_afe(g)?;
    let brute = brute_force_afe(g, bounds)?;
    let entrance = g.cycle_has_entrance();
    let graph_verdict = if entrance {
        Verdict::NotAfe
    } else {
        Verdict::Afe
    };
    let lp_matches = lp.verdict.is_not_afe() == entrance;
    let brute_ok = !brute.verdict.is_not_afe() || lp.verdict.is_not_afe();
    lp.checks = Checks {
        lp: Some(lp.verdict),
        brute: Some(brute.verdict),
        graph_condition: Some(graph_verdict),
        lp_matches_graph_condition: Some(lp_matches),
        brute_implies_lp: Some(brute_ok),
        agree: lp_matches && brute_ok,
    };
    lp.cylinder_witness = brute.cylinder_witness;
    Ok(lp)
}

pub fn cross_check(g: &Graph) -> Result<Decision> {
    cross_check_with(g, &BruteForceBounds::default())
}

fn check_bijection(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotBijection(format!(
                "value {p} at position {i} repeats or is out of range"
            )));
        }
    }
    Ok(())
}

/// Whether some `U` has `σ(U) ⊊ U`. For a map on a finite set such a `U`
/// exists exactly when some point never returns to itself: its forward
/// orbit is then strictly compressed.
pub fn permutation_compresses(perm: &[usize]) -> Result<bool> {
    check_bijection(perm)?;
    let n = perm.len();
    Ok((0..n).any(|x| {
        let mut y = perm[x];
        for _ in 0..n {
            if y == x {
                return false;
            }
            y = perm[y];
        }
        true
    }))
}

/// The graph whose shift is `perm`: one edge `e_i` with `r = i`,
/// `s = perm(i)`.
pub fn permutation_graph(perm: &[usize]) -> Result<Graph> {
    check_bijection(perm)?;
    if perm.is_empty() {
        return Err(Error::InvalidArgument("empty permutation".into()));
    }
    let vertices: Vec<String> = (0..perm.len()).map(|i| format!("p{i}")).collect();
    let edges: Vec<(String, String, String)> = perm
        .iter()
        .enumerate()
        .map(|(i, &p)| (format!("e{i}"), format!("p{i}"), format!("p{p}")))
        .collect();
    Graph::new(&vertices, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle_graph, parse_graph, random_graph, small_graphs};

    fn fixture() -> Graph {
        parse_graph("vertex v\nvertex w\nedge e v v\nedge g w v\nedge h v w\n").unwrap()
    }

    #[test]
    fn decide_examples() {
        let lp = decide_afe(&bouquet(1).unwrap()).unwrap();
        assert_eq!(lp.verdict, Verdict::Afe);
        assert_eq!(lp.certificate, Some(vec![1]));
        let b2 = decide_afe(&bouquet(2).unwrap()).unwrap();
        assert_eq!(b2.verdict, Verdict::NotAfe);
        assert_eq!(b2.witness, Some(vec![1]));
        assert_eq!(
            decide_afe(&cycle_graph(2).unwrap()).unwrap().verdict,
            Verdict::Afe
        );
        let fx = decide_afe(&fixture()).unwrap();
        assert_eq!(fx.verdict, Verdict::NotAfe);
        let w = fx.witness.unwrap();
        let t = TransferMatrix::of(&fixture());
        let h: Vec<i64> = t.apply(&w).iter().zip(&w).map(|(a, b)| a - b).collect();
        assert!(h.iter().all(|&x| x >= 0) && h.iter().any(|&x| x != 0));
        assert_eq!(w, vec![1, 0]);
        assert_eq!(h, vec![0, 1]);
    }

    #[test]
    fn rejects_sinks_and_sources() {
        let g = parse_graph("vertex v\nvertex w\nedge e w v\nedge l v v").unwrap();
        match decide_afe(&g) {
            Err(Error::Sinks(v)) => assert_eq!(v, vec!["w".to_string()]),
            other => panic!("{other:?}"),
        }
        let g = parse_graph("vertex v\nvertex w\nedge e v w\nedge l v v").unwrap();
        assert!(matches!(decide_afe(&g), Err(Error::Sources(_))));
    }

    #[test]
    fn power_examples() {
        let b2 = bouquet(2).unwrap();
        assert_eq!(decide_afe_power(&b2, 2).unwrap().verdict, Verdict::NotAfe);
        assert_eq!(
            decide_afe_power(&bouquet(1).unwrap(), 3).unwrap().verdict,
            Verdict::Afe
        );
        assert_eq!(
            decide_afe_power(&cycle_graph(2).unwrap(), 2)
                .unwrap()
                .verdict,
            Verdict::Afe
        );
    }

    #[test]
    fn brute_examples() {
        let tight = BruteForceBounds {
            vertex_bound: 1,
            depth: 1,
            coeff_bound: 1,
            ..BruteForceBounds::default()
        };
        let d = brute_force_afe(&bouquet(2).unwrap(), &tight).unwrap();
        assert_eq!(d.verdict, Verdict::NotAfe);
        let d = brute_force_afe(&bouquet(1).unwrap(), &BruteForceBounds::default()).unwrap();
        assert_eq!(d.verdict, Verdict::AfeWithinBounds);
        assert!(d.bounded);
        let bounds = BruteForceBounds {
            vertex_bound: 2,
            depth: 2,
            coeff_bound: 2,
            ..BruteForceBounds::default()
        };
        let d = brute_force_afe(&cycle_graph(3).unwrap(), &bounds).unwrap();
        assert_eq!(d.verdict, Verdict::AfeWithinBounds);
    }

    #[test]
    fn cylinder_map_matches_sigma_star() {
        for seed in 0..20 {
            let g = random_graph(seed, 3, 5, true).unwrap();
            for d in 1..=2 {
                let map = CylinderMap::at_depth(&g, d);
                let n = g.path_table(d).len();
                let f: Vec<i64> = (0..n as i64)
                    .map(|i| (i * 7 + seed as i64) % 5 - 2)
                    .collect();
                let cf = CylFun::from_coeffs(&g, d, f.clone()).unwrap();
                let expected = cf.sigma_star_minus_id().unwrap().refine(d).unwrap();
                assert_eq!(map.apply(&f), expected.coeffs());
            }
            let f = vec![1, -2, 3];
            let t = TransferMatrix::of(&g);
            let expected: Vec<i64> = t.apply(&f).iter().zip(&f).map(|(a, b)| a - b).collect();
            assert_eq!(CylinderMap::vertex(&g).apply(&f), expected);
        }
    }

    #[test]
    fn cross_check_examples() {
        let d = cross_check(&bouquet(2).unwrap()).unwrap();
        assert_eq!(d.checks.lp, Some(Verdict::NotAfe));
        assert_eq!(d.checks.brute, Some(Verdict::NotAfe));
        assert_eq!(d.checks.graph_condition, Some(Verdict::NotAfe));
        assert!(d.checks.agree);
        for k in 1..=3 {
            let d = cross_check(&cycle_graph(k).unwrap()).unwrap();
            assert_eq!(d.verdict, Verdict::Afe);
            assert_eq!(d.checks.graph_condition, Some(Verdict::Afe));
            assert!(d.checks.agree);
        }
    }

    #[test]
    fn small_graph_sweep() {
        let bounds = BruteForceBounds {
            budget: 2_000,
            ..BruteForceBounds::default()
        };
        for g in small_graphs(2, 3) {
            let d = cross_check_with(&g, &bounds).unwrap();
            assert!(d.checks.agree, "{}", g.to_text());
            for n in 1..=3 {
                assert_eq!(decide_afe_power(&g, n).unwrap().verdict, d.verdict);
            }
        }
    }

    #[test]
    fn monotone_witness_growth() {
        for g in small_graphs(3, 4) {
            let d = decide_afe(&g).unwrap();
            let Some(f) = d.witness else { continue };
            let t = TransferMatrix::of(&g);
            let mut prev = f.clone();
            for _ in 0..4 {
                let next = t.apply(&prev);
                assert!(next.iter().zip(&prev).all(|(a, b)| a >= b));
                prev = next;
            }
        }
    }

    #[test]
    fn permutation_examples() {
        assert!(!permutation_compresses(&[0, 1, 2]).unwrap());
        assert!(!permutation_compresses(&[1, 2, 0]).unwrap());
        assert!(permutation_compresses(&[0, 0]).is_err());
        assert!(permutation_compresses(&[3]).is_err());
        for perm in [vec![0], vec![1, 0], vec![1, 2, 0], vec![0, 2, 1, 3]] {
            let g = permutation_graph(&perm).unwrap();
            assert_eq!(decide_afe(&g).unwrap().verdict, Verdict::Afe);
        }
    }

    #[test]
    fn decision_json_shape() {
        let d = decide_afe(&bouquet(2).unwrap()).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["verdict"], "NotAFE");
        assert_eq!(v["method"], "lp");
        assert_eq!(v["witness"], serde_json::json!([1]));
        assert!(v["checks"]["agree"].as_bool().unwrap());
        let d = brute_force_afe(&bouquet(1).unwrap(), &BruteForceBounds::default()).unwrap();
        assert_eq!(
            serde_json::to_value(&d).unwrap()["verdict"],
            "AFE-within-bounds"
        );
    }
}
