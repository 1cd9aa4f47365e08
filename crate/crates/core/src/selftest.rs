//! Seeded invariant battery over random graphs, with failing cases shrunk
//! by edge deletion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decision::{
    cross_check_with, decide_afe_power, verify_witness, BruteForceBounds, Verdict,
};
use crate::dynamics::{CylFun, TransferMatrix};
use crate::error::{Error, Result};
use crate::graph::{random_graph, Graph};
use crate::homology::{
    boundary_1, boundary_2_composition_zero, check_commutation, fiber_sum_t, h0_class, RelFun,
};
use crate::ktheory::{
    direct_sum, indicator_projection, k0_class, nu, random_projection, random_subset,
    truncation_rel,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub count: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Negates the graph condition inside the battery, so every graph
    /// disagrees. Only for exercising the failure path.
    #[serde(skip)]
    pub corrupt_graph_condition: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            count: 50,
            max_vertices: 4,
            max_edges: 6,
            corrupt_graph_condition: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestFailure {
    pub graph_index: usize,
    pub check: String,
    pub detail: String,
    pub graph: String,
    pub minimized: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub count: usize,
    pub graphs_checked: usize,
    pub checks_run: usize,
    pub passed: bool,
    pub failure: Option<SelftestFailure>,
}

/// Largest path table the battery builds.
const MAX_BASE: usize = 64;

struct Outcome {
    checks: usize,
    failure: Option<(String, String)>,
}

fn deepest(g: &Graph, min: usize, max: usize) -> usize {
    (min..=max)
        .take_while(|&d| g.path_table(d).len() <= MAX_BASE)
        .last()
        .unwrap_or(min)
}

/// Runs every check on one graph; `seed` drives all sampling.
fn battery(g: &Graph, seed: u64, corrupt: bool) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    macro_rules! check {
        ($name:expr, $ok:expr, $detail:expr) => {{
            checks += 1;
            if !$ok {
                return Ok(Outcome {
                    checks,
                    failure: Some(($name.to_string(), $detail)),
                });
            }
        }};
    }

    let bounds = BruteForceBounds {
        budget: 5_000,
        seed,
        ..BruteForceBounds::default()
    };
    let mut d = cross_check_with(g, &bounds)?;
    if corrupt {
        let flipped = !g.cycle_has_entrance();
        d.checks.agree = d.verdict.is_not_afe() == flipped;
    }
    check!("cross-check", d.checks.agree, format!("{:?}", d.checks));
    for n in 1..=3 {
        let p = decide_afe_power(g, n)?;
        check!(
            "power-invariance",
            p.verdict == d.verdict,
            format!("n = {n}: {:?} vs {:?}", p.verdict, d.verdict)
        );
    }
    if let Some(w) = &d.witness {
        check!(
            "witness",
            d.verdict == Verdict::NotAfe
                && verify_witness(&TransferMatrix::of(g).matrix().to_big(), w),
            format!("{w:?}")
        );
    }

    for n in 1..=2 {
        let top = deepest(g, n, 3);
        for depth in n..=top {
            let f = RelFun::random(g, n, depth, rng.gen_range(1..=6), &mut rng)?;
            check!(
                "commutation",
                check_commutation(&f)?,
                format!("n = {n}, depth = {depth}, F = {f:?}")
            );
            check!(
                "fiber-sum-kills-boundaries",
                fiber_sum_t(&boundary_1(&f), n)?.is_zero(),
                format!("n = {n}, depth = {depth}, F = {f:?}")
            );
            check!(
                "boundary-squared",
                boundary_2_composition_zero(g, n, depth, 3, &mut rng)?,
                format!("n = {n}, depth = {depth}")
            );
        }
    }

    let depth = deepest(g, 1, 2);
    let rel = truncation_rel(g, 1, depth)?;
    for _ in 0..3 {
        let p = random_projection(&rel, 2, &mut rng)?;
        let q = random_projection(&rel, 2, &mut rng)?;
        let (tp, tq) = (k0_class(&p)?, k0_class(&q)?);
        check!(
            "trace-is-rank",
            tp.0 == p.rank_vector(),
            format!("{:?} vs {:?}", tp.0, p.rank_vector())
        );
        check!(
            "trace-additivity",
            k0_class(&direct_sum(&p, &q)?)? == tp.add(&tq)?,
            String::new()
        );
        let v = random_subset(&rel, &mut rng);
        let lhs = nu(&rel, &k0_class(&indicator_projection(&rel, &v)?)?)?;
        let mut ind = CylFun::zero(g, depth);
        for &x in &v {
            ind = ind.add(&CylFun::indicator(g, g.path_table(depth).get(x))?)?;
        }
        check!(
            "nu-identity",
            lhs == h0_class(&ind, 1)?,
            format!("V = {v:?}")
        );
    }
    Ok(Outcome {
        checks,
        failure: None,
    })
}

fn fails_with(g: &Graph, seed: u64, corrupt: bool, check: &str) -> bool {
    match battery(g, seed, corrupt) {
        Ok(o) => o.failure.is_some_and(|(c, _)| c == check),
        Err(_) => false,
    }
}

/// Deletes edges one at a time while the graph keeps no sinks or sources
/// and the same check still fails.
fn minimize(g: &Graph, seed: u64, corrupt: bool, check: &str) -> Graph {
    let mut current = g.clone();
    'outer: loop {
        for e in 0..current.edge_count() {
            let smaller = current.without_edge(e);
            let flags = smaller.structural_flags();
            if smaller.edge_count() == 0 || flags.has_sinks || flags.has_sources {
                continue;
            }
            if fails_with(&smaller, seed, corrupt, check) {
                current = smaller;
                continue 'outer;
            }
        }
        return current;
    }
}

/// Draws the `count` graphs of a run.
pub fn selftest_graphs(config: &SelftestConfig) -> Result<Vec<(u64, Graph)>> {
    if config.max_vertices == 0 {
        return Err(Error::InvalidArgument("max_vertices must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.count);
    while out.len() < config.count {
        let v = rng.gen_range(1..=config.max_vertices);
        if config.max_edges < v {
            return Err(Error::InvalidArgument(format!(
                "max_edges {} cannot cover {v} vertices without sinks",
                config.max_edges
            )));
        }
        let e = rng.gen_range(v..=config.max_edges);
        let seed: u64 = rng.gen();
        match random_graph(seed, v, e, true) {
            Ok(g) => out.push((seed, g)),
            Err(Error::AttemptsExhausted(_)) => continue,
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

pub fn run_selftest(config: &SelftestConfig) -> Result<SelftestReport> {
    let mut report = SelftestReport {
        seed: config.seed,
        count: config.count,
        graphs_checked: 0,
        checks_run: 0,
        passed: true,
        failure: None,
    };
    for (i, (seed, g)) in selftest_graphs(config)?.into_iter().enumerate() {
        let outcome = battery(&g, seed, config.corrupt_graph_condition)?;
        report.graphs_checked += 1;
        report.checks_run += outcome.checks;
        if let Some((check, detail)) = outcome.failure {
            let small = minimize(&g, seed, config.corrupt_graph_condition, &check);
            report.passed = false;
            report.failure = Some(SelftestFailure {
                graph_index: i,
                check,
                detail,
                graph: g.to_text(),
                minimized: small.to_text(),
            });
            break;
        }
    }
    Ok(report)
}
