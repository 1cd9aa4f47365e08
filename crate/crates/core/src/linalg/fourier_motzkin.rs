//! Fourier–Motzkin elimination, kept as an independent feasibility oracle
//! for small systems. Exponential in general; callers stay at a handful of
//! variables.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::{IntMatrix, Rat};

/// One constraint `coeffs · x ≥ bound`.
type Constraint = (Vec<Rat>, Rat);

fn normalize((coeffs, bound): Constraint) -> Constraint {
    match coeffs.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let s = lead.abs();
            (coeffs.iter().map(|c| c / &s).collect(), bound / s)
        }
        None => (coeffs, bound),
    }
}

/// Feasibility of `{x : aᵢ·x ≥ bᵢ}` over the rationals.
pub fn fm_feasible(constraints: &[(Vec<Rat>, Rat)]) -> bool {
    let vars = constraints.first().map_or(0, |c| c.0.len());
    let mut current: BTreeSet<Constraint> = constraints.iter().cloned().map(normalize).collect();
    for k in 0..vars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = BTreeSet::new();
        for c in current {
            if c.0[k].is_positive() {
                pos.push(c);
            } else if c.0[k].is_negative() {
                neg.push(c);
            } else {
                next.insert(c);
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let sp = Rat::one() / &pa[k];
                let sn = Rat::one() / -&na[k];
                let coeffs: Vec<Rat> = pa.iter().zip(na).map(|(x, y)| x * &sp + y * &sn).collect();
                next.insert(normalize((coeffs, pb * &sp + nb * &sn)));
            }
        }
        current = next;
    }
    current.iter().all(|(_, b)| !b.is_positive())
}

/// Same question as [`super::feasible_nonneg_strict`], answered by
/// elimination: `A·f ≥ 0` and `(A·f)_j ≥ 1`.
pub fn fm_feasible_nonneg_strict(a: &IntMatrix, j: usize) -> bool {
    let mut cons: Vec<Constraint> = (0..a.rows())
        .map(|i| {
            (
                a.row(i)
                    .iter()
                    .map(|x| Rat::from_integer(x.clone()))
                    .collect(),
                Rat::zero(),
            )
        })
        .collect();
    cons[j].1 = Rat::one();
    fm_feasible(&cons)
}
