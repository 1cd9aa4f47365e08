//! Exact phase-1 simplex for `x ≥ 0, A·x = b`, pivoting by Bland's rule so
//! degenerate cycling cannot occur.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{clear_denominators, primitive, IntMatrix, Rat, RatMatrix};

struct Tableau {
    // m rows of [A | I | b]
    rows: Vec<Vec<Rat>>,
    // reduced costs of all n + m columns, last entry = −objective
    cost: Vec<Rat>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn new(a: &RatMatrix, b: &[Rat]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let flip = b[i].is_negative();
            let mut row = vec![Rat::zero(); width];
            for j in 0..n {
                row[j] = if flip { -&a[(i, j)] } else { a[(i, j)].clone() };
            }
            row[n + i] = Rat::one();
            row[width - 1] = if flip { -&b[i] } else { b[i].clone() };
            rows.push(row);
        }
        let mut cost = vec![Rat::zero(); width];
        for row in &rows {
            for j in 0..n {
                cost[j] -= &row[j];
            }
            cost[width - 1] -= &row[width - 1];
        }
        Tableau {
            rows,
            cost,
            basis: (n..n + m).collect(),
            n,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn optimize(&mut self) {
        let last = self.cost.len() - 1;
        loop {
            // Bland: lowest-index column with negative reduced cost
            let Some(c) = (0..last).find(|&j| self.cost[j].is_negative()) else {
                return;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[last] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            // phase-1 objective is bounded below by 0, so a leaving row exists
            let (r, _) = best.expect("phase-1 objective is bounded");
            self.pivot(r, c);
        }
    }

    fn solution(&self) -> Option<Vec<Rat>> {
        let last = self.cost.len() - 1;
        if !self.cost[last].is_zero() {
            return None;
        }
        let mut x = vec![Rat::zero(); self.n];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.n {
                x[bv] = self.rows[i][last].clone();
            }
        }
        Some(x)
    }
}

/// A non-negative solution of `A·x = b`, if any.
pub fn nonneg_solution(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let mut t = Tableau::new(a, b);
    t.optimize();
    t.solution()
}

/// Decides whether some rational `f` has `A·f ≥ 0` componentwise with
/// `(A·f)_j ≥ 1`, returning such an `f`.
///
/// Encoded as `A·f⁺ − A·f⁻ − s = e_j` over non-negative `f⁺, f⁻, s`.
pub fn feasible_nonneg_strict(a: &IntMatrix, j: usize) -> Option<Vec<Rat>> {
    let (m, n) = (a.rows(), a.cols());
    assert!(j < m, "row index out of range");
    let mut lp = RatMatrix::zeros(m, 2 * n + m);
    for i in 0..m {
        for k in 0..n {
            let x = Rat::from_integer(a[(i, k)].clone());
            lp[(i, n + k)] = -&x;
            lp[(i, k)] = x;
        }
        lp[(i, 2 * n + i)] = -Rat::one();
    }
    let mut b = vec![Rat::zero(); m];
    b[j] = Rat::one();
    let x = nonneg_solution(&lp, &b)?;
    Some((0..n).map(|k| &x[k] - &x[n + k]).collect())
}

/// A strictly positive integer vector `y` with `yᵀ·A = 0`, if any.
///
/// By Gordan/Farkas duality this exists exactly when no `f` has `A·f ≥ 0`
/// with `A·f ≠ 0`, so it certifies infeasibility of every
/// [`feasible_nonneg_strict`] query on `A`. Solved as `y = 1 + z`, `z ≥ 0`,
/// `Aᵀz = −Aᵀ1`.
pub fn positive_left_kernel(a: &IntMatrix) -> Option<Vec<BigInt>> {
    let at = a.transpose().to_rat();
    let ones = vec![Rat::one(); a.rows()];
    let rhs: Vec<Rat> = at
        .mul_vec(&ones)
        .expect("dimensions agree")
        .into_iter()
        .map(|x| -x)
        .collect();
    let z = nonneg_solution(&at, &rhs)?;
    let y: Vec<Rat> = z.into_iter().map(|zi| zi + Rat::one()).collect();
    Some(primitive(&clear_denominators(&y)))
}
