use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::linalg::Matrix;

/// Smith normal form `U·M·V = D` with `U`, `V` unimodular and
/// `d₁ | d₂ | … ≥ 0` on the diagonal of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    // row operations accumulate here (m × m)
    u: Vec<Vec<BigInt>>,
    // column operations accumulate here, stored transposed (n rows of length n)
    vt: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        self.vt.swap(i, j);
    }

    /// row_i -= q·row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        let (src, dst) = pair(&mut self.a, t, i);
        axpy(dst, src, q);
        let (src, dst) = pair(&mut self.u, t, i);
        axpy(dst, src, q);
    }

    /// col_j -= q·col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in &mut self.a {
            if row[t].is_zero() {
                continue;
            }
            let delta = q * &row[t];
            row[j] -= delta;
        }
        let (src, dst) = pair(&mut self.vt, t, j);
        axpy(dst, src, q);
    }

    /// Smallest nonzero |a[i][j]| with i, j ≥ t; ties broken by (row, col).
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
                if x.abs().is_one() {
                    return best;
                }
            }
        }
        best
    }

    fn run(mut self) -> Snf {
        for t in 0..self.m.min(self.n) {
            loop {
                let Some((pi, pj)) = self.smallest(t) else {
                    return self.finish();
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&pivot);
                    self.row_axpy(i, t, &q);
                    dirty |= !self.a[i][t].is_zero();
                }
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&pivot);
                    self.col_axpy(j, t, &q);
                    dirty |= !self.a[t][j].is_zero();
                }
                if dirty {
                    continue;
                }
                let offender = (t + 1..self.m)
                    .find(|&i| self.a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&pivot)));
                if let Some(i) = offender {
                    // row_t += row_i, then reduce again
                    self.row_axpy(t, i, &BigInt::from(-1));
                    continue;
                }
                break;
            }
            if self.a[t][t].is_negative() {
                for x in self.a[t].iter_mut().chain(self.u[t].iter_mut()) {
                    *x = -&*x;
                }
            }
        }
        self.finish()
    }

    fn finish(self) -> Snf {
        let d = Matrix::from_rows(self.a).expect("rectangular");
        let u = Matrix::from_rows(self.u).expect("rectangular");
        let v = if self.n == 0 {
            IntMatrix::zeros(0, 0)
        } else {
            Matrix::from_rows(self.vt).expect("rectangular").transpose()
        };
        let d = if self.m == 0 {
            IntMatrix::zeros(0, self.n)
        } else {
            d
        };
        Snf { u, d, v }
    }
}

fn pair<T>(rows: &mut [Vec<T>], src: usize, dst: usize) -> (&Vec<T>, &mut Vec<T>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = rows.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

fn axpy(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        if s.is_zero() {
            continue;
        }
        *d -= q * s;
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    Reducer {
        a: m.to_rows(),
        u: IntMatrix::identity(rows).to_rows(),
        vt: IntMatrix::identity(cols).to_rows(),
        m: rows,
        n: cols,
    }
    .run()
}

/// Solves `M·x = b` over the integers with a precomputed Smith form, so one
/// matrix can be queried against many right-hand sides.
#[derive(Debug, Clone)]
pub struct LatticeSolver {
    snf: Snf,
    rank: usize,
}

impl LatticeSolver {
    pub fn new(m: &IntMatrix) -> Self {
        let snf = snf(m);
        let rank = snf.rank();
        LatticeSolver { snf, rank }
    }

    pub fn rows(&self) -> usize {
        self.snf.u.rows()
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// `U·b`. Membership is linear in `b`, so reduced vectors can be
    /// combined before testing with [`LatticeSolver::contains_reduced`].
    pub fn reduce(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        self.snf.u.mul_vec(b).ok()
    }

    pub fn contains_reduced(&self, c: &[BigInt]) -> bool {
        c.iter().enumerate().all(|(i, ci)| {
            if i < self.rank {
                ci.is_multiple_of(&self.snf.d[(i, i)])
            } else {
                ci.is_zero()
            }
        })
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.reduce(b)?;
        let cols = self.snf.v.rows();
        let mut y = vec![BigInt::zero(); cols];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                let (q, r) = ci.div_rem(&self.snf.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return None;
            }
        }
        self.snf.v.mul_vec(&y).ok()
    }
}

/// Integer solution of `M·x = b`, if one exists.
pub fn lattice_member(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() != m.rows() {
        return None;
    }
    LatticeSolver::new(m).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(rows: Vec<Vec<i64>>) -> IntMatrix {
        Matrix::from_rows(rows).unwrap().to_big()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntMatrix, s: &Snf) {
        assert_eq!(s.u.mul_mat(m).unwrap().mul_mat(&s.v).unwrap(), s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn examples() {
        let s = snf(&int(vec![vec![2]]));
        assert_eq!(s.d, int(vec![vec![2]]));

        let m = int(vec![vec![2, 4], vec![6, 8]]);
        let s = snf(&m);
        check(&m, &s);
        assert_eq!(s.diagonal(), big(&[2, 4]));

        let z = IntMatrix::zeros(2, 3);
        let s = snf(&z);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
    }

    #[test]
    fn divisibility_fixup() {
        // diag(2, 3) is not in Smith form; expect diag(1, 6)
        let m = int(vec![vec![2, 0], vec![0, 3]]);
        let s = snf(&m);
        check(&m, &s);
        assert_eq!(s.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn lattice_examples() {
        let m = int(vec![vec![2]]);
        assert_eq!(lattice_member(&m, &big(&[4])), Some(big(&[2])));
        assert_eq!(lattice_member(&m, &big(&[3])), None);
        let m = int(vec![vec![2, 3]]);
        let x = lattice_member(&m, &big(&[1])).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), big(&[1]));
        assert_eq!(lattice_member(&m, &big(&[1, 2])), None);
    }

    fn brute_member(m: &[Vec<i64>], b: &[i64]) -> bool {
        let cols = m[0].len();
        let mut x = vec![-5i64; cols];
        loop {
            if m.iter()
                .zip(b)
                .all(|(row, &bi)| row.iter().zip(&x).map(|(a, c)| a * c).sum::<i64>() == bi)
            {
                return true;
            }
            let mut k = 0;
            loop {
                if k == cols {
                    return false;
                }
                x[k] += 1;
                if x[k] <= 5 {
                    break;
                }
                x[k] = -5;
                k += 1;
            }
        }
    }

    fn matrix_strategy(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
            prop::collection::vec(prop::collection::vec(lo..=hi, c), r)
        })
    }

    proptest! {
        #[test]
        fn snf_round_trip(rows in matrix_strategy(6, -9, 9)) {
            let m = int(rows);
            let s = snf(&m);
            check(&m, &s);
        }

        #[test]
        fn lattice_agrees_with_brute_force(
            rows in matrix_strategy(3, -3, 3),
            seed in prop::collection::vec(-2i64..=2, 3),
        ) {
            let cols = rows[0].len();
            // half the right-hand sides are constructed to lie in the lattice
            let b: Vec<i64> = if seed[0] >= 0 {
                rows.iter().map(|r| r.iter().zip(&seed).map(|(a, x)| a * x).sum()).collect()
            } else {
                rows.iter().enumerate().map(|(i, _)| seed[i % 3] + i as i64).collect()
            };
            let m = int(rows.clone());
            let found = lattice_member(&m, &big(&b));
            if let Some(x) = &found {
                prop_assert_eq!(m.mul_vec(x).unwrap(), big(&b));
            }
            if cols <= 3 && brute_member(&rows, &b) {
                prop_assert!(found.is_some());
            }
            let solver = LatticeSolver::new(&m);
            let reduced = solver.reduce(&big(&b)).unwrap();
            prop_assert_eq!(solver.contains_reduced(&reduced), found.is_some());
        }
    }
}
