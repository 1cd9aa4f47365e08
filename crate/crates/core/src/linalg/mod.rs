//! Exact integer and rational linear algebra.
//!
//! Nothing in here rounds: integers are arbitrary precision where growth is
//! possible, and rationals are always kept reduced.

mod fourier_motzkin;
mod matrix;
mod simplex;
mod snf;

pub use fourier_motzkin::{fm_feasible, fm_feasible_nonneg_strict};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use simplex::{feasible_nonneg_strict, nonneg_solution, positive_left_kernel};
pub use snf::{lattice_member, snf, LatticeSolver, Snf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar, always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Multiplies by the least common multiple of the denominators.
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

/// Divides out the gcd of the entries (no-op on the zero vector).
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    use num_traits::ToPrimitive;
    v.iter().map(|x| x.to_i64()).collect()
}
