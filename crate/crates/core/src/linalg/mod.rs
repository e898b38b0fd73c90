//! Exact linear algebra over the rationals.
//!
//! Boundary matrices are stored sparsely ([`SparseMatrix`]) and ranked by
//! column reduction; the small dense systems that come up when choosing
//! homology representatives or solving for map coefficients go through
//! [`DenseMatrix`].  Integer Smith normal form lives in [`smith`] and is only
//! used as an independent rank oracle.

mod dense;
pub mod smith;
mod sparse;

pub use dense::{independent_subset, DenseMatrix, Echelon};
pub use sparse::SparseMatrix;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_int(n: &BigInt) -> Q {
    BigRational::from_integer(n.clone())
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Renders a rational as `p` or `p/q`.
pub fn format_q(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(BigRational::new(num, den))
            }
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Smallest integer multiple of `v` with coprime entries (sign of the first nonzero entry kept).
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * q_int(&lcm)).to_integer()).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &gcd).collect()
}

/// Integer vectors spanning the rational null space of `matrix`.
pub fn integer_kernel(matrix: &DenseMatrix) -> Vec<Vec<BigInt>> {
    matrix
        .nullspace()
        .iter()
        .map(|v| primitive_integer(v))
        .collect()
}

/// Largest absolute numerator among the given entries (0 when empty).
pub fn max_abs_numerator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .map(|v| v.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}
