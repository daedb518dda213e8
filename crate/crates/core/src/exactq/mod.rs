//! Arbitrary-precision rational scalars, exact dense linear algebra, and
//! canonical linear-subspace representations.
//!
//! All types are immutable values and safe to share between threads.
//! Subspaces are kept in reduced row-echelon form so that equality and
//! hashing decide subspace identity.

mod matrix;
mod subspace;

pub use matrix::{QMatrix, RrefResult};
pub use subspace::Subspace;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar. Always stored reduced with a positive denominator;
/// zero is `0/1`.
pub type Rational = BigRational;

/// Errors from the exact linear-algebra layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactqError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
}

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Rational `n/d`.
///
/// Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Format a rational as `num` or `num/den` (den omitted when 1), the exact
/// form used in JSON reports.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Clear denominators and divide by the content: the unique primitive integer
/// vector proportional to `v` whose first nonzero entry is positive.
///
/// Returns `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(|q| q.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::one();
    for q in v {
        lcm = num_integer::lcm(lcm, q.denom().clone());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = num_integer::gcd(gcd, x.clone());
    }
    for x in &mut ints {
        *x = &*x / &gcd;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut ints {
            *x = -&*x;
        }
    }
    Some(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_forms() {
        assert_eq!(rational_string(&rat(5)), "5");
        assert_eq!(rational_string(&ratio(-3, 6)), "-1/2");
        assert_eq!(rational_string(&rat(0)), "0");
    }

    #[test]
    fn primitive_vector_normalizes_sign_and_content() {
        let v = vec![ratio(-2, 3), rat(0), ratio(4, 3)];
        let p = primitive_integer_vector(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(0), BigInt::from(-2)]);
        assert!(primitive_integer_vector(&[rat(0), rat(0)]).is_none());
    }
}
