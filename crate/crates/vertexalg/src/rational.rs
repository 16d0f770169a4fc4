//! Exact scalars. Everything in this crate is linear over `Q`; there is no
//! floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(q: &Q) -> bool {
    q.is_zero()
}

/// Generalized binomial coefficient C(n, j) for integer n of either sign,
/// with C(n, j) = 0 for j < 0.
pub fn binomial(n: i64, j: i64) -> Q {
    if j < 0 {
        return Q::zero();
    }
    let mut acc = Q::one();
    for t in 0..j {
        acc *= qi(n - t);
    }
    acc / factorial(j)
}

pub fn factorial(j: i64) -> Q {
    assert!(j >= 0);
    let mut acc = BigInt::one();
    for t in 2..=j {
        acc *= BigInt::from(t);
    }
    Q::from_integer(acc)
}

/// Integer power with negative exponents allowed (base must be nonzero then).
pub fn qpow(base: &Q, exp: i64) -> Q {
    if exp == 0 {
        return Q::one();
    }
    let p = base.pow(exp.unsigned_abs() as i32);
    if exp > 0 {
        p
    } else {
        assert!(!p.is_zero(), "negative power of zero");
        p.recip()
    }
}

/// Short display form `p/q` or `p`.
pub fn qfmt(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn qabs(q: &Q) -> Q {
    q.abs()
}
