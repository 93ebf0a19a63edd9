//! Exact rational scalars. Invariants (reduced fraction, positive
//! denominator) are maintained by `num-rational`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Exact factorial as a rational (used by multinomial scaling laws).
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Multinomial coefficient `m! / prod(parts!)` where `m = sum(parts)`.
pub fn multinomial(parts: &[u32]) -> Rational {
    let m: u32 = parts.iter().sum();
    let mut acc = factorial(m);
    for &p in parts {
        acc /= factorial(p);
    }
    debug_assert!(acc.is_integer() && acc.is_positive());
    acc
}
