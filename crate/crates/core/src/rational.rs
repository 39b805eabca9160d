//! Exact rational scalars and their textual form (`p/q` or an integer).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{PcohError, Result};

/// The scalar field used by every decision procedure in the crate.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `p/q`, `-p/q` or an integer literal.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || PcohError::Parse(format!("not a rational: `{s}`"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Canonical text: reduced `p/q`, or `p` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Literal conversion used by `rv!`.
pub trait IntoQ {
    fn into_q(self) -> Q;
}

impl IntoQ for i64 {
    fn into_q(self) -> Q {
        qi(self)
    }
}

impl IntoQ for Q {
    fn into_q(self) -> Q {
        self
    }
}

impl IntoQ for (i64, i64) {
    fn into_q(self) -> Q {
        q(self.0, self.1)
    }
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn pow(x: &Q, e: usize) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("2/4").unwrap(), q(1, 2));
        assert_eq!(parse_q("-3").unwrap(), qi(-3));
        assert_eq!(fmt_q(&q(6, 3)), "2");
        assert_eq!(fmt_q(&q(-1, 3)), "-1/3");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(pow(&q(1, 2), 3), q(1, 8));
        assert_eq!(pow(&q(1, 2), 0), one());
    }
}
