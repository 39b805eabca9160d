use std::fmt;
use std::ops::Index;

use num_traits::{Signed, Zero};

use crate::rational::{fmt_q, Q};

/// Dense rational vector over a web; coordinate `i` belongs to the `i`-th
/// web label. Ordering is lexicographic on the coordinate tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVec(pub Vec<Q>);

impl RatVec {
    pub fn zeros(n: usize) -> RatVec {
        RatVec(vec![Q::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> RatVec {
        let mut v = RatVec::zeros(n);
        v.0[i] = crate::rational::one();
        v
    }

    pub fn constant(n: usize, c: Q) -> RatVec {
        RatVec(vec![c; n])
    }

    pub fn from_slice(xs: &[Q]) -> RatVec {
        RatVec(xs.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Q> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn dot(&self, other: &RatVec) -> Q {
        debug_assert_eq!(self.len(), other.len());
        let mut acc = Q::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn add(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Q) -> RatVec {
        RatVec(self.0.iter().map(|a| a * c).collect())
    }

    /// Coordinatewise `self <= other`.
    pub fn le_coords(&self, other: &RatVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &RatVec) -> RatVec {
        RatVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if a >= b { a.clone() } else { b.clone() })
                .collect(),
        )
    }

    /// Row-major Kronecker product, matching `Web::product`.
    pub fn tensor(&self, other: &RatVec) -> RatVec {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        RatVec(out)
    }

    pub fn concat(parts: &[&RatVec]) -> RatVec {
        RatVec(parts.iter().flat_map(|p| p.0.iter().cloned()).collect())
    }

    pub fn sum(&self) -> Q {
        self.0.iter().fold(Q::zero(), |acc, x| acc + x)
    }

    pub fn max_coord(&self) -> Q {
        self.0.iter().cloned().max().unwrap_or_else(Q::zero)
    }

    /// Zeroes every coordinate where `mask` is zero.
    pub fn restrict_to_support(&self, mask: &RatVec) -> RatVec {
        RatVec(
            self.0
                .iter()
                .zip(&mask.0)
                .map(|(a, m)| if m.is_zero() { Q::zero() } else { a.clone() })
                .collect(),
        )
    }
}

impl Index<usize> for RatVec {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl From<Vec<Q>> for RatVec {
    fn from(v: Vec<Q>) -> Self {
        RatVec(v)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&fmt_q(x))?;
        }
        Ok(())
    }
}

/// Builds a `RatVec` from integers and `(numerator, denominator)` pairs.
#[macro_export]
macro_rules! rv {
    ($($e:expr),* $(,)?) => {
        $crate::vector::RatVec(vec![$($crate::rational::IntoQ::into_q($e)),*])
    };
}

#[cfg(test)]
mod tests {
    use crate::rational::q;

    #[test]
    fn kronecker_matches_web_product() {
        let a = rv![1, 2];
        let b = rv![3, 0, 1];
        assert_eq!(a.tensor(&b), rv![3, 0, 1, 6, 0, 2]);
    }

    #[test]
    fn basic_ops() {
        let a = rv![(1, 2), (1, 3)];
        assert_eq!(a.dot(&rv![2, 3]), q(2, 1));
        assert!(rv![0, 1].le_coords(&rv![1, 1]));
        assert!(!rv![1, 0].le_coords(&rv![0, 1]));
        assert_eq!(rv![1, 0, 2].restrict_to_support(&rv![1, 1, 0]), rv![1, 0, 0]);
        assert_eq!(a.to_string(), "1/2 1/3");
    }
}
