//! Total monotonicity of black-box functions on a unit ball.
//!
//! For `x_1, ..., x_n` with `Σ x_i` in the ball, the function must satisfy
//! `Σ_{I odd} f(Σ_I x) ≤ Σ_{I even} f(Σ_I x)`, where `I` is odd (even) when
//! `n - |I|` is odd (even).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bang::StableFn;
use crate::error::{PcohError, Result};
use crate::pcs::Pcs;
use crate::rational::{fmt_q, Q};
use crate::vector::RatVec;

/// Values the check can add and compare.
pub trait MonotoneValue: Clone + Send + Sync + fmt::Display {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn leq(&self, other: &Self) -> bool;
}

impl MonotoneValue for RatVec {
    fn zero_like(&self) -> Self {
        RatVec::zeros(self.len())
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn leq(&self, other: &Self) -> bool {
        self.le_coords(other)
    }
}

/// A scalar wrapper so that plain rationals display as `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Scalar(pub Q);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.0))
    }
}

impl MonotoneValue for Scalar {
    fn zero_like(&self) -> Self {
        Scalar(Q::zero())
    }

    fn plus(&self, other: &Self) -> Self {
        Scalar(&self.0 + &other.0)
    }

    fn leq(&self, other: &Self) -> bool {
        self.0 <= other.0
    }
}

/// Exact `Σ c_s √s` over square-free integers `s`, compared by refining
/// interval bounds. Distinct square-free radicals are linearly independent,
/// so a nonzero difference always has a decidable sign.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SqrtSum {
    terms: BTreeMap<BigInt, Q>,
}

fn square_free(n: &BigInt) -> (BigInt, BigInt) {
    // n = k² s
    let mut s = BigInt::one();
    let mut k = BigInt::one();
    let mut rest = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        let dd = &d * &d;
        while (&rest % &dd).is_zero() {
            rest /= &dd;
            k *= &d;
        }
        if (&rest % &d).is_zero() {
            rest /= &d;
            s *= &d;
        }
        d += 1;
    }
    (k, s * rest)
}

impl SqrtSum {
    pub fn rational(c: Q) -> SqrtSum {
        SqrtSum::default().plus_term(c, BigInt::one())
    }

    /// `√r` for a nonnegative rational `r`.
    pub fn sqrt(r: &Q) -> SqrtSum {
        assert!(!r.is_negative(), "square root of a negative rational");
        if r.is_zero() {
            return SqrtSum::default();
        }
        // √(a/b) = √(ab) / b
        let ab = r.numer() * r.denom();
        let (k, s) = square_free(&ab);
        SqrtSum::default().plus_term(Q::new(k, r.denom().clone()), s)
    }

    fn plus_term(mut self, c: Q, s: BigInt) -> SqrtSum {
        let e = self.terms.entry(s.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&s);
        }
        self
    }

    pub fn sub(&self, other: &SqrtSum) -> SqrtSum {
        other.terms.iter().fold(self.clone(), |acc, (s, c)| acc.plus_term(-c.clone(), s.clone()))
    }

    /// Sign of the value, found by bisection on `√s ∈ [⌊√(s 4^k)⌋, ⌊√(s 4^k)⌋ + 1] / 2^k`.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        let mut bits = 8u32;
        loop {
            let scale = BigInt::one() << bits;
            let (mut lo, mut hi) = (Q::zero(), Q::zero());
            for (s, c) in &self.terms {
                let r = (s * &scale * &scale).sqrt();
                let a = Q::new(r.clone(), scale.clone());
                let b = Q::new(r + 1, scale.clone());
                let (x, y) = (c * &a, c * &b);
                if c.is_positive() {
                    lo += x;
                    hi += y;
                } else {
                    lo += y;
                    hi += x;
                }
            }
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }
}

impl fmt::Display for SqrtSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| if s.is_one() { fmt_q(c) } else { format!("{}*sqrt({s})", fmt_q(c)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl MonotoneValue for SqrtSum {
    fn zero_like(&self) -> Self {
        SqrtSum::default()
    }

    fn plus(&self, other: &Self) -> Self {
        other.terms.iter().fold(self.clone(), |acc, (s, c)| acc.plus_term(c.clone(), s.clone()))
    }

    fn leq(&self, other: &Self) -> bool {
        other.sub(self).signum() != Ordering::Less
    }
}

/// A tuple on which the inequality fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation<V> {
    pub tuple: Vec<RatVec>,
    pub odd: V,
    pub even: V,
}

impl<V: fmt::Display> fmt::Display for Violation<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.tuple.iter().map(|x| format!("({})", x.to_string().replace(' ', ","))).collect();
        write!(f, "tuple {}: odd sum {} > even sum {}", t.join(" "), self.odd, self.even)
    }
}

/// `(Σ_{I odd} f(Σ_I x), Σ_{I even} f(Σ_I x))`.
pub fn alternating_sums<V: MonotoneValue>(f: &impl Fn(&RatVec) -> V, xs: &[RatVec], dim: usize) -> (V, V) {
    let n = xs.len();
    let zero = f(&RatVec::zeros(dim)).zero_like();
    let (mut odd, mut even) = (zero.clone(), zero);
    for mask in 0u32..(1 << n) {
        let mut s = RatVec::zeros(dim);
        for (i, x) in xs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                s = s.add(x);
            }
        }
        let v = f(&s);
        if (n - mask.count_ones() as usize) % 2 == 1 {
            odd = odd.plus(&v);
        } else {
            even = even.plus(&v);
        }
    }
    (odd, even)
}

/// Checks every tuple in order and returns the first violation. Tuples whose
/// sum leaves the ball are an error.
pub fn total_monotonicity_check<V, F>(f: F, tuples: &[Vec<RatVec>], ball: &Pcs) -> Result<Option<Violation<V>>>
where
    V: MonotoneValue,
    F: Fn(&RatVec) -> V + Sync,
{
    let sums: std::collections::HashSet<RatVec> =
        tuples.iter().map(|t| t.iter().fold(RatVec::zeros(ball.dim()), |acc, x| acc.add(x))).collect();
    for s in sums {
        if !ball.member(&s)? {
            return Err(PcohError::NotInBall(format!("tuple sum `{s}` escapes the ball")));
        }
    }
    let hit = tuples.par_iter().find_first(|t| {
        let (odd, even) = alternating_sums(&f, t, ball.dim());
        !odd.leq(&even)
    });
    Ok(hit.map(|t| {
        let (odd, even) = alternating_sums(&f, t, ball.dim());
        Violation { tuple: t.clone(), odd, even }
    }))
}

/// All unordered tuples of length `1..=max_n` of grid points (denominator
/// `denom`) whose sum lies in the ball, by length then lexicographically.
/// The inequality is symmetric in the tuple, so this is exhaustive.
pub fn grid_tuples(ball: &Pcs, max_n: usize, denom: i64) -> Result<Vec<Vec<RatVec>>> {
    let pts = crate::bang::ball_grid(ball, denom)?;
    let mut member: HashMap<RatVec, bool> = HashMap::new();
    let mut inside = |v: &RatVec| -> Result<bool> {
        if let Some(&b) = member.get(v) {
            return Ok(b);
        }
        let b = ball.member(v)?;
        member.insert(v.clone(), b);
        Ok(b)
    };
    let mut out = Vec::new();
    let mut level: Vec<(Vec<usize>, RatVec)> = vec![(Vec::new(), RatVec::zeros(ball.dim()))];
    for _ in 0..max_n {
        let mut next = Vec::new();
        for (idx, sum) in &level {
            for j in idx.last().copied().unwrap_or(0)..pts.len() {
                let s = sum.add(&pts[j]);
                if inside(&s)? {
                    let mut t = idx.clone();
                    t.push(j);
                    next.push((t, s));
                }
            }
        }
        out.extend(next.iter().map(|(t, _)| t.iter().map(|&j| pts[j].clone()).collect::<Vec<_>>()));
        level = next;
    }
    Ok(out)
}

/// Total monotonicity of a power series, with values memoized on the grid.
pub fn check_stable_fn(f: &StableFn, max_n: usize, denom: i64) -> Result<Option<Violation<RatVec>>> {
    f.dom().require_exact("stability check")?;
    let tuples = grid_tuples(f.dom(), max_n, denom)?;
    let table: HashMap<RatVec, RatVec> = crate::bang::ball_grid(f.dom(), denom)?
        .into_par_iter()
        .map(|x| {
            let y = f.eval(&x);
            y.map(|y| (x, y))
        })
        .collect::<Result<_>>()?;
    total_monotonicity_check(|x: &RatVec| table[x].clone(), &tuples, f.dom())
}

/// `x ↦ √x` on the one-point space, which is not totally monotone.
pub fn sqrt_fn(x: &RatVec) -> SqrtSum {
    SqrtSum::sqrt(&x[0])
}
