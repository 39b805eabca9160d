//! Elements of realized cones: the algebraic order, partial subtraction,
//! norms, bounded sums and lubs of monotone chains.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{PcohError, Result};
use crate::kernel::DiscreteSpace;
use crate::limits::{EqualizerCone, ProductCone};
use crate::pcs::Pcs;
use crate::rational::{one, Q};
use crate::vector::RatVec;

/// Handle to a cone whose elements are nonnegative vectors over a finite web.
#[derive(Debug, Clone)]
pub enum Cone {
    Pcs(Arc<Pcs>),
    Product(Arc<ProductCone>),
    Equalizer(Arc<EqualizerCone>),
    Measure(Arc<DiscreteSpace>),
}

impl Cone {
    pub fn dim(&self) -> usize {
        match self {
            Cone::Pcs(p) => p.dim(),
            Cone::Product(p) => p.dim(),
            Cone::Equalizer(e) => e.ambient().dim(),
            Cone::Measure(s) => s.len(),
        }
    }

    pub fn same(&self, other: &Cone) -> bool {
        match (self, other) {
            (Cone::Pcs(a), Cone::Pcs(b)) => a == b,
            (Cone::Product(a), Cone::Product(b)) => Arc::ptr_eq(a, b) || a.factors().len() == b.factors().len()
                && a.factors().iter().zip(b.factors()).all(|(x, y)| x.same(y)),
            (Cone::Equalizer(a), Cone::Equalizer(b)) => Arc::ptr_eq(a, b) || **a == **b,
            (Cone::Measure(a), Cone::Measure(b)) => a == b,
            _ => false,
        }
    }

    /// Whether `v` belongs to the carrier (beyond nonnegativity).
    fn carrier_ok(&self, v: &RatVec) -> Result<bool> {
        match self {
            Cone::Equalizer(e) => e.contains(v),
            Cone::Product(p) => {
                let parts = p.split(v);
                for (f, part) in p.factors().iter().zip(parts) {
                    if !f.carrier_ok(&part)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(true),
        }
    }

    pub fn norm_of(&self, v: &RatVec) -> Result<Q> {
        match self {
            Cone::Pcs(p) => {
                p.require_exact("norm")?;
                Ok(p.dual_generators().iter().map(|w| v.dot(w)).max().unwrap_or_else(Q::zero))
            }
            Cone::Product(p) => {
                let mut best = Q::zero();
                for (f, part) in p.factors().iter().zip(p.split(v)) {
                    let n = f.norm_of(&part)?;
                    if n > best {
                        best = n;
                    }
                }
                Ok(best)
            }
            Cone::Equalizer(e) => Cone::Pcs(e.ambient().clone()).norm_of(v),
            Cone::Measure(_) => Ok(v.sum()),
        }
    }

    /// A functional of the dual unit ball, as a vector over the web.
    fn unit_functional(&self, a: usize) -> Result<RatVec> {
        match self {
            Cone::Pcs(p) => {
                let e = RatVec::unit(p.dim(), a);
                let s = p.ball().support(&e)?;
                Ok(e.scale(&(one() / s)))
            }
            Cone::Product(p) => {
                let (k, off) = p.locate(a);
                let local = p.factors()[k].unit_functional(a - off)?;
                let mut out = RatVec::zeros(p.dim());
                for (i, x) in local.iter().enumerate() {
                    out.0[off + i] = x.clone();
                }
                Ok(out)
            }
            Cone::Equalizer(e) => Cone::Pcs(e.ambient().clone()).unit_functional(a),
            Cone::Measure(s) => Ok(RatVec::unit(s.len(), a)),
        }
    }

    pub fn element(&self, v: RatVec) -> Result<ConeElem> {
        ConeElem::new(self.clone(), v)
    }

    pub fn zero(&self) -> ConeElem {
        ConeElem { cone: self.clone(), vec: RatVec::zeros(self.dim()) }
    }
}

#[derive(Debug, Clone)]
pub struct ConeElem {
    cone: Cone,
    vec: RatVec,
}

impl PartialEq for ConeElem {
    fn eq(&self, other: &Self) -> bool {
        self.vec == other.vec && self.cone.same(&other.cone)
    }
}

impl ConeElem {
    pub fn new(cone: Cone, vec: RatVec) -> Result<ConeElem> {
        if vec.len() != cone.dim() {
            return Err(PcohError::WebMismatch(format!(
                "element of length {} in a cone of dimension {}",
                vec.len(),
                cone.dim()
            )));
        }
        if !vec.is_nonneg() {
            return Err(PcohError::Malformed(format!("cone element `{vec}` has a negative coordinate")));
        }
        if !cone.carrier_ok(&vec)? {
            return Err(PcohError::Malformed(format!("`{vec}` violates the equalizer constraint")));
        }
        Ok(ConeElem { cone, vec })
    }

    pub(crate) fn trusted(cone: Cone, vec: RatVec) -> ConeElem {
        ConeElem { cone, vec }
    }

    pub fn in_pcs(p: &Arc<Pcs>, vec: RatVec) -> Result<ConeElem> {
        ConeElem::new(Cone::Pcs(p.clone()), vec)
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn vec(&self) -> &RatVec {
        &self.vec
    }

    pub fn into_vec(self) -> RatVec {
        self.vec
    }

    fn same_cone(&self, other: &ConeElem, ctx: &str) -> Result<()> {
        if self.cone.same(&other.cone) {
            Ok(())
        } else {
            Err(PcohError::WebMismatch(format!("{ctx}: elements of different cones")))
        }
    }

    pub fn norm(&self) -> Result<Q> {
        self.cone.norm_of(&self.vec)
    }

    pub fn add(&self, other: &ConeElem) -> Result<ConeElem> {
        self.same_cone(other, "add")?;
        Ok(ConeElem { cone: self.cone.clone(), vec: self.vec.add(&other.vec) })
    }

    pub fn scale(&self, c: &Q) -> Result<ConeElem> {
        if c.is_negative() {
            return Err(PcohError::Malformed("negative scalar".into()));
        }
        Ok(ConeElem { cone: self.cone.clone(), vec: self.vec.scale(c) })
    }

    /// The algebraic order: `self <= other` iff `other = self + d` for some
    /// element `d` of the same cone.
    pub fn leq(&self, other: &ConeElem) -> Result<bool> {
        self.same_cone(other, "leq")?;
        if !self.vec.le_coords(&other.vec) {
            return Ok(false);
        }
        let d = other.vec.sub(&self.vec);
        // The carrier constraint of an equalizer is linear, hence inherited.
        debug_assert!(self.cone.carrier_ok(&d).unwrap_or(false));
        self.cone.carrier_ok(&d)
    }

    /// `self - smaller`, defined only when `smaller <= self`.
    pub fn sub(&self, smaller: &ConeElem) -> Result<ConeElem> {
        if !smaller.leq(self)? {
            return Err(PcohError::Partiality(format!(
                "`{}` is not below `{}`",
                smaller.vec, self.vec
            )));
        }
        Ok(ConeElem { cone: self.cone.clone(), vec: self.vec.sub(&smaller.vec) })
    }

    /// A dual-ball functional telling `self` and `other` apart, if they differ.
    pub fn separated_witness(&self, other: &ConeElem) -> Result<Option<RatVec>> {
        self.same_cone(other, "separated_witness")?;
        match (0..self.vec.len()).find(|&a| self.vec[a] != other.vec[a]) {
            None => Ok(None),
            Some(a) => Ok(Some(self.cone.unit_functional(a)?)),
        }
    }
}

/// Sum of a finite family whose partial sums stay within `bound` in norm
/// (default 1).
pub fn sum_family(cone: &Cone, xs: &[ConeElem], bound: Option<&Q>) -> Result<ConeElem> {
    let default = one();
    let bound = bound.unwrap_or(&default);
    let mut acc = cone.zero();
    for x in xs {
        acc = acc.add(x)?;
        let n = acc.norm()?;
        if &n > bound {
            return Err(PcohError::Unbounded(format!(
                "partial sum has norm {} above the bound {}",
                crate::rational::fmt_q(&n),
                crate::rational::fmt_q(bound)
            )));
        }
    }
    Ok(acc)
}

/// Lub of a finite monotone chain: the coordinatewise supremum.
pub fn lub_chain(chain: &[ConeElem]) -> Result<ConeElem> {
    let first = chain
        .first()
        .ok_or_else(|| PcohError::Malformed("lub of an empty chain".into()))?;
    for w in chain.windows(2) {
        if !w[0].leq(&w[1])? {
            return Err(PcohError::Malformed(format!(
                "chain is not monotone at `{}` / `{}`",
                w[0].vec, w[1].vec
            )));
        }
    }
    let sup = chain.iter().skip(1).fold(first.vec.clone(), |m, c| m.join(&c.vec));
    ConeElem::new(first.cone.clone(), sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::Pcs;
    use crate::rational::{q, qi};
    use crate::rv;

    fn square() -> Cone {
        Cone::Pcs(Pcs::snat_orth(2))
    }

    #[test]
    fn norms() {
        let c = square();
        assert_eq!(c.element(rv![(1, 2), (1, 2)]).unwrap().norm().unwrap(), q(1, 2));
        assert_eq!(c.zero().norm().unwrap(), qi(0));
        let s = Cone::Pcs(Pcs::snat(2));
        assert_eq!(s.element(rv![(1, 2), (1, 3)]).unwrap().norm().unwrap(), q(5, 6));
    }

    #[test]
    fn order_and_subtraction() {
        let c = square();
        let x = c.element(rv![1, 1]).unwrap();
        assert!(x.sub(&x).unwrap().vec().is_zero());
        let a = c.element(rv![1, 0]).unwrap();
        let b = c.element(rv![0, 1]).unwrap();
        assert!(matches!(a.sub(&b), Err(PcohError::Partiality(_))));
        let d = x.sub(&a).unwrap();
        assert_eq!(a.add(&d).unwrap(), x);
    }

    #[test]
    fn sums_and_lubs() {
        let c = square();
        let h = c.element(rv![(1, 2), 0]).unwrap();
        assert_eq!(sum_family(&c, &[h.clone(), h.clone()], None).unwrap().vec(), &rv![1, 0]);
        assert!(matches!(
            sum_family(&c, &[h.clone(), h.clone(), h.clone()], None),
            Err(PcohError::Unbounded(_))
        ));
        let chain: Vec<ConeElem> = (1..=8)
            .map(|n| c.element(rv![1, 0].scale(&(one() - q(1, 1 << n)))).unwrap())
            .collect();
        assert_eq!(lub_chain(&chain).unwrap().vec(), &rv![(255, 256), 0]);
        let bad = vec![c.element(rv![1, 0]).unwrap(), c.element(rv![0, 1]).unwrap()];
        assert!(lub_chain(&bad).is_err());
    }

    #[test]
    fn fubini_on_a_grid() {
        let c = square();
        let x = |i: u32, j: u32| c.element(rv![1, 0].scale(&q(1, 1 << (i + j)))).unwrap();
        let bound = qi(4);
        let rows: Vec<ConeElem> = (0..6)
            .map(|i| sum_family(&c, &(0..6).map(|j| x(i, j)).collect::<Vec<_>>(), Some(&bound)).unwrap())
            .collect();
        let cols: Vec<ConeElem> = (0..6)
            .map(|j| sum_family(&c, &(0..6).map(|i| x(i, j)).collect::<Vec<_>>(), Some(&bound)).unwrap())
            .collect();
        let a = sum_family(&c, &rows, Some(&bound)).unwrap();
        let b = sum_family(&c, &cols, Some(&bound)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vec()[0], q(63, 32) * q(63, 32));
    }

    #[test]
    fn witnesses() {
        let c = square();
        let x = c.element(rv![1, 0]).unwrap();
        let y = c.element(rv![0, 1]).unwrap();
        assert_eq!(x.separated_witness(&y).unwrap(), Some(rv![1, 0]));
        assert_eq!(x.separated_witness(&x).unwrap(), None);
    }
}
