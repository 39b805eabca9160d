//! Finite discrete measurable spaces, substochastic kernels and their
//! correspondence with linear maps between measure cones.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::cone::{Cone, ConeElem};
use crate::error::{PcohError, Result};
use crate::morph::{MorphMatrix, SparseMat};
use crate::pcs::Pcs;
use crate::rational::{fmt_q, one, Q};
use crate::web::Web;

/// A finite set with the discrete σ-algebra. Its measure cone is the cone of
/// the simplex PCS on the same web (norm = total mass).
#[derive(Debug, Clone)]
pub struct DiscreteSpace {
    measures: Arc<Pcs>,
}

impl PartialEq for DiscreteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.web() == other.web()
    }
}

impl DiscreteSpace {
    pub fn new(web: Arc<Web>) -> Result<Arc<DiscreteSpace>> {
        if web.is_empty() {
            return Err(PcohError::Malformed("a discrete space needs at least one point".into()));
        }
        Ok(Arc::new(DiscreteSpace { measures: Pcs::simplex(web) }))
    }

    pub fn numbered(n: usize) -> Result<Arc<DiscreteSpace>> {
        DiscreteSpace::new(Web::numbered(n))
    }

    pub fn web(&self) -> &Arc<Web> {
        self.measures.web()
    }

    pub fn len(&self) -> usize {
        self.web().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Subprobability measures as a PCS.
    pub fn measure_pcs(&self) -> &Arc<Pcs> {
        &self.measures
    }

    pub fn dirac(self: &Arc<Self>, r: usize) -> ConeElem {
        ConeElem::trusted(Cone::Measure(self.clone()), crate::vector::RatVec::unit(self.len(), r))
    }
}

/// `K(r, ·)` is a subprobability measure for every point `r` of the domain.
#[derive(Debug, Clone)]
pub struct Kernel {
    dom: Arc<DiscreteSpace>,
    cod: Arc<DiscreteSpace>,
    rows: SparseMat,
}

impl PartialEq for Kernel {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.rows == other.rows
    }
}

impl Kernel {
    pub fn new(dom: Arc<DiscreteSpace>, cod: Arc<DiscreteSpace>, rows: SparseMat) -> Result<Kernel> {
        let k = Kernel::unchecked(dom, cod, rows)?;
        if let Some((r, mass)) = k.heaviest_excess() {
            return Err(PcohError::NotSubstochastic(format!(
                "row `{}` has mass {}",
                k.dom.web().label(r),
                fmt_q(&mass)
            )));
        }
        Ok(k)
    }

    /// Shape-checked only; substochasticity is left to `path_check`.
    pub fn unchecked(dom: Arc<DiscreteSpace>, cod: Arc<DiscreteSpace>, rows: SparseMat) -> Result<Kernel> {
        if rows.nrows() != dom.len() || rows.ncols() != cod.len() {
            return Err(PcohError::WebMismatch("kernel shape".into()));
        }
        if !rows.is_nonneg() {
            return Err(PcohError::NotSubstochastic("negative kernel entry".into()));
        }
        Ok(Kernel { dom, cod, rows })
    }

    pub fn identity(x: &Arc<DiscreteSpace>) -> Kernel {
        Kernel { dom: x.clone(), cod: x.clone(), rows: SparseMat::identity(x.len()) }
    }

    pub fn dom(&self) -> &Arc<DiscreteSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<DiscreteSpace> {
        &self.cod
    }

    pub fn rows(&self) -> &SparseMat {
        &self.rows
    }

    pub fn row_mass(&self, r: usize) -> Q {
        self.rows.row(r).values().fold(Q::zero(), |a, x| a + x)
    }

    fn heaviest_excess(&self) -> Option<(usize, Q)> {
        (0..self.dom.len()).map(|r| (r, self.row_mass(r))).find(|(_, m)| m > &one())
    }

    /// `K(r, V)`.
    pub fn eval(&self, r: usize, v: &MeasTest) -> Q {
        self.rows.row(r).iter().filter(|(y, _)| v.contains(**y)).fold(Q::zero(), |a, (_, x)| a + x)
    }

    /// `(L ∘ K)(r, ·) = Σ_y K(r,{y}) L(y, ·)`.
    pub fn then(&self, next: &Kernel) -> Result<Kernel> {
        if self.cod != next.dom {
            return Err(PcohError::WebMismatch("kernel composition".into()));
        }
        Ok(Kernel { dom: self.dom.clone(), cod: next.cod.clone(), rows: self.rows.then(&next.rows) })
    }
}

/// The linear map between measure cones induced by a kernel:
/// `μ ↦ Σ_r μ({r}) K(r, ·)`.
pub fn lin_of_kern(k: &Kernel) -> MorphMatrix {
    MorphMatrix::structural(k.dom.measure_pcs().clone(), k.cod.measure_pcs().clone(), k.rows.clone())
}

/// The kernel `K(r, V) = (t·δ_r)(V)`; fails if some Dirac image has mass above 1.
pub fn kern_of_lin(t: &MorphMatrix, dom: &Arc<DiscreteSpace>, cod: &Arc<DiscreteSpace>) -> Result<Kernel> {
    t.dom().web().ensure_same(dom.web(), "kernel domain")?;
    t.cod().web().ensure_same(cod.web(), "kernel codomain")?;
    let mut rows = SparseMat::zeros(dom.len(), cod.len());
    for r in 0..dom.len() {
        let image = t.apply_vec(&crate::vector::RatVec::unit(dom.len(), r))?;
        for (y, x) in image.iter().enumerate() {
            rows.set(r, y, x.clone());
        }
    }
    Kernel::new(dom.clone(), cod.clone(), rows)
}

/// The measurability test `μ ↦ μ(U)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasTest {
    size: usize,
    subset: BTreeSet<usize>,
}

impl MeasTest {
    pub fn new(space: &DiscreteSpace, subset: impl IntoIterator<Item = usize>) -> Result<MeasTest> {
        let subset: BTreeSet<usize> = subset.into_iter().collect();
        if subset.iter().any(|&i| i >= space.len()) {
            return Err(PcohError::Malformed("test subset is not contained in the space".into()));
        }
        Ok(MeasTest { size: space.len(), subset })
    }

    pub fn full(space: &DiscreteSpace) -> MeasTest {
        MeasTest { size: space.len(), subset: (0..space.len()).collect() }
    }

    pub fn empty(space: &DiscreteSpace) -> MeasTest {
        MeasTest { size: space.len(), subset: BTreeSet::new() }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.subset.contains(&i)
    }

    /// All tests on a space (every subset), in binary order.
    pub fn all(space: &DiscreteSpace) -> Vec<MeasTest> {
        let n = space.len();
        assert!(n < 20, "too many subsets");
        (0..1usize << n)
            .map(|mask| MeasTest { size: n, subset: (0..n).filter(|i| mask >> i & 1 == 1).collect() })
            .collect()
    }
}

pub fn test_eval(l: &MeasTest, mu: &ConeElem) -> Result<Q> {
    if mu.vec().len() != l.size {
        return Err(PcohError::WebMismatch("test and measure live on different spaces".into()));
    }
    Ok(l.subset.iter().fold(Q::zero(), |a, &i| a + &mu.vec()[i]))
}

/// A measurable path of arity 1 between discrete spaces: every row is a
/// subprobability measure, so each test `U` pulls back to the bounded map
/// `r ↦ γ(r, U)` with values in `[0, 1]`.
pub fn path_check(gamma: &Kernel) -> bool {
    if gamma.cod.len() < 20 {
        let tests = MeasTest::all(&gamma.cod);
        (0..gamma.dom.len()).all(|r| tests.iter().all(|u| gamma.eval(r, u) <= one()))
    } else {
        (0..gamma.dom.len()).all(|r| gamma.row_mass(r) <= one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::rv;

    fn two() -> Arc<DiscreteSpace> {
        DiscreteSpace::numbered(2).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let x = two();
        let id = Kernel::identity(&x);
        assert_eq!(lin_of_kern(&id), MorphMatrix::identity(x.measure_pcs()));
        let k = Kernel::new(
            x.clone(),
            x.clone(),
            SparseMat::from_dense(&[vec![q(1, 2), q(1, 2)], vec![qi(0), q(1, 2)]]),
        )
        .unwrap();
        let t = lin_of_kern(&k);
        assert_eq!(t.apply(&x.dirac(0)).unwrap().vec(), &rv![(1, 2), (1, 2)]);
        assert_eq!(kern_of_lin(&t, &x, &x).unwrap(), k);
        let z = MorphMatrix::zero(x.measure_pcs(), x.measure_pcs());
        assert_eq!(kern_of_lin(&z, &x, &x).unwrap().rows().nnz(), 0);
        assert_eq!(kern_of_lin(&lin_of_kern(&id), &x, &x).unwrap(), id);
    }

    #[test]
    fn heavy_rows_rejected() {
        let x = two();
        let m = SparseMat::from_dense(&[vec![qi(1), q(1, 4)], vec![qi(0), qi(0)]]);
        assert!(matches!(Kernel::new(x.clone(), x.clone(), m.clone()), Err(PcohError::NotSubstochastic(_))));
        let g = Kernel::unchecked(x.clone(), x.clone(), m).unwrap();
        assert!(!path_check(&g));
        assert!(path_check(&Kernel::identity(&x)));
    }

    #[test]
    fn tests_on_measures() {
        let x = DiscreteSpace::numbered(3).unwrap();
        let mu = ConeElem::new(Cone::Measure(x.clone()), rv![(1, 2), (1, 6), (1, 12)]).unwrap();
        assert_eq!(test_eval(&MeasTest::full(&x), &mu).unwrap(), q(3, 4));
        assert_eq!(test_eval(&MeasTest::full(&x), &mu).unwrap(), mu.norm().unwrap());
        assert_eq!(test_eval(&MeasTest::empty(&x), &mu).unwrap(), qi(0));
        assert_eq!(test_eval(&MeasTest::new(&x, [0, 2]).unwrap(), &mu).unwrap(), q(7, 12));
    }

    #[test]
    fn composition_is_functorial() {
        let x = two();
        let y = DiscreteSpace::numbered(3).unwrap();
        let k = Kernel::new(x.clone(), y.clone(), SparseMat::from_dense(&[
            vec![q(1, 2), q(1, 4), qi(0)],
            vec![qi(0), q(1, 3), q(1, 3)],
        ]))
        .unwrap();
        let l = Kernel::new(y.clone(), x.clone(), SparseMat::from_dense(&[
            vec![qi(1), qi(0)],
            vec![q(1, 2), q(1, 2)],
            vec![qi(0), q(2, 3)],
        ]))
        .unwrap();
        let kl = k.then(&l).unwrap();
        assert_eq!(lin_of_kern(&kl), lin_of_kern(&k).then(&lin_of_kern(&l)).unwrap());
        assert_eq!(kl.rows().to_dense(), vec![vec![q(5, 8), q(1, 8)], vec![q(1, 6), q(7, 18)]]);
    }
}
