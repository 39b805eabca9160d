//! Tensor product of PCSs, bilinear maps and their linearization, currying,
//! and the structural isomorphisms of the symmetric monoidal closed structure.

use std::sync::Arc;

use crate::cone::{Cone, ConeElem};
use crate::error::{PcohError, Result};
use crate::linalg;
use crate::morph::{limpl, MorphMatrix, SparseMat};
use crate::pcs::{Construction, Pcs};
use crate::polytope::Polytope;
use crate::rational::one;
use crate::vector::RatVec;
use crate::web::Label;

/// `X ⊗ Y`: the biorthogonal closure of the pure tensors `g ⊗ h` of generators.
pub fn tensor(x: &Arc<Pcs>, y: &Arc<Pcs>) -> Result<Arc<Pcs>> {
    x.require_exact("tensor")?;
    y.require_exact("tensor")?;
    let web = x.web().product(y.web());
    let mut gens = Vec::new();
    for g in x.ball().canonical_vrep() {
        for h in y.ball().canonical_vrep() {
            gens.push(g.tensor(h));
        }
    }
    let ball = if web.is_empty() { Polytope::from_vrep(web, Vec::new())? } else { Polytope::from_vrep(web, gens)? };
    Ok(Pcs::build(ball, Construction::Tensor(x.clone(), y.clone())))
}

/// `X ⊗ Y` computed as `(X ⊸ Y⊥)⊥`.
pub fn tensor_via_limpl(x: &Arc<Pcs>, y: &Arc<Pcs>) -> Result<Arc<Pcs>> {
    let l = limpl(x, &y.dual()?)?;
    let ball = l.ball().polar()?;
    Ok(Pcs::build(ball, Construction::Tensor(x.clone(), y.clone())))
}

pub fn tensor_factors(p: &Pcs) -> Result<(&Arc<Pcs>, &Arc<Pcs>)> {
    match p.construction() {
        Construction::Tensor(x, y) => Ok((x, y)),
        _ => Err(PcohError::InvalidMorphism("expected a tensor product".into())),
    }
}

pub fn limpl_factors(p: &Pcs) -> Result<(&Arc<Pcs>, &Arc<Pcs>)> {
    match p.construction() {
        Construction::Limpl(x, y) => Ok((x, y)),
        _ => Err(PcohError::InvalidMorphism("expected a linear implication".into())),
    }
}

/// `x ⊗ y` in the cone of `xy = X ⊗ Y`.
pub fn pure_tensor(x: &ConeElem, y: &ConeElem, xy: &Arc<Pcs>) -> Result<ConeElem> {
    let (px, py) = tensor_factors(xy)?;
    if x.vec().len() != px.dim() || y.vec().len() != py.dim() {
        return Err(PcohError::WebMismatch("pure tensor of elements of other spaces".into()));
    }
    Ok(ConeElem::trusted(Cone::Pcs(xy.clone()), x.vec().tensor(y.vec())))
}

/// A bilinear map `X × Y → Z`: `f(x, y)_c = Σ coeffs_{(a,b),c} x_a y_b`.
#[derive(Debug, Clone)]
pub struct BilinMap {
    dom1: Arc<Pcs>,
    dom2: Arc<Pcs>,
    cod: Arc<Pcs>,
    coeffs: SparseMat,
}

impl BilinMap {
    pub fn new(dom1: Arc<Pcs>, dom2: Arc<Pcs>, cod: Arc<Pcs>, coeffs: SparseMat) -> Result<BilinMap> {
        if coeffs.nrows() != dom1.dim() * dom2.dim() || coeffs.ncols() != cod.dim() {
            return Err(PcohError::WebMismatch("bilinear map shape".into()));
        }
        if !coeffs.is_nonneg() {
            return Err(PcohError::InvalidMorphism("negative coefficient".into()));
        }
        for g in dom1.ball().canonical_vrep() {
            for h in dom2.ball().canonical_vrep() {
                let v = coeffs.apply(&g.tensor(h));
                if !cod.member(&v)? {
                    return Err(PcohError::InvalidMorphism(format!(
                        "generators `{g}` and `{h}` are sent to `{v}` outside the codomain ball"
                    )));
                }
            }
        }
        Ok(BilinMap { dom1, dom2, cod, coeffs })
    }

    /// The universal bilinear map `(x, y) ↦ x ⊗ y`.
    pub fn universal(x: &Arc<Pcs>, y: &Arc<Pcs>) -> Result<BilinMap> {
        let xy = tensor(x, y)?;
        Ok(BilinMap { dom1: x.clone(), dom2: y.clone(), coeffs: SparseMat::identity(xy.dim()), cod: xy })
    }

    pub fn dom1(&self) -> &Arc<Pcs> {
        &self.dom1
    }

    pub fn dom2(&self) -> &Arc<Pcs> {
        &self.dom2
    }

    pub fn cod(&self) -> &Arc<Pcs> {
        &self.cod
    }

    pub fn coeffs(&self) -> &SparseMat {
        &self.coeffs
    }

    pub fn apply(&self, x: &RatVec, y: &RatVec) -> Result<RatVec> {
        if x.len() != self.dom1.dim() || y.len() != self.dom2.dim() {
            return Err(PcohError::WebMismatch("bilinear map arguments".into()));
        }
        Ok(self.coeffs.apply(&x.tensor(y)))
    }
}

/// The unique `h : X ⊗ Y → Z` with `h·(x ⊗ y) = f(x, y)`.
pub fn linofbilin(f: &BilinMap) -> Result<MorphMatrix> {
    let xy = tensor(&f.dom1, &f.dom2)?;
    MorphMatrix::new(xy, f.cod.clone(), f.coeffs.clone())
}

/// Whether pure tensors of the vertices of the two balls span the tensor
/// web, so that a linear map is determined by its values on them.
pub fn pure_tensors_span(x: &Pcs, y: &Pcs) -> bool {
    let xv = x.ball().all_vertices();
    let yv = y.ball().all_vertices();
    let rows: Vec<Vec<_>> = xv.iter().flat_map(|g| yv.iter().map(move |h| g.tensor(h).0)).collect();
    linalg::rank(&rows) == x.dim() * y.dim()
}

/// `(X ⊗ Y → Z) ≅ (X → (Y ⊸ Z))` by reindexing `((a,b),c) ↔ (a,(b,c))`.
pub fn curry(t: &MorphMatrix) -> Result<MorphMatrix> {
    let (x, y) = tensor_factors(t.dom())?;
    let z = t.cod();
    let yz = limpl(y, z)?;
    let (ny, nz) = (y.dim(), z.dim());
    let mut m = SparseMat::zeros(x.dim(), yz.dim());
    for (ab, c, v) in t.matrix().entries() {
        let (a, b) = (ab / ny, ab % ny);
        m.set(a, b * nz + c, v.clone());
    }
    Ok(MorphMatrix::structural(x.clone(), yz, m))
}

pub fn uncurry(s: &MorphMatrix) -> Result<MorphMatrix> {
    let (y, z) = limpl_factors(s.cod())?;
    let x = s.dom();
    let xy = tensor(x, y)?;
    let (ny, nz) = (y.dim(), z.dim());
    let mut m = SparseMat::zeros(xy.dim(), nz);
    for (a, bc, v) in s.matrix().entries() {
        let (b, c) = (bc / nz, bc % nz);
        m.set(a * ny + b, c, v.clone());
    }
    Ok(MorphMatrix::structural(xy, z.clone(), m))
}

/// `ev : (X ⊸ Y) ⊗ X → Y`, entry 1 at `(((a,b),a),b)`.
pub fn eval_morphism(x: &Arc<Pcs>, y: &Arc<Pcs>) -> Result<MorphMatrix> {
    eval_on(&limpl(x, y)?)
}

/// Evaluation out of an existing `X ⊸ Y`, sharing its cached descriptions.
pub fn eval_on(xy: &Arc<Pcs>) -> Result<MorphMatrix> {
    let (x, y) = limpl_factors(xy)?;
    let dom = tensor(xy, x)?;
    let (nx, ny) = (x.dim(), y.dim());
    let mut m = SparseMat::zeros(dom.dim(), ny);
    for a in 0..nx {
        for b in 0..ny {
            m.set((a * ny + b) * nx + a, b, one());
        }
    }
    Ok(MorphMatrix::structural(dom, y.clone(), m))
}

/// `f ⊗ g : X ⊗ Y → X' ⊗ Y'`.
pub fn tensor_morph(f: &MorphMatrix, g: &MorphMatrix) -> Result<MorphMatrix> {
    let dom = tensor(f.dom(), g.dom())?;
    let cod = tensor(f.cod(), g.cod())?;
    Ok(MorphMatrix::structural(dom, cod, f.matrix().kron(g.matrix())))
}

/// Permutation matrix between two webs given by a label bijection.
fn relabel(dom: Arc<Pcs>, cod: Arc<Pcs>, f: impl Fn(&Label) -> Option<Label>) -> Result<MorphMatrix> {
    let mut m = SparseMat::zeros(dom.dim(), cod.dim());
    for (i, l) in dom.web().labels().iter().enumerate() {
        let target = f(l).and_then(|t| cod.web().position(&t)).ok_or_else(|| {
            PcohError::WebMismatch(format!("label `{l}` has no image in the target web"))
        })?;
        m.set(i, target, one());
    }
    Ok(MorphMatrix::structural(dom, cod, m))
}

fn split(l: &Label) -> Option<(&Label, &Label)> {
    match l {
        Label::Pair(a, b) => Some((a, b)),
        _ => None,
    }
}

/// `α : (X ⊗ Y) ⊗ Z → X ⊗ (Y ⊗ Z)`.
pub fn associator(x: &Arc<Pcs>, y: &Arc<Pcs>, z: &Arc<Pcs>) -> Result<MorphMatrix> {
    let dom = tensor(&tensor(x, y)?, z)?;
    let cod = tensor(x, &tensor(y, z)?)?;
    relabel(dom, cod, |l| {
        let (ab, c) = split(l)?;
        let (a, b) = split(ab)?;
        Some(Label::pair(a.clone(), Label::pair(b.clone(), c.clone())))
    })
}

/// `σ : X ⊗ Y → Y ⊗ X`.
pub fn symmetry(x: &Arc<Pcs>, y: &Arc<Pcs>) -> Result<MorphMatrix> {
    relabel(tensor(x, y)?, tensor(y, x)?, |l| {
        let (a, b) = split(l)?;
        Some(Label::pair(b.clone(), a.clone()))
    })
}

/// `λ : 1 ⊗ X → X`.
pub fn left_unitor(x: &Arc<Pcs>) -> Result<MorphMatrix> {
    relabel(tensor(&Pcs::one(), x)?, x.clone(), |l| Some(split(l)?.1.clone()))
}

/// `ρ : X ⊗ 1 → X`.
pub fn right_unitor(x: &Arc<Pcs>) -> Result<MorphMatrix> {
    relabel(tensor(x, &Pcs::one())?, x.clone(), |l| Some(split(l)?.0.clone()))
}

/// Inverse of a structural isomorphism: its transpose.
pub fn inverse(iso: &MorphMatrix) -> MorphMatrix {
    MorphMatrix::structural(iso.cod().clone(), iso.dom().clone(), iso.matrix().transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morph::{is_clinfty, with_product};
    use crate::rational::{q, qi};
    use crate::rv;

    fn sq() -> Arc<Pcs> {
        with_product(&[Pcs::one(), Pcs::one()]).unwrap()
    }

    #[test]
    fn square_tensor_square_is_the_cube() {
        let t = tensor(&sq(), &sq()).unwrap();
        assert!(is_clinfty(&t));
        assert_eq!(*t.ball(), Polytope::hypercube(t.web().clone()));
        assert!(t.member(&rv![0, 1, 1, 0]).unwrap());
    }

    #[test]
    fn both_presentations_agree() {
        for (x, y) in [
            (Pcs::snat(2), Pcs::snat(2)),
            (Pcs::snat(2), Pcs::snat_orth(2)),
            (sq(), Pcs::snat(3)),
            (Pcs::snat(1), Pcs::snat(2)),
        ] {
            let a = tensor(&x, &y).unwrap();
            let b = tensor_via_limpl(&x, &y).unwrap();
            assert_eq!(a.ball().canonical_hrep(), b.ball().canonical_hrep());
            assert_eq!(a.ball().canonical_vrep(), b.ball().canonical_vrep());
        }
    }

    #[test]
    fn pure_tensor_examples() {
        let x = sq();
        let xx = tensor(&x, &x).unwrap();
        let e1 = ConeElem::in_pcs(&x, rv![1, 0]).unwrap();
        let e12 = ConeElem::in_pcs(&x, rv![1, 1]).unwrap();
        assert_eq!(pure_tensor(&e1, &e1, &xx).unwrap().vec(), &rv![1, 0, 0, 0]);
        assert_eq!(pure_tensor(&e12, &e12, &xx).unwrap().vec(), &rv![1, 1, 1, 1]);
        let zero = Cone::Pcs(x.clone()).zero();
        assert!(pure_tensor(&zero, &e12, &xx).unwrap().vec().is_zero());
    }

    #[test]
    fn linofbilin_examples() {
        let s = Pcs::snat(2);
        let c = Pcs::snat_orth(2);
        let u = BilinMap::universal(&s, &c).unwrap();
        assert_eq!(linofbilin(&u).unwrap(), MorphMatrix::identity(&tensor(&s, &c).unwrap()));

        let mut m = SparseMat::zeros(4, 1);
        m.set(0, 0, one());
        m.set(3, 0, one());
        let f = BilinMap::new(s.clone(), c.clone(), Pcs::one(), m).unwrap();
        let h = linofbilin(&f).unwrap();
        let (x, y) = (rv![(1, 2), (1, 3)], rv![(1, 4), 1]);
        assert_eq!(h.apply_vec(&x.tensor(&y)).unwrap(), rv![(11, 24)]);
        assert_eq!(f.apply(&x, &y).unwrap(), rv![x.dot(&y)]);
        assert!(pure_tensors_span(&s, &c));
    }

    #[test]
    fn currying_round_trip() {
        let (x, y, z) = (Pcs::snat(2), sq(), Pcs::snat(2));
        let xy = tensor(&x, &y).unwrap();
        let mut m = SparseMat::zeros(4, 2);
        m.set(0, 0, q(1, 2));
        m.set(1, 1, q(1, 2));
        m.set(3, 0, q(1, 3));
        let t = MorphMatrix::new(xy, z.clone(), m).unwrap();
        let c = curry(&t).unwrap();
        assert!(MorphMatrix::new(c.dom().clone(), c.cod().clone(), c.matrix().clone()).is_ok());
        assert_eq!(uncurry(&c).unwrap(), t);
        assert_eq!(c.morph_norm().unwrap(), t.morph_norm().unwrap());
        let ev = eval_morphism(&y, &z).unwrap();
        let beta = tensor_morph(&c, &MorphMatrix::identity(&y)).unwrap().then(&ev).unwrap();
        assert_eq!(beta, t);
        assert_eq!(ev.morph_norm().unwrap(), qi(1));
    }

    #[test]
    fn structural_isos() {
        let (x, y) = (Pcs::snat(2), sq());
        let s = symmetry(&x, &y).unwrap();
        assert_eq!(s.then(&symmetry(&y, &x).unwrap()).unwrap(), MorphMatrix::identity(&tensor(&x, &y).unwrap()));
        let l = left_unitor(&x).unwrap();
        assert_eq!(l.then(&inverse(&l)).unwrap(), MorphMatrix::identity(l.dom()));
        assert_eq!(left_unitor(&Pcs::one()).unwrap(), right_unitor(&Pcs::one()).unwrap());
    }
}
