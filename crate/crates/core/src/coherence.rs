//! Exact verification of the symmetric monoidal coherence diagrams,
//! naturality squares and functoriality of `⊗`.

use std::sync::Arc;

use crate::error::Result;
use crate::morph::MorphMatrix;
use crate::pcs::Pcs;
use crate::rational::fmt_q;
use crate::tensor::{associator, inverse, left_unitor, right_unitor, symmetry, tensor, tensor_morph};

/// One named equation and its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Compares two parallel maps entry by entry, including their webs.
pub fn equation(name: &'static str, lhs: &MorphMatrix, rhs: &MorphMatrix) -> Check {
    if lhs.dom().web() != rhs.dom().web() || lhs.cod().web() != rhs.cod().web() {
        return Check { name, passed: false, witness: Some("the two sides have different webs".into()) };
    }
    let (l, r) = (lhs.matrix(), rhs.matrix());
    for a in 0..l.nrows() {
        if l.row(a) != r.row(a) {
            let b = (0..l.ncols()).find(|&b| l.get(a, b) != r.get(a, b)).unwrap_or(0);
            let witness = format!(
                "entry ({}, {}): {} vs {}",
                lhs.dom().label(a),
                lhs.cod().label(b),
                fmt_q(&l.get(a, b)),
                fmt_q(&r.get(a, b))
            );
            return Check { name, passed: false, witness: Some(witness) };
        }
    }
    Check { name, passed: true, witness: None }
}

fn id(x: &Arc<Pcs>) -> MorphMatrix {
    MorphMatrix::identity(x)
}

/// Pentagon, triangle and hexagon for `(w, x, y, z)`, symmetry involution,
/// `λ_1 = ρ_1` and the inverse laws.
pub fn structural_checks(w: &Arc<Pcs>, x: &Arc<Pcs>, y: &Arc<Pcs>, z: &Arc<Pcs>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let wx = tensor(w, x)?;
    let xy = tensor(x, y)?;
    let yz = tensor(y, z)?;

    // α_{W,X,Y⊗Z} ∘ α_{W⊗X,Y,Z} = (id_W ⊗ α_{X,Y,Z}) ∘ α_{W,X⊗Y,Z} ∘ (α_{W,X,Y} ⊗ id_Z)
    let lhs = associator(&wx, y, z)?.then(&associator(w, x, &yz)?)?;
    let rhs = tensor_morph(&associator(w, x, y)?, &id(z))?
        .then(&associator(w, &xy, z)?)?
        .then(&tensor_morph(&id(w), &associator(x, y, z)?)?)?;
    out.push(equation("pentagon", &lhs, &rhs));

    // (id_X ⊗ λ_Y) ∘ α_{X,1,Y} = ρ_X ⊗ id_Y
    let one = Pcs::one();
    let lhs = associator(x, &one, y)?.then(&tensor_morph(&id(x), &left_unitor(y)?)?)?;
    let rhs = tensor_morph(&right_unitor(x)?, &id(y))?;
    out.push(equation("triangle", &lhs, &rhs));

    // α_{Y,Z,X} ∘ σ_{X,Y⊗Z} ∘ α_{X,Y,Z} = (id_Y ⊗ σ_{X,Z}) ∘ α_{Y,X,Z} ∘ (σ_{X,Y} ⊗ id_Z)
    let lhs = associator(x, y, z)?.then(&symmetry(x, &yz)?)?.then(&associator(y, z, x)?)?;
    let rhs = tensor_morph(&symmetry(x, y)?, &id(z))?
        .then(&associator(y, x, z)?)?
        .then(&tensor_morph(&id(y), &symmetry(x, z)?)?)?;
    out.push(equation("hexagon", &lhs, &rhs));

    let s = symmetry(x, y)?.then(&symmetry(y, x)?)?;
    out.push(equation("symmetry-involution", &s, &id(&xy)));

    out.push(equation("unitors-at-unit", &left_unitor(&one)?, &right_unitor(&one)?));

    let a = associator(x, y, z)?;
    let aa = a.then(&inverse(&a))?;
    let l = left_unitor(x)?;
    let ll = inverse(&l).then(&l)?;
    out.push(equation("associator-inverse", &aa, &id(a.dom())));
    out.push(equation("unitor-inverse", &ll, &id(x)));
    Ok(out)
}

/// Naturality of `α`, `σ`, `λ`, `ρ` and functoriality of `⊗` for
/// `f : W → X`, `g : X → Y`, `h : Y → Z`, `k : Z → W`.
pub fn naturality_checks(f: &MorphMatrix, g: &MorphMatrix, h: &MorphMatrix, k: &MorphMatrix) -> Result<Vec<Check>> {
    let (w, x, y, z) = (f.dom(), f.cod(), h.dom(), h.cod());
    let mut out = Vec::new();

    // α_{X,Z,W} ∘ ((f ⊗ h) ⊗ k) = (f ⊗ (h ⊗ k)) ∘ α_{W,Y,Z}
    let lhs = tensor_morph(&tensor_morph(f, h)?, k)?.then(&associator(x, z, k.cod())?)?;
    let rhs = associator(w, y, z)?.then(&tensor_morph(f, &tensor_morph(h, k)?)?)?;
    out.push(equation("naturality-associator", &lhs, &rhs));

    // σ_{X,Z} ∘ (f ⊗ h) = (h ⊗ f) ∘ σ_{W,Y}
    let lhs = tensor_morph(f, h)?.then(&symmetry(x, z)?)?;
    let rhs = symmetry(w, y)?.then(&tensor_morph(h, f)?)?;
    out.push(equation("naturality-symmetry", &lhs, &rhs));

    let one = Pcs::one();
    let lhs = tensor_morph(&id(&one), f)?.then(&left_unitor(x)?)?;
    let rhs = left_unitor(w)?.then(f)?;
    out.push(equation("naturality-left-unitor", &lhs, &rhs));

    let lhs = tensor_morph(f, &id(&one))?.then(&right_unitor(x)?)?;
    let rhs = right_unitor(w)?.then(f)?;
    out.push(equation("naturality-right-unitor", &lhs, &rhs));

    // (g ⊗ k) ∘ (f ⊗ h) = (g ∘ f) ⊗ (k ∘ h)
    let lhs = tensor_morph(f, h)?.then(&tensor_morph(g, k)?)?;
    let rhs = tensor_morph(&f.then(g)?, &h.then(k)?)?;
    out.push(equation("functoriality", &lhs, &rhs));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_morphism, random_pcs, rng};

    #[test]
    fn diagrams_commute_on_small_spaces() {
        let mut r = rng(5);
        let spaces: Vec<Arc<Pcs>> = (0..4).map(|i| random_pcs(&mut r, 1 + i % 2, 2, 4).unwrap()).collect();
        let checks = structural_checks(&spaces[0], &spaces[1], &spaces[2], &spaces[3]).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let f = random_morphism(&mut r, &spaces[0], &spaces[1], 4).unwrap();
        let g = random_morphism(&mut r, &spaces[1], &spaces[2], 4).unwrap();
        let h = random_morphism(&mut r, &spaces[2], &spaces[3], 4).unwrap();
        let k = random_morphism(&mut r, &spaces[3], &spaces[0], 4).unwrap();
        let checks = naturality_checks(&f, &g, &h, &k).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn broken_equation_has_a_witness() {
        let x = Pcs::snat(2);
        let half = MorphMatrix::identity(&x).scale(&crate::rational::q(1, 2)).unwrap();
        let c = equation("demo", &half, &MorphMatrix::identity(&x));
        assert!(!c.passed);
        assert_eq!(c.witness.unwrap(), "entry (0, 0): 1/2 vs 1");
    }
}
