//! Degree-truncated exponential `!_D X` on multisets of size at most `D`.
//!
//! Promotion uses plain monomials, `(x^!)_m = Π_{a ∈ m} x_a` with
//! multiplicity and no multinomial factor. The ball of `!_D X` is only known
//! from inside (promotions of a few points), so spaces built here are marked
//! inexact and their maps are structural.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{PcohError, Result};
use crate::morph::{limpl, with_product, MorphMatrix, SparseMat};
use crate::pcs::{Construction, Pcs};
use crate::polytope::Polytope;
use crate::rational::{one, Q};
use crate::tensor::limpl_factors;
use crate::vector::RatVec;
use crate::web::{Label, Web};

/// Multisets over `{0..n-1}` of size at most `d`, as nondecreasing index
/// sequences, ordered by size then lexicographically.
pub fn multisets(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &level {
            for a in m.last().copied().unwrap_or(0)..n {
                let mut t = m.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

fn positions(ms: &[Vec<usize>]) -> HashMap<Vec<usize>, usize> {
    ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// `x^m = Π_{a ∈ m} x_a`.
pub fn monomial(x: &RatVec, m: &[usize]) -> Q {
    let mut acc = one();
    for &a in m {
        if x[a].is_zero() {
            return Q::zero();
        }
        acc *= &x[a];
    }
    acc
}

/// `x^!` truncated at degree `d`, indexed like `multisets(x.len(), d)`.
pub fn promote_vec(x: &RatVec, d: usize) -> RatVec {
    RatVec(multisets(x.len(), d).iter().map(|m| monomial(x, m)).collect())
}

/// Generators and the barycenter of the generators (positive everywhere).
fn sample_points(x: &Pcs) -> Vec<RatVec> {
    let gens = x.ball().canonical_vrep().to_vec();
    if gens.is_empty() {
        return vec![RatVec::zeros(x.dim())];
    }
    let w = Q::new(1.into(), (gens.len() as i64).into());
    let bary = gens.iter().fold(RatVec::zeros(x.dim()), |acc, g| acc.add(&g.scale(&w)));
    let mut pts = gens;
    pts.push(bary);
    pts
}

fn multiset_label(base: &Web, m: &[usize]) -> Label {
    Label::multiset(m.iter().map(|&a| base.label(a).clone()).collect())
}

/// `!_D X`.
pub fn bang(x: &Arc<Pcs>, d: usize) -> Result<Arc<Pcs>> {
    let ms = multisets(x.dim(), d);
    let web = Web::new(ms.iter().map(|m| multiset_label(x.web(), m)).collect())?;
    let gens: Vec<RatVec> = sample_points(x).iter().map(|p| promote_vec(p, d)).collect();
    let ball = Polytope::from_vrep(web, gens)?;
    Ok(Pcs::build_inexact(ball, Construction::Bang { base: x.clone(), degree: d }))
}

/// Base space and degree of `!_D X`.
pub fn bang_parts(p: &Pcs) -> Result<(&Arc<Pcs>, usize)> {
    match p.construction() {
        Construction::Bang { base, degree } => Ok((base, *degree)),
        _ => Err(PcohError::Malformed("expected an exponential space".into())),
    }
}

/// `x^!` as an element of `!_D X`; `x` must lie in the (exact) base ball.
pub fn promote(x: &RatVec, bx: &Pcs) -> Result<RatVec> {
    let (base, d) = bang_parts(bx)?;
    base.require_exact("promotion")?;
    if !base.member(x)? {
        return Err(PcohError::NotInBall(format!("cannot promote `{x}`: it is outside the unit ball")));
    }
    Ok(promote_vec(x, d))
}

/// `der : !_D X → X`, `der_{m,a} = δ(m = [a])`.
pub fn dereliction(x: &Arc<Pcs>, d: usize) -> Result<MorphMatrix> {
    if d == 0 {
        return Err(PcohError::Truncation("dereliction needs degree at least 1".into()));
    }
    let bx = bang(x, d)?;
    let mut m = SparseMat::zeros(bx.dim(), x.dim());
    for a in 0..x.dim() {
        m.set(1 + a, a, one());
    }
    Ok(MorphMatrix::structural(bx, x.clone(), m))
}

/// `digg : !_D X → !_{D1}(!_{D2} X)`, entry 1 iff `m = ΣM`; needs `D ≥ D1·D2`.
pub fn digging(x: &Arc<Pcs>, d: usize, d1: usize, d2: usize) -> Result<MorphMatrix> {
    if d < d1 * d2 {
        return Err(PcohError::Truncation(format!(
            "digging into degrees {d1}·{d2} needs source degree {}, got {d}",
            d1 * d2
        )));
    }
    let dom = bang(x, d)?;
    let inner = bang(x, d2)?;
    let cod = bang(&inner, d1)?;
    let small = multisets(x.dim(), d2);
    let pos = positions(&multisets(x.dim(), d));
    let mut m = SparseMat::zeros(dom.dim(), cod.dim());
    for (j, big) in multisets(inner.dim(), d1).iter().enumerate() {
        let mut sum: Vec<usize> = big.iter().flat_map(|&mu| small[mu].iter().copied()).collect();
        sum.sort_unstable();
        m.set(pos[&sum], j, one());
    }
    Ok(MorphMatrix::structural(dom, cod, m))
}

/// `!f : !_D X → !_D Y`, `(!f)_{m,p} = Σ_{(a_i) ↦ m} Π f_{a_i, b_i}` for a fixed
/// enumeration `(b_i)` of `p`.
pub fn bang_functor(f: &MorphMatrix, d: usize) -> Result<MorphMatrix> {
    let (x, y) = (f.dom(), f.cod());
    let dom = bang(x, d)?;
    let cod = bang(y, d)?;
    let pos = positions(&multisets(x.dim(), d));
    let mut m = SparseMat::zeros(dom.dim(), cod.dim());
    for (j, p) in multisets(y.dim(), d).iter().enumerate() {
        // Columns of f that can feed each b_i.
        let feeders: Vec<Vec<(usize, Q)>> = p
            .iter()
            .map(|&b| (0..x.dim()).map(|a| (a, f.entry(a, b))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        for seq in feeders.iter().map(|c| c.iter()).multi_cartesian_product() {
            let mut ms: Vec<usize> = seq.iter().map(|(a, _)| *a).collect();
            ms.sort_unstable();
            let v = seq.iter().fold(one(), |acc, (_, v)| acc * v);
            m.add_to(pos[&ms], j, &v);
        }
        if p.is_empty() {
            m.set(0, j, one());
        }
    }
    Ok(MorphMatrix::structural(dom, cod, m))
}

/// `Seely⁰ : 1 → !⊤`.
pub fn seely0(d: usize) -> Result<MorphMatrix> {
    let cod = bang(&Pcs::top(), d)?;
    let mut m = SparseMat::zeros(1, 1);
    m.set(0, 0, one());
    Ok(MorphMatrix::structural(Pcs::one(), cod, m))
}

/// Pairs `(m1, m2)` of multisets with `|m1| + |m2| ≤ d`.
fn pair_index(np: usize, nq: usize, d: usize) -> Vec<(usize, usize)> {
    let mp = multisets(np, d);
    let mq = multisets(nq, d);
    let mut out = Vec::new();
    for (i, a) in mp.iter().enumerate() {
        for (j, b) in mq.iter().enumerate() {
            if a.len() + b.len() <= d {
                out.push((i, j));
            }
        }
    }
    out
}

/// `!_D P ⊗ !_D Q` restricted to total degree at most `D`.
pub fn bang_pair(p: &Arc<Pcs>, q: &Arc<Pcs>, d: usize) -> Result<Arc<Pcs>> {
    let bp = bang(p, d)?;
    let bq = bang(q, d)?;
    let idx = pair_index(p.dim(), q.dim(), d);
    let web = Web::new(idx.iter().map(|&(i, j)| Label::pair(bp.label(i).clone(), bq.label(j).clone())).collect())?;
    let mut gens = Vec::new();
    for x in sample_points(p) {
        let px = promote_vec(&x, d);
        for y in sample_points(q) {
            let py = promote_vec(&y, d);
            gens.push(RatVec(idx.iter().map(|&(i, j)| &px[i] * &py[j]).collect()));
        }
    }
    let ball = Polytope::from_vrep(web, gens)?;
    Ok(Pcs::build_inexact(ball, Construction::BangPair { left: p.clone(), right: q.clone(), degree: d }))
}

/// `x^! ⊗ y^!` on the restricted web of `bang_pair`.
pub fn promote_pair(x: &RatVec, y: &RatVec, d: usize) -> RatVec {
    let px = promote_vec(x, d);
    let py = promote_vec(y, d);
    RatVec(pair_index(x.len(), y.len(), d).iter().map(|&(i, j)| &px[i] * &py[j]).collect())
}

/// `Seely² : !_D P ⊗ !_D Q → !_D(P & Q)`, the tagged union of multisets.
pub fn seely2(p: &Arc<Pcs>, q: &Arc<Pcs>, d: usize) -> Result<MorphMatrix> {
    let dom = bang_pair(p, q, d)?;
    let cod = bang(&with_product(&[p.clone(), q.clone()])?, d)?;
    let (mp, mq) = (multisets(p.dim(), d), multisets(q.dim(), d));
    let pos = positions(&multisets(p.dim() + q.dim(), d));
    let mut m = SparseMat::zeros(dom.dim(), cod.dim());
    for (k, &(i, j)) in pair_index(p.dim(), q.dim(), d).iter().enumerate() {
        let union: Vec<usize> = mp[i].iter().copied().chain(mq[j].iter().map(|b| b + p.dim())).collect();
        m.set(k, pos[&union], one());
    }
    Ok(MorphMatrix::structural(dom, cod, m))
}

/// Inverse of `Seely²`: splits a multiset by tag.
pub fn seely2_inverse(p: &Arc<Pcs>, q: &Arc<Pcs>, d: usize) -> Result<MorphMatrix> {
    let s = seely2(p, q, d)?;
    Ok(MorphMatrix::structural(s.cod().clone(), s.dom().clone(), s.matrix().transpose()))
}

/// Outcome of a grid search for a point `u` of the base ball with `⟨w, u^!⟩ > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    Refuted { point: RatVec, value: Q },
    NotRefuted { denominator: i64 },
}

/// Grid points of the ball of an exact space with coordinates `k/denom`.
pub fn ball_grid(p: &Pcs, denom: i64) -> Result<Vec<RatVec>> {
    p.require_exact("grid enumeration")?;
    let n = p.dim();
    let mut ranges = Vec::with_capacity(n);
    for a in 0..n {
        let sup = p.ball().support(&RatVec::unit(n, a))?;
        let top = (sup * Q::from_integer(denom.into())).floor().to_integer();
        let top: i64 = top.try_into().map_err(|_| PcohError::SizeBound("grid too large".into()))?;
        ranges.push(0..=top);
    }
    let mut out = Vec::new();
    for c in ranges.into_iter().multi_cartesian_product() {
        let v = RatVec(c.iter().map(|&k| Q::new(k.into(), denom.into())).collect());
        if p.member(&v)? {
            out.push(v);
        }
    }
    if n == 0 {
        out.push(RatVec::zeros(0));
    }
    Ok(out)
}

/// One-sided test of `w ∈ (!_D X)⊥`: searches the base grid for a violation.
pub fn refute_dual(w: &RatVec, bx: &Pcs, denom: i64) -> Result<Refutation> {
    let (base, d) = bang_parts(bx)?;
    if w.len() != bx.dim() {
        return Err(PcohError::WebMismatch("dual vector length".into()));
    }
    let grid = ball_grid(base, denom)?;
    let hit = grid.par_iter().find_first(|u| w.dot(&promote_vec(u, d)) > one());
    Ok(match hit {
        Some(u) => Refutation::Refuted { value: w.dot(&promote_vec(u, d)), point: u.clone() },
        None => Refutation::NotRefuted { denominator: denom },
    })
}

/// Power series `f̂(x)_b = Σ_m f_{m,b} x^m` from `X` to `Y`, of degree at most `D`.
#[derive(Debug, Clone)]
pub struct StableFn {
    dom: Arc<Pcs>,
    cod: Arc<Pcs>,
    degree: usize,
    mat: SparseMat,
}

impl PartialEq for StableFn {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.mat == other.mat
            && self.dom.web() == other.dom.web()
            && self.cod.web() == other.cod.web()
    }
}

impl StableFn {
    /// Checks the shape and that grid points of the domain ball (denominator 2)
    /// and its generators are sent into the codomain ball.
    pub fn new(dom: Arc<Pcs>, cod: Arc<Pcs>, degree: usize, mat: SparseMat) -> Result<StableFn> {
        let f = StableFn::unchecked(dom, cod, degree, mat)?;
        if f.cod.is_exact() {
            let mut pts = ball_grid(&f.dom, 2)?;
            pts.extend(f.dom.ball().canonical_vrep().iter().cloned());
            for x in pts {
                let y = f.eval_unchecked(&x);
                if !f.cod.member(&y)? {
                    return Err(PcohError::InvalidMorphism(format!("`{x}` is sent to `{y}` outside the codomain ball")));
                }
            }
        }
        Ok(f)
    }

    pub(crate) fn unchecked(dom: Arc<Pcs>, cod: Arc<Pcs>, degree: usize, mat: SparseMat) -> Result<StableFn> {
        let rows = multisets(dom.dim(), degree).len();
        if mat.nrows() != rows || mat.ncols() != cod.dim() {
            return Err(PcohError::WebMismatch(format!(
                "stable function matrix is {}x{}, expected {rows}x{}",
                mat.nrows(),
                mat.ncols(),
                cod.dim()
            )));
        }
        if !mat.is_nonneg() {
            return Err(PcohError::InvalidMorphism("negative coefficient".into()));
        }
        Ok(StableFn { dom, cod, degree, mat })
    }

    /// Builds from `(multiset, output coordinate, coefficient)` triples.
    pub fn from_terms(dom: Arc<Pcs>, cod: Arc<Pcs>, degree: usize, terms: &[(Vec<usize>, usize, Q)]) -> Result<StableFn> {
        let ms = multisets(dom.dim(), degree);
        let pos = positions(&ms);
        let mut mat = SparseMat::zeros(ms.len(), cod.dim());
        for (m, b, c) in terms {
            let mut m = m.clone();
            m.sort_unstable();
            let i = *pos.get(&m).ok_or_else(|| {
                PcohError::Truncation(format!("monomial of degree {} exceeds the degree {degree}", m.len()))
            })?;
            mat.add_to(i, *b, c);
        }
        StableFn::new(dom, cod, degree, mat)
    }

    /// A linear map seen as a stable function, `t ∘ der`.
    pub fn from_linear(t: &MorphMatrix) -> Result<StableFn> {
        let der = dereliction(t.dom(), 1)?;
        StableFn::unchecked(t.dom().clone(), t.cod().clone(), 1, der.matrix().then(t.matrix()))
    }

    pub fn identity(x: &Arc<Pcs>) -> Result<StableFn> {
        StableFn::from_linear(&MorphMatrix::identity(x))
    }

    pub fn dom(&self) -> &Arc<Pcs> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Pcs> {
        &self.cod
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.mat
    }

    /// Coefficient of `x^m` in output coordinate `b`.
    pub fn coeff(&self, m: &[usize], b: usize) -> Q {
        let mut m = m.to_vec();
        m.sort_unstable();
        match positions(&multisets(self.dom.dim(), self.degree)).get(&m) {
            Some(&i) => self.mat.get(i, b),
            None => Q::zero(),
        }
    }

    fn eval_unchecked(&self, x: &RatVec) -> RatVec {
        self.mat.apply(&promote_vec(x, self.degree))
    }

    pub fn eval(&self, x: &RatVec) -> Result<RatVec> {
        if x.len() != self.dom.dim() {
            return Err(PcohError::WebMismatch("stable function argument".into()));
        }
        if self.dom.is_exact() && !self.dom.member(x)? {
            return Err(PcohError::NotInBall(format!("`{x}` is outside the domain ball")));
        }
        Ok(self.eval_unchecked(x))
    }

    /// The linear map `!_D X → Y` this function is the matrix of.
    pub fn as_linear(&self) -> Result<MorphMatrix> {
        Ok(MorphMatrix::structural(bang(&self.dom, self.degree)?, self.cod.clone(), self.mat.clone()))
    }

    /// Re-expresses at another degree; fails if a nonzero coefficient would be dropped.
    pub fn at_degree(&self, d: usize) -> Result<StableFn> {
        let src = multisets(self.dom.dim(), self.degree);
        let pos = positions(&multisets(self.dom.dim(), d));
        let mut mat = SparseMat::zeros(pos.len(), self.cod.dim());
        for (i, b, v) in self.mat.entries() {
            let j = *pos.get(&src[i]).ok_or_else(|| {
                PcohError::Truncation(format!(
                    "coefficient of degree {} does not fit in degree {d}",
                    src[i].len()
                ))
            })?;
            mat.set(j, b, v.clone());
        }
        StableFn::unchecked(self.dom.clone(), self.cod.clone(), d, mat)
    }
}

/// `g ∘ f` in the Kleisli category: `g ∘ !f ∘ digg`, at degree `deg f · deg g`.
pub fn kleisli_compose(f: &StableFn, g: &StableFn) -> Result<StableFn> {
    f.cod.web().ensure_same(g.dom.web(), "Kleisli composition")?;
    let d = f.degree * g.degree;
    let digg = digging(&f.dom, d, g.degree, f.degree)?;
    let bf = bang_functor(&f.as_linear()?, g.degree)?;
    let mat = digg.matrix().then(bf.matrix()).then(&g.mat);
    StableFn::unchecked(f.dom.clone(), g.cod.clone(), d, mat)
}

/// Kleisli composite requested at degree `d`; fails when `d` is too small to
/// hold its coefficients.
pub fn kleisli_compose_at(f: &StableFn, g: &StableFn, d: usize) -> Result<StableFn> {
    kleisli_compose(f, g)?.at_degree(d)
}

/// `Q ⇒ R` at degree `D`: the web `!_D Q × R`, with an inner ball made of
/// scaled single-monomial functions.
pub fn stable_fun_space(q: &Arc<Pcs>, r: &Arc<Pcs>, d: usize) -> Result<Arc<Pcs>> {
    q.require_exact("stable function space")?;
    r.require_exact("stable function space")?;
    let bq = bang(q, d)?;
    let web = bq.web().product(r.web());
    let sups: Vec<Q> = (0..q.dim()).map(|a| q.ball().support(&RatVec::unit(q.dim(), a))).collect::<Result<_>>()?;
    let ms = multisets(q.dim(), d);
    let mut gens = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let bound = m.iter().fold(one(), |acc, &a| acc * &sups[a]);
        for c in 0..r.dim() {
            let top = r.ball().support(&RatVec::unit(r.dim(), c))?;
            let mut g = RatVec::zeros(web.len());
            g.0[i * r.dim() + c] = top / &bound;
            gens.push(g);
        }
    }
    let ball = Polytope::from_vrep(web, gens)?;
    Ok(Pcs::build_inexact(ball, Construction::StableFun { dom: q.clone(), cod: r.clone(), degree: d }))
}

/// Domain, codomain and degree of `Q ⇒ R`.
pub fn stable_fun_parts(p: &Pcs) -> Result<(&Arc<Pcs>, &Arc<Pcs>, usize)> {
    match p.construction() {
        Construction::StableFun { dom, cod, degree } => Ok((dom, cod, *degree)),
        _ => Err(PcohError::Malformed("expected a stable function space".into())),
    }
}

/// Exchange `P → (Q ⇒ R)` into `Q ⇒ (P ⊸ R)`: `g_{m,(a,c)} = f_{a,(m,c)}`.
pub fn stab_lin_exchange(f: &MorphMatrix) -> Result<StableFn> {
    let (q, r, d) = stable_fun_parts(f.cod())?;
    let p = f.dom();
    let pr = limpl(p, r)?;
    let nr = r.dim();
    let rows = multisets(q.dim(), d).len();
    let mut mat = SparseMat::zeros(rows, pr.dim());
    for (a, mc, v) in f.matrix().entries() {
        let (m, c) = (mc / nr, mc % nr);
        mat.set(m, a * nr + c, v.clone());
    }
    StableFn::unchecked(q.clone(), pr, d, mat)
}

/// Inverse of `stab_lin_exchange`.
pub fn stab_lin_exchange_inverse(g: &StableFn) -> Result<MorphMatrix> {
    let (p, r) = limpl_factors(g.cod())?;
    let q = g.dom();
    let space = stable_fun_space(q, r, g.degree)?;
    let nr = r.dim();
    let mut mat = SparseMat::zeros(p.dim(), space.dim());
    for (m, ac, v) in g.mat.entries() {
        let (a, c) = (ac / nr, ac % nr);
        mat.set(a, m * nr + c, v.clone());
    }
    Ok(MorphMatrix::structural(p.clone(), space, mat))
}

/// Evaluates a vector of `Q ⇒ R` (indexed `(m, c)`) at `y`.
pub fn eval_fun_vec(v: &RatVec, y: &RatVec, d: usize, r_dim: usize) -> RatVec {
    let py = promote_vec(y, d);
    let mut out = RatVec::zeros(r_dim);
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            out.0[i % r_dim] += x * &py[i / r_dim];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::rv;

    #[test]
    fn multiset_enumeration() {
        assert_eq!(multisets(2, 2), vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(multisets(3, 3).len(), 20);
        assert_eq!(multisets(0, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn promotion_examples() {
        let one_sp = Pcs::one();
        let b = bang(&one_sp, 3).unwrap();
        assert_eq!(b.web().to_string(), "[] [*] [*,*] [*,*,*]");
        assert_eq!(promote(&rv![(1, 2)], &b).unwrap(), rv![1, (1, 2), (1, 4), (1, 8)]);
        assert_eq!(promote(&rv![0], &b).unwrap(), rv![1, 0, 0, 0]);
        let sq = with_product(&[Pcs::one(), Pcs::one()]).unwrap();
        let b2 = bang(&sq, 2).unwrap();
        let p = promote(&rv![(1, 2), (1, 3)], &b2).unwrap();
        // [], [a], [b], [a,a], [a,b], [b,b]
        assert_eq!(p, rv![1, (1, 2), (1, 3), (1, 4), (1, 6), (1, 9)]);
        assert!(matches!(promote(&rv![2], &b), Err(PcohError::NotInBall(_))));
        assert!(!b.is_exact());
    }

    #[test]
    fn dereliction_and_digging() {
        let x = Pcs::one();
        let der = dereliction(&x, 3).unwrap();
        let h = rv![(1, 2)];
        assert_eq!(der.apply_vec(&promote_vec(&h, 3)).unwrap(), h);
        let digg = digging(&x, 2, 2, 1).unwrap();
        let lhs = digg.apply_vec(&promote_vec(&h, 2)).unwrap();
        assert_eq!(lhs, promote_vec(&promote_vec(&h, 1), 2));
        let digg = digging(&x, 4, 2, 2).unwrap();
        let y = rv![(1, 3)];
        let lhs = digg.apply_vec(&promote_vec(&y, 4)).unwrap();
        let rhs = promote_vec(&promote_vec(&y, 2), 2);
        assert_eq!(lhs, rhs);
        // coefficient at [[*],[*]] is x^2
        let inner = bang(&x, 2).unwrap();
        let cod = bang(&inner, 2).unwrap();
        let i = cod.web().position(&Label::parse("[[*],[*]]").unwrap()).unwrap();
        assert_eq!(lhs[i], q(1, 9));
        assert!(matches!(digging(&x, 3, 2, 2), Err(PcohError::Truncation(_))));
    }

    #[test]
    fn functor_examples() {
        let x = with_product(&[Pcs::one(), Pcs::one()]).unwrap();
        let id = MorphMatrix::identity(&x);
        let bid = bang_functor(&id, 3).unwrap();
        assert_eq!(bid, MorphMatrix::identity(&bang(&x, 3).unwrap()));
        let f = MorphMatrix::new(
            x.clone(),
            x.clone(),
            SparseMat::from_dense(&[vec![q(1, 2), q(1, 4)], vec![q(1, 4), q(1, 4)]]),
        )
        .unwrap();
        let u = rv![(1, 2), (2, 3)];
        let bf = bang_functor(&f, 3).unwrap();
        assert_eq!(bf.apply_vec(&promote_vec(&u, 3)).unwrap(), promote_vec(&f.apply_vec(&u).unwrap(), 3));
    }

    #[test]
    fn seely_examples() {
        let s0 = seely0(2).unwrap();
        assert_eq!(s0.apply_vec(&rv![1]).unwrap(), promote_vec(&RatVec::zeros(0), 2));
        let (p, qq) = (Pcs::one(), Pcs::one());
        let s2 = seely2(&p, &qq, 2).unwrap();
        let (x, y) = (rv![(1, 2)], rv![(1, 3)]);
        let lhs = s2.apply_vec(&promote_pair(&x, &y, 2)).unwrap();
        assert_eq!(lhs, promote_vec(&rv![(1, 2), (1, 3)], 2));
        let inv = seely2_inverse(&p, &qq, 2).unwrap();
        assert_eq!(s2.then(&inv).unwrap(), MorphMatrix::identity(s2.dom()));
        assert_eq!(inv.then(&s2).unwrap(), MorphMatrix::identity(s2.cod()));
    }

    #[test]
    fn stable_evaluation() {
        let x = Pcs::one();
        let sq = StableFn::from_terms(x.clone(), x.clone(), 2, &[(vec![0, 0], 0, qi(1))]).unwrap();
        assert_eq!(sq.eval(&rv![(1, 2)]).unwrap(), rv![(1, 4)]);
        let four = kleisli_compose(&sq, &sq).unwrap();
        assert_eq!(four.degree(), 4);
        let expected = StableFn::from_terms(x.clone(), x.clone(), 4, &[(vec![0; 4], 0, qi(1))]).unwrap();
        assert_eq!(four, expected);
        assert!(matches!(kleisli_compose_at(&sq, &sq, 3), Err(PcohError::Truncation(_))));
        let id = StableFn::identity(&x).unwrap();
        assert_eq!(kleisli_compose(&id, &sq).unwrap().at_degree(2).unwrap(), sq);
        assert_eq!(kleisli_compose(&sq, &id).unwrap(), sq);
        let der = StableFn::from_linear(&MorphMatrix::identity(&x)).unwrap();
        assert_eq!(der.eval(&rv![(2, 7)]).unwrap(), rv![(2, 7)]);
    }

    #[test]
    fn exchange_round_trip() {
        let (p, qq, r) = (Pcs::one(), Pcs::one(), Pcs::one());
        let space = stable_fun_space(&qq, &r, 1).unwrap();
        // f(x)(y) = x·(1/2 + y/2)
        let f = MorphMatrix::structural(p.clone(), space, SparseMat::from_dense(&[vec![q(1, 2), q(1, 2)]]));
        let g = stab_lin_exchange(&f).unwrap();
        assert_eq!(stab_lin_exchange_inverse(&g).unwrap(), f);
        let (x, y) = (rv![(1, 3)], rv![(1, 2)]);
        let lhs = crate::morph::MorphMatrix::structural(p.clone(), r.clone(), SparseMat::unflatten(&g.eval(&y).unwrap(), 1, 1))
            .apply_vec(&x)
            .unwrap();
        let rhs = eval_fun_vec(&f.apply_vec(&x).unwrap(), &y, 1, 1);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, rv![(1, 4)]);
    }

    #[test]
    fn dual_refutation() {
        let b = bang(&Pcs::one(), 2).unwrap();
        // <w, u^!> = 2u² exceeds 1 at u = 1.
        match refute_dual(&rv![0, 0, 2], &b, 4).unwrap() {
            Refutation::Refuted { point, value } => {
                assert_eq!(point, rv![(3, 4)]);
                assert_eq!(value, q(9, 8));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(refute_dual(&rv![(1, 2), (1, 2), 0], &b, 4).unwrap(), Refutation::NotRefuted { denominator: 4 });
    }
}
