//! Morphisms of PCOH as nonnegative sparse matrices, `⊸` and `&`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::cone::{Cone, ConeElem};
use crate::error::{PcohError, Result};
use crate::pcs::{Construction, Pcs};
use crate::polytope::Polytope;
use crate::rational::{one, Q};
use crate::vector::RatVec;
use crate::web::{Label, Web};

/// Sparse matrix with rows indexed by the domain and columns by the
/// codomain; `(t·x)_b = Σ_a t_{a,b} x_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    cols: usize,
    rows: Vec<BTreeMap<usize, Q>>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> SparseMat {
        SparseMat { cols, rows: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> SparseMat {
        let mut m = SparseMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, one());
        }
        m
    }

    /// Permutation matrix sending `i` to `f(i)`.
    pub fn permutation(n: usize, f: impl Fn(usize) -> usize) -> SparseMat {
        let mut m = SparseMat::zeros(n, n);
        for i in 0..n {
            m.set(i, f(i), one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> SparseMat {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> Q {
        self.rows[a].get(&b).cloned().unwrap_or_else(Q::zero)
    }

    /// Sets an entry; zero removes it.
    pub fn set(&mut self, a: usize, b: usize, x: Q) {
        assert!(b < self.cols, "column out of range");
        if x.is_zero() {
            self.rows[a].remove(&b);
        } else {
            self.rows[a].insert(b, x);
        }
    }

    pub fn add_to(&mut self, a: usize, b: usize, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.rows[a].entry(b).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.rows[a].remove(&b);
        }
    }

    pub fn row(&self, a: usize) -> &BTreeMap<usize, Q> {
        &self.rows[a]
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().map(move |(b, x)| (a, *b, x)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.entries().all(|(_, _, x)| !x.is_negative())
    }

    pub fn apply(&self, x: &RatVec) -> RatVec {
        assert_eq!(x.len(), self.nrows(), "vector length");
        let mut out = RatVec::zeros(self.cols);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, t) in &self.rows[a] {
                out.0[*b] += t * xa;
            }
        }
        out
    }

    /// `self` followed by `next`: `(next ∘ self)_{a,c} = Σ_b self_{a,b} next_{b,c}`.
    pub fn then(&self, next: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, next.nrows(), "inner dimension");
        let mut out = SparseMat::zeros(self.nrows(), next.cols);
        for (a, r) in self.rows.iter().enumerate() {
            for (b, s) in r {
                for (c, t) in &next.rows[*b] {
                    out.add_to(a, *c, &(s * t));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zeros(self.cols, self.nrows());
        for (a, b, x) in self.entries() {
            out.set(b, a, x.clone());
        }
        out
    }

    /// Kronecker product on row-major product webs.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        let mut out = SparseMat::zeros(self.nrows() * other.nrows(), self.cols * other.cols);
        for (a, b, x) in self.entries() {
            for (a2, b2, y) in other.entries() {
                out.set(a * other.nrows() + a2, b * other.cols + b2, x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> SparseMat {
        let mut out = SparseMat::zeros(self.nrows(), self.cols);
        for (a, b, x) in self.entries() {
            out.set(a, b, x * c);
        }
        out
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        let mut out = self.clone();
        for (a, b, x) in other.entries() {
            out.add_to(a, b, x);
        }
        out
    }

    /// Entry `(a,b)` at coordinate `a * ncols + b`.
    pub fn flatten(&self) -> RatVec {
        let mut v = RatVec::zeros(self.nrows() * self.cols);
        for (a, b, x) in self.entries() {
            v.0[a * self.cols + b] = x.clone();
        }
        v
    }

    pub fn unflatten(v: &RatVec, rows: usize, cols: usize) -> SparseMat {
        assert_eq!(v.len(), rows * cols);
        let mut m = SparseMat::zeros(rows, cols);
        for (i, x) in v.iter().enumerate() {
            m.set(i / cols.max(1), i % cols.max(1), x.clone());
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        (0..self.nrows()).map(|a| (0..self.cols).map(|b| self.get(a, b)).collect()).collect()
    }
}

/// A matrix between two PCSs, checked to map the domain ball into the
/// codomain ball.
#[derive(Debug, Clone)]
pub struct MorphMatrix {
    dom: Arc<Pcs>,
    cod: Arc<Pcs>,
    mat: SparseMat,
}

impl PartialEq for MorphMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat && self.dom.web() == other.dom.web() && self.cod.web() == other.cod.web()
    }
}

impl MorphMatrix {
    pub fn new(dom: Arc<Pcs>, cod: Arc<Pcs>, mat: SparseMat) -> Result<MorphMatrix> {
        let m = MorphMatrix::shaped(dom, cod, mat)?;
        m.dom.require_exact("morphism check")?;
        m.cod.require_exact("morphism check")?;
        for g in m.dom.ball().canonical_vrep() {
            let image = m.mat.apply(g);
            if !m.cod.member(&image)? {
                return Err(PcohError::InvalidMorphism(format!(
                    "generator `{g}` is sent to `{image}` outside the codomain ball"
                )));
            }
        }
        Ok(m)
    }

    fn shaped(dom: Arc<Pcs>, cod: Arc<Pcs>, mat: SparseMat) -> Result<MorphMatrix> {
        if mat.nrows() != dom.dim() || mat.ncols() != cod.dim() {
            return Err(PcohError::WebMismatch(format!(
                "matrix is {}x{} but the webs have sizes {} and {}",
                mat.nrows(),
                mat.ncols(),
                dom.dim(),
                cod.dim()
            )));
        }
        if !mat.is_nonneg() {
            return Err(PcohError::InvalidMorphism("negative matrix entry".into()));
        }
        Ok(MorphMatrix { dom, cod, mat })
    }

    /// Shape-checked only; used for maps that are morphisms by construction
    /// (structural isomorphisms, exponential maps).
    pub(crate) fn structural(dom: Arc<Pcs>, cod: Arc<Pcs>, mat: SparseMat) -> MorphMatrix {
        MorphMatrix::shaped(dom, cod, mat).expect("structural map has the right shape")
    }

    pub fn identity(x: &Arc<Pcs>) -> MorphMatrix {
        MorphMatrix::structural(x.clone(), x.clone(), SparseMat::identity(x.dim()))
    }

    pub fn zero(dom: &Arc<Pcs>, cod: &Arc<Pcs>) -> MorphMatrix {
        MorphMatrix::structural(dom.clone(), cod.clone(), SparseMat::zeros(dom.dim(), cod.dim()))
    }

    pub fn dom(&self) -> &Arc<Pcs> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Pcs> {
        &self.cod
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.mat
    }

    pub fn entry(&self, a: usize, b: usize) -> Q {
        self.mat.get(a, b)
    }

    pub fn apply_vec(&self, x: &RatVec) -> Result<RatVec> {
        if x.len() != self.dom.dim() {
            return Err(PcohError::WebMismatch(format!(
                "vector of length {} applied to a map on a web of size {}",
                x.len(),
                self.dom.dim()
            )));
        }
        Ok(self.mat.apply(x))
    }

    pub fn apply(&self, x: &ConeElem) -> Result<ConeElem> {
        match x.cone() {
            Cone::Pcs(p) if p.web() == self.dom.web() => {}
            Cone::Measure(m) if m.web() == self.dom.web() => {}
            _ => return Err(PcohError::WebMismatch("apply: element is not in the domain cone".into())),
        }
        Ok(ConeElem::trusted(Cone::Pcs(self.cod.clone()), self.mat.apply(x.vec())))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MorphMatrix) -> Result<MorphMatrix> {
        self.cod.web().ensure_same(next.dom.web(), "compose")?;
        Ok(MorphMatrix::structural(self.dom.clone(), next.cod.clone(), self.mat.then(&next.mat)))
    }

    /// `t ∘ s` with `s = self` first.
    pub fn compose(s: &MorphMatrix, t: &MorphMatrix) -> Result<MorphMatrix> {
        s.then(t)
    }

    pub fn scale(&self, c: &Q) -> Result<MorphMatrix> {
        if c.is_negative() || c > &one() {
            return Err(PcohError::InvalidMorphism("scalar outside [0,1]".into()));
        }
        Ok(MorphMatrix::structural(self.dom.clone(), self.cod.clone(), self.mat.scale(c)))
    }

    /// The matrix as an element over the web of `dom ⊸ cod`.
    pub fn flatten(&self) -> RatVec {
        self.mat.flatten()
    }

    /// `sup_{u ∈ ball(dom)} ‖t·u‖`, attained at a generator.
    pub fn morph_norm(&self) -> Result<Q> {
        self.dom.require_exact("morphism norm")?;
        let cod = Cone::Pcs(self.cod.clone());
        let mut best = Q::zero();
        for g in self.dom.ball().canonical_vrep() {
            let n = cod.norm_of(&self.mat.apply(g))?;
            if n > best {
                best = n;
            }
        }
        Ok(best)
    }
}

impl fmt::Display for MorphMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b, x) in self.mat.entries() {
            writeln!(f, "{} {} {}", self.dom.label(a), self.cod.label(b), crate::rational::fmt_q(x))?;
        }
        Ok(())
    }
}

/// `X ⊸ Y`: matrices `t` with `⟨t·g, w⟩ ≤ 1` for every generator `g` of X and
/// every facet `w` of Y, i.e. facets `g ⊗ w` on the web `|X| × |Y|`.
pub fn limpl(x: &Arc<Pcs>, y: &Arc<Pcs>) -> Result<Arc<Pcs>> {
    x.require_exact("linear implication")?;
    y.require_exact("linear implication")?;
    let web = x.web().product(y.web());
    let mut rows = Vec::new();
    for g in x.ball().canonical_vrep() {
        for w in y.ball().canonical_hrep() {
            rows.push(g.tensor(w));
        }
    }
    let ball = Polytope::from_hrep(web, rows)?;
    Ok(Pcs::build(ball, Construction::Limpl(x.clone(), y.clone())))
}

/// Labels of `&_i X_i`: `(i, a)`.
fn with_web(xs: &[Arc<Pcs>]) -> Result<Arc<Web>> {
    let mut labels = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for l in x.web().labels() {
            labels.push(Label::pair(Label::atom(i.to_string()), l.clone()));
        }
    }
    Web::new(labels)
}

/// Cartesian product `&_i X_i`.
pub fn with_product(xs: &[Arc<Pcs>]) -> Result<Arc<Pcs>> {
    for x in xs {
        x.require_exact("cartesian product")?;
    }
    let web = with_web(xs)?;
    let balls: Vec<&Polytope> = xs.iter().map(|x| x.ball()).collect();
    let ball = Polytope::product(web, &balls)?;
    Ok(Pcs::build(ball, Construction::With(xs.to_vec())))
}

fn with_factors(p: &Arc<Pcs>) -> Result<&[Arc<Pcs>]> {
    match p.construction() {
        Construction::With(xs) => Ok(xs),
        _ => Err(PcohError::InvalidMorphism("expected a cartesian product".into())),
    }
}

fn with_offset(xs: &[Arc<Pcs>], i: usize) -> usize {
    xs[..i].iter().map(|x| x.dim()).sum()
}

/// Projection `&_j X_j → X_i`.
pub fn proj(p: &Arc<Pcs>, i: usize) -> Result<MorphMatrix> {
    let xs = with_factors(p)?;
    let xi = xs.get(i).ok_or_else(|| PcohError::Malformed(format!("no factor {i}")))?;
    let off = with_offset(xs, i);
    let mut m = SparseMat::zeros(p.dim(), xi.dim());
    for a in 0..xi.dim() {
        m.set(off + a, a, one());
    }
    Ok(MorphMatrix::structural(p.clone(), xi.clone(), m))
}

/// Pairing `⟨f_i⟩ : Z → &_i X_i`.
pub fn tuple(p: &Arc<Pcs>, fs: &[MorphMatrix]) -> Result<MorphMatrix> {
    let xs = with_factors(p)?;
    if fs.len() != xs.len() || fs.is_empty() {
        return Err(PcohError::WebMismatch("tuple: wrong number of components".into()));
    }
    let z = fs[0].dom().clone();
    let mut m = SparseMat::zeros(z.dim(), p.dim());
    for (i, f) in fs.iter().enumerate() {
        f.dom().web().ensure_same(z.web(), "tuple domain")?;
        f.cod().web().ensure_same(xs[i].web(), "tuple component")?;
        let off = with_offset(xs, i);
        for (c, a, x) in f.matrix().entries() {
            m.set(c, off + a, x.clone());
        }
    }
    Ok(MorphMatrix::structural(z, p.clone(), m))
}

/// Whether the ball is the full hypercube `{u : u_a ≤ 1}`.
pub fn is_clinfty(x: &Pcs) -> bool {
    let n = x.dim();
    if n == 0 {
        return true;
    }
    x.is_exact() && x.ball().canonical_vrep() == [RatVec::constant(n, one())]
}
