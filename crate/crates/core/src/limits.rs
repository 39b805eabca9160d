//! Finite products and equalizers of cones, and the depth-truncated stream
//! space with its shift map.

use std::sync::Arc;

use num_traits::Zero;

use crate::cone::Cone;
use crate::error::{PcohError, Result};
use crate::linalg;
use crate::morph::{MorphMatrix, SparseMat};
use crate::pcs::{Construction, Pcs};
use crate::polytope::{packing_max, Polytope};
use crate::rational::{one, Q};
use crate::vector::RatVec;
use crate::web::{Label, Web};

/// Cartesian product of cones: vectors are concatenations of the factors.
#[derive(Debug, Clone)]
pub struct ProductCone {
    factors: Vec<Cone>,
}

impl ProductCone {
    pub fn new(factors: Vec<Cone>) -> Arc<ProductCone> {
        Arc::new(ProductCone { factors })
    }

    pub fn factors(&self) -> &[Cone] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Cone::dim).sum()
    }

    pub fn split(&self, v: &RatVec) -> Vec<RatVec> {
        let mut off = 0;
        self.factors
            .iter()
            .map(|f| {
                let part = RatVec::from_slice(&v.coords()[off..off + f.dim()]);
                off += f.dim();
                part
            })
            .collect()
    }

    /// Factor index and its offset for a global coordinate.
    pub fn locate(&self, a: usize) -> (usize, usize) {
        let mut off = 0;
        for (k, f) in self.factors.iter().enumerate() {
            if a < off + f.dim() {
                return (k, off);
            }
            off += f.dim();
        }
        panic!("coordinate {a} out of range");
    }

    /// Matrix of the projection onto factor `i`.
    pub fn proj(&self, i: usize) -> SparseMat {
        let off: usize = self.factors[..i].iter().map(Cone::dim).sum();
        let mut m = SparseMat::zeros(self.dim(), self.factors[i].dim());
        for a in 0..self.factors[i].dim() {
            m.set(off + a, a, one());
        }
        m
    }

    /// Pairing of linear maps `h_i : Z → P_i` into the product.
    pub fn tuple(&self, hs: &[SparseMat]) -> Result<SparseMat> {
        if hs.len() != self.factors.len() || hs.is_empty() {
            return Err(PcohError::WebMismatch("tuple: wrong number of components".into()));
        }
        let z = hs[0].nrows();
        let mut m = SparseMat::zeros(z, self.dim());
        let mut off = 0;
        for (h, f) in hs.iter().zip(&self.factors) {
            if h.nrows() != z || h.ncols() != f.dim() {
                return Err(PcohError::WebMismatch("tuple: component shape".into()));
            }
            for (c, a, x) in h.entries() {
                m.set(c, off + a, x.clone());
            }
            off += f.dim();
        }
        Ok(m)
    }
}

/// `{x : f·x = g·x}` inside the cone of `f`'s domain.
#[derive(Debug, Clone)]
pub struct EqualizerCone {
    f: MorphMatrix,
    g: MorphMatrix,
}

impl PartialEq for EqualizerCone {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.g == other.g
    }
}

impl EqualizerCone {
    pub fn new(f: MorphMatrix, g: MorphMatrix) -> Result<Arc<EqualizerCone>> {
        if f.dom().web() != g.dom().web() || f.cod().web() != g.cod().web() {
            return Err(PcohError::NotParallel("equalizer of maps with different domains or codomains".into()));
        }
        Ok(Arc::new(EqualizerCone { f, g }))
    }

    pub fn ambient(&self) -> &Arc<Pcs> {
        self.f.dom()
    }

    pub fn maps(&self) -> (&MorphMatrix, &MorphMatrix) {
        (&self.f, &self.g)
    }

    pub fn contains(&self, v: &RatVec) -> Result<bool> {
        Ok(self.f.apply_vec(v)? == self.g.apply_vec(v)?)
    }

    /// The inclusion into the ambient space (an identity matrix).
    pub fn inclusion(&self) -> SparseMat {
        SparseMat::identity(self.ambient().dim())
    }

    /// Factors `h : Z → ambient` with `f∘h = g∘h` through the inclusion.
    pub fn factor(&self, h: &MorphMatrix) -> Result<SparseMat> {
        let fh = h.then(&self.f)?;
        let gh = h.then(&self.g)?;
        if fh.matrix() != gh.matrix() {
            return Err(PcohError::InvalidMorphism("map does not equalize the pair".into()));
        }
        Ok(h.matrix().clone())
    }

    /// Basis of the linear solution space of `f·x = g·x`.
    pub fn solution_basis(&self) -> Vec<Vec<Q>> {
        let n = self.ambient().dim();
        let m = self.f.cod().dim();
        let mut rows = vec![vec![Q::zero(); n]; m];
        for (a, b, x) in self.f.matrix().entries() {
            rows[b][a] += x;
        }
        for (a, b, x) in self.g.matrix().entries() {
            rows[b][a] -= x;
        }
        linalg::nullspace(&rows, n)
    }
}

/// Sequences over `{0..n-1}` of length at most `d`, in length-then-lexicographic order.
pub fn stream_sequences(n: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(level.len() * n as usize);
        for s in &level {
            for k in 0..n {
                let mut t: Vec<u32> = s.clone();
                t.push(k);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Number of maximal antichains of the `n`-ary prefix tree of depth `d`.
pub fn maximal_antichain_count(n: u32, d: usize) -> u128 {
    (0..d).fold(1u128, |a, _| 1 + a.saturating_pow(n))
}

fn child_index(web: &Web, s: &[u32], k: u32) -> usize {
    let mut t = s.to_vec();
    t.push(k);
    web.position(&Label::Seq(t)).expect("child in web")
}

/// Maximal antichains of the subtree rooted at `s`, as sorted index lists.
fn antichains_below(web: &Web, s: &[u32], n: u32, remaining: usize) -> Vec<Vec<usize>> {
    let root = web.position(&Label::Seq(s.to_vec())).expect("node in web");
    let mut out = vec![vec![root]];
    if remaining == 0 {
        return out;
    }
    let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
    for k in 0..n {
        let mut t = s.to_vec();
        t.push(k);
        let below = antichains_below(web, &t, n, remaining - 1);
        let mut next = Vec::with_capacity(combos.len() * below.len());
        for c in &combos {
            for b in &below {
                let mut m = c.clone();
                m.extend_from_slice(b);
                next.push(m);
            }
        }
        combos = next;
    }
    out.extend(combos);
    out
}

/// The stream space over an alphabet of size `n`, truncated at depth `d`:
/// `u` is in the ball iff its sum over every maximal antichain is at most 1.
/// Generators are the root-to-leaf paths.
pub fn stream_pcs(n: u32, d: usize, max_facets: u128) -> Result<Arc<Pcs>> {
    if n == 0 {
        return Err(PcohError::Malformed("alphabet must be nonempty".into()));
    }
    let count = maximal_antichain_count(n, d);
    if count > max_facets {
        return Err(PcohError::SizeBound(format!(
            "{count} maximal antichains exceed the bound {max_facets}"
        )));
    }
    let seqs = stream_sequences(n, d);
    let web = Web::new(seqs.iter().cloned().map(Label::Seq).collect())?;
    let dim = web.len();
    let h: Vec<RatVec> = antichains_below(&web, &[], n, d)
        .into_iter()
        .map(|idx| {
            let mut r = RatVec::zeros(dim);
            for i in idx {
                r.0[i] = one();
            }
            r
        })
        .collect();
    let v: Vec<RatVec> = seqs
        .iter()
        .filter(|s| s.len() == d)
        .map(|leaf| {
            let mut r = RatVec::zeros(dim);
            for l in 0..=d {
                r.0[web.position(&Label::Seq(leaf[..l].to_vec())).unwrap()] = one();
            }
            r
        })
        .collect();
    let ball = Polytope::from_canonical_trusted(web, h, v);
    Ok(Pcs::build(ball, Construction::Stream { alphabet: n, depth: d }))
}

fn stream_shape(p: &Pcs) -> Result<(u32, usize)> {
    match p.construction() {
        Construction::Stream { alphabet, depth } => Ok((*alphabet, *depth)),
        _ => Err(PcohError::Malformed("expected a stream space".into())),
    }
}

/// The shift `s`: `(s·u)_b = Σ_k u_{b.k}` below depth `d`, identity on leaves.
pub fn stream_shift(p: &Arc<Pcs>) -> Result<MorphMatrix> {
    let (n, d) = stream_shape(p)?;
    let web = p.web();
    let mut m = SparseMat::zeros(p.dim(), p.dim());
    for (b, l) in web.labels().iter().enumerate() {
        let Label::Seq(s) = l else { unreachable!() };
        if s.len() < d {
            for k in 0..n {
                m.set(child_index(web, s, k), b, one());
            }
        } else {
            m.set(b, b, one());
        }
    }
    Ok(MorphMatrix::structural(p.clone(), p.clone(), m))
}

/// Outcome of the stream equalizer computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamReport {
    pub alphabet: u32,
    pub depth: usize,
    pub leaves: usize,
    pub solution_dim: usize,
    pub facets: usize,
    pub checked_measures: usize,
    pub failures: Vec<String>,
}

impl StreamReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Extends a leaf measure to the whole tree by `u_b = Σ_k u_{b.k}`.
pub fn leaf_extension(p: &Pcs, leaf: &RatVec) -> Result<RatVec> {
    let (n, d) = stream_shape(p)?;
    let web = p.web();
    let leaves: Vec<usize> = (0..web.len()).filter(|&i| matches!(web.label(i), Label::Seq(s) if s.len() == d)).collect();
    if leaf.len() != leaves.len() {
        return Err(PcohError::WebMismatch("leaf measure length".into()));
    }
    let mut u = RatVec::zeros(web.len());
    for (i, &a) in leaves.iter().enumerate() {
        u.0[a] = leaf[i].clone();
    }
    for b in (0..web.len()).rev() {
        let Label::Seq(s) = web.label(b) else { unreachable!() };
        if s.len() < d {
            u.0[b] = (0..n).map(|k| u[child_index(web, s, k)].clone()).sum();
        }
    }
    Ok(u)
}

/// Restriction to the leaves.
pub fn leaf_restriction(p: &Pcs, u: &RatVec) -> Result<RatVec> {
    let (_, d) = stream_shape(p)?;
    Ok(RatVec(
        (0..p.dim())
            .filter(|&i| matches!(p.label(i), Label::Seq(s) if s.len() == d))
            .map(|i| u[i].clone())
            .collect(),
    ))
}

/// Equalizer of the shift and the identity on the stream space: checks the
/// solution dimension, the leaf isomorphism, and that the norm (sup over
/// maximal antichains, and independently an LP over the paths) equals the
/// root mass, for the given leaf measures.
pub fn stream_equalizer_demo(n: u32, d: usize, max_facets: u128, measures: &[RatVec]) -> Result<StreamReport> {
    let p = stream_pcs(n, d, max_facets)?;
    let s = stream_shift(&p)?;
    let eq = EqualizerCone::new(s, MorphMatrix::identity(&p))?;
    let basis = eq.solution_basis();
    let leaves = (n as usize).pow(d as u32);
    let mut failures = Vec::new();
    if basis.len() != leaves {
        failures.push(format!("solution dimension {} != {leaves}", basis.len()));
    }
    let cone = Cone::Equalizer(eq.clone());
    let paths = p.ball().canonical_vrep();
    for mu in measures {
        let u = leaf_extension(&p, mu)?;
        if !eq.contains(&u)? {
            failures.push(format!("extension of `{mu}` is not in the equalizer"));
            continue;
        }
        if leaf_restriction(&p, &u)? != *mu {
            failures.push(format!("leaf restriction of `{u}` differs from `{mu}`"));
        }
        let mass = mu.sum();
        if u[0] != mass {
            failures.push(format!("root value {} != mass {}", u[0], mass));
        }
        let norm = cone.norm_of(&u)?;
        if norm != mass {
            failures.push(format!("antichain norm of `{u}` is {norm}, mass {mass}"));
        }
        match packing_max(paths, &u)? {
            Some(v) if v == mass => {}
            other => failures.push(format!("path LP norm of `{u}` is {other:?}, mass {mass}")),
        }
    }
    Ok(StreamReport {
        alphabet: n,
        depth: d,
        leaves,
        solution_dim: basis.len(),
        facets: p.ball().canonical_hrep().len(),
        checked_measures: measures.len(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{lub_chain, ConeElem};
    use crate::polytope::enumerate_vertices;
    use crate::rational::{q, qi};
    use crate::rv;

    #[test]
    fn antichain_counts() {
        assert_eq!(maximal_antichain_count(2, 0), 1);
        assert_eq!(maximal_antichain_count(2, 2), 5);
        assert_eq!(maximal_antichain_count(3, 3), 730);
        let p = stream_pcs(3, 3, 1000).unwrap();
        assert_eq!(p.dim(), 40);
        assert_eq!(p.ball().canonical_hrep().len(), 730);
        assert!(matches!(stream_pcs(3, 3, 100), Err(PcohError::SizeBound(_))));
    }

    #[test]
    fn stream_descriptions_agree() {
        for (n, d) in [(2, 1), (2, 2), (3, 1)] {
            let p = stream_pcs(n, d, 1000).unwrap();
            let from_h = Polytope::from_hrep(p.web().clone(), p.ball().canonical_hrep().to_vec()).unwrap();
            assert_eq!(from_h.canonical_vrep(), p.ball().canonical_vrep());
            let dual = enumerate_vertices(p.dim(), p.ball().canonical_vrep()).unwrap();
            assert_eq!(crate::polytope::irredundant(&dual), p.ball().canonical_hrep());
        }
    }

    #[test]
    fn shift_examples() {
        let p = stream_pcs(2, 1, 100).unwrap();
        let s = stream_shift(&p).unwrap();
        assert_eq!(s.apply_vec(&rv![0, (1, 3), (1, 2)]).unwrap(), rv![(5, 6), (1, 3), (1, 2)]);
        let p0 = stream_pcs(2, 0, 100).unwrap();
        assert_eq!(stream_shift(&p0).unwrap(), MorphMatrix::identity(&p0));
        let p = stream_pcs(2, 2, 100).unwrap();
        let s = stream_shift(&p).unwrap();
        assert!(MorphMatrix::new(p.clone(), p.clone(), s.matrix().clone()).is_ok());
    }

    #[test]
    fn uniform_leaf_measure() {
        let p = stream_pcs(2, 2, 100).unwrap();
        let u = leaf_extension(&p, &rv![(1, 4), (1, 4), (1, 4), (1, 4)]).unwrap();
        assert_eq!(u, rv![1, (1, 2), (1, 2), (1, 4), (1, 4), (1, 4), (1, 4)]);
        let r = stream_equalizer_demo(2, 2, 100, &[rv![(1, 4), (1, 4), (1, 4), (1, 4)], rv![0, 0, 0, 0]]).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.solution_dim, 4);
    }

    #[test]
    fn equalizer_examples() {
        let s = Pcs::snat(2);
        let id = MorphMatrix::identity(&s);
        let same = EqualizerCone::new(id.clone(), id.clone()).unwrap();
        assert_eq!(same.solution_basis().len(), 2);
        let zero = EqualizerCone::new(id.clone(), MorphMatrix::zero(&s, &s)).unwrap();
        assert!(zero.solution_basis().is_empty());
        assert!(!zero.contains(&rv![(1, 2), 0]).unwrap());
        assert!(matches!(
            EqualizerCone::new(id, MorphMatrix::zero(&s, &Pcs::one())),
            Err(PcohError::NotParallel(_))
        ));
    }

    #[test]
    fn equalizer_lubs_match_ambient() {
        let p = stream_pcs(2, 1, 100).unwrap();
        let eq = EqualizerCone::new(stream_shift(&p).unwrap(), MorphMatrix::identity(&p)).unwrap();
        let cone = Cone::Equalizer(eq);
        let chain: Vec<ConeElem> = (1..5)
            .map(|k| cone.element(rv![1, (1, 2), (1, 2)].scale(&(one() - q(1, 1 << k)))).unwrap())
            .collect();
        let lub = lub_chain(&chain).unwrap();
        assert_eq!(lub.vec(), &rv![(15, 16), (15, 32), (15, 32)]);
        assert_eq!(lub.norm().unwrap(), q(15, 16));
        assert!(cone.element(rv![1, 0, 0]).is_err());
    }

    #[test]
    fn product_cone_universal_property() {
        let pc = ProductCone::new(vec![Cone::Pcs(Pcs::snat(2)), Cone::Pcs(Pcs::one())]);
        let h1 = SparseMat::from_dense(&[vec![q(1, 2), qi(0)], vec![qi(0), q(1, 3)]]);
        let h2 = SparseMat::from_dense(&[vec![q(1, 5)], vec![qi(1)]]);
        let t = pc.tuple(&[h1.clone(), h2.clone()]).unwrap();
        assert_eq!(t.then(&pc.proj(0)), h1);
        assert_eq!(t.then(&pc.proj(1)), h2);
        let c = Cone::Product(pc);
        assert_eq!(c.element(rv![(1, 2), (1, 4), (1, 3)]).unwrap().norm().unwrap(), q(3, 4));
    }
}
