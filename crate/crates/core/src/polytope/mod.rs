//! Down-closed rational polytopes in the nonnegative orthant.
//!
//! A [`Polytope`] is described by an H-representation (nonnegative
//! functionals `w`, each meaning `<u, w> <= 1`, plus the implicit `u >= 0`),
//! a V-representation (generators, meaning the coordinatewise down-set of the
//! convex hull of the generators and the origin), or both.
//!
//! The two descriptions are polar to each other: the set described by `H`
//! is exactly the polar of the set generated by `H`, so polarity swaps the
//! two lists and conversion is a single vertex-enumeration routine run in
//! either direction.

mod dd;
pub mod format;

use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{PcohError, Result};
use crate::lp::{self, LpOutcome};
use crate::rational::{one, Q};
use crate::vector::RatVec;
use crate::web::Web;

pub use dd::vertices as enumerate_vertices;

#[derive(Debug, Clone)]
pub struct Polytope {
    web: Arc<Web>,
    hrep: Option<Vec<RatVec>>,
    vrep: Option<Vec<RatVec>>,
    chrep: OnceLock<Arc<Vec<RatVec>>>,
    cvrep: OnceLock<Arc<Vec<RatVec>>>,
    vertices: OnceLock<Arc<Vec<RatVec>>>,
}

impl PartialEq for Polytope {
    /// Set equality, decided on canonical forms.
    fn eq(&self, other: &Self) -> bool {
        if self.web != other.web {
            return false;
        }
        if self.hrep.is_some() && self.hrep == other.hrep && self.vrep == other.vrep {
            return true;
        }
        if self.vrep.is_some() && self.vrep == other.vrep && self.hrep == other.hrep {
            return true;
        }
        if self.vrep.is_some() && other.vrep.is_some() {
            return self.canonical_vrep() == other.canonical_vrep();
        }
        self.canonical_hrep() == other.canonical_hrep()
    }
}

impl Polytope {
    pub fn from_hrep(web: Arc<Web>, rows: Vec<RatVec>) -> Result<Polytope> {
        check_rows(&web, &rows, "H")?;
        for a in 0..web.len() {
            if !rows.iter().any(|w| w[a].is_positive()) {
                return Err(PcohError::DegenerateCoordinate(format!(
                    "coordinate `{}` is unbounded: no facet constrains it",
                    web.label(a)
                )));
            }
        }
        Ok(Polytope::raw(web, Some(rows), None))
    }

    pub fn from_vrep(web: Arc<Web>, gens: Vec<RatVec>) -> Result<Polytope> {
        check_rows(&web, &gens, "V")?;
        for a in 0..web.len() {
            if !gens.iter().any(|g| g[a].is_positive()) {
                return Err(PcohError::DegenerateCoordinate(format!(
                    "coordinate `{}` has supremum 0 over the generators",
                    web.label(a)
                )));
            }
        }
        Ok(Polytope::raw(web, None, Some(gens)))
    }

    /// Both descriptions; checked to denote the same set.
    pub fn from_both(web: Arc<Web>, hrep: Vec<RatVec>, vrep: Vec<RatVec>) -> Result<Polytope> {
        let from_h = Polytope::from_hrep(web.clone(), hrep.clone())?;
        let from_v = Polytope::from_vrep(web.clone(), vrep.clone())?;
        for g in &vrep {
            if !from_h.member(g)? {
                return Err(PcohError::Malformed(format!("generator `{g}` violates the H-representation")));
            }
        }
        for v in from_h.all_vertices().iter() {
            if !from_v.member(v)? {
                return Err(PcohError::Malformed(format!(
                    "vertex `{v}` of the H-representation is not generated by the V-representation"
                )));
            }
        }
        Ok(Polytope::raw(web, Some(hrep), Some(vrep)))
    }

    /// Both descriptions, trusted to be irredundant and to agree (families
    /// whose facets and vertices are known in closed form).
    pub(crate) fn from_canonical_trusted(web: Arc<Web>, mut hrep: Vec<RatVec>, mut vrep: Vec<RatVec>) -> Polytope {
        hrep.sort();
        vrep.sort();
        let p = Polytope::raw(web, Some(hrep.clone()), Some(vrep.clone()));
        let _ = p.chrep.set(Arc::new(hrep));
        let _ = p.cvrep.set(Arc::new(vrep));
        p
    }

    fn raw(web: Arc<Web>, hrep: Option<Vec<RatVec>>, vrep: Option<Vec<RatVec>>) -> Polytope {
        Polytope {
            web,
            hrep,
            vrep,
            chrep: OnceLock::new(),
            cvrep: OnceLock::new(),
            vertices: OnceLock::new(),
        }
    }

    /// `{u : u_a <= 1}`.
    pub fn hypercube(web: Arc<Web>) -> Polytope {
        let n = web.len();
        let h = (0..n).map(|i| RatVec::unit(n, i)).collect();
        let v = vec![RatVec::constant(n, one())];
        Polytope::from_canonical_trusted(web, h, v)
    }

    /// `{u : sum u_a <= 1}`.
    pub fn simplex(web: Arc<Web>) -> Polytope {
        let n = web.len();
        let h = vec![RatVec::constant(n, one())];
        let v = (0..n).map(|i| RatVec::unit(n, i)).collect();
        Polytope::from_canonical_trusted(web, h, v)
    }

    pub fn web(&self) -> &Arc<Web> {
        &self.web
    }

    pub fn dim(&self) -> usize {
        self.web.len()
    }

    pub fn hrep(&self) -> Option<&[RatVec]> {
        self.hrep.as_deref()
    }

    pub fn vrep(&self) -> Option<&[RatVec]> {
        self.vrep.as_deref()
    }

    /// Irredundant facet functionals, lexicographically sorted.
    pub fn canonical_hrep(&self) -> &[RatVec] {
        self.chrep.get_or_init(|| {
            Arc::new(match &self.hrep {
                Some(h) => irredundant(h),
                None => {
                    let v = self.canonical_vrep().to_vec();
                    let dual = dd::vertices(self.dim(), &v).expect("validated polytope has positive suprema");
                    irredundant(&dual)
                }
            })
        })
    }

    /// Maximal generators (non-dominated vertices), lexicographically sorted.
    pub fn canonical_vrep(&self) -> &[RatVec] {
        self.cvrep.get_or_init(|| {
            Arc::new(match &self.vrep {
                Some(v) => irredundant(v),
                None => irredundant(&self.all_vertices()),
            })
        })
    }

    /// Every vertex of the polytope, including dominated ones and the origin.
    pub fn all_vertices(&self) -> Arc<Vec<RatVec>> {
        self.vertices
            .get_or_init(|| {
                let h = self.canonical_hrep();
                Arc::new(dd::vertices(self.dim(), h).expect("validated polytope is bounded"))
            })
            .clone()
    }

    fn known_hrep(&self) -> Option<&[RatVec]> {
        self.hrep.as_deref().or_else(|| self.chrep.get().map(|h| h.as_slice()))
    }

    fn known_vrep(&self) -> Option<&[RatVec]> {
        self.vrep.as_deref().or_else(|| self.cvrep.get().map(|v| v.as_slice()))
    }

    /// Facet count including the coordinate facets `u_a >= 0`, which are all
    /// facets of a full-dimensional down-closed polytope.
    pub fn facet_count(&self) -> usize {
        self.canonical_hrep().len() + self.dim()
    }

    fn check_len(&self, u: &RatVec) -> Result<()> {
        if u.len() != self.dim() {
            return Err(PcohError::WebMismatch(format!(
                "vector of length {} against polytope of dimension {}",
                u.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Exact membership test.
    pub fn member(&self, u: &RatVec) -> Result<bool> {
        self.check_len(u)?;
        if !u.is_nonneg() {
            return Ok(false);
        }
        if let Some(h) = self.known_hrep() {
            return Ok(h.iter().all(|w| u.dot(w) <= one()));
        }
        Ok(in_down_hull(u, self.vrep.as_ref().unwrap()))
    }

    /// The polar set `{u' >= 0 : <u, u'> <= 1 for all u in self}` with both
    /// representations populated.
    pub fn polar(&self) -> Result<Polytope> {
        let h = Arc::new(self.canonical_hrep().to_vec());
        let v = Arc::new(self.canonical_vrep().to_vec());
        let p = Polytope::raw(self.web.clone(), Some(v.to_vec()), Some(h.to_vec()));
        let _ = p.chrep.set(v);
        let _ = p.cvrep.set(h);
        Ok(p)
    }

    /// Both representations, canonical and sorted.
    pub fn convert(&self) -> Polytope {
        let h = Arc::new(self.canonical_hrep().to_vec());
        let v = Arc::new(self.canonical_vrep().to_vec());
        let p = Polytope::raw(self.web.clone(), Some(h.to_vec()), Some(v.to_vec()));
        let _ = p.chrep.set(h);
        let _ = p.cvrep.set(v);
        if let Some(v) = self.vertices.get() {
            let _ = p.vertices.set(v.clone());
        }
        p
    }

    /// `max { <u, w> : u in self }`. Negative entries of `w` are clipped,
    /// since the set is down-closed.
    pub fn support(&self, w: &RatVec) -> Result<Q> {
        self.check_len(w)?;
        let wp = RatVec(w.iter().map(|x| if x.is_negative() { Q::zero() } else { x.clone() }).collect());
        if let Some(v) = self.known_vrep() {
            return Ok(v.iter().map(|g| g.dot(&wp)).max().unwrap_or_else(Q::zero));
        }
        let h = self.hrep.as_ref().unwrap();
        let a: Vec<Vec<Q>> = h.iter().map(|r| r.0.clone()).collect();
        let b = vec![one(); a.len()];
        match lp::maximize(&wp.0, &a, &b)? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Unbounded { .. } => Err(PcohError::DegenerateCoordinate("support is unbounded".into())),
        }
    }

    /// A certificate `u'` in the polar with `<v, u'> > 1` when `v` is outside,
    /// restricted to the support of `v`; `None` when `v` is a member.
    pub fn separate(&self, v: &RatVec) -> Result<Option<RatVec>> {
        self.check_len(v)?;
        if !v.is_nonneg() {
            return Err(PcohError::Malformed("separate: vector has negative coordinates".into()));
        }
        if self.member(v)? {
            return Ok(None);
        }
        let cert = if let Some(h) = self.known_hrep() {
            let best = h.iter().max_by(|a, b| v.dot(a).cmp(&v.dot(b)).then_with(|| b.cmp(a))).unwrap();
            best.restrict_to_support(v)
        } else {
            polar_lp_certificate(v, self.vrep.as_ref().unwrap())
                .expect("non-member has a certificate")
                .restrict_to_support(v)
        };
        debug_assert!(v.dot(&cert) > one());
        Ok(Some(cert))
    }
}

fn check_rows(web: &Web, rows: &[RatVec], what: &str) -> Result<()> {
    for r in rows {
        if r.len() != web.len() {
            return Err(PcohError::WebMismatch(format!(
                "{what}-row of length {} on a web of size {}",
                r.len(),
                web.len()
            )));
        }
        if !r.is_nonneg() {
            return Err(PcohError::Malformed(format!("{what}-row `{r}` has a negative coordinate")));
        }
    }
    Ok(())
}

/// `max <w, u>` over `{u >= 0 : <r, u> <= 1 for r in rows}` by the simplex
/// method alone; `None` when unbounded.
pub fn packing_max(rows: &[RatVec], w: &RatVec) -> Result<Option<Q>> {
    let a: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    let b = vec![one(); a.len()];
    Ok(lp::maximize(&w.0, &a, &b)?.value().cloned())
}

/// `u` lies in the down-closed convex hull of `gens` and the origin.
///
/// Decided through the polar: `u` is a member iff `max <u, w>` over
/// `{w >= 0 : <g, w> <= 1}` is at most 1.
pub fn in_down_hull(u: &RatVec, gens: &[RatVec]) -> bool {
    if u.is_zero() {
        return true;
    }
    if !u.is_nonneg() {
        return false;
    }
    if gens.iter().any(|g| u.le_coords(g)) {
        return true;
    }
    let a: Vec<Vec<Q>> = gens.iter().map(|g| g.0.clone()).collect();
    let b = vec![one(); a.len()];
    match lp::maximize(&u.0, &a, &b).expect("well-formed LP") {
        LpOutcome::Optimal { value, .. } => value <= one(),
        LpOutcome::Unbounded { .. } => false,
    }
}

/// `w >= 0` with `<g, w> <= 1` for every generator and `<v, w> > 1`, if any.
fn polar_lp_certificate(v: &RatVec, gens: &[RatVec]) -> Option<RatVec> {
    let n = v.len();
    let a: Vec<Vec<Q>> = gens.iter().map(|g| g.0.clone()).collect();
    let b = vec![one(); a.len()];
    match lp::maximize(&v.0, &a, &b).ok()? {
        LpOutcome::Optimal { value, x, .. } => (value > one()).then_some(RatVec(x)),
        LpOutcome::Unbounded { ray } => {
            let d = RatVec(ray);
            let s = v.dot(&d);
            debug_assert!(s.is_positive());
            let c = Q::from_integer(2.into()) / s;
            let w = d.scale(&c);
            debug_assert_eq!(w.len(), n);
            Some(w)
        }
    }
}

/// Removes duplicates, zero rows, coordinatewise-dominated rows and rows in
/// the down-hull of the others (LP certificate). Output sorted.
pub fn irredundant(rows: &[RatVec]) -> Vec<RatVec> {
    let mut rs: Vec<RatVec> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    rs.sort();
    rs.dedup();
    let undominated: Vec<RatVec> = rs
        .iter()
        .enumerate()
        .filter(|(i, r)| !rs.iter().enumerate().any(|(j, o)| j != *i && r.le_coords(o)))
        .map(|(_, r)| r.clone())
        .collect();
    let keep: Vec<bool> = (0..undominated.len())
        .map(|i| {
            let r = &undominated[i];
            // A coordinate where r strictly beats all others certifies it.
            let unique = (0..r.len()).any(|a| {
                undominated
                    .iter()
                    .enumerate()
                    .all(|(j, o)| j == i || o[a] < r[a])
            });
            if unique {
                return true;
            }
            let others: Vec<RatVec> = undominated
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| o.clone())
                .collect();
            !in_down_hull(r, &others)
        })
        .collect();
    undominated
        .into_iter()
        .zip(keep)
        .filter_map(|(r, k)| k.then_some(r))
        .sorted()
        .collect()
}

/// Certificate separating `v` from the convex hull of `points` and the origin
/// (no down-closure): a signed functional `w` with `<p, w> <= 1` for every
/// point and `<v, w> > 1`.
pub fn separate_from_hull(v: &RatVec, points: &[RatVec]) -> Result<Option<Vec<Q>>> {
    let n = v.len();
    if points.iter().any(|p| p.len() != n) {
        return Err(PcohError::WebMismatch("separate_from_hull: lengths differ".into()));
    }
    // w = w+ - w-, both nonnegative.
    let c: Vec<Q> = v.iter().cloned().chain(v.iter().map(|x| -x)).collect();
    let a: Vec<Vec<Q>> = points
        .iter()
        .map(|p| p.iter().cloned().chain(p.iter().map(|x| -x)).collect())
        .collect();
    let b = vec![one(); a.len()];
    let w = match lp::maximize(&c, &a, &b)? {
        LpOutcome::Optimal { value, x, .. } => {
            if value <= one() {
                return Ok(None);
            }
            (0..n).map(|i| &x[i] - &x[n + i]).collect::<Vec<Q>>()
        }
        LpOutcome::Unbounded { ray } => {
            let d: Vec<Q> = (0..n).map(|i| &ray[i] - &ray[n + i]).collect();
            let s: Q = d.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            let c = Q::from_integer(2.into()) / s;
            d.iter().map(|x| x * &c).collect()
        }
    };
    Ok(Some(w))
}

pub fn signed_dot(a: &RatVec, w: &[Q]) -> Q {
    a.iter().zip(w).map(|(x, y)| x * y).sum()
}

impl Polytope {
    /// Product polytope on the disjoint-union web: one block per factor.
    pub fn product(web: Arc<Web>, factors: &[&Polytope]) -> Result<Polytope> {
        let n: usize = factors.iter().map(|p| p.dim()).sum();
        if n != web.len() {
            return Err(PcohError::WebMismatch("product web size".into()));
        }
        let mut rows = Vec::new();
        let mut offset = 0;
        for p in factors {
            for h in p.canonical_hrep() {
                let mut r = RatVec::zeros(n);
                for (i, x) in h.iter().enumerate() {
                    r.0[offset + i] = x.clone();
                }
                rows.push(r);
            }
            offset += p.dim();
        }
        Polytope::from_hrep(web, rows)
    }

    pub fn is_one(&self) -> bool {
        self.dim() == 1 && self.canonical_hrep() == [RatVec(vec![Q::one()])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::rv;

    fn w2() -> Arc<Web> {
        Web::numbered(2)
    }

    #[test]
    fn membership_examples() {
        let s = Polytope::from_hrep(w2(), vec![rv![1, 1]]).unwrap();
        assert!(s.member(&rv![(1, 2), (1, 2)]).unwrap());
        assert!(!s.member(&rv![(3, 2), (0, 1)]).unwrap());
        let sv = Polytope::from_vrep(w2(), vec![rv![1, 0], rv![0, 1]]).unwrap();
        assert!(sv.member(&rv![(1, 2), (1, 2)]).unwrap());
        assert!(!sv.member(&rv![(3, 4), (1, 2)]).unwrap());
        assert!(s.member(&rv![1, 2, 3]).is_err());
    }

    #[test]
    fn polar_examples() {
        let p = Polytope::from_vrep(w2(), vec![rv![1, 1]]).unwrap();
        let pp = p.polar().unwrap();
        assert_eq!(pp.canonical_hrep(), &[rv![1, 1]]);
        assert_eq!(pp.canonical_vrep(), &[rv![0, 1], rv![1, 0]]);
        let simplex = Polytope::simplex(w2());
        assert_eq!(simplex.polar().unwrap(), Polytope::hypercube(w2()));
    }

    #[test]
    fn convert_examples() {
        let cube = Polytope::from_hrep(w2(), vec![rv![1, 0], rv![0, 1]]).unwrap();
        assert_eq!(cube.canonical_vrep(), &[rv![1, 1]]);
        assert_eq!(cube.all_vertices().len(), 4);
        let s = Polytope::from_hrep(w2(), vec![rv![1, 1]]).unwrap();
        assert_eq!(s.canonical_vrep(), &[rv![0, 1], rv![1, 0]]);
    }

    #[test]
    fn support_examples() {
        assert_eq!(Polytope::hypercube(w2()).support(&rv![1, 1]).unwrap(), qi(2));
        assert_eq!(Polytope::simplex(w2()).support(&rv![1, 1]).unwrap(), qi(1));
        let h_only = Polytope::from_hrep(w2(), vec![rv![1, 0], rv![0, 1]]).unwrap();
        assert_eq!(h_only.support(&rv![1, 1]).unwrap(), qi(2));
    }

    #[test]
    fn separate_examples() {
        let s = Polytope::simplex(w2());
        let cert = s.separate(&rv![(3, 2), (0, 1)]).unwrap().unwrap();
        assert_eq!(cert, rv![1, 0]);
        assert_eq!(rv![(3, 2), (0, 1)].dot(&cert), q(3, 2));
        assert!(s.separate(&rv![(1, 4), (1, 4)]).unwrap().is_none());
        let sv = Polytope::from_vrep(w2(), vec![rv![1, 0], rv![0, 1]]).unwrap();
        let cert = sv.separate(&rv![(3, 4), (3, 4)]).unwrap().unwrap();
        assert!(rv![(3, 4), (3, 4)].dot(&cert) > one());
        assert!(sv.polar().unwrap().member(&cert).unwrap());
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(
            Polytope::from_vrep(w2(), vec![rv![1, 0]]),
            Err(PcohError::DegenerateCoordinate(_))
        ));
        assert!(matches!(
            Polytope::from_hrep(w2(), vec![rv![0, 1]]),
            Err(PcohError::DegenerateCoordinate(_))
        ));
    }

    #[test]
    fn irredundant_drops_implied_rows() {
        let rows = vec![rv![1, 0], rv![0, 1], rv![1, 1], rv![(1, 2), (1, 2)], rv![0, 0]];
        assert_eq!(irredundant(&rows), vec![rv![1, 1]]);
    }

    #[test]
    fn from_both_checks_consistency() {
        assert!(Polytope::from_both(w2(), vec![rv![1, 1]], vec![rv![1, 0], rv![0, 1]]).is_ok());
        assert!(Polytope::from_both(w2(), vec![rv![1, 1]], vec![rv![1, 0]]).is_err());
        assert!(Polytope::from_both(w2(), vec![rv![1, 0], rv![0, 1]], vec![rv![1, 0], rv![0, 1]]).is_err());
    }

    #[test]
    fn product_of_simplices_has_five_facets() {
        let a = Polytope::simplex(Web::numbered(1));
        let b = Polytope::simplex(Web::numbered(2));
        let p = Polytope::product(Web::numbered(3), &[&a, &b]).unwrap();
        assert_eq!(p.facet_count(), 5);
    }

    #[test]
    fn hull_separation_is_signed() {
        // Convex hull (not down-closed) of {0, e1, e2}: (1/2, 1/2) is inside, (1, 1) is not.
        let pts = vec![rv![0, 0], rv![1, 0], rv![0, 1]];
        assert!(separate_from_hull(&rv![(1, 2), (1, 2)], &pts).unwrap().is_none());
        let w = separate_from_hull(&rv![1, 1], &pts).unwrap().unwrap();
        assert!(signed_dot(&rv![1, 1], &w) > one());
    }
}
