//! Independent brute-force oracles used by the verification suites.
//!
//! None of these touch vertex enumeration or canonical H-descriptions: the
//! grid closure works with exact small linear systems, the norms with the
//! simplex method over raw generators, and the polynomial oracle with plain
//! polynomial arithmetic.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::bang::{multisets, StableFn};
use crate::error::Result;
use crate::linalg::rref;
use crate::morph::MorphMatrix;
use crate::pcs::Pcs;
use crate::polytope::packing_max;
use crate::rational::{one, Q};
use crate::vector::RatVec;

/// Integer coordinates of a point of the grid `{0, 1/k, ..., 1}^n`.
pub type GridPoint = Vec<i64>;

fn to_rat(p: &GridPoint, denom: i64) -> RatVec {
    RatVec(p.iter().map(|&c| Q::new(c.into(), denom.into())).collect())
}

fn on_grid(v: &RatVec, denom: i64) -> Option<GridPoint> {
    v.iter()
        .map(|x| {
            let y = x * Q::from_integer(denom.into());
            if y.is_integer() && !y.is_negative() && y <= Q::from_integer(denom.into()) {
                y.to_integer().try_into().ok()
            } else {
                None
            }
        })
        .collect()
}

/// `p` is a convex combination of the affinely independent points `t`.
fn in_simplex(p: &GridPoint, t: &[&GridPoint]) -> bool {
    let n = p.len();
    let k = t.len();
    // rows: coordinates, then the weight sum; columns: weights | rhs
    let mut m: Vec<Vec<Q>> = (0..=n)
        .map(|i| {
            let mut row: Vec<Q> = t.iter().map(|g| if i < n { Q::from_integer(g[i].into()) } else { one() }).collect();
            row.push(if i < n { Q::from_integer(p[i].into()) } else { one() });
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) || pivots.len() < k {
        return false;
    }
    m.iter().take(k).all(|r| !r[k].is_negative())
}

fn pareto_maximal(points: &[GridPoint]) -> Vec<GridPoint> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| q != *p && p.iter().zip(q.iter()).all(|(a, b)| a <= b)))
        .cloned()
        .collect()
}

/// Candidate extreme points of the convex hull of a down-closed grid set:
/// on every coordinate face, the members supported there that are maximal.
fn face_maxima(set: &BTreeSet<GridPoint>, n: usize) -> Vec<GridPoint> {
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let face: Vec<GridPoint> =
            set.iter().filter(|p| p.iter().enumerate().all(|(i, &c)| c == 0 || mask & (1 << i) != 0)).cloned().collect();
        out.extend(pareto_maximal(&face));
    }
    out.into_iter().collect()
}

/// The least subset of the grid `{0, 1/k, ..., 1}^n` containing the
/// generators and the origin and closed under
///
/// * down: any grid point below a member,
/// * convex: any grid point that is a convex combination of members,
/// * chains: lubs of monotone chains of members.
///
/// Convex combinations are found by Carathéodory: a point of the hull lies in
/// a simplex spanned by at most `n + 1` affinely independent extreme points,
/// and extreme points of a down-closed set are maximal on their coordinate
/// face. On a finite set every monotone chain is eventually constant, so the
/// chain rule never adds a point.
pub fn grid_closure(generators: &[RatVec], n: usize, denom: i64) -> Option<BTreeSet<GridPoint>> {
    let mut set: BTreeSet<GridPoint> = BTreeSet::new();
    set.insert(vec![0; n]);
    for g in generators {
        set.insert(on_grid(g, denom)?);
    }
    let grid: Vec<GridPoint> = (0..n).map(|_| 0..=denom).multi_cartesian_product().collect();
    loop {
        let before = set.len();
        // down
        let maxima = pareto_maximal(&set.iter().cloned().collect::<Vec<_>>());
        for p in &grid {
            if maxima.iter().any(|m| p.iter().zip(m).all(|(a, b)| a <= b)) {
                set.insert(p.clone());
            }
        }
        // convex
        let ext = face_maxima(&set, n);
        let mut added = Vec::new();
        for p in grid.iter().filter(|p| !set.contains(*p)) {
            // a combination must have some point above p in each coordinate
            let found = (1..=(n + 1).min(ext.len())).any(|k| {
                ext.iter().combinations(k).any(|t| {
                    (0..n).all(|i| t.iter().any(|g| g[i] >= p[i]) && t.iter().any(|g| g[i] <= p[i]))
                        && in_simplex(p, &t)
                })
            });
            if found {
                added.push(p.clone());
            }
        }
        set.extend(added);
        if set.len() == before {
            return Some(set);
        }
    }
}

/// Grid points of the ball of `p`.
pub fn grid_members(p: &Pcs, denom: i64) -> Result<BTreeSet<GridPoint>> {
    let n = p.dim();
    let mut out = BTreeSet::new();
    for c in (0..n).map(|_| 0..=denom).multi_cartesian_product() {
        if p.member(&to_rat(&c, denom))? {
            out.insert(c);
        }
    }
    if n == 0 {
        out.insert(Vec::new());
    }
    Ok(out)
}

/// First grid point on which the two sets disagree.
pub fn first_disagreement(a: &BTreeSet<GridPoint>, b: &BTreeSet<GridPoint>, denom: i64) -> Option<RatVec> {
    a.symmetric_difference(b).next().map(|p| to_rat(p, denom))
}

/// `‖u‖ = max {⟨u, w⟩ : ⟨g, w⟩ ≤ 1 for every generator g}`, by the simplex
/// method over the generators of the ball.
pub fn element_norm_lp(p: &Pcs, u: &RatVec) -> Result<Option<Q>> {
    let gens = p.ball().vrep().map(|v| v.to_vec()).unwrap_or_else(|| p.ball().canonical_vrep().to_vec());
    packing_max(&gens, u)
}

/// `‖t‖` as the largest LP norm of the image of a domain generator.
pub fn morph_norm_lp(t: &MorphMatrix) -> Result<Option<Q>> {
    let dom = t.dom().ball();
    let gens = dom.vrep().map(|v| v.to_vec()).unwrap_or_else(|| dom.canonical_vrep().to_vec());
    let mut best = Q::zero();
    for g in gens {
        match element_norm_lp(t.cod(), &t.matrix().apply(&g))? {
            Some(v) if v > best => best = v,
            Some(_) => {}
            None => return Ok(None),
        }
    }
    Ok(Some(best))
}

/// A polynomial in `n` variables: sorted variable multiset ↦ coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<Vec<usize>, Q>);

impl Poly {
    pub fn constant(c: Q) -> Poly {
        Poly::default().plus_term(Vec::new(), c)
    }

    pub fn var(a: usize) -> Poly {
        Poly::default().plus_term(vec![a], one())
    }

    fn plus_term(mut self, m: Vec<usize>, c: Q) -> Poly {
        if c.is_zero() {
            return self;
        }
        let e = self.0.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        other.0.iter().fold(self.clone(), |acc, (m, c)| acc.plus_term(m.clone(), c.clone()))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let mut m: Vec<usize> = m1.iter().chain(m2).copied().collect();
                m.sort_unstable();
                out = out.plus_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.0.keys().map(Vec::len).max().unwrap_or(0)
    }
}

/// The output coordinates of a power series as polynomials.
pub fn polys_of(f: &StableFn) -> Vec<Poly> {
    let ms = multisets(f.dom().dim(), f.degree());
    let mut out = vec![Poly::default(); f.cod().dim()];
    for (i, b, c) in f.matrix().entries() {
        out[b] = std::mem::take(&mut out[b]).plus_term(ms[i].clone(), c.clone());
    }
    out
}

/// `g ∘ f` by substituting the polynomials of `f` into those of `g`.
pub fn substitute(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    g.iter()
        .map(|gb| {
            gb.0.iter().fold(Poly::default(), |acc, (m, c)| {
                let term = m.iter().fold(Poly::constant(c.clone()), |t, &v| t.mul(&f[v]));
                acc.add(&term)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bang::kleisli_compose;
    use crate::pcs::biorth_closure;
    use crate::rational::{q, qi};
    use crate::rv;
    use crate::web::Web;

    #[test]
    fn triangle_closure_on_quarter_grid() {
        let gens = vec![rv![1, 0], rv![0, 1]];
        let c = grid_closure(&gens, 2, 4).unwrap();
        // i + j <= 4 on {0..4}^2
        assert_eq!(c.len(), 15);
        let p = biorth_closure(Web::numbered(2), gens).unwrap();
        assert_eq!(grid_members(&p, 4).unwrap(), c);
    }

    #[test]
    fn interior_points_need_three_generators() {
        // (1/4,1/4,1/4) lies only in the hull of all three unit vectors
        let gens = vec![rv![(3, 4), 0, 0], rv![0, (3, 4), 0], rv![0, 0, (3, 4)]];
        let c = grid_closure(&gens, 3, 4).unwrap();
        assert!(c.contains(&vec![1, 1, 1]));
        assert!(!c.contains(&vec![1, 1, 2]));
        let p = biorth_closure(Web::numbered(3), gens).unwrap();
        assert_eq!(first_disagreement(&grid_members(&p, 4).unwrap(), &c, 4), None);
    }

    #[test]
    fn off_grid_generators_are_refused() {
        assert_eq!(grid_closure(&[rv![(1, 3)]], 1, 4), None);
    }

    #[test]
    fn norms_via_generators() {
        let p = biorth_closure(Web::numbered(2), vec![rv![1, (1, 2)], rv![(1, 2), 1]]).unwrap();
        assert_eq!(element_norm_lp(&p, &rv![1, 1]).unwrap(), Some(q(4, 3)));
        assert_eq!(element_norm_lp(&p, &rv![(1, 2), (1, 4)]).unwrap(), Some(q(1, 2)));
    }

    #[test]
    fn square_of_square_by_substitution() {
        let x = Pcs::one();
        let sq = StableFn::from_terms(x.clone(), x.clone(), 2, &[(vec![0, 0], 0, qi(1))]).unwrap();
        let composed = kleisli_compose(&sq, &sq).unwrap();
        let oracle = substitute(&polys_of(&sq), &polys_of(&sq));
        assert_eq!(polys_of(&composed), oracle);
        assert_eq!(oracle[0].0.get(&vec![0; 4]), Some(&qi(1)));
        assert_eq!(oracle[0].degree(), 4);
    }
}
