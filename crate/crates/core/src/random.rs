//! Seeded instance generation. `ChaCha8Rng` keeps every stream identical
//! across platforms.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bang::{multisets, StableFn};
use crate::error::Result;
use crate::kernel::{DiscreteSpace, Kernel};
use crate::morph::{MorphMatrix, SparseMat};
use crate::pcs::{biorth_closure, Pcs};
use crate::tensor::BilinMap;
use crate::rational::{one, Q};
use crate::vector::RatVec;
use crate::web::Web;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-instance stream derived from a suite seed.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64 + 1);
    r
}

pub fn grid_value(rng: &mut impl Rng, denom: i64) -> Q {
    Q::new(rng.gen_range(0..=denom).into(), denom.into())
}

/// Nonzero grid vector in `[0,1]^n`.
pub fn grid_vector(rng: &mut impl Rng, n: usize, denom: i64) -> RatVec {
    loop {
        let v = RatVec((0..n).map(|_| grid_value(rng, denom)).collect());
        if !v.is_zero() || n == 0 {
            return v;
        }
    }
}

/// Between 1 and `max_gens` generators on the grid `{0, 1/d, ..., 1}^n`,
/// patched so that every coordinate is positive somewhere.
pub fn random_generators(rng: &mut impl Rng, n: usize, max_gens: usize, denom: i64) -> Vec<RatVec> {
    let k = rng.gen_range(1..=max_gens.max(1));
    let mut gens: Vec<RatVec> = (0..k).map(|_| grid_vector(rng, n, denom)).collect();
    for a in 0..n {
        if gens.iter().all(|g| g[a].is_zero()) {
            let i = rng.gen_range(0..k);
            gens[i].0[a] = Q::new(rng.gen_range(1..=denom).into(), denom.into());
        }
    }
    gens
}

pub fn random_pcs(rng: &mut impl Rng, n: usize, max_gens: usize, denom: i64) -> Result<Arc<Pcs>> {
    biorth_closure(Web::numbered(n), random_generators(rng, n, max_gens, denom))
}

/// Random sparse nonnegative matrix, scaled into `Pcoh(X ⊸ Y)`.
pub fn random_morphism(rng: &mut impl Rng, x: &Arc<Pcs>, y: &Arc<Pcs>, denom: i64) -> Result<MorphMatrix> {
    let mut m = random_sparse(rng, x.dim(), y.dim(), denom);
    let n = MorphMatrix::structural(x.clone(), y.clone(), m.clone()).morph_norm()?;
    if n > one() {
        m = m.scale(&(one() / n));
    }
    MorphMatrix::new(x.clone(), y.clone(), m)
}

fn random_sparse(rng: &mut impl Rng, rows: usize, cols: usize, denom: i64) -> SparseMat {
    let mut m = SparseMat::zeros(rows, cols);
    for a in 0..rows {
        for b in 0..cols {
            if rng.gen_bool(0.6) {
                m.set(a, b, grid_value(rng, denom));
            }
        }
    }
    m
}

/// Random substochastic kernel; heavy rows are renormalized to mass 1.
pub fn random_kernel(rng: &mut impl Rng, dom: &Arc<DiscreteSpace>, cod: &Arc<DiscreteSpace>, denom: i64) -> Result<Kernel> {
    let mut m = random_sparse(rng, dom.len(), cod.len(), denom);
    for r in 0..dom.len() {
        let mass: Q = m.row(r).values().sum();
        if mass > one() {
            let row: Vec<(usize, Q)> = m.row(r).iter().map(|(&y, v)| (y, v / &mass)).collect();
            for (y, v) in row {
                m.set(r, y, v);
            }
        }
    }
    Kernel::new(dom.clone(), cod.clone(), m)
}

/// Random bilinear map, scaled so that generator pairs land in the ball.
pub fn random_bilinear(rng: &mut impl Rng, x: &Arc<Pcs>, y: &Arc<Pcs>, z: &Arc<Pcs>, denom: i64) -> Result<BilinMap> {
    let mut m = random_sparse(rng, x.dim() * y.dim(), z.dim(), denom);
    let cone = crate::cone::Cone::Pcs(z.clone());
    let mut worst = Q::zero();
    for g in x.ball().canonical_vrep() {
        for h in y.ball().canonical_vrep() {
            let n = cone.norm_of(&m.apply(&g.tensor(h)))?;
            if n > worst {
                worst = n;
            }
        }
    }
    if worst > one() {
        m = m.scale(&(one() / worst));
    }
    BilinMap::new(x.clone(), y.clone(), z.clone(), m)
}

/// Random power series of degree `d` from `x` into a hypercube of dimension
/// `k`, scaled so that its value at the coordinatewise sup of the ball, which
/// dominates every value on the ball, is at most 1.
pub fn random_stable_fn(rng: &mut impl Rng, x: &Arc<Pcs>, k: usize, d: usize, denom: i64) -> Result<StableFn> {
    let cod = Pcs::hypercube(Web::numbered(k));
    let rows = multisets(x.dim(), d).len();
    let mut m = random_sparse(rng, rows, k, denom);
    let sup = RatVec(
        (0..x.dim()).map(|a| x.ball().support(&RatVec::unit(x.dim(), a))).collect::<Result<Vec<_>>>()?,
    );
    let top = m.apply(&crate::bang::promote_vec(&sup, d)).max_coord();
    if top > one() {
        m = m.scale(&(one() / top));
    }
    StableFn::new(x.clone(), cod, d, m)
}

/// A point of the ball: a random convex combination of generators, shrunk
/// coordinatewise.
pub fn random_ball_point(rng: &mut impl Rng, p: &Pcs, denom: i64) -> RatVec {
    let gens = p.ball().canonical_vrep();
    let n = p.dim();
    if gens.is_empty() {
        return RatVec::zeros(n);
    }
    let weights: Vec<Q> = gens.iter().map(|_| grid_value(rng, denom)).collect();
    let total: Q = weights.iter().fold(Q::zero(), |a, w| a + w);
    let mut v = RatVec::zeros(n);
    if total.is_zero() {
        return v;
    }
    for (g, w) in gens.iter().zip(&weights) {
        v = v.add(&g.scale(&(w / &total)));
    }
    let shrink = RatVec((0..n).map(|_| grid_value(rng, denom)).collect());
    RatVec(v.iter().zip(shrink.iter()).map(|(a, s)| if rng.gen_bool(0.7) { a.clone() } else { a * s }).collect())
}
