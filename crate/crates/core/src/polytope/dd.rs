//! Double description vertex enumeration for packing polytopes
//! `{u >= 0 : <w_k, u> <= 1}`.
//!
//! The polytope is homogenized to the cone `{(u, t) >= 0 : t - <w_k, u> >= 0}`
//! in dimension `n + 1`. Starting from the nonnegative orthant (extreme rays
//! `e_0 .. e_n`), facet constraints are inserted one at a time; new rays are
//! built from adjacent `(+, -)` pairs using the combinatorial adjacency test.
//! Rays with `t > 0` are the vertices; a surviving ray with `t = 0` means the
//! polytope is unbounded.

use num_traits::{One, Signed, Zero};

use crate::error::{PcohError, Result};
use crate::rational::Q;
use crate::vector::RatVec;

#[derive(Clone)]
struct Ray {
    v: Vec<Q>,
    zeros: Bits,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

fn normalize(v: &mut [Q]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
        let s = first.abs();
        if !s.is_one() {
            for x in v.iter_mut() {
                *x /= &s;
            }
        }
    }
}

/// Enumerates every vertex (including the origin) of `{u >= 0 : <w, u> <= 1 for w in rows}`.
pub fn vertices(n: usize, rows: &[RatVec]) -> Result<Vec<RatVec>> {
    let d = n + 1;
    let total = d + rows.len();
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut v = vec![Q::zero(); d];
            v[j] = Q::one();
            let mut zeros = Bits::new(total);
            for k in 0..d {
                if k != j {
                    zeros.set(k);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (k, w) in rows.iter().enumerate() {
        let cidx = d + k;
        let slack = |r: &Ray| -> Q {
            let mut s = r.v[n].clone();
            for (a, b) in w.iter().zip(&r.v[..n]) {
                if !a.is_zero() && !b.is_zero() {
                    s -= a * b;
                }
            }
            s
        };
        let vals: Vec<Q> = rays.iter().map(slack).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, s) in rays.iter_mut().zip(&vals) {
                if s.is_zero() {
                    r.zeros.set(cidx);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut r = r.clone();
                if vals[i].is_zero() {
                    r.zeros.set(cidx);
                }
                next.push(r);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let sp = &vals[p];
                let sq = -vals[q].clone();
                let mut v: Vec<Q> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| a * sp + b * &sq)
                    .collect();
                normalize(&mut v);
                let mut zeros = common;
                zeros.set(cidx);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let t = &r.v[n];
        if t.is_zero() {
            let a = r.v[..n].iter().position(|x| x.is_positive()).unwrap_or(0);
            return Err(PcohError::DegenerateCoordinate(format!(
                "coordinate {a} is unbounded (no facet constrains it)"
            )));
        }
        out.push(RatVec(r.v[..n].iter().map(|x| x / t).collect()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rv;

    #[test]
    fn square_vertices() {
        let vs = vertices(2, &[rv![1, 0], rv![0, 1]]).unwrap();
        assert_eq!(vs, vec![rv![0, 0], rv![0, 1], rv![1, 0], rv![1, 1]]);
    }

    #[test]
    fn simplex_vertices() {
        let vs = vertices(3, &[rv![1, 1, 1]]).unwrap();
        assert_eq!(vs, vec![rv![0, 0, 0], rv![0, 0, 1], rv![0, 1, 0], rv![1, 0, 0]]);
    }

    #[test]
    fn unbounded_is_reported() {
        assert!(matches!(
            vertices(2, &[rv![1, 0]]),
            Err(PcohError::DegenerateCoordinate(_))
        ));
    }

    #[test]
    fn degenerate_apex() {
        // Pyramid-like: several facets through (1/2, 1/2, 1/2).
        let rows = vec![rv![1, 1, 0], rv![1, 0, 1], rv![0, 1, 1], rv![(2, 3), (2, 3), (2, 3)]];
        let vs = vertices(3, &rows).unwrap();
        assert!(vs.contains(&rv![(1, 2), (1, 2), (1, 2)]));
        for v in &vs {
            for w in &rows {
                assert!(v.dot(w) <= crate::rational::one());
            }
        }
    }
}
