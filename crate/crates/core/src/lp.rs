//! Exact rational simplex for packing-form linear programs
//!
//! ```text
//! maximize  c·x   subject to   A x <= b,   x >= 0,   with b >= 0.
//! ```
//!
//! Every LP the crate needs (support functions, down-hull membership,
//! redundancy certificates, norms) has this shape: the origin is feasible,
//! so a single phase with Bland's anti-cycling rule suffices.

use num_traits::{Signed, Zero};

use crate::error::{PcohError, Result};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Q,
        /// Primal optimum, one entry per column of `A`.
        x: Vec<Q>,
        /// Dual optimum, one entry per row of `A`; `y >= 0`, `yA >= c`, `y·b = value`.
        y: Vec<Q>,
    },
    /// A direction `d >= 0` with `A d <= 0` and `c·d > 0`.
    Unbounded { ray: Vec<Q> },
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Unbounded { .. } => None,
        }
    }
}

/// Solves `max c·x, A x <= b, x >= 0`. `a` is row-major with `b.len()` rows.
pub fn maximize(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(PcohError::Malformed("lp: inconsistent dimensions".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(PcohError::Malformed("lp: right-hand side must be nonnegative".into()));
    }
    let width = n + m;
    // rows[i] = [A_i | e_i], rhs[i] = b_i
    let mut rows: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = Vec::with_capacity(width);
            row.extend(r.iter().cloned());
            row.extend((0..m).map(|k| if k == i { Q::from_integer(1.into()) } else { Q::zero() }));
            row
        })
        .collect();
    let mut rhs: Vec<Q> = b.to_vec();
    let mut obj: Vec<Q> = c.iter().map(|x| -x).chain((0..m).map(|_| Q::zero())).collect();
    let mut obj_val = Q::zero();
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<Q> = None;
        for i in 0..m {
            let aij = &rows[i][enter];
            if aij.is_positive() {
                let ratio = &rhs[i] / aij;
                let better = match &best {
                    None => true,
                    Some(bv) => ratio < *bv || (ratio == *bv && basis[i] < basis[leave.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            let mut ray = vec![Q::zero(); n];
            if enter < n {
                ray[enter] = Q::from_integer(1.into());
            }
            for i in 0..m {
                if basis[i] < n {
                    ray[basis[i]] = -rows[i][enter].clone();
                }
            }
            return Ok(LpOutcome::Unbounded { ray });
        };
        pivot(&mut rows, &mut rhs, &mut obj, &mut obj_val, r, enter);
        basis[r] = enter;
    }

    let mut x = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rhs[i].clone();
        }
    }
    let y = obj[n..].to_vec();
    Ok(LpOutcome::Optimal { value: obj_val, x, y })
}

fn pivot(rows: &mut [Vec<Q>], rhs: &mut [Q], obj: &mut [Q], obj_val: &mut Q, r: usize, col: usize) {
    let p = rows[r][col].clone();
    for v in rows[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    rhs[r] /= &p;
    let prow = rows[r].clone();
    let prhs = rhs[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
        rhs[i] -= &f * &prhs;
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (v, pv) in obj.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
        *obj_val -= &f * &prhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn row(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn unit_square_corner() {
        let out = maximize(&row(&[1, 1]), &[row(&[1, 0]), row(&[0, 1])], &row(&[1, 1])).unwrap();
        assert_eq!(out.value(), Some(&qi(2)));
    }

    #[test]
    fn simplex_and_duals() {
        let out = maximize(&row(&[2, 1]), &[row(&[1, 1])], &row(&[1])).unwrap();
        match out {
            LpOutcome::Optimal { value, x, y } => {
                assert_eq!(value, qi(2));
                assert_eq!(x, row(&[1, 0]));
                assert_eq!(y, row(&[2]));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn unbounded_ray() {
        let out = maximize(&row(&[1, 1]), &[row(&[1, 0])], &row(&[1])).unwrap();
        match out {
            LpOutcome::Unbounded { ray } => assert_eq!(ray, row(&[0, 1])),
            _ => panic!(),
        }
    }

    #[test]
    fn degenerate_does_not_cycle() {
        // Classic degenerate instance; Bland's rule terminates.
        let c = vec![q(3, 4), qi(-150), q(1, 50), qi(-6)];
        let a = vec![
            vec![q(1, 4), qi(-60), q(-1, 25), qi(9)],
            vec![q(1, 2), qi(-90), q(-1, 50), qi(3)],
            vec![qi(0), qi(0), qi(1), qi(0)],
        ];
        let b = row(&[0, 0, 1]);
        let out = maximize(&c, &a, &b).unwrap();
        assert_eq!(out.value(), Some(&q(1, 20)));
    }

    #[test]
    fn rejects_negative_rhs() {
        assert!(maximize(&row(&[1]), &[row(&[1])], &row(&[-1])).is_err());
    }
}
