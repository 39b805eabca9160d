//! Probabilistic coherence spaces over finite webs.

use std::sync::Arc;

use crate::error::{PcohError, Result};
use crate::polytope::Polytope;
use crate::rational::{q, Q};
use crate::vector::RatVec;
use crate::web::{Label, Web};

/// How a space was built; lets structural maps (currying, evaluation,
/// unitors) recover the factors of a compound web.
#[derive(Debug, Clone)]
pub enum Construction {
    Atomic,
    Dual(Arc<Pcs>),
    Limpl(Arc<Pcs>, Arc<Pcs>),
    Tensor(Arc<Pcs>, Arc<Pcs>),
    With(Vec<Arc<Pcs>>),
    /// Degree-truncated exponential.
    Bang { base: Arc<Pcs>, degree: usize },
    /// `!P ⊗ !Q` restricted to total degree at most `degree`.
    BangPair { left: Arc<Pcs>, right: Arc<Pcs>, degree: usize },
    Stream { alphabet: u32, depth: usize },
    /// Power series of degree at most `degree` from `dom` to `cod`.
    StableFun { dom: Arc<Pcs>, cod: Arc<Pcs>, degree: usize },
}

/// A finite web together with its unit ball.
#[derive(Debug, Clone)]
pub struct Pcs {
    web: Arc<Web>,
    ball: Polytope,
    construction: Construction,
    truncation: Option<usize>,
    /// `false` when the ball is only an inner approximation (exponentials).
    exact: bool,
}

impl PartialEq for Pcs {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.web == other.web && self.exact == other.exact && self.ball == other.ball)
    }
}

impl Pcs {
    pub fn new(ball: Polytope) -> Arc<Pcs> {
        Pcs::build(ball, Construction::Atomic)
    }

    pub(crate) fn build(ball: Polytope, construction: Construction) -> Arc<Pcs> {
        Arc::new(Pcs {
            web: ball.web().clone(),
            ball,
            construction,
            truncation: None,
            exact: true,
        })
    }

    pub(crate) fn build_inexact(ball: Polytope, construction: Construction) -> Arc<Pcs> {
        Arc::new(Pcs {
            web: ball.web().clone(),
            ball,
            construction,
            truncation: None,
            exact: false,
        })
    }

    pub fn with_truncation(self: &Arc<Pcs>, n: usize) -> Arc<Pcs> {
        let mut p = (**self).clone();
        p.truncation = Some(n);
        Arc::new(p)
    }

    /// The unit `1`: one point, ball `[0, 1]`.
    pub fn one() -> Arc<Pcs> {
        Pcs::new(Polytope::hypercube(Web::unit()))
    }

    /// `⊤`: empty web.
    pub fn top() -> Arc<Pcs> {
        Pcs::new(Polytope::from_vrep(Web::new(Vec::new()).unwrap(), Vec::new()).unwrap())
    }

    /// Subprobability distributions on `{0, ..., n-1}` (a truncation of `Snat`).
    pub fn snat(n: usize) -> Arc<Pcs> {
        Pcs::new(Polytope::simplex(Web::numbered(n))).with_truncation(n)
    }

    /// Families bounded by 1 on `{0, ..., n-1}` (a truncation of the dual of `Snat`).
    pub fn snat_orth(n: usize) -> Arc<Pcs> {
        Pcs::new(Polytope::hypercube(Web::numbered(n))).with_truncation(n)
    }

    pub fn hypercube(web: Arc<Web>) -> Arc<Pcs> {
        Pcs::new(Polytope::hypercube(web))
    }

    pub fn simplex(web: Arc<Web>) -> Arc<Pcs> {
        Pcs::new(Polytope::simplex(web))
    }

    pub fn web(&self) -> &Arc<Web> {
        &self.web
    }

    pub fn dim(&self) -> usize {
        self.web.len()
    }

    pub fn ball(&self) -> &Polytope {
        &self.ball
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn require_exact(&self, ctx: &str) -> Result<()> {
        if self.exact {
            Ok(())
        } else {
            Err(PcohError::Inexact(format!(
                "{ctx}: the ball of this space is only approximated at finite degree"
            )))
        }
    }

    pub fn member(&self, u: &RatVec) -> Result<bool> {
        self.ball.member(u)
    }

    /// The dual space `X⊥`, whose ball is the polar of the ball of `X`.
    pub fn dual(self: &Arc<Pcs>) -> Result<Arc<Pcs>> {
        self.require_exact("dual")?;
        Ok(Pcs::build(self.ball.polar()?, Construction::Dual(self.clone())))
    }

    /// `ball = polar(polar(ball))`, decided on canonical forms.
    pub fn is_biorth_closed(&self) -> Result<bool> {
        Ok(self.ball.polar()?.polar()? == self.ball)
    }

    /// Generators of the polar ball (the dual unit ball).
    pub fn dual_generators(&self) -> &[RatVec] {
        self.ball.canonical_hrep()
    }

    pub fn label(&self, i: usize) -> &Label {
        self.web.label(i)
    }
}

/// The PCS whose ball is the biorthogonal closure of `generators`: the
/// down-closed convex hull of the generators and the origin.
pub fn biorth_closure(web: Arc<Web>, generators: Vec<RatVec>) -> Result<Arc<Pcs>> {
    Ok(Pcs::new(Polytope::from_vrep(web, generators)?))
}

/// Which closure property failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureFailure {
    Convex { a: RatVec, b: RatVec, point: RatVec },
    Down { from: RatVec, point: RatVec },
    ChainLub { chain_top: RatVec, lub: RatVec },
}

impl ClosureFailure {
    pub fn witness(&self) -> &RatVec {
        match self {
            ClosureFailure::Convex { point, .. } | ClosureFailure::Down { point, .. } => point,
            ClosureFailure::ChainLub { lub, .. } => lub,
        }
    }
}

/// Checks on `sample` that a candidate set (given by its membership test)
/// is convex, downward closed and closed under lubs of monotone chains:
/// every derived point built from the sample must remain a member.
pub fn check_closure_properties(
    sample: &[RatVec],
    member: impl Fn(&RatVec) -> bool,
) -> std::result::Result<(), ClosureFailure> {
    let lambdas = [q(1, 4), q(1, 2), q(3, 4)];
    for (i, a) in sample.iter().enumerate() {
        for b in &sample[i + 1..] {
            for l in &lambdas {
                let p = a.scale(l).add(&b.scale(&(crate::rational::one() - l)));
                if !member(&p) {
                    return Err(ClosureFailure::Convex { a: a.clone(), b: b.clone(), point: p });
                }
            }
        }
    }
    let half = q(1, 2);
    for s in sample {
        let mut derived = vec![s.scale(&half)];
        for k in 0..s.len() {
            let mut halved = s.clone();
            halved.0[k] = &halved.0[k] * &half;
            derived.push(halved);
            let mut zeroed = s.clone();
            zeroed.0[k] = Q::from_integer(0.into());
            derived.push(zeroed);
        }
        for p in derived {
            if !member(&p) {
                return Err(ClosureFailure::Down { from: s.clone(), point: p });
            }
        }
    }
    // Chains (1 - 2^-k) s and partial sums of the uniform convex combination.
    for s in sample {
        let chain: Vec<RatVec> = (1..=6).map(|k| s.scale(&(crate::rational::one() - q(1, 1 << k)))).collect();
        let lub = s.clone();
        if chain.iter().all(&member) && !member(&lub) {
            return Err(ClosureFailure::ChainLub { chain_top: chain.last().unwrap().clone(), lub });
        }
    }
    if !sample.is_empty() {
        let w = q(1, sample.len() as i64);
        let mut acc = RatVec::zeros(sample[0].len());
        let mut chain = Vec::new();
        for s in sample {
            acc = acc.add(&s.scale(&w));
            chain.push(acc.clone());
        }
        let lub = chain.iter().skip(1).fold(chain[0].clone(), |m, c| m.join(c));
        if !member(&lub) {
            return Err(ClosureFailure::ChainLub { chain_top: chain.last().unwrap().clone(), lub });
        }
    }
    Ok(())
}

/// The closure characterization on a sample drawn from the ball of `p`.
pub fn closure_characterization_check(
    sample: &[RatVec],
    p: &Pcs,
) -> Result<std::result::Result<(), ClosureFailure>> {
    for s in sample {
        if !p.member(s)? {
            return Err(PcohError::NotInBall(format!("sample point `{s}` is outside the ball")));
        }
    }
    Ok(check_closure_properties(sample, |u| p.member(u).unwrap_or(false)))
}
