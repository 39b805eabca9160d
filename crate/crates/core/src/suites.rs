//! Seeded verification suites.
//!
//! Every suite produces a [`SuiteReport`] whose rendering depends only on the
//! suite name and the [`SuiteConfig`]: instances run in parallel but lines are
//! ordered by instance index, and wall time is kept out of [`SuiteReport::render`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bang::{
    bang_functor, dereliction, digging, kleisli_compose, promote_pair, promote_vec, seely0, seely2, seely2_inverse,
    StableFn,
};
use crate::coherence::{naturality_checks, structural_checks};
use crate::cone::{Cone, ConeElem};
use crate::error::{PcohError, Result};
use crate::kernel::{kern_of_lin, lin_of_kern, test_eval, DiscreteSpace, Kernel, MeasTest};
use crate::limits::stream_equalizer_demo;
use crate::morph::{is_clinfty, limpl, with_product, MorphMatrix, SparseMat};
use crate::oracle::{
    element_norm_lp, first_disagreement, grid_closure, grid_members, morph_norm_lp, polys_of, substitute,
};
use crate::pcs::{biorth_closure, Pcs};
use crate::polytope::{separate_from_hull, signed_dot, Polytope};
use crate::random::{
    grid_value, grid_vector, instance_rng, random_bilinear, random_generators, random_kernel, random_morphism,
    random_pcs, random_stable_fn,
};
use crate::rational::{fmt_q, one, q, qi, Q};
use crate::stability::{check_stable_fn, grid_tuples, sqrt_fn, total_monotonicity_check};
use crate::tensor::{curry, eval_on, linofbilin, pure_tensor, pure_tensors_span, tensor, tensor_morph, uncurry};
use crate::vector::RatVec;
use crate::web::Web;

pub const SUITES: [&str; 9] =
    ["example-3-6", "closure", "coherence", "universal", "exponential", "stability", "stream", "kernel", "norm"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    /// Largest web size of randomly generated base spaces.
    pub max_dim: usize,
    /// Largest grid denominator for closure and stability grids.
    pub grid_denominator: i64,
    /// Largest exponential degree.
    pub truncate: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 7, instances: 100, max_dim: 3, grid_denominator: 4, truncate: 4 }
    }
}

impl SuiteConfig {
    fn describe(&self) -> String {
        format!(
            "seed={} instances={} max-dim={} grid-denominator={} truncate={}",
            self.seed, self.instances, self.max_dim, self.grid_denominator, self.truncate
        )
    }
}

/// One checked equation or property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    /// `None` for fixed (non-random) checks.
    pub instance: Option<usize>,
    pub descriptor: String,
    pub check: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckLine {
    fn new(check: impl Into<String>, passed: bool, witness: impl FnOnce() -> String) -> CheckLine {
        CheckLine {
            instance: None,
            descriptor: String::new(),
            check: check.into(),
            passed,
            witness: if passed { None } else { Some(witness()) },
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(check: impl Into<String>, lhs: &T, rhs: &T) -> CheckLine {
        CheckLine::new(check, lhs == rhs, || format!("{lhs:?} != {rhs:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckLine>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Number of distinct random instances.
    pub fn instances(&self) -> usize {
        self.checks.iter().filter_map(|c| c.instance).collect::<BTreeSet<_>>().len()
    }

    /// Checks whose name starts with `prefix`.
    pub fn checks_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckLine> + 'a {
        self.checks.iter().filter(move |c| c.check.starts_with(prefix))
    }

    /// `(check, passed, total)` per check name (up to the first space), in
    /// order of first appearance.
    pub fn tally(&self) -> Vec<(String, usize, usize)> {
        let mut out: Vec<(String, usize, usize)> = Vec::new();
        for c in &self.checks {
            let name = c.check.split(' ').next().unwrap_or("");
            let pos = match out.iter().position(|(n, _, _)| n == name) {
                Some(p) => p,
                None => {
                    out.push((name.to_string(), 0, 0));
                    out.len() - 1
                }
            };
            out[pos].1 += usize::from(c.passed);
            out[pos].2 += 1;
        }
        out
    }

    /// Deterministic, line-oriented text: a header, one line per check and
    /// a final tally.
    pub fn render(&self) -> String {
        let mut out = format!("suite {} {}\n", self.suite, self.config.describe());
        for c in &self.checks {
            let inst = c.instance.map_or_else(|| "fixed".to_string(), |i| i.to_string());
            let _ = write!(out, "{inst}\t{}\t{}\t{}", c.descriptor, c.check, if c.passed { "PASS" } else { "FAIL" });
            if let Some(w) = &c.witness {
                let _ = write!(out, "\twitness: {w}");
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "result {} {}/{} checks passed, {} instances",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len(),
            self.instances()
        );
        out
    }
}

/// Runs `body` on every instance in parallel, keeping instance order. An
/// unexpected error becomes a failed `instance-error` line.
fn run_instances<F>(cfg: &SuiteConfig, count: usize, body: F) -> Vec<CheckLine>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<(String, Vec<CheckLine>)> + Sync,
{
    let per: Vec<Vec<CheckLine>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, i);
            let (descriptor, lines) = match body(i, &mut rng) {
                Ok(x) => x,
                Err(e) => (String::new(), vec![CheckLine::new("instance-error", false, || e.to_string())]),
            };
            lines
                .into_iter()
                .map(|mut l| {
                    l.instance = Some(i);
                    l.descriptor = descriptor.clone();
                    l
                })
                .collect()
        })
        .collect();
    per.into_iter().flatten().collect()
}

fn fixed(descriptor: &str, lines: Vec<CheckLine>) -> Vec<CheckLine> {
    lines
        .into_iter()
        .map(|mut l| {
            l.descriptor = descriptor.to_string();
            l
        })
        .collect()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match name {
        "example-3-6" => square_tensor_example()?,
        "closure" => closure(cfg),
        "coherence" => coherence(cfg),
        "universal" => universal(cfg),
        "exponential" => exponential(cfg)?,
        "stability" => stability(cfg)?,
        "stream" => stream(cfg),
        "kernel" => kernel(cfg),
        "norm" => norm(cfg),
        _ => {
            return Err(PcohError::Malformed(format!("unknown suite `{name}`; known: {}", SUITES.join(", "))));
        }
    };
    Ok(SuiteReport { suite: name.to_string(), config: cfg.clone(), checks, elapsed: start.elapsed() })
}

fn square() -> Result<Arc<Pcs>> {
    with_product(&[Pcs::one(), Pcs::one()])
}

/// `(1&1) ⊗ (1&1)`: full cube, `e12 + e21` in the ball, its iterated
/// difference, and a certificate keeping it out of the hull of pure tensors.
pub fn square_tensor_example() -> Result<Vec<CheckLine>> {
    let x = square()?;
    let t = tensor(&x, &x)?;
    let cube = Polytope::hypercube(t.web().clone());
    let mut out = Vec::new();
    out.push(CheckLine::new(
        "ball-is-4-cube",
        is_clinfty(&t) && t.ball().canonical_hrep() == cube.canonical_hrep() && t.ball().canonical_vrep() == cube.canonical_vrep(),
        || format!("facets {:?}", t.ball().canonical_hrep().iter().map(|r| r.to_string()).collect::<Vec<_>>()),
    ));
    let v = RatVec(vec![qi(0), qi(1), qi(1), qi(0)]);
    out.push(CheckLine::new("e12+e21-in-ball", t.member(&v)?, || format!("`{v}` rejected")));

    let e = |c: Vec<i64>| ConeElem::in_pcs(&x, RatVec(c.into_iter().map(qi).collect()));
    let (e1, e2, e12) = (e(vec![1, 0])?, e(vec![0, 1])?, e(vec![1, 1])?);
    let step = pure_tensor(&e12, &e12, &t)?
        .sub(&pure_tensor(&e1, &e1, &t)?)
        .and_then(|d| d.sub(&pure_tensor(&e2, &e2, &t)?));
    out.push(match step {
        Ok(d) => CheckLine::eq("iterated-difference", d.vec(), &v),
        Err(err) => CheckLine::new("iterated-difference", false, || err.to_string()),
    });

    // A bilinear form attains its maximum over cube × cube at vertex pairs,
    // so the 16 vertex tensors bound every pure tensor.
    let verts = x.ball().all_vertices();
    let pts: Vec<RatVec> = verts.iter().flat_map(|g| verts.iter().map(move |h| g.tensor(h))).collect();
    out.push(match separate_from_hull(&v, &pts)? {
        Some(w) => {
            let value = signed_dot(&v, &w);
            let bound = pts.iter().map(|p| signed_dot(p, &w)).max().unwrap_or_else(|| Q::from_integer(0.into()));
            let w_text = w.iter().map(fmt_q).collect::<Vec<_>>().join(" ");
            let mut line = CheckLine::new("separated-from-pure-tensor-hull", value > one() && bound <= one(), || {
                format!("functional ({w_text}) gives {} on the point, {} on the hull", fmt_q(&value), fmt_q(&bound))
            });
            if line.passed {
                line.check = format!("separated-from-pure-tensor-hull w=({w_text}) value={}", fmt_q(&value));
            }
            line
        }
        None => CheckLine::new("separated-from-pure-tensor-hull", false, || "no separating functional".into()),
    });
    Ok(fixed("(1&1)x(1&1)", out))
}

/// Grid closure oracle against the biorthogonal closure, grids `1/k` for
/// `k = 1..=grid_denominator` and webs of size `1..=max_dim`.
fn closure(cfg: &SuiteConfig) -> Vec<CheckLine> {
    let dims = cfg.max_dim.max(1);
    run_instances(cfg, cfg.instances, |i, rng| {
        let n = 1 + i % dims;
        let k = 1 + (i / dims) as i64 % cfg.grid_denominator.max(1);
        let gens = random_generators(rng, n, 4, k);
        let desc = format!("n={n} k={k} gens={}", gens.iter().map(|g| format!("({})", g.to_string().replace(' ', ","))).collect::<Vec<_>>().join(""));
        let p = biorth_closure(Web::numbered(n), gens.clone())?;
        let members = grid_members(&p, k)?;
        let line = match grid_closure(&gens, n, k) {
            Some(oracle) => CheckLine::new("grid-agreement", members == oracle, || {
                let d = first_disagreement(&members, &oracle, k).unwrap();
                format!("grid point ({}) differs", d.to_string().replace(' ', ","))
            }),
            None => CheckLine::new("grid-agreement", false, || "generator off the grid".into()),
        };
        Ok((desc, vec![line]))
    })
}

fn dims_desc(ps: &[&Arc<Pcs>]) -> String {
    format!("dims={}", ps.iter().map(|p| p.dim().to_string()).collect::<Vec<_>>().join(","))
}

fn random_space(rng: &mut ChaCha8Rng, max_dim: usize) -> Result<Arc<Pcs>> {
    let n = rng.gen_range(1..=max_dim.max(1));
    random_pcs(rng, n, 3, 4)
}

fn coherence(cfg: &SuiteConfig) -> Vec<CheckLine> {
    run_instances(cfg, cfg.instances, |_, rng| {
        let s: Vec<Arc<Pcs>> = (0..4).map(|_| random_space(rng, cfg.max_dim)).collect::<Result<_>>()?;
        let f = random_morphism(rng, &s[0], &s[1], 4)?;
        let g = random_morphism(rng, &s[1], &s[2], 4)?;
        let h = random_morphism(rng, &s[2], &s[3], 4)?;
        let k = random_morphism(rng, &s[3], &s[0], 4)?;
        let mut checks = structural_checks(&s[0], &s[1], &s[2], &s[3])?;
        checks.extend(naturality_checks(&f, &g, &h, &k)?);
        let lines = checks
            .into_iter()
            .map(|c| CheckLine { instance: None, descriptor: String::new(), check: c.name.into(), passed: c.passed, witness: c.witness })
            .collect();
        Ok((dims_desc(&[&s[0], &s[1], &s[2], &s[3]]), lines))
    })
}

fn universal(cfg: &SuiteConfig) -> Vec<CheckLine> {
    run_instances(cfg, cfg.instances, |_, rng| {
        let (x, y, z) = (random_space(rng, cfg.max_dim)?, random_space(rng, cfg.max_dim)?, random_space(rng, cfg.max_dim)?);
        let mut out = Vec::new();
        let f = random_bilinear(rng, &x, &y, &z, 4)?;
        match linofbilin(&f) {
            Ok(h) => {
                let mut bad = None;
                for g in x.ball().canonical_vrep() {
                    for k in y.ball().canonical_vrep() {
                        let (l, r) = (h.apply_vec(&g.tensor(k))?, f.apply(g, k)?);
                        if l != r && bad.is_none() {
                            bad = Some(format!("at ({g}) x ({k}): {l} vs {r}"));
                        }
                    }
                }
                out.push(CheckLine::new("linofbilin-factorizes", bad.is_none(), || bad.clone().unwrap()));
            }
            Err(e) => out.push(CheckLine::new("linofbilin-factorizes", false, || e.to_string())),
        }
        out.push(CheckLine::new("linofbilin-unique", pure_tensors_span(&x, &y), || {
            "pure tensors of vertices do not span the tensor web".into()
        }));

        let xy = tensor(&x, &y)?;
        let t = random_morphism(rng, &xy, &z, 4)?;
        let c = curry(&t)?;
        out.push(CheckLine::new("curry-is-morphism", MorphMatrix::new(c.dom().clone(), c.cod().clone(), c.matrix().clone()).is_ok(), || {
            "curried matrix leaves the ball".into()
        }));
        out.push(CheckLine::eq("uncurry-curry", &uncurry(&c)?.matrix().clone(), t.matrix()));
        let yz = limpl(&y, &z)?;
        let s = random_morphism(rng, &x, &yz, 4)?;
        out.push(CheckLine::eq("curry-uncurry", &curry(&uncurry(&s)?)?.matrix().clone(), s.matrix()));
        let beta = tensor_morph(&c, &MorphMatrix::identity(&y))?.then(&eval_on(c.cod())?)?;
        out.push(CheckLine::eq("beta", beta.matrix(), t.matrix()));
        Ok((dims_desc(&[&x, &y, &z]), out))
    })
}

fn exponential(cfg: &SuiteConfig) -> Result<Vec<CheckLine>> {
    let dmax = cfg.truncate.max(1);
    let wmax = cfg.max_dim.clamp(1, 2);
    let mut lines = run_instances(cfg, cfg.instances, |i, rng| {
        let d = 1 + i % dmax;
        let x = random_space(rng, wmax)?;
        let y = random_space(rng, wmax)?;
        let pts: Vec<RatVec> = x.ball().canonical_vrep().to_vec();
        let mut out = Vec::new();

        let der = dereliction(&x, d)?;
        let ok = pts.iter().all(|g| der.apply_vec(&promote_vec(g, d)).ok().as_ref() == Some(g));
        out.push(CheckLine::new("dereliction", ok, || "der·x^! != x".into()));

        for d1 in 1..=d {
            for d2 in 1..=d / d1 {
                let digg = digging(&x, d, d1, d2)?;
                let ok = pts
                    .iter()
                    .all(|g| digg.apply_vec(&promote_vec(g, d)).ok() == Some(promote_vec(&promote_vec(g, d2), d1)));
                out.push(CheckLine::new(format!("digging-{d1}-{d2}"), ok, || "digg·x^! != (x^!)^!".into()));
            }
        }

        let f = random_morphism(rng, &x, &y, 4)?;
        let bf = bang_functor(&f, d)?;
        let ok = pts.iter().all(|g| {
            bf.apply_vec(&promote_vec(g, d)).ok() == f.apply_vec(g).ok().map(|fg| promote_vec(&fg, d))
        });
        out.push(CheckLine::new("functor", ok, || "(!f)·x^! != (f·x)^!".into()));

        let s2 = seely2(&x, &y, d)?;
        let ok = pts.iter().all(|g| {
            y.ball().canonical_vrep().iter().all(|h| {
                let joined = RatVec(g.iter().chain(h.iter()).cloned().collect());
                s2.apply_vec(&promote_pair(g, h, d)).ok() == Some(promote_vec(&joined, d))
            })
        });
        out.push(CheckLine::new("seely2-promotions", ok, || "Seely2(x^! ⊗ y^!) != (x,y)^!".into()));
        let inv = seely2_inverse(&x, &y, d)?;
        out.push(CheckLine::eq("seely2-round-trip", s2.then(&inv)?.matrix(), &SparseMat::identity(s2.dom().dim())));
        out.push(CheckLine::eq("seely2-round-trip-inverse", inv.then(&s2)?.matrix(), &SparseMat::identity(s2.cod().dim())));

        // counit laws and naturality of digging
        let bx = crate::bang::bang(&x, d)?;
        let left = digging(&x, d, 1, d)?.then(&dereliction(&bx, 1)?)?;
        out.push(CheckLine::eq("counit-left", left.matrix(), &SparseMat::identity(bx.dim())));
        let right = digging(&x, d, d, 1)?.then(&bang_functor(&dereliction(&x, 1)?, d)?)?;
        out.push(CheckLine::eq("counit-right", right.matrix(), &SparseMat::identity(bx.dim())));
        let (d1, d2) = (1 + i % d, d / (1 + i % d));
        let lhs = digging(&x, d, d1, d2)?.then(&bang_functor(&bang_functor(&f, d2)?, d1)?)?;
        let rhs = bang_functor(&f, d)?.then(&digging(&y, d, d1, d2)?)?;
        out.push(CheckLine::eq("digging-natural", lhs.matrix(), rhs.matrix()));

        // Kleisli composition against polynomial substitution
        let (df, dg) = (1 + i % 2, 1 + (i / 2) % 2);
        let sf = random_stable_fn(rng, &x, y.dim().min(2), df, 4)?;
        let sg = random_stable_fn(rng, sf.cod(), 2, dg, 4)?;
        let comp = kleisli_compose(&sf, &sg)?;
        out.push(CheckLine::eq("kleisli-substitution", &polys_of(&comp), &substitute(&polys_of(&sf), &polys_of(&sg))));
        let ok = pts.iter().all(|g| comp.eval(g).ok() == sf.eval(g).and_then(|v| sg.eval(&v)).ok());
        out.push(CheckLine::new("kleisli-evaluation", ok, || "composite differs from g(f(x))".into()));

        Ok((format!("D={d} {}", dims_desc(&[&x, &y])), out))
    });

    let one_sp = Pcs::one();
    let sq = StableFn::from_terms(one_sp.clone(), one_sp.clone(), 2, &[(vec![0, 0], 0, qi(1))])?;
    let four = kleisli_compose(&sq, &sq)?;
    let expected = StableFn::from_terms(one_sp.clone(), one_sp.clone(), 4, &[(vec![0; 4], 0, qi(1))])?;
    let s0 = seely0(cfg.truncate.max(1))?;
    let mut extra = vec![
        CheckLine::new("square-of-square-is-fourth-power", four == expected, || format!("{:?}", four.matrix())),
        CheckLine::eq(
            "promotion-of-half",
            &promote_vec(&RatVec(vec![q(1, 2)]), 3),
            &RatVec(vec![qi(1), q(1, 2), q(1, 4), q(1, 8)]),
        ),
        CheckLine::eq("seely0", &s0.apply_vec(&RatVec(vec![qi(1)]))?, &promote_vec(&RatVec::zeros(0), cfg.truncate.max(1))),
    ];
    extra = fixed("1", extra);
    lines.extend(extra);
    Ok(lines)
}

fn stability(cfg: &SuiteConfig) -> Result<Vec<CheckLine>> {
    let kmax = cfg.grid_denominator.max(1);
    let dmax = cfg.truncate.clamp(1, 3);
    let mut lines = run_instances(cfg, cfg.instances, |i, rng| {
        let x = random_space(rng, cfg.max_dim.clamp(1, 2))?;
        let k = 1 + i as i64 % kmax;
        let d = 1 + (i / kmax as usize) % dmax;
        let f = random_stable_fn(rng, &x, 2, d, 4)?;
        let line = match check_stable_fn(&f, 3, k)? {
            None => CheckLine::new("totally-monotone", true, String::new),
            Some(v) => CheckLine::new("totally-monotone", false, || v.to_string()),
        };
        Ok((format!("dim={} D={d} k={k}", x.dim()), vec![line]))
    });
    let x = Pcs::one();
    let tuples = grid_tuples(&x, 3, 4)?;
    let quarter = vec![RatVec(vec![q(1, 4)]), RatVec(vec![q(1, 4)])];
    let line = match total_monotonicity_check(sqrt_fn, &tuples, &x)? {
        Some(v) if v.tuple == quarter => {
            let mut l = CheckLine::new("sqrt-rejected", true, String::new);
            l.check = format!("sqrt-rejected {v}");
            l
        }
        Some(v) => CheckLine::new("sqrt-rejected", false, || format!("unexpected witness {v}")),
        None => CheckLine::new("sqrt-rejected", false, || "no violation found".into()),
    };
    lines.extend(fixed("sqrt on 1", vec![line]));
    Ok(lines)
}

fn stream(cfg: &SuiteConfig) -> Vec<CheckLine> {
    let cases: Vec<(u32, usize)> = (2..=3).flat_map(|n| (0..=3).map(move |d| (n, d))).collect();
    run_instances(cfg, cases.len(), |i, rng| {
        let (n, d) = cases[i];
        let leaves = (n as usize).pow(d as u32);
        let mut measures = vec![RatVec::zeros(leaves), RatVec::constant(leaves, q(1, leaves as i64))];
        for _ in 0..4 {
            let v = grid_vector(rng, leaves, 4);
            let s = v.sum();
            measures.push(if s > one() { v.scale(&(one() / s)) } else { v });
        }
        let r = stream_equalizer_demo(n, d, 1 << 20, &measures)?;
        let out = vec![
            CheckLine::eq("solution-dimension", &r.solution_dim, &leaves),
            CheckLine::new("leaf-isomorphism-and-norms", r.passed(), || r.failures.join("; ")),
        ];
        Ok((format!("n={n} d={d} facets={}", r.facets), out))
    })
}

fn kernel(cfg: &SuiteConfig) -> Vec<CheckLine> {
    run_instances(cfg, cfg.instances, |_, rng| {
        let mut space = || DiscreteSpace::numbered(rng.gen_range(1..=5));
        let (a, b, c) = (space()?, space()?, space()?);
        let k1 = random_kernel(rng, &a, &b, 4)?;
        let k2 = random_kernel(rng, &b, &c, 4)?;
        let t = lin_of_kern(&k1);
        let mut out = vec![
            CheckLine::eq("kern-of-lin-of-kern", kern_of_lin(&t, &a, &b)?.rows(), k1.rows()),
            CheckLine::eq("lin-of-kern-of-lin", lin_of_kern(&kern_of_lin(&t, &a, &b)?).matrix(), t.matrix()),
            CheckLine::eq("functoriality", lin_of_kern(&k1.then(&k2)?).matrix(), t.then(&lin_of_kern(&k2))?.matrix()),
            CheckLine::eq("identity", lin_of_kern(&Kernel::identity(&a)).matrix(), &SparseMat::identity(a.len())),
        ];
        let mu = RatVec((0..a.len()).map(|_| grid_value(rng, 4 * a.len() as i64)).collect());
        let mu = ConeElem::new(Cone::Measure(a.clone()), mu)?;
        out.push(CheckLine::eq("norm-is-total-mass", &mu.norm()?, &test_eval(&MeasTest::full(&a), &mu)?));
        Ok((format!("sizes={},{},{}", a.len(), b.len(), c.len()), out))
    })
}

fn norm(cfg: &SuiteConfig) -> Vec<CheckLine> {
    run_instances(cfg, cfg.instances, |_, rng| {
        let (x, y) = (random_space(rng, cfg.max_dim)?, random_space(rng, cfg.max_dim)?);
        let u = grid_vector(rng, x.dim(), 4).scale(&q(rng.gen_range(1..=8), 4));
        let n = Cone::Pcs(x.clone()).norm_of(&u)?;
        let lp = element_norm_lp(&x, &u)?;
        let mut m = SparseMat::zeros(x.dim(), y.dim());
        for a in 0..x.dim() {
            for b in 0..y.dim() {
                if rng.gen_bool(0.6) {
                    m.set(a, b, grid_value(rng, 4));
                }
            }
        }
        let t = MorphMatrix::structural(x.clone(), y.clone(), m);
        let out = vec![
            CheckLine::eq("element-norm", &Some(n), &lp),
            CheckLine::eq("morphism-norm", &Some(t.morph_norm()?), &morph_norm_lp(&t)?),
        ];
        Ok((dims_desc(&[&x, &y]), out))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(instances: usize) -> SuiteConfig {
        SuiteConfig { seed: 3, instances, max_dim: 2, grid_denominator: 4, truncate: 3 }
    }

    #[test]
    fn example_suite_passes() {
        let r = run_suite("example-3-6", &SuiteConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.render());
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn small_suites_pass_and_are_deterministic() {
        for name in SUITES {
            let a = run_suite(name, &small(6)).unwrap();
            assert!(a.passed(), "{}", a.render());
            let b = run_suite(name, &small(6)).unwrap();
            assert_eq!(a.render(), b.render());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &small(1)), Err(PcohError::Malformed(_))));
    }
}
