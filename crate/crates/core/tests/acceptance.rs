//! Acceptance criteria, run sequentially so that each time budget is
//! measured without contention. Prints one line per criterion.

use std::time::{Duration, Instant};

use pcoh::suites::{run_suite, SuiteConfig, SuiteReport};

struct Criterion {
    id: usize,
    title: &'static str,
    suite: &'static str,
    config: SuiteConfig,
    min_instances: usize,
    budget: Duration,
    /// Check-name prefixes that must be present and passing.
    required: &'static [&'static str],
}

fn cfg(instances: usize, max_dim: usize, truncate: usize) -> SuiteConfig {
    SuiteConfig { seed: 2024, instances, max_dim, grid_denominator: 4, truncate }
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "square tensor square: cube, e12+e21, iterated difference, separation",
            suite: "example-3-6",
            config: cfg(0, 2, 1),
            min_instances: 0,
            budget: Duration::from_secs(1),
            required: &["ball-is-4-cube", "e12+e21-in-ball", "iterated-difference", "separated-from-pure-tensor-hull"],
        },
        Criterion {
            id: 2,
            title: "biorthogonal closure equals the grid closure fixpoint",
            suite: "closure",
            config: cfg(210, 3, 1),
            min_instances: 200,
            budget: Duration::from_secs(300),
            required: &["grid-agreement"],
        },
        Criterion {
            id: 3,
            title: "symmetric monoidal coherence and naturality",
            suite: "coherence",
            config: cfg(100, 3, 1),
            min_instances: 100,
            budget: Duration::from_secs(60),
            required: &[
                "pentagon",
                "triangle",
                "hexagon",
                "symmetry-involution",
                "naturality-associator",
                "naturality-symmetry",
                "naturality-left-unitor",
                "naturality-right-unitor",
                "functoriality",
            ],
        },
        Criterion {
            id: 4,
            title: "bilinear factorization and currying",
            suite: "universal",
            config: cfg(100, 3, 1),
            min_instances: 100,
            budget: Duration::from_secs(60),
            required: &["linofbilin-factorizes", "linofbilin-unique", "uncurry-curry", "curry-uncurry", "beta"],
        },
        Criterion {
            id: 5,
            title: "exponential equations, Seely round trips, x^2 after x^2",
            suite: "exponential",
            config: cfg(100, 2, 4),
            min_instances: 100,
            budget: Duration::from_secs(60),
            required: &[
                "dereliction",
                "digging-",
                "functor",
                "seely2-promotions",
                "seely2-round-trip",
                "square-of-square-is-fourth-power",
            ],
        },
        Criterion {
            id: 6,
            title: "total monotonicity of power series, sqrt rejected at (1/4,1/4)",
            suite: "stability",
            config: cfg(100, 2, 3),
            min_instances: 100,
            budget: Duration::from_secs(60),
            required: &["totally-monotone", "sqrt-rejected"],
        },
        Criterion {
            id: 7,
            title: "stream equalizer dimension and norms",
            suite: "stream",
            config: cfg(0, 3, 1),
            min_instances: 8,
            budget: Duration::from_secs(10),
            required: &["solution-dimension", "leaf-isomorphism-and-norms"],
        },
        Criterion {
            id: 8,
            title: "kernel round trips and functoriality",
            suite: "kernel",
            config: cfg(100, 5, 1),
            min_instances: 100,
            budget: Duration::from_secs(10),
            required: &["kern-of-lin-of-kern", "lin-of-kern-of-lin", "functoriality"],
        },
        Criterion {
            id: 9,
            title: "norms agree with the LP oracle",
            suite: "norm",
            config: cfg(100, 3, 1),
            min_instances: 100,
            budget: Duration::from_secs(60),
            required: &["element-norm", "morphism-norm"],
        },
    ]
}

fn judge(c: &Criterion, r: &SuiteReport, elapsed: Duration) -> Result<String, String> {
    if let Some(f) = r.failures().next() {
        return Err(format!(
            "instance {:?} [{}] {}: {}",
            f.instance,
            f.descriptor,
            f.check,
            f.witness.clone().unwrap_or_default()
        ));
    }
    if r.instances() < c.min_instances {
        return Err(format!("only {} instances", r.instances()));
    }
    for name in c.required {
        if r.checks_named(name).next().is_none() {
            return Err(format!("check `{name}` never ran"));
        }
    }
    if elapsed > c.budget {
        return Err(format!("took {elapsed:.2?}, budget {:?}", c.budget));
    }
    Ok(format!("{} checks over {} instances in {elapsed:.2?}", r.checks.len(), r.instances()))
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let outcome = match run_suite(c.suite, &c.config) {
            Ok(r) => judge(&c, &r, start.elapsed()),
            Err(e) => Err(e.to_string()),
        };
        match outcome {
            Ok(msg) => println!("criterion {} PASS  {}: {msg}", c.id, c.title),
            Err(msg) => {
                println!("criterion {} FAIL  {}: {msg}", c.id, c.title);
                failed.push(c.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
