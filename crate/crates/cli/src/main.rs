use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use pcoh::bang::{bang, promote};
use pcoh::io::{
    read_kernel, read_matrix, read_pcs, read_stable, read_vector, write_kernel, write_matrix, write_pcs, write_vector,
};
use pcoh::kernel::{kern_of_lin, lin_of_kern};
use pcoh::limits::stream_equalizer_demo;
use pcoh::morph::{limpl, with_product};
use pcoh::oracle::{first_disagreement, grid_closure, grid_members};
use pcoh::random::{instance_rng, random_pcs, random_stable_fn};
use pcoh::rational::{fmt_q, q};
use pcoh::stability::{check_stable_fn, grid_tuples, sqrt_fn, total_monotonicity_check};
use pcoh::suites::{run_suite, SuiteConfig, SuiteReport, SUITES};
use pcoh::tensor::tensor;
use pcoh::{biorth_closure, ConeElem, DiscreteSpace, Pcs, RatVec};

#[derive(Parser)]
#[command(name = "pcoh", version, about = "Exact probabilistic coherence spaces on finite webs")]
struct Cli {
    /// Also write the output to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct SuiteFlags {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long, default_value_t = 4)]
    grid_denominator: i64,
    #[arg(long = "truncate", default_value_t = 4)]
    truncate: usize,
}

impl SuiteFlags {
    fn config(&self) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            instances: self.instances,
            max_dim: self.max_dim,
            grid_denominator: self.grid_denominator,
            truncate: self.truncate,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the dual space.
    Dual { space: PathBuf },
    /// Biorthogonal closure of the generators in a space file; with
    /// --grid-denominator, compare it to the brute-force grid closure.
    Closure {
        space: PathBuf,
        #[arg(long)]
        grid_denominator: Option<i64>,
    },
    /// Norm of a vector (`norm x.vec X.pcs`) or of a matrix (`norm t.mat`).
    Norm { first: PathBuf, space: Option<PathBuf> },
    Tensor { x: PathBuf, y: PathBuf },
    Limpl { x: PathBuf, y: PathBuf },
    /// Cartesian product of two or more spaces.
    With {
        #[arg(required = true, num_args = 2..)]
        spaces: Vec<PathBuf>,
    },
    /// Truncated exponential: web and inner generators, or a promotion with --vec.
    Bang {
        space: PathBuf,
        #[arg(long = "truncate", default_value_t = 2)]
        truncate: usize,
        #[arg(long)]
        vec: Option<PathBuf>,
    },
    /// Evaluate a power series file at a vector.
    StableEval { function: PathBuf, vec: PathBuf },
    /// Total monotonicity on exhaustive grid tuples, for a power series file
    /// or for seeded random ones.
    StabilityCheck {
        function: Option<PathBuf>,
        /// Check `x ↦ √x` on the unit space instead (not totally monotone).
        #[arg(long, conflicts_with = "function")]
        sqrt: bool,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        grid_denominator: i64,
        #[arg(long = "truncate", default_value_t = 3)]
        truncate: usize,
    },
    /// Coherence and naturality diagrams on seeded instances.
    Coherence(SuiteFlags),
    /// Equalizer of the shift and the identity on depth-truncated streams.
    Stream {
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        depth: usize,
        /// Cap on the number of maximal antichains.
        #[arg(long, default_value_t = 1_000_000)]
        max_facets: u128,
    },
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Run a verification suite.
    Suite {
        name: String,
        #[command(flatten)]
        flags: SuiteFlags,
    },
    /// Apply a matrix to a vector.
    Apply { matrix: PathBuf, vec: PathBuf },
    /// `s` then `t`.
    Compose { s: PathBuf, t: PathBuf },
}

#[derive(Subcommand)]
enum KernelCmd {
    /// `k1` then `k2`.
    Compose { k1: PathBuf, k2: PathBuf },
    /// Kernel of a matrix between measure spaces.
    FromMatrix { matrix: PathBuf },
    /// Matrix of a kernel; writes OUT and its two measure spaces next to it.
    ToMatrix { kernel: PathBuf, out: PathBuf },
}

/// Output text plus whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, passed: true }
    }
}

/// Second and third tokens of a `matrix`/`kernel` header.
fn header_names(path: &Path) -> anyhow::Result<(String, String)> {
    let text = fs::read_to_string(path).with_context(|| format!("parse error: cannot read `{}`", path.display()))?;
    let header = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
    let toks: Vec<&str> = header.unwrap_or("").split_whitespace().collect();
    match toks.as_slice() {
        [_, a, b, ..] => Ok((a.to_string(), b.to_string())),
        _ => anyhow::bail!("parse error: bad header in `{}`", path.display()),
    }
}

fn suite_text(r: &SuiteReport, table: bool) -> Outcome {
    let mut text = r.render();
    if table {
        text.push_str("diagram\tpassed\ttotal\n");
        for (name, p, t) in r.tally() {
            let _ = writeln!(text, "{name}\t{p}\t{t}");
        }
    }
    Outcome { text, passed: r.passed() }
}

fn space_text(p: &Arc<Pcs>) -> anyhow::Result<String> {
    Ok(write_pcs(p)?)
}

fn run(cmd: Cmd) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        Cmd::Dual { space } => Outcome::ok(space_text(&read_pcs(&space)?.dual()?)?),
        Cmd::Closure { space, grid_denominator } => {
            let p = read_pcs(&space)?;
            let gens = p.ball().vrep().map(<[RatVec]>::to_vec).unwrap_or_else(|| p.ball().canonical_vrep().to_vec());
            let closed = biorth_closure(p.web().clone(), gens.clone())?;
            let mut text = space_text(&closed)?;
            let mut passed = true;
            if let Some(k) = grid_denominator {
                match grid_closure(&gens, p.dim(), k) {
                    None => anyhow::bail!("malformed input: generators are not on the grid of denominator {k}"),
                    Some(oracle) => match first_disagreement(&grid_members(&closed, k)?, &oracle, k) {
                        None => {
                            let _ = writeln!(text, "grid-agreement PASS denominator={k} points={}", oracle.len());
                        }
                        Some(w) => {
                            passed = false;
                            let _ = writeln!(text, "grid-agreement FAIL witness: {w}");
                        }
                    },
                }
            }
            Outcome { text, passed }
        }
        Cmd::Norm { first, space: Some(space) } => {
            let p = read_pcs(&space)?;
            let x = read_vector(&first, p.dim())?;
            Outcome::ok(format!("{}\n", fmt_q(&ConeElem::in_pcs(&p, x)?.norm()?)))
        }
        Cmd::Norm { first, space: None } => Outcome::ok(format!("{}\n", fmt_q(&read_matrix(&first)?.morph_norm()?))),
        Cmd::Tensor { x, y } => Outcome::ok(space_text(&tensor(&read_pcs(&x)?, &read_pcs(&y)?)?)?),
        Cmd::Limpl { x, y } => Outcome::ok(space_text(&limpl(&read_pcs(&x)?, &read_pcs(&y)?)?)?),
        Cmd::With { spaces } => {
            let ps = spaces.iter().map(|s| read_pcs(s)).collect::<pcoh::Result<Vec<Arc<Pcs>>>>()?;
            Outcome::ok(space_text(&with_product(&ps)?)?)
        }
        Cmd::Bang { space, truncate, vec } => {
            let x = read_pcs(&space)?;
            let bx = bang(&x, truncate)?;
            match vec {
                Some(v) => Outcome::ok(write_vector(&promote(&read_vector(&v, x.dim())?, &bx)?)),
                None => {
                    let mut text = format!("pcs: {}\ntruncation: {truncate}\n", bx.web());
                    text.push_str("# inexact ball: closure of the promotions below\n");
                    let gens: BTreeSet<&RatVec> = bx.ball().vrep().unwrap_or_default().iter().collect();
                    for g in gens {
                        let _ = writeln!(text, "V: {g}");
                    }
                    Outcome::ok(text)
                }
            }
        }
        Cmd::StableEval { function, vec } => {
            let f = read_stable(&function)?;
            Outcome::ok(write_vector(&f.eval(&read_vector(&vec, f.dom().dim())?)?))
        }
        Cmd::StabilityCheck { function, sqrt, n, samples, seed, max_dim, grid_denominator, truncate } => {
            let mut text = String::new();
            let mut passed = true;
            let mut record = |label: String, v: Option<String>| {
                match v {
                    None => {
                        let _ = writeln!(text, "{label}\ttotally-monotone\tPASS");
                    }
                    Some(w) => {
                        passed = false;
                        let _ = writeln!(text, "{label}\ttotally-monotone\tFAIL\twitness: {w}");
                    }
                }
            };
            match function {
                _ if sqrt => {
                    let one = Pcs::one();
                    let tuples = grid_tuples(&one, n, grid_denominator)?;
                    let v = total_monotonicity_check(sqrt_fn, &tuples, &one)?;
                    record("sqrt".into(), v.map(|v| v.to_string()));
                }
                Some(path) => {
                    let f = read_stable(&path)?;
                    record(path.display().to_string(), check_stable_fn(&f, n, grid_denominator)?.map(|v| v.to_string()));
                }
                None => {
                    for i in 0..samples {
                        let mut rng = instance_rng(seed, i);
                        let dim = 1 + i % max_dim.max(1);
                        let d = 1 + i % truncate.max(1);
                        let x = random_pcs(&mut rng, dim, 3, 4)?;
                        let f = random_stable_fn(&mut rng, &x, 2, d, 4)?;
                        let v = check_stable_fn(&f, n, grid_denominator)?;
                        record(format!("{i}\tdim={dim} D={d}"), v.map(|v| v.to_string()));
                    }
                }
            }
            Outcome { text, passed }
        }
        Cmd::Coherence(flags) => suite_text(&run_suite("coherence", &flags.config())?, true),
        Cmd::Stream { alphabet, depth, max_facets } => {
            let leaves = (alphabet as usize).pow(depth as u32);
            let uniform = RatVec::constant(leaves, q(1, leaves.max(1) as i64));
            let point = RatVec::unit(leaves, 0);
            let measures = vec![RatVec::zeros(leaves), uniform, point];
            let r = stream_equalizer_demo(alphabet, depth, max_facets, &measures)?;
            let mut text = format!(
                "stream alphabet={} depth={} leaves={} solution-dim={} antichains={} measures={}\n",
                r.alphabet, r.depth, r.leaves, r.solution_dim, r.facets, r.checked_measures
            );
            for f in &r.failures {
                let _ = writeln!(text, "FAIL\t{f}");
            }
            let _ = writeln!(text, "result {}", if r.passed() { "PASS" } else { "FAIL" });
            Outcome { text, passed: r.passed() }
        }
        Cmd::Kernel(KernelCmd::Compose { k1, k2 }) => {
            let (dom, _) = header_names(&k1)?;
            let (_, cod) = header_names(&k2)?;
            Outcome::ok(write_kernel(&read_kernel(&k1)?.then(&read_kernel(&k2)?)?, &dom, &cod))
        }
        Cmd::Kernel(KernelCmd::FromMatrix { matrix }) => {
            let (dom, cod) = header_names(&matrix)?;
            let t = read_matrix(&matrix)?;
            let a = DiscreteSpace::new(t.dom().web().clone())?;
            let b = DiscreteSpace::new(t.cod().web().clone())?;
            Outcome::ok(write_kernel(&kern_of_lin(&t, &a, &b)?, &dom, &cod))
        }
        Cmd::Kernel(KernelCmd::ToMatrix { kernel, out }) => {
            let t = lin_of_kern(&read_kernel(&kernel)?);
            let stem = out.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
            let (dom, cod) = (format!("{stem}.dom.pcs"), format!("{stem}.cod.pcs"));
            let dir = out.parent().unwrap_or_else(|| Path::new("."));
            fs::write(dir.join(&dom), space_text(t.dom())?).context("cannot write domain space")?;
            fs::write(dir.join(&cod), space_text(t.cod())?).context("cannot write codomain space")?;
            let text = write_matrix(&t, &dom, &cod);
            fs::write(&out, &text).context("cannot write matrix")?;
            Outcome::ok(text)
        }
        Cmd::Suite { name, flags } => {
            if !SUITES.contains(&name.as_str()) {
                anyhow::bail!("malformed input: unknown suite `{name}`; known: {}", SUITES.join(", "));
            }
            suite_text(&run_suite(&name, &flags.config())?, false)
        }
        Cmd::Apply { matrix, vec } => {
            let t = read_matrix(&matrix)?;
            Outcome::ok(write_vector(&t.apply_vec(&read_vector(&vec, t.dom().dim())?)?))
        }
        Cmd::Compose { s, t } => {
            let (dom, _) = header_names(&s)?;
            let (_, cod) = header_names(&t)?;
            Outcome::ok(write_matrix(&read_matrix(&s)?.then(&read_matrix(&t)?)?, &dom, &cod))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = &cli.report {
                if let Err(e) = fs::write(path, &out.text) {
                    eprintln!("error: cannot write report `{}`: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
