//! Text formats for spaces, vectors, matrices and kernels.
//!
//! ```text
//! pcs: a b (a,b)           # web labels
//! truncation: 3            # optional
//! H: 1 1/2 0
//! V: 1 0 1/2
//!
//! vec: 1/2 1/2
//!
//! matrix dom.pcs cod.pcs   # paths relative to this file
//! a x 1/2
//!
//! kernel 3 dom.pcs         # a point count or a file naming the points
//! 0 x 1/4
//!
//! stable dom.pcs cod.pcs 2  # power series of degree at most 2
//! [a,a] x 1/2
//! ```
//!
//! Matrix, kernel and power series rows name entries by web label (sorted
//! multisets for power series); missing entries are 0.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::bang::{bang, StableFn};
use crate::error::{PcohError, Result};
use crate::kernel::{DiscreteSpace, Kernel};
use crate::morph::{MorphMatrix, SparseMat};
use crate::pcs::Pcs;
use crate::polytope::format::{parse_labels, parse_rows, parse_vec, write_rows};
use crate::rational::{fmt_q, parse_q};
use crate::vector::RatVec;
use crate::web::{Label, Web};

fn content_lines(s: &str) -> impl Iterator<Item = &str> {
    s.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

pub fn parse_pcs(s: &str) -> Result<Arc<Pcs>> {
    let mut lines = content_lines(s).peekable();
    let header = lines.next().ok_or_else(|| PcohError::Parse("empty PCS file".into()))?;
    let labels = header
        .strip_prefix("pcs:")
        .ok_or_else(|| PcohError::Parse("first line must be `pcs: <labels>`".into()))?;
    let web = Web::new(parse_labels(labels)?)?;
    let mut truncation = None;
    if let Some(t) = lines.peek().and_then(|l| l.strip_prefix("truncation:")) {
        let n = t.trim().parse::<usize>().map_err(|_| PcohError::Parse(format!("bad truncation `{}`", t.trim())))?;
        truncation = Some(n);
        lines.next();
    }
    let p = Pcs::new(parse_rows(web, lines)?);
    Ok(match truncation {
        Some(n) => p.with_truncation(n),
        None => p,
    })
}

/// Writes the canonical descriptions, so equal balls print identically.
pub fn write_pcs(p: &Pcs) -> Result<String> {
    p.require_exact("serialization")?;
    let mut out = format!("pcs: {}\n", p.web()).replace("pcs: \n", "pcs:\n");
    if let Some(n) = p.truncation() {
        out.push_str(&format!("truncation: {n}\n"));
    }
    let canon = crate::polytope::Polytope::from_both(
        p.web().clone(),
        p.ball().canonical_hrep().to_vec(),
        p.ball().canonical_vrep().to_vec(),
    )?;
    write_rows(&mut out, &canon);
    Ok(out)
}

pub fn parse_vector(s: &str, n: usize) -> Result<RatVec> {
    let line = content_lines(s).next().ok_or_else(|| PcohError::Parse("empty vector file".into()))?;
    let rest = line.strip_prefix("vec:").ok_or_else(|| PcohError::Parse("vector file must start with `vec:`".into()))?;
    parse_vec(rest, n)
}

pub fn write_vector(v: &RatVec) -> String {
    if v.is_empty() {
        "vec:\n".into()
    } else {
        format!("vec: {v}\n")
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| PcohError::Parse(format!("cannot read `{}`: {e}", path.display())))
}

pub fn read_pcs(path: &Path) -> Result<Arc<Pcs>> {
    parse_pcs(&read(path)?)
}

pub fn read_vector(path: &Path, n: usize) -> Result<RatVec> {
    parse_vector(&read(path)?, n)
}

fn relative(base: &Path, name: &str) -> PathBuf {
    base.parent().unwrap_or_else(|| Path::new(".")).join(name)
}

fn position(web: &Web, tok: &str) -> Result<usize> {
    let l = Label::parse(tok)?;
    web.position(&l).ok_or_else(|| PcohError::WebMismatch(format!("label `{tok}` is not in the web `{web}`")))
}

/// Rows `a b p/q` into a `|dom| x |cod|` matrix.
fn parse_entries<'a>(lines: impl Iterator<Item = &'a str>, dom: &Web, cod: &Web) -> Result<SparseMat> {
    let mut m = SparseMat::zeros(dom.len(), cod.len());
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(PcohError::Parse(format!("expected `a b p/q`, got `{line}`")));
        }
        let (a, b) = (position(dom, toks[0])?, position(cod, toks[1])?);
        m.set(a, b, parse_q(toks[2])?);
    }
    Ok(m)
}

fn write_entries(out: &mut String, m: &SparseMat, dom: &Web, cod: &Web) {
    for (a, b, x) in m.entries() {
        out.push_str(&format!("{} {} {}\n", dom.label(a), cod.label(b), fmt_q(x)));
    }
}

/// Reads a matrix file; the spaces it names are resolved next to it.
pub fn read_matrix(path: &Path) -> Result<MorphMatrix> {
    let text = read(path)?;
    let mut lines = content_lines(&text);
    let header = lines.next().ok_or_else(|| PcohError::Parse("empty matrix file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "matrix" {
        return Err(PcohError::Parse("first line must be `matrix <dom.pcs> <cod.pcs>`".into()));
    }
    let dom = read_pcs(&relative(path, toks[1]))?;
    let cod = read_pcs(&relative(path, toks[2]))?;
    let m = parse_entries(lines, dom.web(), cod.web())?;
    MorphMatrix::new(dom, cod, m)
}

pub fn write_matrix(t: &MorphMatrix, dom_name: &str, cod_name: &str) -> String {
    let mut out = format!("matrix {dom_name} {cod_name}\n");
    write_entries(&mut out, t.matrix(), t.dom().web(), t.cod().web());
    out
}

/// A kernel endpoint: a point count, or a file whose `pcs:`/`space:` header
/// lists the points.
fn read_space(base: &Path, tok: &str) -> Result<Arc<DiscreteSpace>> {
    if let Ok(n) = tok.parse::<usize>() {
        return DiscreteSpace::numbered(n);
    }
    let text = read(&relative(base, tok))?;
    let header = content_lines(&text).next().ok_or_else(|| PcohError::Parse(format!("empty space file `{tok}`")))?;
    let labels = header
        .strip_prefix("space:")
        .or_else(|| header.strip_prefix("pcs:"))
        .ok_or_else(|| PcohError::Parse(format!("`{tok}` must start with `space:` or `pcs:`")))?;
    DiscreteSpace::new(Web::new(parse_labels(labels)?)?)
}

pub fn read_kernel(path: &Path) -> Result<Kernel> {
    let text = read(path)?;
    let mut lines = content_lines(&text);
    let header = lines.next().ok_or_else(|| PcohError::Parse("empty kernel file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "kernel" {
        return Err(PcohError::Parse("first line must be `kernel <dom> <cod>`".into()));
    }
    let dom = read_space(path, toks[1])?;
    let cod = read_space(path, toks[2])?;
    let m = parse_entries(lines, dom.web(), cod.web())?;
    Kernel::new(dom, cod, m)
}

pub fn write_kernel(k: &Kernel, dom_name: &str, cod_name: &str) -> String {
    let mut out = format!("kernel {dom_name} {cod_name}\n");
    write_entries(&mut out, k.rows(), k.dom().web(), k.cod().web());
    out
}

/// Reads a power series file; coefficients are checked against the codomain.
pub fn read_stable(path: &Path) -> Result<StableFn> {
    let text = read(path)?;
    let mut lines = content_lines(&text);
    let header = lines.next().ok_or_else(|| PcohError::Parse("empty power series file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "stable" {
        return Err(PcohError::Parse("first line must be `stable <dom.pcs> <cod.pcs> <degree>`".into()));
    }
    let degree = toks[3].parse::<usize>().map_err(|_| PcohError::Parse(format!("bad degree `{}`", toks[3])))?;
    let dom = read_pcs(&relative(path, toks[1]))?;
    let cod = read_pcs(&relative(path, toks[2]))?;
    let bx = bang(&dom, degree)?;
    let m = parse_entries(lines, bx.web(), cod.web())?;
    StableFn::new(dom, cod, degree, m)
}

pub fn write_stable(f: &StableFn, dom_name: &str, cod_name: &str) -> Result<String> {
    let bx = bang(f.dom(), f.degree())?;
    let mut out = format!("stable {dom_name} {cod_name} {}\n", f.degree());
    write_entries(&mut out, f.matrix(), bx.web(), f.cod().web());
    Ok(out)
}

/// `space:` file listing the points of a discrete space.
pub fn write_space(s: &DiscreteSpace) -> String {
    format!("space: {}\n", s.web())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::rv;

    #[test]
    fn pcs_round_trip() {
        let text = "pcs: a b\ntruncation: 2\nH: 0 1\nH: 1 0\nV: 1 1\n";
        let p = parse_pcs(text).unwrap();
        assert_eq!(p.truncation(), Some(2));
        assert!(p.member(&rv![1, 1]).unwrap());
        assert_eq!(write_pcs(&p).unwrap(), text);
        assert_eq!(write_pcs(&parse_pcs(&write_pcs(&p).unwrap()).unwrap()).unwrap(), text);
    }

    #[test]
    fn structured_labels() {
        let p = parse_pcs("pcs: (a,b) [a,a] .0.1\nV: 1 1/2 1/3\n").unwrap();
        assert_eq!(p.web().to_string(), "(a,b) [a,a] .0.1");
    }

    #[test]
    fn bad_files() {
        assert!(matches!(parse_pcs("web: a\nV: 1\n"), Err(PcohError::Parse(_))));
        assert!(matches!(parse_pcs("pcs: a\nV: 1 2\n"), Err(PcohError::WebMismatch(_))));
        assert!(matches!(parse_vector("vec: 1 x", 2), Err(PcohError::Parse(_))));
    }

    #[test]
    fn matrix_and_kernel_files() {
        let dir = std::env::temp_dir().join(format!("pcoh-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("x.pcs"), "pcs: a b\nV: 1 1\n").unwrap();
        fs::write(dir.join("y.pcs"), "pcs: u\nV: 1\n").unwrap();
        fs::write(dir.join("t.mat"), "matrix x.pcs y.pcs\na u 1/2\nb u 1/4\n").unwrap();
        let t = read_matrix(&dir.join("t.mat")).unwrap();
        assert_eq!(t.apply_vec(&rv![1, 1]).unwrap(), rv![(3, 4)]);
        assert_eq!(write_matrix(&t, "x.pcs", "y.pcs"), "matrix x.pcs y.pcs\na u 1/2\nb u 1/4\n");
        fs::write(dir.join("k.ker"), "kernel 2 y.pcs\n0 u 1/2\n1 u 1\n").unwrap();
        let k = read_kernel(&dir.join("k.ker")).unwrap();
        assert_eq!(k.row_mass(0), q(1, 2));
        fs::write(dir.join("bad.ker"), "kernel 1 y.pcs\n0 u 5/4\n").unwrap();
        assert!(matches!(read_kernel(&dir.join("bad.ker")), Err(PcohError::NotSubstochastic(_))));
        fs::write(dir.join("bad.mat"), "matrix x.pcs y.pcs\na u 1\nb u 1\n").unwrap();
        assert!(matches!(read_matrix(&dir.join("bad.mat")), Err(PcohError::InvalidMorphism(_))));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn power_series_file() {
        let dir = std::env::temp_dir().join(format!("pcoh-io-stable-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("x.pcs"), "pcs: a\nV: 1\n").unwrap();
        fs::write(dir.join("f.stab"), "stable x.pcs x.pcs 2\n[a,a] a 1\n").unwrap();
        let f = read_stable(&dir.join("f.stab")).unwrap();
        assert_eq!(f.eval(&rv![(1, 2)]).unwrap(), rv![(1, 4)]);
        assert_eq!(write_stable(&f, "x.pcs", "x.pcs").unwrap(), "stable x.pcs x.pcs 2\n[a,a] a 1\n");
        fs::write(dir.join("g.stab"), "stable x.pcs x.pcs 1\n[a] a 2\n").unwrap();
        assert!(read_stable(&dir.join("g.stab")).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
