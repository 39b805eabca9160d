//! Line-oriented polytope text:
//!
//! ```text
//! web: a b c
//! H: 1 1/2 0
//! V: 1 0 0
//! ```
//!
//! `H:` rows come first, then `V:` rows, in stored order. Blank lines and
//! lines starting with `#` are ignored on input.

use std::fmt::Write as _;

use crate::error::{PcohError, Result};
use crate::rational::parse_q;
use crate::vector::RatVec;
use crate::web::{Label, Web};

use super::Polytope;

pub fn write_rows(out: &mut String, p: &Polytope) {
    if let Some(h) = p.hrep() {
        for r in h {
            row(out, "H", r);
        }
    }
    if let Some(v) = p.vrep() {
        for r in v {
            row(out, "V", r);
        }
    }
}

fn row(out: &mut String, tag: &str, r: &RatVec) {
    if r.is_empty() {
        let _ = writeln!(out, "{tag}:");
    } else {
        let _ = writeln!(out, "{tag}: {r}");
    }
}

pub fn to_text(p: &Polytope) -> String {
    let mut out = String::new();
    if p.web().is_empty() {
        out.push_str("web:\n");
    } else {
        let _ = writeln!(out, "web: {}", p.web());
    }
    write_rows(&mut out, p);
    out
}

pub fn parse_labels(s: &str) -> Result<Vec<Label>> {
    s.split_whitespace().map(Label::parse).collect()
}

pub fn parse_vec(s: &str, n: usize) -> Result<RatVec> {
    let v: Vec<_> = s.split_whitespace().map(parse_q).collect::<Result<_>>()?;
    if v.len() != n {
        return Err(PcohError::WebMismatch(format!("row has {} entries, web has {n}", v.len())));
    }
    Ok(RatVec(v))
}

/// Parses the rows following a header; `lines` excludes the header.
pub fn parse_rows<'a>(web: std::sync::Arc<Web>, lines: impl Iterator<Item = &'a str>) -> Result<Polytope> {
    let mut h: Vec<RatVec> = Vec::new();
    let mut v: Vec<RatVec> = Vec::new();
    let (mut saw_h, mut saw_v) = (false, false);
    for line in lines {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("H:") {
            if saw_v {
                return Err(PcohError::Parse("`H:` rows must precede `V:` rows".into()));
            }
            saw_h = true;
            h.push(parse_vec(rest, web.len())?);
        } else if let Some(rest) = t.strip_prefix("V:") {
            saw_v = true;
            v.push(parse_vec(rest, web.len())?);
        } else {
            return Err(PcohError::Parse(format!("unexpected line `{t}`")));
        }
    }
    match (saw_h, saw_v) {
        (true, true) => Polytope::from_both(web, h, v),
        (true, false) => Polytope::from_hrep(web, h),
        (false, true) => Polytope::from_vrep(web, v),
        (false, false) => {
            if web.is_empty() {
                Polytope::from_vrep(web, Vec::new())
            } else {
                Err(PcohError::Parse("no `H:` or `V:` rows".into()))
            }
        }
    }
}

pub fn from_text(s: &str) -> Result<Polytope> {
    let mut lines = s.lines().filter(|l| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    });
    let header = lines.next().ok_or_else(|| PcohError::Parse("empty polytope file".into()))?;
    let labels = header
        .trim()
        .strip_prefix("web:")
        .ok_or_else(|| PcohError::Parse("first line must be `web: ...`".into()))?;
    let web = Web::new(parse_labels(labels)?)?;
    parse_rows(web, lines)
}
