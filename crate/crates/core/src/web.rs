//! Structured web labels and finite ordered webs.
//!
//! Labels serialize without whitespace so that they can be used as tokens
//! in the line-oriented file formats:
//!
//! | label            | text        |
//! |------------------|-------------|
//! | atom             | `a`, `*`    |
//! | pair             | `(a,b)`     |
//! | multiset         | `[a,a,b]`   |
//! | finite sequence  | `.0.1`, `.` |

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{PcohError, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atom(String),
    Pair(Box<Label>, Box<Label>),
    /// Elements kept sorted.
    Multiset(Vec<Label>),
    Seq(Vec<u32>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Label {
        Label::Atom(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Label {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn multiset(mut elems: Vec<Label>) -> Label {
        elems.sort();
        Label::Multiset(elems)
    }

    /// The unit web element `*`.
    pub fn star() -> Label {
        Label::atom("*")
    }

    pub fn parse(s: &str) -> Result<Label> {
        let mut p = LabelParser { s: s.as_bytes(), pos: 0 };
        let l = p.label()?;
        if p.pos != p.s.len() {
            return Err(PcohError::Parse(format!("trailing input in label `{s}`")));
        }
        Ok(l)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => f.write_str(s),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
            Label::Multiset(xs) => {
                f.write_str("[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            Label::Seq(xs) => {
                if xs.is_empty() {
                    return f.write_str(".");
                }
                for x in xs {
                    write!(f, ".{x}")?;
                }
                Ok(())
            }
        }
    }
}

struct LabelParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl LabelParser<'_> {
    fn err(&self, what: &str) -> PcohError {
        PcohError::Parse(format!(
            "{what} at byte {} of label `{}`",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn label(&mut self) -> Result<Label> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let a = self.label()?;
                self.expect(b',')?;
                let b = self.label()?;
                self.expect(b')')?;
                Ok(Label::pair(a, b))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut xs = Vec::new();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(Label::Multiset(xs));
                }
                loop {
                    xs.push(self.label()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected `,` or `]`")),
                    }
                }
                Ok(Label::multiset(xs))
            }
            Some(b'.') => {
                let mut xs = Vec::new();
                self.pos += 1;
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() || c == b'.' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let body = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if !body.is_empty() {
                    for part in body.split('.') {
                        xs.push(part.parse().map_err(|_| self.err("bad sequence element"))?);
                    }
                }
                Ok(Label::Seq(xs))
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_whitespace() || b"(),[]{}".contains(&c) {
                        break;
                    }
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("empty atom"));
                }
                Ok(Label::Atom(
                    String::from_utf8_lossy(&self.s[start..self.pos]).into_owned(),
                ))
            }
            None => Err(self.err("unexpected end")),
        }
    }
}

/// A finite, ordered set of labels. Coordinates of vectors over the web
/// follow this order.
#[derive(Debug, Clone)]
pub struct Web {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl PartialEq for Web {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Web {}

impl Web {
    pub fn new(labels: Vec<Label>) -> Result<Arc<Web>> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(PcohError::Malformed(format!("duplicate web label `{l}`")));
            }
        }
        Ok(Arc::new(Web { labels, index }))
    }

    /// Web `{0, 1, ..., n-1}` of atom labels.
    pub fn numbered(n: usize) -> Arc<Web> {
        Web::new((0..n).map(|i| Label::atom(i.to_string())).collect()).unwrap()
    }

    pub fn unit() -> Arc<Web> {
        Web::new(vec![Label::star()]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn position(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    /// Row-major product web: `(a, b)` sits at `i * |other| + j`.
    pub fn product(&self, other: &Web) -> Arc<Web> {
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(Label::pair(a.clone(), b.clone()));
            }
        }
        Web::new(labels).unwrap()
    }

    pub fn ensure_same(&self, other: &Web, ctx: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(PcohError::WebMismatch(format!(
                "{ctx}: webs of sizes {} and {} differ",
                self.len(),
                other.len()
            )))
        }
    }
}

impl fmt::Display for Web {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip() {
        for s in ["a", "*", "(a,b)", "[a,a,b]", "[]", ".0.1.2", ".", "((0,a),[x,.1])", "[[],[*]]"] {
            let l = Label::parse(s).unwrap();
            assert_eq!(l.to_string(), s);
        }
    }

    #[test]
    fn multisets_are_sorted() {
        assert_eq!(Label::parse("[b,a,b]").unwrap().to_string(), "[a,b,b]");
    }

    #[test]
    fn rejects_garbage() {
        assert!(Label::parse("(a,b").is_err());
        assert!(Label::parse("a b").is_err());
        assert!(Web::new(vec![Label::atom("a"), Label::atom("a")]).is_err());
    }

    #[test]
    fn product_order() {
        let w = Web::numbered(2).product(&Web::numbered(3));
        assert_eq!(w.len(), 6);
        assert_eq!(w.label(4).to_string(), "(1,1)");
    }
}
