//! Line-oriented text documents and SVG drawings.
//!
//! ```text
//! # unit square
//! kind polytope-h dim 2
//! name square
//! ineq 1 0 >= 0
//! ineq -1 0 >= -1
//! ```
//!
//! Framed documents use `base`, `dir` and `germ` rows; vertex documents use
//! `vertex` rows; `eq` rows give equalities of an H-description. A header
//! `sqrt <m>` fixes the radicand for every scalar in the file.

mod svg;

use thiserror::Error;

use crate::arith::{ArithError, Scalar};
use crate::framing::{FramedPolytope, FramingError, GermFacet};
use crate::polytope::{cmp_rows_desc, AffineSubspace, HPolyhedron, Halfspace, PolytopeError, VPolytope};

pub use svg::{render_svg, Drawable, RenderError, RenderOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: sqrt({found}) where sqrt({expected}) is in use")]
    MixedRadicands {
        line: usize,
        col: usize,
        expected: u64,
        found: u64,
    },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Framing(#[from] FramingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

impl DocumentError {
    /// Machine-readable prefix for command-line reports.
    pub fn code(&self) -> &'static str {
        match self {
            DocumentError::Syntax { .. } => "syntax",
            DocumentError::MixedRadicands { .. } => "radicand",
            DocumentError::Shape(_) => "shape",
            DocumentError::Framing(_) => "framing",
            DocumentError::Polytope(_) => "polytope",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    PolytopeH,
    PolytopeV,
    Framed,
}

impl DocumentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocumentKind::PolytopeH => "polytope-h",
            DocumentKind::PolytopeV => "polytope-v",
            DocumentKind::Framed => "framed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    H(HPolyhedron),
    V(VPolytope),
    Framed(FramedPolytope),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: Option<String>,
    pub payload: Payload,
}

impl Document {
    pub fn new(payload: Payload) -> Self {
        Document { name: None, payload }
    }

    pub fn named(name: impl Into<String>, payload: Payload) -> Self {
        Document {
            name: Some(name.into()),
            payload,
        }
    }

    pub fn kind(&self) -> DocumentKind {
        match self.payload {
            Payload::H(_) => DocumentKind::PolytopeH,
            Payload::V(_) => DocumentKind::PolytopeV,
            Payload::Framed(_) => DocumentKind::Framed,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match &self.payload {
            Payload::H(h) => h.ambient_dim,
            Payload::V(v) => v.ambient_dim,
            Payload::Framed(f) => f.ambient_dim(),
        }
    }

    fn scalars(&self) -> Box<dyn Iterator<Item = &Scalar> + '_> {
        match &self.payload {
            Payload::H(h) => Box::new(h.scalars()),
            Payload::V(v) => Box::new(v.scalars()),
            Payload::Framed(f) => Box::new(f.scalars()),
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        self.scalars().find_map(Scalar::radicand)
    }
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    col: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

struct Parser {
    line: usize,
    radicand: Option<u64>,
}

impl Parser {
    fn err(&self, col: usize, msg: impl Into<String>) -> DocumentError {
        DocumentError::Syntax {
            line: self.line,
            col,
            msg: msg.into(),
        }
    }

    fn scalar(&mut self, t: &Token) -> Result<Scalar, DocumentError> {
        let s: Scalar = t.text.parse().map_err(|e: ArithError| self.err(t.col, e.to_string()))?;
        if let Some(m) = s.radicand() {
            match self.radicand {
                Some(r) if r != m => {
                    return Err(DocumentError::MixedRadicands {
                        line: self.line,
                        col: t.col,
                        expected: r,
                        found: m,
                    })
                }
                _ => self.radicand = Some(m),
            }
        }
        Ok(s)
    }

    fn vector(&mut self, ts: &[Token], n: usize, col: usize) -> Result<Vec<Scalar>, DocumentError> {
        if ts.len() != n {
            return Err(self.err(col, format!("expected {n} entries, found {}", ts.len())));
        }
        ts.iter().map(|t| self.scalar(t)).collect()
    }

    /// `a_1 ... a_n <rel> c`.
    fn relation(&mut self, ts: &[Token], n: usize, rel: &str, col: usize) -> Result<Halfspace, DocumentError> {
        if ts.len() != n + 2 || ts[n].text != rel {
            return Err(self.err(col, format!("expected {n} entries, `{rel}` and a constant")));
        }
        let u = self.vector(&ts[..n], n, col)?;
        let c = self.scalar(&ts[n + 1])?;
        Ok(Halfspace::new(u, c))
    }
}

pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let mut p = Parser { line: 0, radicand: None };
    let mut header: Option<(DocumentKind, usize)> = None;
    let mut name = None;
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    let mut verts = Vec::new();
    let mut base: Option<Vec<Scalar>> = None;
    let mut dirs = Vec::new();
    let mut germ = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let ts = tokens(line);
        let Some(first) = ts.first() else {
            continue;
        };
        let rest = &ts[1..];
        if header.is_none() {
            header = Some(parse_header(&mut p, &ts)?);
            continue;
        }
        let (kind, n) = header.unwrap();
        let allowed = match first.text {
            "name" => true,
            "ineq" | "eq" => kind == DocumentKind::PolytopeH,
            "vertex" => kind == DocumentKind::PolytopeV,
            "base" | "dir" | "germ" => kind == DocumentKind::Framed,
            "kind" => return Err(p.err(first.col, "second header")),
            other => return Err(p.err(first.col, format!("unknown row `{other}`"))),
        };
        if !allowed {
            return Err(p.err(first.col, format!("`{}` row in a {} document", first.text, kind.as_str())));
        }
        match first.text {
            "name" => {
                let start = rest.first().map_or(line.len(), |t| t.col - 1);
                name = Some(line[start..].trim_end().to_string());
            }
            "ineq" => ineqs.push(p.relation(rest, n, ">=", first.col)?),
            "eq" => eqs.push(p.relation(rest, n, "=", first.col)?),
            "vertex" => verts.push(p.vector(rest, n, first.col)?),
            "base" => {
                if base.is_some() {
                    return Err(p.err(first.col, "second base row"));
                }
                base = Some(p.vector(rest, n, first.col)?);
            }
            "dir" => dirs.push(p.vector(rest, n, first.col)?),
            "germ" => {
                let h = p.relation(rest, n, ">=", first.col)?;
                let u = h
                    .int_covector()
                    .ok_or_else(|| p.err(first.col, "germ covector must be integral"))?;
                germ.push(GermFacet::new(u, h.constant));
            }
            _ => unreachable!(),
        }
    }
    let (kind, n) = header.ok_or_else(|| DocumentError::Shape("missing header".into()))?;
    let payload = match kind {
        DocumentKind::PolytopeH => Payload::H(HPolyhedron::new(n, ineqs, eqs)?),
        DocumentKind::PolytopeV => {
            if verts.is_empty() {
                return Err(DocumentError::Shape("no vertices".into()));
            }
            Payload::V(VPolytope::hull(n, verts))
        }
        DocumentKind::Framed => {
            let base = base.ok_or_else(|| DocumentError::Shape("framed document without a base row".into()))?;
            Payload::Framed(FramedPolytope::new(n, AffineSubspace::new(n, base, &dirs), germ)?)
        }
    };
    Ok(Document { name, payload })
}

fn parse_header(p: &mut Parser, ts: &[Token]) -> Result<(DocumentKind, usize), DocumentError> {
    let col = ts[0].col;
    if ts[0].text != "kind" || ts.len() < 4 || ts[2].text != "dim" {
        return Err(p.err(col, "expected `kind <k> dim <N> [sqrt <m>]`"));
    }
    let kind = match ts[1].text {
        "polytope-h" => DocumentKind::PolytopeH,
        "polytope-v" => DocumentKind::PolytopeV,
        "framed" => DocumentKind::Framed,
        other => return Err(p.err(ts[1].col, format!("unknown kind `{other}`"))),
    };
    let n: usize = ts[3].text.parse().map_err(|_| p.err(ts[3].col, "bad dimension"))?;
    match &ts[4..] {
        [] => {}
        [s, m] if s.text == "sqrt" => {
            let m: u64 = m.text.parse().map_err(|_| p.err(m.col, "bad radicand"))?;
            Scalar::sqrt(m).map_err(|e| p.err(ts[5].col, e.to_string()))?;
            p.radicand = Some(m);
        }
        [t, ..] => return Err(p.err(t.col, "trailing tokens in header")),
    }
    Ok((kind, n))
}

fn join(v: &[Scalar]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text: rows sorted, framings in their normal form.
pub fn emit_document(doc: &Document) -> String {
    let mut out = format!("kind {} dim {}", doc.kind().as_str(), doc.ambient_dim());
    if let Some(m) = doc.radicand() {
        out.push_str(&format!(" sqrt {m}"));
    }
    out.push('\n');
    if let Some(name) = &doc.name {
        out.push_str(&format!("name {name}\n"));
    }
    match &doc.payload {
        Payload::H(h) => {
            let mut rows = h.inequalities.clone();
            rows.sort_by(cmp_rows_desc);
            rows.dedup();
            for r in &rows {
                out.push_str(&format!("ineq {} >= {}\n", join(&r.covector), r.constant));
            }
            let mut rows = h.equalities.clone();
            rows.sort_by(cmp_rows_desc);
            rows.dedup();
            for r in &rows {
                out.push_str(&format!("eq {} = {}\n", join(&r.covector), r.constant));
            }
        }
        Payload::V(v) => {
            for x in &v.vertices {
                out.push_str(&format!("vertex {}\n", join(x)));
            }
        }
        Payload::Framed(f) => {
            out.push_str(&format!("base {}\n", join(&f.slice().base)));
            for d in &f.slice().directions {
                out.push_str(&format!("dir {}\n", join(d)));
            }
            for g in f.germ() {
                let u: Vec<String> = g.covector.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("germ {} >= {}\n", u.join(" "), g.constant));
            }
        }
    }
    out
}
