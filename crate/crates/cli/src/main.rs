use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use fpt_core::arith::Scalar;
use fpt_core::framing::{irrationality_degree, is_delzant, is_rational_faced, validate, FramedPolytope, FramingError};
use fpt_core::io::{emit_document, parse_document, render_svg, Document, DocumentError, Drawable, Payload, RenderError, RenderOptions};
use fpt_core::lift::{lift_and_frame_with, make_qpq, LiftError, LiftOptions};
use fpt_core::morita::{
    crossed_product, decide_morita, facet_weights, framed_iso, polytope_iso_with, slice_identifications,
    InequivalenceReason, IsoOptions, MoritaError, MoritaVerdict, MoritaWitness,
};
use fpt_core::normal_form::{local_model, FaceSpec, NormalFormError};
use fpt_core::polytope::{enumerate_vertices, irredundant_hrep, is_simple, HPolyhedron, Polytope, PolytopeError, VPolytope};
use fpt_core::IntegralAffineMap;

#[derive(Parser)]
#[command(name = "fpt", version, about = "Exact framed momentum polytopes")]
struct Cli {
    /// Structured output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a framing, or report rationality and smoothness of a polytope.
    Check { file: PathBuf },
    /// Box lift and framing of a polytope.
    Lift {
        file: PathBuf,
        #[arg(long)]
        strip_redundant: bool,
        #[arg(long)]
        primitive_rows: bool,
    },
    /// Facet weights of a rational framing.
    Weights { file: PathBuf },
    /// Integral affine isomorphism between two polytopes or two framings.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Replace polytopes by their canonical embeddings first.
        #[arg(long)]
        embed: bool,
    },
    /// Decide Morita equivalence of two rational framings.
    Morita {
        a: PathBuf,
        b: PathBuf,
        /// Write the witness as JSON.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Crossed product of two framings of the same polytope.
    CrossedProduct { a: PathBuf, b: PathBuf },
    /// Local model at a face: `interior`, `vertex:<i>` or `facets:<i>,<j>,...`.
    LocalModel {
        file: PathBuf,
        #[arg(long)]
        face: String,
    },
    /// Degree of irrationality.
    Degree { file: PathBuf },
    /// Draw a framing or polytope as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Two coordinates to draw, e.g. `0,2`.
        #[arg(long)]
        project: Option<String>,
    },
    /// The framing Q_{p,q} of the segment [0, a].
    Qpq {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        p: i64,
        #[arg(short, allow_hyphen_values = true)]
        q: i64,
    },
}

#[derive(Debug)]
struct CliError {
    code: &'static str,
    msg: String,
}

impl CliError {
    fn new(code: &'static str, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::new(e.code(), e.to_string())
    }
}

macro_rules! coded {
    ($t:ty, $code:expr) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new($code, e.to_string())
            }
        }
    };
}

coded!(FramingError, "framing");
coded!(PolytopeError, "polytope");
coded!(LiftError, "lift");
coded!(NormalFormError, "local-model");
coded!(RenderError, "render");
coded!(serde_json::Error, "json");

impl From<MoritaError> for CliError {
    fn from(e: MoritaError) -> Self {
        let code = match &e {
            MoritaError::NotCanonical { .. } => "not-canonical",
            MoritaError::NotRationalFaced => "not-rational-faced",
            MoritaError::IrrationalSlice => "irrational-slice",
            MoritaError::SearchLimit(_) => "search-limit",
            MoritaError::InvalidFraming { .. } => "invalid-framing",
            MoritaError::HyperplaneSpan { .. } => "hyperplane-span",
            MoritaError::NotRegular { .. } => "not-regular",
            MoritaError::EmbeddingRejected { .. } => "embedding-rejected",
            _ => "morita",
        };
        CliError::new(code, e.to_string())
    }
}

type Outcome = Result<(String, u8), CliError>;

fn read_doc(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| {
        let code = e.code();
        CliError::new(code, format!("{}: {e}", path.display()))
    })
}

fn framed(doc: Document, path: &Path) -> Result<FramedPolytope, CliError> {
    match doc.payload {
        Payload::Framed(f) => Ok(f),
        _ => Err(CliError::new("kind", format!("{}: expected a framed document", path.display()))),
    }
}

/// Vertex description of a polytope document (`P` for a framing).
fn vertices(doc: &Document) -> Result<VPolytope, CliError> {
    Ok(match &doc.payload {
        Payload::H(h) => enumerate_vertices(h)?,
        Payload::V(v) => v.clone(),
        Payload::Framed(f) => f.polytope().clone(),
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn map_text(m: &IntegralAffineMap) -> String {
    let rows: Vec<String> = m
        .linear
        .row_vecs()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    let t: Vec<String> = m.translation.iter().map(|x| x.to_string()).collect();
    format!("linear [{}]\ntranslation [{}]\n", rows.join(", "), t.join(", "))
}

fn check(file: &Path, as_json: bool) -> Outcome {
    let doc = read_doc(file)?;
    if let Payload::Framed(f) = &doc.payload {
        let r = validate(f);
        let deg = irrationality_degree(f.polytope());
        let ok = r.all_ok();
        if as_json {
            return Ok((pretty(&json!({ "validation": r, "degree": deg.degree, "ok": ok })), (!ok) as u8));
        }
        let mut out = String::new();
        for (name, c) in [
            ("bounded", &r.bounded),
            ("transversal", &r.transversal),
            ("simple", &r.simple),
            ("regular", &r.regular),
            ("rational-faced", &r.rational_faced),
            ("germ-canonical", &r.germ_canonical),
        ] {
            out.push_str(&format!("{name}: {}", ok_word(c.ok)));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" ({})", serde_json::to_string(w)?));
            }
            out.push('\n');
        }
        out.push_str(&format!("degree: {}\n", deg.degree));
        return Ok((out, (!ok) as u8));
    }
    let v = vertices(&doc)?;
    if v.is_empty() {
        return Err(PolytopeError::Empty.into());
    }
    let poly = Polytope::from_v(v.clone())?;
    let rf = is_rational_faced(&v);
    let simple = is_simple(&poly);
    let deg = irrationality_degree(&v);
    let delzant = if poly.dim() == v.ambient_dim && v.is_rational() {
        Some(is_delzant(&v)?)
    } else {
        None
    };
    let ok = rf.rational_faced && simple.simple && delzant.as_ref().is_some_and(|d| d.delzant);
    if as_json {
        let body = json!({
            "rational_faced": rf,
            "simple": simple,
            "delzant": delzant,
            "degree": deg.degree,
            "ok": ok,
        });
        return Ok((pretty(&body), (!ok) as u8));
    }
    let mut out = format!(
        "dimension: {}\nrational-faced: {}\nsimple: {}\ndegree: {}\n",
        poly.dim(),
        ok_word(rf.rational_faced),
        ok_word(simple.simple),
        deg.degree
    );
    match delzant {
        Some(d) => {
            out.push_str(&format!("delzant: {}", ok_word(d.delzant)));
            if let (Some(v), Some(det)) = (d.witness_vertex, &d.witness_determinant) {
                out.push_str(&format!(" (vertex {v}, determinant {det})"));
            }
            out.push('\n');
        }
        None => out.push_str("delzant: n/a (not rational and full-dimensional)\n"),
    }
    Ok((out, (!ok) as u8))
}

fn lift(file: &Path, opts: &LiftOptions, as_json: bool) -> Outcome {
    let doc = read_doc(file)?;
    let h: HPolyhedron = match &doc.payload {
        Payload::H(h) => h.clone(),
        Payload::V(v) => irredundant_hrep(v)?,
        Payload::Framed(_) => return Err(CliError::new("kind", "lift expects a polytope document")),
    };
    let r = lift_and_frame_with(&h, opts)?;
    if as_json {
        return Ok((pretty(&serde_json::to_value(&r)?), 0));
    }
    let name = doc.name.map_or("lift".to_string(), |n| format!("lift of {n}"));
    let mut out = emit_document(&Document::named(name, Payload::Framed(r.framed.clone())));
    out.push_str(&format!(
        "# box {}; integral isomorphism {}; transversal {}\n",
        r.bound, r.is_integral_iso, r.transversal
    ));
    Ok((out, 0))
}

fn weights(file: &Path, as_json: bool) -> Outcome {
    let f = framed(read_doc(file)?, file)?;
    let w = facet_weights(&f)?;
    if as_json {
        let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        return Ok((pretty(&json!({ "germ": f.germ(), "weights": ws })), 0));
    }
    let mut out = String::new();
    for (g, w) in f.germ().iter().zip(&w) {
        let u: Vec<String> = g.covector.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{} >= {}  weight {w}\n", u.join(" "), g.constant));
    }
    Ok((out, 0))
}

fn iso(a: &Path, b: &Path, embed: bool, as_json: bool) -> Outcome {
    let (da, db) = (read_doc(a)?, read_doc(b)?);
    let found = match (&da.payload, &db.payload) {
        (Payload::Framed(f1), Payload::Framed(f2)) => framed_iso(f1, f2)?,
        _ => polytope_iso_with(&vertices(&da)?, &vertices(&db)?, &IsoOptions { auto_embed: embed })?,
    };
    let code = found.is_none() as u8;
    if as_json {
        return Ok((pretty(&json!({ "isomorphic": found.is_some(), "map": found })), code));
    }
    Ok(match found {
        Some(m) => (format!("isomorphic\n{}", map_text(&m)), 0),
        None => ("not isomorphic\n".into(), code),
    })
}

fn morita(a: &Path, b: &Path, witness: Option<&Path>, as_json: bool) -> Outcome {
    let f1 = framed(read_doc(a)?, a)?;
    let f2 = framed(read_doc(b)?, b)?;
    let v = decide_morita(&f1, &f2)?;
    if let (Some(path), MoritaVerdict::Equivalent(w)) = (witness, &v) {
        fs::write(path, pretty(&serde_json::to_value(w)?))
            .map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))?;
    }
    let code = (!v.is_equivalent()) as u8;
    if as_json {
        return Ok((pretty(&serde_json::to_value(&v)?), code));
    }
    let out = match &v {
        MoritaVerdict::Equivalent(w) => {
            format!("equivalent\n{}", witness_text(w))
        }
        MoritaVerdict::Inequivalent(InequivalenceReason::Polytopes) => "inequivalent: polytopes\n".into(),
        MoritaVerdict::Inequivalent(InequivalenceReason::Weights) => "inequivalent: weights\n".into(),
        MoritaVerdict::Undecided(_) => "undecided: irrational slice\n".into(),
    };
    Ok((out, code))
}

fn crossed(a: &Path, b: &Path, as_json: bool) -> Outcome {
    let f1 = framed(read_doc(a)?, a)?;
    let f2 = framed(read_doc(b)?, b)?;
    let ids = slice_identifications(&f1, &f2)?;
    if ids.is_empty() {
        return Err(CliError::new("not-identified", "the two polytopes are not isomorphic"));
    }
    // prefer an identification matching the weights
    let (w1, w2) = (facet_weights(&f1)?, facet_weights(&f2)?);
    let preferred = ids.iter().position(|id| {
        let mut ok = true;
        for (i, vs) in (0..f1.germ().len()).map(|i| (i, f1.facet_vertices(i))) {
            let mut img: Vec<usize> = vs.iter().map(|&v| id.vertex_map[v]).collect();
            img.sort_unstable();
            ok &= (0..f2.germ().len()).any(|j| f2.facet_vertices(j) == img && w2[j] == w1[i]);
        }
        ok
    });
    let w = crossed_product(&f1, &f2, &ids[preferred.unwrap_or(0)])?;
    if as_json {
        return Ok((pretty(&serde_json::to_value(&w)?), 0));
    }
    Ok((witness_text(&w), 0))
}

/// The third framing as a document, embeddings as trailing comments.
fn witness_text(w: &MoritaWitness) -> String {
    let mut s = emit_document(&Document::named("crossed product", Payload::Framed(w.third.clone())));
    for (k, m) in [(1, &w.embed_1), (2, &w.embed_2)] {
        s.push_str(&format!("# embedding {k}\n"));
        for line in map_text(m).lines() {
            s.push_str(&format!("# {line}\n"));
        }
    }
    s
}

fn parse_face(s: &str) -> Result<FaceSpec, CliError> {
    let bad = || CliError::new("usage", format!("bad face `{s}`; use interior, vertex:<i> or facets:<i>,<j>"));
    if s == "interior" {
        return Ok(FaceSpec::Interior);
    }
    if let Some(v) = s.strip_prefix("vertex:") {
        return v.parse().map(FaceSpec::Vertex).map_err(|_| bad());
    }
    if let Some(list) = s.strip_prefix("facets:") {
        let mut ids: Vec<usize> = list
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        ids.sort_unstable();
        ids.dedup();
        return Ok(FaceSpec::Facets(ids));
    }
    Err(bad())
}

fn local(file: &Path, face: &str, as_json: bool) -> Outcome {
    let f = framed(read_doc(file)?, file)?;
    let m = local_model(&f, &parse_face(face)?)?;
    if as_json {
        return Ok((pretty(&serde_json::to_value(&m)?), 0));
    }
    let vecs = |vs: &[Vec<Scalar>]| -> String {
        vs.iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let ints = |vs: &[Vec<BigInt>]| -> String {
        vs.iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let out = format!(
        "facets: {:?}\nvertices: {:?}\nface dimension: {}\ncorank: {}\nisotropy: {}\nsmith invariants: {}\nm*: {}\nslice directions: {}\ntransversal: {}\nface directions: {}\n",
        m.facets,
        m.vertices,
        m.face_dim,
        m.corank,
        ints(&m.isotropy),
        m.smith_invariants.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        ints(&m.m_star_basis.basis_vectors),
        vecs(&m.l_basis),
        m.transversal,
        vecs(&m.face_directions),
    );
    Ok((out, 0))
}

fn degree(file: &Path, as_json: bool) -> Outcome {
    let v = vertices(&read_doc(file)?)?;
    if v.is_empty() {
        return Err(PolytopeError::Empty.into());
    }
    let r = irrationality_degree(&v);
    if as_json {
        return Ok((pretty(&serde_json::to_value(&r)?), 0));
    }
    Ok((
        format!("dimension: {}\naffine 1-form rank: {}\ndegree: {}\n", r.dim_p, r.daff_rank, r.degree),
        0,
    ))
}

fn render(file: &Path, output: &Path, project: Option<&str>) -> Outcome {
    let doc = read_doc(file)?;
    let projection = match project {
        None => None,
        Some(s) => {
            let parts: Vec<usize> = s
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::new("usage", format!("bad projection `{s}`")))?;
            match parts.as_slice() {
                [i, j] => Some([*i, *j]),
                _ => return Err(CliError::new("usage", "projection takes two coordinates")),
            }
        }
    };
    let opts = RenderOptions {
        projection,
        ..Default::default()
    };
    let svg = match &doc.payload {
        Payload::Framed(f) => render_svg(Drawable::Framed(f), &opts)?,
        _ => render_svg(Drawable::Polytope(&vertices(&doc)?), &opts)?,
    };
    fs::write(output, svg).map_err(|e| CliError::new("io", format!("{}: {e}", output.display())))?;
    Ok((format!("wrote {}\n", output.display()), 0))
}

fn qpq(a: &str, p: i64, q: i64, as_json: bool) -> Outcome {
    let a: Scalar = a
        .parse()
        .map_err(|e: fpt_core::arith::ArithError| CliError::new("syntax", e.to_string()))?;
    let f = make_qpq(&a, p, q)?;
    if as_json {
        return Ok((pretty(&serde_json::to_value(&f)?), 0));
    }
    Ok((emit_document(&Document::named(format!("Q_{{{p},{q}}}"), Payload::Framed(f))), 0))
}

fn run(cli: Cli) -> Outcome {
    let j = cli.json;
    match cli.cmd {
        Cmd::Check { file } => check(&file, j),
        Cmd::Lift {
            file,
            strip_redundant,
            primitive_rows,
        } => lift(
            &file,
            &LiftOptions {
                strip_redundant,
                primitive_rows,
            },
            j,
        ),
        Cmd::Weights { file } => weights(&file, j),
        Cmd::Iso { a, b, embed } => iso(&a, &b, embed, j),
        Cmd::Morita { a, b, witness } => morita(&a, &b, witness.as_deref(), j),
        Cmd::CrossedProduct { a, b } => crossed(&a, &b, j),
        Cmd::LocalModel { file, face } => local(&file, &face, j),
        Cmd::Degree { file } => degree(&file, j),
        Cmd::Render { file, output, project } => render(&file, &output, project.as_deref()),
        Cmd::Qpq { a, p, q } => qpq(&a, p, q, j),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.code, e.msg.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
