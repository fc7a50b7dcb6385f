use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::framing::FramedPolytope;
use crate::morita::facet_weights;
use crate::polytope::VPolytope;

#[derive(Clone, Copy, Debug)]
pub enum Drawable<'a> {
    Framed(&'a FramedPolytope),
    Polytope(&'a VPolytope),
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Coordinates drawn as the horizontal and vertical axes.
    pub projection: Option<[usize; 2]>,
    /// Pixels per unit.
    pub scale: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            projection: None,
            scale: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("cannot draw dimension {0} without a projection")]
    Dimension(usize),
    #[error("bad projection: {0}")]
    Projection(String),
    #[error("empty polytope")]
    Empty,
}

type Pt = (f64, f64);

struct Canvas {
    min: Pt,
    max: Pt,
    scale: f64,
}

impl Canvas {
    fn map(&self, p: Pt) -> Pt {
        ((p.0 - self.min.0) * self.scale, (self.max.1 - p.1) * self.scale)
    }

    /// Part of the line `p + t d` inside the box.
    fn clip(&self, p: Pt, d: Pt) -> Option<(Pt, Pt)> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (pc, dc, a, b) in [(p.0, d.0, self.min.0, self.max.0), (p.1, d.1, self.min.1, self.max.1)] {
            if dc.abs() < 1e-12 {
                if pc < a || pc > b {
                    return None;
                }
                continue;
            }
            let (t1, t2) = ((a - pc) / dc, (b - pc) / dc);
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
        (lo < hi).then_some(((p.0 + lo * d.0, p.1 + lo * d.1), (p.0 + hi * d.0, p.1 + hi * d.1)))
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn axes(n: usize, opts: &RenderOptions) -> Result<(usize, Option<usize>), RenderError> {
    match opts.projection {
        Some([i, j]) => {
            if i >= n || j >= n || i == j {
                return Err(RenderError::Projection(format!("({i}, {j}) in dimension {n}")));
            }
            Ok((i, Some(j)))
        }
        None if n == 1 => Ok((0, None)),
        None if n == 2 => Ok((0, Some(1))),
        None => Err(RenderError::Dimension(n)),
    }
}

/// Deterministic drawing: `P` filled, the slice as a solid line, germ
/// hyperplanes dashed and labelled with their weights.
pub fn render_svg(item: Drawable, opts: &RenderOptions) -> Result<String, RenderError> {
    let p = match item {
        Drawable::Framed(f) => f.polytope(),
        Drawable::Polytope(v) => v,
    };
    if p.is_empty() {
        return Err(RenderError::Empty);
    }
    let (ax, ay) = axes(p.ambient_dim, opts)?;
    let proj = |x: &[crate::arith::Scalar]| -> Pt { (x[ax].to_f64(), ay.map_or(0.0, |j| x[j].to_f64())) };
    let pts: Vec<Pt> = p.vertices.iter().map(|v| proj(v)).collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, c: fn(&Pt) -> f64| pts.iter().map(c).fold(init, f);
    let canvas = Canvas {
        min: (fold(f64::min, f64::INFINITY, |p| p.0) - 1.0, fold(f64::min, f64::INFINITY, |p| p.1) - 1.0),
        max: (fold(f64::max, f64::NEG_INFINITY, |p| p.0) + 1.0, fold(f64::max, f64::NEG_INFINITY, |p| p.1) + 1.0),
        scale: opts.scale,
    };
    let (w, h) = (
        (canvas.max.0 - canvas.min.0) * canvas.scale,
        (canvas.max.1 - canvas.min.1) * canvas.scale,
    );
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    )
    .unwrap();

    // P
    let mut hull = pts.clone();
    hull.sort_by(|a, b| a.partial_cmp(b).unwrap());
    hull.dedup();
    let c = (
        hull.iter().map(|p| p.0).sum::<f64>() / hull.len() as f64,
        hull.iter().map(|p| p.1).sum::<f64>() / hull.len() as f64,
    );
    let collinear = hull.len() < 3
        || hull.windows(3).all(|t| {
            ((t[1].0 - t[0].0) * (t[2].1 - t[0].1) - (t[1].1 - t[0].1) * (t[2].0 - t[0].0)).abs() < 1e-9
        });
    if hull.len() == 1 {
        let q = canvas.map(hull[0]);
        writeln!(out, r#"  <circle class="polytope" cx="{}" cy="{}" r="4" fill="black"/>"#, num(q.0), num(q.1)).unwrap();
    } else if collinear {
        let (a, b) = (canvas.map(hull[0]), canvas.map(*hull.last().unwrap()));
        writeln!(
            out,
            r#"  <line class="polytope" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="4"/>"#,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        )
        .unwrap();
    } else {
        hull.sort_by(|a, b| {
            let ta = (a.1 - c.1).atan2(a.0 - c.0);
            let tb = (b.1 - c.1).atan2(b.0 - c.0);
            ta.partial_cmp(&tb).unwrap()
        });
        let list: Vec<String> = hull
            .iter()
            .map(|&q| {
                let m = canvas.map(q);
                format!("{},{}", num(m.0), num(m.1))
            })
            .collect();
        writeln!(
            out,
            r#"  <polygon class="polytope" points="{}" fill="lightgray" stroke="black"/>"#,
            list.join(" ")
        )
        .unwrap();
    }

    if let Drawable::Framed(f) = item {
        let l = f.slice();
        if l.dim() == 1 {
            let b = proj(&l.base);
            let d = proj(&l.directions[0]);
            if d.0.abs() + d.1.abs() > 0.0 {
                if let Some((a, z)) = canvas.clip(b, d) {
                    line(&mut out, &canvas, "slice", a, z, r#"stroke="black""#);
                }
            }
        }
        let weights = if f.is_rational_slice() { facet_weights(f).ok() } else { None };
        for (i, g) in f.germ().iter().enumerate() {
            let off_axis = g
                .covector
                .iter()
                .enumerate()
                .any(|(k, u)| k != ax && Some(k) != ay && !u.is_zero());
            let u = (
                crate::arith::Scalar::from_bigint(g.covector[ax].clone()).to_f64(),
                ay.map_or(0.0, |j| crate::arith::Scalar::from_bigint(g.covector[j].clone()).to_f64()),
            );
            if !off_axis {
                let n2 = u.0 * u.0 + u.1 * u.1;
                let c0 = g.constant.to_f64();
                let p0 = (c0 * u.0 / n2, c0 * u.1 / n2);
                if let Some((a, z)) = canvas.clip(p0, (-u.1, u.0)) {
                    line(&mut out, &canvas, "germ", a, z, r#"stroke="gray" stroke-dasharray="6 4""#);
                }
            }
            if let Some(ws) = &weights {
                let vs = f.facet_vertices(i);
                let m = vs.iter().map(|&v| pts[v]).fold((0.0, 0.0), |s, q| (s.0 + q.0, s.1 + q.1));
                let m = (m.0 / vs.len() as f64, m.1 / vs.len() as f64);
                let norm = (u.0 * u.0 + u.1 * u.1).sqrt().max(1e-12);
                let at = canvas.map((m.0 - 0.25 * u.0 / norm, m.1 - 0.25 * u.1 / norm + 0.15));
                writeln!(
                    out,
                    r#"  <text class="weight" x="{}" y="{}" text-anchor="middle" font-size="16">{}</text>"#,
                    num(at.0),
                    num(at.1),
                    ws[i]
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn line(out: &mut String, canvas: &Canvas, class: &str, a: Pt, b: Pt, style: &str) {
    let (a, b) = (canvas.map(a), canvas.map(b));
    writeln!(
        out,
        r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
        num(a.0),
        num(a.1),
        num(b.0),
        num(b.1)
    )
    .unwrap();
}
