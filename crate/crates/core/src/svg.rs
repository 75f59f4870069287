//! Deterministic SVG pictures of laminations and spines in the unit disk.

use std::fmt::Write as _;
use std::path::Path;

use num::{BigRational, One};

use crate::angle::Angle;
use crate::hypgeom::MarkedSpine;
use crate::lamination::Lamination;

pub enum Renderable<'a> {
    Lamination(&'a Lamination),
    Spine(&'a MarkedSpine),
}

pub fn render_svg(object: Renderable<'_>, path: &Path) -> std::io::Result<()> {
    let s = match object {
        Renderable::Lamination(l) => lamination_svg(l),
        Renderable::Spine(s) => spine_svg(s),
    };
    std::fs::write(path, s)
}

/// Six decimals, never `-0.000000`.
fn num(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    format!("{:.6}", if r == 0.0 { 0.0 } else { r })
}

/// Math coordinates to screen coordinates (y down).
fn pt(x: f64, y: f64) -> String {
    format!("{} {}", num(x), num(-y))
}

fn header() -> String {
    let mut s = String::new();
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"600\" height=\"600\">\n");
    s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\"/>\n");
    s
}

/// Arc of the circle centred at `c` (math coordinates) from `a` to `b`,
/// taking the minor arc.
fn arc(a: (f64, f64), b: (f64, f64), c: (f64, f64), color: &str) -> String {
    let r = ((a.0 - c.0).powi(2) + (a.1 - c.1).powi(2)).sqrt();
    // Screen coordinates: sweep = 1 iff the centre is visually right of a → b.
    let (ax, ay, bx, by, cx, cy) = (a.0, -a.1, b.0, -b.1, c.0, -c.1);
    let (dx, dy) = (bx - ax, by - ay);
    let sweep = u8::from((cx - ax) * -dy + (cy - ay) * dx > 0.0);
    format!(
        "<path d=\"M {} A {} {} 0 0 {} {}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.004\"/>\n",
        pt(a.0, a.1),
        num(r),
        num(r),
        sweep,
        pt(b.0, b.1)
    )
}

fn segment(a: (f64, f64), b: (f64, f64), color: &str) -> String {
    format!(
        "<path d=\"M {} L {}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.004\"/>\n",
        pt(a.0, a.1),
        pt(b.0, b.1)
    )
}

fn on_circle(t: &Angle) -> (f64, f64) {
    let th = std::f64::consts::TAU * t.to_f64();
    (th.cos(), th.sin())
}

/// Hyperbolic geodesic between two boundary angles.
fn leaf_path(a: &Angle, b: &Angle, color: &str) -> String {
    let gap = a.ccw_distance(b);
    let half = BigRational::new(1.into(), 2.into());
    let (p, q) = (on_circle(a), on_circle(b));
    if gap == half {
        return segment(p, q, color);
    }
    // Mid-angle of the shorter arc; the orthogonal circle is centred
    // 1/cos(Δ/2) out along it.
    let (start, width) = if gap < half { (a, gap) } else { (b, BigRational::one() - gap) };
    let w = std::f64::consts::TAU * num::ToPrimitive::to_f64(&width).unwrap_or(0.0);
    let m = std::f64::consts::TAU * start.to_f64() + w / 2.0;
    let k = 1.0 / (w / 2.0).cos();
    arc(p, q, (k * m.cos(), k * m.sin()), color)
}

pub fn lamination_svg(l: &Lamination) -> String {
    let mut s = header();
    push_leaves(&mut s, l, "steelblue");
    s.push_str("</svg>\n");
    s
}

/// Both laminations of a mating in one disk, the minus one reflected.
pub fn mating_svg(plus: &Lamination, minus: &Lamination) -> String {
    let mut s = header();
    push_leaves(&mut s, plus, "steelblue");
    push_leaves(&mut s, &minus.reflected(), "crimson");
    s.push_str("</svg>\n");
    s
}

fn push_leaves(s: &mut String, l: &Lamination, color: &str) {
    for leaf in l.leaves() {
        let (a, b) = leaf.endpoints();
        s.push_str(&leaf_path(a, b, color));
    }
}

const EDGE: &str = "darkslategray";

/// Geodesic between interior points: a diameter piece when collinear with
/// the origin, otherwise the circle through `a`, `b` and the inverse of `a`.
fn geodesic_path(a: (f64, f64), b: (f64, f64)) -> String {
    let (na, nb) = (a.0 * a.0 + a.1 * a.1, b.0 * b.0 + b.1 * b.1);
    let cross = a.0 * b.1 - a.1 * b.0;
    // Nearly through the origin: the orthogonal circle is huge and a
    // straight segment is indistinguishable from it.
    if na < 1e-18 || nb < 1e-18 || cross.abs() <= 1e-9 * (na * nb).sqrt() {
        return segment(a, b, EDGE);
    }
    let p = if na >= nb { a } else { b };
    let np = na.max(nb);
    let inv = (p.0 / np, p.1 / np);
    let Some(c) = circumcenter(a, b, inv).filter(|c| c.0.hypot(c.1) < 1e6) else {
        return segment(a, b, EDGE);
    };
    arc(a, b, c, EDGE)
}

fn circumcenter(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<(f64, f64)> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-300 {
        return None;
    }
    let (sa, sb, sc) = (a.0 * a.0 + a.1 * a.1, b.0 * b.0 + b.1 * b.1, c.0 * c.0 + c.1 * c.1);
    let x = (sa * (b.1 - c.1) + sb * (c.1 - a.1) + sc * (a.1 - b.1)) / d;
    let y = (sa * (c.0 - b.0) + sb * (a.0 - c.0) + sc * (b.0 - a.0)) / d;
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

/// Disk spines are drawn as is; ball spines are projected to their first
/// two coordinates.
pub fn spine_svg(sp: &MarkedSpine) -> String {
    let mut s = header();
    let xy = |v: usize| (sp.vertices[v].x(), sp.vertices[v].y());
    for &(a, b) in &sp.edges {
        s.push_str(&geodesic_path(xy(a), xy(b)));
    }
    for v in 0..sp.vertices.len() {
        let (class, fill, r) = if sp.marked.contains(&v) {
            ("marked", "crimson", "0.02")
        } else {
            ("vertex", "black", "0.01")
        };
        let (x, y) = xy(v);
        let _ = writeln!(
            s,
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{fill}\"/>",
            num(x),
            num(-y)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::{build_spine, HPoint};
    use crate::lamination::Leaf;

    #[test]
    fn empty_lamination_is_just_the_circle() {
        let s = lamination_svg(&Lamination::empty(2));
        assert_eq!(s.matches("<circle").count(), 1);
        assert_eq!(s.matches("<path").count(), 0);
    }

    #[test]
    fn antipodal_leaf_is_a_diameter() {
        let l = Lamination::new(2, [Leaf::parse("0", "1/2")]).unwrap();
        let s = lamination_svg(&l);
        assert!(s.contains("<path d=\"M 1.000000 0.000000 L -1.000000 0.000000\""));
    }

    #[test]
    fn arcs_are_orthogonal_to_the_boundary() {
        let l = Lamination::new(2, [Leaf::parse("1/3", "2/3")]).unwrap();
        let s = lamination_svg(&l);
        // Separation 1/3 of a turn: radius tan(π/3) = √3.
        assert!(s.contains(&format!("A {} {}", num(3f64.sqrt()), num(3f64.sqrt()))));
        assert_eq!(s, lamination_svg(&l));
    }

    #[test]
    fn tripod_spine() {
        let pts: Vec<HPoint> = (0..3)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / 3.0;
                HPoint::disk(0.99 * th.cos(), 0.99 * th.sin()).unwrap()
            })
            .collect();
        let sp = build_spine(&pts, 0.01).unwrap();
        let s = spine_svg(&sp);
        assert_eq!(s.matches("<path").count(), 3);
        assert_eq!(s.matches("class=\"marked\"").count(), 3);
    }

    #[test]
    fn off_centre_geodesic_is_an_arc() {
        let s = geodesic_path((0.5, 0.0), (0.0, 0.5));
        assert!(s.contains("A 1.457738 1.457738 0 0 1 0.000000 -0.500000"));
        assert!(s.contains(" A "));
        // The orthogonal circle through both points: |c|² = r² + 1.
        let c = circumcenter((0.5, 0.0), (0.0, 0.5), (2.0, 0.0)).unwrap();
        let r2 = (c.0 - 0.5).powi(2) + c.1.powi(2);
        assert!((c.0 * c.0 + c.1 * c.1 - r2 - 1.0).abs() < 1e-12);
    }
}
