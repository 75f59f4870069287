//! Hyperbolic geometry in the Poincaré disk and ball, and the inductive
//! spine (hull-skeleton) construction for finite point sets.
//!
//! Points of both models are stored as three coordinates; disk points keep
//! the third coordinate at zero, so all formulas below are shared.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for geometric predicates.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypError {
    #[error("points live in different models ({0:?} vs {1:?})")]
    ModelMismatch(Model, Model),
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("edge {0} is not incident to vertex {1}")]
    NotIncident(usize, usize),
    #[error("input points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("point {0:?} is not inside the unit {1:?}")]
    OutsideModel(Vec<f64>, Model),
    #[error("no input points")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Disk,
    Ball,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    c: [f64; 3],
    model: Model,
}

impl HPoint {
    pub fn disk(x: f64, y: f64) -> Result<Self, HypError> {
        Self::checked([x, y, 0.0], Model::Disk)
    }

    pub fn ball(x: f64, y: f64, z: f64) -> Result<Self, HypError> {
        Self::checked([x, y, z], Model::Ball)
    }

    /// From 2 (disk) or 3 (ball) coordinates.
    pub fn from_slice(v: &[f64]) -> Result<Self, HypError> {
        match *v {
            [x, y] => Self::disk(x, y),
            [x, y, z] => Self::ball(x, y, z),
            _ => Err(HypError::OutsideModel(v.to_vec(), Model::Disk)),
        }
    }

    pub fn origin(model: Model) -> Self {
        HPoint { c: [0.0; 3], model }
    }

    fn checked(c: [f64; 3], model: Model) -> Result<Self, HypError> {
        let p = HPoint { c, model };
        if !(p.norm2() < 1.0) || c.iter().any(|x| !x.is_finite()) {
            return Err(HypError::OutsideModel(p.coords(), model));
        }
        Ok(p)
    }

    fn raw(v: Vector3<f64>, model: Model) -> Self {
        let mut c = [v.x, v.y, v.z];
        if model == Model::Disk {
            c[2] = 0.0;
        }
        // Keep strictly inside the model even after rounding.
        let n2 = c.iter().map(|x| x * x).sum::<f64>();
        if n2 >= 1.0 {
            let s = (1.0 - 1e-16) / n2.sqrt();
            c.iter_mut().for_each(|x| *x *= s);
        }
        HPoint { c, model }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn coords(&self) -> Vec<f64> {
        match self.model {
            Model::Disk => self.c[..2].to_vec(),
            Model::Ball => self.c.to_vec(),
        }
    }

    pub fn x(&self) -> f64 {
        self.c[0]
    }

    pub fn y(&self) -> f64 {
        self.c[1]
    }

    fn v(&self) -> Vector3<f64> {
        Vector3::new(self.c[0], self.c[1], self.c[2])
    }

    fn norm2(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn neg(&self) -> HPoint {
        HPoint::raw(-self.v(), self.model)
    }
}

fn same_model(x: &HPoint, y: &HPoint) -> Result<(), HypError> {
    if x.model == y.model {
        Ok(())
    } else {
        Err(HypError::ModelMismatch(x.model, y.model))
    }
}

/// Möbius addition; `z ↦ x ⊕ z` is the isometry taking 0 to `x`, and
/// `z ↦ (−x) ⊕ z` its inverse.
pub fn mobius_add(x: &HPoint, y: &HPoint) -> HPoint {
    let (a, b) = (x.v(), y.v());
    let xy = a.dot(&b);
    let x2 = a.norm_squared();
    let y2 = b.norm_squared();
    let num = a * (1.0 + 2.0 * xy + y2) + b * (1.0 - x2);
    let den = 1.0 + 2.0 * xy + x2 * y2;
    HPoint::raw(num / den, x.model)
}

/// The point at hyperbolic distance `r·d(0,x)` from 0 in the direction of `x`.
fn gyro_scale(r: f64, x: &HPoint) -> HPoint {
    let n = x.norm2().sqrt();
    if n == 0.0 {
        return *x;
    }
    let t = (r * n.atanh()).tanh();
    HPoint::raw(x.v() * (t / n), x.model)
}

/// Poincaré distance `2·asinh(|x−y| / √((1−|x|²)(1−|y|²)))`.
pub fn hyp_dist(x: &HPoint, y: &HPoint) -> Result<f64, HypError> {
    same_model(x, y)?;
    Ok(dist(x, y))
}

fn dist(x: &HPoint, y: &HPoint) -> f64 {
    let e = (x.v() - y.v()).norm();
    2.0 * (e / ((1.0 - x.norm2()) * (1.0 - y.norm2())).sqrt()).asinh()
}

/// Distance from the origin to a point at Euclidean radius `r`.
pub fn radius_to_dist(r: f64) -> f64 {
    2.0 * r.atanh()
}

/// Euclidean radius of the point at hyperbolic distance `d` from 0.
pub fn dist_to_radius(d: f64) -> f64 {
    (d / 2.0).tanh()
}

pub fn geodesic_point(x: &HPoint, y: &HPoint, s: f64) -> Result<HPoint, HypError> {
    same_model(x, y)?;
    if dist(x, y) == 0.0 {
        return Err(HypError::DegenerateSegment);
    }
    Ok(geo(x, y, s))
}

fn geo(x: &HPoint, y: &HPoint, s: f64) -> HPoint {
    let rel = mobius_add(&x.neg(), y);
    mobius_add(x, &gyro_scale(s, &rel))
}

/// Nearest point of the geodesic segment `[x, y]` to `p`, with its distance.
pub fn project_segment(p: &HPoint, x: &HPoint, y: &HPoint) -> Result<(HPoint, f64), HypError> {
    same_model(p, x)?;
    same_model(x, y)?;
    if dist(x, y) == 0.0 {
        return Err(HypError::DegenerateSegment);
    }
    Ok(project(p, x, y))
}

fn project(p: &HPoint, x: &HPoint, y: &HPoint) -> (HPoint, f64) {
    // Move x to the origin; the segment becomes a radius of length `len`.
    let mx = x.neg();
    let yy = mobius_add(&mx, y).v();
    let pp = mobius_add(&mx, p).v();
    let len = radius_to_dist(yy.norm());
    let u = yy / yy.norm();
    let rho = pp.norm();
    let t = if rho == 0.0 {
        0.0
    } else {
        // Right hyperbolic triangle: tanh(foot) = tanh(r)·cos θ.
        let tanh_r = 2.0 * rho / (1.0 + rho * rho);
        let cos = (pp.dot(&u) / rho).clamp(-1.0, 1.0);
        (tanh_r * cos).atanh()
    };
    let t = t.clamp(0.0, len);
    let foot = mobius_add(x, &HPoint::raw(u * dist_to_radius(t), p.model));
    (foot, dist(p, &foot))
}

/// Unit tangent direction at `from` towards `to` (Euclidean frame at the origin
/// after translating `from` there).
fn direction(from: &HPoint, to: &HPoint) -> Vector3<f64> {
    let w = mobius_add(&from.neg(), to).v();
    let n = w.norm();
    if n == 0.0 {
        w
    } else {
        w / n
    }
}

fn angle_between(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.dot(v).clamp(-1.0, 1.0).acos()
}

/// Geodesic tree on finitely many points of ℍ² or ℍ³.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedSpine {
    pub vertices: Vec<HPoint>,
    pub edges: Vec<(usize, usize)>,
    pub marked: Vec<usize>,
    /// Input point index → vertex index.
    pub input_map: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpineFile {
    pub model: Model,
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<[usize; 2]>,
    pub marked: Vec<usize>,
}

impl MarkedSpine {
    pub fn model(&self) -> Model {
        self.vertices.first().map_or(Model::Disk, |v| v.model)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let (a, b) = self.edges[e];
        dist(&self.vertices[a], &self.vertices[b])
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut dsu = crate::dsu::DisjointSet::new(n);
        self.edges.iter().all(|&(a, b)| dsu.union(a, b))
    }

    pub fn to_file(&self) -> SpineFile {
        SpineFile {
            model: self.model(),
            vertices: self.vertices.iter().map(HPoint::coords).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            marked: self.marked.clone(),
        }
    }

    /// Nearest point of the tree to `p`: (edge index or None for a lone vertex, foot, distance).
    pub fn nearest_point(&self, p: &HPoint) -> (Option<usize>, HPoint, f64) {
        if self.edges.is_empty() {
            return (None, self.vertices[0], dist(p, &self.vertices[0]));
        }
        let mut best = (None, self.vertices[0], f64::INFINITY);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let (f, d) = project(p, &self.vertices[a], &self.vertices[b]);
            if d < best.2 - GEOM_TOL {
                best = (Some(i), f, d);
            }
        }
        best
    }
}

/// Hyperbolic angle at `v` between edges `e1` and `e2` (indices into `spine.edges`).
pub fn vertex_angle(spine: &MarkedSpine, v: usize, e1: usize, e2: usize) -> Result<f64, HypError> {
    let other = |e: usize| -> Result<usize, HypError> {
        let (a, b) = *spine.edges.get(e).ok_or(HypError::NotIncident(e, v))?;
        if a == v {
            Ok(b)
        } else if b == v {
            Ok(a)
        } else {
            Err(HypError::NotIncident(e, v))
        }
    };
    let (w1, w2) = (other(e1)?, other(e2)?);
    let p = &spine.vertices[v];
    Ok(angle_between(
        &direction(p, &spine.vertices[w1]),
        &direction(p, &spine.vertices[w2]),
    ))
}

/// Angle at `p` of the geodesic triangle `p, q, r`.
fn triangle_angle(p: &HPoint, q: &HPoint, r: &HPoint) -> f64 {
    angle_between(&direction(p, q), &direction(p, r))
}

fn total_dist(z: &HPoint, pts: &[HPoint]) -> f64 {
    pts.iter().map(|p| dist(z, p)).sum()
}

/// Point minimizing the sum of distances to three points. Falls back to a
/// vertex when the triangle has an angle of at least 2π/3 there.
pub fn fermat_point(p: &[HPoint; 3]) -> HPoint {
    let limit = 2.0 * std::f64::consts::PI / 3.0 - GEOM_TOL;
    for i in 0..3 {
        let (a, b, c) = (&p[i], &p[(i + 1) % 3], &p[(i + 2) % 3]);
        if dist(a, b) < GEOM_TOL || dist(a, c) < GEOM_TOL || triangle_angle(a, b, c) >= limit {
            return *a;
        }
    }
    // Start from the best vertex-pair midpoint, then damped Riemannian Newton.
    let mut z = [geo(&p[0], &p[1], 0.5), geo(&p[1], &p[2], 0.5), geo(&p[2], &p[0], 0.5)]
        .into_iter()
        .min_by(|a, b| total_dist(a, p).total_cmp(&total_dist(b, p)))
        .unwrap();
    let mut fz = total_dist(&z, p);
    for _ in 0..200 {
        let mut g = Vector3::zeros();
        let mut h = Matrix3::zeros();
        for q in p {
            let w = mobius_add(&z.neg(), q).v();
            let n = w.norm();
            let l = radius_to_dist(n);
            let u = w / n;
            g -= u;
            h += (Matrix3::identity() - u * u.transpose()) / l.tanh();
        }
        if g.norm() < 1e-14 {
            break;
        }
        let step = h.try_inverse().map(|hi| -(hi * g)).unwrap_or(-g);
        let mut s = 1.0;
        let mut moved = false;
        while s > 1e-12 {
            let v = step * s;
            let len = v.norm();
            let cand = mobius_add(&z, &HPoint::raw(v * (dist_to_radius(len) / len), z.model));
            let fc = total_dist(&cand, p);
            if fc < fz {
                z = cand;
                fz = fc;
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if !moved || (step * s).norm() < 1e-15 {
            break;
        }
    }
    z
}

/// Builds the spine of `points` by inserting them one at a time, nearest to
/// the current hull first.
pub fn build_spine(points: &[HPoint], attach_radius: f64) -> Result<MarkedSpine, HypError> {
    let first = points.first().ok_or(HypError::Empty)?;
    for p in points {
        same_model(first, p)?;
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if dist(&points[i], &points[j]) < 1e-12 {
                return Err(HypError::DuplicatePoints(i, j));
            }
        }
    }
    let n = points.len();
    let mut spine = MarkedSpine {
        vertices: vec![points[0]],
        edges: Vec::new(),
        marked: vec![0],
        input_map: vec![usize::MAX; n],
    };
    spine.input_map[0] = 0;
    let mut placed = vec![false; n];
    placed[0] = true;
    // Vertices spanning the hull: the inserted input points.
    let mut hull: Vec<usize> = vec![0];

    for _ in 1..n {
        // Pick the pending point nearest to the current hull surrogate.
        let mut best: Option<(usize, HPoint, f64)> = None;
        for (i, b) in points.iter().enumerate() {
            if placed[i] {
                continue;
            }
            let (foot, d) = hull_projection(b, &hull, &spine);
            if best.as_ref().is_none_or(|x| d < x.2 - GEOM_TOL) {
                best = Some((i, foot, d));
            }
        }
        let (bi, foot, _) = best.expect("a pending point exists");
        let b = points[bi];
        placed[bi] = true;

        let (near_v, near_d) = spine
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (k, dist(v, &foot)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 - GEOM_TOL { x } else { acc });

        let new_idx = spine.vertices.len();
        if near_d <= attach_radius || spine.edges.is_empty() {
            spine.vertices.push(b);
            spine.edges.push((near_v, new_idx));
        } else {
            let (edge, _, _) = spine.nearest_point(&b);
            let e = edge.expect("tree has edges");
            let (u, w) = spine.edges[e];
            let (pu, pw) = (spine.vertices[u], spine.vertices[w]);
            let z = fermat_point(&[pu, pw, b]);
            if dist(&z, &pu) < GEOM_TOL {
                spine.vertices.push(b);
                spine.edges.push((u, new_idx));
            } else if dist(&z, &pw) < GEOM_TOL {
                spine.vertices.push(b);
                spine.edges.push((w, new_idx));
            } else if dist(&z, &b) < GEOM_TOL {
                // b itself sits between u and w.
                spine.vertices.push(b);
                spine.edges[e] = (u, new_idx);
                spine.edges.push((new_idx, w));
            } else {
                let branch = new_idx + 1;
                spine.vertices.push(b);
                spine.vertices.push(z);
                spine.edges[e] = (u, branch);
                spine.edges.push((branch, w));
                spine.edges.push((branch, new_idx));
            }
        }
        spine.input_map[bi] = new_idx;
        spine.marked.push(new_idx);
        hull.push(new_idx);
    }
    spine.marked.sort_unstable();
    Ok(spine)
}

/// Approximate projection onto the hull of `hull` vertices: minimum over all
/// geodesics between pairs of them (and the vertices themselves).
fn hull_projection(p: &HPoint, hull: &[usize], spine: &MarkedSpine) -> (HPoint, f64) {
    let mut best = (spine.vertices[hull[0]], dist(p, &spine.vertices[hull[0]]));
    for (k, &i) in hull.iter().enumerate() {
        let vi = &spine.vertices[i];
        let d = dist(p, vi);
        if d < best.1 - GEOM_TOL {
            best = (*vi, d);
        }
        for &j in &hull[k + 1..] {
            let (f, d) = project(p, vi, &spine.vertices[j]);
            if d < best.1 - GEOM_TOL {
                best = (f, d);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn d(x: f64, y: f64) -> HPoint {
        HPoint::disk(x, y).unwrap()
    }

    /// Cross-ratio form of the disk metric, independent of the asinh form.
    fn cross_ratio_dist(a: &HPoint, b: &HPoint) -> f64 {
        let (ax, ay, bx, by) = (a.x(), a.y(), b.x(), b.y());
        // |1 − ā b|
        let re = 1.0 - (ax * bx + ay * by);
        let im = -(ax * by - ay * bx);
        let den = (re * re + im * im).sqrt();
        let num = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
        let t = num / den;
        ((1.0 + t) / (1.0 - t)).ln()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyp_dist(&d(0.0, 0.0), &d(0.0, 0.0)).unwrap(), 0.0);
        assert!((hyp_dist(&d(0.0, 0.0), &d(0.5, 0.0)).unwrap() - 3f64.ln()).abs() < 1e-12);
        let (a, b) = (d(0.3, -0.2), d(-0.5, 0.4));
        assert!((hyp_dist(&a, &b).unwrap() - cross_ratio_dist(&a, &b)).abs() < 1e-12);
        assert!(matches!(
            hyp_dist(&d(0.0, 0.0), &HPoint::ball(0.0, 0.0, 0.0).unwrap()),
            Err(HypError::ModelMismatch(..))
        ));
        assert!(HPoint::disk(1.0, 0.0).is_err());
    }

    #[test]
    fn geodesic_examples() {
        let o = d(0.0, 0.0);
        assert!(dist(&geodesic_point(&o, &d(0.4, 0.0), 0.0).unwrap(), &o) < 1e-12);
        assert!(dist(&geodesic_point(&d(-0.7, 0.0), &d(0.7, 0.0), 0.5).unwrap(), &o) < 1e-12);
        let m = geodesic_point(&o, &d(0.6, 0.0), 0.5).unwrap();
        assert!((dist(&o, &m) - 0.5 * 4f64.ln()).abs() < 1e-12);
        assert!(m.y().abs() < 1e-15);
        assert_eq!(geodesic_point(&o, &o, 0.5), Err(HypError::DegenerateSegment));
    }

    #[test]
    fn projection_examples() {
        let (x, y) = (d(-0.9, 0.0), d(0.9, 0.0));
        let (f, _) = project_segment(&d(0.0, 0.5), &x, &y).unwrap();
        assert!(dist(&f, &d(0.0, 0.0)) < 1e-12);
        let p = geodesic_point(&d(0.1, 0.2), &d(-0.3, 0.6), 0.3).unwrap();
        let (f, dd) = project_segment(&p, &d(0.1, 0.2), &d(-0.3, 0.6)).unwrap();
        assert!(dist(&f, &p) < 1e-9 && dd < 1e-9);
    }

    fn golden_section(p: &HPoint, x: &HPoint, y: &HPoint) -> f64 {
        let f = |s: f64| dist(p, &geo(x, y, s));
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - g * (b - a);
            let e = a + g * (b - a);
            if f(c) < f(e) {
                b = e;
            } else {
                a = c;
            }
        }
        f((a + b) / 2.0)
    }

    #[test]
    fn tripod_is_centered() {
        let pts: Vec<HPoint> = (0..3)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 3.0;
                d(0.99 * t.cos(), 0.99 * t.sin())
            })
            .collect();
        let s = build_spine(&pts, 1.0).unwrap();
        assert!(s.is_tree());
        assert_eq!(s.vertices.len(), 4);
        let branch = (0..4).find(|&v| s.valence(v) == 3).unwrap();
        assert!(s.vertices[branch].v().norm() < 1e-9);
        let inc: Vec<usize> = (0..3).collect();
        for i in 0..3 {
            let a = vertex_angle(&s, branch, inc[i], inc[(i + 1) % 3]).unwrap();
            assert!((a - 2.0 * PI / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn small_spines() {
        let s = build_spine(&[d(0.1, 0.1)], 1.0).unwrap();
        assert_eq!((s.vertices.len(), s.edges.len()), (1, 0));
        let s = build_spine(&[d(0.1, 0.1), d(-0.4, 0.2)], 1.0).unwrap();
        assert_eq!(s.edges, vec![(0, 1)]);
        assert!(matches!(
            build_spine(&[d(0.1, 0.1), d(0.1, 0.1)], 1.0),
            Err(HypError::DuplicatePoints(0, 1))
        ));
    }

    #[test]
    fn angle_examples() {
        let s = MarkedSpine {
            vertices: vec![d(0.0, 0.0), d(0.5, 0.0), d(-0.5, 0.0), d(0.0, 0.5)],
            edges: vec![(0, 1), (0, 2), (3, 0)],
            marked: vec![],
            input_map: vec![],
        };
        assert!((vertex_angle(&s, 0, 0, 1).unwrap() - PI).abs() < 1e-12);
        assert!((vertex_angle(&s, 0, 0, 2).unwrap() - PI / 2.0).abs() < 1e-12);
        assert_eq!(vertex_angle(&s, 1, 1, 2), Err(HypError::NotIncident(1, 1)));
    }

    #[test]
    fn ball_fermat_point() {
        let pts = [
            HPoint::ball(0.9, 0.0, 0.0).unwrap(),
            HPoint::ball(0.0, 0.9, 0.0).unwrap(),
            HPoint::ball(0.0, 0.0, 0.9).unwrap(),
        ];
        let z = fermat_point(&pts);
        let c = z.coords();
        assert!((c[0] - c[1]).abs() < 1e-9 && (c[1] - c[2]).abs() < 1e-9);
        let s = build_spine(&pts, 0.1).unwrap();
        assert!(s.is_tree());
    }

    fn arb_point() -> impl Strategy<Value = HPoint> {
        (0.0f64..0.95, 0.0f64..(2.0 * PI)).prop_map(|(r, t)| d(r * t.cos(), r * t.sin()))
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in arb_point(), b in arb_point(), c in arb_point()) {
            prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-9);
        }

        #[test]
        fn isometry_invariance(a in arb_point(), b in arb_point(), c in arb_point()) {
            let (ta, tb) = (mobius_add(&c, &a), mobius_add(&c, &b));
            prop_assert!((dist(&ta, &tb) - dist(&a, &b)).abs() < 1e-7 * (1.0 + dist(&a, &b)));
        }

        #[test]
        fn projection_matches_sampling(p in arb_point(), x in arb_point(), y in arb_point()) {
            prop_assume!(dist(&x, &y) > 1e-3);
            let (_, dd) = project(&p, &x, &y);
            prop_assert!((dd - golden_section(&p, &x, &y)).abs() < 1e-7);
        }

        #[test]
        fn spine_is_tree_with_geodesic_edges(pts in proptest::collection::vec(arb_point(), 1..8)) {
            let ok = (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| dist(&pts[i], &pts[j]) > 1e-6));
            prop_assume!(ok);
            let s = build_spine(&pts, 0.5).unwrap();
            prop_assert!(s.is_tree());
            for (i, p) in pts.iter().enumerate() {
                prop_assert!(dist(&s.vertices[s.input_map[i]], p) == 0.0);
            }
            for v in 0..s.vertices.len() {
                if !s.marked.contains(&v) {
                    prop_assert!(s.valence(v) >= 3);
                }
            }
            for &(a, b) in &s.edges {
                let (x, y) = (s.vertices[a], s.vertices[b]);
                let m = geo(&x, &y, 0.5);
                let l = dist(&x, &y);
                prop_assert!((dist(&m, &x) - l / 2.0).abs() < 1e-9);
                prop_assert!((dist(&m, &y) - l / 2.0).abs() < 1e-9);
            }
        }
    }
}
