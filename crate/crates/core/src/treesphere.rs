//! Rational maps on trees of Riemann spheres: data model, structural
//! validation, tangent compatibility and local degrees along edges.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex {0:?} is listed twice")]
    DuplicateVertex(String),
    #[error("the edges do not form a tree")]
    NotATree,
    #[error("vertex {0:?} has no image under F")]
    MissingImage(String),
    #[error("vertex {vertex:?} has no marking for the direction toward {direction:?}")]
    MissingMarking { vertex: String, direction: String },
    #[error("vertex {0:?} marks a direction that is not a neighbour")]
    ExtraMarking(String),
    #[error("vertex {0:?} has no rational map")]
    MissingMap(String),
    #[error("the map at vertex {0:?} has a zero numerator or denominator")]
    ZeroMap(String),
    #[error("{0:?} and {1:?} are not joined by an edge")]
    NotAnEdge(String, String),
    #[error("local degrees along edge {a:?}—{b:?} differ: {deg_a} vs {deg_b}")]
    DegreeMismatch { a: String, b: String, deg_a: u32, deg_b: u32 },
    #[error("no usable winding radius around the marked point at {0:?}")]
    RadiusSelectionFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A point of ℂ̂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    /// Chordal distance, in `[0, 2]`.
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity) | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SpherePoint::Infinity => s.serialize_str("inf"),
            SpherePoint::Finite(z) => [z.re, z.im].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Pair([f64; 2]),
            Real(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Pair([re, im]) => Ok(SpherePoint::finite(re, im)),
            Raw::Real(re) => Ok(SpherePoint::finite(re, 0.0)),
            Raw::Word(w) if w == "inf" => Ok(SpherePoint::Infinity),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("expected [re, im] or \"inf\", got {w:?}"))),
        }
    }
}

/// A coefficient: a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Real(f64),
    Complex([f64; 2]),
}

impl Coeff {
    fn value(&self) -> Complex64 {
        match *self {
            Coeff::Real(x) => Complex64::new(x, 0.0),
            Coeff::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub num: Vec<Coeff>,
    pub den: Vec<Coeff>,
}

/// `N/D` with ascending complex coefficients; assumed coprime.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereMap {
    num: Poly,
    den: Poly,
}

impl SphereMap {
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        (!num.is_zero() && !den.is_zero()).then_some(SphereMap { num, den })
    }

    pub fn polynomial(p: Poly) -> Option<Self> {
        Self::new(p, Poly::real(&[1.0]))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    /// `R(x)`, evaluated in the chart `w = 1/z` when `|z| > 1`.
    pub fn eval(&self, x: &SpherePoint) -> SpherePoint {
        let n = self.degree();
        let (a, b) = match *x {
            SpherePoint::Infinity => (self.num.reversed(n).eval(Complex64::zero()), self.den.reversed(n).eval(Complex64::zero())),
            SpherePoint::Finite(z) if z.norm() > 1.0 => {
                let w = z.inv();
                (self.num.reversed(n).eval(w), self.den.reversed(n).eval(w))
            }
            SpherePoint::Finite(z) => (self.num.eval(z), self.den.eval(z)),
        };
        if b.is_zero() {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(a / b)
        }
    }

    /// Critical points with multiplicity: roots of `N′D − ND′`, and ∞ for the
    /// remainder of the `2·deg − 2` count.
    pub fn critical_points(&self) -> Result<Vec<(SpherePoint, usize)>, SphereError> {
        let n = self.degree();
        if n <= 1 {
            return Ok(vec![]);
        }
        let w = self.num.deriv().mul(&self.den).sub(&self.num.mul(&self.den.deriv())).trimmed(1e-12);
        let mut out: Vec<(SpherePoint, usize)> = if w.degree() == 0 {
            vec![]
        } else {
            w.root_clusters()?.into_iter().map(|(z, m)| (SpherePoint::Finite(z), m)).collect()
        };
        let at_infinity = (2 * n - 2).saturating_sub(w.degree());
        if at_infinity > 0 {
            out.push((SpherePoint::Infinity, at_infinity));
        }
        Ok(out)
    }
}

/// Local degree of `R` at `x`: the winding number of `R − R(x)` (or of `1/R`
/// when `R(x) = ∞`) around a small circle about `x`, in charts at ∞.
pub fn local_degree(r: &SphereMap, x: &SpherePoint, avoid: &[SpherePoint]) -> Result<u32, SphereError> {
    let y = r.eval(x);
    let n = r.degree();
    // Source chart: z = x + u, or z = 1/u at ∞.
    let to_chart = |p: &SpherePoint| -> Option<Complex64> {
        match (x, p) {
            (SpherePoint::Finite(x0), SpherePoint::Finite(z)) => Some(z - x0),
            (SpherePoint::Finite(_), SpherePoint::Infinity) => None,
            (SpherePoint::Infinity, SpherePoint::Finite(z)) => (!z.is_zero()).then(|| z.inv()),
            (SpherePoint::Infinity, SpherePoint::Infinity) => Some(Complex64::zero()),
        }
    };
    // Other preimages of R(x): roots of N − y·D, or of D when y = ∞.
    let fibre = match y {
        SpherePoint::Finite(y0) => r.num.sub(&r.den.scale(y0)),
        SpherePoint::Infinity => r.den.clone(),
    };
    let mut obstacles: Vec<SpherePoint> = avoid.to_vec();
    obstacles.extend(r.critical_points()?.into_iter().map(|c| c.0));
    let fibre = fibre.trimmed(1e-14);
    if fibre.degree() > 0 {
        obstacles.extend(fibre.roots()?.into_iter().map(SpherePoint::Finite));
    }
    if fibre.degree() < n {
        obstacles.push(SpherePoint::Infinity);
    }
    // Poles of the integrand: poles of R when y is finite, zeros of R when y = ∞.
    let poles = match y {
        SpherePoint::Finite(_) => r.den.trimmed(1e-14),
        SpherePoint::Infinity => r.num.trimmed(1e-14),
    };
    if poles.degree() > 0 {
        obstacles.extend(poles.roots()?.into_iter().map(SpherePoint::Finite));
    }
    let mut radius = f64::INFINITY;
    for p in &obstacles {
        if let Some(u) = to_chart(p) {
            // Points within 1e−9 are the multiple point itself.
            if u.norm() > 1e-9 {
                radius = radius.min(0.5 * u.norm());
            }
        }
    }
    let radius = if radius.is_finite() { radius.max(1e-6) } else { 0.5 };

    let g = |u: Complex64| -> Complex64 {
        let z = match x {
            SpherePoint::Finite(x0) => SpherePoint::Finite(x0 + u),
            SpherePoint::Infinity => SpherePoint::Finite(u.inv()),
        };
        let v = r.eval(&z);
        match (y, v) {
            (SpherePoint::Finite(y0), SpherePoint::Finite(w)) => w - y0,
            (SpherePoint::Infinity, SpherePoint::Finite(w)) => w.inv(),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let label = format!("{x:?}");
    let mut samples = 256;
    while samples <= 1 << 16 {
        let mut total = 0.0;
        let mut smooth = true;
        let mut prev = g(Complex64::new(radius, 0.0));
        for k in 1..=samples {
            let theta = 2.0 * PI * k as f64 / samples as f64;
            let cur = g(Complex64::from_polar(radius, theta));
            if !cur.re.is_finite() || !cur.im.is_finite() || cur.is_zero() {
                return Err(SphereError::RadiusSelectionFailed(label));
            }
            let step = (cur / prev).arg();
            if step.abs() > PI / 4.0 {
                smooth = false;
                break;
            }
            total += step;
            prev = cur;
        }
        if smooth {
            let w = (total / (2.0 * PI)).round();
            return if w >= 1.0 { Ok(w as u32) } else { Err(SphereError::RadiusSelectionFailed(label)) };
        }
        samples *= 4;
    }
    Err(SphereError::RadiusSelectionFailed(label))
}

/// JSON form. `xi[a][b]` marks the direction at `a` toward its neighbour `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeOfSpheresFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, String>,
    pub xi: BTreeMap<String, BTreeMap<String, SpherePoint>>,
    #[serde(rename = "R")]
    pub r: BTreeMap<String, MapFile>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeOfSpheres {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    f: Vec<usize>,
    xi: Vec<BTreeMap<usize, SpherePoint>>,
    maps: Vec<SphereMap>,
    degree: u32,
}

impl TreeOfSpheresFile {
    pub fn to_spheres(&self) -> Result<TreeOfSpheres, SphereError> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(SphereError::DuplicateVertex(v.clone()));
            }
        }
        let id = |s: &str| index.get(s).copied().ok_or_else(|| SphereError::UnknownVertex(s.to_string()));
        let n = self.vertices.len();
        let mut edges = Vec::new();
        let mut neighbors = vec![Vec::new(); n];
        for [a, b] in &self.edges {
            let (i, j) = (id(a)?, id(b)?);
            if i == j || neighbors[i].contains(&j) {
                return Err(SphereError::NotATree);
            }
            edges.push((i, j));
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        let mut f = Vec::with_capacity(n);
        let mut xi = Vec::with_capacity(n);
        let mut maps = Vec::with_capacity(n);
        for (i, v) in self.vertices.iter().enumerate() {
            f.push(id(self.f.get(v).ok_or_else(|| SphereError::MissingImage(v.clone()))?)?);
            let marks = self.xi.get(v).cloned().unwrap_or_default();
            let mut m = BTreeMap::new();
            for (dir, p) in marks {
                let j = id(&dir)?;
                if !neighbors[i].contains(&j) {
                    return Err(SphereError::ExtraMarking(v.clone()));
                }
                m.insert(j, p);
            }
            if let Some(&j) = neighbors[i].iter().find(|j| !m.contains_key(j)) {
                return Err(SphereError::MissingMarking { vertex: v.clone(), direction: self.vertices[j].clone() });
            }
            xi.push(m);
            let mf = self.r.get(v).ok_or_else(|| SphereError::MissingMap(v.clone()))?;
            let num = Poly::new(mf.num.iter().map(Coeff::value).collect());
            let den = Poly::new(mf.den.iter().map(Coeff::value).collect());
            maps.push(SphereMap::new(num, den).ok_or_else(|| SphereError::ZeroMap(v.clone()))?);
        }
        let ts = TreeOfSpheres { names: self.vertices.clone(), edges, neighbors, f, xi, maps, degree: self.degree };
        if n > 0 && (ts.edges.len() + 1 != n || (0..n).any(|v| ts.path(0, v).is_none())) {
            return Err(SphereError::NotATree);
        }
        Ok(ts)
    }
}

impl TreeOfSpheres {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn map(&self, v: usize) -> &SphereMap {
        &self.maps[v]
    }

    pub fn marking(&self, v: usize, toward: usize) -> Option<&SpherePoint> {
        self.xi[v].get(&toward)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.names.len()];
        let mut queue = VecDeque::from([a]);
        prev[a] = a;
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbors[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if prev[b] == usize::MAX {
            return None;
        }
        let mut out = vec![b];
        while *out.last().unwrap() != a {
            out.push(prev[*out.last().unwrap()]);
        }
        out.reverse();
        Some(out)
    }

    /// `DF_a` of the direction toward `b`: the first step from `F(a)` to `F(b)`.
    fn tangent_image(&self, a: usize, b: usize) -> Option<usize> {
        let p = self.path(self.f[a], self.f[b])?;
        p.get(1).copied()
    }

    fn singular_set(&self, v: usize) -> Vec<SpherePoint> {
        self.xi[v].values().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalEntry {
    pub vertex: String,
    pub point: SpherePoint,
    pub multiplicity: usize,
    pub singular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereReport {
    pub pass: bool,
    pub checks: Vec<CheckLine>,
    pub critical: Vec<CriticalEntry>,
    pub free_critical_count: usize,
}

impl SphereReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Structural and tangent-compatibility checks; distances are chordal.
pub fn validate_tree_of_spheres(ts: &TreeOfSpheres, tol: f64) -> Result<SphereReport, SphereError> {
    let mut checks = Vec::new();
    let mut push = |check: String, pass: bool, detail: String| checks.push(CheckLine { check, pass, detail });
    let name = |v: usize| ts.names[v].as_str();

    for &(a, b) in &ts.edges {
        push(
            format!("F injective on edge {}—{}", name(a), name(b)),
            ts.f[a] != ts.f[b],
            format!("F({}) = {}, F({}) = {}", name(a), name(ts.f[a]), name(b), name(ts.f[b])),
        );
    }
    for v in 0..ts.names.len() {
        let pts = ts.singular_set(v);
        let mut min_gap = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                min_gap = min_gap.min(pts[i].chordal(&pts[j]));
            }
        }
        push(
            format!("xi injective at {}", name(v)),
            min_gap > 0.0,
            format!("{} marked directions, minimum separation {min_gap:.3e}", pts.len()),
        );
        let deg = ts.maps[v].degree();
        push(format!("R at {} has degree ≥ 1", name(v)), deg >= 1, format!("degree {deg}"));
    }

    for a in 0..ts.names.len() {
        for &b in &ts.neighbors[a] {
            let target = ts.tangent_image(a, b);
            let x = ts.xi[a][&b];
            let image = ts.maps[a].eval(&x);
            let (pass, detail) = match target.and_then(|t| ts.xi[ts.f[a]].get(&t).map(|p| (t, p))) {
                Some((t, p)) => {
                    let gap = image.chordal(p);
                    (gap <= tol, format!("DF maps it toward {}; mismatch {gap:.3e}", name(t)))
                }
                None => (false, "DF of this direction is undefined".to_string()),
            };
            push(format!("compatibility at {} toward {}", name(a), name(b)), pass, detail);
        }
        let fa = ts.f[a];
        let target_set = ts.singular_set(fa);
        let worst = ts
            .singular_set(a)
            .iter()
            .map(|x| {
                let y = ts.maps[a].eval(x);
                target_set.iter().map(|p| y.chordal(p)).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        push(
            format!("R maps the singular set at {} into that of {}", name(a), name(fa)),
            worst <= tol,
            format!("worst distance {worst:.3e}"),
        );
    }

    let mut critical = Vec::new();
    let mut free = 0;
    for v in 0..ts.names.len() {
        let xi = ts.singular_set(v);
        let crit = ts.maps[v].critical_points()?;
        let total: usize = crit.iter().map(|c| c.1).sum();
        let deg = ts.maps[v].degree();
        push(
            format!("Riemann–Hurwitz at {}", name(v)),
            total == (2 * deg).saturating_sub(2),
            format!("{total} critical points for degree {deg}"),
        );
        for (p, m) in crit {
            let singular = xi.iter().any(|s| s.chordal(&p) <= tol);
            if !singular {
                free += m;
            }
            critical.push(CriticalEntry { vertex: ts.names[v].clone(), point: p, multiplicity: m, singular });
        }
    }
    let want = (2 * ts.degree as usize).saturating_sub(2);
    push(
        "free critical count equals 2d − 2".to_string(),
        free == want,
        format!("{free} free critical points, degree {} needs {want}", ts.degree),
    );
    let pass = checks.iter().all(|c| c.pass);
    Ok(SphereReport { pass, checks, critical, free_critical_count: free })
}

/// `deg_{x_b}(R_a)`, cross-checked against `deg_{x_a}(R_b)`.
pub fn edge_local_degree(ts: &TreeOfSpheres, a: usize, b: usize) -> Result<u32, SphereError> {
    let (xa, xb) = match (ts.marking(b, a), ts.marking(a, b)) {
        (Some(xa), Some(xb)) => (*xa, *xb),
        _ => return Err(SphereError::NotAnEdge(ts.names[a].clone(), ts.names[b].clone())),
    };
    let others = |v: usize, x: &SpherePoint| -> Vec<SpherePoint> {
        ts.singular_set(v).into_iter().filter(|p| p.chordal(x) > 1e-12).collect()
    };
    let deg_a = local_degree(&ts.maps[a], &xb, &others(a, &xb))?;
    let deg_b = local_degree(&ts.maps[b], &xa, &others(b, &xa))?;
    if deg_a != deg_b {
        return Err(SphereError::DegreeMismatch {
            a: ts.names[a].clone(),
            b: ts.names[b].clone(),
            deg_a,
            deg_b,
        });
    }
    Ok(deg_a)
}
