//! Blaschke products `z·∏(z−a)/(1−āz)`, their circle markings, Blaschke
//! mapping schemes, quasi post-critically finite witnesses, and the
//! extraction of quasi-invariant trees from marked and critical orbits.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::hypgeom::{self, HPoint, HypError, MarkedSpine};
use crate::poly::{cluster_points, Poly, PolyError, ROOT_CLUSTER_TOL};
use crate::treedyn::{MappingScheme, SchemeError, SchemeFile};

/// Tolerance on `|a| < 1` for product zeros.
pub const DISK_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlaschkeError {
    #[error("zero {0} is not inside the unit disk")]
    ZeroOutsideDisk(Complex64),
    #[error("point {0} is outside the closed unit disk")]
    OutsideDisk(Complex64),
    #[error(transparent)]
    Roots(#[from] PolyError),
    #[error("expected {expected} critical points in the disk, found {found}")]
    CriticalCount { expected: usize, found: usize },
    #[error("circle map is not uniformly expanding (derivative bound {0})")]
    NotExpanding(f64),
    #[error("marking did not reach tolerance {tol:e} by depth {depth}")]
    DepthExhausted { depth: u32, tol: f64 },
    #[error("map at {vertex:?} has degree {got}, scheme says {expected}")]
    DegreeMismatch { vertex: String, expected: u32, got: u32 },
    #[error("no map given for vertex {0:?}")]
    MissingMap(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("step {n}: critical point {index} has no (l, q) within bounds; smallest gap {min_gap}")]
    NoWitnessWithinBounds { n: usize, index: usize, min_gap: f64 },
    #[error("all points collapsed into one cluster at gap {0}; no tree structure")]
    ClusterDegenerate(f64),
    #[error("witness does not match the scheme's critical points")]
    WitnessMismatch,
    #[error(transparent)]
    Geometry(#[from] HypError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    /// `z ↦ z·∏(z−a_i)/(1−ā_i z)` with `|a_i| < 1`.
    pub fn new(zeros: Vec<Complex64>) -> Result<Self, BlaschkeError> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0 - DISK_TOL)) {
            return Err(BlaschkeError::ZeroOutsideDisk(*a));
        }
        Ok(BlaschkeProduct { zeros })
    }

    /// `p_d(z) = z^d`.
    pub fn power(d: u32) -> Self {
        BlaschkeProduct {
            zeros: vec![Complex64::new(0.0, 0.0); d as usize - 1],
        }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> u32 {
        self.zeros.len() as u32 + 1
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, BlaschkeError> {
        if z.norm() > 1.0 + DISK_TOL {
            return Err(BlaschkeError::OutsideDisk(z));
        }
        Ok(self.apply(z))
    }

    fn apply(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(z, |acc, a| acc * (z - a) / (1.0 - a.conj() * z))
    }

    /// `N(z) = z·∏(z−a_i)`.
    pub fn numerator(&self) -> Poly {
        let mut roots = vec![Complex64::new(0.0, 0.0)];
        roots.extend_from_slice(&self.zeros);
        Poly::from_roots(&roots)
    }

    /// `Q(z) = ∏(1−ā_i z)`.
    pub fn denominator(&self) -> Poly {
        self.zeros.iter().fold(Poly::real(&[1.0]), |p, a| {
            p.mul(&Poly::new(vec![Complex64::new(1.0, 0.0), -a.conj()]))
        })
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let (n, q) = (self.numerator(), self.denominator());
        let qz = q.eval(z);
        (n.deriv().eval(z) * qz - n.eval(z) * q.deriv().eval(z)) / (qz * qz)
    }

    /// The `d − 1` critical points in the disk, with multiplicity.
    pub fn critical_points(&self) -> Result<Vec<Complex64>, BlaschkeError> {
        let d = self.degree() as usize;
        if d == 1 {
            return Ok(vec![]);
        }
        let (n, q) = (self.numerator(), self.denominator());
        let w = n.deriv().mul(&q).sub(&n.mul(&q.deriv())).trimmed(1e-15);
        let mut roots = w.roots()?;
        // Roots come in pairs z, 1/z̄; missing ones sit at ∞.
        roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        roots.truncate(d - 1);
        if roots.len() != d - 1 || roots.iter().any(|z| z.norm() >= 1.0) {
            return Err(BlaschkeError::CriticalCount {
                expected: d - 1,
                found: roots.iter().filter(|z| z.norm() < 1.0).count(),
            });
        }
        Ok(roots)
    }

    /// Distinct solutions of `f(z) = w` in the disk.
    pub fn preimages(&self, w: Complex64) -> Result<Vec<Complex64>, BlaschkeError> {
        let p = self.numerator().sub(&self.denominator().scale(w));
        let roots = p.roots()?;
        Ok(cluster_points(&roots, ROOT_CLUSTER_TOL)
            .into_iter()
            .map(|(z, _)| z)
            .filter(|z| z.norm() < 1.0)
            .collect())
    }

    /// Lift of the circle map: `f(e^{2πix}) = e^{2πiF(x)}`, `F(x+1) = F(x)+d`.
    pub fn circle_lift(&self, x: f64) -> f64 {
        let e = Complex64::from_polar(1.0, -2.0 * PI * x);
        self.degree() as f64 * x + self.zeros.iter().map(|a| (1.0 - a * e).arg()).sum::<f64>() / PI
    }

    pub fn circle_lift_deriv(&self, x: f64) -> f64 {
        let e = Complex64::from_polar(1.0, -2.0 * PI * x);
        let extra: f64 = self
            .zeros
            .iter()
            .map(|a| {
                let w = 1.0 - a * e;
                let dw = Complex64::new(0.0, 2.0 * PI) * a * e;
                (dw / w).im
            })
            .sum();
        self.degree() as f64 + extra / PI
    }

    /// Lower bound for `|f'|` on the unit circle.
    pub fn expansion_bound(&self) -> f64 {
        1.0 + self
            .zeros
            .iter()
            .map(|a| (1.0 - a.norm()) / (1.0 + a.norm()))
            .sum::<f64>()
    }

    /// `(F(x), F'(x))` sharing one evaluation of the exponential.
    fn lift_with_deriv(&self, x: f64) -> (f64, f64) {
        let e = Complex64::from_polar(1.0, -2.0 * PI * x);
        let d = self.degree() as f64;
        let (mut f, mut df) = (d * x, d);
        for a in &self.zeros {
            let ae = a * e;
            let w = 1.0 - ae;
            f += w.arg() / PI;
            df += 2.0 * (ae / w).re;
        }
        (f, df)
    }

    /// Solves `F(x) = y`.
    fn lift_inverse(&self, y: f64) -> f64 {
        let d = self.degree() as f64;
        let slack = (d - 1.0) / 2.0 + 1e-9;
        let (mut lo, mut hi) = ((y - slack) / d, (y + slack) / d);
        let mut x = y / d;
        for _ in 0..100 {
            let (fx, dfx) = self.lift_with_deriv(x);
            let g = fx - y;
            if g == 0.0 {
                return x;
            }
            if g < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = x - g / dfx;
            let next = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
            if (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
                return next;
            }
            x = next;
        }
        x
    }

    /// Lift coordinate of the boundary fixed point continuing `1` from `z^d`:
    /// the unique real root of `F(x) = x`.
    pub fn continued_fixed_point(&self) -> f64 {
        let d = self.degree() as f64;
        if d == 1.0 {
            return 0.0;
        }
        // F(x) − x is increasing with |F(x) − d x| < (d−1)/2.
        let (mut lo, mut hi) = (-0.5 - 1e-9, 0.5 + 1e-9);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.circle_lift(mid) - mid < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

pub fn bp_eval(f: &BlaschkeProduct, z: Complex64) -> Result<Complex64, BlaschkeError> {
    f.eval(z)
}

pub fn bp_critical_points(f: &BlaschkeProduct) -> Result<Vec<Complex64>, BlaschkeError> {
    f.critical_points()
}

const LIFT_TABLE: usize = 1 << 14;

/// Boundary conjugacy `η` with `η ∘ p_d = f ∘ η` and `η(0)` the continued
/// fixed point. Values are memoized per angle; not shareable across threads.
pub struct Marking {
    f: BlaschkeProduct,
    x0: f64,
    /// `F(0)`.
    f0: f64,
    /// `F⁻¹(F(0) + j·d/N)` for `j = 0..=N`: seeds for inverting the lift.
    table: Vec<f64>,
    cache: RefCell<LiftCache>,
}

/// Memoized lifts. Fractions with denominator up to `DENSE_DEN` live in a
/// flat table indexed by `q(q−1)/2 + p`; larger ones in hash maps.
#[derive(Default)]
struct LiftCache {
    dense: Vec<f64>,
    small: HashMap<(u64, u64), f64>,
    big: HashMap<Angle, f64>,
}

const DENSE_DEN: u64 = 2048;

impl LiftCache {
    fn get_small(&self, p: u64, q: u64) -> Option<f64> {
        if q <= DENSE_DEN {
            let i = (q * (q - 1) / 2 + p) as usize;
            self.dense.get(i).copied().filter(|v| !v.is_nan())
        } else {
            self.small.get(&(p, q)).copied()
        }
    }

    fn put_small(&mut self, p: u64, q: u64, v: f64) {
        if q <= DENSE_DEN {
            let i = (q * (q - 1) / 2 + p) as usize;
            if self.dense.len() <= i {
                self.dense.resize((i + 1).next_power_of_two(), f64::NAN);
            }
            self.dense[i] = v;
        } else {
            self.small.insert((p, q), v);
        }
    }
}

/// Angle representations the marking recursion can walk: machine-size
/// fractions on the fast path, exact big rationals otherwise.
trait OrbitKey: Clone + Eq + std::hash::Hash {
    fn lookup(&self, c: &LiftCache) -> Option<f64>;
    fn store(&self, c: &mut LiftCache, v: f64);
    fn times(&self, d: u32) -> Self;
    fn digit(&self, d: u32) -> u32;
    fn to_f64(&self) -> f64;
}

/// Reduced `p/q` with `0 ≤ p < q` and `d·q` representable.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Small {
    p: u64,
    q: u64,
}

impl OrbitKey for Small {
    fn lookup(&self, c: &LiftCache) -> Option<f64> {
        c.get_small(self.p, self.q)
    }
    fn store(&self, c: &mut LiftCache, v: f64) {
        c.put_small(self.p, self.q, v);
    }
    fn times(&self, d: u32) -> Self {
        let n = (self.p * d as u64) % self.q;
        let g = num::integer::gcd(n, self.q);
        Small { p: n / g, q: self.q / g }
    }
    fn digit(&self, d: u32) -> u32 {
        ((self.p * d as u64) / self.q) as u32
    }
    fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl OrbitKey for Angle {
    fn lookup(&self, c: &LiftCache) -> Option<f64> {
        match self.to_u64_pair() {
            Some((p, q)) => c.get_small(p, q),
            None => c.big.get(self).copied(),
        }
    }
    fn store(&self, c: &mut LiftCache, v: f64) {
        match self.to_u64_pair() {
            Some((p, q)) => c.put_small(p, q, v),
            None => {
                c.big.insert(self.clone(), v);
            }
        }
    }
    fn times(&self, d: u32) -> Self {
        Angle::times(self, d)
    }
    fn digit(&self, d: u32) -> u32 {
        self.first_digit(d)
    }
    fn to_f64(&self) -> f64 {
        Angle::to_f64(self)
    }
}

impl Marking {
    pub fn new(f: BlaschkeProduct) -> Result<Self, BlaschkeError> {
        let bound = f.expansion_bound();
        if bound <= 1.0 + 1e-9 {
            return Err(BlaschkeError::NotExpanding(bound));
        }
        let x0 = f.continued_fixed_point();
        let (f0, d) = (f.circle_lift(0.0), f.degree() as f64);
        let table = (0..=LIFT_TABLE)
            .map(|j| f.lift_inverse(f0 + j as f64 * d / LIFT_TABLE as f64))
            .collect();
        Ok(Marking {
            f,
            x0,
            f0,
            table,
            cache: RefCell::new(LiftCache::default()),
        })
    }

    pub fn product(&self) -> &BlaschkeProduct {
        &self.f
    }

    /// Lift of `η(0)`.
    pub fn base_lift(&self) -> f64 {
        self.x0
    }

    fn step(&self, digit: u32, next: f64) -> f64 {
        self.inverse(digit as f64 + next)
    }

    /// `F⁻¹(y)`: table lookup, then Newton.
    fn inverse(&self, y: f64) -> f64 {
        let d = self.f.degree() as f64;
        // F(x + k) = F(x) + k·d, and the table covers one period of y.
        let u = (y - self.f0) / d;
        let k = u.floor();
        let pos = (u - k) * LIFT_TABLE as f64;
        let i = (pos as usize).min(LIFT_TABLE - 1);
        let frac = pos - i as f64;
        let mut x = k + self.table[i] + frac * (self.table[i + 1] - self.table[i]);
        for _ in 0..6 {
            let (fx, dfx) = self.f.lift_with_deriv(x);
            let dx = (fx - y) / dfx;
            x -= dx;
            // Quadratic convergence: the remaining error is O(dx²).
            if dx.abs() <= 1e-9 {
                return x;
            }
        }
        self.f.lift_inverse(y)
    }

    /// Increasing lift `h` of `η` on `[0,1)`, with `h(0) = x0` and
    /// `F(h(t)) = h(d·t)` (read modulo the integer part of `d·t`).
    pub fn lift(&self, t: &Angle) -> f64 {
        let d = self.f.degree();
        match t.to_u64_pair() {
            Some((p, q)) if q.checked_mul(d as u64).is_some() => self.lift_orbit(Small { p, q }, d),
            _ => self.lift_orbit(t.clone(), d),
        }
    }

    /// [`lift`](Self::lift) for `p/q` given as machine integers (`q > 0`).
    pub fn lift_ratio(&self, p: u64, q: u64) -> f64 {
        let d = self.f.degree();
        let g = num::integer::gcd(p % q, q);
        match q.checked_mul(d as u64) {
            Some(_) => self.lift_orbit(Small { p: (p % q) / g, q: q / g }, d),
            None => self.lift(&Angle::from_rational(num::BigRational::new(p.into(), q.into()))),
        }
    }

    pub fn eval_ratio(&self, p: u64, q: u64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.lift_ratio(p, q))
    }

    fn lift_orbit<K: OrbitKey>(&self, t: K, d: u32) -> f64 {
        if let Some(v) = t.lookup(&self.cache.borrow()) {
            return v;
        }
        let mut orbit: Vec<K> = Vec::new();
        // Orbits usually hit the cache within a step or two; index lazily.
        let mut pos: HashMap<K, usize> = HashMap::new();
        let mut cur = t;
        let (start, mut v) = loop {
            if let Some(v) = cur.lookup(&self.cache.borrow()) {
                break (orbit.len(), v);
            }
            let seen = if orbit.len() < 32 {
                orbit.iter().position(|x| *x == cur)
            } else {
                if pos.is_empty() {
                    pos.extend(orbit.iter().cloned().enumerate().map(|(i, k)| (k, i)));
                }
                pos.get(&cur).copied()
            };
            if let Some(j) = seen {
                // Periodic part orbit[j..]: fixed point of the backward composition.
                let cycle = &orbit[j..];
                // Each pass contracts the error (< 1) by at least bound^{-p}.
                let per_pass = self.f.expansion_bound().powi(cycle.len().min(4096) as i32);
                let mut x = self.x0 + cycle[0].to_f64();
                let mut err = 1.0;
                for _ in 0..500 {
                    let y = cycle.iter().rev().fold(x, |acc, s| self.step(s.digit(d), acc));
                    let moved = (y - x).abs();
                    x = y;
                    err /= per_pass;
                    if err <= f64::EPSILON || moved <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
                        break;
                    }
                }
                let mut cache = self.cache.borrow_mut();
                cycle[0].store(&mut cache, x);
                let mut w = x;
                for s in cycle[1..].iter().rev() {
                    w = self.step(s.digit(d), w);
                    s.store(&mut cache, w);
                }
                break (j, x);
            }
            let next = cur.times(d);
            if !pos.is_empty() {
                pos.insert(cur.clone(), orbit.len());
            }
            orbit.push(cur);
            cur = next;
        };
        let mut cache = self.cache.borrow_mut();
        for s in orbit[..start].iter().rev() {
            v = self.step(s.digit(d), v);
            s.store(&mut cache, v);
        }
        v
    }

    /// `η(t)`, converged to f64 precision.
    pub fn eval(&self, t: &Angle) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.lift(t))
    }

    /// `η(t)` refined through `depth` base-`d` digits of `t`, starting from the
    /// identity guess for the tail.
    pub fn eval_depth(&self, t: &Angle, depth: u32) -> Complex64 {
        let d = self.f.degree();
        let mut orbit = Vec::with_capacity(depth as usize);
        let mut cur = t.clone();
        for _ in 0..depth {
            orbit.push(cur.clone());
            cur = cur.times(d);
        }
        let tail = self.x0 + cur.to_f64();
        let v = orbit.iter().rev().fold(tail, |acc, s| self.step(s.first_digit(d), acc));
        Complex64::from_polar(1.0, 2.0 * PI * v)
    }

    /// Doubles the depth until two successive refinements agree to `tol`.
    pub fn eval_to_tol(&self, t: &Angle, tol: f64, max_depth: u32) -> Result<Complex64, BlaschkeError> {
        let mut depth = 8;
        let mut prev = self.eval_depth(t, depth);
        while depth < max_depth {
            depth = (depth * 2).min(max_depth);
            let cur = self.eval_depth(t, depth);
            if (cur - prev).norm() <= tol {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(BlaschkeError::DepthExhausted { depth: max_depth, tol })
    }
}

/// `η_f(t)` through `depth` digits.
pub fn marking_eval(f: &BlaschkeProduct, t: &Angle, depth: u32) -> Result<Complex64, BlaschkeError> {
    Ok(Marking::new(f.clone())?.eval_depth(t, depth))
}

/// A mapping scheme with one Blaschke product per vertex, of degree `δ(s)`,
/// mapping the disk at `s` onto the disk at `Φ(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeScheme {
    scheme: MappingScheme,
    maps: Vec<BlaschkeProduct>,
}

/// A labelled critical point: scheme vertex, position, multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub vertex: usize,
    pub z: [f64; 2],
    pub multiplicity: usize,
}

impl CriticalPoint {
    pub fn point(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }
}

impl BlaschkeScheme {
    pub fn new(scheme: MappingScheme, maps: Vec<BlaschkeProduct>) -> Result<Self, BlaschkeError> {
        scheme.validate()?;
        if maps.len() != scheme.len() {
            return Err(BlaschkeError::MissingMap(scheme.name(maps.len().min(scheme.len() - 1)).into()));
        }
        for (s, f) in maps.iter().enumerate() {
            if f.degree() != scheme.delta(s) {
                return Err(BlaschkeError::DegreeMismatch {
                    vertex: scheme.name(s).into(),
                    expected: scheme.delta(s),
                    got: f.degree(),
                });
            }
        }
        Ok(BlaschkeScheme { scheme, maps })
    }

    /// Every vertex carries `z^{δ(s)}`.
    pub fn powers(scheme: MappingScheme) -> Self {
        let maps = (0..scheme.len()).map(|s| BlaschkeProduct::power(scheme.delta(s))).collect();
        BlaschkeScheme { scheme, maps }
    }

    pub fn scheme(&self) -> &MappingScheme {
        &self.scheme
    }

    pub fn map(&self, s: usize) -> &BlaschkeProduct {
        &self.maps[s]
    }

    /// Vertices whose product breaks the zeros-centred normal form expected
    /// at aperiodic vertices (sum of zeros of `f_s` nonzero).
    pub fn normalization_violations(&self) -> Vec<String> {
        (0..self.scheme.len())
            .filter(|&s| !self.scheme.is_periodic(s))
            .filter(|&s| self.maps[s].zeros().iter().sum::<Complex64>().norm() > 1e-9)
            .map(|s| self.scheme.name(s).to_string())
            .collect()
    }

    pub fn apply(&self, s: usize, z: Complex64) -> Result<(usize, Complex64), BlaschkeError> {
        Ok((self.scheme.phi(s), self.maps[s].eval(z)?))
    }

    /// All critical points with multiplicity, clustered, in vertex order.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>, BlaschkeError> {
        let mut out = Vec::new();
        for s in 0..self.scheme.len() {
            let cps = self.maps[s].critical_points()?;
            for (z, m) in cluster_points(&cps, ROOT_CLUSTER_TOL) {
                out.push(CriticalPoint {
                    vertex: s,
                    z: [z.re, z.im],
                    multiplicity: m,
                });
            }
        }
        Ok(out)
    }

    pub fn to_file(&self) -> BlaschkeSchemeFile {
        BlaschkeSchemeFile {
            scheme: self.scheme.to_file(),
            maps: (0..self.scheme.len())
                .map(|s| {
                    (
                        self.scheme.name(s).to_string(),
                        ProductFile {
                            zeros: self.maps[s].zeros().iter().map(|a| [a.re, a.im]).collect(),
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductFile {
    pub zeros: Vec<[f64; 2]>,
}

/// `{ "scheme": {...}, "maps": { s: { "zeros": [[re, im], …] } } }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlaschkeSchemeFile {
    pub scheme: SchemeFile,
    pub maps: BTreeMap<String, ProductFile>,
}

impl BlaschkeSchemeFile {
    pub fn to_scheme(&self) -> Result<BlaschkeScheme, BlaschkeError> {
        let scheme = self.scheme.to_scheme()?;
        let maps = (0..scheme.len())
            .map(|s| {
                let name = scheme.name(s);
                let pf = self.maps.get(name).ok_or_else(|| BlaschkeError::MissingMap(name.into()))?;
                BlaschkeProduct::new(pf.zeros.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        BlaschkeScheme::new(scheme, maps)
    }
}

/// `(Φ^k(s), ℱ^k(z))`.
pub fn scheme_orbit(
    fs: &BlaschkeScheme,
    s: usize,
    z: Complex64,
    k: usize,
) -> Result<(usize, Complex64), BlaschkeError> {
    if z.norm() >= 1.0 {
        return Err(BlaschkeError::OutsideDisk(z));
    }
    (0..k).try_fold((s, z), |(s, z), _| fs.apply(s, z))
}

/// `{0}` at periodic vertices; full preimages of the target's set elsewhere.
pub fn marked_points(fs: &BlaschkeScheme) -> Result<Vec<Vec<Complex64>>, BlaschkeError> {
    let n = fs.scheme.len();
    let mut out: Vec<Option<Vec<Complex64>>> = vec![None; n];
    for s in 0..n {
        if fs.scheme.is_periodic(s) {
            out[s] = Some(vec![Complex64::new(0.0, 0.0)]);
        }
    }
    // Aperiodic vertices resolve once their image is known; at most n rounds.
    for _ in 0..n {
        for s in 0..n {
            if out[s].is_some() {
                continue;
            }
            let Some(target) = out[fs.scheme.phi(s)].clone() else { continue };
            let mut pts = Vec::new();
            for w in target {
                pts.extend(fs.maps[s].preimages(w)?);
            }
            out[s] = Some(cluster_points(&pts, ROOT_CLUSTER_TOL).into_iter().map(|(z, _)| z).collect());
        }
    }
    Ok(out.into_iter().map(Option::unwrap_or_default).collect())
}

/// Distance on `|𝒮| × 𝔻`: hyperbolic within a disk, infinite across disks.
pub fn scheme_dist(s: usize, z: Complex64, t: usize, w: Complex64) -> f64 {
    if s != t {
        return f64::INFINITY;
    }
    let e = (z - w).norm();
    2.0 * (e / ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr())).sqrt()).asinh()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub critical: CriticalPoint,
    pub l: usize,
    pub q: usize,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QpcfWitness {
    pub n: usize,
    pub bound: f64,
    pub entries: Vec<WitnessEntry>,
}

/// For each step `n`, the lexicographically least `(l, q)` per critical point
/// with `d(ℱ^l c, ℱ^{l+q} c) ≤ K`.
pub fn quasi_pcf_witness(
    seq: impl Fn(usize) -> BlaschkeScheme,
    bound: f64,
    n_range: std::ops::Range<usize>,
    max_l: usize,
    max_q: usize,
) -> Result<Vec<QpcfWitness>, BlaschkeError> {
    let mut out = Vec::new();
    for n in n_range {
        let fs = seq(n);
        let mut entries = Vec::new();
        for (index, c) in fs.critical_points()?.into_iter().enumerate() {
            let mut orbit = vec![(c.vertex, c.point())];
            for _ in 0..max_l + max_q {
                let (s, z) = *orbit.last().unwrap();
                orbit.push(fs.apply(s, z)?);
            }
            let mut min_gap = f64::INFINITY;
            let mut found = None;
            'search: for l in 0..=max_l {
                for q in 1..=max_q {
                    let (s, z) = orbit[l];
                    let (t, w) = orbit[l + q];
                    let gap = scheme_dist(s, z, t, w);
                    min_gap = min_gap.min(gap);
                    if gap <= bound {
                        found = Some((l, q, gap));
                        break 'search;
                    }
                }
            }
            let (l, q, gap) = found.ok_or(BlaschkeError::NoWitnessWithinBounds { n, index, min_gap })?;
            entries.push(WitnessEntry { critical: c, l, q, gap });
        }
        out.push(QpcfWitness { n, bound, entries });
    }
    Ok(out)
}

/// A point fed to the tree extraction, with its local degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaggedPoint {
    pub z: Complex64,
    pub degree: u32,
    pub marked: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub representative: Complex64,
    pub members: Vec<usize>,
    /// `1 + Σ (deg − 1)` over members.
    pub degree: u32,
    pub marked: bool,
}

/// Spine of one scheme vertex's clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexForest {
    pub vertex: usize,
    pub clusters: Vec<Cluster>,
    pub spine: MarkedSpine,
}

/// Measured constants of the quasi-invariance properties at this step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QitReport {
    pub min_inter_vertex_distance: f64,
    pub max_critical_distance: f64,
    pub max_vertex_displacement: f64,
    pub max_edge_displacement: f64,
    pub cluster_gap: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractedTree {
    pub forests: Vec<VertexForest>,
    /// `(forest index, spine vertex) ↦ (forest index, spine vertex)`.
    pub map: BTreeMap<(usize, usize), (usize, usize)>,
    pub report: QitReport,
}

fn to_h(z: Complex64) -> HPoint {
    let r = z.norm();
    let z = if r >= 1.0 { z * ((1.0 - 1e-16) / r) } else { z };
    HPoint::disk(z.re, z.im).expect("inside the disk")
}

fn to_c(p: &HPoint) -> Complex64 {
    Complex64::new(p.x(), p.y())
}

/// Clusters each vertex's points by single linkage at `cluster_gap` and
/// spans one spine per vertex on the cluster representatives.
pub fn extract_tree_from_points(
    points: &[(usize, Vec<TaggedPoint>)],
    cluster_gap: f64,
) -> Result<Vec<VertexForest>, BlaschkeError> {
    let mut forests = Vec::new();
    let mut any_structure = false;
    let mut all_collapsed = true;
    for (vertex, pts) in points {
        if pts.is_empty() {
            continue;
        }
        let hp: Vec<HPoint> = pts.iter().map(|p| to_h(p.z)).collect();
        let mut dsu = crate::dsu::DisjointSet::new(pts.len());
        let mut distinct = false;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = hypgeom::hyp_dist(&hp[i], &hp[j])?;
                if d > 1e-12 {
                    distinct = true;
                }
                if d <= cluster_gap {
                    dsu.union(i, j);
                }
            }
        }
        let clusters: Vec<Cluster> = dsu
            .groups()
            .into_iter()
            .map(|members| {
                let rep = members
                    .iter()
                    .copied()
                    .find(|&i| pts[i].marked)
                    .or_else(|| members.iter().copied().max_by_key(|&i| pts[i].degree))
                    .unwrap();
                Cluster {
                    representative: pts[rep].z,
                    degree: 1 + members.iter().map(|&i| pts[i].degree - 1).sum::<u32>(),
                    marked: members.iter().any(|&i| pts[i].marked),
                    members,
                }
            })
            .collect();
        any_structure |= distinct;
        all_collapsed &= clusters.len() == 1;
        let reps: Vec<HPoint> = clusters.iter().map(|c| to_h(c.representative)).collect();
        let spine = hypgeom::build_spine(&reps, cluster_gap)?;
        forests.push(VertexForest {
            vertex: *vertex,
            clusters,
            spine,
        });
    }
    if any_structure && all_collapsed {
        return Err(BlaschkeError::ClusterDegenerate(cluster_gap));
    }
    Ok(forests)
}

/// Builds the quasi-invariant forest of a scheme from its marked points and
/// critical orbits, the induced vertex map, and the measured constants.
pub fn extract_tree(
    fs: &BlaschkeScheme,
    witness: &QpcfWitness,
    cluster_gap: f64,
) -> Result<ExtractedTree, BlaschkeError> {
    let n = fs.scheme.len();
    let crit = fs.critical_points()?;
    if crit.len() != witness.entries.len() {
        return Err(BlaschkeError::WitnessMismatch);
    }
    let mut per_vertex: Vec<Vec<TaggedPoint>> = vec![Vec::new(); n];
    for (s, pts) in marked_points(fs)?.into_iter().enumerate() {
        per_vertex[s].extend(pts.into_iter().map(|z| TaggedPoint { z, degree: 1, marked: true }));
    }
    for (c, e) in crit.iter().zip(&witness.entries) {
        let (mut s, mut z) = (c.vertex, c.point());
        for k in 0..(e.l + e.q).max(1) {
            let degree = if k == 0 { c.multiplicity as u32 + 1 } else { 1 };
            per_vertex[s].push(TaggedPoint { z, degree, marked: false });
            (s, z) = fs.apply(s, z)?;
        }
    }
    // Identical points (e.g. a critical point that is also marked) merge here.
    let per_vertex: Vec<(usize, Vec<TaggedPoint>)> = per_vertex
        .into_iter()
        .enumerate()
        .map(|(s, pts)| (s, dedupe(pts)))
        .collect();
    let forests = extract_tree_from_points(&per_vertex, cluster_gap)?;
    let forest_of: HashMap<usize, usize> = forests.iter().enumerate().map(|(i, f)| (f.vertex, i)).collect();

    let mut map = BTreeMap::new();
    let mut max_vertex_disp: f64 = 0.0;
    for (fi, f) in forests.iter().enumerate() {
        let target = fs.scheme.phi(f.vertex);
        let Some(&ti) = forest_of.get(&target) else { continue };
        for (v, p) in f.spine.vertices.iter().enumerate() {
            let img = to_h(fs.maps[f.vertex].apply(to_c(p)));
            let (w, d) = nearest_vertex(&forests[ti].spine, &img);
            map.insert((fi, v), (ti, w));
            max_vertex_disp = max_vertex_disp.max(d);
        }
    }

    let mut max_edge_disp: f64 = 0.0;
    for (fi, f) in forests.iter().enumerate() {
        for &(a, b) in &f.spine.edges {
            let (Some(&(ti, fa)), Some(&(_, fb))) = (map.get(&(fi, a)), map.get(&(fi, b))) else {
                continue;
            };
            let target = &forests[ti].spine;
            let path = tree_path(target, fa, fb);
            for s in [0.25, 0.5, 0.75] {
                let p = hypgeom::geodesic_point(&f.spine.vertices[a], &f.spine.vertices[b], s)?;
                let img = to_h(fs.maps[f.vertex].apply(to_c(&p)));
                let d = path_distance(target, &path, &img);
                max_edge_disp = max_edge_disp.max(d);
            }
        }
    }

    let mut min_inter: f64 = f64::INFINITY;
    for f in &forests {
        let vs = &f.spine.vertices;
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                min_inter = min_inter.min(hypgeom::hyp_dist(&vs[i], &vs[j])?);
            }
        }
    }
    if !min_inter.is_finite() {
        min_inter = 0.0;
    }

    let mut max_crit: f64 = 0.0;
    for c in &crit {
        if let Some(&fi) = forest_of.get(&c.vertex) {
            max_crit = max_crit.max(nearest_vertex(&forests[fi].spine, &to_h(c.point())).1);
        }
    }

    Ok(ExtractedTree {
        forests,
        map,
        report: QitReport {
            min_inter_vertex_distance: min_inter,
            max_critical_distance: max_crit,
            max_vertex_displacement: max_vertex_disp,
            max_edge_displacement: max_edge_disp,
            cluster_gap,
            note: "clusters use single linkage at a fixed hyperbolic threshold, a finite-step surrogate for bounded versus diverging distances".into(),
        },
    })
}

fn dedupe(pts: Vec<TaggedPoint>) -> Vec<TaggedPoint> {
    let mut out: Vec<TaggedPoint> = Vec::new();
    for p in pts {
        match out.iter_mut().find(|q| (q.z - p.z).norm() <= ROOT_CLUSTER_TOL) {
            Some(q) => {
                q.degree = q.degree.max(p.degree);
                q.marked |= p.marked;
            }
            None => out.push(p),
        }
    }
    out
}

fn nearest_vertex(spine: &MarkedSpine, p: &HPoint) -> (usize, f64) {
    spine
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (i, hypgeom::hyp_dist(v, p).unwrap_or(f64::INFINITY)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
}

/// Vertex sequence of the tree path from `a` to `b`.
fn tree_path(spine: &MarkedSpine, a: usize, b: usize) -> Vec<usize> {
    let n = spine.vertices.len();
    let mut prev = vec![usize::MAX; n];
    let mut stack = vec![a];
    prev[a] = a;
    while let Some(x) = stack.pop() {
        for y in spine.neighbors(x) {
            if prev[y] == usize::MAX {
                prev[y] = x;
                stack.push(y);
            }
        }
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a && prev[cur] != usize::MAX {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn path_distance(spine: &MarkedSpine, path: &[usize], p: &HPoint) -> f64 {
    if path.len() == 1 {
        return hypgeom::hyp_dist(&spine.vertices[path[0]], p).unwrap_or(f64::INFINITY);
    }
    path.windows(2)
        .map(|w| {
            hypgeom::project_segment(p, &spine.vertices[w[0]], &spine.vertices[w[1]])
                .map(|x| x.1)
                .unwrap_or(f64::INFINITY)
        })
        .fold(f64::INFINITY, f64::min)
}
