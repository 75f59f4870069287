//! Dense complex polynomials (ascending coefficients) and a root finder:
//! companion-matrix eigenvalues, Newton polishing, multiplicity clustering.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("root finding did not converge for a degree-{0} polynomial")]
    RootFindingFailed(usize),
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
}

/// Distance below which numerically computed roots are merged.
pub const ROOT_CLUSTER_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    c: Vec<Complex64>,
}

impl Poly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut c: Vec<Complex64>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn real(c: &[f64]) -> Self {
        Poly::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(a: Complex64) -> Self {
        Poly::new(vec![a])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Complex64::zero(); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Poly { c }
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Poly::constant(Complex64::new(1.0, 0.0)), |p, r| {
            p.mul(&Poly::new(vec![-r, Complex64::new(1.0, 0.0)]))
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::zero(), |acc, a| acc * z + a)
    }

    pub fn deriv(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut c = vec![Complex64::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.c.get(k).copied().unwrap_or_default() + o.c.get(k).copied().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.c.iter().map(|a| a * s).collect())
    }

    /// Coefficients of `z^deg · p(1/z)` for a nominal degree `deg ≥ degree()`.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut c = vec![Complex64::zero(); deg + 1];
        for (k, a) in self.c.iter().enumerate() {
            c[deg - k] = *a;
        }
        Poly::new(c)
    }

    fn max_abs_coeff(&self) -> f64 {
        self.c.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Drops leading coefficients that are negligible relative to the largest.
    pub fn trimmed(&self, rel: f64) -> Poly {
        let m = self.max_abs_coeff();
        let mut c = self.c.clone();
        while c.last().is_some_and(|x| x.norm() <= rel * m) {
            c.pop();
        }
        Poly::new(c)
    }

    /// All roots with multiplicity, as `degree()` complex numbers.
    pub fn roots(&self) -> Result<Vec<Complex64>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let n = self.degree();
        if n == 0 {
            return Ok(vec![]);
        }
        // Factor out exact roots at 0 first; the eigen-solver handles the rest.
        let zeros_at_origin = self.c.iter().take_while(|a| a.is_zero()).count();
        let core = Poly::new(self.c[zeros_at_origin..].to_vec());
        let mut roots = vec![Complex64::zero(); zeros_at_origin];
        let m = core.degree();
        if m > 0 {
            let lead = core.c[m];
            let mut comp = DMatrix::<Complex64>::zeros(m, m);
            for i in 1..m {
                comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..m {
                comp[(i, m - 1)] = -core.c[i] / lead;
            }
            let eig = comp
                .schur()
                .eigenvalues()
                .ok_or(PolyError::RootFindingFailed(n))?;
            let raw: Vec<Complex64> = eig.iter().copied().collect();
            if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(PolyError::RootFindingFailed(n));
            }
            roots.extend(polish(&core, raw));
        }
        Ok(roots)
    }

    /// Distinct roots with multiplicities.
    pub fn root_clusters(&self) -> Result<Vec<(Complex64, usize)>, PolyError> {
        Ok(cluster_points(&self.roots()?, ROOT_CLUSTER_TOL))
    }
}

/// Newton polishing, multiplicity-aware: a tight group of `m` eigenvalues is
/// accepted as one root of multiplicity `m` when the first `m − 1`
/// derivatives vanish there; that root is located as the simple root of
/// `p^{(m−1)}`, which f64 can resolve far better than the multiple root itself.
fn polish(p: &Poly, raw: Vec<Complex64>) -> Vec<Complex64> {
    let roots: Vec<Complex64> = raw.into_iter().map(|z| newton(p, z)).collect();
    let groups = cluster_indices(&roots, 1e-3);
    let mut out = Vec::with_capacity(roots.len());
    for g in groups {
        if g.len() == 1 {
            out.push(roots[g[0]]);
            continue;
        }
        let m = g.len();
        let mean = g.iter().map(|&i| roots[i]).sum::<Complex64>() / m as f64;
        let mut derivs = vec![p.clone()];
        for _ in 1..m {
            let next = derivs.last().unwrap().deriv();
            derivs.push(next);
        }
        let z = newton(&derivs[m - 1], mean);
        if derivs[..m].iter().all(|q| relative_value(q, z) < 1e-7) {
            out.extend(std::iter::repeat_n(z, m));
        } else {
            out.extend(g.iter().map(|&i| roots[i]));
        }
    }
    out
}

fn newton(p: &Poly, mut z: Complex64) -> Complex64 {
    let dp = p.deriv();
    for _ in 0..100 {
        let f = p.eval(z);
        let d = dp.eval(z);
        if d.norm() == 0.0 || f.norm() == 0.0 {
            break;
        }
        let next = z - f / d;
        if p.eval(next).norm() >= f.norm() {
            break;
        }
        z = next;
    }
    z
}

/// `|p(z)|` relative to the magnitude of its terms.
fn relative_value(p: &Poly, z: Complex64) -> f64 {
    let scale: f64 = p
        .c
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm() * z.norm().powi(k as i32))
        .sum();
    if scale == 0.0 {
        0.0
    } else {
        p.eval(z).norm() / scale
    }
}

fn cluster_indices(pts: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let mut dsu = crate::dsu::DisjointSet::new(pts.len());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() <= tol {
                dsu.union(i, j);
            }
        }
    }
    dsu.groups()
}

/// Single-linkage clusters with counts; representative is the cluster mean.
pub fn cluster_points(pts: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    cluster_indices(pts, tol)
        .into_iter()
        .map(|g| {
            let mean = g.iter().map(|&i| pts[i]).sum::<Complex64>() / g.len() as f64;
            (mean, g.len())
        })
        .collect()
}
