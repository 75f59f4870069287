//! Exact local degrees of polynomials with Gaussian-rational coefficients:
//! the multiplicity of `x` as a root of `p − p(x)`, by synthetic division.

use num::complex::Complex;
use num::{BigRational, Zero};
use rand::Rng;

pub type G = Complex<BigRational>;

pub fn g(re: i64, im: i64, den: i64) -> G {
    Complex::new(BigRational::new(re.into(), den.into()), BigRational::new(im.into(), den.into()))
}

pub fn to_f64(z: &G) -> num::complex::Complex64 {
    use num::ToPrimitive;
    num::complex::Complex64::new(z.re.to_f64().unwrap(), z.im.to_f64().unwrap())
}

/// Coefficients (constant first) of `c · Π (z − r_i)^{m_i}`.
pub fn expand(c: &G, roots: &[(G, usize)]) -> Vec<G> {
    let mut p = vec![c.clone()];
    for (r, m) in roots {
        for _ in 0..*m {
            let mut next = vec![G::zero(); p.len() + 1];
            for (i, a) in p.iter().enumerate() {
                next[i + 1] += a.clone();
                next[i] -= a * r;
            }
            p = next;
        }
    }
    p
}

fn eval(p: &[G], x: &G) -> G {
    p.iter().rev().fold(G::zero(), |acc, c| acc * x + c)
}

/// Order of vanishing of `p(z) − p(x)` at `z = x`.
pub fn local_degree(p: &[G], x: &G) -> usize {
    let mut q: Vec<G> = p.to_vec();
    q[0] -= eval(p, x);
    let mut k = 0;
    loop {
        // Synthetic division by (z − x): quotient coefficients and remainder.
        let n = q.len() - 1;
        let mut quot = vec![G::zero(); n];
        let mut acc = G::zero();
        for i in (0..=n).rev() {
            acc = acc * x + &q[i];
            if i > 0 {
                quot[i - 1] = acc.clone();
            }
        }
        if !acc.is_zero() || n == 0 {
            return k;
        }
        k += 1;
        q = quot;
    }
}

/// A random fixture: up to 4 distinct roots with multiplicities 1..=3 on a
/// coarse Gaussian-rational grid, and a nonzero leading coefficient.
pub fn random_fixture(rng: &mut impl Rng) -> (G, Vec<(G, usize)>) {
    let count = rng.gen_range(1..=4);
    let mut roots: Vec<(G, usize)> = Vec::new();
    while roots.len() < count {
        let r = g(rng.gen_range(-8..=8), rng.gen_range(-8..=8), 4);
        if roots.iter().all(|(s, _)| *s != r) {
            roots.push((r, rng.gen_range(1..=3)));
        }
    }
    let c = loop {
        let c = g(rng.gen_range(-4..=4), rng.gen_range(-4..=4), 2);
        if !c.is_zero() {
            break c;
        }
    };
    (c, roots)
}
