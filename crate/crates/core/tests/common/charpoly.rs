//! Largest real root of the exact characteristic polynomial: Faddeev–LeVerrier
//! coefficients, squarefree part, Sturm sequence, bisection.

use num::{BigRational, One, Signed, Zero};

type Q = BigRational;
/// Coefficients, constant term first.
type P = Vec<Q>;

fn trim(mut p: P) -> P {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// `det(xI − A)`.
pub fn char_poly(a: &[Vec<Q>]) -> P {
    let n = a.len();
    let mul = |x: &[Vec<Q>], y: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + &x[i][k] * &y[k][j])).collect())
            .collect()
    };
    // M_0 = 0, c_n = 1; M_k = A·M_{k−1} + c_{n−k+1}·I, c_{n−k} = −tr(A·M_k)/k.
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mul(a, &m);
        let tr = (0..n).fold(Q::zero(), |s, i| s + &am[i][i]);
        c[n - k] = -tr / Q::from_integer((k as i64).into());
    }
    c
}

fn deriv(p: &P) -> P {
    p.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer((i as i64).into())).collect()
}

/// Remainder of `a` divided by `b` (`b` nonzero).
fn rem(a: &P, b: &P) -> P {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r = trim(r);
    }
    r
}

fn quot(a: &P, b: &P) -> P {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return vec![];
    }
    let mut q = vec![Q::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r = trim(r);
    }
    trim(q)
}

fn gcd(a: &P, b: &P) -> P {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn eval(p: &P, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn sign_changes(seq: &[P], x: &Q) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Largest real root of `det(xI − A)`, bracketed to width below `tol`.
pub fn largest_real_root(a: &[Vec<Q>], tol: f64) -> f64 {
    let p = char_poly(a);
    let sq = quot(&p, &gcd(&p, &deriv(&p)));
    let mut seq = vec![sq.clone(), deriv(&sq)];
    loop {
        let r = rem(&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    // Cauchy bound on the roots.
    let lead = sq.last().unwrap().abs();
    let bound = Q::one() + sq.iter().take(sq.len() - 1).map(|c| c.abs() / &lead).fold(Q::zero(), |m, c| m.max(c));
    let mut lo = -bound.clone();
    let mut hi = bound;
    // Roots in (x, hi]: changes(x) − changes(hi).
    let above = |x: &Q, hi: &Q, seq: &[P]| sign_changes(seq, x) - sign_changes(seq, hi);
    let width = Q::new(1.into(), 1_000_000_000_000_000i64.into());
    let tol_q = Q::from_float(tol).unwrap().min(width);
    while &hi - &lo > tol_q {
        let mid = (&lo + &hi) / Q::from_integer(2.into());
        if above(&mid, &hi, &seq) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    num::ToPrimitive::to_f64(&((lo + hi) / Q::from_integer(2.into()))).unwrap()
}
