//! Independent references for boundary markings.

use std::f64::consts::PI;

use num::complex::Complex64;

/// Fixed point of `f` on the circle continued from `1` along `a ↦ s·a`,
/// tracked by bisection on the phase of `f(z)/z`; independent of the lift.
pub fn continued_fixed_point(a: Complex64) -> Complex64 {
    let phase = |s: f64, x: f64| {
        let z = Complex64::from_polar(1.0, 2.0 * PI * x);
        let f = z * (z - a * s) / (1.0 - (a * s).conj() * z);
        (f / z).arg()
    };
    let mut x = 0.0;
    let steps = 200;
    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        let (mut lo, mut hi) = (x - 0.1, x + 0.1);
        // phase(x) − 2π·0 changes sign across the fixed point (f/z = 1 there).
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if phase(s, lo).signum() == phase(s, mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        x = 0.5 * (lo + hi);
    }
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Reduced fractions `p/q ∈ [0,1)` with `q ≤ max_den`, in increasing order.
pub fn all_angles(max_den: u64) -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for q in 1..=max_den {
        for p in 0..q {
            if num::integer::gcd(p, q) == 1 {
                v.push((p, q));
            }
        }
    }
    v.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    v
}
