//! Nonnegative solutions of `(M − D)v = 0` by support enumeration: one exists
//! iff some column subset has a one-dimensional kernel spanned by a strictly
//! positive vector.

use num::{BigRational, One, Signed, Zero};

type Q = BigRational;

/// Kernel basis of `a` (rows × cols) by reduced row echelon form.
pub fn kernel(a: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..cols {
                    let sub = &f * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

/// Some strictly positive kernel vector on a support, if any support has one.
pub fn nonnegative_eigenvector(m: &[Vec<u8>], d: &[u32]) -> Option<Vec<Q>> {
    let n = d.len();
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let a: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                support
                    .iter()
                    .map(|&j| {
                        let diag = if i == j { Q::from_integer((d[i] as i64).into()) } else { Q::zero() };
                        Q::from_integer((m[i][j] as i64).into()) - diag
                    })
                    .collect()
            })
            .collect();
        let k = kernel(&a, support.len());
        if k.len() != 1 {
            continue;
        }
        let v = &k[0];
        let sign = if v[0].is_negative() { -Q::one() } else { Q::one() };
        if v.iter().all(|x| (x * &sign).is_positive()) {
            let mut full = vec![Q::zero(); n];
            for (x, &j) in v.iter().zip(&support) {
                full[j] = x * &sign;
            }
            return Some(full);
        }
    }
    None
}
