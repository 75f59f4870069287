//! Markov and degree matrices of a tree map, the exact eigenproblem
//! `Mv = Dv`, and Perron roots of nonnegative matrices.

use num::{One, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::rational::{feasible_point, mat_vec, q, Q};
use super::ribbon::{RibbonTreeMap, TreeError};

/// `m[i][j] = 1` iff edge `i` lies on `F(edge j)`; `d[i] = δ(edge i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMatrices {
    pub m: Vec<Vec<u8>>,
    pub d: Vec<u32>,
    /// Original edge ids, in matrix index order.
    pub edges: Vec<usize>,
}

impl EdgeMatrices {
    pub fn new(m: Vec<Vec<u8>>, d: Vec<u32>) -> Result<Self, TreeError> {
        let n = d.len();
        if m.len() != n {
            return Err(TreeError::DimensionMismatch(m.len(), n));
        }
        if let Some(row) = m.iter().find(|r| r.len() != n) {
            return Err(TreeError::DimensionMismatch(row.len(), n));
        }
        if m.iter().flatten().any(|&x| x > 1) {
            return Err(TreeError::NotNonnegative);
        }
        if let Some(i) = d.iter().position(|&x| x == 0) {
            return Err(TreeError::ZeroDegree(i));
        }
        Ok(EdgeMatrices { m, d, edges: (0..n).collect() })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn m_rational(&self) -> Vec<Vec<Q>> {
        self.m.iter().map(|r| r.iter().map(|&x| q(x as i64)).collect()).collect()
    }

    /// `D⁻¹M`.
    pub fn d_inv_m(&self) -> Vec<Vec<Q>> {
        self.m
            .iter()
            .zip(&self.d)
            .map(|(r, &d)| r.iter().map(|&x| Q::new((x as i64).into(), (d as i64).into())).collect())
            .collect()
    }
}

pub fn markov_degree_matrices(t: &RibbonTreeMap) -> Result<EdgeMatrices, TreeError> {
    let n = t.num_edges();
    let mut m = vec![vec![0u8; n]; n];
    for j in 0..n {
        for i in t.image_path(j).ok_or(TreeError::NotSimplicial(j))? {
            m[i][j] = 1;
        }
    }
    let d = (0..n).map(|e| t.edge_degree(e)).collect();
    Ok(EdgeMatrices { m, d, edges: (0..n).collect() })
}

/// A nonzero `v ≥ 0` with `Mv = Dv` exactly, scaled to max entry 1.
pub fn solve_eigen_md(e: &EdgeMatrices) -> Option<Vec<Q>> {
    let n = e.len();
    if n == 0 {
        return None;
    }
    let mut a: Vec<Vec<Q>> = e.m_rational();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= q(e.d[i] as i64);
    }
    a.push(vec![Q::one(); n]);
    let mut b = vec![Q::zero(); n];
    b.push(Q::one());
    let v = feasible_point(&a, &b)?;
    let max = v.iter().max().cloned()?;
    Some(v.into_iter().map(|x| x / &max).collect())
}

/// Exact check of `Mv = Dv`.
pub fn is_md_eigenvector(e: &EdgeMatrices, v: &[Q]) -> bool {
    let mv = mat_vec(&e.m_rational(), v);
    v.len() == e.len() && mv.iter().zip(v).zip(&e.d).all(|((l, x), &d)| *l == x * q(d as i64))
}

const RHO_TOL: f64 = 1e-12;
const MAX_ITER: usize = 2_000_000;

/// Perron root of a nonnegative square matrix: the largest Perron root over
/// its irreducible blocks, each by shifted power iteration from the all-ones
/// vector, stopped when the Collatz–Wielandt bracket closes.
pub fn spectral_radius(a: &[Vec<f64>]) -> Result<f64, TreeError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n || r.iter().any(|x| !x.is_finite() || *x < 0.0)) {
        return Err(TreeError::NotNonnegative);
    }
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if a[i][j] > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut rho: f64 = 0.0;
    for comp in tarjan_scc(&g) {
        let idx: Vec<usize> = comp.iter().map(|x| x.index()).collect();
        let r = if idx.len() == 1 {
            a[idx[0]][idx[0]]
        } else {
            let block: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
            irreducible_radius(&block)
        };
        rho = rho.max(r);
    }
    Ok(rho)
}

pub fn spectral_radius_rational(a: &[Vec<Q>]) -> Result<f64, TreeError> {
    let f: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    spectral_radius(&f)
}

fn irreducible_radius(b: &[Vec<f64>]) -> f64 {
    let k = b.len();
    let mut x = vec![1.0; k];
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    // The shift breaks periodicity; re-centring it on the current estimate
    // keeps the contraction rate away from 1.
    let mut shift = b.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
    for it in 0..MAX_ITER {
        let y: Vec<f64> = b.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let (mut rlo, mut rhi) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            let r = yi / xi;
            rlo = rlo.min(r);
            rhi = rhi.max(r);
        }
        lo = lo.max(rlo);
        hi = hi.min(rhi);
        if hi - lo <= RHO_TOL * hi.max(1.0) {
            break;
        }
        if it % 64 == 63 {
            shift = 0.5 * (lo + hi);
        }
        let mut next: Vec<f64> = y.iter().zip(&x).map(|(yi, xi)| yi + shift * xi).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|v| *v /= norm);
        x = next;
    }
    0.5 * (lo + hi)
}

/// Whether `A ≥ D⁻¹M` entrywise. When it holds and `Mv = Dv` has a
/// nonnegative solution, the Perron root of `A` is at least 1; that
/// consequence is re-checked numerically.
pub fn compare_bound(a: &[Vec<Q>], e: &EdgeMatrices) -> Result<bool, TreeError> {
    let n = e.len();
    if a.len() != n {
        return Err(TreeError::DimensionMismatch(a.len(), n));
    }
    if let Some(r) = a.iter().find(|r| r.len() != n) {
        return Err(TreeError::DimensionMismatch(r.len(), n));
    }
    let lower = e.d_inv_m();
    let dominates = a.iter().flatten().zip(lower.iter().flatten()).all(|(x, y)| x >= y);
    if dominates && solve_eigen_md(e).is_some() {
        let lambda = spectral_radius_rational(a)?;
        assert!(lambda >= 1.0 - 1e-9, "Perron root {lambda} below 1 despite A ≥ D⁻¹M and Mv = Dv");
    }
    Ok(dominates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn em(m: Vec<Vec<u8>>, d: Vec<u32>) -> EdgeMatrices {
        EdgeMatrices::new(m, d).unwrap()
    }

    #[test]
    fn matrices_of_small_maps() {
        let fixed = RibbonTreeMap::single_tree(2, vec![(0, 1)], vec![0, 1], vec![1, 1], vec![1], 1).unwrap();
        assert_eq!(markov_degree_matrices(&fixed).unwrap(), em(vec![vec![1]], vec![1]));
        // Reversal of the path 0—1—2 swaps its edges.
        let swap = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2)], vec![2, 1, 0], vec![1; 3], vec![1, 1], 1).unwrap();
        assert_eq!(markov_degree_matrices(&swap).unwrap().m, vec![vec![0, 1], vec![1, 0]]);
        // E1 = (0,1) ↦ (0,2) = E1 ∪ E2, E2 = (1,2) ↦ (2,1).
        let cover = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2)], vec![0, 2, 1], vec![1; 3], vec![2, 1], 1).unwrap();
        assert_eq!(markov_degree_matrices(&cover).unwrap(), em(vec![vec![1, 0], vec![1, 1]], vec![2, 1]));
    }

    #[test]
    fn eigen_examples() {
        assert_eq!(solve_eigen_md(&em(vec![vec![1]], vec![1])), Some(vec![q(1)]));
        assert_eq!(solve_eigen_md(&em(vec![vec![1, 0], vec![1, 1]], vec![2, 1])), Some(vec![q(0), q(1)]));
        assert_eq!(solve_eigen_md(&em(vec![vec![0, 1], vec![1, 0]], vec![2, 2])), None);
        let v = solve_eigen_md(&em(vec![vec![0, 1], vec![1, 0]], vec![1, 1])).unwrap();
        assert!(is_md_eigenvector(&em(vec![vec![0, 1], vec![1, 0]], vec![1, 1]), &v));
    }

    #[test]
    fn perron_roots() {
        assert!((spectral_radius(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap() - 1.0).abs() < 1e-12);
        assert!((spectral_radius(&[vec![0.5, 0.0], vec![1.0, 1.0]]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(spectral_radius(&[vec![0.5]]).unwrap(), 0.5);
        assert_eq!(spectral_radius(&[vec![-1.0]]), Err(TreeError::NotNonnegative));
        let golden = spectral_radius(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((golden - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        // Nearly decoupled blocks converge slowly without re-centring the shift.
        let weak = spectral_radius(&[vec![0.0, 1e-6], vec![1e-6, 0.0]]).unwrap();
        assert!((weak - 1e-6).abs() < 1e-15);
    }

    #[test]
    fn bound_comparison() {
        let e = em(vec![vec![1, 0], vec![1, 1]], vec![2, 1]);
        let a = e.d_inv_m();
        assert!(compare_bound(&a, &e).unwrap());
        let mut lower = a.clone();
        lower[1][0] = Q::new(1.into(), 2.into());
        assert!(!compare_bound(&lower, &e).unwrap());
        let mut higher = a.clone();
        higher[0][1] = Q::new(1.into(), 3.into());
        assert!(compare_bound(&higher, &e).unwrap());
        assert!(spectral_radius_rational(&higher).unwrap() >= 1.0);
        assert_eq!(compare_bound(&[vec![q(1)]], &e), Err(TreeError::DimensionMismatch(1, 2)));
    }
}
