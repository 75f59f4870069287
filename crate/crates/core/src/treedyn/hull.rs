//! Convex hulls of vertex sets and their reduced edge matrices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::matrices::EdgeMatrices;
use super::ribbon::{RibbonTreeMap, TreeError};

/// An edge of the reduced tree: a chain of original edges between two
/// retained vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedEdge {
    pub ends: (usize, usize),
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedTree {
    pub vertices: BTreeSet<usize>,
    pub edges: Vec<ReducedEdge>,
    pub matrices: EdgeMatrices,
}

/// Smallest subforest containing `keep` (one hull per tree touched). Hull
/// vertices of valence 2 are suppressed unless kept, marked, between edges
/// of different degree, or the image of a retained vertex.
pub fn convex_hull_subtree(t: &RibbonTreeMap, keep: &BTreeSet<usize>) -> Result<ReducedTree, TreeError> {
    if keep.is_empty() {
        return Err(TreeError::EmptyKeep);
    }
    if let Some(&v) = keep.iter().find(|&&v| v >= t.num_vertices()) {
        return Err(TreeError::UnknownVertex(v));
    }
    let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
    let mut hull_v: BTreeSet<usize> = BTreeSet::new();
    let mut hull_e: BTreeSet<usize> = BTreeSet::new();
    for &k in keep {
        let root = *roots.entry(t.tree_of(k)).or_insert(k);
        hull_v.extend(t.path_vertices(root, k).expect("same tree"));
        hull_e.extend(t.path(root, k).expect("same tree"));
    }
    let hull_edges_at = |v: usize| -> Vec<usize> { t.ribbon(v).iter().copied().filter(|e| hull_e.contains(e)).collect() };

    let mut retained: BTreeSet<usize> = hull_v
        .iter()
        .copied()
        .filter(|&v| {
            let es = hull_edges_at(v);
            keep.contains(&v)
                || t.marked().contains(&v)
                || es.len() != 2
                || t.edge_degree(es[0]) != t.edge_degree(es[1])
        })
        .collect();
    loop {
        let images: Vec<usize> = retained.iter().map(|&v| t.f(v)).filter(|w| hull_v.contains(w)).collect();
        let before = retained.len();
        retained.extend(images);
        if retained.len() == before {
            break;
        }
    }

    let mut edges = Vec::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for &u in &retained {
        for e0 in hull_edges_at(u) {
            if used.contains(&e0) {
                continue;
            }
            let mut path = vec![e0];
            let mut v = t.other_end(e0, u);
            while !retained.contains(&v) {
                let next = hull_edges_at(v).into_iter().find(|&e| e != *path.last().unwrap()).expect("valence 2");
                path.push(next);
                v = t.other_end(next, v);
            }
            used.extend(&path);
            edges.push(ReducedEdge { ends: (u, v), path });
        }
    }

    let n = edges.len();
    let mut m = vec![vec![0u8; n]; n];
    for (j, ej) in edges.iter().enumerate() {
        let image: BTreeSet<usize> = t
            .path(t.f(ej.ends.0), t.f(ej.ends.1))
            .ok_or(TreeError::NotSimplicial(ej.path[0]))?
            .into_iter()
            .collect();
        for (i, ei) in edges.iter().enumerate() {
            if ei.path.iter().all(|e| image.contains(e)) {
                m[i][j] = 1;
            }
        }
    }
    let d = edges.iter().map(|e| t.edge_degree(e.path[0])).collect();
    Ok(ReducedTree {
        vertices: retained,
        matrices: EdgeMatrices { m, d, edges: (0..n).collect() },
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedyn::matrices::markov_degree_matrices;
    use crate::treedyn::ribbon::fixtures::rabbit;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn keeping_everything_returns_the_tree() {
        let t = rabbit();
        let r = convex_hull_subtree(&t, &set(&[0, 1, 2, 3])).unwrap();
        assert_eq!(r.vertices, set(&[0, 1, 2, 3]));
        assert_eq!(r.edges.len(), 3);
        let full = markov_degree_matrices(&t).unwrap();
        // Same edges, possibly listed in another order.
        let order: Vec<usize> = r.edges.iter().map(|e| e.path[0]).collect();
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                assert_eq!(r.matrices.m[i][j], full.m[a][b]);
            }
        }
    }

    #[test]
    fn path_and_star() {
        // Reversing 0—1—2: the middle vertex is suppressed.
        let p = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2)], vec![2, 1, 0], vec![1; 3], vec![1, 1], 1).unwrap();
        let r = convex_hull_subtree(&p, &set(&[0, 2])).unwrap();
        assert_eq!(r.vertices, set(&[0, 2]));
        // 0 ↦ 1 keeps the middle vertex as a subdivision point.
        let p = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2)], vec![1, 2, 1], vec![1; 3], vec![1, 1], 1).unwrap();
        let r = convex_hull_subtree(&p, &set(&[0, 2])).unwrap();
        assert_eq!(r.vertices, set(&[0, 1, 2]));
        let q = RibbonTreeMap::single_tree(4, vec![(0, 1), (1, 2), (2, 3)], vec![3, 2, 1, 0], vec![1; 4], vec![1; 3], 1)
            .unwrap();
        let r = convex_hull_subtree(&q, &set(&[0, 3])).unwrap();
        assert_eq!(r.vertices, set(&[0, 3]));
        assert_eq!(r.edges, vec![ReducedEdge { ends: (0, 3), path: vec![0, 1, 2] }]);
        assert_eq!(r.matrices.m, vec![vec![1]]);

        let star = rabbit();
        let r = convex_hull_subtree(&star, &set(&[0, 1])).unwrap();
        assert_eq!(r.vertices, set(&[0, 1]));
        assert_eq!(r.edges, vec![ReducedEdge { ends: (0, 1), path: vec![0, 1] }]);
    }

    #[test]
    fn empty_keep() {
        assert_eq!(convex_hull_subtree(&rabbit(), &BTreeSet::new()), Err(TreeError::EmptyKeep));
    }
}
