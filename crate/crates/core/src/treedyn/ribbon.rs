//! Marked ribbon forests with a self-map: validation, subdivision into a
//! simplicial map, tree paths and boundary circuits.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lamination::LaminationError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(usize),
    #[error("vertex ids must be exactly 0..{0}")]
    VertexGap(usize),
    #[error("tree {0} is not connected and acyclic")]
    NotATree(usize),
    #[error("edge {0} joins vertices of different trees or is a loop")]
    BadEdge(usize),
    #[error("ribbon order at vertex {0} is not a permutation of its incident edges")]
    BadRibbon(usize),
    #[error("F is undefined at vertex {0}")]
    MissingImage(usize),
    #[error("F collapses edge {0}")]
    EdgeCollapsed(usize),
    #[error("F sends tree {0} into more than one tree")]
    TreeMismatch(usize),
    #[error("declared image of edge {0} disagrees with the vertex map")]
    EdgeMapMismatch(usize),
    #[error("degree of vertex or edge {0} is zero")]
    ZeroDegree(usize),
    #[error("tree {tree}: local degrees add up to degree {got}, declared {declared}")]
    DegreeSum { tree: usize, declared: u32, got: u32 },
    #[error("edge {0} does not map onto a single edge")]
    NotSimplicial(usize),
    #[error("anchor of tree {0} is missing or invalid")]
    BadAnchor(usize),
    #[error("anchor of tree {0} is not reached by the image of its own corner")]
    AnchorUnreachable(usize),
    #[error("ribbon data incompatible with F: {0}")]
    ItineraryInconsistent(String),
    #[error("matrix is not square or has negative or non-finite entries")]
    NotNonnegative,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("keep set is empty")]
    EmptyKeep,
    #[error("curve cover is invalid: {0}")]
    BadCover(String),
    #[error(transparent)]
    Lamination(#[from] LaminationError),
}

/// A boundary access: the side `side` (0 = listed direction, 1 = reversed)
/// of `edge`; angle 0 sits in the corner this side enters. `occurrence`
/// picks among several fixed accesses when the corner wraps more than once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub edge: usize,
    pub side: u8,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub occurrence: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

/// One side of an edge, directed `tail → head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

impl Side {
    pub fn index(&self) -> usize {
        2 * self.edge + usize::from(!self.forward)
    }

    pub fn from_index(i: usize) -> Side {
        Side { edge: i / 2, forward: i % 2 == 0 }
    }
}

/// A slot of the boundary circuit: a side, or the corner at `vertex`
/// following `ribbon[vertex][index]` in the cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Side(Side),
    Corner { vertex: usize, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub anchor: Option<Anchor>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonTreeMap {
    edges: Vec<(usize, usize)>,
    trees: Vec<Tree>,
    tree_of: Vec<usize>,
    ribbon: Vec<Vec<usize>>,
    marked: BTreeSet<usize>,
    f: Vec<usize>,
    delta_v: Vec<u32>,
    delta_e: Vec<u32>,
    degree: u32,
    turns: BTreeMap<usize, Vec<u32>>,
    adjacency: HashMap<(usize, usize), usize>,
}

impl RibbonTreeMap {
    /// Single tree on vertices `0..n` with default ribbons and no anchor.
    pub fn single_tree(
        n: usize,
        edges: Vec<(usize, usize)>,
        f: Vec<usize>,
        delta_v: Vec<u32>,
        delta_e: Vec<u32>,
        degree: u32,
    ) -> Result<Self, TreeError> {
        let file = TreeMapFile {
            trees: vec![TreeFile {
                vertices: (0..n).collect(),
                edges: edges.iter().map(|&(a, b)| [a, b]).collect(),
                ribbon: BTreeMap::new(),
                marked: vec![],
                anchor: None,
                degree: None,
            }],
            f: MapFile {
                vertex: f.into_iter().enumerate().collect(),
                edge: BTreeMap::new(),
            },
            delta_v: delta_v.into_iter().enumerate().collect(),
            delta_e: delta_e.into_iter().enumerate().collect(),
            degree,
            turns: BTreeMap::new(),
        };
        file.to_map()
    }

    pub fn num_vertices(&self) -> usize {
        self.f.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn tree_of(&self, v: usize) -> usize {
        self.tree_of[v]
    }

    pub fn ribbon(&self, v: usize) -> &[usize] {
        &self.ribbon[v]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.ribbon[v].len()
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn f(&self, v: usize) -> usize {
        self.f[v]
    }

    pub fn local_degree(&self, v: usize) -> u32 {
        self.delta_v[v]
    }

    pub fn edge_degree(&self, e: usize) -> u32 {
        self.delta_e[e]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn turns(&self, v: usize) -> Option<&[u32]> {
        self.turns.get(&v).map(|t| t.as_slice())
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn tail(&self, s: Side) -> usize {
        let (a, b) = self.edges[s.edge];
        if s.forward {
            a
        } else {
            b
        }
    }

    pub fn head(&self, s: Side) -> usize {
        let (a, b) = self.edges[s.edge];
        if s.forward {
            b
        } else {
            a
        }
    }

    /// Edges of the tree path from `a` to `b`, in order; `None` across trees.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if self.tree_of[a] != self.tree_of[b] {
            return None;
        }
        let mut via: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([a]);
        let mut seen = BTreeSet::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &e in &self.ribbon[v] {
                let w = self.other_end(e, v);
                if seen.insert(w) {
                    via.insert(w, e);
                    queue.push_back(w);
                }
            }
        }
        let mut out = Vec::new();
        let mut v = b;
        while v != a {
            let e = *via.get(&v)?;
            out.push(e);
            v = self.other_end(e, v);
        }
        out.reverse();
        Some(out)
    }

    /// Vertices along the tree path from `a` to `b`, endpoints included.
    pub fn path_vertices(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let edges = self.path(a, b)?;
        let mut out = vec![a];
        for e in edges {
            let next = self.other_end(e, *out.last().unwrap());
            out.push(next);
        }
        Some(out)
    }

    /// The edge path `F(E)`, oriented from `F(tail)` to `F(head)`.
    pub fn image_path(&self, e: usize) -> Option<Vec<usize>> {
        let (a, b) = self.edges[e];
        self.path(self.f[a], self.f[b])
    }

    /// `F(E)` when it is a single edge.
    pub fn edge_image(&self, e: usize) -> Option<usize> {
        let (a, b) = self.edges[e];
        self.edge_between(self.f[a], self.f[b])
    }

    pub fn side_image(&self, s: Side) -> Option<Side> {
        let e = self.edge_image(s.edge)?;
        Some(Side { edge: e, forward: self.edges[e].0 == self.f[self.tail(s)] })
    }

    pub fn is_simplicial(&self) -> bool {
        (0..self.edges.len()).all(|e| self.edge_image(e).is_some())
    }

    /// Subdivides edges until every edge maps onto a single edge; returns the
    /// new map and the vertices added. Fails on edges whose images keep
    /// growing (periodic edges mapping over more than one edge).
    pub fn simplicial(&self) -> Result<(RibbonTreeMap, Vec<usize>), TreeError> {
        let mut t = self.clone();
        let mut added = Vec::new();
        let cap = 64 * (self.num_vertices() + 1);
        loop {
            let Some((e, path)) = (0..t.edges.len()).find_map(|e| {
                let p = t.image_path(e)?;
                (p.len() > 1).then_some((e, p))
            }) else {
                return Ok((t, added));
            };
            if t.num_vertices() + path.len() > cap {
                return Err(TreeError::NotSimplicial(e));
            }
            let (a, _) = t.edges[e];
            let ws = t.path_vertices(t.f[a], t.f[t.edges[e].1]).expect("image path exists");
            added.extend(t.subdivide(e, &ws[1..ws.len() - 1]));
        }
    }

    /// Splits edge `e = (a, b)` into `images.len() + 1` edges through new
    /// vertices mapping to `images`; `e` keeps the segment at `a`.
    fn subdivide(&mut self, e: usize, images: &[usize]) -> Vec<usize> {
        let (a, b) = self.edges[e];
        let tree = self.tree_of[a];
        let first_new = self.num_vertices();
        let new_vertices: Vec<usize> = (first_new..first_new + images.len()).collect();
        let mut chain = vec![a];
        chain.extend(&new_vertices);
        chain.push(b);
        for (&v, &img) in new_vertices.iter().zip(images) {
            self.f.push(img);
            self.delta_v.push(1);
            self.tree_of.push(tree);
            self.ribbon.push(Vec::new());
            self.trees[tree].vertices.push(v);
        }
        let mut segs = vec![e];
        for _ in 1..chain.len() - 1 {
            segs.push(self.edges.len());
            self.edges.push((0, 0));
            self.delta_e.push(self.delta_e[e]);
            self.trees[tree].edges.push(*segs.last().unwrap());
        }
        self.adjacency.remove(&(a.min(b), a.max(b)));
        for (k, &s) in segs.iter().enumerate() {
            let (u, w) = (chain[k], chain[k + 1]);
            self.edges[s] = (u, w);
            self.adjacency.insert((u.min(w), u.max(w)), s);
        }
        for (k, &v) in new_vertices.iter().enumerate() {
            self.ribbon[v] = vec![segs[k], segs[k + 1]];
        }
        let last = *segs.last().unwrap();
        for slot in self.ribbon[b].iter_mut() {
            if *slot == e {
                *slot = last;
            }
        }
        if let Some(anchor) = self.trees[tree].anchor.as_mut() {
            if anchor.edge == e && anchor.side == 0 {
                anchor.edge = last;
            }
        }
        new_vertices
    }

    /// Boundary circuit of a tree, starting with its anchor side (or the
    /// forward side of its first edge). Arriving at `v` along `e`, the walk
    /// turns to the successor of `e` in the cyclic order at `v`.
    pub fn circuit(&self, tree: usize) -> Vec<Slot> {
        let t = &self.trees[tree];
        let Some(&first) = t.edges.first() else {
            return Vec::new();
        };
        let start = match t.anchor {
            Some(a) => Side { edge: a.edge, forward: a.side == 0 },
            None => Side { edge: first, forward: true },
        };
        let mut out = Vec::with_capacity(4 * t.edges.len());
        let mut s = start;
        loop {
            out.push(Slot::Side(s));
            let v = self.head(s);
            let pos = self.ribbon[v].iter().position(|&x| x == s.edge).expect("ribbon lists incident edges");
            out.push(Slot::Corner { vertex: v, index: pos });
            let next = self.ribbon[v][(pos + 1) % self.ribbon[v].len()];
            s = Side { edge: next, forward: self.edges[next].0 == v };
            if s == start {
                return out;
            }
        }
    }

    pub fn to_file(&self) -> TreeMapFile {
        TreeMapFile {
            trees: self
                .trees
                .iter()
                .map(|t| TreeFile {
                    vertices: t.vertices.clone(),
                    edges: t.edges.iter().map(|&e| [self.edges[e].0, self.edges[e].1]).collect(),
                    ribbon: t.vertices.iter().map(|&v| (v, self.ribbon[v].clone())).collect(),
                    marked: t.vertices.iter().copied().filter(|v| self.marked.contains(v)).collect(),
                    anchor: t.anchor,
                    degree: (t.degree != self.degree).then_some(t.degree),
                })
                .collect(),
            f: MapFile {
                vertex: self.f.iter().copied().enumerate().collect(),
                edge: (0..self.edges.len()).filter_map(|e| Some((e, self.edge_image(e)?))).collect(),
            },
            delta_v: self.delta_v.iter().copied().enumerate().filter(|x| x.1 != 1).collect(),
            delta_e: self.delta_e.iter().copied().enumerate().filter(|x| x.1 != 1).collect(),
            degree: self.degree,
            turns: self.turns.clone(),
        }
    }
}

/// JSON form. Edges are numbered globally in listing order across trees;
/// `ribbon` lists incident edges counterclockwise (defaults to index order);
/// missing degrees default to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeMapFile {
    pub trees: Vec<TreeFile>,
    #[serde(rename = "F")]
    pub f: MapFile,
    #[serde(default)]
    pub delta_v: BTreeMap<usize, u32>,
    #[serde(default)]
    pub delta_e: BTreeMap<usize, u32>,
    pub degree: u32,
    /// Extra full turns per corner at critical vertices; by default all
    /// extra turns sit in the corner after the first edge in the ribbon.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub turns: BTreeMap<usize, Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub ribbon: BTreeMap<usize, Vec<usize>>,
    #[serde(default)]
    pub marked: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Anchor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub vertex: BTreeMap<usize, usize>,
    #[serde(default)]
    pub edge: BTreeMap<usize, usize>,
}

impl TreeMapFile {
    pub fn to_map(&self) -> Result<RibbonTreeMap, TreeError> {
        let n: usize = self.trees.iter().map(|t| t.vertices.len()).sum();
        let mut tree_of = vec![usize::MAX; n];
        for (ti, t) in self.trees.iter().enumerate() {
            for &v in &t.vertices {
                if v >= n {
                    return Err(TreeError::VertexGap(n));
                }
                if tree_of[v] != usize::MAX {
                    return Err(TreeError::DuplicateVertex(v));
                }
                tree_of[v] = ti;
            }
        }
        let mut edges = Vec::new();
        let mut trees = Vec::new();
        let mut adjacency = HashMap::new();
        for (ti, t) in self.trees.iter().enumerate() {
            let mut ids = Vec::new();
            for &[a, b] in &t.edges {
                let e = edges.len();
                if a >= n || b >= n {
                    return Err(TreeError::UnknownVertex(a.max(b)));
                }
                if a == b || tree_of[a] != ti || tree_of[b] != ti {
                    return Err(TreeError::BadEdge(e));
                }
                if adjacency.insert((a.min(b), a.max(b)), e).is_some() {
                    return Err(TreeError::NotATree(ti));
                }
                edges.push((a, b));
                ids.push(e);
            }
            if ids.len() + 1 != t.vertices.len() {
                return Err(TreeError::NotATree(ti));
            }
            trees.push(Tree {
                vertices: t.vertices.clone(),
                edges: ids,
                anchor: t.anchor,
                degree: t.degree.unwrap_or(self.degree),
            });
        }

        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &(a, b)) in edges.iter().enumerate() {
            incident[a].push(e);
            incident[b].push(e);
        }
        let mut ribbon = incident.clone();
        for t in &self.trees {
            for (&v, order) in &t.ribbon {
                if v >= n {
                    return Err(TreeError::UnknownVertex(v));
                }
                let mut a = order.clone();
                let mut b = incident[v].clone();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Err(TreeError::BadRibbon(v));
                }
                ribbon[v] = order.clone();
            }
        }

        let mut f = vec![0; n];
        for (v, slot) in f.iter_mut().enumerate() {
            *slot = *self.f.vertex.get(&v).ok_or(TreeError::MissingImage(v))?;
            if *slot >= n {
                return Err(TreeError::UnknownVertex(*slot));
            }
        }
        let mut delta_v = vec![1; n];
        for (&v, &d) in &self.delta_v {
            *delta_v.get_mut(v).ok_or(TreeError::UnknownVertex(v))? = d;
        }
        let mut delta_e = vec![1; edges.len()];
        for (&e, &d) in &self.delta_e {
            *delta_e.get_mut(e).ok_or(TreeError::UnknownEdge(e))? = d;
        }
        let mut marked = BTreeSet::new();
        for t in &self.trees {
            for &v in &t.marked {
                if v >= n {
                    return Err(TreeError::UnknownVertex(v));
                }
                marked.insert(v);
            }
        }
        for (&v, _) in &self.turns {
            if v >= n {
                return Err(TreeError::UnknownVertex(v));
            }
        }

        let map = RibbonTreeMap {
            edges,
            trees,
            tree_of,
            ribbon,
            marked,
            f,
            delta_v,
            delta_e,
            degree: self.degree,
            turns: self.turns.clone(),
            adjacency,
        };
        map.validate()?;
        for (&e, &img) in &self.f.edge {
            if e >= map.num_edges() {
                return Err(TreeError::UnknownEdge(e));
            }
            if map.edge_image(e) != Some(img) {
                return Err(TreeError::EdgeMapMismatch(e));
            }
        }
        Ok(map)
    }
}

impl RibbonTreeMap {
    fn validate(&self) -> Result<(), TreeError> {
        for (ti, t) in self.trees.iter().enumerate() {
            // |E| = |V| − 1 is checked on input; connectivity finishes the tree test.
            if let Some(&root) = t.vertices.first() {
                if t.vertices.iter().any(|&v| self.path(root, v).is_none()) {
                    return Err(TreeError::NotATree(ti));
                }
                let target = self.tree_of[self.f[root]];
                if t.vertices.iter().any(|&v| self.tree_of[self.f[v]] != target) {
                    return Err(TreeError::TreeMismatch(ti));
                }
            }
            if let Some(a) = t.anchor {
                if !t.edges.contains(&a.edge) || a.side > 1 {
                    return Err(TreeError::BadAnchor(ti));
                }
            }
            let got = 1 + t.vertices.iter().map(|&v| self.delta_v[v].saturating_sub(1)).sum::<u32>();
            if got != t.degree {
                return Err(TreeError::DegreeSum { tree: ti, declared: t.degree, got });
            }
        }
        if let Some(v) = self.delta_v.iter().position(|&d| d == 0) {
            return Err(TreeError::ZeroDegree(v));
        }
        if let Some(e) = self.delta_e.iter().position(|&d| d == 0) {
            return Err(TreeError::ZeroDegree(e));
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if self.f[a] == self.f[b] {
                return Err(TreeError::EdgeCollapsed(e));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Two vertices swapped, the critical one being vertex 0.
    pub fn basilica() -> RibbonTreeMap {
        serde_json::from_value::<TreeMapFile>(serde_json::json!({
            "trees": [{"vertices": [0, 1], "edges": [[0, 1]], "marked": [0, 1],
                       "anchor": {"edge": 0, "side": 1}}],
            "F": {"vertex": {"0": 1, "1": 0}},
            "delta_v": {"0": 2},
            "degree": 2
        }))
        .unwrap()
        .to_map()
        .unwrap()
    }

    /// Branch point 3 fixed, rotating the legs to the critical 3-cycle 0 → 1 → 2.
    pub fn rabbit() -> RibbonTreeMap {
        serde_json::from_value::<TreeMapFile>(serde_json::json!({
            "trees": [{"vertices": [0, 1, 2, 3], "edges": [[3, 0], [3, 1], [3, 2]],
                       "ribbon": {"3": [0, 1, 2]}, "marked": [0, 1, 2],
                       "anchor": {"edge": 0, "side": 0}}],
            "F": {"vertex": {"0": 1, "1": 2, "2": 0, "3": 3}},
            "delta_v": {"0": 2},
            "degree": 2
        }))
        .unwrap()
        .to_map()
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn circuit_visits_each_side_once() {
        let t = rabbit();
        let c = t.circuit(0);
        assert_eq!(c.len(), 12);
        let sides: BTreeSet<Side> = c
            .iter()
            .filter_map(|s| match s {
                Slot::Side(x) => Some(*x),
                _ => None,
            })
            .collect();
        assert_eq!(sides.len(), 6);
        assert_eq!(c[0], Slot::Side(Side { edge: 0, forward: true }));
    }

    #[test]
    fn rejects_malformed_maps() {
        let collapse = RibbonTreeMap::single_tree(2, vec![(0, 1)], vec![0, 0], vec![1, 1], vec![1], 1);
        assert_eq!(collapse, Err(TreeError::EdgeCollapsed(0)));
        let cyc = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2), (2, 0)], vec![0, 1, 2], vec![1; 3], vec![1; 3], 1);
        assert_eq!(cyc, Err(TreeError::NotATree(0)));
        let deg = RibbonTreeMap::single_tree(2, vec![(0, 1)], vec![1, 0], vec![2, 1], vec![1], 3);
        assert!(matches!(deg, Err(TreeError::DegreeSum { got: 2, .. })));
    }

    #[test]
    fn subdivision_makes_the_map_simplicial() {
        let t = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2)], vec![0, 2, 2], vec![1; 3], vec![1, 1], 1);
        assert!(matches!(t, Err(TreeError::EdgeCollapsed(1))));
        let t = RibbonTreeMap::single_tree(4, vec![(0, 1), (1, 2), (2, 3)], vec![3, 2, 1, 0], vec![1; 4], vec![1; 3], 1)
            .unwrap();
        assert!(t.is_simplicial());
        // A pendant edge at a fixed vertex whose far end maps two steps away.
        let t = RibbonTreeMap::single_tree(4, vec![(0, 1), (1, 2), (3, 0)], vec![0, 1, 2, 2], vec![1; 4], vec![1; 3], 1)
            .unwrap();
        assert!(!t.is_simplicial());
        let (s, added) = t.simplicial().unwrap();
        assert_eq!(added, vec![4]);
        assert!(s.is_simplicial());
        assert_eq!(s.f(4), 1);
        assert_eq!(s.num_edges(), 4);
    }

    #[test]
    fn periodic_expansion_cannot_be_subdivided() {
        // 0 fixed and 1 ↦ 2: the edge at 0 keeps covering itself and more.
        let grow = RibbonTreeMap::single_tree(3, vec![(0, 1), (1, 2)], vec![0, 2, 1], vec![1; 3], vec![1, 1], 1).unwrap();
        assert!(matches!(grow.simplicial(), Err(TreeError::NotSimplicial(_))));
    }

    #[test]
    fn file_round_trip() {
        let t = rabbit();
        let f = t.to_file();
        let json = serde_json::to_string(&f).unwrap();
        let back: TreeMapFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_map().unwrap(), t);
    }
}
