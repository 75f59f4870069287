//! Point clouds sampled around a random tree drawn in the hyperbolic disk.

use std::collections::BTreeSet;

use qpcf::dsu::DisjointSet;
use qpcf::hypgeom::{build_spine, dist_to_radius, hyp_dist, mobius_add, HPoint, MarkedSpine};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATTACH_RADIUS: f64 = 0.25;
pub const SEPARATION: f64 = 5.5;
const CLUSTER_RADIUS: f64 = 0.05;

pub struct Planted {
    pub edges: BTreeSet<(usize, usize)>,
    pub points: Vec<HPoint>,
    pub labels: Vec<usize>,
}

fn offset(at: &HPoint, angle: f64, len: f64) -> HPoint {
    let r = dist_to_radius(len);
    mobius_add(at, &HPoint::disk(r * angle.cos(), r * angle.sin()).unwrap())
}

fn direction_angle(from: &HPoint, to: &HPoint) -> f64 {
    let w = mobius_add(&from.neg(), to);
    w.y().atan2(w.x())
}

pub fn random_template(rng: &mut impl Rng, max_vertices: usize) -> Planted {
    let n = rng.gen_range(2..=max_vertices);
    let mut adj = vec![Vec::new(); n];
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let p = rng.gen_range(0..v);
        adj[p].push(v);
        adj[v].push(p);
        edges.insert((p, v));
    }
    // Root at a centre vertex so the drawing stays within f64 reach.
    let ecc = |s: usize| {
        let mut depth = vec![usize::MAX; n];
        depth[s] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        depth.into_iter().max().unwrap()
    };
    let root = (0..n).min_by_key(|&v| ecc(v)).unwrap();
    let mut pos = vec![HPoint::origin(qpcf::hypgeom::Model::Disk); n];
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    while let Some(x) = stack.pop() {
        let children: Vec<usize> = adj[x].iter().copied().filter(|&y| !seen[y]).collect();
        let base = if parent[x] == usize::MAX {
            rng.gen_range(0.0..std::f64::consts::TAU)
        } else {
            direction_angle(&pos[x], &pos[parent[x]])
        };
        let slots = children.len() + usize::from(parent[x] != usize::MAX);
        let step = std::f64::consts::TAU / slots as f64;
        let first = usize::from(parent[x] != usize::MAX);
        for (k, &c) in children.iter().enumerate() {
            let jitter = rng.gen_range(-0.15..0.15) * step;
            pos[c] = offset(&pos[x], base + step * (k + first) as f64 + jitter, SEPARATION);
            parent[c] = x;
            seen[c] = true;
            stack.push(c);
        }
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (v, p) in pos.iter().enumerate() {
        points.push(*p);
        labels.push(v);
        for _ in 0..rng.gen_range(0..3) {
            let q = offset(p, rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(0.01..CLUSTER_RADIUS));
            points.push(q);
            labels.push(v);
        }
    }
    // Shuffle input order; the construction must not depend on it.
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.shuffle(rng);
    Planted {
        edges,
        points: idx.iter().map(|&i| points[i]).collect(),
        labels: idx.iter().map(|&i| labels[i]).collect(),
    }
}

/// Contracts spine edges shorter than half the separation and reads off the
/// tree on cluster labels. `None` when a contracted blob mixes or lacks labels.
pub fn recovered_edges(spine: &MarkedSpine, labels: &[usize]) -> Option<BTreeSet<(usize, usize)>> {
    let n = spine.vertices.len();
    let mut dsu = DisjointSet::new(n);
    for (e, &(a, b)) in spine.edges.iter().enumerate() {
        if spine.edge_length(e) < SEPARATION / 2.0 {
            dsu.union(a, b);
        }
    }
    let mut label_of = vec![None; n];
    for (i, &v) in spine.input_map.iter().enumerate() {
        let r = dsu.find(v);
        match label_of[r] {
            None => label_of[r] = Some(labels[i]),
            Some(l) if l != labels[i] => return None,
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    for (e, &(a, b)) in spine.edges.iter().enumerate() {
        if spine.edge_length(e) >= SEPARATION / 2.0 {
            let (la, lb) = (label_of[dsu.find(a)]?, label_of[dsu.find(b)]?);
            out.insert((la.min(lb), la.max(lb)));
        }
    }
    Some(out)
}

pub fn recovers(rng: &mut impl Rng) -> bool {
    let t = random_template(rng, 6);
    for i in 0..t.points.len() {
        for j in i + 1..t.points.len() {
            assert!(hyp_dist(&t.points[i], &t.points[j]).unwrap() > 1e-9);
        }
    }
    let spine = build_spine(&t.points, ATTACH_RADIUS).expect("spine");
    spine.is_tree() && recovered_edges(&spine, &t.labels).as_ref() == Some(&t.edges)
}
