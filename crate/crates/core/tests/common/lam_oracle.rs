//! Brute-force parallelism: explicit search for alternating cycles of angles.

use std::collections::BTreeMap;

use qpcf::angle::Angle;
use qpcf::lamination::{Lamination, Leaf};
use rand::Rng;

/// Class label of each endpoint, by flooding the leaf graph.
fn classes(l: &Lamination) -> BTreeMap<Angle, usize> {
    let mut adj: BTreeMap<Angle, Vec<Angle>> = BTreeMap::new();
    for leaf in l.leaves() {
        let (a, b) = leaf.endpoints();
        adj.entry(a.clone()).or_default().push(b.clone());
        adj.entry(b.clone()).or_default().push(a.clone());
    }
    let mut label = BTreeMap::new();
    let mut next = 0;
    for start in adj.keys() {
        if label.contains_key(start) {
            continue;
        }
        let mut stack = vec![start.clone()];
        while let Some(x) = stack.pop() {
            if label.insert(x.clone(), next).is_none() {
                stack.extend(adj[&x].iter().cloned());
            }
        }
        next += 1;
    }
    label
}

/// Angles `a_0, b_0, …, a_{k−1}, b_{k−1}`, pairwise distinct, with
/// `a_i ∼₊ b_i` and `−b_i ∼₋ −a_{i+1}` (indices mod k), `k ≥ 1`.
pub fn brute_force_parallel(plus: &Lamination, minus: &Lamination) -> bool {
    let p = classes(plus);
    let m: BTreeMap<Angle, usize> = classes(minus).into_iter().map(|(t, c)| (t.reflect(), c)).collect();
    // Only angles in both supports can sit on a cycle.
    let nodes: Vec<Angle> = p.keys().filter(|t| m.contains_key(*t)).cloned().collect();
    let n = nodes.len();
    let pc: Vec<usize> = nodes.iter().map(|t| p[t]).collect();
    let mc: Vec<usize> = nodes.iter().map(|t| m[t]).collect();

    // DFS over simple alternating paths from each start, closing with a minus step.
    fn dfs(cur: usize, start: usize, plus_step: bool, used: &mut Vec<bool>, pc: &[usize], mc: &[usize]) -> bool {
        for next in 0..pc.len() {
            if next == cur {
                continue;
            }
            let linked = if plus_step { pc[cur] == pc[next] } else { mc[cur] == mc[next] };
            if !linked {
                continue;
            }
            if !plus_step && next == start {
                return true;
            }
            if used[next] {
                continue;
            }
            used[next] = true;
            if dfs(next, start, !plus_step, used, pc, mc) {
                return true;
            }
            used[next] = false;
        }
        false
    }
    (0..n).any(|s| {
        let mut used = vec![false; n];
        used[s] = true;
        dfs(s, s, true, &mut used, &pc, &mc)
    })
}

fn random_angle(rng: &mut impl Rng, max_den: i64) -> Angle {
    let q = rng.gen_range(2..=max_den);
    Angle::new(rng.gen_range(0..q), q)
}

/// Up to `max_leaves` pairwise unlinked leaves with denominators ≤ `max_den`,
/// optionally seeded with reflected leaves of `mirror` so that cycles occur.
pub fn random_lamination(rng: &mut impl Rng, max_leaves: usize, max_den: i64, mirror: Option<&Lamination>) -> Lamination {
    let target = rng.gen_range(0..=max_leaves);
    let mut leaves: Vec<Leaf> = Vec::new();
    let mut candidates: Vec<Leaf> = mirror
        .map(|l| l.leaves().filter(|_| rng.gen_bool(0.6)).map(Leaf::reflect).collect())
        .unwrap_or_default();
    let mut tries = 0;
    while leaves.len() < target && tries < 200 {
        tries += 1;
        let leaf = match candidates.pop() {
            Some(l) => l,
            None => {
                // Reuse existing endpoints half the time so classes grow.
                let a = if !leaves.is_empty() && rng.gen_bool(0.5) {
                    let l = &leaves[rng.gen_range(0..leaves.len())];
                    if rng.gen_bool(0.5) { l.endpoints().0.clone() } else { l.endpoints().1.clone() }
                } else {
                    random_angle(rng, max_den)
                };
                let b = random_angle(rng, max_den);
                match Leaf::new(a, b) {
                    Ok(l) => l,
                    Err(_) => continue,
                }
            }
        };
        let mut trial = leaves.clone();
        trial.push(leaf);
        if Lamination::new(2, trial.iter().cloned()).is_ok() {
            leaves = trial;
        }
    }
    Lamination::new(2, leaves).unwrap()
}
