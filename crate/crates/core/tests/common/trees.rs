//! Hubbard-tree fixtures in file form.

use qpcf::treedyn::{RibbonTreeMap, TreeMapFile};
use serde_json::json;

fn build(v: serde_json::Value) -> RibbonTreeMap {
    serde_json::from_value::<TreeMapFile>(v).unwrap().to_map().unwrap()
}

/// Two vertices swapped; vertex 0 critical of local degree `d`.
pub fn swap(d: u32) -> RibbonTreeMap {
    build(json!({
        "trees": [{"vertices": [0, 1], "edges": [[0, 1]], "marked": [0, 1],
                   "anchor": {"edge": 0, "side": 1}}],
        "F": {"vertex": {"0": 1, "1": 0}},
        "delta_v": {"0": d},
        "degree": d
    }))
}

/// Satellite star: centre `q` fixed, leg `i` (edge `i`, listed
/// counterclockwise) mapped to leg `i + p mod q`; leg 0 critical.
pub fn star(p: usize, q: usize) -> RibbonTreeMap {
    let legs: Vec<usize> = (0..q).collect();
    let edges: Vec<[usize; 2]> = legs.iter().map(|&i| [q, i]).collect();
    let mut f: serde_json::Map<String, serde_json::Value> =
        legs.iter().map(|&i| (i.to_string(), json!((i + p) % q))).collect();
    f.insert(q.to_string(), json!(q));
    build(json!({
        "trees": [{"vertices": (0..=q).collect::<Vec<_>>(), "edges": edges,
                   "ribbon": {q.to_string(): legs}, "marked": legs,
                   "anchor": {"edge": 0, "side": 0}}],
        "F": {"vertex": f},
        "delta_v": {"0": 2},
        "degree": 2
    }))
}

/// Every fixture tree map, with a name.
pub fn all() -> Vec<(String, RibbonTreeMap)> {
    let mut out = vec![("basilica".to_string(), swap(2)), ("cubic swap".to_string(), swap(3))];
    for q in 2..=5 {
        for p in 1..q {
            if num::integer::gcd(p, q) == 1 {
                out.push((format!("{p}/{q} star"), star(p, q)));
            }
        }
    }
    out
}
