//! Landing angles of edge sides and the finite dual lamination.
//!
//! Each tree's boundary circuit alternates sides (one angle each) and
//! corners (arcs of angles). `F` induces a covering of circuits: a side goes
//! to the image side, a corner at `v` sweeps forward around `F(v)` from the
//! image of its incoming edge to the image of its outgoing edge, plus any
//! extra full turns at critical vertices. Angle 0 is a fixed access inside
//! the anchor corner; the preimages of the target's angle 0 cut each circuit
//! into `d` digit sectors, and a side's angle is read off its itinerary.

use std::collections::{BTreeSet, HashMap};

use num::{One, Zero};

use super::rational::{q, Q};
use super::ribbon::{RibbonTreeMap, Side, Slot, TreeError};
use crate::angle::Angle;
use crate::lamination::{Lamination, Leaf};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLamination {
    /// Circuit degree of each tree.
    pub degrees: Vec<u32>,
    /// One leaf per edge (deduplicated), per tree.
    pub leaves: Vec<Vec<Leaf>>,
    /// `[forward side, backward side]` angle of each edge.
    pub side_angles: Vec<[Angle; 2]>,
}

impl DualLamination {
    pub fn side_angle(&self, s: Side) -> &Angle {
        &self.side_angles[s.edge][usize::from(!s.forward)]
    }

    pub fn lamination(&self, tree: usize) -> Result<Lamination, TreeError> {
        Ok(Lamination::new(self.degrees[tree], self.leaves[tree].iter().cloned())?)
    }
}

struct Circuits {
    slots: Vec<Vec<Slot>>,
    corner_pos: HashMap<(usize, usize), usize>,
    anchor_corner: Vec<Option<(usize, usize)>>,
}

impl Circuits {
    fn new(t: &RibbonTreeMap) -> Self {
        let mut slots = Vec::new();
        let mut corner_pos = HashMap::new();
        let mut anchor_corner = Vec::new();
        for (ti, tree) in t.trees().iter().enumerate() {
            let c = t.circuit(ti);
            for (i, s) in c.iter().enumerate() {
                if let Slot::Corner { vertex, index } = *s {
                    corner_pos.insert((vertex, index), i);
                }
            }
            anchor_corner.push(tree.anchor.map(|a| {
                let s = Side { edge: a.edge, forward: a.side == 0 };
                let v = t.head(s);
                (v, t.ribbon(v).iter().position(|&e| e == a.edge).expect("incident"))
            }));
            slots.push(c);
        }
        Circuits { slots, corner_pos, anchor_corner }
    }
}

pub fn dual_lamination(t: &RibbonTreeMap) -> Result<DualLamination, TreeError> {
    if let Some(e) = (0..t.num_edges()).find(|&e| t.edge_image(e).is_none()) {
        return Err(TreeError::NotSimplicial(e));
    }
    let circuits = Circuits::new(t);
    let ntrees = t.trees().len();
    let degrees: Vec<u32> = t.trees().iter().map(|tr| tr.degree).collect();

    let mut occurrences: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..t.num_vertices() {
        if t.valence(v) > 0 {
            for (i, n) in corner_occurrences(t, &circuits, v)?.into_iter().enumerate() {
                occurrences.insert((v, i), n);
            }
        }
    }

    let mut digit: Vec<u32> = vec![0; 2 * t.num_edges()];
    for ti in 0..ntrees {
        let circuit = &circuits.slots[ti];
        if circuit.is_empty() {
            continue;
        }
        let anchor = t.trees()[ti].anchor.ok_or(TreeError::BadAnchor(ti))?;
        let a = circuits.anchor_corner[ti].expect("anchored");
        let occ_a = occurrences[&a];
        if anchor.occurrence >= occ_a {
            return Err(TreeError::AnchorUnreachable(ti));
        }
        let d = degrees[ti] as usize;
        let start = circuits.corner_pos[&a];
        let mut count = occ_a - anchor.occurrence;
        for step in 1..circuit.len() {
            match circuit[(start + step) % circuit.len()] {
                Slot::Side(s) => {
                    if count > d {
                        return Err(inconsistent(format!("tree {ti} meets more than {d} preimages of angle 0")));
                    }
                    digit[s.index()] = (count - 1) as u32;
                }
                Slot::Corner { vertex, index } => count += occurrences[&(vertex, index)],
            }
        }
        count += anchor.occurrence;
        if count != d {
            return Err(inconsistent(format!("tree {ti} has {count} preimages of angle 0, expected {d}")));
        }
    }

    let values = solve_itineraries(t, &digit, &degrees)?;
    let side_angles: Vec<[Angle; 2]> = (0..t.num_edges())
        .map(|e| {
            [
                Angle::from_rational(values[2 * e].clone()),
                Angle::from_rational(values[2 * e + 1].clone()),
            ]
        })
        .collect();

    // Side angles must increase weakly around each circuit, starting at 0.
    for ti in 0..ntrees {
        let circuit = &circuits.slots[ti];
        let Some(a) = circuits.anchor_corner[ti] else { continue };
        let start = circuits.corner_pos[&a];
        let mut prev = Q::zero();
        for step in 1..circuit.len() {
            if let Slot::Side(s) = circuit[(start + step) % circuit.len()] {
                let v = &values[s.index()];
                if *v < prev || *v >= Q::one() {
                    return Err(inconsistent(format!("side angles of tree {ti} are not in circuit order")));
                }
                prev = v.clone();
            }
        }
    }

    let mut leaves = Vec::with_capacity(ntrees);
    for tree in t.trees() {
        let mut set = BTreeSet::new();
        for &e in &tree.edges {
            let [a, b] = side_angles[e].clone();
            let leaf = Leaf::new(a, b).map_err(|_| inconsistent(format!("both sides of edge {e} land at one angle")))?;
            set.insert(leaf);
        }
        leaves.push(set.into_iter().collect());
    }
    Ok(DualLamination { degrees, leaves, side_angles })
}

fn inconsistent(msg: String) -> TreeError {
    TreeError::ItineraryInconsistent(msg)
}

/// For each corner at `v`, how often its image sweeps the target tree's
/// anchor corner.
fn corner_occurrences(t: &RibbonTreeMap, c: &Circuits, v: usize) -> Result<Vec<usize>, TreeError> {
    let w = t.f(v);
    let kv = t.valence(v);
    let kw = t.valence(w);
    let target = t.tree_of(w);
    let anchor = c.anchor_corner[target].ok_or(TreeError::BadAnchor(target))?;
    let position = |e: usize| -> usize {
        let img = t.edge_image(e).expect("simplicial");
        t.ribbon(w).iter().position(|&x| x == img).expect("image edge is incident to F(v)")
    };
    let mut starts = Vec::with_capacity(kv);
    let mut steps = Vec::with_capacity(kv);
    for i in 0..kv {
        let p_in = position(t.ribbon(v)[i]);
        let p_out = position(t.ribbon(v)[(i + 1) % kv]);
        let base = (p_out + kw - p_in) % kw;
        starts.push(p_in);
        steps.push(if base == 0 { kw } else { base });
    }
    let total: usize = steps.iter().sum();
    if total % kw != 0 {
        return Err(inconsistent(format!("corners at vertex {v} do not wrap F({v}) a whole number of times")));
    }
    let delta = t.local_degree(v) as usize;
    let Some(extra) = delta.checked_sub(total / kw) else {
        return Err(inconsistent(format!("vertex {v} wraps more often than its local degree")));
    };
    let turns: Vec<usize> = match t.turns(v) {
        Some(tv) => {
            if tv.len() != kv || tv.iter().map(|&x| x as usize).sum::<usize>() != extra {
                return Err(inconsistent(format!("turns at vertex {v} must list {kv} corners adding up to {extra}")));
            }
            tv.iter().map(|&x| x as usize).collect()
        }
        None => (0..kv).map(|i| if i == 0 { extra } else { 0 }).collect(),
    };
    let circuit = &c.slots[target];
    let mut out = Vec::with_capacity(kv);
    for i in 0..kv {
        let need = steps[i] + kw * turns[i];
        let mut pos = c.corner_pos[&(w, starts[i])];
        let (mut seen, mut hits) = (0, 0);
        loop {
            if let Slot::Corner { vertex, index } = circuit[pos] {
                if (vertex, index) == anchor {
                    hits += 1;
                }
                if vertex == w {
                    seen += 1;
                    if seen == need {
                        break;
                    }
                }
            }
            pos = (pos + 1) % circuit.len();
        }
        out.push(hits);
    }
    Ok(out)
}

/// Solves `t_s = (digit_s + t_{F(s)}) / d` over all sides exactly: periodic
/// cycles in closed form, then preperiodic sides by back-substitution.
fn solve_itineraries(t: &RibbonTreeMap, digit: &[u32], degrees: &[u32]) -> Result<Vec<Q>, TreeError> {
    let n = digit.len();
    let next: Vec<usize> = (0..n)
        .map(|i| t.side_image(Side::from_index(i)).expect("simplicial").index())
        .collect();
    let deg = |i: usize| degrees[t.tree_of(t.tail(Side::from_index(i)))];
    let mut value: Vec<Option<Q>> = vec![None; n];
    for s0 in 0..n {
        if value[s0].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut on_path: HashMap<usize, usize> = HashMap::new();
        let mut s = s0;
        while value[s].is_none() && !on_path.contains_key(&s) {
            on_path.insert(s, path.len());
            path.push(s);
            s = next[s];
        }
        let mut upto = path.len();
        if value[s].is_none() {
            // `s` closes a cycle path[j..]: x = Σ k_i / P_i + x / P.
            let j = on_path[&s];
            let cycle = &path[j..];
            let mut prod = Q::one();
            let mut acc = Q::zero();
            for &c in cycle {
                prod *= q(deg(c) as i64);
                acc += q(digit[c] as i64) / &prod;
            }
            if prod == Q::one() {
                return Err(inconsistent("a periodic side lies in a cycle of degree-1 trees".into()));
            }
            let x = &acc * &prod / (&prod - Q::one());
            value[cycle[0]] = Some(x);
            for k in (1..cycle.len()).rev() {
                let c = cycle[k];
                let img = value[next[c]].clone().expect("solved");
                value[c] = Some((q(digit[c] as i64) + img) / q(deg(c) as i64));
            }
            upto = j;
        }
        for &c in path[..upto].iter().rev() {
            let img = value[next[c]].clone().expect("solved");
            value[c] = Some((q(digit[c] as i64) + img) / q(deg(c) as i64));
        }
    }
    Ok(value.into_iter().map(|v| v.expect("every side solved")).collect())
}
