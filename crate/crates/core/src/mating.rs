//! Mateability of two polynomials from their Hubbard trees or laminations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{fresh_prime, Angle};
use crate::lamination::{
    pullback_lamination, CriticalPortrait, Lamination, LaminationError, Leaf, ParallelCertificate, ParallelOutcome,
    StabilizationReport,
};
use crate::treedyn::dual::{dual_lamination, DualLamination};
use crate::treedyn::ribbon::{RibbonTreeMap, Side, TreeError, TreeMapFile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatingError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Lamination(#[from] LaminationError),
    #[error("a Hubbard tree must be a single anchored tree")]
    NotSingleTree,
    #[error("laminations have degrees {0} and {1}")]
    DegreeMismatch(u32, u32),
    #[error("no verdict by depth {max_depth}")]
    DepthExhausted { max_depth: u32, report: Option<StabilizationReport> },
}

/// Which edges map onto paths of more than one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialCheck {
    pub simplicial: bool,
    /// `(edge, image path)` for each offending edge.
    pub offending: Vec<(usize, Vec<usize>)>,
}

pub fn hubbard_is_simplicial(h: &RibbonTreeMap) -> SimplicialCheck {
    let offending: Vec<(usize, Vec<usize>)> = (0..h.num_edges())
        .filter_map(|e| {
            let p = h.image_path(e)?;
            (p.len() != 1).then_some((e, p))
        })
        .collect();
    SimplicialCheck { simplicial: offending.is_empty(), offending }
}

/// A single anchored tree with a simplicial self-map; strictly preperiodic
/// edges are subdivided on intake.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HubbardTree {
    map: RibbonTreeMap,
    added: Vec<usize>,
}

impl HubbardTree {
    pub fn new(map: RibbonTreeMap) -> Result<Self, MatingError> {
        if map.trees().len() != 1 || (map.num_edges() > 0 && map.trees()[0].anchor.is_none()) {
            return Err(MatingError::NotSingleTree);
        }
        let (map, added) = map.simplicial()?;
        Ok(HubbardTree { map, added })
    }

    pub fn from_file(f: &TreeMapFile) -> Result<Self, MatingError> {
        Self::new(f.to_map()?)
    }

    pub fn map(&self) -> &RibbonTreeMap {
        &self.map
    }

    /// Vertices added by subdivision.
    pub fn added_vertices(&self) -> &[usize] {
        &self.added
    }

    pub fn degree(&self) -> u32 {
        self.map.trees()[0].degree
    }
}

/// One critical polygon per critical vertex `v`: pick `u` inside a corner
/// arc at `F(v)` with a fresh denominator, and join the preimages of `u`
/// that lie in corner arcs at `v`.
pub fn derived_portrait(h: &HubbardTree, dl: &DualLamination) -> Result<CriticalPortrait, MatingError> {
    let t = h.map();
    let d = h.degree();
    let corner_arc = |v: usize, i: usize| -> (Angle, Angle) {
        let r = t.ribbon(v);
        let e_in = r[i];
        let e_out = r[(i + 1) % r.len()];
        let entering = Side { edge: e_in, forward: t.edge(e_in).1 == v };
        let leaving = Side { edge: e_out, forward: t.edge(e_out).0 == v };
        (dl.side_angle(entering).clone(), dl.side_angle(leaving).clone())
    };
    let in_arc = |x: &Angle, (a, b): &(Angle, Angle)| x.in_open_arc(a, b) || (a == b && x == a);
    let mut chords = Vec::new();
    for v in 0..t.num_vertices() {
        let delta = t.local_degree(v);
        if delta < 2 {
            continue;
        }
        let w = t.f(v);
        let arcs_w: Vec<(Angle, Angle)> = (0..t.valence(w)).map(|i| corner_arc(w, i)).collect();
        let (lo, hi) = arcs_w
            .iter()
            .find(|(a, b)| a != b)
            .or(arcs_w.first())
            .cloned()
            .ok_or_else(|| TreeError::ItineraryInconsistent(format!("critical value of vertex {v} has no corners")))?;
        let u = if lo == hi {
            lo.clone()
        } else {
            let p = fresh_prime(&[lo.denom().clone(), hi.denom().clone(), d.into()]);
            let step = lo.ccw_distance(&hi) / num::BigRational::from_integer(p.into());
            Angle::from_rational(lo.as_rational() + step)
        };
        let arcs_v: Vec<(Angle, Angle)> = (0..t.valence(v)).map(|i| corner_arc(v, i)).collect();
        let mut pre: Vec<Angle> = u.preimages(d).into_iter().filter(|x| arcs_v.iter().any(|a| in_arc(x, a))).collect();
        pre.sort();
        if pre.len() != delta as usize {
            return Err(TreeError::ItineraryInconsistent(format!(
                "{} preimages of {u} at critical vertex {v}, expected {delta}",
                pre.len()
            ))
            .into());
        }
        for pair in pre.windows(2) {
            chords.push(Leaf::new(pair[0].clone(), pair[1].clone())?);
        }
    }
    Ok(CriticalPortrait::new(d, chords)?)
}

/// The dual lamination of `h` pulled back `depth` generations.
pub fn lamination_of(h: &HubbardTree, depth: u32) -> Result<Lamination, MatingError> {
    let d = h.degree();
    if h.map().num_edges() == 0 {
        return Ok(Lamination::empty(d));
    }
    let dl = dual_lamination(h.map())?;
    let base = dl.lamination(0)?;
    let portrait = derived_portrait(h, &dl)?;
    Ok(pullback_lamination(&base, &portrait, depth)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Mateable,
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatingVerdict {
    pub outcome: Outcome,
    /// Present when obstructed: the alternating cycle, `a_i ∼₊ b_i`, `−b_i ∼₋ −a_{i+1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ParallelCertificate>,
    /// Present when mateable: the class structure at `depth` and `depth − 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilization: Option<StabilizationReport>,
    pub depth: u32,
}

/// Pulls both laminations back one generation at a time and runs the
/// parallel test; stops at the first parallel cycle or at the first depth
/// whose incidence structure repeats the previous one.
pub fn mateability(plus: &Lamination, minus: &Lamination, max_depth: u32) -> Result<MatingVerdict, MatingError> {
    if plus.degree() != minus.degree() {
        return Err(MatingError::DegreeMismatch(plus.degree(), minus.degree()));
    }
    let mut p = plus.clone();
    let mut m = minus.clone();
    let (p0, m0) = (p.depth(), m.depth());
    let mut last = None;
    for k in 0..=max_depth {
        if k > 0 {
            p = grow(&p)?;
            m = grow(&m)?;
        }
        // Test on generations relative to each input's own starting depth.
        let pk = p.truncated(p0 + k);
        let mk = m.truncated(m0 + k);
        match crate::lamination::parallel_test(&rebase(&pk, p0), &rebase(&mk, m0), k) {
            Ok(ParallelOutcome::Parallel(cert)) => {
                return Ok(MatingVerdict { outcome: Outcome::Obstructed, certificate: Some(cert), stabilization: None, depth: k })
            }
            Ok(ParallelOutcome::NonParallel(report)) => {
                return Ok(MatingVerdict {
                    outcome: Outcome::Mateable,
                    certificate: None,
                    stabilization: Some(report),
                    depth: k,
                })
            }
            Err(LaminationError::DepthInsufficient { report, .. }) => last = Some(report),
            Err(e) => return Err(e.into()),
        }
    }
    Err(MatingError::DepthExhausted { max_depth, report: last })
}

fn grow(l: &Lamination) -> Result<Lamination, MatingError> {
    match l.portrait() {
        Some(p) => Ok(pullback_lamination(l, &p.clone(), 1)?),
        None if l.is_empty() => Ok(l.clone()),
        None => Err(LaminationError::MissingPortrait(l.degree()).into()),
    }
}

/// Shifts generations down by `base` so the input's own leaves are generation 0.
fn rebase(l: &Lamination, base: u32) -> Lamination {
    if base == 0 {
        return l.clone();
    }
    let leaves = l.leaves_with_generation().map(|(leaf, g)| (leaf.clone(), g.saturating_sub(base)));
    let out = Lamination::with_generations(l.degree(), leaves).expect("sub-lamination of a valid lamination");
    match l.portrait() {
        Some(p) => out.with_portrait(p.clone()).expect("portrait already checked"),
        None => out,
    }
}
