//! Finite rational laminations: leaves, pullback under `m_d`, the induced
//! equivalence relation, and the parallelism test between two laminations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::Angle;
use crate::dsu::DisjointSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaminationError {
    #[error("leaf endpoints must be distinct (got {0} twice)")]
    DegenerateLeaf(Angle),
    #[error("lamination degree must be at least 2 (got {0})")]
    BadDegree(u32),
    #[error("linked leaves: {}", fmt_pairs(.0))]
    LinkedLeaves(Vec<(Leaf, Leaf)>),
    #[error("critical portrait for degree {degree} needs {expected} chords, got {got}")]
    PortraitSize { degree: u32, expected: usize, got: usize },
    #[error("portrait chord {0} is not critical: its endpoints have different images")]
    PortraitChordNotCritical(Leaf),
    #[error("portrait chords {0} and {1} are linked")]
    PortraitLinked(Leaf, Leaf),
    #[error("portrait incompatible with leaf {leaf}: {reason}")]
    PortraitIncompatible { leaf: Leaf, reason: String },
    #[error("pullback produced linked leaves: {}", fmt_pairs(.0))]
    LinkedResult(Vec<(Leaf, Leaf)>),
    #[error("lamination of degree {0} has leaves but no critical portrait")]
    MissingPortrait(u32),
    #[error("class structure not stabilized at depth {depth}; increase the depth")]
    DepthInsufficient { depth: u32, report: StabilizationReport },
}

fn fmt_pairs(pairs: &[(Leaf, Leaf)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a} x {b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A chord of the circle between two distinct rational angles.
/// Endpoints are stored in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leaf {
    lo: Angle,
    hi: Angle,
}

impl Leaf {
    pub fn new(a: Angle, b: Angle) -> Result<Self, LaminationError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Leaf { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Leaf { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(LaminationError::DegenerateLeaf(a)),
        }
    }

    /// Parses two `"p/q"` strings. Panics on malformed input; meant for fixtures.
    pub fn parse(a: &str, b: &str) -> Self {
        Leaf::new(a.parse().expect("angle"), b.parse().expect("angle")).expect("leaf")
    }

    pub fn endpoints(&self) -> (&Angle, &Angle) {
        (&self.lo, &self.hi)
    }

    pub fn has_endpoint(&self, t: &Angle) -> bool {
        &self.lo == t || &self.hi == t
    }

    pub fn reflect(&self) -> Leaf {
        Leaf::new(self.lo.reflect(), self.hi.reflect()).expect("reflection keeps endpoints distinct")
    }

    /// Image under `m_d`; `None` when the leaf is critical (both ends land together).
    pub fn image(&self, d: u32) -> Option<Leaf> {
        Leaf::new(self.lo.times(d), self.hi.times(d)).ok()
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.lo, self.hi)
    }
}

impl fmt::Debug for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Two chords are linked when their interiors cross. Chords sharing an
/// endpoint are never linked.
pub fn leaves_linked(l1: &Leaf, l2: &Leaf) -> bool {
    if l1.has_endpoint(&l2.lo) || l1.has_endpoint(&l2.hi) {
        return false;
    }
    let inside = |t: &Angle| &l1.lo < t && t < &l1.hi;
    inside(&l2.lo) != inside(&l2.hi)
}

/// Checks a leaf family for crossings, listing every linked pair.
pub fn validate_leaves<'a>(leaves: impl IntoIterator<Item = &'a Leaf>) -> Result<(), LaminationError> {
    let leaves: Vec<&Leaf> = leaves.into_iter().collect();
    let mut bad = Vec::new();
    for i in 0..leaves.len() {
        for j in i + 1..leaves.len() {
            if leaves_linked(leaves[i], leaves[j]) {
                bad.push((leaves[i].clone(), leaves[j].clone()));
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(LaminationError::LinkedLeaves(bad))
    }
}

pub fn validate_lamination(l: &Lamination) -> Result<(), LaminationError> {
    validate_leaves(l.leaves.keys())
}

/// `d − 1` pairwise unlinked critical chords used to choose preimage pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPortrait {
    chords: Vec<Leaf>,
}

impl CriticalPortrait {
    pub fn new(degree: u32, chords: Vec<Leaf>) -> Result<Self, LaminationError> {
        if degree < 2 {
            return Err(LaminationError::BadDegree(degree));
        }
        let expected = degree as usize - 1;
        if chords.len() != expected {
            return Err(LaminationError::PortraitSize {
                degree,
                expected,
                got: chords.len(),
            });
        }
        for c in &chords {
            let (a, b) = c.endpoints();
            if a.times(degree) != b.times(degree) {
                return Err(LaminationError::PortraitChordNotCritical(c.clone()));
            }
        }
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                if leaves_linked(&chords[i], &chords[j]) {
                    return Err(LaminationError::PortraitLinked(chords[i].clone(), chords[j].clone()));
                }
            }
        }
        Ok(CriticalPortrait { chords })
    }

    pub fn chords(&self) -> &[Leaf] {
        &self.chords
    }

    fn touches(&self, t: &Angle) -> bool {
        self.chords.iter().any(|c| c.has_endpoint(t))
    }
}

/// A finite lamination for `m_d`. Each leaf remembers the pullback
/// generation at which it first appeared.
#[derive(Clone, Debug, PartialEq)]
pub struct Lamination {
    degree: u32,
    leaves: BTreeMap<Leaf, u32>,
    portrait: Option<CriticalPortrait>,
}

impl Lamination {
    pub fn new(degree: u32, leaves: impl IntoIterator<Item = Leaf>) -> Result<Self, LaminationError> {
        Self::with_generations(degree, leaves.into_iter().map(|l| (l, 0)))
    }

    pub fn with_generations(
        degree: u32,
        leaves: impl IntoIterator<Item = (Leaf, u32)>,
    ) -> Result<Self, LaminationError> {
        if degree < 2 {
            return Err(LaminationError::BadDegree(degree));
        }
        let mut map: BTreeMap<Leaf, u32> = BTreeMap::new();
        for (leaf, g) in leaves {
            let e = map.entry(leaf).or_insert(g);
            *e = (*e).min(g);
        }
        validate_leaves(map.keys())?;
        Ok(Lamination {
            degree,
            leaves: map,
            portrait: None,
        })
    }

    pub fn empty(degree: u32) -> Self {
        Lamination {
            degree: degree.max(2),
            leaves: BTreeMap::new(),
            portrait: None,
        }
    }

    /// Attaches a critical portrait after checking it against the leaves.
    pub fn with_portrait(mut self, portrait: CriticalPortrait) -> Result<Self, LaminationError> {
        for c in portrait.chords() {
            for l in self.leaves.keys() {
                if leaves_linked(c, l) {
                    return Err(LaminationError::PortraitIncompatible {
                        leaf: l.clone(),
                        reason: format!("crosses portrait chord {c}"),
                    });
                }
            }
        }
        self.portrait = Some(portrait);
        Ok(self)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn portrait(&self) -> Option<&CriticalPortrait> {
        self.portrait.as_ref()
    }

    /// Largest recorded generation (0 for an empty lamination).
    pub fn depth(&self) -> u32 {
        self.leaves.values().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Leaf> {
        self.leaves.keys()
    }

    pub fn leaves_with_generation(&self) -> impl Iterator<Item = (&Leaf, u32)> {
        self.leaves.iter().map(|(l, g)| (l, *g))
    }

    pub fn contains(&self, leaf: &Leaf) -> bool {
        self.leaves.contains_key(leaf)
    }

    /// All leaf endpoints, sorted.
    pub fn support(&self) -> BTreeSet<Angle> {
        self.leaves
            .keys()
            .flat_map(|l| [l.lo.clone(), l.hi.clone()])
            .collect()
    }

    /// Leaves of generation at most `depth`.
    pub fn truncated(&self, depth: u32) -> Lamination {
        Lamination {
            degree: self.degree,
            leaves: self
                .leaves
                .iter()
                .filter(|(_, g)| **g <= depth)
                .map(|(l, g)| (l.clone(), *g))
                .collect(),
            portrait: self.portrait.clone(),
        }
    }

    /// Image under `t ↦ −t`. The portrait is reflected along with the leaves.
    pub fn reflected(&self) -> Lamination {
        Lamination {
            degree: self.degree,
            leaves: self.leaves.iter().map(|(l, g)| (l.reflect(), *g)).collect(),
            portrait: self.portrait.as_ref().map(|p| CriticalPortrait {
                chords: p.chords.iter().map(Leaf::reflect).collect(),
            }),
        }
    }
}

/// The `d` preimage chords of `leaf` that avoid the portrait.
fn pull_back_leaf(leaf: &Leaf, d: u32, portrait: &CriticalPortrait) -> Result<Vec<Leaf>, LaminationError> {
    let (a, b) = leaf.endpoints();
    let pa = a.preimages(d);
    let pb = b.preimages(d);
    if let Some(t) = pa.iter().chain(pb.iter()).find(|t| portrait.touches(t)) {
        return Err(LaminationError::PortraitIncompatible {
            leaf: leaf.clone(),
            reason: format!("preimage {t} is a portrait endpoint; the pairing is ambiguous"),
        });
    }
    let n = d as usize;
    let mut found: Vec<Vec<Leaf>> = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let chords: Vec<Leaf> = (0..n)
            .map(|i| Leaf::new(pa[i].clone(), pb[p[i]].clone()).expect("distinct preimages"))
            .collect();
        let crosses_portrait = chords
            .iter()
            .any(|c| portrait.chords().iter().any(|q| leaves_linked(c, q)));
        if crosses_portrait {
            return;
        }
        let self_crossing = (0..n).any(|i| (i + 1..n).any(|j| leaves_linked(&chords[i], &chords[j])));
        if !self_crossing {
            found.push(chords);
        }
    });
    match found.len() {
        1 => Ok(found.pop().unwrap()),
        0 => Err(LaminationError::PortraitIncompatible {
            leaf: leaf.clone(),
            reason: "no non-crossing matching avoids the portrait".into(),
        }),
        k => Err(LaminationError::PortraitIncompatible {
            leaf: leaf.clone(),
            reason: format!("{k} admissible matchings; portrait does not separate the preimages"),
        }),
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Adds `depth` generations of preimage leaves to `l`.
///
/// Generation `g + 1` consists of the preimages of generation-`g` leaves,
/// each leaf pulled back along the unique non-crossing pairing that avoids
/// the portrait chords. Leaves already present keep their generation.
pub fn pullback_lamination(
    l: &Lamination,
    portrait: &CriticalPortrait,
    depth: u32,
) -> Result<Lamination, LaminationError> {
    if portrait.chords().len() + 1 != l.degree as usize {
        return Err(LaminationError::PortraitSize {
            degree: l.degree,
            expected: l.degree as usize - 1,
            got: portrait.chords().len(),
        });
    }
    let mut out = l.clone().with_portrait(portrait.clone())?;
    let start = l.depth();
    let mut frontier: Vec<Leaf> = l
        .leaves
        .iter()
        .filter(|(_, g)| **g == start)
        .map(|(leaf, _)| leaf.clone())
        .collect();
    for g in start + 1..=start + depth {
        let mut fresh: BTreeSet<Leaf> = BTreeSet::new();
        for leaf in &frontier {
            for c in pull_back_leaf(leaf, l.degree, portrait)? {
                if !out.leaves.contains_key(&c) {
                    fresh.insert(c);
                }
            }
        }
        let mut bad = Vec::new();
        for c in &fresh {
            for old in out.leaves.keys() {
                if leaves_linked(c, old) {
                    bad.push((c.clone(), old.clone()));
                }
            }
        }
        let fresh_vec: Vec<&Leaf> = fresh.iter().collect();
        for i in 0..fresh_vec.len() {
            for j in i + 1..fresh_vec.len() {
                if leaves_linked(fresh_vec[i], fresh_vec[j]) {
                    bad.push((fresh_vec[i].clone(), fresh_vec[j].clone()));
                }
            }
        }
        if !bad.is_empty() {
            return Err(LaminationError::LinkedResult(bad));
        }
        for c in &fresh {
            out.leaves.insert(c.clone(), g);
        }
        frontier = fresh.into_iter().collect();
        if frontier.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Partition of the leaf endpoints into chains of leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivClasses {
    classes: Vec<Vec<Angle>>,
    index: HashMap<Angle, usize>,
}

impl EquivClasses {
    /// Classes sorted internally and by their smallest angle.
    pub fn classes(&self) -> &[Vec<Angle>] {
        &self.classes
    }

    pub fn class_of(&self, t: &Angle) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// `a ∼ b`: equal, or joined by a chain of leaves.
    pub fn equivalent(&self, a: &Angle, b: &Angle) -> bool {
        a == b || matches!((self.class_of(a), self.class_of(b)), (Some(x), Some(y)) if x == y)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn equivalence_classes(l: &Lamination) -> EquivClasses {
    let support: Vec<Angle> = l.support().into_iter().collect();
    let pos: HashMap<&Angle, usize> = support.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut dsu = DisjointSet::new(support.len());
    for leaf in l.leaves() {
        dsu.union(pos[&leaf.lo], pos[&leaf.hi]);
    }
    let classes: Vec<Vec<Angle>> = dsu
        .groups()
        .into_iter()
        .map(|g| g.into_iter().map(|i| support[i].clone()).collect())
        .collect();
    let index = classes
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.iter().map(move |a| (a.clone(), ci)))
        .collect();
    EquivClasses { classes, index }
}

/// Alternating chain `a_0, b_0, …, a_{k−1}, b_{k−1}` with `a_i ∼₊ b_i` and
/// `−b_i ∼₋ −a_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParallelCertificate {
    pub cycle: Vec<(Angle, Angle)>,
}

impl ParallelCertificate {
    /// Re-checks every step against the two laminations.
    pub fn validate(&self, plus: &Lamination, minus: &Lamination) -> bool {
        let cp = equivalence_classes(plus);
        let cm = equivalence_classes(minus);
        let k = self.cycle.len();
        k >= 1
            && (0..k).all(|i| {
                let (a, b) = &self.cycle[i];
                let a_next = &self.cycle[(i + 1) % k].0;
                a != b
                    && b != a_next
                    && cp.equivalent(a, b)
                    && cm.equivalent(&b.reflect(), &a_next.reflect())
            })
    }

    /// The same loop read from the other side: swap roles and reflect.
    pub fn swapped(&self) -> ParallelCertificate {
        let k = self.cycle.len();
        let cycle = (0..k)
            .map(|i| {
                let b = &self.cycle[i].1;
                let a_next = &self.cycle[(i + 1) % k].0;
                (b.reflect(), a_next.reflect())
            })
            .collect();
        canonical(ParallelCertificate { cycle })
    }

    /// Angles in chain order.
    pub fn angles(&self) -> Vec<Angle> {
        self.cycle.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
    }
}

fn canonical(cert: ParallelCertificate) -> ParallelCertificate {
    let k = cert.cycle.len();
    let forward = cert.angles();
    // Reversal of a_0 b_0 a_1 b_1 … reads b_{k-1} a_{k-1} … b_0 a_0; pairs
    // (b_i, a_i) are still plus-equivalent, so the reversed chain is valid.
    let backward: Vec<Angle> = forward.iter().rev().cloned().collect();
    let mut best: Option<Vec<Angle>> = None;
    for seq in [forward, backward] {
        for r in 0..k {
            let rot: Vec<Angle> = (0..2 * k).map(|i| seq[(2 * r + i) % (2 * k)].clone()).collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    let best = best.unwrap_or_default();
    ParallelCertificate {
        cycle: best.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect(),
    }
}

/// Shared angles of `plus` and `reflect(minus)` with the blocks the two class
/// systems cut them into. Unchanged signature ⇒ unchanged incidence graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceSignature {
    pub shared: Vec<Angle>,
    pub plus_blocks: Vec<Vec<Angle>>,
    pub minus_blocks: Vec<Vec<Angle>>,
}

fn signature(plus: &Lamination, minus: &Lamination) -> IncidenceSignature {
    let cp = equivalence_classes(plus);
    let cq = equivalence_classes(&minus.reflected());
    let shared: Vec<Angle> = plus
        .support()
        .into_iter()
        .filter(|t| cq.class_of(t).is_some())
        .collect();
    let blocks = |c: &EquivClasses| {
        let mut m: BTreeMap<usize, Vec<Angle>> = BTreeMap::new();
        for t in &shared {
            m.entry(c.class_of(t).unwrap()).or_default().push(t.clone());
        }
        let mut v: Vec<Vec<Angle>> = m.into_values().collect();
        v.sort();
        v
    };
    IncidenceSignature {
        plus_blocks: blocks(&cp),
        minus_blocks: blocks(&cq),
        shared,
    }
}

/// Cycle search in the bipartite incidence multigraph whose nodes are the
/// classes of `plus` and of `reflect(minus)` and whose edges are the shared
/// angles. Any cycle (a doubled edge included) is a parallel certificate.
pub fn incidence_cycle(plus: &Lamination, minus: &Lamination) -> Option<ParallelCertificate> {
    let cp = equivalence_classes(plus);
    let cq = equivalence_classes(&minus.reflected());
    let np = cp.len();
    let mut dsu = DisjointSet::new(np + cq.len());
    // forest adjacency: node -> (neighbor, angle)
    let mut adj: Vec<Vec<(usize, Angle)>> = vec![Vec::new(); np + cq.len()];
    // Shared angles are inserted oldest first so the reported cycle comes
    // from the shallowest leaves available.
    let first_gen = |l: &Lamination| {
        let mut m: HashMap<Angle, u32> = HashMap::new();
        for (leaf, g) in l.leaves_with_generation() {
            for t in [&leaf.lo, &leaf.hi] {
                let e = m.entry(t.clone()).or_insert(g);
                *e = (*e).min(g);
            }
        }
        m
    };
    let gp = first_gen(plus);
    let gm = first_gen(&minus.reflected());
    let mut shared: Vec<(u32, Angle)> = plus
        .support()
        .into_iter()
        .filter_map(|t| Some((gp[&t].max(*gm.get(&t)?), t)))
        .collect();
    shared.sort();
    for (_, t) in shared {
        let Some(q) = cq.class_of(&t) else { continue };
        let p = cp.class_of(&t).expect("support angle has a class");
        let (u, v) = (p, np + q);
        if dsu.union(u, v) {
            adj[u].push((v, t.clone()));
            adj[v].push((u, t));
            continue;
        }
        // Path v → u in the forest, then close it with edge t.
        let path = forest_path(&adj, v, u)?;
        // Walk: u -t- v -path...- u. Collect edge angles in order starting at
        // a plus node so that the chain reads a_0 b_0 ….
        let mut nodes = vec![u, v];
        let mut edges = vec![t.clone()];
        for (node, angle) in path {
            nodes.push(node);
            edges.push(angle);
        }
        // nodes[0] == nodes.last() == u (a plus class); edges[i] joins nodes[i], nodes[i+1].
        // At plus node nodes[2j] the entering edge is edges[2j-1], leaving edges[2j].
        let m = edges.len();
        let k = m / 2;
        let cycle = (0..k)
            .map(|j| {
                let entering = edges[(2 * j + m - 1) % m].clone();
                let leaving = edges[2 * j].clone();
                (entering, leaving)
            })
            .collect();
        return Some(canonical(ParallelCertificate { cycle }));
    }
    None
}

fn forest_path(adj: &[Vec<(usize, Angle)>], from: usize, to: usize) -> Option<Vec<(usize, Angle)>> {
    let mut prev: Vec<Option<(usize, Angle)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for (y, a) in &adj[x] {
            if !seen[*y] {
                seen[*y] = true;
                prev[*y] = Some((x, a.clone()));
                queue.push_back(*y);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut rev = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, a) = prev[cur].clone()?;
        rev.push((cur, a));
        cur = p;
    }
    rev.reverse();
    Some(rev)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationReport {
    /// Depth whose class structure was compared against `depth − 1`.
    pub depth: u32,
    pub stabilized: bool,
    pub previous: IncidenceSignature,
    pub current: IncidenceSignature,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParallelOutcome {
    Parallel(ParallelCertificate),
    NonParallel(StabilizationReport),
}

/// Parallelism verdict at generation `max_depth`, with a stabilization check
/// against generation `max_depth − 1` (the empty lamination when 0).
pub fn parallel_test(
    plus: &Lamination,
    minus: &Lamination,
    max_depth: u32,
) -> Result<ParallelOutcome, LaminationError> {
    let p_now = plus.truncated(max_depth);
    let m_now = minus.truncated(max_depth);
    if let Some(cert) = incidence_cycle(&p_now, &m_now) {
        return Ok(ParallelOutcome::Parallel(cert));
    }
    let (p_prev, m_prev) = if max_depth == 0 {
        (Lamination::empty(plus.degree), Lamination::empty(minus.degree))
    } else {
        (plus.truncated(max_depth - 1), minus.truncated(max_depth - 1))
    };
    let previous = signature(&p_prev, &m_prev);
    let current = signature(&p_now, &m_now);
    let stabilized = previous == current;
    let report = StabilizationReport {
        depth: max_depth,
        stabilized,
        previous,
        current,
    };
    if stabilized {
        Ok(ParallelOutcome::NonParallel(report))
    } else {
        Err(LaminationError::DepthInsufficient { depth: max_depth, report })
    }
}

/// On-disk form: `{ "degree": d, "leaves": [["p/q","r/s"], …], "portrait": […] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaminationFile {
    pub degree: u32,
    pub leaves: Vec<[Angle; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub portrait: Option<Vec<[Angle; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<Vec<u32>>,
}

impl LaminationFile {
    pub fn from_lamination(l: &Lamination) -> Self {
        let gens: Vec<u32> = l.leaves.values().copied().collect();
        LaminationFile {
            degree: l.degree,
            leaves: l
                .leaves
                .keys()
                .map(|x| [x.lo.clone(), x.hi.clone()])
                .collect(),
            portrait: l
                .portrait
                .as_ref()
                .map(|p| p.chords.iter().map(|c| [c.lo.clone(), c.hi.clone()]).collect()),
            generations: gens.iter().any(|g| *g > 0).then_some(gens),
        }
    }

    pub fn into_lamination(self) -> Result<Lamination, LaminationError> {
        let gens = self.generations.unwrap_or_else(|| vec![0; self.leaves.len()]);
        let leaves = self
            .leaves
            .into_iter()
            .zip(gens.into_iter().chain(std::iter::repeat(0)))
            .map(|([a, b], g)| Leaf::new(a, b).map(|l| (l, g)))
            .collect::<Result<Vec<_>, _>>()?;
        let lam = Lamination::with_generations(self.degree, leaves)?;
        match self.portrait {
            Some(chords) => {
                let chords = chords
                    .into_iter()
                    .map(|[a, b]| Leaf::new(a, b))
                    .collect::<Result<Vec<_>, _>>()?;
                lam.with_portrait(CriticalPortrait::new(self.degree, chords)?)
            }
            None => Ok(lam),
        }
    }
}
