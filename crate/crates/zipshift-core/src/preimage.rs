//! σ-preimages through the backward labeled graph.
//!
//! Enumeration is exact: a candidate is kept iff the product of the graph
//! with the label lasso has an infinite run. The delay / left-closing /
//! distinguishable classification is metadata from a bounded path search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::LabeledGraph;
use crate::point::EpPoint;
use crate::symbols::Sym;
use crate::{Error, Result, ZipShiftSpace};

/// Greatest fixpoint of "has a live successor" on states (vertex, position)
/// of a lasso product. `step(v, p)` lists successor vertices; positions
/// advance along the lasso.
fn live_states(
    nv: usize,
    trans: usize,
    cycle: usize,
    valid: impl Fn(usize, usize) -> bool,
    step: impl Fn(usize, usize) -> Vec<usize>,
) -> Vec<Vec<bool>> {
    let len = trans + cycle;
    let next = |p: usize| if p + 1 < len { p + 1 } else { trans };
    let mut live: Vec<Vec<bool>> = (0..nv).map(|v| (0..len).map(|p| valid(v, p)).collect()).collect();
    loop {
        let mut changed = false;
        for v in 0..nv {
            for p in 0..len {
                if live[v][p] && !step(v, p).iter().any(|&w| live[w][next(p)]) {
                    live[v][p] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return live;
        }
    }
}

/// Vertices v such that a forward walk from v has first letters spelling
/// `trans · cycle^∞`.
pub fn right_live_starts(g: &LabeledGraph, trans: &[Sym], cycle: &[Sym]) -> Vec<usize> {
    let label: Vec<Sym> = trans.iter().chain(cycle).copied().collect();
    let out = g.out_edges();
    let live = live_states(
        g.vertex_count(),
        trans.len(),
        cycle.len(),
        |v, p| g.vertices[v][0] == label[p],
        |v, _| out[v].iter().map(|&e| g.edges[e].to).collect(),
    );
    (0..g.vertex_count()).filter(|&v| live[v][0]).collect()
}

/// Per vertex: does a backward walk ending there carry sofic labels
/// `trans · cycle^∞` (read outward from index −1)?
fn left_live(g: &LabeledGraph, trans: &[Sym], cycle: &[Sym]) -> Vec<bool> {
    let label: Vec<Sym> = trans.iter().chain(cycle).copied().collect();
    let inn = g.in_edges();
    let live = live_states(
        g.vertex_count(),
        trans.len(),
        cycle.len(),
        |_, _| true,
        |v, p| {
            inn[v]
                .iter()
                .filter(|&&e| g.edges[e].sofic == label[p])
                .map(|&e| g.edges[e].from)
                .collect()
        },
    );
    live.into_iter().map(|row| row[0]).collect()
}

pub(crate) fn left_viable_from(g: &LabeledGraph, starts: &[usize], trans: &[Sym], cycle: &[Sym]) -> bool {
    let live = left_live(g, trans, cycle);
    starts.iter().any(|&v| live[v])
}

/// Whether some start vertex admits an infinite backward path whose sofic
/// labels spell the eventually periodic left label (transient, period),
/// listed outward from index −1.
pub fn left_viability(space: &ZipShiftSpace, start_vertices: &[usize], transient: &[Sym], period: &[Sym]) -> bool {
    !period.is_empty() && left_viable_from(space.labeled_graph(), start_vertices, transient, period)
}

/// A deterministic A′-lift of the left side of `x`: letters y_{−1}, y_{−2}, …
/// as a lasso (transient, cycle), chosen by always taking the lowest live
/// vertex and edge. None when `x` is not admissible.
pub fn left_lift(space: &ZipShiftSpace, x: &EpPoint) -> Option<(Vec<Sym>, Vec<Sym>)> {
    let g = space.labeled_graph();
    let (rt, rc) = x.right_lasso();
    let (lt, lc) = x.left_lasso();
    let label: Vec<Sym> = lt.iter().chain(&lc).copied().collect();
    let len = label.len();
    let next = |p: usize| if p + 1 < len { p + 1 } else { lt.len() };
    let inn = g.in_edges();
    let live = live_states(
        g.vertex_count(),
        lt.len(),
        lc.len(),
        |_, _| true,
        |v, p| {
            inn[v]
                .iter()
                .filter(|&&e| g.edges[e].sofic == label[p])
                .map(|&e| g.edges[e].from)
                .collect()
        },
    );
    let v0 = right_live_starts(g, &rt, &rc).into_iter().find(|&v| live[v][0])?;
    let mut states = vec![(v0, 0usize)];
    let mut first_seen = BTreeMap::new();
    first_seen.insert((v0, 0usize), 0usize);
    loop {
        let (v, p) = *states.last().expect("non-empty");
        let np = next(p);
        let u = inn[v]
            .iter()
            .map(|&e| g.edges[e])
            .find(|e| e.sofic == label[p] && live[e.from][np])
            .expect("live states have live predecessors")
            .from;
        let j = states.len();
        states.push((u, np));
        if let Some(&i) = first_seen.get(&(u, np)) {
            let letters: Vec<Sym> = states.iter().map(|&(v, _)| g.vertices[v][0]).collect();
            return Some(if i >= 1 {
                (letters[1..i].to_vec(), letters[i..j].to_vec())
            } else {
                (Vec::new(), letters[1..=j].to_vec())
            });
        }
        first_seen.insert((u, np), j);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distinguishable {
    /// d_L: the first d labels single out one vertex and one path.
    Delay(usize),
    /// Only one start vertex carries an infinite path with the label.
    Label,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelClassification {
    Delay(usize),
    LeftClosing { length: usize, multiplicity: usize },
    Distinguishable(Distinguishable),
    SoficLeftClosing { length: usize, multiplicity: usize },
    /// `truncated` is set when the search stopped at `d_max` rather than
    /// detecting that the path structure repeats.
    Branching { truncated: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageResult {
    pub classification: LabelClassification,
    /// Sorted by the new x₀ in A′ order.
    pub points: Vec<EpPoint>,
}

pub const DEFAULT_DEPTH: usize = 32;

/// All y with σ(y) = x.
pub fn preimages(space: &ZipShiftSpace, x: &EpPoint, d_max: usize) -> Result<PreimageResult> {
    if d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be positive".into()));
    }
    let g = space.labeled_graph();
    let (rt, rc) = x.right_lasso();
    let starts = right_live_starts(g, &rt, &rc);
    let (lt, lc) = x.left_lasso();
    if starts.is_empty() || !left_viable_from(g, &starts, &lt, &lc) {
        return Err(Error::NotAdmissible(x.format(space.alphabet_a(), space.alphabet_a_prime())));
    }
    let x1 = lt.first().copied().unwrap_or(lc[0]);
    // Label read from index −2 outward.
    let rest = x.with_new_origin(0).left_lasso();
    let viable = left_live(g, &rest.0, &rest.1);
    let inn = g.in_edges();
    let mut ts = BTreeSet::new();
    let mut viable_starts = BTreeSet::new();
    for &v in &starts {
        for &e in &inn[v] {
            let edge = g.edges[e];
            if edge.sofic == x1 && viable[edge.from] {
                ts.insert(g.vertices[edge.from][0]);
                viable_starts.insert(v);
            }
        }
    }
    let points: Vec<EpPoint> = ts.iter().map(|&t| x.with_new_origin(t)).collect();
    let classification = classify(space, &starts, &lt, &lc, points.len(), viable_starts.len(), d_max);
    Ok(PreimageResult { classification, points })
}

fn classify(
    space: &ZipShiftSpace,
    starts: &[usize],
    trans: &[Sym],
    cycle: &[Sym],
    m: usize,
    viable_starts: usize,
    d_max: usize,
) -> LabelClassification {
    let g = space.labeled_graph();
    let inn = g.in_edges();
    let sofic = !space.is_finite_type();
    let label: Vec<Sym> = trans.iter().chain(cycle).copied().collect();
    let len = label.len();
    // (start vertex, current vertex) → number of paths.
    let mut layer: BTreeMap<(usize, usize), u64> = starts.iter().map(|&v| ((v, v), 1)).collect();
    let mut seen: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    for d in 1..=d_max {
        let p = if d - 1 < len { d - 1 } else { trans.len() + (d - 1 - trans.len()) % cycle.len() };
        let mut next: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (&(s, v), &c) in &layer {
            for &e in &inn[v] {
                if g.edges[e].sofic == label[p] {
                    let slot = next.entry((s, g.edges[e].from)).or_insert(0);
                    *slot = slot.saturating_add(c);
                }
            }
        }
        layer = next;
        let total: u64 = layer.values().fold(0, |a, &c| a.saturating_add(c));
        let start_set: BTreeSet<usize> = layer.keys().map(|k| k.0).collect();
        let end_set: BTreeSet<usize> = layer.keys().map(|k| k.1).collect();
        if total == 1 {
            return if sofic {
                LabelClassification::Distinguishable(Distinguishable::Delay(d))
            } else {
                LabelClassification::Delay(d)
            };
        }
        if total >= 2 && m >= 2 && end_set.len() == 1 {
            if start_set.len() == 1 && !sofic {
                return LabelClassification::LeftClosing { length: d, multiplicity: m };
            }
            if sofic {
                return LabelClassification::SoficLeftClosing { length: d, multiplicity: m };
            }
        }
        let next_p = if p + 1 < len { p + 1 } else { trans.len() };
        if !seen.insert((next_p, layer.keys().copied().collect())) {
            return terminal(sofic, viable_starts, false);
        }
    }
    terminal(sofic, viable_starts, true)
}

fn terminal(sofic: bool, viable_starts: usize, truncated: bool) -> LabelClassification {
    if sofic && viable_starts == 1 {
        LabelClassification::Distinguishable(Distinguishable::Label)
    } else {
        LabelClassification::Branching { truncated }
    }
}

/// All y with σᵏ(y) = x.
pub fn preimages_k(space: &ZipShiftSpace, x: &EpPoint, k: usize, d_max: usize) -> Result<BTreeSet<EpPoint>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut level: BTreeSet<EpPoint> = [x.clone()].into();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for p in &level {
            next.extend(preimages(space, p, d_max)?.points);
        }
        level = next;
    }
    Ok(level)
}
