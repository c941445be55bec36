//! Periodic and pre-periodic points, stable/unstable sets, homoclinic and
//! heteroclinic points.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::point::{is_admissible, shift, shift_k, EpPoint};
use crate::preimage::preimages_k;
use crate::symbols::Sym;
use crate::{Error, Result, ZipShiftSpace};

/// A point fixed by σ^m together with its length-m repeating A′-word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PeriodicPoint {
    pub word: Vec<Sym>,
    pub point: EpPoint,
}

impl PeriodicPoint {
    /// The point with right side `word` repeated; the left side is the
    /// φₙ-image of the same repetition.
    pub fn from_word(space: &ZipShiftSpace, word: Vec<Sym>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("periodic word must be non-empty".into()));
        }
        let n = space.n();
        let m = word.len();
        let left = (0..m)
            .map(|i| {
                let win: Vec<Sym> = (0..n).map(|k| word[(i + k) % m]).collect();
                space
                    .tm()
                    .apply(&win)
                    .ok_or_else(|| Error::UndefinedWindow(space.alphabet_a_prime().format_word(&win)))
            })
            .collect::<Result<Vec<_>>>()?;
        let point = EpPoint::periodic(left, word.clone())?;
        Ok(Self { word, point })
    }

    pub fn period(&self) -> usize {
        self.word.len()
    }

    /// σ^r(p) for r = 0 … m−1.
    pub fn orbit(&self, space: &ZipShiftSpace) -> Vec<EpPoint> {
        let mut out = vec![self.point.clone()];
        for _ in 1..self.word.len() {
            let next = shift(space, out.last().expect("non-empty")).expect("periodic points are admissible");
            out.push(next);
        }
        out
    }
}

/// Periodic points read off closed walks of length m in the presentation.
/// Exact for full and SFT spaces; for sofic spaces distinct walks may give
/// the same point, which the set removes.
pub(crate) fn closed_walk_points(space: &ZipShiftSpace, m: usize) -> Vec<PeriodicPoint> {
    let g = space.vertex_graph();
    let mut found = BTreeSet::new();
    let mut path = Vec::with_capacity(m);
    fn rec(g: &crate::VertexGraph, m: usize, path: &mut Vec<usize>, found: &mut BTreeSet<Vec<Sym>>) {
        let v = *path.last().expect("non-empty");
        if path.len() == m {
            if g.successors(v).contains(&path[0]) {
                found.insert(path.iter().map(|&u| g.word(u)[0]).collect());
            }
            return;
        }
        for &w in g.successors(v) {
            path.push(w);
            rec(g, m, path, found);
            path.pop();
        }
    }
    for v in 0..g.vertex_count() {
        path.push(v);
        rec(g, m, &mut path, &mut found);
        path.pop();
    }
    let mut out: Vec<PeriodicPoint> = found
        .into_iter()
        .map(|w| PeriodicPoint::from_word(space, w).expect("closed walks are admissible"))
        .collect();
    out.sort_by(|a, b| a.point.cmp(&b.point));
    out.dedup_by(|a, b| a.point == b.point);
    out
}

/// All points with σ^m(x) = x.
pub fn periodic_points(space: &ZipShiftSpace, m: usize) -> Result<Vec<PeriodicPoint>> {
    if !space.is_finite_type() {
        return Err(Error::NotFiniteType);
    }
    if m == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    Ok(closed_walk_points(space, m))
}

/// Points that land in the orbit of p after k·m steps for some k ≤ level,
/// excluding the orbit itself.
pub fn pre_periodic_points(
    space: &ZipShiftSpace,
    p: &PeriodicPoint,
    level: usize,
    d_max: usize,
) -> Result<BTreeSet<EpPoint>> {
    let orbit: BTreeSet<EpPoint> = p.orbit(space).into_iter().collect();
    let mut all = orbit.clone();
    let mut frontier = orbit.clone();
    for _ in 0..level {
        let mut next = BTreeSet::new();
        for x in &frontier {
            next.extend(preimages_k(space, x, p.period(), d_max)?);
        }
        frontier = next.difference(&all).cloned().collect();
        all.extend(next);
    }
    Ok(all.difference(&orbit).cloned().collect())
}

/// Merge data for one side: the index after which the tails agree, and the
/// phase r of σ^r(p) they agree with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Merge {
    pub index: usize,
    pub phase: usize,
}

/// Stable/unstable set membership of t with respect to p.
///
/// Stable: t_n = q_n for all n ≥ `index`. Unstable: t_{−n} = q_{−n} for all
/// n > `index`. Global sets allow q to be any point of the orbit of p; the
/// special sets compare with p itself and require index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub stable_global: Option<Merge>,
    pub stable_special: bool,
    pub unstable_global: Option<Merge>,
    pub unstable_special: bool,
}

fn right_merge(t: &EpPoint, q: &EpPoint) -> Option<usize> {
    let bound = t.right_transient().len().max(q.right_transient().len())
        + num_integer::lcm(t.right_period().len(), q.right_period().len());
    // Tails agree iff the periodic parts agree past the transients.
    let start = t.right_transient().len().max(q.right_transient().len());
    if (start..bound).any(|i| t.get(i as i64) != q.get(i as i64)) {
        return None;
    }
    Some((0..start).rev().find(|&i| t.get(i as i64) != q.get(i as i64)).map_or(0, |i| i + 1))
}

fn left_merge(t: &EpPoint, q: &EpPoint) -> Option<usize> {
    let start = t.left_transient().len().max(q.left_transient().len());
    let bound = start + num_integer::lcm(t.left_period().len(), q.left_period().len());
    if (start + 1..=bound).any(|j| t.get(-(j as i64)) != q.get(-(j as i64))) {
        return None;
    }
    Some((1..=start).rev().find(|&j| t.get(-(j as i64)) != q.get(-(j as i64))).unwrap_or(0))
}

fn best(candidates: impl Iterator<Item = (usize, Option<usize>)>) -> Option<Merge> {
    candidates
        .filter_map(|(phase, m)| m.map(|index| Merge { index, phase }))
        .min_by_key(|m| (m.index, m.phase))
}

pub fn stable_unstable_membership(space: &ZipShiftSpace, p: &PeriodicPoint, t: &EpPoint) -> Membership {
    let orbit = p.orbit(space);
    Membership {
        stable_global: best(orbit.iter().enumerate().map(|(r, q)| (r, right_merge(t, q)))),
        stable_special: right_merge(t, &p.point) == Some(0),
        unstable_global: best(orbit.iter().enumerate().map(|(r, q)| (r, left_merge(t, q)))),
        unstable_special: left_merge(t, &p.point) == Some(0),
    }
}

/// y ∈ W^s_special(p) ∩ W^u_special(q).
pub fn heteroclinic_check(space: &ZipShiftSpace, p: &PeriodicPoint, q: &PeriodicPoint, y: &EpPoint) -> bool {
    stable_unstable_membership(space, p, y).stable_special && stable_unstable_membership(space, q, y).unstable_special
}

/// A point homoclinic to the orbit of p, with its merge indices: x_{−n}
/// agrees with the orbit for n ≥ `n_x` and x_n for n ≥ `n_prime_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomoclinicDatum {
    pub p: PeriodicPoint,
    pub x: EpPoint,
    pub n_x: usize,
    pub n_prime_x: usize,
    /// Phase of the orbit point that the left tail of x follows.
    pub left_phase: usize,
}

impl HomoclinicDatum {
    pub fn new(space: &ZipShiftSpace, p: PeriodicPoint, x: EpPoint) -> Result<Self> {
        let orbit = p.orbit(space);
        if orbit.contains(&x) {
            return Err(Error::InvalidArgument("x lies on the orbit of p".into()));
        }
        let m = stable_unstable_membership(space, &p, &x);
        let (Some(s), Some(u)) = (m.stable_global, m.unstable_global) else {
            return Err(Error::InvalidArgument("x is not homoclinic to the orbit of p".into()));
        };
        Ok(Self { p, x, n_x: u.index + 1, n_prime_x: s.index, left_phase: u.phase })
    }
}

/// One backward branch of a homoclinic orbit. `branch` lists the chosen
/// A′-letters y_{−(N_x−1)} … y_{−1}; further back the letters follow p.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HomoclinicOrbit {
    pub branch: Vec<Sym>,
}

impl HomoclinicOrbit {
    fn lift_letter(&self, datum: &HomoclinicDatum, j: usize) -> Sym {
        let free = self.branch.len();
        if j <= free {
            self.branch[free - j]
        } else {
            let w = &datum.p.word;
            let m = w.len() as i64;
            w[(datum.left_phase as i64 - j as i64).rem_euclid(m) as usize]
        }
    }

    /// h_i: σ^i(x) for i ≥ 0, the chosen backward branch for i < 0.
    pub fn point(&self, space: &ZipShiftSpace, datum: &HomoclinicDatum, i: i64) -> Result<EpPoint> {
        if i >= 0 {
            return shift_k(space, &datum.x, i as usize);
        }
        let mut y = datum.x.clone();
        for j in 1..=i.unsigned_abs() as usize {
            y = y.with_new_origin(self.lift_letter(datum, j));
        }
        Ok(y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomoclinicReport {
    pub orbits: Vec<HomoclinicOrbit>,
    /// Σ over the free positions of the number of φ-preimages of x_t.
    pub sum_bound: usize,
    pub exceeds_sum_bound: bool,
}

/// Enumerates the backward branches of the orbit of x. Free positions are
/// n = 1 … N_x − 1; every combination of φ-preimages is tried and kept when
/// the resulting points are admissible and shift back onto x.
pub fn homoclinic_orbits(space: &ZipShiftSpace, datum: &HomoclinicDatum) -> Result<HomoclinicReport> {
    let free = datum.n_x - 1;
    let x = &datum.x;
    let ap = space.alphabet_a_prime().len();
    let mut sum_bound = 0;
    for j in 1..=free {
        let a = x.get(-(j as i64));
        sum_bound += (0..ap).filter(|&s| space.tm().table().iter().any(|(k, &v)| v == a && k[0] == s)).count();
    }
    let depth = free + datum.p.period() + space.n() + space.step();
    let mut orbits = Vec::new();
    let mut choice = vec![0usize; free];
    'outer: loop {
        let orbit = HomoclinicOrbit { branch: choice.clone() };
        let mut ok = true;
        let mut prev = x.clone();
        for j in 1..=depth {
            let h = orbit.point(space, datum, -(j as i64))?;
            if !is_admissible(space, &h).ok || shift(space, &h)? != prev {
                ok = false;
                break;
            }
            prev = h;
        }
        if ok {
            orbits.push(orbit);
        }
        for k in (0..free).rev() {
            choice[k] += 1;
            if choice[k] < ap {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    let exceeds_sum_bound = orbits.len() > sum_bound;
    Ok(HomoclinicReport { orbits, sum_bound, exceeds_sum_bound })
}
