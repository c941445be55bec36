//! Zip shift spaces: construction, languages, matrices, irreducibility and
//! periodic point counts.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{vertex_like, LabeledGraph, Presentation, VertexGraph};
use crate::symbols::{Alphabet, Side, Sym, TransitionMap, Word};
use crate::{Error, Result};

/// How the A′-side shift is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Full,
    /// Stored with superwords pruned: no forbidden word contains another.
    Sft { forbidden: BTreeSet<Vec<Sym>> },
    Sofic { presentation: Presentation },
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Full => "full",
            Kind::Sft { .. } => "sft",
            Kind::Sofic { .. } => "sofic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZipShiftSpace {
    a: Alphabet,
    ap: Alphabet,
    tm: TransitionMap,
    kind: Kind,
    step: usize,
    vgraph: VertexGraph,
    graph: LabeledGraph,
}

/// The matrices A′, A and T with their row orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSet {
    /// Step of the A′ side (floored at 1).
    pub k: usize,
    /// Step of the A side (floored at 1).
    pub n: usize,
    pub rows_a_prime: Vec<Vec<Sym>>,
    pub rows_a: Vec<Vec<Sym>>,
    pub a_prime_adj: Vec<Vec<u8>>,
    pub a_adj: Vec<Vec<u8>>,
    /// Rows indexed by `rows_a`, columns by `rows_a_prime`.
    pub t: Vec<Vec<u8>>,
    /// Minimal forbidden A-words found up to length `k + 1`.
    pub a_forbidden: BTreeSet<Vec<Sym>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// For every ordered pair of letters, a shortest admissible word starting
    /// with the first and ending with the second.
    Irreducible { witnesses: BTreeMap<(Sym, Sym), Vec<Sym>> },
    /// The first pair (in symbol order) that no admissible word connects.
    Reducible { from: Sym, to: Sym },
}

impl Irreducibility {
    pub fn holds(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }
}

fn prune_superwords(words: &BTreeSet<Vec<Sym>>) -> BTreeSet<Vec<Sym>> {
    words
        .iter()
        .filter(|w| {
            !words.iter().any(|v| {
                v.len() < w.len() && w.windows(v.len()).any(|win| win == v.as_slice())
            })
        })
        .cloned()
        .collect()
}

impl ZipShiftSpace {
    pub fn new(a: Alphabet, ap: Alphabet, tm: TransitionMap, kind: Kind) -> Result<Self> {
        let shared = a.names().iter().filter(|s| ap.index(s).is_some()).count();
        if shared > 0 && a != ap {
            return Err(Error::InvalidAlphabet(
                "A and A′ must be disjoint (or identical for a classical shift)".into(),
            ));
        }
        if tm.codomain() != a.len() {
            return Err(Error::InvalidSpace("transition map codomain differs from |A|".into()));
        }
        let n = tm.n();
        let k = ap.len();
        let (kind, step, raw) = match kind {
            Kind::Full => (Kind::Full, 0, VertexGraph::complete(k, (n - 1).max(1))),
            Kind::Sft { forbidden } => {
                for w in &forbidden {
                    if w.len() < 2 {
                        return Err(Error::InvalidSpace("forbidden words need length at least 2".into()));
                    }
                    if w.iter().any(|&s| s >= k) {
                        return Err(Error::InvalidSpace(format!("forbidden word {w:?} uses unknown symbols")));
                    }
                }
                let forbidden = prune_superwords(&forbidden);
                let step = forbidden.iter().map(Vec::len).max().map_or(0, |l| l - 1);
                let ell = (n - 1).max(step).max(1);
                let g = VertexGraph::sft(k, &forbidden, ell);
                (Kind::Sft { forbidden }, step, g)
            }
            Kind::Sofic { presentation } => {
                if presentation.edges.iter().any(|&(_, _, l)| l >= k) {
                    return Err(Error::InvalidSpace("presentation label outside A′".into()));
                }
                let g = vertex_like(&presentation).essential().with_length(n.max(1));
                (Kind::Sofic { presentation }, 0, g)
            }
        };
        let vgraph = raw.essential();
        if vgraph.vertex_count() == 0 {
            return Err(Error::InvalidSpace("the space is empty".into()));
        }
        let beta_n = vgraph.words(n);
        for w in &beta_n {
            if tm.apply(w).is_none() {
                return Err(Error::UndefinedWindow(ap.format_word(w)));
            }
        }
        if let Some(extra) = tm.domain().find(|w| !beta_n.contains(*w)) {
            return Err(Error::InvalidSpace(format!(
                "φ is defined on the non-admissible word {}",
                ap.format_word(extra)
            )));
        }
        if !tm.is_onto() {
            return Err(Error::InvalidSpace("φ is not onto A".into()));
        }
        let graph = LabeledGraph::from_vertex_graph(&vgraph, &tm)?;
        Ok(Self { a, ap, tm, kind, step, vgraph, graph })
    }

    /// The full zip shift with a 1-block map given letter by letter.
    pub fn full(a: Alphabet, ap: Alphabet, images: &[Sym]) -> Result<Self> {
        let tm = TransitionMap::from_letters(images, a.len())?;
        Self::new(a, ap, tm, Kind::Full)
    }

    /// The classical two-sided shift seen as a zip shift (A = A′, φ = id).
    pub fn classical(ap: Alphabet) -> Result<Self> {
        let images: Vec<Sym> = (0..ap.len()).collect();
        Self::full(ap.clone(), ap, &images)
    }

    pub fn alphabet_a(&self) -> &Alphabet {
        &self.a
    }

    pub fn alphabet_a_prime(&self) -> &Alphabet {
        &self.ap
    }

    pub fn tm(&self) -> &TransitionMap {
        &self.tm
    }

    pub fn n(&self) -> usize {
        self.tm.n()
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Step order M of the A′ side (0 for full spaces and sofic spaces).
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn is_finite_type(&self) -> bool {
        !matches!(self.kind, Kind::Sofic { .. })
    }

    pub fn vertex_graph(&self) -> &VertexGraph {
        &self.vgraph
    }

    /// The labeled graph: word vertices for full and SFT spaces, the
    /// vertex-like graph of the presentation for sofic ones.
    pub fn labeled_graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn contains_a_prime(&self, w: &[Sym]) -> bool {
        self.vgraph.contains(w)
    }

    pub fn words_a_prime(&self, k: usize) -> BTreeSet<Vec<Sym>> {
        self.vgraph.words(k)
    }

    pub fn words_a(&self, k: usize) -> BTreeSet<Vec<Sym>> {
        self.vgraph
            .words(k + self.n() - 1)
            .iter()
            .map(|w| self.tm.extend(w).expect("admissible windows are in the domain"))
            .collect()
    }

    /// Admissible straddling blocks `u ; v` with |u| = p, |v| = q.
    pub fn mixed_words(&self, p: usize, q: usize) -> BTreeSet<Word> {
        let n = self.n();
        let len = p + q.max(n - 1);
        self.vgraph
            .words(len)
            .iter()
            .map(|y| {
                let a = self.tm.extend(&y[..p + n - 1]).expect("admissible");
                Word::mixed(a, y[p..p + q].to_vec())
            })
            .collect()
    }

    /// β_k of the requested side.
    pub fn language(&self, k: usize, side: Side) -> Result<BTreeSet<Word>> {
        if k == 0 {
            return Err(Error::InvalidArgument("word length must be positive".into()));
        }
        Ok(match side {
            Side::APrime => self.words_a_prime(k).into_iter().map(Word::over_a_prime).collect(),
            Side::A => self.words_a(k).into_iter().map(Word::over_a).collect(),
            Side::Mixed => (1..k).flat_map(|p| self.mixed_words(p, k - p)).collect(),
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        match w.side() {
            Side::APrime => self.contains_a_prime(&w.ap),
            Side::A => self.words_a(w.a.len()).contains(&w.a),
            Side::Mixed => self.mixed_words(w.a.len(), w.ap.len()).contains(w),
        }
    }

    pub fn build_matrices(&self) -> Result<MatrixSet> {
        if !self.is_finite_type() {
            return Err(Error::NotFiniteType);
        }
        let k = self.step.max(1);
        let rows_a_prime: Vec<Vec<Sym>> = self.words_a_prime(k).into_iter().collect();
        let a_prime_adj = overlap_matrix(&rows_a_prime, |w| self.contains_a_prime(w));

        let lmax = k + 1;
        let langs: Vec<BTreeSet<Vec<Sym>>> = (0..=lmax).map(|l| self.words_a(l)).collect();
        let mut a_forbidden = BTreeSet::new();
        for l in 2..=lmax {
            for w in self.a.all_words(l) {
                if !langs[l].contains(&w)
                    && langs[l - 1].contains(&w[..l - 1])
                    && langs[l - 1].contains(&w[1..])
                {
                    a_forbidden.insert(w);
                }
            }
        }
        let n = a_forbidden.iter().map(Vec::len).max().map_or(1, |l| (l - 1).max(1));
        let rows_a: Vec<Vec<Sym>> = self.words_a(n).into_iter().collect();
        let lang_n1 = self.words_a(n + 1);
        let a_adj = overlap_matrix(&rows_a, |w| lang_n1.contains(w));
        let mixed = self.mixed_words(n, k);
        let t = rows_a
            .iter()
            .map(|v| {
                rows_a_prime
                    .iter()
                    .map(|w| u8::from(mixed.contains(&Word::mixed(v.clone(), w.clone()))))
                    .collect()
            })
            .collect();
        Ok(MatrixSet { k, n, rows_a_prime, rows_a, a_prime_adj, a_adj, t, a_forbidden })
    }

    /// Irreducibility, checked letter pair by letter pair on
    /// the presentation graph.
    pub fn is_irreducible(&self) -> Irreducibility {
        let g = &self.vgraph;
        let ell = g.ell();
        let mut witnesses = BTreeMap::new();
        for from in 0..self.ap.len() {
            let sources: Vec<usize> =
                (0..g.vertex_count()).filter(|&v| g.word(v)[0] == from).collect();
            let found = shortest_connections(g, &sources, ell);
            for to in 0..self.ap.len() {
                match found.get(&to) {
                    Some(w) => {
                        witnesses.insert((from, to), w.clone());
                    }
                    None => return Irreducibility::Reducible { from, to },
                }
            }
        }
        Irreducibility::Irreducible { witnesses }
    }

    /// trace((A′)^m) for the 1-step recoding of the A′ side.
    pub fn count_periodic(&self, m: usize) -> Result<u128> {
        if m == 0 {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        let mats = self.build_matrices()?;
        let base: Vec<Vec<u128>> = mats
            .a_prime_adj
            .iter()
            .map(|r| r.iter().map(|&x| u128::from(x)).collect())
            .collect();
        let mut acc = base.clone();
        for _ in 1..m {
            acc = mat_mul(&acc, &base)?;
        }
        acc.iter()
            .enumerate()
            .try_fold(0u128, |s, (i, r)| s.checked_add(r[i]).ok_or(Error::Overflow))
    }
}

fn overlap_matrix(rows: &[Vec<Sym>], admissible: impl Fn(&[Sym]) -> bool) -> Vec<Vec<u8>> {
    rows.iter()
        .map(|v| {
            rows.iter()
                .map(|w| {
                    let overlap = v[1..] == w[..w.len() - 1];
                    let mut cat = v.clone();
                    cat.push(*w.last().expect("non-empty"));
                    u8::from(overlap && admissible(&cat))
                })
                .collect()
        })
        .collect()
}

fn mat_mul(x: &[Vec<u128>], y: &[Vec<u128>]) -> Result<Vec<Vec<u128>>> {
    let n = x.len();
    let mut out = vec![vec![0u128; n]; n];
    for i in 0..n {
        for k in 0..n {
            if x[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                let p = x[i][k].checked_mul(y[k][j]).ok_or(Error::Overflow)?;
                out[i][j] = out[i][j].checked_add(p).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(out)
}

/// Breadth-first search from `sources`; for each letter b the shortest label
/// word of length ≥ 2 that starts at a source and ends with b.
fn shortest_connections(g: &VertexGraph, sources: &[usize], ell: usize) -> BTreeMap<Sym, Vec<Sym>> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut origin: Vec<usize> = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut found: BTreeMap<Sym, Vec<Sym>> = BTreeMap::new();
    let path_word = |v: usize, parent: &[Option<usize>], origin: &[usize], zero: bool| {
        let mut chain = vec![v];
        if !zero {
            let mut cur = v;
            while let Some(p) = parent[cur] {
                chain.push(p);
                cur = p;
            }
            chain.push(origin[v]);
        }
        chain.reverse();
        let mut w = g.word(chain[0]).to_vec();
        for &c in &chain[1..] {
            w.push(g.word(c)[ell - 1]);
        }
        w
    };
    if ell >= 2 {
        for &s in sources {
            let last = g.word(s)[ell - 1];
            found.entry(last).or_insert_with(|| g.word(s).to_vec());
        }
    }
    for &s in sources {
        for &t in g.successors(s) {
            if !seen[t] {
                seen[t] = true;
                parent[t] = None;
                origin[t] = s;
                queue.push_back(t);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        let last = g.word(v)[ell - 1];
        found.entry(last).or_insert_with(|| path_word(v, &parent, &origin, false));
        for &t in g.successors(v) {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(v);
                origin[t] = origin[v];
                queue.push_back(t);
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(names: &[&str]) -> Alphabet {
        Alphabet::new(names.iter().copied()).unwrap()
    }

    pub(crate) fn three_letter_sft() -> ZipShiftSpace {
        let f: BTreeSet<Vec<Sym>> = [vec![0, 0], vec![0, 2], vec![1, 0], vec![2, 2]].into();
        let tm = TransitionMap::from_letters(&[0, 1, 1], 2).unwrap();
        ZipShiftSpace::new(letters(&["a", "b"]), letters(&["1", "2", "3"]), tm, Kind::Sft { forbidden: f })
            .unwrap()
    }

    fn even_shift() -> ZipShiftSpace {
        let p = Presentation::new(vec!["I".into(), "J".into()], vec![(0, 0, 1), (0, 1, 0), (1, 0, 0)])
            .unwrap();
        let mut t = BTreeMap::new();
        t.insert(vec![1, 1], 0);
        t.insert(vec![1, 0], 1);
        t.insert(vec![0, 1], 1);
        t.insert(vec![0, 0], 2);
        let tm = TransitionMap::new(2, 3, t).unwrap();
        ZipShiftSpace::new(letters(&["a", "b", "c"]), letters(&["0", "1"]), tm, Kind::Sofic { presentation: p })
            .unwrap()
    }

    #[test]
    fn language_of_pairs() {
        let s = three_letter_sft();
        let w: Vec<Vec<Sym>> = s.words_a_prime(2).into_iter().collect();
        // {12, 22, 23, 31, 32}
        assert_eq!(w, vec![vec![0, 1], vec![1, 1], vec![1, 2], vec![2, 0], vec![2, 1]]);
    }

    #[test]
    fn full_language_single_letters() {
        let s = ZipShiftSpace::full(letters(&["a"]), letters(&["0", "1"]), &[0, 0]).unwrap();
        assert_eq!(s.language(1, Side::APrime).unwrap().len(), 2);
    }

    #[test]
    fn even_shift_words() {
        let s = even_shift();
        assert!(!s.contains_a_prime(&[1, 0, 1]));
        assert!(s.contains_a_prime(&[1, 0, 0, 1]));
        assert!(matches!(s.build_matrices(), Err(Error::NotFiniteType)));
        assert!(matches!(s.count_periodic(2), Err(Error::NotFiniteType)));
    }

    #[test]
    fn matrices_of_three_letter_sft() {
        let m = three_letter_sft().build_matrices().unwrap();
        assert_eq!(m.k, 1);
        assert_eq!(m.a_prime_adj, vec![vec![0, 1, 0], vec![0, 1, 1], vec![1, 1, 0]]);
        assert_eq!(m.a_adj, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(m.t, vec![vec![0, 1, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn full_matrices_are_all_ones() {
        let s = ZipShiftSpace::full(letters(&["a"]), letters(&["0", "1"]), &[0, 0]).unwrap();
        assert_eq!(s.build_matrices().unwrap().a_prime_adj, vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn irreducibility() {
        assert!(three_letter_sft().is_irreducible().holds());
        let full = ZipShiftSpace::full(letters(&["a"]), letters(&["0", "1"]), &[0, 0]).unwrap();
        assert!(full.is_irreducible().holds());
        let f: BTreeSet<Vec<Sym>> = [vec![0, 1], vec![1, 0]].into();
        let tm = TransitionMap::from_letters(&[0, 0], 1).unwrap();
        let split = ZipShiftSpace::new(letters(&["a"]), letters(&["1", "2"]), tm, Kind::Sft { forbidden: f })
            .unwrap();
        assert_eq!(split.is_irreducible(), Irreducibility::Reducible { from: 0, to: 1 });
    }

    #[test]
    fn irreducibility_witnesses_are_admissible() {
        let s = three_letter_sft();
        let Irreducibility::Irreducible { witnesses } = s.is_irreducible() else { panic!() };
        assert_eq!(witnesses.len(), 9);
        for ((a, b), w) in witnesses {
            assert!(w.len() >= 2);
            assert_eq!((w[0], *w.last().unwrap()), (a, b));
            assert!(s.contains_a_prime(&w));
        }
    }

    #[test]
    fn periodic_counts() {
        let s = three_letter_sft();
        assert_eq!(s.count_periodic(1).unwrap(), 1);
        assert_eq!(s.count_periodic(2).unwrap(), 3);
        let four = letters(&["0", "1", "2", "3"]);
        let full = ZipShiftSpace::full(letters(&["a", "b"]), four, &[0, 1, 0, 1]).unwrap();
        assert_eq!(full.count_periodic(2).unwrap(), 16);
    }

    #[test]
    fn superwords_are_pruned() {
        let f: BTreeSet<Vec<Sym>> = [vec![0, 0], vec![1, 0, 0]].into();
        let tm = TransitionMap::from_letters(&[0, 0], 1).unwrap();
        let s = ZipShiftSpace::new(letters(&["a"]), letters(&["x", "y"]), tm, Kind::Sft { forbidden: f })
            .unwrap();
        assert_eq!(s.step(), 1);
        let Kind::Sft { forbidden } = s.kind() else { panic!() };
        assert_eq!(forbidden.len(), 1);
    }

    #[test]
    fn rejects_partial_transition_map() {
        let tm = TransitionMap::new(1, 1, [(vec![0], 0)].into()).unwrap();
        let r = ZipShiftSpace::new(letters(&["a"]), letters(&["x", "y"]), tm, Kind::Full);
        assert!(matches!(r, Err(Error::UndefinedWindow(_))));
    }

    #[test]
    fn rejects_overlapping_alphabets() {
        let r = ZipShiftSpace::full(letters(&["a", "x"]), letters(&["x", "y"]), &[0, 1]);
        assert!(matches!(r, Err(Error::InvalidAlphabet(_))));
        assert!(ZipShiftSpace::classical(letters(&["x", "y"])).is_ok());
    }

    #[test]
    fn mixed_words_straddle_the_boundary() {
        let s = three_letter_sft();
        let m = s.mixed_words(1, 1);
        // T matrix entries: a;2  b;1  b;2  b;3
        assert_eq!(m.len(), 4);
        assert!(s.contains(&Word::mixed(vec![1], vec![0])));
        assert!(!s.contains(&Word::mixed(vec![0], vec![0])));
    }
}
