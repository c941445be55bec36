//! Labeled graphs for zip shift spaces, vertex-like graphs,
//! backward graphs and DOT export.
//!
//! Internally every space is carried by a [`VertexGraph`]: vertices are
//! words of a common length ℓ (labels may repeat), and an edge `u → v` always
//! satisfies `word(v) = word(u)[1..] + last(v)`. A bi-infinite walk spells a
//! sequence of A′ letters; the walk's vertex at position i is the ℓ-window
//! starting at i.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::symbols::{Alphabet, Sym, TransitionMap};
use crate::{Error, Result};

/// An edge-labeled graph over A′, the usual presentation of a sofic shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub states: Vec<String>,
    /// `(from, to, label)`
    pub edges: Vec<(usize, usize, Sym)>,
}

impl Presentation {
    pub fn new(states: Vec<String>, edges: Vec<(usize, usize, Sym)>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidSpace("presentation has no states".into()));
        }
        for &(i, j, _) in &edges {
            if i >= states.len() || j >= states.len() {
                return Err(Error::InvalidSpace(format!("edge ({i}, {j}) refers to a missing state")));
            }
        }
        Ok(Self { states, edges })
    }
}

/// Splits initial states of parallel edges so that no two edges share both
/// endpoints. States are processed in id order; a state with at most k
/// parallel edges to a common target becomes k copies (copy 0 keeps the id,
/// further copies are appended). The k-th parallel edge leaves copy k and
/// every copy inherits all incoming edges.
pub fn split_parallel(p: &Presentation) -> Presentation {
    let n = p.states.len();
    let mut copies = vec![1usize; n];
    let mut slot = vec![0usize; p.edges.len()];
    for (s, copies_s) in copies.iter_mut().enumerate() {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for (ei, &(i, j, _)) in p.edges.iter().enumerate() {
            if i == s {
                let c = count.entry(j).or_insert(0);
                slot[ei] = *c;
                *c += 1;
                *copies_s = (*copies_s).max(*c);
            }
        }
    }
    let mut states = p.states.clone();
    let mut ids: Vec<Vec<usize>> = (0..n).map(|s| vec![s]).collect();
    for s in 0..n {
        for k in 1..copies[s] {
            ids[s].push(states.len());
            states.push(format!("{}#{k}", p.states[s]));
        }
    }
    let mut edges = Vec::new();
    for (ei, &(i, j, l)) in p.edges.iter().enumerate() {
        let from = ids[i][slot[ei]];
        for &to in &ids[j] {
            edges.push((from, to, l));
        }
    }
    Presentation { states, edges }
}

/// Vertex graph whose vertices are words of a common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexGraph {
    words: Vec<Vec<Sym>>,
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl VertexGraph {
    pub fn new(words: Vec<Vec<Sym>>, edges: Vec<(usize, usize)>) -> Self {
        let mut succ = vec![Vec::new(); words.len()];
        let mut pred = vec![Vec::new(); words.len()];
        for &(u, v) in &edges {
            succ[u].push(v);
            pred[v].push(u);
        }
        Self { words, edges, succ, pred }
    }

    /// The complete ℓ-block graph on `k` letters.
    pub fn complete(k: usize, ell: usize) -> Self {
        Self::sft(k, &BTreeSet::new(), ell)
    }

    /// The ℓ-block graph of the shift avoiding `forbidden`, before pruning.
    pub fn sft(k: usize, forbidden: &BTreeSet<Vec<Sym>>, ell: usize) -> Self {
        let longest = forbidden.iter().map(Vec::len).max().unwrap_or(0);
        let clean_end = |w: &[Sym]| {
            (1..=longest.min(w.len())).all(|l| !forbidden.contains(&w[w.len() - l..]))
        };
        let mut words: Vec<Vec<Sym>> = vec![Vec::new()];
        for _ in 0..ell {
            let mut next = Vec::new();
            for w in &words {
                for s in 0..k {
                    let mut v = w.clone();
                    v.push(s);
                    if clean_end(&v) {
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        let index: BTreeMap<&[Sym], usize> =
            words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut edges = Vec::new();
        for (u, w) in words.iter().enumerate() {
            for s in 0..k {
                let mut v = w.clone();
                v.push(s);
                if clean_end(&v) {
                    if let Some(&t) = index.get(&v[1..]) {
                        edges.push((u, t));
                    }
                }
            }
        }
        Self::new(words, edges)
    }

    pub fn ell(&self) -> usize {
        self.words.first().map_or(0, Vec::len)
    }

    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, v: usize) -> &[Sym] {
        &self.words[v]
    }

    pub fn words_of_vertices(&self) -> &[Vec<Sym>] {
        &self.words
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    /// Removes vertices that cannot lie on a bi-infinite walk. Surviving
    /// vertices keep their relative order.
    pub fn essential(&self) -> Self {
        let n = self.words.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] {
                    continue;
                }
                let has_out = self.succ[v].iter().any(|&w| alive[w]);
                let has_in = self.pred[v].iter().any(|&w| alive[w]);
                if !has_out || !has_in {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut words = Vec::new();
        for v in 0..n {
            if alive[v] {
                remap[v] = words.len();
                words.push(self.words[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| alive[u] && alive[v])
            .map(|&(u, v)| (remap[u], remap[v]))
            .collect();
        Self::new(words, edges)
    }

    /// The graph of (ℓ+1)-words: one vertex per edge, one edge per path of
    /// length two.
    pub fn extend_once(&self) -> Self {
        let words: Vec<Vec<Sym>> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let mut w = self.words[u].clone();
                w.push(*self.words[v].last().expect("non-empty vertex word"));
                w
            })
            .collect();
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); self.words.len()];
        for (i, &(u, _)) in self.edges.iter().enumerate() {
            by_source[u].push(i);
        }
        let mut edges = Vec::new();
        for (i, &(_, v)) in self.edges.iter().enumerate() {
            for &j in &by_source[v] {
                edges.push((i, j));
            }
        }
        Self::new(words, edges)
    }

    pub fn with_length(&self, ell: usize) -> Self {
        let mut g = self.clone();
        while g.ell() < ell {
            g = g.extend_once();
        }
        g
    }

    /// Vertices `v` with `word(v) == w` (several for vertex-like graphs).
    pub fn vertices_with_word(&self, w: &[Sym]) -> Vec<usize> {
        (0..self.words.len()).filter(|&v| self.words[v] == w).collect()
    }

    /// Whether `w` labels some walk. On an essential graph this is exactly
    /// membership in the language of the presented shift.
    pub fn contains(&self, w: &[Sym]) -> bool {
        let ell = self.ell();
        if w.len() <= ell {
            return self.words.iter().any(|v| v.starts_with(w));
        }
        let mut cur: BTreeSet<usize> = self.vertices_with_word(&w[..ell]).into_iter().collect();
        for &s in &w[ell..] {
            cur = cur
                .iter()
                .flat_map(|&u| self.succ[u].iter().copied())
                .filter(|&v| self.words[v][ell - 1] == s)
                .collect();
            if cur.is_empty() {
                return false;
            }
        }
        !cur.is_empty()
    }

    /// All words of length `k` labelling walks, in lexicographic order.
    pub fn words(&self, k: usize) -> BTreeSet<Vec<Sym>> {
        let ell = self.ell();
        if k <= ell {
            return self.words.iter().map(|w| w[..k].to_vec()).collect();
        }
        let mut cur: BTreeSet<(usize, Vec<Sym>)> = self
            .words
            .iter()
            .enumerate()
            .map(|(v, w)| (v, w.clone()))
            .collect();
        for _ in ell..k {
            let mut next = BTreeSet::new();
            for (u, w) in &cur {
                for &v in &self.succ[*u] {
                    let mut x = w.clone();
                    x.push(self.words[v][ell - 1]);
                    next.insert((v, x));
                }
            }
            cur = next;
        }
        cur.into_iter().map(|(_, w)| w).collect()
    }
}

/// A vertex-like graph presenting the same shift. Parallel edges
/// are separated first (see [`split_parallel`]); then every edge becomes a
/// vertex labeled by the edge's letter.
pub fn vertex_like(p: &Presentation) -> VertexGraph {
    let g = split_parallel(p);
    let words = g.edges.iter().map(|&(_, _, l)| vec![l]).collect();
    let mut edges = Vec::new();
    for (i, &(_, t, _)) in g.edges.iter().enumerate() {
        for (j, &(s, _, _)) in g.edges.iter().enumerate() {
            if t == s {
                edges.push((i, j));
            }
        }
    }
    VertexGraph::new(words, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// A′ letter (`first` part of the label).
    pub first: Sym,
    /// A letter (`sofic` part of the label).
    pub sofic: Sym,
}

/// A graph with word-labeled vertices and `first/sofic` labeled edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub vertices: Vec<Vec<Sym>>,
    /// Presentation state names, used only by the state route for sofic
    /// spaces with n = 1 (vertex words are empty there).
    pub state_names: Vec<String>,
    pub edges: Vec<Edge>,
    pub reversed: bool,
}

impl LabeledGraph {
    /// Labels every edge `u → v` of a vertex graph with
    /// `last(v) / φₙ(first n letters of word(u)·last(v))`.
    pub fn from_vertex_graph(g: &VertexGraph, tm: &TransitionMap) -> Result<Self> {
        let n = tm.n();
        if g.ell() + 1 < n {
            return Err(Error::InvalidSpace(format!(
                "vertex words of length {} are too short for a window of {n}",
                g.ell()
            )));
        }
        let mut edges = Vec::with_capacity(g.edges().len());
        for &(u, v) in g.edges() {
            let first = g.word(v)[g.ell() - 1];
            let mut w = g.word(u).to_vec();
            w.push(first);
            let sofic = tm
                .apply(&w[..n])
                .ok_or_else(|| Error::UndefinedWindow(format!("{:?}", &w[..n])))?;
            edges.push(Edge { from: u, to: v, first, sofic });
        }
        Ok(Self {
            vertices: g.words_of_vertices().to_vec(),
            state_names: Vec::new(),
            edges,
            reversed: false,
        })
    }

    /// The labeled-graph route for n = 1: presentation states as vertices,
    /// each edge `a′` relabeled `a′/φ₁(a′)`.
    pub fn from_presentation(p: &Presentation, tm: &TransitionMap) -> Result<Self> {
        if tm.n() != 1 {
            return Err(Error::InvalidArgument("the state route needs n = 1".into()));
        }
        let edges = p
            .edges
            .iter()
            .map(|&(i, j, l)| {
                let sofic = tm
                    .apply(&[l])
                    .ok_or_else(|| Error::UndefinedWindow(format!("[{l}]")))?;
                Ok(Edge { from: i, to: j, first: l, sofic })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            vertices: vec![Vec::new(); p.states.len()],
            state_names: p.states.clone(),
            edges,
            reversed: false,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from].push(i);
        }
        out
    }

    pub fn in_edges(&self) -> Vec<Vec<usize>> {
        let mut inn = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inn[e.to].push(i);
        }
        inn
    }

    pub fn is_essential(&self) -> bool {
        let out = self.out_edges();
        let inn = self.in_edges();
        (0..self.vertices.len()).all(|v| !out[v].is_empty() && !inn[v].is_empty())
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let reach = |fwd: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for e in &self.edges {
                    let (a, b) = if fwd { (e.from, e.to) } else { (e.to, e.from) };
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    fn vertex_label(&self, v: usize, ap: &Alphabet) -> String {
        match self.state_names.get(v) {
            Some(name) => name.clone(),
            None => ap.format_word(&self.vertices[v]),
        }
    }
}

/// Reverses every edge, keeping labels. Applying it twice gives back the
/// original graph.
pub fn backward(g: &LabeledGraph) -> LabeledGraph {
    LabeledGraph {
        vertices: g.vertices.clone(),
        state_names: g.state_names.clone(),
        edges: g
            .edges
            .iter()
            .map(|e| Edge { from: e.to, to: e.from, ..*e })
            .collect(),
        reversed: !g.reversed,
    }
}

fn dot_id(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        String::from(s)
    } else {
        let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
        format!("\"{escaped}\"")
    }
}

/// DOT text: node `v<id>_<label>`, edge attribute `label="<first>/<sofic>"`.
pub fn export_dot(g: &LabeledGraph, a: &Alphabet, ap: &Alphabet) -> String {
    let name = if g.reversed { "backward" } else { "labeled" };
    let node = |v: usize| dot_id(&format!("v{v}_{}", g.vertex_label(v, ap)));
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    for v in 0..g.vertices.len() {
        let _ = writeln!(out, "  {};", node(v));
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}/{}\"];",
            node(e.from),
            node(e.to),
            ap.name(e.first),
            a.name(e.sofic)
        );
    }
    out.push_str("}\n");
    out
}
