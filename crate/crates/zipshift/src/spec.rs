//! TOML space and code specification files.
//!
//! A space file:
//!
//! ```toml
//! alphabet_a = ["a", "b"]
//! alphabet_a_prime = ["1", "2", "3"]
//! n = 1
//! kind = "sft"
//! forbidden = ["11", "13", "21", "33"]
//!
//! [phi]
//! "1" = "a"
//! "2" = "b"
//! "3" = "b"
//! ```
//!
//! Sofic spaces replace `forbidden` with a presentation:
//!
//! ```toml
//! [graph]
//! vertices = ["I", "J"]
//! edges = [["I", "I", "1"], ["I", "J", "0"], ["J", "I", "0"]]
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::Spanned;
use zipshift_core::codes::{BlockCode, CodeTables};
use zipshift_core::{Alphabet, Kind, Presentation, Sym, TransitionMap, ZipShiftSpace};

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{col}: {msg}")]
    At { path: String, line: usize, col: usize, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Full,
    Sft,
    Sofic,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    alphabet_a: Vec<String>,
    alphabet_a_prime: Vec<String>,
    n: usize,
    phi: BTreeMap<Spanned<String>, Spanned<String>>,
    kind: SpecKind,
    forbidden: Option<Vec<Spanned<String>>>,
    graph: Option<GraphFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<Spanned<(String, String, String)>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeFile {
    source: Spanned<String>,
    window: usize,
    alphabet_c: Vec<String>,
    alphabet_c_prime: Vec<String>,
    m: Option<Spanned<usize>>,
    psi_plus: BTreeMap<Spanned<String>, Spanned<String>>,
    psi_minus: BTreeMap<Spanned<String>, Spanned<String>>,
    phi_target: Option<BTreeMap<Spanned<String>, Spanned<String>>>,
}

#[derive(Serialize)]
struct SpaceOut<'a> {
    alphabet_a: &'a [String],
    alphabet_a_prime: &'a [String],
    n: usize,
    kind: SpecKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    forbidden: Option<Vec<String>>,
    phi: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<GraphOut>,
}

#[derive(Serialize)]
struct GraphOut {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
}

/// Maps byte offsets to 1-based line and column numbers.
struct Locator<'a> {
    path: &'a str,
    text: &'a str,
}

impl Locator<'_> {
    fn at(&self, offset: usize, msg: impl Into<String>) -> SpecError {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
        SpecError::At { path: self.path.to_string(), line, col, msg: msg.into() }
    }

    fn spanned<T>(&self, s: &Spanned<T>, msg: impl core::fmt::Display) -> SpecError {
        self.at(s.span().start, msg.to_string())
    }

    fn invalid(&self, msg: impl Into<String>) -> SpecError {
        SpecError::Invalid { path: self.path.to_string(), msg: msg.into() }
    }

    fn toml(&self, e: toml::de::Error) -> SpecError {
        let msg = e.message().to_string();
        match e.span() {
            Some(span) => self.at(span.start, msg),
            None => self.invalid(msg),
        }
    }
}

fn read(path: &Path) -> Result<String, SpecError> {
    fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.display().to_string(), source })
}

pub fn load_space(path: &Path) -> Result<ZipShiftSpace, SpecError> {
    parse_space(&read(path)?, &path.display().to_string())
}

/// Parses a space file; `origin` names it in error messages.
pub fn parse_space(text: &str, origin: &str) -> Result<ZipShiftSpace, SpecError> {
    let loc = Locator { path: origin, text };
    let file: SpaceFile = toml::from_str(text).map_err(|e| loc.toml(e))?;
    let a = Alphabet::new(&file.alphabet_a).map_err(|e| loc.invalid(format!("alphabet_a: {e}")))?;
    let ap = Alphabet::new(&file.alphabet_a_prime).map_err(|e| loc.invalid(format!("alphabet_a_prime: {e}")))?;
    let tm = transition_map(&loc, &file.phi, file.n, &ap, &a, "phi")?;

    let kind = match file.kind {
        SpecKind::Full => {
            if file.forbidden.is_some() || file.graph.is_some() {
                return Err(loc.invalid("a full space takes neither `forbidden` nor `graph`"));
            }
            Kind::Full
        }
        SpecKind::Sft => {
            if file.graph.is_some() {
                return Err(loc.invalid("`graph` is only allowed for sofic spaces"));
            }
            let mut forbidden = BTreeSet::new();
            for w in file.forbidden.iter().flatten() {
                let word = ap.parse_word(w.get_ref()).map_err(|e| loc.spanned(w, e))?;
                forbidden.insert(word);
            }
            Kind::Sft { forbidden }
        }
        SpecKind::Sofic => {
            if file.forbidden.is_some() {
                return Err(loc.invalid("`forbidden` is only allowed for sft spaces"));
            }
            let g = file.graph.as_ref().ok_or_else(|| loc.invalid("a sofic space needs a `graph`"))?;
            let states = Alphabet::new(&g.vertices).map_err(|e| loc.invalid(format!("graph.vertices: {e}")))?;
            let mut edges = Vec::new();
            for e in &g.edges {
                let (from, to, label) = e.get_ref();
                let from = states.symbol(from).map_err(|err| loc.spanned(e, err))?;
                let to = states.symbol(to).map_err(|err| loc.spanned(e, err))?;
                let label = ap.symbol(label).map_err(|err| loc.spanned(e, err))?;
                edges.push((from, to, label));
            }
            let presentation =
                Presentation::new(g.vertices.clone(), edges).map_err(|e| loc.invalid(e.to_string()))?;
            Kind::Sofic { presentation }
        }
    };
    ZipShiftSpace::new(a, ap, tm, kind).map_err(|e| loc.invalid(e.to_string()))
}

fn transition_map(
    loc: &Locator<'_>,
    table: &BTreeMap<Spanned<String>, Spanned<String>>,
    n: usize,
    domain: &Alphabet,
    codomain: &Alphabet,
    key: &str,
) -> Result<TransitionMap, SpecError> {
    let mut map = BTreeMap::new();
    for (k, v) in table {
        let word = domain.parse_word(k.get_ref()).map_err(|e| loc.spanned(k, e))?;
        if word.len() != n {
            return Err(loc.spanned(k, format!("{key} key has length {} but n = {n}", word.len())));
        }
        let img = codomain.symbol(v.get_ref().trim()).map_err(|e| loc.spanned(v, e))?;
        if map.insert(word, img).is_some() {
            return Err(loc.spanned(k, format!("duplicate {key} entry")));
        }
    }
    TransitionMap::new(n, codomain.len(), map).map_err(|e| loc.invalid(format!("{key}: {e}")))
}

/// Renders a space in the file format accepted by [`parse_space`].
pub fn space_to_toml(space: &ZipShiftSpace) -> String {
    let a = space.alphabet_a();
    let ap = space.alphabet_a_prime();
    let phi = space
        .tm()
        .table()
        .iter()
        .map(|(w, &s)| (ap.format_word(w), a.name(s).to_string()))
        .collect();
    let (kind, forbidden, graph) = match space.kind() {
        Kind::Full => (SpecKind::Full, None, None),
        Kind::Sft { forbidden } => {
            (SpecKind::Sft, Some(forbidden.iter().map(|w| ap.format_word(w)).collect()), None)
        }
        Kind::Sofic { presentation } => {
            let edges = presentation
                .edges
                .iter()
                .map(|&(i, j, l)| {
                    (presentation.states[i].clone(), presentation.states[j].clone(), ap.name(l).to_string())
                })
                .collect();
            (SpecKind::Sofic, None, Some(GraphOut { vertices: presentation.states.clone(), edges }))
        }
    };
    let out = SpaceOut {
        alphabet_a: a.names(),
        alphabet_a_prime: ap.names(),
        n: space.n(),
        kind,
        forbidden,
        phi,
        graph,
    };
    toml::to_string(&out).expect("space files always serialize")
}

/// Loads a code file. Its `source` path is resolved relative to the file.
pub fn load_code(path: &Path) -> Result<BlockCode, SpecError> {
    let text = read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_code(&text, &path.display().to_string(), &base, true)
}

pub fn parse_code(text: &str, origin: &str, base: &Path, checked: bool) -> Result<BlockCode, SpecError> {
    let (source, tables, m) = code_parts(text, origin, base)?;
    let loc = Locator { path: origin, text };
    let code = if checked {
        BlockCode::new(source, tables)
    } else {
        BlockCode::new_unchecked(source, tables)
    }
    .map_err(|e| loc.invalid(e.to_string()))?;
    if let Some(m) = &m {
        if code.target().n() != *m.get_ref() {
            return Err(loc.spanned(m, format!("the tables give m = {}", code.target().n())));
        }
    }
    Ok(code)
}

/// The source space and raw tables of a code file, without validation of
/// the tables against each other.
pub fn parse_code_tables(
    text: &str,
    origin: &str,
    base: &Path,
) -> Result<(ZipShiftSpace, CodeTables), SpecError> {
    code_parts(text, origin, base).map(|(s, t, _)| (s, t))
}

type CodeParts = (ZipShiftSpace, CodeTables, Option<Spanned<usize>>);

fn code_parts(text: &str, origin: &str, base: &Path) -> Result<CodeParts, SpecError> {
    let loc = Locator { path: origin, text };
    let file: CodeFile = toml::from_str(text).map_err(|e| loc.toml(e))?;
    let source_path: PathBuf = base.join(file.source.get_ref());
    let source = load_space(&source_path)?;
    let ap = source.alphabet_a_prime();
    let a = source.alphabet_a();
    let c = Alphabet::new(&file.alphabet_c).map_err(|e| loc.invalid(format!("alphabet_c: {e}")))?;
    let c_prime = Alphabet::new(&file.alphabet_c_prime).map_err(|e| loc.invalid(format!("alphabet_c_prime: {e}")))?;

    let mut psi_plus = BTreeMap::new();
    for (k, v) in &file.psi_plus {
        let w = ap.parse_word(k.get_ref()).map_err(|e| loc.spanned(k, e))?;
        if w.len() != file.window {
            return Err(loc.spanned(k, format!("psi_plus key has length {} but window = {}", w.len(), file.window)));
        }
        let img = c_prime.symbol(v.get_ref().trim()).map_err(|e| loc.spanned(v, e))?;
        psi_plus.insert(w, img);
    }
    let mut psi_minus = BTreeMap::new();
    for (k, v) in &file.psi_minus {
        let (left, right) = k
            .get_ref()
            .split_once(';')
            .ok_or_else(|| loc.spanned(k, "psi_minus keys look like \"a ; 0 1\""))?;
        let x: Sym = a.symbol(left.trim()).map_err(|e| loc.spanned(k, e))?;
        let w = ap.parse_word(right).map_err(|e| loc.spanned(k, e))?;
        if w.len() != file.window {
            return Err(loc.spanned(k, format!("psi_minus key has length {} but window = {}", w.len(), file.window)));
        }
        let img = c.symbol(v.get_ref().trim()).map_err(|e| loc.spanned(v, e))?;
        psi_minus.insert((x, w), img);
    }
    let phi_target = match &file.phi_target {
        Some(table) => {
            let m = table
                .keys()
                .next()
                .map(|k| c_prime.parse_word(k.get_ref()).map(|w| w.len()))
                .transpose()
                .map_err(|e| loc.invalid(format!("phi_target: {e}")))?
                .ok_or_else(|| loc.invalid("phi_target is empty"))?;
            Some(transition_map(&loc, table, m, &c_prime, &c, "phi_target")?)
        }
        None => None,
    };
    Ok((source, CodeTables { window: file.window, c, c_prime, psi_plus, psi_minus, phi_target }, file.m))
}
