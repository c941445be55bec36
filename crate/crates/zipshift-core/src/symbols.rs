//! Alphabets, words and the transition map φₙ.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// Index of a symbol inside its alphabet.
pub type Sym = usize;

/// An ordered list of distinct symbol names. The declared order is the order
/// used everywhere (matrices, sorting, tie-breaking).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ';' | '*'))
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !valid_name(n) {
                return Err(Error::InvalidAlphabet(format!("bad symbol name `{n}`")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<Sym> {
        self.names.iter().position(|n| n == name)
    }

    pub fn symbol(&self, name: &str) -> Result<Sym> {
        self.index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Parses a word. Tokens are whitespace separated; a token that is not a
    /// symbol is split greedily into the longest matching symbol names, so
    /// `10'1'` reads as `1 0' 1'`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if let Some(s) = self.index(tok) {
                out.push(s);
                continue;
            }
            let mut rest = tok;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, n)) => {
                        out.push(i);
                        rest = &rest[n.len()..];
                    }
                    None => return Err(Error::UnknownSymbol(rest.to_string())),
                }
            }
        }
        Ok(out)
    }

    /// Symbols concatenated without separators (`00'1`).
    pub fn format_word(&self, w: &[Sym]) -> String {
        w.iter().map(|&s| self.name(s)).collect()
    }

    /// Symbols separated by single spaces (`0 0' 1`).
    pub fn format_spaced(&self, w: &[Sym]) -> String {
        let parts: Vec<&str> = w.iter().map(|&s| self.name(s)).collect();
        parts.join(" ")
    }

    /// All words of length `k` in lexicographic order.
    pub fn all_words(&self, k: usize) -> Vec<Vec<Sym>> {
        let mut out = alloc::vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(out.len() * self.len());
            for w in &out {
                for s in 0..self.len() {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}


/// Which alphabet a word (or a language query) refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    APrime,
    Mixed,
}

/// A finite word: A-letters followed by A′-letters. A word with both parts
/// non-empty is mixed and models a block straddling the −1|0 boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub a: Vec<Sym>,
    pub ap: Vec<Sym>,
}

impl Word {
    pub fn over_a(a: Vec<Sym>) -> Self {
        Self { a, ap: Vec::new() }
    }

    pub fn over_a_prime(ap: Vec<Sym>) -> Self {
        Self { a: Vec::new(), ap }
    }

    pub fn mixed(a: Vec<Sym>, ap: Vec<Sym>) -> Self {
        Self { a, ap }
    }

    pub fn len(&self) -> usize {
        self.a.len() + self.ap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_mixed(&self) -> bool {
        !self.a.is_empty() && !self.ap.is_empty()
    }

    pub fn side(&self) -> Side {
        if self.is_mixed() {
            Side::Mixed
        } else if self.ap.is_empty() && !self.a.is_empty() {
            Side::A
        } else {
            Side::APrime
        }
    }

    /// `a-part ; a′-part` for mixed words, plain concatenation otherwise.
    pub fn format(&self, a: &Alphabet, ap: &Alphabet) -> String {
        match self.side() {
            Side::A => a.format_word(&self.a),
            Side::APrime => ap.format_word(&self.ap),
            Side::Mixed => format!("{};{}", a.format_word(&self.a), ap.format_word(&self.ap)),
        }
    }
}

/// The factor map φₙ from admissible n-words over A′ onto A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMap {
    n: usize,
    codomain: usize,
    table: BTreeMap<Vec<Sym>, Sym>,
}

impl TransitionMap {
    /// `codomain` is |A|. Domain checks against a language happen when a
    /// space is built; here only shapes are validated.
    pub fn new(n: usize, codomain: usize, table: BTreeMap<Vec<Sym>, Sym>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("transition window n must be positive".into()));
        }
        for (k, &v) in &table {
            if k.len() != n {
                return Err(Error::InvalidSpace(format!(
                    "transition key {k:?} has length {} instead of {n}",
                    k.len()
                )));
            }
            if v >= codomain {
                return Err(Error::InvalidSpace(format!("transition value {v} outside A")));
            }
        }
        Ok(Self { n, codomain, table })
    }

    /// A 1-block map given letter by letter.
    pub fn from_letters(images: &[Sym], codomain: usize) -> Result<Self> {
        let table = images
            .iter()
            .enumerate()
            .map(|(i, &a)| (alloc::vec![i], a))
            .collect();
        Self::new(1, codomain, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn table(&self) -> &BTreeMap<Vec<Sym>, Sym> {
        &self.table
    }

    pub fn domain(&self) -> impl Iterator<Item = &Vec<Sym>> {
        self.table.keys()
    }

    pub fn apply(&self, window: &[Sym]) -> Option<Sym> {
        self.table.get(window).copied()
    }

    pub fn is_onto(&self) -> bool {
        let hit: BTreeSet<Sym> = self.table.values().copied().collect();
        hit.len() == self.codomain
    }

    /// Letter i of the output is φₙ of the window starting at i.
    pub fn extend(&self, w: &[Sym]) -> Result<Vec<Sym>> {
        if w.len() < self.n {
            return Ok(Vec::new());
        }
        w.windows(self.n)
            .map(|win| {
                self.apply(win)
                    .ok_or_else(|| Error::UndefinedWindow(format!("{win:?}")))
            })
            .collect()
    }

    /// All domain words mapped to `a`, in lexicographic order.
    pub fn preimages(&self, a: Sym) -> Result<Vec<Vec<Sym>>> {
        if a >= self.codomain {
            return Err(Error::UnknownSymbol(format!("#{a}")));
        }
        Ok(self
            .table
            .iter()
            .filter(|(_, &v)| v == a)
            .map(|(k, _)| k.clone())
            .collect())
    }
}

/// Free-function form of [`TransitionMap::extend`].
pub fn phi_extend(tm: &TransitionMap, w: &[Sym]) -> Result<Vec<Sym>> {
    tm.extend(w)
}

/// Free-function form of [`TransitionMap::preimages`].
pub fn phi_preimages(tm: &TransitionMap, a: Sym) -> Result<Vec<Vec<Sym>>> {
    tm.preimages(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ex21() -> (Alphabet, TransitionMap) {
        let ap = Alphabet::new(["1", "2", "3"]).unwrap();
        (ap, TransitionMap::from_letters(&[0, 1, 1], 2).unwrap())
    }

    fn even() -> TransitionMap {
        let mut t = BTreeMap::new();
        t.insert(vec![1, 1], 0);
        t.insert(vec![1, 0], 1);
        t.insert(vec![0, 1], 1);
        t.insert(vec![0, 0], 2);
        TransitionMap::new(2, 3, t).unwrap()
    }

    #[test]
    fn extend_identity() {
        let tm = TransitionMap::from_letters(&[0, 1, 2], 3).unwrap();
        assert_eq!(tm.extend(&[0, 1, 1]).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn extend_example_letters() {
        let (ap, tm) = ex21();
        let w = ap.parse_word("3 1 2 2 3").unwrap();
        // b a b b b
        assert_eq!(tm.extend(&w).unwrap(), vec![1, 0, 1, 1, 1]);
    }

    #[test]
    fn extend_two_windows() {
        // 1 1 0 0 -> a b c
        assert_eq!(even().extend(&[1, 1, 0, 0]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn extend_reports_missing_window() {
        let mut t = BTreeMap::new();
        t.insert(vec![0, 0], 0);
        let tm = TransitionMap::new(2, 1, t).unwrap();
        assert!(matches!(tm.extend(&[0, 0, 1]), Err(Error::UndefinedWindow(_))));
    }

    #[test]
    fn preimages_of_letters() {
        let (_, tm) = ex21();
        assert_eq!(tm.preimages(1).unwrap(), vec![vec![1], vec![2]]);
        let id = TransitionMap::from_letters(&[0, 1], 2).unwrap();
        assert_eq!(id.preimages(0).unwrap(), vec![vec![0]]);
        assert_eq!(even().preimages(1).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(tm.preimages(7), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
        assert!(Alphabet::new(["(x"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn greedy_word_parsing() {
        let ap = Alphabet::new(["0", "1", "0'", "1'"]).unwrap();
        assert_eq!(ap.parse_word("10'1'").unwrap(), vec![1, 2, 3]);
        assert_eq!(ap.parse_word("1 0' 1'").unwrap(), vec![1, 2, 3]);
        assert_eq!(ap.format_word(&[1, 2, 3]), "10'1'");
        assert!(ap.parse_word("2").is_err());
    }

    #[test]
    fn all_words_in_order() {
        let ap = Alphabet::new(["x", "y"]).unwrap();
        assert_eq!(
            ap.all_words(2),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }
}
