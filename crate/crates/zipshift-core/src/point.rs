//! Eventually periodic points, the zip shift map and the metrics d, d⁺, d⁻, d±.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::preimage::{left_viable_from, right_live_starts};
use crate::symbols::{Alphabet, Sym};
use crate::{Error, Result, ZipShiftSpace};

/// `(Q)* L ; T (P)*`: left period Q and transient L over A, right transient T
/// and period P over A′. Always kept in canonical form, so structural
/// equality is equality of sequences.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpPoint {
    left_period: Vec<Sym>,
    left_transient: Vec<Sym>,
    right_transient: Vec<Sym>,
    right_period: Vec<Sym>,
}

fn primitive_root(w: &[Sym]) -> Vec<Sym> {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (0..n).all(|i| w[i] == w[i % p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

impl EpPoint {
    pub fn new(
        left_period: Vec<Sym>,
        left_transient: Vec<Sym>,
        right_transient: Vec<Sym>,
        right_period: Vec<Sym>,
    ) -> Result<Self> {
        if left_period.is_empty() || right_period.is_empty() {
            return Err(Error::InvalidArgument("periods must be non-empty".into()));
        }
        let mut p = Self { left_period, left_transient, right_transient, right_period };
        p.canonicalize();
        Ok(p)
    }

    /// Both sides purely periodic.
    pub fn periodic(left_period: Vec<Sym>, right_period: Vec<Sym>) -> Result<Self> {
        Self::new(left_period, Vec::new(), Vec::new(), right_period)
    }

    fn canonicalize(&mut self) {
        self.left_period = primitive_root(&self.left_period);
        self.right_period = primitive_root(&self.right_period);
        while self.right_transient.last() == self.right_period.last() {
            self.right_transient.pop();
            self.right_period.rotate_right(1);
        }
        while !self.left_transient.is_empty() && self.left_transient[0] == self.left_period[0] {
            self.left_transient.remove(0);
            self.left_period.rotate_left(1);
        }
    }

    pub fn left_period(&self) -> &[Sym] {
        &self.left_period
    }

    pub fn left_transient(&self) -> &[Sym] {
        &self.left_transient
    }

    pub fn right_transient(&self) -> &[Sym] {
        &self.right_transient
    }

    pub fn right_period(&self) -> &[Sym] {
        &self.right_period
    }

    /// x_i. Negative indices give A-letters, the rest A′-letters.
    pub fn get(&self, i: i64) -> Sym {
        if i >= 0 {
            let i = i as usize;
            let t = &self.right_transient;
            if i < t.len() {
                t[i]
            } else {
                self.right_period[(i - t.len()) % self.right_period.len()]
            }
        } else {
            let j = i.unsigned_abs() as usize;
            let l = &self.left_transient;
            if j <= l.len() {
                l[l.len() - j]
            } else {
                let q = &self.left_period;
                q[q.len() - 1 - (j - l.len() - 1) % q.len()]
            }
        }
    }

    /// x₀ … x_{len−1}.
    pub fn right_window(&self, len: usize) -> Vec<Sym> {
        (0..len as i64).map(|i| self.get(i)).collect()
    }

    /// x_{−len} … x_{−1}.
    pub fn left_window(&self, len: usize) -> Vec<Sym> {
        (1..=len as i64).rev().map(|j| self.get(-j)).collect()
    }

    /// The right side as a lasso: (transient, cycle).
    pub fn right_lasso(&self) -> (Vec<Sym>, Vec<Sym>) {
        (self.right_transient.clone(), self.right_period.clone())
    }

    /// The left side read outward from x_{−1}: (transient, cycle).
    pub fn left_lasso(&self) -> (Vec<Sym>, Vec<Sym>) {
        let mut t = self.left_transient.clone();
        t.reverse();
        let mut c = self.left_period.clone();
        c.reverse();
        (t, c)
    }

    /// Builds a point from lassos in the orientation of [`Self::left_lasso`]
    /// and [`Self::right_lasso`].
    pub fn from_lassos(left: (Vec<Sym>, Vec<Sym>), right: (Vec<Sym>, Vec<Sym>)) -> Result<Self> {
        let (mut lt, mut lc) = left;
        lt.reverse();
        lc.reverse();
        Self::new(lc, lt, right.0, right.1)
    }

    /// Drops x_{−1} and puts `t` in front of the right side: the shape of a
    /// σ-preimage.
    pub fn with_new_origin(&self, t: Sym) -> Self {
        let mut p = self.clone();
        if p.left_transient.pop().is_none() {
            p.left_period.rotate_right(1);
        }
        p.right_transient.insert(0, t);
        p.canonicalize();
        p
    }

    /// Bound past which both sides of `self` and `other` are periodic with a
    /// common period: (left bound, right bound).
    fn agreement_bounds(&self, other: &Self) -> (usize, usize) {
        let l = self.left_transient.len().max(other.left_transient.len())
            + self.left_period.len().lcm(&other.left_period.len());
        let r = self.right_transient.len().max(other.right_transient.len())
            + self.right_period.len().lcm(&other.right_period.len());
        (l, r)
    }

    /// First i ≥ 0 with a difference.
    pub fn first_right_difference(&self, other: &Self) -> Option<usize> {
        let (_, r) = self.agreement_bounds(other);
        (0..r).find(|&i| self.get(i as i64) != other.get(i as i64))
    }

    /// First j ≥ 1 with x_{−j} different.
    pub fn first_left_difference(&self, other: &Self) -> Option<usize> {
        let (l, _) = self.agreement_bounds(other);
        (1..=l).find(|&j| self.get(-(j as i64)) != other.get(-(j as i64)))
    }

    pub fn parse(text: &str, a: &Alphabet, ap: &Alphabet) -> Result<Self> {
        let spaced = text.replace(")*", " )* ").replace('(', " ( ").replace(';', " ; ");
        let toks: Vec<&str> = spaced.split_whitespace().collect();
        let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.into() };
        let mut i = 0;
        let expect = |i: &mut usize, tok: &str| -> Result<()> {
            if toks.get(*i) == Some(&tok) {
                *i += 1;
                Ok(())
            } else {
                Err(err(*i, &format!("expected `{tok}`")))
            }
        };
        let collect = |i: &mut usize| -> Vec<&str> {
            let start = *i;
            while *i < toks.len() && !matches!(toks[*i], "(" | ")*" | ";") {
                *i += 1;
            }
            toks[start..*i].to_vec()
        };
        let word = |parts: &[&str], alpha: &Alphabet| alpha.parse_word(&parts.join(" "));
        expect(&mut i, "(")?;
        let q = word(&collect(&mut i), a)?;
        expect(&mut i, ")*")?;
        let l = word(&collect(&mut i), a)?;
        expect(&mut i, ";")?;
        let t = word(&collect(&mut i), ap)?;
        expect(&mut i, "(")?;
        let p = word(&collect(&mut i), ap)?;
        expect(&mut i, ")*")?;
        if i != toks.len() {
            return Err(err(i, "trailing input"));
        }
        if q.is_empty() || p.is_empty() {
            return Err(err(i, "empty period"));
        }
        Self::new(q, l, t, p)
    }

    /// `(a b)* b a ; 1 (0 1')*`
    pub fn format(&self, a: &Alphabet, ap: &Alphabet) -> String {
        let mut s = format!("({})*", a.format_spaced(&self.left_period));
        for &x in &self.left_transient {
            let _ = write!(s, " {}", a.name(x));
        }
        s.push_str(" ; ");
        for &x in &self.right_transient {
            let _ = write!(s, "{} ", ap.name(x));
        }
        let _ = write!(s, "({})*", ap.format_spaced(&self.right_period));
        s
    }
}

/// σ: the right side moves one step left and φₙ(x₀…x_{n−1}) becomes x_{−1}.
pub fn shift(space: &ZipShiftSpace, x: &EpPoint) -> Result<EpPoint> {
    let window = x.right_window(space.n());
    let a = space
        .tm()
        .apply(&window)
        .ok_or_else(|| Error::UndefinedWindow(space.alphabet_a_prime().format_word(&window)))?;
    let mut y = x.clone();
    y.left_transient.push(a);
    if y.right_transient.is_empty() {
        y.right_period.rotate_left(1);
    } else {
        y.right_transient.remove(0);
    }
    y.canonicalize();
    Ok(y)
}

pub fn shift_k(space: &ZipShiftSpace, x: &EpPoint, k: usize) -> Result<EpPoint> {
    let mut y = x.clone();
    for _ in 0..k {
        y = shift(space, &y)?;
    }
    Ok(y)
}

/// Distances between two points, exact. The `n*` fields hold the exponents
/// (None when the relevant sides agree everywhere).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub n: Option<usize>,
    pub n_plus: Option<usize>,
    pub n_minus: Option<usize>,
    pub d: BigRational,
    pub d_plus: BigRational,
    pub d_minus: BigRational,
    pub d_pm: BigRational,
}

/// 2^{−N}, or 0 when N = ∞.
pub fn dyadic(n: Option<usize>) -> BigRational {
    match n {
        Some(n) => BigRational::new(BigInt::from(1), BigInt::from(1) << n),
        None => BigRational::zero(),
    }
}

pub fn metrics(s: &EpPoint, t: &EpPoint) -> Metrics {
    let n_plus = s.first_right_difference(t);
    let left = s.first_left_difference(t);
    let n_minus = left.map(|j| j - 1);
    let n = match (n_plus, left) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let d_plus = dyadic(n_plus);
    let d_minus = dyadic(n_minus);
    let d_pm = (&d_plus + &d_minus) / BigRational::from_integer(BigInt::from(2));
    Metrics { n, n_plus, n_minus, d: dyadic(n), d_plus, d_minus, d_pm }
}

/// Outcome of [`is_admissible`] with a reason when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

/// Window admissibility of the right side followed by an exact check that
/// the whole point lifts to a bi-infinite walk.
pub fn is_admissible(space: &ZipShiftSpace, x: &EpPoint) -> Admissibility {
    let fail = |msg: String| Admissibility { ok: false, diagnostic: Some(msg) };
    let ap = space.alphabet_a_prime();
    let w = (space.step() + 1).max(space.n());
    let span = x.right_transient().len() + 2 * x.right_period().len() + w;
    let right = x.right_window(span);
    for len in 1..=w {
        for win in right.windows(len) {
            if !space.contains_a_prime(win) {
                return fail(format!("window {} is not admissible", ap.format_word(win)));
            }
        }
    }
    let g = space.labeled_graph();
    let (rt, rc) = x.right_lasso();
    let starts = right_live_starts(g, &rt, &rc);
    if starts.is_empty() {
        return fail("right side is not a path of the presentation".into());
    }
    let (lt, lc) = x.left_lasso();
    if !left_viable_from(g, &starts, &lt, &lc) {
        return fail("not liftable".into());
    }
    Admissibility { ok: true, diagnostic: None }
}

/// A random admissible point: random forward and backward walks on the
/// presentation, closed into lassos at the first repeated vertex.
pub fn random_point<R: Rng + ?Sized>(space: &ZipShiftSpace, rng: &mut R) -> EpPoint {
    let g = space.labeled_graph();
    let out = g.out_edges();
    let inn = g.in_edges();
    let v0 = rng.random_range(0..g.vertex_count());

    let walk = |adj: &[Vec<usize>], forward: bool, rng: &mut R| -> (Vec<usize>, usize) {
        // Returns the edge sequence and the index where the cycle starts.
        let mut seen: Vec<Option<usize>> = alloc::vec![None; g.vertex_count()];
        let mut edges = Vec::new();
        let mut v = v0;
        loop {
            if let Some(k) = seen[v] {
                return (edges, k);
            }
            seen[v] = Some(edges.len());
            let choices = &adj[v];
            let e = choices[rng.random_range(0..choices.len())];
            edges.push(e);
            v = if forward { g.edges[e].to } else { g.edges[e].from };
        }
    };

    let (fwd, fk) = walk(&out, true, rng);
    let letters: Vec<Sym> = core::iter::once(v0)
        .chain(fwd.iter().map(|&e| g.edges[e].to))
        .take(fwd.len())
        .map(|v| g.vertices[v][0])
        .collect();
    let right = (letters[..fk].to_vec(), letters[fk..].to_vec());

    let (bwd, bk) = walk(&inn, false, rng);
    let labels: Vec<Sym> = bwd.iter().map(|&e| g.edges[e].sofic).collect();
    let left = (labels[..bk].to_vec(), labels[bk..].to_vec());
    EpPoint::from_lassos(left, right).expect("lassos close on a cycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Kind;
    use crate::TransitionMap;
    use alloc::collections::BTreeSet;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn three_letter_sft() -> ZipShiftSpace {
        let f: BTreeSet<Vec<Sym>> = [vec![0, 0], vec![0, 2], vec![1, 0], vec![2, 2]].into();
        let tm = TransitionMap::from_letters(&[0, 1, 1], 2).unwrap();
        let ap = Alphabet::new(["1", "2", "3"]).unwrap();
        ZipShiftSpace::new(ab(), ap, tm, Kind::Sft { forbidden: f }).unwrap()
    }

    fn pt(s: &ZipShiftSpace, text: &str) -> EpPoint {
        EpPoint::parse(text, s.alphabet_a(), s.alphabet_a_prime()).unwrap()
    }

    fn show(s: &ZipShiftSpace, p: &EpPoint) -> String {
        p.format(s.alphabet_a(), s.alphabet_a_prime())
    }

    #[test]
    fn canonical_form() {
        let s = three_letter_sft();
        let p = pt(&s, "(b a)* b ; 3 (2 3)*");
        assert_eq!(show(&s, &p), "(a b)* ; (3 2)*");
        let q = pt(&s, "(b a b a)* ; (2 3 2 3)*");
        assert_eq!(show(&s, &q), "(b a)* ; (2 3)*");
    }

    #[test]
    fn indexing() {
        let s = three_letter_sft();
        let p = pt(&s, "(b a)* b a b ; 3 1 2 2 (2 3)*");
        assert_eq!(p.right_window(7), vec![2, 0, 1, 1, 1, 2, 1]);
        // …a b a b a b with x_{-1} = b
        assert_eq!(p.left_window(6), vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn shift_examples() {
        let s = three_letter_sft();
        let y = shift(&s, &pt(&s, "(b a)* ; (2 3)*")).unwrap();
        assert_eq!(y, pt(&s, "(a b)* ; (3 2)*"));
        let x = pt(&s, "(b a)* b a b ; 3 1 2 2 (2 3)*");
        assert_eq!(shift(&s, &x).unwrap(), pt(&s, "(b a)* b a b b ; 1 2 2 (2 3)*"));
        assert_eq!(shift_k(&s, &x, 2).unwrap(), pt(&s, "(b a)* b a b b a ; 2 2 (2 3)*"));
        assert_eq!(shift_k(&s, &x, 0).unwrap(), x);
    }

    #[test]
    fn parse_without_spaces_and_round_trip() {
        let a = ab();
        let ap = Alphabet::new(["0", "1", "1'"]).unwrap();
        let p = EpPoint::parse("(ab)*ba;1(01')*", &a, &ap).unwrap();
        assert_eq!(p.format(&a, &ap), "(a b)* b a ; 1 (0 1')*");
        assert!(EpPoint::parse("(a b) ; (1)*", &a, &ap).is_err());
        assert!(EpPoint::parse("()* ; (1)*", &a, &ap).is_err());
    }

    #[test]
    fn metric_values() {
        let s = three_letter_sft();
        let x = pt(&s, "(b)* ; (2 3)*");
        let m = metrics(&x, &x);
        assert!(m.d.is_zero() && m.d_plus.is_zero() && m.d_minus.is_zero() && m.d_pm.is_zero());

        let y = pt(&s, "(b)* ; 3 (2 3)*");
        let m = metrics(&x, &y);
        assert_eq!(m.d, dyadic(Some(0)));
        assert_eq!(m.d_minus, BigRational::zero());
        assert_eq!(m.d_pm, BigRational::new(1.into(), 2.into()));

        let u = pt(&s, "(b)* ; 2 3 2 3 (2)*");
        let v = pt(&s, "(b)* a ; 2 3 2 2 (2)*");
        let m = metrics(&u, &v);
        assert_eq!(m.d, BigRational::new(1.into(), 2.into()));
        assert_eq!(m.d_minus, BigRational::from_integer(1.into()));
        assert_eq!(m.d_plus, BigRational::new(1.into(), 8.into()));
        assert_eq!(m.d_pm, BigRational::new(9.into(), 16.into()));
    }

    #[test]
    fn admissibility() {
        let s = three_letter_sft();
        assert!(is_admissible(&s, &pt(&s, "(b)* ; (2 3)*")).ok);
        let bad = is_admissible(&s, &pt(&s, "(b)* ; 3 3 (2)*"));
        assert!(!bad.ok);
        assert!(bad.diagnostic.unwrap().contains("33"));
        let unliftable = is_admissible(&s, &pt(&s, "(a)* ; (2)*"));
        assert_eq!(unliftable.diagnostic.as_deref(), Some("not liftable"));
    }

    #[test]
    fn random_points_are_admissible() {
        let s = three_letter_sft();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_point(&s, &mut rng);
            assert!(is_admissible(&s, &p).ok, "{}", show(&s, &p));
        }
    }
}
