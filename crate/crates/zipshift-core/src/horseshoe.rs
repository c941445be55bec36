//! An exact affine model of the N-to-1 horseshoe and its zip shift coding.
//!
//! The unit square carries 2N vertical strips of width 1/δ, ordered
//! 0_1, 1_1, 0_2, 1_2, … with equal gaps. Strip 0_i is mapped onto H_a
//! preserving orientation, strip 1_i onto H_b with both axes flipped, so all
//! N folds of each kind land on the same horizontal rectangle.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::symbols::{Alphabet, Sym};
use crate::{Error, Result, ZipShiftSpace};

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    /// Index in the A′ order 0_1, 1_1, 0_2, …
    pub letter: Sym,
    /// 1-based fold number.
    pub fold: usize,
    /// True for 0-strips (mapped onto H_a, orientation preserving).
    pub zero: bool,
    pub left: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorseshoeModel {
    pub n: usize,
    pub epsilon: Q,
    pub delta: Q,
    pub delta_prime: Q,
    /// Horizontal gap between strips.
    pub gap: Q,
    /// Vertical gap below H_a, between H_a and H_b, and above H_b.
    pub v_gap: Q,
    pub branches: Vec<Branch>,
}

/// Closed rectangle [x.0, x.1] × [y.0, y.1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x: (Q, Q),
    pub y: (Q, Q),
}

impl Rect {
    pub fn width(&self) -> Q {
        &self.x.1 - &self.x.0
    }

    pub fn height(&self) -> Q {
        &self.y.1 - &self.y.0
    }

    pub fn center(&self) -> (Q, Q) {
        let two = q(2);
        ((&self.x.0 + &self.x.1) / &two, (&self.y.0 + &self.y.1) / &two)
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.x.0 <= o.x.0 && o.x.1 <= self.x.1 && self.y.0 <= o.y.0 && o.y.1 <= self.y.1
    }

    pub fn is_disjoint(&self, o: &Rect) -> bool {
        self.x.1 < o.x.0 || o.x.1 < self.x.0 || self.y.1 < o.y.0 || o.y.1 < self.y.0
    }
}

/// A finite central window n_{−k} … n_{−1} ; n₀ … n_{k−1}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ItineraryCode {
    /// n_{−k} … n_{−1} over {a, b}, listed left to right.
    pub left: Vec<Sym>,
    /// n₀ … n_{k−1} over the strip letters.
    pub right: Vec<Sym>,
}

impl ItineraryCode {
    pub fn format(&self, model: &HorseshoeModel) -> String {
        let a = model.alphabet_a();
        let ap = model.alphabet_a_prime();
        let mut s = a.format_spaced(&self.left);
        if !s.is_empty() {
            s.push(' ');
        }
        s.push(';');
        let r = ap.format_spaced(&self.right);
        if !r.is_empty() {
            s.push(' ');
            s.push_str(&r);
        }
        s
    }

    pub fn parse(text: &str, model: &HorseshoeModel) -> Result<Self> {
        let (l, r) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse { pos: 0, msg: "expected `;`".into() })?;
        Ok(Self {
            left: model.alphabet_a().parse_word(l)?,
            right: model.alphabet_a_prime().parse_word(r)?,
        })
    }
}

pub fn build_model(n: usize, epsilon: Q) -> Result<HorseshoeModel> {
    if n == 0 {
        return Err(Error::InvalidArgument("fold count must be positive".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let two_n = q(2 * n as i64);
    let delta = &two_n + &epsilon;
    let delta_prime = q(n as i64) / &delta;
    let width = Q::one() / &delta;
    let gap = (Q::one() - &two_n * &width) / (&two_n + Q::one());
    let v_gap = (Q::one() - q(2) * &delta_prime) / q(3);
    if !gap.is_positive() || !v_gap.is_positive() {
        return Err(Error::Geometry("branches do not fit in the square".into()));
    }
    let branches: Vec<Branch> = (0..2 * n)
        .map(|k| Branch {
            letter: k,
            fold: k / 2 + 1,
            zero: k % 2 == 0,
            left: &gap + q(k as i64) * (&width + &gap),
        })
        .collect();
    for pair in branches.windows(2) {
        if pair[0].left.clone() + &width >= pair[1].left {
            return Err(Error::Geometry("branch rectangles overlap".into()));
        }
    }
    Ok(HorseshoeModel { n, epsilon, delta, delta_prime, gap, v_gap, branches })
}

impl HorseshoeModel {
    pub fn alphabet_a(&self) -> Alphabet {
        Alphabet::new(["a", "b"]).expect("valid")
    }

    /// 0_1, 1_1, 0_2, 1_2, …
    pub fn alphabet_a_prime(&self) -> Alphabet {
        Alphabet::new((0..2 * self.n).map(|k| format!("{}_{}", k % 2, k / 2 + 1))).expect("valid")
    }

    /// The coding space: full zip shift with φ₁(0_i) = a, φ₁(1_i) = b.
    pub fn coding_space(&self) -> ZipShiftSpace {
        let images: Vec<Sym> = (0..2 * self.n).map(|k| k % 2).collect();
        ZipShiftSpace::full(self.alphabet_a(), self.alphabet_a_prime(), &images).expect("valid")
    }

    pub fn width(&self) -> Q {
        Q::one() / &self.delta
    }

    /// Bottom edges of H_a and H_b.
    fn h_bottom(&self, zero: bool) -> Q {
        if zero {
            self.v_gap.clone()
        } else {
            Q::one() - &self.v_gap - &self.delta_prime
        }
    }

    pub fn v_rect(&self, letter: Sym) -> Rect {
        let b = &self.branches[letter];
        Rect { x: (b.left.clone(), &b.left + self.width()), y: (Q::zero(), Q::one()) }
    }

    /// H_a for `a` (symbol 0), H_b for `b`.
    pub fn h_rect(&self, side: Sym) -> Rect {
        let lo = self.h_bottom(side == 0);
        Rect { x: (Q::zero(), Q::one()), y: (lo.clone(), lo + &self.delta_prime) }
    }

    fn map_x(&self, b: &Branch, x: &Q) -> Q {
        let t = &self.delta * (x - &b.left);
        if b.zero {
            t
        } else {
            Q::one() - t
        }
    }

    fn map_y(&self, zero: bool, y: &Q) -> Q {
        let base = self.h_bottom(zero);
        if zero {
            base + &self.delta_prime * y
        } else {
            base + &self.delta_prime * (Q::one() - y)
        }
    }

    fn unmap_x(&self, b: &Branch, x: &Q) -> Q {
        let t = if b.zero { x.clone() } else { Q::one() - x };
        &b.left + t / &self.delta
    }

    fn unmap_y(&self, zero: bool, y: &Q) -> Q {
        let t = (y - self.h_bottom(zero)) / &self.delta_prime;
        if zero {
            t
        } else {
            Q::one() - t
        }
    }

    pub fn strip_of(&self, x: &Q) -> Option<Sym> {
        let w = self.width();
        self.branches.iter().position(|b| &b.left <= x && x <= &(&b.left + &w))
    }

    pub fn h_side_of(&self, y: &Q) -> Option<Sym> {
        (0..2).find(|&s| {
            let r = self.h_rect(s);
            &r.y.0 <= y && y <= &r.y.1
        })
    }

    /// f on the branch union.
    pub fn apply(&self, p: &(Q, Q)) -> Result<(Q, Q)> {
        let k = self.strip_of(&p.0).ok_or(Error::EscapedSquare(0))?;
        let b = &self.branches[k];
        Ok((self.map_x(b, &p.0), self.map_y(b.zero, &p.1)))
    }

    /// The preimage of p through fold `fold` (1-based) of the strip kind
    /// matching the H-rectangle containing p.
    pub fn preimage(&self, p: &(Q, Q), fold: usize) -> Result<(Q, Q)> {
        if fold == 0 || fold > self.n {
            return Err(Error::InvalidArgument(format!("fold {fold} outside 1..={}", self.n)));
        }
        let side = self.h_side_of(&p.1).ok_or(Error::EscapedSquare(-1))?;
        let b = &self.branches[2 * (fold - 1) + side];
        Ok((self.unmap_x(b, &p.0), self.unmap_y(b.zero, &p.1)))
    }

    /// Number of preimages of p inside the branch union.
    pub fn preimage_count(&self, p: &(Q, Q)) -> usize {
        (1..=self.n)
            .filter_map(|f| self.preimage(p, f).ok())
            .filter(|pre| self.strip_of(&pre.0).is_some() && self.apply(pre).as_ref() == Ok(p))
            .count()
    }
}

/// ς restricted to a window: forward letters from strip membership, backward
/// letters from H-membership along the chosen preimage folds.
pub fn code_point(model: &HorseshoeModel, point: &(Q, Q), depth: usize, choices: &[usize]) -> Result<ItineraryCode> {
    if depth > 0 && choices.len() + 1 < depth {
        return Err(Error::InvalidArgument(format!("need {} branch choices", depth - 1)));
    }
    let mut right = Vec::with_capacity(depth);
    let mut p = point.clone();
    for i in 0..depth {
        let k = model.strip_of(&p.0).ok_or(Error::EscapedSquare(i as i64))?;
        right.push(k);
        if i + 1 < depth {
            p = model.apply(&p)?;
        }
    }
    let mut left = Vec::with_capacity(depth);
    let mut p = point.clone();
    for i in 1..=depth {
        let side = model.h_side_of(&p.1).ok_or(Error::EscapedSquare(-(i as i64)))?;
        left.push(side);
        if i < depth {
            p = model.preimage(&p, choices[i - 1]).map_err(|e| match e {
                Error::EscapedSquare(_) => Error::EscapedSquare(-(i as i64)),
                other => other,
            })?;
        }
    }
    left.reverse();
    Ok(ItineraryCode { left, right })
}

/// The closed rectangle of points whose itinerary matches `code`.
pub fn decode(model: &HorseshoeModel, code: &ItineraryCode) -> Result<Rect> {
    let letters = 2 * model.n;
    if let Some(&s) = code.right.iter().find(|&&s| s >= letters) {
        return Err(Error::BadLetter(format!("#{s}")));
    }
    if let Some(&s) = code.left.iter().find(|&&s| s > 1) {
        return Err(Error::BadLetter(format!("#{s}")));
    }
    let (mut lo, mut hi) = (Q::zero(), Q::one());
    for &k in code.right.iter().rev() {
        let b = &model.branches[k];
        let (a, c) = (model.unmap_x(b, &lo), model.unmap_x(b, &hi));
        (lo, hi) = if a <= c { (a, c) } else { (c, a) };
    }
    let (mut ylo, mut yhi) = (Q::zero(), Q::one());
    for &s in &code.left {
        let (a, c) = (model.map_y(s == 0, &ylo), model.map_y(s == 0, &yhi));
        (ylo, yhi) = if a <= c { (a, c) } else { (c, a) };
    }
    if lo > hi || ylo > yhi {
        return Err(Error::Unrealizable);
    }
    Ok(Rect { x: (lo, hi), y: (ylo, yhi) })
}

/// The point of period m with forward itinerary `word` repeated, together
/// with the folds its backward orbit uses.
pub fn periodic_point(model: &HorseshoeModel, word: &[Sym]) -> Result<((Q, Q), Vec<usize>)> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty word".into()));
    }
    // Compose x ↦ αx + β and y ↦ γy + η along the word.
    let (mut alpha, mut beta, mut gamma, mut eta) = (Q::one(), Q::zero(), Q::one(), Q::zero());
    for &k in word {
        let b = model.branches.get(k).ok_or_else(|| Error::BadLetter(format!("#{k}")))?;
        let (s, t) = if b.zero {
            (model.delta.clone(), -&model.delta * &b.left)
        } else {
            (-&model.delta, Q::one() + &model.delta * &b.left)
        };
        beta = &s * &beta + t;
        alpha = s * alpha;
        let (s, t) = if b.zero {
            (model.delta_prime.clone(), model.h_bottom(true))
        } else {
            (-&model.delta_prime, model.h_bottom(false) + &model.delta_prime)
        };
        eta = &s * &eta + t;
        gamma = s * gamma;
    }
    let x = beta / (Q::one() - alpha);
    let y = eta / (Q::one() - gamma);
    // The preimage of σ^i(P) lies in strip word[i-1] (cyclically).
    let m = word.len();
    let folds = (1..=m).map(|j| model.branches[word[(m - j) % m]].fold).collect();
    Ok(((x, y), folds))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub samples: usize,
    pub violations: Vec<String>,
    /// Every sampled point had exactly N preimages.
    pub preimages_n_to_1: bool,
}

impl ConjugacyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.preimages_n_to_1
    }
}

/// Samples random depth-k codes, decodes them, and checks that the code of
/// f(P) agrees with σ applied to the code of P (using the transition map of
/// `space`), and that distinct codes give disjoint rectangles.
pub fn verify_conjugacy<R: Rng + ?Sized>(
    model: &HorseshoeModel,
    space: &ZipShiftSpace,
    depth: usize,
    samples: usize,
    rng: &mut R,
) -> Result<ConjugacyReport> {
    if depth < 2 {
        return Err(Error::InvalidArgument("depth must be at least 2".into()));
    }
    let ap = model.alphabet_a_prime();
    let a = model.alphabet_a();
    let to_space_ap: Vec<Sym> = ap
        .names()
        .iter()
        .map(|n| space.alphabet_a_prime().symbol(n))
        .collect::<Result<_>>()?;
    let from_space_a: Vec<Sym> = space
        .alphabet_a()
        .names()
        .iter()
        .map(|n| a.symbol(n))
        .collect::<Result<_>>()?;
    if space.n() != 1 {
        return Err(Error::InvalidArgument("the coding space must use a 1-block map".into()));
    }
    let phi = |k: Sym| -> Result<Sym> {
        let img = space
            .tm()
            .apply(&[to_space_ap[k]])
            .ok_or_else(|| Error::UndefinedWindow(String::from(ap.name(k))))?;
        Ok(from_space_a[img])
    };

    let mut violations = Vec::new();
    let mut preimages_n_to_1 = true;
    let mut seen: Vec<(ItineraryCode, Rect)> = Vec::new();
    let mut codes = BTreeSet::new();
    for _ in 0..samples {
        let code = ItineraryCode {
            left: (0..depth).map(|_| rng.random_range(0..2)).collect(),
            right: (0..depth).map(|_| rng.random_range(0..2 * model.n)).collect(),
        };
        let rect = decode(model, &code)?;
        let p = rect.center();
        let choices: Vec<usize> = (0..depth).map(|_| rng.random_range(1..=model.n)).collect();
        let own = code_point(model, &p, depth, &choices)?;
        if own != code {
            violations.push(format!("decode/code mismatch for {}", code.format(model)));
            continue;
        }
        if model.preimage_count(&p) != model.n {
            preimages_n_to_1 = false;
        }
        let fp = model.apply(&p)?;
        let mut fchoices = Vec::with_capacity(depth);
        fchoices.push(model.branches[code.right[0]].fold);
        fchoices.extend_from_slice(&choices);
        let image = code_point(model, &fp, depth - 1, &fchoices)?;
        // σ on the window: drop n₀ on the right, append φ₁(n₀) on the left.
        let mut left = code.left[2..].to_vec();
        left.push(phi(code.right[0])?);
        let shifted = ItineraryCode { left, right: code.right[1..].to_vec() };
        if image != shifted {
            violations.push(format!(
                "ς(f(P)) = {} but σ(ς(P)) = {} for {}",
                image.format(model),
                shifted.format(model),
                code.format(model)
            ));
        }
        if codes.insert(code.clone()) {
            for (other, r) in &seen {
                if !rect.is_disjoint(r) {
                    violations.push(format!(
                        "codes {} and {} overlap",
                        code.format(model),
                        other.format(model)
                    ));
                }
            }
            seen.push((code, rect));
        }
    }
    Ok(ConjugacyReport { samples, violations, preimages_n_to_1 })
}

/// The stable string of a word over {0, 1, 0′, 1′} for the 2-to-1
/// horseshoe: 2^k words where position i runs through blocks of size
/// 2^{i−1} alternating 0/1 (or 0′/1′ when s′_i is primed), starting and
/// ending with half blocks of 0.
pub fn stable_string(word: &str) -> Result<Vec<String>> {
    let mut letters: Vec<(bool, bool)> = Vec::new(); // (is one, primed)
    let mut prime_style = "'";
    let mut chars = word.chars().filter(|c| !c.is_whitespace()).peekable();
    while let Some(c) = chars.next() {
        let one = match c {
            '0' => false,
            '1' => true,
            other => return Err(Error::BadLetter(String::from(other))),
        };
        let primed = match chars.peek() {
            Some(&'\'') => {
                chars.next();
                true
            }
            Some(&'′') => {
                chars.next();
                prime_style = "′";
                true
            }
            _ => false,
        };
        letters.push((one, primed));
    }
    if letters.is_empty() {
        return Err(Error::InvalidArgument("empty word".into()));
    }
    let k = letters.len();
    if k >= usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument("word too long".into()));
    }
    let total = 1usize << k;
    Ok((0..total)
        .map(|j| {
            let mut s = String::new();
            for (i, &(_, primed)) in letters.iter().enumerate() {
                let half = 1usize << i;
                let bit = ((j + half) >> (i + 1)) & 1;
                s.push(if bit == 0 { '0' } else { '1' });
                if primed {
                    s.push_str(prime_style);
                }
            }
            s
        })
        .collect())
}
