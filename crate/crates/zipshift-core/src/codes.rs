//! Higher block and higher power recodings, and zip shift sliding block codes.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::graph::Presentation;
use crate::orbits::closed_walk_points;
use crate::point::{random_point, shift, EpPoint};
use crate::preimage::left_lift;
use crate::space::Kind;
use crate::symbols::{Alphabet, Sym, TransitionMap};
use crate::{Error, Result, ZipShiftSpace};

/// Names blocks `[ab]`, or `[a.b]` when some symbol is longer than a letter.
fn block_alphabet(base: &Alphabet, blocks: &[Vec<Sym>]) -> Result<Alphabet> {
    let sep = if base.names().iter().any(|n| n.chars().count() > 1) { "." } else { "" };
    Alphabet::new(blocks.iter().map(|b| {
        let parts: Vec<&str> = b.iter().map(|&s| base.name(s)).collect();
        format!("[{}]", parts.join(sep))
    }))
}

fn index_of(blocks: &[Vec<Sym>]) -> BTreeMap<Vec<Sym>, Sym> {
    blocks.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect()
}

/// Minimal words over `k` letters of length 2..=max_len rejected by `ok`.
fn minimal_forbidden(k: usize, max_len: usize, ok: impl Fn(&[Sym]) -> bool) -> BTreeSet<Vec<Sym>> {
    let mut out = BTreeSet::new();
    let mut layer: Vec<Vec<Sym>> = (0..k).filter(|&s| ok(&[s])).map(|s| vec![s]).collect();
    for _ in 2..=max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..k {
                let mut v = w.clone();
                v.push(s);
                if ok(&v) {
                    next.push(v);
                } else if ok(&v[1..]) {
                    out.insert(v);
                }
            }
        }
        layer = next;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    Block,
    Power,
}

/// A recoding by N-blocks together with the forward and inverse point maps.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    pub mode: BlockMode,
    pub big_n: usize,
    pub source: ZipShiftSpace,
    pub target: ZipShiftSpace,
    a_blocks: Vec<Vec<Sym>>,
    ap_blocks: Vec<Vec<Sym>>,
}

/// The overlapping N-block recoding. Letters at negative indices use the
/// A-sequence x̂ (x̂_j = x_j for j < 0, φₙ(x_j … x_{j+n−1}) for j ≥ 0), so
/// the block at −1 is a pure A-block even though it straddles the origin.
pub fn higher_block(space: &ZipShiftSpace, big_n: usize) -> Result<HigherBlock> {
    recode(space, big_n, BlockMode::Block)
}

/// The non-overlapping N-block recoding, conjugating σ^N.
pub fn higher_power(space: &ZipShiftSpace, big_n: usize) -> Result<HigherBlock> {
    recode(space, big_n, BlockMode::Power)
}

fn recode(space: &ZipShiftSpace, big_n: usize, mode: BlockMode) -> Result<HigherBlock> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    let n = space.n();
    let ap_blocks: Vec<Vec<Sym>> = space.words_a_prime(big_n).into_iter().collect();
    let a_blocks: Vec<Vec<Sym>> = space.words_a(big_n).into_iter().collect();
    let ap_idx = index_of(&ap_blocks);
    let a_idx = index_of(&a_blocks);
    let new_ap = block_alphabet(space.alphabet_a_prime(), &ap_blocks)?;
    let new_a = block_alphabet(space.alphabet_a(), &a_blocks)?;

    // Underlying A′-word of a block word, None if consecutive blocks clash.
    let unblock = |z: &[Sym]| -> Option<Vec<Sym>> {
        let mut w = ap_blocks[z[0]].clone();
        for pair in z.windows(2) {
            let (u, v) = (&ap_blocks[pair[0]], &ap_blocks[pair[1]]);
            match mode {
                BlockMode::Block => {
                    if u[1..] != v[..big_n - 1] {
                        return None;
                    }
                    w.push(v[big_n - 1]);
                }
                BlockMode::Power => w.extend_from_slice(v),
            }
        }
        Some(w)
    };
    let in_language = |z: &[Sym]| unblock(z).is_some_and(|w| space.contains_a_prime(&w));

    let (new_n, span) = match mode {
        BlockMode::Block => (n, big_n + n - 1),
        BlockMode::Power => {
            let nn = (big_n + n - 1).div_ceil(big_n);
            (nn, nn * big_n)
        }
    };
    let mut table = BTreeMap::new();
    for w in space.words_a_prime(span) {
        let key: Vec<Sym> = match mode {
            BlockMode::Block => (0..new_n).map(|i| ap_idx[&w[i..i + big_n]]).collect(),
            BlockMode::Power => w.chunks(big_n).map(|c| ap_idx[c]).collect(),
        };
        let ext = space.tm().extend(&w)?;
        table.insert(key, a_idx[&ext[..big_n]]);
    }
    let tm = TransitionMap::new(new_n, a_blocks.len(), table)?;

    let kind = match (space.kind(), mode) {
        (Kind::Full, BlockMode::Power) => Kind::Full,
        (Kind::Sofic { .. }, _) => Kind::Sofic { presentation: block_presentation(space, big_n, mode, &ap_idx) },
        _ => {
            let k = space.step();
            let kp = match mode {
                BlockMode::Block => (k + 1).saturating_sub(big_n).max(1),
                BlockMode::Power => k.div_ceil(big_n).max(1),
            };
            Kind::Sft { forbidden: minimal_forbidden(ap_blocks.len(), kp + 1, in_language) }
        }
    };
    let target = ZipShiftSpace::new(new_a, new_ap, tm, kind)?;
    Ok(HigherBlock { mode, big_n, source: space.clone(), target, a_blocks, ap_blocks })
}

/// Presentation of the block shift read off the source vertex graph: each
/// edge (or path of N edges, for powers) is labeled by the block it ends.
fn block_presentation(space: &ZipShiftSpace, big_n: usize, mode: BlockMode, ap_idx: &BTreeMap<Vec<Sym>, Sym>) -> Presentation {
    let g = space.vertex_graph().with_length(space.vertex_graph().ell().max(big_n));
    let ell = g.ell();
    let states = (0..g.vertex_count()).map(|v| format!("s{v}")).collect();
    let mut edges = Vec::new();
    match mode {
        BlockMode::Block => {
            for &(u, v) in g.edges() {
                edges.push((u, v, ap_idx[&g.word(v)[ell - big_n..]]));
            }
        }
        BlockMode::Power => {
            // Paths of N steps: the block is the N letters entered.
            let mut frontier: Vec<(usize, usize, Vec<Sym>)> =
                (0..g.vertex_count()).map(|v| (v, v, Vec::new())).collect();
            for _ in 0..big_n {
                let mut next = Vec::new();
                for (s, v, w) in &frontier {
                    for &t in g.successors(*v) {
                        let mut w2 = w.clone();
                        w2.push(g.word(t)[ell - 1]);
                        next.push((*s, t, w2));
                    }
                }
                frontier = next;
            }
            for (s, t, w) in frontier {
                edges.push((s, t, ap_idx[&w]));
            }
        }
    }
    Presentation { states, edges }
}

/// Evaluates `f` on 0..t_len (transient) and t_len..t_len+c_len (cycle).
fn lasso_map(f: impl Fn(usize) -> Result<Sym>, t_len: usize, c_len: usize) -> Result<(Vec<Sym>, Vec<Sym>)> {
    let trans = (0..t_len).map(&f).collect::<Result<Vec<_>>>()?;
    let cycle = (t_len..t_len + c_len).map(&f).collect::<Result<Vec<_>>>()?;
    Ok((trans, cycle))
}

impl HigherBlock {
    fn x_hat(&self, x: &EpPoint, j: i64) -> Result<Sym> {
        if j < 0 {
            return Ok(x.get(j));
        }
        let n = self.source.n();
        let win: Vec<Sym> = (0..n as i64).map(|k| x.get(j + k)).collect();
        self.source
            .tm()
            .apply(&win)
            .ok_or_else(|| Error::UndefinedWindow(self.source.alphabet_a_prime().format_word(&win)))
    }

    fn a_block(&self, word: &[Sym]) -> Result<Sym> {
        self.a_blocks
            .iter()
            .position(|b| b == word)
            .ok_or_else(|| Error::NotAdmissible(self.source.alphabet_a().format_word(word)))
    }

    fn ap_block(&self, word: &[Sym]) -> Result<Sym> {
        self.ap_blocks
            .iter()
            .position(|b| b == word)
            .ok_or_else(|| Error::NotAdmissible(self.source.alphabet_a_prime().format_word(word)))
    }

    pub fn forward(&self, x: &EpPoint) -> Result<EpPoint> {
        let bn = self.big_n as i64;
        let (lt, rt) = (x.left_transient().len(), x.right_transient().len());
        let (lq, rp) = (x.left_period().len(), x.right_period().len());
        let (right, left) = match self.mode {
            BlockMode::Block => {
                let right = lasso_map(|i| self.ap_block(&(0..bn).map(|k| x.get(i as i64 + k)).collect::<Vec<_>>()),
                    rt,
                    rp,
                )?;
                let left = lasso_map(|i| {
                        let j = -(i as i64) - 1;
                        let w = (0..bn).map(|k| self.x_hat(x, j + k)).collect::<Result<Vec<_>>>()?;
                        self.a_block(&w)
                    },
                    self.big_n - 1 + lt,
                    lq,
                )?;
                (right, left)
            }
            BlockMode::Power => {
                let right = lasso_map(|i| self.ap_block(&(0..bn).map(|k| x.get(i as i64 * bn + k)).collect::<Vec<_>>()),
                    rt.div_ceil(self.big_n),
                    rp,
                )?;
                let left = lasso_map(|i| {
                        let j = -(i as i64 + 1) * bn;
                        let w = (0..bn).map(|k| self.x_hat(x, j + k)).collect::<Result<Vec<_>>>()?;
                        self.a_block(&w)
                    },
                    lt.div_ceil(self.big_n),
                    lq,
                )?;
                (right, left)
            }
        };
        EpPoint::from_lassos(left, right)
    }

    pub fn inverse(&self, z: &EpPoint) -> Result<EpPoint> {
        let (rt, rc) = z.right_lasso();
        let (lt, lc) = z.left_lasso();
        match self.mode {
            BlockMode::Block => {
                let first_ap = |v: Vec<Sym>| v.iter().map(|&b| self.ap_blocks[b][0]).collect::<Vec<_>>();
                let first_a = |v: Vec<Sym>| v.iter().map(|&b| self.a_blocks[b][0]).collect::<Vec<_>>();
                EpPoint::from_lassos((first_a(lt), first_a(lc)), (first_ap(rt), first_ap(rc)))
            }
            BlockMode::Power => {
                let cat_ap = |v: Vec<Sym>| v.iter().flat_map(|&b| self.ap_blocks[b].clone()).collect::<Vec<_>>();
                let cat_a_rev = |v: Vec<Sym>| {
                    v.iter()
                        .flat_map(|&b| self.a_blocks[b].iter().rev().copied().collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                };
                EpPoint::from_lassos((cat_a_rev(lt), cat_a_rev(lc)), (cat_ap(rt), cat_ap(rc)))
            }
        }
    }

    /// The overlapping recoding as a sliding block code with window
    /// max(N, N+n−2).
    pub fn as_block_code(&self) -> Result<BlockCode> {
        if self.mode != BlockMode::Block {
            return Err(Error::InvalidArgument("only overlapping block recodings are sliding block codes".into()));
        }
        let src = &self.source;
        let n = src.n();
        let bn = self.big_n;
        let w = bn.max(bn + n - 2);
        let mut psi_plus = BTreeMap::new();
        for word in src.words_a_prime(w) {
            psi_plus.insert(word.clone(), self.ap_block(&word[..bn])?);
        }
        let mut psi_minus = BTreeMap::new();
        for mw in src.mixed_words(1, w) {
            let mut block = vec![mw.a[0]];
            block.extend(src.tm().extend(&mw.ap[..bn + n - 2])?);
            psi_minus.insert((mw.a[0], mw.ap.clone()), self.a_block(&block)?);
        }
        BlockCode::new(
            src.clone(),
            CodeTables {
                window: w,
                c: self.target.alphabet_a().clone(),
                c_prime: self.target.alphabet_a_prime().clone(),
                psi_plus,
                psi_minus,
                phi_target: Some(self.target.tm().clone()),
            },
        )
    }
}

/// Raw tables of a sliding block code from a source space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeTables {
    pub window: usize,
    pub c: Alphabet,
    pub c_prime: Alphabet,
    /// x₀ … x_{w−1} ↦ y₀ ∈ C′.
    pub psi_plus: BTreeMap<Vec<Sym>, Sym>,
    /// (x_{−1}; x₀ … x_{w−1}) ↦ y_{−1} ∈ C.
    pub psi_minus: BTreeMap<(Sym, Vec<Sym>), Sym>,
    /// φ_m on C′-words; derived from the tables when absent.
    pub phi_target: Option<TransitionMap>,
}

/// A validated sliding block code with its image space. The image space
/// keeps only the C- and C′-letters that are actually hit.
#[derive(Clone, Debug)]
pub struct BlockCode {
    source: ZipShiftSpace,
    target: ZipShiftSpace,
    window: usize,
    psi_plus: BTreeMap<Vec<Sym>, Sym>,
    psi_minus: BTreeMap<(Sym, Vec<Sym>), Sym>,
}

impl BlockCode {
    /// Validates totality and the local commutation rule
    /// φ_m(y₀ … y_{m−1}) = ψ⁻(φₙ(x₀ … x_{n−1}); x₁ … x_w) on every admissible word.
    pub fn new(source: ZipShiftSpace, tables: CodeTables) -> Result<Self> {
        Self::build(source, tables, true)
    }

    /// Skips the commutation rule. Only useful to exhibit codes that fail it.
    pub fn new_unchecked(source: ZipShiftSpace, tables: CodeTables) -> Result<Self> {
        Self::build(source, tables, false)
    }

    fn build(source: ZipShiftSpace, tables: CodeTables, check: bool) -> Result<Self> {
        let CodeTables { window: w, c, c_prime, psi_plus, psi_minus, phi_target } = tables;
        if w == 0 {
            return Err(Error::InvalidCode("window must be positive".into()));
        }
        let ap = source.alphabet_a_prime();
        for word in source.words_a_prime(w) {
            match psi_plus.get(&word) {
                Some(&y) if y < c_prime.len() => {}
                Some(_) => return Err(Error::InvalidCode("ψ⁺ value outside C′".into())),
                None => return Err(Error::InvalidCode(format!("ψ⁺ undefined on {}", ap.format_word(&word)))),
            }
        }
        for mw in source.mixed_words(1, w) {
            match psi_minus.get(&(mw.a[0], mw.ap.clone())) {
                Some(&y) if y < c.len() => {}
                Some(_) => return Err(Error::InvalidCode("ψ⁻ value outside C".into())),
                None => {
                    return Err(Error::InvalidCode(format!(
                        "ψ⁻ undefined on {}",
                        mw.format(source.alphabet_a(), ap)
                    )))
                }
            }
        }
        let n = source.n();
        let pp = |x: &[Sym]| psi_plus[x];
        let y_word = |x: &[Sym], m: usize| (0..m).map(|i| pp(&x[i..i + w])).collect::<Vec<_>>();
        let lhs_rhs = |x: &[Sym]| -> Sym {
            let a = source.tm().apply(&x[..n]).expect("admissible");
            psi_minus[&(a, x[1..=w].to_vec())]
        };
        let check_len = |m: usize| n.max(w + 1).max(m + w - 1);

        let phi = match phi_target {
            Some(t) => {
                if t.codomain() != c.len() {
                    return Err(Error::InvalidCode("φ_m codomain differs from |C|".into()));
                }
                t
            }
            None => derive_phi(&source, w, c.len(), &y_word, &lhs_rhs, check_len)?,
        };
        let m = phi.n();
        if check {
            for x in source.words_a_prime(check_len(m)) {
                let y = y_word(&x, m);
                let left = phi.apply(&y).ok_or_else(|| {
                    Error::InvalidCode(format!("φ_m undefined on {}", c_prime.format_word(&y)))
                })?;
                if left != lhs_rhs(&x) {
                    return Err(Error::InvalidCode(format!(
                        "local commutation fails on {}",
                        ap.format_word(&x)
                    )));
                }
            }
        }

        // Image space over the letters that occur.
        let image_m: BTreeSet<Vec<Sym>> =
            source.words_a_prime(m + w - 1).iter().map(|x| y_word(x, m)).collect();
        let cp_hit: BTreeSet<Sym> = image_m.iter().flatten().copied().collect();
        let mut c_hit = BTreeSet::new();
        for y in &image_m {
            c_hit.insert(phi.apply(y).ok_or_else(|| {
                Error::InvalidCode(format!("φ_m undefined on {}", c_prime.format_word(y)))
            })?);
        }
        let cp_map: BTreeMap<Sym, Sym> = cp_hit.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let c_map: BTreeMap<Sym, Sym> = c_hit.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let new_c = Alphabet::new(c_hit.iter().map(|&s| String::from(c.name(s))))?;
        let new_cp = Alphabet::new(cp_hit.iter().map(|&s| String::from(c_prime.name(s))))?;
        let psi_plus: BTreeMap<Vec<Sym>, Sym> = psi_plus
            .into_iter()
            .filter_map(|(k, v)| cp_map.get(&v).map(|&v| (k, v)))
            .collect();
        let psi_minus = psi_minus
            .into_iter()
            .map(|(k, v)| {
                c_map
                    .get(&v)
                    .map(|&v| (k, v))
                    .ok_or_else(|| Error::InvalidCode(format!("ψ⁻ value {} never produced by φ_m", c.name(v))))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let phi_table = image_m
            .iter()
            .map(|y| (y.iter().map(|s| cp_map[s]).collect(), c_map[&phi.apply(y).expect("checked")]))
            .collect();
        let tm = TransitionMap::new(m, new_c.len(), phi_table)?;

        let g = source.vertex_graph().with_length(source.vertex_graph().ell().max(w));
        let ell = g.ell();
        let presentation = Presentation {
            states: (0..g.vertex_count()).map(|v| format!("s{v}")).collect(),
            edges: g.edges().iter().map(|&(u, v)| (u, v, psi_plus[&g.word(v)[ell - w..]])).collect(),
        };
        let target = ZipShiftSpace::new(new_c, new_cp, tm, Kind::Sofic { presentation })?;
        Ok(Self { source, target, window: w, psi_plus, psi_minus })
    }

    pub fn source(&self) -> &ZipShiftSpace {
        &self.source
    }

    pub fn target(&self) -> &ZipShiftSpace {
        &self.target
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn psi_plus(&self) -> &BTreeMap<Vec<Sym>, Sym> {
        &self.psi_plus
    }

    pub fn psi_minus(&self) -> &BTreeMap<(Sym, Vec<Sym>), Sym> {
        &self.psi_minus
    }

    /// Image of a point. Entries y_{−k} = ψ⁻(x_{−k}; ỹ_{−k+1} … ỹ_{−k+w})
    /// use a fixed A′-lift ỹ of x, which is how the commutation diagram
    /// propagates y_{−1} to the left.
    pub fn apply(&self, x: &EpPoint) -> Result<EpPoint> {
        let w = self.window;
        let (rt, rc) = x.right_lasso();
        let right_word = |i: usize| -> Result<Sym> {
            let win: Vec<Sym> = (i..i + w).map(|k| x.get(k as i64)).collect();
            self.psi_plus
                .get(&win)
                .copied()
                .ok_or_else(|| Error::NotAdmissible(self.source.alphabet_a_prime().format_word(&win)))
        };
        let right = lasso_map(right_word, rt.len(), rc.len())?;

        let (lift_t, lift_c) = left_lift(&self.source, x)
            .ok_or_else(|| Error::NotAdmissible(x.format(self.source.alphabet_a(), self.source.alphabet_a_prime())))?;
        let lift = |i: i64| -> Sym {
            if i >= 0 {
                x.get(i)
            } else {
                let j = (-i - 1) as usize;
                if j < lift_t.len() {
                    lift_t[j]
                } else {
                    lift_c[(j - lift_t.len()) % lift_c.len()]
                }
            }
        };
        let k0 = x.left_transient().len().max(lift_t.len()) + w + 1;
        let per = num_integer::lcm(x.left_period().len(), lift_c.len());
        let left_entry = |idx: usize| -> Result<Sym> {
            let k = idx as i64 + 1;
            let v: Vec<Sym> = (-k + 1..=-k + w as i64).map(lift).collect();
            self.psi_minus.get(&(x.get(-k), v)).copied().ok_or_else(|| {
                Error::NotAdmissible(x.format(self.source.alphabet_a(), self.source.alphabet_a_prime()))
            })
        };
        let left = lasso_map(left_entry, k0 - 1, per)?;
        EpPoint::from_lassos(left, right)
    }
}

fn derive_phi(
    source: &ZipShiftSpace,
    w: usize,
    c_len: usize,
    y_word: &dyn Fn(&[Sym], usize) -> Vec<Sym>,
    value: &dyn Fn(&[Sym]) -> Sym,
    check_len: impl Fn(usize) -> usize,
) -> Result<TransitionMap> {
    'm: for m in 1..=w + source.n() + 1 {
        let mut table: BTreeMap<Vec<Sym>, Sym> = BTreeMap::new();
        for x in source.words_a_prime(check_len(m)) {
            let y = y_word(&x, m);
            let v = value(&x);
            if *table.entry(y).or_insert(v) != v {
                continue 'm;
            }
        }
        return TransitionMap::new(m, c_len, table);
    }
    Err(Error::InvalidCode("no target transition map is consistent with the tables".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationReport {
    pub ok: bool,
    pub checked: usize,
    /// A point x with ψ(σx) ≠ σ(ψx).
    pub witness: Option<EpPoint>,
}

/// ψ∘σ = σ∘ψ on `samples` random points and on every periodic point of
/// period at most 4.
pub fn check_commutation<R: Rng + ?Sized>(code: &BlockCode, samples: usize, rng: &mut R) -> Result<CommutationReport> {
    let src = code.source();
    let mut points: Vec<EpPoint> = (0..samples).map(|_| random_point(src, rng)).collect();
    for m in 1..=4 {
        points.extend(closed_walk_points(src, m).into_iter().map(|p| p.point));
    }
    let checked = points.len();
    for x in points {
        let lhs = code.apply(&shift(src, &x)?)?;
        let rhs = shift(code.target(), &code.apply(&x)?);
        if rhs.as_ref() != Ok(&lhs) {
            return Ok(CommutationReport { ok: false, checked, witness: Some(x) });
        }
    }
    Ok(CommutationReport { ok: true, checked, witness: None })
}

#[derive(Clone, Debug)]
pub enum Inversion {
    Found(Box<BlockCode>),
    NotFound(usize),
}

/// Smallest window w′ ≤ `max_window` carrying an inverse code. Entries not
/// forced by the constraints take the lowest symbol.
pub fn invert_code(code: &BlockCode, max_window: usize) -> Result<Inversion> {
    let src = code.source();
    let tgt = code.target();
    let w = code.window();

    // Periodic points must map injectively.
    let mut images = BTreeMap::new();
    for m in 1..=max_window.min(4) {
        for p in closed_walk_points(src, m) {
            let y = code.apply(&p.point)?;
            if let Some(prev) = images.insert(y, p.point.clone()) {
                if prev != p.point {
                    return Ok(Inversion::NotFound(max_window));
                }
            }
        }
    }

    let to_target = |x: &[Sym], len: usize| -> Vec<Sym> { (0..len).map(|i| code.psi_plus[&x[i..i + w]]).collect() };
    'w: for wp in 1..=max_window {
        let mut plus: BTreeMap<Vec<Sym>, Sym> = BTreeMap::new();
        for x in src.words_a_prime(wp + w - 1) {
            let y = to_target(&x, wp);
            if *plus.entry(y).or_insert(x[0]) != x[0] {
                continue 'w;
            }
        }
        let mut minus: BTreeMap<(Sym, Vec<Sym>), Sym> = BTreeMap::new();
        for mw in src.mixed_words(1, wp + w - 1) {
            let c = code.psi_minus[&(mw.a[0], mw.ap[..w].to_vec())];
            let key = (c, to_target(&mw.ap, wp));
            if *minus.entry(key).or_insert(mw.a[0]) != mw.a[0] {
                continue 'w;
            }
        }
        for y in tgt.words_a_prime(wp) {
            plus.entry(y).or_insert(0);
        }
        for mw in tgt.mixed_words(1, wp) {
            minus.entry((mw.a[0], mw.ap)).or_insert(0);
        }
        let tables = CodeTables {
            window: wp,
            c: src.alphabet_a().clone(),
            c_prime: src.alphabet_a_prime().clone(),
            psi_plus: plus,
            psi_minus: minus,
            phi_target: Some(src.tm().clone()),
        };
        if let Ok(inv) = BlockCode::new(tgt.clone(), tables) {
            return Ok(Inversion::Found(Box::new(inv)));
        }
    }
    Ok(Inversion::NotFound(max_window))
}
