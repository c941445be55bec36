//! Fixture loading and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use zipshift::spec::load_space;
use zipshift_core::{EpPoint, Kind, Sym, ZipShiftSpace};

pub const SPACES: &[&str] = &[
    "three_letter_sft",
    "even_shift",
    "sigma_f",
    "sigma_g",
    "horseshoe_coding",
    "full_two",
    "golden_mean",
    "two_step_sft",
    "six_letter_sofic",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn fixture(name: &str) -> ZipShiftSpace {
    load_space(&fixture_path(&format!("{name}.toml"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn point(space: &ZipShiftSpace, text: &str) -> EpPoint {
    EpPoint::parse(text, space.alphabet_a(), space.alphabet_a_prime()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn fmt(space: &ZipShiftSpace, x: &EpPoint) -> String {
    x.format(space.alphabet_a(), space.alphabet_a_prime())
}

fn forbidden(space: &ZipShiftSpace) -> Option<&BTreeSet<Vec<Sym>>> {
    match space.kind() {
        Kind::Full => None,
        Kind::Sft { forbidden } => Some(forbidden),
        Kind::Sofic { .. } => panic!("no forbidden list for a sofic space"),
    }
}

/// True when no forbidden word occurs in `w`.
pub fn avoids(space: &ZipShiftSpace, w: &[Sym]) -> bool {
    forbidden(space).is_none_or(|f| f.iter().all(|v| v.len() > w.len() || !w.windows(v.len()).any(|x| x == v.as_slice())))
}

/// Periodic points of period dividing m, counted as words w of length m
/// whose bi-infinite repetition avoids every forbidden word.
pub fn brute_periodic_count(space: &ZipShiftSpace, m: usize) -> u128 {
    let k = space.alphabet_a_prime().len();
    let longest = forbidden(space).map_or(1, |f| f.iter().map(Vec::len).max().unwrap_or(1));
    let mut count = 0;
    let mut w = vec![0; m];
    loop {
        let reps = longest.div_ceil(m) + 1;
        let cyc: Vec<Sym> = w.iter().copied().cycle().take(m * reps).collect();
        if avoids(space, &cyc) {
            count += 1;
        }
        let mut i = 0;
        while i < m {
            w[i] += 1;
            if w[i] < k {
                break;
            }
            w[i] = 0;
            i += 1;
        }
        if i == m {
            return count;
        }
    }
}

/// Language membership decided without the graph machinery where possible:
/// SFT and full spaces check that the word extends by `pad` letters on both
/// sides avoiding the forbidden list.
pub fn brute_in_language(space: &ZipShiftSpace, w: &[Sym], pad: usize) -> bool {
    if matches!(space.kind(), Kind::Sofic { .. }) {
        return space.contains_a_prime(w);
    }
    let k = space.alphabet_a_prime().len();
    fn grow(space: &ZipShiftSpace, k: usize, word: &mut Vec<Sym>, left: usize, right: usize) -> bool {
        if !avoids(space, word) {
            return false;
        }
        if right > 0 {
            for c in 0..k {
                word.push(c);
                let ok = grow(space, k, word, left, right - 1);
                word.pop();
                if ok {
                    return true;
                }
            }
            return false;
        }
        if left > 0 {
            for c in 0..k {
                word.insert(0, c);
                let ok = grow(space, k, word, left - 1, 0);
                word.remove(0);
                if ok {
                    return true;
                }
            }
            return false;
        }
        true
    }
    grow(space, k, &mut w.to_vec(), pad, pad)
}

/// Pre-images of x by direct search: every candidate letter t, kept when
/// some A′-history of length `depth` left of t is consistent with the
/// A-letters of x under φₙ and the whole finite word lies in the language.
pub fn brute_preimages(space: &ZipShiftSpace, x: &EpPoint, depth: usize) -> BTreeSet<EpPoint> {
    let n = space.n();
    let k = space.alphabet_a_prime().len();
    let right_len = depth;
    let mut out = BTreeSet::new();
    for t in 0..k {
        let y = x.with_new_origin(t);
        let right = y.right_window(right_len);
        if space.tm().apply(&right[..n]) != Some(x.get(-1)) {
            continue;
        }
        // A-letters y_{−1}, y_{−2}, …
        let a: Vec<Sym> = (1..=depth as i64).map(|i| y.get(-i)).collect();
        let mut z = right.clone();
        if extend_left(space, n, k, &a, &mut z, 0, depth) {
            out.insert(y);
        }
    }
    out
}

fn extend_left(space: &ZipShiftSpace, n: usize, k: usize, a: &[Sym], z: &mut Vec<Sym>, placed: usize, depth: usize) -> bool {
    if placed == depth {
        return true;
    }
    for c in 0..k {
        z.insert(0, c);
        let ok = space.tm().apply(&z[..n]) == Some(a[placed])
            && language_ok(space, z)
            && extend_left(space, n, k, a, z, placed + 1, depth);
        z.remove(0);
        if ok {
            return true;
        }
    }
    false
}

fn language_ok(space: &ZipShiftSpace, z: &[Sym]) -> bool {
    match space.kind() {
        Kind::Sofic { .. } => space.contains_a_prime(z),
        _ => avoids(space, z),
    }
}
