//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Each criterion is timed against its budget.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zipshift::cli;
use zipshift::spec::{load_code, parse_code_tables};
use zipshift_core::codes::{check_commutation, higher_block, higher_power, BlockCode, BlockMode};
use zipshift_core::horseshoe::{build_model, code_point, periodic_point, verify_conjugacy};
use zipshift_core::orbits::{homoclinic_orbits, periodic_points, HomoclinicDatum, PeriodicPoint};
use zipshift_core::point::{random_point, shift, shift_k};
use zipshift_core::preimage::{preimages, DEFAULT_DEPTH};
use zipshift_core::symbols::Sym;

use common::*;

type Check = Result<String, String>;

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("zipshift").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stable_strings() -> Check {
    let cases = [
        ("00", "00\t10\t11\t01\n"),
        ("10′1′", "00′0′\t10′0′\t11′0′\t01′0′\t01′1′\t11′1′\t10′1′\t00′1′\n"),
    ];
    for (w, expected) in cases {
        let (code, out) = run_cli(&["horseshoe", "stable-string", w]);
        ensure(code == 0 && out == expected, || format!("{w}: got {out:?}"))?;
    }
    Ok("both chains byte-exact".into())
}

fn periodic_counts() -> Check {
    let space = fixture("horseshoe_coding");
    let model = build_model(2, BigRational::from_integer(1.into())).map_err(|e| e.to_string())?;
    let mut counts = Vec::new();
    for (m, expected) in [(1, 4), (2, 16), (3, 64)] {
        let n = periodic_points(&space, m).map_err(|e| e.to_string())?.len();
        ensure(n == expected, || format!("m = {m}: {n} periodic points, expected {expected}"))?;
        // The same count from the geometry: every periodic code is realized.
        let letters = 4usize;
        let mut realized = 0;
        for idx in 0..letters.pow(m as u32) {
            let word: Vec<Sym> = (0..m).map(|i| idx / letters.pow(i as u32) % letters).collect();
            let (p, folds) = periodic_point(&model, &word).map_err(|e| e.to_string())?;
            let code = code_point(&model, &p, 2 * m, &folds.repeat(2)).map_err(|e| e.to_string())?;
            if code.right == word.repeat(2) {
                realized += 1;
            }
        }
        ensure(realized == expected, || format!("m = {m}: {realized} realized periodic codes"))?;
        counts.push(n.to_string());
    }
    Ok(format!("counts {}", counts.join(", ")))
}

fn preimage_cardinality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (name, expected) in [("sigma_f", 2), ("sigma_g", 4)] {
        let space = fixture(name);
        for _ in 0..100 {
            let x = random_point(&space, &mut rng);
            let r = preimages(&space, &x, DEFAULT_DEPTH).map_err(|e| e.to_string())?;
            ensure(r.points.len() == expected, || {
                format!("{name}: {} has {} pre-images", fmt(&space, &x), r.points.len())
            })?;
            for y in &r.points {
                ensure(shift(&space, y).as_ref() == Ok(&x), || format!("{name}: σ(y) ≠ x"))?;
            }
        }
    }
    Ok("100 points each: 2 under σ_f, 4 under σ_g".into())
}

fn homoclinic() -> Check {
    let space = fixture("horseshoe_coding");
    let p = PeriodicPoint::from_word(&space, point(&space, "(a b)* ; (0 1')*").right_period().to_vec())
        .map_err(|e| e.to_string())?;
    let h = point(&space, "(a b)* b a ; 1 (0 1')*");
    let datum = HomoclinicDatum::new(&space, p, h).map_err(|e| e.to_string())?;
    let report = homoclinic_orbits(&space, &datum).map_err(|e| e.to_string())?;
    ensure(report.orbits.len() == 4, || format!("{} orbits", report.orbits.len()))?;
    let level = |i: i64| -> Result<BTreeSet<String>, String> {
        report
            .orbits
            .iter()
            .map(|o| o.point(&space, &datum, i).map(|y| fmt(&space, &y)).map_err(|e| e.to_string()))
            .collect()
    };
    let want1: BTreeSet<String> = ["(a b)* b ; 0 1 (0 1')*", "(a b)* b ; 0' 1 (0 1')*"].map(|s| fmt(&space, &point(&space, s))).into();
    let want2: BTreeSet<String> = [
        "(a b)* ; 1 0 1 (0 1')*",
        "(a b)* ; 1' 0 1 (0 1')*",
        "(a b)* ; 1 0' 1 (0 1')*",
        "(a b)* ; 1' 0' 1 (0 1')*",
    ]
    .map(|s| fmt(&space, &point(&space, s)))
    .into();
    let (got1, got2) = (level(-1)?, level(-2)?);
    ensure(got1 == want1, || format!("first level {got1:?}"))?;
    ensure(got2 == want2, || format!("second level {got2:?}"))?;
    Ok("4 orbits; h₁, h₂ and h₁₁ … h₂₂ match".into())
}

fn conjugacy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut parts = Vec::new();
    for n in [1, 2] {
        let model = build_model(n, BigRational::from_integer(1.into())).map_err(|e| e.to_string())?;
        let r = verify_conjugacy(&model, &model.coding_space(), 6, 200, &mut rng).map_err(|e| e.to_string())?;
        ensure(r.ok(), || format!("N = {n}: {:?}", r.violations.first()))?;
        parts.push(format!("N={n}: 0 violations"));
    }
    Ok(parts.join(", "))
}

fn trace_counting() -> Check {
    let mut checked = 0;
    for name in SPACES {
        let space = fixture(name);
        if !space.is_finite_type() || space.alphabet_a_prime().len() > 4 {
            continue;
        }
        for m in 1..=5 {
            let trace = space.count_periodic(m).map_err(|e| e.to_string())?;
            let brute = brute_periodic_count(&space, m);
            ensure(trace == brute, || format!("{name}, m = {m}: trace {trace}, brute force {brute}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (space, m) pairs agree"))
}

fn commutation() -> Check {
    let mut codes: Vec<(String, BlockCode)> = Vec::new();
    for file in ["horseshoe_collapse.code.toml", "two_block.code.toml"] {
        codes.push((file.into(), load_code(&fixture_path(file)).map_err(|e| e.to_string())?));
    }
    for name in ["three_letter_sft", "full_two", "golden_mean"] {
        let space = fixture(name);
        for n in [2, 3] {
            let hb = higher_block(&space, n).map_err(|e| e.to_string())?;
            codes.push((format!("{name} {n}-block"), hb.as_block_code().map_err(|e| e.to_string())?));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (name, code) in &codes {
        let r = check_commutation(code, 200, &mut rng).map_err(|e| e.to_string())?;
        ensure(r.ok, || format!("{name}: witness {:?}", r.witness))?;
    }
    // Negative control: send (b ; 1') to a instead of b.
    let path = fixture_path("horseshoe_collapse.code.toml");
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let base = path.parent().unwrap();
    let (source, mut tables) = parse_code_tables(&text, "collapse", base).map_err(|e| e.to_string())?;
    let key = (1, vec![3]);
    tables.psi_minus.insert(key, 0);
    if BlockCode::new(source.clone(), tables.clone()).is_ok() {
        return Err("corrupted table accepted by the validating constructor".into());
    }
    let bad = BlockCode::new_unchecked(source, tables).map_err(|e| e.to_string())?;
    let r = check_commutation(&bad, 200, &mut rng).map_err(|e| e.to_string())?;
    let witness = r.witness.ok_or("corrupted code passed")?;
    Ok(format!("{} codes commute; corrupted control fails at {}", codes.len(), fmt(bad.source(), &witness)))
}

fn higher_codes() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    for name in SPACES {
        let space = fixture(name);
        for n in 1..=3 {
            for mode in [BlockMode::Block, BlockMode::Power] {
                let hb = match mode {
                    BlockMode::Block => higher_block(&space, n),
                    BlockMode::Power => higher_power(&space, n),
                }
                .map_err(|e| format!("{name} N={n} {mode:?}: {e}"))?;
                for _ in 0..100 {
                    let x = random_point(&space, &mut rng);
                    let z = hb.forward(&x).map_err(|e| format!("{name} N={n} {mode:?}: {e}"))?;
                    let back = hb.inverse(&z).map_err(|e| e.to_string())?;
                    ensure(back == x, || format!("{name} N={n} {mode:?}: round trip fails at {}", fmt(&space, &x)))?;
                    let step = match mode {
                        BlockMode::Block => shift(&space, &x),
                        BlockMode::Power => shift_k(&space, &x, n),
                    }
                    .map_err(|e| e.to_string())?;
                    let lhs = hb.forward(&step).map_err(|e| e.to_string())?;
                    let rhs = shift(&hb.target, &z).map_err(|e| e.to_string())?;
                    ensure(lhs == rhs, || format!("{name} N={n} {mode:?}: shift mismatch at {}", fmt(&space, &x)))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} round trips and shift checks"))
}

fn preimage_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut spaces = 0;
    for name in SPACES {
        let space = fixture(name);
        if space.alphabet_a_prime().len() > 6 {
            continue;
        }
        spaces += 1;
        for _ in 0..100 {
            let x = random_point(&space, &mut rng);
            let got: BTreeSet<_> = preimages(&space, &x, DEFAULT_DEPTH).map_err(|e| e.to_string())?.points.into_iter().collect();
            let want = brute_preimages(&space, &x, 12);
            ensure(got == want, || {
                format!(
                    "{name}: {} gives {:?}, oracle {:?}",
                    fmt(&space, &x),
                    got.iter().map(|y| fmt(&space, y)).collect::<Vec<_>>(),
                    want.iter().map(|y| fmt(&space, y)).collect::<Vec<_>>()
                )
            })?;
        }
    }
    Ok(format!("{spaces} spaces × 100 points agree with the depth-12 oracle"))
}

fn even_shift() -> Check {
    let space = fixture("even_shift");
    let ap = space.alphabet_a_prime();
    let w = |s: &str| ap.parse_word(s).unwrap();
    ensure(!space.contains_a_prime(&w("101")), || "101 accepted".into())?;
    ensure(space.contains_a_prime(&w("1001")), || "1001 rejected".into())?;
    let g = space.labeled_graph();
    let a = space.alphabet_a();
    // φ₂(11) = a, φ₂(10) = φ₂(01) = b, φ₂(00) = c on source word + new letter.
    let table = |pair: &str| match pair {
        "11" => "a",
        "10" | "01" => "b",
        _ => "c",
    };
    let mut saw_01_11 = false;
    for e in &g.edges {
        let src = ap.format_word(&g.vertices[e.from]);
        let dst = ap.format_word(&g.vertices[e.to]);
        let window = format!("{}{}", &src[..1], &src[1..2]);
        let sofic = a.name(e.sofic);
        ensure(sofic == table(&window), || format!("edge {src}→{dst} labeled {sofic}"))?;
        ensure(ap.name(e.first) == &dst[dst.len() - 1..], || format!("edge {src}→{dst} first label"))?;
        if src == "01" && dst == "11" {
            saw_01_11 = ap.name(e.first) == "1" && sofic == "b";
        }
    }
    ensure(saw_01_11, || "edge 01→11 labeled (1, b) missing".into())?;
    Ok(format!("101 rejected, 1001 accepted, {} edge labels match", g.edges.len()))
}

type Criterion = (&'static str, fn() -> Check, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("stable strings", stable_strings, 1),
        ("periodic counts (2N)^m", periodic_counts, 5),
        ("pre-image cardinality", preimage_cardinality, 5),
        ("homoclinic orbits", homoclinic, 5),
        ("horseshoe conjugacy", conjugacy, 30),
        ("trace counting", trace_counting, 10),
        ("block code commutation", commutation, 30),
        ("higher block and power codes", higher_codes, 30),
        ("pre-image oracle equivalence", preimage_oracle, 60),
        ("even shift", even_shift, 1),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name} [{:.2?}] {detail}", i + 1, elapsed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
