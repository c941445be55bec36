mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zipshift_core::orbits::{pre_periodic_points, PeriodicPoint};
use zipshift_core::point::{is_admissible, random_point};
use zipshift_core::preimage::{preimages, DEFAULT_DEPTH};

#[test]
fn languages_match_brute_force_extension() {
    for name in ["three_letter_sft", "golden_mean", "two_step_sft", "full_two", "sigma_f"] {
        let space = fixture(name);
        let k = space.alphabet_a_prime().len();
        for len in 1..=5 {
            let words = space.words_a_prime(len);
            for w in space.alphabet_a_prime().all_words(len) {
                assert_eq!(words.contains(&w), brute_in_language(&space, &w, 4), "{name}: {w:?}");
            }
            assert!(words.len() <= k.pow(len as u32));
        }
    }
}

#[test]
fn random_points_are_admissible() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in SPACES {
        let space = fixture(name);
        for _ in 0..50 {
            let x = random_point(&space, &mut rng);
            assert!(is_admissible(&space, &x).ok, "{name}: {}", fmt(&space, &x));
        }
    }
}

#[test]
fn pre_periodic_points_of_fixed_points() {
    for (name, expected) in [("sigma_f", vec!["(a)* ; 3 (1)*"]), ("sigma_g", vec!["(a)* ; 2 (1)*", "(a)* ; 3 (1)*", "(a)* ; 4 (1)*"])] {
        let space = fixture(name);
        let p = PeriodicPoint::from_word(&space, vec![0]).unwrap();
        let got: Vec<String> = pre_periodic_points(&space, &p, 1, DEFAULT_DEPTH).unwrap().iter().map(|y| fmt(&space, y)).collect();
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn sofic_left_tail_with_two_lifts() {
    let space = fixture("six_letter_sofic");
    let x = point(&space, "(b)* ; 2 (1)*");
    let r = preimages(&space, &x, DEFAULT_DEPTH).unwrap();
    let got: Vec<String> = r.points.iter().map(|y| fmt(&space, y)).collect();
    assert_eq!(got, ["(b)* ; 3 2 (1)*", "(b)* ; 4 2 (1)*"]);
    assert_eq!(brute_preimages(&space, &x, 12), r.points.into_iter().collect());
}

#[test]
fn three_letter_preimage_is_unique() {
    let space = fixture("three_letter_sft");
    let x = point(&space, "(b)* a b b ; 1 2 2 (2 3)*");
    let r = preimages(&space, &x, DEFAULT_DEPTH).unwrap();
    let got: Vec<String> = r.points.iter().map(|y| fmt(&space, y)).collect();
    assert_eq!(got, ["(b)* a b ; 3 1 2 2 (2 3)*"]);
}

#[test]
fn inadmissible_points_are_rejected() {
    let space = fixture("three_letter_sft");
    // 1 1 is forbidden.
    let x = point(&space, "(b)* ; 1 1 (2)*");
    assert!(!is_admissible(&space, &x).ok);
    assert!(preimages(&space, &x, DEFAULT_DEPTH).is_err());
}
