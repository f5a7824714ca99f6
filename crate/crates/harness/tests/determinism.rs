use drazin_core::operator::Block;
use drazin_core::{spectral_profile, ToleranceFrame};
use drazin_harness::{gen_operator, run_suite, trial_seed, GeneratorProfile, Status, Suite};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn operators_depend_only_on_seed_and_trial() {
    let p = GeneratorProfile::with_seed(42);
    for t in 0..20 {
        assert_eq!(gen_operator(&p, t).unwrap(), gen_operator(&p, t).unwrap());
    }
    let q = GeneratorProfile::with_seed(43);
    assert!((0..20).any(|t| gen_operator(&p, t).unwrap() != gen_operator(&q, t).unwrap()));
}

#[test]
fn trial_rng_is_seeded_by_trial_seed() {
    let p = GeneratorProfile::with_seed(9);
    let mut a = p.rng(17);
    let mut b = ChaCha8Rng::seed_from_u64(trial_seed(9, 17));
    assert_eq!(a.next_u64(), b.next_u64());
    assert_ne!(trial_seed(9, 17), trial_seed(9, 18));
    assert_ne!(trial_seed(9, 17), trial_seed(10, 17));
}

#[test]
fn points_only_profile_gives_finite_diagonals() {
    let p = GeneratorProfile::points_only(5);
    for t in 0..30 {
        let op = gen_operator(&p, t).unwrap();
        for b in op.blocks().unwrap() {
            match b {
                Block::Diagonal(d) => assert!(d.finite_values().is_some(), "{}", d.dsl().unwrap_or_default()),
                other => panic!("trial {t}: unexpected block {}", other.dsl()),
            }
        }
        let prof = spectral_profile(&op, &ToleranceFrame::default()).unwrap();
        assert!(prof.sigma.is_finite() && prof.drazin_spectrum.is_empty());
    }
}

#[test]
fn invalid_profiles_are_rejected() {
    let mut p = GeneratorProfile::with_seed(0);
    p.block_mix.matrix = -1.0;
    assert!(gen_operator(&p, 0).is_err());
    let mut p = GeneratorProfile::with_seed(0);
    p.max_blocks = 0;
    assert!(run_suite(Suite::T1, 1, &p).is_err());
}

#[test]
fn reports_are_reproducible() {
    let p = GeneratorProfile::with_seed(11);
    for s in [Suite::Axioms, Suite::T2, Suite::Profile] {
        let a = run_suite(s, 15, &p).unwrap();
        let b = run_suite(s, 15, &p).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.status, Status::Pass, "{a:?}");
    }
}

#[test]
fn suite_names_parse_case_insensitively() {
    for s in Suite::ALL {
        assert_eq!(s.name().to_lowercase().parse::<Suite>().unwrap(), s);
    }
    assert!("T4".parse::<Suite>().is_err());
}
