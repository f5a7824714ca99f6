//! Invariants of the exact matrix calculus and of spectral profiles.

use drazin_core::linalg::{ascent_descent, drazin_inverse};
use drazin_core::operator::{Component, DiagonalBlock};
use drazin_core::sequence::Sequence;
use drazin_core::spectra::Multiplicity;
use drazin_core::{
    spectral_profile, ComplexValue, ExactMatrix, GaussRat, JordanPresentation, Matrix, MatrixBlock, OperatorDesc,
    ToleranceFrame,
};
use proptest::prelude::*;

fn tf() -> ToleranceFrame {
    ToleranceFrame::default()
}

fn int_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-2i64..3, n * n).prop_map(move |v| Matrix::from_fn(n, n, |i, j| GaussRat::int(v[i * n + j])))
}

/// Unit upper triangular, so always invertible.
fn similarity(n: usize) -> impl Strategy<Value = ExactMatrix> {
    prop::collection::vec(-2i64..3, n * n).prop_map(move |v| {
        Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => GaussRat::int(1),
            std::cmp::Ordering::Less => GaussRat::int(v[i * n + j]),
            std::cmp::Ordering::Greater => GaussRat::int(0),
        })
    })
}

fn presentation() -> impl Strategy<Value = JordanPresentation> {
    prop::collection::btree_map(-3i64..4, prop::collection::vec(1usize..3, 1..3), 1..3).prop_flat_map(|eig| {
        let eigen: Vec<(GaussRat, Vec<usize>)> = eig.into_iter().map(|(l, b)| (GaussRat::int(l), b)).collect();
        let n = eigen.iter().flat_map(|(_, b)| b.iter()).sum();
        similarity(n).prop_map(move |s| JordanPresentation::new(eigen.clone(), Some(s)).expect("valid presentation"))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn drazin_axioms_hold_exactly(a in (1usize..5).prop_flat_map(int_matrix)) {
        let (x, k) = drazin_inverse(&a, &tf()).unwrap();
        prop_assert_eq!(x.matmul(&a).matmul(&x), x.clone());
        prop_assert_eq!(a.matmul(&x), x.matmul(&a));
        let ak = a.pow(k as u32);
        prop_assert_eq!(ak.matmul(&a).matmul(&x), ak);
    }

    #[test]
    fn index_is_least(a in (1usize..5).prop_flat_map(int_matrix)) {
        let (x, k) = drazin_inverse(&a, &tf()).unwrap();
        if k > 0 {
            let below = a.pow(k as u32 - 1);
            prop_assert_ne!(below.matmul(&a).matmul(&x), below);
        }
    }

    #[test]
    fn ascent_equals_descent_in_finite_dimensions(a in (1usize..5).prop_flat_map(int_matrix), l in -2i64..3) {
        let (asc, dsc) = ascent_descent(&a, &GaussRat::int(l), &tf()).unwrap();
        prop_assert_eq!(asc, dsc);
    }

    #[test]
    fn drazin_indices_of_ab_and_ba_differ_by_at_most_one(
        (a, b) in (1usize..4).prop_flat_map(|n| (int_matrix(n), int_matrix(n)))
    ) {
        let (_, kab) = drazin_inverse(&a.matmul(&b), &tf()).unwrap();
        let (_, kba) = drazin_inverse(&b.matmul(&a), &tf()).unwrap();
        prop_assert!(kab.abs_diff(kba) <= 1, "ind(ab) = {kab}, ind(ba) = {kba}");
    }

    #[test]
    fn presented_and_raw_matrices_agree(p in presentation()) {
        let raw = p.to_matrix();
        prop_assert_eq!(drazin_inverse(&raw, &tf()).unwrap(), p.drazin_inverse());
        let presented = MatrixBlock::Presented(p.clone());
        prop_assert_eq!(presented.poles(&tf()).unwrap(), MatrixBlock::Exact(raw).poles(&tf()).unwrap());
    }

    #[test]
    fn pole_orders_are_largest_jordan_blocks(p in presentation()) {
        let prof = spectral_profile(&p.clone().into(), &tf()).unwrap();
        for (l, blocks) in p.eigen_data() {
            let want = *blocks.iter().max().unwrap() as u32;
            prop_assert_eq!(prof.poles.order_at(&ComplexValue::Exact(l.clone()), &tf()).unwrap(), Some(want));
        }
        let at0 = p.eigen_data().iter().find(|(l, _)| *l == GaussRat::int(0)).map_or(0, |(_, b)| *b.iter().max().unwrap());
        prop_assert_eq!(prof.drazin_index_at_0, Some(at0 as u32));
    }

    #[test]
    fn matrix_profiles_are_coherent(p in presentation()) {
        let prof = spectral_profile(&p.into(), &tf()).unwrap();
        prop_assert!(prof.drazin_spectrum.is_empty());
        prop_assert!(prof.acc.is_empty());
        prop_assert!(prof.iso.equals(&prof.sigma, &tf()).is_yes());
        prop_assert!(prof.poles.set().equals(&prof.sigma, &tf()).is_yes());
        prop_assert!(prof.countable && prof.algebraic.flag && prof.meromorphic);
    }

    #[test]
    fn adjoint_conjugates_the_spectrum(p in presentation()) {
        let op: OperatorDesc = p.into();
        let a = spectral_profile(&op, &tf()).unwrap();
        let b = spectral_profile(&OperatorDesc::adjoint(op), &tf()).unwrap();
        prop_assert!(b.sigma.equals(&a.sigma.conjugate(), &tf()).is_yes());
        prop_assert!(b.drazin_spectrum.equals(&a.drazin_spectrum.conjugate(), &tf()).is_yes());
    }
}

fn diag(components: Vec<Component>) -> OperatorDesc {
    DiagonalBlock::new(components).unwrap().into()
}

#[test]
fn geometric_diagonal_has_its_limit_in_the_drazin_spectrum() {
    let seq = Sequence::geometric(GaussRat::int(1), GaussRat::ratio(1, 2)).unwrap();
    let prof = spectral_profile(&diag(vec![Component::family(seq)]), &tf()).unwrap();
    let zero = ComplexValue::int(0);
    assert!(prof.drazin_spectrum.contains(&zero, &tf()).is_yes());
    assert!(prof.acc.contains(&zero, &tf()).is_yes());
    assert!(prof.poles.set().contains(&ComplexValue::int(1), &tf()).is_yes());
    assert!(prof.poles.set().contains(&zero, &tf()).not().is_yes());
    assert!(prof.countable && !prof.algebraic.flag && prof.meromorphic);
    assert_eq!(prof.drazin_index_at_0, None);
}

#[test]
fn projection_plus_identity_summand_has_simple_poles() {
    let st = diag(vec![
        Component::constant(GaussRat::int(0), Multiplicity::Finite(1)).unwrap(),
        Component::constant(GaussRat::int(1), Multiplicity::Infinite).unwrap(),
    ]);
    let prof = spectral_profile(&st, &tf()).unwrap();
    assert_eq!(prof.poles.orders(), &[(ComplexValue::int(0), 1), (ComplexValue::int(1), 1)]);
    assert!(prof.drazin_spectrum.is_empty());
    assert_eq!(prof.drazin_index_at_0, Some(1));
}

#[test]
fn profile_json_keys_follow_field_order() {
    let op: OperatorDesc = JordanPresentation::new(vec![(GaussRat::int(0), vec![2])], None).unwrap().into();
    let json = serde_json::to_string(&spectral_profile(&op, &tf()).unwrap()).unwrap();
    let keys = [
        "sigma",
        "iso",
        "acc",
        "poles",
        "drazin_spectrum",
        "ies",
        "asc_spectrum",
        "dsc_spectrum",
        "ld_spectrum",
        "rd_spectrum",
        "countable",
        "algebraic",
        "meromorphic",
        "drazin_index_at_0",
    ];
    let at: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\":")).expect(k)).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{json}");
    assert!(json.ends_with("\"drazin_index_at_0\":2}"), "{json}");
}
