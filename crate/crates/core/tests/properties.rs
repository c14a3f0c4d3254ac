mod common;

use num_traits::Zero;
use proptest::prelude::*;

use recform_core::algebra::{rat, HomogeneousForm, Rat, RatMatrix, UniPoly};
use recform_core::binary::{binary_form, binary_invariants, c_gh_via_associated};
use recform_core::factorization::{char_roots, decompose_form, DEFAULT_PRECISION};
use recform_core::form_builder::{build_form, build_form_via_companion, cassini_form};
use recform_core::recurrence::{RecurrenceRelation, Sequence};
use recform_core::verify::{verify_identity, verify_identity_parallel};

use common::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=20).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

fn rat_vec(len: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), len)
}

fn form_of(arity: usize, degree: u32, coeffs: &[Rat]) -> HomogeneousForm {
    let monos = recform_core::algebra::all_monomials(arity, degree);
    HomogeneousForm::from_terms(
        arity,
        degree,
        monos
            .into_iter()
            .zip(coeffs.iter().cloned())
            .map(|(m, c)| (m.0, c)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_arithmetic_is_exact(a in small_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a.clone());
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity(k in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = loop {
            let rows: Vec<Vec<Rat>> = (0..k)
                .map(|_| (0..k).map(|_| rat_of_height(&mut r, HEIGHT)).collect())
                .collect();
            let m = RatMatrix::from_rows(rows).unwrap();
            if !m.det().unwrap().is_zero() {
                break m;
            }
        };
        let inv = m.inverse().unwrap();
        prop_assert_eq!(inv.mul(&m).unwrap(), RatMatrix::identity(k));
        prop_assert_eq!(m.det().unwrap() * inv.det().unwrap(), rat(1));
    }

    #[test]
    fn squarefree_parts_reconstruct(roots in prop::collection::vec(-6i64..=6, 1..6), lead in 1i64..5) {
        let mut p = UniPoly::from_i64(&[lead]);
        for r in &roots {
            p = p.mul(&UniPoly::from_i64(&[-r, 1]));
        }
        let parts = p.squarefree_decompose().unwrap();
        let mut back = UniPoly::from_i64(&[1]);
        for (part, m) in &parts {
            back = back.mul(&part.pow(*m));
        }
        prop_assert_eq!(back, p.monic());
    }

    #[test]
    fn form_evaluation_is_multiplicative(
        f in rat_vec(6),
        g in rat_vec(3),
        x in rat_vec(3),
    ) {
        let f = form_of(3, 2, &f);
        let g = form_of(3, 1, &g);
        prop_assert_eq!(
            f.mul(&g).eval(&x).unwrap(),
            f.eval(&x).unwrap() * g.eval(&x).unwrap()
        );
    }

    #[test]
    fn terms_satisfy_relation_in_both_directions(
        gammas in rat_vec(3),
        initials in rat_vec(3),
    ) {
        prop_assume!(!gammas[0].is_zero());
        let r = RecurrenceRelation::new(gammas.clone()).unwrap();
        let s = Sequence::new(r, initials).unwrap();
        for n in -6i64..6 {
            let next: Rat = (0..3).map(|i| &gammas[i] * s.eval(n + i as i64)).sum();
            prop_assert_eq!(s.eval(n + 3), next);
        }
    }

    #[test]
    fn both_constructions_agree_and_verify(k in 2usize..=3, seed in any::<u64>()) {
        let fam = random_family(&mut rng(seed), k, HEIGHT);
        let pkg = build_form(&fam).unwrap();
        prop_assert_eq!(&pkg, &build_form_via_companion(&fam).unwrap());
        prop_assert!(verify_identity(&fam, &pkg, -4..=10).unwrap().passed());
    }

    #[test]
    fn parallel_report_equals_sequential(seed in any::<u64>(), workers in 2usize..6) {
        let fam = random_family(&mut rng(seed), 2, HEIGHT);
        let mut pkg = build_form(&fam).unwrap();
        if seed % 2 == 0 {
            pkg.base = -pkg.base;
        }
        let a = verify_identity(&fam, &pkg, -9..=9).unwrap();
        let b = verify_identity_parallel(&fam, &pkg, -9..=9, workers).unwrap();
        prop_assert_eq!((a.checked, a.failures), (b.checked, b.failures));
    }

    #[test]
    fn binary_closed_form_equals_general_construction(seed in any::<u64>()) {
        let fam = random_family(&mut rng(seed), 2, HEIGHT);
        let [g, h] = [&fam.sequences()[0], &fam.sequences()[1]];
        prop_assert_eq!(binary_form(g, h).unwrap(), build_form(&fam).unwrap());
        let inv = binary_invariants(g, h).unwrap();
        let (x, y) = c_gh_via_associated(g, h).unwrap();
        prop_assert_eq!(&x, &inv.c_gh);
        prop_assert_eq!(&y, &inv.c_gh);
    }

    #[test]
    fn root_multiplicities_cover_the_order(k in 2usize..=5, seed in any::<u64>()) {
        let relation = random_integer_relation(&mut rng(seed), k, 9);
        let roots = char_roots(&relation, DEFAULT_PRECISION).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), k);
        let p = relation.char_poly();
        for root in &roots {
            let z = root.value.to_complex();
            let scale = 1.0 + z.abs().powi(k as i32);
            prop_assert!(p.eval_complex(z.value()).norm() <= 1e-6 * scale);
        }
    }

    #[test]
    fn integer_families_factor_within_tolerance(k in 2usize..=4, seed in any::<u64>()) {
        let fam = random_integer_family(&mut rng(seed), k, 6);
        let d = decompose_form(&fam, DEFAULT_PRECISION).unwrap();
        prop_assert_eq!(d.total_multiplicity(), k);
        prop_assert!(d.residual <= 1e-9);
    }
}

#[test]
fn random_families_factor_within_tolerance() {
    let mut r = rng(44);
    for i in 0..100 {
        let fam = random_family(&mut r, 2 + i % 3, HEIGHT);
        let d = decompose_form(&fam, DEFAULT_PRECISION).unwrap();
        assert!(d.residual <= 1e-9, "family {i}: residual {}", d.residual);
    }
}

#[test]
fn exact_roots_give_exact_factors() {
    // (x - 1)(x - 2)(x + 3) = x³ - 7x + 6
    let relation = RecurrenceRelation::from_i64(&[-6, 7, 0]).unwrap();
    let fam = random_family_for(&mut rng(3), relation, HEIGHT);
    let d = decompose_form(&fam, DEFAULT_PRECISION).unwrap();
    assert!(d.is_exact());
    assert_eq!(d.residual, 0.0);
    assert_eq!(d.expand_exact().unwrap(), build_form(&fam).unwrap().form_f);
}

#[test]
fn cassini_forms_verify_on_corpus() {
    let mut r = rng(9);
    for k in 2..=4 {
        for _ in 0..5 {
            let relation = random_integer_relation(&mut r, k, 5);
            let initials: Vec<Rat> = (0..k).map(|_| rat_of_height(&mut r, 5)).collect();
            let s = Sequence::new(relation, initials).unwrap();
            if let Ok(pkg) = cassini_form(&s) {
                assert!(verify_identity(&s.shifted_family(), &pkg, -5..=20)
                    .unwrap()
                    .passed());
            }
        }
    }
}

#[test]
fn golden_packages_verify_on_wide_range() {
    for (name, fam) in golden_families() {
        let pkg = build_form(&fam).unwrap();
        let report = verify_identity(&fam, &pkg, -10..=20).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.failures);
    }
}
