mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use signed_measures::levy::{
    activity, char_fn, check_levy_integrability, compose_two_sided, CharacteristicPair,
    DensityFamily, LevyError, LevySpec, Sides, WeightMeasure,
};
use signed_measures::measure::{BorelSet, StepDensity};

fn unit(weight: WeightMeasure) -> LevySpec {
    LevySpec::new(weight, 1.0).unwrap()
}

fn builtin_specs() -> Vec<LevySpec> {
    vec![
        unit(WeightMeasure::density(DensityFamily::Gamma { a: 1.0, b: 1.0 }).unwrap()),
        unit(
            WeightMeasure::density(DensityFamily::Stable {
                a: 1.0,
                sigma: 0.5,
                w_max: 2.0,
            })
            .unwrap(),
        ),
        unit(
            WeightMeasure::density(DensityFamily::PowerLaw {
                alpha: 0.5,
                coef: 1.0,
                cutoff: None,
            })
            .unwrap(),
        ),
        unit(WeightMeasure::density(DensityFamily::Exponential { a: 1.0, b: 1.0 }).unwrap()),
        unit(WeightMeasure::discrete(vec![(1.0, 3.0), (-1.0, 2.0)]).unwrap()),
        LevySpec::with_horizon(
            WeightMeasure::discrete(vec![(0.5, 1.0), (-2.0, 0.25)]).unwrap(),
            2.0,
            3.0,
        )
        .unwrap(),
    ]
}

#[test]
fn integrability_matches_closed_forms() {
    let cases: Vec<(WeightMeasure, f64)> = vec![
        (
            WeightMeasure::density_on(
                DensityFamily::PowerLaw {
                    alpha: 0.5,
                    coef: 1.0,
                    cutoff: Some(1.0),
                },
                Sides::Both,
            )
            .unwrap(),
            4.0,
        ),
        (
            WeightMeasure::density(DensityFamily::Gamma { a: 2.0, b: 1.5 }).unwrap(),
            2.0 * ((1.0 - (-1.5f64).exp()) / 1.5 + common::exp_integral_e1(1.5)),
        ),
        (
            WeightMeasure::density(DensityFamily::Stable {
                a: 1.0,
                sigma: 0.5,
                w_max: 4.0,
            })
            .unwrap(),
            // ∫_0^1 w^{-1/2} + ∫_1^4 w^{-3/2}
            2.0 + 2.0 * (1.0 - 0.5),
        ),
        (
            WeightMeasure::density(DensityFamily::Exponential { a: 1.0, b: 1.0 }).unwrap(),
            2.0 * (1.0 - (-1.0f64).exp()),
        ),
        (
            WeightMeasure::density_on(
                DensityFamily::PowerLaw {
                    alpha: 0.5,
                    coef: 1.0,
                    cutoff: None,
                },
                Sides::Both,
            )
            .unwrap(),
            // 2(∫_0^1 θ^{-1/2} + ∫_1^∞ θ^{-3/2})
            8.0,
        ),
    ];
    for (weight, expect) in cases {
        let r = check_levy_integrability(&unit(weight.clone())).unwrap();
        assert!(r.ok);
        assert!(
            (r.value - expect).abs() < 1e-6 * expect,
            "{weight:?}: {} vs {expect}",
            r.value
        );
    }
    let divergent = WeightMeasure::density(DensityFamily::PowerExp {
        coef: 1.0,
        exponent: -2.0,
        rate: 0.0,
        lo: 0.0,
        hi: Some(1.0),
    })
    .unwrap();
    assert!(!check_levy_integrability(&unit(divergent)).unwrap().ok);
}

#[test]
fn activity_masses() {
    let a = activity(&unit(
        WeightMeasure::discrete(vec![(1.0, 2.0), (-1.0, 3.0)]).unwrap(),
    ))
    .unwrap();
    assert!(a.finite && a.mass == 5.0);
    let laplace = activity(&unit(
        WeightMeasure::density(DensityFamily::Exponential { a: 1.0, b: 1.0 }).unwrap(),
    ))
    .unwrap();
    assert!(laplace.finite && (laplace.mass - 2.0).abs() < 1e-9);
    let power = WeightMeasure::density(DensityFamily::PowerLaw {
        alpha: 0.5,
        coef: 1.0,
        cutoff: Some(1.0),
    })
    .unwrap();
    assert!(!activity(&unit(power)).unwrap().finite);
}

#[test]
fn skellam_char_fn_matches_fourier_sum_of_oracle_pmf() {
    let (mu1, mu2) = (3.0, 2.0);
    let pair = CharacteristicPair::without_drift(unit(
        WeightMeasure::discrete(vec![(1.0, mu1), (-1.0, mu2)]).unwrap(),
    ));
    let b = BorelSet::interval(0.0, 1.0).unwrap();
    for i in 1..=30 {
        let t = 0.1 * i as f64;
        let fourier: Complex64 = (-60i64..=60)
            .map(|k| Complex64::from_polar(common::skellam_bessel(k, mu1, mu2), t * k as f64))
            .sum();
        let c = char_fn(&pair, t, &b).unwrap();
        assert!((c - fourier).norm() < 1e-12, "t = {t}: {c} vs {fourier}");
    }
}

#[test]
fn drift_only_is_a_shift() {
    let pair = CharacteristicPair::new(
        unit(WeightMeasure::zero()),
        StepDensity::constant(0.0, 1.0, 1.5).unwrap(),
    );
    let b = BorelSet::interval(0.2, 0.6).unwrap();
    for t in [0.3, 1.0, 2.5] {
        let c = char_fn(&pair, t, &b).unwrap();
        assert!((c - Complex64::from_polar(1.0, t * 1.5 * 0.4)).norm() < 1e-14);
    }
}

#[test]
fn modulus_bounded_on_grid() {
    let b = BorelSet::from_pairs(vec![(0.0, 0.3), (0.5, 0.9)]).unwrap();
    for spec in builtin_specs() {
        let pair = CharacteristicPair::without_drift(spec);
        for i in 0..100 {
            let t = -10.0 + 0.2 * i as f64;
            let c = char_fn(&pair, t, &b).unwrap();
            assert!(c.norm() <= 1.0 + 1e-12, "{t}: {c}");
        }
    }
}

#[test]
fn compose_rejects_signed_inputs() {
    let neg = WeightMeasure::discrete(vec![(-1.0, 1.0)]).unwrap();
    let pos = WeightMeasure::discrete(vec![(1.0, 1.0)]).unwrap();
    assert!(matches!(
        compose_two_sided(&neg, &pos),
        Err(LevyError::SupportViolation(_))
    ));
    assert_eq!(
        compose_two_sided(&pos, &WeightMeasure::zero()).unwrap(),
        pos
    );
    assert_eq!(
        compose_two_sided(
            &WeightMeasure::discrete(vec![(2.0, 1.0)]).unwrap(),
            &WeightMeasure::discrete(vec![(3.0, 0.5)]).unwrap()
        )
        .unwrap(),
        WeightMeasure::discrete(vec![(2.0, 1.0), (-3.0, 0.5)]).unwrap()
    );
}

fn positive_atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((1u32..40, 1u32..20), 0..8).prop_map(|v| {
        v.into_iter()
            .map(|(w, m)| (w as f64 / 4.0, m as f64 / 8.0))
            .collect()
    })
}

fn interval_mass(atoms: &[(f64, f64)], a: f64, b: f64) -> f64 {
    atoms
        .iter()
        .filter(|(w, _)| *w > a && *w < b)
        .map(|(_, m)| m)
        .sum()
}

proptest! {
    #[test]
    fn char_fn_conjugate_symmetry(spec_index in 0usize..6, t in -8.0f64..8.0, lo in 0.0f64..0.5, len in 0.0f64..0.5) {
        let pair = CharacteristicPair::new(
            builtin_specs()[spec_index].clone(),
            StepDensity::constant(0.1, 0.7, -0.8).unwrap(),
        );
        let b = BorelSet::interval(lo, lo + len).unwrap();
        let plus = char_fn(&pair, t, &b).unwrap();
        let minus = char_fn(&pair, -t, &b).unwrap();
        prop_assert!((minus - plus.conj()).norm() < 1e-12);
    }

    #[test]
    fn composite_recovers_components(f1 in positive_atoms(), f2 in positive_atoms(), a in 0.0f64..5.0, len in 0.0f64..6.0) {
        let (m1, m2) = (WeightMeasure::discrete(f1.clone()).unwrap(), WeightMeasure::discrete(f2.clone()).unwrap());
        let c = compose_two_sided(&m1, &m2).unwrap();
        let b = a + len;
        prop_assert!((c.mass_between(a, b).unwrap() - interval_mass(&f1, a, b)).abs() < 1e-12);
        prop_assert!((c.mass_between(-b, -a).unwrap() - interval_mass(&f2, a, b)).abs() < 1e-12);
        prop_assert_eq!(c.positive_part(), m1.positive_part());
        prop_assert_eq!(c.reflected_negative_part(), m2.positive_part());
    }

    #[test]
    fn composite_of_densities_splits(a in 0.1f64..3.0, b in 0.5f64..3.0, lo in 0.01f64..2.0, len in 0.01f64..3.0) {
        let gamma = WeightMeasure::density(DensityFamily::Gamma { a, b }).unwrap();
        let expo = WeightMeasure::density_on(DensityFamily::Exponential { a: 1.0, b }, Sides::Positive).unwrap();
        let c = compose_two_sided(&gamma, &expo).unwrap();
        let hi = lo + len;
        let g = gamma.mass_between(lo, hi).unwrap();
        prop_assert!((c.mass_between(lo, hi).unwrap() - g).abs() < 1e-9 * g.max(1e-3));
        let e = ((-b * lo).exp() - (-b * hi).exp()) / b;
        prop_assert!((c.mass_between(-hi, -lo).unwrap() - e).abs() < 1e-9 * e.max(1e-3));
    }
}
