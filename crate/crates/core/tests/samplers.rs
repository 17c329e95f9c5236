mod common;

use proptest::prelude::*;
use signed_measures::dist::WeightDistribution;
use signed_measures::levy::{CharacteristicPair, DensityFamily, LevySpec, Sides, WeightMeasure};
use signed_measures::measure::{BorelSet, Interval, StepDensity};
use signed_measures::rng::RngStream;
use signed_measures::sample::{
    check_grm_kernel, sample_crm, sample_poisson_pp, sample_skellam_pp, skellam_pmf, CrsmSampler,
    FixedAtom, GrmKernelSpec, GrmSampler,
};
use signed_measures::stats::{chi_square_gof, correlation};

const REPS: usize = 100_000;

fn unit(weight: WeightMeasure) -> LevySpec {
    LevySpec::new(weight, 1.0).unwrap()
}

fn whole() -> BorelSet<f64> {
    BorelSet::interval(0.0, 1.0).unwrap()
}

#[test]
fn poisson_process_counts() {
    let mut rng = RngStream::new(1);
    assert!(sample_poisson_pp(0.0, 1.0, &mut rng).is_empty());
    let counts: Vec<f64> = (0..REPS)
        .map(|_| sample_poisson_pp(5.0, 1.0, &mut rng).len() as f64)
        .collect();
    let (m, _) = common::mean_se(&counts);
    assert!((m - 5.0).abs() < 0.07, "{m}");
    let counts: Vec<i64> = (0..REPS)
        .map(|_| sample_poisson_pp(2.0, 1.0, &mut rng).len() as i64)
        .collect();
    let gof = chi_square_gof(&counts, |k| {
        if k < 0 {
            0.0
        } else {
            common::poisson(k as u64, 2.0)
        }
    });
    assert!(gof.p_value > 1e-3, "{gof:?}");
    let pts = sample_poisson_pp(50.0, 3.0, &mut rng);
    assert!(pts.iter().all(|&x| (0.0..3.0).contains(&x)));
}

#[test]
fn skellam_pmf_special_cases() {
    assert_eq!(skellam_pmf(0, 0.0, 0.0), 1.0);
    for k in -3..10 {
        let expect = if k < 0 {
            0.0
        } else {
            common::poisson(k as u64, 2.5)
        };
        assert!((skellam_pmf(k, 2.5, 0.0) - expect).abs() < 1e-15);
    }
    let total: f64 = (-60..=60).map(|k| skellam_pmf(k, 2.0, 3.0)).sum();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn degenerate_skellam_process_is_poisson() {
    let mut rng = RngStream::new(2);
    let counts: Vec<i64> = (0..REPS)
        .map(|_| {
            let xi = sample_skellam_pp(3.0, 0.0, &mut rng);
            assert!(xi.atoms().iter().all(|a| a.weight == 1.0));
            xi.total() as i64
        })
        .collect();
    let gof = chi_square_gof(&counts, |k| {
        if k < 0 {
            0.0
        } else {
            common::poisson(k as u64, 3.0)
        }
    });
    assert!(gof.p_value > 1e-3, "{gof:?}");
    assert!(sample_skellam_pp(0.0, 0.0, &mut rng).is_zero());
}

#[test]
fn gamma_crm_mean() {
    let spec = unit(WeightMeasure::density(DensityFamily::Gamma { a: 1.0, b: 1.0 }).unwrap());
    let mut rng = RngStream::new(3);
    let totals: Vec<f64> = (0..10_000)
        .map(|_| sample_crm(&spec, 1e-6, &mut rng).unwrap().measure.total())
        .collect();
    let (m, se) = common::mean_se(&totals);
    assert!((m - 1.0).abs() < 4.0 * se, "{m} ± {se}");
}

#[test]
fn discrete_crm_is_scaled_poisson() {
    let spec = unit(WeightMeasure::discrete(vec![(2.0, 3.0)]).unwrap());
    let mut rng = RngStream::new(4);
    let counts: Vec<i64> = (0..REPS)
        .map(|_| {
            let total = sample_crm(&spec, 1e-6, &mut rng).unwrap().measure.total();
            assert_eq!(total % 2.0, 0.0);
            (total / 2.0) as i64
        })
        .collect();
    let gof = chi_square_gof(&counts, |k| {
        if k < 0 {
            0.0
        } else {
            common::poisson(k as u64, 3.0)
        }
    });
    assert!(gof.p_value > 1e-3, "{gof:?}");
}

/// `(spec, ∫ w ρ(dw))` for the built-in families with finite mean.
fn finite_mean_specs() -> Vec<(LevySpec, f64)> {
    vec![
        (
            unit(WeightMeasure::density(DensityFamily::Gamma { a: 2.0, b: 4.0 }).unwrap()),
            0.5,
        ),
        (
            unit(
                WeightMeasure::density(DensityFamily::Stable {
                    a: 1.0,
                    sigma: 0.5,
                    w_max: 2.0,
                })
                .unwrap(),
            ),
            // ∫_0^2 w^{-1/2} dw
            2.0 * 2f64.sqrt(),
        ),
        (
            LevySpec::with_horizon(
                WeightMeasure::density_on(
                    DensityFamily::Exponential { a: 3.0, b: 2.0 },
                    Sides::Positive,
                )
                .unwrap(),
                1.5,
                2.0,
            )
            .unwrap(),
            0.75,
        ),
        (
            unit(WeightMeasure::discrete(vec![(1.0, 3.0), (-2.0, 1.0)]).unwrap()),
            1.0,
        ),
        (
            unit(
                WeightMeasure::density_on(
                    DensityFamily::PowerLaw {
                        alpha: 0.5,
                        coef: 1.0,
                        cutoff: Some(1.0),
                    },
                    Sides::Negative,
                )
                .unwrap(),
            ),
            -2.0,
        ),
    ]
}

#[test]
fn campbell_first_moment() {
    for (i, (spec, mean_jump)) in finite_mean_specs().into_iter().enumerate() {
        let expect = spec.base_rate * spec.horizon * mean_jump;
        let sampler =
            CrsmSampler::new(CharacteristicPair::without_drift(spec), vec![], 1e-7).unwrap();
        let mut rng = RngStream::new(100 + i as u64);
        let totals: Vec<f64> = (0..20_000)
            .map(|_| sampler.sample(&mut rng).measure.total())
            .collect();
        let (m, se) = common::mean_se(&totals);
        let bias = sampler.remainder();
        assert!(
            (m - expect).abs() < 4.0 * se + bias,
            "spec {i}: {m} ± {se} vs {expect}"
        );
    }
}

#[test]
fn truncation_change_within_remainder() {
    let spec = unit(
        WeightMeasure::density(DensityFamily::Stable {
            a: 1.0,
            sigma: 0.5,
            w_max: 2.0,
        })
        .unwrap(),
    );
    let coarse = CrsmSampler::new(
        CharacteristicPair::without_drift(spec.clone()),
        vec![],
        1e-3,
    )
    .unwrap();
    let fine = CrsmSampler::new(CharacteristicPair::without_drift(spec), vec![], 1e-6).unwrap();
    let mean_of = |s: &CrsmSampler, seed| {
        let mut rng = RngStream::new(seed);
        let v: Vec<f64> = (0..20_000)
            .map(|_| s.sample(&mut rng).measure.total())
            .collect();
        common::mean_se(&v)
    };
    let (mc, sc) = mean_of(&coarse, 7);
    let (mf, sf) = mean_of(&fine, 8);
    let band = coarse.remainder() + fine.remainder() + 4.0 * (sc * sc + sf * sf).sqrt();
    assert!((mf - mc).abs() < band, "{mc} vs {mf}, band {band}");
    assert!(mf >= mc - 4.0 * (sc * sc + sf * sf).sqrt());
}

#[test]
fn disjoint_sets_are_uncorrelated() {
    let spec = unit(WeightMeasure::density(DensityFamily::Exponential { a: 2.0, b: 1.0 }).unwrap());
    let sampler = CrsmSampler::new(CharacteristicPair::without_drift(spec), vec![], 1e-6).unwrap();
    let (b1, b2) = (
        BorelSet::interval(0.0, 0.4).unwrap(),
        BorelSet::from_pairs(vec![(0.5, 0.7), (0.8, 1.0)]).unwrap(),
    );
    let mut rng = RngStream::new(9);
    let (mut x, mut y) = (Vec::with_capacity(REPS), Vec::with_capacity(REPS));
    for _ in 0..REPS {
        let m = sampler.sample(&mut rng).measure;
        x.push(m.evaluate(&b1));
        y.push(m.evaluate(&b2));
    }
    let r = correlation(&x, &y);
    assert!(r.abs() < 4.0 / (REPS as f64).sqrt(), "{r}");
}

#[test]
fn samplers_are_deterministic() {
    let pair = CharacteristicPair::new(
        unit(WeightMeasure::density(DensityFamily::Exponential { a: 2.0, b: 1.0 }).unwrap()),
        StepDensity::constant(0.0, 0.5, 1.0).unwrap(),
    );
    let fixed = vec![FixedAtom {
        location: 0.25,
        weight: WeightDistribution::Normal { mean: 0.0, sd: 1.0 },
    }];
    let sampler = CrsmSampler::new(pair, fixed, 1e-6).unwrap();
    let grm = GrmSampler::new(&GrmKernelSpec::white_noise(halves(), 1.0).unwrap()).unwrap();
    for seed in [0u64, 17, u64::MAX] {
        let draw = |s: u64| {
            let mut rng = RngStream::new(s);
            (
                sampler.sample(&mut rng).measure,
                sample_skellam_pp(2.0, 1.0, &mut rng),
                sample_poisson_pp(3.0, 2.0, &mut rng),
                grm.sample(&mut rng),
            )
        };
        let (a, b) = (draw(seed), draw(seed));
        assert_eq!(
            serde_json::to_string(&a.0).unwrap(),
            serde_json::to_string(&b.0).unwrap()
        );
        assert_eq!(a.1, b.1);
        assert_eq!(a.2, b.2);
        assert_eq!(
            a.3.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.3.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}

fn halves() -> Vec<Interval<f64>> {
    vec![
        Interval::new(0.0, 0.5).unwrap(),
        Interval::new(0.5, 1.0).unwrap(),
    ]
}

fn dyadic(n: usize) -> Vec<Interval<f64>> {
    (0..n)
        .map(|i| Interval::new(i as f64 / n as f64, (i + 1) as f64 / n as f64).unwrap())
        .collect()
}

#[test]
fn rank_one_sqrt_sum_is_constant_under_refinement() {
    for n in [2, 4, 8, 16] {
        let part = dyadic(n);
        let lengths: Vec<f64> = part.iter().map(|c| c.len()).collect();
        let c = check_grm_kernel(&GrmKernelSpec::rank_one(part, &lengths).unwrap());
        assert!(c.pd);
        assert!((c.sqrt_sum - 1.0).abs() < 1e-15);
    }
    let id = GrmKernelSpec::new(halves(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let c = check_grm_kernel(&id);
    assert!(c.pd && c.sqrt_sum == 2.0);
}

#[test]
fn grm_cells_add_under_merging() {
    // Brownian-type kernel on 4 cells: merging pairs of cells gives the 2-cell kernel's law.
    let fine = GrmKernelSpec::white_noise(dyadic(4), 2.0).unwrap();
    let sampler = GrmSampler::new(&fine).unwrap();
    let mut rng = RngStream::new(12);
    let merged: Vec<f64> = (0..REPS)
        .map(|_| {
            let v = sampler.sample(&mut rng);
            v[0] + v[1]
        })
        .collect();
    let (m, _) = common::mean_se(&merged);
    let var = merged.iter().map(|x| x * x).sum::<f64>() / REPS as f64 - m * m;
    // Var of the sample variance of a normal: 2σ⁴/n.
    assert!(
        (var - 1.0).abs() < 4.0 * (2.0 / REPS as f64).sqrt(),
        "{var}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn skellam_pmf_matches_bessel_series(k in -25i64..25, mu1 in 0.01f64..12.0, mu2 in 0.01f64..12.0) {
        let oracle = common::skellam_bessel(k, mu1, mu2);
        let got = skellam_pmf(k, mu1, mu2);
        prop_assert!((got - oracle).abs() <= 1e-11 * oracle + 1e-300, "{} vs {}", got, oracle);
    }

    #[test]
    fn jordan_parts_split_sampled_atoms(seed in any::<u64>()) {
        let spec = unit(WeightMeasure::discrete(vec![(1.0, 3.0), (-0.5, 2.0), (2.0, 1.0)]).unwrap());
        let sampler = CrsmSampler::new(CharacteristicPair::without_drift(spec), vec![], 1e-6).unwrap();
        let m = sampler.sample(&mut RngStream::new(seed)).measure;
        let (pos, neg) = m.jordan_decompose();
        let expect_pos: Vec<_> = m.atoms().iter().filter(|a| a.weight > 0.0).cloned().collect();
        prop_assert_eq!(pos.atoms(), &expect_pos[..]);
        prop_assert_eq!(pos.atoms().len() + neg.atoms().len(), m.atoms().len());
        prop_assert!((pos.total() - neg.total() - m.evaluate(&whole())).abs() < 1e-12);
    }

    #[test]
    fn rank_one_ratio_identity(seed in any::<u64>(), e1 in -4i32..4, e2 in -4i32..4, w1 in 0.1f64..3.0, w2 in 0.1f64..3.0) {
        let (d1, d2) = (2f64.powi(e1), 2f64.powi(e2));
        let spec = GrmKernelSpec::rank_one(halves(), &[d1, d2]).unwrap();
        let v = GrmSampler::new(&spec).unwrap().sample(&mut RngStream::new(seed));
        prop_assert_eq!(v[0] / d1, v[1] / d2);
        let spec = GrmKernelSpec::rank_one(halves(), &[w1, w2]).unwrap();
        let v = GrmSampler::new(&spec).unwrap().sample(&mut RngStream::new(seed));
        let (r1, r2) = (v[0] / w1, v[1] / w2);
        prop_assert!((r1 - r2).abs() <= 8.0 * f64::EPSILON * r1.abs());
    }
}
