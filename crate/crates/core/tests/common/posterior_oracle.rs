//! Brute-force references for the posterior updates: products of prior and
//! likelihood written out directly, and enumeration over finite supports.

use rand::Rng;
use signed_measures::bnp::{
    gaussian_example_prior, oracle_grid, posterior_update_continuous, posterior_update_discrete,
    DiscreteLikelihood, LikelihoodModel, Observation, PosteriorResult, PosteriorWeight, Role,
    TraitPrior,
};
use signed_measures::dist::{BaseDistribution, WeightDistribution};
use signed_measures::levy::{DensityFamily, Sides, WeightMeasure};
use signed_measures::rng::RngStream;
use signed_measures::sample::FixedAtom;

use super::poisson;

#[derive(Debug, Clone)]
pub enum NuOracle {
    Power {
        alpha: f64,
        coef: f64,
    },
    Gamma {
        a: f64,
        b: f64,
    },
    /// `a·|θ|^p·e^{−b|θ|}` on both sides.
    TemperedPower {
        a: f64,
        p: f64,
        b: f64,
    },
}

impl NuOracle {
    fn value(&self, t: f64) -> f64 {
        match *self {
            NuOracle::Power { alpha, coef } => coef * t.abs().powf(alpha - 2.0),
            NuOracle::Gamma { a, b } => {
                if t > 0.0 {
                    a / t * (-b * t).exp()
                } else {
                    0.0
                }
            }
            NuOracle::TemperedPower { a, p, b } => a * t.abs().powf(p) * (-b * t.abs()).exp(),
        }
    }

    fn measure(&self) -> WeightMeasure {
        match *self {
            NuOracle::Power { alpha, coef } => WeightMeasure::density_on(
                DensityFamily::PowerLaw {
                    alpha,
                    coef,
                    cutoff: None,
                },
                Sides::Both,
            ),
            NuOracle::Gamma { a, b } => WeightMeasure::density(DensityFamily::Gamma { a, b }),
            NuOracle::TemperedPower { a, p, b } => {
                WeightMeasure::density(DensityFamily::PowerExp {
                    coef: a,
                    exponent: p,
                    rate: b,
                    lo: 0.0,
                    hi: None,
                })
            }
        }
        .unwrap()
    }
}

#[derive(Debug, Clone)]
pub enum LikOracle {
    Poisson(f64),
    Bernoulli(f64),
    Gaussian { alpha: f64, sigma: f64 },
}

fn gauss(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}

impl LikOracle {
    /// `h(x | θ)` at an ordinary location; `x = 0` is the null outcome.
    fn ordinary(&self, x: f64, t: f64) -> f64 {
        match *self {
            LikOracle::Poisson(r) => {
                if x == 0.0 {
                    (-r * t.abs()).exp()
                } else if x * t > 0.0 {
                    poisson(x.abs() as u64, r * t.abs())
                } else {
                    0.0
                }
            }
            LikOracle::Bernoulli(r) => {
                if x == 0.0 {
                    (-r * t.abs()).exp()
                } else if x.abs() == 1.0 && x * t > 0.0 {
                    1.0 - (-r * t.abs()).exp()
                } else {
                    0.0
                }
            }
            LikOracle::Gaussian { alpha, sigma } => {
                let p = t.abs().powf(2.0 - alpha) * (-t * t).exp();
                if x == 0.0 {
                    1.0 - p
                } else {
                    p * gauss(x, t, sigma)
                }
            }
        }
    }

    /// Factor at a fixed atom; `None` is a missing value.
    fn fixed(&self, x: Option<f64>, t: f64) -> f64 {
        match (self, x) {
            (LikOracle::Gaussian { sigma, .. }, Some(x)) => gauss(x, t, *sigma),
            (LikOracle::Gaussian { .. }, None) => 1.0,
            (_, x) => self.ordinary(x.unwrap_or(0.0), t),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Case {
    pub prior: TraitPrior,
    pub lik: LikelihoodModel,
    pub obs: Vec<Observation>,
    pub nu: NuOracle,
    pub h: LikOracle,
    /// `(location, mean, sd)` of the Normal fixed-atom laws.
    pub fixed: Vec<(f64, f64, f64)>,
}

impl Case {
    pub fn update(&self) -> PosteriorResult {
        match self.h {
            LikOracle::Gaussian { .. } => {
                posterior_update_continuous(&self.prior, &self.lik, &self.obs)
            }
            _ => posterior_update_discrete(&self.prior, &self.lik, &self.obs, true),
        }
        .unwrap()
    }

    /// Brute-force unnormalized posterior at one location.
    pub fn oracle(&self, location: f64, role: Role, t: f64) -> f64 {
        let values: Vec<Option<f64>> = self
            .obs
            .iter()
            .map(|o| o.atoms.iter().find(|a| a.loc == location).map(|a| a.x))
            .collect();
        match role {
            Role::Fixed => {
                let &(_, mean, sd) = self.fixed.iter().find(|f| f.0 == location).unwrap();
                values
                    .iter()
                    .fold(gauss(t, mean, sd), |acc, v| acc * self.h.fixed(*v, t))
            }
            Role::New => values.iter().fold(self.nu.value(t), |acc, v| {
                acc * self.h.ordinary(v.unwrap_or(0.0), t)
            }),
        }
    }
}

/// Randomized prior/data pairs, discrete and continuous.
pub fn random_cases(n: usize, seed: u64) -> Vec<Case> {
    let root = RngStream::new(seed);
    (0..n)
        .map(|i| {
            let mut rng = root.split(i as u64);
            let n_fixed = rng.random_range(0..3usize);
            let fixed: Vec<(f64, f64, f64)> = (0..n_fixed)
                .map(|k| {
                    (
                        0.1 + 0.2 * k as f64,
                        rng.random_range(-2.0..2.0),
                        rng.random_range(0.3..2.0),
                    )
                })
                .collect();
            let continuous = i % 4 == 3;
            let (nu, h, lik, prior) = if continuous {
                let alpha = rng.random_range(0.1..0.9);
                let sigma = rng.random_range(0.3..2.0);
                let (prior, lik) = gaussian_example_prior(alpha, sigma, &fixed).unwrap();
                (
                    NuOracle::Power { alpha, coef: 1.0 },
                    LikOracle::Gaussian { alpha, sigma },
                    lik,
                    prior,
                )
            } else {
                let nu = match i % 3 {
                    0 => NuOracle::Power {
                        alpha: rng.random_range(0.1..0.9),
                        coef: rng.random_range(0.5..2.0),
                    },
                    1 => NuOracle::Gamma {
                        a: rng.random_range(0.5..3.0),
                        b: rng.random_range(0.5..3.0),
                    },
                    _ => NuOracle::TemperedPower {
                        a: rng.random_range(0.5..3.0),
                        p: rng.random_range(-1.9..-1.1),
                        b: rng.random_range(0.5..3.0),
                    },
                };
                let rate = rng.random_range(0.3..2.0);
                let (h, d) = if i % 2 == 0 {
                    (
                        LikOracle::Poisson(rate),
                        DiscreteLikelihood::SignedPoisson { rate },
                    )
                } else {
                    (
                        LikOracle::Bernoulli(rate),
                        DiscreteLikelihood::SignedBernoulli { rate },
                    )
                };
                let prior = TraitPrior {
                    fixed_atoms: fixed
                        .iter()
                        .map(|&(location, mean, sd)| FixedAtom {
                            location,
                            weight: WeightDistribution::Normal { mean, sd },
                        })
                        .collect(),
                    weight_measure: nu.measure(),
                    base: BaseDistribution::uniform(1.0),
                };
                (nu, h, LikelihoodModel::Discrete(d), prior)
            };
            let positive_only = matches!(nu, NuOracle::Gamma { .. });
            let bernoulli = matches!(h, LikOracle::Bernoulli(_));
            let locs: Vec<f64> = fixed
                .iter()
                .map(|f| f.0)
                .chain([0.55, 0.65, 0.85])
                .collect();
            // Values of one location share a sign, else the integer-valued posterior vanishes.
            let signs: Vec<f64> = locs
                .iter()
                .map(|_| {
                    if positive_only || rng.random_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                })
                .collect();
            let m = rng.random_range(1..4usize);
            let obs = (0..m)
                .map(|_| {
                    let mut atoms = Vec::new();
                    for (&loc, &sign) in locs.iter().zip(&signs) {
                        if rng.random_bool(0.6) {
                            let x = if continuous {
                                rng.random_range(-3.0..3.0)
                            } else if bernoulli {
                                sign
                            } else {
                                sign * rng.random_range(1..4) as f64
                            };
                            atoms.push((loc, x));
                        }
                    }
                    Observation::new(atoms)
                })
                .collect();
            Case {
                prior,
                lik,
                obs,
                nu,
                h,
                fixed,
            }
        })
        .filter(|c| c.obs.iter().any(|o| !o.atoms.is_empty()))
        .collect()
}

pub struct GridErrors {
    /// Largest relative difference of the unnormalized densities.
    pub pointwise: f64,
    /// Largest relative difference after normalizing both by their grid sums.
    pub normalized: f64,
    pub weights_checked: usize,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs()).max(1e-290)
    }
}

pub fn grid_errors(case: &Case, post: &PosteriorResult) -> GridErrors {
    let grid = oracle_grid();
    let mut out = GridErrors {
        pointwise: 0.0,
        normalized: 0.0,
        weights_checked: 0,
    };
    let all: Vec<&PosteriorWeight> = post.fixed_updates.iter().chain(&post.new_atoms).collect();
    for pw in all {
        let got: Vec<f64> = grid.iter().map(|&t| pw.unnormalized(t)).collect();
        let want: Vec<f64> = grid
            .iter()
            .map(|&t| case.oracle(pw.location, pw.role, t))
            .collect();
        let (sg, sw) = (got.iter().sum::<f64>(), want.iter().sum::<f64>());
        for (g, w) in got.iter().zip(&want) {
            out.pointwise = out.pointwise.max(rel(*g, *w));
            out.normalized = out.normalized.max(rel(g / sg, w / sw));
        }
        out.weights_checked += 1;
    }
    out
}

/// Five-point weight measure, Poisson-type likelihood, a discrete fixed atom.
pub fn enumeration_case(variant: u64) -> (TraitPrior, LikelihoodModel, Vec<Observation>, f64) {
    let rate = 0.5 + 0.25 * variant as f64;
    let support = [(-2.0, 0.3), (-0.5, 1.0), (0.5, 2.0), (1.0, 0.7), (3.0, 0.2)];
    let prior = TraitPrior {
        fixed_atoms: vec![FixedAtom {
            location: 0.1,
            weight: WeightDistribution::Discrete {
                support: vec![(-1.0, 0.25), (1.0, 0.5), (2.5, 0.25)],
            },
        }],
        weight_measure: WeightMeasure::discrete(support.to_vec()).unwrap(),
        base: BaseDistribution::uniform(1.0),
    };
    let obs = match variant % 3 {
        0 => vec![
            Observation::new(vec![(0.1, 1.0), (0.6, 2.0)]),
            Observation::new(vec![(0.6, 1.0), (0.9, -1.0)]),
            Observation::default(),
        ],
        1 => vec![Observation::new(vec![(0.1, -1.0), (0.6, 3.0), (0.9, -2.0)])],
        _ => vec![
            Observation::new(vec![(0.6, 1.0)]),
            Observation::new(vec![(0.1, 2.0), (0.9, 1.0)]),
            Observation::new(vec![(0.9, 2.0)]),
            Observation::new(vec![(0.6, 1.0)]),
        ],
    };
    (
        prior,
        LikelihoodModel::Discrete(DiscreteLikelihood::SignedPoisson { rate }),
        obs,
        rate,
    )
}

/// Largest absolute difference between the update and exact enumeration of
/// the joint posterior of all observed-location weights, plus the ordinary
/// intensities `ν({θ})·P(all m values at a location are 0 | θ)`.
pub fn enumeration_error(variant: u64) -> f64 {
    let (prior, lik, obs, rate) = enumeration_case(variant);
    let post = posterior_update_discrete(&prior, &lik, &obs, false).unwrap();
    let h = LikOracle::Poisson(rate);
    let nu = prior.weight_measure.signed_atoms();
    let fixed_law = prior.fixed_atoms[0].weight.atoms().unwrap();
    let value = |loc: f64, j: usize| {
        obs[j]
            .atoms
            .iter()
            .find(|a| a.loc == loc)
            .map_or(0.0, |a| a.x)
    };
    let lik_at = |loc: f64, t: f64| {
        (0..obs.len())
            .map(|j| h.ordinary(value(loc, j), t))
            .product::<f64>()
    };
    let locs = [0.1, 0.6, 0.9];
    let laws: [&[(f64, f64)]; 3] = [&fixed_law, &nu, &nu];
    let mut joint = Vec::new();
    for (i, &(a, pa)) in laws[0].iter().enumerate() {
        for (j, &(b, pb)) in laws[1].iter().enumerate() {
            for (k, &(c, pc)) in laws[2].iter().enumerate() {
                let w = pa * pb * pc * lik_at(locs[0], a) * lik_at(locs[1], b) * lik_at(locs[2], c);
                joint.push(([i, j, k], w));
            }
        }
    }
    let z: f64 = joint.iter().map(|(_, w)| w).sum();
    let mut err: f64 = 0.0;
    let weights: Vec<&PosteriorWeight> = post.fixed_updates.iter().chain(&post.new_atoms).collect();
    for (axis, &loc) in locs.iter().enumerate() {
        let pw = weights.iter().find(|p| p.location == loc).unwrap();
        let got = pw.discrete_support().unwrap();
        for (idx, &(t, _)) in laws[axis].iter().enumerate() {
            let marginal: f64 = joint
                .iter()
                .filter(|(ix, _)| ix[axis] == idx)
                .map(|(_, w)| w)
                .sum::<f64>()
                / z;
            let g = got.iter().find(|(v, _)| *v == t).map_or(0.0, |(_, p)| *p);
            err = err.max((g - marginal).abs());
        }
    }
    let ordinary = post.ordinary_weight_measure.signed_atoms();
    for &(t, mass) in &nu {
        let expect = mass * (0..obs.len()).map(|_| h.ordinary(0.0, t)).product::<f64>();
        let g = ordinary
            .iter()
            .find(|(v, _)| *v == t)
            .map_or(0.0, |(_, m)| *m);
        err = err.max((g - expect).abs());
    }
    err
}
