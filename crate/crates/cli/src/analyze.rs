use std::path::PathBuf;

use num_complex::Complex64;
use serde::Serialize;
use signed_measures::dist::WeightDistribution;
use signed_measures::levy::{char_fn, CharacteristicPair};
use signed_measures::sample::skellam_pmf;
use signed_measures::stats::chi_square_gof;
use signed_measures::BorelSet;

use crate::args::AnalyzeArgs;
use crate::error::CliError;
use crate::io;
use crate::manifest::RunOutput;
use crate::simulate::{load_sets, SimSpec};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub reference: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    fn near(name: impl Into<String>, observed: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            reference: Some(reference),
            tolerance: Some(tolerance),
            pass: (observed - reference).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub set_id: usize,
    pub n: usize,
    pub spec_kind: &'static str,
    pub checks: Vec<Check>,
}

fn mean_of(d: &WeightDistribution) -> f64 {
    match d {
        WeightDistribution::Degenerate { value } => *value,
        WeightDistribution::Normal { mean, .. } => *mean,
        WeightDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
        WeightDistribution::Discrete { support } => support.iter().map(|(v, p)| v * p).sum(),
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

pub fn analyze(
    spec: &SimSpec,
    set: &BorelSet,
    values: &[f64],
    remainder: f64,
) -> Result<Vec<Check>, CliError> {
    let n = values.len();
    let horizon = spec.horizon();
    let inside = set.intersection(&BorelSet::interval(0.0, horizon).expect("positive horizon"));
    let mut checks = Vec::new();
    match spec {
        SimSpec::Skellam(s) => {
            let len = inside.length();
            let counts: Vec<i64> = values.iter().map(|v| v.round() as i64).collect();
            let gof = chi_square_gof(&counts, |k| skellam_pmf(k, s.mu1 * len, s.mu2 * len));
            checks.push(Check {
                name: "chi_square_p_value".into(),
                observed: gof.p_value,
                reference: None,
                tolerance: Some(1e-3),
                pass: gof.p_value > 1e-3,
            });
        }
        SimSpec::Crsm(c) => {
            let (m, se) = mean_se(values);
            let fixed: f64 = c
                .fixed_atoms
                .iter()
                .filter(|a| set.contains(&a.location))
                .map(|a| mean_of(&a.weight))
                .sum();
            if let Some(jumps) = c.levy.mean(set)? {
                let expect = jumps + c.drift.integral(set) + fixed;
                let bias = remainder * inside.length() / horizon;
                checks.push(Check::near("mean", m, expect, 4.0 * se + bias));
            }
            if c.fixed_atoms.is_empty() {
                let pair = CharacteristicPair::new(c.levy.clone(), c.drift.clone());
                let band = 4.0 / (n as f64).sqrt();
                for t in [0.5, 1.0, 2.0] {
                    let emp: Complex64 = values
                        .iter()
                        .map(|&x| Complex64::from_polar(1.0, t * x))
                        .sum::<Complex64>()
                        / n as f64;
                    let cf = char_fn(&pair, t, set)?;
                    checks.push(Check::near(format!("char_fn_re_t{t}"), emp.re, cf.re, band));
                    checks.push(Check::near(format!("char_fn_im_t{t}"), emp.im, cf.im, band));
                }
            }
        }
        SimSpec::Grm(g) => {
            let c: Vec<f64> = g
                .partition
                .iter()
                .map(|cell| {
                    let overlap: f64 = set
                        .intervals()
                        .iter()
                        .map(|iv| cell.overlap(iv.lo(), iv.hi()))
                        .sum();
                    overlap / cell.len()
                })
                .collect();
            let var: f64 = (0..c.len())
                .flat_map(|i| (0..c.len()).map(move |j| (i, j)))
                .map(|(i, j)| c[i] * c[j] * g.cov[i][j])
                .sum();
            let (m, se) = mean_se(values);
            checks.push(Check::near("mean", m, 0.0, 4.0 * se.max(f64::MIN_POSITIVE)));
            let emp_var = values.iter().map(|x| x * x).sum::<f64>() / n as f64;
            checks.push(Check::near(
                "variance",
                emp_var,
                var,
                4.0 * var * (2.0 / n as f64).sqrt(),
            ));
        }
    }
    Ok(checks)
}

pub fn run(args: &AnalyzeArgs) -> Result<RunOutput, CliError> {
    let spec = SimSpec::load(&args.spec)?;
    let sets = load_sets(args.sets.as_deref(), spec.horizon())?;
    let set = sets.get(args.set_id).ok_or_else(|| {
        CliError::usage(format!(
            "set id {} out of range ({} sets)",
            args.set_id,
            sets.len()
        ))
    })?;
    let eval_path = args.input.join("evaluations.csv");
    let mut reader = csv::Reader::from_path(&eval_path).map_err(|e| CliError::io(&eval_path, e))?;
    let mut values = Vec::new();
    for row in reader.deserialize::<(usize, usize, f64)>() {
        let (_, k, v) = row.map_err(|e| CliError::spec(&eval_path, e))?;
        if k == args.set_id {
            values.push(v);
        }
    }
    if values.len() < 2 {
        return Err(CliError::usage(format!(
            "{} values for set {}; need at least 2",
            values.len(),
            args.set_id
        )));
    }
    let manifest_path = args.input.join("manifest.json");
    let remainder = std::fs::read_to_string(&manifest_path)
        .ok()
        .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        .and_then(|m| m["metadata"]["remainder_bound"].as_f64())
        .unwrap_or(0.0);
    let checks = analyze(&spec, set, &values, remainder)?;
    for c in &checks {
        log::info!(
            "{}: {} ({})",
            c.name,
            c.observed,
            if c.pass { "pass" } else { "fail" }
        );
    }
    let analysis = Analysis {
        set_id: args.set_id,
        n: values.len(),
        spec_kind: match spec {
            SimSpec::Crsm(_) => "crsm",
            SimSpec::Skellam(_) => "skellam",
            SimSpec::Grm(_) => "grm",
        },
        checks,
    };
    io::write_json(&args.out.join("analysis.json"), &analysis)?;
    let mut inputs = vec![args.spec.clone(), eval_path];
    inputs.extend(args.sets.clone());
    Ok(RunOutput {
        out_dir: args.out.clone(),
        files: vec![PathBuf::from("analysis.json")],
        inputs,
        manifest_path: args.out.join("manifest.json"),
        metadata: serde_json::json!({ "all_pass": analysis.checks.iter().all(|c| c.pass) }),
    })
}
