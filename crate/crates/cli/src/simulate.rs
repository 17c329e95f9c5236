use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use signed_measures::levy::{CharacteristicPair, LevySpec};
use signed_measures::rng::RngStream;
use signed_measures::sample::{
    grm_to_measure, sample_skellam_pp_on, CrsmSampler, FixedAtom, GrmKernelSpec, GrmSampler,
};
use signed_measures::SignedMeasure;
use signed_measures::{BorelSet, StepDensity};

use crate::args::SimulateArgs;
use crate::error::CliError;
use crate::io::{self, CsvOut};
use crate::manifest::RunOutput;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Deserialize)]
pub struct CrsmFile {
    #[serde(flatten)]
    pub levy: LevySpec,
    #[serde(default)]
    pub drift: StepDensity,
    #[serde(default)]
    pub fixed_atoms: Vec<FixedAtom>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkellamRates {
    pub mu1: f64,
    pub mu2: f64,
    #[serde(default = "one")]
    pub horizon: f64,
}

fn one() -> f64 {
    1.0
}

/// The three spec shapes `simulate` accepts.
#[derive(Debug, Clone)]
pub enum SimSpec {
    Crsm(CrsmFile),
    Skellam(SkellamRates),
    Grm(GrmKernelSpec),
}

impl SimSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let value: serde_json::Value = io::read_json(path)?;
        let spec = match value.as_object() {
            Some(obj) if obj.contains_key("skellam") => {
                SimSpec::Skellam(io::from_value(path, value["skellam"].clone())?)
            }
            Some(obj) if obj.contains_key("grm") => {
                SimSpec::Grm(io::from_value(path, value["grm"].clone())?)
            }
            _ => SimSpec::Crsm(io::from_value(path, value)?),
        };
        spec.validate().map_err(|e| CliError::spec(path, e))?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            SimSpec::Crsm(c) => c.levy.validate().map_err(|e| e.to_string()),
            SimSpec::Skellam(s) => {
                if s.mu1 >= 0.0
                    && s.mu2 >= 0.0
                    && s.mu1.is_finite()
                    && s.mu2.is_finite()
                    && s.horizon > 0.0
                    && s.horizon.is_finite()
                {
                    Ok(())
                } else {
                    Err(format!("InvalidParameter: Skellam rates {s:?}"))
                }
            }
            SimSpec::Grm(_) => Ok(()),
        }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            SimSpec::Crsm(c) => c.levy.horizon,
            SimSpec::Skellam(s) => s.horizon,
            SimSpec::Grm(g) => g.partition.iter().map(|c| *c.hi()).fold(0.0, f64::max),
        }
    }
}

pub fn load_sets(path: Option<&Path>, horizon: f64) -> Result<Vec<BorelSet>, CliError> {
    match path {
        Some(p) => io::read_json(p),
        None => Ok(vec![
            BorelSet::interval(0.0, horizon).map_err(|e| CliError::Input(e.to_string()))?
        ]),
    }
}

enum Sampler {
    Crsm(CrsmSampler),
    Skellam(SkellamRates),
    Grm(GrmSampler, GrmKernelSpec),
}

impl Sampler {
    fn new(spec: SimSpec, eps: f64) -> Result<Self, CliError> {
        Ok(match spec {
            SimSpec::Crsm(c) => Sampler::Crsm(CrsmSampler::new(
                CharacteristicPair::new(c.levy, c.drift),
                c.fixed_atoms,
                eps,
            )?),
            SimSpec::Skellam(s) => Sampler::Skellam(s),
            SimSpec::Grm(g) => Sampler::Grm(GrmSampler::new(&g)?, g),
        })
    }

    fn draw(&self, rng: &mut RngStream) -> SignedMeasure {
        match self {
            Sampler::Crsm(s) => s.sample(rng).measure,
            Sampler::Skellam(s) => sample_skellam_pp_on(s.mu1, s.mu2, s.horizon, rng),
            Sampler::Grm(s, spec) => {
                grm_to_measure(&spec.partition, &s.sample(rng)).expect("finite cell values")
            }
        }
    }

    fn remainder(&self) -> f64 {
        match self {
            Sampler::Crsm(s) => s.remainder(),
            _ => 0.0,
        }
    }
}

pub fn run(args: &SimulateArgs) -> Result<RunOutput, CliError> {
    let spec = SimSpec::load(&args.spec)?;
    let sets = load_sets(args.sets.as_deref(), spec.horizon())?;
    let sampler = Sampler::new(spec, args.eps)?;
    let pool = io::thread_pool(args.jobs)?;
    let root = RngStream::new(args.seed);
    io::create_dir(&args.out)?;
    let draws_path = args.out.join("draws.jsonl");
    let mut draws = io::create(&draws_path)?;
    let mut evals = CsvOut::create(
        &args.out.join("evaluations.csv"),
        &["rep", "set_id", "value"],
    )?;
    let mut start = 0;
    while start < args.reps {
        let end = (start + CHUNK).min(args.reps);
        let chunk: Vec<(String, Vec<f64>)> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|r| {
                    let mut rng = root.split(r as u64);
                    let m = sampler.draw(&mut rng);
                    let line = serde_json::to_string(&m).expect("measures serialize");
                    (line, sets.iter().map(|s| m.evaluate(s)).collect())
                })
                .collect()
        });
        for (offset, (line, values)) in chunk.into_iter().enumerate() {
            writeln!(draws, "{line}").map_err(|e| CliError::io(&draws_path, e))?;
            let rep = (start + offset).to_string();
            for (k, v) in values.iter().enumerate() {
                evals.row([rep.as_str(), &k.to_string(), &v.to_string()])?;
            }
        }
        log::debug!("simulate: {end}/{} replicates", args.reps);
        start = end;
    }
    draws.flush().map_err(|e| CliError::io(&draws_path, e))?;
    evals.finish()?;
    let mut inputs = vec![args.spec.clone()];
    inputs.extend(args.sets.clone());
    Ok(RunOutput {
        out_dir: args.out.clone(),
        files: vec![
            PathBuf::from("draws.jsonl"),
            PathBuf::from("evaluations.csv"),
        ],
        inputs,
        manifest_path: args.out.join("manifest.json"),
        metadata: serde_json::json!({ "remainder_bound": sampler.remainder(), "sets": sets.len() }),
    })
}
