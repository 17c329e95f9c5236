use serde::Serialize;
use signed_measures::bnp::{
    check_assumptions, oracle_grid, posterior_update_continuous, posterior_update_discrete,
    AssumptionReport, LikelihoodModel, Observation, PosteriorResult, PosteriorWeight, TraitPrior,
};
use signed_measures::levy::WeightMeasure;

use crate::args::PosteriorArgs;
use crate::error::CliError;
use crate::io;
use crate::manifest::RunOutput;

/// A posterior weight law together with its normalized values, either on its
/// discrete support or on the evaluation grid.
#[derive(Debug, Serialize)]
struct Tabulated {
    #[serde(flatten)]
    weight: PosteriorWeight,
    discrete: bool,
    table: Vec<(f64, f64)>,
}

impl Tabulated {
    fn new(weight: PosteriorWeight) -> Self {
        match weight.discrete_support() {
            Some(table) => Self {
                weight,
                discrete: true,
                table,
            },
            None => {
                let table = oracle_grid()
                    .into_iter()
                    .map(|t| (t, weight.density(t)))
                    .collect();
                Self {
                    weight,
                    discrete: false,
                    table,
                }
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct PosteriorFile {
    prior: TraitPrior,
    likelihood: LikelihoodModel,
    assumptions: AssumptionReport,
    observations: usize,
    fixed_updates: Vec<Tabulated>,
    new_atoms: Vec<Tabulated>,
    ordinary_weight_measure: WeightMeasure,
}

pub fn update(
    prior: &TraitPrior,
    lik: &LikelihoodModel,
    obs: &[Observation],
) -> Result<PosteriorResult, CliError> {
    Ok(match lik {
        LikelihoodModel::Discrete(_) => posterior_update_discrete(prior, lik, obs, true)?,
        LikelihoodModel::Continuous(_) => posterior_update_continuous(prior, lik, obs)?,
    })
}

pub fn run(args: &PosteriorArgs) -> Result<RunOutput, CliError> {
    let prior: TraitPrior = io::read_json(&args.prior)?;
    prior
        .validate()
        .map_err(|e| CliError::spec(&args.prior, e))?;
    let likelihood: LikelihoodModel = io::read_json(&args.likelihood)?;
    likelihood
        .validate()
        .map_err(|e| CliError::spec(&args.likelihood, e))?;
    let obs: Vec<Observation> = io::read_jsonl(&args.obs)?;
    let assumptions = check_assumptions(&prior, &likelihood)?;
    let post = update(&prior, &likelihood, &obs)?;
    log::info!(
        "{} observations, {} fixed atoms, {} new atoms",
        post.observations,
        post.fixed_updates.len(),
        post.new_atoms.len()
    );
    let file = PosteriorFile {
        prior,
        likelihood,
        assumptions,
        observations: post.observations,
        fixed_updates: post.fixed_updates.into_iter().map(Tabulated::new).collect(),
        new_atoms: post.new_atoms.into_iter().map(Tabulated::new).collect(),
        ordinary_weight_measure: post.ordinary_weight_measure,
    };
    io::write_json(&args.out, &file)?;
    let out_dir = args
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(std::path::Path::new("."))
        .to_path_buf();
    let name = args
        .out
        .file_name()
        .map(std::path::PathBuf::from)
        .unwrap_or_default();
    Ok(RunOutput {
        out_dir,
        files: vec![name],
        inputs: vec![
            args.prior.clone(),
            args.likelihood.clone(),
            args.obs.clone(),
        ],
        manifest_path: args.out.with_extension("manifest.json"),
        metadata: serde_json::json!({ "new_atoms": file.new_atoms.len() }),
    })
}
