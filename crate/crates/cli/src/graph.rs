use std::path::{Path, PathBuf};

use rayon::prelude::*;
use signed_measures::graph::{
    count_observed, exchangeability_probe, fit_scan, generate_from_nodes, sample_counts,
    BlockPermutation, GraphError, NodeSampler, ObservedCounts, SignedGraph,
};
use signed_measures::levy::WeightMeasure;
use signed_measures::rng::RngStream;

use crate::args::{GraphArgs, PermutationKind};
use crate::error::CliError;
use crate::io::{self, CsvOut};
use crate::manifest::RunOutput;

/// Stream index reserved for drawing a random block permutation.
const PERMUTATION_STREAM: u64 = u64::MAX;

/// A graph spec is either a bare weight measure or an object with a `rho` field.
pub fn load_rho(path: &Path) -> Result<WeightMeasure, CliError> {
    let value: serde_json::Value = io::read_json(path)?;
    let rho: WeightMeasure = match value.get("rho") {
        Some(r) => io::from_value(path, r.clone())?,
        None => io::from_value(path, value)?,
    };
    rho.validate().map_err(|e| CliError::spec(path, e))?;
    Ok(rho)
}

fn check_alphas(alphas: &[f64]) -> Result<(), CliError> {
    match alphas.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        Some(a) => Err(GraphError::InvalidParameter(format!("window α = {a}")).into()),
        None => Ok(()),
    }
}

fn write_graph(dir: &Path, stem: &str, z: &SignedGraph) -> Result<[PathBuf; 2], CliError> {
    let nodes = PathBuf::from(format!("{stem}_nodes.csv"));
    let mut out = CsvOut::create(&dir.join(&nodes), &["id", "theta", "w"])?;
    for (i, n) in z.nodes.iter().enumerate() {
        out.row(&[i.to_string(), n.theta.to_string(), n.w.to_string()])?;
    }
    out.finish()?;
    let edges = PathBuf::from(format!("{stem}_edges.csv"));
    let mut out = CsvOut::create(&dir.join(&edges), &["i", "j", "sign"])?;
    for (i, j, s) in z.edges() {
        out.row(&[i.to_string(), j.to_string(), s.to_string()])?;
    }
    out.finish()?;
    Ok([nodes, edges])
}

fn generate(
    args: &GraphArgs,
    rho: &WeightMeasure,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let sampler = NodeSampler::new(rho, args.eps)?;
    let root = RngStream::new(args.seed);
    let pool = io::thread_pool(args.jobs)?;
    let tasks: Vec<(usize, usize)> = (0..args.alphas.len())
        .flat_map(|k| (0..args.reps).map(move |r| (k, r)))
        .collect();
    let graphs: Vec<SignedGraph> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(k, r)| {
                let mut rng = root.split_path(&[k as u64, r as u64]);
                let nodes = sampler.sample(args.alphas[k], &mut rng);
                generate_from_nodes(nodes, &mut rng).1
            })
            .collect()
    });
    let mut files = Vec::new();
    let mut counts = CsvOut::create(
        &args.out.join("counts.csv"),
        &["alpha", "rep", "n_nodes", "n_edges"],
    )?;
    for (&(k, r), z) in tasks.iter().zip(&graphs) {
        files.extend(write_graph(&args.out, &format!("graph_k{k}_r{r}"), z)?);
        let c = count_observed(z);
        counts.row(&[
            args.alphas[k].to_string(),
            r.to_string(),
            c.n_nodes.to_string(),
            c.n_edges.to_string(),
        ])?;
    }
    counts.finish()?;
    files.push(PathBuf::from("counts.csv"));
    Ok((files, serde_json::json!({ "graphs": graphs.len() })))
}

fn scan(
    args: &GraphArgs,
    rho: &WeightMeasure,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    if args.alphas.len() < 3 {
        return Err(GraphError::InsufficientWindows(args.alphas.len()).into());
    }
    if rho.integrate(|w| w.abs(), 1.0, 1.0)?.is_none() {
        return Err(GraphError::InfiniteMean.into());
    }
    let sampler = NodeSampler::new(rho, args.eps)?;
    let root = RngStream::new(args.seed);
    let pool = io::thread_pool(args.jobs)?;
    let tasks: Vec<(usize, usize)> = (0..args.alphas.len())
        .flat_map(|k| (0..args.reps).map(move |r| (k, r)))
        .collect();
    let flat: Vec<ObservedCounts> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(k, r)| {
                let mut rng = root.split_path(&[k as u64, r as u64]);
                let nodes = sampler.sample(args.alphas[k], &mut rng);
                sample_counts(&nodes, &mut rng)
            })
            .collect()
    });
    let counts: Vec<Vec<ObservedCounts>> =
        flat.chunks(args.reps.max(1)).map(<[_]>::to_vec).collect();
    let counts = if args.reps == 0 {
        vec![Vec::new(); args.alphas.len()]
    } else {
        counts
    };
    let result = fit_scan(&args.alphas, &counts)?;
    log::info!("sparsity slope {}", result.slope);
    let mut csv = CsvOut::create(
        &args.out.join("scan.csv"),
        &["alpha", "mean_nodes", "mean_edges"],
    )?;
    for p in &result.points {
        csv.row(&[
            p.alpha.to_string(),
            p.mean_nodes.to_string(),
            p.mean_edges.to_string(),
        ])?;
    }
    csv.finish()?;
    io::write_json(&args.out.join("scan.json"), &result)?;
    Ok((
        vec![PathBuf::from("scan.csv"), PathBuf::from("scan.json")],
        serde_json::json!({ "slope": result.slope }),
    ))
}

fn probe(
    args: &GraphArgs,
    rho: &WeightMeasure,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let [alpha] = args.alphas[..] else {
        return Err(CliError::usage(
            "--probe takes exactly one window in --alphas",
        ));
    };
    let h = args
        .block_width
        .ok_or_else(|| CliError::usage("--probe needs --block-width"))?;
    let ratio = alpha / h;
    if !(h > 0.0 && ratio >= 1.0 && (ratio - ratio.round()).abs() < 1e-9) {
        return Err(GraphError::BlockMismatch { alpha, h }.into());
    }
    let permutation = match args.permutation {
        PermutationKind::Identity => BlockPermutation::Identity,
        PermutationKind::Reversal => BlockPermutation::Reversal,
        PermutationKind::Random => {
            let mut rng = RngStream::new(args.seed).split(PERMUTATION_STREAM);
            BlockPermutation::random(ratio.round() as usize, &mut rng)
        }
    };
    let report =
        exchangeability_probe(rho, alpha, h, &permutation, args.reps, args.seed, args.eps)?;
    for s in &report.statistics {
        log::info!("{}: KS {} p {}", s.name, s.ks_distance, s.p_value);
    }
    io::write_json(&args.out.join("probe.json"), &report)?;
    let min_p = report
        .statistics
        .iter()
        .map(|s| s.p_value)
        .fold(1.0, f64::min);
    Ok((
        vec![PathBuf::from("probe.json")],
        serde_json::json!({ "min_p_value": min_p }),
    ))
}

pub fn run(args: &GraphArgs) -> Result<RunOutput, CliError> {
    let rho = load_rho(&args.spec)?;
    check_alphas(&args.alphas)?;
    io::create_dir(&args.out)?;
    let (files, metadata) = if args.scan {
        scan(args, &rho)?
    } else if args.probe {
        probe(args, &rho)?
    } else {
        generate(args, &rho)?
    };
    Ok(RunOutput {
        out_dir: args.out.clone(),
        files,
        inputs: vec![args.spec.clone()],
        manifest_path: args.out.join("manifest.json"),
        metadata,
    })
}
