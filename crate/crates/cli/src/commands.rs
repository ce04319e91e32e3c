//! The five experiment commands.

use serde::Serialize;
use twotier::allocation::{
    inverse_shapley, optimize_alpha, AllocationRuleSpec, AlphaSearch, InverseOptions,
    DEFAULT_RESOLUTION,
};
use twotier::pivot::{estimate_pivot_probabilities, influence_profile};
use twotier::verify::{any_hard_failure, reports_to_csv, run_suite, summary, SuiteConfig};
use twotier::{PreferenceModel, WeightedVotingGame};
use twotier::game::POWER_INDEX_CSV_HEADER;

use crate::config::RunConfig;
use crate::output::{Metadata, Outputs};
use crate::CliError;

/// What a command reports back to `main`.
pub enum Outcome {
    Success,
    ChecksFailed,
}

fn finish<T: Serialize>(
    command: &'static str,
    config: &RunConfig,
    mut outputs: Outputs,
    result: T,
) -> Result<(), CliError> {
    let meta_name = format!("{command}.meta.json");
    let mut names = outputs.names();
    names.push(meta_name.clone());
    let meta = Metadata::new(command, config, names, result).to_json();
    outputs.add(&meta_name, meta);
    for path in outputs.commit(&config.out_dir())? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn load_game(config: &RunConfig) -> Result<WeightedVotingGame, CliError> {
    let path = config
        .game
        .as_ref()
        .ok_or_else(|| CliError::Invalid("no game file given".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read game {}: {e}", path.display())))?;
    let game: WeightedVotingGame = text.parse()?;
    Ok(match config.quota {
        Some(q) => WeightedVotingGame::new(q, game.weights().to_vec())?,
        None => game,
    })
}

#[derive(Serialize)]
struct ShapleyResult {
    quota_fraction: f64,
    weights: Vec<f64>,
    shapley: Vec<f64>,
    banzhaf: Option<Vec<f64>>,
}

pub fn shapley(config: &mut RunConfig) -> Result<Outcome, CliError> {
    let game = load_game(config)?;
    config.quota = Some(game.quota_fraction());
    let integer = game.weights().iter().all(|w| w.fract() == 0.0);
    let (phi, banzhaf) = if integer {
        (game.shapley_dp()?, Some(game.banzhaf()?))
    } else {
        eprintln!("note: non-integer weights; Banzhaf index skipped");
        (game.shapley_exact()?, None)
    };
    let mut csv = format!("{POWER_INDEX_CSV_HEADER}\n{}", phi.csv_rows());
    if let Some(b) = &banzhaf {
        csv.push_str(&b.csv_rows());
    }
    print!("{csv}");
    let mut outputs = Outputs::default();
    outputs.add("shapley.csv", csv);
    let result = ShapleyResult {
        quota_fraction: game.quota_fraction(),
        weights: game.weights().to_vec(),
        shapley: phi.values,
        banzhaf: banzhaf.map(|b| b.values),
    };
    finish("shapley", config, outputs, result)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct SimulateResult {
    sizes: Vec<u64>,
    weights: Vec<f64>,
    model: PreferenceModel,
    l1_distance: f64,
    max_relative_deviation: f64,
}

pub fn simulate(config: &mut RunConfig) -> Result<Outcome, CliError> {
    let seed = config.seed()?;
    let replications = config.replications()?;
    let partition = config.partition()?;
    let model = config.model()?;
    let quota = config.quota();
    let weights = match &config.weights {
        Some(w) => w.clone(),
        None => AllocationRuleSpec::new(config.rule()?, config.alpha.unwrap_or(0.5))?.weights(
            &partition,
            &model,
            quota,
            config.resolution.unwrap_or(DEFAULT_RESOLUTION),
        )?,
    };
    let game = WeightedVotingGame::new(quota, weights)?;
    let estimate = estimate_pivot_probabilities(&game, &model, &partition, replications, seed)?;
    let total = partition.total();
    let profile = influence_profile(&estimate, &partition, total)?;
    let deviation = profile.max_relative_deviation(total);
    println!(
        "L1 distance {:.6}, max per-capita deviation {:.4}",
        profile.l1_distance, deviation
    );
    config.replications = Some(replications);
    config.quota = Some(quota);
    let mut outputs = Outputs::default();
    outputs.add("simulate.csv", estimate.to_csv());
    let result = SimulateResult {
        sizes: partition.sizes().to_vec(),
        weights: game.weights().to_vec(),
        model,
        l1_distance: profile.l1_distance,
        max_relative_deviation: deviation,
    };
    finish("simulate", config, outputs, result)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct AlphaResult {
    sizes: Vec<u64>,
    alpha_star: f64,
    min_l1: f64,
    rule_kind: String,
}

pub fn optimize(config: &mut RunConfig) -> Result<Outcome, CliError> {
    let seed = config.seed()?;
    let replications = config.replications()?;
    let partition = config.partition()?;
    let model = config.model()?;
    let grid = config.alpha_grid()?;
    let search = AlphaSearch {
        rule_kind: config.rule()?,
        quota_fraction: config.quota(),
        replications,
        seed,
        resolution: config.resolution.unwrap_or(DEFAULT_RESOLUTION),
    };
    let result = optimize_alpha(&partition, &model, &grid, &search)?;
    println!("alpha* = {} (L1 {:.6})", result.alpha_star, result.min_l1());
    config.replications = Some(replications);
    config.quota = Some(search.quota_fraction);
    let mut outputs = Outputs::default();
    outputs.add("optimize-alpha.csv", result.to_csv());
    let summary = AlphaResult {
        sizes: partition.sizes().to_vec(),
        alpha_star: result.alpha_star,
        min_l1: result.min_l1(),
        rule_kind: result.rule_kind.to_string(),
    };
    finish("optimize-alpha", config, outputs, summary)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct VerifyResult {
    checks: usize,
    hard_failures: usize,
}

pub fn verify(config: &mut RunConfig) -> Result<Outcome, CliError> {
    let suite = SuiteConfig {
        replications: config.replications()?,
        seed: config.seed()?,
        tolerance_scale: config.tolerance_scale.unwrap_or(1.0),
    };
    if suite.tolerance_scale.is_nan() || suite.tolerance_scale < 0.0 {
        return Err(CliError::Invalid("tolerance_scale must be nonnegative".into()));
    }
    let reports = run_suite(&suite)?;
    print!("{}", summary(&reports));
    config.replications = Some(suite.replications);
    let mut outputs = Outputs::default();
    outputs.add("verify.csv", reports_to_csv(&reports));
    let result = VerifyResult {
        checks: reports.len(),
        hard_failures: reports.iter().filter(|r| r.failed_hard()).count(),
    };
    finish("verify", config, outputs, result)?;
    Ok(if any_hard_failure(&reports) {
        Outcome::ChecksFailed
    } else {
        Outcome::Success
    })
}

#[derive(Serialize)]
struct InverseResult {
    target: Vec<f64>,
    weights: Vec<f64>,
    shapley: Vec<f64>,
    residual: f64,
    converged: bool,
    iterations: usize,
}

pub fn inverse(config: &mut RunConfig) -> Result<Outcome, CliError> {
    let target = config.target()?;
    let defaults = InverseOptions::default();
    let options = InverseOptions {
        max_iters: config.max_iters.unwrap_or(defaults.max_iters),
        tolerance: config.tolerance.unwrap_or(defaults.tolerance),
        resolution: config.resolution.unwrap_or(defaults.resolution),
        ..defaults
    };
    let quota = config.quota();
    let result = inverse_shapley(&target, quota, &options)?;
    let total: f64 = target.iter().sum();
    let mut csv = String::from("index,target,weight,shapley\n");
    for (i, ((t, w), p)) in target
        .iter()
        .zip(&result.weights)
        .zip(&result.shapley.values)
        .enumerate()
    {
        csv.push_str(&format!("{},{},{},{}\n", i + 1, t / total, w, p));
    }
    print!("{csv}");
    println!("residual {:.6e}", result.residual);
    config.quota = Some(quota);
    let mut outputs = Outputs::default();
    outputs.add("inverse.csv", csv);
    let summary = InverseResult {
        target: target.iter().map(|t| t / total).collect(),
        weights: result.weights,
        shapley: result.shapley.values,
        residual: result.residual,
        converged: result.converged,
        iterations: result.history.len(),
    };
    finish("inverse", config, outputs, summary)?;
    Ok(Outcome::Success)
}

