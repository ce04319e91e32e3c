//! Monte Carlo pivot probabilities of the top-tier weighted median.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{PivotFinder, WeightedVotingGame};
use crate::population::{ConstituencyPartition, LambdaSampler, MedianMethod, PreferenceModel};
use crate::stream::{batches, replication_stream, Stream};

pub use crate::game::PivotDirection;

pub const ESTIMATE_CSV_HEADER: &str = "constituency,size,weight,pivot_prob,std_err,per_capita";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PivotEstimate {
    pub counts: Vec<u64>,
    pub replications: u64,
    pub probabilities: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub seed: u64,
    pub quota_fraction: f64,
    pub weights: Vec<f64>,
    pub sizes: Vec<u64>,
    pub model: PreferenceModel,
    pub direction: PivotDirection,
}

impl PivotEstimate {
    fn from_counts(
        counts: Vec<u64>,
        replications: u64,
        seed: u64,
        game: &WeightedVotingGame,
        model: &PreferenceModel,
        partition: &ConstituencyPartition,
        direction: PivotDirection,
    ) -> Self {
        let r = replications as f64;
        let probabilities: Vec<f64> = counts.iter().map(|&c| c as f64 / r).collect();
        let std_errors = probabilities
            .iter()
            .map(|p| (p * (1.0 - p) / r).sqrt())
            .collect();
        Self {
            counts,
            replications,
            probabilities,
            std_errors,
            seed,
            quota_fraction: game.quota_fraction(),
            weights: game.weights().to_vec(),
            sizes: partition.sizes().to_vec(),
            model: *model,
            direction,
        }
    }

    /// Rows of the estimate CSV (with header).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(ESTIMATE_CSV_HEADER);
        out.push('\n');
        for i in 0..self.counts.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i + 1,
                self.sizes[i],
                self.weights[i],
                self.probabilities[i],
                self.std_errors[i],
                self.probabilities[i] / self.sizes[i] as f64,
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EstimateOptions {
    pub direction: PivotDirection,
    pub median_method: MedianMethod,
}

/// Estimates `pi_i = Pr(representative i is the weighted median)`.
///
/// Replication `r` draws from stream `(seed, r)`; counts are summed across
/// batches, so the result is bit-identical for any thread count.
pub fn estimate_pivot_probabilities(
    game: &WeightedVotingGame,
    model: &PreferenceModel,
    partition: &ConstituencyPartition,
    replications: u64,
    seed: u64,
) -> Result<PivotEstimate> {
    estimate_pivot_probabilities_with(
        game,
        model,
        partition,
        replications,
        seed,
        EstimateOptions::default(),
    )
}

pub fn estimate_pivot_probabilities_with(
    game: &WeightedVotingGame,
    model: &PreferenceModel,
    partition: &ConstituencyPartition,
    replications: u64,
    seed: u64,
    options: EstimateOptions,
) -> Result<PivotEstimate> {
    check_dimensions(game, partition)?;
    if replications == 0 {
        return Err(Error::Precondition("replications must be positive".into()));
    }
    let sampler = LambdaSampler::with_method(model, partition, options.median_method)?;
    let finder = PivotFinder::new(game, options.direction);
    let m = game.players();
    let counts = tally(
        replications,
        seed,
        m,
        || (sampler.clone(), vec![0.0; m], Vec::with_capacity(m)),
        |(sampler, lambda, order), rng| {
            sampler.fill(rng, lambda);
            finder.find(lambda, order)
        },
    );
    Ok(PivotEstimate::from_counts(
        counts,
        replications,
        seed,
        game,
        model,
        partition,
        options.direction,
    ))
}

/// Fraction of replications in which the pivot's ideal point lies within
/// `m^(-3/8)` of the common median.
pub fn essential_interval_hit_rate(
    game: &WeightedVotingGame,
    model: &PreferenceModel,
    partition: &ConstituencyPartition,
    replications: u64,
    seed: u64,
) -> Result<f64> {
    check_dimensions(game, partition)?;
    if !model.is_iid() {
        return Err(Error::Precondition(
            "essential interval requires the i.i.d. model (no constituency shocks)".into(),
        ));
    }
    if replications == 0 {
        return Err(Error::Precondition("replications must be positive".into()));
    }
    let m = game.players();
    let center = model.common_median();
    let radius = (m as f64).powf(-0.375);
    let sampler = LambdaSampler::new(model, partition)?;
    let finder = PivotFinder::new(game, PivotDirection::LeftToRight);
    let counts = tally(
        replications,
        seed,
        2,
        || (sampler.clone(), vec![0.0; m], Vec::with_capacity(m)),
        |(sampler, lambda, order), rng| {
            sampler.fill(rng, lambda);
            let pivot = finder.find(lambda, order);
            usize::from((lambda[pivot] - center).abs() <= radius)
        },
    );
    Ok(counts[1] as f64 / replications as f64)
}

fn check_dimensions(game: &WeightedVotingGame, partition: &ConstituencyPartition) -> Result<()> {
    if game.players() != partition.len() {
        return Err(Error::DimensionMismatch {
            what: "weights",
            got: game.players(),
            expected: partition.len(),
        });
    }
    Ok(())
}

/// Runs `replications` independent steps in parallel and histograms the bin
/// each step returns.
pub(crate) fn tally<S, I, F>(replications: u64, seed: u64, bins: usize, init: I, step: F) -> Vec<u64>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut Stream) -> usize + Sync,
{
    let ranges: Vec<(u64, u64)> = batches(replications).collect();
    ranges
        .into_par_iter()
        .map(|(start, end)| {
            let mut state = init();
            let mut counts = vec![0u64; bins];
            let mut base = replication_stream(seed, 0);
            for r in start..end {
                base.set_stream(r);
                base.set_word_pos(0);
                counts[step(&mut state, &mut base)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Runs `replications` independent draws in parallel and returns them in
/// replication order.
pub(crate) fn draw<S, I, F>(replications: u64, seed: u64, init: I, step: F) -> Vec<f64>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut Stream) -> f64 + Sync,
{
    let ranges: Vec<(u64, u64)> = batches(replications).collect();
    let chunks: Vec<Vec<f64>> = ranges
        .into_par_iter()
        .map(|(start, end)| {
            let mut state = init();
            let mut base = replication_stream(seed, 0);
            (start..end)
                .map(|r| {
                    base.set_stream(r);
                    base.set_word_pos(0);
                    step(&mut state, &mut base)
                })
                .collect()
        })
        .collect();
    chunks.concat()
}

/// Per-capita decisiveness `p^l = pi_i / n_i` and its L1 distance from the
/// egalitarian ideal `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceProfile {
    /// One entry per constituency; every member shares it.
    pub per_capita: Vec<f64>,
    pub l1_distance: f64,
}

impl InfluenceProfile {
    /// `max_i |p_i * n / n_i - 1|` scaled per constituency member.
    pub fn max_relative_deviation(&self, population_total: u64) -> f64 {
        let n = population_total as f64;
        self.per_capita
            .iter()
            .map(|p| (p * n - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `sum_i n_i |pi_i / n_i - 1/n|` over all constituencies.
pub fn influence_profile(
    estimate: &PivotEstimate,
    partition: &ConstituencyPartition,
    population_total: u64,
) -> Result<InfluenceProfile> {
    influence_from_probabilities(&estimate.probabilities, partition, population_total)
}

pub fn influence_from_probabilities(
    probabilities: &[f64],
    partition: &ConstituencyPartition,
    population_total: u64,
) -> Result<InfluenceProfile> {
    if probabilities.len() != partition.len() {
        return Err(Error::DimensionMismatch {
            what: "pivot probabilities",
            got: probabilities.len(),
            expected: partition.len(),
        });
    }
    if population_total == 0 {
        return Err(Error::Precondition("population total must be positive".into()));
    }
    let ideal = 1.0 / population_total as f64;
    let per_capita: Vec<f64> = probabilities
        .iter()
        .zip(partition.sizes())
        .map(|(p, &n)| p / n as f64)
        .collect();
    let l1_distance = per_capita
        .iter()
        .zip(partition.sizes())
        .map(|(p, &n)| n as f64 * (p - ideal).abs())
        .sum();
    Ok(InfluenceProfile {
        per_capita,
        l1_distance,
    })
}
