//! Weight allocation rules and the search for the best power-law exponent.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{PowerIndexVector, WeightedVotingGame};
use crate::pivot::{estimate_pivot_probabilities, influence_profile};
use crate::population::{median_density_at_median, ConstituencyPartition, PreferenceModel};

/// Integer resolution used when real weights are rounded for exact Shapley
/// computation.
pub const DEFAULT_RESOLUTION: u64 = 10_000;

pub const ALPHA_CSV_HEADER: &str = "alpha,l1,rule_kind";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// Weights proportional to `n_i^alpha`.
    DirectPowerLaw,
    /// Weights whose Shapley value is (approximately) proportional to `n_i^alpha`.
    ShapleyBasedPowerLaw,
    /// Weights proportional to `n_i / f_i(M)`.
    DensityRule,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::DirectPowerLaw => "direct_power_law",
            RuleKind::ShapleyBasedPowerLaw => "shapley_based_power_law",
            RuleKind::DensityRule => "density_rule",
        })
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "direct" | "direct_power_law" => Ok(RuleKind::DirectPowerLaw),
            "shapley" | "shapley_based" | "shapley_based_power_law" => {
                Ok(RuleKind::ShapleyBasedPowerLaw)
            }
            "density" | "density_rule" => Ok(RuleKind::DensityRule),
            other => Err(Error::Parse(format!("unknown rule kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllocationRuleSpec {
    pub kind: RuleKind,
    pub alpha: f64,
}

impl AllocationRuleSpec {
    pub fn new(kind: RuleKind, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Precondition(format!("alpha {alpha} must be >= 0")));
        }
        Ok(Self { kind, alpha })
    }

    /// Weights this rule assigns to `partition`.
    pub fn weights(
        &self,
        partition: &ConstituencyPartition,
        model: &PreferenceModel,
        quota_fraction: f64,
        resolution: u64,
    ) -> Result<Vec<f64>> {
        match self.kind {
            RuleKind::DirectPowerLaw => power_law_weights(partition, self.alpha),
            RuleKind::ShapleyBasedPowerLaw => {
                let target = power_law_weights(partition, self.alpha)?;
                let options = InverseOptions {
                    resolution,
                    ..InverseOptions::default()
                };
                Ok(inverse_shapley(&target, quota_fraction, &options)?.weights)
            }
            RuleKind::DensityRule => density_rule_weights(partition, model),
        }
    }
}

/// `n_i^alpha`, normalized to sum to one.
pub fn power_law_weights(partition: &ConstituencyPartition, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Precondition(format!("alpha {alpha} must be >= 0")));
    }
    Ok(normalized(
        partition
            .sizes()
            .iter()
            .map(|&n| (n as f64).powf(alpha))
            .collect(),
    ))
}

/// `n_i / f_i(M)`, normalized, with `f_i` the (normal approximation of the)
/// density of representative `i`'s ideal point at the common median.
///
/// Without shocks this is the square root rule.
pub fn density_rule_weights(
    partition: &ConstituencyPartition,
    model: &PreferenceModel,
) -> Result<Vec<f64>> {
    let g_at_median = model.g.density_at(model.g.median())?;
    let weights = partition
        .sizes()
        .iter()
        .map(|&n| {
            let density = if model.is_iid() {
                median_density_at_median(g_at_median, n)?
            } else {
                model.approx_lambda_density_at_median(n)?
            };
            if density <= 0.0 {
                return Err(Error::Precondition("zero density at the median".into()));
            }
            Ok(n as f64 / density)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(normalized(weights))
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseOptions {
    pub max_iters: usize,
    pub tolerance: f64,
    /// Exponent applied to the correction factor `target / achieved`.
    pub damping: f64,
    /// Real weights are rounded to integers on this scale before the exact
    /// Shapley computation.
    pub resolution: u64,
    /// Each iteration also tries roundings to total weight `1..=coarse_scales`,
    /// which reach games with exact ties that fine roundings almost never hit.
    pub coarse_scales: u64,
}

impl Default for InverseOptions {
    fn default() -> Self {
        Self {
            max_iters: 200,
            tolerance: 1e-4,
            damping: 0.5,
            resolution: DEFAULT_RESOLUTION,
            coarse_scales: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseShapleyResult {
    /// Integer weights of the best game found.
    pub weights: Vec<f64>,
    pub shapley: PowerIndexVector,
    /// `max_i |phi_i - target_i|` of the best game.
    pub residual: f64,
    /// Best residual after each iteration (nonincreasing).
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Heuristic search for weights whose Shapley value matches `target`.
///
/// Multiplicative fixed-point iteration `w <- w * (target / phi(w))^damping`
/// started at the target and renormalized each step. The best game seen is
/// returned along with its exact Shapley value; there is no optimality claim.
pub fn inverse_shapley(
    target: &[f64],
    quota_fraction: f64,
    options: &InverseOptions,
) -> Result<InverseShapleyResult> {
    if target.is_empty() {
        return Err(Error::Precondition("empty target".into()));
    }
    if target.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Precondition("target entries must be nonnegative".into()));
    }
    if !target.iter().any(|t| *t > 0.0) {
        return Err(Error::Precondition("target has no positive entry".into()));
    }
    if !(0.5..1.0).contains(&quota_fraction) {
        return Err(Error::InvalidQuota(quota_fraction));
    }
    if options.resolution == 0 {
        return Err(Error::Precondition("resolution must be positive".into()));
    }
    let target = normalized(target.to_vec());
    let scale = options.resolution as f64;

    let mut weights = target.clone();
    let mut best: Option<(Vec<f64>, PowerIndexVector, f64)> = None;
    let mut history = Vec::new();
    for _ in 0..options.max_iters.max(1) {
        let mut integer: Vec<f64> = weights.iter().map(|w| (w * scale).round()).collect();
        if integer.iter().all(|w| *w == 0.0) {
            // Resolution too coarse for m; keep the heaviest player.
            let top = argmax(&weights);
            integer[top] = 1.0;
        }
        let game = WeightedVotingGame::new(quota_fraction, integer.clone())?;
        let phi = game.shapley_dp()?;
        let mut candidates = vec![(integer, phi.clone())];
        for coarse in 1..=options.coarse_scales.min(options.resolution - 1) {
            let rounded: Vec<f64> = weights.iter().map(|w| (w * coarse as f64).round()).collect();
            if rounded.iter().all(|w| *w == 0.0) {
                continue;
            }
            let phi = WeightedVotingGame::new(quota_fraction, rounded.clone())?.shapley_dp()?;
            candidates.push((rounded, phi));
        }
        for (w, p) in candidates {
            let residual = p.max_abs_diff(&target);
            if best.as_ref().is_none_or(|(_, _, r)| residual < *r) {
                best = Some((w, p, residual));
            }
        }
        let best_residual = best.as_ref().map(|b| b.2).expect("set above");
        history.push(best_residual);
        if best_residual < options.tolerance {
            break;
        }
        for ((w, &t), &p) in weights.iter_mut().zip(&target).zip(&phi.values) {
            if t == 0.0 {
                *w = 0.0;
            } else {
                // Dummies get at most a fourfold correction per step.
                let achieved = p.max(t / 4.0);
                *w *= (t / achieved).powf(options.damping);
            }
        }
        weights = normalized(weights);
    }
    let (weights, shapley, residual) = best.expect("at least one iteration");
    Ok(InverseShapleyResult {
        converged: residual < options.tolerance,
        weights,
        shapley,
        residual,
        history,
    })
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| if x > bv { (i, x) } else { (bi, bv) })
        .0
}

/// Evenly spaced grid `start, start + step, ..., end` built by index.
pub fn alpha_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start >= 0.0 && end >= start && end.is_finite()) {
        return Err(Error::Precondition(format!(
            "bad alpha grid {start}:{end}:{step}"
        )));
    }
    let points = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=points)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

/// Parses `a:b:step`.
pub fn parse_alpha_grid(s: &str) -> Result<Vec<f64>> {
    let parts = s
        .split(':')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad alpha grid {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    match parts.as_slice() {
        [a, b, step] => alpha_grid(*a, *b, *step),
        _ => Err(Error::Parse(format!("alpha grid {s:?} must be start:end:step"))),
    }
}

/// Default coarse grid `0, 0.05, ..., 2`.
pub fn default_alpha_grid() -> Vec<f64> {
    alpha_grid(0.0, 2.0, 0.05).expect("valid constants")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaPoint {
    pub alpha: f64,
    pub l1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSearchResult {
    pub alpha_star: f64,
    pub l1_by_alpha: Vec<AlphaPoint>,
    pub rule_kind: RuleKind,
    pub model: PreferenceModel,
    pub quota_fraction: f64,
    pub replications: u64,
    pub seed: u64,
    pub resolution: u64,
}

impl AlphaSearchResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(ALPHA_CSV_HEADER);
        out.push('\n');
        for p in &self.l1_by_alpha {
            out.push_str(&format!("{},{},{}\n", p.alpha, p.l1, self.rule_kind));
        }
        out
    }

    pub fn min_l1(&self) -> f64 {
        self.l1_by_alpha
            .iter()
            .map(|p| p.l1)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSearch {
    pub rule_kind: RuleKind,
    pub quota_fraction: f64,
    pub replications: u64,
    pub seed: u64,
    pub resolution: u64,
}

/// Weight vectors of `rule_kind` for every grid point.
///
/// Independent of the preference model except for the density rule, so a
/// sweep over models can compute them once.
pub fn rule_weights_on_grid(
    partition: &ConstituencyPartition,
    model: &PreferenceModel,
    rule_kind: RuleKind,
    alpha_grid: &[f64],
    quota_fraction: f64,
    resolution: u64,
) -> Result<Vec<Vec<f64>>> {
    alpha_grid
        .par_iter()
        .map(|&alpha| {
            AllocationRuleSpec::new(rule_kind, alpha)?.weights(
                partition,
                model,
                quota_fraction,
                resolution,
            )
        })
        .collect()
}

/// Minimizes the L1 distance of per-capita pivot probabilities from the
/// egalitarian ideal over `alpha_grid`. Ties go to the smallest alpha.
///
/// Every grid point is estimated from the same seed, so differences in L1
/// between neighbouring alphas are not swamped by independent noise.
pub fn optimize_alpha(
    partition: &ConstituencyPartition,
    model: &PreferenceModel,
    alpha_grid: &[f64],
    search: &AlphaSearch,
) -> Result<AlphaSearchResult> {
    let weights = rule_weights_on_grid(
        partition,
        model,
        search.rule_kind,
        alpha_grid,
        search.quota_fraction,
        search.resolution,
    )?;
    optimize_alpha_with_weights(partition, model, alpha_grid, &weights, search)
}

/// As [`optimize_alpha`] with precomputed per-grid-point weights.
pub fn optimize_alpha_with_weights(
    partition: &ConstituencyPartition,
    model: &PreferenceModel,
    alpha_grid: &[f64],
    weights: &[Vec<f64>],
    search: &AlphaSearch,
) -> Result<AlphaSearchResult> {
    if alpha_grid.is_empty() {
        return Err(Error::Precondition("alpha grid is empty".into()));
    }
    if alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("alpha grid must be strictly increasing".into()));
    }
    if weights.len() != alpha_grid.len() {
        return Err(Error::DimensionMismatch {
            what: "weight table",
            got: weights.len(),
            expected: alpha_grid.len(),
        });
    }
    let total = partition.total();
    let table = alpha_grid
        .par_iter()
        .zip(weights)
        .map(|(&alpha, w)| {
            let game = WeightedVotingGame::new(search.quota_fraction, w.clone())?;
            let est = estimate_pivot_probabilities(
                &game,
                model,
                partition,
                search.replications,
                search.seed,
            )?;
            let l1 = influence_profile(&est, partition, total)?.l1_distance;
            Ok(AlphaPoint { alpha, l1 })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut star = table[0];
    for p in &table[1..] {
        if p.l1 < star.l1 {
            star = *p;
        }
    }
    Ok(AlphaSearchResult {
        alpha_star: star.alpha,
        l1_by_alpha: table,
        rule_kind: search.rule_kind,
        model: *model,
        quota_fraction: search.quota_fraction,
        replications: search.replications,
        seed: search.seed,
        resolution: search.resolution,
    })
}
