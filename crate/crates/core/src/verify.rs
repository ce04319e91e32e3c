//! Statistical pass/fail checks of the limit behaviour of pivot probabilities.
//!
//! Every check records the observed statistic, its reference value and a
//! tolerance split into a fixed model allowance (finite `m` or `t`) and a
//! sampling allowance in binomial standard errors, so a failure can be
//! attributed to one or the other.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::allocation::power_law_weights;
use crate::error::{Error, Result};
use crate::fixtures::eu27_partition;
use crate::game::WeightedVotingGame;
use crate::pivot::{draw, estimate_pivot_probabilities, essential_interval_hit_rate, influence_profile};
use crate::population::{
    asymptotic_median_variance, median_density_at_median, ConstituencyPartition,
    DistributionSpec, MedianMethod, MedianSampler, PreferenceModel,
};
use crate::stats::{ks_one_sample, mean_variance, standard_normal_cdf};
use crate::stream::sub_seed;

pub const REPORT_CSV_HEADER: &str = "check,config,observed,expected,tolerance,model_allowance,stat_allowance,criterion,passed,hard,replications,seed";

/// How `observed` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `|observed - expected| <= tolerance`
    Within,
    /// `observed <= expected + tolerance`
    AtMost,
    /// `observed >= expected - tolerance`
    AtLeast,
    /// `observed < expected`
    Below,
    /// Informational; always passes.
    Report,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Within => "within",
            Criterion::AtMost => "at_most",
            Criterion::AtLeast => "at_least",
            Criterion::Below => "below",
            Criterion::Report => "report",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub config: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub model_allowance: f64,
    pub stat_allowance: f64,
    pub criterion: Criterion,
    pub passed: bool,
    /// Soft checks are reported but never fail a run.
    pub hard: bool,
    pub replications: u64,
    pub seed: u64,
}

impl CheckReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        name: &str,
        config: String,
        observed: f64,
        expected: f64,
        model_allowance: f64,
        stat_allowance: f64,
        criterion: Criterion,
        replications: u64,
        seed: u64,
    ) -> Self {
        let tolerance = model_allowance + stat_allowance;
        let passed = match criterion {
            Criterion::Within => (observed - expected).abs() <= tolerance,
            Criterion::AtMost => observed <= expected + tolerance,
            Criterion::AtLeast => observed >= expected - tolerance,
            Criterion::Below => observed < expected,
            Criterion::Report => true,
        };
        Self {
            name: name.to_string(),
            config,
            observed,
            expected,
            tolerance,
            model_allowance,
            stat_allowance,
            criterion,
            passed,
            hard: true,
            replications,
            seed,
        }
    }

    fn soft(mut self) -> Self {
        self.hard = false;
        self
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.config,
            self.observed,
            self.expected,
            self.tolerance,
            self.model_allowance,
            self.stat_allowance,
            self.criterion,
            self.passed,
            self.hard,
            self.replications,
            self.seed
        )
    }

    pub fn failed_hard(&self) -> bool {
        self.hard && !self.passed
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.hard) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "WARN",
        };
        write!(
            f,
            "{status} {:<24} [{}] observed={:.6} expected={:.6} {} tol={:.6} (model {:.6} + stat {:.6})",
            self.name,
            self.config,
            self.observed,
            self.expected,
            self.criterion,
            self.tolerance,
            self.model_allowance,
            self.stat_allowance
        )
    }
}

pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn summary(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    let failed = reports.iter().filter(|r| r.failed_hard()).count();
    out.push_str(&format!(
        "{} checks, {} hard failures\n",
        reports.len(),
        failed
    ));
    out
}

pub fn any_hard_failure(reports: &[CheckReport]) -> bool {
    reports.iter().any(CheckReport::failed_hard)
}

/// One representative type of a replica chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeSpec {
    pub weight: f64,
    pub size: u64,
    /// Fraction of the assembly's seats held by this type.
    pub share: f64,
}

/// Seats per type for an assembly of `m`, by largest remainder.
pub fn type_counts(types: &[TypeSpec], m: usize) -> Result<Vec<usize>> {
    let total: f64 = types.iter().map(|t| t.share).sum();
    if types.is_empty() || total.is_nan() || total <= 0.0 || types.iter().any(|t| t.share < 0.0) {
        return Err(Error::Precondition("type shares must be nonnegative and not all zero".into()));
    }
    let quotas: Vec<f64> = types.iter().map(|t| t.share / total * m as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..types.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let missing = m - counts.iter().sum::<usize>();
    for &i in order.iter().take(missing) {
        counts[i] += 1;
    }
    Ok(counts)
}

/// Per-type average pivot probability ratio and its delta-method standard
/// error, for types `a` and `b` with aggregate probabilities `pa`, `pb`.
fn ratio_with_error(pa: f64, ca: usize, pb: f64, cb: usize, replications: u64) -> (f64, f64) {
    let n = replications as f64;
    let ratio = (pa / ca as f64) / (pb / cb as f64);
    let var_log = (1.0 - pa) / (n * pa) + (1.0 - pb) / (n * pb) + 2.0 / n;
    (ratio, ratio * var_log.sqrt())
}

/// Limit-ratio check on a replica chain of representative types with
/// i.i.d. voters: the ratio of average pivot probabilities of type 0 and type
/// `j` approaches `w_0 f_0(M) / (w_j f_j(M))`.
///
/// Emits a ratio report per `(m, j)` (only the largest `m` is hard) and a
/// hard trend report per `j`: the error at the largest `m` may exceed the
/// error at the smallest `m` by at most two standard errors of their
/// difference.
#[allow(clippy::too_many_arguments)]
pub fn check_theorem1(
    types: &[TypeSpec],
    m_grid: &[usize],
    quota_fraction: f64,
    g: &DistributionSpec,
    replications: u64,
    seed: u64,
    model_allowance: f64,
) -> Result<Vec<CheckReport>> {
    if quota_fraction != 0.5 {
        return Err(Error::Precondition(format!(
            "limit ratio check needs simple majority, got quota {quota_fraction}"
        )));
    }
    if types.len() < 2 || m_grid.is_empty() {
        return Err(Error::Precondition("need at least two types and one assembly size".into()));
    }
    let model = PreferenceModel::iid(*g)?;
    let g_at_median = g.density_at(g.median())?;
    let limit: Vec<f64> = types
        .iter()
        .map(|t| Ok(t.weight * median_density_at_median(g_at_median, t.size)?))
        .collect::<Result<_>>()?;

    let mut reports = Vec::new();
    // (error, se) at each m, per compared type.
    let mut errors: Vec<Vec<(f64, f64)>> = vec![Vec::new(); types.len()];
    for (k, &m) in m_grid.iter().enumerate() {
        let counts = type_counts(types, m)?;
        if counts.contains(&0) {
            return Err(Error::Precondition(format!("m = {m} leaves a type without seats")));
        }
        let mut weights = Vec::with_capacity(m);
        let mut sizes = Vec::with_capacity(m);
        let mut kind = Vec::with_capacity(m);
        for (ti, (t, &c)) in types.iter().zip(&counts).enumerate() {
            weights.extend(std::iter::repeat_n(t.weight, c));
            sizes.extend(std::iter::repeat_n(t.size, c));
            kind.extend(std::iter::repeat_n(ti, c));
        }
        let game = WeightedVotingGame::majority(weights)?;
        let partition = ConstituencyPartition::new(sizes)?;
        let run_seed = sub_seed(seed, k as u64);
        let est = estimate_pivot_probabilities(&game, &model, &partition, replications, run_seed)?;
        let mut aggregate = vec![0.0; types.len()];
        for (p, &ti) in est.probabilities.iter().zip(&kind) {
            aggregate[ti] += p;
        }
        let last = k + 1 == m_grid.len();
        for j in 1..types.len() {
            let (ratio, se) =
                ratio_with_error(aggregate[0], counts[0], aggregate[j], counts[j], replications);
            let expected = limit[0] / limit[j];
            errors[j].push(((ratio - expected).abs(), se));
            let report = CheckReport::new(
                "theorem1_ratio",
                format!("m={m}; types=0/{j}"),
                ratio,
                expected,
                model_allowance,
                3.0 * se,
                if last { Criterion::Within } else { Criterion::Report },
                replications,
                run_seed,
            );
            reports.push(if last { report } else { report.soft() });
        }
    }
    if m_grid.len() > 1 {
        for (j, errs) in errors.iter().enumerate().skip(1) {
            let (first, se_first) = errs[0];
            let (last, se_last) = *errs.last().expect("nonempty grid");
            reports.push(CheckReport::new(
                "theorem1_trend",
                format!(
                    "m={}->{}; types=0/{j}",
                    m_grid[0],
                    m_grid[m_grid.len() - 1]
                ),
                last,
                first,
                0.0,
                2.0 * (se_first.powi(2) + se_last.powi(2)).sqrt(),
                Criterion::AtMost,
                replications,
                seed,
            ));
        }
    }
    Ok(reports)
}

/// Shapley-limit check: with shocks scaled by `t`, pivot probabilities
/// approach the Shapley value of the top-tier game.
///
/// All `t` share one seed, so the draws of shocks and medians coincide across
/// grid points. The largest `t` is checked against `model_allowance + 3 se`
/// and the error there may exceed the error at the smallest `t` by at most
/// two standard errors.
#[allow(clippy::too_many_arguments)]
pub fn check_theorem2(
    game: &WeightedVotingGame,
    partition: &ConstituencyPartition,
    g: &DistributionSpec,
    h: &DistributionSpec,
    t_grid: &[f64],
    replications: u64,
    seed: u64,
    model_allowance: f64,
) -> Result<Vec<CheckReport>> {
    if h.is_degenerate() {
        return Err(Error::Precondition("shock distribution must be non-degenerate".into()));
    }
    if t_grid.is_empty() {
        return Err(Error::Precondition("empty shock-scale grid".into()));
    }
    let phi = game.shapley_dp().or_else(|_| game.shapley_exact())?;
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (k, &t) in t_grid.iter().enumerate() {
        let model = PreferenceModel::new(*g, *h, t)?;
        let est = estimate_pivot_probabilities(game, &model, partition, replications, seed)?;
        let (argmax, err) = est
            .probabilities
            .iter()
            .zip(&phi.values)
            .map(|(p, f)| (p - f).abs())
            .enumerate()
            .fold((0, -1.0), |best, (i, e)| if e > best.1 { (i, e) } else { best });
        let se = est.std_errors[argmax];
        errors.push((err, se));
        let last = k + 1 == t_grid.len();
        let report = CheckReport::new(
            "theorem2_max_error",
            format!("m={}; q={}; t={t}", game.players(), game.quota_fraction()),
            err,
            0.0,
            model_allowance,
            3.0 * se,
            if last { Criterion::AtMost } else { Criterion::Report },
            replications,
            seed,
        );
        reports.push(if last { report } else { report.soft() });
    }
    if t_grid.len() > 1 {
        let (first, se_first) = errors[0];
        let (last, se_last) = errors[errors.len() - 1];
        reports.push(CheckReport::new(
            "theorem2_trend",
            format!("t={}->{}", t_grid[0], t_grid[t_grid.len() - 1]),
            last,
            first,
            0.0,
            2.0 * (se_first.powi(2) + se_last.powi(2)).sqrt(),
            Criterion::AtMost,
            replications,
            seed,
        ));
    }
    Ok(reports)
}

/// Draws `replications` medians of `n` draws from `g`.
pub fn sample_medians(
    g: &DistributionSpec,
    n: u64,
    method: MedianMethod,
    replications: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let sampler = MedianSampler::new(g, n, method)?;
    Ok(draw(
        replications,
        seed,
        Vec::new,
        |scratch, rng| sampler.sample(rng, scratch),
    ))
}

/// KS test of the rescaled median `2 g(M) sqrt(n) (Y - M)` against the
/// standard normal; passes when the p-value is at least 0.01.
pub fn check_lemma1(
    g: &DistributionSpec,
    n: u64,
    replications: u64,
    seed: u64,
) -> Result<CheckReport> {
    let medians = sample_medians(g, n, MedianMethod::Auto, replications, seed)?;
    let center = g.median();
    let scale = 2.0 * g.density_at(center)? * (n as f64).sqrt();
    let rescaled: Vec<f64> = medians.iter().map(|y| scale * (y - center)).collect();
    let ks = ks_one_sample(&rescaled, standard_normal_cdf);
    Ok(CheckReport::new(
        "lemma1_ks_pvalue",
        format!("g={g}; n={n}; D={}", ks.statistic),
        ks.p_value,
        0.01,
        0.0,
        0.0,
        Criterion::AtLeast,
        replications,
        seed,
    ))
}

/// Empirical variance of the median against `1 / (n (2 g(M))^2)` within a
/// relative tolerance.
pub fn check_lemma1_variance(
    g: &DistributionSpec,
    n: u64,
    replications: u64,
    seed: u64,
    relative_tolerance: f64,
) -> Result<CheckReport> {
    let medians = sample_medians(g, n, MedianMethod::Auto, replications, seed)?;
    let (_, var) = mean_variance(&medians);
    let expected = asymptotic_median_variance(g.density_at(g.median())?, n)?;
    Ok(CheckReport::new(
        "lemma1_variance",
        format!("g={g}; n={n}"),
        var,
        expected,
        relative_tolerance * expected,
        0.0,
        Criterion::Within,
        replications,
        seed,
    ))
}

fn square_root_estimate_config(partition: &ConstituencyPartition) -> String {
    format!("m={}; n_total={}", partition.len(), partition.total())
}

/// Square-root weights under i.i.d. voters: largest per-capita deviation
/// `max_i |pi_i n / n_i - 1|` must stay below `tolerance`. Small assemblies
/// (`m < 10`) are reported but never fail.
pub fn check_square_root_rule(
    partition: &ConstituencyPartition,
    g: &DistributionSpec,
    replications: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport> {
    let model = PreferenceModel::iid(*g)?;
    let game = WeightedVotingGame::majority(power_law_weights(partition, 0.5)?)?;
    let est = estimate_pivot_probabilities(&game, &model, partition, replications, seed)?;
    let total = partition.total();
    let deviation = influence_profile(&est, partition, total)?.max_relative_deviation(total);
    let report = CheckReport::new(
        "square_root_deviation",
        square_root_estimate_config(partition),
        deviation,
        0.0,
        tolerance,
        0.0,
        Criterion::AtMost,
        replications,
        seed,
    );
    Ok(if partition.len() < 10 { report.soft() } else { report })
}

/// L1 distance of per-capita influence for power-law weights `n^alpha`,
/// all estimated from the same seed.
pub fn power_law_l1(
    partition: &ConstituencyPartition,
    g: &DistributionSpec,
    alphas: &[f64],
    replications: u64,
    seed: u64,
) -> Result<Vec<f64>> {
    let model = PreferenceModel::iid(*g)?;
    let total = partition.total();
    alphas
        .iter()
        .map(|&alpha| {
            let game = WeightedVotingGame::majority(power_law_weights(partition, alpha)?)?;
            let est = estimate_pivot_probabilities(&game, &model, partition, replications, seed)?;
            Ok(influence_profile(&est, partition, total)?.l1_distance)
        })
        .collect()
}

/// Square-root weights beat equal (alpha = 0) and proportional (alpha = 1)
/// weights in L1 distance on the same draws.
pub fn check_square_root_dominance(
    partition: &ConstituencyPartition,
    g: &DistributionSpec,
    replications: u64,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let l1 = power_law_l1(partition, g, &[0.5, 0.0, 1.0], replications, seed)?;
    Ok([(0.0, l1[1]), (1.0, l1[2])]
        .into_iter()
        .map(|(alpha, other)| {
            CheckReport::new(
                "square_root_l1_dominance",
                format!("{}; vs alpha={alpha}", square_root_estimate_config(partition)),
                l1[0],
                other,
                0.0,
                0.0,
                Criterion::Below,
                replications,
                seed,
            )
        })
        .collect())
}

/// Hit rates of the essential interval `M +- m^(-3/8)` over `m_grid` with
/// equal weights and constituencies of `n` voters. Rates must be
/// nondecreasing in `m`, and the last must reach `min_final_rate`.
pub fn check_essential_interval(
    m_grid: &[usize],
    n: u64,
    g: &DistributionSpec,
    replications: u64,
    seed: u64,
    min_final_rate: f64,
) -> Result<Vec<CheckReport>> {
    if m_grid.is_empty() {
        return Err(Error::Precondition("empty assembly-size grid".into()));
    }
    let model = PreferenceModel::iid(*g)?;
    let mut rates = Vec::with_capacity(m_grid.len());
    let mut reports = Vec::new();
    for &m in m_grid {
        let game = WeightedVotingGame::majority(vec![1.0; m])?;
        let partition = ConstituencyPartition::new(vec![n; m])?;
        let rate = essential_interval_hit_rate(&game, &model, &partition, replications, seed)?;
        rates.push(rate);
        reports.push(
            CheckReport::new(
                "essential_interval_rate",
                format!("m={m}; n={n}"),
                rate,
                1.0,
                0.0,
                0.0,
                Criterion::Report,
                replications,
                seed,
            )
            .soft(),
        );
    }
    for (w, ms) in rates.windows(2).zip(m_grid.windows(2)) {
        reports.push(CheckReport::new(
            "essential_interval_trend",
            format!("m={}->{}", ms[0], ms[1]),
            w[1],
            w[0],
            0.0,
            0.0,
            Criterion::AtLeast,
            replications,
            seed,
        ));
    }
    reports.push(CheckReport::new(
        "essential_interval_final",
        format!("m={}", m_grid[m_grid.len() - 1]),
        *rates.last().expect("nonempty"),
        min_final_rate,
        0.0,
        0.0,
        Criterion::AtLeast,
        replications,
        seed,
    ));
    Ok(reports)
}

/// Budget and tolerance knobs of the bundled verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub replications: u64,
    pub seed: u64,
    /// Multiplies every model allowance; 0 turns the suite into a negative
    /// control.
    pub tolerance_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            replications: 100_000,
            seed: 20_130_901,
            tolerance_scale: 1.0,
        }
    }
}

/// Runs the bundled desk-scale fixtures.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let reps = config.replications;
    let scale = config.tolerance_scale;
    let seed = |k: u64| sub_seed(config.seed, k);
    let unit = DistributionSpec::uniform(0.0, 1.0)?;
    let centered = DistributionSpec::uniform(-0.5, 0.5)?;
    let std_normal = DistributionSpec::normal(0.0, 1.0)?;
    let mut reports = Vec::new();

    let chain = [
        TypeSpec { weight: 2.0, size: 405, share: 0.5 },
        TypeSpec { weight: 1.0, size: 101, share: 0.5 },
    ];
    reports.extend(check_theorem1(&chain, &[20, 100], 0.5, &unit, reps, seed(0), 0.4 * scale)?);
    let symmetric = [
        TypeSpec { weight: 1.0, size: 101, share: 0.5 },
        TypeSpec { weight: 1.0, size: 101, share: 0.5 },
    ];
    reports.extend(check_theorem1(&symmetric, &[20, 100], 0.5, &unit, reps, seed(1), 0.0)?);

    let (game, partition) = theorem2_fixture()?;
    reports.extend(check_theorem2(
        &game,
        &partition,
        &centered,
        &std_normal,
        &[0.0, 1.0, 10.0, 100.0, 1000.0],
        reps,
        seed(2),
        0.01 * scale,
    )?);

    reports.push(check_lemma1(&unit, 1001, reps, seed(3))?);
    reports.push(check_lemma1(&std_normal, 1001, reps, seed(4))?);
    reports.push(check_lemma1_variance(&unit, 1001, reps, seed(3), 0.02 * scale)?);

    let eu27 = eu27_partition()?;
    reports.push(check_square_root_rule(&eu27, &centered, reps, seed(5), 0.15 * scale)?);
    reports.extend(check_square_root_dominance(&eu27, &centered, reps, seed(5))?);

    reports.extend(check_essential_interval(
        &[11, 101, 1001],
        1,
        &centered,
        reps.min(20_000),
        seed(6),
        1.0 - 0.01 * scale,
    )?);
    Ok(reports)
}

/// Nine-member assembly with quota 0.6, weights (5,4,3,3,2,2,2,1,1) and
/// constituency sizes 3, 5, ..., 19.
pub fn theorem2_fixture() -> Result<(WeightedVotingGame, ConstituencyPartition)> {
    let game = WeightedVotingGame::new(0.6, vec![5.0, 4.0, 3.0, 3.0, 2.0, 2.0, 2.0, 1.0, 1.0])?;
    let partition = ConstituencyPartition::new((1..=9).map(|k| 2 * k + 1).collect())?;
    Ok((game, partition))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_criteria() {
        let r = CheckReport::new("x", String::new(), 1.05, 1.0, 0.03, 0.03, Criterion::Within, 1, 0);
        assert!(r.passed);
        let r = CheckReport::new("x", String::new(), 1.07, 1.0, 0.03, 0.03, Criterion::Within, 1, 0);
        assert!(!r.passed && r.failed_hard());
        assert!(!r.clone().soft().failed_hard());
        let r = CheckReport::new("x", String::new(), 0.5, 0.5, 0.0, 0.0, Criterion::Below, 1, 0);
        assert!(!r.passed);
        let r = CheckReport::new("x", String::new(), 0.6, 0.5, 0.0, 0.0, Criterion::AtLeast, 1, 0);
        assert!(r.passed);
        let csv = reports_to_csv(&[r]);
        assert!(csv.starts_with(REPORT_CSV_HEADER));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn type_count_rounding() {
        let t = |share| TypeSpec { weight: 1.0, size: 1, share };
        assert_eq!(type_counts(&[t(0.5), t(0.5)], 101).unwrap(), vec![51, 50]);
        assert_eq!(type_counts(&[t(1.0), t(2.0)], 10).unwrap(), vec![3, 7]);
        assert!(type_counts(&[t(0.0)], 3).is_err());
    }

    #[test]
    fn theorem1_rejects_supermajority() {
        let t = TypeSpec { weight: 1.0, size: 1, share: 0.5 };
        let g = DistributionSpec::uniform(0.0, 1.0).unwrap();
        assert!(check_theorem1(&[t, t], &[10], 0.6, &g, 10, 0, 0.1).is_err());
    }

    #[test]
    fn theorem1_symmetric_types() {
        let t = TypeSpec { weight: 1.0, size: 11, share: 0.5 };
        let g = DistributionSpec::uniform(0.0, 1.0).unwrap();
        let reports = check_theorem1(&[t, t], &[10, 30], 0.5, &g, 20_000, 4, 0.0).unwrap();
        for r in reports.iter().filter(|r| r.name == "theorem1_ratio") {
            assert_eq!(r.expected, 1.0);
        }
        assert!(!any_hard_failure(&reports), "{}", summary(&reports));
    }

    #[test]
    fn theorem2_rejects_degenerate_shocks() {
        let (game, partition) = theorem2_fixture().unwrap();
        let g = DistributionSpec::uniform(-0.5, 0.5).unwrap();
        let h = DistributionSpec::degenerate(0.0).unwrap();
        assert!(check_theorem2(&game, &partition, &g, &h, &[1.0], 10, 0, 0.01).is_err());
    }

    #[test]
    fn theorem2_dummy_and_symmetry() {
        let g = DistributionSpec::uniform(-0.5, 0.5).unwrap();
        let h = DistributionSpec::normal(0.0, 1.0).unwrap();
        let game = WeightedVotingGame::majority(vec![1.0, 2.0, 2.0, 2.0]).unwrap();
        let partition = ConstituencyPartition::new(vec![3, 5, 7, 9]).unwrap();
        let reports = check_theorem2(&game, &partition, &g, &h, &[0.0, 100.0], 20_000, 1, 0.01).unwrap();
        assert!(!any_hard_failure(&reports), "{}", summary(&reports));

        let game = WeightedVotingGame::majority(vec![1.0; 5]).unwrap();
        let partition = ConstituencyPartition::new(vec![7; 5]).unwrap();
        let reports = check_theorem2(&game, &partition, &g, &h, &[0.0, 3.0], 20_000, 1, 0.0).unwrap();
        assert!(!any_hard_failure(&reports), "{}", summary(&reports));
    }

    #[test]
    fn lemma1_detects_small_samples() {
        // n = 1 with normal noise: the rescaled draw has variance 2 / pi, not 1.
        let g = DistributionSpec::normal(0.0, 1.0).unwrap();
        let r = check_lemma1(&g, 1, 100_000, 9).unwrap();
        assert!(!r.passed, "{r}");
        let r = check_lemma1(&g, 1001, 20_000, 9).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn square_root_small_m_is_soft() {
        let g = DistributionSpec::uniform(-0.5, 0.5).unwrap();
        let p = ConstituencyPartition::new(vec![1, 101, 1001]).unwrap();
        let r = check_square_root_rule(&p, &g, 10_000, 3, 0.15).unwrap();
        assert!(!r.hard);
        let p = ConstituencyPartition::new(vec![51; 12]).unwrap();
        let r = check_square_root_rule(&p, &g, 50_000, 3, 0.15).unwrap();
        assert!(r.hard && r.passed, "{r}");
    }
}
