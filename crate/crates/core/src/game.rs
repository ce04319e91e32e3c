//! Weighted voting games and their power indices.
//!
//! A game `[q; w_1, ..., w_m]` declares a coalition winning when its combined
//! weight is strictly greater than the absolute quota `q * sum(w)`. Coalitions
//! whose weight equals the quota exactly are losing.
//!
//! Representatives are indexed from 0 in the API. Text and CSV exports number
//! them from 1.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of players `shapley_exact` enumerates.
pub const EXACT_PLAYER_CAP: usize = 20;

/// Largest number of players the counting DP accepts (counts are held in `u128`).
pub const DP_PLAYER_CAP: usize = 120;

/// Upper bound on `(players + 1) * (total_weight + 1)` for the counting DP.
pub const DP_CELL_BUDGET: u64 = 1 << 23;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedVotingGame {
    quota_fraction: f64,
    weights: Vec<f64>,
}

impl WeightedVotingGame {
    pub fn new(quota_fraction: f64, weights: Vec<f64>) -> Result<Self> {
        if !(0.5..1.0).contains(&quota_fraction) {
            return Err(Error::InvalidQuota(quota_fraction));
        }
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no players".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {w} is not a nonnegative finite number"
            )));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::DegenerateGame);
        }
        Ok(Self {
            quota_fraction,
            weights,
        })
    }

    /// Simple majority game `[0.5; weights]`.
    pub fn majority(weights: Vec<f64>) -> Result<Self> {
        Self::new(0.5, weights)
    }

    pub fn quota_fraction(&self) -> f64 {
        self.quota_fraction
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn players(&self) -> usize {
        self.weights.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Absolute quota `q * sum(w)`. Always derived, never stored.
    pub fn quota(&self) -> f64 {
        self.quota_fraction * self.total_weight()
    }

    /// Same game with every weight multiplied by `factor > 0`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Precondition(format!(
                "rescaling factor {factor} must be positive"
            )));
        }
        Self::new(
            self.quota_fraction,
            self.weights.iter().map(|w| w * factor).collect(),
        )
    }

    pub fn is_winning(&self, coalition: &Coalition) -> Result<bool> {
        let m = self.players();
        let mut sum = 0.0;
        for &i in &coalition.members {
            if i >= m {
                return Err(Error::InvalidCoalition {
                    index: i,
                    players: m,
                });
            }
            sum += self.weights[i];
        }
        Ok(sum > self.quota())
    }

    /// Shapley-Shubik index by enumerating every coalition once.
    ///
    /// Accepts real weights. Runs in `O(2^m * m)` and is capped at
    /// [`EXACT_PLAYER_CAP`] players.
    pub fn shapley_exact(&self) -> Result<PowerIndexVector> {
        let m = self.players();
        if m > EXACT_PLAYER_CAP {
            return Err(Error::SizeLimit {
                players: m,
                cap: EXACT_PLAYER_CAP,
            });
        }
        let quota = self.quota();
        let coef = order_coefficients(m);
        let full = 1usize << m;
        let mut sums = vec![0.0f64; full];
        for mask in 1..full {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + self.weights[low];
        }

        let mut phi = vec![0.0; m];
        for mask in 0..full {
            if sums[mask] > quota {
                continue;
            }
            let k = mask.count_ones() as usize;
            for (i, p) in phi.iter_mut().enumerate() {
                let bit = 1usize << i;
                if mask & bit == 0 && sums[mask | bit] > quota {
                    *p += coef[k];
                }
            }
        }
        Ok(PowerIndexVector::new(phi, IndexKind::Shapley))
    }

    /// Shapley-Shubik index by counting coalitions per (size, weight).
    ///
    /// Requires nonnegative integer weights. Builds the joint generating
    /// function of all players once and removes each player by exact integer
    /// deconvolution, `O(m^2 * sum(w))` overall.
    pub fn shapley_dp(&self) -> Result<PowerIndexVector> {
        let weights = self.integer_weights()?;
        let m = weights.len();
        let quota = self.quota();
        let limit = swing_ceiling(quota);
        let width = limit + 1;

        // count[k * width + s]: subsets of size k and weight s (s <= limit).
        let mut count = vec![0u128; (m + 1) * width];
        count[0] = 1;
        for (placed, &w) in weights.iter().enumerate() {
            let w = w as usize;
            for k in (1..=placed + 1).rev() {
                for s in (w..width).rev() {
                    let add = count[(k - 1) * width + s - w];
                    count[k * width + s] += add;
                }
            }
        }

        let coef = order_coefficients(m);
        let mut without = vec![0u128; m * width];
        let mut phi = vec![0.0; m];
        for (i, &wi) in weights.iter().enumerate() {
            if wi == 0 {
                continue;
            }
            let wi_us = wi as usize;
            remove_player(&count, &mut without, m, width, wi_us);
            let mut value = 0.0;
            for k in 0..m {
                let row = &without[k * width..(k + 1) * width];
                let swings: u128 = swing_range(quota, wi, limit)
                    .map(|s| row[s])
                    .sum();
                value += swings as f64 * coef[k];
            }
            phi[i] = value;
        }
        Ok(PowerIndexVector::new(phi, IndexKind::Shapley))
    }

    /// Raw Penrose-Banzhaf index: swings of each player over `2^(m-1)`.
    pub fn banzhaf(&self) -> Result<PowerIndexVector> {
        let weights = self.integer_weights()?;
        let m = weights.len();
        let quota = self.quota();
        let limit = swing_ceiling(quota);
        let width = limit + 1;

        let mut count = vec![0u128; width];
        count[0] = 1;
        for &w in &weights {
            let w = w as usize;
            for s in (w..width).rev() {
                count[s] += count[s - w];
            }
        }

        let denom = 2f64.powi(m as i32 - 1);
        let mut without = vec![0u128; width];
        let mut beta = vec![0.0; m];
        for (i, &wi) in weights.iter().enumerate() {
            if wi == 0 {
                continue;
            }
            let w = wi as usize;
            for s in 0..width {
                without[s] = count[s] - if s >= w { without[s - w] } else { 0 };
            }
            let swings: u128 = swing_range(quota, wi, limit).map(|s| without[s]).sum();
            beta[i] = swings as f64 / denom;
        }
        Ok(PowerIndexVector::new(beta, IndexKind::Banzhaf))
    }

    /// Index of the weighted median for the given ideal points.
    ///
    /// Representatives are ordered by ideal point (ties broken by ascending
    /// index) and the first one at which the running weight strictly exceeds
    /// the quota is returned.
    pub fn pivotal_index(&self, ideal_points: &[f64]) -> Result<usize> {
        self.pivotal_index_directed(ideal_points, PivotDirection::LeftToRight)
    }

    pub fn pivotal_index_directed(
        &self,
        ideal_points: &[f64],
        direction: PivotDirection,
    ) -> Result<usize> {
        if ideal_points.len() != self.players() {
            return Err(Error::DimensionMismatch {
                what: "ideal points",
                got: ideal_points.len(),
                expected: self.players(),
            });
        }
        if ideal_points.iter().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("ideal points must be finite".into()));
        }
        let mut order = Vec::with_capacity(self.players());
        Ok(PivotFinder::new(self, direction).find(ideal_points, &mut order))
    }

    fn integer_weights(&self) -> Result<Vec<u64>> {
        let m = self.players();
        if m > DP_PLAYER_CAP {
            return Err(Error::SizeLimit {
                players: m,
                cap: DP_PLAYER_CAP,
            });
        }
        let mut out = Vec::with_capacity(m);
        for &w in &self.weights {
            if w.fract() != 0.0 || w > u32::MAX as f64 {
                return Err(Error::NonIntegerWeights(w));
            }
            out.push(w as u64);
        }
        let total: u64 = out.iter().sum();
        if (m as u64 + 1).saturating_mul(total + 1) > DP_CELL_BUDGET {
            return Err(Error::ArithmeticBudget { total, players: m });
        }
        Ok(out)
    }
}

/// Which end of the policy line coalition formation starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PivotDirection {
    #[default]
    LeftToRight,
    RightToLeft,
}

/// Reusable weighted-median search for hot simulation loops.
#[derive(Debug, Clone)]
pub(crate) struct PivotFinder<'a> {
    weights: &'a [f64],
    quota: f64,
    direction: PivotDirection,
}

impl<'a> PivotFinder<'a> {
    pub(crate) fn new(game: &'a WeightedVotingGame, direction: PivotDirection) -> Self {
        Self {
            weights: &game.weights,
            quota: game.quota(),
            direction,
        }
    }

    /// `order` is scratch space; its contents are overwritten.
    pub(crate) fn find(&self, ideal_points: &[f64], order: &mut Vec<usize>) -> usize {
        order.clear();
        order.extend(0..ideal_points.len());
        match self.direction {
            PivotDirection::LeftToRight => order.sort_unstable_by(|&a, &b| {
                ideal_points[a].total_cmp(&ideal_points[b]).then(a.cmp(&b))
            }),
            PivotDirection::RightToLeft => order.sort_unstable_by(|&a, &b| {
                ideal_points[b].total_cmp(&ideal_points[a]).then(a.cmp(&b))
            }),
        }
        let mut running = 0.0;
        for &i in order.iter() {
            running += self.weights[i];
            if running > self.quota {
                return i;
            }
        }
        // Only reachable through rounding in the running sum; the grand
        // coalition always beats a quota fraction below one.
        *order.last().expect("game has at least one player")
    }
}

fn swing_ceiling(quota: f64) -> usize {
    // Largest integer weight that is still losing.
    let mut s = quota.floor().max(0.0) as usize;
    while s as f64 > quota {
        s -= 1;
    }
    s
}

/// Losing coalition weights `s <= limit` that become winning once `w` joins.
fn swing_range(quota: f64, w: u64, limit: usize) -> impl Iterator<Item = usize> {
    let start = limit.saturating_sub(w as usize);
    (start..=limit).filter(move |&s| (s as f64) <= quota && ((s as u64 + w) as f64) > quota)
}

/// Generating function of everyone except one player of weight `w`.
fn remove_player(count: &[u128], without: &mut [u128], m: usize, width: usize, w: usize) {
    for k in 0..m {
        for s in 0..width {
            let full = count[k * width + s];
            let sub = if k > 0 && s >= w {
                without[(k - 1) * width + s - w]
            } else {
                0
            };
            without[k * width + s] = full - sub;
        }
    }
}

/// `k! (m-k-1)! / m!` for `k = 0..m`.
fn order_coefficients(m: usize) -> Vec<f64> {
    // 1 / (m * C(m-1, k)), with the binomial built multiplicatively.
    let mut coef = Vec::with_capacity(m);
    let mut binom = 1.0f64;
    for k in 0..m {
        if k > 0 {
            binom = binom * (m - k) as f64 / k as f64;
        }
        coef.push(1.0 / (m as f64 * binom));
    }
    coef
}

impl fmt::Display for WeightedVotingGame {
    /// Plain-text record: the quota fraction on one line, weights on the next.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.quota_fraction)?;
        let line: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        writeln!(f, "{}", line.join(" "))
    }
}

impl FromStr for WeightedVotingGame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let quota_line = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing quota line".into()))?;
        let quota: f64 = quota_line
            .parse()
            .map_err(|_| Error::Parse(format!("bad quota fraction {quota_line:?}")))?;
        let weights = tokens
            .flat_map(|l| l.split_whitespace())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad weight {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(quota, weights)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coalition {
    members: BTreeSet<usize>,
}

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        Self {
            members: members.into_iter().collect(),
        }
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::new(iter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Shapley,
    Banzhaf,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Shapley => "shapley",
            IndexKind::Banzhaf => "banzhaf",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerIndexVector {
    pub values: Vec<f64>,
    pub kind: IndexKind,
}

impl PowerIndexVector {
    pub fn new(values: Vec<f64>, kind: IndexKind) -> Self {
        Self { values, kind }
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// CSV rows `index,value,kind` (1-based index, no header).
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, v, self.kind));
        }
        out
    }
}

pub const POWER_INDEX_CSV_HEADER: &str = "index,value,kind";
