//! Ideal-point model of voters and their representatives.
//!
//! A voter `l` in constituency `i` has ideal point `t * mu_i + eps_l` with
//! `eps_l ~ G` drawn per voter and `mu_i ~ H` drawn per constituency. The
//! representative adopts the median ideal point of its constituency.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Beta, Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StatNormal};

use crate::error::{Error, Result};

/// Largest constituency for which medians are drawn from explicit samples.
pub const DIRECT_SAMPLING_LIMIT: u64 = 10_001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DistributionSpec {
    Uniform { low: f64, high: f64 },
    Normal { mean: f64, variance: f64 },
    Degenerate { point: f64 },
}

impl DistributionSpec {
    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low < high) {
            return Err(Error::InvalidDistribution(format!(
                "uniform needs finite low < high (got {low}, {high})"
            )));
        }
        Ok(Self::Uniform { low, high })
    }

    pub fn normal(mean: f64, variance: f64) -> Result<Self> {
        if !(mean.is_finite() && variance.is_finite() && variance >= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "normal needs finite mean and variance >= 0 (got {mean}, {variance})"
            )));
        }
        Ok(Self::Normal { mean, variance })
    }

    pub fn degenerate(point: f64) -> Result<Self> {
        if !point.is_finite() {
            return Err(Error::InvalidDistribution(format!("point {point}")));
        }
        Ok(Self::Degenerate { point })
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Uniform { low, high } => (high - low).powi(2) / 12.0,
            Self::Normal { variance, .. } => variance,
            Self::Degenerate { .. } => 0.0,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.variance() == 0.0
    }

    /// The distribution's median `M`.
    pub fn median(&self) -> f64 {
        match *self {
            Self::Uniform { low, high } => 0.5 * (low + high),
            Self::Normal { mean, .. } => mean,
            Self::Degenerate { point } => point,
        }
    }

    pub fn density_at(&self, x: f64) -> Result<f64> {
        match *self {
            Self::Uniform { low, high } => Ok(if (low..=high).contains(&x) {
                1.0 / (high - low)
            } else {
                0.0
            }),
            Self::Normal { mean, variance } if variance > 0.0 => {
                let z = x - mean;
                Ok((-z * z / (2.0 * variance)).exp() / (2.0 * PI * variance).sqrt())
            }
            _ => Err(Error::NoDensity(self.to_string())),
        }
    }

    /// Quantile function, `p` in `(0, 1)`.
    pub fn inverse_cdf(&self, p: f64) -> f64 {
        match *self {
            Self::Uniform { low, high } => low + p * (high - low),
            Self::Normal { mean, variance } if variance > 0.0 => StatNormal::new(mean, variance.sqrt())
                .expect("validated normal")
                .inverse_cdf(p),
            Self::Normal { mean, .. } => mean,
            Self::Degenerate { point } => point,
        }
    }

    pub(crate) fn sampler(&self) -> VariateSampler {
        match *self {
            Self::Uniform { low, high } => {
                VariateSampler::Uniform(Uniform::new(low, high).expect("validated uniform"))
            }
            Self::Normal { mean, variance } if variance > 0.0 => VariateSampler::Normal(
                Normal::new(mean, variance.sqrt()).expect("validated normal"),
            ),
            Self::Normal { mean: point, .. } | Self::Degenerate { point } => {
                VariateSampler::Point(point)
            }
        }
    }

    /// One draw from the distribution.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform { low, high } => write!(f, "uniform({low},{high})"),
            Self::Normal { mean, variance } => write!(f, "normal({mean},{variance})"),
            Self::Degenerate { point } => write!(f, "degenerate({point})"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// `uniform(a,b)`, `normal(mean,variance)` or `degenerate(point)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad distribution {s:?}"));
        let (family, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let params = args
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (family.trim().to_ascii_lowercase().as_str(), params.as_slice()) {
            ("uniform", [a, b]) => Self::uniform(*a, *b),
            ("normal", [mean, var]) => Self::normal(*mean, *var),
            ("degenerate", [point]) => Self::degenerate(*point),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for DistributionSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DistributionSpec> for String {
    fn from(d: DistributionSpec) -> String {
        d.to_string()
    }
}

#[derive(Debug, Clone)]
pub(crate) enum VariateSampler {
    Uniform(Uniform<f64>),
    Normal(Normal<f64>),
    Point(f64),
}

impl VariateSampler {
    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Uniform(u) => u.sample(rng),
            Self::Normal(n) => n.sample(rng),
            Self::Point(p) => *p,
        }
    }
}

/// Sizes `n_1, ..., n_m` of the constituencies; all positive and odd.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituencyPartition {
    sizes: Vec<u64>,
}

impl ConstituencyPartition {
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Precondition("partition needs at least one constituency".into()));
        }
        if let Some(&n) = sizes.iter().find(|&&n| n == 0 || n.is_multiple_of(2)) {
            return Err(Error::InvalidSize(n));
        }
        Ok(Self { sizes })
    }

    /// Scales raw populations by `scale` and rounds each to the nearest odd
    /// integer (at least 1). Exact ties round up.
    pub fn from_populations(populations: &[f64], scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Precondition(format!("population scale {scale} must be positive")));
        }
        let sizes = populations
            .iter()
            .map(|&p| {
                if !(p.is_finite() && p > 0.0) {
                    return Err(Error::Parse(format!("population {p} must be positive")));
                }
                Ok(nearest_odd(p * scale))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }

    /// One integer per line; blank lines and `#` comments are skipped.
    pub fn parse_sizes(text: &str) -> Result<Vec<f64>> {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad population line {l:?}")))
            })
            .collect()
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }
}

fn nearest_odd(x: f64) -> u64 {
    let k = ((x - 1.0) / 2.0).round().max(0.0);
    2 * k as u64 + 1
}

/// `G`, `H` and the shock scale `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreferenceModel {
    pub g: DistributionSpec,
    pub h: DistributionSpec,
    pub shock_scale: f64,
}

impl PreferenceModel {
    pub fn new(g: DistributionSpec, h: DistributionSpec, shock_scale: f64) -> Result<Self> {
        if g.is_degenerate() {
            return Err(Error::InvalidDistribution(
                "individual noise G must be non-degenerate".into(),
            ));
        }
        if !(shock_scale >= 0.0 && shock_scale.is_finite()) {
            return Err(Error::Precondition(format!(
                "shock scale {shock_scale} must be nonnegative"
            )));
        }
        Ok(Self { g, h, shock_scale })
    }

    /// Ideal points i.i.d. across the whole population.
    pub fn iid(g: DistributionSpec) -> Result<Self> {
        Self::new(g, DistributionSpec::Degenerate { point: 0.0 }, 0.0)
    }

    pub fn is_iid(&self) -> bool {
        self.shock_scale == 0.0 || self.h.is_degenerate()
    }

    /// Variance of the shock component, `t^2 * var(H)`.
    pub fn shock_variance(&self) -> f64 {
        self.shock_scale * self.shock_scale * self.h.variance()
    }

    /// Common median of every representative's ideal point.
    ///
    /// Each family on the menu is symmetric about its median, so the sum of
    /// the shock and the constituency median is symmetric about the sum of
    /// the two centers.
    pub fn common_median(&self) -> f64 {
        let shift = if self.shock_scale == 0.0 {
            0.0
        } else {
            self.shock_scale * self.h.median()
        };
        self.g.median() + shift
    }

    /// Normal approximation of representative density at the common median
    /// for a constituency of `n` voters.
    pub fn approx_lambda_density_at_median(&self, n: u64) -> Result<f64> {
        let gm = self.g.density_at(self.g.median())?;
        let var = asymptotic_median_variance(gm, n)? + self.shock_variance();
        Ok(1.0 / (2.0 * PI * var).sqrt())
    }
}

/// How a constituency median is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MedianMethod {
    /// Beta shortcut for uniform noise, explicit samples for `n` up to
    /// [`DIRECT_SAMPLING_LIMIT`], the Beta quantile transform beyond.
    #[default]
    Auto,
    /// Draw `n` variates and take the middle order statistic.
    Direct,
    /// `Beta((n+1)/2, (n+1)/2)` mapped affinely onto a uniform support.
    BetaAffine,
    /// `Beta((n+1)/2, (n+1)/2)` pushed through the noise quantile function.
    BetaQuantile,
}

/// Prepared sampler for the median of `n` draws from `G`.
#[derive(Debug, Clone)]
pub struct MedianSampler {
    inner: MedianInner,
}

#[derive(Debug, Clone)]
enum MedianInner {
    Direct {
        variate: VariateSampler,
        n: usize,
    },
    BetaAffine {
        beta: Beta<f64>,
        low: f64,
        width: f64,
    },
    BetaQuantile {
        beta: Beta<f64>,
        g: DistributionSpec,
    },
}

impl MedianSampler {
    pub fn new(g: &DistributionSpec, n: u64, method: MedianMethod) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::InvalidSize(n));
        }
        if g.is_degenerate() {
            return Err(Error::InvalidDistribution(format!(
                "cannot take constituency medians of degenerate {g}"
            )));
        }
        let method = match (method, g) {
            (MedianMethod::Auto, DistributionSpec::Uniform { .. }) => MedianMethod::BetaAffine,
            (MedianMethod::Auto, _) if n <= DIRECT_SAMPLING_LIMIT => MedianMethod::Direct,
            (MedianMethod::Auto, _) => MedianMethod::BetaQuantile,
            (m, _) => m,
        };
        let half = (n as f64 + 1.0) / 2.0;
        let beta = || Beta::new(half, half).expect("positive shape");
        let inner = match method {
            MedianMethod::Direct => MedianInner::Direct {
                variate: g.sampler(),
                n: usize::try_from(n).map_err(|_| Error::InvalidSize(n))?,
            },
            MedianMethod::BetaAffine => match *g {
                DistributionSpec::Uniform { low, high } => MedianInner::BetaAffine {
                    beta: beta(),
                    low,
                    width: high - low,
                },
                _ => {
                    return Err(Error::Precondition(format!(
                        "affine Beta shortcut needs uniform noise, got {g}"
                    )))
                }
            },
            MedianMethod::BetaQuantile => MedianInner::BetaQuantile { beta: beta(), g: *g },
            MedianMethod::Auto => unreachable!("resolved above"),
        };
        Ok(Self { inner })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut Vec<f64>) -> f64 {
        match &self.inner {
            MedianInner::Direct { variate, n } => {
                scratch.clear();
                scratch.extend((0..*n).map(|_| variate.sample(rng)));
                let mid = n / 2;
                let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
                *median
            }
            MedianInner::BetaAffine { beta, low, width } => low + width * beta.sample(rng),
            MedianInner::BetaQuantile { beta, g } => g.inverse_cdf(beta.sample(rng)),
        }
    }
}

/// One draw of the median of `n` independent draws from `g`.
pub fn sample_constituency_median<R: Rng + ?Sized>(
    g: &DistributionSpec,
    n: u64,
    rng: &mut R,
) -> Result<f64> {
    let sampler = MedianSampler::new(g, n, MedianMethod::Auto)?;
    Ok(sampler.sample(rng, &mut Vec::new()))
}

/// Prepared sampler for the full vector of representative ideal points.
#[derive(Debug, Clone)]
pub struct LambdaSampler {
    shock: VariateSampler,
    shock_scale: f64,
    medians: Vec<MedianSampler>,
    scratch: Vec<f64>,
}

impl LambdaSampler {
    pub fn new(model: &PreferenceModel, partition: &ConstituencyPartition) -> Result<Self> {
        Self::with_method(model, partition, MedianMethod::Auto)
    }

    pub fn with_method(
        model: &PreferenceModel,
        partition: &ConstituencyPartition,
        method: MedianMethod,
    ) -> Result<Self> {
        let medians = partition
            .sizes()
            .iter()
            .map(|&n| MedianSampler::new(&model.g, n, method))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            shock: model.h.sampler(),
            shock_scale: model.shock_scale,
            medians,
            scratch: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.medians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.medians.is_empty()
    }

    /// Writes `t * mu_i + median_i` into `out` (length `m`).
    pub fn fill<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.medians.len());
        for (slot, median) in out.iter_mut().zip(&self.medians) {
            let shock = self.shock.sample(rng);
            let eps = median.sample(rng, &mut self.scratch);
            *slot = if self.shock_scale == 0.0 {
                eps
            } else {
                self.shock_scale * shock + eps
            };
        }
    }
}

/// One draw of `(lambda_1, ..., lambda_m)`.
pub fn sample_lambda_vector<R: Rng + ?Sized>(
    model: &PreferenceModel,
    partition: &ConstituencyPartition,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let mut sampler = LambdaSampler::new(model, partition)?;
    let mut out = vec![0.0; partition.len()];
    sampler.fill(rng, &mut out);
    Ok(out)
}

/// Limiting density at `M` of the median of `n` draws: `2 g(M) sqrt(n) / sqrt(2 pi)`.
pub fn median_density_at_median(g_density_at_median: f64, n: u64) -> Result<f64> {
    check_density(g_density_at_median)?;
    Ok(2.0 * g_density_at_median * (n as f64).sqrt() / (2.0 * PI).sqrt())
}

/// Limiting variance of the median of `n` draws: `1 / (n (2 g(M))^2)`.
pub fn asymptotic_median_variance(g_density_at_median: f64, n: u64) -> Result<f64> {
    check_density(g_density_at_median)?;
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    let two_g = 2.0 * g_density_at_median;
    Ok(1.0 / (n as f64 * two_g * two_g))
}

fn check_density(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("density at the median must be positive, got {d}")))
    }
}

/// `f_i(0) / f_j(0)` for normal noise and normal shocks:
/// `((pi s_G / 2 n_i + s_H) / (pi s_G / 2 n_j + s_H))^(-1/2)`.
pub fn normal_lambda_density_ratio(
    n_i: u64,
    n_j: u64,
    sigma_g_sq: f64,
    sigma_h_sq: f64,
) -> Result<f64> {
    if sigma_g_sq.is_nan() || sigma_g_sq <= 0.0 || sigma_h_sq < 0.0 || n_i == 0 || n_j == 0 {
        return Err(Error::Precondition(
            "need sigma_G^2 > 0, sigma_H^2 >= 0 and positive sizes".into(),
        ));
    }
    let var = |n: u64| PI * sigma_g_sq / (2.0 * n as f64) + sigma_h_sq;
    Ok((var(n_i) / var(n_j)).powf(-0.5))
}
