//! Plug-in estimates of the expected inactivity time and of the EIT-based
//! inequality ratios, and a ranking of candidate families by how close a
//! sample comes to each family's equality case.
//!
//! Only EIT-based checks are estimated here: the RHR-based ones would need a
//! density estimate.

use std::cmp::Ordering;
use std::str::FromStr;

use serde::Serialize;

use crate::characterizations::TheoremId;
use crate::error::{Error, Result};

pub const MIN_GAP_POINTS: usize = 50;
pub const DEFAULT_TRIM: f64 = 0.05;
/// Trim levels of the sensitivity re-run used to break ranking ties.
pub const SENSITIVITY_TRIMS: (f64, f64) = (0.02, 0.10);

/// Sorted, finite, nonempty sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &x)) = values.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            return Err(Error::NonFiniteWeight { index, x });
        }
        values.sort_by(f64::total_cmp);
        Ok(SampleSet { values })
    }

    /// Parses one value per line; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let x: f64 = line.parse().map_err(|_| Error::SampleLine {
                line: i + 1,
                reason: format!("`{line}` is not a number"),
            })?;
            if !x.is_finite() {
                return Err(Error::SampleLine {
                    line: i + 1,
                    reason: "value is not finite".to_string(),
                });
            }
            values.push(x);
        }
        SampleSet::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

impl FromStr for SampleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SampleSet::parse_text(s)
    }
}

/// Mean of `t - x_i` over the observations `x_i <= t`.
pub fn empirical_eit(sample: &SampleSet, t: f64) -> Result<f64> {
    let covered = sample.values.partition_point(|&x| x <= t);
    if covered == 0 {
        return Err(Error::NoMass(t));
    }
    let sum: f64 = sample.values[..covered].iter().sum();
    Ok(t - sum / covered as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapStatistic {
    pub theorem: TheoremId,
    pub lhs_hat: f64,
    pub rhs_hat: f64,
    pub ratio_hat: f64,
    pub trimmed_fraction: f64,
}

/// Plug-in ratios for the EIT-only checks that apply to the sample's sign.
///
/// The inactivity time is estimated at each order statistic above the
/// `trim` quantile; each ratio is `mean(w) * mean(1 / w)` for the
/// corresponding weight `w`.
pub fn gap_statistics(sample: &SampleSet, trim: f64) -> Result<Vec<GapStatistic>> {
    let n = sample.len();
    if n < MIN_GAP_POINTS {
        return Err(Error::TooFewPoints {
            n,
            min: MIN_GAP_POINTS,
        });
    }
    if !(0.0..1.0).contains(&trim) {
        return Err(Error::Parse {
            input: trim.to_string(),
            reason: "trim must lie in [0, 1)".to_string(),
        });
    }
    let start = ((trim * n as f64).ceil() as usize).max(1);
    let xs = &sample.values;
    let mut prefix = 0.0;
    // (x, m_hat) pairs above the trim point
    let mut points = Vec::with_capacity(n - start.min(n));
    for (i, &x) in xs.iter().enumerate() {
        prefix += x;
        if i < start {
            continue;
        }
        let m_hat = x - prefix / (i + 1) as f64;
        if m_hat > 0.0 {
            points.push((x, m_hat));
        }
    }
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            n: points.len(),
            min: 2,
        });
    }
    let mean = |f: &dyn Fn(f64, f64) -> f64| -> f64 {
        points.iter().map(|&(x, m)| f(x, m)).sum::<f64>() / points.len() as f64
    };
    let mut stats = Vec::new();
    let mut push = |theorem, lhs_hat: f64, inverse_mean: f64| {
        let rhs_hat = 1.0 / inverse_mean;
        stats.push(GapStatistic {
            theorem,
            lhs_hat,
            rhs_hat,
            ratio_hat: lhs_hat / rhs_hat,
            trimmed_fraction: trim,
        });
    };
    push(TheoremId::T3_1, mean(&|_, m| 1.0 / m), mean(&|_, m| m));
    if sample.min() > 0.0 {
        push(TheoremId::T3_2, mean(&|x, m| 1.0 / (x * m)), mean(&|x, m| x * m));
    }
    if sample.min() > 0.0 || sample.max() < 0.0 {
        push(TheoremId::T3_4, mean(&|x, m| m / x), mean(&|x, m| x / m));
    }
    Ok(stats)
}

/// A family offered for identification, keyed by its characterizing check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub label: String,
    pub theorem: TheoremId,
}

impl Candidate {
    pub fn new(label: &str, theorem: TheoremId) -> Self {
        Candidate {
            label: label.to_string(),
            theorem,
        }
    }
}

/// Families whose equality case is visible through an EIT-only check.
pub fn default_candidates() -> Vec<Candidate> {
    vec![
        Candidate::new("type3ev", TheoremId::T3_1),
        Candidate::new("power", TheoremId::T3_4),
        Candidate::new("finiterange", TheoremId::T3_2),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub rank: usize,
    pub label: String,
    pub theorem: TheoremId,
    pub ratio_hat: Option<f64>,
    /// `|ratio_hat - 1|`; absent when the check does not apply to the sample.
    pub score: Option<f64>,
    /// Spread of `ratio_hat` between the two sensitivity trims.
    pub spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingReport {
    pub n: usize,
    pub trim: f64,
    pub entries: Vec<RankEntry>,
}

impl RankingReport {
    pub fn top(&self) -> Option<&RankEntry> {
        self.entries.first()
    }
}

fn ratio_for(stats: &[GapStatistic], id: TheoremId) -> Option<f64> {
    stats
        .iter()
        .find(|s| s.theorem == id)
        .map(|s| s.ratio_hat)
        .filter(|r| r.is_finite())
}

/// Ranks candidates by `|ratio_hat - 1|`, then by trim sensitivity, then by
/// input order.
pub fn identify(sample: &SampleSet, candidates: &[Candidate], trim: f64) -> Result<RankingReport> {
    let main = gap_statistics(sample, trim)?;
    let low = gap_statistics(sample, SENSITIVITY_TRIMS.0)?;
    let high = gap_statistics(sample, SENSITIVITY_TRIMS.1)?;

    let mut rows: Vec<(usize, RankEntry)> = candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let ratio_hat = ratio_for(&main, c.theorem);
            let spread = match (ratio_for(&low, c.theorem), ratio_for(&high, c.theorem)) {
                (Some(a), Some(b)) => Some((a - b).abs()),
                _ => None,
            };
            (
                i,
                RankEntry {
                    rank: 0,
                    label: c.label.clone(),
                    theorem: c.theorem,
                    ratio_hat,
                    score: ratio_hat.map(|r| (r - 1.0).abs()),
                    spread,
                },
            )
        })
        .collect();

    let key = |v: Option<f64>| v.unwrap_or(f64::INFINITY);
    rows.sort_by(|(ia, a), (ib, b)| {
        key(a.score)
            .total_cmp(&key(b.score))
            .then_with(|| key(a.spread).total_cmp(&key(b.spread)))
            .then_with(|| ia.cmp(ib))
            .then(Ordering::Equal)
    });
    let entries = rows
        .into_iter()
        .enumerate()
        .map(|(r, (_, mut e))| {
            e.rank = r + 1;
            e
        })
        .collect();
    Ok(RankingReport {
        n: sample.len(),
        trim,
        entries,
    })
}
