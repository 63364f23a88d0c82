//! Learning curves over a sample-size grid and log-log rate fits.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::eval::{draw_sample, worst_group_error};
use crate::concepts::{find_consistent, ErmOutcome};
use crate::error::{Error, Result};
use crate::improper::{improper_learn, DEFAULT_ETA};
use crate::instance::{group_mass, is_group_realizable, FiniteInstance, LabeledSample};
use crate::Classifier;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Learner {
    /// Consistency search over the group-realizable class.
    ErmConcepts,
    /// Per-group hypotheses combined by the sleeping-experts ensemble.
    Improper { eta: f64 },
}

impl Learner {
    pub fn name(&self) -> &'static str {
        match self {
            Learner::ErmConcepts => "erm-concepts",
            Learner::Improper { .. } => "improper",
        }
    }

    /// Fits a classifier on `sample`.
    pub fn train(&self, inst: &FiniteInstance, sample: &LabeledSample) -> Result<Box<dyn Classifier + Send + Sync>> {
        match *self {
            Learner::ErmConcepts => match find_consistent(&inst.groups, &inst.hypotheses, sample, inst.domain.len())? {
                ErmOutcome::Consistent { concept, .. } => Ok(Box::new(concept)),
                ErmOutcome::Inconsistent => Err(Error::invalid("no consistent concept")),
                ErmOutcome::ConflictingSample { point } => {
                    Err(Error::invalid(format!("conflicting labels at point {point}")))
                }
            },
            Learner::Improper { eta } => Ok(Box::new(improper_learn(inst, sample, eta)?)),
        }
    }
}

impl FromStr for Learner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erm-concepts" => Ok(Learner::ErmConcepts),
            "improper" => Ok(Learner::Improper { eta: DEFAULT_ETA }),
            other => Err(Error::invalid(format!("unknown learner `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub trial: usize,
    pub worst_group_error: f64,
    pub worst_group_id: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveFailure {
    pub n: usize,
    pub trial: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearningCurveTable {
    pub learner: String,
    pub spec: String,
    pub seed: u64,
    /// Smallest group mass of the instance.
    pub gamma: f64,
    pub rows: Vec<CurveRow>,
    pub failures: Vec<CurveFailure>,
}

impl LearningCurveTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,trial,worst_group_error,worst_group_id\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.n, r.trial, r.worst_group_error, r.worst_group_id);
        }
        out
    }

    /// Per grid value, the median worst-group error over successful trials.
    pub fn medians(&self) -> Vec<(usize, f64)> {
        let mut ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.into_iter()
            .map(|n| {
                let errs: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.n == n)
                    .map(|r| r.worst_group_error)
                    .collect();
                (n, median(errs))
            })
            .collect()
    }
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty(), "median of nothing");
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `(n, trial)` task derived from the run seed.
pub fn child_seed(seed: u64, n: usize, trial: usize) -> u64 {
    mix(mix(mix(seed) ^ n as u64) ^ trial as u64)
}

pub fn learning_curve(
    learner: Learner,
    inst: &FiniteInstance,
    spec: &str,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
) -> Result<LearningCurveTable> {
    inst.concept()?;
    if !is_group_realizable(inst) {
        return Err(Error::invalid("learning curves need a group-realizable instance"));
    }
    let tasks: Vec<(usize, usize)> = n_grid.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let results: Vec<std::result::Result<CurveRow, CurveFailure>> = tasks
        .par_iter()
        .map(|&(n, trial)| {
            let run = || -> Result<CurveRow> {
                let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, n, trial));
                let sample = draw_sample(inst, n, &mut rng)?;
                let f = learner.train(inst, &sample)?;
                let w = worst_group_error(f.as_ref(), inst)?;
                Ok(CurveRow {
                    n,
                    trial,
                    worst_group_error: w.error,
                    worst_group_id: w.group,
                })
            };
            run().map_err(|e| CurveFailure {
                n,
                trial,
                reason: e.to_string(),
            })
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f),
        }
    }
    let gamma = inst
        .groups
        .iter()
        .map(|g| group_mass(inst, g))
        .fold(f64::INFINITY, f64::min);
    Ok(LearningCurveTable {
        learner: learner.name().to_string(),
        spec: spec.to_string(),
        seed,
        gamma,
        rows,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual sum of squares in log space.
    pub residual: f64,
    pub points: usize,
}

/// Least squares of `ln(err)` on `ln(n)` over points with positive error.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|&(n, e)| (n.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPositive {
            needed: 3,
            found: pts.len(),
        });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("rate fit needs distinct sample sizes"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(RateFit {
        slope,
        intercept,
        residual,
        points: pts.len(),
    })
}

/// Fits the per-n medians of the table.
pub fn fit_rate_exponent(table: &LearningCurveTable) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = table.medians().into_iter().map(|(n, e)| (n as f64, e)).collect();
    fit_power_law(&pts)
}
