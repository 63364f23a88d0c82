//! Monte Carlo coverage of the relative uniform-deviation inequality, and of
//! the all-groups mistake-mass bound for consistent learners.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::curve::child_seed;
use super::eval::{draw_sample, joint_mistake_mass};
use crate::bounds::{alpha_n, forall_bound, foreach_bound};
use crate::combinatorics::{max_restricted_vc, sauer_bound, shattering_coefficient, vc_dimension, BinaryClassView};
use crate::concepts::{find_consistent, ErmOutcome};
use crate::error::{Error, Result};
use crate::instance::FiniteInstance;

/// An indicator class over uniformly weighted points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    /// `count` upward thresholds over `points` points; threshold `j` sits at
    /// `(2j+1) points / (2 count)` and is on at and above it.
    Thresholds { points: usize, count: usize },
}

impl ClassSpec {
    pub fn view(&self) -> Result<BinaryClassView> {
        match *self {
            ClassSpec::Thresholds { points, count } => {
                if points == 0 || count == 0 {
                    return Err(Error::invalid("thresholds need points and count >= 1"));
                }
                if points > 64 {
                    return Err(Error::CapExceeded {
                        what: "view width",
                        size: points as u128,
                        limit: 64,
                    });
                }
                let rows = (0..count).map(|j| {
                    let t = ((2 * j + 1) * points).div_ceil(2 * count);
                    (t..points).fold(0u64, |acc, x| acc | (1u64 << x))
                });
                BinaryClassView::from_bits(points, rows)
            }
        }
    }

    pub fn mass(&self) -> Vec<f64> {
        match *self {
            ClassSpec::Thresholds { points, .. } => vec![1.0 / points as f64; points],
        }
    }
}

impl FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        if kind != "thresholds" {
            return Err(Error::invalid(format!("unknown class spec `{kind}`")));
        }
        let (mut points, mut count) = (32, 16);
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got `{kv}`")))?;
            let v: usize = v.parse().map_err(|_| Error::invalid(format!("bad value for `{k}`")))?;
            match k {
                "points" | "m" => points = v,
                "count" => count = v,
                _ => return Err(Error::invalid(format!("unknown key `{k}`"))),
            }
        }
        Ok(ClassSpec::Thresholds { points, count })
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassSpec::Thresholds { points, count } => write!(f, "thresholds:points={points},count={count}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub trials: usize,
    pub violations: usize,
    /// The 2n-th shattering coefficient, or its Sauer bound past the caps.
    pub shatter: BigUint,
    pub alpha: f64,
}

impl CoverageReport {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.violations as f64 / self.trials as f64
        }
    }
}

fn shatter_2n(view: &BinaryClassView, n: usize) -> Result<BigUint> {
    match shattering_coefficient(view, 2 * n) {
        Ok(s) => Ok(BigUint::from(s)),
        Err(e) if e.is_cap() => Ok(sauer_bound(2 * n as u64, vc_dimension(view)? as u64)),
        Err(e) => Err(e),
    }
}

/// Fraction of trials in which some indicator `f` has
/// `(Pf - P_n f) / sqrt(Pf) > sqrt(alpha_n)`, taking `0/0 = 0`.
pub fn lemma1_coverage(
    view: &BinaryClassView,
    mass: &[f64],
    n: usize,
    delta: f64,
    trials: usize,
    seed: u64,
) -> Result<CoverageReport> {
    if mass.len() != view.points() {
        return Err(Error::invalid("mass table length differs from the class width"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let shatter = shatter_2n(view, n)?;
    let alpha = alpha_n(n as u64, &shatter, delta)?;
    let dist = WeightedIndex::new(mass).map_err(|e| Error::invalid(e.to_string()))?;
    let true_mass: Vec<f64> = view
        .patterns()
        .iter()
        .map(|&p| (0..view.points()).filter(|&x| p >> x & 1 == 1).map(|x| mass[x]).sum())
        .collect();
    let root_alpha = alpha.sqrt();
    let mut violations = 0;
    let mut counts = vec![0usize; view.points()];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, n, trial));
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..n {
            counts[dist.sample(&mut rng)] += 1;
        }
        let violated = view.patterns().iter().zip(&true_mass).any(|(&p, &pf)| {
            if pf <= 0.0 {
                return false;
            }
            let hits: usize = (0..view.points()).filter(|&x| p >> x & 1 == 1).map(|x| counts[x]).sum();
            let pn = hits as f64 / n as f64;
            (pf - pn) / pf.sqrt() > root_alpha
        });
        violations += usize::from(violated);
    }
    Ok(CoverageReport {
        trials,
        violations,
        shatter,
        alpha,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCoverage {
    pub trials: usize,
    /// Trials where some group's mistake mass exceeded the all-groups bound.
    pub violations: usize,
    /// Per group, trials exceeding the single-group bound.
    pub per_group_violations: Vec<usize>,
    /// Trials without a consistent concept.
    pub failures: usize,
    pub forall: f64,
    pub foreach: f64,
}

impl BoundCoverage {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.violations as f64 / self.trials as f64
        }
    }
}

/// Draws `n`-point samples, fits a consistent concept, and checks every
/// group's joint mistake mass against the single-group and all-groups bounds.
pub fn bound_coverage(inst: &FiniteInstance, n: usize, delta: f64, trials: usize, seed: u64) -> Result<BoundCoverage> {
    inst.concept()?;
    let d_groups = vc_dimension(&BinaryClassView::from_groups(&inst.groups, inst.domain.len())?)? as u64;
    let d_gh = max_restricted_vc(&inst.groups, &inst.hypotheses)? as u64;
    let forall = forall_bound(n as u64, d_groups, d_gh, delta)?;
    let foreach = foreach_bound(n as u64, d_gh, delta)?;
    let mut out = BoundCoverage {
        trials,
        violations: 0,
        per_group_violations: vec![0; inst.groups.len()],
        failures: 0,
        forall,
        foreach,
    };
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, n, trial));
        let sample = draw_sample(inst, n, &mut rng)?;
        let f = match find_consistent(&inst.groups, &inst.hypotheses, &sample, inst.domain.len())? {
            ErmOutcome::Consistent { concept, .. } => concept,
            _ => {
                out.failures += 1;
                continue;
            }
        };
        let mut any = false;
        for (i, g) in inst.groups.iter().enumerate() {
            let m = joint_mistake_mass(&f, inst, g)?;
            any |= m > forall;
            if m > foreach {
                out.per_group_violations[i] += 1;
            }
        }
        out.violations += usize::from(any);
    }
    Ok(out)
}
