//! Closed-form uniform-deviation rate, per-group and all-groups mistake-mass
//! bounds, and the two sample-size requirements. All logarithms are natural.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combinatorics::{ln_big, sauer_bound};
use crate::error::{Error, Result};

/// Parameters shared by the bound and sample-size calculators.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundParams {
    pub n: u64,
    pub delta: f64,
    pub epsilon: f64,
    /// Lower bound on the mass of every group.
    pub gamma: f64,
    /// VC dimension of the class restricted to one group.
    pub d_g: u64,
    /// VC dimension of the group family.
    pub d_groups: u64,
    /// Supremum over groups of the restricted VC dimension.
    pub d_gh: u64,
    /// VC dimension of the whole class; falls back to `d_gh` when unset.
    pub d_h: Option<u64>,
    pub card_groups: u64,
    /// Leading absolute constant of the sample-size requirements.
    pub big_c: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            n: 100,
            delta: 0.1,
            epsilon: 0.1,
            gamma: 0.5,
            d_g: 1,
            d_groups: 1,
            d_gh: 1,
            d_h: None,
            card_groups: 1,
            big_c: 4.0,
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")))
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// `(4/n) ln(4 S / delta)` where `S` is the 2n-th shattering coefficient.
pub fn alpha_n(n: u64, shatter_2n: &BigUint, delta: f64) -> Result<f64> {
    check_n(n)?;
    check_delta(delta)?;
    if shatter_2n.is_zero() {
        return Err(Error::invalid("shattering coefficient must be at least 1"));
    }
    Ok(4.0 / n as f64 * (ln_big(shatter_2n) + (4.0 / delta).ln()))
}

/// Mistake-mass bound for one fixed group.
pub fn foreach_bound(n: u64, d_g: u64, delta: f64) -> Result<f64> {
    check_n(n)?;
    check_delta(delta)?;
    let growth = ln_big(&sauer_bound(2 * n, d_g));
    Ok(4.0 * (growth + (4.0 / delta).ln()) / n as f64)
}

/// Mistake-mass bound holding simultaneously for every group.
pub fn forall_bound(n: u64, d_groups: u64, d_gh: u64, delta: f64) -> Result<f64> {
    check_n(n)?;
    check_delta(delta)?;
    let growth = ln_big(&sauer_bound(2 * n, d_groups)) + ln_big(&sauer_bound(2 * n, d_gh));
    Ok(4.0 * (growth + (4.0 / delta).ln()) / n as f64)
}

fn gamma_epsilon(p: &BoundParams) -> Result<f64> {
    check_delta(p.delta)?;
    if !(p.epsilon > 0.0 && p.epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {}", p.epsilon)));
    }
    if !(p.gamma > 0.0 && p.gamma <= 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1], got {}", p.gamma)));
    }
    if p.big_c.is_nan() || p.big_c <= 0.0 {
        return Err(Error::invalid("the leading constant must be positive"));
    }
    let ge = p.gamma * p.epsilon;
    if ge >= 1.0 {
        return Err(Error::invalid("gamma * epsilon must be below 1"));
    }
    Ok(ge)
}

// Absorbs floating-point noise so that exact integers are not rounded up.
fn ceil_count(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Sample size that drives the all-groups bound below epsilon.
pub fn sample_size_vc(p: &BoundParams) -> Result<u64> {
    let ge = gamma_epsilon(p)?;
    let dims = (p.d_gh + p.d_groups) as f64;
    Ok(ceil_count(
        p.big_c * (dims * (1.0 / ge).ln() + (1.0 / p.delta).ln()) / ge,
    ))
}

/// Sample size of the finite-family aggregation learner.
pub fn sample_size_cardinality(p: &BoundParams) -> Result<u64> {
    let ge = gamma_epsilon(p)?;
    if p.card_groups == 0 {
        return Err(Error::invalid("the group family must have at least one member"));
    }
    let d = p.d_h.unwrap_or(p.d_gh) as f64;
    Ok(ceil_count(
        p.big_c * (d * (1.0 / ge).ln() + (p.card_groups as f64).ln() + (1.0 / p.delta).ln()) / ge,
    ))
}
