//! Exact per-group evaluation on the finite mass table.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{group_mass, FiniteInstance, Group, Label, LabeledSample};
use crate::Classifier;

#[derive(Clone, Debug, PartialEq)]
pub struct WorstGroup {
    pub error: f64,
    pub group: String,
    /// Zero-mass groups that were not scored.
    pub skipped: usize,
}

/// `P[f(x) != c*(x) and x in g]`.
pub fn joint_mistake_mass<C: Classifier + ?Sized>(f: &C, inst: &FiniteInstance, g: &Group) -> Result<f64> {
    let target = inst.concept()?;
    Ok(g.members()
        .iter()
        .filter(|&&x| f.predict(x) != target[x])
        .fold(0.0, |acc, &x| acc + inst.mass[x]))
}

/// Conditional error per group; `None` for zero-mass groups.
pub fn group_errors<C: Classifier + ?Sized>(f: &C, inst: &FiniteInstance) -> Result<Vec<Option<f64>>> {
    inst.groups
        .iter()
        .map(|g| {
            let m = group_mass(inst, g);
            if m > 0.0 {
                Ok(Some(joint_mistake_mass(f, inst, g)? / m))
            } else {
                Ok(None)
            }
        })
        .collect()
}

/// Largest conditional error over positive-mass groups; the first group in
/// family order wins ties.
pub fn worst_group_error<C: Classifier + ?Sized>(f: &C, inst: &FiniteInstance) -> Result<WorstGroup> {
    let errors = group_errors(f, inst)?;
    let mut best: Option<(f64, usize)> = None;
    for (i, e) in errors.iter().enumerate() {
        if let Some(e) = *e {
            if best.is_none_or(|(b, _)| e > b) {
                best = Some((e, i));
            }
        }
    }
    let (error, i) = best.ok_or(Error::AllGroupsZeroMass)?;
    Ok(WorstGroup {
        error,
        group: inst.groups.get(i).id().to_string(),
        skipped: errors.iter().filter(|e| e.is_none()).count(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantChoice {
    pub group: String,
    pub label: Label,
    /// Conditional error of predicting +1 everywhere on the group.
    pub error_pos: f64,
    /// Conditional error of predicting -1 everywhere on the group.
    pub error_neg: f64,
}

impl ConstantChoice {
    pub fn error(&self) -> f64 {
        match self.label {
            Label::Pos => self.error_pos,
            Label::Neg => self.error_neg,
        }
    }
}

/// The constant with the smallest expected conditional error on each group
/// (ties go to +1). Works on probabilistic and deterministic targets.
pub fn best_constant_per_group(inst: &FiniteInstance) -> Result<Vec<ConstantChoice>> {
    let p = inst.positive_probability();
    inst.groups
        .iter()
        .map(|g| {
            let m = group_mass(inst, g);
            if m <= 0.0 {
                return Err(Error::ZeroMassGroup(g.id().to_string()));
            }
            let pos_mass: f64 = g.members().iter().map(|&x| inst.mass[x] * p[x]).sum();
            let neg_mass: f64 = g.members().iter().map(|&x| inst.mass[x] * (1.0 - p[x])).sum();
            let (error_pos, error_neg) = (neg_mass / m, pos_mass / m);
            Ok(ConstantChoice {
                group: g.id().to_string(),
                label: if error_pos <= error_neg { Label::Pos } else { Label::Neg },
                error_pos,
                error_neg,
            })
        })
        .collect()
}

/// `n` i.i.d. draws from the mass table, labeled by the target concept.
pub fn draw_sample<R: Rng>(inst: &FiniteInstance, n: usize, rng: &mut R) -> Result<LabeledSample> {
    let target = inst.concept()?;
    let dist = WeightedIndex::new(&inst.mass).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(LabeledSample::new(
        (0..n)
            .map(|_| {
                let x = dist.sample(rng);
                (x, target[x])
            })
            .collect(),
    ))
}
