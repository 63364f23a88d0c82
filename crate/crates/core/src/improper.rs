//! Improper learner: one consistent hypothesis per group from the first half of
//! the sample, reconciled on overlaps by a deterministic sleeping-experts
//! weighted majority trained on the second half.
//!
//! Only experts whose group contains the current point are awake. An awake
//! expert that errs has its weight multiplied by `1 - eta`; the final
//! classifier votes with the weights left after the last round.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{FiniteInstance, GroupFamily, HypothesisClass, Label, LabeledSample};
use crate::Classifier;

pub const DEFAULT_ETA: f64 = 0.5;

/// First `ceil(n/2)` examples, then the rest.
pub fn split_sample(s: &LabeledSample) -> Result<(LabeledSample, LabeledSample)> {
    if s.len() < 2 {
        return Err(Error::invalid(format!("cannot split a sample of size {}", s.len())));
    }
    let cut = s.len().div_ceil(2);
    let (a, b) = s.examples().split_at(cut);
    Ok((LabeledSample::new(a.to_vec()), LabeledSample::new(b.to_vec())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expert {
    pub group: String,
    pub hypothesis: String,
    /// The concrete member of the class this expert predicts with.
    pub values: Vec<Label>,
    pub weight: f64,
}

/// One expert per group, in family order.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpertTable {
    experts: Vec<Expert>,
}

impl ExpertTable {
    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    pub fn weights(&self) -> Vec<f64> {
        self.experts.iter().map(|e| e.weight).collect()
    }

    pub fn get(&self, group: &str) -> Option<&Expert> {
        self.experts.iter().find(|e| e.group == group)
    }

    pub fn with_weights(mut self, weights: &[f64]) -> Self {
        for (e, &w) in self.experts.iter_mut().zip(weights) {
            e.weight = w;
        }
        self
    }
}

/// For every group, the first class member consistent with the examples of
/// `first` that fall in the group. Free points of a block take the in-group
/// sample label when there is one, +1 otherwise.
pub fn fit_group_hypotheses(groups: &GroupFamily, h: &HypothesisClass, first: &LabeledSample) -> Result<ExpertTable> {
    let n = h.domain_len();
    first.check_domain(n)?;
    let mut experts = Vec::with_capacity(groups.len());
    for g in groups.iter() {
        let in_group = LabeledSample::new(
            first
                .examples()
                .iter()
                .copied()
                .filter(|&(x, _)| g.contains(x))
                .collect(),
        );
        let table = in_group
            .label_table(n)
            .map_err(|_| Error::NoConsistentHypothesis(g.id().to_string()))?;
        let hyp = h
            .iter()
            .find(|hyp| in_group.examples().iter().all(|&(x, y)| hyp.admits(x, y)))
            .ok_or_else(|| Error::NoConsistentHypothesis(g.id().to_string()))?;
        experts.push(Expert {
            group: g.id().to_string(),
            hypothesis: hyp.id().to_string(),
            values: hyp.completion(|x| table[x].unwrap_or(Label::Pos)),
            weight: 1.0,
        });
    }
    Ok(ExpertTable { experts })
}

/// Runs the multiplicative update over `second`, in order.
pub fn ensemble_train(
    groups: &GroupFamily,
    mut experts: ExpertTable,
    second: &LabeledSample,
    eta: f64,
) -> Result<ExpertTable> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid(format!("eta must lie in (0, 1), got {eta}")));
    }
    if experts.experts.len() != groups.len() {
        return Err(Error::invalid("expert table does not match the group family"));
    }
    for &(x, y) in second.examples() {
        for gi in groups.active(x) {
            let e = &mut experts.experts[gi];
            if e.values[x] != y {
                e.weight *= 1.0 - eta;
            }
        }
    }
    Ok(experts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleClassifier {
    groups: GroupFamily,
    experts: ExpertTable,
}

impl EnsembleClassifier {
    pub const TIE_LABEL: Label = Label::Pos;
    pub const DEFAULT_LABEL: Label = Label::Pos;

    pub fn new(groups: GroupFamily, experts: ExpertTable) -> Result<Self> {
        if experts.experts.len() != groups.len() {
            return Err(Error::invalid("expert table does not match the group family"));
        }
        Ok(EnsembleClassifier { groups, experts })
    }

    pub fn experts(&self) -> &ExpertTable {
        &self.experts
    }

    pub fn groups(&self) -> &GroupFamily {
        &self.groups
    }

    /// Per-group hypothesis id and terminal weight, one line per group.
    pub fn report(&self) -> String {
        let mut out = String::from("group,hypothesis,weight\n");
        for e in &self.experts.experts {
            let _ = writeln!(out, "{},{},{}", e.group, e.hypothesis, e.weight);
        }
        out
    }
}

impl Classifier for EnsembleClassifier {
    fn predict(&self, x: usize) -> Label {
        let mut any = false;
        let mut score = 0.0;
        for gi in self.groups.active(x) {
            any = true;
            let e = &self.experts.experts[gi];
            score += e.weight * f64::from(e.values[x].sign());
        }
        if !any {
            Self::DEFAULT_LABEL
        } else if score > 0.0 {
            Label::Pos
        } else if score < 0.0 {
            Label::Neg
        } else {
            Self::TIE_LABEL
        }
    }
}

/// Split, fit per-group hypotheses, train the ensemble.
pub fn improper_learn(inst: &FiniteInstance, s: &LabeledSample, eta: f64) -> Result<EnsembleClassifier> {
    let (first, second) = split_sample(s)?;
    let experts = fit_group_hypotheses(&inst.groups, &inst.hypotheses, &first)?;
    let experts = ensemble_train(&inst.groups, experts, &second, eta)?;
    EnsembleClassifier::new(inst.groups.clone(), experts)
}
