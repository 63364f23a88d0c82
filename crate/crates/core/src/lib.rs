//! Multi-group learning over finite domains: group-realizable concept classes,
//! exact consistency search, VC and shattering computations, closed-form
//! bounds, an improper sleeping-experts learner, the ONE-IN-THREE 3SAT
//! hardness reduction, and an experiment harness.

pub mod bounds;
pub mod combinatorics;
pub mod concepts;
pub mod error;
pub mod format;
pub mod harness;
pub mod improper;
pub mod instance;
pub mod reduction;

pub use concepts::{contains, enumerate_concepts, find_consistent, verify_witness, Concept, ErmOutcome};
pub use error::{Error, Result};
pub use instance::{
    FiniteDomain, FiniteInstance, Group, GroupFamily, Hypothesis, HypothesisClass, Label, LabeledSample, Target,
};

/// A total binary classifier over domain indices.
pub trait Classifier {
    fn predict(&self, x: usize) -> Label;
}
