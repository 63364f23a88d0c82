//! Synthetic instances, exact evaluation, learning curves and coverage runs.

mod curve;
mod eval;
mod generate;
mod lemma1;

pub use curve::{
    child_seed, fit_power_law, fit_rate_exponent, learning_curve, median, CurveFailure, CurveRow, Learner,
    LearningCurveTable, RateFit,
};
pub use eval::{
    best_constant_per_group, draw_sample, group_errors, joint_mistake_mass, worst_group_error, ConstantChoice,
    WorstGroup,
};
pub use generate::{generate, two_sided_thresholds, GeneratorSpec, DEFAULT_DECAY_DEPTH};
pub use lemma1::{bound_coverage, lemma1_coverage, BoundCoverage, ClassSpec, CoverageReport};
