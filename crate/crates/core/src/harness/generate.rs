//! Seeded synthetic instances.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{
    group_mass, FiniteDomain, FiniteInstance, Group, GroupFamily, Hypothesis, HypothesisClass, Label, Target,
};
use crate::reduction::{build_reduction, planted_formula};

/// Largest per-point weight ratio in the threshold-line mass profile.
pub const DEFAULT_DECAY_DEPTH: u32 = 10;

const TARGET_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// `points` points on a line, two-sided threshold hypotheses, `groups`
    /// intervals where neighbours share `2 * overlap` points.
    ThresholdLine {
        points: usize,
        groups: usize,
        overlap: usize,
        gamma: f64,
        depth: u32,
        seed: u64,
    },
    /// Singleton groups and the two constant hypotheses.
    Prop1Singletons { points: usize, seed: u64 },
    /// Two overlapping groups, constants, and noisy labels.
    AgnosticCounterexample,
    /// The reduction of a planted ONE-IN-THREE satisfiable formula.
    ReductionDerived { vars: usize, clauses: usize, seed: u64 },
}

impl GeneratorSpec {
    pub fn threshold_line(points: usize, groups: usize, overlap: usize, gamma: f64, seed: u64) -> Self {
        GeneratorSpec::ThresholdLine {
            points,
            groups,
            overlap,
            gamma,
            depth: DEFAULT_DECAY_DEPTH,
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut s = self.clone();
        match &mut s {
            GeneratorSpec::ThresholdLine { seed: s, .. }
            | GeneratorSpec::Prop1Singletons { seed: s, .. }
            | GeneratorSpec::ReductionDerived { seed: s, .. } => *s = seed,
            GeneratorSpec::AgnosticCounterexample => {}
        }
        s
    }
}

fn kv(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            item.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::invalid(format!("expected key=value, got `{item}`")))
        })
        .collect()
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::invalid(format!("bad value `{v}` for `{key}`")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// `kind[:key=value,...]`, e.g. `threshold-line:m=64,groups=4,overlap=4,gamma=0.15,seed=1`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let pairs = kv(body)?;
        let unknown = |k: &str| Error::invalid(format!("unknown parameter `{k}` for {kind}"));
        match kind.trim() {
            "threshold-line" => {
                let (mut points, mut groups, mut overlap, mut gamma, mut depth, mut seed) =
                    (64, 4, 4, 0.15, DEFAULT_DECAY_DEPTH, 0);
                for (k, v) in pairs {
                    match k {
                        "m" => points = num(k, v)?,
                        "groups" => groups = num(k, v)?,
                        "overlap" => overlap = num(k, v)?,
                        "gamma" => gamma = num(k, v)?,
                        "depth" => depth = num(k, v)?,
                        "seed" => seed = num(k, v)?,
                        _ => return Err(unknown(k)),
                    }
                }
                Ok(GeneratorSpec::ThresholdLine {
                    points,
                    groups,
                    overlap,
                    gamma,
                    depth,
                    seed,
                })
            }
            "prop1-singletons" => {
                let (mut points, mut seed) = (12, 0);
                for (k, v) in pairs {
                    match k {
                        "m" => points = num(k, v)?,
                        "seed" => seed = num(k, v)?,
                        _ => return Err(unknown(k)),
                    }
                }
                Ok(GeneratorSpec::Prop1Singletons { points, seed })
            }
            "agnostic-counterexample" => match pairs.first() {
                Some((k, _)) => Err(unknown(k)),
                None => Ok(GeneratorSpec::AgnosticCounterexample),
            },
            "reduction-derived" => {
                let (mut vars, mut clauses, mut seed) = (6, 4, 0);
                for (k, v) in pairs {
                    match k {
                        "vars" => vars = num(k, v)?,
                        "clauses" => clauses = num(k, v)?,
                        "seed" => seed = num(k, v)?,
                        _ => return Err(unknown(k)),
                    }
                }
                Ok(GeneratorSpec::ReductionDerived { vars, clauses, seed })
            }
            other => Err(Error::invalid(format!("unknown generator `{other}`"))),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::ThresholdLine {
                points,
                groups,
                overlap,
                gamma,
                depth,
                seed,
            } => write!(
                f,
                "threshold-line:m={points},groups={groups},overlap={overlap},gamma={gamma},depth={depth},seed={seed}"
            ),
            GeneratorSpec::Prop1Singletons { points, seed } => write!(f, "prop1-singletons:m={points},seed={seed}"),
            GeneratorSpec::AgnosticCounterexample => f.write_str("agnostic-counterexample"),
            GeneratorSpec::ReductionDerived { vars, clauses, seed } => {
                write!(f, "reduction-derived:vars={vars},clauses={clauses},seed={seed}")
            }
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<FiniteInstance> {
    match *spec {
        GeneratorSpec::ThresholdLine {
            points,
            groups,
            overlap,
            gamma,
            depth,
            seed,
        } => threshold_line(points, groups, overlap, gamma, depth, seed),
        GeneratorSpec::Prop1Singletons { points, seed } => prop1_singletons(points, seed),
        GeneratorSpec::AgnosticCounterexample => agnostic_counterexample(),
        GeneratorSpec::ReductionDerived { vars, clauses, seed } => reduction_derived(vars, clauses, seed),
    }
}

fn constants(n: usize) -> Result<HypothesisClass> {
    HypothesisClass::new(vec![
        Hypothesis::constant("neg", Label::Neg, n),
        Hypothesis::constant("pos", Label::Pos, n),
    ])
}

/// Increasing thresholds `up{t}` (+1 from point t on), then the decreasing
/// `down{t}` that are not constants.
pub fn two_sided_thresholds(n: usize) -> Result<HypothesisClass> {
    let up =
        (0..=n).map(|t| Hypothesis::explicit(format!("up{t}"), (0..n).map(|i| Label::from_bool(i >= t)).collect()));
    let down =
        (1..n).map(|t| Hypothesis::explicit(format!("down{t}"), (0..n).map(|i| Label::from_bool(i < t)).collect()));
    HypothesisClass::new(up.chain(down).collect())
}

/// Interval groups: segment `j` is `[j*n/k, (j+1)*n/k)`, widened by `overlap`
/// on each inner side.
fn interval_groups(n: usize, k: usize, overlap: usize) -> Result<GroupFamily> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot place {k} groups on {n} points")));
    }
    let bound = |j: usize| j * n / k;
    let shortest = (0..k).map(|j| bound(j + 1) - bound(j)).min().unwrap_or(0);
    if 2 * overlap > shortest {
        return Err(Error::invalid(format!(
            "overlap {overlap} too wide for segments of {shortest} points"
        )));
    }
    let groups = (0..k)
        .map(|j| {
            let lo = bound(j).saturating_sub(overlap);
            let hi = (bound(j + 1) + overlap).min(n);
            Group::new(format!("I{j}"), lo..hi, n)
        })
        .collect::<Result<Vec<_>>>()?;
    GroupFamily::new(groups)
}

/// Per-point weights `2^min(d, depth)`, `d` the distance to the nearest label
/// change of the target, normalized.
fn boundary_profile(target: &[Label], depth: u32) -> Vec<f64> {
    let n = target.len();
    let changes: Vec<usize> = (0..n.saturating_sub(1))
        .filter(|&i| target[i] != target[i + 1])
        .collect();
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let d = changes
                .iter()
                .map(|&c| if i <= c { c - i } else { i - c - 1 })
                .min()
                .unwrap_or(depth as usize);
            2f64.powi(d.min(depth as usize) as i32)
        })
        .collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / z).collect()
}

fn threshold_line(n: usize, k: usize, overlap: usize, gamma: f64, depth: u32, seed: u64) -> Result<FiniteInstance> {
    if n < 2 {
        return Err(Error::invalid("threshold-line needs at least 2 points"));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    let domain = FiniteDomain::numbered("p", n)?;
    let groups = interval_groups(n, k, overlap)?;
    let h = two_sided_thresholds(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..TARGET_ATTEMPTS {
        // left to right, each group picks a hypothesis agreeing with what the
        // previous group already fixed on their overlap
        let mut target: Vec<Option<Label>> = vec![None; n];
        for g in groups.iter() {
            let fits = |hyp: &&Hypothesis| {
                g.members()
                    .iter()
                    .all(|&x| target[x].is_none_or(|y| hyp.fixed(x) == Some(y)))
            };
            let varying = |hyp: &&Hypothesis| {
                let first = hyp.fixed(g.members()[0]);
                g.members().iter().any(|&x| hyp.fixed(x) != first)
            };
            let mut pool: Vec<&Hypothesis> = h.iter().filter(fits).filter(varying).collect();
            if pool.is_empty() {
                pool = h.iter().filter(fits).collect();
            }
            let pick = pool
                .choose(&mut rng)
                .expect("a threshold extends any threshold pattern");
            for &x in g.members() {
                target[x] = pick.fixed(x);
            }
        }
        let target: Vec<Label> = target.into_iter().map(|v| v.unwrap_or(Label::Pos)).collect();
        let mass = boundary_profile(&target, depth);
        let inst = FiniteInstance::new(
            domain.clone(),
            groups.clone(),
            h.clone(),
            mass,
            Target::Deterministic(target),
        )?;
        if inst.groups.iter().all(|g| group_mass(&inst, g) >= gamma) {
            return Ok(inst);
        }
    }
    Err(Error::invalid(format!(
        "no target with every group mass >= {gamma} after {TARGET_ATTEMPTS} draws"
    )))
}

fn prop1_singletons(n: usize, seed: u64) -> Result<FiniteInstance> {
    let domain = FiniteDomain::numbered("p", n)?;
    let groups = GroupFamily::new(
        (0..n)
            .map(|i| Group::new(format!("s{i}"), [i], n))
            .collect::<Result<_>>()?,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = (0..n)
        .map(|_| Label::from_bool(rand::Rng::gen_bool(&mut rng, 0.5)))
        .collect();
    FiniteInstance::new(
        domain,
        groups,
        constants(n)?,
        vec![1.0 / n as f64; n],
        Target::Deterministic(target),
    )
}

/// Three regions of mass 1/3: `g1 \ g2`, `g1 ∩ g2`, `g2 \ g1`, with
/// probability of +1 equal to 1/2, 2/3 and 0.
fn agnostic_counterexample() -> Result<FiniteInstance> {
    let domain = FiniteDomain::new(["only1", "both", "only2"])?;
    let groups = GroupFamily::new(vec![Group::new("g1", [0, 1], 3)?, Group::new("g2", [1, 2], 3)?])?;
    FiniteInstance::new(
        domain,
        groups,
        constants(3)?,
        vec![1.0 / 3.0; 3],
        Target::Probabilistic(vec![0.5, 2.0 / 3.0, 0.0]),
    )
}

fn reduction_derived(vars: usize, clauses: usize, seed: u64) -> Result<FiniteInstance> {
    if clauses == 0 || vars < 3 {
        return Err(Error::invalid(
            "reduction-derived needs at least 3 variables and 1 clause",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (phi, assignment) = planted_formula(&mut rng, vars, clauses);
    let red = build_reduction(&phi);
    let n = red.domain_len();
    let target = red.assignment_concept(&assignment);
    FiniteInstance::new(
        red.domain()?,
        red.groups.clone(),
        red.hypothesis_class()?,
        vec![1.0 / n as f64; n],
        Target::Deterministic(target),
    )
}
