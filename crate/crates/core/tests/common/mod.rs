#![allow(dead_code)]

use mgl_core::{
    FiniteDomain, FiniteInstance, Group, GroupFamily, Hypothesis, HypothesisClass, Label, LabeledSample, Target,
};
use rand::Rng;

pub fn random_labels<R: Rng>(rng: &mut R, n: usize) -> Vec<Label> {
    (0..n).map(|_| Label::from_bool(rng.gen_bool(0.5))).collect()
}

/// Explicit hypotheses with distinct ids; duplicates of the same vector are allowed.
pub fn random_class<R: Rng>(rng: &mut R, n: usize, max_h: usize) -> HypothesisClass {
    let k = rng.gen_range(1..=max_h);
    HypothesisClass::new(
        (0..k)
            .map(|i| Hypothesis::explicit(format!("h{i}"), random_labels(rng, n)))
            .collect(),
    )
    .unwrap()
}

/// Groups with members drawn independently at a random density; may be empty.
pub fn random_groups<R: Rng>(rng: &mut R, n: usize, max_g: usize) -> GroupFamily {
    let k = rng.gen_range(0..=max_g);
    GroupFamily::new((0..k).map(|i| random_group(rng, &format!("g{i}"), n)).collect()).unwrap()
}

pub fn random_group<R: Rng>(rng: &mut R, id: &str, n: usize) -> Group {
    let p = rng.gen_range(0.2..0.8);
    Group::new(id, (0..n).filter(|_| rng.gen_bool(p)), n).unwrap()
}

/// Labels from one hypothesis of the class (with repeats), or uniformly
/// random labels on distinct points.
pub fn random_sample<R: Rng>(rng: &mut R, h: &HypothesisClass, n: usize) -> LabeledSample {
    let mut s = LabeledSample::default();
    if rng.gen_bool(0.4) {
        let base = &h.members()[rng.gen_range(0..h.len())];
        for _ in 0..rng.gen_range(0..=2 * n) {
            let x = rng.gen_range(0..n);
            s.push(x, base.fixed(x).unwrap_or(Label::Pos));
        }
    } else {
        for x in 0..n {
            if rng.gen_bool(0.5) {
                s.push(x, Label::from_bool(rng.gen_bool(0.5)));
            }
        }
    }
    s
}

/// Disjoint groups covering a prefix of the domain, random explicit
/// hypotheses, and a target agreeing with some hypothesis on every group.
pub fn disjoint_instance<R: Rng>(rng: &mut R, n: usize, groups: usize, max_h: usize) -> FiniteInstance {
    let domain = FiniteDomain::numbered("p", n).unwrap();
    let h = random_class(rng, n, max_h);
    let mut owner: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=groups)).collect();
    owner[0] = 0;
    let fam = GroupFamily::new(
        (0..groups)
            .map(|j| Group::new(format!("g{j}"), (0..n).filter(|&x| owner[x] == j), n).unwrap())
            .collect(),
    )
    .unwrap();
    let mut target = random_labels(rng, n);
    for g in fam.iter() {
        let pick = &h.members()[rng.gen_range(0..h.len())];
        for &x in g.members() {
            target[x] = pick.fixed(x).unwrap();
        }
    }
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let z: f64 = raw.iter().sum();
    FiniteInstance::new(
        domain,
        fam,
        h,
        raw.into_iter().map(|w| w / z).collect(),
        Target::Deterministic(target),
    )
    .unwrap()
}
