//! Finite domains, group families, hypothesis classes, samples and
//! point-mass instances.
//!
//! Points are referred to by their index in the [`FiniteDomain`]; every
//! enumeration in the crate follows that order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::concepts::{self, ErmOutcome};
use crate::error::{Error, Result};

/// Upper bound on the number of label patterns a single restriction may produce.
pub const RESTRICTION_CAP: u128 = 1 << 20;

/// Mass tables must sum to one within this tolerance.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A binary label in {-1, +1}. `Neg` orders before `Pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn sign(self) -> i8 {
        match self {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Label> {
        match s {
            1 => Some(Label::Pos),
            -1 => Some(Label::Neg),
            _ => None,
        }
    }

    pub fn from_bool(positive: bool) -> Label {
        if positive {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    pub fn is_pos(self) -> bool {
        self == Label::Pos
    }

    pub fn flip(self) -> Label {
        match self {
            Label::Neg => Label::Pos,
            Label::Pos => Label::Neg,
        }
    }
}

impl std::ops::Neg for Label {
    type Output = Label;
    fn neg(self) -> Label {
        self.flip()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Neg => "-1",
            Label::Pos => "+1",
        })
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        match s {
            "+1" | "1" | "+" => Ok(Label::Pos),
            "-1" | "-" => Ok(Label::Neg),
            _ => Err(Error::invalid(format!("`{s}` is not a label (+1 or -1)"))),
        }
    }
}

const RESERVED: &[char] = &[':', '=', ',', ';', '#', '[', ']'];

/// An ordered list of distinct, opaque point identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDomain {
    points: Vec<String>,
    index: HashMap<String, usize>,
}

impl FiniteDomain {
    pub fn new<I, S>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::invalid("domain must be nonempty"));
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.is_empty() || p.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
                return Err(Error::invalid(format!("bad point identifier `{p}`")));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate point `{p}`")));
            }
        }
        Ok(FiniteDomain { points, index })
    }

    /// Domain `p0, p1, ..., p{n-1}`.
    pub fn numbered(prefix: &str, n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn names(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::invalid(format!("unknown point `{name}`")))
    }
}

/// A subset of the domain. Members are kept sorted in domain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    id: String,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Group {
    pub fn new(id: impl Into<String>, members: impl IntoIterator<Item = usize>, domain_len: usize) -> Result<Self> {
        let id = id.into();
        let mut mask = vec![false; domain_len];
        for x in members {
            if x >= domain_len {
                return Err(Error::invalid(format!(
                    "group `{id}` member {x} outside domain of size {domain_len}"
                )));
            }
            mask[x] = true;
        }
        let members = (0..domain_len).filter(|&x| mask[x]).collect();
        Ok(Group { id, members, mask })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersects(&self, other: &Group) -> bool {
        self.members.iter().any(|&x| other.contains(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupFamily {
    groups: Vec<Group>,
}

impl GroupFamily {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &groups {
            if !seen.insert(g.id.as_str()) {
                return Err(Error::invalid(format!("duplicate group id `{}`", g.id)));
            }
        }
        Ok(GroupFamily { groups })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Group> {
        self.groups.iter()
    }

    pub fn get(&self, i: usize) -> &Group {
        &self.groups[i]
    }

    pub fn find(&self, id: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.id == id)
    }

    /// Indices of the groups containing `x`, in family order.
    pub fn active(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.groups
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.contains(x))
            .map(|(i, _)| i)
    }

    pub fn with_group(&self, g: Group) -> Result<Self> {
        let mut groups = self.groups.clone();
        groups.push(g);
        GroupFamily::new(groups)
    }
}

impl<'a> IntoIterator for &'a GroupFamily {
    type Item = &'a Group;
    type IntoIter = std::slice::Iter<'a, Group>;
    fn into_iter(self) -> Self::IntoIter {
        self.groups.iter()
    }
}

/// Values of a hypothesis: an explicit total table, or an implicit block that
/// denotes every completion of its fixed part (`None` marks a free point).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HypothesisValues {
    Explicit(Vec<Label>),
    Block(Vec<Option<Label>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    id: String,
    values: HypothesisValues,
}

impl Hypothesis {
    pub fn explicit(id: impl Into<String>, values: Vec<Label>) -> Self {
        Hypothesis {
            id: id.into(),
            values: HypothesisValues::Explicit(values),
        }
    }

    pub fn block(id: impl Into<String>, fixed: Vec<Option<Label>>) -> Self {
        Hypothesis {
            id: id.into(),
            values: HypothesisValues::Block(fixed),
        }
    }

    pub fn constant(id: impl Into<String>, label: Label, domain_len: usize) -> Self {
        Self::explicit(id, vec![label; domain_len])
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &HypothesisValues {
        &self.values
    }

    pub fn len(&self) -> usize {
        match &self.values {
            HypothesisValues::Explicit(v) => v.len(),
            HypothesisValues::Block(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_block(&self) -> bool {
        matches!(self.values, HypothesisValues::Block(_))
    }

    /// The label this hypothesis pins at `x`, or `None` when `x` is free.
    pub fn fixed(&self, x: usize) -> Option<Label> {
        match &self.values {
            HypothesisValues::Explicit(v) => Some(v[x]),
            HypothesisValues::Block(v) => v[x],
        }
    }

    /// Whether some member of the denoted set labels `x` with `label`.
    pub fn admits(&self, x: usize, label: Label) -> bool {
        self.fixed(x).is_none_or(|v| v == label)
    }

    /// Whether some member agrees with `f` on every point of `points`.
    pub fn agrees_on(&self, points: &[usize], f: &[Label]) -> bool {
        points.iter().all(|&x| self.admits(x, f[x]))
    }

    pub fn free_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.fixed(x).is_none()).collect()
    }

    /// A concrete member: fixed values, with free points taken from `fill`.
    pub fn completion(&self, mut fill: impl FnMut(usize) -> Label) -> Vec<Label> {
        (0..self.len())
            .map(|x| self.fixed(x).unwrap_or_else(|| fill(x)))
            .collect()
    }
}

/// A nonempty list of hypotheses and implicit blocks, in class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisClass {
    members: Vec<Hypothesis>,
}

impl HypothesisClass {
    pub fn new(members: Vec<Hypothesis>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("hypothesis class must be nonempty"));
        }
        let len = members[0].len();
        let mut seen = BTreeSet::new();
        for h in &members {
            if h.len() != len {
                return Err(Error::invalid(format!(
                    "hypothesis `{}` has {} values, expected {len}",
                    h.id,
                    h.len()
                )));
            }
            if !seen.insert(h.id.as_str()) {
                return Err(Error::invalid(format!("duplicate hypothesis id `{}`", h.id)));
            }
        }
        Ok(HypothesisClass { members })
    }

    pub fn members(&self) -> &[Hypothesis] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Hypothesis> {
        self.members.iter()
    }

    pub fn find(&self, id: &str) -> Option<&Hypothesis> {
        self.members.iter().find(|h| h.id == id)
    }

    pub fn domain_len(&self) -> usize {
        self.members[0].len()
    }

    /// Membership of a total function in the denoted set.
    pub fn contains(&self, f: &[Label]) -> bool {
        self.members.iter().any(|h| (0..f.len()).all(|x| h.admits(x, f[x])))
    }

    pub fn without(&self, idx: usize) -> Result<Self> {
        let mut members = self.members.clone();
        members.remove(idx);
        HypothesisClass::new(members)
    }
}

/// Ordered `(point, label)` examples; repeats are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledSample {
    examples: Vec<(usize, Label)>,
}

impl LabeledSample {
    pub fn new(examples: Vec<(usize, Label)>) -> Self {
        LabeledSample { examples }
    }

    pub fn examples(&self) -> &[(usize, Label)] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn push(&mut self, x: usize, y: Label) {
        self.examples.push((x, y));
    }

    pub fn check_domain(&self, domain_len: usize) -> Result<()> {
        match self.examples.iter().find(|(x, _)| *x >= domain_len) {
            Some((x, _)) => Err(Error::invalid(format!(
                "sample point {x} outside domain of size {domain_len}"
            ))),
            None => Ok(()),
        }
    }

    /// First point (in sample order) that carries both labels.
    pub fn conflict(&self) -> Option<usize> {
        let mut seen: HashMap<usize, Label> = HashMap::new();
        for &(x, y) in &self.examples {
            if let Some(&prev) = seen.get(&x) {
                if prev != y {
                    return Some(x);
                }
            } else {
                seen.insert(x, y);
            }
        }
        None
    }

    pub fn is_conflicting(&self) -> bool {
        self.conflict().is_some()
    }

    /// Per-point label table. Fails on conflicting samples.
    pub fn label_table(&self, domain_len: usize) -> Result<Vec<Option<Label>>> {
        self.check_domain(domain_len)?;
        let mut table = vec![None; domain_len];
        for &(x, y) in &self.examples {
            match table[x] {
                Some(prev) if prev != y => return Err(Error::invalid(format!("point {x} carries both labels"))),
                _ => table[x] = Some(y),
            }
        }
        Ok(table)
    }

    pub fn is_consistent_with(&self, f: &[Label]) -> bool {
        self.examples.iter().all(|&(x, y)| f[x] == y)
    }
}

/// The labeling mechanism of an instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// A total concept `c*`.
    Deterministic(Vec<Label>),
    /// Per-point probability of the label +1 (evaluation fixtures only).
    Probabilistic(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteInstance {
    pub domain: FiniteDomain,
    pub groups: GroupFamily,
    pub hypotheses: HypothesisClass,
    pub mass: Vec<f64>,
    pub target: Target,
}

impl FiniteInstance {
    pub fn new(
        domain: FiniteDomain,
        groups: GroupFamily,
        hypotheses: HypothesisClass,
        mass: Vec<f64>,
        target: Target,
    ) -> Result<Self> {
        check_parts(&domain, &groups, &hypotheses)?;
        let n = domain.len();
        if mass.len() != n {
            return Err(Error::invalid(format!(
                "mass table has {} entries, domain has {n}",
                mass.len()
            )));
        }
        if let Some(m) = mass.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::invalid(format!("mass entry {m} is not a probability")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("mass sums to {total}, not 1")));
        }
        match &target {
            Target::Deterministic(t) if t.len() != n => {
                return Err(Error::invalid("target table does not cover the domain"))
            }
            Target::Probabilistic(p) if p.len() != n => {
                return Err(Error::invalid("label probability table does not cover the domain"))
            }
            Target::Probabilistic(p) if p.iter().any(|q| !(0.0..=1.0).contains(q)) => {
                return Err(Error::invalid("label probabilities must lie in [0, 1]"))
            }
            _ => {}
        }
        Ok(FiniteInstance {
            domain,
            groups,
            hypotheses,
            mass,
            target,
        })
    }

    /// The deterministic concept `c*`; probabilistic fixtures are rejected.
    pub fn concept(&self) -> Result<&[Label]> {
        match &self.target {
            Target::Deterministic(t) => Ok(t),
            Target::Probabilistic(_) => Err(Error::NonRealizableFixture),
        }
    }

    /// Probability of label +1 at each point.
    pub fn positive_probability(&self) -> Vec<f64> {
        match &self.target {
            Target::Deterministic(t) => t.iter().map(|l| if l.is_pos() { 1.0 } else { 0.0 }).collect(),
            Target::Probabilistic(p) => p.clone(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.mass.len()).filter(|&x| self.mass[x] > 0.0)
    }
}

/// Shared validation of the (domain, groups, hypotheses) triple.
pub fn check_parts(domain: &FiniteDomain, groups: &GroupFamily, hypotheses: &HypothesisClass) -> Result<()> {
    let n = domain.len();
    if hypotheses.domain_len() != n {
        return Err(Error::invalid(format!(
            "hypotheses cover {} points, domain has {n}",
            hypotheses.domain_len()
        )));
    }
    if let Some(g) = groups.iter().find(|g| g.mask.len() != n) {
        return Err(Error::invalid(format!("group `{}` built for another domain", g.id)));
    }
    Ok(())
}

/// Distinct label patterns the class realizes on the members of `g`, sorted.
pub fn restrict_class(h: &HypothesisClass, g: &Group) -> Result<Vec<Vec<Label>>> {
    if g.is_empty() {
        return Err(Error::EmptyRestriction(g.id.clone()));
    }
    let mut out = BTreeSet::new();
    for hyp in h.iter() {
        let free: Vec<usize> = g
            .members
            .iter()
            .enumerate()
            .filter(|(_, &x)| hyp.fixed(x).is_none())
            .map(|(i, _)| i)
            .collect();
        if free.len() >= 127 || (1u128 << free.len()) > RESTRICTION_CAP {
            return Err(Error::CapExceeded {
                what: "block restriction",
                size: if free.len() >= 127 {
                    u128::MAX
                } else {
                    1u128 << free.len()
                },
                limit: RESTRICTION_CAP,
            });
        }
        let base: Vec<Label> = g.members.iter().map(|&x| hyp.fixed(x).unwrap_or(Label::Neg)).collect();
        for bits in 0u64..(1u64 << free.len()) {
            let mut pattern = base.clone();
            for (j, &slot) in free.iter().enumerate() {
                pattern[slot] = Label::from_bool(bits >> (free.len() - 1 - j) & 1 == 1);
            }
            out.insert(pattern);
        }
        if out.len() as u128 > RESTRICTION_CAP {
            return Err(Error::CapExceeded {
                what: "restriction",
                size: out.len() as u128,
                limit: RESTRICTION_CAP,
            });
        }
    }
    Ok(out.into_iter().collect())
}

pub fn group_mass(inst: &FiniteInstance, g: &Group) -> f64 {
    g.members.iter().fold(0.0, |acc, &x| acc + inst.mass[x])
}

/// Whether some concept of the group-realizable class reproduces the labels
/// almost surely: labels must be deterministic on the support, and a single
/// concept must agree with them there while matching some hypothesis on
/// every group.
pub fn is_group_realizable(inst: &FiniteInstance) -> bool {
    let p = inst.positive_probability();
    let mut sample = LabeledSample::default();
    for x in inst.support() {
        if p[x] == 1.0 {
            sample.push(x, Label::Pos);
        } else if p[x] == 0.0 {
            sample.push(x, Label::Neg);
        } else {
            return false;
        }
    }
    matches!(
        concepts::find_consistent(&inst.groups, &inst.hypotheses, &sample, inst.domain.len()),
        Ok(ErmOutcome::Consistent { .. })
    )
}
