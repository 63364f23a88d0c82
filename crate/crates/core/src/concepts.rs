//! The class of group-realizable concepts: every total labeling that, on each
//! group, coincides with some hypothesis of the class.
//!
//! [`find_consistent`] solves the consistency (ERM) problem as a binary CSP.
//! Each nonempty group is a variable whose domain is the set of distinct
//! restrictions of hypothesis blocks to the group that agree with the sample;
//! two groups constrain each other only on the points they share, where the
//! values both restrictions pin must coincide.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::instance::{GroupFamily, HypothesisClass, Label, LabeledSample};
use crate::Classifier;

/// Default cap on `2^|domain|` for exhaustive enumeration.
pub const ENUMERATION_CAP: u128 = 1 << 20;

/// A total labeling of the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Concept(Vec<Label>);

impl Concept {
    pub fn new(values: Vec<Label>) -> Self {
        Concept(values)
    }

    pub fn values(&self) -> &[Label] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Label> {
        self.0
    }
}

impl Classifier for Concept {
    fn predict(&self, x: usize) -> Label {
        self.0[x]
    }
}

/// A witness pair: the hypothesis (by id) chosen for a group (by id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessEntry {
    pub group: String,
    pub hypothesis: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErmOutcome {
    Consistent {
        concept: Concept,
        witness: Vec<WitnessEntry>,
    },
    Inconsistent,
    ConflictingSample {
        point: usize,
    },
}

impl ErmOutcome {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ErmOutcome::Consistent { .. })
    }

    pub fn concept(&self) -> Option<&Concept> {
        match self {
            ErmOutcome::Consistent { concept, .. } => Some(concept),
            _ => None,
        }
    }
}

/// Membership of `f` in the group-realizable class. Empty groups are vacuous.
pub fn contains(groups: &GroupFamily, h: &HypothesisClass, f: &[Label]) -> bool {
    groups
        .iter()
        .all(|g| g.is_empty() || h.iter().any(|hyp| hyp.agrees_on(g.members(), f)))
}

/// Every member of the class, in lexicographic domain order (first point most
/// significant, -1 before +1).
pub fn enumerate_concepts(groups: &GroupFamily, h: &HypothesisClass, domain_len: usize) -> Result<Vec<Concept>> {
    enumerate_concepts_capped(groups, h, domain_len, ENUMERATION_CAP)
}

pub fn enumerate_concepts_capped(
    groups: &GroupFamily,
    h: &HypothesisClass,
    domain_len: usize,
    cap: u128,
) -> Result<Vec<Concept>> {
    if domain_len >= 64 || (1u128 << domain_len) > cap {
        return Err(Error::CapExceeded {
            what: "concept enumeration",
            size: if domain_len >= 127 {
                u128::MAX
            } else {
                1u128 << domain_len
            },
            limit: cap,
        });
    }
    let mut out = Vec::new();
    let mut f = vec![Label::Neg; domain_len];
    for bits in 0u64..(1u64 << domain_len) {
        for (x, v) in f.iter_mut().enumerate() {
            *v = Label::from_bool(bits >> (domain_len - 1 - x) & 1 == 1);
        }
        if contains(groups, h, &f) {
            out.push(Concept(f.clone()));
        }
    }
    Ok(out)
}

/// Checks that every witness hypothesis agrees with `concept` on its group.
pub fn verify_witness(groups: &GroupFamily, h: &HypothesisClass, concept: &Concept, witness: &[WitnessEntry]) -> bool {
    groups.len() == witness.len()
        && groups.iter().all(|g| {
            witness
                .iter()
                .find(|w| w.group == g.id())
                .and_then(|w| h.find(&w.hypothesis))
                .is_some_and(|hyp| hyp.agrees_on(g.members(), concept.values()))
        })
}

/// A distinct restriction of some hypothesis block to one group.
struct Candidate {
    hypothesis: usize,
    /// Pinned value per group member position; `None` for free points.
    pattern: Vec<Option<Label>>,
}

/// Neighbour index and the `(pos in a, pos in b)` pairs of shared members.
type Overlap = (usize, Vec<(usize, usize)>);

struct Csp {
    /// Family index of each CSP variable (nonempty groups only).
    group_of: Vec<usize>,
    candidates: Vec<Vec<Candidate>>,
    shared: Vec<Vec<Overlap>>,
}

impl Csp {
    fn compatible(&self, a: usize, ca: usize, b: usize, cb: usize, pairs: &[(usize, usize)]) -> bool {
        let pa = &self.candidates[a][ca].pattern;
        let pb = &self.candidates[b][cb].pattern;
        pairs.iter().all(|&(i, j)| match (pa[i], pb[j]) {
            (Some(u), Some(v)) => u == v,
            _ => true,
        })
    }

    fn pairs(&self, a: usize, b: usize) -> Option<&[(usize, usize)]> {
        self.shared[a].iter().find(|(n, _)| *n == b).map(|(_, p)| p.as_slice())
    }

    /// AC-3 over the pairwise overlap constraints. Returns false on a wipe-out.
    fn arc_consistency(&self, domains: &mut [Vec<usize>]) -> bool {
        let mut queue: VecDeque<(usize, usize)> = (0..self.shared.len())
            .flat_map(|a| self.shared[a].iter().map(move |(b, _)| (a, *b)))
            .collect();
        while let Some((a, b)) = queue.pop_front() {
            let pairs = self.pairs(a, b).expect("arc exists");
            let before = domains[a].len();
            let support = domains[b].clone();
            domains[a].retain(|&ca| support.iter().any(|&cb| self.compatible(a, ca, b, cb, pairs)));
            if domains[a].is_empty() {
                return false;
            }
            if domains[a].len() != before {
                for (c, _) in &self.shared[a] {
                    if *c != b {
                        queue.push_back((*c, a));
                    }
                }
            }
        }
        true
    }

    fn search(&self, domains: Vec<Vec<usize>>, assigned: &mut Vec<Option<usize>>) -> bool {
        // first-fail: smallest live domain, then highest overlap degree
        let next = (0..assigned.len())
            .filter(|&v| assigned[v].is_none())
            .min_by_key(|&v| (domains[v].len(), std::cmp::Reverse(self.shared[v].len()), v));
        let Some(var) = next else {
            return true;
        };
        for &choice in &domains[var] {
            let mut narrowed = domains.clone();
            narrowed[var] = vec![choice];
            let mut ok = true;
            for (nb, pairs) in &self.shared[var] {
                if assigned[*nb].is_some() {
                    continue;
                }
                narrowed[*nb].retain(|&cb| self.compatible(var, choice, *nb, cb, pairs));
                if narrowed[*nb].is_empty() {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            assigned[var] = Some(choice);
            if self.search(narrowed, assigned) {
                return true;
            }
            assigned[var] = None;
        }
        false
    }
}

/// Searches for a member of the group-realizable class consistent with `sample`.
///
/// Points that are neither sampled nor pinned by a chosen hypothesis are
/// labeled +1.
pub fn find_consistent(
    groups: &GroupFamily,
    h: &HypothesisClass,
    sample: &LabeledSample,
    domain_len: usize,
) -> Result<ErmOutcome> {
    sample.check_domain(domain_len)?;
    if h.domain_len() != domain_len {
        return Err(Error::invalid("hypothesis class does not match the domain"));
    }
    if let Some(point) = sample.conflict() {
        return Ok(ErmOutcome::ConflictingSample { point });
    }
    let labels = sample.label_table(domain_len)?;

    let group_of: Vec<usize> = (0..groups.len()).filter(|&i| !groups.get(i).is_empty()).collect();
    let mut candidates = Vec::with_capacity(group_of.len());
    for &gi in &group_of {
        let members = groups.get(gi).members();
        let mut seen: HashMap<Vec<Option<Label>>, ()> = HashMap::new();
        let mut cands = Vec::new();
        for (hi, hyp) in h.iter().enumerate() {
            let agrees = members.iter().all(|&x| labels[x].is_none_or(|y| hyp.admits(x, y)));
            if !agrees {
                continue;
            }
            let pattern: Vec<Option<Label>> = members.iter().map(|&x| hyp.fixed(x)).collect();
            if seen.insert(pattern.clone(), ()).is_none() {
                cands.push(Candidate {
                    hypothesis: hi,
                    pattern,
                });
            }
        }
        if cands.is_empty() {
            return Ok(ErmOutcome::Inconsistent);
        }
        candidates.push(cands);
    }

    let mut shared = vec![Vec::new(); group_of.len()];
    for (a, &ia) in group_of.iter().enumerate() {
        let ga = groups.get(ia);
        for (b, &ib) in group_of.iter().enumerate() {
            if a == b {
                continue;
            }
            let gb = groups.get(ib);
            let pairs: Vec<(usize, usize)> = ga
                .members()
                .iter()
                .enumerate()
                .filter_map(|(i, &x)| gb.members().binary_search(&x).ok().map(|j| (i, j)))
                .collect();
            if !pairs.is_empty() {
                shared[a].push((b, pairs));
            }
        }
    }

    let csp = Csp {
        group_of,
        candidates,
        shared,
    };
    let mut domains: Vec<Vec<usize>> = csp.candidates.iter().map(|c| (0..c.len()).collect()).collect();
    if !csp.arc_consistency(&mut domains) {
        return Ok(ErmOutcome::Inconsistent);
    }
    let mut assigned = vec![None; csp.group_of.len()];
    if !csp.search(domains, &mut assigned) {
        return Ok(ErmOutcome::Inconsistent);
    }

    let mut values: Vec<Option<Label>> = labels;
    for (v, choice) in assigned.iter().enumerate() {
        let cand = &csp.candidates[v][choice.expect("complete assignment")];
        let members = groups.get(csp.group_of[v]).members();
        for (pos, &x) in members.iter().enumerate() {
            if values[x].is_none() {
                values[x] = cand.pattern[pos];
            }
        }
    }
    let concept = Concept(values.into_iter().map(|v| v.unwrap_or(Label::Pos)).collect());

    let mut chosen: Vec<Option<usize>> = vec![None; groups.len()];
    for (v, choice) in assigned.iter().enumerate() {
        chosen[csp.group_of[v]] = Some(csp.candidates[v][choice.unwrap()].hypothesis);
    }
    let witness = groups
        .iter()
        .zip(chosen)
        .map(|(g, c)| WitnessEntry {
            group: g.id().to_string(),
            hypothesis: h.members()[c.unwrap_or(0)].id().to_string(),
        })
        .collect();
    Ok(ErmOutcome::Consistent { concept, witness })
}
