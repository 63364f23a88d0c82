//! Reduction from ONE-IN-THREE 3SAT to consistency over the group-realizable
//! class, the consistent-hypothesis oracle for the constructed class, and a
//! brute-force cross-check of the two.
//!
//! For a formula with variables `x1..xn` and clauses `C1..Cm` the domain has
//! one point per variable and per clause. Group `g_i` holds the three clause
//! variables and `C_i`. Block `H{i}.{t}` pins the t-th literal of `C_i` true,
//! the other two false, `C_i` to +1 and every other clause point to -1; all
//! remaining variables are free. The sample labels every clause point +1.

mod corpus;
mod dimacs;

pub use corpus::{exhaustive_corpus, planted_formula, random_formula};
pub use dimacs::{parse_cnf, to_dimacs};

use crate::concepts::find_consistent;
use crate::error::{Error, Result};
use crate::format::InstanceFile;
use crate::instance::{FiniteDomain, Group, GroupFamily, Hypothesis, HypothesisClass, Label, LabeledSample};

/// Largest variable count the exhaustive satisfiability check accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: usize, negated: bool) -> Self {
        Literal { var, negated }
    }

    /// +1 for a positive literal, -1 for a negated one.
    pub fn polarity(self) -> Label {
        Label::from_bool(!self.negated)
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// A 3-CNF formula whose clauses each mention three distinct variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|l| l.var >= num_vars) {
                return Err(Error::invalid(format!(
                    "clause {} uses variable {} of {num_vars}",
                    i + 1,
                    l.var + 1
                )));
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                return Err(Error::invalid(format!("clause {} repeats a variable", i + 1)));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Every clause has exactly one true literal.
    pub fn exactly_one(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|l| l.eval(assignment)).count() == 1)
    }
}

/// First assignment (bit `i` of a counter from zero is variable `x{i+1}`)
/// satisfying exactly one literal per clause.
pub fn exactly_one_sat_bruteforce(phi: &CnfFormula) -> Result<Option<Vec<bool>>> {
    let n = phi.num_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(Error::CapExceeded {
            what: "assignment enumeration (variables)",
            size: n as u128,
            limit: BRUTE_FORCE_MAX_VARS as u128,
        });
    }
    let mut assignment = vec![false; n];
    for bits in 0u64..(1u64 << n) {
        for (i, v) in assignment.iter_mut().enumerate() {
            *v = bits >> i & 1 == 1;
        }
        if phi.exactly_one(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionInstance {
    pub formula: CnfFormula,
    /// `x1..xn` then `C1..Cm`.
    pub points: Vec<String>,
    pub groups: GroupFamily,
    /// `3m` blocks, ordered `H1.1, H1.2, H1.3, H2.1, ...`.
    pub blocks: Vec<Hypothesis>,
    pub sample: LabeledSample,
}

impl ReductionInstance {
    pub fn variable_point(&self, var: usize) -> usize {
        var
    }

    pub fn clause_point(&self, clause: usize) -> usize {
        self.formula.num_vars() + clause
    }

    pub fn domain_len(&self) -> usize {
        self.points.len()
    }

    /// The domain; fails only for the empty formula with no variables.
    pub fn domain(&self) -> Result<FiniteDomain> {
        FiniteDomain::new(self.points.iter().cloned())
    }

    /// The class; fails for a formula without clauses (no blocks).
    pub fn hypothesis_class(&self) -> Result<HypothesisClass> {
        HypothesisClass::new(self.blocks.clone())
    }

    /// The instance file (domain, groups, blocks, sample); no mass or target.
    pub fn to_instance_file(&self) -> Result<InstanceFile> {
        if self.blocks.is_empty() {
            return Err(Error::invalid("formula has no clauses; the reduced class is empty"));
        }
        Ok(InstanceFile {
            domain: self.domain()?,
            groups: self.groups.clone(),
            hypotheses: self.hypothesis_class()?,
            mass: None,
            target: None,
            sample: Some(self.sample.clone()),
        })
    }

    /// The concept induced by a truth assignment: variable points follow the
    /// assignment, clause points are +1.
    pub fn assignment_concept(&self, assignment: &[bool]) -> Vec<Label> {
        let mut values: Vec<Label> = assignment.iter().map(|&b| Label::from_bool(b)).collect();
        values.extend(std::iter::repeat_n(Label::Pos, self.formula.clauses().len()));
        values
    }
}

pub fn build_reduction(phi: &CnfFormula) -> ReductionInstance {
    let n = phi.num_vars();
    let m = phi.clauses().len();
    let len = n + m;
    let points: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=m).map(|j| format!("C{j}")))
        .collect();

    let groups = phi
        .clauses()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Group::new(format!("g{}", i + 1), c.iter().map(|l| l.var).chain([n + i]), len)
                .expect("clause variables lie in the domain")
        })
        .collect();
    let groups = GroupFamily::new(groups).expect("group ids are distinct");

    let mut blocks = Vec::with_capacity(3 * m);
    for (i, clause) in phi.clauses().iter().enumerate() {
        for t in 0..3 {
            let mut fixed: Vec<Option<Label>> = vec![None; len];
            for (s, lit) in clause.iter().enumerate() {
                fixed[lit.var] = Some(if s == t { lit.polarity() } else { -lit.polarity() });
            }
            for j in 0..m {
                fixed[n + j] = Some(if j == i { Label::Pos } else { Label::Neg });
            }
            blocks.push(Hypothesis::block(format!("H{}.{}", i + 1, t + 1), fixed));
        }
    }

    let sample = LabeledSample::new((0..m).map(|j| (n + j, Label::Pos)).collect());
    ReductionInstance {
        formula: phi.clone(),
        points,
        groups,
        blocks,
        sample,
    }
}

/// A member of the reduced class found by [`consistent_hypothesis_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoundHypothesis {
    pub block: String,
    pub values: Vec<Label>,
}

/// Finds a member of the reduced class consistent with `examples`, without
/// expanding any block.
///
/// Clause-point labels select the candidate clause classes: a +1 at `C_i`
/// keeps only clause `i`, a -1 at `C_i` drops clause `i`. Variable-point
/// labels form a partial assignment; a block is compatible when its three
/// pinned literals agree with that assignment. Free variables of the returned
/// member follow the partial assignment, else +1.
pub fn consistent_hypothesis_search(
    inst: &ReductionInstance,
    examples: &LabeledSample,
) -> Result<Option<FoundHypothesis>> {
    let n = inst.formula.num_vars();
    let m = inst.formula.clauses().len();
    examples.check_domain(n + m)?;

    let mut term: Vec<Option<Label>> = vec![None; n];
    let mut required: Option<usize> = None;
    let mut excluded = vec![false; m];
    for &(x, y) in examples.examples() {
        if x < n {
            match term[x] {
                Some(prev) if prev != y => return Ok(None),
                _ => term[x] = Some(y),
            }
        } else {
            let j = x - n;
            match y {
                Label::Pos => match required {
                    Some(r) if r != j => return Ok(None),
                    _ => required = Some(j),
                },
                Label::Neg => excluded[j] = true,
            }
        }
    }

    let candidates: Vec<usize> = match required {
        Some(r) => vec![r],
        None => (0..m).collect(),
    };
    for j in candidates.into_iter().filter(|&j| !excluded[j]) {
        let clause = &inst.formula.clauses()[j];
        for t in 0..3 {
            let fits = clause.iter().enumerate().all(|(s, lit)| {
                let want = if s == t { lit.polarity() } else { -lit.polarity() };
                term[lit.var].is_none_or(|v| v == want)
            });
            if fits {
                let block = &inst.blocks[3 * j + t];
                let values = block.completion(|x| term[x].unwrap_or(Label::Pos));
                return Ok(Some(FoundHypothesis {
                    block: block.id().to_string(),
                    values,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub sat: bool,
    pub erm_consistent: bool,
    pub agree: bool,
}

/// Decides the formula twice: by brute force, and by consistency search on
/// the reduced instance.
pub fn verify_reduction(phi: &CnfFormula) -> Result<ReductionReport> {
    let sat = exactly_one_sat_bruteforce(phi)?.is_some();
    let red = build_reduction(phi);
    let erm_consistent = if red.blocks.is_empty() {
        // no groups: every labeling is group-realizable, and the sample is empty
        true
    } else {
        let h = red.hypothesis_class()?;
        find_consistent(&red.groups, &h, &red.sample, red.domain_len())?.is_consistent()
    };
    Ok(ReductionReport {
        sat,
        erm_consistent,
        agree: sat == erm_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::contains;
    use Label::{Neg, Pos};

    fn lit(v: i64) -> Literal {
        Literal::new(v.unsigned_abs() as usize - 1, v < 0)
    }

    fn formula(n: usize, clauses: &[[i64; 3]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.map(lit)).collect()).unwrap()
    }

    #[test]
    fn single_clause_reduction() {
        let red = build_reduction(&formula(3, &[[1, 2, -3]]));
        assert_eq!(red.points, vec!["x1", "x2", "x3", "C1"]);
        assert_eq!(red.groups.get(0).members(), &[0, 1, 2, 3]);
        assert_eq!(red.blocks.len(), 3);
        let h11 = &red.blocks[0];
        assert_eq!(h11.id(), "H1.1");
        assert_eq!(
            (0..4).map(|x| h11.fixed(x)).collect::<Vec<_>>(),
            vec![Some(Pos), Some(Neg), Some(Pos), Some(Pos)]
        );
        assert!(h11.free_points().is_empty());
    }

    #[test]
    fn unused_variables_are_free() {
        let red = build_reduction(&formula(4, &[[1, 2, 3]]));
        for b in &red.blocks {
            assert_eq!(b.free_points(), vec![3]);
        }
    }

    #[test]
    fn other_clause_points_pinned_negative() {
        let red = build_reduction(&formula(4, &[[1, 2, 3], [-2, 3, 4]]));
        assert_eq!(red.blocks.len(), 6);
        for b in &red.blocks[..3] {
            assert_eq!(b.fixed(red.clause_point(1)), Some(Neg));
            assert_eq!(b.fixed(red.clause_point(0)), Some(Pos));
        }
        assert_eq!(red.sample.examples(), &[(4, Pos), (5, Pos)]);
    }

    #[test]
    fn restriction_to_clause_group_has_three_patterns() {
        let red = build_reduction(&formula(3, &[[1, 2, -3]]));
        let h = red.hypothesis_class().unwrap();
        let r = crate::instance::restrict_class(&h, red.groups.get(0)).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            exactly_one_sat_bruteforce(&formula(3, &[[1, 2, 3]])).unwrap(),
            Some(vec![true, false, false])
        );
        assert_eq!(
            exactly_one_sat_bruteforce(&formula(3, &[[1, 2, 3], [-1, -2, -3]])).unwrap(),
            None
        );
        assert_eq!(exactly_one_sat_bruteforce(&formula(0, &[])).unwrap(), Some(vec![]));
        assert_eq!(
            exactly_one_sat_bruteforce(&formula(2, &[])).unwrap(),
            Some(vec![false, false])
        );
        let big = CnfFormula::new(25, vec![]).unwrap();
        assert!(exactly_one_sat_bruteforce(&big).unwrap_err().is_cap());
    }

    #[test]
    fn erm_on_single_clause() {
        let red = build_reduction(&formula(3, &[[1, 2, 3]]));
        let h = red.hypothesis_class().unwrap();
        let out = find_consistent(&red.groups, &h, &red.sample, red.domain_len()).unwrap();
        let c = out.concept().unwrap().values();
        assert_eq!(c[3], Pos);
        assert_eq!(c[..3].iter().filter(|l| l.is_pos()).count(), 1);
    }

    #[test]
    fn oracle_examples() {
        let red = build_reduction(&formula(3, &[[1, 2, -3]]));
        let found = consistent_hypothesis_search(&red, &LabeledSample::new(vec![(0, Pos)]))
            .unwrap()
            .unwrap();
        assert_eq!(found.block, "H1.1");
        let none = consistent_hypothesis_search(&red, &LabeledSample::new(vec![(0, Pos), (1, Pos)])).unwrap();
        assert_eq!(none, None);
        let excluded = consistent_hypothesis_search(&red, &LabeledSample::new(vec![(3, Neg)])).unwrap();
        assert_eq!(excluded, None);
    }

    #[test]
    fn oracle_respects_clause_selection() {
        let red = build_reduction(&formula(4, &[[1, 2, 3], [-2, 3, 4]]));
        let s = LabeledSample::new(vec![(red.clause_point(1), Pos)]);
        let found = consistent_hypothesis_search(&red, &s).unwrap().unwrap();
        assert!(found.block.starts_with("H2."));
        let both = LabeledSample::new(vec![(red.clause_point(0), Pos), (red.clause_point(1), Pos)]);
        assert_eq!(consistent_hypothesis_search(&red, &both).unwrap(), None);
        let first_out = LabeledSample::new(vec![(red.clause_point(0), Neg)]);
        assert!(consistent_hypothesis_search(&red, &first_out)
            .unwrap()
            .unwrap()
            .block
            .starts_with("H2."));
    }

    #[test]
    fn verify_examples() {
        let yes = ReductionReport {
            sat: true,
            erm_consistent: true,
            agree: true,
        };
        assert_eq!(verify_reduction(&formula(3, &[[1, 2, 3]])).unwrap(), yes);
        assert_eq!(
            verify_reduction(&formula(3, &[[1, 2, 3], [-1, -2, -3]])).unwrap(),
            ReductionReport {
                sat: false,
                erm_consistent: false,
                agree: true
            }
        );
        assert_eq!(verify_reduction(&formula(0, &[])).unwrap(), yes);
    }

    #[test]
    fn satisfying_assignments_induce_consistent_concepts() {
        let phi = formula(4, &[[1, 2, 3], [-1, 2, 4]]);
        let red = build_reduction(&phi);
        let h = red.hypothesis_class().unwrap();
        for bits in 0..16u32 {
            let a: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            if phi.exactly_one(&a) {
                let c = red.assignment_concept(&a);
                assert!(contains(&red.groups, &h, &c));
                assert!(red.sample.is_consistent_with(&c));
            }
        }
    }
}
