use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::{CnfFormula, Literal};

/// Every canonical clause over `n` variables: three increasing variables, all
/// eight sign patterns.
fn all_clauses(n: usize) -> Vec<[Literal; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for signs in 0..8u8 {
                    out.push([
                        Literal::new(a, signs & 1 != 0),
                        Literal::new(b, signs & 2 != 0),
                        Literal::new(c, signs & 4 != 0),
                    ]);
                }
            }
        }
    }
    out
}

fn multisets(
    pool: &[[Literal; 3]],
    size: usize,
    start: usize,
    acc: &mut Vec<[Literal; 3]>,
    out: &mut Vec<Vec<[Literal; 3]>>,
) {
    if acc.len() == size {
        out.push(acc.clone());
        return;
    }
    for i in start..pool.len() {
        acc.push(pool[i]);
        multisets(pool, size, i, acc, out);
        acc.pop();
    }
}

/// All formulas with at most `max_vars` variables and `max_clauses` clauses,
/// one representative per clause multiset.
pub fn exhaustive_corpus(max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for n in 0..=max_vars {
        let pool = all_clauses(n);
        for m in 0..=max_clauses {
            if m > 0 && pool.is_empty() {
                break;
            }
            let mut sets = Vec::new();
            multisets(&pool, m, 0, &mut Vec::new(), &mut sets);
            out.extend(
                sets.into_iter()
                    .map(|c| CnfFormula::new(n, c).expect("canonical clauses")),
            );
        }
    }
    out
}

fn random_clause<R: Rng>(rng: &mut R, n: usize) -> [Literal; 3] {
    let vars = sample_indices(rng, n, 3);
    [0, 1, 2].map(|i| Literal::new(vars.index(i), rng.gen_bool(0.5)))
}

/// `m` uniformly random clauses over `n >= 3` variables.
pub fn random_formula<R: Rng>(rng: &mut R, n: usize, m: usize) -> CnfFormula {
    assert!(n >= 3 || m == 0, "clauses need three distinct variables");
    let clauses = (0..m).map(|_| random_clause(rng, n)).collect();
    CnfFormula::new(n, clauses).expect("random clauses are well formed")
}

/// A formula with a planted assignment satisfying exactly one literal per clause.
pub fn planted_formula<R: Rng>(rng: &mut R, n: usize, m: usize) -> (CnfFormula, Vec<bool>) {
    assert!(n >= 3 || m == 0, "clauses need three distinct variables");
    let assignment: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let clauses = (0..m)
        .map(|_| {
            let vars = sample_indices(rng, n, 3);
            let truthy = rng.gen_range(0..3);
            [0, 1, 2].map(|i| {
                let v = vars.index(i);
                // literal is true iff it is the chosen one
                Literal::new(v, assignment[v] != (i == truthy))
            })
        })
        .collect();
    (
        CnfFormula::new(n, clauses).expect("planted clauses are well formed"),
        assignment,
    )
}
