//! 3CNF formulas and truth assignments.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable index {0} out of range 1..={1}")]
    VariableOutOfRange(usize, usize),
    #[error("clause {0} repeats variable u{1}")]
    RepeatedVariable(usize, usize),
    #[error("variable u{0} does not occur in any clause")]
    UnusedVariable(usize),
    #[error("formula must have at least one clause")]
    NoClauses,
    #[error("assignment has {0} bits but the formula has {1} variables")]
    AssignmentLength(usize, usize),
}

/// A literal: variable index (1-based) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }
}

/// A clause is a disjunction of exactly three literals over distinct
/// variables.
pub type Clause = [Lit; 3];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfFormula {
    pub n: usize,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        if clauses.is_empty() {
            return Err(FormulaError::NoClauses);
        }
        let mut used = vec![false; n + 1];
        for (ci, c) in clauses.iter().enumerate() {
            for l in c {
                if l.var == 0 || l.var > n {
                    return Err(FormulaError::VariableOutOfRange(l.var, n));
                }
                used[l.var] = true;
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                let dup = if c[0].var == c[1].var || c[0].var == c[2].var {
                    c[0].var
                } else {
                    c[1].var
                };
                return Err(FormulaError::RepeatedVariable(ci + 1, dup));
            }
        }
        for v in 1..=n {
            if !used[v] {
                return Err(FormulaError::UnusedVariable(v));
            }
        }
        Ok(CnfFormula { n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Occurrences of variable `var` as (clause index, slot, polarity),
    /// 0-based clause/slot indices.
    pub fn occurrences(&self, var: usize) -> Vec<(usize, usize, bool)> {
        let mut out = Vec::new();
        for (ci, c) in self.clauses.iter().enumerate() {
            for (qi, l) in c.iter().enumerate() {
                if l.var == var {
                    out.push((ci, qi, l.positive));
                }
            }
        }
        out
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|l| a.truth[l.var - 1] == l.positive)
        })
    }

    /// First unsatisfied clause under `a`, 1-based, if any.
    pub fn first_unsatisfied(&self, a: &Assignment) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| a.truth[l.var - 1] == l.positive))
            .map(|i| i + 1)
    }

    /// Exhaustively search for a satisfying assignment, in increasing order
    /// of the assignment bitstring read as u1..un. Desk scale only.
    pub fn solve(&self) -> Option<Assignment> {
        assert!(self.n <= 24, "exhaustive solve is desk-scale only");
        for bits in 0u64..(1u64 << self.n) {
            let truth: Vec<bool> = (0..self.n).map(|i| (bits >> i) & 1 == 1).collect();
            let a = Assignment { truth };
            if self.satisfied_by(&a) {
                return Some(a);
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub truth: Vec<bool>,
}

impl Assignment {
    pub fn new(truth: Vec<bool>) -> Self {
        Assignment { truth }
    }

    /// Parse a bitstring like "010": character i gives the value of u_{i+1}.
    pub fn from_bits(s: &str, n: usize) -> Result<Self, FormulaError> {
        if s.len() != n || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(FormulaError::AssignmentLength(s.len(), n));
        }
        Ok(Assignment {
            truth: s.bytes().map(|b| b == b'1').collect(),
        })
    }

    pub fn to_bits(&self) -> String {
        self.truth.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Random satisfiable 3CNF with every variable used: clauses are built
/// around a hidden assignment so at least one literal per clause is true.
pub fn random_satisfiable(rng: &mut impl Rng, m: usize, n: usize) -> (CnfFormula, Assignment) {
    assert!(n >= 3 && n <= 3 * m);
    let hidden: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    loop {
        let mut clauses = Vec::with_capacity(m);
        // round-robin coverage so every variable occurs
        let mut order: Vec<usize> = (1..=n).collect();
        for i in (1..order.len()).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut next = 0usize;
        for _ in 0..m {
            let mut vars = Vec::with_capacity(3);
            while vars.len() < 3 {
                let v = if next < n {
                    let v = order[next];
                    next += 1;
                    v
                } else {
                    rng.gen_range(1..=n)
                };
                if !vars.contains(&v) {
                    vars.push(v);
                } else if next >= n {
                    continue;
                }
            }
            // random polarities, then force one literal true under hidden
            let mut lits: Vec<Lit> = vars
                .iter()
                .map(|&v| Lit {
                    var: v,
                    positive: rng.gen(),
                })
                .collect();
            if !lits.iter().any(|l| hidden[l.var - 1] == l.positive) {
                let k = rng.gen_range(0..3);
                lits[k].positive = hidden[lits[k].var - 1];
            }
            clauses.push([lits[0], lits[1], lits[2]]);
        }
        if let Ok(f) = CnfFormula::new(n, clauses) {
            let a = Assignment::new(hidden.clone());
            debug_assert!(f.satisfied_by(&a));
            return (f, a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn formula_validation() {
        assert!(CnfFormula::new(3, vec![[Lit::pos(1), Lit::neg(2), Lit::neg(3)]]).is_ok());
        assert!(matches!(
            CnfFormula::new(1, vec![[Lit::pos(1), Lit::pos(1), Lit::neg(1)]]),
            Err(FormulaError::RepeatedVariable(1, 1))
        ));
        assert!(matches!(
            CnfFormula::new(4, vec![[Lit::pos(1), Lit::pos(2), Lit::pos(3)]]),
            Err(FormulaError::UnusedVariable(4))
        ));
    }

    #[test]
    fn satisfaction() {
        let f = CnfFormula::new(
            3,
            vec![
                [Lit::pos(1), Lit::neg(2), Lit::neg(3)],
                [Lit::pos(1), Lit::pos(2), Lit::neg(3)],
            ],
        )
        .unwrap();
        let a = Assignment::from_bits("010", 3).unwrap();
        assert!(f.satisfied_by(&a));
        let bad = Assignment::from_bits("011", 3).unwrap();
        assert!(!f.satisfied_by(&bad));
        assert_eq!(f.first_unsatisfied(&bad), Some(1));
    }

    #[test]
    fn exhaustive_solver_finds_assignment() {
        let f = CnfFormula::new(
            3,
            vec![
                [Lit::pos(1), Lit::neg(2), Lit::neg(3)],
                [Lit::pos(1), Lit::pos(2), Lit::neg(3)],
            ],
        )
        .unwrap();
        let a = f.solve().unwrap();
        assert!(f.satisfied_by(&a));
    }

    #[test]
    fn random_formulas_are_satisfiable_and_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = rng.gen_range(1..=5usize);
            let n = rng.gen_range(3..=(3 * m).min(9));
            let (f, a) = random_satisfiable(&mut rng, m, n);
            assert!(f.satisfied_by(&a));
            assert_eq!(f.m(), m);
        }
    }
}
