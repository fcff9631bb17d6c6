//! Compiler from 3CNF formulas to art-gallery localization instances.
//!
//! The constructed polygon is stitched from one junction per clause (four
//! star-shaped pentagons on a shared top line), one two-well pattern per
//! variable (with one spike per occurrence and per well), and a five-vertex
//! main chamber. All coordinates are exact rationals; every structural
//! property the hardness argument leans on (collinearities, alignments
//! through the chamber corners, kernel shapes, strip disjointness) is
//! enforced at construction time as a named check.

mod build;
mod gadgets;

pub use gadgets::{ClauseGadget, Gadgets, PentagonGadget, Spike, SpikeCase, VariableGadget};

use crate::formula::{Assignment, CnfFormula};
use crate::geometry::*;
use crate::trilateration::TowerSet;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("structural check failed: {0}")]
    Check(String),
    #[error("no workable coordinate scale found for this formula (last failure: {0})")]
    NoWorkableScale(String),
    #[error("assignment does not satisfy the formula (clause {0} is false)")]
    Unsatisfied(usize),
    #[error("assignment has wrong length")]
    BadAssignment,
    #[error("formula error: {0}")]
    Formula(String),
    #[error("geometry error: {0}")]
    Geometry(String),
}

/// The seven scale integers that parameterize the construction:
/// the shallow ledge depth, the chamber corner offsets, the pattern pitch
/// unit, the well depth, and the three chamber/junction heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSequence {
    pub k: [BigInt; 7],
}

impl KSequence {
    pub fn from_u64(v: [u64; 7]) -> Self {
        KSequence {
            k: v.map(BigInt::from),
        }
    }

    pub fn get(&self, i: usize) -> Rat {
        Rat::from_integer(self.k[i].clone())
    }

    /// Strictly increasing positive integers with k6 < 2*k5.
    pub fn is_valid(&self) -> bool {
        use num_traits::Zero;
        self.k[0] > BigInt::zero()
            && self.k.windows(2).all(|w| w[0] < w[1])
            && self.k[6] < &self.k[5] * BigInt::from(2)
    }
}

/// Default scale sequence. Assembly re-validates it against the instance and
/// escalates deterministically when the exact checks reject it.
pub fn choose_k_sequence(_m: usize) -> KSequence {
    KSequence::from_u64([1, 2, 4, 8, 16, 32, 48])
}

/// Candidate scale sequences tried in order by the assembler: the default
/// first, then a family whose upper tiers grow with the instance until the
/// exact feasibility checks pass.
pub fn k_candidates(m: usize, n: usize) -> Vec<KSequence> {
    let mut out = vec![choose_k_sequence(m)];
    let n = n as u64;
    for t in 3..40u32 {
        let base = 1u64 << t;
        let k3 = base;
        let k4 = 2 * (n - 1) * base;
        let k5 = (2 * n - 1) * base;
        let k6 = 2 * n * base;
        if k3 > 4 && k4 > k3 {
            out.push(KSequence::from_u64([1, 2, 4, k3, k4, k5, k6]));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorInfo {
    pub point: Point,
    /// Index in the polygon ring for anchors that are vertices; derived
    /// anchors carry `None`.
    pub vertex: Option<usize>,
}

/// Name -> location map for every gadget anchor of the construction,
/// including derived (non-vertex) anchors such as the pentagon `x` points,
/// the junction kernel corners and the spike line witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GadgetIndex {
    pub anchors: BTreeMap<String, AnchorInfo>,
}

impl GadgetIndex {
    pub fn point(&self, name: &str) -> Option<&Point> {
        self.anchors.get(name).map(|a| &a.point)
    }

    pub fn insert(&mut self, name: impl Into<String>, p: Point) {
        self.anchors.insert(
            name.into(),
            AnchorInfo {
                point: p,
                vertex: None, // vertex indices are filled in after ring assembly
            },
        );
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub polygon: SimplePolygon,
    pub index: GadgetIndex,
    pub params: KSequence,
    /// The tower budget K = 8m + 2n + 2 of the decision instance.
    pub tower_bound: usize,
    pub vertex_count: usize,
    pub n: usize,
    pub m: usize,
    pub gadgets: Gadgets,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub assignment: Assignment,
    pub towers: TowerSet,
}

/// Compile a formula into its gadget polygon. Deterministic: the first scale
/// sequence that passes every exact feasibility check is used.
pub fn assemble_polygon(phi: &CnfFormula) -> Result<ReductionOutput, BuildError> {
    let mut last_err = String::from("no candidates tried");
    for k in k_candidates(phi.m(), phi.n) {
        if !k.is_valid() {
            continue;
        }
        match build::build_with_scale(phi, &k) {
            Ok(out) => return Ok(out),
            Err(BuildError::Check(msg)) => {
                last_err = msg;
                continue;
            }
            Err(e) => return Err(e),
        }
    }
    Err(BuildError::NoWorkableScale(last_err))
}

/// Tower certificate for a satisfying assignment: two towers per literal
/// pentagon (truth position dictated by the assignment), two per variable
/// pattern (in the well matching the variable's value), and the two chamber
/// towers. Exactly 8m + 2n + 2 towers.
pub fn certificate_towers(
    out: &ReductionOutput,
    alpha: &Assignment,
) -> Result<Certificate, BuildError> {
    build::certificate_towers(out, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_k_sequence_matches_contract() {
        let k = choose_k_sequence(2);
        assert_eq!(
            k.k.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            ["1", "2", "4", "8", "16", "32", "48"]
        );
        assert!(k.is_valid());
    }

    #[test]
    fn candidates_are_valid_sequences() {
        for k in k_candidates(3, 9) {
            assert!(k.is_valid(), "invalid candidate {:?}", k);
        }
    }
}
