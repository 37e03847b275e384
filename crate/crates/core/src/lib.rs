//! A finite-model workbench for two-sorted distributive lattices with fusion
//! and implication: validation of the algebraic and relational structures,
//! the duality between them, and the closed-set description of congruences,
//! simplicity and subdirect irreducibility.
//!
//! Everything is exhaustive and exact: elements are dense integer indices,
//! subsets are bit vectors, and every theorem-shaped claim is tested by
//! brute-force enumeration at desk scale.

pub mod checks;
pub mod congruence;
pub mod doc;
pub mod fixtures;
pub mod frame;
pub mod gen;
pub mod lattice;
pub mod module;
pub mod morphism;
pub mod partition;
pub mod poset;
pub mod subset;

/// Size guards for the exponential enumerations. The defaults keep every
/// suite interactive; raise them per run when more is wanted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Largest carrier a product, power or increasing-set construction may
    /// produce.
    pub lattice_max: usize,
    /// Largest combined point count `|X| + |Y|` for closed-pair and spectral
    /// congruence enumeration (2^points candidates).
    pub closed_enum_points: usize,
    /// Largest A sort for the partition-based congruence oracle.
    pub oracle_a_max: usize,
    /// Largest B sort for the partition-based congruence oracle.
    pub oracle_b_max: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            lattice_max: module::LATTICE_BUDGET_DEFAULT,
            closed_enum_points: 14,
            oracle_a_max: 6,
            oracle_b_max: 5,
        }
    }
}

impl Budget {
    /// Relax every guard to at least `n`.
    pub fn with_override(n: usize) -> Self {
        let d = Budget::default();
        Budget {
            lattice_max: d.lattice_max.max(n),
            closed_enum_points: d.closed_enum_points.max(n),
            oracle_a_max: d.oracle_a_max.max(n),
            oracle_b_max: d.oracle_b_max.max(n),
        }
    }
}
