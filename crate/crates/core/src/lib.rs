//! Combinatorics of v-decomposition numbers in the level-one Fock space:
//! partitions and β-sets, sign sequences and their pairings, latticed
//! paths, the `f_r` action with a canonical-basis oracle, the closed
//! formula for same-residue moves, and a constructive norm-preserving
//! bijection.
#![no_std]

extern crate alloc;

pub mod bijection;
pub mod closedform;
pub mod error;
pub mod fock;
pub mod latticepath;
pub mod laurent;
pub mod partition;
pub mod signseq;

pub use error::{Error, Result};
pub use laurent::{quantum_factorial, quantum_integer, LaurentPolynomial};
pub use partition::{
    beta_set, boundary_nodes, class_compare, dominates, jantzen_successors, partitions_of,
    s_profile, BetaSet, Node, Partition, ResidueProfile,
};
pub use signseq::{
    bijective, match_pairs, onto, paired_plus, preceq, unpaired_plus, valley_set, Matching,
    PosSet, Sign, SignSequence,
};
pub use latticepath::{
    enumerate_latticed, enumerate_wellnested, LatticedPath, RenderFormat, Step,
    WellNestedCollection,
};
pub use fock::{
    apply_f, apply_f_divided, canonical_basis, ladder_monomial, oracle_coefficient,
    CanonicalBasis, FockVector, LadderMonomial,
};
pub use closedform::{
    branching_coefficient, consistency_pair, consistency_sums, detect_move, sign_sequence_of,
    v_decomposition, MoveSpec,
};
pub use bijection::{
    bijection_map, enumerate_l, enumerate_r, norm_multisets, verify_norm_multisets, BijectionError,
    BijectionMap, FailureKind, LElement, RElement,
};
