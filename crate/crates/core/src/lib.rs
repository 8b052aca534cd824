//! Geometric multipartite entanglement for spin-½ fermions.
//!
//! `N` fermions on `2L` modes are mapped onto `2L` qubits through the
//! occupation-number basis. A partition of the modes turns the qubit space
//! into a multi-qudit space, and the entanglement of a pure state is the
//! Euclidean norm of its full-weight Bloch correlation tensor minus the value
//! taken by product states.
//!
//! Modules, bottom-up:
//!
//! * [`fock`]: occupation basis, particle-number sectors, ladder operators.
//! * [`operator`]: ladder-operator products and their sector matrices.
//! * [`sugen`]: SU(d) generators.
//! * [`partition`]: mode partitions, qudit regrouping, reduced states.
//! * [`measure`]: correlation tensors, the entanglement measure, entropy.
//! * [`models`]: Hubbard dimer and trimer.
//! * [`dynamics`]: perturbative evolution and locality checks.
//! * [`optimize`]: multi-start maximization over a sector.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod measure;
pub mod models;
pub mod operator;
pub mod optimize;
pub mod partition;
pub mod sugen;

pub use dynamics::{
    entanglement_derivative, exact_evolve, expansion_oracle_eg, expansion_oracle_es, first_order_evolve,
    perturbation_hamiltonian, test_state, PerturbationParams, TestStateParams,
};
pub use error::{Error, Result};
pub use fock::{enumerate_sector, apply_ladder, parity, LadderKind, LadderOp, OccupationState, SectorBasis, StateVector};
pub use measure::{
    correlation_tensor, geometric_entanglement, reconstruct_density, sep_norm, von_neumann,
    CorrelationTensor, MeasureResult, SectorNormPlan,
};
pub use models::{
    diagonalize, dimer_curves, dimer_ground_state_analytic, dimer_hamiltonian, total_spin_ops, trimer_hamiltonian,
    DimerParams, EigenSolution, TrimerParams,
};
pub use operator::{FermionOperator, HamiltonianMatrix, SectorMatrix};
pub use optimize::{maximize_entanglement, OptConfig, OptProblem, OptResult};
pub use partition::{group_state, reduced_density, DensityMatrix, GroupedState, Partition};
pub use sugen::{generators, GeneratorSet};
pub use num_complex::Complex64;
