// SPDX-License-Identifier: Apache-2.0

//! Redfield dynamics of a qubit in a thermal bath, extended to a qubit paired
//! with an inert ancilla.
//!
//! The single-qubit semigroup `gamma_t` is known in closed form. Although it
//! relaxes every state to the Gibbs state, it is not positive, and
//! `gamma_t (x) id` can raise the entanglement between the qubit and an
//! ancilla it never touches. This crate evaluates those effects: positivity
//! probes, Choi spectra, Wootters concurrence, and grid scans that classify
//! initial states.
//!
//! All routines are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`.
//!
//! ```
//! use redfield_core::{propagate_closed, witness_state, Bath};
//!
//! let p = Bath::new(1.0, 0.007, 0.01, 0.0065)?; // omega, a, b, d
//! let later = propagate_closed(&witness_state(&p), 0.05, &p);
//! assert!(later.min_eigenvalue() < 0.0);
//! # Ok::<(), redfield_core::Error>(())
//! ```

// `!(x > 0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod matrix;
pub mod pair;
pub mod scalar;
pub mod scanner;
pub mod single;
pub mod tolerances;
pub mod trajectory;

pub use bath::{
    coefficients_from_correlation, kms_beta, kms_residual, BathCoefficients, BathParameters, CorrelationFunction,
};
pub use eigen::{
    general_eigenvalues, general_eigenvalues_4x4, hermitian_eigen, hermitian_eigenvalues, HermitianEigen, Spectrum,
};
pub use entanglement::{
    concurrence_wootters, concurrence_xstate, concurrence_zero_t_closed, detect_entanglement_increase,
    small_time_slope, xstate_gap, Branch, ConcurrenceReport, IncreaseWitness,
};
pub use error::{Error, Result};
pub use matrix::{partial_trace_first, partial_trace_second, pauli, tensor_product, CMat, ComplexMat2, ComplexMat4};
pub use pair::{
    apply_extended, choi_matrix, family_state, family_state_zero_t, family_trajectory_zero_t, positivity_exact_scaled,
    positivity_weak_coupling, qubit_map_at, subdeterminants, ChoiProbe, PairState, QubitMap, XState,
};
pub use scalar::{Real, C};
pub use scanner::{classify_pair_state, scan_family, scan_single_bloch, Classification, ClassificationResult, NuGrid};
pub use single::{
    equilibrium_state, gibbs_state, is_admissible_single, propagate_closed, propagate_rk4, witness_det_derivative,
    witness_state, Admissibility, QubitState,
};
pub use tolerances::Tolerances;
pub use trajectory::TrajectoryRecord;

pub type Bath = BathParameters<f64>;
pub type Qubit = QubitState<f64>;
pub type Pair = PairState<f64>;
pub type XState64 = XState<f64>;
pub type Mat2 = ComplexMat2<f64>;
pub type Mat4 = ComplexMat4<f64>;
pub type Complex64 = C<f64>;
