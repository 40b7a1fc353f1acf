//! Entanglement measures for two-qubit states.
//!
//! The crate computes the concurrence of a two-qubit density matrix two
//! ways and proves to itself that they agree:
//!
//! - the general spectral route through the spin-flip product
//!   `rho^{1/2} rho~ rho^{1/2}` ([`measures::spectral_concurrence`]),
//!   valid for any rank;
//! - a closed form for states with at most two nonzero eigenvalues,
//!   written entirely in terms of the eigenstate concurrences and the
//!   concurrences of their equal combinations
//!   ([`measures::closed_form_concurrence`]).
//!
//! Around those sit the state model ([`states`]), structural branch
//! classification with upper/lower bounds ([`measures::corollary_branch`]),
//! a brute-force decomposition search for the entanglement of formation
//! ([`oracle`]), randomized self-verification suites ([`verify`]), and
//! CSV curve generation ([`curves`]).
//!
//! Randomized batches take explicit 64-bit seeds and reproduce exactly;
//! with the `parallel` feature (default) they fan out across a rayon
//! pool without changing any result.

pub mod curves;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod oracle;
mod par;
pub mod seed;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{Mat4, Vec4, C64};
pub use measures::{
    closed_form_concurrence, pure_concurrence, spectral_concurrence, Branch, ConcurrenceReport,
    Method,
};
pub use states::{
    bell_mixture, bell_state, departure_diag, departure_orth, eigen_rank2, parse_state,
    random_pure, random_rank2, to_density, write_state, BellKind, DensityMatrix, PureState,
    Rank2Decomposition, StateData, DEFAULT_RANK_TOL,
};
