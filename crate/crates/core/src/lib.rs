//! Optimal quantum purity amplification (QPA).
//!
//! The crate is layered bottom-up:
//!
//! * [`tableaux`]: Young diagrams, standard tableaux, Gel'fand–Tsetlin patterns.
//! * [`schur_poly`]: Schur polynomials, closed-form branch fidelities, asymptotics.
//! * [`symmetric_group`]: permutations, the group algebra of S_n, Young's orthogonal
//!   form and the tensor-space projectors / transition operators.
//! * [`linalg`]: register-shaped dense operators and the numeric kernels.
//! * [`qpa_channel`]: the optimal channel, its Choi matrix, the Haar cost matrix and
//!   the LP-vertex optimality oracle.
//! * [`gqpe`]: the phase-estimation circuit for the optimal channel.
//! * [`swapnet`]: the three-copy SWAP-test network, exact and noisy.
//! * [`trotter_bench`]: the Trotterized Ising benchmark.
//! * [`property_suite`]: the invariant catalogue behind `qpa verify`.

pub mod error;
pub mod gqpe;
pub mod limits;
pub mod linalg;
pub mod property_suite;
pub mod qpa_channel;
pub mod schur_poly;
pub mod swapnet;
pub mod symmetric_group;
pub mod tableaux;
pub mod trotter_bench;

pub use error::{QpaError, Result};
pub use limits::Limits;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
