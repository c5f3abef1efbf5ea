//! Numerics for the Gegenbauer-solvable non-Hermitian chain.
//!
//! The chain Hamiltonian `H⁽ᴺ⁾(a)` is a real tridiagonal matrix with zero
//! diagonal built from the Gegenbauer recurrence coefficients. It is not
//! symmetric, but it is self-adjoint under any positive definite metric `Θ`
//! solving the Dieudonné equation `Hᵀ·Θ = Θ·H`.
//!
//! With the couplings `c_j = 1/(2a+2j)` used here the spectrum agrees with
//! the zeros of `G(N, a, ·)` only for `N <= 2`; the chain whose eigenvectors
//! are exactly `G(k, a, E_n)` is [`chain::build_recurrence_hamiltonian`].
//!
//! - [`gegenbauer`]: polynomial recurrence, zeros, eigenvectors.
//! - [`chain`]: `H`, the diagonal similarity `Ω₀` and the symmetric partner `𝔥₀`.
//! - [`metrics`]: closed-form banded pseudometrics `Θ₀`, `P₁`, `P₂`, the
//!   longest-range ones at `N = 4, 8`, and their combinations.
//! - [`dieudonne`]: residuals, a generic banded nullspace solver and a
//!   spectral construction of solutions.
//! - [`positivity`]: eigenvalue curves and positivity boundaries of
//!   `Θ₀ + g·P₁`.
//! - [`numerics`]: the dense linear algebra underneath.

pub mod chain;
pub mod dieudonne;
pub mod error;
pub mod gegenbauer;
pub mod metrics;
pub mod numerics;
pub mod positivity;

pub use chain::{
    build_hamiltonian, build_hermitian_partner, build_omega0, build_recurrence_hamiltonian,
    ChainHamiltonian, HermitianPartner,
};
pub use error::{Error, Result};
pub use gegenbauer::{gegenbauer_eval, gegenbauer_zeros, GegenbauerParam, SpectralData};
pub use metrics::{assemble_metric, MetricCombination, Pseudometric};
pub use numerics::{Inertia, SymmetricMatrix};
pub use positivity::PositivityRecord;
