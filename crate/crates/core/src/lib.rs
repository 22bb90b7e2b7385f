//! Floquet-state thermodynamics of a spin s driven by a circularly polarized
//! field while coupled to a thermal oscillator bath.
//!
//! The drive is `H(t) = ω₀ S_z + F (S_x cos ωt + S_y sin ωt)` and the bath
//! couples through `V = γ S_x` with constant spectral density `J₀`. Everything
//! downstream of that Hamiltonian is analytic: the Floquet decomposition
//! ([`floquet`]), the golden-rule transition rates between Floquet states
//! ([`bath_rates`]), the geometric quasistationary distribution and its
//! quasitemperature ([`steadystate`]), the quasithermal magnetization and the
//! dissipation rate ([`observables`]), and the classical damped-spin analogue
//! ([`classical_ll`]). The [`oracles`] module cross-checks each closed form
//! against an independent brute-force route (monodromy integration, dense
//! null-space solves, numerical Fourier analysis, finite differences).
//!
//! Units: ħ = k_B = 1, all frequencies are angular, rates are dimensionless in
//! units of Γ₀ = 2πγ²J₀, and dissipation in units of ω₀Γ₀.

pub mod bath_rates;
pub mod classical_ll;
pub mod floquet;
pub mod linalg;
pub mod observables;
pub mod oracles;
pub mod spin_algebra;
pub mod steadystate;

mod ode;

pub use bath_rates::{BathParams, RateMatrix};
pub use floquet::{DriveParams, FloquetDecomposition};
pub use linalg::{CMat, CVec, RMat};
pub use spin_algebra::{SpinOperators, SpinQuantumNumber};
pub use steadystate::{QuasiDistribution, Regime};
