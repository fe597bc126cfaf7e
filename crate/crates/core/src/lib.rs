//! Bound-state energies and radial wavefunctions of neutral atoms in the
//! static screened Coulomb (Yukawa) potential
//!
//!   V(r) = −(A/r) exp(−δr)
//!
//! in Hartree atomic units (ħ = m = e = 1, A = Z).
//!
//! The crate is organised around three independent routes to the same
//! numbers:
//!
//! - [`spectra`]: closed-form third-order perturbative energies around the
//!   exactly solvable Coulomb problem.
//! - [`wavefunction`]: Coulomb radial functions, the first- and second-order
//!   superpotentials, the moderating function and a quadrature recomputation
//!   of each energy correction.
//! - [`oracle`]: a direct Numerov shooting solver for the un-expanded
//!   potential, used as ground truth.
//!
//! [`refdata`] carries the published K- and L-shell binding energies used for
//! table regeneration and comparison.

pub mod laguerre;
pub mod oracle;
pub mod quadrature;
pub mod refdata;
pub mod spectra;
pub mod wavefunction;

pub use oracle::{breakdown_report, solve_bound_state, BreakdownReport, OracleError, OracleResult, RadialGrid};
pub use refdata::{compare, ComparisonReport, Dataset, RefDataError, ReferenceRow, Shell, Source};
pub use spectra::{
    coulomb_energy, energy_breakdown, first_order_shift, screening_delta, second_order_shift, third_order_shift,
    to_kev, total_energy, AtomicSystem, EnergyBreakdown, Order, QuantumState, ScreeningLaw, ScreeningModel,
    SpectraError, UnitSystem,
};
pub use wavefunction::{
    correction_via_quadrature, coulomb_chi, full_wavefunction, moderating_u, rayleigh_quotient, superpotential_w1,
    superpotential_w2, CoulombRadial, FullWavefunction, SuperpotentialPoly, WavefunctionError,
};
