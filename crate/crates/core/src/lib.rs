//! Extended Poincaré group: Lorentz algebra with the discrete set `Z`, orbit
//! classes, the massless doublet representation, its two-qubit equivalent and a
//! Monte Carlo model of the single-photon X⊗X interferometer.

pub mod checks;
pub mod lorentz;
pub mod massless;
pub mod orbit;
pub mod par;
pub mod photonics;
pub mod poincare;
pub mod qubit;
