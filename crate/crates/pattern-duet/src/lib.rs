//! Turing-Turing bifurcation analysis for two-component 1D reaction-diffusion
//! systems on `(0, l*pi)` with Neumann boundary conditions.
//!
//! The crate locates double-zero (Turing-Turing) bifurcation points where two
//! spatial cosine modes become critical simultaneously, computes the
//! third-order normal form on the center manifold for all three spatial
//! resonance cases (generic, 1:2, 1:3), analyzes the resulting planar ODE
//! (equilibria, stability, unfolding class, bifurcation lines, parameter
//! region maps), and cross-checks the predicted multistable patterns by
//! direct stiff PDE simulation.
//!
//! Pipeline, bottom to top:
//!
//! * [`kinetics`] - reaction field, equilibria, and the derivative tensors
//!   (Jacobian, symmetric bilinear `Q`, trilinear `C`, parameter derivatives)
//!   of the built-in Crowley-Martin predator-prey model or a user-supplied
//!   reaction field.
//! * [`linear_analysis`] - dispersion relation, Turing curves, Turing-Turing
//!   point location, critical eigenvectors, spectral side conditions.
//! * [`normal_form`] - third-order normal form coefficients, dispatching on
//!   spatial resonance, including the singular bordered solves of the
//!   resonant center-manifold blocks.
//! * [`nf_dynamics`] - equilibria, stability, unfolding classification,
//!   bifurcation lines, and region maps of the truncated planar field.
//! * [`pde_sim`] - IMEX integration of the full system, cosine-modal
//!   signatures, attractor classification, and multistability sweeps.
//! * [`cli`] - batch command implementations and file artifacts behind the
//!   `pattern-duet` binary.
//!
//! Every operation is a pure function of its inputs; constructed values are
//! immutable and safe to share across threads.

pub mod cli;
pub mod error;
pub mod kinetics;
pub mod linear_analysis;
pub mod nf_dynamics;
pub mod normal_form;
pub mod pde_sim;

pub use error::Error;
pub use kinetics::{Equilibrium, KineticsModel, Linearization, ModelParams};
pub use linear_analysis::{CriticalData, DispersionPoint, TTPoint};
pub use nf_dynamics::{NfEquilibrium, RegionMap, TruncatedNf, UnfoldingClass};
pub use normal_form::{NfCoefficients, ResonanceCase};
pub use pde_sim::{AttractorLabel, FieldState, Grid1D, ModalSignature, SimConfig};

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
