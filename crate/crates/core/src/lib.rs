//! Time-dependent Casimir-Polder interaction between a two-level atom and a
//! perfectly conducting wall, for an atom that starts fully dressed, bare, or
//! partially dressed after an abrupt change of its transition frequency.
//!
//! The energies are built from closed forms in Si and Ci ([`kernels`]) and
//! checked against direct oscillatory quadrature ([`oracle`]).

pub mod dynamics;
pub mod error;
pub mod kernels;
pub mod oracle;
pub mod scan;
pub mod specfun;
pub mod validation;

pub use dynamics::{EnergyTriple, EvalPoint, Model, PhysicalParams, StateKind};
pub use error::{Error, Result};
pub use kernels::{apply_dm, i1_jet, i3_jet, DimensionlessArgs, MJet, DEFAULT_LIGHTCONE_EPS};
pub use oracle::{quad_bare_kernel, quad_i1, quad_i3, OracleResult, QuadratureConfig};
pub use scan::{analyze_trace, run_sweep, Column, GridSpec, SweepTable, TraceAnalysis};
pub use specfun::{ci, si, SpecFunValue};
