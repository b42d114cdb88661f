//! Core library behind the `mfib` command line tool.
//!
//! The crate models monodromy factorizations of circle-singularity
//! fibrations on non-orientable 4-manifolds and the homology of their
//! orientation double covers:
//!
//! * [`surface`] — fiber surfaces, mod-2 and symplectic intersection data;
//! * [`mcg`] — mapping class group words and their mod-2 homology action;
//! * [`fibration`] — fibration models, handle counts, Euler characteristics;
//! * [`cover`] — chain-level Kirby calculus: relation matrices, Smith normal
//!   form, Betti reports;
//! * [`local`] — the numerical laboratory for the explicit local models
//!   (critical sets, branched-cover fibers, monodromy transport, flows,
//!   fold/cusp classification, plotting).

pub mod cover;
pub mod error;
pub mod fibration;
pub mod local;
pub mod mcg;
pub mod report;
pub mod surface;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
