//! Numerical laboratory for the explicit local models of circle
//! singularities: evaluation, critical sets, branched-cover fibers,
//! monodromy transport, level-set flows, attaching-circle tracing,
//! fold/cusp classification and plotting.

pub mod charts;
pub mod config;
pub mod critical;
pub mod curves;
pub mod fiber;
pub mod flow;
pub mod gamma;
pub mod germ;
pub mod models;
pub mod profile;
pub mod saji;
pub mod svg;
pub mod transport;

pub use charts::{Chart, LocalPoint};
pub use config::NumericConfig;
pub use flow::TracedCurve;
pub use models::{eval_local_model, ChartMap, LocalModel};
pub use profile::BumpProfile;
