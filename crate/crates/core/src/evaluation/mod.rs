//! Sample quality: distribution agreement by K-S distance and structural
//! similarity by a shortest-path graph kernel.

pub mod fidelity;
pub mod kernel;
pub mod ks;
pub mod sweep;

pub use fidelity::{fidelity, FidelityConfig, FidelityScore, MetricProfile};
pub use kernel::{
    kernel_normalized, sp_graph_kernel, BaseKernel, KernelParams, KernelReference,
    PathTripleHistogram, DEFAULT_KERNEL_NODE_CAP,
};
pub use ks::ks_d;
pub use sweep::{p_sweep, SweepPoint, SweepResult};
