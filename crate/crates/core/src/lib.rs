//! SLOCC tools for n-qubit pure states: SL-invariant polynomials, operator scaling to
//! critical form, local stabilizer detection, and optimal local conversion protocols.
//!
//! Amplitudes are indexed big-endian: qubit 0 is the most significant bit of the basis index.

pub mod chain;
pub mod convert;
pub mod critical;
pub mod error;
pub mod genericity;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod slip;
pub mod stabilizer;
pub mod state;

pub use chain::{GroupTag, LocalOperatorChain};
pub use convert::{build_protocol, deterministic_convertible, find_connector, pmax, simulate_protocol, Optimality};
pub use critical::{criticality_report, is_critical, scale_to_critical, ScalingOptions, ScalingStatus};
pub use error::{Error, Result};
pub use slip::{f2, f4, Slip, SlipValue};
pub use stabilizer::{gtilde_triviality_probe, lie_stabilizer_dim, SearchOptions, Verdict};
pub use state::PureState;
