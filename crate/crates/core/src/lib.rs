//! Sub-Riemannian geometry of SL(2) with the left-invariant distribution
//! spanned by `p1`, `p2` and the SO(2)-invariant metric in which they are
//! orthonormal.
//!
//! Modules, bottom-up:
//! - [`algebra`]: sl(2) coordinates, brackets, exponential and the group type.
//! - [`geodesic`]: the forward geodesic map.
//! - [`cut_locus`]: cut times, cut locus membership, conjugate times.
//! - [`log_map`]: minimizing geodesics to a target and the distance.
//! - [`oracle`]: slow independent cross-checks.
//! - [`verify`]: self-check suites over random or fixed inputs.

pub mod algebra;
pub mod cut_locus;
pub mod error;
pub mod geodesic;
pub mod log_map;
pub mod oracle;
pub mod roots;
pub mod verify;

pub use algebra::{lie_bracket, mat_exp, m_invariant, AlgebraVector, GroupElement};
pub use cut_locus::{
    conjugate_times, cut_point, cut_time, is_in_cut_locus, CutLocusWitness, CutRegime,
    CutTimeResult,
};
pub use error::{Result, Sl2Error};
pub use geodesic::{geodesic_point, mn_coeffs, GeodesicParams};
pub use log_map::{sr_distance, sr_log, LogResult, Multiplicity};
