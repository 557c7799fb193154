//! Exact simulation of the 45-degree billiard in a rectangle of perimeter one,
//! and mechanical verification of the gap structure its rebound points cut
//! out of the perimeter.
//!
//! The pipeline is: a [`LaunchSpec`] is ray-traced into an [`Orbit`]
//! ([`simulate`]), independently rebuilt by [`unfolding`], split into
//! [`Segment`]s and associated families ([`segments`]), summarized as a
//! [`WeightProfile`] ([`profile`]), checked claim by claim ([`verify`]) and
//! finally swept over many configurations ([`sweep`]).
//!
//! ```
//! use diagonal_billiard::{simulate, verify_all, Direction, LaunchSpec, Rational};
//!
//! let p: Rational = "3/10".parse().unwrap();
//! let s1: Rational = "1/20".parse().unwrap();
//! let spec = LaunchSpec::from_parts(p, s1, Direction::NorthEast).unwrap();
//! let orbit = simulate(&spec, 5).unwrap();
//! let report = verify_all(&orbit).unwrap();
//! assert!(report.overall);
//! ```

pub mod billiard;
pub mod perimeter;
pub mod profile;
pub mod rational;
pub mod segments;
pub mod sweep;
pub mod unfolding;
pub mod verify;
pub mod wire;

pub use billiard::{
    reduce_general_angle, simulate, step, trace, AngleReduction, Direction, LaunchSense, LaunchSpec, Orbit,
    ReboundPoint, SimError,
};
pub use perimeter::{
    ccw_arc_length, make_table, perimeter_to_side, side_to_perimeter, GeometryError, PerimeterCoord, Side, SidePoint,
    Table,
};
pub use profile::{weight_profile, Analysis, WeightProfile};
pub use rational::Rational;
pub use segments::{
    associated_family, associated_family_bruteforce, circular_order, elementary_segments, interior_points,
    is_elementary, short_segment, weight, AnalysisError, AnchorSet, AssociatedFamily, CircularOrder, Parity, Segment,
    Weight,
};
pub use sweep::{
    generate_configs, run_sweep, run_sweep_with, summarize, SweepConfig, SweepError, SweepItem, SweepMode, SweepRecord,
    SweepSummary,
};
pub use unfolding::{fold_time_to_point, rebound_times, simulate_unfolded};
pub use verify::{verify_all, verify_spec, ClaimId, ClaimResult, ClaimStatus, VerificationReport, VerifyError};
