pub mod billiard;
pub mod classify;
pub mod cli;
pub mod language;
pub mod report;
pub mod suites;
pub mod itm;
pub mod scalar;
pub mod sections;

pub use billiard::{DirectionSlope, PhasePoint, Quadrant, Table};
pub use itm::{DoubleRotation, IntervalUnion, TypeStatus};
pub use scalar::{Rational, Scalar};
