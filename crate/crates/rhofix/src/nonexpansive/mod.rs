//! ρ-nonexpansive machinery: segment equations, approximating fixed
//! points, Schauder-type extraction, and the λ-scheme.

mod prop31;
mod schauder;
mod schedule;
mod segment;

pub use prop31::{proposition31_solve, CauchyRow, LambdaRow, Prop31Report, DEFAULT_SUP_CAP};
pub use schauder::schauder_fixed_point;
pub use schedule::{Schedule, ScheduleRule};
pub use segment::{
    approximating_sequence, solve_segment, ApproxFixedPointTrace, ApproxRow, INNER_TOL_FACTOR,
};
