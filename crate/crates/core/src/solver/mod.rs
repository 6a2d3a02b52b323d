//! Linear programming: the program type, a reference two-phase simplex,
//! the min/max bounds driver and a plain-text dump format.

mod bounds;
mod format;
mod lp;
mod simplex;

pub use bounds::{forced_zero_columns, solve_bounds, solve_bounds_with, Bounds, BoundsStatus, ColumnClasses, Diagnostics};
pub use format::{parse_lp, write_lp, HEADER as LP_HEADER};
pub use lp::{LinearProgram, LpBackend, LpSolution, LpStatus, Sense};
pub use simplex::Simplex;
