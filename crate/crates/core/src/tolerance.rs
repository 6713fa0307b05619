//! Numerical tolerances shared across the crate.
//!
//! | name            | value  | used for                                             |
//! |-----------------|--------|------------------------------------------------------|
//! | [`CONE`]        | 1e-9   | lightlike classification, relative to the control    |
//! | [`NORM`]        | 1e-9   | unit normalization of covectors, relative to \|h\|²  |
//! | [`BOUNDARY`]    | 1e-9   | attainable-set boundary comparisons, absolute        |
//! | [`PLAN`]        | 1e-6   | planner endpoint error                               |
//! | [`SHOOT`]       | 1e-8   | shooting endpoint error                              |
//! | [`DEVIATION`]   | 1e-7   | closed form vs RK4 deviation budget                  |

pub const CONE: f64 = 1e-9;
pub const NORM: f64 = 1e-9;
pub const BOUNDARY: f64 = 1e-9;
pub const PLAN: f64 = 1e-6;
pub const SHOOT: f64 = 1e-8;
pub const DEVIATION: f64 = 1e-7;
