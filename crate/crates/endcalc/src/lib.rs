//! Surface descriptions, report rendering and randomized flux checks on top
//! of `endcalc-core`.

pub mod corpus;
pub mod dsl;
pub mod literal;
pub mod report;
pub mod suites;
