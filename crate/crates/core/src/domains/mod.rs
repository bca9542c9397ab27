//! Problem sources: ground blocksworld, the D¹S¹ chain domain, small
//! hand-built fixtures, and the text format problems are stored in.

pub mod blocksworld;
pub mod d1s1;
pub mod fixtures;
pub mod problem_file;
pub mod suite;

pub use blocksworld::{BlocksworldSpec, Config};
pub use d1s1::{d1s1_problem, D1s1Options};
pub use fixtures::{fixture, FIXTURE_NAMES};
pub use problem_file::{parse_problem, serialize_problem, ProblemFileError};
