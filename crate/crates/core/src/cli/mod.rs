//! Scenario-driven front end: parse a scenario, run the requested routes and
//! checks, and render the report as text, JSON or CSV.

pub mod emit;
pub mod run;
pub mod scenario;

pub use emit::{emit, render, to_csv, to_json, to_text, Format};
pub use run::{run, Delta, LedgerEntry, ModeResult, Outcome, RunReport, Status};
pub use scenario::{parse_scenario, RunMode, Scenario, ScenarioError};

/// Exit codes of the command-line tool.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const CONVERGENCE: i32 = 3;
    pub const CHECK_FAILED: i32 = 4;
    pub const IO: i32 = 5;
}
