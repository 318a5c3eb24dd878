//! Library side of the `ziptree` command: script tracing, invariant suites
//! and experiment output.

pub mod report;
pub mod script;
pub mod verify;

/// Process exit statuses.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const INVARIANT_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
}
