//! Shared plumbing for the `freeline` binary: strict JSON input formats,
//! deterministic report construction, and the acceptance suite that backs
//! `verify-paper`. The library exists so the integration tests can drive
//! the exact same code paths as the binary.

pub mod input;
pub mod report;
pub mod suite;
