//! Hazard-aware two-level logic tooling with a QCA back end.
//!
//! The pipeline: parse a sum-of-products expression, detect and eliminate
//! static-1 hazards by adding consensus implicants, demonstrate the glitch on
//! a delay-annotated gate netlist, compile the cover into a majority-gate
//! QCA layout, simulate the layout with a four-phase-clocked bistable
//! engine, and report inter-cell kink energies.
//!
//! The `qcahaz` binary exposes each stage as a subcommand; see the README
//! for usage.

pub mod energy;
pub mod hazard;
pub mod layout;
pub mod netlist;
pub mod sop;
pub mod synth;

pub use hazard::{
    consensus, detect_static1_hazards, eliminate_hazards, prime_implicants, Hazard, HazardReport,
};
pub use sop::{majority, parse_expression, Assignment, Cover, ProductTerm, Variable};
