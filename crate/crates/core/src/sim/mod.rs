//! Running machines: quantum ensembles with the register traced out each
//! step, exact classical distributions, and the recognition criteria.

mod classical;
mod config;
mod decide;
mod quantum;
mod table;

pub use classical::{run_classical, ClassicalResult, ClassicalSimulator};
pub use config::{Configuration, MemoryContent};
pub use decide::{decide, decide_exact, Decision, DecisionCriterion, Verdict, ONE_SIDED_TOLERANCE};
pub use quantum::{
    run, Branch, Ensemble, RunResult, Simulator, StepDiagnostics, AMPLITUDE_FLOOR, MERGE_TOLERANCE, PRUNE_THRESHOLD,
};
