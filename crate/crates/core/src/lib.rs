//! Realtime quantum finite automata with write-only memory, the classical
//! counter automata they subsume, and the transformations between them.

pub mod amplitude;
pub mod construct;
pub mod error;
pub mod format;
pub mod model;
pub mod random;
pub mod sim;
pub mod zoo;

pub use amplitude::{parse_amplitude, Amp, Rational};
pub use format::{parse_machine, serialize_machine};
pub use error::{ConstructError, Error, ModelError, ParseError, Result, SimError};
pub use model::{
    all_words, check_local_wellformedness, validate_structure, Action, Alphabet, Dir, Kind, MachineBuilder,
    MachineSpec, Memory, QftGadget, StateId, TapeSymbol, TapeWrite, Transition,
};
