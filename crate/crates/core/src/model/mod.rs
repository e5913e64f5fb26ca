//! Machine descriptions shared by every other module.
//!
//! A [`MachineSpec`] covers classical (deterministic, probabilistic,
//! nondeterministic) and quantum realtime automata. Memory is one of: nothing,
//! `k` counters (optionally blind, with an increment bound and a reversal
//! bound), an increment-only counter, a push-only stack or a two-way
//! write-only tape. States, symbols and register symbols are referred to by
//! index; the names are kept for display and serialization.

mod builder;
mod qft;
mod validate;
mod wellformed;

pub use builder::MachineBuilder;
pub use qft::{fourier_amplitudes, QftGadget};
pub(crate) use validate::row_location;
pub use validate::{validate_structure, Violation};
pub use wellformed::{check_local_wellformedness, BlockDeviation, WellformednessReport};

use std::fmt;

use crate::amplitude::Amp;
use crate::error::SimError;

pub type StateId = usize;

/// Default tolerance for quantum well-formedness checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Tokens that can never be input, tape or register symbols.
pub const RESERVED_TOKENS: &[&str] = &["CENT", "END", "EPS", "BLANK", "#", "-", "L", "S", "R", "Z", "NZ"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeSymbol {
    /// Left end-marker.
    Cent,
    /// Right end-marker.
    End,
    Input(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Deterministic,
    Probabilistic,
    /// A probabilistic table read with cutpoint 0.
    Nondeterministic,
    Quantum,
}

impl Kind {
    pub fn is_quantum(self) -> bool {
        self == Kind::Quantum
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Deterministic => "deterministic",
            Kind::Probabilistic => "probabilistic",
            Kind::Nondeterministic => "nondeterministic",
            Kind::Quantum => "quantum",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Alphabet {
    /// Input symbols, without end-markers.
    pub input: Vec<String>,
    /// Tape symbols other than the blank and the empty write.
    pub tape: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Memory {
    None,
    Counters {
        count: usize,
        blind: bool,
        /// Largest absolute increment per step (1 for ordinary counters).
        inc: u32,
        reversals: Option<u32>,
    },
    /// Increment-only counter with increments in `0..=inc`.
    Ioc { inc: u32 },
    /// Push-only stack.
    Pos,
    /// Two-way write-only tape.
    Wom,
}

impl Memory {
    pub fn counters(count: usize, blind: bool) -> Memory {
        Memory::Counters { count, blind, inc: 1, reversals: None }
    }

    pub fn counter_count(&self) -> usize {
        match self {
            Memory::Counters { count, .. } => *count,
            _ => 0,
        }
    }

    pub fn is_blind(&self) -> bool {
        matches!(self, Memory::Counters { blind: true, .. })
    }

    /// Rows are keyed by a counter status vector.
    pub fn reads_status(&self) -> bool {
        matches!(self, Memory::Counters { blind: false, .. })
    }

    pub fn uses_tape(&self) -> bool {
        matches!(self, Memory::Pos | Memory::Wom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Stay,
    Right,
}

impl Dir {
    pub fn offset(self) -> i64 {
        match self {
            Dir::Left => -1,
            Dir::Stay => 0,
            Dir::Right => 1,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Dir::Left => "L",
            Dir::Stay => "S",
            Dir::Right => "R",
        }
    }

    pub fn reversed(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Stay => Dir::Stay,
            Dir::Right => Dir::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeWrite {
    /// The empty write: the cell keeps its content.
    Eps,
    /// Write the blank symbol (two-way tapes only).
    Blank,
    Sym(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    None,
    Counters(Vec<i64>),
    Ioc(u32),
    Pos(TapeWrite),
    Wom(TapeWrite, Dir),
}

impl Action {
    pub fn counter(c: i64) -> Action {
        Action::Counters(vec![c])
    }
}

/// One weighted target of a transition row. For classical machines the
/// amplitude is an exact rational probability and `register` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub symbol: TapeSymbol,
    /// Per-counter nonzero flags; present exactly when the memory reads status.
    pub status: Option<Vec<bool>>,
    pub amp: Amp,
    pub target: StateId,
    pub action: Action,
    pub register: Option<usize>,
}

impl Transition {
    pub fn row_key(&self) -> RowKey {
        (self.source, self.symbol, self.status.clone())
    }
}

pub type RowKey = (StateId, TapeSymbol, Option<Vec<bool>>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineSpec {
    pub kind: Kind,
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    pub start: StateId,
    /// Sorted, without duplicates.
    pub accepting: Vec<StateId>,
    pub memory: Memory,
    /// Register alphabet; index 0 is the initial symbol. Empty for classical machines.
    pub register: Vec<String>,
    pub transitions: Vec<Transition>,
}

impl MachineSpec {
    pub fn is_quantum(&self) -> bool {
        self.kind.is_quantum()
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.binary_search(&q).is_ok()
    }

    /// Blind counter machines accept only in an accepting state with every counter at zero.
    pub fn requires_zero_counters(&self) -> bool {
        self.memory.is_blind()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        self.states.get(q).map(String::as_str).unwrap_or("?")
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_name(&self, s: TapeSymbol) -> &str {
        match s {
            TapeSymbol::Cent => "CENT",
            TapeSymbol::End => "END",
            TapeSymbol::Input(i) => self.alphabet.input.get(i).map(String::as_str).unwrap_or("?"),
        }
    }

    pub fn input_symbol(&self, token: &str) -> Option<TapeSymbol> {
        self.alphabet.input.iter().position(|s| s == token).map(TapeSymbol::Input)
    }

    pub fn tape_symbol_name(&self, w: TapeWrite) -> &str {
        match w {
            TapeWrite::Eps => "EPS",
            TapeWrite::Blank => "BLANK",
            TapeWrite::Sym(i) => self.alphabet.tape.get(i).map(String::as_str).unwrap_or("?"),
        }
    }

    /// Split an input string into alphabet symbols by longest match.
    /// Whitespace between symbols is ignored.
    pub fn tokenize(&self, input: &str) -> Result<Vec<usize>, SimError> {
        tokenize(&self.alphabet.input, input)
    }

    /// The tape `CENT w END` for an already tokenized input.
    pub fn tape(word: &[usize]) -> Vec<TapeSymbol> {
        let mut tape = Vec::with_capacity(word.len() + 2);
        tape.push(TapeSymbol::Cent);
        tape.extend(word.iter().map(|&i| TapeSymbol::Input(i)));
        tape.push(TapeSymbol::End);
        tape
    }

    pub fn word_string(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.alphabet.input[i].as_str()).collect()
    }

    pub fn accepting_names(&self) -> impl Iterator<Item = &str> {
        self.accepting.iter().map(|&q| self.state_name(q))
    }
}

/// Longest-match tokenization of `input` over `alphabet`.
pub fn tokenize(alphabet: &[String], input: &str) -> Result<Vec<usize>, SimError> {
    let mut out = Vec::new();
    let mut rest = input.trim_start();
    while !rest.is_empty() {
        let best = alphabet
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty() && rest.starts_with(s.as_str()))
            .max_by_key(|(_, s)| s.len());
        match best {
            Some((i, s)) => {
                out.push(i);
                rest = rest[s.len()..].trim_start();
            }
            None => {
                let bad: String = rest.chars().take(1).collect();
                return Err(SimError::UnknownSymbol(bad));
            }
        }
    }
    Ok(out)
}

/// Every word over `k` symbols of length at most `max_len`, shortest first
/// and lexicographic by symbol index within a length.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| (0..k).map(move |s| [w.as_slice(), &[s]].concat()))
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSymbol::Cent => f.write_str("CENT"),
            TapeSymbol::End => f.write_str("END"),
            TapeSymbol::Input(i) => write!(f, "#{i}"),
        }
    }
}

/// Render a status vector as it appears in machine files (`Z`, `NZ`, `Z,NZ`, ...).
pub fn status_token(status: &[bool]) -> String {
    status.iter().map(|&nz| if nz { "NZ" } else { "Z" }).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_match_tokenization() {
        let alphabet: Vec<String> = ["a", "a1", "b1", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(tokenize(&alphabet, "a1b1ab").unwrap(), vec![1, 2, 0, 3]);
        assert_eq!(tokenize(&alphabet, "a1 b").unwrap(), vec![1, 3]);
        assert!(tokenize(&alphabet, "ax").is_err());
        assert!(tokenize(&alphabet, "").unwrap().is_empty());
    }

    #[test]
    fn word_order() {
        let w = all_words(2, 2);
        assert_eq!(w, vec![vec![], vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_words(3, 9).len(), (3usize.pow(10) - 1) / 2);
        assert_eq!(all_words(0, 3), vec![Vec::<usize>::new()]);
    }
}
