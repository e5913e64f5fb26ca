use std::collections::{BTreeMap, VecDeque};

use crate::amplitude::Amp;
use crate::model::{Action, Alphabet, Kind, MachineSpec, Memory, TapeSymbol, Transition};

/// One target produced by an abstract transition function.
pub(crate) struct Emit<S> {
    pub amp: Amp,
    pub target: S,
    pub action: Action,
    /// Register symbol; ignored for classical machines.
    pub register: String,
    /// Counter status the row is keyed by, for status-reading machines.
    pub status: Option<Vec<bool>>,
}

impl<S> Emit<S> {
    pub fn new(amp: Amp, target: S, action: Action, register: impl Into<String>) -> Emit<S> {
        Emit { amp, target, action, register: register.into(), status: None }
    }

    pub fn det(target: S, action: Action, register: impl Into<String>) -> Emit<S> {
        Emit::new(Amp::one(), target, action, register)
    }
}

/// Build a machine over abstract states by breadth-first exploration from
/// `start`. Only the start state reads `CENT`; states first reached on `END`
/// get no rows of their own. `register0` is put first in the register
/// alphabet so it is the initial symbol.
#[allow(clippy::too_many_arguments)]
pub(crate) fn explore<S: Ord + Clone>(
    kind: Kind,
    alphabet: Alphabet,
    memory: Memory,
    register0: &str,
    start: S,
    name: impl Fn(&S) -> String,
    accepting: impl Fn(&S) -> bool,
    delta: impl Fn(&S, TapeSymbol) -> Vec<Emit<S>>,
) -> MachineSpec {
    let nin = alphabet.input.len();
    let mut ids: BTreeMap<S, usize> = BTreeMap::new();
    let mut states: Vec<S> = Vec::new();
    let mut expanded: Vec<bool> = Vec::new();
    let mut registers: Vec<String> = Vec::new();
    let mut register_ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut transitions = Vec::new();
    let quantum = kind.is_quantum();

    let intern = |s: &S, ids: &mut BTreeMap<S, usize>, states: &mut Vec<S>, expanded: &mut Vec<bool>| {
        if let Some(&i) = ids.get(s) {
            return i;
        }
        ids.insert(s.clone(), states.len());
        states.push(s.clone());
        expanded.push(false);
        states.len() - 1
    };
    let mut reg = |r: &str| {
        if let Some(&i) = register_ids.get(r) {
            return i;
        }
        register_ids.insert(r.to_string(), registers.len());
        registers.push(r.to_string());
        registers.len() - 1
    };
    if quantum {
        reg(register0);
    }

    let start_id = intern(&start, &mut ids, &mut states, &mut expanded);
    let mut queue = VecDeque::from([start_id]);
    while let Some(q) = queue.pop_front() {
        if expanded[q] {
            continue;
        }
        expanded[q] = true;
        let mut symbols: Vec<TapeSymbol> = Vec::new();
        if q == start_id {
            symbols.push(TapeSymbol::Cent);
        }
        symbols.extend((0..nin).map(TapeSymbol::Input));
        symbols.push(TapeSymbol::End);
        for sym in symbols {
            let source = states[q].clone();
            for e in delta(&source, sym) {
                let t = intern(&e.target, &mut ids, &mut states, &mut expanded);
                if sym != TapeSymbol::End && !expanded[t] {
                    queue.push_back(t);
                }
                transitions.push(Transition {
                    source: q,
                    symbol: sym,
                    status: e.status,
                    amp: e.amp,
                    target: t,
                    action: e.action,
                    register: if quantum { Some(reg(&e.register)) } else { None },
                });
            }
        }
    }

    let accepting_ids = (0..states.len()).filter(|&i| accepting(&states[i])).collect();
    MachineSpec {
        kind,
        alphabet,
        states: states.iter().map(&name).collect(),
        start: start_id,
        accepting: accepting_ids,
        memory,
        register: registers,
        transitions,
    }
}
