use std::collections::HashMap;

use crate::amplitude::Amp;

use super::{Action, Alphabet, Kind, MachineSpec, Memory, StateId, TapeSymbol, Transition};

/// Incremental construction of a [`MachineSpec`] by name.
///
/// States and register symbols are created on first use, in first-use order.
#[derive(Debug)]
pub struct MachineBuilder {
    spec: MachineSpec,
    state_ids: HashMap<String, StateId>,
    register_ids: HashMap<String, usize>,
}

impl MachineBuilder {
    pub fn new(kind: Kind, input: &[&str], memory: Memory) -> MachineBuilder {
        MachineBuilder::with_alphabet(
            kind,
            Alphabet { input: input.iter().map(|s| s.to_string()).collect(), tape: Vec::new() },
            memory,
        )
    }

    pub fn with_alphabet(kind: Kind, alphabet: Alphabet, memory: Memory) -> MachineBuilder {
        MachineBuilder {
            spec: MachineSpec {
                kind,
                alphabet,
                states: Vec::new(),
                start: 0,
                accepting: Vec::new(),
                memory,
                register: Vec::new(),
                transitions: Vec::new(),
            },
            state_ids: HashMap::new(),
            register_ids: HashMap::new(),
        }
    }

    pub fn tape_alphabet(&mut self, symbols: &[&str]) -> &mut Self {
        self.spec.alphabet.tape = symbols.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_ids.get(name) {
            return id;
        }
        let id = self.spec.states.len();
        self.spec.states.push(name.to_string());
        self.state_ids.insert(name.to_string(), id);
        id
    }

    pub fn register(&mut self, name: &str) -> usize {
        if let Some(&id) = self.register_ids.get(name) {
            return id;
        }
        let id = self.spec.register.len();
        self.spec.register.push(name.to_string());
        self.register_ids.insert(name.to_string(), id);
        id
    }

    pub fn start(&mut self, name: &str) -> &mut Self {
        self.spec.start = self.state(name);
        self
    }

    pub fn accept(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        if let Err(pos) = self.spec.accepting.binary_search(&id) {
            self.spec.accepting.insert(pos, id);
        }
        self
    }

    pub fn symbol(&self, token: &str) -> TapeSymbol {
        match token {
            "CENT" => TapeSymbol::Cent,
            "END" => TapeSymbol::End,
            _ => self
                .spec
                .input_symbol(token)
                .unwrap_or_else(|| panic!("builder: unknown input symbol {token:?}")),
        }
    }

    pub fn tape_symbol(&self, token: &str) -> usize {
        self.spec
            .alphabet
            .tape
            .iter()
            .position(|s| s == token)
            .unwrap_or_else(|| panic!("builder: unknown tape symbol {token:?}"))
    }

    /// Add one weighted target. `register` is ignored for classical machines.
    #[allow(clippy::too_many_arguments)]
    pub fn trans(
        &mut self,
        source: &str,
        symbol: TapeSymbol,
        status: Option<Vec<bool>>,
        amp: Amp,
        target: &str,
        action: Action,
        register: Option<&str>,
    ) -> &mut Self {
        let source = self.state(source);
        let target = self.state(target);
        let register = if self.spec.kind.is_quantum() {
            Some(self.register(register.expect("quantum transitions need a register symbol")))
        } else {
            None
        };
        self.spec.transitions.push(Transition {
            source,
            symbol,
            status,
            amp,
            target,
            action,
            register,
        });
        self
    }

    pub fn push(&mut self, t: Transition) -> &mut Self {
        self.spec.transitions.push(t);
        self
    }

    pub fn spec(&self) -> &MachineSpec {
        &self.spec
    }

    pub fn finish(self) -> MachineSpec {
        self.spec
    }
}
