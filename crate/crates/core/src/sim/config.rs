use std::collections::BTreeMap;

use crate::model::{Action, MachineSpec, Memory, StateId, TapeWrite};

/// Memory content of one configuration. The input head position is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MemoryContent {
    Unit,
    Counters(Vec<i64>),
    Ioc(u64),
    /// Stack content, bottom first.
    Pos(Vec<u16>),
    /// Nonblank cells only; the head starts at cell 0.
    Wom { cells: BTreeMap<i64, u16>, head: i64 },
}

/// Applying the action would leave the 64-bit counter range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

impl MemoryContent {
    pub fn initial(memory: &Memory) -> MemoryContent {
        match memory {
            Memory::None => MemoryContent::Unit,
            Memory::Counters { count, .. } => MemoryContent::Counters(vec![0; *count]),
            Memory::Ioc { .. } => MemoryContent::Ioc(0),
            Memory::Pos => MemoryContent::Pos(Vec::new()),
            Memory::Wom => MemoryContent::Wom { cells: BTreeMap::new(), head: 0 },
        }
    }

    /// Bitmask of nonzero counters (bit `i` set when counter `i` is nonzero).
    pub fn status_mask(&self) -> u64 {
        match self {
            MemoryContent::Counters(c) => c
                .iter()
                .enumerate()
                .fold(0, |m, (i, &x)| if x != 0 { m | (1 << i) } else { m }),
            _ => 0,
        }
    }

    pub fn counters_zero(&self) -> bool {
        match self {
            MemoryContent::Counters(c) => c.iter().all(|&x| x == 0),
            _ => true,
        }
    }

    /// Nonblank cells on a write-only tape (stack height for a push-only stack).
    pub fn cells_used(&self) -> usize {
        match self {
            MemoryContent::Pos(s) => s.len(),
            MemoryContent::Wom { cells, .. } => cells.len(),
            _ => 0,
        }
    }

    /// The content after `action`. Actions of the wrong kind leave the content
    /// unchanged; validation rules them out beforehand.
    pub fn apply(&self, action: &Action) -> Result<MemoryContent, Overflow> {
        Ok(match (self, action) {
            (MemoryContent::Counters(c), Action::Counters(d)) => MemoryContent::Counters(
                c.iter()
                    .zip(d)
                    .map(|(x, y)| x.checked_add(*y).ok_or(Overflow))
                    .collect::<Result<_, _>>()?,
            ),
            (MemoryContent::Ioc(c), Action::Ioc(d)) => MemoryContent::Ioc(c.checked_add(*d as u64).ok_or(Overflow)?),
            (MemoryContent::Pos(s), Action::Pos(TapeWrite::Sym(i))) => {
                let mut s = s.clone();
                s.push(*i as u16);
                MemoryContent::Pos(s)
            }
            // the empty write leaves the stack and its head in place
            (MemoryContent::Pos(_), Action::Pos(_)) => self.clone(),
            (MemoryContent::Wom { cells, head }, Action::Wom(w, d)) => {
                let mut cells = cells.clone();
                match w {
                    TapeWrite::Eps => {}
                    TapeWrite::Blank => {
                        cells.remove(head);
                    }
                    TapeWrite::Sym(i) => {
                        cells.insert(*head, *i as u16);
                    }
                }
                MemoryContent::Wom { cells, head: head + d.offset() }
            }
            _ => self.clone(),
        })
    }

    /// Human-readable rendering used by traces.
    pub fn render(&self, spec: &MachineSpec) -> String {
        let sym = |i: u16| spec.alphabet.tape.get(i as usize).map(String::as_str).unwrap_or("?").to_string();
        match self {
            MemoryContent::Unit => String::new(),
            MemoryContent::Counters(c) => c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            MemoryContent::Ioc(c) => c.to_string(),
            MemoryContent::Pos(s) => format!("[{}]", s.iter().map(|&i| sym(i)).collect::<Vec<_>>().join(" ")),
            MemoryContent::Wom { cells, head } => {
                let body = cells.iter().map(|(k, &v)| format!("{k}:{}", sym(v))).collect::<Vec<_>>().join(" ");
                format!("{{{body}}}@{head}")
            }
        }
    }
}

/// One classical snapshot: internal state plus memory content.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub memory: MemoryContent,
}

impl Configuration {
    pub fn initial(spec: &MachineSpec) -> Configuration {
        Configuration { state: spec.start, memory: MemoryContent::initial(&spec.memory) }
    }

    /// In an accepting state, and with every counter at zero for blind machines.
    pub fn accepts(&self, spec: &MachineSpec) -> bool {
        spec.is_accepting(self.state) && (!spec.requires_zero_counters() || self.memory.counters_zero())
    }

    pub fn render(&self, spec: &MachineSpec) -> String {
        let mem = self.memory.render(spec);
        if mem.is_empty() {
            spec.state_name(self.state).to_string()
        } else {
            format!("{} {}", spec.state_name(self.state), mem)
        }
    }
}
