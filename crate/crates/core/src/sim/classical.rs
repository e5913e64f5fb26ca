use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::SimError;
use crate::model::{Action, MachineSpec, Memory};

use super::config::{Configuration, Overflow};
use super::table::RowTable;

/// Exact outcome of a classical run.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalResult {
    pub accept: BigRational,
    pub reject: BigRational,
    /// Support size of the distribution after each step (¢ first).
    pub trace: Vec<usize>,
    pub peak_support: usize,
    pub max_wom_cells_used: usize,
}

impl ClassicalResult {
    /// Cutpoint-0 reading used for nondeterministic machines.
    pub fn nondeterministic_accepts(&self) -> bool {
        !self.accept.is_zero()
    }
}

/// Direction of the last nonzero update and reversals used, per counter.
type Reversals = Vec<(i8, u32)>;

pub struct ClassicalSimulator<'a> {
    spec: &'a MachineSpec,
    table: RowTable,
    bound: Option<u32>,
}

impl<'a> ClassicalSimulator<'a> {
    pub fn new(spec: &'a MachineSpec) -> Result<ClassicalSimulator<'a>, SimError> {
        if spec.is_quantum() {
            return Err(SimError::WrongKind("the exact simulator needs a classical machine".into()));
        }
        let bound = match spec.memory {
            Memory::Counters { reversals, .. } => reversals,
            _ => None,
        };
        Ok(ClassicalSimulator { spec, table: RowTable::compile(spec)?, bound })
    }

    pub fn run_str(&self, input: &str) -> Result<ClassicalResult, SimError> {
        let word = self.spec.tokenize(input)?;
        self.run(&word)
    }

    pub fn run(&self, word: &[usize]) -> Result<ClassicalResult, SimError> {
        if let Some(&bad) = word.iter().find(|&&i| i >= self.spec.alphabet.input.len()) {
            return Err(SimError::UnknownSymbol(format!("#{bad}")));
        }
        let k = self.spec.memory.counter_count();
        let mut dist: BTreeMap<(Configuration, Reversals), BigRational> = BTreeMap::new();
        let rev0 = if self.bound.is_some() { vec![(0, 0); k] } else { Vec::new() };
        dist.insert((Configuration::initial(self.spec), rev0), BigRational::one());

        let mut trace = Vec::new();
        let mut peak = 1;
        let mut cells = 0;
        for (t, &sym) in MachineSpec::tape(word).iter().enumerate() {
            let prefix = || self.spec.word_string(&word[..t.min(word.len())]);
            let mut next: BTreeMap<(Configuration, Reversals), BigRational> = BTreeMap::new();
            for ((conf, rev), p) in &dist {
                let mask = conf.memory.status_mask();
                let row = self
                    .table
                    .row(conf.state, sym, mask)
                    .ok_or_else(|| self.table.missing(self.spec, conf.state, sym, mask))?;
                for target in row {
                    let memory = conf
                        .memory
                        .apply(&target.action)
                        .map_err(|Overflow| SimError::CounterOverflow { prefix: prefix() })?;
                    let rev = match self.bound {
                        Some(bound) => self.reversals(rev, &target.action, bound).map_err(|counter| {
                            SimError::ReversalExceeded {
                                bound,
                                counter,
                                state: self.spec.state_name(target.target).to_string(),
                                prefix: prefix(),
                            }
                        })?,
                        None => Vec::new(),
                    };
                    let q = target.prob.clone().unwrap_or_else(BigRational::zero);
                    *next
                        .entry((Configuration { state: target.target, memory }, rev))
                        .or_insert_with(BigRational::zero) += p * q;
                }
            }
            dist = next;
            trace.push(dist.len());
            peak = peak.max(dist.len());
            cells = cells.max(dist.keys().map(|(c, _)| c.memory.cells_used()).max().unwrap_or(0));
        }

        let mut accept = BigRational::zero();
        let mut reject = BigRational::zero();
        for ((conf, _), p) in dist {
            if conf.accepts(self.spec) {
                accept += p;
            } else {
                reject += p;
            }
        }
        Ok(ClassicalResult { accept, reject, trace, peak_support: peak, max_wom_cells_used: cells })
    }

    fn reversals(&self, rev: &Reversals, action: &Action, bound: u32) -> Result<Reversals, usize> {
        let mut rev = rev.clone();
        if let Action::Counters(d) = action {
            for (i, &c) in d.iter().enumerate() {
                let dir = c.signum() as i8;
                if dir == 0 {
                    continue;
                }
                let (last, used) = rev[i];
                if last != 0 && last != dir {
                    if used >= bound {
                        return Err(i);
                    }
                    rev[i] = (dir, used + 1);
                } else {
                    rev[i] = (dir, used);
                }
            }
        }
        Ok(rev)
    }
}

/// Exact acceptance probability of a classical machine on one input string.
pub fn run_classical(spec: &MachineSpec, input: &str) -> Result<ClassicalResult, SimError> {
    ClassicalSimulator::new(spec)?.run_str(input)
}
