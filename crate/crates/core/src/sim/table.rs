use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::SimError;
use crate::model::{status_token, Action, MachineSpec, StateId, TapeSymbol};

/// One target of a compiled row.
#[derive(Clone, Debug)]
pub(crate) struct Target {
    pub amp: Complex64,
    /// Exact probability (classical machines only).
    pub prob: Option<BigRational>,
    pub target: StateId,
    pub action: Action,
    pub register: usize,
}

/// Dense row lookup keyed by (state, symbol, status bitmask).
#[derive(Clone, Debug)]
pub(crate) struct RowTable {
    nsym: usize,
    masks: usize,
    rows: Vec<Option<Vec<Target>>>,
}

const MAX_STATUS_COUNTERS: usize = 16;

impl RowTable {
    pub fn compile(spec: &MachineSpec) -> Result<RowTable, SimError> {
        let nsym = spec.alphabet.input.len() + 2;
        let masks = if spec.memory.reads_status() {
            let k = spec.memory.counter_count();
            if k > MAX_STATUS_COUNTERS {
                return Err(SimError::WrongKind(format!(
                    "at most {MAX_STATUS_COUNTERS} status-reading counters are supported"
                )));
            }
            1usize << k
        } else {
            1
        };
        let mut rows: Vec<Option<Vec<Target>>> = vec![None; spec.states.len() * nsym * masks];
        for t in &spec.transitions {
            let mask = t
                .status
                .as_deref()
                .map(|s| s.iter().enumerate().fold(0usize, |m, (i, &nz)| if nz { m | (1 << i) } else { m }))
                .unwrap_or(0);
            let idx = (t.source * nsym + sym_index(t.symbol)) * masks + mask;
            let prob = if spec.is_quantum() {
                None
            } else {
                t.amp
                    .as_rational()
                    .map(|r| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
            };
            rows[idx].get_or_insert_with(Vec::new).push(Target {
                amp: t.amp.value(),
                prob,
                target: t.target,
                action: t.action.clone(),
                register: t.register.unwrap_or(0),
            });
        }
        Ok(RowTable { nsym, masks, rows })
    }

    pub fn row(&self, state: StateId, symbol: TapeSymbol, mask: u64) -> Option<&[Target]> {
        let mask = if self.masks == 1 { 0 } else { mask as usize };
        self.rows
            .get((state * self.nsym + sym_index(symbol)) * self.masks + mask)
            .and_then(|r| r.as_deref())
    }

    pub fn missing(&self, spec: &MachineSpec, state: StateId, symbol: TapeSymbol, mask: u64) -> SimError {
        let status = if spec.memory.reads_status() {
            let k = spec.memory.counter_count();
            let bits: Vec<bool> = (0..k).map(|i| mask & (1 << i) != 0).collect();
            format!(", {}", status_token(&bits))
        } else {
            String::new()
        };
        SimError::MissingRow {
            state: spec.state_name(state).to_string(),
            symbol: spec.symbol_name(symbol).to_string(),
            status,
        }
    }
}

fn sym_index(s: TapeSymbol) -> usize {
    match s {
        TapeSymbol::Cent => 0,
        TapeSymbol::End => 1,
        TapeSymbol::Input(i) => i + 2,
    }
}
