use std::collections::HashMap;

use crate::amplitude::Amp;
use crate::error::ConstructError;
use crate::model::{status_token, Kind, MachineSpec, Memory};

use super::{Construction, Guarantee};

/// Quantum machine with the same acceptance function as a classical one.
///
/// A choice of probability `p` becomes amplitude `sqrt(p)` with a register
/// symbol naming the source state, the counter status and the choice. The
/// register then determines the whole classical step, so every branch of the
/// quantum run is a single classical path and no two paths interfere.
/// Reversal bounds are dropped: the quantum model has none, and they only
/// restrict which runs are legal, not their probabilities.
pub fn lift_classical(spec: &MachineSpec) -> Result<Construction, ConstructError> {
    if spec.is_quantum() {
        return Err(ConstructError::Precondition("lift expects a classical machine".into()));
    }
    if spec.memory == Memory::Wom {
        // overwriting a cell loses information the register cannot recover
        return Err(ConstructError::Precondition("lift does not handle two-way write-only tapes".into()));
    }
    let mut out = spec.clone();
    out.kind = Kind::Quantum;
    if let Memory::Counters { reversals, .. } = &mut out.memory {
        *reversals = None;
    }
    out.register.clear();
    let mut choice: HashMap<_, usize> = HashMap::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for t in &mut out.transitions {
        let p = t.amp.as_rational().ok_or_else(|| {
            ConstructError::Precondition(format!("probability {} is not rational", t.amp))
        })?;
        let i = choice.entry(t.row_key()).or_insert(0);
        let status = t.status.as_deref().map(|s| format!(".{}", status_token(s))).unwrap_or_default();
        let name = format!("r.{}{status}.{i}", spec.states[t.source]);
        *i += 1;
        t.amp = Amp::sqrt_rational(p);
        let next = out.register.len();
        let id = *ids.entry(name.clone()).or_insert(next);
        if id == next {
            out.register.push(name);
        }
        t.register = Some(id);
    }
    if out.register.is_empty() {
        out.register.push("r".into());
    }
    Ok(Construction { spec: out, guarantee: Guarantee::Exact })
}
