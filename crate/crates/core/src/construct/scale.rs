use crate::error::ConstructError;
use crate::model::{Action, MachineSpec, Memory, Transition};

use super::{Construction, Guarantee};

/// `x -> (floor(x/m), x mod m)`: stored counter and state component.
pub fn scale_split(x: i64, m: i64) -> (i64, i64) {
    (x.div_euclid(m), x.rem_euclid(m))
}

/// One-counter machine with increments in `-m..=m` to one with unit
/// increments, keeping `x mod m` in the state.
///
/// State `(q, j)` stands for `q` with counter `m c + j` where `c` is the
/// stored counter. The source machine sees a nonzero counter whenever
/// `j != 0`, so rows of `(q, j)` with `j != 0` copy the nonzero rows of `q`
/// for both statuses. A blind machine accepts only with the whole value at
/// zero, so only the `(q, 0)` copies of accepting states accept.
pub fn scale_counter(spec: &MachineSpec, m: u32) -> Result<Construction, ConstructError> {
    let Memory::Counters { count: 1, blind, .. } = spec.memory else {
        return Err(ConstructError::Precondition("scaling needs a one-counter machine".into()));
    };
    if m < 2 {
        return Err(ConstructError::Precondition(format!("scale factor must be > 1, got {m}")));
    }
    let mi = m as i64;
    let increment = |t: &Transition| -> Result<i64, ConstructError> {
        match &t.action {
            Action::Counters(c) if c.len() == 1 && c[0].abs() <= mi => Ok(c[0]),
            a => Err(ConstructError::Precondition(format!(
                "increment {a:?} in row ({}, {}) is outside -{m}..{m}",
                spec.state_name(t.source),
                spec.symbol_name(t.symbol)
            ))),
        }
    };
    for t in &spec.transitions {
        increment(t)?;
    }

    let n = spec.states.len();
    let id = |q: usize, j: i64| q * m as usize + j as usize;
    let mut out = spec.clone();
    out.memory = Memory::Counters { count: 1, blind, inc: 1, reversals: None };
    out.states = (0..n).flat_map(|q| (0..mi).map(move |j| (q, j))).map(|(q, j)| format!("{}.{j}", spec.states[q])).collect();
    out.start = id(spec.start, 0);
    out.accepting = spec
        .accepting
        .iter()
        .flat_map(|&q| (0..mi).filter(move |&j| !blind || j == 0).map(move |j| id(q, j)))
        .collect();
    out.transitions.clear();
    for q in 0..n {
        for j in 0..mi {
            for t in spec.transitions.iter().filter(|t| t.source == q) {
                // rows of (q, j) under stored status `nz`
                let statuses: Vec<Option<Vec<bool>>> = match &t.status {
                    None => vec![None],
                    Some(s) if j == 0 => vec![Some(s.clone())],
                    Some(s) if s[0] => vec![Some(vec![false]), Some(vec![true])],
                    Some(_) => vec![],
                };
                let (carry, k) = scale_split(j + increment(t)?, mi);
                for status in statuses {
                    out.transitions.push(Transition {
                        source: id(q, j),
                        status,
                        target: id(t.target, k),
                        action: Action::counter(carry),
                        ..t.clone()
                    });
                }
            }
        }
    }
    Ok(Construction { spec: out, guarantee: Guarantee::Exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        assert_eq!(scale_split(5, 2), (2, 1));
        assert_eq!(scale_split(0, 2), (0, 0));
        assert_eq!(scale_split(1 - 3, 3), (-1, 1));
    }
}
