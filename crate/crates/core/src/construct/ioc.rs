use crate::amplitude::Amp;
use crate::error::ConstructError;
use crate::model::{check_local_wellformedness, Action, Kind, MachineSpec, Memory, TapeSymbol, Transition, DEFAULT_TOLERANCE};

use super::{fresh_symbol, lift_classical, Construction, Guarantee};

/// Increment of copy `j` (1-based) of `m` for a blind-counter update `c`:
/// `j` for `+1`, `m - j + 1` for `-1`. Copies `j` and `j'` then end with equal
/// values exactly when the simulated counter is zero.
pub fn ioc_increment(c: i64, j: u32, m: u32) -> u32 {
    match c {
        1 => j,
        -1 => m - j + 1,
        _ => 0,
    }
}

fn unit_increment(t: &Transition, spec: &MachineSpec) -> Result<i64, ConstructError> {
    match &t.action {
        Action::Counters(c) if c.len() == 1 && c[0].abs() <= 1 => Ok(c[0]),
        a => Err(ConstructError::Precondition(format!(
            "row ({}, {}) has update {a:?}; expected -1, 0 or +1",
            spec.state_name(t.source),
            spec.symbol_name(t.symbol)
        ))),
    }
}

/// `m` copies of a quantum blind one-counter machine on an increment-only
/// counter, with an `m`-way Fourier step on the end-marker whose
/// distinguished target is the accepting copy.
fn copies(spec: &MachineSpec, m: u32) -> Result<MachineSpec, ConstructError> {
    if !matches!(spec.memory, Memory::Counters { count: 1, blind: true, .. }) || !spec.is_quantum() {
        return Err(ConstructError::Precondition("expected a quantum machine with one blind counter".into()));
    }
    if m < 2 {
        return Err(ConstructError::Precondition(format!("copy count must be > 1, got {m}")));
    }
    let report = check_local_wellformedness(spec, DEFAULT_TOLERANCE).map_err(|e| ConstructError::Precondition(e.to_string()))?;
    if !report.passed() {
        return Err(ConstructError::Precondition(format!(
            "input machine is not well-formed: {}",
            report.describe(spec).join("; ")
        )));
    }
    let n = spec.states.len();
    let id = |j: u32, s: usize| 1 + (j as usize - 1) * n + s;
    let mut states = vec!["init".to_string()];
    for j in 1..=m {
        states.extend(spec.states.iter().map(|s| format!("c{j}.{s}")));
    }
    let split = Amp::inv_sqrt(m as u64);
    let mut transitions = Vec::new();
    for t in spec.transitions.iter().filter(|t| t.source == spec.start && t.symbol == TapeSymbol::Cent) {
        let c = unit_increment(t, spec)?;
        for j in 1..=m {
            transitions.push(Transition {
                source: 0,
                amp: &t.amp * &split,
                target: id(j, t.target),
                action: Action::Ioc(ioc_increment(c, j, m)),
                ..t.clone()
            });
        }
    }
    for j in 1..=m {
        for t in spec.transitions.iter().filter(|t| t.symbol != TapeSymbol::Cent) {
            let c = unit_increment(t, spec)?;
            let action = Action::Ioc(ioc_increment(c, j, m));
            if t.symbol != TapeSymbol::End {
                transitions.push(Transition { source: id(j, t.source), target: id(j, t.target), action, ..t.clone() });
                continue;
            }
            for l in 1..=m {
                let phase = Amp::root_of_unity(m as u64, ((j * l) % m) as i64);
                transitions.push(Transition {
                    source: id(j, t.source),
                    amp: &(&t.amp * &split) * &phase,
                    target: id(l, t.target),
                    action: action.clone(),
                    ..t.clone()
                });
            }
        }
    }
    Ok(MachineSpec {
        kind: Kind::Quantum,
        alphabet: spec.alphabet.clone(),
        states,
        start: 0,
        accepting: spec.accepting.iter().map(|&q| id(m, q)).collect(),
        memory: Memory::Ioc { inc: m },
        register: spec.register.clone(),
        transitions,
    })
}

/// Deterministic blind one-counter machine to an increment-only counter
/// machine accepting members with probability 1 and nonmembers with `1/m`.
pub fn d1bca_to_ioc(spec: &MachineSpec, m: u32) -> Result<Construction, ConstructError> {
    if spec.kind != Kind::Deterministic || !matches!(spec.memory, Memory::Counters { count: 1, blind: true, .. }) {
        return Err(ConstructError::Precondition("expected a deterministic machine with one blind counter".into()));
    }
    let lifted = lift_classical(spec)?.spec;
    Ok(Construction { spec: copies(&lifted, m)?, guarantee: Guarantee::NegativeOneSided { m } })
}

/// Quantum blind one-counter machine to an increment-only counter machine.
///
/// Paths of the source that end in an accepting state with the counter at
/// zero are accepted with their full weight, paths ending elsewhere are
/// rejected, and paths in an accepting state with a nonzero counter are
/// accepted with `1/m` of their weight.
pub fn q1bca_to_ioc(spec: &MachineSpec, m: u32) -> Result<Construction, ConstructError> {
    Ok(Construction { spec: copies(spec, m)?, guarantee: Guarantee::Affine { m } })
}

/// Two copies as in [`q1bca_to_ioc`], then every end-marker step into a
/// copy of a rejecting state is split evenly between a fresh accepting and
/// a fresh rejecting state. Nonmembers of a positive one-sided machine then
/// sit at exactly 1/2. Classical machines are lifted first.
pub fn nq1bca_to_ioc(spec: &MachineSpec) -> Result<Construction, ConstructError> {
    let lifted;
    let source = if spec.is_quantum() {
        spec
    } else {
        lifted = lift_classical(spec)?.spec;
        &lifted
    };
    let mut out = copies(source, 2)?;
    let n = source.states.len();
    let rejecting = |q: usize| q >= 1 && !source.is_accepting((q - 1) % n);

    let mut primed: Vec<Option<usize>> = vec![None; out.register.len()];
    let mut pair: Vec<Option<(usize, usize)>> = vec![None; out.states.len()];
    let mut transitions = Vec::with_capacity(out.transitions.len());
    let half = Amp::inv_sqrt(2);
    for t in std::mem::take(&mut out.transitions) {
        if t.symbol != TapeSymbol::End || !rejecting(t.target) {
            transitions.push(t);
            continue;
        }
        let (acc, rej) = *pair[t.target].get_or_insert_with(|| {
            let name = out.states[t.target].clone();
            out.states.push(format!("acc.{name}"));
            out.states.push(format!("rej.{name}"));
            out.accepting.push(out.states.len() - 2);
            (out.states.len() - 2, out.states.len() - 1)
        });
        let w = t.register.expect("quantum transitions carry a register symbol");
        let reg = *primed[w].get_or_insert_with(|| {
            let s = fresh_symbol(&out.register[w], &out.register);
            out.register.push(s);
            out.register.len() - 1
        });
        let amp = &t.amp * &half;
        for target in [acc, rej] {
            transitions.push(Transition { amp: amp.clone(), target, register: Some(reg), ..t.clone() });
        }
    }
    out.transitions = transitions;
    Ok(Construction { spec: out, guarantee: Guarantee::CutpointHalf { one_sided: true } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_structure;
    use crate::sim::run;
    use crate::zoo::eq_k;

    #[test]
    fn increments() {
        assert_eq!((1..=4).map(|j| ioc_increment(1, j, 4)).collect::<Vec<_>>(), [1, 2, 3, 4]);
        assert_eq!((1..=4).map(|j| ioc_increment(-1, j, 4)).collect::<Vec<_>>(), [4, 3, 2, 1]);
        assert_eq!(ioc_increment(0, 3, 4), 0);
    }

    #[test]
    fn eq1_spectrum() {
        let c = d1bca_to_ioc(&eq_k(1), 4).unwrap();
        assert!(validate_structure(&c.spec).is_empty(), "{:?}", validate_structure(&c.spec));
        assert!(check_local_wellformedness(&c.spec, 1e-9).unwrap().passed());
        for (w, p) in [("ab", 1.0), ("a", 0.25), ("", 1.0), ("bba", 0.25)] {
            assert!((run(&c.spec, w).unwrap().accept_prob - p).abs() < 1e-9, "{w}");
        }
    }

    #[test]
    fn rejects_nonblind_input() {
        assert!(d1bca_to_ioc(&crate::zoo::nh_one_reversal(), 2).is_err());
    }
}
