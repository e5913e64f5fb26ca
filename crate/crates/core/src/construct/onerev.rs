use std::collections::{BTreeMap, BTreeSet};

use crate::amplitude::Amp;
use crate::error::ConstructError;
use crate::model::{Action, Kind, MachineSpec, Memory, StateId, TapeSymbol, Transition};

use super::{Construction, Guarantee};

/// `(target, counter update)` of one deterministic row.
type Step = (StateId, i64);

/// Rows of a deterministic one-counter machine, keyed by
/// `(state, symbol, counter nonzero)`.
struct Rows(BTreeMap<(StateId, TapeSymbol, bool), Step>);

impl Rows {
    fn new(spec: &MachineSpec) -> Result<Rows, ConstructError> {
        let mut rows = BTreeMap::new();
        for t in &spec.transitions {
            let Some([nz]) = t.status.as_deref() else {
                return Err(ConstructError::Precondition("expected rows keyed by one counter status".into()));
            };
            let c = match &t.action {
                Action::Counters(c) if c.len() == 1 && c[0].abs() <= 1 => c[0],
                a => return Err(ConstructError::Precondition(format!("unsupported update {a:?}"))),
            };
            rows.insert((t.source, t.symbol, *nz), (t.target, c));
        }
        Ok(Rows(rows))
    }

    fn get(&self, spec: &MachineSpec, q: StateId, sym: TapeSymbol, nz: bool) -> Result<Step, ConstructError> {
        self.0.get(&(q, sym, nz)).copied().ok_or_else(|| {
            ConstructError::Precondition(format!(
                "no row for ({}, {}, {})",
                spec.state_name(q),
                spec.symbol_name(sym),
                if nz { "NZ" } else { "Z" }
            ))
        })
    }

    fn status_free(&self, spec: &MachineSpec, q: StateId, sym: TapeSymbol) -> Result<bool, ConstructError> {
        Ok(self.get(spec, q, sym, false)? == self.get(spec, q, sym, true)?)
    }
}

/// The split of the states into those before the first decrement and those
/// after it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub before: Vec<bool>,
}

impl Partition {
    pub fn in_q1(&self, q: StateId) -> bool {
        self.before[q]
    }
}

fn closure(rows: &Rows, seeds: impl IntoIterator<Item = StateId>) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<StateId> = BTreeSet::new();
    let mut stack: Vec<StateId> = seeds.into_iter().collect();
    while let Some(q) = stack.pop() {
        if !seen.insert(q) {
            continue;
        }
        stack.extend(rows.0.iter().filter(|((p, s, _), _)| *p == q && *s != TapeSymbol::Cent).map(|(_, &(t, _))| t));
    }
    seen
}

/// Check the canonical form of a 1-reversal deterministic one-counter
/// machine and return its partition. `Q2` is everything reachable from the
/// target of a decrement; the rest is `Q1`.
pub fn canonical_partition(spec: &MachineSpec) -> Result<Partition, ConstructError> {
    if spec.kind != Kind::Deterministic || !matches!(spec.memory, Memory::Counters { count: 1, blind: false, .. }) {
        return Err(ConstructError::Precondition("expected a deterministic machine with one non-blind counter".into()));
    }
    let rows = Rows::new(spec)?;
    let bad = |m: String| Err(ConstructError::Canonical(m));
    let name = |q| spec.state_name(q);

    for nz in [false, true] {
        if rows.get(spec, spec.start, TapeSymbol::Cent, nz)? != (spec.start, 0) {
            return bad(format!("the step on CENT from {} changes state or counter", name(spec.start)));
        }
    }
    let decrement_targets = rows.0.values().filter(|(_, c)| *c == -1).map(|&(t, _)| t);
    let q2 = closure(&rows, decrement_targets);
    let before: Vec<bool> = (0..spec.states.len()).map(|q| !q2.contains(&q)).collect();
    if !before[spec.start] {
        return bad(format!("start state {} comes after a decrement", name(spec.start)));
    }
    let symbols: Vec<TapeSymbol> = (0..spec.alphabet.input.len()).map(TapeSymbol::Input).chain([TapeSymbol::End]).collect();
    for q in 0..spec.states.len() {
        for &sym in &symbols {
            let (zero, nonzero) = (rows.get(spec, q, sym, false)?, rows.get(spec, q, sym, true)?);
            let at = || format!("({}, {})", name(q), spec.symbol_name(sym));
            if before[q] {
                if zero != nonzero {
                    return bad(format!("{} reads the counter status before the first decrement", at()));
                }
                if !before[zero.0] && zero.1 != -1 {
                    return bad(format!("{} leaves Q1 without decrementing", at()));
                }
            } else {
                if zero.1 == 1 || nonzero.1 == 1 {
                    return bad(format!("{} increments after the first decrement", at()));
                }
                if zero.1 == -1 {
                    return bad(format!("{} decrements a zero counter", at()));
                }
            }
        }
    }
    // after a zero test succeeds the status is never read again
    let mut detected = Vec::new();
    for q in (0..spec.states.len()).filter(|&q| !before[q]) {
        for &sym in &symbols {
            if !rows.status_free(spec, q, sym)? {
                detected.push(rows.get(spec, q, sym, false)?.0);
            }
        }
    }
    for q in closure(&rows, detected) {
        for &sym in &symbols {
            if !rows.status_free(spec, q, sym)? {
                return bad(format!("({}, {}) reads the counter status after a zero test", name(q), spec.symbol_name(sym)));
            }
        }
    }
    Ok(Partition { before })
}

/// 1-reversal deterministic one-counter machine in canonical form to an
/// increment-only counter machine recognizing the same language with
/// cutpoint 1/2.
///
/// Paths 1 and 2 follow the nonzero rows, counting increments and
/// decrements respectively. From the first decrement on, each step spawns
/// paths 3 and 4 with the `+-1/sqrt(3)` pattern; they follow the zero rows
/// from then on. Path 4 cancels exactly when the two counts agree at the
/// spawn, that is when the counter has just reached zero, and accepts when
/// the simulation rejects.
pub fn onerev_to_ioc(spec: &MachineSpec) -> Result<Construction, ConstructError> {
    let part = canonical_partition(spec)?;
    let rows = Rows::new(spec)?;
    let n = spec.states.len();
    let id = |path: usize, q: StateId| 1 + (path - 1) * n + q;
    let w = |q: StateId| Some(q);
    let w_primed = |q: StateId| Some(n + q);

    let mut states = vec!["init".to_string()];
    for path in 1..=4 {
        states.extend(spec.states.iter().map(|s| format!("p{path}.{s}")));
    }
    let mut register: Vec<String> = spec.states.iter().map(|s| format!("w.{s}")).collect();
    register.extend(spec.states.iter().map(|s| format!("w'.{s}")));

    let mut out: Vec<Transition> = Vec::new();
    let mut emit = |source, symbol, amp: Amp, target, inc: u32, reg| {
        out.push(Transition { source, symbol, status: None, amp, target, action: Action::Ioc(inc), register: reg });
    };
    let h = Amp::inv_sqrt(2);
    let s = spec.start;
    emit(0, TapeSymbol::Cent, h.clone(), id(1, s), 0, w(s));
    emit(0, TapeSymbol::Cent, h, id(2, s), 0, w(s));

    let third = Amp::inv_sqrt(3);
    let symbols: Vec<TapeSymbol> = (0..spec.alphabet.input.len()).map(TapeSymbol::Input).chain([TapeSymbol::End]).collect();
    for q in 0..n {
        for &sym in &symbols {
            let (t, c) = rows.get(spec, q, sym, true)?;
            if part.in_q1(q) && part.in_q1(t) {
                let up = if sym == TapeSymbol::End { 0 } else { c.max(0) as u32 };
                emit(id(1, q), sym, Amp::one(), id(1, t), up, w(q));
                emit(id(2, q), sym, Amp::one(), id(2, t), 0, w(q));
            } else {
                let c2 = u32::from(c == -1);
                emit(id(1, q), sym, third.clone(), id(1, t), 0, w(q));
                emit(id(1, q), sym, third.clone(), id(3, t), 0, w_primed(q));
                emit(id(1, q), sym, third.clone(), id(4, t), 0, w_primed(q));
                emit(id(2, q), sym, third.clone(), id(2, t), c2, w(q));
                emit(id(2, q), sym, third.clone(), id(3, t), c2, w_primed(q));
                emit(id(2, q), sym, -third.clone(), id(4, t), c2, w_primed(q));
            }
            if !part.in_q1(q) {
                let (t0, _) = rows.get(spec, q, sym, false)?;
                emit(id(3, q), sym, Amp::one(), id(3, t0), 0, w(q));
                emit(id(4, q), sym, Amp::one(), id(4, t0), 0, w(q));
            }
        }
    }

    let mut accepting: Vec<StateId> = Vec::new();
    for path in 1..=3 {
        accepting.extend(spec.accepting.iter().map(|&q| id(path, q)));
    }
    accepting.extend((0..n).filter(|&q| !spec.is_accepting(q)).map(|q| id(4, q)));
    let spec = MachineSpec {
        kind: Kind::Quantum,
        alphabet: spec.alphabet.clone(),
        states,
        start: 0,
        accepting,
        memory: Memory::Ioc { inc: 1 },
        register,
        transitions: out,
    };
    Ok(Construction { spec, guarantee: Guarantee::CutpointHalf { one_sided: false } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_local_wellformedness, validate_structure, MachineBuilder};
    use crate::sim::run;
    use crate::zoo::nh_one_reversal;

    #[test]
    fn nh_partition() {
        let spec = nh_one_reversal();
        let p = canonical_partition(&spec).unwrap();
        let q1: Vec<&str> = (0..spec.states.len()).filter(|&q| p.in_q1(q)).map(|q| spec.state_name(q)).collect();
        assert_eq!(q1, ["s", "x", "y0", "dead1"]);
    }

    #[test]
    fn nh_members_above_half() {
        let c = onerev_to_ioc(&nh_one_reversal()).unwrap();
        assert!(validate_structure(&c.spec).is_empty(), "{:?}", validate_structure(&c.spec));
        assert!(check_local_wellformedness(&c.spec, 1e-9).unwrap().passed());
        assert!(run(&c.spec, "aababab").unwrap().accept_prob > 0.5 + 1e-9);
        assert!(run(&c.spec, "aabab").unwrap().accept_prob <= 0.5 + 1e-9);
    }

    #[test]
    fn never_decrementing_machine_is_decided_exactly() {
        let mem = Memory::Counters { count: 1, blind: false, inc: 1, reversals: Some(1) };
        let mut b = MachineBuilder::new(Kind::Deterministic, &["a", "b"], mem);
        b.start("e").accept("e");
        for nz in [false, true] {
            let st = Some(vec![nz]);
            b.trans("e", TapeSymbol::Cent, st.clone(), Amp::one(), "e", Action::counter(0), None);
            b.trans("o", TapeSymbol::Cent, st.clone(), Amp::one(), "o", Action::counter(0), None);
            for (q, r) in [("e", "o"), ("o", "e")] {
                b.trans(q, TapeSymbol::Input(0), st.clone(), Amp::one(), r, Action::counter(1), None);
                b.trans(q, TapeSymbol::Input(1), st.clone(), Amp::one(), q, Action::counter(0), None);
                b.trans(q, TapeSymbol::End, st.clone(), Amp::one(), q, Action::counter(0), None);
            }
        }
        let c = onerev_to_ioc(&b.finish()).unwrap();
        assert!((run(&c.spec, "abab").unwrap().accept_prob - 1.0).abs() < 1e-9);
        assert!(run(&c.spec, "ab").unwrap().accept_prob.abs() < 1e-9);
    }

    #[test]
    fn increment_after_decrement_is_named() {
        let mut spec = nh_one_reversal();
        for t in &mut spec.transitions {
            if spec.states[t.source] == "tail" && t.symbol == TapeSymbol::Input(0) {
                t.action = Action::counter(1);
            }
        }
        let e = onerev_to_ioc(&spec).unwrap_err();
        assert!(e.to_string().contains("increments after the first decrement"), "{e}");
    }
}
