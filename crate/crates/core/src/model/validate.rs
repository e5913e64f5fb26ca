use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::amplitude::Rational;

use super::{
    status_token, Action, Kind, MachineSpec, Memory, RowKey, TapeWrite, Transition, DEFAULT_TOLERANCE,
    RESERVED_TOKENS,
};

/// One structural problem, with a human-readable location inside the machine.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn v(location: impl Into<String>, message: impl Into<String>) -> Violation {
    Violation { location: location.into(), message: message.into() }
}

/// Check every structural invariant of `spec`. An empty report means the
/// machine is valid. The report is sorted and free of duplicates, so it does
/// not depend on the order of the transition list.
pub fn validate_structure(spec: &MachineSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    check_names(spec, &mut out);
    check_memory(spec, &mut out);

    let nstates = spec.states.len();
    if spec.start >= nstates {
        out.push(v("start", format!("start state #{} is not in Q ({} states)", spec.start, nstates)));
    }
    for (i, &q) in spec.accepting.iter().enumerate() {
        if q >= nstates {
            out.push(v("accept", format!("accepting state #{q} is not in Q")));
        }
        if i > 0 && spec.accepting[i - 1] >= q {
            out.push(v("accept", "accepting set is not sorted and duplicate-free"));
        }
    }

    let mut rows: BTreeMap<RowKey, Vec<&Transition>> = BTreeMap::new();
    let mut seen = HashSet::new();
    for t in &spec.transitions {
        let loc = row_location(spec, t);
        if check_transition(spec, t, &loc, &mut out) {
            let tuple = (t.row_key(), t.target, t.action.clone(), t.register);
            if !seen.insert(tuple) {
                out.push(v(
                    loc.clone(),
                    format!("duplicate transition to {}", spec.state_name(t.target)),
                ));
            }
            rows.entry(t.row_key()).or_default().push(t);
        }
    }

    for (key, row) in &rows {
        check_row(spec, key, row, &mut out);
    }

    out.sort();
    out.dedup();
    out
}

pub(crate) fn row_location(spec: &MachineSpec, t: &Transition) -> String {
    let status = t.status.as_deref().map(|s| format!(", {}", status_token(s))).unwrap_or_default();
    format!(
        "row ({}, {}{})",
        spec.state_name(t.source),
        spec.symbol_name(t.symbol),
        status
    )
}

fn is_token(s: &str) -> bool {
    !s.is_empty() && s.is_ascii() && !s.chars().any(|c| c.is_whitespace() || c.is_control())
}

fn check_symbol_set(what: &str, symbols: &[String], out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for s in symbols {
        if !is_token(s) {
            out.push(v(what, format!("symbol {s:?} is not a whitespace-free ASCII token")));
        }
        if RESERVED_TOKENS.contains(&s.as_str()) {
            out.push(v(what, format!("symbol {s:?} is reserved")));
        }
        if !seen.insert(s) {
            out.push(v(what, format!("symbol {s:?} declared twice")));
        }
    }
}

fn check_names(spec: &MachineSpec, out: &mut Vec<Violation>) {
    if spec.states.is_empty() {
        out.push(v("states", "state set is empty"));
    }
    let mut seen = HashSet::new();
    for s in &spec.states {
        if !is_token(s) {
            out.push(v("states", format!("state name {s:?} is not a whitespace-free ASCII token")));
        }
        if !seen.insert(s) {
            out.push(v("states", format!("state {s:?} declared twice")));
        }
    }
    if spec.alphabet.input.is_empty() {
        out.push(v("input", "input alphabet is empty"));
    }
    check_symbol_set("input", &spec.alphabet.input, out);
    check_symbol_set("tape", &spec.alphabet.tape, out);
    if spec.is_quantum() {
        if spec.register.is_empty() {
            out.push(v("register", "quantum machine has no register alphabet"));
        }
        check_symbol_set("register", &spec.register, out);
    } else if !spec.register.is_empty() {
        out.push(v("register", "classical machine declares a register alphabet"));
    }
}

fn check_memory(spec: &MachineSpec, out: &mut Vec<Violation>) {
    match &spec.memory {
        Memory::Counters { count, inc, reversals, .. } => {
            if *count == 0 {
                out.push(v("counters", "counter machine needs k >= 1"));
            }
            if *inc == 0 {
                out.push(v("counters", "increment bound must be >= 1"));
            }
            if reversals.is_some() && spec.is_quantum() {
                out.push(v("counters", "reversal bounds apply to classical machines only"));
            }
        }
        Memory::Ioc { inc } => {
            if *inc == 0 {
                out.push(v("ioc", "increment bound must be >= 1"));
            }
        }
        Memory::Pos | Memory::Wom => {
            if spec.alphabet.tape.is_empty() {
                out.push(v("tape", "write-only tape needs at least one tape symbol"));
            }
        }
        Memory::None => {}
    }
    if !spec.memory.uses_tape() && !spec.alphabet.tape.is_empty() {
        out.push(v("tape", "tape alphabet declared for a machine without a write-only tape"));
    }
}

/// Returns false when indices are out of range, so the row checks can skip it.
fn check_transition(spec: &MachineSpec, t: &Transition, loc: &str, out: &mut Vec<Violation>) -> bool {
    let mut ok = true;
    let n = spec.states.len();
    if t.source >= n {
        out.push(v(loc, format!("source state #{} is not in Q", t.source)));
        ok = false;
    }
    if t.target >= n {
        out.push(v(loc, format!("target state #{} is not in Q", t.target)));
        ok = false;
    }
    if let super::TapeSymbol::Input(i) = t.symbol {
        if i >= spec.alphabet.input.len() {
            out.push(v(loc, format!("input symbol #{i} is not in the alphabet")));
            ok = false;
        }
    }
    match (&spec.memory, &t.status) {
        (Memory::Counters { blind: false, count, .. }, Some(s)) if s.len() == *count => {}
        (Memory::Counters { blind: false, count, .. }, _) => {
            out.push(v(loc, format!("row must be keyed by a status vector of length {count}")));
        }
        (_, Some(_)) => out.push(v(loc, "status given but the memory has no readable counters")),
        (_, None) => {}
    }
    if spec.is_quantum() {
        match t.register {
            Some(r) if r < spec.register.len() => {}
            Some(r) => {
                out.push(v(loc, format!("register symbol #{r} is not in the register alphabet")));
                ok = false;
            }
            None => out.push(v(loc, "quantum transition without a register symbol")),
        }
        if t.amp.is_zero() {
            out.push(v(loc, "zero amplitude listed"));
        }
    } else {
        if t.register.is_some() {
            out.push(v(loc, "classical transition writes a register symbol"));
        }
        match t.amp.as_rational() {
            Some(p) if p.is_positive() && p <= Rational::one() => {}
            Some(p) => out.push(v(loc, format!("probability {p} outside (0, 1]"))),
            None => out.push(v(loc, format!("probability {} is not rational", t.amp))),
        }
    }
    check_action(spec, t, loc, out);
    ok
}

fn check_action(spec: &MachineSpec, t: &Transition, loc: &str, out: &mut Vec<Violation>) {
    let tape_ok = |w: &TapeWrite| match w {
        TapeWrite::Sym(i) => *i < spec.alphabet.tape.len(),
        _ => true,
    };
    match (&spec.memory, &t.action) {
        (Memory::None, Action::None) => {}
        (Memory::Counters { count, inc, .. }, Action::Counters(c)) => {
            if c.len() != *count {
                out.push(v(loc, format!("update vector has {} entries, expected {count}", c.len())));
            }
            if let Some(bad) = c.iter().find(|x| x.unsigned_abs() > *inc as u64) {
                out.push(v(loc, format!("increment {bad} outside -{inc}..{inc}")));
            }
        }
        (Memory::Ioc { inc }, Action::Ioc(c)) => {
            if c > inc {
                out.push(v(loc, format!("increment {c} outside 0..{inc}")));
            }
        }
        (Memory::Pos, Action::Pos(w)) => {
            if *w == TapeWrite::Blank {
                out.push(v(loc, "push-only stack cannot push the blank"));
            } else if !tape_ok(w) {
                out.push(v(loc, "tape symbol not in the tape alphabet"));
            }
        }
        (Memory::Wom, Action::Wom(w, _)) => {
            if !tape_ok(w) {
                out.push(v(loc, "tape symbol not in the tape alphabet"));
            }
        }
        _ => out.push(v(loc, "memory action does not match the memory kind")),
    }
}

fn check_row(spec: &MachineSpec, key: &RowKey, row: &[&Transition], out: &mut Vec<Violation>) {
    let loc = row_location(spec, row[0]);
    let _ = key;
    match spec.kind {
        Kind::Quantum => {
            let exact: Option<Rational> = row
                .iter()
                .map(|t| t.amp.norm_sqr_exact())
                .try_fold(Rational::zero(), |acc, x| x.map(|x| acc + x));
            match exact {
                Some(mass) if mass != Rational::one() => {
                    out.push(v(loc, format!("row norm {} ≠ 1", fmt_mass(mass))));
                }
                Some(_) => {}
                None => {
                    // sorted so the reported value does not depend on transition order
                    let mut terms: Vec<f64> = row.iter().map(|t| t.amp.value().norm_sqr()).collect();
                    terms.sort_by(f64::total_cmp);
                    let mass: f64 = terms.iter().sum();
                    if (mass - 1.0).abs() > DEFAULT_TOLERANCE {
                        out.push(v(loc, format!("row norm {mass} ≠ 1")));
                    }
                }
            }
        }
        _ => {
            let mass = row
                .iter()
                .filter_map(|t| t.amp.as_rational())
                .fold(Rational::zero(), |acc, p| acc + p);
            if mass != Rational::one() {
                out.push(v(loc.clone(), format!("row mass {mass} ≠ 1")));
            }
            if spec.kind == Kind::Deterministic && row.len() != 1 {
                out.push(v(loc, format!("deterministic row has {} targets", row.len())));
            }
        }
    }
}

fn fmt_mass(r: Rational) -> String {
    let f = crate::amplitude::ratio_to_f64(r);
    if r.is_integer() || (f * 1e6).fract() == 0.0 {
        format!("{f}")
    } else {
        format!("{r}")
    }
}
