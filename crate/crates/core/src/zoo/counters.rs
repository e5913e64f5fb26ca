//! Classical counter machines: equal-count languages and `L_NH`.

use crate::amplitude::{Amp, Rational};
use crate::model::{Action, Kind, MachineBuilder, MachineSpec, Memory, TapeSymbol};

/// Input alphabet for the `k`-counter equality language: `a, b` for one
/// counter, `a1..ak, b1..bk` otherwise.
pub fn eq_alphabet(k: usize) -> Vec<String> {
    if k == 1 {
        return vec!["a".into(), "b".into()];
    }
    (1..=k).map(|i| format!("a{i}")).chain((1..=k).map(|i| format!("b{i}"))).collect()
}

/// One-state blind deterministic machine: `a_i` adds one to counter `i`,
/// `b_i` subtracts one. The state always accepts, so the zero test on the
/// counters decides.
pub fn eq_k(k: usize) -> MachineSpec {
    assert!(k >= 1, "eq-k needs k >= 1");
    let alphabet = eq_alphabet(k);
    let refs: Vec<&str> = alphabet.iter().map(String::as_str).collect();
    let mut b = MachineBuilder::new(Kind::Deterministic, &refs, Memory::counters(k, true));
    b.start("q").accept("q");
    let zero = Action::Counters(vec![0; k]);
    b.trans("q", TapeSymbol::Cent, None, Amp::one(), "q", zero.clone(), None);
    for i in 0..2 * k {
        let mut d = vec![0; k];
        d[i % k] = if i < k { 1 } else { -1 };
        b.trans("q", TapeSymbol::Input(i), None, Amp::one(), "q", Action::Counters(d), None);
    }
    b.trans("q", TapeSymbol::End, None, Amp::one(), "q", zero, None);
    b.finish()
}

const AB: [&str; 2] = ["a", "b"];
const A: TapeSymbol = TapeSymbol::Input(0);
const B: TapeSymbol = TapeSymbol::Input(1);

/// 1-reversal deterministic one-counter machine for `L_NH`.
///
/// Counts `x` up in the first block, then counts down through the `y`
/// blocks. A `b` read with the counter at zero means some prefix of the `y`s
/// sums to `x`; from there the rest only has to be well formed. Reading `a`
/// at zero overshoots, and since every `y_i` is positive nothing later can
/// match.
pub fn nh_one_reversal() -> MachineSpec {
    let memory = Memory::Counters { count: 1, blind: false, inc: 1, reversals: Some(1) };
    let mut m = MachineBuilder::new(Kind::Deterministic, &AB, memory);
    m.start("s").accept("acc");
    for q in ["s", "x", "y0", "dead1", "y", "gap", "acc", "tail", "dead2"] {
        m.state(q);
    }
    let mut det = |src: &str, sym, status: Option<bool>, dst: &str, c: i64| {
        let statuses = match status {
            Some(nz) => vec![nz],
            None => vec![false, true],
        };
        for nz in statuses {
            m.trans(src, sym, Some(vec![nz]), Amp::one(), dst, Action::counter(c), None);
        }
    };
    for q in ["s", "x", "y0", "dead1", "y", "gap", "acc", "tail", "dead2"] {
        det(q, TapeSymbol::Cent, None, q, 0);
        det(q, TapeSymbol::End, None, q, 0);
    }
    det("s", A, None, "x", 1);
    det("s", B, None, "dead1", 0);
    det("x", A, None, "x", 1);
    det("x", B, None, "y0", 0);
    // first decrement; the counter is positive here
    det("y0", A, None, "y", -1);
    det("y0", B, None, "dead1", 0);
    det("dead1", A, None, "dead1", 0);
    det("dead1", B, None, "dead1", 0);

    det("y", A, Some(true), "y", -1);
    det("y", A, Some(false), "dead2", 0);
    det("y", B, Some(false), "acc", 0);
    det("y", B, Some(true), "gap", 0);
    det("gap", A, Some(true), "y", -1);
    det("gap", A, Some(false), "dead2", 0);
    det("gap", B, None, "dead2", 0);
    det("acc", A, None, "tail", 0);
    det("acc", B, None, "dead2", 0);
    det("tail", A, None, "tail", 0);
    det("tail", B, None, "acc", 0);
    det("dead2", A, None, "dead2", 0);
    det("dead2", B, None, "dead2", 0);
    m.finish()
}

/// Blind nondeterministic one-counter machine for `L_NH`: after each `y`
/// block it guesses whether this is the block `k` where the prefix sum hits
/// `x`. Choices are stored as an even split, read at cutpoint 0.
pub fn nh_blind() -> MachineSpec {
    let mut m = MachineBuilder::new(Kind::Nondeterministic, &AB, Memory::counters(1, true));
    m.start("s").accept("f");
    let one = Amp::one();
    let half = Amp::rational(Rational::new(1, 2));
    let mut go = |src: &str, sym, amp: &Amp, dst: &str, c: i64| {
        m.trans(src, sym, None, amp.clone(), dst, Action::counter(c), None);
    };
    for q in ["s", "x", "y0", "y", "f", "tail", "dead"] {
        go(q, TapeSymbol::Cent, &one, q, 0);
        go(q, TapeSymbol::End, &one, q, 0);
    }
    go("s", A, &one, "x", 1);
    go("s", B, &one, "dead", 0);
    go("x", A, &one, "x", 1);
    go("x", B, &one, "y0", 0);
    go("y0", A, &one, "y", -1);
    go("y0", B, &one, "dead", 0);
    go("y", A, &one, "y", -1);
    go("y", B, &half, "y0", 0);
    go("y", B, &half, "f", 0);
    go("f", A, &one, "tail", 0);
    go("f", B, &one, "dead", 0);
    go("tail", A, &one, "tail", 0);
    go("tail", B, &one, "f", 0);
    go("dead", A, &one, "dead", 0);
    go("dead", B, &one, "dead", 0);
    m.finish()
}
