//! Seeded random machines for property tests and the acceptance suite.
//!
//! Quantum rows come from random orthonormal columns rounded to dyadic
//! rationals, so local well-formedness holds to about `2^-40`.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{Amp, Rational};
use crate::model::{Action, Alphabet, Dir, Kind, MachineSpec, Memory, StateId, TapeSymbol, TapeWrite, Transition};

const DYADIC_BITS: u32 = 40;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tape_symbols(alphabet: &[&str]) -> Vec<TapeSymbol> {
    let mut out = vec![TapeSymbol::Cent];
    out.extend((0..alphabet.len()).map(TapeSymbol::Input));
    out.push(TapeSymbol::End);
    out
}

fn shell(kind: Kind, alphabet: &[&str], n: usize, accepting: Vec<StateId>, memory: Memory) -> MachineSpec {
    MachineSpec {
        kind,
        alphabet: Alphabet { input: alphabet.iter().map(|s| s.to_string()).collect(), tape: Vec::new() },
        states: (0..n).map(|q| format!("q{q}")).collect(),
        start: 0,
        accepting,
        memory,
        register: Vec::new(),
        transitions: Vec::new(),
    }
}

/// A nonempty proper-or-full random subset, sorted.
fn random_accepting(rng: &mut impl Rng, n: usize) -> Vec<StateId> {
    let mut acc: Vec<StateId> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if acc.is_empty() {
        acc.push(rng.gen_range(0..n));
    }
    acc
}

/// Probabilistic automaton with `2..=max_states` states. Every row spreads
/// its mass over distinct targets with small integer weights.
pub fn random_pfa(rng: &mut impl Rng, max_states: usize, alphabet: &[&str]) -> MachineSpec {
    let n = rng.gen_range(2..=max_states.max(2));
    let accepting = random_accepting(rng, n);
    let mut spec = shell(Kind::Probabilistic, alphabet, n, accepting, Memory::None);
    let all: Vec<StateId> = (0..n).collect();
    for q in 0..n {
        for &symbol in &tape_symbols(alphabet) {
            let k = rng.gen_range(1..=n);
            let targets: Vec<StateId> = all.choose_multiple(rng, k).copied().collect();
            let weights: Vec<i64> = targets.iter().map(|_| rng.gen_range(1..=6)).collect();
            let total: i64 = weights.iter().sum();
            for (&target, &w) in targets.iter().zip(&weights) {
                spec.transitions.push(Transition {
                    source: q,
                    symbol,
                    status: None,
                    amp: Amp::rational(Rational::new(w, total)),
                    target,
                    action: Action::None,
                    register: None,
                });
            }
        }
    }
    spec
}

/// The same classical machine with a two-way write-only tape and a random
/// write and move on every transition.
pub fn decorate_wom(spec: &MachineSpec, rng: &mut impl Rng) -> MachineSpec {
    let mut out = spec.clone();
    out.memory = Memory::Wom;
    out.alphabet.tape = vec!["x".into(), "y".into()];
    let writes = [TapeWrite::Eps, TapeWrite::Blank, TapeWrite::Sym(0), TapeWrite::Sym(1)];
    let dirs = [Dir::Left, Dir::Stay, Dir::Right];
    for t in &mut out.transitions {
        t.action = Action::Wom(*writes.choose(rng).unwrap(), *dirs.choose(rng).unwrap());
    }
    out
}

fn random_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// `count` orthonormal vectors in `C^dim` by Gram-Schmidt on random draws.
fn orthonormal_columns(rng: &mut impl Rng, count: usize, dim: usize) -> Vec<Vec<Complex64>> {
    assert!(count <= dim);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v = random_vector(rng, dim);
        // two passes keep the rounding error near machine precision
        for _ in 0..2 {
            for b in &basis {
                let dot: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (y, x) in v.iter_mut().zip(b) {
                    *y -= dot * x;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    basis
}

fn dyadic(x: f64) -> Rational {
    let scale = (1i64 << DYADIC_BITS) as f64;
    Rational::new((x * scale).round() as i64, 1i64 << DYADIC_BITS)
}

/// `z` rounded to an exact `a + b i` with dyadic `a`, `b`.
pub fn exact_amplitude(z: Complex64) -> Amp {
    Amp::rational(dyadic(z.re)) + Amp::rational(dyadic(z.im)) * Amp::imag_unit()
}

/// Rows of one `(symbol, status)` block: source `q` gets column `q` of a
/// random isometry over `(target, register)` pairs with `r` register
/// symbols. `action(target, w)` picks the memory action, which must keep
/// distinct pairs distinguishable.
fn quantum_block(
    rng: &mut impl Rng,
    spec: &mut MachineSpec,
    symbol: TapeSymbol,
    status: Option<Vec<bool>>,
    r: usize,
    action: impl Fn(StateId, usize) -> Action,
) {
    let n = spec.states.len();
    let cols = orthonormal_columns(rng, n, n * r);
    for (source, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            let amp = exact_amplitude(*z);
            if amp.is_zero() {
                continue;
            }
            let (target, w) = (i / r, i % r);
            spec.transitions.push(Transition {
                source,
                symbol,
                status: status.clone(),
                amp,
                target,
                action: action(target, w),
                register: Some(w),
            });
        }
    }
}

/// Quantum one-counter automaton with increments in `-m..=m` that reads the
/// zero test. The increment depends on the symbol and the target state only,
/// so configurations with different counters never collide and local
/// well-formedness gives a global isometry. Only the end-marker steps split
/// over both register symbols; the other blocks are unitary, which keeps the
/// traced ensemble small.
pub fn random_q1ca(rng: &mut impl Rng, max_states: usize, m: u32, alphabet: &[&str]) -> MachineSpec {
    let n = rng.gen_range(2..=max_states.max(2));
    let accepting = random_accepting(rng, n);
    let memory = Memory::Counters { count: 1, blind: false, inc: m, reversals: None };
    let mut spec = shell(Kind::Quantum, alphabet, n, accepting, memory);
    spec.register = vec!["w0".into(), "w1".into()];
    let m = m as i64;
    for symbol in tape_symbols(alphabet) {
        let inc: Vec<i64> = (0..n).map(|_| rng.gen_range(-m..=m)).collect();
        for nz in [false, true] {
            let r = if matches!(symbol, TapeSymbol::Input(_)) { 1 } else { 2 };
            quantum_block(rng, &mut spec, symbol, Some(vec![nz]), r, |t, _| Action::counter(inc[t]));
        }
    }
    spec
}

/// Quantum blind one-counter automaton with unit increments. The register
/// symbol fixes the increment, so along every branch of the traced run the
/// counter is a classical quantity.
pub fn random_q1bca(rng: &mut impl Rng, max_states: usize, alphabet: &[&str]) -> MachineSpec {
    let n = rng.gen_range(2..=max_states.max(2));
    let accepting = random_accepting(rng, n);
    let mut spec = shell(Kind::Quantum, alphabet, n, accepting, Memory::counters(1, true));
    spec.register = vec!["w0".into(), "w1".into()];
    let inc: Vec<i64> = (0..2).map(|_| rng.gen_range(-1..=1)).collect();
    for symbol in tape_symbols(alphabet) {
        quantum_block(rng, &mut spec, symbol, None, 2, |_, w| Action::counter(inc[w]));
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_local_wellformedness, validate_structure};

    #[test]
    fn generated_machines_are_valid() {
        let mut rng = seeded(7);
        for _ in 0..20 {
            let p = random_pfa(&mut rng, 4, &["a", "b"]);
            assert!(validate_structure(&p).is_empty(), "{:?}", validate_structure(&p));
            let d = decorate_wom(&p, &mut rng);
            assert!(validate_structure(&d).is_empty(), "{:?}", validate_structure(&d));
            for q in [random_q1ca(&mut rng, 4, 3, &["a", "b"]), random_q1bca(&mut rng, 5, &["a", "b"])] {
                assert!(validate_structure(&q).is_empty(), "{:?}", validate_structure(&q));
                assert!(check_local_wellformedness(&q, 1e-9).unwrap().passed());
            }
        }
    }

    #[test]
    fn same_seed_same_machine() {
        let a = random_q1ca(&mut seeded(3), 4, 2, &["a"]);
        let b = random_q1ca(&mut seeded(3), 4, 2, &["a"]);
        assert_eq!(a, b);
    }
}
