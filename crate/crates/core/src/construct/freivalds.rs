use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::amplitude::{Amp, Rational};
use crate::error::ConstructError;
use crate::model::{Action, Kind, MachineSpec, Memory, TapeSymbol, Transition};

use super::{Construction, Guarantee};

/// Largest number of random choices the construction will build states for.
const MAX_CHOICES: u64 = 1 << 16;

/// `R = 2^ceil(k / eps)`.
pub fn freivalds_modulus(k: usize, eps: Rational) -> Result<u64, ConstructError> {
    let e = Rational::from_integer(k as i64) / eps;
    let bits = e.numer().div_ceil(e.denom());
    let r = u32::try_from(bits).ok().and_then(|b| 1u64.checked_shl(b)).filter(|&r| r <= MAX_CHOICES);
    r.ok_or_else(|| ConstructError::Overflow(format!("2^{bits} random choices")))
}

/// `sum_i r^i c_i` for `i = 1..k`.
pub fn freivalds_update(c: &[i64], r: u64) -> Option<i64> {
    let r = i64::try_from(r).ok()?;
    let mut power = 1i64;
    let mut total = 0i64;
    for &ci in c {
        power = power.checked_mul(r)?;
        total = total.checked_add(power.checked_mul(ci)?)?;
    }
    Some(total)
}

/// Blind `k`-counter probabilistic machine to a blind one-counter machine.
///
/// On the left end-marker the machine picks `r` in `1..=R` uniformly and
/// keeps it in the state; each update vector `c` becomes the single
/// increment `sum r^i c_i`. Zero vectors stay zero, so acceptance never
/// drops; a nonzero final vector is a nonzero polynomial in `r` of degree at
/// most `k` and vanishes for at most `k` of the `R` choices.
pub fn freivalds_one_counter(spec: &MachineSpec, eps: Rational) -> Result<Construction, ConstructError> {
    let Memory::Counters { count: k, blind: true, .. } = spec.memory else {
        return Err(ConstructError::Precondition("expected a blind counter machine".into()));
    };
    if spec.is_quantum() {
        return Err(ConstructError::Precondition("expected a classical machine".into()));
    }
    // the sandwich only needs eps > 0; 1/2 itself is admitted
    if eps <= Rational::zero() || eps > Rational::new(1, 2) {
        return Err(ConstructError::Precondition(format!("error bound {eps} is not in (0, 1/2]")));
    }
    let r_max = freivalds_modulus(k, eps)?;
    let n = spec.states.len();
    let overflow = || ConstructError::Overflow("combined counter increment".into());
    let update = |t: &Transition, r: u64| match &t.action {
        Action::Counters(c) => freivalds_update(c, r).ok_or_else(overflow),
        _ => Ok(0),
    };

    let id = |q: usize, r: u64| 1 + q * r_max as usize + (r - 1) as usize;
    let mut states = vec!["init".to_string()];
    for q in &spec.states {
        states.extend((1..=r_max).map(|r| format!("{q}.{r}")));
    }
    let mut transitions = Vec::new();
    let mut largest = 1i64;
    let pick = Rational::new(1, r_max as i64);
    for t in spec.transitions.iter().filter(|t| t.source == spec.start && t.symbol == TapeSymbol::Cent) {
        let p = t.amp.as_rational().ok_or_else(overflow)?;
        for r in 1..=r_max {
            let c = update(t, r)?;
            largest = largest.max(c.abs());
            transitions.push(Transition {
                source: 0,
                amp: Amp::rational(p * pick),
                target: id(t.target, r),
                action: Action::counter(c),
                ..t.clone()
            });
        }
    }
    for q in 0..n {
        for r in 1..=r_max {
            for t in spec.transitions.iter().filter(|t| t.source == q && t.symbol != TapeSymbol::Cent) {
                let c = update(t, r)?;
                largest = largest.max(c.abs());
                transitions.push(Transition {
                    source: id(q, r),
                    target: id(t.target, r),
                    action: Action::counter(c),
                    ..t.clone()
                });
            }
        }
    }
    let inc = largest.to_u32().ok_or_else(overflow)?;
    let out = MachineSpec {
        kind: if spec.kind == Kind::Deterministic { Kind::Probabilistic } else { spec.kind },
        alphabet: spec.alphabet.clone(),
        states,
        start: 0,
        accepting: spec.accepting.iter().flat_map(|&q| (1..=r_max).map(move |r| id(q, r))).collect(),
        memory: Memory::Counters { count: 1, blind: true, inc, reversals: None },
        register: Vec::new(),
        transitions,
    };
    Ok(Construction { spec: out, guarantee: Guarantee::Sandwich { eps, r: r_max } })
}
