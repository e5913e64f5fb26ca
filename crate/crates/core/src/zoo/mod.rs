//! Ready-built machines and membership oracles for the named languages.

mod binary;
mod counters;
mod explore;
mod oracle;
mod twin;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, SimError};
use crate::model::{tokenize, MachineSpec};

pub use binary::{rev_bins, twin_prime};
pub use counters::{eq_alphabet, eq_k, nh_blind, nh_one_reversal};
pub use oracle::{rev_bins_member, reversed_binary};
pub use twin::{rev, twin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanguageId {
    /// `{w c w}`
    Twin,
    /// `{w c w^rev}`
    Rev,
    /// `{a (0)rev a (1)rev a ... a (k)rev a}`, reversed binary blocks
    RevBins,
    /// `{(i)rev a (i+1)rev}`
    TwinPrime,
    /// Equal numbers of `a_i` and `b_i` for every `i <= k`.
    EqK(usize),
    /// `{a^x b a^y1 b ... a^yt b | x = y1 + ... + yk for some k}`
    Nh,
    /// `{u b v | |u| = |v|}`; oracle only.
    Center,
}

impl LanguageId {
    pub fn alphabet(&self) -> Vec<String> {
        let v = |s: &[&str]| s.iter().map(|x| x.to_string()).collect();
        match self {
            LanguageId::Twin | LanguageId::Rev => v(&["a", "b", "c"]),
            LanguageId::RevBins | LanguageId::TwinPrime => v(&["0", "1", "a"]),
            LanguageId::EqK(k) => eq_alphabet(*k),
            LanguageId::Nh | LanguageId::Center => v(&["a", "b"]),
        }
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanguageId::Twin => f.write_str("twin"),
            LanguageId::Rev => f.write_str("rev"),
            LanguageId::RevBins => f.write_str("rev-bins"),
            LanguageId::TwinPrime => f.write_str("twin-prime"),
            LanguageId::EqK(k) => write!(f, "eq-{k}"),
            LanguageId::Nh => f.write_str("nh"),
            LanguageId::Center => f.write_str("center"),
        }
    }
}

impl FromStr for LanguageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "twin" => LanguageId::Twin,
            "rev" => LanguageId::Rev,
            "rev-bins" => LanguageId::RevBins,
            "twin-prime" => LanguageId::TwinPrime,
            "nh" => LanguageId::Nh,
            "center" => LanguageId::Center,
            _ => match s.strip_prefix("eq-").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if k >= 1 => LanguageId::EqK(k),
                _ => return Err(Error::Other(format!("unknown language id {s:?}"))),
            },
        })
    }
}

/// The machine for a language: classical for `eq-k` and `nh` (the
/// 1-reversal deterministic counter machine), quantum otherwise.
pub fn build(id: &LanguageId) -> Result<MachineSpec, Error> {
    Ok(match id {
        LanguageId::Twin => twin(),
        LanguageId::Rev => rev(),
        LanguageId::RevBins => rev_bins(),
        LanguageId::TwinPrime => twin_prime(),
        LanguageId::EqK(k) => eq_k(*k),
        LanguageId::Nh => nh_one_reversal(),
        LanguageId::Center => return Err(Error::Other("no machine is provided for center".into())),
    })
}

/// Like [`build`], but also knows `nh-nbca`, the blind nondeterministic
/// machine for the same language as `nh`.
pub fn build_machine(name: &str) -> Result<MachineSpec, Error> {
    if name == "nh-nbca" {
        return Ok(nh_blind());
    }
    build(&name.parse()?)
}

/// Names accepted by [`build_machine`], with `eq-1` and `eq-2` standing in
/// for the whole `eq-k` family.
pub const MACHINE_NAMES: &[&str] = &["twin", "rev", "rev-bins", "twin-prime", "eq-1", "eq-2", "nh", "nh-nbca"];

pub fn membership(id: &LanguageId, w: &str) -> Result<bool, SimError> {
    let word = tokenize(&id.alphabet(), w)?;
    Ok(oracle::member(id, &word))
}

/// Membership on an already tokenized word over [`LanguageId::alphabet`].
pub fn membership_word(id: &LanguageId, word: &[usize]) -> bool {
    oracle::member(id, word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{all_words, check_local_wellformedness, validate_structure};
    use crate::sim::{run, run_classical, Simulator};

    #[test]
    fn every_machine_is_valid() {
        for name in MACHINE_NAMES {
            let spec = build_machine(name).unwrap();
            let v = validate_structure(&spec);
            assert!(v.is_empty(), "{name}: {v:?}");
            if spec.is_quantum() {
                let r = check_local_wellformedness(&spec, 1e-9).unwrap();
                assert!(r.passed(), "{name}: {:?}", r.describe(&spec));
            }
        }
    }

    #[test]
    fn twin_examples() {
        let t = twin();
        assert!((run(&t, "abcab").unwrap().accept_prob - 1.0).abs() < 1e-9);
        assert!(run(&t, "aa").unwrap().accept_prob.abs() < 1e-12);
        assert!((run(&t, "acb").unwrap().accept_prob - 0.5).abs() < 1e-9);
    }

    #[test]
    fn quantum_machines_match_oracles_on_short_all_words() {
        for id in [LanguageId::Twin, LanguageId::Rev, LanguageId::TwinPrime, LanguageId::RevBins] {
            let spec = build(&id).unwrap();
            let sim = Simulator::new(&spec).unwrap();
            for w in all_words(3, 6) {
                let r = sim.run(&w).unwrap();
                assert!(r.max_isometry_deviation <= 1e-9, "{id} {w:?}");
                let member = membership_word(&id, &w);
                assert_eq!(r.accept_prob > 1.0 - 1e-9, member, "{id} {} -> {}", spec.word_string(&w), r.accept_prob);
            }
        }
    }

    #[test]
    fn counter_machines_match_oracles() {
        for (name, id) in [("eq-1", LanguageId::EqK(1)), ("nh", LanguageId::Nh), ("nh-nbca", LanguageId::Nh)] {
            let spec = build_machine(name).unwrap();
            for w in all_words(2, 9) {
                let s = spec.word_string(&w);
                let r = run_classical(&spec, &s).unwrap();
                assert_eq!(r.nondeterministic_accepts(), membership_word(&id, &w), "{name} {s}");
            }
        }
        let eq2 = eq_k(2);
        for w in all_words(4, 5) {
            let r = run_classical(&eq2, &eq2.word_string(&w)).unwrap();
            assert_eq!(r.nondeterministic_accepts(), membership_word(&LanguageId::EqK(2), &w));
        }
    }

    #[test]
    fn ids_round_trip() {
        for s in ["twin", "rev", "rev-bins", "twin-prime", "eq-3", "nh", "center"] {
            assert_eq!(s.parse::<LanguageId>().unwrap().to_string(), s);
        }
        assert!("eq-0".parse::<LanguageId>().is_err());
        assert!(build(&LanguageId::Center).is_err());
    }
}
