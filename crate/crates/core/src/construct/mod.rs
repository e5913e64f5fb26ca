//! Machine-to-machine transformations. Each returns the new machine with the
//! relation its acceptance function is guaranteed to satisfy.

mod freivalds;
mod ioc;
mod lift;
mod onerev;
mod scale;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::amplitude::{parse_amplitude, Rational};
use crate::error::{ConstructError, Error};
use crate::model::MachineSpec;

pub use freivalds::{freivalds_modulus, freivalds_one_counter, freivalds_update};
pub use ioc::{d1bca_to_ioc, ioc_increment, nq1bca_to_ioc, q1bca_to_ioc};
pub use lift::lift_classical;
pub use onerev::{canonical_partition, onerev_to_ioc, Partition};
pub use scale::{scale_counter, scale_split};

/// What a construction promises about `f'`, the new acceptance function,
/// in terms of the source machine's acceptance `f^a` and rejection `f^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guarantee {
    /// `f' = f^a` on every input.
    Exact,
    /// `f' = f^a + s / m`, where `s` is the weight that ends in an accepting
    /// state with a nonzero counter. Weight ending in a rejecting state is
    /// rejected, so this is `f^a + f^r / m` only when every state accepts.
    Affine { m: u32 },
    /// `f^a <= f' <= f^a + eps (1 - f^a)`, with `r` the number of random choices.
    Sandwich { eps: Rational, r: u64 },
    /// Members are accepted with probability above 1/2, nonmembers at most
    /// 1/2; exactly 1/2 when `one_sided`.
    CutpointHalf { one_sided: bool },
    /// Members accepted with probability 1, nonmembers with `1/m`.
    NegativeOneSided { m: u32 },
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarantee::Exact => f.write_str("exact: f' = f"),
            Guarantee::Affine { m } => write!(f, "affine: f' = f^a + P[accepting state, counter != 0]/{m}"),
            Guarantee::Sandwich { eps, r } => write!(f, "sandwich: f <= f' <= f + {eps}(1 - f), R = {r}"),
            Guarantee::CutpointHalf { one_sided: true } => f.write_str("cutpoint 1/2: members > 1/2, nonmembers = 1/2"),
            Guarantee::CutpointHalf { one_sided: false } => f.write_str("cutpoint 1/2: members > 1/2, nonmembers <= 1/2"),
            Guarantee::NegativeOneSided { m } => write!(f, "negative one-sided: members 1, nonmembers 1/{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    pub spec: MachineSpec,
    pub guarantee: Guarantee,
}

/// Error bound `eps + (1 - eps)/m` of the IOC simulation of a bounded-error
/// blind counter machine.
pub fn affine_error_bound(eps: Rational, m: u32) -> Rational {
    eps + (Rational::one() - eps) / Rational::from_integer(m as i64)
}

/// Smallest number of copies `m` strictly above `(2 - 2 eps) / (1 - 2 eps)`,
/// which keeps the simulated error below 1/2.
pub fn minimal_copies(eps: Rational) -> Result<u32, ConstructError> {
    let half = Rational::new(1, 2);
    if eps < Rational::from_integer(0) || eps >= half {
        return Err(ConstructError::Precondition(format!("error bound {eps} is not in [0, 1/2)")));
    }
    let two = Rational::from_integer(2);
    let t = (two - two * eps) / (Rational::one() - two * eps);
    let m = t.numer().div_floor(t.denom()) + 1;
    m.to_u32().ok_or_else(|| ConstructError::Overflow(format!("copy count for error bound {eps}")))
}

/// A transformation named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Lift,
    Scale(u32),
    Freivalds(Rational),
    D1bcaIoc(u32),
    Q1bcaIoc(u32),
    Nq1bcaIoc,
    OnerevIoc,
}

impl Transform {
    pub fn apply(&self, spec: &MachineSpec) -> Result<Construction, ConstructError> {
        match *self {
            Transform::Lift => lift_classical(spec),
            Transform::Scale(m) => scale_counter(spec, m),
            Transform::Freivalds(eps) => freivalds_one_counter(spec, eps),
            Transform::D1bcaIoc(m) => d1bca_to_ioc(spec, m),
            Transform::Q1bcaIoc(m) => q1bca_to_ioc(spec, m),
            Transform::Nq1bcaIoc => nq1bca_to_ioc(spec),
            Transform::OnerevIoc => onerev_to_ioc(spec),
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    /// `lift`, `scale:m`, `freivalds:eps`, `d1bca-ioc:m`, `q1bca-ioc:m`,
    /// `nq1bca-ioc`, `onerev-ioc`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Other(format!("unknown transformation {s:?}"));
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let copies = |a: Option<&str>| -> Result<u32, Error> {
            let m: u32 = a.ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if m < 2 {
                return Err(Error::Other(format!("{name} needs an integer parameter > 1, got {m}")));
            }
            Ok(m)
        };
        Ok(match name {
            "lift" if arg.is_none() => Transform::Lift,
            "nq1bca-ioc" if arg.is_none() => Transform::Nq1bcaIoc,
            "onerev-ioc" if arg.is_none() => Transform::OnerevIoc,
            "scale" => Transform::Scale(copies(arg)?),
            "d1bca-ioc" => Transform::D1bcaIoc(copies(arg)?),
            "q1bca-ioc" => Transform::Q1bcaIoc(copies(arg)?),
            "freivalds" => {
                let eps = parse_amplitude(arg.ok_or_else(bad)?)
                    .ok()
                    .and_then(|a| a.as_rational())
                    .ok_or_else(bad)?;
                Transform::Freivalds(eps)
            }
            _ => return Err(bad()),
        })
    }
}

/// A register symbol not yet in `taken`, made by priming `base`.
pub(crate) fn fresh_symbol(base: &str, taken: &[String]) -> String {
    let mut s = format!("{base}'");
    while taken.contains(&s) {
        s.push('\'');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_bound_arithmetic() {
        assert_eq!(affine_error_bound(Rational::new(1, 4), 8), Rational::new(11, 32));
        assert_eq!(minimal_copies(Rational::new(1, 4)).unwrap(), 4);
        assert_eq!(minimal_copies(Rational::new(0, 1)).unwrap(), 3);
        assert!(minimal_copies(Rational::new(1, 2)).is_err());
    }

    #[test]
    fn transform_names() {
        assert_eq!("scale:3".parse::<Transform>().unwrap(), Transform::Scale(3));
        assert_eq!("freivalds:1/2".parse::<Transform>().unwrap(), Transform::Freivalds(Rational::new(1, 2)));
        assert_eq!("onerev-ioc".parse::<Transform>().unwrap(), Transform::OnerevIoc);
        assert!("scale:1".parse::<Transform>().is_err());
        assert!("lift:2".parse::<Transform>().is_err());
        assert!("fold".parse::<Transform>().is_err());
    }
}
