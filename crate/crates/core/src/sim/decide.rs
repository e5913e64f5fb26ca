use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::amplitude::{parse_amplitude, ratio_to_f64, Rational};
use crate::error::ParseError;

/// Probabilities within this distance of 0 or 1 count as exactly 0 or 1 in
/// the one-sided modes.
pub const ONE_SIDED_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionCriterion {
    /// Member iff `f > lambda`.
    StrictCutpoint(Rational),
    /// Member iff `f >= lambda`.
    NonstrictCutpoint(Rational),
    /// Member iff `f >= 1 - eps`; nonmember iff the rejection probability is.
    BoundedError(Rational),
    /// Members have `f >= p`, nonmembers `f = 0`.
    PositiveOneSided(Rational),
    /// Members have `f = 1`, nonmembers `f <= 1 - p`.
    NegativeOneSided(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Member,
    Nonmember,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::Nonmember => "nonmember",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    /// Signed distance of the acceptance probability from the member threshold.
    pub accept_margin: f64,
    /// Signed distance from the nonmember threshold.
    pub reject_margin: f64,
}

impl DecisionCriterion {
    pub fn parameter(&self) -> Rational {
        match *self {
            DecisionCriterion::StrictCutpoint(x)
            | DecisionCriterion::NonstrictCutpoint(x)
            | DecisionCriterion::BoundedError(x)
            | DecisionCriterion::PositiveOneSided(x)
            | DecisionCriterion::NegativeOneSided(x) => x,
        }
    }

    pub fn check(&self) -> Result<(), String> {
        let zero = Rational::zero();
        let one = Rational::one();
        match self {
            DecisionCriterion::BoundedError(e) if *e < zero || *e >= Rational::new(1, 2) => {
                Err(format!("bounded error needs 0 <= eps < 1/2, got {e}"))
            }
            DecisionCriterion::PositiveOneSided(p) | DecisionCriterion::NegativeOneSided(p)
                if *p <= zero || *p > one =>
            {
                Err(format!("one-sided modes need p in (0, 1], got {p}"))
            }
            _ => Ok(()),
        }
    }
}

/// Turn acceptance and rejection probabilities into a verdict.
pub fn decide(accept: f64, reject: f64, criterion: &DecisionCriterion) -> Decision {
    let x = ratio_to_f64(criterion.parameter());
    let tol = ONE_SIDED_TOLERANCE;
    let (verdict, am, rm) = match criterion {
        DecisionCriterion::StrictCutpoint(_) => (member_if(accept > x), accept - x, x - accept),
        DecisionCriterion::NonstrictCutpoint(_) => (member_if(accept >= x), accept - x, x - accept),
        DecisionCriterion::BoundedError(_) => {
            let (am, rm) = (accept - (1.0 - x), reject - (1.0 - x));
            let v = if am >= 0.0 {
                Verdict::Member
            } else if rm >= 0.0 {
                Verdict::Nonmember
            } else {
                Verdict::Inconclusive
            };
            (v, am, rm)
        }
        DecisionCriterion::PositiveOneSided(_) => {
            let (am, rm) = (accept - x, tol - accept.abs());
            let v = if am >= 0.0 {
                Verdict::Member
            } else if rm >= 0.0 {
                Verdict::Nonmember
            } else {
                Verdict::Inconclusive
            };
            (v, am, rm)
        }
        DecisionCriterion::NegativeOneSided(_) => {
            let (am, rm) = (tol - (1.0 - accept).abs(), (1.0 - x) - accept);
            let v = if am >= 0.0 {
                Verdict::Member
            } else if rm >= 0.0 {
                Verdict::Nonmember
            } else {
                Verdict::Inconclusive
            };
            (v, am, rm)
        }
    };
    Decision { verdict, accept_margin: am, reject_margin: rm }
}

/// Exact variant for classical probabilities: no tolerance anywhere.
pub fn decide_exact(accept: &BigRational, criterion: &DecisionCriterion) -> Verdict {
    let x = criterion.parameter();
    let x = BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()));
    let one = BigRational::one();
    let reject = &one - accept;
    match criterion {
        DecisionCriterion::StrictCutpoint(_) => member_if(accept > &x),
        DecisionCriterion::NonstrictCutpoint(_) => member_if(accept >= &x),
        DecisionCriterion::BoundedError(_) => {
            if accept >= &(&one - &x) {
                Verdict::Member
            } else if reject >= &one - &x {
                Verdict::Nonmember
            } else {
                Verdict::Inconclusive
            }
        }
        DecisionCriterion::PositiveOneSided(_) => {
            if accept >= &x {
                Verdict::Member
            } else if accept.is_zero() {
                Verdict::Nonmember
            } else {
                Verdict::Inconclusive
            }
        }
        DecisionCriterion::NegativeOneSided(_) => {
            if accept == &one {
                Verdict::Member
            } else if accept <= &(&one - &x) {
                Verdict::Nonmember
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

fn member_if(b: bool) -> Verdict {
    if b {
        Verdict::Member
    } else {
        Verdict::Nonmember
    }
}

impl FromStr for DecisionCriterion {
    type Err = ParseError;

    /// `strict:λ`, `nonstrict:λ`, `bounded:ε`, `one-sided-pos:p`, `one-sided-neg:p`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (mode, value) = s
            .split_once(':')
            .ok_or_else(|| ParseError::Invalid(format!("criterion {s:?} is not of the form mode:value")))?;
        let x = parse_amplitude(value)
            .ok()
            .and_then(|a| a.as_rational())
            .ok_or_else(|| ParseError::Invalid(format!("criterion parameter {value:?} is not a rational literal")))?;
        let c = match mode {
            "strict" => DecisionCriterion::StrictCutpoint(x),
            "nonstrict" => DecisionCriterion::NonstrictCutpoint(x),
            "bounded" => DecisionCriterion::BoundedError(x),
            "one-sided-pos" => DecisionCriterion::PositiveOneSided(x),
            "one-sided-neg" => DecisionCriterion::NegativeOneSided(x),
            _ => return Err(ParseError::Invalid(format!("unknown criterion mode {mode:?}"))),
        };
        c.check().map_err(ParseError::Invalid)?;
        Ok(c)
    }
}

impl fmt::Display for DecisionCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self {
            DecisionCriterion::StrictCutpoint(_) => "strict",
            DecisionCriterion::NonstrictCutpoint(_) => "nonstrict",
            DecisionCriterion::BoundedError(_) => "bounded",
            DecisionCriterion::PositiveOneSided(_) => "one-sided-pos",
            DecisionCriterion::NegativeOneSided(_) => "one-sided-neg",
        };
        write!(f, "{mode}:{}", self.parameter())
    }
}
