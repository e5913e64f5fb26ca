//! Exact amplitude expressions.
//!
//! Every amplitude that appears in a machine table is a finite sum of
//! monomials `c / sqrt(s) * w(N, k)` where `c` is a rational, `s` a squarefree
//! positive integer and `w(N, k) = exp(2 pi i k / N)`. Keeping the expression
//! (rather than only its floating-point value) makes serialization exact and
//! lets classical probabilities stay rational.
//!
//! Canonical form of a [`Term`]: nonzero coefficient, squarefree radicand,
//! phase reduced into `[0, 1/2)` with a half turn folded into the sign of the
//! coefficient. An [`Amp`] keeps its terms sorted with like terms combined, so
//! structural equality coincides with equality of canonical expressions.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul, One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

pub type Rational = Ratio<i64>;

/// One monomial `coef / sqrt(radicand) * exp(2 pi i phase)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    coef: Rational,
    radicand: u64,
    phase: Rational,
}

impl Term {
    fn new(coef: Rational, radicand: u64, phase: Rational) -> Option<Term> {
        if coef.is_zero() {
            return None;
        }
        assert!(radicand >= 1, "radicand must be positive");
        let (outside, squarefree) = split_square(radicand);
        // c / sqrt(f^2 s) = (c / f) / sqrt(s)
        let coef = coef / Rational::from_integer(outside as i64);
        let mut phase = phase - Rational::from_integer(phase.floor().to_integer());
        let mut coef = coef;
        let half = Rational::new(1, 2);
        if phase >= half {
            phase -= half;
            coef = -coef;
        }
        Some(Term { coef, radicand: squarefree, phase })
    }

    pub fn coef(&self) -> Rational {
        self.coef
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Phase as a fraction of a full turn, in `[0, 1/2)`.
    pub fn phase(&self) -> Rational {
        self.phase
    }

    fn shape_key(&self) -> (u64, Rational) {
        (self.radicand, self.phase)
    }

    fn mul(&self, other: &Term) -> Option<Term> {
        // 1/sqrt(a) * 1/sqrt(b) = 1/sqrt(ab); a and b squarefree so ab = g^2 * (a/g)(b/g)
        let g = self.radicand.gcd(&other.radicand);
        let rad = (self.radicand / g) * (other.radicand / g);
        let coef = self.coef * other.coef / Rational::from_integer(g as i64);
        Term::new(coef, rad, self.phase + other.phase)
    }

    fn magnitude(&self) -> f64 {
        let num = *self.coef.numer() as f64;
        let den = *self.coef.denom() as f64;
        if self.radicand == 1 {
            num / den
        } else {
            num / (den * (self.radicand as f64).sqrt())
        }
    }

    pub fn value(&self) -> Complex64 {
        let (c, s) = unit_phase(self.phase);
        let m = self.magnitude();
        Complex64::new(m * c, m * s)
    }
}

/// `(cos 2 pi t, sin 2 pi t)` for `t` in `[0, 1/2)`, evaluated on a reduced argument.
fn unit_phase(t: Rational) -> (f64, f64) {
    let quarter = Rational::new(1, 4);
    let eighth = Rational::new(1, 8);
    if t.is_zero() {
        return (1.0, 0.0);
    }
    if t == quarter {
        return (0.0, 1.0);
    }
    let angle = |r: Rational| 2.0 * PI * (*r.numer() as f64) / (*r.denom() as f64);
    let small = |r: Rational| -> (f64, f64) {
        // r in (0, 1/4): fold around 1/8 so the libm argument stays below pi/4
        if r <= eighth {
            let a = angle(r);
            (a.cos(), a.sin())
        } else {
            let a = angle(quarter - r);
            (a.sin(), a.cos())
        }
    };
    if t < quarter {
        small(t)
    } else {
        let (c, s) = small(t - quarter);
        (-s, c)
    }
}

fn split_square(mut n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut squarefree = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            squarefree *= p;
        }
        p += 1;
    }
    squarefree *= n;
    (outside, squarefree)
}

/// An exact amplitude: a canonical sum of [`Term`]s. The empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Amp {
    terms: Vec<Term>,
}

impl Amp {
    pub fn zero() -> Amp {
        Amp { terms: Vec::new() }
    }

    pub fn one() -> Amp {
        Amp::rational(Rational::one())
    }

    pub fn rational(r: Rational) -> Amp {
        Amp::from_terms(Term::new(r, 1, Rational::zero()).into_iter().collect())
    }

    pub fn int(n: i64) -> Amp {
        Amp::rational(Rational::from_integer(n))
    }

    /// `1 / sqrt(n)`.
    pub fn inv_sqrt(n: u64) -> Amp {
        Amp::from_terms(Term::new(Rational::one(), n, Rational::zero()).into_iter().collect())
    }

    /// `sqrt(r)` for a nonnegative rational `r = p/q`, written as `p / sqrt(p q)`.
    pub fn sqrt_rational(r: Rational) -> Amp {
        assert!(!r.is_negative(), "square root of a negative rational");
        if r.is_zero() {
            return Amp::zero();
        }
        let p = *r.numer();
        let q = *r.denom();
        Amp::from_terms(
            Term::new(Rational::from_integer(p), (p * q) as u64, Rational::zero())
                .into_iter()
                .collect(),
        )
    }

    /// `exp(2 pi i k / n)`.
    pub fn root_of_unity(n: u64, k: i64) -> Amp {
        assert!(n >= 1, "root of unity order must be positive");
        Amp::from_terms(
            Term::new(Rational::one(), 1, Rational::new(k, n as i64)).into_iter().collect(),
        )
    }

    pub fn imag_unit() -> Amp {
        Amp::root_of_unity(4, 1)
    }

    fn from_terms(mut terms: Vec<Term>) -> Amp {
        terms.sort_by(cmp_shape);
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.shape_key() == t.shape_key() => {
                    last.coef += t.coef;
                    if last.coef.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        Amp { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> Complex64 {
        self.terms.iter().map(Term::value).sum()
    }

    /// The exact rational value, if the expression is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.radicand == 1 && t.phase.is_zero() => Some(t.coef),
            _ => None,
        }
    }

    /// Exact `|a|^2` when the expression is a single monomial and the square fits in 64 bits.
    pub fn norm_sqr_exact(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] => t
                .coef
                .checked_mul(&t.coef)
                .and_then(|c| c.checked_div(&Rational::from_integer(t.radicand as i64))),
            _ => None,
        }
    }

    /// True when the value is real (every term has phase zero).
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.phase.is_zero())
    }
}

fn cmp_shape(a: &Term, b: &Term) -> Ordering {
    a.radicand.cmp(&b.radicand).then_with(|| a.phase.cmp(&b.phase))
}

impl Mul for &Amp {
    type Output = Amp;
    fn mul(self, rhs: &Amp) -> Amp {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.extend(a.mul(b));
            }
        }
        Amp::from_terms(terms)
    }
}

impl Mul for Amp {
    type Output = Amp;
    fn mul(self, rhs: Amp) -> Amp {
        &self * &rhs
    }
}

impl Add for &Amp {
    type Output = Amp;
    fn add(self, rhs: &Amp) -> Amp {
        Amp::from_terms(self.terms.iter().chain(&rhs.terms).cloned().collect())
    }
}

impl Add for Amp {
    type Output = Amp;
    fn add(self, rhs: Amp) -> Amp {
        &self + &rhs
    }
}

impl Neg for Amp {
    type Output = Amp;
    fn neg(self) -> Amp {
        Amp {
            terms: self
                .terms
                .into_iter()
                .map(|mut t| {
                    t.coef = -t.coef;
                    t
                })
                .collect(),
        }
    }
}

fn fmt_ratio(r: Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_ratio(self.coef, f)?;
        if self.radicand > 1 {
            write!(f, "/sqrt({})", self.radicand)?;
        }
        if !self.phase.is_zero() {
            write!(f, "*w({},{})", self.phase.denom(), self.phase.numer())?;
        }
        Ok(())
    }
}

impl fmt::Display for Amp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 && t.coef.is_positive() {
                f.write_str("+")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Amp {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Amp, ParseError> {
        parse_amplitude(s)
    }
}

/// Parse an amplitude expression such as `1/sqrt(2)`, `-1/3*w(8,3)` or
/// `1/2+1/2*i`.
///
/// Grammar (whitespace ignored):
///
/// ```text
/// expr   := [+|-] term ((+|-) term)*
/// term   := factor ((*|/) factor)*
/// factor := decimal | sqrt(int) | w(int,int) | i
/// ```
pub fn parse_amplitude(text: &str) -> Result<Amp, ParseError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = AmpParser { chars: &chars, pos: 0, text };
    let amp = p.expr()?;
    if p.pos != chars.len() {
        return Err(p.err("end of expression"));
    }
    Ok(amp)
}

struct AmpParser<'a> {
    chars: &'a [char],
    pos: usize,
    text: &'a str,
}

impl AmpParser<'_> {
    fn err(&self, expected: &str) -> ParseError {
        ParseError::Amplitude {
            text: self.text.to_string(),
            column: self.pos + 1,
            expected: expected.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("'{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Amp, ParseError> {
        if self.chars.is_empty() {
            return Err(self.err("amplitude"));
        }
        let mut terms = Vec::new();
        let mut negative = false;
        if self.eat('-') {
            negative = true;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            terms.extend(if negative { t.map(neg_term) } else { t });
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(Amp::from_terms(terms))
    }

    fn term(&mut self) -> Result<Option<Term>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = match (acc, f) {
                    (Some(a), Some(b)) => a.mul(&b),
                    _ => None,
                };
            } else if self.eat('/') {
                let at = self.pos;
                let f = self.factor()?;
                let inv = match f {
                    None => {
                        self.pos = at;
                        return Err(self.err("nonzero divisor"));
                    }
                    Some(f) => invert(&f),
                };
                acc = acc.and_then(|a| a.mul(&inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("integer that fits in 64 bits")
        })
    }

    fn factor(&mut self) -> Result<Option<Term>, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let int = self.integer()?;
                let mut r = Rational::from_integer(int);
                if self.eat('.') {
                    let fstart = self.pos;
                    let frac = self.integer()?;
                    let digits = (self.pos - fstart) as u32;
                    let scale = 10i64.checked_pow(digits).ok_or_else(|| {
                        self.pos = start;
                        self.err("decimal with at most 18 fractional digits")
                    })?;
                    r += Rational::new(frac, scale);
                }
                Ok(Term::new(r, 1, Rational::zero()))
            }
            Some('s') => {
                self.keyword("sqrt(")?;
                let at = self.pos;
                let n = self.integer()?;
                if n < 1 {
                    self.pos = at;
                    return Err(self.err("positive radicand"));
                }
                self.expect(')')?;
                // sqrt(n) = n / sqrt(n)
                Ok(Term::new(Rational::from_integer(n), n as u64, Rational::zero()))
            }
            Some('w') => {
                self.keyword("w(")?;
                let at = self.pos;
                let n = self.integer()?;
                if n < 1 {
                    self.pos = at;
                    return Err(self.err("positive root order"));
                }
                self.expect(',')?;
                let neg = self.eat('-');
                let k = self.integer()?;
                self.expect(')')?;
                let k = if neg { -k } else { k };
                Ok(Term::new(Rational::one(), 1, Rational::new(k, n)))
            }
            Some('i') => {
                self.pos += 1;
                Ok(Term::new(Rational::one(), 1, Rational::new(1, 4)))
            }
            _ => Err(self.err("number, sqrt(n), w(N,k) or i")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        for c in kw.chars() {
            if !self.eat(c) {
                return Err(self.err(&format!("'{kw}'")));
            }
        }
        Ok(())
    }
}

fn neg_term(mut t: Term) -> Term {
    t.coef = -t.coef;
    t
}

fn invert(t: &Term) -> Term {
    // 1 / (c / sqrt(s) * w) = sqrt(s) / c * conj(w) = s / (c sqrt(s)) * conj(w)
    Term::new(
        Rational::from_integer(t.radicand as i64) / t.coef,
        t.radicand,
        -t.phase,
    )
    .expect("inverse of a nonzero term is nonzero")
}

/// `|z|^2` convenience for complex amplitudes.
pub fn norm_sqr(z: Complex64) -> f64 {
    z.norm_sqr()
}

pub(crate) fn ratio_to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
