use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const DIGITS: usize = 9;

/// Nine decimals. Rust rounds the exact binary value half to even.
pub fn prob(x: f64) -> String {
    format!("{x:.DIGITS$}")
}

/// Nine decimals of an exact probability, rounded half to even.
pub fn exact(x: &BigRational) -> String {
    let scale = BigInt::from(10u64.pow(DIGITS as u32));
    let scaled = x * BigRational::from_integer(scale.clone());
    let mut n = scaled.floor().to_integer();
    let frac = scaled - BigRational::from_integer(n.clone());
    let half = BigRational::new(1.into(), 2.into());
    if frac > half || (frac == half && n.is_odd()) {
        n += 1;
    }
    let sign = if n.is_negative() { "-" } else { "" };
    let (whole, part) = n.abs().div_rem(&scale);
    let part = if part.is_zero() { "0".repeat(DIGITS) } else { format!("{part:0>DIGITS$}") };
    format!("{sign}{whole}.{part}")
}
