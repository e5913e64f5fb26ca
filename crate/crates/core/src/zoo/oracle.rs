//! Exact membership predicates, written directly from the language
//! definitions and independent of the machines.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::LanguageId;

/// Reversed binary encoding, least significant bit first. Zero is `"0"`.
pub fn reversed_binary(n: &BigUint) -> String {
    if n.is_zero() {
        return "0".into();
    }
    n.to_str_radix(2).chars().rev().collect()
}

/// Decision on a tokenized word; tokens index the language's alphabet.
pub(crate) fn member(id: &LanguageId, w: &[usize]) -> bool {
    match id {
        LanguageId::Twin => split_once(w, 2).is_some_and(|(l, r)| l == r),
        LanguageId::Rev => split_once(w, 2).is_some_and(|(l, r)| l.iter().eq(r.iter().rev())),
        LanguageId::RevBins => rev_bins(w),
        LanguageId::TwinPrime => twin_prime(w),
        LanguageId::EqK(k) => (0..*k).all(|i| count(w, i) == count(w, i + k)),
        LanguageId::Nh => nh(w),
        LanguageId::Center => w.len() % 2 == 1 && w[w.len() / 2] == 1,
    }
}

fn count(w: &[usize], s: usize) -> usize {
    w.iter().filter(|&&x| x == s).count()
}

/// The parts around the single occurrence of `sep`, if it occurs once.
fn split_once(w: &[usize], sep: usize) -> Option<(&[usize], &[usize])> {
    let mut it = w.iter().enumerate().filter(|(_, &x)| x == sep).map(|(i, _)| i);
    let i = it.next()?;
    if it.next().is_some() {
        return None;
    }
    Some((&w[..i], &w[i + 1..]))
}

fn bits(w: &[usize]) -> String {
    w.iter().map(|&x| if x == 0 { '0' } else { '1' }).collect()
}

fn twin_prime(w: &[usize]) -> bool {
    let Some((u, v)) = split_once(w, 2) else {
        return false;
    };
    if u.is_empty() {
        return false;
    }
    let u = bits(u);
    let msb_first: String = u.chars().rev().collect();
    let i = BigUint::parse_bytes(msb_first.as_bytes(), 2).expect("binary digits");
    reversed_binary(&i) == u && reversed_binary(&(i + BigUint::one())) == bits(v)
}

/// The unique member with `k + 2` separators, if `k >= 1`.
pub fn rev_bins_member(k: usize) -> String {
    let mut s = String::from("a");
    let mut n = BigUint::zero();
    for _ in 0..=k {
        s.push_str(&reversed_binary(&n));
        s.push('a');
        n += 1u32;
    }
    s
}

fn rev_bins(w: &[usize]) -> bool {
    let seps = count(w, 2);
    if seps < 3 {
        return false;
    }
    let text: String = w.iter().map(|&x| ['0', '1', 'a'][x]).collect();
    text == rev_bins_member(seps - 2)
}

/// `a^x b a^y1 b ... a^yt b` with all exponents positive and some prefix
/// `y1 + ... + yk` equal to `x`; checked by trying every `k`.
fn nh(w: &[usize]) -> bool {
    let mut blocks = Vec::new();
    let mut run = 0usize;
    for &x in w {
        if x == 0 {
            run += 1;
        } else {
            if run == 0 {
                return false;
            }
            blocks.push(run);
            run = 0;
        }
    }
    if run != 0 || blocks.len() < 2 {
        return false;
    }
    let x = blocks[0];
    let ys = &blocks[1..];
    (1..=ys.len()).any(|k| ys[..k].iter().sum::<usize>() == x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(id: &str, w: &str) -> bool {
        super::super::membership(&id.parse().unwrap(), w).unwrap()
    }

    #[test]
    fn definitions() {
        assert!(m("twin", "abcab") && m("twin", "c") && !m("twin", "abcba"));
        assert!(m("rev", "abcba") && !m("rev", "abcab") && !m("rev", "ab"));
        assert!(m("rev-bins", "a0a1a01a") && m("rev-bins", "a0a1a") && !m("rev-bins", "a0a"));
        assert!(!m("rev-bins", "a0a1a11a"));
        assert!(m("twin-prime", "0a1") && m("twin-prime", "1a01") && m("twin-prime", "11a001"));
        assert!(!m("twin-prime", "10a01") && !m("twin-prime", "a1") && !m("twin-prime", "1a1"));
        assert!(m("eq-1", "abba") && !m("eq-1", "a") && m("eq-2", "a1b2b1a2") && !m("eq-2", "a1b2"));
        assert!(m("nh", "aababab") && m("nh", "abab") && !m("nh", "aabab") && !m("nh", "aab"));
        assert!(m("nh", "aaabababab") && !m("nh", "aababb") && !m("nh", "ba"));
        assert!(m("center", "abb") && m("center", "b") && !m("center", "ab") && !m("center", "aaa"));
    }

    #[test]
    fn rev_bins_generator() {
        assert_eq!(rev_bins_member(2), "a0a1a01a");
        assert_eq!(rev_bins_member(4), "a0a1a01a11a001a");
    }

    #[test]
    fn foreign_symbol_is_an_error() {
        assert!(super::super::membership(&LanguageId::Twin, "abd").is_err());
    }
}
