use num_traits::One;

use crate::amplitude::{Amp, Rational};
use crate::error::ModelError;

use super::StateId;

/// The `N x N` block `alpha * exp(2 pi i j l / N)`, rows `j = 1..N`, columns `l = 1..N`.
pub fn fourier_amplitudes(n: usize, alpha: &Amp) -> Result<Vec<Vec<Amp>>, ModelError> {
    if n == 0 {
        return Err(ModelError::Invalid("gadget size must be at least 1".into()));
    }
    check_norm(n, alpha)?;
    let n64 = n as u64;
    Ok((1..=n)
        .map(|j| {
            (1..=n)
                .map(|l| alpha * &Amp::root_of_unity(n64, ((j * l) % n) as i64))
                .collect()
        })
        .collect())
}

fn check_norm(n: usize, alpha: &Amp) -> Result<(), ModelError> {
    let within = match alpha.norm_sqr_exact() {
        Some(a2) => a2 * Rational::from_integer(n as i64) <= Rational::one(),
        None => alpha.value().norm_sqr() * n as f64 <= 1.0 + 1e-12,
    };
    if within {
        Ok(())
    } else {
        Err(ModelError::GadgetNorm)
    }
}

/// Quantum Fourier transform from `domain[j]` onto `range`, with the last
/// range state as the distinguished target that equal-amplitude paths with
/// identical memory interfere onto.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QftGadget {
    alpha: Amp,
    domain: Vec<StateId>,
    range: Vec<StateId>,
    block: Vec<Vec<Amp>>,
}

impl QftGadget {
    pub fn new(alpha: Amp, domain: Vec<StateId>, range: Vec<StateId>) -> Result<QftGadget, ModelError> {
        let n = domain.len();
        if range.len() != n {
            return Err(ModelError::Invalid(format!(
                "gadget has {n} domain states but {} range states",
                range.len()
            )));
        }
        for list in [&domain, &range] {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() {
                return Err(ModelError::Invalid("gadget states must be distinct".into()));
            }
        }
        let block = fourier_amplitudes(n, &alpha)?;
        Ok(QftGadget { alpha, domain, range, block })
    }

    /// The unit-norm gadget, `alpha = 1/sqrt(N)`.
    pub fn unitary(domain: Vec<StateId>, range: Vec<StateId>) -> Result<QftGadget, ModelError> {
        let n = domain.len().max(1) as u64;
        QftGadget::new(Amp::inv_sqrt(n), domain, range)
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn alpha(&self) -> &Amp {
        &self.alpha
    }

    pub fn domain(&self) -> &[StateId] {
        &self.domain
    }

    pub fn range(&self) -> &[StateId] {
        &self.range
    }

    pub fn distinguished(&self) -> StateId {
        self.range[self.range.len() - 1]
    }

    /// Targets of the row for `domain[j]` (0-based `j`).
    pub fn row(&self, j: usize) -> Vec<(Amp, StateId)> {
        self.block[j].iter().cloned().zip(self.range.iter().copied()).collect()
    }

    /// All rows, keyed by domain state.
    pub fn rows(&self) -> Vec<(StateId, Vec<(Amp, StateId)>)> {
        (0..self.size()).map(|j| (self.domain[j], self.row(j))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn two_way_rows() {
        let g = QftGadget::unitary(vec![10, 11], vec![20, 21]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r1 = g.row(0);
        assert!(close(r1[0].0.value(), Complex64::new(-h, 0.0)));
        assert!(close(r1[1].0.value(), Complex64::new(h, 0.0)));
        let r2 = g.row(1);
        assert!(close(r2[0].0.value(), Complex64::new(h, 0.0)));
        assert!(close(r2[1].0.value(), Complex64::new(h, 0.0)));
        assert_eq!(g.distinguished(), 21);
    }

    #[test]
    fn trivial_gadget() {
        let g = QftGadget::new(Amp::one(), vec![0], vec![1]).unwrap();
        assert_eq!(g.row(0), vec![(Amp::one(), 1)]);
    }

    #[test]
    fn equal_paths_interfere_on_distinguished() {
        let g = QftGadget::unitary(vec![0, 1], vec![2, 3]).unwrap();
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for j in 0..2 {
            for (l, (a, _)) in g.row(j).into_iter().enumerate() {
                out[l] += h * a.value();
            }
        }
        assert!(out[0].norm() < 1e-15);
        assert!((out[1].norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn columns_are_orthonormal_exactly() {
        for n in 1..=9 {
            let block = fourier_amplitudes(n, &Amp::inv_sqrt(n as u64)).unwrap();
            for j in 0..n {
                for k in 0..n {
                    let dot: Complex64 =
                        (0..n).map(|l| block[j][l].value().conj() * block[k][l].value()).sum();
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((dot - want).norm() < 1e-12, "n={n} j={j} k={k} {dot}");
                }
            }
        }
    }

    #[test]
    fn oversized_alpha_rejected() {
        let err = QftGadget::new(Amp::one(), vec![0, 1], vec![2, 3]).unwrap_err();
        assert_eq!(err.to_string(), "gadget exceeds unit column norm");
    }
}
