//! Dense N x N Hermitian operators, stored row major.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Absolute Hermiticity tolerance for [`DenseHermitian::from_entries`].
pub const DENSE_HERMITICITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    n: usize,
    entries: Vec<Complex64>,
}

impl DenseHermitian {
    /// Validates the shape and |H[i][j] - conj(H[j][i])| <= 1e-12 for all
    /// pairs, reporting the worst offending pair. The stored matrix is
    /// symmetrized to (H + H^dagger)/2, which silences rounding-level defects.
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { left: entries.len(), right: n * n });
        }
        let mut worst = (0usize, 0usize, 0.0f64);
        for i in 0..n {
            for j in i..n {
                let delta = (entries[i * n + j] - entries[j * n + i].conj()).norm()
                    / if i == j { 1.0 } else { 2.0 };
                if delta > worst.2 {
                    worst = (i, j, delta);
                }
            }
        }
        if worst.2 > DENSE_HERMITICITY_TOL {
            return Err(Error::NonHermitian {
                i: worst.0,
                j: worst.1,
                delta: worst.2,
                tol: DENSE_HERMITICITY_TOL,
            });
        }
        let mut sym = entries;
        for i in 0..n {
            sym[i * n + i] = Complex64::new(sym[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = (sym[i * n + j] + sym[j * n + i].conj()) / 2.0;
                sym[i * n + j] = avg;
                sym[j * n + i] = avg.conj();
            }
        }
        Ok(Self { n, entries: sym })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// out = H v. `out` is overwritten; lengths must match the dimension.
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(v.len(), self.n);
        assert_eq!(out.len(), self.n);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            *o = row.iter().zip(v).map(|(h, x)| h * x).sum();
        }
    }

    /// Convenience wrapper over [`Self::apply`] for [`StateVector`] input.
    pub fn apply_state(&self, v: &StateVector) -> Result<Vec<Complex64>> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch { left: v.dim(), right: self.n });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        self.apply(v.amplitudes(), &mut out);
        Ok(out)
    }

    /// Max absolute row sum; bounds the spectral radius from above.
    pub fn operator_norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                self.entries[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|h| h.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_shape_and_hermiticity_defects() {
        assert!(matches!(
            DenseHermitian::from_entries(2, vec![c(1.0, 0.0); 3]),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
        let bad = vec![
            c(1.0, 0.0), c(0.5, 0.0),
            c(0.5, 1e-3), c(1.0, 0.0),
        ];
        match DenseHermitian::from_entries(2, bad) {
            Err(Error::NonHermitian { i: 0, j: 1, delta, .. }) => {
                assert!((delta - 5e-4).abs() < 1e-12);
            }
            other => panic!("expected NonHermitian at (0,1), got {other:?}"),
        }
    }

    #[test]
    fn apply_matches_hand_computation() {
        let m = DenseHermitian::from_entries(
            2,
            vec![c(2.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(3.0, 0.0)],
        )
        .unwrap();
        let mut out = vec![c(0.0, 0.0); 2];
        m.apply(&[c(1.0, 0.0), c(0.0, 0.0)], &mut out);
        assert_eq!(out, vec![c(2.0, 0.0), c(0.0, 1.0)]);
        assert!((m.operator_norm_bound() - 4.0).abs() < 1e-15);
    }

    proptest! {
        // <u, H v> = <H u, v> for the symmetrized matrix
        #[test]
        fn apply_is_self_adjoint(seed in proptest::array::uniform32(-1.0f64..1.0)) {
            let n = 4usize;
            let mut entries = vec![c(0.0, 0.0); n * n];
            for i in 0..n {
                for j in 0..n {
                    let k = i * n + j;
                    entries[k] = c(seed[k % 32], seed[(k + 7) % 32]);
                }
            }
            // symmetrize so construction accepts it
            for i in 0..n {
                entries[i * n + i] = c(entries[i * n + i].re, 0.0);
                for j in (i + 1)..n {
                    let avg = (entries[i * n + j] + entries[j * n + i].conj()) / 2.0;
                    entries[i * n + j] = avg;
                    entries[j * n + i] = avg.conj();
                }
            }
            let m = DenseHermitian::from_entries(n, entries).unwrap();
            let u: Vec<_> = (0..n).map(|k| c(seed[k], seed[k + 8])).collect();
            let v: Vec<_> = (0..n).map(|k| c(seed[k + 16], seed[k + 24])).collect();
            let mut hu = vec![c(0.0, 0.0); n];
            let mut hv = vec![c(0.0, 0.0); n];
            m.apply(&u, &mut hu);
            m.apply(&v, &mut hv);
            let lhs: Complex64 = u.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
            let rhs: Complex64 = hu.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
