//! Hermitian 2x2 operators in Pauli coordinates, with an exact propagator.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::TwoLevelState;

/// Relative tolerance for the matrix -> Pauli -> matrix round trip.
pub const PAULI_ROUND_TRIP_RTOL: f64 = 1e-15;

/// Hermiticity tolerance for [`HermitianTwoLevel::from_matrix`].
pub const HERMITICITY_TOL: f64 = 1e-12;

/// H = h0 I + hx sx + hy sy + hz sz with real coefficients.
///
/// The coordinates determine the matrix exactly:
/// H = [[h0 + hz, hx - i hy], [hx + i hy, h0 - hz]].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianTwoLevel {
    pub h0: f64,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
}

impl HermitianTwoLevel {
    pub fn new(h0: f64, hx: f64, hy: f64, hz: f64) -> Self {
        Self { h0, hx, hy, hz }
    }

    /// Reads a 2x2 complex matrix (row major) into Pauli coordinates.
    ///
    /// Rejects matrices whose Hermitian defect exceeds [`HERMITICITY_TOL`]:
    /// imaginary diagonal entries or |H01 - conj(H10)| above tolerance. The
    /// accepted matrix is symmetrized, so the round trip through
    /// [`Self::to_matrix`] reproduces (H + H^dagger)/2.
    pub fn from_matrix(m: &[[Complex64; 2]; 2]) -> Result<Self> {
        let mut worst = (0usize, 0usize, 0.0f64);
        let mut check = |i: usize, j: usize, delta: f64| {
            if delta > worst.2 {
                worst = (i, j, delta);
            }
        };
        check(0, 0, m[0][0].im.abs());
        check(1, 1, m[1][1].im.abs());
        check(0, 1, (m[0][1] - m[1][0].conj()).norm() / 2.0);
        if worst.2 > HERMITICITY_TOL {
            return Err(Error::NonHermitian {
                i: worst.0,
                j: worst.1,
                delta: worst.2,
                tol: HERMITICITY_TOL,
            });
        }
        let off = (m[0][1] + m[1][0].conj()) / 2.0;
        Ok(Self {
            h0: (m[0][0].re + m[1][1].re) / 2.0,
            hz: (m[0][0].re - m[1][1].re) / 2.0,
            hx: off.re,
            hy: -off.im,
        })
    }

    pub fn to_matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [
                Complex64::new(self.h0 + self.hz, 0.0),
                Complex64::new(self.hx, -self.hy),
            ],
            [
                Complex64::new(self.hx, self.hy),
                Complex64::new(self.h0 - self.hz, 0.0),
            ],
        ]
    }

    /// Length of the Pauli vector; the eigenvalue gap is 2 omega.
    pub fn omega(&self) -> f64 {
        (self.hx * self.hx + self.hy * self.hy + self.hz * self.hz).sqrt()
    }

    /// (lower, upper) = (h0 - omega, h0 + omega).
    pub fn eigenvalues(&self) -> (f64, f64) {
        let w = self.omega();
        (self.h0 - w, self.h0 + w)
    }

    /// Applies H to a two-level amplitude pair.
    pub fn apply(&self, s: &TwoLevelState) -> (Complex64, Complex64) {
        let m = self.to_matrix();
        (
            m[0][0] * s.c_alpha + m[0][1] * s.c_beta,
            m[1][0] * s.c_alpha + m[1][1] * s.c_beta,
        )
    }

    /// Evolves `s` for time `t` under the constant operator:
    /// e^{-iHt} = e^{-i h0 t} (cos(omega t) I - i sin(omega t) n.sigma)
    /// with n the unit Pauli vector.
    ///
    /// Exactly unitary up to rounding (norm drift < 4 ulp per call); when
    /// omega = 0 the rotation part is the identity and only the global phase
    /// e^{-i h0 t} acts.
    pub fn propagate_exact(&self, s: &TwoLevelState, t: f64) -> TwoLevelState {
        let phase = Complex64::from_polar(1.0, -self.h0 * t);
        let w = self.omega();
        if w == 0.0 {
            return TwoLevelState::from_raw(phase * s.c_alpha, phase * s.c_beta);
        }
        let (nx, ny, nz) = (self.hx / w, self.hy / w, self.hz / w);
        let (sin, cos) = (w * t).sin_cos();
        let ims = Complex64::new(0.0, -sin);
        // rows of cos I - i sin (n.sigma)
        let a00 = Complex64::new(cos, -sin * nz);
        let a01 = ims * Complex64::new(nx, -ny);
        let a10 = ims * Complex64::new(nx, ny);
        let a11 = Complex64::new(cos, sin * nz);
        TwoLevelState::from_raw(
            phase * (a00 * s.c_alpha + a01 * s.c_beta),
            phase * (a10 * s.c_alpha + a11 * s.c_beta),
        )
    }
}
