//! Two-point averages `⟨H(u)E(v)⟩` and the correlation kernels they produce:
//! the discrete hypergeometric kernel on `ℤ'` and the Whittaker kernel on
//! `ℝ* = ℝ₊ ⊔ ℝ₋`.
//!
//! Both kernels share one shape. With `h` a positive weight and `m(u)` a
//! 2×2 matrix function, at each real point only one column of `m` is
//! regular: `(m₁₁, m₂₁)` for `x > 0` and `(m₁₂, m₂₂)` for `x < 0`. Writing
//! `r(x)` for that column,
//!
//! ```text
//! K(x, y) = −sgn(y) h(x) h(y) (r₁(x) r₂(y) − r₂(x) r₁(y)) / (x − y),
//! K(x, x) =  sgn(x) h(x)²     (r₁ r₂′ − r₂ r₁′)(x),
//! ```
//!
//! which is the four-block formula written once.

mod discrete;
mod whittaker;

pub use discrete::{
    h_weight, jump_check, kernel_discrete, kernel_via_residues, m_matrix, rho_m_det, two_point_avg_discrete, DiscreteKernel,
};
pub use whittaker::{
    h_continuous, kernel_whittaker, m_matrix_whittaker, two_point_avg_omega, two_point_avg_omega_series, two_point_avg_tilde,
    two_point_avg_tilde_asymptotic, WhittakerKernel,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::det;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Discrete,
    Whittaker,
}

/// The matrix `m(u)` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
    pub regime: Regime,
}

impl MMatrix {
    /// Largest entrywise distance from the identity.
    pub fn distance_to_identity(&self) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        [(self.m11 - one).norm(), self.m12.norm(), self.m21.norm(), (self.m22 - one).norm()]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

/// `⟨E(−v)H(u)⟩ = m₁₁(v) m₂₂(u) − m₂₁(v) m₁₂(u)`.
pub fn pair_average(mv: &MMatrix, mu: &MMatrix) -> Complex64 {
    mv.m11 * mu.m22 - mv.m21 * mu.m12
}

/// Data attached to a single real point: the weight, the regular column of
/// `m`, its derivative, and (discrete case) the residues of the other column.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PointData {
    pub x: f64,
    pub h: f64,
    pub r: [Complex64; 2],
    pub dr: [Complex64; 2],
}

pub(crate) fn block_kernel(px: &PointData, py: &PointData) -> f64 {
    let v = if px.x == py.x {
        px.x.signum() * px.h * px.h * (px.r[0] * px.dr[1] - px.r[1] * px.dr[0])
    } else {
        -py.x.signum() * px.h * py.h * (px.r[0] * py.r[1] - px.r[1] * py.r[0]) / (px.x - py.x)
    };
    v.re
}

/// `det[K(x_i, x_j)]` for distinct points.
pub(crate) fn correlation_det<P: PartialEq + Copy>(points: &[P], k: impl Fn(P, P) -> Result<f64>) -> Result<f64> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].contains(a) {
            return Err(Error::InvalidConfiguration("repeated point in correlation function".into()));
        }
    }
    let n = points.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = k(points[i], points[j])?;
        }
    }
    Ok(det(n, |i, j| m[i * n + j]))
}
