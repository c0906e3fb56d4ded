//! Special functions used by the kernels: Pochhammer symbols, complex
//! log-gamma, Gauss ₂F₁ at `ξ/(ξ−1)` and its residues in `c`, the Appell
//! F₃ series, Whittaker's W and the quadrature rules behind it.

mod f3;
mod gamma;
mod hyp2f1;
pub mod quad;
mod whittaker;

pub use f3::f3;
pub use gamma::{gamma, lgamma, pochhammer, pochhammer_c, rgamma};
pub use hyp2f1::{gauss_2f1, gauss_2f1_dc, gauss_2f1_xi, gauss_2f1_xi_dc, residue_2f1_c, Dual};
pub use whittaker::{tricomi_t, tricomi_t_asymptotic, tricomi_t_dw, whittaker_w, whittaker_w_c};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy targets shared by series and quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Relative error target for series.
    pub target: f64,
    pub max_terms: usize,
    /// Relative tolerance for quadrature.
    pub quad_tol: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { target: 1e-13, max_terms: 200_000, quad_tol: 1e-12 }
    }
}

impl PrecisionPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.target > 0.0) || !(self.quad_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::Domain(format!("invalid precision policy {self:?}")));
        }
        Ok(())
    }
}
