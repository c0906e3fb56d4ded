//! The Whittaker kernel on `ℝ*` and the averages behind it.
//!
//! With `T(a, p, w)` the normalized Laplace integral of `specfun`, the
//! matrix `m(u)` is
//!
//! ```text
//! m₁₁ = T(−z′, z, u)                       m₁₂ = −(√(zz′)/u) T(1+z, −1−z′, −u)
//! m₂₁ = −(√(zz′)/u) T(1−z′, z−1, u)        m₂₂ = T(z, −z′, −u)
//! ```
//!
//! so the first column is analytic off `(−∞, 0]` and the second off `[0, ∞)`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;

use super::{block_kernel, correlation_det, pair_average, MMatrix, PointData, Regime};
use crate::error::{Error, Result};
use crate::specfun::{f3, lgamma, tricomi_t, tricomi_t_asymptotic, tricomi_t_dw, whittaker_w_c, PrecisionPolicy};
use crate::zmeasure::ZParams;

/// `h(x) = (zz′)^{1/4} x^{(z+z′)/2} e^{−x/2} / √(Γ(z+1)Γ(z′+1))` for `x > 0`,
/// `(zz′)^{1/4} (−x)^{−(z+z′)/2} e^{x/2} / √(Γ(1−z)Γ(1−z′))` for `x < 0`.
pub fn h_continuous(x: f64, zp: &ZParams) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("h(x) needs x ∈ ℝ*, got {x}")));
    }
    let (p, s) = zp.real_pair();
    let (z, w) = (zp.z_c64(), zp.zp_c64());
    let sign = x.signum();
    let lg = (lgamma(1.0 + sign * z) + lgamma(1.0 + sign * w)).re;
    let ln = 0.25 * p.ln() + sign * 0.5 * s * x.abs().ln() - 0.5 * x.abs() - 0.5 * lg;
    Ok(ln.exp())
}

/// Whittaker kernel with per-point caching.
pub struct WhittakerKernel {
    zp: ZParams,
    policy: PrecisionPolicy,
    z: Complex64,
    w: Complex64,
    root: f64,
    cache: Mutex<HashMap<u64, PointData>>,
}

impl WhittakerKernel {
    pub fn new(zp: &ZParams) -> Self {
        Self::with_policy(zp, PrecisionPolicy::default())
    }

    pub fn with_policy(zp: &ZParams, policy: PrecisionPolicy) -> Self {
        let (p, _) = zp.real_pair();
        Self {
            zp: zp.clone(),
            policy,
            z: zp.z_c64(),
            w: zp.zp_c64(),
            root: p.sqrt(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn t(&self, a: Complex64, p: Complex64, w: Complex64) -> Result<Complex64> {
        tricomi_t(a, p, w, &self.policy)
    }

    fn t_dw(&self, a: Complex64, p: Complex64, w: Complex64) -> Result<Complex64> {
        tricomi_t_dw(a, p, w, &self.policy)
    }

    /// `m(u)` for `u ∉ ℝ`.
    pub fn m_matrix(&self, u: Complex64) -> Result<MMatrix> {
        if u.im == 0.0 {
            return Err(Error::Domain(format!("Whittaker m(u) needs u ∉ ℝ, got {}", u.re)));
        }
        let c1 = self.first_column(u)?;
        let c2 = self.second_column(u)?;
        Ok(MMatrix { m11: c1[0], m21: c1[1], m12: c2[0], m22: c2[1], regime: Regime::Whittaker })
    }

    fn first_column(&self, u: Complex64) -> Result<[Complex64; 2]> {
        let (z, w) = (self.z, self.w);
        let m11 = self.t(-w, z, u)?;
        let m21 = -self.root / u * self.t(1.0 - w, z - 1.0, u)?;
        Ok([m11, m21])
    }

    fn second_column(&self, u: Complex64) -> Result<[Complex64; 2]> {
        let (z, w) = (self.z, self.w);
        let m12 = -self.root / u * self.t(1.0 + z, -1.0 - w, -u)?;
        let m22 = self.t(z, -w, -u)?;
        Ok([m12, m22])
    }

    fn point(&self, x: f64) -> Result<PointData> {
        if let Some(v) = self.cache.lock().unwrap().get(&x.to_bits()) {
            return Ok(*v);
        }
        let (z, w, rt) = (self.z, self.w, self.root);
        let u = Complex64::new(x, 0.0);
        let h = h_continuous(x, &self.zp)?;
        let data = if x > 0.0 {
            let m11 = self.t(-w, z, u)?;
            let d11 = self.t_dw(-w, z, u)?;
            let t21 = self.t(1.0 - w, z - 1.0, u)?;
            let d21 = self.t_dw(1.0 - w, z - 1.0, u)?;
            let m21 = -rt / u * t21;
            let dm21 = rt / (u * u) * t21 - rt / u * d21;
            PointData { x, h, r: [m11, m21], dr: [d11, dm21] }
        } else {
            let t12 = self.t(1.0 + z, -1.0 - w, -u)?;
            let d12 = self.t_dw(1.0 + z, -1.0 - w, -u)?;
            let m12 = -rt / u * t12;
            let dm12 = rt / (u * u) * t12 + rt / u * d12;
            let m22 = self.t(z, -w, -u)?;
            let d22 = -self.t_dw(z, -w, -u)?;
            PointData { x, h, r: [m12, m22], dr: [dm12, d22] }
        };
        self.cache.lock().unwrap().insert(x.to_bits(), data);
        Ok(data)
    }

    pub fn kernel(&self, x: f64, y: f64) -> Result<f64> {
        Ok(block_kernel(&self.point(x)?, &self.point(y)?))
    }

    /// `ρ₁(x) = K(x, x)`.
    pub fn density(&self, x: f64) -> Result<f64> {
        self.kernel(x, x)
    }

    pub fn rho(&self, points: &[f64]) -> Result<f64> {
        correlation_det(points, |a, b| self.kernel(a, b))
    }

    /// `⟨H(u)E(v)⟩` under `P̃` as `m₁₁(−v) m₂₂(u) − m₂₁(−v) m₁₂(u)`.
    pub fn pair_average_tilde(&self, u: Complex64, v: Complex64) -> Result<Complex64> {
        Ok(pair_average(&self.m_matrix(-v)?, &self.m_matrix(u)?))
    }
}

pub fn m_matrix_whittaker(u: Complex64, zp: &ZParams) -> Result<MMatrix> {
    WhittakerKernel::new(zp).m_matrix(u)
}

pub fn kernel_whittaker(x: f64, y: f64, zp: &ZParams) -> Result<f64> {
    WhittakerKernel::new(zp).kernel(x, y)
}

/// `⟨E(v)H(u)⟩` under `P_{z,z′}` on the Thoma simplex:
/// `F₃(z, −z, z′, −z′; zz′; 1/u, 1/v) + F₃(z+1, 1−z, z′+1, 1−z′; zz′+2; 1/u, 1/v) / (uv(zz′+1))`.
pub fn two_point_avg_omega(u: Complex64, v: Complex64, zp: &ZParams) -> Result<Complex64> {
    let pol = PrecisionPolicy::default();
    let (z, w) = (zp.z_c64(), zp.zp_c64());
    let (p, _) = zp.real_pair();
    let (x, y) = (1.0 / u, 1.0 / v);
    let pc = Complex64::new(p, 0.0);
    let a = f3(z, -z, w, -w, pc, x, y, &pol)?;
    let b = f3(z + 1.0, 1.0 - z, w + 1.0, 1.0 - w, pc + 2.0, x, y, &pol)?;
    Ok(a + b / (u * v * (p + 1.0)))
}

/// The hook expansion `1 + (u+v) Σ_{p,q<terms} ⟨s_{(p|q)}⟩ / (u^{p+1} v^{q+1})` with
/// `⟨s_{(p|q)}⟩ = (z+1)_p (z′+1)_p (1−z)_q (1−z′)_q / ((zz′+1)_{p+q} p! q! (p+q+1))`.
pub fn two_point_avg_omega_series(u: Complex64, v: Complex64, zp: &ZParams, terms: usize) -> Complex64 {
    let (z, w) = (zp.z_c64(), zp.zp_c64());
    let (pr, _) = zp.real_pair();
    let (iu, iv) = (1.0 / u, 1.0 / v);
    // (zz′+1)_{p+q} = (zz′+1)_p (zz′+1+p)_q is folded into the running
    // products so that no factor overflows on its own
    let mut sum = Complex64::new(0.0, 0.0);
    let mut a = iu;
    for p in 0..terms {
        let pf = p as f64;
        let mut b = iv;
        for q in 0..terms {
            let qf = q as f64;
            sum += a * b / (pf + qf + 1.0);
            b *= (1.0 - z + qf) * (1.0 - w + qf) * iv / ((qf + 1.0) * (pr + 1.0 + pf + qf));
        }
        a *= (z + 1.0 + pf) * (w + 1.0 + pf) * iu / ((pf + 1.0) * (pr + 1.0 + pf));
    }
    Complex64::new(1.0, 0.0) + (u + v) * sum
}

/// `⟨H(u)E(v)⟩` under `P̃_{z,z′}` from the Whittaker-product formula, with
/// `s = z + z′`, `μ = (z − z′)/2`:
///
/// ```text
/// e^{−(u+v)/2} (−v)^{−(s+1)/2} (−u)^{(s−1)/2}
///   × [W_{(s+1)/2,μ}(−v) W_{(1−s)/2,μ}(−u) + zz′ W_{(s−1)/2,μ}(−v) W_{−(s+1)/2,μ}(−u)].
/// ```
pub fn two_point_avg_tilde(u: Complex64, v: Complex64, zp: &ZParams) -> Result<Complex64> {
    let pol = PrecisionPolicy::default();
    let cut = |w: Complex64| w.im == 0.0 && w.re >= 0.0;
    if cut(u) || cut(v) {
        return Err(Error::Domain(format!("⟨H(u)E(v)⟩ on P̃ needs −u, −v off (−∞, 0]; got u = {u}, v = {v}")));
    }
    let (z, w) = (zp.z_c64(), zp.zp_c64());
    let (p, _) = zp.real_pair();
    let s = z + w;
    let mu = (z - w) / 2.0;
    let (nu, nv) = (-u, -v);
    let pref = (-(u + v) / 2.0).exp() * nv.powc(-(s + 1.0) / 2.0) * nu.powc((s - 1.0) / 2.0);
    let a = whittaker_w_c((s + 1.0) / 2.0, mu, nv, &pol)? * whittaker_w_c((1.0 - s) / 2.0, mu, nu, &pol)?;
    let b = whittaker_w_c((s - 1.0) / 2.0, mu, nv, &pol)? * whittaker_w_c(-(s + 1.0) / 2.0, mu, nu, &pol)?;
    Ok(pref * (a + p * b))
}

/// `₂F₀(a, b; x)` summed to its smallest term.
fn f20(a: Complex64, b: Complex64, x: Complex64) -> Complex64 {
    tricomi_t_asymptotic(a, -b, -1.0 / x)
}

/// The divergent-series form
/// `₂F₀(z,z′;1/u) ₂F₀(−z,−z′;1/v) + (zz′/uv) ₂F₀(z+1,z′+1;1/u) ₂F₀(1−z,1−z′;1/v)`.
pub fn two_point_avg_tilde_asymptotic(u: Complex64, v: Complex64, zp: &ZParams) -> Complex64 {
    let (z, w) = (zp.z_c64(), zp.zp_c64());
    let (p, _) = zp.real_pair();
    let (iu, iv) = (1.0 / u, 1.0 / v);
    f20(z, w, iu) * f20(-z, -w, iv) + p * iu * iv * f20(z + 1.0, w + 1.0, iu) * f20(1.0 - z, 1.0 - w, iv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params() -> Vec<ZParams> {
        vec![ZParams::parse("1/2", "1/2").unwrap(), ZParams::parse("1/2+i", "1/2-i").unwrap(), ZParams::parse("4/3", "7/4").unwrap()]
    }

    #[test]
    fn simplex_average_matches_hook_series() {
        for zp in params() {
            let (u, v) = (c(5.0, 0.0), c(5.0, 0.0));
            let a = two_point_avg_omega(u, v, &zp).unwrap();
            let b = two_point_avg_omega_series(u, v, &zp, 60);
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
            let (u, v) = (c(3.0, 2.0), c(-2.0, 4.0));
            let a = two_point_avg_omega(u, v, &zp).unwrap();
            let b = two_point_avg_omega_series(u, v, &zp, 80);
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn cone_average_matches_m_factorization() {
        for zp in params() {
            let k = WhittakerKernel::new(&zp);
            for (u, v) in [(c(1.5, 2.0), c(-0.5, 1.0)), (c(-3.0, -1.0), c(2.0, -2.5)), (c(0.3, -0.7), c(0.4, 0.9))] {
                let a = two_point_avg_tilde(u, v, &zp).unwrap();
                let b = k.pair_average_tilde(u, v).unwrap();
                assert!((a - b).norm() < 1e-10 * a.norm().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn asymptotic_form_at_large_arguments() {
        for zp in params() {
            let (u, v) = (c(0.0, 40.0), c(0.0, -40.0));
            let a = two_point_avg_tilde(u, v, &zp).unwrap();
            let b = two_point_avg_tilde_asymptotic(u, v, &zp);
            assert!((a - b).norm() < 1e-2 * a.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn m_tends_to_identity() {
        let k = WhittakerKernel::new(&params()[0]);
        assert!(k.m_matrix(c(1e3, 1e3)).unwrap().distance_to_identity() < 1e-2);
        assert!(k.m_matrix(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn h_closed_form() {
        let zp = &params()[0];
        let x: f64 = 1.7;
        let want = 0.25f64.powf(0.25) * x.powf(0.5) * (-x / 2.0).exp() / (std::f64::consts::PI.sqrt() / 2.0);
        assert!((h_continuous(x, zp).unwrap() - want).abs() < 1e-14);
        assert!(h_continuous(0.0, zp).is_err());
    }

    #[test]
    fn density_positive_on_grid() {
        for zp in params() {
            let k = WhittakerKernel::new(&zp);
            for i in 1..=50 {
                for x in [0.1 * i as f64, -0.1 * i as f64] {
                    let r = k.density(x).unwrap();
                    assert!(r > 0.0 && r.is_finite(), "ρ₁({x}) = {r}");
                }
            }
        }
    }

    #[test]
    fn kernel_is_continuous_and_real_within_quadrants() {
        let k = WhittakerKernel::new(&params()[1]);
        let pts = [0.3, 0.31, 1.2, 1.21, -0.3, -0.31, -1.2, -1.21];
        for &x in &pts {
            for &y in &pts {
                assert!(k.kernel(x, y).unwrap().is_finite());
            }
        }
        // near-diagonal approaches the diagonal value
        let d = k.kernel(0.8, 0.8).unwrap();
        let n = k.kernel(0.8, 0.8 + 1e-6).unwrap();
        assert!((d - n).abs() < 1e-5);
    }
}
