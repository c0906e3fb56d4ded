//! The discrete hypergeometric kernel of `M_{z,z′,ξ}` on `ℤ'`.
//!
//! All Gauss functions are taken at `ζ = ξ/(ξ−1)` and written `F(a, b; c)`.
//! `m(u)` has entries
//!
//! ```text
//! m₁₁ = F(−z, −z′; u + 1/2)         m₁₂ =  C F(1+z, 1+z′; −u + 3/2) / (−u + 1/2)
//! m₂₁ = −C F(1−z, 1−z′; u + 3/2) / (u + 1/2)          m₂₂ = F(z, z′; −u + 1/2)
//! ```
//!
//! with `C = √(zz′ξ)/(1−ξ)`; the first column has poles on `ℤ'₋`, the second
//! on `ℤ'₊`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;

use super::{block_kernel, correlation_det, pair_average, MMatrix, PointData, Regime};
use crate::error::{Error, Result};
use crate::partition::HalfInt;
use crate::scalar::q_to_f64;
use crate::specfun::{gauss_2f1_xi, gauss_2f1_xi_dc, residue_2f1_c, PrecisionPolicy};
use crate::zmeasure::MixedZParams;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `h(x)` on `ℤ'`. For `x = k + 1/2 > 0`
/// `h = (zz′)^{1/4} ξ^{x/2} (1−ξ)^{(z+z′)/2} √((z+1)_k (z′+1)_k) / k!`,
/// and symmetrically with `−z, −z′` for `x < 0`.
pub fn h_weight(x: HalfInt, mp: &MixedZParams) -> f64 {
    let (p, s) = mp.base.real_pair();
    let xi = mp.xi_f64();
    let xv = x.value();
    let k = x.frobenius_index() as i64;
    let sign = if x.is_positive() { 1 } else { -1 };
    let mut ln = 0.25 * p.ln() + 0.5 * xv.abs() * xi.ln() + sign as f64 * 0.5 * s * (1.0 - xi).ln();
    for j in 1..=k {
        ln += 0.5 * (q_to_f64(&mp.base.box_factor(sign * j)) / (j * j) as f64).ln();
    }
    ln.exp()
}

/// `⟨H(u)E(v)⟩` under `M_{z,z′,ξ}`, directly from its product-of-`₂F₁` form.
pub fn two_point_avg_discrete(u: Complex64, v: Complex64, mp: &MixedZParams) -> Result<Complex64> {
    let pol = PrecisionPolicy::default();
    let (z, zp) = (mp.base.z_c64(), mp.base.zp_c64());
    let (p, _) = mp.base.real_pair();
    let xi = mp.xi_f64();
    let half = c64(0.5);
    let f1 = gauss_2f1_xi(z, zp, -u + half, xi, &pol)?;
    let f2 = gauss_2f1_xi(-z, -zp, -v + half, xi, &pol)?;
    let f3 = gauss_2f1_xi(z + 1.0, zp + 1.0, -u + 1.5, xi, &pol)?;
    let f4 = gauss_2f1_xi(-z + 1.0, -zp + 1.0, -v + 1.5, xi, &pol)?;
    let pref = p * xi / ((1.0 - xi) * (1.0 - xi)) / ((u - half) * (v - half));
    Ok(f1 * f2 + pref * f3 * f4)
}

/// Kernel of `M_{z,z′,ξ}` with per-point caching of the `₂F₁` data.
pub struct DiscreteKernel {
    mp: MixedZParams,
    policy: PrecisionPolicy,
    z: Complex64,
    zp: Complex64,
    xi: f64,
    zeta: Complex64,
    c: f64,
    cache: Mutex<HashMap<i64, (PointData, [Complex64; 2])>>,
}

impl DiscreteKernel {
    pub fn new(mp: &MixedZParams) -> Self {
        Self::with_policy(mp, PrecisionPolicy::default())
    }

    pub fn with_policy(mp: &MixedZParams, policy: PrecisionPolicy) -> Self {
        let xi = mp.xi_f64();
        let (p, _) = mp.base.real_pair();
        Self {
            mp: mp.clone(),
            policy,
            z: mp.base.z_c64(),
            zp: mp.base.zp_c64(),
            xi,
            zeta: c64(xi / (xi - 1.0)),
            c: (p * xi).sqrt() / (1.0 - xi),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &MixedZParams {
        &self.mp
    }

    fn f(&self, a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
        gauss_2f1_xi(a, b, c, self.xi, &self.policy)
    }

    fn f_dc(&self, a: Complex64, b: Complex64, c: Complex64) -> Result<(Complex64, Complex64)> {
        gauss_2f1_xi_dc(a, b, c, self.xi, &self.policy)
    }

    fn pole(u: Complex64, negative: bool) -> Result<()> {
        if u.im == 0.0 && (u.re - 0.5).rem_euclid(1.0) == 0.0 && (u.re < 0.0) == negative {
            return Err(Error::Pole(format!("m(u) at lattice point u = {}", u.re)));
        }
        Ok(())
    }

    /// `m(u)` off `ℤ'`.
    pub fn m_matrix(&self, u: Complex64) -> Result<MMatrix> {
        Self::pole(u, true)?;
        Self::pole(u, false)?;
        let (col1, col2) = (self.column_neg_poles(u)?, self.column_pos_poles(u)?);
        Ok(MMatrix { m11: col1[0], m21: col1[1], m12: col2[0], m22: col2[1], regime: Regime::Discrete })
    }

    /// `(m₁₁, m₂₁)(u)`, regular off `ℤ'₋`.
    fn column_neg_poles(&self, u: Complex64) -> Result<[Complex64; 2]> {
        let (z, zp) = (self.z, self.zp);
        let m11 = self.f(-z, -zp, u + 0.5)?;
        let m21 = -self.c * self.f(1.0 - z, 1.0 - zp, u + 1.5)? / (u + 0.5);
        Ok([m11, m21])
    }

    /// `(m₁₂, m₂₂)(u)`, regular off `ℤ'₊`.
    fn column_pos_poles(&self, u: Complex64) -> Result<[Complex64; 2]> {
        let (z, zp) = (self.z, self.zp);
        let m12 = self.c * self.f(1.0 + z, 1.0 + zp, -u + 1.5)? / (-u + 0.5);
        let m22 = self.f(z, zp, -u + 0.5)?;
        Ok([m12, m22])
    }

    /// Regular column, its `u`-derivative, and the residues of the other
    /// column at the lattice point `x`: `(R₁₂, R₂₂)` for `x > 0`,
    /// `(R₁₁, R₂₁)` for `x < 0`.
    fn point(&self, x: HalfInt) -> Result<(PointData, [Complex64; 2])> {
        if let Some(v) = self.cache.lock().unwrap().get(&x.twice()) {
            return Ok(*v);
        }
        let (z, zp, cc, zeta) = (self.z, self.zp, self.c, self.zeta);
        let xv = x.value();
        let u = c64(xv);
        let n = x.frobenius_index();
        let h = h_weight(x, &self.mp);
        let data = if x.is_positive() {
            let (f11, d11) = self.f_dc(-z, -zp, u + 0.5)?;
            let (f21, d21) = self.f_dc(1.0 - z, 1.0 - zp, u + 1.5)?;
            let s = u + 0.5;
            let m21 = -cc * f21 / s;
            let dm21 = -cc * (d21 / s - f21 / (s * s));
            // c = −u + 1/2 = −n in m₂₂, so Res_u = −Res_c
            let r22 = -residue_2f1_c(z, zp, n, zeta, &self.policy)?;
            let r12 = if n == 0 {
                -cc * self.f(1.0 + z, 1.0 + zp, c64(1.0))?
            } else {
                cc * -residue_2f1_c(1.0 + z, 1.0 + zp, n - 1, zeta, &self.policy)? / (-u + 0.5)
            };
            (PointData { x: xv, h, r: [f11, m21], dr: [d11, dm21] }, [r12, r22])
        } else {
            let (f22, d22) = self.f_dc(z, zp, -u + 0.5)?;
            let (f12, d12) = self.f_dc(1.0 + z, 1.0 + zp, -u + 1.5)?;
            let s = -u + 0.5;
            let m12 = cc * f12 / s;
            let dm12 = cc * (-d12 / s + f12 / (s * s));
            let r11 = residue_2f1_c(-z, -zp, n, zeta, &self.policy)?;
            let r21 = if n == 0 {
                -cc * self.f(1.0 - z, 1.0 - zp, c64(1.0))?
            } else {
                -cc * residue_2f1_c(1.0 - z, 1.0 - zp, n - 1, zeta, &self.policy)? / (u + 0.5)
            };
            (PointData { x: xv, h, r: [m12, f22], dr: [dm12, -d22] }, [r11, r21])
        };
        self.cache.lock().unwrap().insert(x.twice(), data);
        Ok(data)
    }

    /// `K(x, y)` in the symmetric-block form, diagonal from the exact
    /// `u`-derivative of `m`.
    pub fn kernel(&self, x: HalfInt, y: HalfInt) -> Result<f64> {
        Ok(block_kernel(&self.point(x)?.0, &self.point(y)?.0))
    }

    /// The same kernel in residue form, before conjugation by `h`:
    /// `K_res(x, y) = g(x)^{-1} K(x, y) g(y)` with `g = h^{sgn}`.
    pub fn kernel_via_residues(&self, x: HalfInt, y: HalfInt) -> Result<f64> {
        let (px, rx) = self.point(x)?;
        let (py, ry) = self.point(y)?;
        let (xv, yv) = (px.x, py.x);
        let v = match (x.is_positive(), y.is_positive()) {
            (true, true) if x == y => px.dr[0] * rx[1] - px.dr[1] * rx[0],
            // Res_{u=y} ⟨E(−x)H(u)⟩ / (x − y)
            (true, true) => (px.r[0] * ry[1] - px.r[1] * ry[0]) / (xv - yv),
            (false, true) => -(rx[0] * ry[1] - rx[1] * ry[0]) / (xv - yv),
            (true, false) => (px.r[0] * py.r[1] - px.r[1] * py.r[0]) / (xv - yv),
            (false, false) if x == y => rx[0] * px.dr[1] - rx[1] * px.dr[0],
            (false, false) => -(rx[0] * py.r[1] - rx[1] * py.r[0]) / (xv - yv),
        };
        Ok(v.re)
    }

    /// Diagonal by Richardson extrapolation of symmetric difference
    /// quotients along `y → x` off the lattice.
    pub fn diagonal_richardson(&self, x: HalfInt) -> Result<f64> {
        let (px, _) = self.point(x)?;
        let col = |y: f64| {
            if x.is_positive() {
                self.column_neg_poles(c64(y))
            } else {
                self.column_pos_poles(c64(y))
            }
        };
        let quotient = |d: f64| -> Result<Complex64> {
            let (a, b) = (col(px.x + d)?, col(px.x - d)?);
            // derivative of r₁(x) r₂(y) − r₂(x) r₁(y) in y
            Ok((px.r[0] * (a[1] - b[1]) - px.r[1] * (a[0] - b[0])) / (2.0 * d))
        };
        let mut table: Vec<Complex64> = Vec::new();
        let mut d = 1e-2;
        for level in 0..5 {
            let mut row = vec![quotient(d)?];
            for k in 1..=level {
                let f = 4f64.powi(k as i32);
                let prev = table[k - 1];
                row.push((f * row[k - 1] - prev) / (f - 1.0));
            }
            table = row;
            d /= 2.0;
        }
        let deriv = *table.last().expect("nonempty");
        Ok((px.x.signum() * px.h * px.h * deriv).re)
    }

    /// Largest entry of `Res_{u=x} m(u) − lim_{u→x} m(u) w(x)`.
    pub fn jump_residual(&self, x: HalfInt) -> Result<f64> {
        let (px, res) = self.point(x)?;
        let h2 = px.h * px.h;
        // x > 0: column 2 jumps by −h² × column 1; x < 0: column 1 by −h² × column 2
        let d = [(res[0] + h2 * px.r[0]).norm(), (res[1] + h2 * px.r[1]).norm()];
        Ok(d[0].max(d[1]))
    }

    /// `ρ_m(x₁, …, x_m) = det[K(x_i, x_j)]`.
    pub fn rho(&self, points: &[HalfInt]) -> Result<f64> {
        correlation_det(points, |a, b| self.kernel(a, b))
    }

    pub fn rho_via_residues(&self, points: &[HalfInt]) -> Result<f64> {
        correlation_det(points, |a, b| self.kernel_via_residues(a, b))
    }

    /// `⟨E(−v)H(u)⟩` through `m`.
    pub fn pair_average(&self, u: Complex64, v: Complex64) -> Result<Complex64> {
        Ok(pair_average(&self.m_matrix(v)?, &self.m_matrix(u)?))
    }
}

pub fn m_matrix(u: Complex64, mp: &MixedZParams) -> Result<MMatrix> {
    DiscreteKernel::new(mp).m_matrix(u)
}

pub fn kernel_discrete(x: HalfInt, y: HalfInt, mp: &MixedZParams) -> Result<f64> {
    DiscreteKernel::new(mp).kernel(x, y)
}

pub fn kernel_via_residues(x: HalfInt, y: HalfInt, mp: &MixedZParams) -> Result<f64> {
    DiscreteKernel::new(mp).kernel_via_residues(x, y)
}

pub fn jump_check(x: HalfInt, mp: &MixedZParams) -> Result<f64> {
    DiscreteKernel::new(mp).jump_residual(x)
}

pub fn rho_m_det(points: &[HalfInt], mp: &MixedZParams) -> Result<f64> {
    DiscreteKernel::new(mp).rho(points)
}
