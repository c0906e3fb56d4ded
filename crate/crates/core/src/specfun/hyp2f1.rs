use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::gamma::pochhammer_c;
use super::PrecisionPolicy;
use crate::error::{Error, Result};

/// Forward-mode dual number `v + d·ε`, used to differentiate series in a
/// parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: Complex64,
    pub d: Complex64,
}

impl Dual {
    pub fn constant(v: Complex64) -> Self {
        Self { v, d: Complex64::new(0.0, 0.0) }
    }

    pub fn variable(v: Complex64) -> Self {
        Self { v, d: Complex64::new(1.0, 0.0) }
    }

    fn scale(self, s: Complex64) -> Self {
        Self { v: self.v * s, d: self.d * s }
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d: self.d - o.d }
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = 1.0 / o.v;
        Self { v: self.v * inv, d: (self.d - self.v * o.d * inv) * inv }
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d: -self.d }
    }
}

fn check_c(c: Complex64) -> Result<()> {
    if c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round() {
        return Err(Error::Pole(format!("c = {} in 2F1", c.re)));
    }
    Ok(())
}

/// Gauss series `Σ (a)_k (b)_k / ((c)_k k!) x^k` with the parameters as dual
/// numbers. Stops once three consecutive terms fall below
/// `target·|partial sum|`, after at least 16 terms.
fn series(a: Dual, b: Dual, c: Dual, x: Complex64, policy: &PrecisionPolicy) -> Result<Dual> {
    let one = Dual::constant(Complex64::new(1.0, 0.0));
    let mut term = one;
    let mut sum = one;
    let mut small = 0;
    for k in 0..policy.max_terms {
        let kf = Dual::constant(Complex64::new(k as f64, 0.0));
        let kp1 = Complex64::new(k as f64 + 1.0, 0.0);
        term = term * (a + kf) * (b + kf) / (c + kf);
        term = term.scale(x / kp1);
        sum = sum + term;
        let mag = term.v.norm() + term.d.norm();
        let scale = sum.v.norm() + sum.d.norm();
        if mag <= policy.target * scale {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && k + 1 >= 16 {
            return Ok(sum);
        }
        if !sum.v.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence { what: format!("2F1 series at x = {x}"), terms: policy.max_terms })
}

/// `F(a,b;c;ξ/(ξ−1))` for `ξ ∈ (0,1)` through the Pfaff transformation
/// `(1−ξ)^a F(a, c−b; c; ξ)`.
pub fn gauss_2f1_xi(a: Complex64, b: Complex64, c: Complex64, xi: f64, policy: &PrecisionPolicy) -> Result<Complex64> {
    Ok(gauss_2f1_xi_dc(a, b, c, xi, policy)?.0)
}

/// As [`gauss_2f1_xi`], together with `∂F/∂c`.
pub fn gauss_2f1_xi_dc(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    xi: f64,
    policy: &PrecisionPolicy,
) -> Result<(Complex64, Complex64)> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("ξ = {xi} outside (0,1)")));
    }
    check_c(c)?;
    let cd = Dual::variable(c);
    let s = series(Dual::constant(a), cd - Dual::constant(b), cd, Complex64::new(xi, 0.0), policy)?;
    let pref = Complex64::new(1.0 - xi, 0.0).powc(a);
    Ok((s.v * pref, s.d * pref))
}

/// `F(a,b;c;ζ)` on the half-plane `Re ζ < 1/2` (directly when `|ζ| ≤ 1/2`,
/// otherwise by Pfaff into the unit disc).
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, zeta: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    Ok(gauss_2f1_dc(a, b, c, zeta, policy)?.0)
}

/// As [`gauss_2f1`], together with `∂F/∂c`.
pub fn gauss_2f1_dc(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    zeta: Complex64,
    policy: &PrecisionPolicy,
) -> Result<(Complex64, Complex64)> {
    check_c(c)?;
    let cd = Dual::variable(c);
    if zeta.norm() <= 0.5 {
        let s = series(Dual::constant(a), Dual::constant(b), cd, zeta, policy)?;
        return Ok((s.v, s.d));
    }
    if zeta.re >= 0.5 {
        return Err(Error::Domain(format!("2F1 argument {zeta} outside Re ζ < 1/2")));
    }
    let w = zeta / (zeta - 1.0);
    let s = series(Dual::constant(a), cd - Dual::constant(b), cd, w, policy)?;
    let pref = (1.0 - zeta).powc(-a);
    Ok((s.v * pref, s.d * pref))
}

/// `Res_{c=−n} F(a,b;c;ζ)
///   = (−1)^n ζ^{n+1} (a)_{n+1}(b)_{n+1} / (n!(n+1)!) · F(a+n+1, b+n+1; n+2; ζ)`.
pub fn residue_2f1_c(a: Complex64, b: Complex64, n: usize, zeta: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    let n1 = n + 1;
    let coef = pochhammer_c(a, n1) * pochhammer_c(b, n1);
    if coef == Complex64::new(0.0, 0.0) {
        return Ok(coef);
    }
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= k as f64;
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let f = gauss_2f1(a + n1 as f64, b + n1 as f64, Complex64::new(n as f64 + 2.0, 0.0), zeta, policy)?;
    Ok(sign * zeta.powu(n1 as u32) * coef / (fact * fact * n1 as f64) * f)
}
