//! Whittaker's `W_{κ,μ}` through the normalized Laplace integral
//!
//! ```text
//! T(a, p, w) = (1/Γ(a)) ∫₀^∞ e^{−s} s^{a−1} (1 + s/w)^p ds,
//! W_{κ,μ}(x) = e^{−x/2} x^κ T(1/2 + μ − κ, μ + κ − 1/2, x).
//! ```
//!
//! For `Re a < 1/2` the integral is continued by integrating by parts `k`
//! times, which replaces `s^{a−1}/Γ(a)` by `s^{a+k−1}/Γ(a+k)` and `(1+s/w)^p`
//! by `(1 − d/ds)^k (1+s/w)^p`. At `a = 0` this gives `T = 1`.

use num_complex::Complex64;

use super::gamma::rgamma;
use super::quad::exp_sinh;
use super::PrecisionPolicy;
use crate::error::{Error, Result};

/// `T(a, p, w)` for `w ∉ (−∞, 0]`.
pub fn tricomi_t(a: Complex64, p: Complex64, w: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::Domain(format!("T(a,p,w) evaluated on the cut, w = {}", w.re)));
    }
    if !w.is_finite() || !a.is_finite() || !p.is_finite() {
        return Err(Error::Domain("non-finite argument to T(a,p,w)".into()));
    }
    let k = if a.re >= 0.5 { 0 } else { (0.5 - a.re).ceil() as usize };
    let c = a + k as f64;
    // binomial(k, j) (−1)^j · p(p−1)…(p−j+1) · w^{−j}
    let mut coef = Vec::with_capacity(k + 1);
    let mut falling = Complex64::new(1.0, 0.0);
    let mut binom = 1.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coef.push(binom * sign * falling / w.powu(j as u32));
        falling *= p - j as f64;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    let theta = if w.re >= 0.0 { 0.0 } else { w.im.signum() * std::f64::consts::FRAC_PI_4 };
    let rot = Complex64::from_polar(1.0, theta);
    let integrand = |x: f64| -> Complex64 {
        let s = rot * x;
        let ln_s = Complex64::new(x.ln(), theta);
        let ln_base = (1.0 + s / w).ln();
        let mut phi = Complex64::new(0.0, 0.0);
        for (j, cj) in coef.iter().enumerate() {
            phi += cj * ((p - j as f64) * ln_base).exp();
        }
        (-s + (c - 1.0) * ln_s).exp() * phi * rot
    };
    let integral = exp_sinh(integrand, policy.quad_tol)?;
    Ok(rgamma(c) * integral)
}

/// `∂T/∂w = −(a p / w²) T(a+1, p−1, w)`.
pub fn tricomi_t_dw(a: Complex64, p: Complex64, w: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    Ok(-(a * p) / (w * w) * tricomi_t(a + 1.0, p - 1.0, w, policy)?)
}

/// Divergent expansion `T(a,p,w) ~ Σ_k (a)_k (−p)_k (−1/w)^k / k!`, summed up
/// to (excluding) its smallest term.
pub fn tricomi_t_asymptotic(a: Complex64, p: Complex64, w: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = term.norm();
    for k in 0..500 {
        let kf = k as f64;
        let next = term * (a + kf) * (-p + kf) * (-1.0 / w) / (kf + 1.0);
        if next.norm() >= prev || next.norm() == 0.0 {
            if next.norm() == 0.0 {
                sum += next;
            }
            break;
        }
        prev = next.norm();
        term = next;
        sum += term;
    }
    sum
}

/// `W_{κ,μ}(x)` for complex `κ, μ` and `x ∉ (−∞, 0]`, principal branch of `x^κ`.
pub fn whittaker_w_c(kappa: Complex64, mu: Complex64, x: Complex64, policy: &PrecisionPolicy) -> Result<Complex64> {
    let t = tricomi_t(0.5 + mu - kappa, mu + kappa - 0.5, x, policy)?;
    Ok((-x / 2.0).exp() * x.powc(kappa) * t)
}

/// `W_{κ,μ}(x)` for real parameters and `x > 0`.
pub fn whittaker_w(kappa: f64, mu: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("W_{{κ,μ}}(x) needs x > 0, got {x}")));
    }
    let v = whittaker_w_c(Complex64::new(kappa, 0.0), Complex64::new(mu, 0.0), Complex64::new(x, 0.0), policy)?;
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::gauss_kronrod_half_line;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn closed_form_at_zero_first_parameter() {
        for (mu, x) in [(0.25, 0.3), (1.3, 2.0), (-0.2, 7.5)] {
            let w = whittaker_w(mu + 0.5, mu, x, &pol()).unwrap();
            let want = x.powf(mu + 0.5) * (-x / 2.0).exp();
            assert!((w - want).abs() < 1e-12 * want, "μ={mu}, x={x}");
        }
    }

    #[test]
    fn reference_values() {
        // mpmath.whitw
        let cases = [
            (1.0, 0.25, 2.0, 0.669_289_611_085_905_1),
            (0.3, 0.7, 0.5, 1.011_401_080_197_945_6),
            (-1.2, 0.4, 3.0, 0.033_086_948_773_067_65),
            (2.4, 0.1, 1.5, -0.949_974_073_091_913_8),
        ];
        for (k, m, x, want) in cases {
            let got = whittaker_w(k, m, x, &pol()).unwrap();
            assert!((got - want).abs() < 1e-11 * want.abs(), "W({k},{m},{x}) = {got}, want {want}");
        }
    }

    #[test]
    fn complex_parameters_and_arguments() {
        // mpmath: w^a · hyperu(a, p+a+1, w)
        let cases = [
            (c(-0.5, 1.0), c(0.5, 1.0), c(2.0, 0.0), c(0.509_874_113_979_923_7, 0.0)),
            (c(0.5, 1.0), c(-0.5, 1.0), c(-1.5, 2.0), c(1.011_534_934_553_284_4, 0.526_911_808_703_451_5)),
            (c(1.4, 0.0), c(-2.4, 0.0), c(-3.0, -0.5), c(0.577_832_305_285_751_8, -1.958_748_409_872_703_7)),
        ];
        for (a, p, w, want) in cases {
            let got = tricomi_t(a, p, w, &pol()).unwrap();
            assert!((got - want).norm() < 1e-11 * want.norm(), "T({a},{p},{w}) = {got}, want {want}");
        }
    }

    #[test]
    fn independent_quadrature_cross_check() {
        // (κ, μ, x) = (1, 1/4, 2): a = −1/4 needs one integration by parts;
        // compare against Gauss–Kronrod on the same continued integrand.
        let (kappa, mu, x) = (1.0, 0.25, 2.0);
        let a: f64 = 0.5 + mu - kappa;
        let p: f64 = mu + kappa - 0.5;
        let c = a + 1.0;
        // s = v⁴ removes the s^{−1/4} endpoint singularity
        let g = gauss_kronrod_half_line(
            |v| {
                let s = v.powi(4);
                let phi = (1.0 + s / x).powf(p) - p / x * (1.0 + s / x).powf(p - 1.0);
                Complex64::new(4.0 * v.powi(3) * (-s).exp() * s.powf(c - 1.0) * phi, 0.0)
            },
            1e-13,
        )
        .unwrap()
        .re;
        let gamma_c = crate::specfun::gamma(Complex64::new(c, 0.0)).re;
        let via_gk = (-x / 2.0).exp() * x.powf(kappa) * g / gamma_c;
        let via_de = whittaker_w(kappa, mu, x, &pol()).unwrap();
        assert!((via_gk - via_de).abs() < 1e-10);
    }

    #[test]
    fn large_argument_asymptotics() {
        let (kappa, mu, x) = (0.7, 0.3, 50.0);
        let ratio = whittaker_w(kappa, mu, x, &pol()).unwrap() / ((-x / 2.0).exp() * x.powf(kappa));
        assert!((ratio - 1.0).abs() < 0.05);
        let t = tricomi_t(c(0.4, 0.0), c(0.6, 0.0), c(40.0, 0.0), &pol()).unwrap();
        let asym = tricomi_t_asymptotic(c(0.4, 0.0), c(0.6, 0.0), c(40.0, 0.0));
        assert!((t - asym).norm() < 1e-10);
    }

    #[test]
    fn derivative_in_w() {
        let (a, p, w) = (c(-0.3, 0.5), c(0.8, 0.5), c(1.7, 0.2));
        let d = tricomi_t_dw(a, p, w, &pol()).unwrap();
        let h = 1e-5;
        let fd = (tricomi_t(a, p, w + h, &pol()).unwrap() - tricomi_t(a, p, w - h, &pol()).unwrap()) / (2.0 * h);
        assert!((d - fd).norm() < 1e-8);
    }

    #[test]
    fn rejects_cut() {
        assert!(whittaker_w(0.5, 0.1, -1.0, &pol()).is_err());
        assert!(tricomi_t(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), &pol()).is_err());
    }
}
