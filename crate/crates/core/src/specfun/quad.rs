//! Quadrature for complex-valued integrands.
//!
//! [`exp_sinh`] is the double-exponential rule on `(0, ∞)`, the workhorse
//! for the Whittaker integrals (it absorbs the `s^{a−1}` endpoint
//! singularity). [`gauss_kronrod`] is an adaptive 7/15-point rule on finite
//! intervals, used as an independent scheme in cross-checks.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `∫₀^∞ f(x) dx` via `x = exp(π/2 · sinh τ)` and the trapezoid rule, halving
/// the step until two successive levels agree to `tol` (relative).
pub fn exp_sinh(f: impl Fn(f64) -> Complex64, tol: f64) -> Result<Complex64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| -> Complex64 {
        let x = (half_pi * t.sinh()).exp();
        if x == 0.0 || !x.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let w = half_pi * t.cosh() * x;
        let v = f(x) * w;
        if v.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    // truncate the τ-range where the transformed integrand is negligible
    let scan = |dir: f64| -> f64 {
        let mut t: f64 = 0.0;
        let mut quiet = 0;
        let mut peak = node(0.0).norm();
        while t.abs() < 12.0 {
            t += dir * 0.125;
            let v = node(t).norm();
            peak = peak.max(v);
            if v <= 1e-18 * peak.max(f64::MIN_POSITIVE) {
                quiet += 1;
                if quiet >= 4 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        t
    };
    let (lo, hi) = (scan(-1.0), scan(1.0));
    let mut h = 0.5;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut k = (lo / h).floor() as i64;
    while (k as f64) * h <= hi {
        sum += node(k as f64 * h);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..12 {
        // add the midpoints of the current grid
        let mut mid = Complex64::new(0.0, 0.0);
        let mut t = (lo / h).floor() * h + h / 2.0;
        while t <= hi {
            mid += node(t);
            t += h;
        }
        sum += mid;
        h /= 2.0;
        let next = sum * h;
        let diff = (next - estimate).norm();
        if diff <= tol * next.norm() || diff < 1e-300 {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::Quadrature(format!("exp-sinh rule did not settle (last estimate {estimate})")))
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK_WEIGHTS[7];
    let mut gauss = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = r * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kron += s * GK_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += s * G_WEIGHTS[i / 2];
        }
    }
    (kron * r, ((kron - gauss) * r).norm())
}

/// Adaptive Gauss–Kronrod (7/15) on `[a, b]` with absolute-or-relative
/// tolerance `tol`.
pub fn gauss_kronrod(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    let mut stack = vec![(a, b, 0usize)];
    let mut total = Complex64::new(0.0, 0.0);
    let (whole, _) = gk15(&f, a, b);
    let scale = whole.norm().max(1e-300);
    let mut evaluations = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        evaluations += 1;
        let width = (hi - lo) / (b - a);
        if err <= tol * scale * width.max(1e-3) || depth >= 40 {
            if depth >= 40 && err > tol * scale {
                return Err(Error::Quadrature(format!("Gauss-Kronrod bisection limit on [{lo}, {hi}]")));
            }
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
        if evaluations > 200_000 {
            return Err(Error::Quadrature("Gauss-Kronrod evaluation budget exhausted".into()));
        }
    }
    Ok(total)
}

/// `∫₀^∞ f` by Gauss–Kronrod after `x = t/(1−t)`.
pub fn gauss_kronrod_half_line(f: impl Fn(f64) -> Complex64, tol: f64) -> Result<Complex64> {
    gauss_kronrod(
        |t| {
            if t >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let x = t / (1.0 - t);
            let v = f(x) / ((1.0 - t) * (1.0 - t));
            if v.is_finite() {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// `(1/2πi) ∮ f` over the circle `|c − centre| = radius`, trapezoid rule
/// (spectrally accurate for analytic integrands).
pub fn circle_average(f: impl Fn(Complex64) -> Complex64, centre: Complex64, radius: f64, points: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let t = 2.0 * std::f64::consts::PI * k as f64 / points as f64;
        let e = Complex64::new(t.cos(), t.sin());
        acc += f(centre + radius * e) * radius * e;
    }
    acc / points as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_sinh_gamma_integrals() {
        // ∫ x^{-1/2} e^{-x} = √π, ∫ x^4 e^{-x} = 24
        let v = exp_sinh(|x| Complex64::new(x.powf(-0.5) * (-x).exp(), 0.0), 1e-13).unwrap();
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let v = exp_sinh(|x| Complex64::new(x.powi(4) * (-x).exp(), 0.0), 1e-13).unwrap();
        assert!((v.re - 24.0).abs() < 1e-11);
    }

    #[test]
    fn kronrod_polynomial_and_oscillatory() {
        let v = gauss_kronrod(|x| Complex64::new(x.powi(5), 0.0), 0.0, 2.0, 1e-13).unwrap();
        assert!((v.re - 64.0 / 6.0).abs() < 1e-12);
        let v = gauss_kronrod(|x| Complex64::new((10.0 * x).cos(), 0.0), 0.0, 3.0, 1e-12).unwrap();
        assert!((v.re - (30.0f64).sin() / 10.0).abs() < 1e-12);
        let v = gauss_kronrod_half_line(|x| Complex64::new((-x).exp(), 0.0), 1e-12).unwrap();
        assert!((v.re - 1.0).abs() < 1e-11);
    }

    #[test]
    fn circle_residue() {
        let r = circle_average(|c| 3.0 / (c - 1.0) + c * c, Complex64::new(1.0, 0.0), 0.5, 64);
        assert!((r - 3.0).norm() < 1e-13);
    }
}
