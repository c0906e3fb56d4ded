//! z-measures on partitions of `n`, their negative-binomial mixtures, the
//! closed-form Frobenius–Schur expectations and the growth chain.
//!
//! For admissible parameters both `z + z′` and `z z′` are real, so each box
//! factor `(z + c)(z′ + c) = zz′ + c(z + z′) + c²` is a real rational and all
//! prefactor-free quantities are computed exactly.

mod sampler;

pub use sampler::{sample, sample_level, sample_many, sample_size, stream as sampler_stream, GrowthChain};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{factorial, Partition};
use crate::scalar::{det, fmt_gauss, fmt_q, parse_gauss, parse_rational, q_to_f64, GaussQ, Scalar, Q};
use crate::specfun::pochhammer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesType {
    Principal,
    Complementary,
}

/// Admissible pair `(z, z′)`: either `z′ = z̄ ∉ ℤ`, or both real in a common
/// open interval `(m, m+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZParams {
    z: GaussQ,
    zp: GaussQ,
    series: SeriesType,
}

impl ZParams {
    pub fn new(z: GaussQ, zp: GaussQ) -> Result<Self> {
        let series = if zp.re == z.re && zp.im == -z.im.clone() && !(z.im.is_zero() && z.re.is_integer()) {
            SeriesType::Principal
        } else if z.im.is_zero() && zp.im.is_zero() {
            let (a, b) = (&z.re, &zp.re);
            if a.is_integer() || b.is_integer() || a.floor() != b.floor() {
                return Err(Error::Inadmissible(format!(
                    "real pair ({}, {}) does not lie in a common interval (m, m+1)",
                    fmt_q(a),
                    fmt_q(b)
                )));
            }
            SeriesType::Complementary
        } else {
            return Err(Error::Inadmissible(format!(
                "z = {} and z' = {} are neither conjugate non-integers nor real",
                fmt_gauss(&z),
                fmt_gauss(&zp)
            )));
        };
        Ok(Self { z, zp, series })
    }

    pub fn parse(z: &str, zp: &str) -> Result<Self> {
        Self::new(parse_gauss(z)?, parse_gauss(zp)?)
    }

    pub fn z(&self) -> &GaussQ {
        &self.z
    }

    pub fn zp(&self) -> &GaussQ {
        &self.zp
    }

    pub fn series(&self) -> SeriesType {
        self.series
    }

    pub fn z_c64(&self) -> Complex64 {
        self.z.to_c64()
    }

    pub fn zp_c64(&self) -> Complex64 {
        self.zp.to_c64()
    }

    /// `z + z′` (real).
    pub fn sum(&self) -> Q {
        self.z.re.clone() + self.zp.re.clone()
    }

    /// `z z′` (real and positive).
    pub fn prod(&self) -> Q {
        (self.z.clone() * self.zp.clone()).re
    }

    /// `(z + c)(z′ + c)`.
    pub fn box_factor(&self, c: i64) -> Q {
        let c = Q::from_integer(c.into());
        self.prod() + c.clone() * self.sum() + c.clone() * c
    }

    /// Float parameters `(zz′, z + z′)`.
    pub fn real_pair(&self) -> (f64, f64) {
        (q_to_f64(&self.prod()), q_to_f64(&self.sum()))
    }

    pub fn describe(&self) -> (String, String) {
        (fmt_gauss(&self.z), fmt_gauss(&self.zp))
    }
}

/// `(z, z′, ξ)` with `ξ ∈ (0, 1)` rational.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedZParams {
    pub base: ZParams,
    xi: Q,
}

impl MixedZParams {
    pub fn new(base: ZParams, xi: Q) -> Result<Self> {
        if !xi.is_positive() || xi >= Q::one() {
            return Err(Error::Inadmissible(format!("ξ = {} outside (0, 1)", fmt_q(&xi))));
        }
        Ok(Self { base, xi })
    }

    pub fn parse(z: &str, zp: &str, xi: &str) -> Result<Self> {
        Self::new(ZParams::parse(z, zp)?, parse_rational(xi)?)
    }

    pub fn xi(&self) -> &Q {
        &self.xi
    }

    pub fn xi_f64(&self) -> f64 {
        q_to_f64(&self.xi)
    }

    /// `(1 − ξ)^{zz′}`.
    pub fn vacuum(&self) -> f64 {
        let (p, _) = self.base.real_pair();
        (p * (1.0 - self.xi_f64()).ln()).exp()
    }

    /// `P(|λ| = n) = (1−ξ)^{zz′} (zz′)_n ξ^n / n!`.
    pub fn size_pmf(&self, n: usize) -> f64 {
        let (p, _) = self.base.real_pair();
        let xi = self.xi_f64();
        let mut ln = p * (1.0 - xi).ln();
        for k in 0..n {
            ln += ((p + k as f64) * xi / (k as f64 + 1.0)).ln();
        }
        ln.exp()
    }
}

fn content_product(lambda: &Partition, zp: &ZParams) -> Q {
    lambda.contents().fold(Q::one(), |acc, c| acc * zp.box_factor(c))
}

fn content_product_f64(lambda: &Partition, p: f64, s: f64) -> f64 {
    lambda.contents().fold(1.0, |acc, c| {
        let c = c as f64;
        acc * (p + c * s + c * c)
    })
}

/// `M^{(n)}(λ) = Π (z+c)(z′+c) / (zz′)_n · (dim λ)² / n!`, exact.
pub fn weight_n(lambda: &Partition, zp: &ZParams) -> Q {
    let n = lambda.size();
    let dim = Q::from_integer(lambda.dim().into());
    let nfact = Q::from_integer(factorial(n).into());
    content_product(lambda, zp) / pochhammer(&zp.prod(), n) * dim.clone() * dim / nfact
}

/// `M(λ)/M(∅) = ξ^n Π (z+c)(z′+c) / H(λ)²`, exact (`H` the hook product).
pub fn weight_mixed_ratio(lambda: &Partition, mp: &MixedZParams) -> Q {
    let hook = Q::from_integer(lambda.hook_product().into());
    let xin = num_traits::pow(mp.xi.clone(), lambda.size());
    xin * content_product(lambda, &mp.base) / (hook.clone() * hook)
}

/// `M_{z,z′,ξ}(λ) = (1−ξ)^{zz′} · M(λ)/M(∅)`.
pub fn weight_mixed(lambda: &Partition, mp: &MixedZParams) -> f64 {
    mp.vacuum() * q_to_f64(&weight_mixed_ratio(lambda, mp))
}

/// Float evaluation of [`weight_mixed`] in log space, for large diagrams.
pub fn weight_mixed_f64(lambda: &Partition, mp: &MixedZParams) -> f64 {
    let (p, s) = mp.base.real_pair();
    let prod = content_product_f64(lambda, p, s);
    let ln = p * (1.0 - mp.xi_f64()).ln() + lambda.size() as f64 * mp.xi_f64().ln() - 2.0 * lambda.ln_hook_product();
    prod * ln.exp()
}

/// `⟨Fs_μ⟩ = (ξ/(1−ξ))^m Π_{□∈μ} (z+c)(z′+c) · dim μ / m!`, exact.
pub fn expect_fs(mu: &Partition, mp: &MixedZParams) -> Q {
    let m = mu.size();
    let ratio = mp.xi.clone() / (Q::one() - mp.xi.clone());
    let dim = Q::from_integer(mu.dim().into());
    num_traits::pow(ratio, m) * content_product(mu, &mp.base) * dim / Q::from_integer(factorial(m).into())
}

/// [`expect_fs`] evaluated in a chosen backend from the complex parameters
/// themselves (no use of the reality of `zz′`); used for float-mode checks.
pub fn expect_fs_in<S: Scalar>(mu: &Partition, mp: &MixedZParams) -> Result<S> {
    let conv = |g: &GaussQ| S::from_gauss(g).ok_or_else(|| Error::Backend("complex parameter in a real backend".into()));
    let z = conv(mp.base.z())?;
    let zp = conv(mp.base.zp())?;
    let xi = S::from_q(&mp.xi);
    let ratio = xi.clone() / (S::one() - xi);
    let m = mu.size();
    let mut acc = ratio.powi(m as u32);
    for c in mu.contents() {
        let c = S::from_i64(c);
        acc = acc * (z.clone() + c.clone()) * (zp.clone() + c);
    }
    let r = Q::new(mu.dim().into(), factorial(m).into());
    Ok(acc * S::from_q(&r))
}

/// Residual of the averaged Giambelli identity
/// `⟨Fs_λ⟩ = det[⟨Fs_{(p_i|q_j)}⟩]`, exact.
pub fn giambelli_expectation_check(lambda: &Partition, mp: &MixedZParams) -> Q {
    let f = lambda.frobenius();
    let d = f.d();
    let rhs: Q = det(d, |i, j| expect_fs(&Partition::hook(f.p[i], f.q[j]), mp));
    (expect_fs(lambda, mp) - rhs).abs()
}

/// Residual of the same identity evaluated in backend `S` from the complex
/// parameters (float mode for principal-series checks).
pub fn giambelli_expectation_check_in<S: Scalar>(lambda: &Partition, mp: &MixedZParams) -> Result<f64> {
    let f = lambda.frobenius();
    let d = f.d();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            entries.push(expect_fs_in::<S>(&Partition::hook(f.p[i], f.q[j]), mp)?);
        }
    }
    let rhs: S = det(d, |i, j| entries[i * d + j].clone());
    let lhs = expect_fs_in::<S>(lambda, mp)?;
    Ok((lhs - rhs).magnitude())
}

/// `q(μ → λ) = (z+c)(z′+c) · dim λ / (dim μ · (zz′ + n)(n + 1))`, exact.
pub fn transition_prob(mu: &Partition, lambda: &Partition, zp: &ZParams) -> Result<Q> {
    let Some((_, c)) = mu.successors().into_iter().find(|(l, _)| l == lambda) else {
        return Err(Error::InvalidPartition(format!("{lambda} does not cover {mu}")));
    };
    let n = mu.size() as i64;
    let dl = Q::from_integer(lambda.dim().into());
    let dm = Q::from_integer(mu.dim().into());
    let den = dm * (zp.prod() + Q::from_integer(n.into())) * Q::from_integer((n + 1).into());
    Ok(zp.box_factor(c) * dl / den)
}

/// Kerov's transition measure of the Plancherel chain at `μ`: for each
/// addable content `x_k`, `Π_i (x_k − y_i) / Π_{j≠k} (x_k − x_j)` with `y`
/// the removable contents. Equals `dim λ / ((n+1) dim μ)`.
pub fn plancherel_transition(addable: &[i64], removable: &[i64]) -> Vec<f64> {
    addable
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let num: f64 = removable.iter().map(|&y| (x - y) as f64).product();
            let den: f64 = addable.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &xj)| (x - xj) as f64).product();
            num / den
        })
        .collect()
}

/// Positive-real check `(z)_k (z′)_k > 0` and `(−z)_k (−z′)_k > 0` for `k ≤ kmax`.
pub fn positivity_check(zp: &ZParams, kmax: usize) -> bool {
    let z = zp.z().clone();
    let w = zp.zp().clone();
    (1..=kmax).all(|k| {
        let a = pochhammer(&z, k) * pochhammer(&w, k);
        let b = pochhammer(&-z.clone(), k) * pochhammer(&-w.clone(), k);
        a.im.is_zero() && a.re.is_positive() && b.im.is_zero() && b.re.is_positive()
    })
}

/// Value of `zz′` as f64 (convenience for samplers and bounds).
pub fn zz(zp: &ZParams) -> f64 {
    zp.prod().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use crate::scalar::{q, qi};

    fn p(v: &[i64]) -> Partition {
        Partition::from_parts(v).unwrap()
    }

    fn half() -> ZParams {
        ZParams::parse("1/2", "1/2").unwrap()
    }

    #[test]
    fn admissibility() {
        assert_eq!(half().series(), SeriesType::Principal);
        assert_eq!(ZParams::parse("1/2+1i", "1/2-1i").unwrap().series(), SeriesType::Principal);
        assert_eq!(ZParams::parse("1/3", "2/3").unwrap().series(), SeriesType::Complementary);
        assert_eq!(ZParams::parse("5/2", "2.9").unwrap().series(), SeriesType::Complementary);
        assert!(ZParams::parse("1", "1").is_err());
        assert!(ZParams::parse("1/2", "3/2").is_err());
        assert!(ZParams::parse("1/2+1i", "1/2+1i").is_err());
        assert!(MixedZParams::parse("1/2", "1/2", "1").is_err());
        assert!(MixedZParams::parse("1/2", "1/2", "0").is_err());
        for zp in [half(), ZParams::parse("1/3", "2/3").unwrap(), ZParams::parse("-7/3", "-2.5").unwrap()] {
            assert!(positivity_check(&zp, 12));
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_n(&Partition::empty(), &half()), Q::one());
        assert_eq!(weight_n(&p(&[1]), &half()), Q::one());
        assert_eq!(weight_n(&p(&[2]), &half()), q(9, 10));
        assert_eq!(weight_n(&p(&[1, 1]), &half()), q(1, 10));
        let mp = MixedZParams::new(half(), q(1, 4)).unwrap();
        assert_eq!(weight_mixed_ratio(&Partition::empty(), &mp), Q::one());
        assert_eq!(weight_mixed_ratio(&p(&[1]), &mp), q(1, 16));
        let want = 0.75f64.powf(0.25) / 16.0;
        assert!((weight_mixed(&p(&[1]), &mp) - want).abs() < 1e-16);
        assert!((weight_mixed_f64(&p(&[3, 1]), &mp) - weight_mixed(&p(&[3, 1]), &mp)).abs() < 1e-16);
    }

    #[test]
    fn normalization_and_harmonicity() {
        for zp in [half(), ZParams::parse("1/3", "2/3").unwrap(), ZParams::parse("1/2+1i", "1/2-1i").unwrap()] {
            for n in 0..=8 {
                let total: Q = enumerate_partitions(n).iter().map(|l| weight_n(l, &zp)).sum();
                assert_eq!(total, Q::one());
            }
            for n in 0..=6 {
                for mu in enumerate_partitions(n) {
                    let phi = |l: &Partition| weight_n(l, &zp) / Q::from_integer(l.dim().into());
                    let next: Q = mu.successors().iter().map(|(l, _)| phi(l)).sum();
                    assert_eq!(phi(&mu), next);
                    let rows: Q = mu.successors().iter().map(|(l, _)| transition_prob(&mu, l, &zp).unwrap()).sum();
                    assert_eq!(rows, Q::one());
                }
            }
        }
    }

    #[test]
    fn transitions() {
        assert_eq!(transition_prob(&Partition::empty(), &p(&[1]), &half()).unwrap(), Q::one());
        assert_eq!(transition_prob(&p(&[1]), &p(&[2]), &half()).unwrap(), q(9, 10));
        assert_eq!(transition_prob(&p(&[1]), &p(&[1, 1]), &half()).unwrap(), q(1, 10));
        assert!(transition_prob(&p(&[1]), &p(&[3]), &half()).is_err());
        for n in 0..=7 {
            for mu in enumerate_partitions(n) {
                let (x, y) = mu.corner_contents();
                let kerov = plancherel_transition(&x, &y);
                for (l, c) in mu.successors() {
                    let k = x.iter().position(|&v| v == c).unwrap();
                    let exact = Q::new(l.dim().into(), mu.dim().into()) / qi(n as i64 + 1);
                    assert!((kerov[k] - q_to_f64(&exact)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let mp = MixedZParams::new(half(), q(1, 4)).unwrap();
        assert_eq!(expect_fs(&Partition::empty(), &mp), Q::one());
        assert_eq!(expect_fs(&p(&[1]), &mp), q(1, 12));
        assert_eq!(expect_fs(&p(&[2]), &mp), q(1, 32));
        assert!(giambelli_expectation_check(&p(&[2, 2]), &mp).is_zero());
        assert!(giambelli_expectation_check(&p(&[3, 1, 1]), &mp).is_zero());
        let principal = MixedZParams::parse("1/2+1i", "1/2-1i", "1/4").unwrap();
        assert!(giambelli_expectation_check(&p(&[3, 3, 2]), &principal).is_zero());
        let r = giambelli_expectation_check_in::<Complex64>(&p(&[3, 3, 2]), &principal).unwrap();
        assert!(r < 1e-12);
        let exact = expect_fs_in::<GaussQ>(&p(&[3, 2]), &principal).unwrap();
        assert_eq!(exact, GaussQ::new(expect_fs(&p(&[3, 2]), &principal), Q::zero()));
    }
}
