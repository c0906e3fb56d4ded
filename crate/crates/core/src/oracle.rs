//! Independent checks: truncated sums over `𝕐` with explicit tail bounds,
//! brute-force correlation functions, the determinantal identity for
//! `H(u)E(v)`, and Monte Carlo over finite-`n` images in the Thoma simplex.

use num_complex::Complex64;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::kernels::two_point_avg_discrete;
use crate::partition::{enumerate_partitions, HalfInt, LatticeConfiguration, Partition};
use crate::scalar::det;
use crate::symfunc::{e_at_omega, h_at_omega, OmegaPoint};
use crate::zmeasure::{sample_level, sampler_stream, weight_mixed_f64, MixedZParams, ZParams};

/// Largest truncation level the enumerators will reach.
pub const DEFAULT_LEVEL_CAP: usize = 45;

/// Result of a truncated sum over `𝕐`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncationReport {
    pub n_max: usize,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub tail_bound: f64,
    pub converged: bool,
}

fn ser_complex<S: serde::Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("complex", 2)?;
    st.serialize_field("re", &v.re)?;
    st.serialize_field("im", &v.im)?;
    st.end()
}

/// Certified growth `|f(λ)| ≤ constant · |λ|^power · e^{rate |λ|}` of an evaluator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Growth {
    pub constant: f64,
    pub power: u32,
    pub rate: f64,
}

impl Growth {
    pub const BOUNDED: Growth = Growth { constant: 1.0, power: 0, rate: 0.0 };

    pub fn product(self, other: Growth) -> Growth {
        Growth { constant: self.constant * other.constant, power: self.power + other.power, rate: self.rate + other.rate }
    }
}

/// Growth of `λ ↦ H(u)(λ) E(v)(λ)`.
///
/// `|1 + b/u| ≤ e^{b/|u|}`, and `|1 − a/u| ≥ 1` once `a ≥ 2|u|`, while the at
/// most `2|u|+1` smaller `a ∈ ℤ'₊` contribute `|u|/|u − a|` each. Since
/// `Σa + Σb = |λ|` the exponential rate is `1/min(|u|, |v|)`.
pub fn he_growth(u: Complex64, v: Complex64) -> Growth {
    let near = |w: Complex64| -> f64 {
        let r = w.norm();
        let mut k = 1.0;
        let mut a = 0.5;
        while a <= 2.0 * r {
            k *= (r / (w - a).norm()).max(1.0);
            a += 1.0;
        }
        k
    };
    Growth { constant: near(u) * near(v), power: 0, rate: 1.0 / u.norm().min(v.norm()) }
}

/// Upper bound on `(1−ξ)^{zz′} Σ_{n>N} nᵐ (zz′)_n ξⁿ / n!`.
pub fn tail_bound(mp: &MixedZParams, m: u32, n: usize) -> Result<f64> {
    tail_bound_growth(mp, Growth { constant: 1.0, power: m, rate: 0.0 }, n)
}

/// Tail bound for an evaluator of the given growth: the term ratio for
/// `k > N` is dominated by a constant `R < 1` and the remainder by a
/// geometric series.
pub fn tail_bound_growth(mp: &MixedZParams, g: Growth, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Truncation("tail bound needs N ≥ 1".into()));
    }
    let (p, _) = mp.base.real_pair();
    let xi = mp.xi_f64() * g.rate.exp();
    let nf = n as f64;
    let ratio = xi * ((p + nf + 1.0) / (nf + 2.0)).max(1.0) * ((nf + 2.0) / (nf + 1.0)).powi(g.power as i32);
    if ratio >= 1.0 {
        return Err(Error::Truncation(format!("term ratio {ratio:.3} ≥ 1 at N = {n}; increase N")));
    }
    // first omitted term, in log space
    let k = nf + 1.0;
    let mut ln = p * (1.0 - mp.xi_f64()).ln() + k * xi.ln() + g.power as f64 * k.ln();
    for j in 0..n + 1 {
        ln += ((p + j as f64) / (j as f64 + 1.0)).ln();
    }
    Ok(g.constant * ln.exp() / (1.0 - ratio))
}

/// Smallest `N ≤ cap` with tail below `tol`; `cap` itself when unreachable.
fn choose_level(mp: &MixedZParams, g: Growth, tol: f64, cap: usize) -> (usize, f64) {
    let mut last = f64::INFINITY;
    for n in 1..=cap {
        if let Ok(b) = tail_bound_growth(mp, g, n) {
            last = b;
            if b < tol {
                return (n, b);
            }
        }
    }
    (cap, last)
}

/// A diagram with its modified Frobenius coordinates and lattice
/// configuration precomputed.
pub struct Diagram {
    pub lambda: Partition,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub config: LatticeConfiguration,
}

impl Diagram {
    pub fn new(lambda: Partition) -> Self {
        let (a, b) = lambda.modified_frobenius_f64();
        let config = lambda.lattice_config();
        Self { lambda, a, b, config }
    }

    /// `H(u)(λ) = Π (u + b_i)/(u − a_i)`.
    pub fn h(&self, u: Complex64) -> Complex64 {
        self.a.iter().zip(&self.b).map(|(&a, &b)| (u + b) / (u - a)).product()
    }

    /// `E(v)(λ) = Π (v + a_i)/(v − b_i)`.
    pub fn e(&self, v: Complex64) -> Complex64 {
        self.a.iter().zip(&self.b).map(|(&a, &b)| (v + a) / (v - b)).product()
    }
}

/// `Σ_{|λ|≤N} f(λ) M(λ)` with `N` chosen from the certified growth of `f`.
/// Levels are summed in order, and each level in enumeration order, so the
/// float result does not depend on the thread count.
pub fn brute_expect_with<F>(f: F, mp: &MixedZParams, tol: f64, growth: Growth, cap: usize) -> Result<TruncationReport>
where
    F: Fn(&Diagram) -> Complex64 + Sync,
{
    let (n_max, bound) = choose_level(mp, growth, tol, cap);
    if !bound.is_finite() {
        return Err(Error::Truncation(format!("no finite tail bound up to N = {cap} for growth {growth:?}")));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..=n_max {
        let level: Vec<Complex64> = enumerate_partitions(n)
            .into_par_iter()
            .map(|lambda| {
                let w = weight_mixed_f64(&lambda, mp);
                f(&Diagram::new(lambda)) * w
            })
            .collect();
        for v in level {
            total += v;
        }
    }
    Ok(TruncationReport { n_max, value: total, tail_bound: bound, converged: bound < tol })
}

/// [`brute_expect_with`] for bounded evaluators.
pub fn brute_expect<F>(f: F, mp: &MixedZParams, tol: f64) -> Result<TruncationReport>
where
    F: Fn(&Diagram) -> Complex64 + Sync,
{
    brute_expect_with(f, mp, tol, Growth::BOUNDED, DEFAULT_LEVEL_CAP)
}

/// `ρ_m(X) = M{λ : X ⊆ X(λ)}`.
pub fn brute_corr(points: &[HalfInt], mp: &MixedZParams, tol: f64) -> Result<TruncationReport> {
    for (i, x) in points.iter().enumerate() {
        if points[..i].contains(x) {
            return Err(Error::InvalidConfiguration(format!("repeated point {x}")));
        }
    }
    brute_expect(
        |d| {
            let hit = points.iter().all(|&x| d.config.contains(x));
            Complex64::new(if hit { 1.0 } else { 0.0 }, 0.0)
        },
        mp,
        tol,
    )
}

/// Both sides of `⟨det[H(u_i)E(v_j)/(u_i+v_j)]⟩ = det[⟨H(u_i)E(v_j)⟩/(u_i+v_j)]`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    #[serde(serialize_with = "ser_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub rhs: Complex64,
    pub residual: f64,
    pub lhs_report: TruncationReport,
}

pub fn determinantal_identity_check(us: &[Complex64], vs: &[Complex64], mp: &MixedZParams, tol: f64) -> Result<IdentityReport> {
    let d = us.len();
    if vs.len() != d || d == 0 {
        return Err(Error::Domain("u and v lists must have the same positive length".into()));
    }
    for &u in us {
        for &v in vs {
            if (u + v).norm() == 0.0 {
                return Err(Error::Domain(format!("u + v = 0 at u = {u}")));
            }
        }
    }
    // Hadamard: |det| ≤ Π_i √d max_j |H(u_i)E(v_j)| / |u_i + v_j|
    let mut growth = Growth { constant: 1.0, power: 0, rate: 0.0 };
    for &u in us {
        let (mut c, mut r) = (0.0f64, 0.0f64);
        for &v in vs {
            let g = he_growth(u, v);
            c = c.max(g.constant / (u + v).norm());
            r = r.max(g.rate);
        }
        growth = growth.product(Growth { constant: c * (d as f64).sqrt(), power: 0, rate: r });
    }
    let lhs_report = brute_expect_with(
        |dg| {
            let hs: Vec<Complex64> = us.iter().map(|&u| dg.h(u)).collect();
            let es: Vec<Complex64> = vs.iter().map(|&v| dg.e(v)).collect();
            det(d, |i, j| hs[i] * es[j] / (us[i] + vs[j]))
        },
        mp,
        tol,
        growth,
        DEFAULT_LEVEL_CAP.min(40),
    )?;
    let mut avg = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            avg[i * d + j] = two_point_avg_discrete(us[i], vs[j], mp)? / (us[i] + vs[j]);
        }
    }
    let rhs = det(d, |i, j| avg[i * d + j]);
    let lhs = lhs_report.value;
    Ok(IdentityReport { lhs, rhs, residual: (lhs - rhs).norm(), lhs_report })
}

/// Bound `e^{Cδ/|u|}` on `|Π (1 + β_i/u)/(1 − α_i/u)|` for
/// `ε < |arg u| < π − ε`, with `C = 3 + 2 ln(2/sin ε)`.
pub fn he_bound(u: Complex64, delta: f64, eps: f64) -> Result<f64> {
    let arg = u.arg().abs();
    if !(eps > 0.0 && arg > eps && arg < std::f64::consts::PI - eps) {
        return Err(Error::Domain(format!("|arg u| = {arg} outside ({eps}, π − {eps})")));
    }
    if delta < 0.0 {
        return Err(Error::Domain("δ must be nonnegative".into()));
    }
    let c = 3.0 + 2.0 * (2.0 / eps.sin()).ln();
    Ok((c * delta / u.norm()).exp())
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct McEstimate {
    #[serde(serialize_with = "ser_complex")]
    pub mean: Complex64,
    pub std_err: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn from_values(values: &[Complex64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<Complex64>() / n;
        let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0).max(1.0);
        Self { mean, std_err: (var / n).sqrt(), samples: values.len() }
    }

    /// `|mean − target|` in units of the standard error.
    pub fn z_score(&self, target: Complex64) -> f64 {
        (self.mean - target).norm() / self.std_err.max(f64::MIN_POSITIVE)
    }
}

/// Which measure on `Ω̃` to approximate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaMeasure {
    /// `P_{z,z′}`: `ω = (a/n, b/n, 1)`.
    Simplex,
    /// `P̃_{z,z′}`: the same point scaled by `r ~ Gamma(zz′, 1)`.
    Cone,
}

/// Monte Carlo average of `f(ω)` with `λ ~ M^{(n)}_{z,z′}` mapped into the
/// Thoma simplex (or cone). Sample `i` uses the `i`-th stream of `seed`.
pub fn mc_expect_omega<F>(f: F, zp: &ZParams, n: usize, samples: usize, seed: u64, measure: OmegaMeasure) -> Result<McEstimate>
where
    F: Fn(&OmegaPoint) -> Result<Complex64> + Sync,
{
    let (p, _) = zp.real_pair();
    let gamma = Gamma::new(p, 1.0).map_err(|e| Error::Domain(format!("Gamma({p}, 1): {e}")))?;
    let values: Vec<Complex64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampler_stream(seed, i);
            let lambda = sample_level(zp, n, &mut rng);
            let scale = match measure {
                OmegaMeasure::Simplex => 1.0,
                OmegaMeasure::Cone => gamma.sample(&mut rng),
            };
            f(&OmegaPoint::from_partition(&lambda, scale))
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_values(&values))
}

/// `H(u)(ω) E(v)(ω)`, the usual Monte Carlo evaluator.
pub fn he_at_omega(u: Complex64, v: Complex64) -> impl Fn(&OmegaPoint) -> Result<Complex64> + Sync {
    move |w| Ok(h_at_omega(u, w)? * e_at_omega(v, w)?)
}

/// χ² goodness of fit of sampled sizes against the negative binomial law.
#[derive(Clone, Debug, Serialize)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Bins `0, 1, …` are kept while the expected count is at least 5; the rest
/// is pooled into a final tail bin.
pub fn chi_square_sizes(sizes: &[usize], mp: &MixedZParams) -> Result<ChiSquareReport> {
    let total = sizes.len() as f64;
    let mut expected = Vec::new();
    let mut mass = 0.0;
    let mut n = 0;
    loop {
        let e = mp.size_pmf(n) * total;
        if e < 5.0 || (1.0 - mass - mp.size_pmf(n)) * total < 5.0 {
            break;
        }
        expected.push(e);
        mass += mp.size_pmf(n);
        n += 1;
    }
    let bins = expected.len();
    expected.push((1.0 - mass) * total);
    let mut observed = vec![0.0; bins + 1];
    for &s in sizes {
        observed[s.min(bins)] += 1.0;
    }
    let statistic: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins;
    if dof == 0 {
        return Err(Error::Domain("too few samples for a χ² test".into()));
    }
    let law = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquareReport { statistic, dof, p_value: 1.0 - law.cdf(statistic) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_to_f64;
    use crate::zmeasure::expect_fs;

    fn mp() -> MixedZParams {
        MixedZParams::parse("1/2", "1/2", "1/4").unwrap()
    }

    #[test]
    fn tail_bound_dominates_remainder() {
        let m = mp();
        let mut prev = f64::INFINITY;
        for n in [5, 10, 20, 40] {
            let b = tail_bound(&m, 0, n).unwrap();
            let exact: f64 = (n + 1..n + 200).map(|k| m.size_pmf(k)).sum();
            assert!(b >= exact && b < prev);
            prev = b;
        }
        assert!(tail_bound(&m, 0, 40).unwrap() < 1e-12);
        let b = tail_bound(&m, 2, 20).unwrap();
        let exact: f64 = (21..300).map(|k| (k * k) as f64 * m.size_pmf(k)).sum();
        assert!(b >= exact);
    }

    #[test]
    fn normalization_and_first_moment() {
        let m = mp();
        let r = brute_expect(|_| Complex64::new(1.0, 0.0), &m, 1e-12).unwrap();
        assert!((r.value.re - 1.0).abs() <= r.tail_bound + 1e-13);
        let fs1 = crate::partition::Partition::from_parts(&[1]).unwrap();
        let r = brute_expect_with(
            |d| Complex64::new(d.lambda.size() as f64, 0.0),
            &m,
            1e-12,
            Growth { constant: 1.0, power: 1, rate: 0.0 },
            DEFAULT_LEVEL_CAP,
        )
        .unwrap();
        assert!((r.value.re - q_to_f64(&expect_fs(&fs1, &m))).abs() < 1e-11);
    }

    #[test]
    fn empty_configuration_and_far_points() {
        let m = mp();
        assert!((brute_corr(&[], &m, 1e-12).unwrap().value.re - 1.0).abs() < 1e-12);
        let tiny = MixedZParams::parse("1/2", "1/2", "1/1000").unwrap();
        let pts: Vec<HalfInt> = [1, 3, 5, 7].into_iter().map(|t| HalfInt::from_twice(t).unwrap()).collect();
        assert!(brute_corr(&pts, &tiny, 1e-14).unwrap().value.re < 1e-40);
    }

    #[test]
    fn bound_properties() {
        assert_eq!(he_bound(Complex64::new(1.0, 1.0), 0.0, 0.3).unwrap(), 1.0);
        assert!(he_bound(Complex64::new(1.0, 0.0), 1.0, 0.3).is_err());
        let u = Complex64::new(-0.7, 1.3);
        assert!(he_bound(u, 2.0, 0.3).unwrap() > he_bound(u, 1.0, 0.3).unwrap());
    }

    #[test]
    fn chi_square_accepts_true_law() {
        let m = mp();
        let sizes: Vec<usize> = (0..5000).map(|i| crate::zmeasure::sample_size(&m, &mut sampler_stream(5, i))).collect();
        let r = chi_square_sizes(&sizes, &m).unwrap();
        assert!(r.p_value > 1e-3, "{r:?}");
        let shifted: Vec<usize> = sizes.iter().map(|s| s + 1).collect();
        assert!(chi_square_sizes(&shifted, &m).unwrap().p_value < 1e-6);
    }
}
