//! Verification suites behind `giambelli verify`.

use clap::ValueEnum;
use giambelli::kernels::{two_point_avg_discrete, two_point_avg_omega, two_point_avg_omega_series, DiscreteKernel, WhittakerKernel};
use giambelli::ope::{DiscreteMeasure, EnsembleSpec};
use giambelli::oracle::{brute_corr, brute_expect_with, chi_square_sizes, he_at_omega, he_growth, mc_expect_omega, OmegaMeasure, DEFAULT_LEVEL_CAP};
use giambelli::scalar::{q, qi, Q};
use giambelli::specfun::{whittaker_w, PrecisionPolicy};
use giambelli::zmeasure::{giambelli_expectation_check, giambelli_expectation_check_in, sample_many, MixedZParams, ZParams};
use giambelli::{enumerate_partitions, HalfInt, Result};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Global;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Giambelli,
    KernelVsOracle,
    Ope,
    Whittaker,
    Sampler,
}

pub struct Options<'a> {
    pub global: &'a Global,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub max_size: Option<usize>,
}

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: Value,
}

#[derive(Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, residual: f64, tolerance: f64, detail: Value) -> Check {
    Check { name: name.into(), passed: residual <= tolerance, residual, tolerance, detail }
}

/// Parameter sets from the command line, or the built-in ones.
fn param_sets(g: &Global, defaults: &[(&str, &str, &str)]) -> Result<Vec<MixedZParams>> {
    if g.z.is_some() || g.zp.is_some() || g.xi.is_some() {
        return Ok(vec![crate::mixed(g)?]);
    }
    defaults.iter().map(|(z, zp, xi)| MixedZParams::parse(z, zp, xi)).collect()
}

fn label(mp: &MixedZParams) -> String {
    let (z, zp) = mp.base.describe();
    format!("z={z} z'={zp} xi={}", giambelli::scalar::fmt_q(mp.xi()))
}

pub fn run(suite: Suite, o: &Options) -> Result<Report> {
    let checks = match suite {
        Suite::Giambelli => giambelli(o)?,
        Suite::KernelVsOracle => kernel_vs_oracle(o)?,
        Suite::Ope => ope(o)?,
        Suite::Whittaker => whittaker(o)?,
        Suite::Sampler => sampler(o)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report { suite, passed, checks })
}

fn giambelli(o: &Options) -> Result<Vec<Check>> {
    let max = o.max_size.unwrap_or(8);
    let mut out = Vec::new();
    for mp in param_sets(o.global, &[("1/2", "1/2", "1/4"), ("1/3", "2/3", "1/10"), ("1/2+i", "1/2-i", "1/4")])? {
        let mut nonzero = 0usize;
        let mut float_worst = 0.0f64;
        let mut count = 0usize;
        for n in 0..=max {
            for lam in enumerate_partitions(n) {
                if giambelli_expectation_check(&lam, &mp) != Q::from_integer(0.into()) {
                    nonzero += 1;
                }
                float_worst = float_worst.max(giambelli_expectation_check_in::<Complex64>(&lam, &mp)?);
                count += 1;
            }
        }
        out.push(check(format!("exact {}", label(&mp)), nonzero as f64, 0.0, json!({ "partitions": count, "nonzero_residuals": nonzero })));
        out.push(check(format!("float {}", label(&mp)), float_worst, o.tol.unwrap_or(1e-12), json!({ "partitions": count })));
    }
    Ok(out)
}

fn subsets(points: &[HalfInt], max: usize) -> Vec<Vec<HalfInt>> {
    (1u32..1 << points.len())
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| (0..points.len()).filter(|i| m >> i & 1 == 1).map(|i| points[i]).collect())
        .collect()
}

fn kernel_vs_oracle(o: &Options) -> Result<Vec<Check>> {
    let tol = o.tol.unwrap_or(1e-8);
    let pts: Vec<HalfInt> = [-5, -3, -1, 1, 3, 5].into_iter().map(HalfInt::from_twice).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for mp in param_sets(o.global, &[("1/2", "1/2", "1/4"), ("1/2+i", "1/2-i", "1/5"), ("4/3", "7/4", "1/6")])? {
        let k = DiscreteKernel::with_policy(&mp, crate::policy(o.global));
        let (mut worst, mut worst_res, mut tail) = (0.0f64, 0.0f64, 0.0f64);
        let mut n_max = 0;
        let sets = subsets(&pts, 3);
        for x in &sets {
            let brute = brute_corr(x, &mp, tol * 1e-3)?;
            let a = k.rho(x)?;
            worst = worst.max((a - brute.value.re).abs());
            worst_res = worst_res.max((a - k.rho_via_residues(x)?).abs());
            tail = tail.max(brute.tail_bound);
            n_max = n_max.max(brute.n_max);
        }
        out.push(check(format!("rho vs brute force {}", label(&mp)), worst, tol, json!({ "subsets": sets.len(), "tail_bound": tail, "n_max": n_max })));
        out.push(check(format!("residue form {}", label(&mp)), worst_res, tol, json!({ "subsets": sets.len() })));
        let mut worst_pair = 0.0f64;
        let mut detail = Vec::new();
        for (u, v) in [(Complex64::new(2.3, 0.0), Complex64::new(3.1, 0.0)), (Complex64::new(1.0, 2.0), Complex64::new(-2.0, 1.5))] {
            let r = brute_expect_with(|d| d.h(u) * d.e(v), &mp, tol * 1e-2, he_growth(u, v), DEFAULT_LEVEL_CAP)?;
            let want = two_point_avg_discrete(u, v, &mp)?;
            worst_pair = worst_pair.max((r.value - want).norm());
            detail.push(json!({ "u": [u.re, u.im], "v": [v.re, v.im], "tail_bound": r.tail_bound, "n_max": r.n_max }));
        }
        out.push(check(format!("two-point average {}", label(&mp)), worst_pair, tol, Value::Array(detail)));
    }
    Ok(out)
}

fn test_measures() -> Result<Vec<(DiscreteMeasure, usize)>> {
    let ints = |v: &[i64]| v.iter().map(|&k| qi(k)).collect::<Vec<Q>>();
    Ok(vec![
        (DiscreteMeasure::uniform(ints(&[-1, 0, 1]))?, 2),
        (DiscreteMeasure::uniform(ints(&[0, 1, 2, 3]))?, 3),
        (DiscreteMeasure::new(ints(&[-2, -1, 0, 1, 3, 4]), vec![qi(1), q(1, 2), qi(2), qi(1), q(3, 2), q(1, 3)])?, 3),
        (DiscreteMeasure::new(vec![q(-3, 2), q(-1, 3), qi(0), q(1, 2), qi(1), qi(2), q(7, 2)], vec![q(1, 3), qi(1), q(5, 4), qi(2), q(1, 2), qi(1), q(1, 7)])?, 4),
    ])
}

fn ope(o: &Options) -> Result<Vec<Check>> {
    let max = o.max_size.unwrap_or(8);
    let zero = Q::from_integer(0.into());
    let mut out = Vec::new();
    for (alpha, n) in test_measures()? {
        let name = format!("M={} N={n}", alpha.len());
        let spec = EnsembleSpec::new(alpha.clone(), n)?;
        let total: Q = spec.configurations().map(|(_, p)| p.clone()).sum();
        let norm_bad = (total != qi(1)) as usize + (spec.partition_function() != spec.hankel_determinant()) as usize;
        out.push(check(format!("normalization {name}"), norm_bad as f64, 0.0, json!({ "configurations": spec.configurations().count() })));
        let (mut g_bad, mut m_bad, mut count) = (0usize, 0usize, 0usize);
        for k in 0..=max {
            for lam in enumerate_partitions(k) {
                g_bad += (spec.giambelli_residual(&lam) != zero) as usize;
                m_bad += (spec.avg_schur(&lam) != spec.avg_schur_enumerated(&lam)) as usize;
                count += 1;
            }
        }
        out.push(check(format!("giambelli {name}"), g_bad as f64, 0.0, json!({ "partitions": count })));
        out.push(check(format!("moment determinant {name}"), m_bad as f64, 0.0, json!({ "partitions": count })));
        let atoms = alpha.atoms();
        let mut rho_bad = 0usize;
        let mut sets = 0usize;
        for mask in 1u32..1 << atoms.len() {
            if mask.count_ones() > 3 {
                continue;
            }
            let y: Vec<Q> = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect();
            let brute = spec.rho_brute(&y)?;
            let cd = spec.rho_from(&y, |a, b| spec.cd_kernel(a, b))?;
            let res = spec.rho_from(&y, |a, b| spec.residue_kernel(a, b))?;
            rho_bad += (cd != brute) as usize + (res != brute) as usize;
            sets += 1;
        }
        out.push(check(format!("correlations {name}"), rho_bad as f64, 0.0, json!({ "subsets": sets })));
    }
    Ok(out)
}

fn whittaker(o: &Options) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let pol = crate::policy(o.global);
    let sets: Vec<ZParams> = if o.global.z.is_some() || o.global.zp.is_some() {
        vec![crate::zparams(o.global)?]
    } else {
        vec![ZParams::parse("1/2", "1/2")?, ZParams::parse("1/2+i", "1/2-i")?]
    };
    let five = Complex64::new(5.0, 0.0);
    for zp in &sets {
        let (z, zpr) = zp.describe();
        let name = format!("z={z} z'={zpr}");
        let a = two_point_avg_omega(five, five, zp)?;
        let b = two_point_avg_omega_series(five, five, zp, 400);
        out.push(check(format!("closed form vs hook series {name}"), (a - b).norm(), 1e-8, json!({ "value": [a.re, a.im] })));
        let k = WhittakerKernel::with_policy(zp, pol);
        let mut min_density = f64::INFINITY;
        let grid: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 5.0].iter().flat_map(|&x| [x, -x]).collect();
        for &x in &grid {
            min_density = min_density.min(k.density(x)?);
        }
        out.push(check(format!("density nonnegative {name}"), (-min_density).max(0.0), 0.0, json!({ "grid": grid, "min": min_density })));
        let samples = o.samples.unwrap_or(20_000);
        if samples > 0 {
            let u = Complex64::new(2.0, 1.0);
            let v = Complex64::new(1.5, -0.5);
            let seed = o.global.seed.unwrap_or(7);
            let mc = mc_expect_omega(he_at_omega(u, v), zp, 400, samples, seed, OmegaMeasure::Simplex)?;
            let want = two_point_avg_omega(u, v, zp)?;
            out.push(check(format!("monte carlo simplex {name}"), mc.z_score(want), 3.0, json!({ "mean": [mc.mean.re, mc.mean.im], "exact": [want.re, want.im] })));
            let mc = mc_expect_omega(he_at_omega(u, v), zp, 400, samples, seed + 1, OmegaMeasure::Cone)?;
            let want = k.pair_average_tilde(u, v)?;
            out.push(check(format!("monte carlo cone {name}"), mc.z_score(want), 3.0, json!({ "mean": [mc.mean.re, mc.mean.im], "exact": [want.re, want.im] })));
        }
    }
    let mut worst = 0.0f64;
    for mu in [0.3, 1.2, 2.5] {
        for x in [0.5, 2.0, 7.0] {
            let w = whittaker_w(mu + 0.5, mu, x, &PrecisionPolicy::default())?;
            let exact = x.powf(mu + 0.5) * (-x / 2.0).exp();
            worst = worst.max(((w - exact) / exact).abs());
        }
    }
    out.push(check("W closed form", worst, 1e-10, Value::Null));
    Ok(out)
}

fn sampler(o: &Options) -> Result<Vec<Check>> {
    let samples = o.samples.unwrap_or(100_000);
    let seed = o.global.seed.unwrap_or(7);
    let mut out = Vec::new();
    for mp in param_sets(o.global, &[("1/2", "1/2", "1/4")])? {
        let draws = sample_many(&mp, seed, samples);
        let sizes: Vec<usize> = draws.iter().map(|l| l.size()).collect();
        let chi = chi_square_sizes(&sizes, &mp)?;
        out.push(Check {
            name: format!("size chi-square {}", label(&mp)),
            passed: chi.p_value > 0.01,
            residual: chi.p_value,
            tolerance: 0.01,
            detail: json!(chi),
        });
        let k = DiscreteKernel::with_policy(&mp, crate::policy(o.global));
        let configs: Vec<_> = draws.iter().map(|l| l.lattice_config()).collect();
        for t in [-3, -1, 1, 3] {
            let x = HalfInt::from_twice(t)?;
            let hits = configs.iter().filter(|c| c.contains(x)).count() as f64;
            let p = hits / samples as f64;
            let want = k.kernel(x, x)?;
            let se = (want * (1.0 - want) / samples as f64).sqrt();
            out.push(check(format!("rho_1({x}) {}", label(&mp)), (p - want).abs() / se, 4.0, json!({ "empirical": p, "kernel": want, "std_err": se })));
        }
    }
    Ok(out)
}
