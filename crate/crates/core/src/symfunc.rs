//! Evaluations of symmetric functions: Schur functions at points, the
//! multiparameter Schur functions `s_{μ;a}`, Frobenius–Schur functions on
//! partitions, power sums, and the generating series `H(u)`, `E(v)` on
//! partitions and on points `ω = (α, β, δ)`.
//!
//! Everything here is an image of an element of Λ under some algebra
//! morphism; the morphism is supplied either as points, as a partition, or
//! as the list `hvals = [h_0, h_1, …]` of images of the complete
//! homogeneous functions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{dim_skew, falling_factorial, Partition};
use crate::scalar::{det, q, Scalar, Q};

/// `h_0, …, h_k` evaluated at `xs`.
pub fn complete_homogeneous<S: Scalar>(k: usize, xs: &[S]) -> Vec<S> {
    let mut h = vec![S::zero(); k + 1];
    h[0] = S::one();
    for x in xs {
        for d in 1..=k {
            let v = h[d].clone() + x.clone() * h[d - 1].clone();
            h[d] = v;
        }
    }
    h
}

/// `e_0, …, e_k` evaluated at `xs`.
pub fn elementary<S: Scalar>(k: usize, xs: &[S]) -> Vec<S> {
    let mut e = vec![S::zero(); k + 1];
    e[0] = S::one();
    for x in xs {
        for d in (1..=k).rev() {
            let v = e[d].clone() + x.clone() * e[d - 1].clone();
            e[d] = v;
        }
    }
    e
}

/// Jacobi–Trudi determinant `det[h_{λ_i − i + j}]` for a given list of
/// complete homogeneous images (missing degrees are an error).
pub fn jacobi_trudi<S: Scalar>(lambda: &Partition, hvals: &[S]) -> Result<S> {
    let l = lambda.len();
    let need = lambda.row(1) + l.saturating_sub(1);
    if l > 0 && hvals.len() <= need {
        return Err(Error::Domain(format!("need h_0..h_{need}, got {} values", hvals.len())));
    }
    Ok(det(l, |i, j| {
        let idx = lambda.parts()[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            S::zero()
        } else {
            hvals[idx as usize].clone()
        }
    }))
}

/// `s_λ(x_1, …, x_N)` by Jacobi–Trudi; zero when `ℓ(λ) > N`.
pub fn schur_at_points<S: Scalar>(lambda: &Partition, xs: &[S]) -> S {
    if lambda.len() > xs.len() {
        return S::zero();
    }
    let h = complete_homogeneous(lambda.row(1) + lambda.len(), xs);
    jacobi_trudi(lambda, &h).expect("enough h values")
}

/// `s_λ(x_1, …, x_N) = det(x_i^{λ_j + N − j}) / V(x)`; fails on repeated points.
pub fn schur_bialternant<S: Scalar>(lambda: &Partition, xs: &[S]) -> Result<S> {
    let n = xs.len();
    if lambda.len() > n {
        return Ok(S::zero());
    }
    let mut vandermonde = S::one();
    for i in 0..n {
        for j in i + 1..n {
            vandermonde = vandermonde * (xs[i].clone() - xs[j].clone());
        }
    }
    if vandermonde.is_zero() {
        return Err(Error::Domain("repeated points in bialternant formula".into()));
    }
    let num = det(n, |i, j| xs[i].powi((lambda.row(j + 1) + n - j - 1) as u32));
    Ok(num / vandermonde)
}

/// Base sequence underlying a [`ParameterSequence`].
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceKind {
    /// `i ↦ slope·i + offset`
    Affine { slope: Q, offset: Q },
    /// Finite table with a default for unlisted indices.
    Table { values: BTreeMap<i64, Q>, default: Q },
}

/// A two-sided sequence `(a_i)_{i∈ℤ}` given by a base sequence composed with
/// an affine reindexing: `a_i = sign · base(σ i + t)` with `σ = ±1`. Shifts
/// and duals act on `(sign, σ, t)` only.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSequence {
    kind: SequenceKind,
    sign: i64,
    sigma: i64,
    t: i64,
}

impl ParameterSequence {
    pub fn new(kind: SequenceKind) -> Self {
        Self { kind, sign: 1, sigma: 1, t: 0 }
    }

    pub fn affine(slope: Q, offset: Q) -> Self {
        Self::new(SequenceKind::Affine { slope, offset })
    }

    pub fn zero() -> Self {
        Self::affine(Q::zero(), Q::zero())
    }

    /// `a_i = i − 1/2`, the sequence of the Frobenius–Schur functions.
    pub fn frobenius() -> Self {
        Self::affine(Q::one(), q(-1, 2))
    }

    pub fn table(values: BTreeMap<i64, Q>, default: Q) -> Self {
        Self::new(SequenceKind::Table { values, default })
    }

    pub fn get(&self, i: i64) -> Q {
        let j = self.sigma * i + self.t;
        let base = match &self.kind {
            SequenceKind::Affine { slope, offset } => slope * Q::from_integer(j.into()) + offset,
            SequenceKind::Table { values, default } => values.get(&j).cloned().unwrap_or_else(|| default.clone()),
        };
        if self.sign < 0 {
            -base
        } else {
            base
        }
    }

    /// `(τ^r a)_i = a_{i+r}`.
    pub fn shift(&self, r: i64) -> Self {
        Self { t: self.t + self.sigma * r, ..self.clone() }
    }

    /// `â_i = −a_{−i+1}`.
    pub fn dual(&self) -> Self {
        Self { sign: -self.sign, sigma: -self.sigma, t: self.sigma + self.t, kind: self.kind.clone() }
    }

    /// `a_1, …, a_k`.
    pub fn first(&self, k: usize) -> Vec<Q> {
        (1..=k as i64).map(|i| self.get(i)).collect()
    }
}

/// Images of `h_{0;a}, …, h_{k;a}` from `hvals = [h_0 = 1, h_1, …, h_k]`,
/// using the coefficient identity `h_n = Σ_{j=0}^{n} h_{j;a} h_{n−j}(a_1, …, a_j)`
/// obtained from `1/((u−a_1)⋯(u−a_j)) = Σ_m h_m(a_1,…,a_j) u^{−j−m}`.
pub fn multiparam_h_all<S: Scalar>(k: usize, a: &ParameterSequence, hvals: &[S]) -> Result<Vec<S>> {
    if hvals.len() <= k {
        return Err(Error::Domain(format!("h_{k} requested but only {} hvals supplied", hvals.len())));
    }
    let avals: Vec<S> = a.first(k).iter().map(S::from_q).collect();
    // hh[j][m] = h_m(a_1..a_j)
    let hh: Vec<Vec<S>> = (0..=k).map(|j| complete_homogeneous(k, &avals[..j])).collect();
    let mut out: Vec<S> = Vec::with_capacity(k + 1);
    out.push(S::one());
    for n in 1..=k {
        let mut v = hvals[n].clone();
        for (j, hj) in out.iter().enumerate().skip(1) {
            v = v - hj.clone() * hh[j][n - j].clone();
        }
        out.push(v);
    }
    Ok(out)
}

/// Image of `h_{k;a}`; see [`multiparam_h_all`].
pub fn multiparam_h<S: Scalar>(k: usize, a: &ParameterSequence, hvals: &[S]) -> Result<S> {
    Ok(multiparam_h_all(k, a, hvals)?.pop().expect("nonempty"))
}

/// `s_{μ;a} = det[h_{μ_i − i + j; τ^{1−j} a}]`.
pub fn multiparam_schur<S: Scalar>(mu: &Partition, a: &ParameterSequence, hvals: &[S]) -> Result<S> {
    let l = mu.len();
    if l == 0 {
        return Ok(S::one());
    }
    let top = mu.row(1) + l - 1;
    let cols: Vec<Vec<S>> = (1..=l as i64)
        .map(|j| multiparam_h_all(top, &a.shift(1 - j), hvals))
        .collect::<Result<_>>()?;
    Ok(det(l, |i, j| {
        let idx = mu.parts()[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            S::zero()
        } else {
            cols[j][idx as usize].clone()
        }
    }))
}

/// `Fs_μ(λ) = dim(μ, λ) · n^{↓m} / dim λ`, `n = |λ|`, `m = |μ|`.
pub fn frobenius_schur_at(mu: &Partition, lambda: &Partition) -> Q {
    let (m, n) = (mu.size(), lambda.size());
    if n < m || !mu.is_contained_in(lambda) {
        return Q::zero();
    }
    let num = dim_skew(mu, lambda) * falling_factorial(n, m);
    Q::new(num.into(), lambda.dim().into())
}

/// `𝐩_k(λ) = Σ a_i^k + (−1)^{k−1} Σ b_i^k`.
pub fn power_sum_at_partition(k: u32, lambda: &Partition) -> Q {
    let (a, b) = lambda.modified_frobenius();
    let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
    let mut acc = Q::zero();
    for (ai, bi) in a.iter().zip(&b) {
        acc += num_traits::pow(ai.clone(), k as usize) + sign.clone() * num_traits::pow(bi.clone(), k as usize);
    }
    acc
}

/// Coefficients `h_0, …, h_k` of `H(u) = Π (u + b_i)/(u − a_i)` in `u^{−1}`.
pub fn hvals_at_partition(lambda: &Partition, k: usize) -> Vec<Q> {
    let (a, b) = lambda.modified_frobenius();
    series_product(k, &a, &b, |x| x.clone())
}

/// Coefficients of `Π (1 + b_i t)/(1 − a_i t)` up to `t^k`.
fn series_product<S: Scalar, T>(k: usize, a: &[T], b: &[T], conv: impl Fn(&T) -> S) -> Vec<S> {
    let mut c = vec![S::zero(); k + 1];
    c[0] = S::one();
    for ai in a {
        let ai = conv(ai);
        for d in 1..=k {
            let v = c[d].clone() + ai.clone() * c[d - 1].clone();
            c[d] = v;
        }
    }
    for bi in b {
        let bi = conv(bi);
        for d in (1..=k).rev() {
            let v = c[d].clone() + bi.clone() * c[d - 1].clone();
            c[d] = v;
        }
    }
    c
}

/// `H(u)(λ) = Π_{i ≤ d} (u + b_i)/(u − a_i)`.
pub fn h_at_partition<S: Scalar>(u: &S, lambda: &Partition) -> Result<S> {
    let (a, b) = lambda.modified_frobenius();
    let mut acc = S::one();
    for (ai, bi) in a.iter().zip(&b) {
        let den = u.clone() - S::from_q(ai);
        if den.is_zero() {
            return Err(Error::Pole(format!("H(u) at u = a_i = {ai}")));
        }
        acc = acc * (u.clone() + S::from_q(bi)) / den;
    }
    Ok(acc)
}

/// `E(v)(λ) = Π_{i ≤ d} (v + a_i)/(v − b_i)`.
pub fn e_at_partition<S: Scalar>(v: &S, lambda: &Partition) -> Result<S> {
    let (a, b) = lambda.modified_frobenius();
    let mut acc = S::one();
    for (ai, bi) in a.iter().zip(&b) {
        let den = v.clone() - S::from_q(bi);
        if den.is_zero() {
            return Err(Error::Pole(format!("E(v) at v = b_i = {bi}")));
        }
        acc = acc * (v.clone() + S::from_q(ai)) / den;
    }
    Ok(acc)
}

/// `(x − 1/2)(x − 3/2)⋯(x − (2m−1)/2)`.
pub fn shifted_falling<S: Scalar>(x: &S, m: usize) -> S {
    let mut acc = S::one();
    for i in 0..m {
        acc = acc * (x.clone() - S::from_ratio(2 * i as i64 + 1, 2));
    }
    acc
}

/// A point `ω = (α, β, δ)` with finitely many nonzero `α_i`, `β_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaPoint {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub delta: f64,
}

impl OmegaPoint {
    pub fn new(mut alpha: Vec<f64>, mut beta: Vec<f64>, delta: f64) -> Result<Self> {
        if alpha.iter().chain(&beta).any(|x| !(*x >= 0.0)) || !(delta >= 0.0) {
            return Err(Error::Domain("ω coordinates must be nonnegative".into()));
        }
        alpha.sort_by(|x, y| y.total_cmp(x));
        beta.sort_by(|x, y| y.total_cmp(x));
        alpha.retain(|&x| x > 0.0);
        beta.retain(|&x| x > 0.0);
        let mass: f64 = alpha.iter().chain(&beta).sum();
        if mass > delta * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::Domain(format!("Σα + Σβ = {mass} exceeds δ = {delta}")));
        }
        Ok(Self { alpha, beta, delta })
    }

    /// Image of a partition of `n`: `α = a/n`, `β = b/n`, `δ = 1`, then scaled by `r`.
    pub fn from_partition(lambda: &Partition, scale: f64) -> Self {
        let n = lambda.size().max(1) as f64;
        let (a, b) = lambda.modified_frobenius_f64();
        Self {
            alpha: a.iter().map(|x| scale * x / n).collect(),
            beta: b.iter().map(|x| scale * x / n).collect(),
            delta: if lambda.is_empty() { 0.0 } else { scale },
        }
    }

    /// `γ = δ − Σα − Σβ`, clamped at zero against rounding.
    pub fn gamma(&self) -> f64 {
        (self.delta - self.alpha.iter().sum::<f64>() - self.beta.iter().sum::<f64>()).max(0.0)
    }
}

/// `φ(𝐩_1)(ω) = δ`, `φ(𝐩_k)(ω) = Σ α_i^k + (−1)^{k−1} Σ β_j^k` for `k ≥ 2`.
pub fn power_sum_at_omega(k: u32, omega: &OmegaPoint) -> f64 {
    if k == 1 {
        return omega.delta;
    }
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    omega.alpha.iter().map(|x| f64::powi(*x, k as i32)).sum::<f64>() + sign * omega.beta.iter().map(|x| f64::powi(*x, k as i32)).sum::<f64>()
}

/// Coefficients `h_0, …, h_k` of `e^{γt} Π (1 + β_j t)/(1 − α_i t)`.
pub fn hvals_at_omega(omega: &OmegaPoint, k: usize) -> Vec<f64> {
    let mut c: Vec<f64> = series_product(k, &omega.alpha, &omega.beta, |x| *x);
    let g = omega.gamma();
    let mut expo = vec![0.0; k + 1];
    expo[0] = 1.0;
    for d in 1..=k {
        expo[d] = expo[d - 1] * g / d as f64;
    }
    let prod = c.clone();
    for d in 0..=k {
        c[d] = (0..=d).map(|j| prod[j] * expo[d - j]).sum();
    }
    c
}

/// `s_λ(ω)` by Jacobi–Trudi over [`hvals_at_omega`].
pub fn schur_at_omega(lambda: &Partition, omega: &OmegaPoint) -> f64 {
    let h = hvals_at_omega(omega, lambda.row(1) + lambda.len());
    jacobi_trudi(lambda, &h).expect("enough h values")
}

/// `H(u)(ω) = e^{γ/u} Π (1 + β_j/u)/(1 − α_i/u)`.
pub fn h_at_omega(u: Complex64, omega: &OmegaPoint) -> Result<Complex64> {
    let inv = 1.0 / u;
    let mut acc = (omega.gamma() * inv).exp();
    for &b in &omega.beta {
        acc *= 1.0 + b * inv;
    }
    for &a in &omega.alpha {
        let den = 1.0 - a * inv;
        if den.norm() == 0.0 {
            return Err(Error::Pole(format!("H(u)(ω) at u = α_i = {a}")));
        }
        acc /= den;
    }
    Ok(acc)
}

/// `E(v)(ω) = e^{γ/v} Π (1 + α_i/v)/(1 − β_j/v)`.
pub fn e_at_omega(v: Complex64, omega: &OmegaPoint) -> Result<Complex64> {
    let swapped = OmegaPoint { alpha: omega.beta.clone(), beta: omega.alpha.clone(), delta: omega.delta };
    h_at_omega(v, &swapped).map_err(|_| Error::Pole(format!("E(v)(ω) at v = {v}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;
    use crate::scalar::qi;

    fn p(v: &[i64]) -> Partition {
        Partition::from_parts(v).unwrap()
    }

    #[test]
    fn schur_examples() {
        let xs = [qi(2), qi(3)];
        assert_eq!(schur_at_points(&Partition::empty(), &xs), Q::one());
        assert_eq!(schur_at_points(&p(&[1]), &xs), qi(5));
        // s_(2,1)(x1,x2,x3) = Σ_{i≠j} x_i² x_j + 2 x1 x2 x3
        let xs = [qi(1), qi(2), qi(3)];
        let mut mono = Q::zero();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    mono += xs[i].clone() * xs[i].clone() * xs[j].clone();
                }
            }
        }
        mono += qi(2) * qi(6);
        assert_eq!(schur_at_points(&p(&[2, 1]), &xs), mono);
        assert_eq!(schur_bialternant(&p(&[2, 1]), &xs).unwrap(), mono);
        assert!(schur_bialternant(&p(&[1]), &[qi(1), qi(1)]).is_err());
        assert_eq!(schur_at_points(&p(&[1, 1, 1]), &[qi(1), qi(2)]), Q::zero());
    }

    #[test]
    fn parameter_sequence_algebra() {
        let a = ParameterSequence::frobenius();
        assert_eq!(a.get(1), q(1, 2));
        assert_eq!(a.shift(2).get(1), q(5, 2));
        assert_eq!(a.shift(2).shift(-3), a.shift(-1));
        assert_eq!(a.dual().dual(), a);
        // â_i = −a_{−i+1} = −(−i + 1/2) = i − 1/2: the Frobenius sequence is self-dual
        for i in -4..5 {
            assert_eq!(a.dual().get(i), a.get(i));
        }
        let mut t = BTreeMap::new();
        t.insert(1, q(3, 7));
        t.insert(0, q(-2, 5));
        let b = ParameterSequence::table(t, qi(1));
        assert_eq!(b.dual().get(1), q(2, 5));
        assert_eq!(b.dual().get(0), q(-3, 7));
        assert_eq!(b.dual().get(5), qi(-1));
        assert_eq!(b.shift(1).get(0), q(3, 7));
    }

    #[test]
    fn multiparam_h_low_degrees() {
        let hv = vec![qi(1), qi(3), qi(7), qi(-2)];
        let mut t = BTreeMap::new();
        t.insert(1, q(1, 3));
        t.insert(2, q(-5, 2));
        let a = ParameterSequence::table(t, Q::zero());
        assert_eq!(multiparam_h(0, &a, &hv).unwrap(), qi(1));
        assert_eq!(multiparam_h(1, &a, &hv).unwrap(), qi(3));
        // h_{2;a} = h_2 − a_1 h_1
        assert_eq!(multiparam_h(2, &a, &hv).unwrap(), qi(7) - q(1, 3) * qi(3));
        let zero = ParameterSequence::zero();
        assert_eq!(multiparam_h(3, &zero, &hv).unwrap(), qi(-2));
        assert!(multiparam_h(4, &a, &hv).is_err());
    }

    #[test]
    fn frobenius_schur_examples() {
        for n in 0..=8 {
            for l in enumerate_partitions(n) {
                assert_eq!(frobenius_schur_at(&Partition::empty(), &l), Q::one());
                assert_eq!(frobenius_schur_at(&p(&[1]), &l), qi(n as i64));
                assert_eq!(power_sum_at_partition(1, &l), qi(n as i64));
            }
        }
        assert_eq!(frobenius_schur_at(&p(&[1]), &Partition::empty()), Q::zero());
        assert_eq!(power_sum_at_partition(2, &p(&[1])), Q::zero());
        assert_eq!(power_sum_at_partition(3, &p(&[2])), q(7, 2));
    }

    #[test]
    fn frobenius_schur_matches_multiparameter_determinant() {
        let a = ParameterSequence::frobenius();
        for m in 0..=4 {
            for mu in enumerate_partitions(m) {
                for n in 0..=8 {
                    for l in enumerate_partitions(n) {
                        let hv = hvals_at_partition(&l, mu.row(1) + mu.len());
                        let det = multiparam_schur(&mu, &a, &hv).unwrap();
                        assert_eq!(det, frobenius_schur_at(&mu, &l), "μ={mu} λ={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn omega_power_sums_and_products() {
        let w = OmegaPoint::new(vec![0.3], vec![0.1], 1.0).unwrap();
        assert_eq!(power_sum_at_omega(1, &w), 1.0);
        assert!((power_sum_at_omega(2, &w) - 0.08).abs() < 1e-15);
        let zero = OmegaPoint::new(vec![], vec![], 1.0).unwrap();
        assert_eq!(power_sum_at_omega(2, &zero), 0.0);
        assert!(OmegaPoint::new(vec![0.7], vec![0.5], 1.0).is_err());
        let u = Complex64::new(2.0, 1.0);
        let prod = h_at_omega(u, &w).unwrap() * e_at_omega(-u, &w).unwrap();
        assert!((prod - 1.0).norm() < 1e-14);
    }

    #[test]
    fn partition_products() {
        let u = q(7, 3);
        assert_eq!(h_at_partition(&u, &Partition::empty()).unwrap(), Q::one());
        assert_eq!(h_at_partition(&u, &p(&[1])).unwrap(), (u.clone() + q(1, 2)) / (u.clone() - q(1, 2)));
        assert!(h_at_partition(&q(1, 2), &p(&[1])).is_err());
        for n in 0..=6 {
            for l in enumerate_partitions(n) {
                let prod = e_at_partition(&-u.clone(), &l).unwrap() * h_at_partition(&u, &l).unwrap();
                assert_eq!(prod, Q::one());
            }
        }
    }
}
