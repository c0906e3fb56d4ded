//! Orthogonal polynomial ensembles over finitely supported measures, in
//! exact rational arithmetic.
//!
//! `P(X) ∝ V(X)² Π_{x∈X} w(x)` on unordered `N`-subsets `X` of the atoms.
//! Ordered tuples would multiply every weight by `N!`, which cancels in the
//! normalization.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{det, fmt_q, parse_rational, Q};
use crate::symfunc::schur_at_points;

/// `α = Σ w_j δ_{t_j}` with distinct atoms and positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<Q>,
    weights: Vec<Q>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MeasureJson {
    Columns { atoms: Vec<String>, weights: Vec<String> },
    Pairs(Vec<(String, String)>),
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Q>, weights: Vec<Q>) -> Result<Self> {
        if atoms.len() != weights.len() || atoms.is_empty() {
            return Err(Error::InvalidMeasure(format!("{} atoms but {} weights", atoms.len(), weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| **w <= Q::zero()) {
            return Err(Error::InvalidMeasure(format!("nonpositive weight {}", fmt_q(w))));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(Error::InvalidMeasure(format!("repeated atom {}", fmt_q(a))));
            }
        }
        Ok(Self { atoms, weights })
    }

    /// Unit weights on the given atoms.
    pub fn uniform(atoms: Vec<Q>) -> Result<Self> {
        let n = atoms.len();
        Self::new(atoms, vec![Q::one(); n])
    }

    /// Lines `atom,weight`; blank lines, `#` comments and a non-numeric
    /// header line are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected `atom,weight`", k + 1)));
            }
            match (parse_rational(fields[0]), parse_rational(fields[1])) {
                (Ok(a), Ok(w)) => {
                    atoms.push(a);
                    weights.push(w);
                }
                _ if atoms.is_empty() && k == 0 => continue,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        Self::new(atoms, weights)
    }

    /// `{"atoms": [...], "weights": [...]}` or `[[atom, weight], ...]`, with
    /// rationals as strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: MeasureJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure JSON: {e}")))?;
        let (a, w): (Vec<String>, Vec<String>) = match parsed {
            MeasureJson::Columns { atoms, weights } => (atoms, weights),
            MeasureJson::Pairs(p) => p.into_iter().unzip(),
        };
        let atoms = a.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        let weights = w.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        Self::new(atoms, weights)
    }

    pub fn atoms(&self) -> &[Q] {
        &self.atoms
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weight_of(&self, x: &Q) -> Option<&Q> {
        self.atoms.iter().position(|a| a == x).map(|i| &self.weights[i])
    }

    /// `A_n = Σ w_j t_jⁿ`.
    pub fn moment(&self, n: usize) -> Q {
        self.atoms.iter().zip(&self.weights).map(|(t, w)| w * num_traits::pow(t.clone(), n)).sum()
    }

    fn inner(&self, f: &[Q], g: &[Q]) -> Q {
        self.atoms.iter().zip(&self.weights).map(|(t, w)| w * poly_eval(f, t) * poly_eval(g, t)).sum()
    }
}

pub fn moment(alpha: &DiscreteMeasure, n: usize) -> Q {
    alpha.moment(n)
}

/// `Σ c_k x^k` with coefficients listed from degree 0.
pub fn poly_eval(coeffs: &[Q], x: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Monic orthogonal polynomials `π_0, …, π_k` by exact Gram–Schmidt.
pub fn orthopolys(alpha: &DiscreteMeasure, k: usize) -> Result<Vec<Vec<Q>>> {
    if k >= alpha.len() {
        return Err(Error::Domain(format!("π_{k} needs more than {} atoms", alpha.len())));
    }
    let mut out: Vec<Vec<Q>> = Vec::with_capacity(k + 1);
    let mut norms: Vec<Q> = Vec::with_capacity(k + 1);
    for d in 0..=k {
        let mut p = vec![Q::zero(); d + 1];
        p[d] = Q::one();
        let mono = p.clone();
        for (q, nq) in out.iter().zip(&norms) {
            let c = alpha.inner(&mono, q) / nq;
            for (i, qi) in q.iter().enumerate() {
                p[i] -= &c * qi;
            }
        }
        norms.push(alpha.inner(&p, &p));
        out.push(p);
    }
    Ok(out)
}

pub fn orthopoly(alpha: &DiscreteMeasure, k: usize) -> Result<Vec<Q>> {
    Ok(orthopolys(alpha, k)?.pop().expect("k + 1 polynomials"))
}

/// `N` points drawn from `α` with Vandermonde-squared interaction.
#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    measure: DiscreteMeasure,
    n: usize,
    configs: Vec<(Vec<usize>, Q)>,
}

fn subsets(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=m - left {
            cur.push(i);
            rec(i + 1, m, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, n, &mut Vec::new(), &mut out);
    out
}

fn vandermonde_sq(xs: &[&Q]) -> Q {
    let mut v = Q::one();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = xs[i] - xs[j];
            v *= &d * &d;
        }
    }
    v
}

impl EnsembleSpec {
    pub fn new(measure: DiscreteMeasure, n: usize) -> Result<Self> {
        if n == 0 || n > measure.len() {
            return Err(Error::InvalidMeasure(format!("N = {n} points on {} atoms", measure.len())));
        }
        let mut configs: Vec<(Vec<usize>, Q)> = subsets(measure.len(), n)
            .into_iter()
            .map(|s| {
                let xs: Vec<&Q> = s.iter().map(|&i| &measure.atoms[i]).collect();
                let w: Q = s.iter().map(|&i| measure.weights[i].clone()).product();
                let v = vandermonde_sq(&xs) * w;
                (s, v)
            })
            .collect();
        let z: Q = configs.iter().map(|(_, v)| v.clone()).sum();
        for (_, v) in configs.iter_mut() {
            *v /= &z;
        }
        Ok(Self { measure, n, configs })
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Configurations (as sorted atom values) with their probabilities.
    pub fn configurations(&self) -> impl Iterator<Item = (Vec<Q>, &Q)> + '_ {
        self.configs.iter().map(|(s, p)| (s.iter().map(|&i| self.measure.atoms[i].clone()).collect(), p))
    }

    /// `Z = Σ_X V(X)² Π w` equals the Hankel determinant `det[A_{i+j}]_{i,j<N}`.
    pub fn partition_function(&self) -> Q {
        let atoms: Vec<&Q> = self.measure.atoms.iter().collect();
        subsets(self.measure.len(), self.n)
            .into_iter()
            .map(|s| {
                let xs: Vec<&Q> = s.iter().map(|&i| atoms[i]).collect();
                vandermonde_sq(&xs) * s.iter().map(|&i| self.measure.weights[i].clone()).product::<Q>()
            })
            .sum()
    }

    pub fn hankel_determinant(&self) -> Q {
        let a: Vec<Q> = (0..2 * self.n).map(|k| self.measure.moment(k)).collect();
        det(self.n, |i, j| a[i + j].clone())
    }

    fn indices(&self, x: &[Q]) -> Result<Vec<usize>> {
        let mut idx = Vec::with_capacity(x.len());
        for v in x {
            let i = self.measure.atoms.iter().position(|a| a == v).ok_or_else(|| Error::Domain(format!("{} is not an atom", fmt_q(v))))?;
            idx.push(i);
        }
        Ok(idx)
    }

    /// `P(X)`; zero when `X` repeats an atom.
    pub fn prob(&self, x: &[Q]) -> Result<Q> {
        if x.len() != self.n {
            return Err(Error::InvalidConfiguration(format!("|X| = {} but N = {}", x.len(), self.n)));
        }
        let mut idx = self.indices(x)?;
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Ok(Q::zero());
        }
        Ok(self.configs.iter().find(|(s, _)| *s == idx).map(|(_, p)| p.clone()).unwrap_or_else(Q::zero))
    }

    /// `⟨f⟩ = Σ_X f(X) P(X)` by enumeration.
    pub fn expect(&self, f: impl Fn(&[Q]) -> Q) -> Q {
        self.configurations().map(|(x, p)| f(&x) * p).sum()
    }

    /// `ρ_m(Y) = Σ_{X ⊇ Y} P(X)`.
    pub fn rho_brute(&self, y: &[Q]) -> Result<Q> {
        let idx = self.indices(y)?;
        if (1..idx.len()).any(|i| idx[..i].contains(&idx[i])) {
            return Err(Error::InvalidConfiguration("repeated point".into()));
        }
        Ok(self.configs.iter().filter(|(s, _)| idx.iter().all(|i| s.contains(i))).map(|(_, p)| p.clone()).sum())
    }

    /// `⟨s_λ⟩ = det[A_{λ_i+N−i+N−j}] / det[A_{2N−i−j}]`, zero when `ℓ(λ) > N`.
    pub fn avg_schur(&self, lambda: &Partition) -> Q {
        let n = self.n;
        if lambda.len() > n {
            return Q::zero();
        }
        let top = (0..n).map(|i| lambda.row(i + 1)).max().unwrap_or(0) + 2 * n;
        let a: Vec<Q> = (0..=top).map(|k| self.measure.moment(k)).collect();
        let num = det(n, |i, j| a[lambda.row(i + 1) + 2 * n - 2 - i - j].clone());
        let den = det(n, |i, j| a[2 * n - 2 - i - j].clone());
        num / den
    }

    /// `⟨s_λ⟩` by summing `s_λ(X) P(X)` over configurations.
    pub fn avg_schur_enumerated(&self, lambda: &Partition) -> Q {
        self.expect(|x| schur_at_points(lambda, x))
    }

    /// `⟨s_λ⟩ − det[⟨s_{(p_i|q_j)}⟩]`.
    pub fn giambelli_residual(&self, lambda: &Partition) -> Q {
        let f = lambda.frobenius();
        let mut cache: HashMap<(usize, usize), Q> = HashMap::new();
        let rhs = det(f.d(), |i, j| {
            cache.entry((f.p[i], f.q[j])).or_insert_with(|| self.avg_schur(&Partition::hook(f.p[i], f.q[j]))).clone()
        });
        self.avg_schur(lambda) - rhs
    }

    fn check_atom(&self, x: &Q) -> Result<Q> {
        self.measure.weight_of(x).cloned().ok_or_else(|| Error::Domain(format!("{} is outside the support", fmt_q(x))))
    }

    /// Christoffel–Darboux kernel `Σ_{k<N} π_k(x) π_k(y) / ‖π_k‖² · w(y)`.
    ///
    /// The weight is put on the second argument only, which keeps the kernel
    /// rational; it differs from the symmetric `√(w(x)w(y))` form by the
    /// gauge `√(w(y)/w(x))`, which leaves correlation determinants unchanged.
    pub fn cd_kernel(&self, x: &Q, y: &Q) -> Result<Q> {
        self.check_atom(x)?;
        let wy = self.check_atom(y)?;
        let polys = orthopolys(&self.measure, self.n - 1)?;
        let mut acc = Q::zero();
        for p in &polys {
            acc += poly_eval(p, x) * poly_eval(p, y) / self.measure.inner(p, p);
        }
        Ok(acc * wy)
    }

    /// `Res_{u=y} ⟨E(−x)H(u)⟩ / (x − y)` up to the gauge `(y/x)^N`:
    /// `Σ_{X∋y} P(X) Π_{x_i ∈ X∖{y}} (x − x_i)/(y − x_i)`.
    ///
    /// This is a polynomial in `x`, so the diagonal needs no limit.
    pub fn residue_kernel(&self, x: &Q, y: &Q) -> Result<Q> {
        self.check_atom(x)?;
        self.check_atom(y)?;
        let mut acc = Q::zero();
        for (pts, p) in self.configurations() {
            if !pts.contains(y) {
                continue;
            }
            let mut term = p.clone();
            for xi in pts.iter().filter(|v| *v != y) {
                term *= (x - xi) / (y - xi);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// The residue kernel with its `(y/x)^N` factor kept; needs `x ≠ 0`.
    pub fn residue_kernel_raw(&self, x: &Q, y: &Q) -> Result<Q> {
        if x.is_zero() {
            return Err(Error::Domain("(y/x)^N is singular at x = 0".into()));
        }
        Ok(self.residue_kernel(x, y)? * num_traits::pow(y / x, self.n))
    }

    pub fn rho_from(&self, y: &[Q], k: impl Fn(&Q, &Q) -> Result<Q>) -> Result<Q> {
        let m = y.len();
        let mut entries = Vec::with_capacity(m * m);
        for a in y {
            for b in y {
                entries.push(k(a, b)?);
            }
        }
        Ok(det(m, |i, j| entries[i * m + j].clone()))
    }

    /// `H(u)(X) = Π u/(u − x_i)`.
    pub fn h_at(u: &Q, x: &[Q]) -> Result<Q> {
        x.iter().try_fold(Q::one(), |acc, xi| {
            let d = u - xi;
            if d.is_zero() {
                return Err(Error::Pole(format!("H(u) at u = {}", fmt_q(u))));
            }
            Ok(acc * u / d)
        })
    }

    /// `E(v)(X) = Π (v + x_i)/v`.
    pub fn e_at(v: &Q, x: &[Q]) -> Result<Q> {
        if v.is_zero() {
            return Err(Error::Pole("E(v) at v = 0".into()));
        }
        Ok(x.iter().fold(Q::one(), |acc, xi| acc * (v + xi) / v))
    }

    /// `⟨det[H(u_i)E(v_j)/(u_i+v_j)]⟩ − det[⟨H(u_i)E(v_j)⟩/(u_i+v_j)]`, exactly.
    pub fn determinantal_residual(&self, us: &[Q], vs: &[Q]) -> Result<Q> {
        let d = us.len();
        if vs.len() != d {
            return Err(Error::Domain("u and v lists differ in length".into()));
        }
        let mut lhs = Q::zero();
        let mut avg = vec![Q::zero(); d * d];
        for (x, p) in self.configurations() {
            let hs = us.iter().map(|u| Self::h_at(u, &x)).collect::<Result<Vec<_>>>()?;
            let es = vs.iter().map(|v| Self::e_at(v, &x)).collect::<Result<Vec<_>>>()?;
            let mut m = Vec::with_capacity(d * d);
            for i in 0..d {
                for j in 0..d {
                    let s = &us[i] + &vs[j];
                    if s.is_zero() {
                        return Err(Error::Domain("u_i + v_j = 0".into()));
                    }
                    let e = &hs[i] * &es[j] / s;
                    avg[i * d + j] += &e * p;
                    m.push(e);
                }
            }
            lhs += det(d, |i, j| m[i * d + j].clone()) * p;
        }
        Ok(lhs - det(d, |i, j| avg[i * d + j].clone()))
    }
}

pub fn ensemble_prob(x: &[Q], spec: &EnsembleSpec) -> Result<Q> {
    spec.prob(x)
}

pub fn avg_schur(lambda: &Partition, spec: &EnsembleSpec) -> Q {
    spec.avg_schur(lambda)
}

pub fn giambelli_check_ope(lambda: &Partition, spec: &EnsembleSpec) -> Q {
    spec.giambelli_residual(lambda)
}

pub fn cd_kernel(x: &Q, y: &Q, spec: &EnsembleSpec) -> Result<Q> {
    spec.cd_kernel(x, y)
}

pub fn residue_kernel(x: &Q, y: &Q, spec: &EnsembleSpec) -> Result<Q> {
    spec.residue_kernel(x, y)
}
