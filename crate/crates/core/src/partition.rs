//! Young diagrams, Frobenius coordinates and Young-graph combinatorics.
//!
//! A [`Partition`] is stored as its nonincreasing list of positive row
//! lengths. Boxes are indexed `(i, j)` with 1-based row `i` and column `j`;
//! the content of a box is `j - i`.
//!
//! Partitions correspond bijectively to balanced finite subsets of the
//! half-integer lattice through the modified Frobenius coordinates
//! `a_i = p_i + 1/2`, `b_i = q_i + 1/2`:
//! `λ ↦ {-b_1, …, -b_d, a_d, …, a_1}`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusCoords {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl FrobeniusCoords {
    pub fn d(&self) -> usize {
        self.p.len()
    }
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from a nonincreasing list of nonnegative integers;
    /// trailing zeros are dropped.
    pub fn from_parts(parts: &[i64]) -> Result<Self> {
        if let Some(neg) = parts.iter().find(|&&x| x < 0) {
            return Err(Error::InvalidPartition(format!("negative part {neg}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not nonincreasing")));
        }
        Ok(Self {
            parts: parts.iter().filter(|&&x| x > 0).map(|&x| x as usize).collect(),
        })
    }

    /// Caller guarantees the parts are positive and nonincreasing.
    pub(crate) fn from_vec_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&x| x > 0));
        Self { parts }
    }

    /// The hook `(p | q)`, i.e. the diagram `(p + 1, 1^q)`.
    pub fn hook(p: usize, q: usize) -> Self {
        let mut parts = vec![p + 1];
        parts.extend(std::iter::repeat_n(1, q));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length `λ_i` with 1-based `i`; zero beyond the last row.
    pub fn row(&self, i: usize) -> usize {
        self.parts.get(i.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=cols).map(|j| self.parts.iter().take_while(|&&r| r >= j).count()).collect();
        Self { parts }
    }

    /// `self ⊆ other` as diagrams.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.parts.len() <= other.parts.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Boxes `(i, j)`, 1-based, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &r)| (1..=r).map(move |j| (i + 1, j)))
    }

    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.boxes().map(|(i, j)| j as i64 - i as i64)
    }

    /// Number of diagonal boxes.
    pub fn diagonal(&self) -> usize {
        self.parts.iter().enumerate().take_while(|&(i, &r)| r > i).count()
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let d = self.diagonal();
        let t = self.transpose();
        FrobeniusCoords {
            p: (1..=d).map(|i| self.parts[i - 1] - i).collect(),
            q: (1..=d).map(|i| t.parts[i - 1] - i).collect(),
        }
    }

    pub fn from_frobenius(f: &FrobeniusCoords) -> Result<Self> {
        if f.p.len() != f.q.len() {
            return Err(Error::InvalidPartition("Frobenius p and q differ in length".into()));
        }
        let strictly_decreasing = |v: &[usize]| v.windows(2).all(|w| w[0] > w[1]);
        if !strictly_decreasing(&f.p) || !strictly_decreasing(&f.q) {
            return Err(Error::InvalidPartition("Frobenius coordinates must be strictly decreasing".into()));
        }
        let d = f.p.len();
        // rows 1..=d come from p; rows below the diagonal from the columns
        let mut parts: Vec<usize> = (0..d).map(|i| f.p[i] + i + 1).collect();
        let depth = f.q.first().map_or(0, |&q1| q1 + 1);
        for row in d + 1..=depth {
            // number of columns j ≤ d whose length λ'_j = q_j + j reaches this row
            let len = (0..d).filter(|&j| f.q[j] + j + 1 >= row).count();
            parts.push(len);
        }
        Ok(Self { parts })
    }

    /// Modified Frobenius coordinates `(a, b)` as exact rationals.
    pub fn modified_frobenius(&self) -> (Vec<Q>, Vec<Q>) {
        let f = self.frobenius();
        let conv = |v: &[usize]| v.iter().map(|&x| q(2 * x as i64 + 1, 2)).collect();
        (conv(&f.p), conv(&f.q))
    }

    /// Modified Frobenius coordinates `(a, b)` as floats.
    pub fn modified_frobenius_f64(&self) -> (Vec<f64>, Vec<f64>) {
        let f = self.frobenius();
        let conv = |v: &[usize]| v.iter().map(|&x| x as f64 + 0.5).collect();
        (conv(&f.p), conv(&f.q))
    }

    /// Product of hook lengths.
    pub fn hook_product(&self) -> BigUint {
        let t = self.transpose();
        let mut acc = BigUint::one();
        for (i, j) in self.boxes() {
            let arm = self.parts[i - 1] - j;
            let leg = t.parts[j - 1] - i;
            acc *= BigUint::from(arm + leg + 1);
        }
        acc
    }

    /// `ln` of the hook product, for float backends at large sizes.
    pub fn ln_hook_product(&self) -> f64 {
        let t = self.transpose();
        self.boxes()
            .map(|(i, j)| ((self.parts[i - 1] - j) + (t.parts[j - 1] - i) + 1) as f64)
            .map(f64::ln)
            .sum()
    }

    /// Number of standard Young tableaux, by the hook-length formula.
    pub fn dim(&self) -> BigUint {
        factorial(self.size()) / self.hook_product()
    }

    /// Diagrams obtained by adding one box, each with the content of the new box.
    pub fn successors(&self) -> Vec<(Partition, i64)> {
        let mut out = Vec::new();
        for i in 0..=self.parts.len() {
            let r = self.row(i + 1);
            let above = if i == 0 { usize::MAX } else { self.parts[i - 1] };
            if r < above {
                let mut parts = self.parts.clone();
                if i == parts.len() {
                    parts.push(1);
                } else {
                    parts[i] += 1;
                }
                out.push((Partition { parts }, r as i64 - i as i64));
            }
        }
        out
    }

    /// Diagrams obtained by removing one corner box, with that box's content.
    pub fn predecessors(&self) -> Vec<(Partition, i64)> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            let below = self.row(i + 2);
            if self.parts[i] > below {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                out.push((Partition { parts }, self.parts[i] as i64 - 1 - i as i64));
            }
        }
        out
    }

    /// Contents of addable boxes and of removable boxes (the interlacing
    /// coordinates of the diagram's profile), both increasing.
    pub fn corner_contents(&self) -> (Vec<i64>, Vec<i64>) {
        let mut addable: Vec<i64> = self.successors().into_iter().map(|(_, c)| c).collect();
        let mut removable: Vec<i64> = self.predecessors().into_iter().map(|(_, c)| c).collect();
        addable.sort_unstable();
        removable.sort_unstable();
        (addable, removable)
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n (n-1) ⋯ (n-m+1)`, zero when `n < m`.
pub fn falling_factorial(n: usize, m: usize) -> BigUint {
    if n < m {
        return BigUint::zero();
    }
    (n - m + 1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Number of monotone paths `μ ↗ … ↗ λ` in the Young graph, i.e. standard
/// tableaux of skew shape `λ / μ`; zero unless `μ ⊆ λ`.
pub fn dim_skew(mu: &Partition, lambda: &Partition) -> BigUint {
    if !mu.is_contained_in(lambda) {
        return BigUint::zero();
    }
    let mut memo: HashMap<Partition, BigUint> = HashMap::new();
    memo.insert(mu.clone(), BigUint::one());
    dim_skew_rec(mu, lambda, &mut memo)
}

fn dim_skew_rec(mu: &Partition, nu: &Partition, memo: &mut HashMap<Partition, BigUint>) -> BigUint {
    if let Some(v) = memo.get(nu) {
        return v.clone();
    }
    let total = nu
        .predecessors()
        .into_iter()
        .filter(|(pred, _)| mu.is_contained_in(pred))
        .map(|(pred, _)| dim_skew_rec(mu, &pred, memo))
        .fold(BigUint::zero(), |a, b| a + b);
    memo.insert(nu.clone(), total.clone());
    total
}

/// All partitions of `n`, in reverse lexicographic order (`[n]` first,
/// `[1^n]` last).
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    out
}

fn fill(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for k in (1..=rem.min(max)).rev() {
        cur.push(k);
        fill(rem - k, k, cur, out);
        cur.pop();
    }
}

/// A point of `ℤ' = ℤ + 1/2`, stored as twice its value (always odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice.rem_euclid(2) != 1 {
            return Err(Error::InvalidConfiguration(format!("{twice}/2 is not a half-integer")));
        }
        Ok(Self(twice))
    }

    /// `k + 1/2`.
    pub fn from_floor(k: i64) -> Self {
        Self(2 * k + 1)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn to_q(self) -> Q {
        q(self.0, 2)
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    /// `|x| - 1/2`, the Frobenius coordinate this point encodes.
    pub fn frobenius_index(self) -> usize {
        ((self.0.abs() - 1) / 2) as usize
    }

    /// Parses `"7/2"`, `"-1/2"`, `"3.5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let v = crate::scalar::parse_rational(s)?;
        let twice = v * q(2, 1);
        if !twice.is_integer() {
            return Err(Error::InvalidConfiguration(format!("{s} is not a half-integer")));
        }
        let t = twice.to_integer().to_i64().ok_or_else(|| Error::Parse(format!("{s} out of range")))?;
        Self::from_twice(t)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Finite subset of `ℤ'`, sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeConfiguration {
    points: Vec<HalfInt>,
}

impl LatticeConfiguration {
    pub fn new(points: impl IntoIterator<Item = HalfInt>) -> Self {
        let set: BTreeSet<HalfInt> = points.into_iter().collect();
        Self { points: set.into_iter().collect() }
    }

    pub fn points(&self) -> &[HalfInt] {
        &self.points
    }

    pub fn contains(&self, x: HalfInt) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    pub fn is_balanced(&self) -> bool {
        let pos = self.points.iter().filter(|x| x.is_positive()).count();
        2 * pos == self.points.len()
    }

    /// Recovers the partition; fails on unbalanced configurations.
    pub fn to_partition(&self) -> Result<Partition> {
        if !self.is_balanced() {
            return Err(Error::InvalidConfiguration(format!(
                "unbalanced configuration {:?}",
                self.points.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            )));
        }
        let mut p: Vec<usize> = self.points.iter().filter(|x| x.is_positive()).map(|x| x.frobenius_index()).collect();
        let mut qv: Vec<usize> = self.points.iter().filter(|x| !x.is_positive()).map(|x| x.frobenius_index()).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        qv.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_frobenius(&FrobeniusCoords { p, q: qv })
    }
}

impl Partition {
    pub fn lattice_config(&self) -> LatticeConfiguration {
        let f = self.frobenius();
        let pts = f
            .p
            .iter()
            .map(|&p| HalfInt::from_floor(p as i64))
            .chain(f.q.iter().map(|&q| HalfInt::from_floor(-(q as i64) - 1)));
        LatticeConfiguration::new(pts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Partition::from_parts(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;
    /// Accepts JSON-style `[4,3,1]`, bare `4,3,1`, or `()` / `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
        if inner.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(&parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Partition {
        Partition::from_parts(v).unwrap()
    }

    #[test]
    fn construction() {
        assert!(p(&[]).is_empty());
        assert_eq!(p(&[4, 3, 1, 0, 0]).parts(), &[4, 3, 1]);
        assert!(Partition::from_parts(&[1, 2]).is_err());
        assert!(Partition::from_parts(&[2, -1]).is_err());
        assert_eq!("[4,3,1]".parse::<Partition>().unwrap(), p(&[4, 3, 1]));
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
    }

    #[test]
    fn frobenius_examples() {
        let f = p(&[]).frobenius();
        assert_eq!(f.d(), 0);
        let f = p(&[4, 3, 1]).frobenius();
        assert_eq!((f.p.clone(), f.q.clone()), (vec![3, 1], vec![2, 0]));
        assert_eq!(Partition::from_frobenius(&f).unwrap(), p(&[4, 3, 1]));
        let f = p(&[1]).frobenius();
        assert_eq!((f.p, f.q), (vec![0], vec![0]));
        assert!(Partition::from_frobenius(&FrobeniusCoords { p: vec![1, 1], q: vec![1, 0] }).is_err());
        assert_eq!(Partition::hook(2, 3), p(&[3, 1, 1, 1]));
    }

    #[test]
    fn dim_skew_examples() {
        assert_eq!(dim_skew(&p(&[]), &p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(dim_skew(&p(&[1]), &p(&[2])), BigUint::from(1u32));
        assert_eq!(dim_skew(&p(&[2]), &p(&[1, 1])), BigUint::zero());
        assert_eq!(dim_skew(&p(&[2, 1]), &p(&[2, 1])), BigUint::one());
        assert_eq!(p(&[3, 2]).dim(), BigUint::from(5u32));
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        let four = enumerate_partitions(4);
        let expect: Vec<Partition> = [vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
            .iter()
            .map(|v| p(v))
            .collect();
        assert_eq!(four, expect);
        assert_eq!(enumerate_partitions(10).len(), 42);
    }

    #[test]
    fn successors_with_contents() {
        let s = p(&[]).successors();
        assert_eq!(s, vec![(p(&[1]), 0)]);
        let s = p(&[1]).successors();
        assert_eq!(s, vec![(p(&[2]), 1), (p(&[1, 1]), -1)]);
        let mut c: Vec<i64> = p(&[2, 1]).successors().into_iter().map(|(_, c)| c).collect();
        c.sort();
        assert_eq!(c, vec![-2, 0, 2]);
    }

    #[test]
    fn lattice_examples() {
        assert!(p(&[]).lattice_config().points().is_empty());
        let show = |l: &Partition| l.lattice_config().points().iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(show(&p(&[1])), vec!["-1/2", "1/2"]);
        assert_eq!(show(&p(&[4, 3, 1])), vec!["-5/2", "-1/2", "3/2", "7/2"]);
        let unbalanced = LatticeConfiguration::new([HalfInt::from_floor(0)]);
        assert!(unbalanced.to_partition().is_err());
        assert_eq!(serde_json::to_string(&p(&[4, 3, 1]).lattice_config()).unwrap(), r#"["-5/2","-1/2","3/2","7/2"]"#);
        assert_eq!(serde_json::to_string(&p(&[4, 3, 1])).unwrap(), "[4,3,1]");
    }
}
