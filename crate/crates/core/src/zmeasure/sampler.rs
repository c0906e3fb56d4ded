//! Exact sampling from `M_{z,z′,ξ}`: draw `n` from the negative binomial
//! law, then grow a diagram box by box with the harmonic transition
//! probabilities.
//!
//! Sample `i` under seed `s` always uses ChaCha stream `i` of key `s`, so the
//! output does not depend on how samples are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{plancherel_transition, MixedZParams, ZParams};
use crate::partition::Partition;

/// Random generator for sample `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Growth chain state: a diagram with cheap access to its corners.
#[derive(Clone, Debug)]
pub struct GrowthChain {
    parts: Vec<usize>,
    n: usize,
    p: f64,
    s: f64,
}

impl GrowthChain {
    pub fn new(zp: &ZParams) -> Self {
        let (p, s) = zp.real_pair();
        Self { parts: Vec::new(), n: 0, p, s }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn corners(&self) -> (Vec<(usize, i64)>, Vec<i64>) {
        let mut addable = Vec::new();
        let mut removable = Vec::new();
        let len = self.parts.len();
        for i in 0..len {
            let r = self.parts[i];
            if i == 0 || self.parts[i - 1] > r {
                addable.push((i, r as i64 - i as i64));
            }
            let below = if i + 1 < len { self.parts[i + 1] } else { 0 };
            if r > below {
                removable.push(r as i64 - 1 - i as i64);
            }
        }
        addable.push((len, -(len as i64)));
        (addable, removable)
    }

    /// Adds one box, chosen with probability `(z+c)(z′+c)/(zz′+n) · dim λ/((n+1) dim μ)`.
    pub fn step<R: Rng>(&mut self, rng: &mut R) {
        let (addable, removable) = self.corners();
        let contents: Vec<i64> = addable.iter().map(|&(_, c)| c).collect();
        let kerov = plancherel_transition(&contents, &removable);
        let weights: Vec<f64> = contents
            .iter()
            .zip(&kerov)
            .map(|(&c, &k)| {
                let c = c as f64;
                ((self.p + c * self.s + c * c) * k).max(0.0)
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = weights.len() - 1;
        for (k, w) in weights.iter().enumerate() {
            if u < *w {
                pick = k;
                break;
            }
            u -= w;
        }
        let row = addable[pick].0;
        if row == self.parts.len() {
            self.parts.push(1);
        } else {
            self.parts[row] += 1;
        }
        self.n += 1;
    }

    pub fn partition(&self) -> Partition {
        Partition::from_vec_unchecked(self.parts.clone())
    }
}

/// Draws `|λ|` from `P(n) = (1−ξ)^{zz′} (zz′)_n ξ^n / n!` by inversion.
pub fn sample_size<R: Rng>(mp: &MixedZParams, rng: &mut R) -> usize {
    let (p, _) = mp.base.real_pair();
    let xi = mp.xi_f64();
    let u: f64 = rng.random();
    let mut pmf = mp.vacuum();
    let mut cdf = pmf;
    let mut n = 0usize;
    while u > cdf {
        pmf *= (p + n as f64) * xi / (n as f64 + 1.0);
        n += 1;
        cdf += pmf;
        if pmf < 1e-300 && n as f64 > p * xi / (1.0 - xi) {
            break;
        }
    }
    n
}

/// A diagram distributed as `M^{(n)}_{z,z′}`.
pub fn sample_level<R: Rng>(zp: &ZParams, n: usize, rng: &mut R) -> Partition {
    let mut chain = GrowthChain::new(zp);
    for _ in 0..n {
        chain.step(rng);
    }
    chain.partition()
}

/// Sample number `index` from `M_{z,z′,ξ}` under `seed`.
pub fn sample(mp: &MixedZParams, seed: u64, index: u64) -> Partition {
    let mut rng = stream(seed, index);
    let n = sample_size(mp, &mut rng);
    sample_level(&mp.base, n, &mut rng)
}

/// Samples `0..count` in index order (parallel, deterministic).
pub fn sample_many(mp: &MixedZParams, seed: u64, count: usize) -> Vec<Partition> {
    (0..count as u64).into_par_iter().map(|i| sample(mp, seed, i)).collect()
}
