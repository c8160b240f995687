//! Probabilistic models behind the two EDAs: the univariate frequency vector
//! with its sample/select/update cycle, and the bivariate chain model that
//! conditions each bit on its predecessor in a learned ordering.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{EdaError, Result};
use crate::fitness::{BitString, FitnessFunction};

/// Probability granularity of all bit samplers: thresholds are fixed-point
/// fractions of 2^64, so probabilities are honored to within 2^-64.
const SCALE: f64 = 18446744073709551616.0; // 2^64

fn threshold(p: f64) -> u128 {
    debug_assert!((0.0..=1.0).contains(&p));
    ((p * SCALE).round() as u128).min(1u128 << 64)
}

/// Per-position marginal probabilities of a univariate product distribution,
/// together with the clamp margin `1/n` that every update restricts to.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector {
    p: Vec<f64>,
    margin: f64,
}

impl FrequencyVector {
    /// The all-1/2 starting vector for problem size `n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 2, "frequency vectors need n >= 2");
        FrequencyVector {
            p: vec![0.5; n],
            margin: 1.0 / n as f64,
        }
    }

    /// Builds a vector with explicit, possibly unclamped probabilities.
    /// Meant for tests and diagnostics that need degenerate values (such as
    /// an exact 1.0); updates computed by this crate always stay clamped.
    pub fn from_parts(p: Vec<f64>, margin: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(EdaError::invalid("empty frequency vector"));
        }
        if !(0.0 < margin && margin <= 0.5) {
            return Err(EdaError::invalid(format!(
                "margin {margin} outside (0, 1/2]"
            )));
        }
        if let Some(bad) = p.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(EdaError::invalid(format!(
                "probability {bad} outside [0, 1]"
            )));
        }
        Ok(FrequencyVector { p, margin })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize) -> f64 {
        self.p[i]
    }

    /// Precomputes fixed-point thresholds so repeated sampling costs one RNG
    /// word per bit.
    pub fn sampler(&self) -> BitSampler {
        BitSampler {
            thresholds: self.p.iter().map(|&q| threshold(q)).collect(),
        }
    }
}

/// Cached sampler for a product distribution over bit strings.
pub struct BitSampler {
    thresholds: Vec<u128>,
}

impl BitSampler {
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let mut out = BitString::all_zeros(self.thresholds.len());
        self.sample_into(rng, &mut out);
        out
    }

    /// Overwrites `out` with a fresh sample; `out` must have matching length.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut BitString) {
        assert_eq!(out.len(), self.thresholds.len());
        for (i, &t) in self.thresholds.iter().enumerate() {
            out.set(i, (rng.next_u64() as u128) < t);
        }
    }
}

/// Draws each bit `i` independently with probability `p_i`: the product law
/// of the frequency vector.
pub fn sample_from_frequencies<R: Rng + ?Sized>(p: &FrequencyVector, rng: &mut R) -> BitString {
    p.sampler().sample(rng)
}

/// One evaluated search point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub bits: BitString,
    pub fitness: u32,
}

/// A non-empty collection of evaluated individuals of equal length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    members: Vec<Individual>,
}

impl Population {
    /// Wraps already-evaluated members. The caller vouches that each cached
    /// fitness equals re-evaluation; lengths are checked here.
    pub fn from_members(members: Vec<Individual>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| EdaError::invalid("empty population"))?;
        let n = first.bits.len();
        if members.iter().any(|m| m.bits.len() != n) {
            return Err(EdaError::invalid("population members differ in length"));
        }
        Ok(Population { members })
    }

    /// Evaluates `f` on every string and caches the values.
    pub fn evaluated(strings: Vec<BitString>, f: &FitnessFunction) -> Result<Self> {
        let members = strings
            .into_iter()
            .map(|bits| {
                let fitness = f.evaluate(&bits)?;
                Ok(Individual { bits, fitness })
            })
            .collect::<Result<Vec<_>>>()?;
        Population::from_members(members)
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    /// Length of the member bit strings.
    pub fn n(&self) -> usize {
        self.members[0].bits.len()
    }

    pub fn best(&self) -> &Individual {
        self.members
            .iter()
            .max_by_key(|m| m.fitness)
            .expect("population is non-empty")
    }
}

/// Selects the `mu` fittest members, breaking ties at the cut boundary
/// uniformly at random: members strictly above the cut fitness are always
/// included, and the remaining slots are filled by a uniform random subset of
/// the members sitting exactly at the cut.
pub fn select_best<R: Rng + ?Sized>(
    pop: &Population,
    mu: usize,
    rng: &mut R,
) -> Result<Population> {
    if mu == 0 {
        return Err(EdaError::invalid("selection size must be positive"));
    }
    if mu > pop.len() {
        return Err(EdaError::invalid(format!(
            "cannot select {mu} from a population of {}",
            pop.len()
        )));
    }
    let members = pop.members();
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.select_nth_unstable_by_key(mu - 1, |&i| std::cmp::Reverse(members[i].fitness));
    let cut = members[order[mu - 1]].fitness;

    let mut chosen: Vec<usize> = (0..members.len())
        .filter(|&i| members[i].fitness > cut)
        .collect();
    let mut boundary: Vec<usize> = (0..members.len())
        .filter(|&i| members[i].fitness == cut)
        .collect();
    let free = mu - chosen.len();
    if free < boundary.len() {
        // Only here is inclusion ambiguous; draw a uniform subset.
        let (picked, _) = boundary.partial_shuffle(rng, free);
        chosen.extend_from_slice(picked);
    } else {
        chosen.append(&mut boundary);
    }
    Population::from_members(chosen.into_iter().map(|i| members[i].clone()).collect())
}

/// The frequency update: set each `p_i` to the fraction of ones at position
/// `i` among the selected individuals, then clamp into `[1/n, 1 − 1/n]`.
///
/// `n` fixes the clamp margin; in optimizer runs it equals the bit-string
/// length.
pub fn umda_update(selected: &Population, n: usize) -> Result<FrequencyVector> {
    if n < 2 {
        return Err(EdaError::invalid("clamp margin needs n >= 2"));
    }
    let margin = 1.0 / n as f64;
    let mu = selected.len() as f64;
    let dims = selected.n();
    let mut p = vec![0.0f64; dims];
    for member in selected.members() {
        for (i, &bit) in member.bits.iter().enumerate() {
            if bit {
                p[i] += 1.0;
            }
        }
    }
    for q in &mut p {
        *q = (*q / mu).clamp(margin, 1.0 - margin);
    }
    Ok(FrequencyVector { p, margin })
}

/// Shannon entropy of a coin with bias `q`, in bits, with `0·log 0 := 0`.
pub fn binary_entropy(q: f64) -> f64 {
    debug_assert!((-1e-9..=1.0 + 1e-9).contains(&q), "entropy of q = {q}");
    let q = q.clamp(0.0, 1.0);
    let mut h = 0.0;
    if q > 0.0 {
        h -= q * q.log2();
    }
    if q < 1.0 {
        h -= (1.0 - q) * (1.0 - q).log2();
    }
    h
}

/// A bivariate chain distribution: positions are visited in the stored order,
/// the first is drawn from `root_p`, and each later position is drawn from a
/// probability conditioned on the sampled value of its predecessor.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainModel {
    order: Vec<usize>, // 0-based positions, a permutation of 0..n
    root_p: f64,
    cond_p: Vec<(f64, f64)>, // (P[1 | predecessor 0], P[1 | predecessor 1])
}

impl ChainModel {
    /// Identity order with every probability 1/2; the starting model.
    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1, "chain models need at least one position");
        ChainModel {
            order: (0..n).collect(),
            root_p: 0.5,
            cond_p: vec![(0.5, 0.5); n - 1],
        }
    }

    /// Builds a model from explicit parts, checking that `order` is a
    /// permutation of `0..n` and all probabilities lie in `[0, 1]`.
    pub fn from_parts(order: Vec<usize>, root_p: f64, cond_p: Vec<(f64, f64)>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(EdaError::invalid("empty chain model"));
        }
        let mut seen = vec![false; n];
        for &pos in &order {
            if pos >= n || seen[pos] {
                return Err(EdaError::invalid("order is not a permutation"));
            }
            seen[pos] = true;
        }
        if cond_p.len() != n - 1 {
            return Err(EdaError::invalid(format!(
                "expected {} conditional pairs, got {}",
                n - 1,
                cond_p.len()
            )));
        }
        let in_range = |q: f64| (0.0..=1.0).contains(&q);
        if !in_range(root_p) || cond_p.iter().any(|&(a, b)| !in_range(a) || !in_range(b)) {
            return Err(EdaError::invalid("chain probability outside [0, 1]"));
        }
        Ok(ChainModel {
            order,
            root_p,
            cond_p,
        })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Visit order as 0-based positions.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn root_p(&self) -> f64 {
        self.root_p
    }

    /// `(P[1 | predecessor 0], P[1 | predecessor 1])` for links `2..=n`.
    pub fn cond_p(&self) -> &[(f64, f64)] {
        &self.cond_p
    }

    /// Marginal 1-probability of every position (indexed by position, not by
    /// chain order), obtained by propagating along the chain.
    pub fn marginals(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n()];
        let mut prev = self.root_p;
        m[self.order[0]] = prev;
        for (j, &(given0, given1)) in self.cond_p.iter().enumerate() {
            let cur = prev * given1 + (1.0 - prev) * given0;
            m[self.order[j + 1]] = cur;
            prev = cur;
        }
        m
    }

    pub fn sampler(&self) -> ChainSampler {
        ChainSampler {
            order: self.order.clone(),
            root: threshold(self.root_p),
            cond: self
                .cond_p
                .iter()
                .map(|&(a, b)| (threshold(a), threshold(b)))
                .collect(),
        }
    }
}

/// Cached sampler for a chain model.
pub struct ChainSampler {
    order: Vec<usize>,
    root: u128,
    cond: Vec<(u128, u128)>,
}

impl ChainSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let mut out = BitString::all_zeros(self.order.len());
        self.sample_into(rng, &mut out);
        out
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut BitString) {
        assert_eq!(out.len(), self.order.len());
        let mut prev = (rng.next_u64() as u128) < self.root;
        out.set(self.order[0], prev);
        for (j, &(t0, t1)) in self.cond.iter().enumerate() {
            let t = if prev { t1 } else { t0 };
            prev = (rng.next_u64() as u128) < t;
            out.set(self.order[j + 1], prev);
        }
    }
}

/// Draws one string from the chain: the root bit from `root_p`, every later
/// bit from the conditional matching its predecessor's sampled value.
pub fn mimic_sample<R: Rng + ?Sized>(model: &ChainModel, rng: &mut R) -> BitString {
    model.sampler().sample(rng)
}

/// Fits a chain model to the selected individuals.
///
/// The root is the position of minimal empirical entropy; each subsequent
/// position minimizes the empirical conditional entropy given the previously
/// chosen position. Entropy ties are broken uniformly at random via `rng`.
/// Stored probabilities are the (conditional) 1-frequencies clamped into
/// `[1/n, 1 − 1/n]`; a conditioning group that was never observed gets the
/// maximum-uncertainty default 1/2.
pub fn mimic_fit<R: Rng + ?Sized>(
    selected: &Population,
    n: usize,
    rng: &mut R,
) -> Result<ChainModel> {
    if n < 2 {
        return Err(EdaError::invalid("clamp margin needs n >= 2"));
    }
    let margin = 1.0 / n as f64;
    let clamp = |q: f64| q.clamp(margin, 1.0 - margin);
    let mu = selected.len();
    let dims = selected.n();

    // Column-major bit packing: pair counts between two positions reduce to
    // AND + popcount over the packed words.
    let words = mu.div_ceil(64);
    let mut cols = vec![0u64; dims * words];
    for (row, member) in selected.members().iter().enumerate() {
        let (word, bit) = (row / 64, row % 64);
        for (i, &b) in member.bits.iter().enumerate() {
            if b {
                cols[i * words + word] |= 1 << bit;
            }
        }
    }
    let col = |i: usize| &cols[i * words..(i + 1) * words];
    let ones: Vec<usize> = (0..dims)
        .map(|i| col(i).iter().map(|w| w.count_ones() as usize).sum())
        .collect();

    let argmin_tied = |scores: &[(usize, f64)], rng: &mut R| -> usize {
        let mut best = f64::INFINITY;
        let mut ties: Vec<usize> = Vec::new();
        for &(pos, h) in scores {
            if h < best {
                best = h;
                ties.clear();
                ties.push(pos);
            } else if h == best {
                ties.push(pos);
            }
        }
        if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.random_range(0..ties.len())]
        }
    };

    let marginal_entropies: Vec<(usize, f64)> = (0..dims)
        .map(|i| (i, binary_entropy(ones[i] as f64 / mu as f64)))
        .collect();
    let root = argmin_tied(&marginal_entropies, rng);

    let mut order = vec![root];
    let mut cond_p = Vec::with_capacity(dims - 1);
    let mut remaining: Vec<usize> = (0..dims).filter(|&i| i != root).collect();
    let mut prev = root;
    while !remaining.is_empty() {
        let pred1 = ones[prev];
        let pred0 = mu - pred1;
        let pair_counts = |r: usize| -> (usize, usize) {
            let n11: usize = col(prev)
                .iter()
                .zip(col(r))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum();
            (n11, ones[r] - n11) // ones of r alongside predecessor 1 resp. 0
        };
        let scores: Vec<(usize, f64)> = remaining
            .iter()
            .map(|&r| {
                let (n11, n01) = pair_counts(r);
                let mut h = 0.0;
                if pred1 > 0 {
                    h += pred1 as f64 / mu as f64 * binary_entropy(n11 as f64 / pred1 as f64);
                }
                if pred0 > 0 {
                    h += pred0 as f64 / mu as f64 * binary_entropy(n01 as f64 / pred0 as f64);
                }
                (r, h)
            })
            .collect();
        let next = argmin_tied(&scores, rng);
        let (n11, n01) = pair_counts(next);
        let given1 = if pred1 == 0 {
            0.5
        } else {
            clamp(n11 as f64 / pred1 as f64)
        };
        let given0 = if pred0 == 0 {
            0.5
        } else {
            clamp(n01 as f64 / pred0 as f64)
        };
        cond_p.push((given0, given1));
        order.push(next);
        remaining.retain(|&r| r != next);
        prev = next;
    }

    Ok(ChainModel {
        order,
        root_p: clamp(ones[root] as f64 / mu as f64),
        cond_p,
    })
}
