//! The DeceptiveLeadingBlocks fitness family and auxiliary benchmark functions.
//!
//! A bit string is read as consecutive blocks of `k` bits (`k = 2` unless
//! configured otherwise). A block scores `k` when every bit is one, and
//! `zeros − 1` otherwise, so a block one flip away from perfect scores worst:
//! local information points *away* from the optimum. Total fitness rewards
//! the longest prefix of perfect blocks plus the score of the first imperfect
//! block — a deceptive, epistatic cousin of LeadingOnes whose unique maximum
//! is the all-ones string.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rand::Rng;

use crate::error::{EdaError, Result};

/// Fixed-length bit string, the genotype for every optimizer in this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// Wraps a vector of bits. Length must be positive.
    pub fn from_bools(bits: Vec<bool>) -> Self {
        assert!(!bits.is_empty(), "bit strings have positive length");
        BitString { bits }
    }

    pub fn all_ones(n: usize) -> Self {
        Self::from_bools(vec![true; n])
    }

    pub fn all_zeros(n: usize) -> Self {
        Self::from_bools(vec![false; n])
    }

    /// Samples every bit as a fair coin.
    pub fn uniform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_bools((0..n).map(|_| rng.random::<bool>()).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is positive by construction
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.bits
    }

    /// Overwrites `self` with `other` without reallocating (lengths must match).
    pub fn copy_from(&mut self, other: &BitString) {
        self.bits.copy_from_slice(&other.bits);
    }
}

impl Deref for BitString {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = EdaError;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(EdaError::invalid("empty bit string"));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(EdaError::invalid(format!(
                    "bit strings contain only 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitString::from_bools)
    }
}

/// Block score: `k` when all bits are one, otherwise `zeros − 1`.
///
/// For `k = 2` the values are 2 for `11`, 1 for `00` and 0 for `01`/`10` —
/// the block with a single zero is *worst*, which is what makes the landscape
/// deceptive.
pub fn deceptive_block(block: &[bool], k: usize) -> Result<u32> {
    if k < 2 {
        return Err(EdaError::invalid(format!(
            "block size must be >= 2, got {k}"
        )));
    }
    if block.len() != k {
        return Err(EdaError::invalid(format!(
            "block length {} does not match block size {k}",
            block.len()
        )));
    }
    let zeros = block.iter().filter(|&&b| !b).count() as u32;
    if zeros == 0 {
        Ok(k as u32)
    } else {
        Ok(zeros - 1)
    }
}

/// Number of leading blocks that score `k`, i.e. the all-ones prefix measured
/// in whole blocks.
pub fn prefix_count(x: &[bool], k: usize) -> Result<usize> {
    check_block_layout(x, k)?;
    Ok(x.chunks_exact(k)
        .take_while(|block| block.iter().all(|&b| b))
        .count())
}

/// DeceptiveLeadingBlocks fitness: `n` when every block is perfect, otherwise
/// the sum of block scores over the perfect prefix and the first imperfect
/// block. Short-circuits at the first imperfect block, so typical cost is
/// proportional to the prefix length rather than `n`.
pub fn dlb(x: &[bool], k: usize) -> Result<u32> {
    check_block_layout(x, k)?;
    let mut score = 0u32;
    for block in x.chunks_exact(k) {
        let zeros = block.iter().filter(|&&b| !b).count() as u32;
        if zeros == 0 {
            score += k as u32;
        } else {
            return Ok(score + zeros - 1);
        }
    }
    Ok(score) // all blocks perfect: score == n
}

/// Count of leading one-bits.
pub fn leading_ones(x: &[bool]) -> u32 {
    x.iter().take_while(|&&b| b).count() as u32
}

fn check_block_layout(x: &[bool], k: usize) -> Result<()> {
    if k < 2 {
        return Err(EdaError::invalid(format!(
            "block size must be >= 2, got {k}"
        )));
    }
    if !x.len().is_multiple_of(k) {
        return Err(EdaError::invalid(format!(
            "block size {k} does not divide bit-string length {}",
            x.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum FitnessKind {
    Dlb { k: usize },
    LeadingOnes,
    Constant { value: u32 },
}

/// A named fitness function over bit strings, optionally with neutral
/// positions that evaluation ignores.
///
/// The function itself is dimension-free: the same descriptor evaluates bit
/// strings of any length for which it is defined (for DLB: block size `k`
/// divides the effective length). Neutral positions are 1-based indices into
/// the evaluated string; evaluation removes them and scores the remaining
/// subsequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitnessFunction {
    kind: FitnessKind,
    neutral: Vec<usize>, // sorted, deduplicated, 1-based
}

impl FitnessFunction {
    /// DeceptiveLeadingBlocks with the canonical block size 2.
    pub fn dlb() -> Self {
        FitnessFunction {
            kind: FitnessKind::Dlb { k: 2 },
            neutral: Vec::new(),
        }
    }

    /// DeceptiveLeadingBlocks with block size `k >= 2`.
    pub fn dlb_with_block_size(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(EdaError::invalid(format!(
                "block size must be >= 2, got {k}"
            )));
        }
        Ok(FitnessFunction {
            kind: FitnessKind::Dlb { k },
            neutral: Vec::new(),
        })
    }

    pub fn leading_ones() -> Self {
        FitnessFunction {
            kind: FitnessKind::LeadingOnes,
            neutral: Vec::new(),
        }
    }

    /// A constant function with no optimum; runs on it exhaust their budget.
    pub fn constant(value: u32) -> Self {
        FitnessFunction {
            kind: FitnessKind::Constant { value },
            neutral: Vec::new(),
        }
    }

    /// Canonical string id, invertible through [`FitnessFunction::from_str`].
    pub fn id(&self) -> String {
        self.to_string()
    }

    /// Block size used by DLB evaluation, if this is a DLB function.
    pub fn block_size(&self) -> Option<usize> {
        match self.kind {
            FitnessKind::Dlb { k } => Some(k),
            _ => None,
        }
    }

    pub fn neutral_positions(&self) -> &[usize] {
        &self.neutral
    }

    /// The optimum fitness for strings of length `n`, or `None` if the
    /// function has no reachable optimum (constant functions, or functions
    /// whose every position is neutral).
    pub fn optimum(&self, n: usize) -> Result<Option<u32>> {
        self.check_neutral_range(n)?;
        let m = n - self.neutral.len();
        match self.kind {
            FitnessKind::Constant { .. } => Ok(None),
            _ if m == 0 => Ok(None),
            FitnessKind::Dlb { k } => {
                if !m.is_multiple_of(k) {
                    return Err(EdaError::invalid(format!(
                        "block size {k} does not divide effective length {m}"
                    )));
                }
                Ok(Some(m as u32))
            }
            FitnessKind::LeadingOnes => Ok(Some(m as u32)),
        }
    }

    /// Evaluates the function on `x`. Deterministic and pure.
    pub fn evaluate(&self, x: &BitString) -> Result<u32> {
        if self.neutral.is_empty() {
            return self.eval_slice(x);
        }
        self.check_neutral_range(x.len())?;
        let m = x.len() - self.neutral.len();
        if m == 0 {
            // Every position is neutral: the function is constant.
            return match self.kind {
                FitnessKind::Constant { value } => Ok(value),
                _ => Ok(0),
            };
        }
        // Sorted positions occupying exactly {m+1, ..., n} form a suffix and
        // need no copy; that is the common fixture (one trailing neutral bit).
        if self.neutral[0] == m + 1 {
            return self.eval_slice(&x[..m]);
        }
        let mut reduced = Vec::with_capacity(m);
        let mut next = self.neutral.iter().copied().peekable();
        for (i, &b) in x.iter().enumerate() {
            if next.peek() == Some(&(i + 1)) {
                next.next();
            } else {
                reduced.push(b);
            }
        }
        self.eval_slice(&reduced)
    }

    fn eval_slice(&self, bits: &[bool]) -> Result<u32> {
        match self.kind {
            FitnessKind::Dlb { k } => dlb(bits, k),
            FitnessKind::LeadingOnes => Ok(leading_ones(bits)),
            FitnessKind::Constant { value } => Ok(value),
        }
    }

    fn check_neutral_range(&self, n: usize) -> Result<()> {
        match self.neutral.last() {
            Some(&max) if max > n => Err(EdaError::invalid(format!(
                "neutral position {max} is out of range for length {n}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Wraps `f` so that the listed 1-based positions are ignored by evaluation:
/// the returned function evaluates `f` on the subsequence that excludes them,
/// so flipping a neutral bit never changes the value.
///
/// Wrapping an already-wrapped function unions the position sets; all
/// positions refer to the full-length input.
pub fn with_neutral_bits(f: FitnessFunction, positions: &[usize]) -> Result<FitnessFunction> {
    let mut neutral = f.neutral;
    for &pos in positions {
        if pos == 0 {
            return Err(EdaError::invalid(
                "neutral positions are 1-based; 0 is out of range",
            ));
        }
        neutral.push(pos);
    }
    neutral.sort_unstable();
    neutral.dedup();
    Ok(FitnessFunction {
        kind: f.kind,
        neutral,
    })
}

impl fmt::Display for FitnessFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            FitnessKind::Dlb { k: 2 } => "dlb".to_string(),
            FitnessKind::Dlb { k } => format!("dlb_k:{k}"),
            FitnessKind::LeadingOnes => "leading_ones".to_string(),
            FitnessKind::Constant { value } => format!("const:{value}"),
        };
        if self.neutral.is_empty() {
            f.write_str(&base)
        } else {
            let positions: Vec<String> = self.neutral.iter().map(|p| p.to_string()).collect();
            write!(f, "neutral:{base}:{}", positions.join(","))
        }
    }
}

impl FromStr for FitnessFunction {
    type Err = EdaError;

    /// Parses the config grammar: `dlb`, `dlb_k:<k>`, `leading_ones`, and the
    /// wrapper `neutral:<id>:<comma-separated 1-based positions>`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("neutral:") {
            // Positions come after the last colon so the inner id may itself
            // carry a colon (e.g. neutral:dlb_k:4:7,8).
            let (inner, positions) = rest
                .rsplit_once(':')
                .ok_or_else(|| EdaError::invalid(format!("malformed neutral wrapper {s:?}")))?;
            let base: FitnessFunction = inner.parse()?;
            let parsed: Vec<usize> = positions
                .split(',')
                .map(|p| {
                    p.trim().parse::<usize>().map_err(|_| {
                        EdaError::invalid(format!("bad neutral position {p:?} in {s:?}"))
                    })
                })
                .collect::<Result<_>>()?;
            if parsed.is_empty() {
                return Err(EdaError::invalid(format!("no neutral positions in {s:?}")));
            }
            return with_neutral_bits(base, &parsed);
        }
        if let Some(k) = s.strip_prefix("dlb_k:") {
            let k: usize = k
                .parse()
                .map_err(|_| EdaError::invalid(format!("bad block size in {s:?}")))?;
            return FitnessFunction::dlb_with_block_size(k);
        }
        if let Some(v) = s.strip_prefix("const:") {
            let value: u32 = v
                .parse()
                .map_err(|_| EdaError::invalid(format!("bad constant value in {s:?}")))?;
            return Ok(FitnessFunction::constant(value));
        }
        match s {
            "dlb" => Ok(FitnessFunction::dlb()),
            "leading_ones" => Ok(FitnessFunction::leading_ones()),
            other => Err(EdaError::invalid(format!("unknown fitness id {other:?}"))),
        }
    }
}

pub mod reference {
    //! Naive full-scan transcriptions of the block formulas, kept as the
    //! oracle for the short-circuiting implementations above. Deliberately
    //! slow and literal; use only in tests.

    /// Block score written exactly as defined: `k` if `|block|_1 = k`, else
    /// `|block|_0 − 1`.
    pub fn deceptive_block_full(block: &[bool]) -> u32 {
        let ones = block.iter().filter(|&&b| b).count();
        let zeros = block.len() - ones;
        if ones == block.len() {
            block.len() as u32
        } else {
            (zeros - 1) as u32
        }
    }

    /// The Iverson-sum form of the prefix count: sums over i the product of
    /// indicators that blocks 1..=i are all perfect.
    pub fn prefix_full(x: &[bool], k: usize) -> usize {
        assert!(k >= 2 && x.len().is_multiple_of(k));
        let blocks = x.len() / k;
        (1..=blocks)
            .filter(|&i| (1..=i).all(|j| deceptive_block_full(&x[(j - 1) * k..j * k]) == k as u32))
            .count()
    }

    /// Case-split form of the fitness: `n` when the prefix covers everything,
    /// otherwise the sum of block scores over blocks 1..=prefix+1.
    pub fn dlb_full(x: &[bool], k: usize) -> u32 {
        assert!(k >= 2 && x.len().is_multiple_of(k));
        let prefix = prefix_full(x, k);
        if prefix == x.len() / k {
            x.len() as u32
        } else {
            (1..=prefix + 1)
                .map(|i| deceptive_block_full(&x[(i - 1) * k..i * k]))
                .sum()
        }
    }
}
