//! Integer partitions and irreducible characters of symmetric groups.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};

/// A partition `λ₁ ≥ λ₂ ≥ … > 0`; the empty partition is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntPartition {
    parts: Vec<usize>,
}

impl IntPartition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntPartition { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The partition with `counts[t − 1]` parts equal to `t`.
    pub fn from_cycle_counts(counts: &[usize]) -> Self {
        let parts = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
            .collect();
        Self::new(parts)
    }

    /// Comma-separated parts, e.g. `2,1`; empty text is the empty partition.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        if text.trim().is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        let mut column = 1;
        for piece in text.split(',') {
            match piece.trim().parse::<usize>() {
                Ok(p) if p > 0 => parts.push(p),
                _ => return Err(Error::parse(column, format!("invalid part '{}'", piece.trim()))),
            }
            column += piece.len() + 1;
        }
        Ok(Self::new(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `counts[t − 1]` = number of parts equal to `t`.
    pub fn cycle_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.parts.first().copied().unwrap_or(0)];
        for &p in &self.parts {
            counts[p - 1] += 1;
        }
        counts
    }

    /// `z_λ = ∏_r r^{α_r} α_r!`, the centraliser order of a permutation of
    /// cycle type `λ`.
    pub fn z(&self) -> BigInt {
        self.cycle_counts()
            .iter()
            .enumerate()
            .map(|(i, &a)| num_traits::pow(BigInt::from(i + 1), a) * factorial(a))
            .product()
    }

    /// Parts of both partitions together.
    pub fn union(&self, other: &IntPartition) -> IntPartition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Self::new(parts)
    }

    /// `λ` with a first row of length `n − |λ|` added; `None` when that row
    /// would be shorter than `λ₁`.
    pub fn padded(&self, n: usize) -> Option<IntPartition> {
        let first = n.checked_sub(self.size())?;
        if first < self.parts.first().copied().unwrap_or(0) {
            return None;
        }
        let mut parts = vec![first];
        parts.extend_from_slice(&self.parts);
        Some(Self::new(parts))
    }
}

impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `χ^λ(μ)`, the irreducible character of `S_n` indexed by `λ` on a
/// permutation of cycle type `μ`, by the Murnaghan–Nakayama rule: remove a
/// rim hook of length `μ₁` in every possible way, with sign `(−1)^{height}`.
pub fn mn_character(lambda: &IntPartition, mu: &IntPartition) -> Result<BigInt> {
    if lambda.size() != mu.size() {
        return Err(Error::invalid(format!(
            "character of a partition of {} evaluated on a cycle type of {}",
            lambda.size(),
            mu.size()
        )));
    }
    let mut memo = HashMap::new();
    Ok(mn_beta(&beta_set(lambda), mu.parts(), &mut memo))
}

/// First-column hook lengths `λ_i + ℓ − i`, decreasing.
fn beta_set(lambda: &IntPartition) -> Vec<usize> {
    let l = lambda.len();
    lambda.parts.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect()
}

/// Removing a rim hook of length `k` moves one bead of the beta set from `b`
/// to the free position `b − k`; the height is the number of beads jumped.
fn mn_beta(beta: &[usize], mu: &[usize], memo: &mut HashMap<(Vec<usize>, usize), BigInt>) -> BigInt {
    let Some((&k, rest)) = mu.split_first() else {
        return BigInt::from(1);
    };
    let key = (beta.to_vec(), mu.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = BigInt::zero();
    for (i, &b) in beta.iter().enumerate() {
        let Some(target) = b.checked_sub(k) else { continue };
        if beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&c| target < c && c < b).count();
        let mut next = beta.to_vec();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let value = mn_beta(&normalize(next), rest, memo);
        if jumped % 2 == 0 {
            total += value;
        } else {
            total -= value;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// Drops beads for empty rows at the bottom (a bead at 0 with nothing below
/// it), shifting the rest down so equal partitions share one beta set.
fn normalize(mut beta: Vec<usize>) -> Vec<usize> {
    while beta.last() == Some(&0) {
        beta.pop();
        for b in beta.iter_mut() {
            *b -= 1;
        }
    }
    beta
}
