//! Ground truth for the exact engine: brute-force averages over all tuples
//! of permutations, Monte-Carlo estimates, and lift counts in random covers.
//!
//! Words act on points from the left letter first: `w = l₁l₂⋯l_n` sends `x`
//! to `l_n(⋯l₂(l₁(x)))`. Every statistic computed here depends only on the
//! conjugacy class of `w(σ)`, so the convention is immaterial.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::characters::{Basis, ClassFunction};
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::morphisms::GraphMorphism;
use crate::words::Word;

/// A permutation of `0..N`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    image: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            image: (0..n as u32).collect(),
        }
    }

    /// Checks that `image` is a bijection of `0..image.len()`.
    pub fn from_images(image: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::invalid("the image array is not a permutation")),
            }
        }
        Ok(Perm { image })
    }

    /// A uniform permutation by the Fisher–Yates shuffle.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut p = Self::identity(n);
        p.image.shuffle(rng);
        p
    }

    /// The `n`-cycle `0 → 1 → ⋯ → n−1 → 0`.
    pub fn long_cycle(n: usize) -> Self {
        Perm {
            image: (0..n as u32).map(|i| (i + 1) % n as u32).collect(),
        }
    }

    /// Every permutation of `0..n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut current: Vec<u32> = (0..n as u32).collect();
        let mut out = vec![Perm { image: current.clone() }];
        while next_permutation(&mut current) {
            out.push(Perm { image: current.clone() });
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u32;
        }
        Perm { image }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            image: self.image.iter().map(|&y| other.image[y as usize]).collect(),
        }
    }

    /// `counts[t − 1]` = number of `t`-cycles.
    pub fn cycle_counts(&self) -> Vec<usize> {
        let n = self.image.len();
        let mut counts = vec![0; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x] as usize;
                len += 1;
            }
            counts[len - 1] += 1;
        }
        while counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|&(x, &y)| x == y as usize).count()
    }

    /// `ξ_k(σ)`, the number of fixed points of `σ^k`.
    pub fn xi(&self, k: usize) -> usize {
        self.cycle_counts()
            .iter()
            .enumerate()
            .filter(|(i, _)| k % (i + 1) == 0)
            .map(|(i, &c)| (i + 1) * c)
            .sum()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.image.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", images.join(" "))
    }
}

fn next_permutation(a: &mut [u32]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a.iter().rposition(|&x| x > a[i]).expect("a larger element exists");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// `w(σ₁, …, σ_r)`.
pub fn evaluate_word(w: &Word, perms: &[Perm]) -> Result<Perm> {
    if perms.len() != w.rank() {
        return Err(Error::invalid(format!("{} permutations for a word of rank {}", perms.len(), w.rank())));
    }
    let n = perms.first().map_or(0, Perm::degree);
    if perms.iter().any(|p| p.degree() != n) {
        return Err(Error::invalid("permutations of different degrees"));
    }
    let inverses: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
    Ok(w.evaluate(Perm::identity(n), perms, &inverses, Perm::then))
}

/// `f(σ)` through the cycle type of `σ`.
pub fn eval_class_function(f: &ClassFunction, sigma: &Perm) -> BigRational {
    f.evaluate(&sigma.cycle_counts())
}

/// An oracle value: exact, or a Monte-Carlo mean with its standard error.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleValue {
    Exact(BigRational),
    Estimate { mean: f64, std_error: f64 },
}

impl OracleValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            OracleValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            OracleValue::Estimate { mean, .. } => *mean,
        }
    }

    pub fn std_error(&self) -> f64 {
        match self {
            OracleValue::Exact(_) => 0.0,
            OracleValue::Estimate { std_error, .. } => *std_error,
        }
    }
}

impl fmt::Display for OracleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleValue::Exact(q) => write!(f, "{q}"),
            OracleValue::Estimate { mean, std_error } => write!(f, "{mean} ± {std_error}"),
        }
    }
}

/// An oracle value with the size of the experiment behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub value: OracleValue,
    pub n: usize,
    /// Tuples enumerated (exact mode) or samples drawn.
    pub samples: u128,
    pub seed: Option<u64>,
}

/// Limit on the number of permutation tuples an exact average may visit.
#[derive(Clone, Debug)]
pub struct ExactBudget {
    pub max_tuples: u128,
}

impl Default for ExactBudget {
    /// `(6!)²`: pairs of permutations of six points.
    fn default() -> Self {
        ExactBudget { max_tuples: 518_400 }
    }
}

/// Exact average of `f(w(σ₁, …, σ_r))` over all of `S_N^r`.
pub fn exact_expectation(w: &Word, f: &ClassFunction, n: usize, budget: &ExactBudget) -> Result<OracleResult> {
    let histogram = cycle_type_histogram(w, n, budget)?;
    let f = f.to_basis(Basis::A);
    let mut total = BigRational::zero();
    let mut tuples = 0u128;
    for (counts, m) in &histogram {
        total += f.evaluate(counts) * BigRational::from_integer(BigInt::from(*m));
        tuples += *m as u128;
    }
    Ok(OracleResult {
        value: OracleValue::Exact(total / BigRational::from_integer(BigInt::from(tuples))),
        n,
        samples: tuples,
        seed: None,
    })
}

/// How many tuples in `S_N^r` give `w(σ)` each cycle type.
pub fn cycle_type_histogram(w: &Word, n: usize, budget: &ExactBudget) -> Result<HashMap<Vec<usize>, u64>> {
    let perms = Perm::all(n);
    let tuples = factorial(n).pow(w.rank() as u32);
    if tuples > BigInt::from(budget.max_tuples) {
        return Err(Error::budget("permutation tuples in exact enumeration", budget.max_tuples));
    }
    let r = w.rank();
    let inverses: Vec<Perm> = perms.iter().map(Perm::inverse).collect();
    let merge = |mut a: HashMap<Vec<usize>, u64>, b: HashMap<Vec<usize>, u64>| {
        for (k, v) in b {
            *a.entry(k).or_insert(0) += v;
        }
        a
    };
    // Parallel over the first permutation; the remaining coordinates run in
    // mixed-radix order.
    let histogram = (0..perms.len())
        .into_par_iter()
        .map(|first| {
            let mut local = HashMap::new();
            let mut index = vec![0usize; r];
            index[0] = first;
            let mut letters: Vec<&Perm> = Vec::with_capacity(w.len());
            let mut point_buf = vec![0u32; n];
            loop {
                letters.clear();
                letters.extend(w.letters().iter().map(|l| {
                    let i = index[l.generator];
                    if l.inverse {
                        &inverses[i]
                    } else {
                        &perms[i]
                    }
                }));
                for (x, slot) in point_buf.iter_mut().enumerate() {
                    *slot = letters.iter().fold(x as u32, |y, p| p.image[y as usize]);
                }
                let value = Perm { image: point_buf.clone() };
                *local.entry(value.cycle_counts()).or_insert(0) += 1;
                if !advance(&mut index[1..], perms.len()) {
                    break;
                }
            }
            local
        })
        .reduce(HashMap::new, merge);
    Ok(histogram)
}

/// Mixed-radix increment; `false` after the last tuple.
fn advance(index: &mut [usize], radix: usize) -> bool {
    for i in index.iter_mut().rev() {
        *i += 1;
        if *i < radix {
            return true;
        }
        *i = 0;
    }
    false
}

/// Exact average over `S_N^r` of `∏_i #{x : g(x) = x for every g in H_i}`
/// for subgroups `H_i` given by generators: the multiset generalisation of
/// fixed-point averages, equal to `Φ` of the morphism from the union of
/// their core graphs to the bouquet.
pub fn exact_common_fixed_points(groups: &[Vec<Word>], n: usize, budget: &ExactBudget) -> Result<OracleResult> {
    let r = groups
        .iter()
        .flatten()
        .map(Word::rank)
        .next()
        .ok_or_else(|| Error::invalid("no generators given"))?;
    let tuples = factorial(n).pow(r as u32);
    if tuples > BigInt::from(budget.max_tuples) {
        return Err(Error::budget("permutation tuples in exact enumeration", budget.max_tuples));
    }
    let perms = Perm::all(n);
    let total: BigInt = (0..perms.len())
        .into_par_iter()
        .map(|first| {
            let mut index = vec![0usize; r];
            index[0] = first;
            let mut sum = BigInt::zero();
            loop {
                let tuple: Vec<Perm> = index.iter().map(|&i| perms[i].clone()).collect();
                let mut product = BigInt::from(1);
                for gens in groups {
                    let values: Vec<Perm> = gens.iter().map(|g| evaluate_word(g, &tuple)).collect::<Result<_>>().expect("ranks agree");
                    let common = (0..n).filter(|&x| values.iter().all(|p| p.apply(x) == x)).count();
                    product *= common;
                }
                sum += product;
                if !advance(&mut index[1..], perms.len()) {
                    break;
                }
            }
            sum
        })
        .sum();
    Ok(OracleResult {
        value: OracleValue::Exact(BigRational::new(total, tuples.clone())),
        n,
        samples: tuples.to_u128().unwrap_or(u128::MAX),
        seed: None,
    })
}

/// The generator behind every random experiment: ChaCha20 seeded with
/// `seed ⊕ trial`, so each trial is reproducible on its own.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ trial)
}

/// Mean and standard error of values listed in trial order.
fn summarize(values: &[f64]) -> OracleValue {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let std_error = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    } else {
        0.0
    };
    OracleValue::Estimate { mean, std_error }
}

/// Monte-Carlo estimate of `E[f(w(σ₁, …, σ_r))]` with uniform `σ_i ∈ S_N`.
pub fn mc_expectation(w: &Word, f: &ClassFunction, n: usize, samples: u64, seed: u64) -> Result<OracleResult> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is needed"));
    }
    let f = f.to_basis(Basis::A);
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let perms: Vec<Perm> = (0..w.rank()).map(|_| Perm::random(n, &mut rng)).collect();
            let sigma = evaluate_word(w, &perms).expect("ranks agree");
            eval_class_function(&f, &sigma).to_f64().unwrap_or(f64::NAN)
        })
        .collect();
    Ok(OracleResult {
        value: summarize(&values),
        n,
        samples: samples as u128,
        seed: Some(seed),
    })
}

/// Number of lifts of `η : Γ → Δ` to the `N`-cover of `Δ` given by one
/// permutation per edge of `Δ`: each component of `Γ` is lifted by choosing
/// the fibre point of one vertex and propagating along a spanning tree.
pub fn count_lifts(eta: &GraphMorphism, edge_perms: &[Perm]) -> Result<u128> {
    let delta = eta.codomain();
    if edge_perms.len() != delta.num_edges() {
        return Err(Error::invalid("one permutation per codomain edge is required"));
    }
    let n = edge_perms.first().map_or(0, Perm::degree);
    let gamma = eta.domain();
    let edge_map = eta.edge_map();
    // Adjacency with the cover permutation (or its inverse) attached.
    let mut adj: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); gamma.num_vertices()];
    for (i, e) in gamma.edges().iter().enumerate() {
        adj[e.tail].push((e.head, edge_map[i], false));
        adj[e.head].push((e.tail, edge_map[i], true));
    }
    let inverses: Vec<Perm> = edge_perms.iter().map(Perm::inverse).collect();
    let mut total: u128 = 1;
    for component in gamma.components() {
        let base = component[0];
        let mut count = 0u128;
        let mut point = vec![usize::MAX; gamma.num_vertices()];
        for start in 0..n {
            for &v in &component {
                point[v] = usize::MAX;
            }
            point[base] = start;
            let mut stack = vec![base];
            let mut ok = true;
            'walk: while let Some(u) = stack.pop() {
                for &(v, e, backwards) in &adj[u] {
                    let target = if backwards { inverses[e].apply(point[u]) } else { edge_perms[e].apply(point[u]) };
                    if point[v] == usize::MAX {
                        point[v] = target;
                        stack.push(v);
                    } else if point[v] != target {
                        ok = false;
                        break 'walk;
                    }
                }
            }
            if ok {
                count += 1;
            }
        }
        total *= count;
    }
    Ok(total)
}

/// Monte-Carlo estimate of `Φ_η(N)`: the average number of lifts of `η` to
/// a uniformly random `N`-cover of its codomain.
pub fn lift_count_expectation(eta: &GraphMorphism, n: usize, samples: u64, seed: u64) -> Result<OracleResult> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is needed"));
    }
    let edges = eta.codomain().num_edges();
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let perms: Vec<Perm> = (0..edges).map(|_| Perm::random(n, &mut rng)).collect();
            count_lifts(eta, &perms).expect("one permutation per edge") as f64
        })
        .collect();
    Ok(OracleResult {
        value: summarize(&values),
        n,
        samples: samples as u128,
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::MultiCoreGraph;
    use crate::morphisms::PartitionSearch;
    use crate::phi::phi;
    use crate::words::CyclicWord;

    fn word(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn exact(r: &OracleResult) -> BigRational {
        match &r.value {
            OracleValue::Exact(q) => q.clone(),
            other => panic!("expected an exact value, got {other}"),
        }
    }

    #[test]
    fn permutations() {
        assert_eq!(Perm::all(4).len(), 24);
        let p = Perm::from_images(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(p.cycle_counts(), vec![0, 2]);
        assert_eq!(p.then(&p), Perm::identity(4));
        assert_eq!(p.xi(2), 4);
        assert!(Perm::from_images(vec![0, 0]).is_err());
        let c = Perm::long_cycle(5);
        assert_eq!(c.then(&c.inverse()), Perm::identity(5));
        assert_eq!(c.cycle_counts(), vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn class_function_values() {
        let xi1 = ClassFunction::xi(1);
        assert_eq!(eval_class_function(&xi1, &Perm::identity(5)), int(5));
        let t = Perm::from_images(vec![1, 0, 2]).unwrap();
        assert_eq!(eval_class_function(&ClassFunction::xi(2), &t), int(3));
        let p = Perm::from_images(vec![1, 0, 3, 2]).unwrap();
        assert_eq!(eval_class_function(&ClassFunction::a(2), &p), int(2));
    }

    #[test]
    fn exact_examples() {
        let xi1 = ClassFunction::xi(1);
        let budget = ExactBudget::default();
        assert_eq!(exact(&exact_expectation(&word("xx"), &xi1, 3, &budget).unwrap()), int(2));
        assert_eq!(exact(&exact_expectation(&word("x"), &xi1, 4, &budget).unwrap()), int(1));
        let r = exact_expectation(&word("xyXY"), &xi1, 4, &budget).unwrap();
        assert_eq!(r.samples, 576);
        // The denominator divides (N!)^r.
        assert!((BigInt::from(576) % exact(&r).denom()).is_zero());
        assert!(exact_expectation(&word("xy"), &xi1, 7, &budget).is_err());
        assert!(exact_expectation(&Word::parse("xyz", 3).unwrap(), &xi1, 4, &budget).is_ok());
        assert!(exact_expectation(&Word::parse("xyz", 3).unwrap(), &xi1, 5, &budget).is_err());
    }

    #[test]
    fn exact_matches_uniform_inner_products() {
        // For w = x the average is ⟨f, 1⟩ over S_N.
        let budget = ExactBudget::default();
        for text in ["xi1^2", "xi2", "xi1*xi2 - xi3", "a2^2"] {
            let f = ClassFunction::parse(text).unwrap();
            for n in 1..=5 {
                let expected = crate::characters::finite_inner(&f, &ClassFunction::one(), n);
                assert_eq!(exact(&exact_expectation(&word("x"), &f, n, &budget).unwrap()), expected);
            }
        }
    }

    #[test]
    fn common_fixed_points_match_phi() {
        // ⟨x, y⟩ is the whole group: common fixed points of two permutations.
        let budget = ExactBudget::default();
        let groups = vec![vec![word("x"), word("y")]];
        let r = exact_common_fixed_points(&groups, 4, &budget).unwrap();
        let eta = GraphMorphism::identity(&MultiCoreGraph::bouquet(2));
        assert_eq!(Some(exact(&r)), phi(&eta, &PartitionSearch::default()).unwrap().eval(4));
        // A single cyclic subgroup reduces to fixed points of the word.
        let groups = vec![vec![word("xxY")], vec![word("xy")]];
        let a = exact_common_fixed_points(&groups, 4, &budget).unwrap();
        let (g, _) = MultiCoreGraph::disjoint_union(&[
            MultiCoreGraph::cycle(&CyclicWord::parse("xxY", 2).unwrap()),
            MultiCoreGraph::cycle(&CyclicWord::parse("xy", 2).unwrap()),
        ]);
        let f = phi(&GraphMorphism::to_bouquet(&g), &PartitionSearch::default()).unwrap();
        assert_eq!(Some(exact(&a)), f.eval(4));
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let xi1 = ClassFunction::xi(1);
        let a = mc_expectation(&word("x"), &xi1, 10, 2000, 7).unwrap();
        let b = mc_expectation(&word("x"), &xi1, 10, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.value.as_f64() - 1.0).abs() < 4.0 * a.value.std_error());
        let c = mc_expectation(&word("x"), &xi1, 10, 2000, 8).unwrap();
        assert_ne!(a, c);
        assert!(mc_expectation(&word("x"), &xi1, 10, 0, 7).is_err());
    }

    #[test]
    fn lift_counts() {
        // The cycle of x² over the loop x: fixed points of σ².
        let c = MultiCoreGraph::cycle(&CyclicWord::parse("xx", 1).unwrap());
        let eta = GraphMorphism::to_bouquet(&c);
        let sigma = Perm::from_images(vec![1, 0, 2, 4, 5, 3]).unwrap();
        assert_eq!(count_lifts(&eta, &[sigma.clone()]).unwrap(), sigma.xi(2) as u128);
        let r = lift_count_expectation(&eta, 10, 4000, 3).unwrap();
        assert!((r.value.as_f64() - 2.0).abs() < 4.0 * r.value.std_error());

        // Over the bouquet the lift count is the fixed-point count of the word.
        let w = word("xyXY");
        let eta = GraphMorphism::to_bouquet(&MultiCoreGraph::cycle(&CyclicWord::from_word(&w).unwrap()));
        let mut rng = trial_rng(11, 0);
        for _ in 0..20 {
            let perms = vec![Perm::random(6, &mut rng), Perm::random(6, &mut rng)];
            let value = evaluate_word(&w, &perms).unwrap();
            assert_eq!(count_lifts(&eta, &perms).unwrap(), value.fixed_points() as u128);
        }
    }
}
