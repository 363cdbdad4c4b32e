//! Random Schreier graphs of `S_N` acting on `s`-tuples of distinct points,
//! their adjacency and non-backtracking spectra, and the trace identity
//! linking non-backtracking walks to word measures.
//!
//! A graph is built from permutations `σ₁, …, σ_r`: its vertices are the
//! `(N)_s` tuples of distinct points and every tuple `x` is joined to
//! `σ_i(x)` for each `i`. The graph is `d = 2r` regular when a loop counts
//! twice; loops contribute 2 to the diagonal of the adjacency matrix and give
//! two directed edges, each the reversal of the other.

use std::collections::HashMap;

use faer::{c64, Mat, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{evaluate_word, trial_rng, Perm};
use crate::words::{cyclically_reduced_count, enumerate_cyclically_reduced};

/// A Schreier graph with its defining permutations.
#[derive(Clone, Debug)]
pub struct SchreierGraph {
    r: usize,
    s: usize,
    n: usize,
    perms: Vec<Perm>,
    tuples: Vec<Vec<u32>>,
    /// `step[i][v]`: the vertex `σ_i(v)`.
    step: Vec<Vec<usize>>,
    /// `back[i][v]`: the vertex `σ_i^{−1}(v)`.
    back: Vec<Vec<usize>>,
}

/// Builds the graph of `perms` acting on `s`-tuples; refuses more than
/// `max_vertices` vertices.
pub fn build_schreier(s: usize, perms: Vec<Perm>, max_vertices: usize) -> Result<SchreierGraph> {
    let r = perms.len();
    if r == 0 {
        return Err(Error::invalid("at least one permutation is needed"));
    }
    let n = perms[0].degree();
    if perms.iter().any(|p| p.degree() != n) {
        return Err(Error::invalid("permutations of different degrees"));
    }
    if s == 0 || s > n {
        return Err(Error::invalid(format!("tuple length {s} outside 1..={n}")));
    }
    let count = (0..s).try_fold(1usize, |acc, i| acc.checked_mul(n - i));
    match count {
        Some(c) if c <= max_vertices => {}
        _ => return Err(Error::budget("Schreier graph vertices", max_vertices)),
    }
    let tuples = distinct_tuples(n, s);
    let key = |t: &[u32]| t.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64);
    let index: HashMap<u64, usize> = tuples.iter().enumerate().map(|(i, t)| (key(t), i)).collect();
    let mut step = Vec::with_capacity(r);
    let mut back = Vec::with_capacity(r);
    for p in &perms {
        let forward: Vec<usize> = tuples
            .iter()
            .map(|t| {
                let image: Vec<u32> = t.iter().map(|&x| p.apply(x as usize) as u32).collect();
                index[&key(&image)]
            })
            .collect();
        let mut backward = vec![0; tuples.len()];
        for (v, &w) in forward.iter().enumerate() {
            backward[w] = v;
        }
        step.push(forward);
        back.push(backward);
    }
    Ok(SchreierGraph {
        r,
        s,
        n,
        perms,
        tuples,
        step,
        back,
    })
}

/// The graph of `r` uniform permutations drawn from ChaCha20 seeded with
/// `seed`.
pub fn build_random_schreier(r: usize, s: usize, n: usize, seed: u64, max_vertices: usize) -> Result<SchreierGraph> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let perms = (0..r).map(|_| Perm::random(n, &mut rng)).collect();
    build_schreier(s, perms, max_vertices)
}

/// Tuples of `s` distinct points of `0..n` in lexicographic order.
fn distinct_tuples(n: usize, s: usize) -> Vec<Vec<u32>> {
    fn go(n: usize, s: usize, prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if prefix.len() == s {
            out.push(prefix.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                prefix.push(x as u32);
                go(n, s, prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, s, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl SchreierGraph {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d = 2r`.
    pub fn degree(&self) -> usize {
        2 * self.r
    }

    pub fn num_vertices(&self) -> usize {
        self.tuples.len()
    }

    pub fn permutations(&self) -> &[Perm] {
        &self.perms
    }

    pub fn tuple(&self, v: usize) -> &[u32] {
        &self.tuples[v]
    }

    /// `σ_i(v)`.
    pub fn neighbor(&self, i: usize, v: usize) -> usize {
        self.step[i][v]
    }

    /// Undirected edges `(v, σ_i(v), i)`, one per generator and vertex.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.r).flat_map(move |i| (0..self.num_vertices()).map(move |v| (v, self.step[i][v], i)))
    }

    /// Adjacency matrix; a loop adds 2 to its diagonal entry.
    pub fn adjacency(&self) -> Mat<f64> {
        let m = self.num_vertices();
        let mut a = Mat::zeros(m, m);
        for (v, w, _) in self.edges() {
            a[(v, w)] += 1.0;
            a[(w, v)] += 1.0;
        }
        a
    }

    /// Number of directed edges, `d·(N)_s`.
    pub fn num_directed_edges(&self) -> usize {
        2 * self.r * self.num_vertices()
    }

    /// Directed edge `2(iV + v)` runs `v → σ_i(v)`; `2(iV + v) + 1` is its
    /// reversal.
    fn directed_head(&self, e: usize) -> usize {
        let (i, v) = ((e / 2) / self.num_vertices(), (e / 2) % self.num_vertices());
        if e % 2 == 0 {
            self.step[i][v]
        } else {
            v
        }
    }

    /// Directed edges leaving `u`.
    fn leaving(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let m = self.num_vertices();
        (0..self.r).flat_map(move |i| [2 * (i * m + u), 2 * (i * m + self.back[i][u]) + 1])
    }

    /// Non-backtracking successors of a directed edge: edges leaving its
    /// head other than its reversal.
    pub fn successors(&self, e: usize) -> Vec<usize> {
        self.leaving(self.directed_head(e)).filter(|&f| f != (e ^ 1)).collect()
    }

    /// The non-backtracking (Hashimoto) matrix `B[e][f] = 1` when `f`
    /// continues `e` without reversing it.
    pub fn hashimoto(&self) -> Mat<f64> {
        let m = self.num_directed_edges();
        let mut b = Mat::zeros(m, m);
        for e in 0..m {
            for f in self.successors(e) {
                b[(e, f)] += 1.0;
            }
        }
        b
    }

    /// `tr(B^t)`, the number of closed cyclically non-backtracking walks of
    /// length `t`, by exact integer powers of `B` applied row by row.
    pub fn hashimoto_trace(&self, t: usize) -> u128 {
        let m = self.num_directed_edges();
        let successors: Vec<Vec<usize>> = (0..m).map(|e| self.successors(e)).collect();
        (0..m)
            .into_par_iter()
            .map(|start| {
                let mut row = vec![0u128; m];
                row[start] = 1;
                for _ in 0..t {
                    let mut next = vec![0u128; m];
                    for (e, &c) in row.iter().enumerate() {
                        if c != 0 {
                            for &f in &successors[e] {
                                next[f] += c;
                            }
                        }
                    }
                    row = next;
                }
                row[start]
            })
            .sum()
    }

    /// Graphviz rendering, one edge per generator step.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph schreier {\n");
        for v in 0..self.num_vertices() {
            let label: Vec<String> = self.tuples[v].iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("  {v} [label=\"({})\"];\n", label.join(",")));
        }
        for (v, w, i) in self.edges() {
            out.push_str(&format!("  {v} -- {w} [label=\"{}\"];\n", i + 1));
        }
        out.push_str("}\n");
        out
    }
}

/// Adjacency eigenvalues (decreasing) and `μ`, the largest absolute value
/// after removing the trivial eigenvalue `d` once.
#[derive(Clone, Debug)]
pub struct AdjacencySpectrum {
    pub eigenvalues: Vec<f64>,
    pub mu: f64,
}

pub fn adjacency_mu(g: &SchreierGraph) -> Result<AdjacencySpectrum> {
    let mut eigenvalues = g
        .adjacency()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::invariant(format!("symmetric eigensolver failed: {e:?}")))?;
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let mu = eigenvalues[1..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(AdjacencySpectrum { eigenvalues, mu })
}

/// The non-backtracking spectrum together with its comparison against the
/// image of the adjacency spectrum.
#[derive(Clone, Debug)]
pub struct HashimotoReport {
    pub eigenvalues: Vec<c64>,
    /// Largest modulus after removing the trivial eigenvalue `d − 1` once.
    pub nu: f64,
    /// Eigenvalues within tolerance of `1` or `−1`.
    pub plus_minus_one: usize,
    /// Largest distance between matched eigenvalues, relative to
    /// `max(1, |z|)`.
    pub max_deviation: f64,
    /// Whether the two multisets agree within the tolerance.
    pub ihara_bass: bool,
}

/// Each adjacency eigenvalue `λ` gives the two roots of
/// `z² − λz + (d − 1)`; the remaining `(d − 2)·|V|` eigenvalues are `±1` in
/// equal numbers.
pub fn ihara_bass_image(adjacency: &[f64], d: usize) -> Vec<c64> {
    let q = (d - 1) as f64;
    let mut out = Vec::with_capacity(adjacency.len() * d);
    for &lambda in adjacency {
        let disc = c64::new(lambda * lambda - 4.0 * q, 0.0).sqrt();
        out.push((c64::new(lambda, 0.0) + disc) / 2.0);
        out.push((c64::new(lambda, 0.0) - disc) / 2.0);
    }
    let extra = (d - 2) * adjacency.len() / 2;
    out.extend(std::iter::repeat_n(c64::new(1.0, 0.0), extra));
    out.extend(std::iter::repeat_n(c64::new(-1.0, 0.0), extra));
    out
}

/// Computes the spectrum of `B` directly and checks it against the
/// Ihara–Bass image of the adjacency spectrum with relative tolerance `tol`.
pub fn hashimoto_spectrum(g: &SchreierGraph, max_directed_edges: usize, tol: f64) -> Result<HashimotoReport> {
    if g.num_directed_edges() > max_directed_edges {
        return Err(Error::budget("directed edges in dense non-backtracking solve", max_directed_edges));
    }
    let d = g.degree();
    let eigenvalues = g
        .hashimoto()
        .eigenvalues()
        .map_err(|e| Error::invariant(format!("non-backtracking eigensolver failed: {e:?}")))?;
    let adjacency = adjacency_mu(g)?;
    let predicted = ihara_bass_image(&adjacency.eigenvalues, d);
    let max_deviation = match_multisets(&eigenvalues, &predicted);
    let trivial = (d - 1) as f64;
    let mut moduli: Vec<(f64, f64)> = eigenvalues.iter().map(|z| ((z - trivial).norm(), z.norm())).collect();
    moduli.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nu = moduli[1..].iter().fold(0.0f64, |m, &(_, r)| m.max(r));
    let near = |z: &c64, c: f64| (z - c).norm() <= tol.max(1e-6).sqrt();
    let plus_minus_one = eigenvalues.iter().filter(|z| near(z, 1.0) || near(z, -1.0)).count();
    Ok(HashimotoReport {
        nu,
        plus_minus_one,
        max_deviation,
        ihara_bass: max_deviation <= tol,
        eigenvalues,
    })
}

/// Greedy nearest matching; returns the worst relative distance, or
/// infinity when the sizes differ.
fn match_multisets(a: &[c64], b: &[c64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let key = |z: &c64| (z.re, z.im);
    let mut a: Vec<c64> = a.to_vec();
    let mut b: Vec<c64> = b.to_vec();
    a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal));
    b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal));
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in &a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal sizes");
        used[j] = true;
        worst = worst.max(dist / z.norm().max(1.0));
    }
    worst
}

/// Both sides of `tr(B^t) = Σ_{w ∈ CR_t} (#fix w(σ))_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCheck {
    pub lhs: u128,
    pub rhs: u128,
    pub equal: bool,
}

/// Exact check of the trace identity; refuses more than `max_words`
/// cyclically reduced words.
pub fn trace_identity_check(g: &SchreierGraph, t: usize, max_words: usize) -> Result<TraceCheck> {
    if t == 0 {
        return Err(Error::invalid("walk length must be positive"));
    }
    if cyclically_reduced_count(g.r, t) > max_words as u128 {
        return Err(Error::budget("cyclically reduced words in trace check", max_words));
    }
    let lhs = g.hashimoto_trace(t);
    let words = enumerate_cyclically_reduced(g.r, t, max_words)?;
    let rhs = words
        .par_iter()
        .map(|w| {
            let fixed = evaluate_word(w, &g.perms).expect("ranks agree").fixed_points();
            (0..g.s).map(|i| fixed.saturating_sub(i) as u128).product::<u128>()
        })
        .sum();
    Ok(TraceCheck { lhs, rhs, equal: lhs == rhs })
}

/// `2√(d−1)·exp(2s²/(e²(d−1)))`, the asymptotic bound on `μ` for random
/// Schreier graphs on `s`-tuples.
pub fn ramanujan_bound(d: usize, s: usize) -> f64 {
    let q = (d - 1) as f64;
    let s = s as f64;
    2.0 * q.sqrt() * (2.0 * s * s / (std::f64::consts::E.powi(2) * q)).exp()
}

/// One trial of the bound experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTrial {
    pub n: usize,
    pub trial: u64,
    pub seed: u64,
    pub mu: f64,
    pub bound: f64,
    pub below: bool,
}

/// `μ` of `trials` random graphs for every `N` in `ns`; trial `k` of size
/// `N` is seeded with `seed ⊕ k`.
pub fn bound_experiment(
    r: usize,
    s: usize,
    ns: &[usize],
    trials: u64,
    seed: u64,
    max_vertices: usize,
) -> Result<Vec<BoundTrial>> {
    let bound = ramanujan_bound(2 * r, s);
    let jobs: Vec<(usize, u64)> = ns.iter().flat_map(|&n| (0..trials).map(move |k| (n, k))).collect();
    jobs.into_par_iter()
        .map(|(n, k)| {
            let mut rng = trial_rng(seed, k);
            let perms = (0..r).map(|_| Perm::random(n, &mut rng)).collect();
            let g = build_schreier(s, perms, max_vertices)?;
            let mu = adjacency_mu(&g)?.mu;
            Ok(BoundTrial {
                n,
                trial: k,
                seed: seed ^ k,
                mu,
                bound,
                below: mu < bound,
            })
        })
        .collect()
}
