//! Exact lift-counting functions of `N`.
//!
//! For a surjective morphism `η: Γ ↠ Δ` of core graphs, `L_η(N)` is the
//! expected number of injective lifts of `η` to a uniformly random `N`-sheeted
//! cover of `Δ`:
//!
//! ```text
//! L_η(N) = ∏_{v ∈ V(Δ)} (N)_{|η⁻¹(v)|} / ∏_{e ∈ E(Δ)} (N)_{|η⁻¹(e)|}
//! ```
//!
//! once `N` is at least the largest vertex fibre, and `0` below it. Every lift
//! factors uniquely as a quotient followed by an injective lift, so the
//! expected number of all lifts is `Φ_η = Σ L_{η₂}` over the decompositions
//! `Γ ↠ Σ → Δ`. Möbius inversion over the decomposition lattice gives the
//! right inversion `R`, the two-sided inversion `C`, and their variants
//! restricted to algebraic legs.
//!
//! All these functions are integer combinations of single lift terms, so
//! they are computed symbolically as [`LiftSum`]s and only turned into
//! rational functions at the end. A lift sum also knows its true value for
//! every `N`, which gives the exact threshold from which the rational
//! expression is valid.

mod poly;
mod ratfn;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use poly::Poly;
pub use ratfn::{LaurentSeries, RationalFnOfN};

use crate::combinatorics::stirling1_unsigned;
use crate::error::{Error, Result};
use crate::morphisms::{FiberProfile, GraphMorphism, PartitionSearch, QuotientLattice};

/// A single falling-factorial ratio `∏ₖ (N − k)^{eₖ}`, counted as zero for
/// `N` below `support` (the largest vertex fibre).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftTerm {
    exponents: Vec<(u64, i64)>,
    support: u64,
}

impl LiftTerm {
    /// The constant `1`: the single lift of the empty graph.
    pub fn unit() -> Self {
        LiftTerm {
            exponents: Vec::new(),
            support: 0,
        }
    }

    pub fn from_profile(profile: &FiberProfile) -> Self {
        let exponents = ratfn::falling_exponents(&profile.vertices, &profile.edges).into_iter().collect();
        LiftTerm {
            exponents,
            support: profile.vertices.iter().copied().max().unwrap_or(0) as u64,
        }
    }

    /// The term as a rational function.
    pub fn rational(&self) -> RationalFnOfN {
        RationalFnOfN::linear_product(1, &self.exponents.iter().copied().collect())
    }

    /// The expected number of injective lifts into an `N`-sheeted cover.
    pub fn value(&self, n: u64) -> BigRational {
        if n < self.support {
            return BigRational::zero();
        }
        self.exponents.iter().fold(BigRational::one(), |acc, &(k, e)| {
            let base = BigRational::from_integer(BigInt::from(n) - BigInt::from(k));
            acc * base.pow(e as i32)
        })
    }

    pub fn support(&self) -> u64 {
        self.support
    }
}

/// An integer combination of [`LiftTerm`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiftSum {
    terms: BTreeMap<LiftTerm, BigInt>,
}

impl LiftSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(term: LiftTerm) -> Self {
        LiftSum {
            terms: BTreeMap::from([(term, BigInt::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<LiftTerm, BigInt> {
        &self.terms
    }

    pub fn add_term(&mut self, term: &LiftTerm, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(term.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(term);
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &LiftSum, c: &BigInt) {
        for (term, k) in &other.terms {
            self.add_term(term, &(k * c));
        }
    }

    pub fn add(&mut self, other: &LiftSum) {
        self.add_scaled(other, &BigInt::one());
    }

    pub fn sub(&mut self, other: &LiftSum) {
        self.add_scaled(other, &-BigInt::one());
    }

    /// Largest support of any term: above it every term is its rational
    /// expression.
    pub fn support(&self) -> u64 {
        self.terms.keys().map(|t| t.support).max().unwrap_or(0)
    }

    /// The true value at `N`.
    pub fn value(&self, n: u64) -> BigRational {
        self.terms
            .iter()
            .map(|(t, c)| t.value(n) * BigRational::from_integer(c.clone()))
            .sum()
    }

    /// The reduced rational function, with `n_min` the least `N₀` such that
    /// it is defined and equals the true value for every `N ≥ N₀`.
    pub fn rational(&self) -> RationalFnOfN {
        let parts: Vec<RationalFnOfN> = self
            .terms
            .iter()
            .map(|(t, c)| RationalFnOfN::linear_product(c.clone(), &t.exponents.iter().copied().collect()))
            .collect();
        let f = RationalFnOfN::sum(&parts);
        let n_min = (1..self.support())
            .rev()
            .find(|&n| f.eval(n) != Some(self.value(n)))
            .map_or(1, |n| n + 1);
        f.with_n_min(n_min)
    }
}

/// Vertex and edge fibre sizes of a morphism over every vertex and edge of
/// its codomain.
pub fn fiber_profile(eta: &GraphMorphism) -> FiberProfile {
    let mut vertices = vec![0; eta.codomain().num_vertices()];
    for &v in eta.vertex_map() {
        vertices[v] += 1;
    }
    let mut edges = vec![0; eta.codomain().num_edges()];
    for &e in eta.edge_map() {
        edges[e] += 1;
    }
    FiberProfile { vertices, edges }
}

fn require_surjective(eta: &GraphMorphism) -> Result<()> {
    if eta.is_surjective() {
        Ok(())
    } else {
        Err(Error::invalid("the morphism must be surjective"))
    }
}

/// `L_η`, the expected number of injective lifts of a surjective `η`.
pub fn l_b(eta: &GraphMorphism) -> Result<RationalFnOfN> {
    require_surjective(eta)?;
    Ok(LiftSum::single(LiftTerm::from_profile(&fiber_profile(eta))).rational())
}

/// `Φ_η` as a combination of lift terms. A non-surjective morphism is
/// replaced by its surjection onto its image: restricting a random cover of
/// the codomain to the image gives a uniform random cover of the image.
pub fn phi_terms(eta: &GraphMorphism, options: &PartitionSearch) -> Result<LiftSum> {
    let lattice = QuotientLattice::new(&eta.image().surjection, options)?;
    let top = lattice.top();
    let counts = (0..lattice.len())
        .into_par_iter()
        .map(|q| LiftTerm::from_profile(&lattice.fiber_profile(q, top)))
        .fold(BTreeMap::new, |mut acc, t| {
            *acc.entry(t).or_insert(0u64) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (t, c) in b {
                *a.entry(t).or_insert(0) += c;
            }
            a
        });
    Ok(LiftSum {
        terms: counts.into_iter().map(|(t, c)| (t, BigInt::from(c))).collect(),
    })
}

/// `Φ_η(N)`, the expected number of lifts of `η` to a random `N`-cover.
pub fn phi(eta: &GraphMorphism, options: &PartitionSearch) -> Result<RationalFnOfN> {
    Ok(phi_terms(eta, options)?.rational())
}

/// `R_η`, defined by `Φ_η = Σ R_{η₁}` over decompositions, as lift terms.
pub fn moebius_r_terms(eta: &GraphMorphism, options: &PartitionSearch) -> Result<LiftSum> {
    require_surjective(eta)?;
    let lattice = QuotientLattice::new(eta, options)?;
    let below = lattice.below_sets();
    let mut row: Vec<LiftSum> = Vec::with_capacity(lattice.len());
    for b in 0..lattice.len() {
        let mut r = LiftSum::zero();
        for q in below[b].ones() {
            r.add(&LiftSum::single(LiftTerm::from_profile(&lattice.fiber_profile(q, b))));
            if q != b {
                r.sub(&row[q]);
            }
        }
        row.push(r);
    }
    Ok(row.pop().expect("the lattice is never empty"))
}

pub fn moebius_r(eta: &GraphMorphism, options: &PartitionSearch) -> Result<RationalFnOfN> {
    Ok(moebius_r_terms(eta, options)?.rational())
}

/// `C_η`, defined by `Φ_η = Σ C_{η₂}` over factorisations into three
/// morphisms, as lift terms.
pub fn moebius_c_terms(eta: &GraphMorphism, options: &PartitionSearch) -> Result<LiftSum> {
    require_surjective(eta)?;
    let lattice = QuotientLattice::new(eta, options)?;
    let below = lattice.below_sets();
    let bottom = lattice.bottom();
    let mut row: Vec<LiftSum> = Vec::with_capacity(lattice.len());
    for b in 0..lattice.len() {
        let mut c = LiftSum::single(LiftTerm::from_profile(&lattice.fiber_profile(bottom, b)));
        for q in below[b].ones().filter(|&q| q != b) {
            c.sub(&row[q]);
        }
        row.push(c);
    }
    Ok(row.pop().expect("the lattice is never empty"))
}

pub fn moebius_c(eta: &GraphMorphism, options: &PartitionSearch) -> Result<RationalFnOfN> {
    Ok(moebius_c_terms(eta, options)?.rational())
}

/// `C^alg_η` for an algebraic surjective `η`.
pub fn moebius_c_alg(eta: &GraphMorphism, options: &PartitionSearch) -> Result<RationalFnOfN> {
    require_surjective(eta)?;
    let lattice = QuotientLattice::new(eta, options)?;
    if !lattice.is_algebraic(lattice.bottom(), lattice.top()) {
        return Err(Error::invalid("the morphism must be algebraic"));
    }
    let tables = MoebiusTables::new(&lattice);
    Ok(tables.c_alg(lattice.bottom(), lattice.top()).rational())
}

/// Every inversion on every interval `[a, b]` of one decomposition lattice.
/// The interval `[a, b]` stands for the morphism `Γ/P_a → Γ/P_b`; entries for
/// incomparable pairs are zero. The algebraic inversions are only meaningful
/// on algebraic intervals, where they sum over algebraic legs only.
pub struct MoebiusTables<'a> {
    lattice: &'a QuotientLattice,
    l: Vec<Vec<LiftSum>>,
    phi: Vec<Vec<LiftSum>>,
    r: Vec<Vec<LiftSum>>,
    c: Vec<Vec<LiftSum>>,
    l_alg: Vec<Vec<LiftSum>>,
    c_alg: Vec<Vec<LiftSum>>,
}

impl<'a> MoebiusTables<'a> {
    pub fn new(lattice: &'a QuotientLattice) -> Self {
        let n = lattice.len();
        let below = lattice.below_sets();
        let alg = lattice.algebraic_intervals();
        let is_alg = |a: usize, b: usize| alg[b].contains(a);
        let empty = || vec![vec![LiftSum::zero(); n]; n];
        // Tables are indexed [a][b].
        let columns: Vec<Vec<(usize, LiftSum)>> = (0..n)
            .into_par_iter()
            .map(|b| {
                below[b]
                    .ones()
                    .map(|a| (a, LiftSum::single(LiftTerm::from_profile(&lattice.fiber_profile(a, b)))))
                    .collect()
            })
            .collect();
        let mut l = empty();
        for (b, column) in columns.into_iter().enumerate() {
            for (a, term) in column {
                l[a][b] = term;
            }
        }
        let mut phi = empty();
        for b in 0..n {
            for a in below[b].ones() {
                for q in below[b].ones().filter(|&q| below[q].contains(a)) {
                    let term = l[q][b].clone();
                    phi[a][b].add(&term);
                }
            }
        }
        let mut r = empty();
        let mut c = empty();
        let mut c_alg = empty();
        let mut l_alg = empty();
        // Strictly finer elements have smaller indices.
        for a in (0..n).rev() {
            for b in (a..n).filter(|&b| below[b].contains(a)) {
                let mut x = phi[a][b].clone();
                for q in (a + 1..=b).filter(|&q| below[q].contains(a) && below[b].contains(q)) {
                    if is_alg(a, q) && is_alg(q, b) {
                        let term = l_alg[q][b].clone();
                        x.sub(&term);
                    }
                }
                l_alg[a][b] = x;
            }
        }
        for a in 0..n {
            for b in (a..n).filter(|&b| below[b].contains(a)) {
                let mut rr = phi[a][b].clone();
                let mut cc = l[a][b].clone();
                let mut ca = l_alg[a][b].clone();
                for q in (a..b).filter(|&q| below[q].contains(a) && below[b].contains(q)) {
                    rr.sub(&r[a][q]);
                    cc.sub(&c[a][q]);
                    if is_alg(a, q) && is_alg(q, b) {
                        ca.sub(&c_alg[a][q]);
                    }
                }
                r[a][b] = rr;
                c[a][b] = cc;
                c_alg[a][b] = ca;
            }
        }
        MoebiusTables {
            lattice,
            l,
            phi,
            r,
            c,
            l_alg,
            c_alg,
        }
    }

    pub fn lattice(&self) -> &QuotientLattice {
        self.lattice
    }

    pub fn l(&self, a: usize, b: usize) -> &LiftSum {
        &self.l[a][b]
    }

    pub fn phi(&self, a: usize, b: usize) -> &LiftSum {
        &self.phi[a][b]
    }

    pub fn r(&self, a: usize, b: usize) -> &LiftSum {
        &self.r[a][b]
    }

    pub fn c(&self, a: usize, b: usize) -> &LiftSum {
        &self.c[a][b]
    }

    pub fn l_alg(&self, a: usize, b: usize) -> &LiftSum {
        &self.l_alg[a][b]
    }

    pub fn c_alg(&self, a: usize, b: usize) -> &LiftSum {
        &self.c_alg[a][b]
    }
}

/// Expansion of a rational function at `N → ∞`.
pub fn laurent(f: &RationalFnOfN, order: usize) -> LaurentSeries {
    f.laurent(order)
}

/// `[X]_j`: the number of permutations preserving every fibre (of the given
/// sizes) whose norm — points minus cycles — is `j`.
pub fn norm_counts(fiber_sizes: &[usize], j: usize) -> BigInt {
    let mut dist = vec![BigInt::one()];
    for &n in fiber_sizes {
        let per: Vec<BigInt> = (0..n.max(1)).map(|jj| stirling1_unsigned(n, n - jj)).collect();
        let mut next = vec![BigInt::zero(); dist.len() + per.len() - 1];
        for (a, x) in dist.iter().enumerate() {
            for (b, y) in per.iter().enumerate() {
                next[a + b] += x * y;
            }
        }
        dist = next;
    }
    dist.get(j).cloned().unwrap_or_else(BigInt::zero)
}

/// The expansion of `L_η` straight from fibre-preserving permutation counts:
/// the coefficient of `N^{χ(Γ) − J}` is
/// `Σ_{j₀} (−1)^{j₀} [V]_{j₀} G(J − j₀)` where `G` inverts the edge series,
/// `G(0) = 1`, `G(m) = Σ_{j=1..m} (−1)^{j+1} [E]_j G(m − j)`.
pub fn laurent_l_direct(eta: &GraphMorphism, order: usize) -> Result<LaurentSeries> {
    require_surjective(eta)?;
    let profile = fiber_profile(eta);
    let vertex: Vec<BigInt> = (0..order).map(|j| norm_counts(&profile.vertices, j)).collect();
    let edge: Vec<BigInt> = (0..order).map(|j| norm_counts(&profile.edges, j)).collect();
    let sign = |j: usize| if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let mut g: Vec<BigInt> = Vec::with_capacity(order);
    for m in 0..order {
        let value = if m == 0 {
            BigInt::one()
        } else {
            (1..=m).map(|j| -sign(j) * &edge[j] * &g[m - j]).sum()
        };
        g.push(value);
    }
    let coeffs = (0..order)
        .map(|jj| {
            let c: BigInt = (0..=jj).map(|j0| sign(j0) * &vertex[j0] * &g[jj - j0]).sum();
            BigRational::from_integer(c)
        })
        .collect();
    Ok(LaurentSeries {
        e0: eta.domain().chi(),
        coeffs,
    })
}

/// Whether the signs of a lift sum's true values never go negative; a cheap
/// sanity check on expectations of non-negative statistics.
pub fn is_nonnegative_on(sum: &LiftSum, range: std::ops::RangeInclusive<u64>) -> bool {
    range.into_iter().all(|n| !sum.value(n).is_negative())
}
