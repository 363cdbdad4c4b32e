//! Word-level statistics: primitivity rank and critical subgroups, exact
//! expectations of cycle-count monomials with their leading-term data, and a
//! conjugacy decision read off from counts of Euler-characteristic-zero
//! quotients.
//!
//! Exponent vectors `α` index the statistic `ξ₁^{α₁}⋯ξ_k^{α_k}`, where `ξ_i`
//! counts the fixed points of the `i`-th power of a permutation. The graph
//! attached to `(w, α)` is the disjoint union of `α_i` cycles spelling `w^i`
//! for every `i`, mapped to the bouquet.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::characters::{critical_constant, Basis, ClassFunction};
use crate::combinatorics::{divisors, for_each_set_partition};
use crate::error::{Error, Result};
use crate::graphs::MultiCoreGraph;
use crate::morphisms::{
    chi_max_and_crit, enumerate_valid_partitions, Decomposition, GraphMorphism, PartitionSearch, QuotientLattice,
};
use crate::phi::{self, LaurentSeries, LiftSum, LiftTerm, RationalFnOfN};
use crate::words::{CyclicWord, Word};

/// Primitivity rank `π(w)` and the critical subgroups `Crit(w)`.
#[derive(Clone, Debug)]
pub struct PrimitivityReport {
    /// `None` encodes `π(w) = ∞`: no proper algebraic extension exists.
    pub pi: Option<usize>,
    /// One decomposition `cycle(w) ↠ Σ → bouquet` per critical subgroup; the
    /// middle graph is the core graph of the subgroup and the first leg is
    /// the immersion of the cycle.
    pub crit: Vec<Decomposition>,
}

/// `π(w) = 1 − χ^max` of the cycle of `w` mapped to the bouquet.
pub fn primitivity(w: &Word, options: &PartitionSearch) -> Result<PrimitivityReport> {
    let cyclic = nontrivial(w)?;
    let eta = GraphMorphism::to_bouquet(&MultiCoreGraph::cycle(&cyclic));
    let report = chi_max_and_crit(&eta, options)?;
    let pi = match report.chi_max {
        Some(chi) if chi <= 0 => Some((1 - chi) as usize),
        Some(chi) => return Err(Error::invariant(format!("critical quotient of a cycle with χ = {chi}"))),
        None => None,
    };
    Ok(PrimitivityReport {
        pi,
        crit: report.critical,
    })
}

/// `χ_{α}^max(w)` and `Crit_α(w)`.
#[derive(Clone, Debug)]
pub struct JointCriticalReport {
    /// Largest negative `χ(Σ)` over algebraic quotients; `None` when there
    /// is none (exactly when `w` is primitive).
    pub chi_max: Option<i64>,
    pub critical: Vec<Decomposition>,
}

/// Scans the algebraic quotients of the `α`-powers graph of a non-power `w`
/// for those of largest negative Euler characteristic, and checks the result
/// against `1 − π(w)`.
pub fn chi_ak_max(w: &Word, alpha: &[usize], options: &PartitionSearch) -> Result<JointCriticalReport> {
    let cyclic = nontrivial(w)?;
    let (_, d) = cyclic.max_root();
    if d > 1 {
        return Err(Error::invalid(format!("{w} is a proper power")));
    }
    let eta = powers_morphism(&cyclic, alpha)?;
    let image = eta.image();
    let lattice = QuotientLattice::new(&image.surjection, options)?;
    let algebraic = lattice.algebraic_from_bottom();
    let candidates: Vec<usize> = (0..lattice.len())
        .filter(|&i| algebraic[i] && lattice.chi(i) < 0)
        .collect();
    let chi_max = candidates.iter().map(|&i| lattice.chi(i)).max();
    let critical = candidates
        .into_iter()
        .filter(|&i| Some(lattice.chi(i)) == chi_max)
        .map(|i| lattice.decomposition(i))
        .collect();
    let pi = primitivity(w, options)?.pi;
    let expected = pi.map(|p| 1 - p as i64);
    if chi_max != expected {
        return Err(Error::invariant(format!(
            "χ_α^max = {chi_max:?} but 1 − π(w) = {expected:?} for {w}"
        )));
    }
    Ok(JointCriticalReport { chi_max, critical })
}

/// Exact expectation of a monomial with the data of its leading terms.
#[derive(Clone, Debug)]
pub struct ExpectationReport {
    pub word: Word,
    pub alpha: Vec<usize>,
    /// `w = root^power` with `root` not a proper power.
    pub root: CyclicWord,
    pub power: usize,
    /// Exponents moved to the root: `α_i` on `ξ_i` becomes `α_i` on `ξ_{i·power}`.
    pub root_alpha: Vec<usize>,
    /// The expectation as lift terms, exact for every `N`.
    pub terms: LiftSum,
    /// The expectation as a function of `N`.
    pub rational: RationalFnOfN,
    /// Limit of the expectation as `N → ∞`.
    pub e_unif: BigRational,
    /// `⟨ξ^{root α}, ξ₁ − 1⟩`.
    pub c_const: BigRational,
    /// `|Crit(root)|`.
    pub crit_count: usize,
    /// `π(root)`; `None` is `∞`.
    pub pi: Option<usize>,
}

impl ExpectationReport {
    /// The predicted first correction `(exponent, coefficient)`, namely
    /// `c_const · crit_count · N^{1−π}`; `None` when `π = ∞`.
    pub fn predicted_correction(&self) -> Option<(i64, BigRational)> {
        let pi = self.pi?;
        Some((1 - pi as i64, &self.c_const * BigRational::from_integer(self.crit_count.into())))
    }
}

/// `E_w[ξ₁^{α₁}⋯ξ_k^{α_k}]` for uniform `S_N`-substitutions. A proper power
/// `w = u^d` is handled through `ξ_i(σ^d) = ξ_{i·d}(σ)`.
pub fn expectation(w: &Word, alpha: &[usize], options: &PartitionSearch) -> Result<ExpectationReport> {
    let cyclic = nontrivial(w)?;
    let (root, power) = cyclic.max_root();
    let root_alpha = power_rewrite(alpha, power);
    let terms = phi::phi_terms(&powers_morphism(&root, &root_alpha)?, options)?;
    let rational = terms.rational();
    let report = primitivity(&root.to_word(), options)?;
    Ok(ExpectationReport {
        word: w.clone(),
        alpha: alpha.to_vec(),
        root,
        power,
        e_unif: e_unif_monomial(&root_alpha),
        c_const: critical_constant(&root_alpha),
        crit_count: report.crit.len(),
        pi: report.pi,
        root_alpha,
        terms,
        rational,
    })
}

/// `E_w[f]` for a class function `f`, by linearity over its monomials in
/// the `ξ_i`.
#[derive(Clone, Debug)]
pub struct ClassExpectation {
    /// The statistic in the `ξ` basis.
    pub stat: ClassFunction,
    /// Common denominator `D` of the coefficients of `stat`.
    pub denominator: BigInt,
    /// `D · E_w[f]` as lift terms.
    pub scaled: LiftSum,
    /// Coefficient and report of every non-constant monomial.
    pub monomials: Vec<(BigRational, ExpectationReport)>,
}

impl ClassExpectation {
    /// The exact value at `N`, valid for every `N ≥ 1`.
    pub fn value(&self, n: u64) -> BigRational {
        self.scaled.value(n) / BigRational::from_integer(self.denominator.clone())
    }

    /// `D · E_w[f]` as a rational function.
    pub fn scaled_rational(&self) -> RationalFnOfN {
        self.scaled.rational()
    }

    /// Laurent expansion in `1/N` with `order` coefficients.
    pub fn laurent(&self, order: usize) -> LaurentSeries {
        let mut series = phi::laurent(&self.scaled_rational(), order);
        let d = BigRational::from_integer(self.denominator.clone());
        for c in series.coeffs.iter_mut() {
            *c = &*c / &d;
        }
        series
    }
}

impl fmt::Display for ClassExpectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.scaled_rational();
        if self.denominator.is_one() {
            write!(f, "{r}")
        } else {
            write!(f, "({r})/{}", self.denominator)
        }
    }
}

/// Expands `f` in the `ξ` basis and sums the expectations of its monomials.
pub fn expectation_of(w: &Word, f: &ClassFunction, options: &PartitionSearch) -> Result<ClassExpectation> {
    let stat = f.to_basis(Basis::Xi);
    let denominator = stat
        .terms()
        .values()
        .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let mut scaled = LiftSum::zero();
    let mut monomials = Vec::new();
    for (exponents, c) in stat.terms() {
        let k = (c * BigRational::from_integer(denominator.clone())).to_integer();
        let alpha: Vec<usize> = exponents.iter().map(|&e| e as usize).collect();
        if alpha.iter().all(|&a| a == 0) {
            scaled.add_scaled(&LiftSum::single(LiftTerm::unit()), &k);
            continue;
        }
        let report = expectation(w, &alpha, options)?;
        scaled.add_scaled(&report.terms, &k);
        monomials.push((c.clone(), report));
    }
    Ok(ClassExpectation {
        stat,
        denominator,
        scaled,
        monomials,
    })
}

/// Moves `α_i` from `ξ_i` to `ξ_{i·d}`.
pub fn power_rewrite(alpha: &[usize], d: usize) -> Vec<usize> {
    let mut out = vec![0; alpha.len() * d];
    for (i, &a) in alpha.iter().enumerate() {
        out[(i + 1) * d - 1] += a;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// `lim_{N→∞} E[ξ₁^{α₁}⋯ξ_k^{α_k}]` for a uniform permutation: a sum over
/// set partitions of the multiset `S` holding `α_i` copies of `i`, each block
/// `A` contributing `Σ_{d | gcd(A)} d^{|A|−1}`.
pub fn e_unif_monomial(alpha: &[usize]) -> BigRational {
    let items: Vec<u64> = alpha
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(i as u64 + 1, a))
        .collect();
    let mut total = BigInt::zero();
    for_each_set_partition(items.len(), |blocks| {
        let count = blocks.iter().max().map_or(0, |&b| b + 1);
        let mut gcd = vec![0u64; count];
        let mut size = vec![0u32; count];
        for (&b, &k) in blocks.iter().zip(&items) {
            gcd[b] = num_integer::gcd(gcd[b], k);
            size[b] += 1;
        }
        let product: BigInt = gcd
            .iter()
            .zip(&size)
            .map(|(&g, &s)| divisors(g).into_iter().map(|d| num_traits::pow(BigInt::from(d), s as usize - 1)).sum::<BigInt>())
            .product();
        total += product;
    });
    BigRational::from_integer(total)
}

/// What the conjugacy decision is based on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyEvidence {
    pub root_u: CyclicWord,
    pub exponent_u: usize,
    pub root_v: CyclicWord,
    pub exponent_v: usize,
    /// Quotients of `cycle(u) ⊔ cycle(v)` onto a single cycle.
    pub one_component: usize,
    /// Those among them in which `u` and `v` run around the cycle in the
    /// same direction (the others witness `u₀ ~ v₀^{−1}`).
    pub one_component_aligned: usize,
    /// Quotients onto two disjoint cycles; always `τ(k)·τ(m)`.
    pub two_components: usize,
}

/// Decides whether `u` and `v` are conjugate from the quotients of
/// `cycle(u) ⊔ cycle(v)` with Euler characteristic zero. The roots are
/// conjugate exactly when some quotient is a single cycle traversed by both
/// in the same direction; `u` and `v` are then conjugate exactly when the
/// exponents agree.
pub fn decide_conjugate(u: &Word, v: &Word) -> Result<(bool, ConjugacyEvidence)> {
    if u.rank() != v.rank() {
        return Err(Error::invalid("words over different ranks"));
    }
    let (cu, cv) = (nontrivial(u)?, nontrivial(v)?);
    let (root_u, exponent_u) = cu.max_root();
    let (root_v, exponent_v) = cv.max_root();
    let (graph, offsets) = MultiCoreGraph::disjoint_union(&[MultiCoreGraph::cycle(&cu), MultiCoreGraph::cycle(&cv)]);
    // Quotients of cycles with all degrees two are unions of cycles, so the
    // degree filter keeps exactly the χ = 0 quotients.
    let options = PartitionSearch {
        max_vertices: graph.num_vertices().max(PartitionSearch::default().max_vertices),
        max_quotient_degree: Some(2),
        ..PartitionSearch::default()
    };
    let mut evidence = ConjugacyEvidence {
        root_u,
        exponent_u,
        root_v,
        exponent_v,
        one_component: 0,
        one_component_aligned: 0,
        two_components: 0,
    };
    for valid in enumerate_valid_partitions(&graph, None, &options)? {
        let q = GraphMorphism::quotient(&graph, &valid.partition)?;
        let sigma = q.codomain();
        if sigma.chi() != 0 {
            return Err(Error::invariant("a degree-two quotient of cycles is not a union of cycles"));
        }
        match sigma.components().len() {
            1 => {
                evidence.one_component += 1;
                if same_direction(sigma, q.vertex_map(), &cu, &cv, offsets[1]) {
                    evidence.one_component_aligned += 1;
                }
            }
            2 => evidence.two_components += 1,
            c => return Err(Error::invariant(format!("quotient of two cycles with {c} components"))),
        }
    }
    let conjugate = evidence.one_component_aligned > 0 && exponent_u == exponent_v;
    Ok((conjugate, evidence))
}

/// Whether the images of `u` (read from vertex 0) and `v` (read from vertex
/// `v_start`) traverse the shared cycle `sigma` in the same direction.
fn same_direction(sigma: &MultiCoreGraph, map: &[usize], u: &CyclicWord, v: &CyclicWord, v_start: usize) -> bool {
    let mut forward = vec![None; sigma.num_edges()];
    let mut x = map[0];
    for &l in u.letters() {
        let e = if l.inverse { sigma.in_edge(x, l.generator) } else { sigma.out_edge(x, l.generator) };
        let e = e.expect("the image of a cycle is a closed path");
        forward[e] = Some(!l.inverse);
        x = sigma.step(x, l).expect("the image of a cycle is a closed path");
    }
    let l = v.letters()[0];
    let y = map[v_start];
    let e = if l.inverse { sigma.in_edge(y, l.generator) } else { sigma.out_edge(y, l.generator) };
    e.and_then(|e| forward[e]) == Some(!l.inverse)
}

fn nontrivial(w: &Word) -> Result<CyclicWord> {
    if w.is_identity() {
        return Err(Error::invalid("the word is trivial"));
    }
    CyclicWord::from_word(w)
}

/// The `α`-powers graph of `w` mapped to the bouquet.
pub fn powers_morphism(w: &CyclicWord, alpha: &[usize]) -> Result<GraphMorphism> {
    Ok(GraphMorphism::to_bouquet(&MultiCoreGraph::powers(w, alpha)?))
}
