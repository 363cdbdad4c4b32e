//! The ring of stable class functions on the symmetric groups.
//!
//! A polynomial in the `ξ_k` is a class function on every `S_N` at once.
//! Inner products with `1` stabilise once `N` is large: under the uniform
//! measure the cycle counts `a_t` become independent Poisson variables with
//! means `1/t`, and from `N ≥ Σ t·b_t` on, `⟨∏ a_t^{b_t}, 1⟩_{S_N}` equals
//! the product of the Poisson moments exactly. This module computes those
//! stable inner products, the stable irreducible characters (the families
//! `χ^{(N − |λ|, λ)}`) and their dimension polynomials, and decompositions
//! into the irreducible basis.

mod classfn;
mod partition;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use classfn::{Basis, ClassFunction};
pub use partition::{mn_character, IntPartition};

use crate::combinatorics::{factorial, integer_partitions, stirling2};
use crate::error::{Error, Result};

/// `E[Z^b]` for `Z` Poisson with mean `1/t`: `Σ_j S(b, j) t^{−j}`.
pub fn poisson_moment(t: usize, b: usize) -> BigRational {
    (0..=b)
        .map(|j| BigRational::new(stirling2(b, j), num_traits::pow(BigInt::from(t), j)))
        .sum()
}

/// The stable inner product `⟨f, g⟩`, the common value of `⟨f, g⟩_{S_N}`
/// for all large `N`.
pub fn stable_inner(f: &ClassFunction, g: &ClassFunction) -> BigRational {
    let product = (f * g).to_basis(Basis::A);
    product
        .terms()
        .iter()
        .map(|(m, c)| {
            let moments: BigRational = m
                .iter()
                .enumerate()
                .map(|(i, &b)| poisson_moment(i + 1, b as usize))
                .product();
            c * moments
        })
        .sum()
}

/// `⟨f, g⟩_{S_N} = Σ_{μ ⊢ N} f(μ) g(μ) / z_μ`, summing over cycle types.
pub fn finite_inner(f: &ClassFunction, g: &ClassFunction, n: usize) -> BigRational {
    let f = f.to_basis(Basis::A);
    let g = g.to_basis(Basis::A);
    integer_partitions(n)
        .into_iter()
        .map(|mu| {
            let mu = IntPartition::new(mu);
            let counts = mu.cycle_counts();
            f.evaluate(&counts) * g.evaluate(&counts) / BigRational::from_integer(mu.z())
        })
        .sum()
}

/// `binom(a, ρ) = ∏_r binom(a_r, α_r(ρ))` as a polynomial in the `a_t`.
fn binomial_in_a(rho: &IntPartition) -> ClassFunction {
    let mut out = ClassFunction::constant(BigRational::one(), Basis::A);
    for (i, &count) in rho.cycle_counts().iter().enumerate() {
        for j in 0..count {
            let shifted = &ClassFunction::a(i + 1) - &ClassFunction::constant(BigRational::from_integer(j.into()), Basis::A);
            out = &out * &shifted;
        }
        out = out.scale(&BigRational::new(BigInt::one(), factorial(count)));
    }
    out
}

/// The stable irreducible character `χ_λ`: the element of the ring that
/// agrees with `χ^{(N − |λ|, λ)}` on `S_N` for every `N ≥ |λ| + λ₁`.
///
/// ```text
/// χ_λ = Σ_{|ρ| + |σ| = |λ|} (−1)^{ℓ(σ)} χ^λ(ρ ∪ σ) / z_σ · binom(a, ρ)
/// ```
///
/// Returned in the `ξ` basis.
pub fn stable_irreducible(lambda: &IntPartition) -> ClassFunction {
    let n = lambda.size();
    let mut out = ClassFunction::zero(Basis::A);
    for m in 0..=n {
        for sigma in integer_partitions(m) {
            let sigma = IntPartition::new(sigma);
            let sign = if sigma.len() % 2 == 0 { 1 } else { -1 };
            for rho in integer_partitions(n - m) {
                let rho = IntPartition::new(rho);
                let chi = mn_character(lambda, &rho.union(&sigma)).expect("sizes match");
                if chi.is_zero() {
                    continue;
                }
                let c = BigRational::new(chi * sign, sigma.z());
                out = &out + &binomial_in_a(&rho).scale(&c);
            }
        }
    }
    out.to_basis(Basis::Xi)
}

/// A polynomial in `N` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionPolynomial {
    /// Coefficients from the constant term upwards.
    pub coeffs: Vec<BigRational>,
}

impl DimensionPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, n: i64) -> BigRational {
        let x = BigRational::from_integer(n.into());
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }
}

impl fmt::Display for DimensionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f_as_class = ClassFunction::from_terms(
            Basis::Xi,
            self.coeffs.iter().enumerate().map(|(d, c)| (if d == 0 { vec![] } else { vec![d as u32] }, c.clone())),
        );
        write!(f, "{}", f_as_class.to_string().replace("xi1", "N"))
    }
}

/// `dim χ^{(N − |λ|, λ)}` as a polynomial in `N`, obtained by substituting
/// `N` for every `ξ_j` (the identity permutation has `N` fixed points of
/// every power).
pub fn dimension_poly(lambda: &IntPartition) -> DimensionPolynomial {
    DimensionPolynomial {
        coeffs: stable_irreducible(lambda).degree_profile(),
    }
}

/// Coefficients of `f` in the basis of stable irreducible characters.
/// Fails if the coefficients do not reconstruct `f`.
pub fn decompose_into_irreducibles(f: &ClassFunction) -> Result<BTreeMap<IntPartition, BigRational>> {
    let mut out = BTreeMap::new();
    let mut rebuilt = ClassFunction::zero(Basis::Xi);
    for size in 0..=f.weight() {
        for lambda in integer_partitions(size) {
            let lambda = IntPartition::new(lambda);
            let chi = stable_irreducible(&lambda);
            let c = stable_inner(f, &chi);
            if !c.is_zero() {
                rebuilt = &rebuilt + &chi.scale(&c);
                out.insert(lambda, c);
            }
        }
    }
    if (&rebuilt - f).is_zero() {
        Ok(out)
    } else {
        Err(Error::invariant("irreducible decomposition does not reconstruct the class function"))
    }
}

/// `χ_s = ξ₁(ξ₁ − 1)⋯(ξ₁ − s + 1)`, the character of `S_N` acting on
/// `s`-tuples of distinct points.
pub fn fixed_tuples_character(s: usize) -> ClassFunction {
    (0..s).fold(ClassFunction::one(), |acc, j| &acc * &(&ClassFunction::xi(1) - &ClassFunction::integer(j as i64)))
}

/// `⟨ξ₁^{α₁}⋯ξ_k^{α_k}, ξ₁ − 1⟩`, the constant in front of the critical
/// term of the expectation of a monomial.
pub fn critical_constant(alpha: &[usize]) -> BigRational {
    stable_inner(&ClassFunction::xi_monomial(alpha), &stable_irreducible(&IntPartition::new(vec![1])))
}

/// Whether every coefficient of a decomposition is a non-negative integer,
/// as for genuine characters.
pub fn is_character(decomposition: &BTreeMap<IntPartition, BigRational>) -> bool {
    decomposition.values().all(|c| c.is_integer() && !c.is_negative())
}
