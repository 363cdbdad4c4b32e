//! Stable class functions: polynomials in the `ξ_k` (fixed points of the
//! `k`-th power) or, equivalently, in the `a_t` (number of `t`-cycles).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinatorics::{divisors, mobius};
use crate::error::{Error, Result};

/// Which generators a [`ClassFunction`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `ξ_k(σ) = #fix(σ^k)`.
    Xi,
    /// `a_t(σ)` = number of `t`-cycles of `σ`.
    A,
}

impl Basis {
    fn symbol(self) -> &'static str {
        match self {
            Basis::Xi => "xi",
            Basis::A => "a",
        }
    }
}

/// Exponent vector: entry `i` is the exponent of variable `i + 1`; never has
/// trailing zeros.
type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn multiply_monomials(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

/// An element of the ring of stable class functions, as a sparse polynomial
/// with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    basis: Basis,
    terms: BTreeMap<Monomial, BigRational>,
}

impl ClassFunction {
    pub fn zero(basis: Basis) -> Self {
        ClassFunction {
            basis,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational, basis: Basis) -> Self {
        let mut f = Self::zero(basis);
        f.add_term(Vec::new(), c);
        f
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one(), Basis::Xi)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()), Basis::Xi)
    }

    /// The variable `ξ_k` or `a_k`.
    pub fn variable(basis: Basis, k: usize) -> Self {
        assert!(k >= 1, "variable indices start at 1");
        let mut m = vec![0; k];
        m[k - 1] = 1;
        let mut f = Self::zero(basis);
        f.add_term(m, BigRational::one());
        f
    }

    pub fn xi(k: usize) -> Self {
        Self::variable(Basis::Xi, k)
    }

    pub fn a(t: usize) -> Self {
        Self::variable(Basis::A, t)
    }

    /// `ξ₁^{α₁} ξ₂^{α₂} ⋯`.
    pub fn xi_monomial(alpha: &[usize]) -> Self {
        let mut f = Self::zero(Basis::Xi);
        f.add_term(trim(alpha.iter().map(|&e| e as u32).collect()), BigRational::one());
        f
    }

    /// Builds a function from `(exponent vector, coefficient)` pairs.
    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Self {
        let mut f = Self::zero(basis);
        for (m, c) in terms {
            f.add_term(trim(m), c);
        }
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Non-zero coefficients keyed by exponent vector.
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant, if the function is one.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.basis, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(BigRational::one(), self.basis), |acc, _| &acc * self)
    }

    /// The same function written in the other basis, using
    /// `ξ_k = Σ_{t | k} t·a_t` and `a_t = (1/t) Σ_{d | t} μ(t/d) ξ_d`.
    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let image = |k: usize| -> ClassFunction {
            let mut f = Self::zero(basis);
            for d in divisors(k as u64) {
                let (var, c) = match basis {
                    Basis::A => (d as usize, BigRational::from_integer(d.into())),
                    Basis::Xi => (
                        d as usize,
                        BigRational::new(mobius(k as u64 / d).into(), BigInt::from(k)),
                    ),
                };
                f = &f + &Self::variable(basis, var).scale(&c);
            }
            f
        };
        let mut out = Self::zero(basis);
        for (m, c) in &self.terms {
            let mut product = Self::constant(c.clone(), basis);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    product = &product * &image(i + 1).pow(e);
                }
            }
            out = &out + &product;
        }
        out
    }

    /// Value on a permutation with `cycle_counts[t − 1]` cycles of length `t`.
    pub fn evaluate(&self, cycle_counts: &[usize]) -> BigRational {
        let f = self.to_basis(Basis::A);
        f.terms
            .iter()
            .map(|(m, c)| {
                let value: BigInt = m
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| num_traits::pow(BigInt::from(cycle_counts.get(i).copied().unwrap_or(0)), e as usize))
                    .product();
                c * BigRational::from_integer(value)
            })
            .sum()
    }

    /// Largest `Σ t·b_t` over the monomials `∏ a_t^{b_t}`: from `S_N` with
    /// `N` at least this, inner products with `1` have their stable value.
    pub fn weight(&self) -> usize {
        self.to_basis(Basis::A)
            .terms
            .keys()
            .map(|m| m.iter().enumerate().map(|(i, &e)| (i + 1) * e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Total-degree coefficients after substituting `N` for every variable:
    /// entry `d` collects the monomials of degree `d`.
    pub fn degree_profile(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::new();
        for (m, c) in &self.terms {
            let d: usize = m.iter().map(|&e| e as usize).sum();
            if out.len() <= d {
                out.resize(d + 1, BigRational::zero());
            }
            out[d] += c;
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Parses the expression grammar: atoms `xi<k>` and `a<t>`, integer
    /// literals, `+ - * / ^` and parentheses. Division is by constants only.
    /// The result is in the `a` basis when only `a` atoms occur, otherwise
    /// in the `ξ` basis.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
            saw_xi: false,
            saw_a: false,
        };
        let f = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(Error::parse(p.pos + 1, format!("unexpected '{}'", p.chars[p.pos])));
        }
        let basis = if p.saw_a && !p.saw_xi { Basis::A } else { Basis::Xi };
        Ok(f.to_basis(basis))
    }
}

fn combine(lhs: &ClassFunction, rhs: &ClassFunction, sign: i64) -> ClassFunction {
    let rhs = rhs.to_basis(lhs.basis);
    let mut out = lhs.clone();
    let s = BigRational::from_integer(sign.into());
    for (m, c) in rhs.terms {
        out.add_term(m, c * &s);
    }
    out
}

impl Add for &ClassFunction {
    type Output = ClassFunction;

    fn add(self, rhs: &ClassFunction) -> ClassFunction {
        combine(self, rhs, 1)
    }
}

impl Sub for &ClassFunction {
    type Output = ClassFunction;

    fn sub(self, rhs: &ClassFunction) -> ClassFunction {
        combine(self, rhs, -1)
    }
}

impl Neg for &ClassFunction {
    type Output = ClassFunction;

    fn neg(self) -> ClassFunction {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &ClassFunction {
    type Output = ClassFunction;

    fn mul(self, rhs: &ClassFunction) -> ClassFunction {
        let rhs = rhs.to_basis(self.basis);
        let mut out = ClassFunction::zero(self.basis);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(multiply_monomials(m1, m2), c1 * c2);
            }
        }
        out
    }
}

/// Terms by decreasing weight `Σ i·eᵢ`, e.g. `1/2*xi1^2 + 1/2*xi2 - 2*xi1`; the
/// output parses back to the same function.
impl fmt::Display for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigRational)> = self.terms.iter().collect();
        let weight = |m: &Monomial| -> u32 { m.iter().enumerate().map(|(i, &e)| (i as u32 + 1) * e).sum() };
        terms.sort_by(|(a, _), (b, _)| weight(b).cmp(&weight(a)).then_with(|| b.cmp(a)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let sym = format!("{}{}", self.basis.symbol(), v + 1);
                    if e == 1 {
                        sym
                    } else {
                        format!("{sym}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    saw_xi: bool,
    saw_a: bool,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos + 1, message))
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ASCII digits"))
    }

    fn expr(&mut self) -> Result<ClassFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ClassFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let divisor = self.unary()?;
                    match divisor.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return Err(Error::parse(at + 1, "division by zero")),
                        None => return Err(Error::parse(at + 1, "division by a non-constant")),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ClassFunction> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            let e = e.to_u32().filter(|&e| e <= 64);
            return match e {
                Some(e) => Ok(base.pow(e)),
                None => self.error("exponent too large"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ClassFunction> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(ClassFunction::constant(BigRational::from_integer(n), Basis::Xi))
            }
            Some('x') => {
                if self.chars.get(self.pos + 1) != Some(&'i') {
                    return self.error("expected 'xi<k>'");
                }
                self.pos += 2;
                self.variable(Basis::Xi)
            }
            Some('a') => {
                self.pos += 1;
                self.variable(Basis::A)
            }
            Some(c) => self.error(format!("unexpected '{c}'")),
            None => self.error("unexpected end of input"),
        }
    }

    fn variable(&mut self, basis: Basis) -> Result<ClassFunction> {
        let k = self.number()?;
        match k.to_usize().filter(|&k| (1..=1000).contains(&k)) {
            Some(k) => {
                match basis {
                    Basis::Xi => self.saw_xi = true,
                    Basis::A => self.saw_a = true,
                }
                Ok(ClassFunction::variable(basis, k))
            }
            None => self.error("variable index must be between 1 and 1000"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn basis_changes() {
        let xi2 = ClassFunction::xi(2);
        assert_eq!(xi2.to_basis(Basis::A), &ClassFunction::a(1) + &ClassFunction::a(2).scale(&q(2, 1)));
        let a2 = ClassFunction::a(2).to_basis(Basis::Xi);
        assert_eq!(a2, (&ClassFunction::xi(2) - &ClassFunction::xi(1)).scale(&q(1, 2)));
        let f = ClassFunction::xi_monomial(&[1, 1]);
        assert_eq!(f.to_basis(Basis::A).to_basis(Basis::Xi), f);
    }

    #[test]
    fn evaluation_on_cycle_types() {
        // ξ₂ on a transposition in S₃: cycle type (2,1).
        assert_eq!(ClassFunction::xi(2).evaluate(&[1, 1]), q(3, 1));
        assert_eq!(ClassFunction::a(2).evaluate(&[0, 2]), q(2, 1));
        assert_eq!(ClassFunction::xi(1).evaluate(&[5]), q(5, 1));
    }

    #[test]
    fn parse_and_print() {
        let f = ClassFunction::parse("(xi1^2 + xi2)/2 - 2*xi1").unwrap();
        assert_eq!(f.to_string(), "1/2*xi1^2 + 1/2*xi2 - 2*xi1");
        assert_eq!(ClassFunction::parse(&f.to_string()).unwrap(), f);
        let g = ClassFunction::parse("(a1-1)*(a1-2)/2 - a2").unwrap();
        assert_eq!(g.basis(), Basis::A);
        assert_eq!(ClassFunction::parse("-3").unwrap().as_constant(), Some(q(-3, 1)));
        assert!(matches!(ClassFunction::parse("xi1 +"), Err(Error::Parse { .. })));
        assert!(matches!(ClassFunction::parse("xi1 / xi2"), Err(Error::Parse { .. })));
        assert!(matches!(ClassFunction::parse("x1"), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(ClassFunction::parse("xi0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn weights_and_degrees() {
        assert_eq!(ClassFunction::xi_monomial(&[1, 1]).weight(), 3);
        assert_eq!(ClassFunction::one().weight(), 0);
        let f = ClassFunction::parse("xi1^2 + xi2 - 4*xi1").unwrap();
        assert_eq!(f.degree_profile(), vec![q(0, 1), q(-3, 1), q(1, 1)]);
    }
}
