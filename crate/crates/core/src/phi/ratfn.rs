//! Rational functions of `N` whose denominators split into integer linear
//! factors, and their expansions at `N → ∞`.
//!
//! Every function produced by the lift-counting formulas is a signed sum of
//! ratios of falling factorials, so its denominator is a product of factors
//! `N − k` with `k ≥ 0`. Keeping the denominator factored makes reduction
//! exact and cheap: a factor cancels precisely when the numerator vanishes at
//! `k`. With a monic denominator the integer numerator is then coprime to it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};

/// `numerator(N) / ∏ₖ (N − k)^{mₖ}` in lowest terms, valid for `N ≥ n_min`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFnOfN {
    num: Poly,
    poles: BTreeMap<u64, u32>,
    n_min: u64,
}

impl RationalFnOfN {
    /// Builds and reduces `num / ∏ (N − k)^m`; `n_min` is raised to clear
    /// the remaining poles.
    pub fn new(num: Poly, poles: BTreeMap<u64, u32>, n_min: u64) -> Self {
        let mut f = RationalFnOfN { num, poles, n_min };
        f.reduce();
        f.n_min = f.n_min.max(f.pole_threshold());
        f
    }

    pub fn zero() -> Self {
        Self::constant(BigInt::zero())
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        RationalFnOfN {
            num: Poly::constant(c.into()),
            poles: BTreeMap::new(),
            n_min: 1,
        }
    }

    /// `c · ∏ₖ (N − k)^{eₖ}` for signed exponents.
    pub fn linear_product(c: impl Into<BigInt>, exponents: &BTreeMap<u64, i64>) -> Self {
        let mut num = Poly::constant(c.into());
        let mut poles = BTreeMap::new();
        for (&k, &e) in exponents {
            match e.cmp(&0) {
                std::cmp::Ordering::Greater => num = &num * &Poly::linear(BigInt::from(k)).pow(e as u32),
                std::cmp::Ordering::Less => {
                    poles.insert(k, (-e) as u32);
                }
                std::cmp::Ordering::Equal => {}
            }
        }
        Self::new(num, poles, 1)
    }

    /// `∏ (N)_{a} / ∏ (N)_{b}` over the given falling-factorial lengths.
    pub fn falling_ratio(numerator: &[usize], denominator: &[usize]) -> Self {
        Self::linear_product(1, &falling_exponents(numerator, denominator))
    }

    /// `N^e` for any integer `e`.
    pub fn power_of_n(e: i64) -> Self {
        Self::linear_product(1, &BTreeMap::from([(0, e)]))
    }

    /// Reconstructs a function from an expanded denominator, which must split
    /// into factors `N − k` with integers `k ≥ 0` and be monic.
    pub fn from_num_den(num: Poly, den: Poly, n_min: u64) -> Result<Self> {
        let Some(degree) = den.degree() else {
            return Err(Error::invalid("zero denominator"));
        };
        let mut rest = den;
        let mut poles = BTreeMap::new();
        let mut k = 0u64;
        while rest.degree() != Some(0) {
            let (q, r) = rest.div_linear(&BigInt::from(k));
            if r.is_zero() {
                *poles.entry(k).or_insert(0) += 1;
                rest = q;
                continue;
            }
            k += 1;
            // Roots divide the constant term once the factor N is removed.
            if BigInt::from(k) > rest.coeff(0).abs() || poles.values().sum::<u32>() as usize > degree {
                return Err(Error::invalid("denominator does not split into factors N - k, k >= 0"));
            }
        }
        let unit = rest.coeff(0);
        if !unit.is_one() {
            return Err(Error::invalid("denominator must be monic"));
        }
        Ok(Self::new(num, poles, n_min))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// The expanded (monic) denominator.
    pub fn denominator(&self) -> Poly {
        self.poles.iter().fold(Poly::one(), |acc, (&k, &m)| &acc * &Poly::linear(BigInt::from(k)).pow(m))
    }

    /// Denominator factors: `k ↦` multiplicity of `N − k`.
    pub fn poles(&self) -> &BTreeMap<u64, u32> {
        &self.poles
    }

    pub fn n_min(&self) -> u64 {
        self.n_min
    }

    pub fn with_n_min(mut self, n_min: u64) -> Self {
        self.n_min = n_min.max(self.pole_threshold());
        self
    }

    /// One more than the largest pole (at least 1).
    pub fn pole_threshold(&self) -> u64 {
        self.poles.keys().next_back().map_or(1, |&k| k + 1).max(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the function is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }

    /// Value at `N`, or `None` at a pole. Ignores `n_min`.
    pub fn eval(&self, n: u64) -> Option<BigRational> {
        let x = BigInt::from(n);
        let den = self.poles.iter().try_fold(BigInt::one(), |acc, (&k, &m)| {
            let f = &x - BigInt::from(k);
            (!f.is_zero()).then(|| acc * num_traits::pow(f, m as usize))
        })?;
        Some(BigRational::new(self.num.eval(&x), den))
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.poles.clear();
            return;
        }
        let keys: Vec<u64> = self.poles.keys().copied().collect();
        for k in keys {
            let kk = BigInt::from(k);
            let m = self.poles.get_mut(&k).unwrap();
            while *m > 0 {
                let (q, r) = self.num.div_linear(&kk);
                if !r.is_zero() {
                    break;
                }
                self.num = q;
                *m -= 1;
            }
            if *m == 0 {
                self.poles.remove(&k);
            }
        }
    }

    /// Sum of many functions over a common denominator, reduced once.
    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a RationalFnOfN>) -> Self {
        let terms: Vec<&RationalFnOfN> = terms.into_iter().collect();
        let mut common: BTreeMap<u64, u32> = BTreeMap::new();
        for t in &terms {
            for (&k, &m) in &t.poles {
                let e = common.entry(k).or_insert(0);
                *e = (*e).max(m);
            }
        }
        let mut num = Poly::zero();
        let mut n_min = 1;
        for t in &terms {
            let mut part = t.num.clone();
            for (&k, &m) in &common {
                let missing = m - t.poles.get(&k).copied().unwrap_or(0);
                if missing > 0 {
                    part = &part * &Poly::linear(BigInt::from(k)).pow(missing);
                }
            }
            num = &num + &part;
            n_min = n_min.max(t.n_min);
        }
        Self::new(num, common, n_min)
    }

    /// Quotient and remainder of the numerator by the denominator; the
    /// remainder has lower degree than the denominator.
    pub fn split(&self) -> (Poly, Poly) {
        let den = self.denominator();
        let d = den.degree().unwrap_or(0);
        let mut rem: Vec<BigInt> = self.num.coeffs().to_vec();
        if rem.len() <= d {
            return (Poly::zero(), self.num.clone());
        }
        let mut quotient = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quotient[i - d] = c.clone();
            for (j, dj) in den.coeffs().iter().enumerate() {
                rem[i - d + j] -= &c * dj;
            }
        }
        rem.truncate(d);
        (Poly::new(quotient), Poly::new(rem))
    }

    /// Expansion `Σ cᵢ N^{e₀−i}` at `N → ∞`, with `order` coefficients.
    pub fn laurent(&self, order: usize) -> LaurentSeries {
        if self.num.is_zero() {
            return LaurentSeries::zero(0, order);
        }
        let den = self.denominator();
        let a = self.num.degree().unwrap();
        let b = den.degree().unwrap();
        // In x = 1/N: numerator N^a·ñ(x), denominator N^b·d̃(x) with d̃(0) = 1.
        let n_at = |i: usize| if i <= a { self.num.coeff(a - i) } else { BigInt::zero() };
        let d_at = |i: usize| if i <= b { den.coeff(b - i) } else { BigInt::zero() };
        let mut q: Vec<BigInt> = Vec::with_capacity(order);
        for i in 0..order {
            let mut c = n_at(i);
            for j in 1..=i {
                c -= d_at(j) * &q[i - j];
            }
            q.push(c);
        }
        LaurentSeries {
            e0: a as i64 - b as i64,
            coeffs: q.into_iter().map(BigRational::from_integer).collect(),
        }
    }
}

/// Exponents of `N − k` in `∏ (N)_{a} / ∏ (N)_{b}`.
pub(crate) fn falling_exponents(numerator: &[usize], denominator: &[usize]) -> BTreeMap<u64, i64> {
    let mut exps = BTreeMap::new();
    for (sizes, sign) in [(numerator, 1), (denominator, -1)] {
        for &s in sizes {
            for k in 0..s as u64 {
                *exps.entry(k).or_insert(0) += sign;
            }
        }
    }
    exps.retain(|_, e| *e != 0);
    exps
}

impl Add for &RationalFnOfN {
    type Output = RationalFnOfN;

    fn add(self, rhs: &RationalFnOfN) -> RationalFnOfN {
        RationalFnOfN::sum([self, rhs])
    }
}

impl Neg for &RationalFnOfN {
    type Output = RationalFnOfN;

    fn neg(self) -> RationalFnOfN {
        RationalFnOfN {
            num: -&self.num,
            poles: self.poles.clone(),
            n_min: self.n_min,
        }
    }
}

impl Sub for &RationalFnOfN {
    type Output = RationalFnOfN;

    fn sub(self, rhs: &RationalFnOfN) -> RationalFnOfN {
        RationalFnOfN::sum([self, &-rhs])
    }
}

impl Mul for &RationalFnOfN {
    type Output = RationalFnOfN;

    fn mul(self, rhs: &RationalFnOfN) -> RationalFnOfN {
        let mut poles = self.poles.clone();
        for (&k, &m) in &rhs.poles {
            *poles.entry(k).or_insert(0) += m;
        }
        RationalFnOfN::new(&self.num * &rhs.num, poles, self.n_min.max(rhs.n_min))
    }
}

fn write_factors(f: &mut fmt::Formatter<'_>, poles: &BTreeMap<u64, u32>) -> fmt::Result {
    let factors: Vec<String> = poles
        .iter()
        .map(|(&k, &m)| {
            let base = if k == 0 { "N".to_string() } else { format!("(N-{k})") };
            if m == 1 {
                base
            } else {
                format!("{base}^{m}")
            }
        })
        .collect();
    if factors.len() == 1 {
        write!(f, "{}", factors[0])
    } else {
        write!(f, "({})", factors.join("*"))
    }
}

/// `q + c*(r)/(N*(N-1)*…)`: polynomial part, then the proper fraction with
/// its integer content pulled out.
impl fmt::Display for RationalFnOfN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poles.is_empty() {
            return write!(f, "{}", self.num);
        }
        let (q, r) = self.split();
        let content = r.coeffs().iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let negative = r.leading().is_some_and(|c| c.is_negative());
        let content = if negative { -content } else { content };
        let primitive = r.map(|c| c / &content);
        let magnitude = content.abs();
        if q.is_zero() {
            if content.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{q} {} ", if content.is_negative() { '-' } else { '+' })?;
        }
        let single_term = primitive.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        match (magnitude.is_one(), primitive.degree() == Some(0)) {
            (_, true) => write!(f, "{magnitude}/")?,
            (true, false) if single_term => write!(f, "{primitive}/")?,
            (true, false) => write!(f, "({primitive})/")?,
            (false, false) if single_term => write!(f, "{magnitude}*{primitive}/")?,
            (false, false) => write!(f, "{magnitude}*({primitive})/")?,
        }
        write_factors(f, &self.poles)
    }
}

/// A truncated expansion `Σᵢ cᵢ N^{e₀−i}` at `N → ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub e0: i64,
    pub coeffs: Vec<BigRational>,
}

impl LaurentSeries {
    pub fn zero(e0: i64, order: usize) -> Self {
        LaurentSeries {
            e0,
            coeffs: vec![BigRational::zero(); order],
        }
    }

    /// Number of computed coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Lowest exponent whose coefficient is known.
    fn floor(&self) -> i64 {
        self.e0 - self.coeffs.len() as i64 + 1
    }

    /// Coefficient of `N^e`, or `None` below the truncation.
    pub fn coefficient(&self, e: i64) -> Option<BigRational> {
        if e > self.e0 {
            Some(BigRational::zero())
        } else if e >= self.floor() {
            Some(self.coeffs[(self.e0 - e) as usize].clone())
        } else {
            None
        }
    }

    /// First non-zero term.
    pub fn leading_term(&self) -> Option<(i64, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.e0 - i as i64, c.clone()))
    }

    /// Difference, known down to the higher of the two truncations.
    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        let e0 = self.e0.max(other.e0);
        let floor = self.floor().max(other.floor());
        let coeffs = (floor..=e0)
            .rev()
            .map(|e| self.coefficient(e).unwrap() - other.coefficient(e).unwrap())
            .collect();
        LaurentSeries { e0, coeffs }
    }

    /// Same terms regardless of how many leading zeros either side carries.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        self.sub(other).coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let e = self.e0 - i as i64;
                match e {
                    0 => format!("{c}"),
                    1 => format!("{c}*N"),
                    _ => format!("{c}*N^{e}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{} + O(N^{})", terms.join(" + "), self.floor() - 1)
        }
    }
}
