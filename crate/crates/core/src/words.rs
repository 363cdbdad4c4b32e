//! Words in a free group of finite rank.
//!
//! A [`Word`] is always freely reduced. A [`CyclicWord`] is a cyclically
//! reduced word stored in a canonical rotation, so that two cyclic words are
//! equal exactly when they represent the same conjugacy class.
//!
//! Text form: lowercase letters are generators and uppercase letters their
//! inverses, `^k` raises the preceding letter or parenthesised group to the
//! integer power `k`, whitespace is ignored and `1` denotes the identity.
//! For rank at most three the generators are conventionally named `x`, `y`,
//! `z`; otherwise (and whenever a word uses letters outside `x`, `y`, `z`)
//! they are `a`, `b`, `c`, … in order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Upper bound on the length of a word produced by the parser.
const MAX_PARSED_LETTERS: usize = 1 << 20;

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    /// The letter cancelling this one.
    pub const fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the fixed total order `a < A < b < B < …`.
    pub const fn key(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    /// Inverse of [`Letter::key`].
    pub const fn from_key(key: usize) -> Self {
        Letter {
            generator: key / 2,
            inverse: key % 2 == 1,
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Naming scheme for generators in text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// `a, b, c, …` for generators `0, 1, 2, …`.
    Abc,
    /// `x, y, z` for generators `0, 1, 2`; only usable up to rank three.
    Xyz,
}

impl Alphabet {
    /// The alphabet used when printing words of the given rank.
    pub fn for_rank(rank: usize) -> Self {
        if rank <= 3 {
            Alphabet::Xyz
        } else {
            Alphabet::Abc
        }
    }

    /// The alphabet a piece of text is written in: `Xyz` when every letter
    /// is one of `x, y, z` (in either case), `Abc` otherwise.
    pub fn detect(text: &str) -> Self {
        let all_xyz = text
            .chars()
            .filter(|c| c.is_ascii_alphabetic())
            .all(|c| matches!(c.to_ascii_lowercase(), 'x' | 'y' | 'z'));
        if all_xyz {
            Alphabet::Xyz
        } else {
            Alphabet::Abc
        }
    }

    fn index(self, lower: char) -> usize {
        match self {
            Alphabet::Abc => (lower as u8 - b'a') as usize,
            Alphabet::Xyz => (lower as u8 - b'x') as usize,
        }
    }

    fn name(self, generator: usize) -> char {
        match self {
            Alphabet::Xyz if generator < 3 => (b'x' + generator as u8) as char,
            _ if generator < 26 => (b'a' + generator as u8) as char,
            _ => '?',
        }
    }
}

/// A freely reduced word over a basis of rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Group operations exposed through [`word_algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordOp {
    /// Product of all operands, left to right.
    Multiply,
    /// Inverse of the single operand.
    Invert,
    /// Integer power of the single operand.
    Power(i64),
}

/// Applies a group operation to words of a common rank.
pub fn word_algebra(op: WordOp, operands: &[Word]) -> Result<Word> {
    let first = operands
        .first()
        .ok_or_else(|| Error::invalid("word operation needs at least one operand"))?;
    match op {
        WordOp::Multiply => operands[1..]
            .iter()
            .try_fold(first.clone(), |acc, w| acc.multiply(w)),
        WordOp::Invert | WordOp::Power(_) if operands.len() != 1 => {
            Err(Error::invalid("inversion and powers take exactly one operand"))
        }
        WordOp::Invert => Ok(first.inverse()),
        WordOp::Power(m) => Ok(first.pow(m)),
    }
}

fn push_reduced(out: &mut Vec<Letter>, letter: Letter) {
    if out.last() == Some(&letter.inv()) {
        out.pop();
    } else {
        out.push(letter);
    }
}

impl Word {
    /// The identity element.
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The basis element with index `generator`.
    pub fn generator(rank: usize, generator: usize) -> Result<Self> {
        Word::new(rank, vec![Letter::new(generator, false)])
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("rank must be positive"));
        }
        let mut out = Vec::new();
        for letter in letters {
            if letter.generator >= rank {
                return Err(Error::invalid(format!(
                    "generator index {} is outside rank {}",
                    letter.generator, rank
                )));
            }
            push_reduced(&mut out, letter);
        }
        Ok(Word { rank, letters: out })
    }

    /// Parses the text grammar described in the module documentation.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("rank must be positive"));
        }
        let alphabet = Alphabet::detect(text);
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        let mut parser = Parser {
            chars: &chars,
            pos: 0,
            rank,
            alphabet,
            end_column: text.chars().count() + 1,
        };
        let letters = parser.sequence(0)?;
        if let Some(&(column, c)) = chars.get(parser.pos) {
            return Err(Error::parse(column, format!("unexpected '{c}'")));
        }
        Ok(Word { rank, letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "rank mismatch: {} vs {}",
                self.rank, other.rank
            )))
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `self^m` for any integer `m`.
    pub fn pow(&self, m: i64) -> Word {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * m.unsigned_abs() as usize);
        for _ in 0..m.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut letters, l);
            }
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// Splits `self = conjugator · c · conjugator⁻¹` with `c` cyclically
    /// reduced; `c` is returned in canonical rotation.
    pub fn cyclic_reduce(&self) -> Result<(CyclicWord, Word)> {
        if self.is_identity() {
            return Err(Error::invalid("the identity has no cyclic reduction"));
        }
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inv() {
            k += 1;
        }
        let core = &self.letters[k..n - k];
        let shift = least_rotation(core);
        let mut rotated = core[shift..].to_vec();
        rotated.extend_from_slice(&core[..shift]);
        // core = p·q and the canonical rotation is q·p = p⁻¹·core·p.
        let conjugator = Word::new(
            self.rank,
            self.letters[..k].iter().chain(&core[..shift]).copied(),
        )?;
        Ok((
            CyclicWord {
                rank: self.rank,
                letters: rotated,
            },
            conjugator,
        ))
    }

    /// Returns `(u, d)` with `self` conjugate to `u^d`, `u` not a proper
    /// power and `d` maximal. `u` is cyclically reduced and canonical.
    pub fn max_root(&self) -> Result<(Word, usize)> {
        let (cyclic, _) = self.cyclic_reduce()?;
        let (root, d) = cyclic.max_root();
        Ok((root.to_word(), d))
    }

    /// Conjugacy test by comparing canonical cyclic reductions.
    pub fn is_conjugate_rotation(&self, other: &Word) -> bool {
        if self.rank != other.rank {
            return false;
        }
        match (self.cyclic_reduce(), other.cyclic_reduce()) {
            (Ok((a, _)), Ok((b, _))) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }

    /// Evaluates the word on a tuple of elements of any group given by
    /// `gens`, using `inv` for inverses and `mul` for products.
    pub fn evaluate<T: Clone>(
        &self,
        identity: T,
        gens: &[T],
        inverses: &[T],
        mut mul: impl FnMut(&T, &T) -> T,
    ) -> T {
        self.letters.iter().fold(identity, |acc, l| {
            let g = if l.inverse {
                &inverses[l.generator]
            } else {
                &gens[l.generator]
            };
            mul(&acc, g)
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.rank, &self.letters)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, rank: usize, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return f.write_str("1");
    }
    let alphabet = Alphabet::for_rank(rank);
    for l in letters {
        let c = alphabet.name(l.generator);
        let c = if l.inverse { c.to_ascii_uppercase() } else { c };
        write!(f, "{c}")?;
    }
    Ok(())
}

struct Parser<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
    rank: usize,
    alphabet: Alphabet,
    end_column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.peek().map_or(self.end_column, |(c, _)| c)
    }

    fn sequence(&mut self, depth: usize) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        while let Some((column, c)) = self.peek() {
            let block = match c {
                ')' if depth > 0 => break,
                '(' => {
                    self.pos += 1;
                    let inner = self.sequence(depth + 1)?;
                    match self.peek() {
                        Some((_, ')')) => self.pos += 1,
                        _ => return Err(Error::parse(self.column(), "expected ')'")),
                    }
                    inner
                }
                '1' => {
                    self.pos += 1;
                    Vec::new()
                }
                c if c.is_ascii_alphabetic() => {
                    self.pos += 1;
                    let generator = self.alphabet.index(c.to_ascii_lowercase());
                    if generator >= self.rank {
                        return Err(Error::parse(
                            column,
                            format!("generator '{c}' is outside rank {}", self.rank),
                        ));
                    }
                    vec![Letter::new(generator, c.is_ascii_uppercase())]
                }
                other => return Err(Error::parse(column, format!("unknown symbol '{other}'"))),
            };
            let exponent = self.exponent()?;
            let block = Word {
                rank: self.rank,
                letters: block,
            }
            .pow(exponent);
            for &l in block.letters() {
                push_reduced(&mut out, l);
            }
            if out.len() > MAX_PARSED_LETTERS {
                return Err(Error::parse(column, "word is too long"));
            }
        }
        Ok(out)
    }

    fn exponent(&mut self) -> Result<i64> {
        match self.peek() {
            Some((_, '^')) => self.pos += 1,
            _ => return Ok(1),
        }
        let start = self.column();
        let mut text = String::new();
        if let Some((_, s @ ('-' | '+'))) = self.peek() {
            text.push(s);
            self.pos += 1;
        }
        while let Some((_, d)) = self.peek().filter(|(_, d)| d.is_ascii_digit()) {
            text.push(d);
            self.pos += 1;
        }
        let value: i64 = text
            .parse()
            .map_err(|_| Error::parse(start, "malformed exponent"))?;
        if value.unsigned_abs() > MAX_PARSED_LETTERS as u64 {
            return Err(Error::parse(start, "exponent is too large"));
        }
        Ok(value)
    }
}

/// A cyclically reduced word in canonical (lexicographically least) rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    /// The cyclic reduction of a nontrivial word.
    pub fn from_word(w: &Word) -> Result<Self> {
        Ok(w.cyclic_reduce()?.0)
    }

    /// Parses a word and cyclically reduces it.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        Self::from_word(&Word::parse(text, rank)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The cyclic length `|w|_c`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.clone(),
        }
    }

    /// The `d`-th power, again in canonical rotation.
    pub fn pow(&self, d: usize) -> CyclicWord {
        // A power of a least rotation is the least rotation of the power.
        CyclicWord {
            rank: self.rank,
            letters: self.letters.repeat(d),
        }
    }

    /// Primitive period of the cyclic word: returns the root and exponent.
    pub fn max_root(&self) -> (CyclicWord, usize) {
        let n = self.letters.len();
        let failure = prefix_function(&self.letters);
        let period = n - failure[n - 1];
        if n % period == 0 {
            let root = CyclicWord {
                rank: self.rank,
                letters: self.letters[..period].to_vec(),
            };
            (root, n / period)
        } else {
            (self.clone(), 1)
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.rank, &self.letters)
    }
}

/// Knuth–Morris–Pratt failure function.
fn prefix_function<T: PartialEq>(s: &[T]) -> Vec<usize> {
    let mut pi = vec![0; s.len()];
    for i in 1..s.len() {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Start index of the lexicographically least rotation (two-pointer method).
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => {
                k += 1;
                continue;
            }
            Ordering::Greater => i += k + 1,
            Ordering::Less => j += k + 1,
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Closed-form number of cyclically reduced words of length `t` in rank `r`:
/// `(2r−1)^t + r + (−1)^t (r−1)` for `t ≥ 1`.
pub fn cyclically_reduced_count(r: usize, t: usize) -> u128 {
    let base = (2 * r as u128 - 1).pow(t as u32);
    let r = r as u128;
    if t % 2 == 0 {
        base + r + (r - 1)
    } else {
        base + r - (r - 1)
    }
}

/// Every cyclically reduced word of length exactly `t` (not up to rotation),
/// in lexicographic order. Fails when the count exceeds `max_count`.
pub fn enumerate_cyclically_reduced(r: usize, t: usize, max_count: usize) -> Result<Vec<Word>> {
    if r == 0 || t == 0 {
        return Err(Error::invalid("rank and length must be positive"));
    }
    let expected = cyclically_reduced_count(r, t);
    if expected > max_count as u128 {
        return Err(Error::budget("cyclically reduced word count", max_count));
    }
    let mut out = Vec::with_capacity(expected as usize);
    let mut stack = Vec::with_capacity(t);
    fn rec(r: usize, t: usize, stack: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if stack.len() == t {
            if stack[0] != stack[t - 1].inv() {
                out.push(Word {
                    rank: r,
                    letters: stack.clone(),
                });
            }
            return;
        }
        for key in 0..2 * r {
            let l = Letter::from_key(key);
            if stack.last() == Some(&l.inv()) {
                continue;
            }
            stack.push(l);
            rec(r, t, stack, out);
            stack.pop();
        }
    }
    rec(r, t, &mut stack, &mut out);
    Ok(out)
}
