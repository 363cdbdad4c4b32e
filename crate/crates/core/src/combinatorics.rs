//! Small exact combinatorial helpers shared by the counting modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Unsigned Stirling numbers of the first kind `c(n, k)`: permutations of
/// `n` points with exactly `k` cycles.
pub fn stirling1_unsigned(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for m in 0..n {
        let mut next = vec![BigInt::zero(); m + 2];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] += c * BigInt::from(m);
        }
        row = next;
    }
    row[k].clone()
}

/// Stirling numbers of the second kind `S(n, k)`: partitions of `n` points
/// into `k` blocks.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for m in 0..n {
        let mut next = vec![BigInt::zero(); m + 2];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] += c * BigInt::from(j);
        }
        row = next;
    }
    row[k].clone()
}

/// Bell numbers: all set partitions of `n` points.
pub fn bell(n: usize) -> BigInt {
    (0..=n).map(|k| stirling2(n, k)).sum()
}

/// `(n)_k = n(n−1)⋯(n−k+1)`.
pub fn falling(n: i64, k: usize) -> BigInt {
    (0..k as i64).map(|i| BigInt::from(n - i)).product()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        falling(n as i64, k) / factorial(k)
    }
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The number-theoretic Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// Integer partitions of `n` as non-increasing part lists, in reverse
/// lexicographic order (`[n]` first).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` with every set partition of `0..n` as a restricted growth
/// string (`blocks[i]` is the block of point `i`, blocks numbered in order of
/// first appearance).
pub fn for_each_set_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn go(i: usize, used: usize, rgs: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if i == rgs.len() {
            f(rgs);
            return;
        }
        for b in 0..=used {
            rgs[i] = b;
            go(i + 1, used.max(b + 1), rgs, f);
        }
    }
    let mut rgs = vec![0; n];
    go(0, 0, &mut rgs, &mut f);
}
