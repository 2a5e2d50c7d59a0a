//! Partitions, Lagrange numbers, Bernoulli numbers and the λ_g constants.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// A non-increasing sequence of positive integers. The empty partition is
/// allowed and is the unique partition of 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorts the input into non-increasing order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// `(part, multiplicity)` pairs in decreasing order of part.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `m(μ)! = Π_i m_i(μ)!`
    pub fn multiplicity_factorial(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (_, m)| acc * factorial(m as u32))
    }

    /// `μ + 1`, every part shifted up by one.
    pub fn shifted(&self) -> Vec<u32> {
        self.parts.iter().map(|p| p + 1).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts whitespace- or comma-separated parts. A lone `"0"`, `"()"` and
    /// the empty string all denote the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned = s.trim().trim_start_matches('(').trim_end_matches(')');
        if cleaned.trim() == "0" {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in cleaned.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let p: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad partition part {tok:?}")))?;
            parts.push(p);
        }
        Partition::new(parts)
    }
}

/// All partitions of `k`, in reverse-lexicographic order:
/// `(4), (3,1), (2,2), (2,1,1), (1,1,1,1)`.
pub fn enumerate_partitions(k: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// `L(μ) = (|μ| + ℓ(μ))! (-1)^ℓ(μ) / (m(μ)! Π_j (j+1)!^{m_j(μ)})`
pub fn lagrange_number(mu: &Partition) -> Rational {
    let len = mu.len() as u32;
    let mut num = factorial(mu.weight() + len);
    if len % 2 == 1 {
        num = -num;
    }
    let den = mu
        .parts()
        .iter()
        .fold(mu.multiplicity_factorial(), |acc, &p| {
            acc * factorial(p + 1)
        });
    Rational::new(num, den)
}

static BERNOULLI: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// Akiyama–Tanigawa table `B_0..=B_n`, with `B_1 = -1/2`.
fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigInt::from(j);
        }
        out.push(row[0].clone());
    }
    // The algorithm produces the B_1 = +1/2 convention.
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// Exact Bernoulli number `B_n`, with the convention `B_1 = -1/2`.
/// Only even indices enter the formulas of this crate, so the `B_1`
/// sign has no downstream effect.
pub fn bernoulli(n: u32) -> Rational {
    let n = n as usize;
    let cache = BERNOULLI.get_or_init(|| Mutex::new(Vec::new()));
    let mut table = cache.lock().unwrap_or_else(|e| e.into_inner());
    if table.len() <= n {
        *table = bernoulli_table((2 * n).max(16));
    }
    table[n].clone()
}

/// `b_g = (2^{2g-1} - 1)/2^{2g-1} · |B_{2g}|/(2g)!`, the λ_g constant.
pub fn lambda_g_constant(g: u32) -> Result<Rational> {
    if g == 0 {
        return Err(Error::GenusOutOfRange { got: g, min: 1 });
    }
    Ok(lambda_g_unchecked(g))
}

pub(crate) fn lambda_g_unchecked(g: u32) -> Rational {
    let pow = BigInt::one() << (2 * g - 1);
    let ratio = Rational::new(&pow - 1, pow);
    ratio * bernoulli(2 * g).abs() / factorial(2 * g)
}

/// `ζ(1 - k) = -B_k / k` for positive even `k`.
pub fn zeta_at_negative(k: u32) -> Result<Rational> {
    if k == 0 || k.is_odd() {
        return Err(Error::InvalidArgument(format!(
            "zeta(1-k) is only provided for positive even k, got {k}"
        )));
    }
    Ok(-bernoulli(k) / BigInt::from(k))
}

/// `Σ_{k=1}^n 1/k`
pub fn harmonic(n: u32) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, k| {
        acc + Rational::new(BigInt::one(), BigInt::from(k))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn parts(v: &[Partition]) -> Vec<Vec<u32>> {
        v.iter().map(|p| p.parts().to_vec()).collect()
    }

    /// Euler's pentagonal recurrence, independent of the enumerator.
    fn partition_count(n: usize) -> Vec<u64> {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut acc = 0i64;
            for k in 1.. {
                let k = k as i64;
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                acc += sign * p[m - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= m {
                    acc += sign * p[m - g2];
                }
            }
            p[m] = acc;
        }
        p.into_iter().map(|x| x as u64).collect()
    }

    /// `Σ_{k=0}^{n} C(n+1,k) B_k = 0`, solved for `B_n`.
    fn bernoulli_by_recurrence(n: u32) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![int(1)];
        for m in 1..=n {
            let s = (0..m).fold(Rational::zero(), |acc, k| {
                acc + Rational::from_integer(binomial(m + 1, k)) * &b[k as usize]
            });
            b.push(-s / BigInt::from(m + 1));
        }
        b
    }

    #[test]
    fn small_partitions() {
        assert_eq!(parts(&enumerate_partitions(0)), vec![Vec::<u32>::new()]);
        assert_eq!(parts(&enumerate_partitions(2)), vec![vec![2], vec![1, 1]]);
        assert_eq!(
            parts(&enumerate_partitions(4)),
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn partition_counts_match_pentagonal_recurrence() {
        let p = partition_count(20);
        for k in 0..=20u32 {
            let all = enumerate_partitions(k);
            assert_eq!(all.len() as u64, p[k as usize], "p({k})");
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
            assert!(all.iter().all(|mu| mu.weight() == k));
        }
    }

    #[test]
    fn lagrange_numbers() {
        assert_eq!(lagrange_number(&Partition::empty()), int(1));
        assert_eq!(lagrange_number(&Partition::new(vec![1]).unwrap()), int(-1));
        assert_eq!(
            lagrange_number(&Partition::new(vec![1, 1]).unwrap()),
            int(3)
        );
        // 3!·(-1)/(1!·3!) for (2)
        assert_eq!(lagrange_number(&Partition::new(vec![2]).unwrap()), int(-1));
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), frac(-1, 2));
        assert_eq!(bernoulli(2), frac(1, 6));
        assert_eq!(bernoulli(4), frac(-1, 30));
        assert_eq!(bernoulli(12), frac(-691, 2730));
        let oracle = bernoulli_by_recurrence(40);
        for n in 0..=40 {
            assert_eq!(bernoulli(n), oracle[n as usize], "B_{n}");
        }
        for n in (3..60).step_by(2) {
            assert!(bernoulli(n).is_zero());
        }
    }

    #[test]
    fn bernoulli_cache_is_pure() {
        let first = bernoulli(30);
        let _ = bernoulli(100);
        assert_eq!(bernoulli(30), first);
        assert_eq!(bernoulli(2), frac(1, 6));
    }

    #[test]
    fn bernoulli_concurrent_reads() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || bernoulli(10 + 4 * t)))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (t, b) in got.into_iter().enumerate() {
            assert_eq!(b, bernoulli(10 + 4 * t as u32));
        }
    }

    #[test]
    fn lambda_constants() {
        assert_eq!(lambda_g_constant(1).unwrap(), frac(1, 24));
        assert_eq!(lambda_g_constant(2).unwrap(), frac(7, 5760));
        assert_eq!(lambda_g_constant(3).unwrap(), frac(31, 967680));
        assert!(lambda_g_constant(0).is_err());
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_at_negative(2).unwrap(), frac(-1, 12));
        assert_eq!(zeta_at_negative(4).unwrap(), frac(1, 120));
        assert_eq!(zeta_at_negative(6).unwrap(), frac(-1, 252));
        assert!(zeta_at_negative(3).is_err());
        assert!(zeta_at_negative(0).is_err());
    }

    #[test]
    fn partition_parsing() {
        let p: Partition = "1 1".parse().unwrap();
        assert_eq!(p.parts(), &[1, 1]);
        let p: Partition = "0".parse().unwrap();
        assert!(p.is_empty());
        let p: Partition = "(1,3)".parse().unwrap();
        assert_eq!(p.parts(), &[3, 1]);
        assert!("a".parse::<Partition>().is_err());
    }

    proptest! {
        #[test]
        fn rationals_stay_reduced(n in 0u32..40) {
            let b = bernoulli(n);
            prop_assert!(b.numer().gcd(b.denom()).is_one());
            prop_assert!(b.denom().is_positive());
            if n >= 1 {
                let c = lambda_g_unchecked(n);
                prop_assert!(c.numer().gcd(c.denom()).is_one());
            }
        }
    }
}
