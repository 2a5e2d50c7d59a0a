//! Truncated multivariate power series over the rationals.
//!
//! A [`TruncatedSeries`] is known exactly for every monomial of total degree
//! at most its `precision`; nothing above that degree is stored. Arithmetic
//! between series of different precision yields the smaller precision, and
//! differentiation lowers the precision by one, so margins are tracked rather
//! than silently lost.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Ordered list of indeterminate names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet(Arc<[String]>);

impl Alphabet {
    pub fn new(names: Vec<String>) -> Self {
        Self(names.into())
    }

    /// `T0, ..., Tn`
    pub fn times(max_index: u32) -> Self {
        Self::new((0..=max_index).map(|i| format!("T{i}")).collect())
    }

    /// `P0, ..., Pn, Q0, ..., Qn`
    pub fn doubled(max_index: u32) -> Self {
        let p = (0..=max_index).map(|i| format!("P{i}"));
        let q = (0..=max_index).map(|i| format!("Q{i}"));
        Self::new(p.chain(q).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

/// Dense exponent vector over an alphabet.
///
/// Ordered by total degree, then by exponents read left to right with the
/// larger exponent first (`P0^2` before `P0 P1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn var(len: usize, i: usize) -> Self {
        let mut m = Self::one(len);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Renders as `P0^2 Q2`; the unit monomial renders as `1`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    alphabet.name(i).to_string()
                } else {
                    format!("{}^{}", alphabet.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    alphabet: Alphabet,
    precision: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TruncatedSeries {
    pub fn zero(alphabet: &Alphabet, precision: u32) -> Self {
        Self {
            alphabet: alphabet.clone(),
            precision,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alphabet: &Alphabet, precision: u32, c: Rational) -> Self {
        let mut s = Self::zero(alphabet, precision);
        s.add_term(Monomial::one(alphabet.len()), c);
        s
    }

    pub fn one(alphabet: &Alphabet, precision: u32) -> Self {
        Self::constant(alphabet, precision, Rational::one())
    }

    pub fn var(alphabet: &Alphabet, precision: u32, i: usize) -> Self {
        let mut s = Self::zero(alphabet, precision);
        s.add_term(Monomial::var(alphabet.len(), i), Rational::one());
        s
    }

    pub fn from_terms(
        alphabet: &Alphabet,
        precision: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut s = Self::zero(alphabet, precision);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Adds `c · m`; terms above the precision are dropped.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.alphabet.len());
        if c.is_zero() || m.degree() > self.precision {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the given exponent vector. Errors when the monomial
    /// lies above the precision, where the coefficient is unknown.
    pub fn coeff(&self, exps: &[u32]) -> Result<Rational> {
        if exps.len() != self.alphabet.len() {
            return Err(Error::InvalidArgument(format!(
                "exponent vector of length {} for an alphabet of {} names",
                exps.len(),
                self.alphabet.len()
            )));
        }
        let m = Monomial(exps.to_vec());
        if m.degree() > self.precision {
            return Err(Error::OutOfTruncation(m.render(&self.alphabet)));
        }
        Ok(self.terms.get(&m).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.alphabet.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Forgets everything above degree `p` (no-op when `p ≥ precision`).
    pub fn truncate(&self, p: u32) -> Self {
        let precision = p.min(self.precision);
        Self {
            alphabet: self.alphabet.clone(),
            precision,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= precision)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.alphabet, self.precision);
        if !c.is_zero() {
            for (m, a) in &self.terms {
                out.terms.insert(m.clone(), a * c);
            }
        }
        out
    }

    /// `∂/∂x_i`; the result is exact to one degree less.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if self.precision == 0 {
            return Err(Error::TruncationMargin {
                needed: 1,
                available: 0,
            });
        }
        let mut out = Self::zero(&self.alphabet, self.precision - 1);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut n = m.clone();
                n.0[i] -= 1;
                out.add_term(n, c * BigInt::from(e));
            }
        }
        Ok(out)
    }

    /// `k`-fold derivative in `x_i`, returned at precision `target`. Requires
    /// `precision ≥ target + k`.
    pub fn partial_n(&self, i: usize, k: u32, target: u32) -> Result<Self> {
        if self.precision < target + k {
            return Err(Error::TruncationMargin {
                needed: target + k,
                available: self.precision,
            });
        }
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.partial(i)?;
        }
        Ok(cur.truncate(target))
    }

    /// Sets the listed variables to zero.
    pub fn vanish(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(&self.alphabet, self.precision);
        for (m, c) in &self.terms {
            if vars.iter().all(|&v| m.0[v] == 0) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Homogeneous components of degree `0..=precision`.
    fn components(&self) -> Vec<Vec<(&Monomial, &Rational)>> {
        let mut out = vec![Vec::new(); self.precision as usize + 1];
        for (m, c) in &self.terms {
            out[m.degree() as usize].push((m, c));
        }
        out
    }

    fn homogeneous(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.alphabet, self.precision);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// `1/f`, by `g_d = -(1/f_0) Σ_{e=1}^{d} f_e g_{d-e}` on homogeneous
    /// components.
    pub fn recip(&self) -> Result<Self> {
        let f0 = self.constant_term();
        if f0.is_zero() {
            return Err(Error::DivisionByZero(
                "reciprocal of a series without constant term".into(),
            ));
        }
        let inv0 = Rational::one() / &f0;
        let f: Vec<Self> = (0..=self.precision).map(|d| self.homogeneous(d)).collect();
        let mut g: Vec<Self> = vec![Self::constant(&self.alphabet, self.precision, inv0.clone())];
        for d in 1..=self.precision as usize {
            let mut acc = Self::zero(&self.alphabet, self.precision);
            for e in 1..=d {
                if !f[e].is_zero() && !g[d - e].is_zero() {
                    acc = &acc + &(&f[e] * &g[d - e]);
                }
            }
            g.push(acc.scale(&-inv0.clone()));
        }
        Ok(g.iter()
            .fold(Self::zero(&self.alphabet, self.precision), |acc, c| {
                &acc + c
            }))
    }

    /// `log f` for `f` with constant term 1, by
    /// `d L_d = d f_d - Σ_{e=1}^{d-1} e L_e f_{d-e}`.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::InvalidArgument(
                "log needs a series with constant term 1".into(),
            ));
        }
        let f: Vec<Self> = (0..=self.precision).map(|d| self.homogeneous(d)).collect();
        let mut l: Vec<Self> = vec![Self::zero(&self.alphabet, self.precision)];
        for d in 1..=self.precision as usize {
            let mut acc = f[d].scale(&Rational::from_integer(BigInt::from(d)));
            for e in 1..d {
                if !l[e].is_zero() && !f[d - e].is_zero() {
                    let t = (&l[e] * &f[d - e]).scale(&Rational::from_integer(BigInt::from(e)));
                    acc = &acc - &t;
                }
            }
            l.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(d))));
        }
        Ok(l.iter()
            .fold(Self::zero(&self.alphabet, self.precision), |acc, c| {
                &acc + c
            }))
    }

    /// `exp f` for `f` without constant term, by
    /// `d E_d = Σ_{e=1}^{d} e f_e E_{d-e}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::InvalidArgument(
                "exp needs a series without constant term".into(),
            ));
        }
        let f: Vec<Self> = (0..=self.precision).map(|d| self.homogeneous(d)).collect();
        let mut e_parts: Vec<Self> = vec![Self::one(&self.alphabet, self.precision)];
        for d in 1..=self.precision as usize {
            let mut acc = Self::zero(&self.alphabet, self.precision);
            for e in 1..=d {
                if !f[e].is_zero() && !e_parts[d - e].is_zero() {
                    let t =
                        (&f[e] * &e_parts[d - e]).scale(&Rational::from_integer(BigInt::from(e)));
                    acc = &acc + &t;
                }
            }
            e_parts.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(d))));
        }
        Ok(e_parts
            .iter()
            .fold(Self::zero(&self.alphabet, self.precision), |acc, c| {
                &acc + c
            }))
    }

    /// `f^e` for any integer `e`; negative powers need an invertible
    /// constant term.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut result = Self::one(&self.alphabet, self.precision);
        let mut sq = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(result)
    }

    /// Re-expresses the series over a larger alphabet; `map[i]` is the
    /// position of this series' `i`-th name in `target`.
    pub fn embed(&self, target: &Alphabet, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.alphabet.len());
        let mut out = Self::zero(target, self.precision);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Maximum degree in the listed variables over all terms.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&v| m.0[v]).sum())
            .max()
            .unwrap_or(0)
    }

    /// Terms whose degree in `vars` equals `d`.
    pub fn part_of_degree_in(&self, vars: &[usize], d: u32) -> Self {
        let mut out = Self::zero(&self.alphabet, self.precision);
        for (m, c) in &self.terms {
            if vars.iter().map(|&v| m.0[v]).sum::<u32>() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(
            self.alphabet, other.alphabet,
            "series over different alphabets"
        );
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")?;
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if m.degree() > 0 {
                write!(f, "*{}", m.render(&self.alphabet).replace(' ', "*"))?;
            }
        }
        write!(f, " + O({})", self.precision + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_compatible(rhs);
        let mut out = self.truncate(rhs.precision);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_compatible(rhs);
        let mut out = self.truncate(rhs.precision);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_compatible(rhs);
        let precision = self.precision.min(rhs.precision);
        let mut out = TruncatedSeries::zero(&self.alphabet, precision);
        let left = self.components();
        let right = rhs.components();
        for (da, a_terms) in left.iter().enumerate() {
            for (db, b_terms) in right.iter().enumerate() {
                if (da + db) as u32 > precision {
                    break;
                }
                for (ma, ca) in a_terms {
                    for (mb, cb) in b_terms {
                        out.add_term(ma.mul(mb), *ca * *cb);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn xy() -> Alphabet {
        Alphabet::new(vec!["x".into(), "y".into()])
    }

    fn geometric(p: u32) -> TruncatedSeries {
        // 1/(1 - x) = Σ x^k
        let a = xy();
        TruncatedSeries::from_terms(
            &a,
            p,
            (0..=p).map(|k| (Monomial::from_exponents(vec![k, 0]), int(1))),
        )
    }

    #[test]
    fn reciprocal_of_geometric() {
        let a = xy();
        let one_minus_x = &TruncatedSeries::one(&a, 6) - &TruncatedSeries::var(&a, 6, 0);
        assert_eq!(one_minus_x.recip().unwrap(), geometric(6));
        assert!(TruncatedSeries::var(&a, 3, 0).recip().is_err());
    }

    #[test]
    fn log_of_one_plus_x() {
        let a = xy();
        let f = &TruncatedSeries::one(&a, 5) + &TruncatedSeries::var(&a, 5, 0);
        let l = f.log().unwrap();
        for k in 1..=5u32 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(l.coeff(&[k, 0]).unwrap(), frac(sign, k as i64));
        }
        assert!(TruncatedSeries::var(&a, 3, 0).log().is_err());
    }

    #[test]
    fn truncation_is_tracked() {
        let a = xy();
        let x = TruncatedSeries::var(&a, 4, 0);
        let x3 = x.pow(3).unwrap();
        assert_eq!(x3.coeff(&[3, 0]).unwrap(), int(1));
        assert!(x3.pow(2).unwrap().is_zero());
        let d = x3.partial(0).unwrap();
        assert_eq!(d.precision(), 3);
        assert_eq!(d.coeff(&[2, 0]).unwrap(), int(3));
        assert!(matches!(d.coeff(&[4, 0]), Err(Error::OutOfTruncation(_))));
        assert!(matches!(
            x3.partial_n(0, 3, 2),
            Err(Error::TruncationMargin {
                needed: 5,
                available: 4
            })
        ));
        assert_eq!((&x + &d).precision(), 3);
    }

    #[test]
    fn monomial_order_and_rendering() {
        let a = Alphabet::doubled(2);
        let m = Monomial::from_exponents(vec![2, 0, 0, 0, 0, 1]);
        assert_eq!(m.render(&a), "P0^2 Q2");
        assert_eq!(Monomial::one(6).render(&a), "1");
        let p0sq = Monomial::from_exponents(vec![2, 0, 0, 0, 0, 0]);
        let p0p1 = Monomial::from_exponents(vec![1, 1, 0, 0, 0, 0]);
        let q0 = Monomial::from_exponents(vec![0, 0, 0, 1, 0, 0]);
        assert!(q0 < p0sq);
        assert!(p0sq < p0p1);
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        let term = (0u32..3, 0u32..3, -6i64..6, 1i64..4);
        prop::collection::vec(term, 0..6).prop_map(|ts| {
            TruncatedSeries::from_terms(
                &xy(),
                4,
                ts.into_iter()
                    .map(|(i, j, n, d)| (Monomial::from_exponents(vec![i, j]), frac(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn truncated_ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            let lhs = (&a * &b).partial(1).unwrap();
            let rhs = &(&a.partial(1).unwrap() * &b) + &(&a * &b.partial(1).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn recip_log_exp_inverses(a in arb_series()) {
            let shifted = &a - &TruncatedSeries::constant(&xy(), 4, a.constant_term());
            let f = &TruncatedSeries::one(&xy(), 4) + &shifted;
            prop_assert_eq!(&f * &f.recip().unwrap(), TruncatedSeries::one(&xy(), 4));
            prop_assert_eq!(f.log().unwrap().exp().unwrap(), f.clone());
            prop_assert_eq!(shifted.exp().unwrap().log().unwrap(), shifted);
        }
    }
}
