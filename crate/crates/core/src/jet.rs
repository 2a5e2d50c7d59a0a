//! Sparse exact polynomials in the jet variables `V1, V2, ...`.
//!
//! `V1` may carry negative exponents; every other variable is polynomial.
//! The derivation [`JetPolynomial::derive`] sends `V_k` to `V_{k+1}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent vector; slot `i` holds the exponent of `V_{i+1}`. Trailing
/// zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct JetMonomial {
    exps: Vec<i32>,
}

impl JetMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `V_k`
    pub fn var(k: u32) -> Self {
        assert!(k >= 1, "jet variables start at V1");
        let mut exps = vec![0; k as usize];
        exps[k as usize - 1] = 1;
        Self { exps }
    }

    /// `V1^e`
    pub fn v1_power(e: i32) -> Self {
        Self::from_vec(vec![e])
    }

    /// Builds a monomial from `(k, e)` pairs. Repeated variables accumulate.
    pub fn from_pairs(pairs: &[(u32, i32)]) -> Result<Self> {
        let mut exps = Vec::new();
        for &(k, e) in pairs {
            if k == 0 {
                return Err(Error::InvalidArgument("jet variables start at V1".into()));
            }
            let idx = k as usize - 1;
            if exps.len() <= idx {
                exps.resize(idx + 1, 0);
            }
            exps[idx] += e;
        }
        if exps.iter().skip(1).any(|&e| e < 0) {
            return Err(Error::InvalidArgument(
                "only V1 may carry a negative exponent".into(),
            ));
        }
        Ok(Self::from_vec(exps))
    }

    fn from_vec(mut exps: Vec<i32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self { exps }
    }

    pub fn exponent(&self, k: u32) -> i32 {
        if k == 0 {
            return 0;
        }
        self.exps.get(k as usize - 1).copied().unwrap_or(0)
    }

    /// `(k, e)` for every variable with nonzero exponent, increasing `k`.
    pub fn factors(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i as u32 + 1, e))
    }

    /// Largest variable index present, 0 for the unit monomial.
    pub fn max_var(&self) -> u32 {
        self.exps.len() as u32
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self, grading: Grading) -> i64 {
        self.factors()
            .map(|(k, e)| grading.weight(k) * e as i64)
            .sum()
    }

    fn with_shift(&self, k: u32, delta: i32) -> Self {
        let mut exps = self.exps.clone();
        let idx = k as usize - 1;
        if exps.len() <= idx {
            exps.resize(idx + 1, 0);
        }
        exps[idx] += delta;
        Self::from_vec(exps)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (slot, e) in exps.iter_mut().zip(&short.exps) {
            *slot += e;
        }
        Self::from_vec(exps)
    }
}

/// Canonical order: compare exponents from the highest variable index
/// downwards, larger exponent first.
impl Ord for JetMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.exps.len().max(other.exps.len());
        for i in (0..n).rev() {
            let a = self.exps.get(i).copied().unwrap_or(0);
            let b = other.exps.get(i).copied().unwrap_or(0);
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for JetMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, e) in self.factors().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "V{k}")?;
            } else {
                write!(f, "V{k}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Weight assigned to `V_k` by the Euler operator and degree functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// `deg V_k = k`
    Index,
    /// `deg V_k = k - 1`
    IndexMinusOne,
}

impl Grading {
    pub fn weight(self, k: u32) -> i64 {
        match self {
            Grading::Index => k as i64,
            Grading::IndexMinusOne => k as i64 - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JetPolynomial {
    terms: BTreeMap<JetMonomial, Rational>,
}

impl JetPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, JetMonomial::one())
    }

    pub fn var(k: u32) -> Self {
        Self::term(Rational::one(), JetMonomial::var(k))
    }

    pub fn term(c: Rational, m: JetMonomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (JetMonomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: JetMonomial, c: Rational) {
        if c.is_zero() {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &JetMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_var(&self) -> u32 {
        self.terms
            .keys()
            .map(JetMonomial::max_var)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &JetMonomial) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Divides by `c · V1^e`.
    pub fn div_v1_term(&self, c: &Rational, e: i32) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero("zero coefficient".into()));
        }
        Ok(self
            .scale(&(Rational::one() / c))
            .mul_monomial(&JetMonomial::v1_power(-e)))
    }

    /// The total derivative `∂ = Σ_{k≥1} V_{k+1} ∂/∂V_k`.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (k, e) in m.factors() {
                let shifted = m.with_shift(k, -1).with_shift(k + 1, 1);
                out.add_term(shifted, c * BigInt::from(e));
            }
        }
        out
    }

    pub fn derive_n(&self, n: u32) -> Self {
        (0..n).fold(self.clone(), |acc, _| acc.derive())
    }

    /// Formal partial derivative in `V_k`.
    pub fn partial(&self, k: u32) -> Self {
        let mut out = Self::zero();
        if k == 0 {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.exponent(k);
            if e != 0 {
                out.add_term(m.with_shift(k, -1), c * BigInt::from(e));
            }
        }
        out
    }

    /// `Σ_k w(k) V_k ∂p/∂V_k`; diagonal on monomials.
    pub fn euler(&self, grading: Grading) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * BigInt::from(m.degree(grading)));
        }
        out
    }

    /// `Some(d)` when every term has degree `d` (zero polynomial: `None`).
    pub fn homogeneous_degree(&self, grading: Grading) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| m.degree(grading));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn evaluate(&self, assignment: &BTreeMap<u32, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, e) in m.factors() {
                let v = assignment
                    .get(&k)
                    .ok_or_else(|| Error::InvalidArgument(format!("no value assigned to V{k}")))?;
                if e < 0 {
                    if v.is_zero() {
                        return Err(Error::DivisionByZero(format!("V{k} = 0 in {m}")));
                    }
                    t /= num_traits::pow(v.clone(), e.unsigned_abs() as usize);
                } else {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let exps: serde_json::Map<String, Value> = m
                        .factors()
                        .map(|(k, e)| (k.to_string(), json!(e)))
                        .collect();
                    json!({ "coeff": rational::to_text(c), "exps": exps })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("jet polynomial JSON: {what}"));
        let arr = v.as_array().ok_or_else(|| bad("expected array"))?;
        let mut p = Self::zero();
        for t in arr {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing coeff"))?;
            let exps = t
                .get("exps")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("missing exps"))?;
            let mut pairs = Vec::new();
            for (k, e) in exps {
                let k: u32 = k.parse().map_err(|_| bad("bad variable index"))?;
                let e = e.as_i64().ok_or_else(|| bad("bad exponent"))? as i32;
                pairs.push((k, e));
            }
            p.add_term(JetMonomial::from_pairs(&pairs)?, rational::parse(coeff)?);
        }
        Ok(p)
    }
}

impl fmt::Display for JetPolynomial {
    /// `(1/480)*V3*V1^-1 + (-11/5760)*V2^2*V1^-2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !m.is_one() {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for JetPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        for term in s.split(" + ") {
            let bad = || Error::Parse(format!("bad jet term {term:?}"));
            let rest = term.strip_prefix('(').ok_or_else(bad)?;
            let (coeff, rest) = rest.split_once(')').ok_or_else(bad)?;
            let coeff = rational::parse(coeff)?;
            let mut pairs = Vec::new();
            if !rest.is_empty() {
                let rest = rest.strip_prefix('*').ok_or_else(bad)?;
                for factor in rest.split('*') {
                    let factor = factor.strip_prefix('V').ok_or_else(bad)?;
                    let (k, e) = match factor.split_once('^') {
                        Some((k, e)) => (k, e.parse::<i32>().map_err(|_| bad())?),
                        None => (factor, 1),
                    };
                    pairs.push((k.parse::<u32>().map_err(|_| bad())?, e));
                }
            }
            p.add_term(JetMonomial::from_pairs(&pairs)?, coeff);
        }
        Ok(p)
    }
}

impl Add for &JetPolynomial {
    type Output = JetPolynomial;
    fn add(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &JetPolynomial {
    type Output = JetPolynomial;
    fn sub(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &JetPolynomial {
    type Output = JetPolynomial;
    fn mul(self, rhs: &JetPolynomial) -> JetPolynomial {
        let mut out = JetPolynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &JetPolynomial {
    type Output = JetPolynomial;
    fn neg(self) -> JetPolynomial {
        JetPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for JetPolynomial {
            type Output = JetPolynomial;
            fn $method(self, rhs: JetPolynomial) -> JetPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for JetPolynomial {
    type Output = JetPolynomial;
    fn neg(self) -> JetPolynomial {
        -&self
    }
}
