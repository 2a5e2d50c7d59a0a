//! Finite expansions `Σ_j p_j(V) · (λ - V)^{-j}`.
//!
//! `λ` is never a variable here: a series is a map from pole order to a jet
//! coefficient, so equality "identically in λ" is coefficient-wise equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::jet::{JetMonomial, JetPolynomial};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PoleSeries {
    coeffs: BTreeMap<u32, JetPolynomial>,
}

impl PoleSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `(λ - V)^{-j}`
    pub fn basic(j: u32) -> Self {
        Self::single(j, JetPolynomial::one())
    }

    pub fn single(j: u32, p: JetPolynomial) -> Self {
        let mut s = Self::zero();
        s.add_at(j, &p);
        s
    }

    fn add_at(&mut self, j: u32, p: &JetPolynomial) {
        if p.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(j).or_default();
        *slot = &*slot + p;
        if slot.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `(λ - V)^{-j}`; zero when absent.
    pub fn coef(&self, j: u32) -> JetPolynomial {
        self.coeffs.get(&j).cloned().unwrap_or_default()
    }

    /// Pole orders carrying a nonzero coefficient, increasing.
    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&j, p)| (j, p.scale(c))).collect(),
        }
    }

    pub fn mul_jet(&self, q: &JetPolynomial) -> Self {
        let mut out = Self::zero();
        for (&j, p) in &self.coeffs {
            out.add_at(j, &(p * q));
        }
        out
    }

    /// The total derivative, acting on the poles through
    /// `∂ (λ - V)^{-j} = j V1 (λ - V)^{-j-1}`.
    pub fn derive(&self) -> Self {
        let v1 = JetMonomial::var(1);
        let mut out = Self::zero();
        for (&j, p) in &self.coeffs {
            out.add_at(j, &p.derive());
            if j > 0 {
                let lifted = p
                    .mul_monomial(&v1)
                    .scale(&Rational::from_integer(BigInt::from(j)));
                out.add_at(j + 1, &lifted);
            }
        }
        out
    }

    pub fn derive_n(&self, r: u32) -> Self {
        (0..r).fold(self.clone(), |acc, _| acc.derive())
    }
}

impl fmt::Display for PoleSeries {
    /// `[(1/24)] * (λ-V)^(-2) + ...`, increasing pole order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (j, p)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{p}] * (λ-V)^(-{j})")?;
        }
        Ok(())
    }
}

impl Add for &PoleSeries {
    type Output = PoleSeries;
    fn add(self, rhs: &PoleSeries) -> PoleSeries {
        let mut out = self.clone();
        for (&j, p) in &rhs.coeffs {
            out.add_at(j, p);
        }
        out
    }
}

impl Sub for &PoleSeries {
    type Output = PoleSeries;
    fn sub(self, rhs: &PoleSeries) -> PoleSeries {
        self + &(-rhs)
    }
}

impl Neg for &PoleSeries {
    type Output = PoleSeries;
    fn neg(self) -> PoleSeries {
        PoleSeries {
            coeffs: self.coeffs.iter().map(|(&j, p)| (j, -p)).collect(),
        }
    }
}

impl Mul for &PoleSeries {
    type Output = PoleSeries;
    fn mul(self, rhs: &PoleSeries) -> PoleSeries {
        let mut out = PoleSeries::zero();
        for (&i, p) in &self.coeffs {
            for (&j, q) in &rhs.coeffs {
                out.add_at(i + j, &(p * q));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;
    use crate::jet::Grading;
    use crate::rational::int;
    use proptest::prelude::*;

    fn jp(s: &str) -> JetPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn basics() {
        assert_eq!(PoleSeries::basic(0).coef(0), JetPolynomial::one());
        assert_eq!(PoleSeries::basic(2).orders().collect::<Vec<_>>(), vec![2]);
        let s = PoleSeries::basic(1);
        assert_eq!(&PoleSeries::basic(0) * &s, s);
        assert_eq!(&s * &s, PoleSeries::basic(2));
    }

    #[test]
    fn derivatives_of_simple_pole() {
        let s = PoleSeries::basic(1);
        let d1 = s.derive();
        assert_eq!(d1, PoleSeries::single(2, jp("(1)*V1")));
        let d2 = d1.derive();
        assert_eq!(
            d2,
            &PoleSeries::single(2, jp("(1)*V2")) + &PoleSeries::single(3, jp("(2)*V1^2"))
        );
        let d3 = d2.derive();
        let expect = &(&PoleSeries::single(2, jp("(1)*V3"))
            + &PoleSeries::single(3, jp("(6)*V2*V1")))
            + &PoleSeries::single(4, jp("(6)*V1^3"));
        assert_eq!(d3, expect);
        assert_eq!(d1.coef(2), jp("(1)*V1"));
        assert!(d1.coef(5).is_zero());
        assert_eq!(d2.coef(3), jp("(2)*V1^2"));
    }

    #[test]
    fn square_of_first_derivative() {
        let d = PoleSeries::single(2, jp("(1)*V1"));
        assert_eq!(&d * &d, PoleSeries::single(4, jp("(1)*V1^2")));
    }

    #[test]
    fn most_singular_term_law() {
        let base = PoleSeries::basic(1);
        for r in 1..=10u32 {
            let d = base.derive_n(r);
            let orders: Vec<u32> = d.orders().collect();
            assert_eq!(orders, (2..=r + 1).collect::<Vec<_>>(), "r = {r}");
            let top = JetPolynomial::term(
                Rational::from_integer(factorial(r)),
                JetMonomial::v1_power(r as i32),
            );
            assert_eq!(d.coef(r + 1), top);
            for j in d.orders() {
                assert_eq!(d.coef(j).homogeneous_degree(Grading::Index), Some(r as i64));
            }
        }
        for j in 1..=4u32 {
            for r in 0..=6u32 {
                let d = PoleSeries::basic(j).derive_n(r);
                for o in d.orders() {
                    assert_eq!(d.coef(o).homogeneous_degree(Grading::Index), Some(r as i64));
                }
            }
        }
    }

    fn arb_series() -> impl Strategy<Value = PoleSeries> {
        let term = (0u32..4, -5i64..5, -2i32..2, 0i32..2, 0i32..2);
        prop::collection::vec(term, 0..4).prop_map(|ts| {
            let mut s = PoleSeries::zero();
            for (j, c, e1, e2, e3) in ts {
                let m = JetMonomial::from_pairs(&[(1, e1), (2, e2), (3, e3)]).unwrap();
                s = &s + &PoleSeries::single(j, JetPolynomial::term(int(c), m));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn derive_is_a_derivation(a in arb_series(), b in arb_series()) {
            let lhs = (&a * &b).derive();
            let rhs = &(&a.derive() * &b) + &(&a * &b.derive());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
