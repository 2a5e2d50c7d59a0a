//! The degree-zero loop equation and its solution `W_g`.
//!
//! For `g ≥ 1` the unknowns `∂W_g/∂V_r`, `r = 1..2g-1`, satisfy
//!
//! ```text
//! Σ_r (∂W_g/∂V_r) · ∂^r (λ - V)^{-1} = B_g(λ; V)
//! ```
//!
//! Comparing the coefficients of `(λ - V)^{-2} .. (λ - V)^{-2g}` gives an
//! upper-triangular system `M x = C`. Row `j` of that system (1-based) is the
//! coefficient of `(λ - V)^{-(j+1)}`; [`pole_order_of_row`] fixes that shift.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::combinatorics::{
    binomial, enumerate_partitions, factorial, harmonic, lagrange_number, lambda_g_unchecked,
};
use crate::error::{Error, Result};
use crate::jet::{JetMonomial, JetPolynomial};
use crate::pole::PoleSeries;
use crate::rational::Rational;

/// Row `j` of the triangular system reads the pole of order `j + 1`.
pub const fn pole_order_of_row(j: u32) -> u32 {
    j + 1
}

fn check_genus(g: u32, min: u32) -> Result<()> {
    if g < min {
        Err(Error::GenusOutOfRange { got: g, min })
    } else {
        Ok(())
    }
}

/// `[∂^0 (λ-V)^{-1}, ∂^1 (λ-V)^{-1}, ..., ∂^n (λ-V)^{-1}]`
pub fn simple_pole_derivatives(n: u32) -> Vec<PoleSeries> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut cur = PoleSeries::basic(1);
    for _ in 0..=n {
        let next = cur.derive();
        out.push(cur);
        cur = next;
    }
    out
}

/// The rational function `B_g(λ; V)` as a finite pole expansion.
pub fn b_series(g: u32) -> Result<PoleSeries> {
    check_genus(g, 1)?;
    let top = 2 * g - 1;
    let d = simple_pole_derivatives(top);
    let bg = lambda_g_unchecked(g);

    let mut acc = PoleSeries::basic(2).derive_n(2 * g - 2);
    for k in 1..=(2 * g - 2) {
        let c = Rational::from_integer(binomial(2 * g - 2, k));
        let prod = &d[(k - 1) as usize] * &d[(top - k) as usize];
        acc = &acc + &prod.scale(&c);
    }
    let mut out = acc.scale(&bg);

    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for g1 in 1..g {
        let g2 = g - g1;
        let c = &half * lambda_g_unchecked(g1) * lambda_g_unchecked(g2);
        let prod = &d[(2 * g1 - 1) as usize] * &d[(2 * g2 - 1) as usize];
        out = &out - &prod.scale(&c);
    }
    Ok(out)
}

/// `B_{g,j}` for `j = 1..=2g-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BCoefficients {
    pub g: u32,
    values: Vec<JetPolynomial>,
}

impl BCoefficients {
    /// `B_{g,j}`; zero outside `1..=2g-1`.
    pub fn get(&self, j: u32) -> JetPolynomial {
        if j == 0 {
            return JetPolynomial::zero();
        }
        self.values.get(j as usize - 1).cloned().unwrap_or_default()
    }

    pub fn as_vec(&self) -> &[JetPolynomial] {
        &self.values
    }
}

pub fn b_coefficients(g: u32) -> Result<BCoefficients> {
    let series = b_series(g)?;
    for order in series.orders() {
        assert!(
            (2..=2 * g).contains(&order),
            "B_{g} has an unexpected pole of order {order}"
        );
    }
    let values = (1..2 * g)
        .map(|j| series.coef(pole_order_of_row(j)))
        .collect();
    Ok(BCoefficients { g, values })
}

/// Square matrix of jet polynomials, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetMatrix {
    rows: Vec<Vec<JetPolynomial>>,
}

impl JetMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            rows: vec![vec![JetPolynomial::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i][i] = JetPolynomial::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: u32, j: u32) -> &JetPolynomial {
        &self.rows[i as usize - 1][j as usize - 1]
    }

    fn set(&mut self, i: u32, j: u32, p: JetPolynomial) {
        self.rows[i as usize - 1][j as usize - 1] = p;
    }

    pub fn rows(&self) -> &[Vec<JetPolynomial>] {
        &self.rows
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().take(i).all(JetPolynomial::is_zero))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        assert_eq!(n, other.size());
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = JetPolynomial::zero();
                for k in 0..n {
                    let (a, b) = (&self.rows[i][k], &other.rows[k][j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    /// `self · x` for a column vector.
    pub fn apply(&self, x: &[JetPolynomial]) -> Vec<JetPolynomial> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(JetPolynomial::zero(), |acc, (a, b)| {
                        if a.is_zero() || b.is_zero() {
                            acc
                        } else {
                            &acc + &(a * b)
                        }
                    })
            })
            .collect()
    }

    /// Row-major array of term lists.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| Value::Array(row.iter().map(JetPolynomial::to_json).collect()))
                .collect(),
        )
    }
}

impl fmt::Display for JetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                writeln!(f, "[{},{}] {}", i + 1, j + 1, p)?;
            }
        }
        Ok(())
    }
}

/// `M_{j,r} = Coef((λ-V)^{-j-1}, ∂^r (λ-V)^{-1})`, `j, r = 1..=2g-1`.
pub fn m_matrix(g: u32) -> Result<JetMatrix> {
    check_genus(g, 1)?;
    let n = 2 * g - 1;
    let d = simple_pole_derivatives(n);
    let mut m = JetMatrix::zeros(n as usize);
    for r in 1..=n {
        for j in 1..=n {
            m.set(j, r, d[r as usize].coef(pole_order_of_row(j)));
        }
    }
    Ok(m)
}

/// The closed-form entry
/// `c_{i,j} = (1/j!) Σ_{μ ⊢ j-i} C(ℓ(μ)+j-1, i-1) L(μ) V_{μ+1} / V1^{ℓ(μ)+j}`,
/// zero for `i > j`.
pub fn c_coefficient(i: u32, j: u32) -> JetPolynomial {
    if i == 0 || i > j {
        return JetPolynomial::zero();
    }
    let jfact = Rational::from_integer(factorial(j));
    let mut out = JetPolynomial::zero();
    for mu in enumerate_partitions(j - i) {
        let len = mu.len() as u32;
        let weight = Rational::from_integer(binomial(len + j - 1, i - 1)) * lagrange_number(&mu);
        if weight.is_zero() {
            continue;
        }
        let mut pairs: Vec<(u32, i32)> = mu.shifted().into_iter().map(|k| (k, 1)).collect();
        pairs.push((1, -((len + j) as i32)));
        let mono = JetMonomial::from_pairs(&pairs).expect("μ+1 has parts ≥ 2");
        out.add_term(mono, weight / &jfact);
    }
    out
}

pub fn m_inverse_closed(g: u32) -> Result<JetMatrix> {
    check_genus(g, 1)?;
    let n = 2 * g - 1;
    let mut m = JetMatrix::zeros(n as usize);
    for i in 1..=n {
        for j in i..=n {
            m.set(i, j, c_coefficient(i, j));
        }
    }
    Ok(m)
}

/// Splits a single-term polynomial `c · V1^e` into `(c, e)`.
fn as_v1_term(p: &JetPolynomial) -> Option<(Rational, i32)> {
    let mut terms = p.terms();
    let (m, c) = terms.next()?;
    if terms.next().is_some() || m.factors().any(|(k, _)| k != 1) {
        return None;
    }
    Some((c.clone(), m.exponent(1)))
}

/// Inverts an upper-triangular matrix whose diagonal entries are of the form
/// `c · V1^e` by back-substitution.
pub fn m_inverse_backsub(m: &JetMatrix) -> Result<JetMatrix> {
    if !m.is_upper_triangular() {
        return Err(Error::InvalidArgument(
            "matrix is not upper triangular".into(),
        ));
    }
    let n = m.size() as u32;
    let mut diag = Vec::with_capacity(n as usize);
    for r in 1..=n {
        let d = as_v1_term(m.get(r, r)).ok_or_else(|| {
            Error::DivisionByZero(format!("diagonal entry {r} is not an invertible V1 term"))
        })?;
        diag.push(d);
    }
    let mut inv = JetMatrix::zeros(n as usize);
    for j in 1..=n {
        for i in (1..=j).rev() {
            let mut rhs = if i == j {
                JetPolynomial::one()
            } else {
                JetPolynomial::zero()
            };
            for k in (i + 1)..=j {
                let (a, b) = (m.get(i, k), inv.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    rhs = &rhs - &(a * b);
                }
            }
            let (c, e) = &diag[i as usize - 1];
            inv.set(i, j, rhs.div_v1_term(c, *e)?);
        }
    }
    Ok(inv)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularSystem {
    pub g: u32,
    pub m: JetMatrix,
    pub minv: JetMatrix,
}

pub fn triangular_system(g: u32) -> Result<TriangularSystem> {
    Ok(TriangularSystem {
        g,
        m: m_matrix(g)?,
        minv: m_inverse_closed(g)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// `W_g = 1/(2g-2) Σ_{k=2}^{2g-1} (k-1) V_k Σ_j c_{k,j} B_{g,j}`
    Theorem1,
    /// `W_g = 1/(2g-2) Σ_{k=1}^{2g-1} k V_k Σ_j c_{k,j} B_{g,j}`
    Equivalent,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::Theorem1 => "theorem1",
            Formula::Equivalent => "equivalent",
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem1" => Ok(Formula::Theorem1),
            "equivalent" => Ok(Formula::Equivalent),
            _ => Err(Error::Parse(format!("unknown formula {s:?}"))),
        }
    }
}

/// `(∂W_g/∂V_1, ..., ∂W_g/∂V_{2g-1}) = M^{-1} C_g`, using the closed inverse.
pub fn w_partials(g: u32) -> Result<Vec<JetPolynomial>> {
    let minv = m_inverse_closed(g)?;
    let b = b_coefficients(g)?;
    Ok(minv.apply(b.as_vec()))
}

pub fn w_g(g: u32, formula: Formula) -> Result<JetPolynomial> {
    check_genus(g, 2)?;
    let partials = w_partials(g)?;
    let mut acc = JetPolynomial::zero();
    for (idx, dk) in partials.iter().enumerate() {
        let k = idx as u32 + 1;
        let weight = match formula {
            Formula::Theorem1 => k - 1,
            Formula::Equivalent => k,
        };
        if weight == 0 || dk.is_zero() {
            continue;
        }
        let term = dk
            .mul_monomial(&JetMonomial::var(k))
            .scale(&Rational::from_integer(BigInt::from(weight)));
        acc = &acc + &term;
    }
    Ok(acc.scale(&Rational::new(BigInt::one(), BigInt::from(2 * g - 2))))
}

/// A candidate solution of the genus-`g` degree-zero loop equation.
#[derive(Debug, Clone, Copy)]
pub enum LoopCandidate<'a> {
    /// `W_1 = log(V1)/24`, represented through `∂W_1/∂V_1 = 1/(24 V1)`.
    Genus1Log,
    Poly(&'a JetPolynomial),
}

/// `Σ_r (∂W/∂V_r) ∂^r (λ-V)^{-1} - B_g`; zero iff `W` solves the equation.
pub fn loop_residual(g: u32, candidate: LoopCandidate<'_>) -> Result<PoleSeries> {
    let partials: Vec<JetPolynomial> = match candidate {
        LoopCandidate::Genus1Log => vec![JetPolynomial::term(
            Rational::new(BigInt::one(), BigInt::from(24)),
            JetMonomial::v1_power(-1),
        )],
        LoopCandidate::Poly(w) => (1..=w.max_var()).map(|r| w.partial(r)).collect(),
    };
    let d = simple_pole_derivatives(partials.len() as u32);
    let mut lhs = PoleSeries::zero();
    for (idx, p) in partials.iter().enumerate() {
        if !p.is_zero() {
            lhs = &lhs + &d[idx + 1].mul_jet(p);
        }
    }
    Ok(&lhs - &b_series(g)?)
}

/// Whether every monomial of `w` has the shape `V_{μ+1} / V1^{ℓ(μ)}` with
/// `μ ⊢ 2g-2`.
pub fn has_partition_structure(w: &JetPolynomial, g: u32) -> bool {
    w.terms().all(|(m, _)| {
        let mut len = 0i64;
        let mut weight = 0i64;
        for (k, e) in m.factors() {
            if k >= 2 {
                len += e as i64;
                weight += (k as i64 - 1) * e as i64;
            }
        }
        m.exponent(1) as i64 == -len && weight == 2 * g as i64 - 2
    })
}

/// `Coef(V_{2g-1} V1^{-1}, W_g)`.
pub fn top_coefficient(w: &JetPolynomial, g: u32) -> Rational {
    let m = JetMonomial::from_pairs(&[(2 * g - 1, 1), (1, -1)]).expect("valid monomial");
    w.coeff(&m)
}

/// The most singular coefficient of `B_g`, as predicted by keeping only the
/// top pole of each factor: `K_g V1^{2g-2} (λ-V)^{-2g}` with
/// `K_g = b_g (2g-1)! Σ_{k=1}^{2g-1} 1/k - ½ Σ b_{g1} b_{g2} (2g1-1)! (2g2-1)!`.
pub fn most_singular_constant(g: u32) -> Result<Rational> {
    check_genus(g, 1)?;
    let bg = lambda_g_unchecked(g);
    let mut k = bg * Rational::from_integer(factorial(2 * g - 1)) * harmonic(2 * g - 1);
    for g1 in 1..g {
        let g2 = g - g1;
        let c = lambda_g_unchecked(g1)
            * lambda_g_unchecked(g2)
            * Rational::from_integer(factorial(2 * g1 - 1) * factorial(2 * g2 - 1));
        k -= c / BigInt::from(2);
    }
    Ok(k)
}
