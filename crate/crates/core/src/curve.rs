//! Degree-zero free energies of a smooth genus-`h` target curve, restricted
//! to the even cohomology `{1, [pt]}`. Times are `P_i` (coefficient of `1`)
//! and `Q_i` (coefficient of `[pt]`); odd classes are set to zero.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::combinatorics::{
    enumerate_partitions, factorial, lambda_g_unchecked, zeta_at_negative, Partition,
};
use crate::error::{Error, Result};
use crate::hodge::{substitute_jets, v_jets, v_series, weighted_monomials};
use crate::loop_zero::{w_g, Formula};
use crate::rational::{self, Rational};
use crate::series::{Alphabet, Monomial, TruncatedSeries};

/// Basis of the even cohomology of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenClass {
    One,
    Point,
}

impl EvenClass {
    /// Cup product; `[pt]·[pt] = 0`.
    pub fn product(self, other: Self) -> Option<Self> {
        match (self, other) {
            (EvenClass::One, x) | (x, EvenClass::One) => Some(x),
            (EvenClass::Point, EvenClass::Point) => None,
        }
    }

    pub fn pairing(self, other: Self) -> i64 {
        match (self, other) {
            (EvenClass::One, EvenClass::Point) | (EvenClass::Point, EvenClass::One) => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveTarget {
    pub h: u32,
}

impl CurveTarget {
    pub fn new(h: u32) -> Self {
        Self { h }
    }

    /// `c_1(X) = (2 - 2h) [pt]`; returns the coefficient.
    pub fn c1(&self) -> i64 {
        2 - 2 * self.h as i64
    }
}

/// Position of `P_i` in the doubled alphabet.
pub fn p_index(i: u32) -> usize {
    i as usize
}

/// Position of `Q_i` in the doubled alphabet over `P0..Pn, Q0..Qn`.
pub fn q_index(max_index: u32, i: u32) -> usize {
    (max_index + 1 + i) as usize
}

fn embed_p(s: &TruncatedSeries, max_index: u32) -> TruncatedSeries {
    let map: Vec<usize> = (0..=max_index).map(p_index).collect();
    s.embed(&Alphabet::doubled(max_index), &map)
}

/// `U(P, Q) = Σ_i Q_i ∂V(P)/∂P_i`, to degree `degree`.
pub fn u_series(max_index: u32, degree: u32) -> TruncatedSeries {
    let v = v_series(max_index, degree);
    let alphabet = Alphabet::doubled(max_index);
    let mut u = TruncatedSeries::zero(&alphabet, degree);
    for (m, c) in v.terms() {
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut exps = vec![0u32; alphabet.len()];
            exps[..m.exponents().len()].copy_from_slice(m.exponents());
            exps[i] -= 1;
            exps[q_index(max_index, i as u32)] += 1;
            u.add_term(Monomial::from_exponents(exps), c * BigInt::from(e));
        }
    }
    u
}

/// `U_m = ∂^m U / ∂P0^m`, exact to `degree`.
pub fn u_m_series(m: u32, max_index: u32, degree: u32) -> TruncatedSeries {
    u_series(max_index, degree + m)
        .partial_n(p_index(0), m, degree)
        .expect("margin supplied")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeEnergySlice {
    pub g: u32,
    pub target: CurveTarget,
    pub series: TruncatedSeries,
}

impl FreeEnergySlice {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .series
            .terms()
            .map(|(m, c)| {
                json!({
                    "monomial": m.render(self.series.alphabet()),
                    "value": rational::to_text(c),
                })
            })
            .collect();
        json!({
            "g": self.g,
            "h": self.target.h,
            "order": self.series.precision(),
            "terms": terms,
        })
    }
}

impl fmt::Display for FreeEnergySlice {
    /// One `monomial<TAB>value` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in self.series.terms() {
            writeln!(f, "{}\t{}", m.render(self.series.alphabet()), c)?;
        }
        Ok(())
    }
}

/// `F_0 = Σ_{n≥3} 1/(n(n-1)(n-2)) Σ_{Σi = n-3} ∫_X t^{i_1}..t^{i_n}/Π i_a!`
/// with `t^i = P_i + Q_i [pt]`; the integral keeps terms with one `Q`.
fn genus_zero(max_index: u32, degree: u32) -> TruncatedSeries {
    let alphabet = Alphabet::doubled(max_index);
    let mut f = TruncatedSeries::zero(&alphabet, degree);
    for n in 3..=degree {
        for s in 0..=(n - 3) {
            let q = n - 3 - s;
            if q > max_index {
                continue;
            }
            for p_exps in weighted_monomials(max_index, n - 1, s) {
                let denom = p_exps
                    .iter()
                    .enumerate()
                    .fold(factorial(q), |acc, (j, &m)| {
                        acc * factorial(m) * num_traits::pow(factorial(j as u32), m as usize)
                    });
                let mut exps = vec![0u32; alphabet.len()];
                exps[..p_exps.len()].copy_from_slice(&p_exps);
                exps[q_index(max_index, q)] += 1;
                f.add_term(
                    Monomial::from_exponents(exps),
                    Rational::new(factorial(n - 3), denom),
                );
            }
        }
    }
    f
}

/// `W_g(V_1(P), ..., V_{2g-1}(P))` over the doubled alphabet.
pub fn w_of_p(g: u32, max_index: u32, degree: u32) -> Result<TruncatedSeries> {
    let w = w_g(g, Formula::Theorem1)?;
    let jets = v_jets(2 * g - 1, max_index, degree);
    Ok(embed_p(&substitute_jets(&w, &jets)?, max_index))
}

/// Degree-zero genus-`g` free energy of the target, to total degree `degree`
/// in `P0..Pn, Q0..Qn`.
pub fn free_energy_deg0(
    g: u32,
    target: CurveTarget,
    max_index: u32,
    degree: u32,
) -> Result<FreeEnergySlice> {
    let c1 = Rational::from_integer(BigInt::from(target.c1()));
    let series = match g {
        0 => genus_zero(max_index, degree),
        1 => {
            let v1 = v_jets(1, max_index, degree).pop().expect("two jets");
            let log_part = embed_p(&v1.log()?, max_index).scale(&(c1 / BigInt::from(24)));
            let u =
                u_series(max_index, degree).scale(&Rational::new(BigInt::one(), BigInt::from(24)));
            &log_part - &u
        }
        _ => {
            let sign = if g.is_multiple_of(2) {
                Rational::one()
            } else {
                -Rational::one()
            };
            let u_part =
                u_m_series(2 * g - 2, max_index, degree).scale(&(lambda_g_unchecked(g) * &sign));
            let w_part = w_of_p(g, max_index, degree)?.scale(&(sign * c1));
            &u_part - &w_part
        }
    };
    Ok(FreeEnergySlice { g, target, series })
}

/// Constant term `C^E_λ(0)` of the elliptic stationary series:
/// `(-1)^g b_g + δ_{g,1}/24` for `λ = (2g-2)` (the empty partition at
/// `g = 1`), zero otherwise, with `g` read off `|λ| = 2g-2`.
pub fn c_elliptic_constant(lam: &Partition) -> Rational {
    let w = lam.weight();
    if w % 2 == 1 {
        return Rational::zero();
    }
    let g = w / 2 + 1;
    let single = match g {
        1 => lam.is_empty(),
        _ => lam.parts() == [2 * g - 2],
    };
    if !single {
        return Rational::zero();
    }
    let sign = if g.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut c = sign * lambda_g_unchecked(g);
    if g == 1 {
        c += Rational::new(BigInt::one(), BigInt::from(24));
    }
    c
}

/// `Σ_{λ ⊢ 2g-2} U_λ / Π_j m_j(λ)! · C^E_λ(0) - δ_{g,1} U/24`, with
/// `U_λ = Π_a U_{λ_a}`.
pub fn stationary_degree0(g: u32, max_index: u32, degree: u32) -> Result<TruncatedSeries> {
    if g == 0 {
        return Err(Error::GenusOutOfRange { got: g, min: 1 });
    }
    let alphabet = Alphabet::doubled(max_index);
    let u_jets: Vec<TruncatedSeries> = (0..=2 * g - 2)
        .map(|m| u_m_series(m, max_index, degree))
        .collect();
    let mut out = TruncatedSeries::zero(&alphabet, degree);
    for lam in enumerate_partitions(2 * g - 2) {
        let c = c_elliptic_constant(&lam);
        let mut u_lam = TruncatedSeries::one(&alphabet, degree);
        for &p in lam.parts() {
            u_lam = &u_lam * &u_jets[p as usize];
        }
        let weight = c / lam.multiplicity_factorial();
        out = &out + &u_lam.scale(&weight);
    }
    if g == 1 {
        out = &out - &u_jets[0].scale(&Rational::new(BigInt::one(), BigInt::from(24)));
    }
    Ok(out)
}

/// A polynomial in `E_2, E_4, E_6` with rational coefficients.
#[derive(Debug, Clone)]
pub struct EisensteinExpr {
    pub label: &'static str,
    pub partition: Partition,
    /// `(coefficient, [k_1, k_2, ..])` for `coefficient · E_{k_1} E_{k_2} ..`;
    /// an empty list is a constant.
    pub terms: Vec<(Rational, Vec<u32>)>,
}

impl EisensteinExpr {
    /// Value at `q = 0`, where `E_k(0) = ζ(1-k)/2`.
    pub fn constant_term(&self) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (c, ks) in &self.terms {
            let mut t = c.clone();
            for &k in ks {
                t *= zeta_at_negative(k)? / BigInt::from(2);
            }
            acc += t;
        }
        Ok(acc)
    }
}

/// The three stationary generating series of the elliptic curve in
/// quasi-modular form.
pub fn eisenstein_examples() -> Vec<EisensteinExpr> {
    let r = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
    let half_zeta_m1 = zeta_at_negative(2).expect("even") / BigInt::from(2);
    vec![
        EisensteinExpr {
            label: "E2 - zeta(-1)/2",
            partition: Partition::empty(),
            terms: vec![(r(1, 1), vec![2]), (-half_zeta_m1, vec![])],
        },
        EisensteinExpr {
            label: "E4/12 + E2^2/2",
            partition: Partition::new(vec![2]).expect("positive"),
            terms: vec![(r(1, 12), vec![4]), (r(1, 2), vec![2, 2])],
        },
        EisensteinExpr {
            label: "7 E6/180 + 2/3 E2 E4 - 8/3 E2^3",
            partition: Partition::new(vec![1, 1]).expect("positive"),
            terms: vec![
                (r(7, 180), vec![6]),
                (r(2, 3), vec![2, 4]),
                (r(-8, 3), vec![2, 2, 2]),
            ],
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinRow {
    pub partition: Partition,
    pub label: &'static str,
    pub from_eisenstein: Rational,
    pub from_closed_form: Rational,
}

impl EisensteinRow {
    pub fn agrees(&self) -> bool {
        self.from_eisenstein == self.from_closed_form
    }
}

pub fn eisenstein_constant_check() -> Result<Vec<EisensteinRow>> {
    eisenstein_examples()
        .into_iter()
        .map(|e| {
            Ok(EisensteinRow {
                from_eisenstein: e.constant_term()?,
                from_closed_form: c_elliptic_constant(&e.partition),
                partition: e.partition,
                label: e.label,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn q_positions(max_index: u32) -> Vec<usize> {
        (0..=max_index).map(|i| q_index(max_index, i)).collect()
    }

    fn pq(max_index: u32, p: &[(u32, u32)], q: &[(u32, u32)]) -> Vec<u32> {
        let mut e = vec![0; 2 * max_index as usize + 2];
        for &(i, m) in p {
            e[p_index(i)] = m;
        }
        for &(i, m) in q {
            e[q_index(max_index, i)] = m;
        }
        e
    }

    #[test]
    fn even_cohomology() {
        assert_eq!(EvenClass::Point.product(EvenClass::Point), None);
        assert_eq!(
            EvenClass::One.product(EvenClass::Point),
            Some(EvenClass::Point)
        );
        assert_eq!(EvenClass::One.pairing(EvenClass::Point), 1);
        assert_eq!(EvenClass::One.pairing(EvenClass::One), 0);
        assert_eq!(CurveTarget::new(0).c1(), 2);
        assert_eq!(CurveTarget::new(3).c1(), -4);
    }

    #[test]
    fn u_coefficients() {
        let u = u_series(3, 4);
        assert_eq!(u.coeff(&pq(3, &[], &[(0, 1)])).unwrap(), int(1));
        assert_eq!(u.coeff(&pq(3, &[(0, 2)], &[(2, 1)])).unwrap(), frac(1, 2));
        assert!(u.vanish(&q_positions(3)).is_zero());
    }

    #[test]
    fn genus_zero_values() {
        let f = free_energy_deg0(0, CurveTarget::new(0), 3, 5).unwrap();
        assert_eq!(
            f.series.coeff(&pq(3, &[(0, 2)], &[(0, 1)])).unwrap(),
            frac(1, 2)
        );
        // ∂²F0/∂P0∂Q0 = V(P), ∂²F0/∂P0² = U
        let d = f.series.partial(p_index(0)).unwrap();
        let v = embed_p(&v_series(3, 3), 3);
        assert_eq!(d.partial(q_index(3, 0)).unwrap(), v);
        assert_eq!(d.partial(p_index(0)).unwrap(), u_series(3, 3));
    }

    #[test]
    fn genus_one_elliptic_is_minus_u_over_24() {
        let f = free_energy_deg0(1, CurveTarget::new(1), 3, 5).unwrap();
        assert_eq!(f.series, u_series(3, 5).scale(&frac(-1, 24)));
    }

    #[test]
    fn genus_two_q2_coefficient() {
        let f = free_energy_deg0(2, CurveTarget::new(0), 4, 3).unwrap();
        assert_eq!(
            f.series.coeff(&pq(4, &[], &[(2, 1)])).unwrap(),
            frac(7, 5760)
        );
    }

    #[test]
    fn elliptic_constants() {
        let p = |v: Vec<u32>| Partition::new(v).unwrap();
        assert_eq!(c_elliptic_constant(&Partition::empty()), int(0));
        assert_eq!(c_elliptic_constant(&p(vec![2])), frac(7, 5760));
        assert_eq!(c_elliptic_constant(&p(vec![1, 1])), int(0));
        assert_eq!(c_elliptic_constant(&p(vec![4])), frac(-31, 967680));
        assert_eq!(c_elliptic_constant(&p(vec![3])), int(0));
    }

    #[test]
    fn eisenstein_rows() {
        let rows = eisenstein_constant_check().unwrap();
        let values: Vec<Rational> = rows.iter().map(|r| r.from_eisenstein.clone()).collect();
        assert_eq!(values, vec![int(0), frac(7, 5760), int(0)]);
        assert!(rows.iter().all(EisensteinRow::agrees));
    }

    #[test]
    fn stationary_sum_genus_two() {
        let f = free_energy_deg0(2, CurveTarget::new(1), 4, 5).unwrap();
        assert_eq!(f.series, stationary_degree0(2, 4, 5).unwrap());
    }

    #[test]
    fn json_shape() {
        let f = free_energy_deg0(2, CurveTarget::new(0), 2, 2).unwrap();
        let j = f.to_json();
        assert_eq!(j["g"], 2);
        assert_eq!(j["order"], 2);
        assert!(j["terms"]
            .as_array()
            .unwrap()
            .iter()
            .any(|t| t["monomial"] == "Q2" && t["value"] == "7/5760"));
    }
}
