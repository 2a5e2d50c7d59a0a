//! The series `V(T)`, its `T0`-derivatives, and generating series of ψ–λ
//! Hodge integrals.
//!
//! Hodge generating series use the convention
//! `H_g(φ; T) = Σ_n Σ_{i_1..i_n} ∫ ψ_1^{i_1}..ψ_n^{i_n} φ · T_{i_1}..T_{i_n} / n!`,
//! so an integral is recovered as `Π_j m_j! · Coef(Π_j T_j^{m_j})`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::combinatorics::{
    enumerate_partitions, factorial, harmonic, lambda_g_unchecked, multinomial,
};
use crate::error::{Error, Result};
use crate::jet::JetPolynomial;
use crate::loop_zero::{w_g, Formula};
use crate::rational::{self, Rational};
use crate::series::{Alphabet, Monomial, TruncatedSeries};

fn check_genus(g: u32) -> Result<()> {
    if g == 0 {
        Err(Error::GenusOutOfRange { got: g, min: 1 })
    } else {
        Ok(())
    }
}

/// Exponent vectors over `T0..Tn` with `Σ_j m_j = count` and
/// `Σ_j j·m_j = weight`.
pub(crate) fn weighted_monomials(max_index: u32, count: u32, weight: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for mu in enumerate_partitions(weight) {
        if mu.len() as u32 > count || mu.parts().first().is_some_and(|&p| p > max_index) {
            continue;
        }
        let mut exps = vec![0u32; max_index as usize + 1];
        exps[0] = count - mu.len() as u32;
        for &p in mu.parts() {
            exps[p as usize] += 1;
        }
        out.push(exps);
    }
    out
}

/// `Π_j m_j! (j!)^{m_j}`
fn exponent_weight(exps: &[u32]) -> BigInt {
    exps.iter().enumerate().fold(BigInt::one(), |acc, (j, &m)| {
        acc * factorial(m) * num_traits::pow(factorial(j as u32), m as usize)
    })
}

/// `V(T) = Σ_{n≥1} (1/n) Σ_{i_1+..+i_n = n-1} T_{i_1}..T_{i_n}/(i_1!..i_n!)`,
/// summed monomial by monomial: `Π T_j^{m_j}` with `Σ m_j = n`,
/// `Σ j m_j = n - 1` has coefficient `(n-1)! / Π_j m_j! (j!)^{m_j}`.
pub fn v_series(max_index: u32, degree: u32) -> TruncatedSeries {
    let alphabet = Alphabet::times(max_index);
    let mut s = TruncatedSeries::zero(&alphabet, degree);
    for n in 1..=degree {
        for exps in weighted_monomials(max_index, n, n - 1) {
            let c = Rational::new(factorial(n - 1), exponent_weight(&exps));
            s.add_term(Monomial::from_exponents(exps), c);
        }
    }
    s
}

/// Iterates `V ← Σ_i T_i V^i / i!` from `V = 0` over `times` indeterminates
/// until the truncation stabilises. An empty alphabet gives `0`.
pub fn v_fixed_point(times: usize, degree: u32) -> Result<TruncatedSeries> {
    let alphabet = Alphabet::new((0..times).map(|i| format!("T{i}")).collect());
    let mut v = TruncatedSeries::zero(&alphabet, degree);
    let limit = degree + 2;
    for _ in 0..limit {
        let mut next = TruncatedSeries::zero(&alphabet, degree);
        let mut power = TruncatedSeries::one(&alphabet, degree);
        for i in 0..times {
            if i > 0 {
                power = &power * &v;
            }
            let t = TruncatedSeries::var(&alphabet, degree, i);
            let c = Rational::new(BigInt::one(), factorial(i as u32));
            next = &next + &(&t * &power).scale(&c);
        }
        if next == v {
            return Ok(v);
        }
        v = next;
    }
    Err(Error::NoConvergence(limit))
}

/// Independent oracle for [`v_series`] over `T0..Tn`.
pub fn v_fixed_point_oracle(max_index: u32, degree: u32) -> Result<TruncatedSeries> {
    v_fixed_point(max_index as usize + 1, degree)
}

/// `V_k(T) = ∂^k V / ∂T0^k` from a `V` known to precision at least
/// `target + k`.
pub fn derive_t0(v: &TruncatedSeries, k: u32, target: u32) -> Result<TruncatedSeries> {
    v.partial_n(0, k, target)
}

/// `V_k(T)` exact to degree `degree`, computed from `V` at `degree + k`.
pub fn v_k_series(k: u32, max_index: u32, degree: u32) -> TruncatedSeries {
    derive_t0(&v_series(max_index, degree + k), k, degree).expect("margin supplied")
}

/// `[V_0(T), V_1(T), ..., V_{kmax}(T)]`, all exact to `degree`.
pub fn v_jets(kmax: u32, max_index: u32, degree: u32) -> Vec<TruncatedSeries> {
    let mut cur = v_series(max_index, degree + kmax);
    let mut out = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        out.push(cur.truncate(degree));
        if k < kmax {
            cur = cur.partial(0).expect("margin supplied");
        }
    }
    out
}

/// Substitutes `V_k ↦ jets[k]` into a jet polynomial. `jets[1]` must have an
/// invertible constant term if `V1` occurs with a negative exponent.
pub fn substitute_jets(p: &JetPolynomial, jets: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let first = jets
        .get(1)
        .ok_or_else(|| Error::InvalidArgument("need at least V0 and V1".into()))?;
    let alphabet = first.alphabet().clone();
    let precision = jets
        .iter()
        .map(TruncatedSeries::precision)
        .min()
        .unwrap_or(0);
    if (p.max_var() as usize) >= jets.len() {
        return Err(Error::InvalidArgument(format!(
            "polynomial uses V{} but only {} jets were supplied",
            p.max_var(),
            jets.len() - 1
        )));
    }
    let mut powers: BTreeMap<(u32, i32), TruncatedSeries> = BTreeMap::new();
    let mut v1_inv: Option<TruncatedSeries> = None;
    let mut out = TruncatedSeries::zero(&alphabet, precision);
    for (m, c) in p.terms() {
        let mut term = TruncatedSeries::constant(&alphabet, precision, c.clone());
        for (k, e) in m.factors() {
            if let Entry::Vacant(slot) = powers.entry((k, e)) {
                let base = if e < 0 {
                    if v1_inv.is_none() {
                        v1_inv = Some(jets[k as usize].recip()?);
                    }
                    v1_inv.clone().expect("set above")
                } else {
                    jets[k as usize].clone()
                };
                slot.insert(base.pow(e.unsigned_abs() as i64)?);
            }
            term = &term * &powers[&(k, e)];
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Which λ class multiplies the ψ monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HodgeClass {
    LambdaG,
    LambdaGMinusOne,
}

impl HodgeClass {
    pub fn name(self) -> &'static str {
        match self {
            HodgeClass::LambdaG => "lambda_g",
            HodgeClass::LambdaGMinusOne => "lambda_gm1",
        }
    }

    /// Total ψ degree a nonzero integral over `M_{g,n}` must have:
    /// `3g-3+n` minus the degree of the λ class.
    pub fn psi_degree(self, g: u32, n: u32) -> i64 {
        let base = 2 * g as i64 - 2 + n as i64;
        match self {
            HodgeClass::LambdaG => base - 1,
            HodgeClass::LambdaGMinusOne => base,
        }
    }
}

impl fmt::Display for HodgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HodgeClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda_g" => Ok(HodgeClass::LambdaG),
            "lambda_gm1" => Ok(HodgeClass::LambdaGMinusOne),
            _ => Err(Error::Parse(format!("unknown Hodge class {s:?}"))),
        }
    }
}

/// `H_g(λ_g; T) = b_g V_{2g-2}(T)` or `H_g(λ_{g-1}; T) = W_g(V_1(T), ...)`
/// (`log(V_1)/24` at genus one), over `T0..Tn` to degree `degree`.
pub fn hodge_series(
    g: u32,
    class: HodgeClass,
    max_index: u32,
    degree: u32,
) -> Result<TruncatedSeries> {
    check_genus(g)?;
    match class {
        HodgeClass::LambdaG => {
            Ok(v_k_series(2 * g - 2, max_index, degree).scale(&lambda_g_unchecked(g)))
        }
        HodgeClass::LambdaGMinusOne if g == 1 => {
            let v1 = v_k_series(1, max_index, degree);
            Ok(v1
                .log()?
                .scale(&Rational::new(BigInt::one(), BigInt::from(24))))
        }
        HodgeClass::LambdaGMinusOne => {
            let w = w_g(g, Formula::Theorem1)?;
            let jets = v_jets(2 * g - 1, max_index, degree);
            substitute_jets(&w, &jets)
        }
    }
}

/// `∫ ψ_1^{i_1} .. ψ_n^{i_n} φ` read off a generating series in `T0..Tn`.
pub fn extract_integral(series: &TruncatedSeries, indices: &[u32]) -> Result<Rational> {
    let len = series.alphabet().len();
    let mut exps = vec![0u32; len];
    for &i in indices {
        if i as usize >= len {
            return Err(Error::OutOfTruncation(format!(
                "ψ exponent {i} beyond T{}",
                len.saturating_sub(1)
            )));
        }
        exps[i as usize] += 1;
    }
    if indices.len() as u32 > series.precision() {
        return Err(Error::OutOfTruncation(format!(
            "{} points with series precision {}",
            indices.len(),
            series.precision()
        )));
    }
    let sym = exps
        .iter()
        .fold(BigInt::one(), |acc, &m| acc * factorial(m));
    Ok(series.coeff(&exps)? * sym)
}

/// The λ_g formula: `C(2g-3+n; i_1..i_n) b_g`, zero off the dimension.
pub fn lambda_g_closed_form(g: u32, indices: &[u32]) -> Result<Rational> {
    check_genus(g)?;
    let n = indices.len() as u32;
    let total: i64 = indices.iter().map(|&i| i as i64).sum();
    if total != HodgeClass::LambdaG.psi_degree(g, n) {
        return Ok(Rational::zero());
    }
    Ok(Rational::from_integer(multinomial(indices)) * lambda_g_unchecked(g))
}

/// `∫_{M_{g,1}} ψ^{2g-1} λ_{g-1}` in closed form.
pub fn theorem_a_value(g: u32) -> Result<Rational> {
    check_genus(g)?;
    let first = lambda_g_unchecked(g) * harmonic(2 * g - 1);
    let mut sum = Rational::zero();
    for g1 in 1..g {
        let g2 = g - g1;
        let f = |h: u32| {
            let pow = (BigInt::one() << (2 * h - 1)) - 1;
            Rational::new(pow, BigInt::one()) * crate::combinatorics::bernoulli(2 * h).abs()
                / BigInt::from(2 * h)
        };
        sum += f(g1) * f(g2);
    }
    let denom = (BigInt::one() << (2 * g - 1)) * factorial(2 * g - 1);
    Ok(first - sum / denom)
}

/// All multisets of size `0..=max_points` drawn from `0..=max_psi`, each
/// sorted in descending order.
pub fn index_multisets(max_points: u32, max_psi: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        if left == 0 {
            return;
        }
        for i in (0..=cap).rev() {
            prefix.push(i);
            rec(left - 1, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_points, max_psi, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    out
}

/// Exact table of ψ–λ integrals for one genus and class, complete over all
/// multisets with at most `max_points` entries bounded by `max_psi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeTable {
    pub g: u32,
    pub class: HodgeClass,
    pub max_points: u32,
    pub max_psi: u32,
    entries: BTreeMap<Vec<u32>, Rational>,
}

/// Outcome of a string or dilaton check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn canonical(indices: &[u32]) -> Vec<u32> {
    let mut k = indices.to_vec();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

fn fmt_indices(k: &[u32]) -> String {
    k.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

impl HodgeTable {
    pub fn build(g: u32, class: HodgeClass, max_points: u32, max_psi: u32) -> Result<Self> {
        let series = hodge_series(g, class, max_psi, max_points)?;
        let mut entries = BTreeMap::new();
        for key in index_multisets(max_points, max_psi) {
            let v = extract_integral(&series, &key)?;
            entries.insert(key, v);
        }
        Ok(Self {
            g,
            class,
            max_points,
            max_psi,
            entries,
        })
    }

    /// Wraps externally supplied entries; keys are canonicalised. The table
    /// may be incomplete, which the identity checks reject.
    pub fn from_entries(
        g: u32,
        class: HodgeClass,
        max_points: u32,
        max_psi: u32,
        entries: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        Self {
            g,
            class,
            max_points,
            max_psi,
            entries: entries
                .into_iter()
                .map(|(k, v)| (canonical(&k), v))
                .collect(),
        }
    }

    pub fn get(&self, indices: &[u32]) -> Option<&Rational> {
        self.entries.get(&canonical(indices))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.entries.iter()
    }

    /// Entries meeting the dimension constraint, in output order.
    pub fn admissible_entries(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .filter(|(k, _)| self.is_admissible(k))
            .collect();
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| b.0.cmp(a.0)));
        v
    }

    pub fn is_admissible(&self, key: &[u32]) -> bool {
        let total: i64 = key.iter().map(|&i| i as i64).sum();
        total == self.class.psi_degree(self.g, key.len() as u32)
    }

    fn ensure_complete(&self) -> Result<()> {
        for key in index_multisets(self.max_points, self.max_psi) {
            if !self.entries.contains_key(&key) {
                return Err(Error::IncompleteTable(format!("({})", fmt_indices(&key))));
            }
        }
        Ok(())
    }

    fn stable(&self, n: usize) -> bool {
        2 * self.g as i64 - 2 + n as i64 > 0
    }

    /// `⟨τ_0 Π τ_{i_a}⟩ = Σ_k ⟨.. τ_{i_k - 1} ..⟩` whenever `M_{g,n}` is stable.
    pub fn check_string(&self) -> Result<IdentityReport> {
        self.ensure_complete()?;
        let mut report = IdentityReport::default();
        for (key, value) in &self.entries {
            let Some(pos) = key.iter().rposition(|&i| i == 0) else {
                continue;
            };
            let mut base = key.clone();
            base.remove(pos);
            if !self.stable(base.len()) {
                continue;
            }
            let mut expect = Rational::zero();
            for k in 0..base.len() {
                if base[k] == 0 {
                    continue;
                }
                let mut lowered = base.clone();
                lowered[k] -= 1;
                expect += &self.entries[&canonical(&lowered)];
            }
            report.checked += 1;
            if &expect != value {
                report.violations.push(format!(
                    "string ({}): {} != {}",
                    fmt_indices(key),
                    value,
                    expect
                ));
            }
        }
        Ok(report)
    }

    /// `⟨τ_1 Π τ_{i_a}⟩ = (2g - 2 + n) ⟨Π τ_{i_a}⟩` whenever `M_{g,n}` is stable.
    pub fn check_dilaton(&self) -> Result<IdentityReport> {
        self.ensure_complete()?;
        let mut report = IdentityReport::default();
        for (key, value) in &self.entries {
            let Some(pos) = key.iter().position(|&i| i == 1) else {
                continue;
            };
            let mut base = key.clone();
            base.remove(pos);
            if !self.stable(base.len()) {
                continue;
            }
            let factor = BigInt::from(2 * self.g as i64 - 2 + base.len() as i64);
            let expect = &self.entries[&base] * factor;
            report.checked += 1;
            if &expect != value {
                report.violations.push(format!(
                    "dilaton ({}): {} != {}",
                    fmt_indices(key),
                    value,
                    expect
                ));
            }
        }
        Ok(report)
    }

    /// Nonzero entries off the dimension constraint.
    pub fn dimension_violations(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(k, v)| !self.is_admissible(k) && !v.is_zero())
            .map(|(k, v)| format!("({}) = {}", fmt_indices(k), v))
            .collect()
    }

    /// `g,class,indices,value` rows for the admissible entries.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,class,indices,value\n");
        for (k, v) in self.admissible_entries() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.g,
                self.class,
                fmt_indices(k),
                rational::to_text(v)
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .admissible_entries()
            .into_iter()
            .map(|(k, v)| {
                json!({
                    "g": self.g,
                    "class": self.class.name(),
                    "indices": fmt_indices(k),
                    "value": rational::to_text(v),
                })
            })
            .collect();
        Value::Array(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn t_exps(max_index: u32, pairs: &[(usize, u32)]) -> Vec<u32> {
        let mut e = vec![0; max_index as usize + 1];
        for &(i, m) in pairs {
            e[i] = m;
        }
        e
    }

    #[test]
    fn v_coefficients() {
        let v = v_series(3, 4);
        assert_eq!(v.coeff(&t_exps(3, &[(0, 1)])).unwrap(), int(1));
        assert_eq!(v.coeff(&t_exps(3, &[(0, 2), (2, 1)])).unwrap(), frac(1, 2));
        assert_eq!(v.coeff(&t_exps(3, &[(0, 1), (1, 2)])).unwrap(), int(1));
        assert_eq!(
            v.vanish(&[1, 2, 3]),
            TruncatedSeries::var(v.alphabet(), 4, 0)
        );
    }

    #[test]
    fn fixed_point_oracle() {
        // V = T0/(1 - T1) when only T0, T1 are present.
        let v = v_fixed_point(2, 6).unwrap();
        assert_eq!(v.len(), 6);
        for k in 0..6u32 {
            assert_eq!(v.coeff(&[1, k]).unwrap(), int(1));
        }
        assert!(v_fixed_point(0, 5).unwrap().is_zero());
        assert_eq!(v_fixed_point_oracle(4, 8).unwrap(), v_series(4, 8));
    }

    #[test]
    fn v_k_values() {
        let v1 = v_k_series(1, 4, 3);
        assert_eq!(v1.constant_term(), int(1));
        // V_k(0,..,0,T3,0,..) = T3 δ_{k,3} + δ_{k,1}
        for k in 1..=3u32 {
            let s = v_k_series(k, 4, 3).vanish(&[0, 1, 2, 4]);
            let mut expect = TruncatedSeries::zero(s.alphabet(), 3);
            if k == 3 {
                expect = &expect + &TruncatedSeries::var(s.alphabet(), 3, 3);
            }
            if k == 1 {
                expect = &expect + &TruncatedSeries::one(s.alphabet(), 3);
            }
            assert_eq!(s, expect, "k = {k}");
        }
        assert!(derive_t0(&v_series(3, 4), 2, 3).is_err());
    }

    #[test]
    fn hodge_series_spot_values() {
        let s = hodge_series(2, HodgeClass::LambdaGMinusOne, 4, 2).unwrap();
        assert_eq!(extract_integral(&s, &[3]).unwrap(), frac(1, 480));
        assert_eq!(extract_integral(&s, &[0, 4]).unwrap(), frac(1, 480));
        let h1 = hodge_series(1, HodgeClass::LambdaGMinusOne, 2, 2).unwrap();
        assert_eq!(extract_integral(&h1, &[1]).unwrap(), frac(1, 24));
        let l1 = hodge_series(1, HodgeClass::LambdaG, 2, 2).unwrap();
        assert_eq!(extract_integral(&l1, &[0]).unwrap(), frac(1, 24));
        assert_eq!(extract_integral(&l1, &[0, 1]).unwrap(), frac(1, 24));
        assert!(extract_integral(&l1, &[5]).is_err());
        assert!(extract_integral(&l1, &[0, 0, 0]).is_err());
        assert!(hodge_series(0, HodgeClass::LambdaG, 2, 2).is_err());
    }

    #[test]
    fn closed_form_spot_values() {
        assert_eq!(lambda_g_closed_form(1, &[0]).unwrap(), frac(1, 24));
        assert_eq!(lambda_g_closed_form(2, &[2, 1]).unwrap(), frac(7, 1920));
        assert_eq!(lambda_g_closed_form(2, &[1, 1]).unwrap(), int(0));
    }

    #[test]
    fn theorem_a_spot_values() {
        assert_eq!(theorem_a_value(1).unwrap(), frac(1, 24));
        assert_eq!(theorem_a_value(2).unwrap(), frac(1, 480));
        assert_eq!(theorem_a_value(3).unwrap(), frac(41, 580608));
    }

    #[test]
    fn multisets_are_complete() {
        let all = index_multisets(2, 2);
        // 1 + 3 + 6
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], Vec::<u32>::new());
        assert_eq!(all[1], vec![2]);
    }

    #[test]
    fn table_identities_genus_two() {
        let t = HodgeTable::build(2, HodgeClass::LambdaGMinusOne, 3, 5).unwrap();
        assert_eq!(t.get(&[0, 4]), Some(&frac(1, 480)));
        assert_eq!(t.get(&[3, 1]), Some(&frac(1, 160)));
        assert!(t.check_string().unwrap().passed());
        assert!(t.check_dilaton().unwrap().passed());
        assert!(t.dimension_violations().is_empty());
        let csv = t.to_csv();
        assert!(csv.starts_with("g,class,indices,value\n2,lambda_gm1,3,1/480\n"));
    }

    #[test]
    fn incomplete_or_wrong_tables() {
        let partial =
            HodgeTable::from_entries(1, HodgeClass::LambdaG, 2, 1, vec![(vec![0], frac(1, 24))]);
        assert!(matches!(
            partial.check_string(),
            Err(Error::IncompleteTable(_))
        ));

        let good = HodgeTable::build(1, HodgeClass::LambdaG, 2, 1).unwrap();
        let mut entries: Vec<_> = good
            .entries()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        for (k, v) in entries.iter_mut() {
            if k == &vec![1, 0] {
                *v = frac(1, 12);
            }
        }
        let bad = HodgeTable::from_entries(1, HodgeClass::LambdaG, 2, 1, entries);
        assert!(!bad.check_string().unwrap().passed());
    }
}
