//! Laurent polynomials in the collar parameter s over Q(√2, √5).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::{rat, QScalar};

/// How the collar coordinate ρ is expressed through s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    /// ρ = s
    Rho,
    /// ρ = s², the τ > 0 side
    PosSq,
    /// ρ = −s², the τ < 0 side
    NegSq,
}

impl Param {
    pub fn tag(self) -> &'static str {
        match self {
            Param::Rho => "rho",
            Param::PosSq => "+s2",
            Param::NegSq => "-s2",
        }
    }

    pub fn from_tag(t: &str) -> Result<Self> {
        match t {
            "rho" => Ok(Param::Rho),
            "+s2" => Ok(Param::PosSq),
            "-s2" => Ok(Param::NegSq),
            _ => Err(Error::Parse(format!("unknown parameterization {t:?}"))),
        }
    }
}

/// Finite sum Σ c_k s^k. Constants carry no meaningful parameterization and
/// combine with anything; mixing two non-constant values with different
/// parameterizations is a programming error and panics.
#[derive(Clone)]
pub struct CoeffFn {
    param: Param,
    terms: BTreeMap<i32, QScalar>,
}

impl CoeffFn {
    pub fn zero_in(param: Param) -> Self {
        CoeffFn {
            param,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(q: QScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        CoeffFn {
            param: Param::Rho,
            terms,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(QScalar::int(n))
    }

    pub fn monomial(param: Param, exp: i32, q: QScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(exp, q);
        }
        CoeffFn { param, terms }
    }

    pub fn s(param: Param) -> Self {
        Self::monomial(param, 1, QScalar::one())
    }

    /// The collar coordinate ρ itself.
    pub fn rho(param: Param) -> Self {
        match param {
            Param::Rho => Self::monomial(param, 1, QScalar::one()),
            Param::PosSq => Self::monomial(param, 2, QScalar::one()),
            Param::NegSq => Self::monomial(param, 2, QScalar::int(-1)),
        }
    }

    pub fn from_terms(param: Param, terms: impl IntoIterator<Item = (i32, QScalar)>) -> Self {
        let mut out = Self::zero_in(param);
        for (k, q) in terms {
            out.add_term(k, q);
        }
        out
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn terms(&self) -> &BTreeMap<i32, QScalar> {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    pub fn constant_term(&self) -> QScalar {
        self.terms.get(&0).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn as_constant(&self) -> Option<QScalar> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn coeff(&self, k: i32) -> QScalar {
        self.terms.get(&k).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, k: i32, q: QScalar) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(QScalar::zero);
        *slot = slot.clone() + &q;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn merged_param(&self, other: &CoeffFn) -> Param {
        if self.is_constant() {
            return other.param;
        }
        if other.is_constant() {
            return self.param;
        }
        assert_eq!(
            self.param, other.param,
            "mixing Laurent values with different collar parameterizations"
        );
        self.param
    }

    pub fn scale(&self, q: &QScalar) -> Self {
        let mut out = Self::zero_in(self.param);
        for (k, c) in &self.terms {
            out.add_term(*k, c.clone() * q);
        }
        out
    }

    /// Multiply by s^k.
    pub fn shift(&self, k: i32) -> Self {
        CoeffFn {
            param: self.param,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn d_s(&self) -> Self {
        let mut out = Self::zero_in(self.param);
        for (k, c) in &self.terms {
            if *k != 0 {
                out.add_term(k - 1, c.clone() * &QScalar::int(*k as i64));
            }
        }
        out
    }

    /// d/dρ expressed in s.
    pub fn d_rho(&self) -> Self {
        match self.param {
            Param::Rho => self.d_s(),
            Param::PosSq | Param::NegSq => {
                let sign = if self.param == Param::PosSq { 1 } else { -1 };
                let mut out = Self::zero_in(self.param);
                for (k, c) in &self.terms {
                    if *k != 0 {
                        out.add_term(k - 2, c.scale(&rat(sign * *k as i64, 2)));
                    }
                }
                out
            }
        }
    }

    /// Re-express a ρ-polynomial (param Rho) in s with ρ = ±s².
    pub fn to_param(&self, target: Param) -> Self {
        if self.is_constant() {
            let mut out = self.clone();
            out.param = target;
            return out;
        }
        assert_eq!(
            self.param,
            Param::Rho,
            "only ρ-parameterized values can be re-expressed"
        );
        match target {
            Param::Rho => self.clone(),
            Param::PosSq | Param::NegSq => {
                let mut out = Self::zero_in(target);
                for (k, c) in &self.terms {
                    let c = if target == Param::NegSq && k.rem_euclid(2) == 1 {
                        -c.clone()
                    } else {
                        c.clone()
                    };
                    out.add_term(2 * k, c);
                }
                out
            }
        }
    }

    /// Evaluate at a concrete value of s.
    pub fn eval(&self, s: &QScalar) -> Result<QScalar> {
        let mut acc = QScalar::zero();
        if self.terms.keys().any(|&k| k < 0) && s.is_zero() {
            return Err(Error::DivisionByZero);
        }
        for (k, c) in &self.terms {
            acc = acc + &(c.clone() * &qpow(s, *k)?);
        }
        Ok(acc)
    }

    /// Polynomial in s with no negative powers.
    pub fn is_regular(&self) -> bool {
        self.min_exp().is_none_or(|k| k >= 0)
    }

    pub fn to_f64(&self, s: f64) -> f64 {
        self.terms.iter().map(|(k, c)| c.to_f64() * s.powi(*k)).sum()
    }
}

fn qpow(s: &QScalar, k: i32) -> Result<QScalar> {
    let base = if k < 0 { s.inv()? } else { s.clone() };
    let mut acc = QScalar::one();
    for _ in 0..k.unsigned_abs() {
        acc = acc * &base;
    }
    Ok(acc)
}

impl PartialEq for CoeffFn {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.param == other.param || self.is_constant())
    }
}

impl Ring for CoeffFn {
    fn zero() -> Self {
        Self::zero_in(Param::Rho)
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_int(n: i64) -> Self {
        Self::int(n)
    }
    /// Only monomials are units.
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(Self::monomial(self.param, -k, c.inv().ok()?))
    }
}

impl From<QScalar> for CoeffFn {
    fn from(q: QScalar) -> Self {
        Self::constant(q)
    }
}

impl Add<&CoeffFn> for CoeffFn {
    type Output = CoeffFn;
    fn add(mut self, o: &CoeffFn) -> CoeffFn {
        self.param = self.merged_param(o);
        for (k, c) in &o.terms {
            self.add_term(*k, c.clone());
        }
        self
    }
}

impl Add for CoeffFn {
    type Output = CoeffFn;
    fn add(self, o: CoeffFn) -> CoeffFn {
        self + &o
    }
}

impl Sub<&CoeffFn> for CoeffFn {
    type Output = CoeffFn;
    fn sub(mut self, o: &CoeffFn) -> CoeffFn {
        self.param = self.merged_param(o);
        for (k, c) in &o.terms {
            self.add_term(*k, -c.clone());
        }
        self
    }
}

impl Sub for CoeffFn {
    type Output = CoeffFn;
    fn sub(self, o: CoeffFn) -> CoeffFn {
        self - &o
    }
}

fn mul_ref(x: &CoeffFn, y: &CoeffFn) -> CoeffFn {
    let mut out = CoeffFn::zero_in(x.merged_param(y));
    for (i, a) in &x.terms {
        for (j, b) in &y.terms {
            out.add_term(i + j, a * b);
        }
    }
    out
}

impl Mul<&CoeffFn> for CoeffFn {
    type Output = CoeffFn;
    fn mul(self, o: &CoeffFn) -> CoeffFn {
        mul_ref(&self, o)
    }
}

impl Mul for CoeffFn {
    type Output = CoeffFn;
    fn mul(self, o: CoeffFn) -> CoeffFn {
        mul_ref(&self, &o)
    }
}

impl<'a> Mul<&'a CoeffFn> for &'a CoeffFn {
    type Output = CoeffFn;
    fn mul(self, o: &CoeffFn) -> CoeffFn {
        mul_ref(self, o)
    }
}

impl Neg for CoeffFn {
    type Output = CoeffFn;
    fn neg(self) -> CoeffFn {
        CoeffFn {
            param: self.param,
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl fmt::Debug for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let var = if self.param == Param::Rho { "ρ" } else { "s" };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c}){var}"),
                _ => format!("({c}){var}^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_derivative_in_each_chart() {
        // ρ² → 2ρ regardless of parameterization
        for p in [Param::Rho, Param::PosSq, Param::NegSq] {
            let r = CoeffFn::rho(p);
            let r2 = r.clone() * &r;
            assert_eq!(r2.d_rho(), r.scale(&QScalar::int(2)));
            assert_eq!(r.d_rho(), CoeffFn::int(1));
        }
    }

    #[test]
    fn d_s_lowers_exponent() {
        let f = CoeffFn::monomial(Param::PosSq, -3, QScalar::int(2));
        assert_eq!(f.d_s(), CoeffFn::monomial(Param::PosSq, -4, QScalar::int(-6)));
    }

    #[test]
    fn substitution() {
        let f = CoeffFn::rho(Param::Rho) + &CoeffFn::int(3);
        let g = f.to_param(Param::NegSq);
        assert_eq!(g, CoeffFn::rho(Param::NegSq) + &CoeffFn::int(3));
        assert_eq!(g.eval(&QScalar::int(2)).unwrap(), QScalar::int(-1));
    }

    #[test]
    fn monomial_inverse() {
        let f = CoeffFn::monomial(Param::PosSq, 2, QScalar::sqrt2());
        let g = f.try_inv().unwrap();
        assert_eq!(f * &g, CoeffFn::int(1));
        assert!((CoeffFn::rho(Param::Rho) + &CoeffFn::int(1)).try_inv().is_none());
    }

    #[test]
    #[should_panic]
    fn parameterizations_do_not_mix() {
        let _ = CoeffFn::s(Param::PosSq) + &CoeffFn::s(Param::NegSq);
    }
}
