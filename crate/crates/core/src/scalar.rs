//! Exact arithmetic in the biquadratic field Q(√2, √5).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn rat_cbrt(r: &Rat) -> Option<Rat> {
    let n = r.numer().cbrt();
    let d = r.denom().cbrt();
    if &(&n * &n * &n) == r.numer() && &(&d * &d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// a + b√2 with rational a, b. Used for the tower Q ⊂ Q(√2) ⊂ Q(√2,√5).
#[derive(Clone, Debug, PartialEq)]
struct Q2 {
    a: Rat,
    b: Rat,
}

impl Q2 {
    fn zero() -> Self {
        Q2 {
            a: Rat::zero(),
            b: Rat::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Q2) -> Q2 {
        Q2 {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
    fn sub(&self, o: &Q2) -> Q2 {
        Q2 {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
    fn mul(&self, o: &Q2) -> Q2 {
        Q2 {
            a: &self.a * &o.a + Rat::from_integer(2.into()) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
    fn scale(&self, r: &Rat) -> Q2 {
        Q2 {
            a: &self.a * r,
            b: &self.b * r,
        }
    }
    fn sign(&self) -> i32 {
        let sa = rsign(&self.a);
        let sb = rsign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with 2b²
        let d = &self.a * &self.a - Rat::from_integer(2.into()) * &self.b * &self.b;
        if d.is_positive() {
            sa
        } else {
            sb
        }
    }
    fn inv(&self) -> Option<Q2> {
        let n = &self.a * &self.a - Rat::from_integer(2.into()) * &self.b * &self.b;
        if n.is_zero() {
            return None;
        }
        Some(Q2 {
            a: &self.a / &n,
            b: -&self.b / &n,
        })
    }
    fn sqrt(&self) -> Option<Q2> {
        if self.is_zero() {
            return Some(Q2::zero());
        }
        // (u + v√2)² = u² + 2v² + 2uv√2
        let disc = &self.a * &self.a - Rat::from_integer(2.into()) * &self.b * &self.b;
        let r = rat_sqrt(&disc)?;
        let half = rat(1, 2);
        for cand in [(&self.a + &r) * &half, (&self.a - &r) * &half] {
            if let Some(u) = rat_sqrt(&cand) {
                let v = if u.is_zero() {
                    match rat_sqrt(&(&self.a * &half)) {
                        Some(v) => v,
                        None => continue,
                    }
                } else {
                    &self.b / (Rat::from_integer(2.into()) * &u)
                };
                let root = Q2 { a: u, b: v };
                if &root.mul(&root) == self {
                    return Some(root);
                }
            }
        }
        None
    }
}

fn rsign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// a + b√2 + c√5 + d√10 with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[String; 4]", try_from = "[String; 4]")]
pub struct QScalar {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl QScalar {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        QScalar { a, b, c, d }
    }

    pub fn from_rat(r: Rat) -> Self {
        QScalar {
            a: r,
            b: Rat::zero(),
            c: Rat::zero(),
            d: Rat::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    pub fn sqrt2() -> Self {
        QScalar {
            a: Rat::zero(),
            b: Rat::one(),
            c: Rat::zero(),
            d: Rat::zero(),
        }
    }

    pub fn sqrt5() -> Self {
        QScalar {
            a: Rat::zero(),
            b: Rat::zero(),
            c: Rat::one(),
            d: Rat::zero(),
        }
    }

    pub fn sqrt10() -> Self {
        QScalar {
            a: Rat::zero(),
            b: Rat::zero(),
            c: Rat::zero(),
            d: Rat::one(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let m = |x: &Rat| if x.is_zero() { Rat::zero() } else { x * r };
        QScalar {
            a: m(&self.a),
            b: m(&self.b),
            c: m(&self.c),
            d: m(&self.d),
        }
    }

    /// √2 ↦ −√2 (fixes √5).
    fn conj2(&self) -> Self {
        QScalar {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    fn split5(&self) -> (Q2, Q2) {
        (
            Q2 {
                a: self.a.clone(),
                b: self.b.clone(),
            },
            Q2 {
                a: self.c.clone(),
                b: self.d.clone(),
            },
        )
    }

    fn join5(p: Q2, q: Q2) -> Self {
        QScalar {
            a: p.a,
            b: p.b,
            c: q.a,
            d: q.b,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x·σ₂(x) = u + v√5 with u, v rational; then (u + v√5)(u − v√5) = u² − 5v².
        let c2 = self.conj2();
        let prod = self.clone() * &c2;
        debug_assert!(prod.b.is_zero() && prod.d.is_zero());
        let u = prod.a.clone();
        let v = prod.c.clone();
        let n = &u * &u - Rat::from_integer(5.into()) * &v * &v;
        let c5 = QScalar {
            a: u,
            b: Rat::zero(),
            c: -v,
            d: Rat::zero(),
        };
        Ok((c2 * &c5).scale(&n.recip()))
    }

    /// Exact sign (−1, 0, 1) under the real embedding with positive roots.
    pub fn signum(&self) -> i32 {
        let (p, q) = self.split5();
        let sp = p.sign();
        let sq = q.sign();
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        let d = p.mul(&p).sub(&q.mul(&q).scale(&Rat::from_integer(5.into())));
        if d.sign() > 0 {
            sp
        } else {
            sq
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Square root inside the field, if one exists (non-negative root).
    pub fn sqrt(&self) -> Option<Self> {
        if self.signum() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (p, q) = self.split5();
        // (u + v√5)² = u² + 5v² + 2uv√5 with u, v in Q(√2)
        let disc = p.mul(&p).sub(&q.mul(&q).scale(&Rat::from_integer(5.into())));
        let r = disc.sqrt()?;
        let half = rat(1, 2);
        for cand in [p.add(&r).scale(&half), p.sub(&r).scale(&half)] {
            let Some(u) = cand.sqrt() else { continue };
            let v = if u.is_zero() {
                match p.scale(&rat(1, 5)).sqrt() {
                    Some(v) => v,
                    None => continue,
                }
            } else {
                match u.scale(&Rat::from_integer(2.into())).inv() {
                    Some(i) => q.mul(&i),
                    None => continue,
                }
            };
            let root = Self::join5(u, v);
            if root.clone() * &root == *self {
                return Some(root.abs());
            }
        }
        None
    }

    /// Real cube root; only rational inputs are supported.
    pub fn cbrt(&self) -> Option<Self> {
        let r = self.as_rational()?;
        rat_cbrt(r).map(Self::from_rat)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &Rat| r.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * 2f64.sqrt() + f(&self.c) * 5f64.sqrt() + f(&self.d) * 10f64.sqrt()
    }

    pub fn to_strings(&self) -> [String; 4] {
        [
            rat_string(&self.a),
            rat_string(&self.b),
            rat_string(&self.c),
            rat_string(&self.d),
        ]
    }

    pub fn from_strings<S: AsRef<str>>(parts: &[S]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 rational strings, got {}",
                parts.len()
            )));
        }
        Ok(QScalar {
            a: parse_rat(parts[0].as_ref())?,
            b: parse_rat(parts[1].as_ref())?,
            c: parse_rat(parts[2].as_ref())?,
            d: parse_rat(parts[3].as_ref())?,
        })
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self.clone() - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Ring for QScalar {
    fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }
    fn one() -> Self {
        Self::from_rat(Rat::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
    fn from_int(n: i64) -> Self {
        Self::int(n)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl From<QScalar> for [String; 4] {
    fn from(q: QScalar) -> Self {
        q.to_strings()
    }
}

impl TryFrom<[String; 4]> for QScalar {
    type Error = Error;
    fn try_from(parts: [String; 4]) -> Result<Self> {
        QScalar::from_strings(&parts)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<Rat> for QScalar {
    fn from(r: Rat) -> Self {
        Self::from_rat(r)
    }
}

impl PartialOrd for QScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

fn add_rat(a: Rat, b: &Rat) -> Rat {
    if b.is_zero() {
        a
    } else if a.is_zero() {
        b.clone()
    } else {
        a + b
    }
}

fn sub_rat(a: Rat, b: &Rat) -> Rat {
    if b.is_zero() {
        a
    } else if a.is_zero() {
        -b.clone()
    } else {
        a - b
    }
}

fn mul_ref(x: &QScalar, y: &QScalar) -> QScalar {
    // most values met in practice are rational
    if x.is_rational() {
        return if x.a.is_zero() { QScalar::zero() } else { y.scale(&x.a) };
    }
    if y.is_rational() {
        return if y.a.is_zero() { QScalar::zero() } else { x.scale(&y.a) };
    }
    let two = Rat::from_integer(2.into());
    let five = Rat::from_integer(5.into());
    let ten = Rat::from_integer(10.into());
    QScalar {
        a: &x.a * &y.a + &two * &x.b * &y.b + &five * &x.c * &y.c + &ten * &x.d * &y.d,
        b: &x.a * &y.b + &x.b * &y.a + &five * (&x.c * &y.d + &x.d * &y.c),
        c: &x.a * &y.c + &x.c * &y.a + &two * (&x.b * &y.d + &x.d * &y.b),
        d: &x.a * &y.d + &x.d * &y.a + &x.b * &y.c + &x.c * &y.b,
    }
}

impl Add<&QScalar> for QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        QScalar {
            a: add_rat(self.a, &o.a),
            b: add_rat(self.b, &o.b),
            c: add_rat(self.c, &o.c),
            d: add_rat(self.d, &o.d),
        }
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, o: QScalar) -> QScalar {
        self + &o
    }
}

impl Sub<&QScalar> for QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        QScalar {
            a: sub_rat(self.a, &o.a),
            b: sub_rat(self.b, &o.b),
            c: sub_rat(self.c, &o.c),
            d: sub_rat(self.d, &o.d),
        }
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, o: QScalar) -> QScalar {
        self - &o
    }
}

impl Mul<&QScalar> for QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        mul_ref(&self, o)
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, o: QScalar) -> QScalar {
        mul_ref(&self, &o)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        mul_ref(self, o)
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Div<&QScalar> for QScalar {
    type Output = QScalar;
    /// Panics on division by zero; use [`QScalar::inv`] for a checked version.
    fn div(self, o: &QScalar) -> QScalar {
        self * &o.inv().expect("division by zero in QScalar")
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (r, tag) in [(&self.a, ""), (&self.b, "√2"), (&self.c, "√5"), (&self.d, "√10")] {
            if r.is_zero() {
                continue;
            }
            let body = if tag.is_empty() {
                rat_string(r)
            } else if r.is_one() {
                tag.to_string()
            } else if *r == -Rat::one() {
                format!("-{tag}")
            } else {
                format!("{}{tag}", rat_string(r))
            };
            parts.push(body);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_product() {
        let x = QScalar::one() + &QScalar::sqrt2();
        let y = QScalar::one() - &QScalar::sqrt2();
        assert_eq!(x * &y, QScalar::int(-1));
    }

    #[test]
    fn generators_multiply() {
        assert_eq!(QScalar::sqrt2() * &QScalar::sqrt5(), QScalar::sqrt10());
        assert_eq!(QScalar::sqrt10() * &QScalar::sqrt10(), QScalar::int(10));
        assert_eq!(
            QScalar::sqrt2() * &QScalar::sqrt10(),
            QScalar::sqrt5().scale(&rat(2, 1))
        );
    }

    #[test]
    fn invert_sqrt10() {
        assert_eq!(QScalar::sqrt10().inv().unwrap(), QScalar::sqrt10().scale(&rat(1, 10)));
        assert_eq!(QScalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn signs() {
        // √2 + √5 − √10 ≈ 0.4927
        let x = QScalar::sqrt2() + &QScalar::sqrt5() - &QScalar::sqrt10();
        assert_eq!(x.signum(), 1);
        // 3√2 − √10·... : 7 − 5√2 ≈ −0.071
        let y = QScalar::int(7) - &QScalar::sqrt2().scale(&rat(5, 1));
        assert_eq!(y.signum(), -1);
        assert_eq!(QScalar::zero().signum(), 0);
    }

    #[test]
    fn square_roots() {
        let x = QScalar::int(3) + &QScalar::sqrt2().scale(&rat(2, 1)); // (1+√2)²
        assert_eq!(x.sqrt().unwrap(), QScalar::one() + &QScalar::sqrt2());
        assert_eq!(QScalar::int(10).sqrt().unwrap(), QScalar::sqrt10());
        assert_eq!(QScalar::frac(5, 2).sqrt().unwrap(), QScalar::sqrt10().scale(&rat(1, 2)));
        assert!(QScalar::int(3).sqrt().is_none());
        assert!(QScalar::int(-4).sqrt().is_none());
        let s = QScalar::sqrt2() + &QScalar::sqrt5();
        assert_eq!((s.clone() * &s).sqrt().unwrap(), s);
    }

    #[test]
    fn cube_roots() {
        assert_eq!(QScalar::frac(-8, 27).cbrt().unwrap(), QScalar::frac(-2, 3));
        assert!(QScalar::int(2).cbrt().is_none());
    }

    #[test]
    fn display() {
        let x = QScalar::new(rat(1, 2), rat(-1, 1), Rat::zero(), rat(3, 1));
        assert_eq!(x.to_string(), "1/2 - √2 + 3√10");
    }
}
