//! Monge normal form z' = F(x, y, y', y'', z): the distribution
//! ker{dy − p dx, dp − q dx, dz − F dx} on coordinates (x, y, p, q, z),
//! spanned by X₁ = ∂x + p∂y + q∂p + F∂z and X₂ = ∂q.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::span_rank;
use crate::ring::Ring;
use crate::scalar::{rat, rat_string, QScalar, Rat};

pub const VARS: [&str; 5] = ["x", "y", "p", "q", "z"];
const X: usize = 0;
const Y: usize = 1;
const P: usize = 2;
const Q: usize = 3;
const Z: usize = 4;

/// Polynomial in (x, y, p, q, z) with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<[u32; 5], Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term([0; 5], c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 5];
        e[i] = 1;
        let mut p = Self::zero();
        p.add_term(e, rat(1, 1));
        p
    }

    fn add_term(&mut self, e: [u32; 5], c: Rat) {
        let v = self.terms.remove(&e).unwrap_or_else(|| rat(0, 1)) + c;
        if v != rat(0, 1) {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(rat(0, 1)),
            1 => self.terms.get(&[0; 5]).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = [0; 5];
                for i in 0..5 {
                    e[i] = e1[i] + e2[i];
                }
                out.add_term(e, c1.clone() * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(rat(1, 1)), |acc, _| acc.mul(self))
    }

    pub fn diff(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.add_term(f, c.clone() * Rat::from_integer(e[i].into()));
        }
        out
    }

    pub fn eval(&self, pt: &[Rat; 5]) -> Rat {
        let mut acc = rat(0, 1);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..5 {
                for _ in 0..e[i] {
                    t *= &pt[i];
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < rat(0, 1);
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        VARS[i].to_string()
                    } else {
                        format!("{}^{p}", VARS[i])
                    }
                })
                .collect();
            let a = if neg { -c.clone() } else { c.clone() };
            if mono.is_empty() {
                write!(f, "{}", rat_string(&a))?;
            } else if a == rat(1, 1) {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", rat_string(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Var(usize),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text)?));
        } else if c.is_ascii_alphabetic() {
            let v = VARS
                .iter()
                .position(|v| v.starts_with(c))
                .ok_or_else(|| Error::Parse(format!("unknown variable {c:?}; expected one of x, y, p, q, z")))?;
            if i + 1 < cs.len() && cs[i + 1].is_ascii_alphabetic() {
                return Err(Error::Parse(format!("unknown symbol starting at {c:?}")));
            }
            out.push(Tok::Var(v));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn parse_decimal(t: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("bad number {t:?}"));
    match t.split_once('.') {
        None => t.parse::<num::BigInt>().map(Rat::from_integer).map_err(|_| bad()),
        Some((a, b)) => {
            if b.contains('.') || (a.is_empty() && b.is_empty()) {
                return Err(bad());
            }
            let digits = format!("{a}{b}");
            let n = digits.parse::<num::BigInt>().map_err(|_| bad())?;
            let d = num::BigInt::from(10u32).pow(b.len() as u32);
            Ok(Rat::new(n, d))
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .filter(|c| *c != rat(0, 1))
                    .ok_or_else(|| Error::Parse("division only by a nonzero constant".into()))?;
                acc = acc.mul(&Poly::constant(rat(1, 1) / c));
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n.is_integer() && n >= rat(0, 1) && n <= rat(64, 1) => {
                    self.pos += 1;
                    let k: u32 = n.to_integer().try_into().expect("bounded");
                    Ok(base.pow(k))
                }
                _ => Err(Error::Parse("exponents must be integers between 0 and 64".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(n))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Poly::var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// Parse a polynomial such as `q^2 + p^3 - 2*x*z` or `3/2 q^2`.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos + 1)));
    }
    Ok(e)
}

/// Vector field with polynomial coefficients in (x, y, p, q, z).
pub type Field = [Poly; 5];

pub fn bracket(u: &Field, v: &Field) -> Field {
    std::array::from_fn(|k| {
        let mut acc = Poly::zero();
        for i in 0..5 {
            acc = acc.add(&u[i].mul(&v[k].diff(i))).sub(&v[i].mul(&u[k].diff(i)));
        }
        acc
    })
}

/// X₁, …, X₅ with X₃ = [X₁, X₂], X₄ = [X₁, X₃], X₅ = [X₂, X₃].
pub fn monge_frame(f: &Poly) -> [Field; 5] {
    let mut x1: Field = Default::default();
    x1[X] = Poly::constant(rat(1, 1));
    x1[Y] = Poly::var(P);
    x1[P] = Poly::var(Q);
    x1[Z] = f.clone();
    let mut x2: Field = Default::default();
    x2[Q] = Poly::constant(rat(1, 1));
    let x3 = bracket(&x1, &x2);
    let x4 = bracket(&x1, &x3);
    let x5 = bracket(&x2, &x3);
    [x1, x2, x3, x4, x5]
}

/// Default exact sample points (x, y, p, q, z).
pub fn default_points() -> Vec<[Rat; 5]> {
    let r = |n: i64, d: i64| rat(n, d);
    vec![
        [r(0, 1), r(0, 1), r(0, 1), r(1, 1), r(0, 1)],
        [r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)],
        [r(1, 1), r(-1, 1), r(2, 1), r(1, 2), r(3, 1)],
        [r(-2, 1), r(1, 1), r(1, 1), r(-1, 1), r(0, 1)],
        [r(1, 3), r(2, 1), r(-1, 1), r(2, 1), r(-1, 1)],
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MongeSample {
    pub point: [String; 5],
    /// Ranks of D, D + [D, D], D + [D, D] + [D, [D, D]].
    pub growth: [usize; 3],
    pub f_qq: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MongeReport {
    pub poly: String,
    pub is235: bool,
    /// ∂²F/∂q² vanishes nowhere on the samples.
    pub f_qq_nonzero: bool,
    pub samples: Vec<MongeSample>,
}

pub fn monge_check(f: &Poly, points: &[[Rat; 5]]) -> MongeReport {
    let frame = monge_frame(f);
    let fqq = f.diff(Q).diff(Q);
    let samples: Vec<MongeSample> = points
        .iter()
        .map(|pt| {
            let at = |fld: &Field| -> Vec<QScalar> { fld.iter().map(|c| QScalar::from_rat(c.eval(pt))).collect() };
            let vs: Vec<Vec<QScalar>> = frame.iter().map(at).collect();
            let growth = [span_rank(&vs[..2]), span_rank(&vs[..3]), span_rank(&vs)];
            MongeSample {
                point: std::array::from_fn(|i| rat_string(&pt[i])),
                growth,
                f_qq: rat_string(&fqq.eval(pt)),
            }
        })
        .collect();
    let is235 = samples.iter().all(|s| s.growth == [2, 3, 5]);
    let f_qq_nonzero = points.iter().all(|pt| !QScalar::from_rat(fqq.eval(pt)).is_zero());
    MongeReport {
        poly: f.to_string(),
        is235,
        f_qq_nonzero,
        samples,
    }
}
