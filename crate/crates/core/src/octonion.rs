//! Octonions (ξ = +1) and split octonions (ξ = −1) by Cayley–Dickson
//! doubling of the quaternions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ring::Ring;
use crate::scalar::QScalar;

/// Which composition algebra: the definite octonions or the split ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Xi {
    Definite,
    Split,
}

impl Xi {
    pub fn sign(self) -> i64 {
        match self {
            Xi::Definite => 1,
            Xi::Split => -1,
        }
    }

    pub fn from_sign(s: i64) -> Result<Self> {
        match s {
            1 => Ok(Xi::Definite),
            -1 => Ok(Xi::Split),
            _ => Err(Error::InvalidParam(format!("ξ must be ±1, got {s}"))),
        }
    }
}

type Quat = [QScalar; 4];

fn qmul(x: &Quat, y: &Quat) -> Quat {
    let [a0, a1, a2, a3] = x;
    let [b0, b1, b2, b3] = y;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

fn qconj(x: &Quat) -> Quat {
    [x[0].clone(), -x[1].clone(), -x[2].clone(), -x[3].clone()]
}

fn qadd(x: &Quat, y: &Quat, sign: i64) -> Quat {
    let s = QScalar::int(sign);
    std::array::from_fn(|i| x[i].clone() + &(y[i].clone() * &s))
}

/// Element of the (split) octonions in the basis (1, e₁, …, e₇).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Octonion {
    pub c: [QScalar; 8],
    pub xi: Xi,
}

impl Octonion {
    pub fn new(c: [QScalar; 8], xi: Xi) -> Self {
        Octonion { c, xi }
    }

    pub fn zero(xi: Xi) -> Self {
        Octonion {
            c: std::array::from_fn(|_| QScalar::zero()),
            xi,
        }
    }

    pub fn one(xi: Xi) -> Self {
        let mut o = Self::zero(xi);
        o.c[0] = QScalar::one();
        o
    }

    /// Basis element e_i for i in 0..8 (e₀ = 1).
    pub fn basis(i: usize, xi: Xi) -> Self {
        let mut o = Self::zero(xi);
        o.c[i] = QScalar::one();
        o
    }

    // The imaginary basis is laid out over the doubled quaternions as
    // e₁,e₂,e₃ = (i,0),(j,0),(k,0) and e₄,e₅,e₆,e₇ = (0,1),−(0,i),−(0,j),(0,k),
    // which reproduces the standard table for both values of ξ.
    fn to_pair(&self) -> (Quat, Quat) {
        let c = &self.c;
        (
            [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()],
            [c[4].clone(), -c[5].clone(), -c[6].clone(), c[7].clone()],
        )
    }

    fn from_pair(a: Quat, b: Quat, xi: Xi) -> Self {
        let [a0, a1, a2, a3] = a;
        let [b0, b1, b2, b3] = b;
        Octonion {
            c: [a0, a1, a2, a3, b0, -b1, -b2, b3],
            xi,
        }
    }

    pub fn conj(&self) -> Self {
        let mut o = self.clone();
        for i in 1..8 {
            o.c[i] = -o.c[i].clone();
        }
        o
    }

    pub fn re(&self) -> QScalar {
        self.c[0].clone()
    }

    pub fn im(&self) -> ImaginaryVector {
        ImaginaryVector {
            c: std::array::from_fn(|i| self.c[i + 1].clone()),
            xi: self.xi,
        }
    }

    /// (a,b)(c,d) = (ac − ξ d b̄, ā d + c b).
    pub fn mul(&self, o: &Octonion) -> Result<Octonion> {
        if self.xi != o.xi {
            return Err(Error::XiMismatch);
        }
        let (a, b) = self.to_pair();
        let (c, d) = o.to_pair();
        let first = qadd(&qmul(&a, &c), &qmul(&d, &qconj(&b)), -self.xi.sign());
        let second = qadd(&qmul(&qconj(&a), &d), &qmul(&c, &b), 1);
        Ok(Self::from_pair(first, second, self.xi))
    }

    pub fn add(&self, o: &Octonion) -> Octonion {
        Octonion {
            c: std::array::from_fn(|i| self.c[i].clone() + &o.c[i]),
            xi: self.xi,
        }
    }

    pub fn sub(&self, o: &Octonion) -> Octonion {
        Octonion {
            c: std::array::from_fn(|i| self.c[i].clone() - &o.c[i]),
            xi: self.xi,
        }
    }

    /// Quadratic norm x x̄ (indefinite in the split case).
    pub fn norm(&self) -> QScalar {
        self.mul(&self.conj()).expect("same ξ").re()
    }
}

/// Imaginary (split) octonion in the basis (e₁, …, e₇).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryVector {
    pub c: [QScalar; 7],
    pub xi: Xi,
}

impl ImaginaryVector {
    pub fn new(c: [QScalar; 7], xi: Xi) -> Self {
        ImaginaryVector { c, xi }
    }

    pub fn from_slice(v: &[QScalar], xi: Xi) -> Self {
        assert_eq!(v.len(), 7);
        ImaginaryVector {
            c: std::array::from_fn(|i| v[i].clone()),
            xi,
        }
    }

    pub fn zero(xi: Xi) -> Self {
        ImaginaryVector {
            c: std::array::from_fn(|_| QScalar::zero()),
            xi,
        }
    }

    /// e_{i+1} for i in 0..7.
    pub fn basis(i: usize, xi: Xi) -> Self {
        let mut v = Self::zero(xi);
        v.c[i] = QScalar::one();
        v
    }

    pub fn to_octonion(&self) -> Octonion {
        let mut o = Octonion::zero(self.xi);
        for i in 0..7 {
            o.c[i + 1] = self.c[i].clone();
        }
        o
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Ring::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        ImaginaryVector {
            c: std::array::from_fn(|i| self.c[i].clone() + &o.c[i]),
            xi: self.xi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        ImaginaryVector {
            c: std::array::from_fn(|i| self.c[i].clone() - &o.c[i]),
            xi: self.xi,
        }
    }

    pub fn scale(&self, k: &QScalar) -> Self {
        ImaginaryVector {
            c: std::array::from_fn(|i| self.c[i].clone() * k),
            xi: self.xi,
        }
    }

    /// x × y = Im(xy) = −Im(x ȳ).
    pub fn cross(&self, y: &Self) -> Result<Self> {
        Ok(self.to_octonion().mul(&y.to_octonion())?.im())
    }

    /// x · y = Re(x ȳ).
    pub fn dot(&self, y: &Self) -> Result<QScalar> {
        Ok(self.to_octonion().mul(&y.to_octonion().conj())?.re())
    }

    pub fn is_null(&self) -> bool {
        self.dot(self).expect("same ξ").is_zero()
    }

    /// Matrix of J_x : y ↦ −x × y.
    pub fn jmap(&self) -> Mat<QScalar> {
        let cols: Vec<Vec<QScalar>> = (0..7)
            .map(|j| {
                let e = Self::basis(j, self.xi);
                self.cross(&e).expect("same ξ").scale(&QScalar::int(-1)).c.to_vec()
            })
            .collect();
        Mat::from_cols(&cols)
    }
}

/// Gram matrix of the dot product, diag(1,1,1,ξ,ξ,ξ,ξ).
pub fn dot_matrix(xi: Xi) -> Mat<QScalar> {
    Mat::from_fn(7, 7, |i, j| {
        let a = ImaginaryVector::basis(i, xi);
        let b = ImaginaryVector::basis(j, xi);
        a.dot(&b).expect("same ξ")
    })
}

/// Dot product recovered from the cross product, −(1/6) tr(x × (y × ·)).
pub fn dot_from_cross(x: &ImaginaryVector, y: &ImaginaryVector) -> Result<QScalar> {
    let mut tr = QScalar::zero();
    for k in 0..7 {
        let e = ImaginaryVector::basis(k, x.xi);
        tr = tr + &x.cross(&y.cross(&e)?)?.c[k];
    }
    Ok(tr * &QScalar::frac(-1, 6))
}

/// Orthogonal complement of a family under the dot product.
pub fn orthogonal_complement(vs: &[Vec<QScalar>], xi: Xi) -> Vec<Vec<QScalar>> {
    if vs.is_empty() {
        return (0..7).map(|i| ImaginaryVector::basis(i, xi).c.to_vec()).collect();
    }
    let g = dot_matrix(xi);
    let rows: Vec<Vec<QScalar>> = vs.iter().map(|v| g.apply(v)).collect();
    Mat::from_rows(rows).kernel()
}

/// The chain ⟨x⟩ ⊂ ker J_x ⊂ (ker J_x)⊥ ⊂ ⟨x⟩⊥ for a nonzero null x.
#[derive(Clone, Debug)]
pub struct NullFiltration {
    pub line: Vec<Vec<QScalar>>,
    pub kernel: Vec<Vec<QScalar>>,
    pub kernel_perp: Vec<Vec<QScalar>>,
    pub line_perp: Vec<Vec<QScalar>>,
}

impl NullFiltration {
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (
            self.line.len(),
            self.kernel.len(),
            self.kernel_perp.len(),
            self.line_perp.len(),
        )
    }
}

pub fn null_filtration(x: &ImaginaryVector) -> Result<NullFiltration> {
    if x.is_zero() {
        return Err(Error::Precondition("null filtration of the zero vector".into()));
    }
    if !x.is_null() {
        return Err(Error::Precondition("vector is not null".into()));
    }
    let line = vec![x.c.to_vec()];
    let kernel = x.jmap().kernel();
    let kernel_perp = orthogonal_complement(&kernel, x.xi);
    let line_perp = orthogonal_complement(&line, x.xi);
    Ok(NullFiltration {
        line,
        kernel,
        kernel_perp,
        line_perp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, xi: Xi) -> ImaginaryVector {
        ImaginaryVector::basis(i - 1, xi)
    }

    #[test]
    fn e1_e2() {
        let xi = Xi::Split;
        assert_eq!(e(1, xi).cross(&e(2, xi)).unwrap(), e(3, xi));
        assert_eq!(e(1, xi).dot(&e(2, xi)).unwrap(), QScalar::zero());
    }

    #[test]
    fn e4_cross_e5_split() {
        let xi = Xi::Split;
        assert_eq!(e(4, xi).cross(&e(5, xi)).unwrap(), e(1, xi).scale(&QScalar::int(-1)));
    }

    #[test]
    fn unit_acts_trivially() {
        let x = Octonion::new(std::array::from_fn(|i| QScalar::int(i as i64 - 3)), Xi::Split);
        assert_eq!(Octonion::one(Xi::Split).mul(&x).unwrap(), x);
        assert_eq!(x.mul(&Octonion::one(Xi::Split)).unwrap(), x);
    }

    #[test]
    fn dot_is_diagonal() {
        for xi in [Xi::Definite, Xi::Split] {
            let g = dot_matrix(xi);
            for i in 0..7 {
                let want = if i < 3 { 1 } else { xi.sign() };
                assert_eq!(g[(i, i)], QScalar::int(want));
            }
        }
    }

    #[test]
    fn jmap_examples() {
        let xi = Xi::Split;
        let j = e(1, xi).jmap();
        assert_eq!(j.apply(&e(2, xi).c), e(3, xi).scale(&QScalar::int(-1)).c.to_vec());
        let x = e(1, xi).add(&e(4, xi));
        assert!(j.apply(&e(1, xi).c).iter().all(Ring::is_zero));
        assert_eq!(null_filtration(&x).unwrap().dims(), (1, 3, 4, 6));
        assert!(null_filtration(&e(1, xi)).is_err());
    }

    #[test]
    fn mixed_xi_rejected() {
        assert_eq!(e(1, Xi::Split).cross(&e(2, Xi::Definite)), Err(Error::XiMismatch));
    }
}
