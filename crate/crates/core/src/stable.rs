//! Stable 3-forms in dimensions 6 and 7: classification, the induced
//! ε-complex structure, the metric of a 3-form in dimension 7, and the
//! passage between compatible pairs and 7-dimensional 3-forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::tensor::{combinations, AltTensor};

pub type Form = AltTensor<QScalar>;

/// GL(6)-orbits of 3-forms, named after their normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class6 {
    Beta1,
    Beta2,
    Beta3,
    Beta4,
    Beta5,
    Beta6,
}

impl Class6 {
    pub fn index(self) -> usize {
        match self {
            Class6::Beta1 => 1,
            Class6::Beta2 => 2,
            Class6::Beta3 => 3,
            Class6::Beta4 => 4,
            Class6::Beta5 => 5,
            Class6::Beta6 => 6,
        }
    }

    pub fn is_stable(self) -> bool {
        matches!(self, Class6::Beta1 | Class6::Beta2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification6 {
    pub class: Class6,
    /// λ(β) as a multiple of (e^{1…6})⊗².
    pub lambda: QScalar,
    pub kernel_dim: usize,
}

fn f(dim: usize, terms: &[(i64, [usize; 3])]) -> Form {
    let mut out = Form::form(dim, 3);
    for (c, idx) in terms {
        let idx0: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        out.add_at(&idx0, QScalar::int(*c));
    }
    out
}

/// The normal forms β₁ … β₆ (`k` in 1..=6).
pub fn normal_form6(k: usize) -> Form {
    match k {
        1 => f(6, &[(1, [1, 2, 3]), (1, [4, 5, 6])]),
        2 => f(6, &[(1, [1, 3, 5]), (-1, [1, 4, 6]), (-1, [2, 3, 6]), (-1, [2, 4, 5])]),
        3 => f(6, &[(1, [1, 5, 6]), (1, [2, 6, 4]), (1, [3, 4, 5])]),
        4 => f(6, &[(1, [1, 2, 5]), (1, [3, 4, 5])]),
        5 => f(6, &[(1, [1, 2, 3])]),
        6 => Form::form(6, 3),
        _ => panic!("normal forms are numbered 1..=6"),
    }
}

/// β_ε = e¹³⁵ + ε(e¹⁴⁶ + e²³⁶ + e²⁴⁵).
pub fn beta_eps(eps: i64) -> Form {
    f(
        6,
        &[(1, [1, 3, 5]), (eps, [1, 4, 6]), (eps, [2, 3, 6]), (eps, [2, 4, 5])],
    )
}

/// ω = e¹² + e³⁴ + e⁵⁶, the partner of β_ε in the adapted frame.
pub fn omega_std() -> Form {
    let mut w = Form::form(6, 2);
    for i in [0, 2, 4] {
        w.set(&[i, i + 1], QScalar::one());
    }
    w
}

/// Φ_ξ = e¹²³ + ξ(e¹⁴⁵ + e¹⁶⁷ + e²⁴⁶ − e²⁵⁷ − e³⁴⁷ − e³⁵⁶).
pub fn phi_xi(xi: i64) -> Form {
    f(
        7,
        &[
            (1, [1, 2, 3]),
            (xi, [1, 4, 5]),
            (xi, [1, 6, 7]),
            (xi, [2, 4, 6]),
            (-xi, [2, 5, 7]),
            (-xi, [3, 4, 7]),
            (-xi, [3, 5, 6]),
        ],
    )
}

fn check_form(b: &Form, dim: usize, degree: usize) -> Result<()> {
    if b.dim() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: b.dim(),
        });
    }
    if b.valence() != (0, degree) {
        return Err(Error::Precondition(format!("expected a {degree}-form")));
    }
    Ok(())
}

fn basis_vec(n: usize, i: usize) -> Vec<QScalar> {
    (0..n)
        .map(|j| if i == j { QScalar::one() } else { QScalar::zero() })
        .collect()
}

/// J̃ with J̃(e_a) = K^b e_b, where (e_a ⌟ β) ∧ β = Σ_b K^b (e_b ⌟ e^{1…6}).
pub fn jtilde<T: Ring>(beta: &AltTensor<T>) -> Result<Mat<T>> {
    let n = beta.dim();
    let mut m = Mat::zeros(n, n);
    for a in 0..n {
        let e: Vec<T> = (0..n).map(|j| if j == a { T::one() } else { T::zero() }).collect();
        let theta = beta.interior(&e).wedge(beta)?;
        for b in 0..n {
            let idx: Vec<usize> = (0..n).filter(|&i| i != b).collect();
            let v = theta.get(&idx);
            m[(b, a)] = if b % 2 == 0 { v } else { -v };
        }
    }
    Ok(m)
}

/// λ(β) = (1/6) tr(J̃²).
pub fn lambda<T: Ring>(beta: &AltTensor<T>) -> Result<T> {
    let j = jtilde(beta)?;
    let sixth = T::from_int(6).try_inv().expect("6 invertible");
    Ok(j.mul(&j).trace() * &sixth)
}

/// Dimension of {v : v ⌟ β = 0}.
pub fn annihilator_dim(beta: &Form) -> usize {
    let n = beta.dim();
    let k = beta.valence().1;
    if k == 0 {
        return if beta.scalar().is_zero() { n } else { 0 };
    }
    let rows_idx = combinations(n, k - 1);
    let cols: Vec<Vec<QScalar>> = (0..n)
        .map(|a| {
            let ib = beta.interior(&basis_vec(n, a));
            rows_idx.iter().map(|idx| ib.get(idx)).collect()
        })
        .collect();
    n - Mat::from_cols(&cols).rank()
}

pub fn classify6(beta: &Form) -> Result<Classification6> {
    check_form(beta, 6, 3)?;
    let lambda = lambda(beta)?;
    let kernel_dim = annihilator_dim(beta);
    let class = match lambda.signum() {
        1 => Class6::Beta1,
        -1 => Class6::Beta2,
        _ => match kernel_dim {
            0 => Class6::Beta3,
            1 => Class6::Beta4,
            3 => Class6::Beta5,
            6 => Class6::Beta6,
            d => {
                return Err(Error::Internal(format!(
                    "3-form with λ = 0 and annihilator of dimension {d} fits no orbit"
                )))
            }
        },
    };
    Ok(Classification6 {
        class,
        lambda,
        kernel_dim,
    })
}

/// ε-complex structure of a stable 3-form in dimension 6.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsComplex {
    pub j: Mat<QScalar>,
    pub eps: i64,
    /// Coefficient of e^{1…6} in the induced volume form.
    pub vol: QScalar,
}

/// J = σ J̃ / √|λ| for orientation σ = ±1 (σ = +1 when e^{1…6} is positive).
pub fn eps_complex_from_3form(beta: &Form, orientation: i64) -> Result<EpsComplex> {
    if orientation.abs() != 1 {
        return Err(Error::InvalidParam("orientation must be ±1".into()));
    }
    let c = classify6(beta)?;
    if !c.class.is_stable() {
        return Err(Error::Degenerate(format!(
            "β is not stable (class β{})",
            c.class.index()
        )));
    }
    let eps = c.lambda.signum() as i64;
    let root = c
        .lambda
        .abs()
        .sqrt()
        .ok_or_else(|| Error::NoExactRoot(format!("√|λ| for λ = {}", c.lambda)))?;
    let o = QScalar::int(orientation);
    let j = jtilde(beta)?.scale(&(o.clone() * &root.inv()?));
    Ok(EpsComplex { j, eps, vol: o * &root })
}

/// (J*β)(u,v,w) = β(Ju, Jv, Jw).
pub fn act_on_form(beta: &Form, j: &Mat<QScalar>) -> Form {
    beta.pullback(j)
}

/// Metric and orientation determined by a 3-form in dimension 7.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Class7 {
    Definite,
    Split,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metric7 {
    pub class: Class7,
    /// (1/6) (·⌟Φ)∧(·⌟Φ)∧Φ as a multiple of e^{1…7}.
    pub h_tilde: Mat<QScalar>,
    /// H normalized so that Φ·Φ = 42; `None` when degenerate.
    pub h: Option<Mat<QScalar>>,
    pub signature: Option<(usize, usize)>,
    /// Coefficient of e^{1…7} in the H-volume form, when exact.
    pub vol: Option<QScalar>,
    /// Whether 6 H_{AD} = Φ_{ABC} Φ_D^{BC} holds.
    pub contraction_identity: bool,
}

/// (1/6) (X⌟Φ)∧(Y⌟Φ)∧Φ.
pub fn h_tilde<T: Ring>(phi: &AltTensor<T>) -> Result<Mat<T>> {
    let n = phi.dim();
    let ips: Vec<AltTensor<T>> = (0..n)
        .map(|a| {
            phi.interior(
                &(0..n)
                    .map(|j| if j == a { T::one() } else { T::zero() })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let sixth = T::from_int(6).try_inv().expect("6 invertible");
    let mut h = Mat::zeros(n, n);
    for a in 0..n {
        let wa = ips[a].wedge(phi)?;
        for b in a..n {
            let v = ips[b].wedge(&wa)?.top_coefficient() * &sixth;
            h[(a, b)] = v.clone();
            h[(b, a)] = v;
        }
    }
    Ok(h)
}

/// Full contraction Φ_{ABC} Ψ^{ABC} with indices raised by `g`.
pub fn form_inner<T: Ring>(a: &AltTensor<T>, b: &AltTensor<T>, g: &Mat<T>) -> Result<T> {
    let k = a.valence().1;
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
    Ok(a.contract(b, &pairs, Some(g))?.scalar())
}

/// Φ_{ABC} Φ_D^{BC}.
fn phi_phi<T: Ring>(phi: &AltTensor<T>, h: &Mat<T>) -> Result<Mat<T>> {
    let t = phi.contract(phi, &[(1, 1), (2, 2)], Some(h))?;
    let n = phi.dim();
    Ok(Mat::from_fn(n, n, |i, j| t.get(&[i, j])))
}

pub fn metric_from_3form7(phi: &Form) -> Result<Metric7> {
    check_form(phi, 7, 3)?;
    let h_tilde = h_tilde(phi)?;
    let degenerate = Metric7 {
        class: Class7::Degenerate,
        h_tilde: h_tilde.clone(),
        h: None,
        signature: None,
        vol: None,
        contraction_identity: false,
    };
    if h_tilde.det().is_zero() {
        return Ok(degenerate);
    }
    let norm = form_inner(phi, phi, &h_tilde)?;
    let c = (norm * &QScalar::frac(1, 42))
        .cbrt()
        .ok_or_else(|| Error::NoExactRoot("cube root in the normalization of H".into()))?;
    let h = h_tilde.scale(&c);
    let (p, q) = h.signature()?;
    let class = match (p, q) {
        (7, 0) | (0, 7) => Class7::Definite,
        (3, 4) | (4, 3) => Class7::Split,
        _ => Class7::Degenerate,
    };
    let contraction_identity = phi_phi(phi, &h)? == h.scale(&QScalar::int(6));
    let vol = h.det().abs().sqrt().map(|r| if c.signum() < 0 { -r } else { r });
    Ok(Metric7 {
        class,
        h_tilde,
        h: Some(h),
        signature: Some((p, q)),
        vol,
        contraction_identity,
    })
}

/// x × y with ×^C_{AB} = H^{CK} Φ_{KAB}.
pub fn cross_from_form(phi: &Form, h: &Mat<QScalar>, x: &[QScalar], y: &[QScalar]) -> Result<Vec<QScalar>> {
    let lowered = phi.interior(x).interior(y);
    let hinv = h.inverse_exact()?;
    let n = phi.dim();
    let low: Vec<QScalar> = (0..n).map(|k| lowered.get(&[k])).collect();
    Ok(hinv.apply(&low))
}

/// (1/42) Alt(×_{KAB} ×^K_{CD} ×_{EFG}) as a multiple of e^{1…7}.
pub fn volume_from_cross(phi: &Form, h: &Mat<QScalar>) -> Result<QScalar> {
    check_form(phi, 7, 3)?;
    let psi = phi.contract(phi, &[(0, 0)], Some(h))?.antisymmetrize();
    let top = psi.wedge(phi)?.top_coefficient();
    // Alt(ψ ⊗ Φ) = (4! 3! / 7!) Alt(ψ) ∧ Φ
    Ok(top * &QScalar::frac(144, 5040 * 42))
}

/// Φ = α ∧ ω + β with α = e⁷, together with the data it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatiblePair {
    pub phi: Form,
    pub eps: i64,
    pub j: Mat<QScalar>,
    /// g = ε ω(·, J·) on the 6-dimensional factor.
    pub g: Mat<QScalar>,
    /// g − ε α ⊗ α on the 7-dimensional space.
    pub h: Mat<QScalar>,
}

fn lift(form: &Form) -> Form {
    let mut out = Form::form(7, form.valence().1);
    for (idx, v) in form.entries() {
        out.set(idx, v.clone());
    }
    out
}

/// Assemble Φ = e⁷ ∧ ω + β from a compatible, normalized pair on ℝ⁶.
pub fn assemble_g2_form(omega: &Form, beta: &Form) -> Result<CompatiblePair> {
    check_form(omega, 6, 2)?;
    check_form(beta, 6, 3)?;
    if !omega.wedge(beta)?.is_zero() {
        return Err(Error::Precondition("incompatible pair: ω ∧ β ≠ 0".into()));
    }
    let omega3 = omega.wedge(omega)?.wedge(omega)?.top_coefficient();
    if omega3.is_zero() {
        return Err(Error::Degenerate("ω is degenerate".into()));
    }
    let ec = eps_complex_from_3form(beta, omega3.signum() as i64)?;
    let jb = act_on_form(beta, &ec.j);
    if jb.wedge(beta)?.top_coefficient() != omega3.clone() * &QScalar::frac(2, 3) {
        return Err(Error::Precondition("pair not normalized: J*β ∧ β ≠ (2/3) ω³".into()));
    }
    let eps = QScalar::int(ec.eps);
    let g = Mat::from_fn(6, 6, |a, b| {
        let jb: Vec<QScalar> = ec.j.col(b);
        let mut acc = QScalar::zero();
        for (c, jc) in jb.iter().enumerate() {
            acc = acc + &(omega.get(&[a, c]) * jc);
        }
        acc * &eps
    });
    let h = Mat::from_fn(7, 7, |a, b| match (a, b) {
        (6, 6) => -eps.clone(),
        (6, _) | (_, 6) => QScalar::zero(),
        _ => g[(a, b)].clone(),
    });
    let e7 = Form::basis_form(7, &[6]);
    let phi = e7.wedge(&lift(omega))?.add(&lift(beta));
    Ok(CompatiblePair {
        phi,
        eps: ec.eps,
        j: ec.j,
        g,
        h,
    })
}

/// Restriction of Φ along a unit vector n: ω = ι*(n⌟Φ), β = ι*Φ on n⊥.
#[derive(Clone, Debug, PartialEq)]
pub struct Splitting {
    pub omega: Form,
    pub beta: Form,
    /// Columns form the basis of n⊥ used for ι.
    pub frame: Mat<QScalar>,
    /// ι*H.
    pub g: Mat<QScalar>,
    pub eps: i64,
}

pub fn split_by_unit_vector(phi: &Form, h: &Mat<QScalar>, n: &[QScalar]) -> Result<Splitting> {
    check_form(phi, 7, 3)?;
    let hn = h.apply(n);
    let nn: QScalar = hn.iter().zip(n).fold(QScalar::zero(), |acc, (a, b)| acc + &(a * b));
    if nn != QScalar::one() && nn != QScalar::int(-1) {
        return Err(Error::Precondition(format!("H(n,n) = {nn}, expected ±1")));
    }
    let basis = if n.iter().take(6).all(Ring::is_zero) && hn.iter().take(6).all(Ring::is_zero) {
        (0..6).map(|i| basis_vec(7, i)).collect()
    } else {
        Mat::from_rows(vec![hn]).kernel()
    };
    let frame = Mat::from_cols(&basis);
    let omega = phi.interior(n).pullback(&frame);
    let beta = phi.pullback(&frame);
    let g = frame.transpose().mul(h).mul(&frame);
    Ok(Splitting {
        omega,
        beta,
        frame,
        g,
        eps: -nn.signum() as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_of_beta_eps() {
        for eps in [1, -1] {
            let c = classify6(&beta_eps(eps)).unwrap();
            assert_eq!(c.lambda, QScalar::int(4 * eps));
            let ec = eps_complex_from_3form(&beta_eps(eps), 1).unwrap();
            for i in [0, 2, 4] {
                assert_eq!(ec.j[(i + 1, i)], QScalar::int(eps));
                assert_eq!(ec.j[(i, i + 1)], QScalar::one());
            }
            assert_eq!(ec.j.mul(&ec.j), Mat::identity(6).scale(&QScalar::int(eps)));
            assert_eq!(ec.vol, QScalar::int(2));
        }
    }

    #[test]
    fn normal_forms_classify() {
        for k in 1..=6 {
            assert_eq!(classify6(&normal_form6(k)).unwrap().class.index(), k);
        }
        assert_eq!(annihilator_dim(&normal_form6(4)), 1);
    }

    #[test]
    fn phi_xi_metric() {
        for xi in [1, -1] {
            let m = metric_from_3form7(&phi_xi(xi)).unwrap();
            let h = m.h.unwrap();
            let want = Mat::from_fn(7, 7, |i, j| {
                if i != j {
                    QScalar::zero()
                } else if i < 3 {
                    QScalar::one()
                } else {
                    QScalar::int(xi)
                }
            });
            assert_eq!(h, want);
            assert_eq!(m.h_tilde, want);
            assert!(m.contraction_identity);
            assert_eq!(form_inner(&phi_xi(xi), &phi_xi(xi), &h).unwrap(), QScalar::int(42));
            let class = if xi == 1 { Class7::Definite } else { Class7::Split };
            assert_eq!(m.class, class);
        }
        assert_eq!(
            metric_from_3form7(&f(7, &[(1, [1, 2, 3])])).unwrap().class,
            Class7::Degenerate
        );
    }

    #[test]
    fn adapted_pair_normalized() {
        for eps in [1, -1] {
            let p = assemble_g2_form(&omega_std(), &beta_eps(eps)).unwrap();
            let m = metric_from_3form7(&p.phi).unwrap();
            assert_eq!(m.h.unwrap(), p.h);
            let want = if eps == -1 { Class7::Definite } else { Class7::Split };
            assert_eq!(m.class, want);
        }
    }

    #[test]
    fn incompatible_pair_rejected() {
        let omega = Form::basis_form(6, &[0, 1]);
        let beta = Form::basis_form(6, &[2, 3, 4]);
        assert!(matches!(assemble_g2_form(&omega, &beta), Err(Error::Precondition(_))));
    }

    #[test]
    fn split_round_trip() {
        for xi in [1, -1] {
            let phi = phi_xi(xi);
            let h = metric_from_3form7(&phi).unwrap().h.unwrap();
            let n = basis_vec(7, 6);
            let sp = split_by_unit_vector(&phi, &h, &n).unwrap();
            assert_eq!(sp.eps, -xi);
            let p = assemble_g2_form(&sp.omega, &sp.beta).unwrap();
            assert_eq!(p.phi, phi);
            assert_eq!(p.g, sp.g);
            let c = classify6(&sp.beta).unwrap();
            assert_eq!(c.lambda.signum() as i64, sp.eps);
        }
        let phi = phi_xi(-1);
        let h = metric_from_3form7(&phi).unwrap().h.unwrap();
        let mut null = basis_vec(7, 0);
        null[3] = QScalar::one();
        assert!(split_by_unit_vector(&phi, &h, &null).is_err());
    }
}
