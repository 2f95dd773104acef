//! Nearly (para-)Kähler structures on the open orbits τ ≠ 0.
//!
//! On a side of the zero locus the collar is reparameterized by s with
//! ρ = ±s², so that √|τ| is a Laurent monomial and everything stays exact.

use serde::{Deserialize, Serialize};

use crate::chart::{arr3, Arr3, FrameChart};
use crate::error::{Error, Result};
use crate::laurent::{CoeffFn, Param};
use crate::linalg::Mat;
use crate::package::GeometryPackage;
use crate::residual::Residual;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::tensor::{AltTensor, Symmetry};
use crate::tractor::weyl_correction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// τ > 0, parameterized by ρ = s².
    Plus,
    /// τ < 0, parameterized by ρ = −s².
    Minus,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn param(self) -> Param {
        match self {
            Side::Plus => Param::PosSq,
            Side::Minus => Param::NegSq,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Plus => "M+",
            Side::Minus => "M-",
        }
    }
}

/// (g, J, ω) on one open orbit, with the projective chart it lives on.
#[derive(Clone, Debug)]
pub struct NpkStructure {
    pub side: Side,
    /// J² = ε id.
    pub eps: i64,
    pub chart: FrameChart,
    pub g: Mat<CoeffFn>,
    pub j: Mat<CoeffFn>,
    /// ω = g(·, J·).
    pub omega: AltTensor<CoeffFn>,
    /// √|τ| in the s-parameterization.
    pub sqrt_abs_tau: CoeffFn,
}

/// Square root of |τ| when τ is a monomial c·s^{2k} with √|c| in the field.
fn sqrt_abs_monomial(tau: &CoeffFn, side: Side) -> Result<CoeffFn> {
    let terms = tau.terms();
    if terms.len() != 1 {
        return Err(Error::NoExactRoot(format!("τ = {tau} is not a monomial in s")));
    }
    let (&k, c) = terms.iter().next().expect("one term");
    let c = c.clone() * &QScalar::int(side.sign());
    if c.signum() <= 0 {
        return Err(Error::Precondition(format!("τ has the wrong sign on {}", side.label())));
    }
    if k % 2 != 0 {
        return Err(Error::NoExactRoot(format!("odd power s^{k} in τ")));
    }
    let r = c.sqrt().ok_or_else(|| Error::NoExactRoot(format!("√{c}")))?;
    Ok(CoeffFn::monomial(side.param(), k / 2, r))
}

/// g± = ±(H_{ab}/τ − H_{0a}H_{0b}/τ²), J± = J/√|τ|, ω± = g±(·, J±·).
pub fn npk_extract(pkg: &GeometryPackage, side: Side) -> Result<NpkStructure> {
    let param = side.param();
    let n = pkg.dim();
    let chart = pkg.chart.to_param(param);
    let h = pkg.h.map(|v| v.to_param(param));
    let tau = pkg.tau.to_param(param);
    let tau_inv = tau
        .try_inv()
        .ok_or_else(|| Error::Precondition("τ is not invertible on the open orbit".into()))?;
    let tau_inv2 = tau_inv.clone() * &tau_inv;
    let sgn = CoeffFn::int(side.sign());
    let g = Mat::from_fn(n, n, |a, b| {
        let v = h[(a + 1, b + 1)].clone() * &tau_inv - &(h[(0, a + 1)].clone() * &h[(0, b + 1)] * &tau_inv2);
        v * &sgn
    });
    let root = sqrt_abs_monomial(&tau, side)?;
    let root_inv = root.try_inv().expect("monomial");
    let j = pkg.jfield().j.map(|v| v.to_param(param) * &root_inv);
    let omega = kahler_form(&g, &j);
    Ok(NpkStructure {
        side,
        eps: -side.sign(),
        chart,
        g,
        j,
        omega,
        sqrt_abs_tau: root,
    })
}

/// ω_{ab} = g_{ac} J^c_b.
pub fn kahler_form(g: &Mat<CoeffFn>, j: &Mat<CoeffFn>) -> AltTensor<CoeffFn> {
    let n = g.rows();
    let gj = g.mul(j);
    let mut w = AltTensor::form(n, 2);
    for a in 0..n {
        for b in a + 1..n {
            w.set(&[a, b], gj[(a, b)].clone());
        }
    }
    w
}

#[derive(Clone, Debug)]
pub struct NpkReport {
    pub side: Side,
    pub eps: i64,
    /// g(J·, J·) + ε g.
    pub hermitian: Residual,
    /// Antisymmetric part of g·J, i.e. failure of ω to be a 2-form.
    pub omega_skew: Residual,
    /// J² − ε id.
    pub j_squared: Residual,
    /// ∇_{(a} ω_{b)c}.
    pub killing_yano: Residual,
    /// Whether ∇J vanishes identically (then the structure is not strict).
    pub nabla_j_zero: bool,
    /// Coefficient c of the polarized constant-type identity
    /// g((∇_S J)T, (∇_U J)JV) = c{g(S,U)ω(T,V) − ω(S,V)g(T,U) + ω(S,U)g(T,V) − g(S,V)ω(T,U)}.
    pub constant_type_coeff: Option<QScalar>,
    pub constant_type: Residual,
    /// Einstein constant α = −εc, so that R_{ab} = 5α g_{ab}. For ε = −1 this
    /// is c itself; in the para case the curvature identity carries the
    /// opposite sign and α = −c.
    pub alpha: Option<QScalar>,
    /// R_{ab} − 5α g_{ab}.
    pub einstein: Residual,
    pub scalar_curvature: CoeffFn,
    /// Sc − 30α.
    pub scalar_alpha: Residual,
    /// ω_{k[b} W_{cd]}{}^k{}_a with W the projective Weyl tensor of ∇^g.
    pub weyl_identity: Residual,
    /// N_J(U, V) − 4J(∇_U J)V on frame fields.
    pub nijenhuis: Residual,
    /// Failure of total skewness of the canonical torsion εJ(∇J).
    pub torsion_skew: Residual,
    /// ⟨∇J, ∇J⟩ = (∇_a J)^c{}_b (∇^a J)_c{}^b.
    pub nabla_j_norm: CoeffFn,
}

impl NpkReport {
    pub fn nabla_j_norm_constant(&self) -> bool {
        self.nabla_j_norm.is_constant()
    }

    /// Sign of the scalar curvature when it is a nonzero constant.
    pub fn scalar_sign(&self) -> Option<i32> {
        self.scalar_curvature
            .as_constant()
            .map(|c| c.signum())
            .filter(|&s| s != 0)
    }

    pub fn all_pass(&self) -> bool {
        self.hermitian.is_zero()
            && self.omega_skew.is_zero()
            && self.j_squared.is_zero()
            && self.killing_yano.is_zero()
            && !self.nabla_j_zero
            && self.alpha.is_some()
            && self.constant_type.is_zero()
            && self.einstein.is_zero()
            && self.scalar_alpha.is_zero()
            && self.weyl_identity.is_zero()
            && self.nijenhuis.is_zero()
            && self.torsion_skew.is_zero()
            && self.nabla_j_norm_constant()
    }
}

fn mat_residual(m: &Mat<CoeffFn>) -> Residual {
    let mut r = Residual::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            r.push(&m[(i, j)]);
        }
    }
    r
}

/// Levi-Civita chart of g on the same frame.
pub fn levi_civita_chart(chart: &FrameChart, g: &Mat<CoeffFn>) -> Result<FrameChart> {
    Ok(chart.with_gamma(chart.levi_civita(g)?))
}

pub fn npk_verify(st: &NpkStructure) -> Result<NpkReport> {
    let n = st.g.rows();
    let g = &st.g;
    let j = &st.j;
    let eps = CoeffFn::int(st.eps);
    let ginv = g
        .inverse()
        .ok_or_else(|| Error::Degenerate("g is not invertible".into()))?;

    let hermitian = mat_residual(&j.transpose().mul(g).mul(j).add(&g.scale(&eps)));
    let gj = g.mul(j);
    let omega_skew = mat_residual(&gj.add(&gj.transpose()));
    let j_squared = mat_residual(&j.mul(j).sub(&Mat::identity(n).scale(&eps)));

    let lc = levi_civita_chart(&st.chart, g)?;
    let mut jt = AltTensor::new(n, (1, 1), Symmetry::None);
    for p in 0..n {
        for t in 0..n {
            jt.set(&[p, t], j[(p, t)].clone());
        }
    }
    // dj[a](p, t) = (∇_a J)^p_t
    let dj: Vec<Mat<CoeffFn>> = lc
        .covariant_derivative(&jt, 0)
        .iter()
        .map(|d| Mat::from_fn(n, n, |p, t| d.get(&[p, t])))
        .collect();
    let nabla_j_zero = dj.iter().all(|m| m.is_zero());

    let dw = lc.covariant_derivative(&st.omega, 0);
    let mut killing_yano = Residual::new();
    for a in 0..n {
        for b in a..n {
            for c in 0..n {
                killing_yano.push(&(dw[a].get(&[b, c]) + &dw[b].get(&[a, c])));
            }
        }
    }

    // Polarized constant type:
    // g((∇_S J)T, (∇_U J)JV) = α{g(S,U)ω(T,V) − ω(S,V)g(T,U) + ω(S,U)g(T,V) − g(S,V)ω(T,U)}
    let w = |x: usize, y: usize| gj[(x, y)].clone();
    // kl[s](t, q) = g_{pq} (∇_s J)^p_t
    let kl: Vec<Mat<CoeffFn>> = dj.iter().map(|d| d.transpose().mul(g)).collect();
    // mm[u](q, v) = (∇_u J)^q_r J^r_v
    let mm: Vec<Mat<CoeffFn>> = dj.iter().map(|d| d.mul(j)).collect();
    let mut lhs = Vec::with_capacity(n * n * n * n);
    let mut rhs = Vec::with_capacity(n * n * n * n);
    for s in 0..n {
        let ks = &kl[s];
        for t in 0..n {
            for u in 0..n {
                for v in 0..n {
                    let mut l = CoeffFn::zero();
                    for q in 0..n {
                        if !ks[(t, q)].is_zero() && !mm[u][(q, v)].is_zero() {
                            l = l + &(ks[(t, q)].clone() * &mm[u][(q, v)]);
                        }
                    }
                    let r = g[(s, u)].clone() * &w(t, v) - &(w(s, v) * &g[(t, u)]) + &(w(s, u) * &g[(t, v)])
                        - &(g[(s, v)].clone() * &w(t, u));
                    lhs.push(l);
                    rhs.push(r);
                }
            }
        }
    }
    let coeff = lhs
        .iter()
        .zip(&rhs)
        .find_map(|(l, r)| r.try_inv().map(|ri| l.clone() * &ri))
        .and_then(|a| a.as_constant());
    let mut constant_type = Residual::new();
    let coeff_c = CoeffFn::constant(coeff.clone().unwrap_or_else(QScalar::zero));
    for (l, r) in lhs.iter().zip(&rhs) {
        constant_type.push(&(l.clone() - &(coeff_c.clone() * r)));
    }
    if coeff.is_none() {
        constant_type.nonzero += 1;
    }
    let alpha = coeff.clone().map(|c| c * &QScalar::int(-st.eps));
    let alpha_c = CoeffFn::constant(alpha.clone().unwrap_or_else(QScalar::zero));

    let curv = lc.curvature();
    let five_alpha = alpha_c.scale(&QScalar::int(5));
    let mut einstein = Residual::new();
    let mut sc = CoeffFn::zero();
    for a in 0..n {
        for b in 0..n {
            einstein.push(&(curv.ricci[a][b].clone() - &(five_alpha.clone() * &g[(a, b)])));
            if !ginv[(a, b)].is_zero() {
                sc = sc + &(ginv[(a, b)].clone() * &curv.ricci[a][b]);
            }
        }
    }
    let scalar_alpha = Residual::of([&(sc.clone() - &alpha_c.scale(&QScalar::int(30)))]);

    let mut weyl_identity = Residual::new();
    for a in 0..n {
        for (_, v) in weyl_correction(&st.omega, &curv.weyl, a).entries() {
            weyl_identity.push(v);
        }
    }

    // N_J(E_a, E_b) = −ε[U,V] − [JU,JV] + J[JU,V] + J[U,JV] against 4J(∇_a J)E_b.
    let unit = |a: usize| -> Vec<CoeffFn> {
        (0..n)
            .map(|k| if k == a { CoeffFn::one() } else { CoeffFn::zero() })
            .collect()
    };
    let mut nijenhuis = Residual::new();
    for a in 0..n {
        for b in a + 1..n {
            let (u, v) = (unit(a), unit(b));
            let (ju, jv) = (j.col(a), j.col(b));
            let t1 = lc.vf_bracket(&u, &v);
            let t2 = lc.vf_bracket(&ju, &jv);
            let t3 = j.apply(&lc.vf_bracket(&ju, &v));
            let t4 = j.apply(&lc.vf_bracket(&u, &jv));
            let expect = j.apply(&dj[a].col(b));
            for k in 0..n {
                let nk = -(eps.clone() * &t1[k]) - &t2[k] + &t3[k] + &t4[k];
                nijenhuis.push(&(nk - &expect[k].scale(&QScalar::int(4))));
            }
        }
    }

    // T_{cab} = g_{ck} ε J^k_p (∇_a J)^p_b
    let gjj = gj.scale(&eps);
    let tor: Vec<Mat<CoeffFn>> = dj.iter().map(|d| gjj.mul(d)).collect();
    let mut torsion_skew = Residual::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                torsion_skew.push(&(tor[a][(c, b)].clone() + &tor[b][(c, a)]));
                torsion_skew.push(&(tor[a][(c, b)].clone() + &tor[c][(a, b)]));
            }
        }
    }

    // ⟨∇J, ∇J⟩ = g^{aa'} g^{bb'} kl[a](b, q) (∇_{a'} J)^q_{b'}
    let mut norm = CoeffFn::zero();
    for a in 0..n {
        for a2 in 0..n {
            if ginv[(a, a2)].is_zero() {
                continue;
            }
            let prod = kl[a].mul(&dj[a2]).mul(&ginv);
            norm = norm + &(ginv[(a, a2)].clone() * &prod.trace());
        }
    }

    Ok(NpkReport {
        side: st.side,
        eps: st.eps,
        hermitian,
        omega_skew,
        j_squared,
        killing_yano,
        nabla_j_zero,
        constant_type_coeff: coeff,
        constant_type,
        alpha,
        einstein,
        scalar_curvature: sc,
        scalar_alpha,
        weyl_identity,
        nijenhuis,
        torsion_skew,
        nabla_j_norm: norm,
    })
}

/// ω± − σ/|τ|^{3/2}, comparing the Kähler form with the top slot of Φ.
pub fn omega_vs_tractor(pkg: &GeometryPackage, st: &NpkStructure) -> Residual {
    let sigma = pkg.slots().0;
    let root = &st.sqrt_abs_tau;
    let cube_inv = (root.clone() * root * root).try_inv().expect("monomial");
    let f = cube_inv;
    let mut r = Residual::new();
    for (idx, v) in st.omega.entries() {
        r.push(&(v.clone() - &(sigma.get(&idx).to_param(st.side.param()) * &f)));
    }
    for (idx, v) in sigma.entries() {
        if st.omega.get(&idx).is_zero() {
            r.push(&v.to_param(st.side.param()));
        }
    }
    r
}

#[derive(Clone, Debug)]
pub struct Compactness {
    pub order: i64,
    /// No negative powers of s remain in Γ̂.
    pub regular: bool,
    /// Most negative s-exponent left in Γ̂, if any.
    pub worst_pole: Option<i32>,
    /// Γ̂^c_{ab} = Γ^c_{ab} + (δ^c_a ∂_b r + δ^c_b ∂_a r)/(α r).
    pub gamma: Arr3,
}

pub fn compactness_check(chart: &FrameChart, r: &CoeffFn, order: i64) -> Result<Compactness> {
    if order == 0 {
        return Err(Error::InvalidParam("compactness order must be nonzero".into()));
    }
    let n = chart.dim();
    let denom = (r.clone() * &CoeffFn::int(order))
        .try_inv()
        .ok_or_else(|| Error::Precondition("defining function must be a monomial".into()))?;
    let dr: Vec<CoeffFn> = (0..n).map(|a| chart.e(a, r) * &denom).collect();
    let mut gamma = arr3(n);
    let g0 = chart.gamma();
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut v = g0[c][a][b].clone();
                if c == a {
                    v = v + &dr[b];
                }
                if c == b {
                    v = v + &dr[a];
                }
                gamma[c][a][b] = v;
            }
        }
    }
    let worst_pole = gamma
        .iter()
        .flatten()
        .flatten()
        .filter_map(|v| v.min_exp())
        .filter(|&e| e < 0)
        .min();
    Ok(Compactness {
        order,
        regular: worst_pole.is_none(),
        worst_pole,
        gamma,
    })
}

/// Compactness of ∇^g for the structure on one side, with r = ρ.
pub fn compactness_of(st: &NpkStructure, order: i64) -> Result<Compactness> {
    let lc = levi_civita_chart(&st.chart, &st.g)?;
    compactness_check(&lc, &CoeffFn::rho(st.side.param()), order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{qm_chart, qm_mu, qm_omega, FamilyParams};
    use crate::tractor::tractor_3form;

    fn qm(m: &str) -> GeometryPackage {
        let p = FamilyParams::parse(m).unwrap();
        GeometryPackage::new("qm", qm_chart(&p), tractor_3form(&qm_omega(&p), &qm_mu())).unwrap()
    }

    #[test]
    fn qm_both_sides() {
        let pkg = qm("1/2");
        for side in [Side::Plus, Side::Minus] {
            let st = npk_extract(&pkg, side).unwrap();
            let rep = npk_verify(&st).unwrap();
            assert!(rep.all_pass(), "{side:?}: {rep:#?}");
            assert_eq!(rep.scalar_sign(), Some(side.sign() as i32));
            assert!(omega_vs_tractor(&pkg, &st).is_zero());
        }
    }

    /// R(S,T,JU,JV) = −εR(S,T,U,V) + g((∇_S J)T, (∇_U J)V) with
    /// R(S,T,U,V) = g(R(S,T)U, V), on both sides.
    #[test]
    fn gray_curvature_identity() {
        let pkg = qm("2");
        let n = 6;
        for side in [Side::Plus, Side::Minus] {
            let st = npk_extract(&pkg, side).unwrap();
            let lc = levi_civita_chart(&st.chart, &st.g).unwrap();
            let r = lc.curvature().r;
            let (g, j) = (&st.g, &st.j);
            let mut jt = AltTensor::new(n, (1, 1), Symmetry::None);
            for p in 0..n {
                for t in 0..n {
                    jt.set(&[p, t], j[(p, t)].clone());
                }
            }
            let dj: Vec<Mat<CoeffFn>> = lc
                .covariant_derivative(&jt, 0)
                .iter()
                .map(|d| Mat::from_fn(n, n, |p, t| d.get(&[p, t])))
                .collect();
            let dot = |x: &[CoeffFn], y: &[CoeffFn]| {
                g.apply(y)
                    .iter()
                    .zip(x)
                    .fold(CoeffFn::zero(), |acc, (p, q)| acc + &(p.clone() * q))
            };
            let r4 = |s: usize, t: usize, u: &[CoeffFn], v: &[CoeffFn]| {
                let ru: Vec<CoeffFn> = (0..n)
                    .map(|c| (0..n).fold(CoeffFn::zero(), |acc, d| acc + &(r[s][t][c][d].clone() * &u[d])))
                    .collect();
                dot(&ru, v)
            };
            let unit = |a: usize| -> Vec<CoeffFn> {
                (0..n)
                    .map(|k| if k == a { CoeffFn::one() } else { CoeffFn::zero() })
                    .collect()
            };
            let eps = CoeffFn::int(st.eps);
            let mut res = Residual::new();
            for s in 0..n {
                for t in s + 1..n {
                    for u in 0..n {
                        for v in 0..n {
                            let lhs = r4(s, t, &j.col(u), &j.col(v));
                            let rhs =
                                -(eps.clone() * &r4(s, t, &unit(u), &unit(v))) + &dot(&dj[s].col(t), &dj[u].col(v));
                            res.push(&(lhs - &rhs));
                        }
                    }
                }
            }
            assert!(res.is_zero(), "{side:?}");
        }
    }

    #[test]
    fn g_plus_e3_coefficient() {
        let pkg = qm("3");
        let st = npk_extract(&pkg, Side::Plus).unwrap();
        // −(e³)²/(2ρ) with ρ = s²
        assert_eq!(st.g[(2, 2)], CoeffFn::monomial(Param::PosSq, -2, QScalar::frac(-1, 2)));
    }

    #[test]
    fn compactness_orders() {
        let pkg = qm("7/12");
        for side in [Side::Plus, Side::Minus] {
            let st = npk_extract(&pkg, side).unwrap();
            assert!(compactness_of(&st, 2).unwrap().regular);
            let c1 = compactness_of(&st, 1).unwrap();
            assert!(!c1.regular);
            assert!(c1.worst_pole.is_some());
        }
    }

    #[test]
    fn zero_tau_rejected() {
        let tau = CoeffFn::monomial(Param::PosSq, 2, QScalar::int(2));
        assert!(sqrt_abs_monomial(&tau, Side::Minus).is_err());
        assert_eq!(
            sqrt_abs_monomial(&tau, Side::Plus).unwrap(),
            CoeffFn::monomial(Param::PosSq, 1, QScalar::sqrt2())
        );
    }
}
