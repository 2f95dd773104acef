//! A framed chart together with a tractor 3-form and everything derived from
//! it: the tractor metric H, τ = H(X, X), and the endomorphism 𝕁 = −X × ·.

use serde::{Deserialize, Serialize};

use crate::chart::{Curvature, FrameChart};
use crate::error::{Error, Result};
use crate::laurent::CoeffFn;
use crate::linalg::Mat;
use crate::residual::Residual;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::stable::{form_inner, h_tilde};
use crate::tensor::AltTensor;
use crate::tractor::{slots_of_3form, TractorConnection};

#[derive(Clone, Debug)]
pub struct GeometryPackage {
    pub label: String,
    pub chart: FrameChart,
    pub curvature: Curvature,
    pub tractor: TractorConnection,
    /// Tractor 3-form in the frame (X, W₁, …, W_n).
    pub phi: AltTensor<CoeffFn>,
    /// Tractor metric normalized by Φ·Φ = 42.
    pub h: Mat<CoeffFn>,
    pub h_inv: Mat<CoeffFn>,
    pub tau: CoeffFn,
    /// 𝕁 = −X × · as a matrix on the tractor frame.
    pub jj: Mat<CoeffFn>,
}

/// Sign data of τ along the sampled collar and at ρ = 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Orbit {
    Plus,
    Zero,
    Minus,
}

impl Orbit {
    pub fn label(&self) -> &'static str {
        match self {
            Orbit::Plus => "M+",
            Orbit::Zero => "M0",
            Orbit::Minus => "M-",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub tau: CoeffFn,
    /// Whether τ vanishes somewhere on the chart (at ρ = 0).
    pub has_zero_locus: bool,
    /// ∂τ/∂ρ at ρ = 0; must be nonzero for a regular hypersurface.
    pub d_tau_at_zero: QScalar,
    /// Orbits met by the chart.
    pub orbits: Vec<Orbit>,
}

/// Infinitesimal symmetry in frame form: V(ρ) = v and [V, E_a] = Σ_b d[b][a] E_b
/// with constant d.
#[derive(Clone, Debug)]
pub struct FrameSymmetry {
    pub name: String,
    pub v: CoeffFn,
    pub d: Vec<Vec<QScalar>>,
    /// Whether the field is expected to be a symmetry; false marks a negative control.
    pub verified: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SymmetryCheck {
    /// [V, [E_a, E_b]] − [[V, E_a], E_b] − [E_a, [V, E_b]].
    pub brackets: Residual,
    /// V(E_a ρ) − E_a(V ρ) − [V, E_a] ρ.
    pub derivation: Residual,
    /// L_V Γ.
    pub connection: Residual,
    /// L_V of the slots σ, μ of Φ as weight-3 forms.
    pub phi: Residual,
}

impl SymmetryCheck {
    pub fn pass(&self) -> bool {
        self.brackets.is_zero() && self.derivation.is_zero() && self.connection.is_zero() && self.phi.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct JField {
    /// 𝕁 W_b = χ_b X + J^a_b W_a.
    pub chi: Vec<CoeffFn>,
    pub j: Mat<CoeffFn>,
    /// 𝕁 X.
    pub jx: Residual,
    /// 𝕁² + τ id − X ⊗ H(X, ·).
    pub jj_squared: Residual,
    /// J² + τ id.
    pub j_squared: Residual,
}

impl GeometryPackage {
    pub fn new(label: impl Into<String>, chart: FrameChart, phi: AltTensor<CoeffFn>) -> Result<Self> {
        let curvature = chart.curvature();
        let tractor = TractorConnection::new(&chart, curvature.schouten.clone());
        Self::with_tractor(label, chart, curvature, tractor, phi)
    }

    pub fn with_tractor(
        label: impl Into<String>,
        chart: FrameChart,
        curvature: Curvature,
        tractor: TractorConnection,
        phi: AltTensor<CoeffFn>,
    ) -> Result<Self> {
        let n = chart.dim();
        if phi.dim() != n + 1 || phi.valence() != (0, 3) {
            return Err(Error::DimMismatch {
                expected: n + 1,
                got: phi.dim(),
            });
        }
        let h = metric_of_tractor_form(&phi)?;
        let h_inv = h
            .inverse()
            .ok_or_else(|| Error::Degenerate("tractor metric not invertible".into()))?;
        let tau = h[(0, 0)].clone();
        let mut jj: Mat<CoeffFn> = Mat::zeros(n + 1, n + 1);
        for j in 0..=n {
            for k in 0..=n {
                let v = phi.get(&[k, 0, j]);
                if v.is_zero() {
                    continue;
                }
                for i in 0..=n {
                    if !h_inv[(i, k)].is_zero() {
                        jj[(i, j)] = jj[(i, j)].clone() - &(h_inv[(i, k)].clone() * &v);
                    }
                }
            }
        }
        Ok(GeometryPackage {
            label: label.into(),
            chart,
            curvature,
            tractor,
            phi,
            h,
            h_inv,
            tau,
            jj,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// (σ, μ) with Φ(X, W, W) = σ and Φ(W, W, W) = μ.
    pub fn slots(&self) -> (AltTensor<CoeffFn>, AltTensor<CoeffFn>) {
        slots_of_3form(&self.phi)
    }

    /// ∇Φ over all directions and components.
    pub fn phi_parallel_residual(&self) -> Residual {
        let mut r = Residual::new();
        for t in self.tractor.derivative_covariant(&self.phi) {
            for (_, v) in t.entries() {
                r.push(v);
            }
        }
        r
    }

    pub fn h_parallel_residual(&self) -> Residual {
        let n = self.dim();
        let mut t = AltTensor::new(n + 1, (0, 2), crate::tensor::Symmetry::Symmetric);
        for i in 0..=n {
            for j in i..=n {
                t.set(&[i, j], self.h[(i, j)].clone());
            }
        }
        let mut r = Residual::new();
        for d in self.tractor.derivative_covariant(&t) {
            for (_, v) in d.entries() {
                r.push(v);
            }
        }
        r
    }

    /// 6 H_{AD} − Φ_{ABC} Φ_D{}^{BC}.
    pub fn contraction_residual(&self) -> Result<Residual> {
        let t = self.phi.contract(&self.phi, &[(1, 1), (2, 2)], Some(&self.h))?;
        let n = self.dim();
        let mut r = Residual::new();
        for i in 0..=n {
            for j in 0..=n {
                r.push(&(t.get(&[i, j]) - &self.h[(i, j)].scale(&QScalar::int(6))));
            }
        }
        Ok(r)
    }

    /// Signature of H at a sample value of s.
    pub fn signature_at(&self, s: &QScalar) -> Result<(usize, usize)> {
        self.h.eval(s)?.signature()
    }

    pub fn stratify(&self) -> Result<Stratification> {
        if self.h.det().is_zero() {
            return Err(Error::Degenerate("tractor metric is degenerate".into()));
        }
        let tau = self.tau.clone();
        let has_zero_locus = tau.as_constant().is_none() && tau.constant_term().is_zero();
        let d_tau_at_zero = self.chart.e(self.dim() - 1, &tau).constant_term();
        let orbits = match tau.as_constant() {
            Some(c) if c.signum() > 0 => vec![Orbit::Plus],
            Some(c) if c.signum() < 0 => vec![Orbit::Minus],
            Some(_) => vec![Orbit::Zero],
            None if has_zero_locus => vec![Orbit::Plus, Orbit::Zero, Orbit::Minus],
            None => vec![Orbit::Plus, Orbit::Minus],
        };
        Ok(Stratification {
            tau,
            has_zero_locus,
            d_tau_at_zero,
            orbits,
        })
    }

    pub fn jfield(&self) -> JField {
        let n = self.dim();
        let chi = (0..n).map(|b| self.jj[(0, b + 1)].clone()).collect();
        let j = Mat::from_fn(n, n, |a, b| self.jj[(a + 1, b + 1)].clone());
        let jx = Residual::of((0..=n).map(|i| &self.jj[(i, 0)]).collect::<Vec<_>>());
        let sq = self.jj.mul(&self.jj);
        let mut jj_squared = Residual::new();
        for i in 0..=n {
            for k in 0..=n {
                let mut v = sq[(i, k)].clone();
                if i == k {
                    v = v + &self.tau;
                }
                if i == 0 {
                    v = v - &self.h[(0, k)];
                }
                jj_squared.push(&v);
            }
        }
        let j2 = j.mul(&j);
        let mut j_squared = Residual::new();
        for a in 0..n {
            for b in 0..n {
                let mut v = j2[(a, b)].clone();
                if a == b {
                    v = v + &self.tau;
                }
                j_squared.push(&v);
            }
        }
        JField {
            chi,
            j,
            jx,
            jj_squared,
            j_squared,
        }
    }

    /// Whether V preserves the frame structure, the connection and Φ.
    pub fn symmetry_check(&self, sym: &FrameSymmetry) -> SymmetryCheck {
        let n = self.dim();
        let ch = &self.chart;
        let c = ch.brackets();
        let g = ch.gamma();
        let d = |i: usize, j: usize| CoeffFn::constant(sym.d[i][j].clone());
        // V f = v f'(ρ) for functions of ρ
        let vf = |f: &CoeffFn| sym.v.clone() * &f.d_rho();
        let mut out = SymmetryCheck::default();
        for a in 0..n {
            for b in 0..n {
                for e in 0..n {
                    let mut r = vf(&c[a][b][e]);
                    for k in 0..n {
                        r = r + &(c[a][b][k].clone() * &d(e, k)) - &(d(k, a) * &c[k][b][e]) - &(d(k, b) * &c[a][k][e]);
                    }
                    out.brackets.push(&r);
                }
            }
        }
        let rho = CoeffFn::rho(ch.param());
        for a in 0..n {
            let mut r = vf(&ch.e(a, &rho)) - &ch.e(a, &sym.v);
            for b in 0..n {
                r = r - &(d(b, a) * &ch.e(b, &rho));
            }
            out.derivation.push(&r);
        }
        for e in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut r = vf(&g[e][a][b]);
                    for k in 0..n {
                        r = r + &(g[k][a][b].clone() * &d(e, k)) - &(d(k, a) * &g[e][k][b]) - &(d(k, b) * &g[e][a][k]);
                    }
                    out.connection.push(&r);
                }
            }
        }
        let tr = (0..n).fold(QScalar::zero(), |acc, i| acc + &sym.d[i][i]);
        let wfac = CoeffFn::constant(tr * &QScalar::frac(3, n as i64 + 1));
        let (sigma, mu) = self.slots();
        for form in [&sigma, &mu] {
            for idx in crate::chart::canonical_indices(form) {
                let mut r = vf(&form.get(&idx)) + &(wfac.clone() * &form.get(&idx));
                for (slot, &i) in idx.iter().enumerate() {
                    for k in 0..n {
                        if sym.d[k][i].is_zero() {
                            continue;
                        }
                        let mut j = idx.clone();
                        j[slot] = k;
                        r = r - &(d(k, i) * &form.get(&j));
                    }
                }
                out.phi.push(&r);
            }
        }
        out
    }

    /// H = (2ρ, dρ; dρ, g_ρ) with g_ρ(∂ρ, ·) = 0, where ∂ρ = E_n.
    pub fn normal_form_check(&self) -> bool {
        let n = self.dim();
        let param = self.chart.param();
        let rho = CoeffFn::rho(param);
        if self.h[(0, 0)] != rho.scale(&QScalar::int(2)) {
            return false;
        }
        for b in 0..n {
            if self.h[(0, b + 1)] != self.chart.e(b, &rho) {
                return false;
            }
        }
        (0..n).all(|b| self.h[(n, b + 1)].is_zero())
    }
}

/// H from Φ: H = c·H̃ with H̃ = (1/6)(·⌟Φ)∧(·⌟Φ)∧Φ and c fixed by Φ·Φ = 42.
pub fn metric_of_tractor_form(phi: &AltTensor<CoeffFn>) -> Result<Mat<CoeffFn>> {
    let ht = h_tilde(phi)?;
    if ht.inverse().is_none() {
        return Err(Error::Degenerate("H̃ is not invertible".into()));
    }
    let norm = form_inner(phi, phi, &ht)?;
    let c3 = norm
        .as_constant()
        .ok_or_else(|| Error::Degenerate("Φ·Φ is not constant".into()))?
        * &QScalar::frac(1, 42);
    let c = c3
        .cbrt()
        .ok_or_else(|| Error::NoExactRoot(format!("cube root of {c3}")))?;
    Ok(ht.scale(&CoeffFn::constant(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{qm_chart, qm_h_display, qm_mu, qm_omega, FamilyParams};
    use crate::tractor::tractor_3form;

    fn qm(m: &str) -> GeometryPackage {
        let p = FamilyParams::parse(m).unwrap();
        GeometryPackage::new("qm", qm_chart(&p), tractor_3form(&qm_omega(&p), &qm_mu())).unwrap()
    }

    #[test]
    fn qm_phi_parallel_and_h_displayed() {
        for m in ["1/2", "2/3", "3"] {
            let pkg = qm(m);
            let p = FamilyParams::parse(m).unwrap();
            assert!(pkg.phi_parallel_residual().is_zero(), "m={m}");
            assert_eq!(pkg.h, qm_h_display(&p));
            assert!(pkg.h_parallel_residual().is_zero());
            assert!(pkg.contraction_residual().unwrap().is_zero());
            assert!(pkg.normal_form_check());
            assert!(pkg.tractor.volume_residual().is_zero());
        }
    }

    #[test]
    fn qm_jfield() {
        let pkg = qm("5/6");
        let jf = pkg.jfield();
        assert!(jf.jx.is_zero());
        assert!(jf.jj_squared.is_zero());
        assert!(jf.j_squared.is_zero());
        let disp = crate::family::qm_j_display(&FamilyParams::parse("5/6").unwrap());
        assert_eq!(jf.j, disp.scale(&CoeffFn::int(-1)));
        let st = pkg.stratify().unwrap();
        assert_eq!(st.tau, CoeffFn::rho(crate::laurent::Param::Rho).scale(&QScalar::int(2)));
        assert_eq!(st.orbits.len(), 3);
        assert_eq!(st.d_tau_at_zero, QScalar::int(2));
    }

    #[test]
    fn symmetries() {
        for m in ["1/2", "2/3", "3"] {
            let p = FamilyParams::parse(m).unwrap();
            let pkg = qm(m);
            for sym in crate::family::qm_symmetries(&p) {
                assert_eq!(pkg.symmetry_check(&sym).pass(), sym.verified, "{} m={m}", sym.name);
            }
        }
    }

    #[test]
    fn perturbed_h_fails_normal_form() {
        let mut pkg = qm("1/2");
        pkg.h[(6, 3)] = CoeffFn::one();
        assert!(!pkg.normal_form_check());
    }
}
