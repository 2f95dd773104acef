//! Geometry induced on the zero locus M₀ = {ρ = 0}: the conformal structure,
//! the nilpotent J₀, the (2,3,5)-distribution and the BGG splitting operator.
//!
//! Tractors along M₀ are written in the frame (X, Z₁, …, Z₅, Y) obtained from
//! the projective frame (X, W₁, …, W₆) by Z_a = W_a and Y = W₆.

use crate::chart::{arr3, FrameChart};
use crate::error::{Error, Result};
use crate::laurent::{CoeffFn, Param};
use crate::linalg::{same_span, span_rank, Mat};
use crate::package::GeometryPackage;
use crate::residual::Residual;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::tensor::{AltTensor, Symmetry};
use crate::tractor::TractorConnection;

/// Value at ρ = 0 of a coefficient that is regular there.
pub fn at_zero(v: &CoeffFn) -> Result<QScalar> {
    if !v.is_regular() {
        return Err(Error::Precondition(format!("coefficient {v} has a pole at ρ = 0")));
    }
    Ok(v.constant_term())
}

fn mat_at_zero(m: &Mat<CoeffFn>) -> Result<Mat<QScalar>> {
    let rows = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| at_zero(&m[(i, j)])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_rows(rows))
}

fn form_at_zero(t: &AltTensor<CoeffFn>) -> Result<AltTensor<CoeffFn>> {
    let mut out = AltTensor::new(t.dim(), t.valence(), t.symmetry());
    for (idx, v) in t.entries() {
        out.set(&idx, CoeffFn::constant(at_zero(v)?));
    }
    Ok(out)
}

fn residual_of_mat(m: &Mat<QScalar>) -> Residual {
    let mut r = Residual::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            r.push(&CoeffFn::constant(m[(i, j)].clone()));
        }
    }
    r
}

fn residual_of_tensor(t: &AltTensor<CoeffFn>) -> Residual {
    Residual::of(t.entries().map(|(_, v)| v))
}

fn columns(m: &Mat<QScalar>) -> Vec<Vec<QScalar>> {
    (0..m.cols())
        .map(|j| m.col(j))
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect()
}

fn dot(u: &[QScalar], v: &[QScalar]) -> QScalar {
    u.iter()
        .zip(v)
        .fold(QScalar::zero(), |acc, (a, b)| acc + &(a.clone() * b))
}

fn unit(n: usize, i: usize) -> Vec<QScalar> {
    (0..n)
        .map(|k| if k == i { QScalar::one() } else { QScalar::zero() })
        .collect()
}

/// A 5-dimensional frame on M₀ with a representative metric and its
/// Levi-Civita connection.
#[derive(Clone, Debug)]
pub struct ConformalChart {
    /// Frame chart carrying the Levi-Civita connection of g₀.
    pub chart: FrameChart,
    pub g0: Mat<CoeffFn>,
    pub g0_inv: Mat<CoeffFn>,
    pub ricci: Vec<Vec<CoeffFn>>,
    pub scalar: CoeffFn,
    /// P = (Ric − Sc/(2(n−1)) g)/(n−2).
    pub schouten: Vec<Vec<CoeffFn>>,
}

impl ConformalChart {
    pub fn new(frame: &FrameChart, g0: Mat<CoeffFn>) -> Result<Self> {
        let n = frame.dim();
        if n < 3 {
            return Err(Error::InvalidParam("conformal Schouten tensor needs n ≥ 3".into()));
        }
        let chart = frame.with_gamma(frame.levi_civita(&g0)?);
        let g0_inv = g0
            .inverse()
            .ok_or_else(|| Error::Degenerate("g₀ is not invertible".into()))?;
        let ricci = chart.curvature().ricci;
        let mut scalar = CoeffFn::zero();
        for a in 0..n {
            for b in 0..n {
                scalar = scalar + &(g0_inv[(a, b)].clone() * &ricci[a][b]);
            }
        }
        let k = QScalar::int(2 * (n as i64 - 1)).inv()?;
        let l = QScalar::int(n as i64 - 2).inv()?;
        let sk = scalar.scale(&k);
        let schouten = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (ricci[a][b].clone() - &(sk.clone() * &g0[(a, b)])).scale(&l))
                    .collect()
            })
            .collect();
        Ok(ConformalChart {
            chart,
            g0,
            g0_inv,
            ricci,
            scalar,
            schouten,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Normal conformal tractor connection in the frame (X, Z_a, Y):
    /// ∇_a X = Z_a, ∇_a Z_b = Γ^c_{ab} Z_c − P_{ab} X − g_{ab} Y, ∇_a Y = P_a{}^c Z_c.
    pub fn tractor_matrices(&self) -> Vec<Mat<CoeffFn>> {
        let n = self.dim();
        let g = self.chart.gamma();
        let y = n + 1;
        (0..n)
            .map(|a| {
                let mut m = Mat::zeros(n + 2, n + 2);
                m[(a + 1, 0)] = CoeffFn::one();
                for b in 0..n {
                    for c in 0..n {
                        m[(c + 1, b + 1)] = g[c][a][b].clone();
                    }
                    m[(0, b + 1)] = -self.schouten[a][b].clone();
                    m[(y, b + 1)] = -self.g0[(a, b)].clone();
                }
                for c in 0..n {
                    let mut acc = CoeffFn::zero();
                    for k in 0..n {
                        acc = acc + &(self.g0_inv[(c, k)].clone() * &self.schouten[a][k]);
                    }
                    m[(c + 1, y)] = acc;
                }
                m
            })
            .collect()
    }

    pub fn tractor_connection(&self) -> TractorConnection {
        TractorConnection::from_matrices(&self.chart, self.schouten.clone(), self.tractor_matrices())
            .expect("consistent dimensions")
    }
}

/// Everything the package induces along ρ = 0.
#[derive(Clone, Debug)]
pub struct ZeroLocus {
    pub conformal: ConformalChart,
    /// Brackets of the first n−1 frame fields leave M₀, or they differentiate ρ.
    pub tangency: Residual,
    /// Levi-Civita of g₀ against the projective connection on M₀.
    pub connection_match: Residual,
    /// Conformal tractor connection against the restricted projective one.
    pub tractor_match: Residual,
    pub signature: (usize, usize),
    /// Φ along M₀ in the frame (X, Z₁, …, Z₅, Y).
    pub phi0: AltTensor<CoeffFn>,
    pub h0: Mat<QScalar>,
    pub jj0: Mat<QScalar>,
    /// J₀ on TM₀.
    pub j0: Mat<QScalar>,
    /// ι*ω, the pullback of the top slot.
    pub omega0: AltTensor<CoeffFn>,
    /// ω along M₀ as a form on TM.
    pub omega_ambient: AltTensor<CoeffFn>,
}

pub fn restrict_to_zero_locus(pkg: &GeometryPackage) -> Result<ZeroLocus> {
    let st = pkg.stratify()?;
    if !st.has_zero_locus {
        return Err(Error::Precondition("the zero locus is empty".into()));
    }
    if pkg.chart.param() != Param::Rho {
        return Err(Error::Precondition("restriction expects the ρ parameterization".into()));
    }
    let n = pkg.dim();
    let m = n - 1;
    let full = &pkg.chart;
    let mut tangency = Residual::new();
    let mut br = arr3(m);
    for a in 0..m {
        tangency.push(&CoeffFn::constant(at_zero(&full.deriv()[a])?));
        for b in 0..m {
            for c in 0..m {
                br[a][b][c] = CoeffFn::constant(at_zero(&full.brackets()[a][b][c])?);
            }
            tangency.push(&CoeffFn::constant(at_zero(&full.brackets()[a][b][m])?));
        }
    }
    let frame = FrameChart::new(Param::Rho, br, vec![CoeffFn::zero(); m], arr3(m))?;
    let h0 = mat_at_zero(&pkg.h)?;
    let g0 = Mat::from_fn(m, m, |a, b| h0[(a + 1, b + 1)].clone()).to_coeff();
    let conformal = ConformalChart::new(&frame, g0)?;
    let signature = conformal.g0.constant().expect("constant").signature()?;

    let mut connection_match = Residual::new();
    let gam = full.gamma();
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                let p = CoeffFn::constant(at_zero(&gam[c][a][b])?);
                connection_match.push(&(conformal.chart.gamma()[c][a][b].clone() - &p));
            }
        }
    }
    let mut tractor_match = Residual::new();
    let conf = conformal.tractor_matrices();
    for (a, ca) in conf.iter().enumerate() {
        let pa = mat_at_zero(&pkg.tractor.matrices()[a])?;
        tractor_match.merge(&residual_of_mat(&ca.constant().expect("constant").sub(&pa)));
    }

    let phi0 = form_at_zero(&pkg.phi)?;
    let jj0 = mat_at_zero(&pkg.jj)?;
    let j0 = Mat::from_fn(m, m, |a, b| jj0[(a + 1, b + 1)].clone());
    let omega_ambient = form_at_zero(&pkg.slots().0)?;
    let mut omega0 = AltTensor::form(m, 2);
    for (idx, v) in omega_ambient.entries() {
        if idx.iter().all(|&i| i < m) {
            omega0.set(&idx, v.clone());
        }
    }
    Ok(ZeroLocus {
        conformal,
        tangency,
        connection_match,
        tractor_match,
        signature,
        phi0,
        h0,
        jj0,
        j0,
        omega0,
        omega_ambient,
    })
}

/// Algebraic properties of 𝕁₀ and J₀.
#[derive(Clone, Debug)]
pub struct J0Check {
    /// 𝕁₀ X.
    pub jx: Residual,
    /// 𝕁₀² − X ⊗ H(X, ·).
    pub jj_squared: Residual,
    /// J₀².
    pub j_squared: Residual,
    pub j0_rank: usize,
    pub ker_j0_dim: usize,
    /// Dimensions of ⟨X⟩ ⊂ ker 𝕁₀ ⊂ (ker 𝕁₀)⊥ ⊂ X⊥.
    pub filtration: [usize; 4],
    pub filtration_nested: bool,
    pub ker_isotropic: bool,
    /// ϖ(ker 𝕁₀) = im J₀.
    pub proj_ker_is_im: bool,
    /// ϖ(im 𝕁₀) = ker J₀.
    pub proj_im_is_ker: bool,
}

impl J0Check {
    pub fn pass(&self) -> bool {
        self.jx.is_zero()
            && self.jj_squared.is_zero()
            && self.j_squared.is_zero()
            && self.j0_rank == 2
            && self.ker_j0_dim == 3
            && self.filtration == [1, 3, 4, 6]
            && self.filtration_nested
            && self.ker_isotropic
            && self.proj_ker_is_im
            && self.proj_im_is_ker
    }
}

/// {v : H(v, w) = 0 for all w in ws}.
fn h_perp(h: &Mat<QScalar>, ws: &[Vec<QScalar>]) -> Vec<Vec<QScalar>> {
    if ws.is_empty() {
        return (0..h.rows()).map(|i| unit(h.rows(), i)).collect();
    }
    let rows: Vec<Vec<QScalar>> = ws.iter().map(|w| h.apply(w)).collect();
    Mat::from_rows(rows).kernel()
}

fn contains(big: &[Vec<QScalar>], small: &[Vec<QScalar>]) -> bool {
    let mut all = big.to_vec();
    all.extend(small.iter().cloned());
    span_rank(&all) == span_rank(big)
}

pub fn check_j0(zl: &ZeroLocus) -> J0Check {
    let t = zl.jj0.rows();
    let m = zl.j0.rows();
    let x = unit(t, 0);
    let jx = Residual::of(&to_coeffs(&zl.jj0.apply(&x)));
    let sq = zl.jj0.mul(&zl.jj0);
    let xx = Mat::from_fn(
        t,
        t,
        |i, k| if i == 0 { zl.h0[(0, k)].clone() } else { QScalar::zero() },
    );
    let jj_squared = residual_of_mat(&sq.sub(&xx));
    let j_squared = residual_of_mat(&zl.j0.mul(&zl.j0));
    let ker = zl.jj0.kernel();
    let ker_perp = h_perp(&zl.h0, &ker);
    let x_perp = h_perp(&zl.h0, std::slice::from_ref(&x));
    let line = vec![x.clone()];
    let filtration = [1, span_rank(&ker), span_rank(&ker_perp), span_rank(&x_perp)];
    let filtration_nested = contains(&ker, &line) && contains(&ker_perp, &ker) && contains(&x_perp, &ker_perp);
    let ker_isotropic = ker
        .iter()
        .all(|u| ker.iter().all(|v| dot(&zl.h0.apply(u), v).is_zero()));
    let proj = |v: &Vec<QScalar>| -> Vec<QScalar> { v[1..=m].to_vec() };
    let proj_ker: Vec<Vec<QScalar>> = ker.iter().map(proj).collect();
    let im_j0 = columns(&zl.j0);
    let ker_j0 = zl.j0.kernel();
    let proj_im: Vec<Vec<QScalar>> = columns(&zl.jj0).iter().map(proj).collect();
    J0Check {
        jx,
        jj_squared,
        j_squared,
        j0_rank: zl.j0.rank(),
        ker_j0_dim: ker_j0.len(),
        filtration,
        filtration_nested,
        ker_isotropic,
        proj_ker_is_im: same_span(&proj_ker, &im_j0),
        proj_im_is_ker: same_span(&proj_im, &ker_j0),
    }
}

/// The distribution D on M₀ and its derived flag.
#[derive(Clone, Debug)]
pub struct Distribution235 {
    /// Basis of D in the frame of M₀.
    pub d: Vec<Vec<QScalar>>,
    /// Basis of [D, D] = D + brackets of sections of D.
    pub dd: Vec<Vec<QScalar>>,
    /// Dimensions of D, [D, D], [D, [D, D]].
    pub growth: [usize; 3],
    /// D computed as {U ∈ TM₀ : U ⌟ ω = 0}.
    pub d_from_omega: Vec<Vec<QScalar>>,
    pub dd_is_ker_j0: bool,
    pub dd_is_ker_pullback: bool,
    pub d_perp_is_dd: bool,
    /// g₀(D, [D, D]) = 0.
    pub d_null_against_dd: bool,
    /// ι*ω ∧ ι*ω = 0 with ι*ω ≠ 0.
    pub omega0_decomposable: bool,
    /// The bivector g₀⁻¹ ι*ω g₀⁻¹ spans D.
    pub bivector_spans_d: bool,
    /// ι*ω equals Φ₀(X, Z, Z).
    pub projecting_part: bool,
}

impl Distribution235 {
    pub fn is_235(&self) -> bool {
        self.growth == [2, 3, 5]
    }

    pub fn pass(&self) -> bool {
        self.is_235()
            && self.dd_is_ker_j0
            && self.dd_is_ker_pullback
            && self.d_perp_is_dd
            && self.d_null_against_dd
            && self.omega0_decomposable
            && self.bivector_spans_d
            && self.projecting_part
    }

    /// Whether D and [D, D] are the spans of the given frame vectors.
    pub fn matches_frame(&self, d: &[usize], dd: &[usize]) -> bool {
        let m = self.d.first().map_or(0, Vec::len);
        let e = |ix: &[usize]| ix.iter().map(|&i| unit(m, i)).collect::<Vec<_>>();
        same_span(&self.d, &e(d)) && same_span(&self.dd, &e(dd))
    }
}

fn to_coeffs(v: &[QScalar]) -> Vec<CoeffFn> {
    v.iter().cloned().map(CoeffFn::constant).collect()
}

fn bracket_span(chart: &FrameChart, a: &[Vec<QScalar>], b: &[Vec<QScalar>]) -> Result<Vec<Vec<QScalar>>> {
    let mut out = b.to_vec();
    for u in a {
        for v in b {
            let w = chart.vf_bracket(&to_coeffs(u), &to_coeffs(v));
            out.push(w.iter().map(at_zero).collect::<Result<Vec<_>>>()?);
        }
    }
    Ok(out)
}

fn basis(vs: Vec<Vec<QScalar>>) -> Vec<Vec<QScalar>> {
    if vs.is_empty() {
        return vs;
    }
    let (r, piv) = Mat::from_rows(vs).rref();
    (0..piv.len()).map(|i| r.row(i)).collect()
}

/// D = im J₀, cross-checked against {U ∈ TM₀ : U ⌟ ω = 0}; a disagreement is
/// an internal-consistency error.
pub fn extract_distribution(zl: &ZeroLocus) -> Result<Distribution235> {
    let m = zl.j0.rows();
    let n = m + 1;
    let d = basis(columns(&zl.j0));
    // rows b = 0..n, columns a = 0..m: ω(E_a, E_b)
    let wmat = Mat::from_fn(n, m, |b, a| zl.omega_ambient.get(&[a, b]).constant_term());
    let d_from_omega = wmat.kernel();
    if !same_span(&d, &d_from_omega) {
        return Err(Error::Internal("im J₀ and ker ω disagree on M₀".into()));
    }
    let chart = &zl.conformal.chart;
    let dd = basis(bracket_span(chart, &d, &d)?);
    let ddd = basis(bracket_span(chart, &d, &dd)?);
    let growth = [span_rank(&d), span_rank(&dd), span_rank(&ddd)];

    let g0 = zl.conformal.g0.constant().expect("constant");
    let iw = Mat::from_fn(m, m, |a, b| zl.omega0.get(&[a, b]).constant_term());
    let ker_j0 = zl.j0.kernel();
    let d_perp = h_perp(&g0, &d);
    let d_null_against_dd = d.iter().all(|u| dd.iter().all(|v| dot(&g0.apply(u), v).is_zero()));
    let w0 = &zl.omega0;
    let omega0_decomposable = w0.entries().next().is_some() && w0.wedge(w0)?.entries().next().is_none();
    let gi = zl.conformal.g0_inv.constant().expect("constant");
    let bivector = gi.mul(&iw).mul(&gi.transpose());
    let bivector_spans_d = same_span(&columns(&bivector), &d);
    let mut projecting_part = true;
    for a in 0..m {
        for b in 0..m {
            if zl.phi0.get(&[0, a + 1, b + 1]) != zl.omega0.get(&[a, b]) {
                projecting_part = false;
            }
        }
    }
    Ok(Distribution235 {
        d,
        dd: dd.clone(),
        growth,
        d_from_omega,
        dd_is_ker_j0: same_span(&dd, &ker_j0),
        dd_is_ker_pullback: same_span(&dd, &iw.kernel()),
        d_perp_is_dd: same_span(&d_perp, &dd),
        d_null_against_dd,
        omega0_decomposable,
        bivector_spans_d,
        projecting_part,
    })
}

/// BGG splitting operator L₀ for a weight-3 2-form ω on a conformal chart,
/// returning the tractor 3-form in the frame (X, Z_a, Y):
///
/// - Φ(X, Z_b, Z_c) = ω_{bc}
/// - Φ(Z_a, Z_b, Z_c) = ∇_{[a} ω_{bc]}
/// - Φ(X, Y, Z_c) = −¼ ∇^k ω_{kc}
/// - Φ(Y, Z_b, Z_c) = −T¹/15 − 2T²/15 − T³/10 − 4T⁴/5 − (tr P) ω/5
///
/// with T¹ = ∇^k∇_k ω_{bc}, T² = ∇^k∇_{[c} ω_{|k|b]}, T³ = ∇_{[c}∇^k ω_{|k|b]},
/// T⁴ = P^k{}_{[b} ω_{c]k}. Here ω_{bc,a} is read as ∇_a ω_{bc} for the
/// Levi-Civita connection of the representative metric.
pub fn bgg_split(cc: &ConformalChart, omega: &AltTensor<CoeffFn>) -> AltTensor<CoeffFn> {
    let n = cc.dim();
    let y = n + 1;
    let gi = &cc.g0_inv;
    let chart = &cc.chart;
    let dw = chart.covariant_derivative(omega, 0);
    let mut dwt = AltTensor::new(n, (0, 3), Symmetry::None);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                dwt.set(&[a, b, c], dw[a].get(&[b, c]));
            }
        }
    }
    // ddw[d](a, b, c) = ∇_d ∇_a ω_{bc}
    let ddw = chart.covariant_derivative(&dwt, 0);
    let dd = |d: usize, a: usize, b: usize, c: usize| ddw[d].get(&[a, b, c]);
    let raise_sum = |f: &dyn Fn(usize, usize) -> CoeffFn| -> CoeffFn {
        let mut acc = CoeffFn::zero();
        for k in 0..n {
            for l in 0..n {
                if !gi[(k, l)].is_zero() {
                    acc = acc + &(gi[(k, l)].clone() * &f(k, l));
                }
            }
        }
        acc
    };
    let mut phi = AltTensor::form(n + 2, 3);
    let third = QScalar::frac(1, 3);
    for b in 0..n {
        for c in b + 1..n {
            phi.set(&[0, b + 1, c + 1], omega.get(&[b, c]));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let v = dw[a].get(&[b, c]) + &dw[b].get(&[c, a]) + &dw[c].get(&[a, b]);
                phi.set(&[a + 1, b + 1, c + 1], v.scale(&third));
            }
        }
    }
    for c in 0..n {
        let div = raise_sum(&|k, l| dw[l].get(&[k, c]));
        phi.set(&[0, y, c + 1], div.scale(&QScalar::frac(-1, 4)));
    }
    let mut pr = vec![vec![CoeffFn::zero(); n]; n];
    for k in 0..n {
        for b in 0..n {
            for l in 0..n {
                pr[k][b] = pr[k][b].clone() + &(gi[(k, l)].clone() * &cc.schouten[l][b]);
            }
        }
    }
    let tr_p = (0..n).fold(CoeffFn::zero(), |acc, k| acc + &pr[k][k]);
    let half = QScalar::frac(1, 2);
    for b in 0..n {
        for c in b + 1..n {
            let t1 = raise_sum(&|k, l| dd(l, k, b, c));
            let a2 = |b: usize, c: usize| raise_sum(&|k, l| dd(l, c, k, b));
            let a3 = |b: usize, c: usize| raise_sum(&|k, l| dd(c, l, k, b));
            let t2 = (a2(b, c) - &a2(c, b)).scale(&half);
            let t3 = (a3(b, c) - &a3(c, b)).scale(&half);
            let mut t4 = CoeffFn::zero();
            for k in 0..n {
                t4 = t4 + &(pr[k][b].clone() * &omega.get(&[c, k])) - &(pr[k][c].clone() * &omega.get(&[b, k]));
            }
            let t4 = t4.scale(&half);
            let v = t1.scale(&QScalar::frac(-1, 15))
                - &t2.scale(&QScalar::frac(2, 15))
                - &t3.scale(&QScalar::frac(1, 10))
                - &t4.scale(&QScalar::frac(4, 5))
                - &(tr_p.clone() * &omega.get(&[b, c])).scale(&QScalar::frac(1, 5));
            phi.set(&[y, b + 1, c + 1], v);
        }
    }
    phi
}

#[derive(Clone, Debug)]
pub struct BggCheck {
    pub phi: AltTensor<CoeffFn>,
    /// L₀(ι*ω) − Φ₀.
    pub round_trip: Residual,
    /// ∇ L₀(ι*ω) for the conformal tractor connection.
    pub parallel: Residual,
}

pub fn bgg_check(zl: &ZeroLocus) -> BggCheck {
    let phi = bgg_split(&zl.conformal, &zl.omega0);
    let round_trip = residual_of_tensor(&phi.sub(&zl.phi0));
    let mut parallel = Residual::new();
    for d in zl.conformal.tractor_connection().derivative_covariant(&phi) {
        parallel.merge(&residual_of_tensor(&d));
    }
    BggCheck {
        phi,
        round_trip,
        parallel,
    }
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
    fn qm_boundary() {
        for m in ["1/2", "2", "3"] {
            let pkg = qm(m);
            let zl = restrict_to_zero_locus(&pkg).unwrap();
            assert!(zl.tangency.is_zero());
            assert!(zl.connection_match.is_zero());
            assert!(zl.tractor_match.is_zero(), "m={m}");
            assert_eq!(zl.signature, (2, 3));
            let j = check_j0(&zl);
            assert!(j.pass(), "{j:#?}");
            let d = extract_distribution(&zl).unwrap();
            assert!(d.pass(), "{d:#?}");
            assert!(d.matches_frame(&[3, 4], &[2, 3, 4]));
            let b = bgg_check(&zl);
            assert!(b.round_trip.is_zero(), "m={m}");
            assert!(b.parallel.is_zero());
        }
    }

    #[test]
    fn boundary_metric_display() {
        let zl = restrict_to_zero_locus(&qm("5/6")).unwrap();
        let g = zl.conformal.g0.constant().unwrap();
        assert_eq!(g[(0, 3)], QScalar::one());
        assert_eq!(g[(1, 4)], QScalar::one());
        assert_eq!(g[(2, 2)], QScalar::int(-1));
    }

    #[test]
    fn bgg_of_zero_is_zero() {
        let zl = restrict_to_zero_locus(&qm("1/2")).unwrap();
        let phi = bgg_split(&zl.conformal, &AltTensor::form(5, 2));
        assert!(phi.entries().next().is_none());
    }
}
