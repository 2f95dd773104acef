//! Projective tractor connection of a framed chart, in the tractor frame
//! (X, W₁, …, W_n) determined by the chart's scale.

use crate::chart::{Arr4, FrameChart};
use crate::error::{Error, Result};
use crate::laurent::CoeffFn;
use crate::linalg::Mat;
use crate::residual::Residual;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::tensor::{combinations, AltTensor, Symmetry};

#[derive(Clone, Debug)]
pub struct TractorConnection {
    chart: FrameChart,
    schouten: Vec<Vec<CoeffFn>>,
    /// ∇_a b_j = Σ_i a[a][(i, j)] b_i for the frame b = (X, W₁, …, W_n).
    a: Vec<Mat<CoeffFn>>,
}

/// Tractor 3-form with Φ(X, W_b, W_c) = σ_{bc} and Φ(W_b, W_c, W_d) = μ_{bcd}.
pub fn tractor_3form(sigma: &AltTensor<CoeffFn>, mu: &AltTensor<CoeffFn>) -> AltTensor<CoeffFn> {
    let n = sigma.dim();
    let mut phi = AltTensor::form(n + 1, 3);
    for (idx, v) in sigma.entries() {
        phi.set(&[0, idx[0] + 1, idx[1] + 1], v.clone());
    }
    for (idx, v) in mu.entries() {
        phi.set(&[idx[0] + 1, idx[1] + 1, idx[2] + 1], v.clone());
    }
    phi
}

/// Inverse of [`tractor_3form`].
pub fn slots_of_3form(phi: &AltTensor<CoeffFn>) -> (AltTensor<CoeffFn>, AltTensor<CoeffFn>) {
    let n = phi.dim() - 1;
    let mut sigma = AltTensor::form(n, 2);
    let mut mu = AltTensor::form(n, 3);
    for (idx, v) in phi.entries() {
        if idx[0] == 0 {
            sigma.set(&[idx[1] - 1, idx[2] - 1], v.clone());
        } else {
            mu.set(&[idx[0] - 1, idx[1] - 1, idx[2] - 1], v.clone());
        }
    }
    (sigma, mu)
}

/// ε with ε(X, W₁, …, W_n) = 1.
pub fn tractor_volume(n: usize) -> AltTensor<CoeffFn> {
    let idx: Vec<usize> = (0..=n).collect();
    AltTensor::basis_form(n + 1, &idx)
}

/// Output of the Killing–Yano prolongation of a weight-3 2-form.
#[derive(Clone, Debug)]
pub struct KyProlongation {
    /// μ_{abc} = ∇_{[a} ω_{bc]}.
    pub mu: AltTensor<CoeffFn>,
    /// Per direction a: ∇_a ω_{bc} − μ_{abc}.
    pub top: Vec<AltTensor<CoeffFn>>,
    /// Per direction a: ∇_a μ_{bcd} + 3 P_{a[b} ω_{cd]} − (3/2) ω_{k[b} W_{cd]}{}^k{}_a.
    pub bottom: Vec<AltTensor<CoeffFn>>,
    /// Per direction a: (3/2) ω_{k[b} W_{cd]}{}^k{}_a.
    pub weyl_term: Vec<AltTensor<CoeffFn>>,
}

impl KyProlongation {
    pub fn residual(&self) -> Residual {
        let mut r = Residual::new();
        for t in self.top.iter().chain(&self.bottom) {
            for (_, v) in t.entries() {
                r.push(v);
            }
        }
        r
    }

    pub fn weyl_residual(&self) -> Residual {
        let mut r = Residual::new();
        for t in &self.weyl_term {
            for (_, v) in t.entries() {
                r.push(v);
            }
        }
        r
    }
}

impl TractorConnection {
    /// Connection assembled from the chart connection and a Schouten tensor:
    /// ∇_a X = W_a, ∇_a W_b = Γ^c_{ab} W_c − P_{ab} X.
    pub fn new(chart: &FrameChart, schouten: Vec<Vec<CoeffFn>>) -> Self {
        let n = chart.dim();
        let g = chart.gamma();
        let a = (0..n)
            .map(|a| {
                let mut m = Mat::zeros(n + 1, n + 1);
                m[(a + 1, 0)] = CoeffFn::one();
                for b in 0..n {
                    for c in 0..n {
                        m[(b + 1, c + 1)] = g[b][a][c].clone();
                    }
                    m[(0, b + 1)] = -schouten[a][b].clone();
                }
                m
            })
            .collect();
        TractorConnection {
            chart: chart.clone(),
            schouten,
            a,
        }
    }

    /// A connection on a bundle of any rank given directly by its matrices,
    /// ∇_a b_j = Σ_i a[a](i, j) b_i.
    pub fn from_matrices(chart: &FrameChart, schouten: Vec<Vec<CoeffFn>>, a: Vec<Mat<CoeffFn>>) -> Result<Self> {
        let n = chart.dim();
        let r = a.first().map_or(0, |m| m.rows());
        if a.len() != n || a.iter().any(|m| m.rows() != r || m.cols() != r) {
            return Err(Error::DimMismatch {
                expected: n,
                got: a.len(),
            });
        }
        Ok(TractorConnection {
            chart: chart.clone(),
            schouten,
            a,
        })
    }

    /// Rank of the bundle.
    pub fn rank(&self) -> usize {
        self.a[0].rows()
    }

    /// Uses the Schouten tensor of the chart connection, which must be special.
    pub fn from_special(chart: &FrameChart) -> Self {
        Self::new(chart, chart.curvature().schouten)
    }

    pub fn chart(&self) -> &FrameChart {
        &self.chart
    }

    pub fn schouten(&self) -> &[Vec<CoeffFn>] {
        &self.schouten
    }

    pub fn matrices(&self) -> &[Mat<CoeffFn>] {
        &self.a
    }

    /// The same connection written in the scale changed by φ(ρ):
    /// Γ̂ = Γ + δΥ + Υδ and P̂_{ab} = P_{ab} − ∇_a Υ_b + Υ_a Υ_b.
    pub fn change_scale(&self, phi: &CoeffFn) -> TractorConnection {
        let n = self.chart.dim();
        let ups: Vec<CoeffFn> = (0..n).map(|a| self.chart.e(a, phi)).collect();
        let g = self.chart.gamma();
        let mut p = self.schouten.clone();
        for a in 0..n {
            for b in 0..n {
                let mut nab = self.chart.e(a, &ups[b]);
                for c in 0..n {
                    nab = nab - &(g[c][a][b].clone() * &ups[c]);
                }
                p[a][b] = p[a][b].clone() - &nab + &(ups[a].clone() * &ups[b]);
            }
        }
        TractorConnection::new(&self.chart.change_scale(phi), p)
    }

    /// Frame change from this scale to the one changed by φ: the new W_b is
    /// W_b + Υ_b X. Cotractor components transform by pullback along it.
    pub fn scale_frame_change(&self, phi: &CoeffFn) -> Mat<CoeffFn> {
        let n = self.chart.dim();
        let mut g = Mat::identity(n + 1);
        for b in 0..n {
            g[(0, b + 1)] = self.chart.e(b, phi);
        }
        g
    }

    /// ∇_a V for a tractor V = Σ v_i b_i; component functions have weight −1.
    pub fn derivative_vector(&self, v: &[CoeffFn]) -> Vec<Vec<CoeffFn>> {
        let n = self.chart.dim();
        (0..n)
            .map(|a| {
                (0..self.rank())
                    .map(|i| {
                        let mut acc = self.chart.e_weighted(a, &v[i], -1);
                        for (j, vj) in v.iter().enumerate() {
                            if !self.a[a][(i, j)].is_zero() {
                                acc = acc + &(self.a[a][(i, j)].clone() * vj);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// ∇_a T for a covariant tractor tensor; the components of a rank-k
    /// tensor have weight k.
    pub fn derivative_covariant(&self, t: &AltTensor<CoeffFn>) -> Vec<AltTensor<CoeffFn>> {
        let n = self.chart.dim();
        let k = t.valence().1;
        assert_eq!(t.valence().0, 0);
        let r = self.rank();
        assert_eq!(t.dim(), r);
        (0..n)
            .map(|a| {
                let mut out = AltTensor::new(r, (0, k), t.symmetry());
                for idx in crate::chart::canonical_indices(t) {
                    let mut acc = self.chart.e_weighted(a, &t.get(&idx), k as i64);
                    for (slot, &i) in idx.iter().enumerate() {
                        for l in 0..r {
                            let coef = &self.a[a][(l, i)];
                            if coef.is_zero() {
                                continue;
                            }
                            let mut j = idx.clone();
                            j[slot] = l;
                            let v = t.get(&j);
                            if !v.is_zero() {
                                acc = acc - &(coef.clone() * &v);
                            }
                        }
                    }
                    out.set(&idx, acc);
                }
                out
            })
            .collect()
    }

    /// ∇_a of a tractor 3-form in slot form:
    /// (∇_a σ_{bc} − μ_{abc}, ∇_a μ_{bcd} + 3 P_{a[b} σ_{cd]}).
    pub fn derivative_3form_slots(
        &self,
        sigma: &AltTensor<CoeffFn>,
        mu: &AltTensor<CoeffFn>,
    ) -> Vec<(AltTensor<CoeffFn>, AltTensor<CoeffFn>)> {
        let n = self.chart.dim();
        let ds = self.chart.covariant_derivative(sigma, 3);
        let dm = self.chart.covariant_derivative(mu, 3);
        let p = &self.schouten;
        (0..n)
            .map(|a| {
                let mut top = AltTensor::form(n, 2);
                for bc in combinations(n, 2) {
                    let v = ds[a].get(&bc) - &mu.get(&[a, bc[0], bc[1]]);
                    top.set(&bc, v);
                }
                let mut bottom = AltTensor::form(n, 3);
                for bcd in combinations(n, 3) {
                    let (b, c, d) = (bcd[0], bcd[1], bcd[2]);
                    let v = dm[a].get(&bcd)
                        + &(p[a][b].clone() * &sigma.get(&[c, d]))
                        + &(p[a][c].clone() * &sigma.get(&[d, b]))
                        + &(p[a][d].clone() * &sigma.get(&[b, c]));
                    bottom.set(&bcd, v);
                }
                (top, bottom)
            })
            .collect()
    }

    /// ∇ of the tractor volume form.
    pub fn volume_residual(&self) -> Residual {
        let n = self.chart.dim();
        let mut r = Residual::new();
        for t in self.derivative_covariant(&tractor_volume(n)) {
            for (_, v) in t.entries() {
                r.push(v);
            }
        }
        r
    }

    /// Killing–Yano prolongation of ω with μ = ∇_{[a}ω_{bc]}, using the
    /// projective Weyl tensor `weyl` (stored as W_{ab}{}^c{}_d at [a][b][c][d]).
    pub fn ky_prolong(&self, omega: &AltTensor<CoeffFn>, weyl: &Arr4) -> KyProlongation {
        let n = self.chart.dim();
        let dw = self.chart.covariant_derivative(omega, 3);
        let third = QScalar::frac(1, 3);
        let mut mu = AltTensor::form(n, 3);
        for abc in combinations(n, 3) {
            let (a, b, c) = (abc[0], abc[1], abc[2]);
            let v = dw[a].get(&[b, c]) + &dw[b].get(&[c, a]) + &dw[c].get(&[a, b]);
            mu.set(&abc, v.scale(&third));
        }
        let slots = self.derivative_3form_slots(omega, &mu);
        let mut top = Vec::with_capacity(n);
        let mut bottom = Vec::with_capacity(n);
        let mut weyl_term = Vec::with_capacity(n);
        for (a, (t, b)) in slots.into_iter().enumerate() {
            let wt = weyl_correction(omega, weyl, a);
            bottom.push(b.sub(&wt));
            top.push(t);
            weyl_term.push(wt);
        }
        KyProlongation {
            mu,
            top,
            bottom,
            weyl_term,
        }
    }

    /// Ω_{ab} = E_a A_b − E_b A_a + [A_a, A_b] − c^c_{ab} A_c, for a < b.
    pub fn curvature(&self) -> Vec<((usize, usize), Mat<CoeffFn>)> {
        let n = self.chart.dim();
        let cb = self.chart.brackets();
        let mut out = Vec::new();
        for ab in combinations(n, 2) {
            let (a, b) = (ab[0], ab[1]);
            let ea = self.a[b].map(|v| self.chart.e(a, v));
            let eb = self.a[a].map(|v| self.chart.e(b, v));
            let mut om = ea
                .sub(&eb)
                .add(&self.a[a].mul(&self.a[b]))
                .sub(&self.a[b].mul(&self.a[a]));
            for c in 0..n {
                if !cb[a][b][c].is_zero() {
                    om = om.sub(&self.a[c].scale(&cb[a][b][c]));
                }
            }
            out.push(((a, b), om));
        }
        out
    }

    pub fn curvature_residual(&self) -> Residual {
        let mut r = Residual::new();
        for (_, m) in self.curvature() {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    r.push(&m[(i, j)]);
                }
            }
        }
        r
    }
}

/// (3/2) ω_{k[b} W_{cd]}{}^k{}_a for a fixed direction a, with W stored as
/// W_{ab}{}^c{}_d at [a][b][c][d].
pub fn weyl_correction(omega: &AltTensor<CoeffFn>, weyl: &Arr4, a: usize) -> AltTensor<CoeffFn> {
    let n = omega.dim();
    // T_{bcd} = ω_{kb} W_{cd}{}^k{}_a, antisymmetric in cd
    let tt = |b: usize, c: usize, d: usize| -> CoeffFn {
        let mut acc = CoeffFn::zero();
        for k in 0..n {
            let w = &weyl[c][d][k][a];
            if !w.is_zero() {
                acc = acc + &(omega.get(&[k, b]) * w);
            }
        }
        acc
    };
    let half = QScalar::frac(1, 2);
    let mut wt = AltTensor::form(n, 3);
    for bcd in combinations(n, 3) {
        let (x, y, z) = (bcd[0], bcd[1], bcd[2]);
        let v = tt(x, y, z) + &tt(y, z, x) + &tt(z, x, y);
        wt.set(&bcd, v.scale(&half));
    }
    wt
}

/// Brute-force ∇_{(a} ω_{b)c} = ½(∇_a ω_{bc} + ∇_b ω_{ac}), as a tensor with
/// index order (a, b, c).
pub fn symmetrized_derivative(chart: &FrameChart, omega: &AltTensor<CoeffFn>) -> AltTensor<CoeffFn> {
    let n = chart.dim();
    let dw = chart.covariant_derivative(omega, 3);
    let half = QScalar::frac(1, 2);
    let mut out = AltTensor::new(n, (0, 3), Symmetry::None);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = dw[a].get(&[b, c]) + &dw[b].get(&[a, c]);
                out.set(&[a, b, c], v.scale(&half));
            }
        }
    }
    out
}
