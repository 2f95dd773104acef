//! Framed charts: a frame E₁…E_n with structure functions, a table saying
//! how each E_a differentiates functions of ρ, and an affine connection.

use crate::error::{Error, Result};
use crate::laurent::{CoeffFn, Param};
use crate::linalg::Mat;
use crate::residual::Residual;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::tensor::{all_tuples, combinations, AltTensor, Symmetry};

/// Three-index array of coefficients.
pub type Arr3 = Vec<Vec<Vec<CoeffFn>>>;
/// Four-index array of coefficients.
pub type Arr4 = Vec<Vec<Vec<Vec<CoeffFn>>>>;

pub fn arr3(n: usize) -> Arr3 {
    vec![vec![vec![CoeffFn::zero(); n]; n]; n]
}

pub fn arr4(n: usize) -> Arr4 {
    vec![arr3(n); n]
}

#[derive(Clone, Debug)]
pub struct FrameChart {
    n: usize,
    param: Param,
    /// brackets[a][b][c]: [E_a, E_b] = Σ_c brackets[a][b][c] E_c.
    brackets: Arr3,
    /// E_a f = deriv[a] · df/dρ for functions of ρ.
    deriv: Vec<CoeffFn>,
    /// gamma[c][a][b] = Γ^c_{ab}, with ∇_{E_a} E_b = Γ^c_{ab} E_c.
    gamma: Arr3,
    /// Υ_a for a chart whose connection was obtained by a change of scale;
    /// a weight-w density coefficient f then has ∇_a f = E_a f + w Υ_a f.
    upsilon: Vec<CoeffFn>,
}

/// Curvature of the chart connection, with the projective splitting.
#[derive(Clone, Debug)]
pub struct Curvature {
    /// r[a][b][c][d] = R_{ab}{}^c{}_d, (∇_a∇_b − ∇_b∇_a − ∇_{[E_a,E_b]})E_d = R_{ab}{}^c{}_d E_c.
    pub r: Arr4,
    /// ricci[b][d] = R_{ab}{}^a{}_d.
    pub ricci: Vec<Vec<CoeffFn>>,
    /// P_{ab} = Ric_{ab}/(n−1).
    pub schouten: Vec<Vec<CoeffFn>>,
    /// W_{ab}{}^c{}_d = R_{ab}{}^c{}_d − δ^c_a P_{bd} + δ^c_b P_{ad}.
    pub weyl: Arr4,
}

impl FrameChart {
    pub fn new(param: Param, brackets: Arr3, deriv: Vec<CoeffFn>, gamma: Arr3) -> Result<Self> {
        let n = deriv.len();
        let ok3 = |t: &Arr3| t.len() == n && t.iter().all(|x| x.len() == n && x.iter().all(|y| y.len() == n));
        if !ok3(&brackets) || !ok3(&gamma) {
            return Err(Error::DimMismatch {
                expected: n,
                got: brackets.len(),
            });
        }
        Ok(FrameChart {
            n,
            param,
            brackets,
            deriv,
            gamma,
            upsilon: vec![CoeffFn::zero(); n],
        })
    }

    /// Commuting frame with the flat connection; the last vector is ∂ρ.
    pub fn flat(n: usize, param: Param) -> Self {
        let mut deriv = vec![CoeffFn::zero(); n];
        deriv[n - 1] = CoeffFn::one();
        FrameChart::new(param, arr3(n), deriv, arr3(n)).expect("consistent dims")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn param(&self) -> Param {
        self.param
    }

    pub fn brackets(&self) -> &Arr3 {
        &self.brackets
    }

    pub fn deriv(&self) -> &[CoeffFn] {
        &self.deriv
    }

    pub fn gamma(&self) -> &Arr3 {
        &self.gamma
    }

    pub fn upsilon(&self) -> &[CoeffFn] {
        &self.upsilon
    }

    pub fn with_gamma(&self, gamma: Arr3) -> Self {
        FrameChart {
            gamma,
            upsilon: vec![CoeffFn::zero(); self.n],
            ..self.clone()
        }
    }

    /// Same frame and connection with every coefficient re-expressed in `param`.
    pub fn to_param(&self, param: Param) -> Self {
        let f3 = |t: &Arr3| -> Arr3 {
            t.iter()
                .map(|x| {
                    x.iter()
                        .map(|y| y.iter().map(|v| v.to_param(param)).collect())
                        .collect()
                })
                .collect()
        };
        FrameChart {
            n: self.n,
            param,
            brackets: f3(&self.brackets),
            deriv: self.deriv.iter().map(|v| v.to_param(param)).collect(),
            gamma: f3(&self.gamma),
            upsilon: self.upsilon.iter().map(|v| v.to_param(param)).collect(),
        }
    }

    /// E_a f.
    pub fn e(&self, a: usize, f: &CoeffFn) -> CoeffFn {
        if self.deriv[a].is_zero() {
            return CoeffFn::zero();
        }
        self.deriv[a].clone() * &f.d_rho()
    }

    /// ∇_a f for the coefficient of a density of weight w.
    pub fn e_weighted(&self, a: usize, f: &CoeffFn, w: i64) -> CoeffFn {
        let mut out = self.e(a, f);
        if w != 0 && !self.upsilon[a].is_zero() {
            out = out + &(self.upsilon[a].clone() * f).scale(&QScalar::int(w));
        }
        out
    }

    /// Jacobi identity with ρ-dependent structure functions, together with
    /// compatibility of the brackets with the derivation table.
    pub fn jacobi_residual(&self) -> Residual {
        let n = self.n;
        let c = &self.brackets;
        let mut res = Residual::new();
        for t in combinations(n, 3) {
            let (a, b, d) = (t[0], t[1], t[2]);
            for m in 0..n {
                let mut acc = CoeffFn::zero();
                for (x, y, z) in [(a, b, d), (b, d, a), (d, a, b)] {
                    for l in 0..n {
                        acc = acc + &(c[x][y][l].clone() * &c[l][z][m]);
                    }
                    acc = acc - &self.e(z, &c[x][y][m]);
                }
                res.push(&acc);
            }
        }
        for a in 0..n {
            for b in 0..n {
                // [E_a, E_b] acting on functions of ρ
                let mut acc =
                    self.deriv[a].clone() * &self.deriv[b].d_rho() - &(self.deriv[b].clone() * &self.deriv[a].d_rho());
                for k in 0..n {
                    acc = acc - &(c[a][b][k].clone() * &self.deriv[k]);
                }
                res.push(&acc);
            }
        }
        res
    }

    /// Γ^c_{ab} − Γ^c_{ba} − c^c_{ab}.
    pub fn torsion_residual(&self) -> Residual {
        let n = self.n;
        let mut res = Residual::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    res.push(&(self.gamma[c][a][b].clone() - &self.gamma[c][b][a] - &self.brackets[a][b][c]));
                }
            }
        }
        res
    }

    /// Γ^c_{ac}: the connection annihilates e^{1…n} iff these vanish.
    pub fn special_residual(&self) -> Residual {
        let n = self.n;
        let mut res = Residual::new();
        for a in 0..n {
            let mut acc = CoeffFn::zero();
            for c in 0..n {
                acc = acc + &self.gamma[c][a][c];
            }
            res.push(&acc);
        }
        res
    }

    pub fn curvature(&self) -> Curvature {
        let n = self.n;
        let g = &self.gamma;
        let cb = &self.brackets;
        let mut r = arr4(n);
        for a in 0..n {
            for b in 0..n {
                if b == a {
                    continue;
                }
                if b < a {
                    for c in 0..n {
                        for d in 0..n {
                            r[a][b][c][d] = -r[b][a][c][d].clone();
                        }
                    }
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = self.e(a, &g[c][b][d]) - &self.e(b, &g[c][a][d]);
                        for e in 0..n {
                            if !g[c][a][e].is_zero() {
                                acc = acc + &(g[c][a][e].clone() * &g[e][b][d]);
                            }
                            if !g[c][b][e].is_zero() {
                                acc = acc - &(g[c][b][e].clone() * &g[e][a][d]);
                            }
                            if !cb[a][b][e].is_zero() {
                                acc = acc - &(cb[a][b][e].clone() * &g[c][e][d]);
                            }
                        }
                        r[a][b][c][d] = acc;
                    }
                }
            }
        }
        let mut ricci = vec![vec![CoeffFn::zero(); n]; n];
        for b in 0..n {
            for d in 0..n {
                let mut acc = CoeffFn::zero();
                for a in 0..n {
                    acc = acc + &r[a][b][a][d];
                }
                ricci[b][d] = acc;
            }
        }
        let inv = QScalar::int(n as i64 - 1).inv().expect("n > 1");
        let schouten: Vec<Vec<CoeffFn>> = ricci
            .iter()
            .map(|row| row.iter().map(|v| v.scale(&inv)).collect())
            .collect();
        let mut weyl = r.clone();
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    weyl[a][b][a][d] = weyl[a][b][a][d].clone() - &schouten[b][d];
                    weyl[a][b][b][d] = weyl[a][b][b][d].clone() + &schouten[a][d];
                }
            }
        }
        Curvature {
            r,
            ricci,
            schouten,
            weyl,
        }
    }

    /// ∇_a T for every frame direction a. Contravariant slots come first;
    /// `weight` is the density weight of the coefficients.
    pub fn covariant_derivative(&self, t: &AltTensor<CoeffFn>, weight: i64) -> Vec<AltTensor<CoeffFn>> {
        let n = self.n;
        let (up, _) = t.valence();
        (0..n)
            .map(|a| {
                let mut out = AltTensor::new(n, t.valence(), t.symmetry());
                for idx in canonical_indices(t) {
                    let mut acc = self.e_weighted(a, &t.get(&idx), weight);
                    for (slot, &i) in idx.iter().enumerate() {
                        for l in 0..n {
                            let coef = if slot < up {
                                &self.gamma[i][a][l]
                            } else {
                                &self.gamma[l][a][i]
                            };
                            if coef.is_zero() {
                                continue;
                            }
                            let mut j = idx.clone();
                            j[slot] = l;
                            let v = t.get(&j);
                            if v.is_zero() {
                                continue;
                            }
                            let term = coef.clone() * &v;
                            acc = if slot < up { acc + &term } else { acc - &term };
                        }
                    }
                    out.set(&idx, acc);
                }
                out
            })
            .collect()
    }

    /// Exterior derivative of a form in the frame.
    pub fn exterior_derivative(&self, w: &AltTensor<CoeffFn>) -> AltTensor<CoeffFn> {
        let n = self.n;
        let k = w.valence().1;
        let mut out = AltTensor::form(n, k + 1);
        for idx in combinations(n, k + 1) {
            let mut acc = CoeffFn::zero();
            for i in 0..=k {
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| *p != i)
                    .map(|(_, &x)| x)
                    .collect();
                let term = self.e(idx[i], &w.get(&rest));
                acc = if i % 2 == 0 { acc + &term } else { acc - &term };
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let rest: Vec<usize> = idx
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| *p != i && *p != j)
                        .map(|(_, &x)| x)
                        .collect();
                    for l in 0..n {
                        let c = &self.brackets[idx[i]][idx[j]][l];
                        if c.is_zero() {
                            continue;
                        }
                        let mut full = vec![l];
                        full.extend(rest.iter().copied());
                        let term = c.clone() * &w.get(&full);
                        acc = if (i + j) % 2 == 0 { acc + &term } else { acc - &term };
                    }
                }
            }
            out.set(&idx, acc);
        }
        out
    }

    /// Levi-Civita connection of a frame metric via the Koszul formula.
    pub fn levi_civita(&self, g: &Mat<CoeffFn>) -> Result<Arr3> {
        let n = self.n;
        let ginv = g
            .inverse()
            .ok_or_else(|| Error::Degenerate("metric not invertible over Laurent polynomials".into()))?;
        let cb = &self.brackets;
        let lower = |a: usize, b: usize, c: usize| -> CoeffFn {
            // g([E_a, E_b], E_c)
            let mut acc = CoeffFn::zero();
            for l in 0..n {
                if !cb[a][b][l].is_zero() {
                    acc = acc + &(cb[a][b][l].clone() * &g[(l, c)]);
                }
            }
            acc
        };
        let half = QScalar::frac(1, 2);
        let mut low = arr3(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.e(a, &g[(b, c)]) + &self.e(b, &g[(a, c)]) - &self.e(c, &g[(a, b)]) + &lower(a, b, c)
                        - &lower(a, c, b)
                        - &lower(b, c, a);
                    low[c][a][b] = v.scale(&half);
                }
            }
        }
        let mut gamma = arr3(n);
        for d in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut acc = CoeffFn::zero();
                    for c in 0..n {
                        if !ginv[(d, c)].is_zero() {
                            acc = acc + &(ginv[(d, c)].clone() * &low[c][a][b]);
                        }
                    }
                    gamma[d][a][b] = acc;
                }
            }
        }
        Ok(gamma)
    }

    /// Lie bracket of vector fields given by frame components:
    /// [U, V]^k = U^a E_a V^k − V^a E_a U^k + U^a V^b c^k_{ab}.
    pub fn vf_bracket(&self, u: &[CoeffFn], v: &[CoeffFn]) -> Vec<CoeffFn> {
        let n = self.n;
        let mut out = vec![CoeffFn::zero(); n];
        for a in 0..n {
            if !u[a].is_zero() {
                for k in 0..n {
                    out[k] = out[k].clone() + &(u[a].clone() * &self.e(a, &v[k]));
                }
            }
            if !v[a].is_zero() {
                for k in 0..n {
                    out[k] = out[k].clone() - &(v[a].clone() * &self.e(a, &u[k]));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if u[a].is_zero() || v[b].is_zero() {
                    continue;
                }
                let uv = u[a].clone() * &v[b];
                for k in 0..n {
                    if !self.brackets[a][b][k].is_zero() {
                        out[k] = out[k].clone() + &(uv.clone() * &self.brackets[a][b][k]);
                    }
                }
            }
        }
        out
    }

    /// Change of scale by a function φ(ρ): Υ = dφ and
    /// Γ̂^c_{ab} = Γ^c_{ab} + δ^c_a Υ_b + δ^c_b Υ_a.
    pub fn change_scale(&self, phi: &CoeffFn) -> FrameChart {
        let n = self.n;
        let ups: Vec<CoeffFn> = (0..n).map(|a| self.e(a, phi)).collect();
        let mut gamma = self.gamma.clone();
        for a in 0..n {
            for b in 0..n {
                gamma[a][a][b] = gamma[a][a][b].clone() + &ups[b];
                gamma[b][a][b] = gamma[b][a][b].clone() + &ups[a];
            }
        }
        let upsilon = (0..n).map(|a| self.upsilon[a].clone() + &ups[a]).collect();
        FrameChart {
            gamma,
            upsilon,
            ..self.clone()
        }
    }
}

/// Canonical index tuples for the storage symmetry of `t`.
pub fn canonical_indices<T: Ring>(t: &AltTensor<T>) -> Vec<Vec<usize>> {
    let n = t.dim();
    let (r, k) = t.valence();
    let tails = match t.symmetry() {
        Symmetry::Alternating => combinations(n, k),
        Symmetry::Symmetric => all_tuples(n, k)
            .into_iter()
            .filter(|v| v.windows(2).all(|w| w[0] <= w[1]))
            .collect(),
        Symmetry::None => all_tuples(n, k),
    };
    let mut out = Vec::new();
    for head in all_tuples(n, r) {
        for tail in &tails {
            let mut idx = head.clone();
            idx.extend(tail.iter().copied());
            out.push(idx);
        }
    }
    out
}

/// Residual of the two trace identities of the projective Weyl tensor.
pub fn weyl_trace_residual(w: &Arr4) -> Residual {
    let n = w.len();
    let mut res = Residual::new();
    for b in 0..n {
        for d in 0..n {
            let mut acc = CoeffFn::zero();
            for a in 0..n {
                acc = acc + &w[a][b][a][d];
            }
            res.push(&acc);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let mut acc = CoeffFn::zero();
            for c in 0..n {
                acc = acc + &w[a][b][c][c];
            }
            res.push(&acc);
        }
    }
    res
}
