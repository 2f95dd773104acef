//! JSON exchange format for tensors.
//!
//! `{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[1,2,3],"coeff":[["1","0","0","0"]]}]}`
//!
//! Indices are 1-based; for alternating tensors only strictly increasing
//! tuples are stored. Each coefficient is a list of Laurent coefficients,
//! the k-th being the coefficient of s^(s0 + k), and each of those is
//! `[a, b, c, d]` for a + b√2 + c√5 + d√10.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{CoeffFn, Param};
use crate::linalg::Mat;
use crate::ring::Ring;
use crate::scalar::QScalar;
use crate::stable::Form;
use crate::tensor::{AltTensor, Symmetry};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub dim: usize,
    pub valence: [usize; 2],
    pub alt: bool,
    /// Symmetric covariant block; only nondecreasing tuples are stored.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub sym: bool,
    /// Parameterization tag of s; absent for constant tensors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub idx: Vec<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub s0: i32,
    pub coeff: Vec<[String; 4]>,
}

fn is_zero(v: &i32) -> bool {
    *v == 0
}

fn coeff_json(v: &CoeffFn) -> (i32, Vec<[String; 4]>) {
    let (Some(lo), Some(hi)) = (v.min_exp(), v.max_exp()) else {
        return (0, vec![QScalar::zero().to_strings()]);
    };
    (lo, (lo..=hi).map(|k| v.coeff(k).to_strings()).collect())
}

pub fn tensor_to_json(t: &AltTensor<CoeffFn>) -> TensorJson {
    let mut param = None;
    let entries = t
        .entries()
        .filter(|(_, v)| !v.is_zero())
        .map(|(idx, v)| {
            if !v.is_constant() {
                param = Some(v.param().tag().to_string());
            }
            let (s0, coeff) = coeff_json(v);
            EntryJson {
                idx: idx.iter().map(|i| i + 1).collect(),
                s0,
                coeff,
            }
        })
        .collect();
    let (p, q) = t.valence();
    TensorJson {
        dim: t.dim(),
        valence: [p, q],
        alt: t.symmetry() == Symmetry::Alternating,
        sym: t.symmetry() == Symmetry::Symmetric,
        param,
        entries,
    }
}

pub fn form_to_json(f: &Form) -> TensorJson {
    tensor_to_json(&f.map(|q| CoeffFn::constant(q.clone())))
}

/// A square matrix as a (0,2) tensor (`sym`) or as a (1,1) tensor M^a_b.
pub fn mat_to_json(m: &Mat<CoeffFn>, sym: bool) -> TensorJson {
    let n = m.rows();
    let mut t = if sym {
        AltTensor::new(n, (0, 2), Symmetry::Symmetric)
    } else {
        AltTensor::new(n, (1, 1), Symmetry::None)
    };
    for i in 0..n {
        for j in 0..n {
            if !m[(i, j)].is_zero() && (!sym || i <= j) {
                t.set(&[i, j], m[(i, j)].clone());
            }
        }
    }
    tensor_to_json(&t)
}

fn check_idx(tj: &TensorJson, idx: &[usize]) -> Result<()> {
    let rank = tj.valence[0] + tj.valence[1];
    if idx.len() != rank {
        return Err(Error::Parse(format!(
            "index {idx:?} has length {}, expected {rank}",
            idx.len()
        )));
    }
    if idx.iter().any(|&i| i == 0 || i > tj.dim) {
        return Err(Error::Parse(format!("index {idx:?} out of range 1..={}", tj.dim)));
    }
    let cov = &idx[tj.valence[0]..];
    let ordered = if tj.alt {
        cov.windows(2).all(|w| w[0] < w[1])
    } else if tj.sym {
        cov.windows(2).all(|w| w[0] <= w[1])
    } else {
        true
    };
    if !ordered {
        return Err(Error::Parse(format!("index {idx:?} is not in canonical order")));
    }
    Ok(())
}

pub fn tensor_from_json(tj: &TensorJson) -> Result<AltTensor<CoeffFn>> {
    if tj.alt && tj.sym {
        return Err(Error::Parse("a tensor cannot be both alternating and symmetric".into()));
    }
    let sym = match (tj.alt, tj.sym) {
        (true, _) => Symmetry::Alternating,
        (_, true) => Symmetry::Symmetric,
        _ => Symmetry::None,
    };
    let param = tj
        .param
        .as_deref()
        .map(Param::from_tag)
        .transpose()?
        .unwrap_or(Param::Rho);
    let mut t: AltTensor<CoeffFn> = AltTensor::new(tj.dim, (tj.valence[0], tj.valence[1]), sym);
    for e in &tj.entries {
        check_idx(tj, &e.idx)?;
        if e.coeff.is_empty() {
            return Err(Error::Parse(format!("entry {:?} has no coefficients", e.idx)));
        }
        let terms = e
            .coeff
            .iter()
            .enumerate()
            .map(|(k, q)| Ok((e.s0 + k as i32, QScalar::from_strings(q)?)))
            .collect::<Result<Vec<_>>>()?;
        let idx: Vec<usize> = e.idx.iter().map(|i| i - 1).collect();
        if !t.get(&idx).is_zero() {
            return Err(Error::Parse(format!("duplicate index {:?}", e.idx)));
        }
        t.set(&idx, CoeffFn::from_terms(param, terms));
    }
    Ok(t)
}

/// Read a constant 3-form.
pub fn parse_form(text: &str) -> Result<Form> {
    let tj: TensorJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if tj.valence != [0, 3] || !tj.alt {
        return Err(Error::Parse("expected an alternating tensor of valence [0,3]".into()));
    }
    let t = tensor_from_json(&tj)?;
    let mut out = AltTensor::form(tj.dim, 3);
    for (idx, v) in t.entries() {
        let c = v
            .as_constant()
            .ok_or_else(|| Error::Parse(format!("entry {idx:?} depends on s")))?;
        out.set(idx, c);
    }
    Ok(out)
}

pub fn to_string(tj: &TensorJson) -> String {
    serde_json::to_string(tj).expect("tensor serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::phi_xi;

    #[test]
    fn form_round_trip() {
        let phi = phi_xi(-1);
        let text = to_string(&form_to_json(&phi));
        assert!(text.starts_with(
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[1,2,3],"coeff":[["1","0","0","0"]]}"#
        ));
        assert_eq!(parse_form(&text).unwrap(), phi);
    }

    #[test]
    fn laurent_round_trip() {
        let mut t = AltTensor::form(4, 2);
        t.set(
            &[0, 3],
            CoeffFn::from_terms(Param::NegSq, [(-2, QScalar::sqrt2()), (1, QScalar::frac(3, 7))]),
        );
        t.set(&[1, 2], CoeffFn::int(5));
        let tj = tensor_to_json(&t);
        assert_eq!(tj.param.as_deref(), Some("-s2"));
        assert_eq!(tj.entries[0].s0, -2);
        assert_eq!(tj.entries[0].coeff.len(), 4);
        assert_eq!(tensor_from_json(&tj).unwrap(), t);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[2,1,3],"coeff":[["1","0","0","0"]]}]}"#,
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[0,1,3],"coeff":[["1","0","0","0"]]}]}"#,
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[1,2,8],"coeff":[["1","0","0","0"]]}]}"#,
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[1,2,3],"coeff":[["x","0","0","0"]]}]}"#,
            r#"{"dim":7,"valence":[0,2],"alt":true,"entries":[]}"#,
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[1,2,3],"coeff":[["1","0","0","0"]]},{"idx":[1,2,3],"coeff":[["1","0","0","0"]]}]}"#,
            r#"{"dim":7,"valence":[0,3],"alt":true,"entries":[{"idx":[1,2,3],"s0":1,"coeff":[["1","0","0","0"]]}]}"#,
            "not json",
        ];
        for b in bad {
            assert!(parse_form(b).is_err(), "{b}");
        }
    }
}
