//! Small dense-indexed tensors with canonical storage for alternating and
//! symmetric covariant blocks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::CoeffFn;
use crate::linalg::Mat;
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    Alternating,
    Symmetric,
}

/// Tensor with `valence.0` contravariant slots followed by `valence.1`
/// covariant slots. The symmetry tag refers to the covariant block.
#[derive(Clone, Debug, PartialEq)]
pub struct AltTensor<T: Ring = CoeffFn> {
    dim: usize,
    valence: (usize, usize),
    sym: Symmetry,
    entries: BTreeMap<Vec<usize>, T>,
}

/// Sort `idx` in place, returning the permutation sign (0 if an index repeats).
pub fn sort_with_sign(idx: &mut [usize]) -> i32 {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// All strictly increasing k-tuples from 0..n.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All k-tuples from 0..n in lexicographic order.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

impl<T: Ring> AltTensor<T> {
    pub fn new(dim: usize, valence: (usize, usize), sym: Symmetry) -> Self {
        AltTensor {
            dim,
            valence,
            sym,
            entries: BTreeMap::new(),
        }
    }

    /// Zero k-form.
    pub fn form(dim: usize, degree: usize) -> Self {
        Self::new(dim, (0, degree), Symmetry::Alternating)
    }

    /// e^{i₁…i_k} (0-based indices, any order).
    pub fn basis_form(dim: usize, idx: &[usize]) -> Self {
        let mut f = Self::form(dim, idx.len());
        f.set(idx, T::one());
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> (usize, usize) {
        self.valence
    }

    pub fn rank(&self) -> usize {
        self.valence.0 + self.valence.1
    }

    pub fn symmetry(&self) -> Symmetry {
        self.sym
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical (index, value) pairs, zero entries omitted.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.entries.iter()
    }

    fn canonical(&self, idx: &[usize]) -> (Vec<usize>, i32) {
        assert_eq!(idx.len(), self.rank(), "index tuple of wrong length");
        debug_assert!(idx.iter().all(|&i| i < self.dim));
        let mut key = idx.to_vec();
        let r = self.valence.0;
        let sign = match self.sym {
            Symmetry::None => 1,
            Symmetry::Alternating => sort_with_sign(&mut key[r..]),
            Symmetry::Symmetric => {
                key[r..].sort_unstable();
                1
            }
        };
        (key, sign)
    }

    pub fn get(&self, idx: &[usize]) -> T {
        let (key, sign) = self.canonical(idx);
        if sign == 0 {
            return T::zero();
        }
        match self.entries.get(&key) {
            Some(v) if sign < 0 => -v.clone(),
            Some(v) => v.clone(),
            None => T::zero(),
        }
    }

    /// Set the component at `idx`; the symmetric partners follow.
    pub fn set(&mut self, idx: &[usize], value: T) {
        let (key, sign) = self.canonical(idx);
        if sign == 0 {
            assert!(value.is_zero(), "nonzero value on a repeated alternating index");
            return;
        }
        let v = if sign < 0 { -value } else { value };
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    pub fn add_at(&mut self, idx: &[usize], value: T) {
        let cur = self.get(idx);
        self.set(idx, cur + &value);
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> AltTensor<U> {
        let mut out = AltTensor::new(self.dim, self.valence, self.sym);
        for (k, v) in &self.entries {
            let u = f(v);
            if !u.is_zero() {
                out.entries.insert(k.clone(), u);
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c)
    }

    fn check_same_shape(&self, o: &Self) {
        assert_eq!(self.dim, o.dim, "dim mismatch");
        assert_eq!(self.valence, o.valence, "valence mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_same_shape(o);
        if self.sym == o.sym {
            let mut out = self.clone();
            for (k, v) in &o.entries {
                let cur = out.entries.remove(k).unwrap_or_else(T::zero) + v;
                if !cur.is_zero() {
                    out.entries.insert(k.clone(), cur);
                }
            }
            return out;
        }
        let mut out = Self::new(self.dim, self.valence, Symmetry::None);
        for idx in all_tuples(self.dim, self.rank()) {
            out.set(&idx, self.get(&idx) + &o.get(&idx));
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&(-T::one())))
    }

    /// Every component, in lexicographic index order.
    pub fn components(&self) -> Vec<(Vec<usize>, T)> {
        all_tuples(self.dim, self.rank())
            .into_iter()
            .map(|idx| {
                let v = self.get(&idx);
                (idx, v)
            })
            .collect()
    }

    /// Drop the symmetry tag, storing every component explicitly.
    pub fn to_general(&self) -> Self {
        let mut out = Self::new(self.dim, self.valence, Symmetry::None);
        for (idx, v) in self.components() {
            out.set(&idx, v);
        }
        out
    }

    /// Alternation of the covariant block, (1/k!)Σ sgn(σ) T_σ.
    pub fn antisymmetrize(&self) -> Self {
        let (r, k) = self.valence;
        let mut out = Self::new(self.dim, self.valence, Symmetry::Alternating);
        let perms = permutations(k);
        let norm = T::from_int(factorial(k)).try_inv().expect("k! invertible");
        for contra in all_tuples(self.dim, r) {
            for co in combinations(self.dim, k) {
                let mut acc = T::zero();
                for (p, sgn) in &perms {
                    let mut idx = contra.clone();
                    idx.extend(p.iter().map(|&i| co[i]));
                    let v = self.get(&idx);
                    acc = if *sgn > 0 { acc + &v } else { acc - &v };
                }
                let mut idx = contra.clone();
                idx.extend(co.iter().copied());
                out.set(&idx, acc * &norm);
            }
        }
        out
    }

    /// Wedge product of two forms, normalized so e^i ∧ e^j = e^{ij}.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        if self.dim != o.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: o.dim,
            });
        }
        if self.valence.0 != 0 || o.valence.0 != 0 {
            return Err(Error::Precondition("wedge expects covariant forms".into()));
        }
        let p = self.valence.1;
        let q = o.valence.1;
        let mut out = Self::form(self.dim, p + q);
        if p + q > self.dim {
            return Ok(out);
        }
        let a = self.as_alternating();
        let b = o.as_alternating();
        for (ia, va) in &a.entries {
            for (ib, vb) in &b.entries {
                let mut idx = ia.clone();
                idx.extend(ib.iter().copied());
                let mut sorted = idx.clone();
                let sign = sort_with_sign(&mut sorted);
                if sign == 0 {
                    continue;
                }
                let v = va.clone() * vb;
                out.add_at(&sorted, if sign > 0 { v } else { -v });
            }
        }
        Ok(out)
    }

    fn as_alternating(&self) -> Self {
        match self.sym {
            Symmetry::Alternating => self.clone(),
            _ if self.valence.1 <= 1 => {
                let mut out = Self::new(self.dim, self.valence, Symmetry::Alternating);
                out.entries = self.entries.clone();
                out
            }
            _ => self.antisymmetrize(),
        }
    }

    /// v ⌟ T: insert a vector into the first covariant slot.
    pub fn interior(&self, v: &[T]) -> Self {
        assert_eq!(v.len(), self.dim);
        let (r, k) = self.valence;
        assert!(k >= 1, "interior product needs a covariant slot");
        let mut out = Self::new(self.dim, (r, k - 1), self.sym);
        if self.sym == Symmetry::Alternating {
            for (idx, val) in &self.entries {
                // move each covariant index to the front, with sign
                for pos in 0..k {
                    let i = idx[r + pos];
                    if v[i].is_zero() {
                        continue;
                    }
                    let mut rest: Vec<usize> = idx[..r].to_vec();
                    rest.extend(idx[r..].iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &x)| x));
                    let term = v[i].clone() * val;
                    out.add_at(&rest, if pos % 2 == 0 { term } else { -term });
                }
            }
            return out;
        }
        for idx in all_tuples(self.dim, r + k - 1) {
            let mut acc = T::zero();
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                let mut full = idx[..r].to_vec();
                full.push(i);
                full.extend(idx[r..].iter().copied());
                acc = acc + &(vi.clone() * &self.get(&full));
            }
            out.set(&idx, acc);
        }
        out
    }

    /// Pullback of a covariant tensor by the linear map with matrix `a`
    /// (column j is the image of basis vector j); `a` may be rectangular,
    /// mapping a `a.cols()`-dimensional space into this one.
    pub fn pullback(&self, a: &Mat<T>) -> Self {
        assert_eq!(self.valence.0, 0, "pullback of covariant tensors only");
        assert_eq!(a.rows(), self.dim);
        let k = self.valence.1;
        let n = a.cols();
        let mut out = Self::new(n, (0, k), self.sym);
        let targets = match self.sym {
            Symmetry::Alternating => combinations(n, k),
            _ => all_tuples(n, k),
        };
        let src = self.components();
        for t in targets {
            if self.sym == Symmetry::Symmetric && t.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let mut acc = T::zero();
            for (idx, v) in &src {
                if v.is_zero() {
                    continue;
                }
                let mut term = v.clone();
                for (slot, &j) in idx.iter().enumerate() {
                    term = term * &a[(j, t[slot])];
                    if term.is_zero() {
                        break;
                    }
                }
                acc = acc + &term;
            }
            out.set(&t, acc);
        }
        out
    }

    /// Contract pairs of slots (slot of self, slot of other). With a metric,
    /// paired slots must both be covariant and are contracted through the
    /// inverse metric; without one, each pair must be one upper and one lower.
    ///
    /// The result lists the free slots of self, then of other, with all
    /// contravariant slots moved to the front.
    pub fn contract(&self, other: &Self, pairs: &[(usize, usize)], metric: Option<&Mat<T>>) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let inv = match metric {
            Some(g) => Some(g.inverse().ok_or_else(|| Error::Degenerate("singular metric".into()))?),
            None => None,
        };
        let is_upper = |t: &Self, s: usize| s < t.valence.0;
        for &(i, j) in pairs {
            let (ui, uj) = (is_upper(self, i), is_upper(other, j));
            match metric {
                Some(_) if ui || uj => {
                    return Err(Error::Precondition("metric contraction needs covariant slots".into()))
                }
                None if ui == uj => {
                    return Err(Error::Precondition(
                        "plain contraction needs one upper and one lower slot".into(),
                    ))
                }
                _ => {}
            }
        }
        let free_a: Vec<usize> = (0..self.rank()).filter(|s| !pairs.iter().any(|p| p.0 == *s)).collect();
        let free_b: Vec<usize> = (0..other.rank()).filter(|s| !pairs.iter().any(|p| p.1 == *s)).collect();
        let mut free: Vec<(bool, usize)> = free_a
            .iter()
            .map(|&s| (true, s))
            .chain(free_b.iter().map(|&s| (false, s)))
            .collect();
        free.sort_by_key(|&(a, s)| {
            let up = if a { is_upper(self, s) } else { is_upper(other, s) };
            !up
        });
        let n_up = free
            .iter()
            .filter(|&&(a, s)| if a { is_upper(self, s) } else { is_upper(other, s) })
            .count();
        let mut out = Self::new(n, (n_up, free.len() - n_up), Symmetry::None);
        let a_comp: Vec<(Vec<usize>, T)> = self.components().into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let b_comp: Vec<(Vec<usize>, T)> = other.components().into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for (ia, va) in &a_comp {
            for (ib, vb) in &b_comp {
                let mut w = va.clone() * vb;
                for &(i, j) in pairs {
                    match &inv {
                        Some(gi) => w = w * &gi[(ia[i], ib[j])],
                        None => {
                            if ia[i] != ib[j] {
                                w = T::zero();
                            }
                        }
                    }
                    if w.is_zero() {
                        break;
                    }
                }
                if w.is_zero() {
                    continue;
                }
                let idx: Vec<usize> = free.iter().map(|&(a, s)| if a { ia[s] } else { ib[s] }).collect();
                out.add_at(&idx, w);
            }
        }
        Ok(out)
    }

    /// Trace over an upper slot `i` and a lower slot `j`.
    pub fn trace(&self, i: usize, j: usize) -> Result<Self> {
        if !(i < self.valence.0 && j >= self.valence.0) {
            return Err(Error::Precondition("trace needs one upper and one lower slot".into()));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&s| s != i && s != j).collect();
        let mut out = Self::new(self.dim, (self.valence.0 - 1, self.valence.1 - 1), Symmetry::None);
        for (idx, v) in self.components() {
            if idx[i] == idx[j] && !v.is_zero() {
                let key: Vec<usize> = keep.iter().map(|&s| idx[s]).collect();
                out.add_at(&key, v);
            }
        }
        Ok(out)
    }

    /// Value of a rank-0 tensor.
    pub fn scalar(&self) -> T {
        assert_eq!(self.rank(), 0);
        self.get(&[])
    }

    /// Component of a top-degree form on e^{1…n}.
    pub fn top_coefficient(&self) -> T {
        assert_eq!(self.valence, (0, self.dim));
        let idx: Vec<usize> = (0..self.dim).collect();
        self.get(&idx)
    }
}

/// All permutations of 0..k with their signs.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    for p in all_tuples(k, k) {
        let mut s = p.clone();
        let sign = sort_with_sign(&mut s);
        if sign != 0 {
            out.push((p, sign));
        }
    }
    out
}

/// Identity endomorphism as a (1,1) tensor.
pub fn delta<T: Ring>(dim: usize) -> AltTensor<T> {
    let mut d = AltTensor::new(dim, (1, 1), Symmetry::None);
    for i in 0..dim {
        d.set(&[i, i], T::one());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QScalar;

    type F = AltTensor<QScalar>;

    #[test]
    fn wedge_basis() {
        let e1 = F::basis_form(6, &[0]);
        let e2 = F::basis_form(6, &[1]);
        assert_eq!(e1.wedge(&e2).unwrap(), F::basis_form(6, &[0, 1]));
        assert_eq!(
            e2.wedge(&e1).unwrap(),
            F::basis_form(6, &[0, 1]).scale(&QScalar::int(-1))
        );
        assert!(e1.wedge(&e1).unwrap().is_zero());
    }

    #[test]
    fn alternating_reads() {
        let mut f = F::form(5, 3);
        f.set(&[2, 0, 1], QScalar::int(4));
        assert_eq!(f.get(&[0, 1, 2]), QScalar::int(4));
        assert_eq!(f.get(&[1, 0, 2]), QScalar::int(-4));
        assert_eq!(f.get(&[1, 1, 2]), QScalar::zero());
        assert_eq!(f.entries().count(), 1);
    }

    #[test]
    fn interior_of_basis_form() {
        let f = F::basis_form(4, &[0, 1, 2]);
        let mut v = vec![QScalar::zero(); 4];
        v[1] = QScalar::one();
        // e₂ ⌟ e^{123} = −e^{13}
        assert_eq!(f.interior(&v), F::basis_form(4, &[0, 2]).scale(&QScalar::int(-1)));
    }

    #[test]
    fn trace_of_identity() {
        let d = delta::<QScalar>(7);
        assert_eq!(d.trace(0, 1).unwrap().scalar(), QScalar::int(7));
    }

    #[test]
    fn antisymmetrize_matches_wedge() {
        let a = F::basis_form(5, &[0]);
        let b = F::basis_form(5, &[3, 4]);
        let mut t = F::new(5, (0, 3), Symmetry::None);
        for idx in all_tuples(5, 3) {
            t.set(&idx, a.get(&idx[..1]) * &b.get(&idx[1..]));
        }
        // Alt(α⊗β) = (1!2!/3!) α∧β
        let w = a.wedge(&b).unwrap().scale(&QScalar::frac(1, 3));
        assert_eq!(t.antisymmetrize(), w);
    }
}
