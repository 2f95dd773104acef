use serde::{Deserialize, Serialize};

use crate::laurent::CoeffFn;
use crate::ring::Ring;

/// Summary of a family of quantities that should vanish identically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    /// Number of components that are not identically zero.
    pub nonzero: usize,
    /// Highest power of s appearing in any nonzero component.
    pub max_degree: Option<i32>,
}

impl Residual {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of<'a>(values: impl IntoIterator<Item = &'a CoeffFn>) -> Self {
        let mut r = Self::new();
        for v in values {
            r.push(v);
        }
        r
    }

    pub fn push(&mut self, v: &CoeffFn) {
        if v.is_zero() {
            return;
        }
        self.nonzero += 1;
        let d = v.max_exp();
        self.max_degree = self.max_degree.max(d);
    }

    pub fn merge(&mut self, other: &Residual) {
        self.nonzero += other.nonzero;
        self.max_degree = self.max_degree.max(other.max_degree);
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero == 0
    }
}
