//! Exact algebra and tractor calculus for G2 and split G2 structures.

pub mod boundary;
pub mod chart;
pub mod error;
pub mod family;
pub mod json;
pub mod laurent;
pub mod linalg;
pub mod monge;
pub mod npk;
pub mod octonion;
pub mod package;
pub mod report;
pub mod residual;
pub mod ring;
pub mod scalar;
pub mod stable;
pub mod tensor;
pub mod tractor;

pub use error::{Error, Result};
pub use laurent::{CoeffFn, Param};
pub use linalg::Mat;
pub use residual::Residual;
pub use ring::Ring;
pub use scalar::QScalar;
pub use tensor::{AltTensor, Symmetry};
