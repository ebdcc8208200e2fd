//! Generalized probabilistic models over order unit spaces: membership and
//! norms, states, coherent and neutral Lüders rules, sequential
//! measurements, and slit interference decompositions.

pub mod catalog;
pub mod certificate;
pub mod clr;
pub mod coherence;
pub mod error;
pub mod json;
pub mod maps;
pub mod matrix;
pub mod nslit;
pub mod quantum;
pub mod scalar;
pub mod section;
pub mod sequential;
pub mod space;
pub mod state;

pub use certificate::{Certificate, Verdict};
pub use error::{CoreError, Result};
pub use matrix::Mat;
pub use scalar::Scalar;
pub use space::{AouSpace, Dichotomic, Element, Extremals, Norm, PolyCone, QuantumSpace, Value};
