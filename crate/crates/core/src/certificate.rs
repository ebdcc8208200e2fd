//! Verdicts and the evidence attached to them.

use gpm_exact::rat::Rat;

use crate::matrix::Mat;
use crate::space::{Element, Value};

/// Machine-checkable evidence for a verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Every facet inequality was checked exactly.
    AllFacets { count: usize },
    /// A facet `h` with `h·x < 0`.
    ViolatedFacet { facet: Vec<Rat>, value: Rat },
    /// A state that is negative on the element.
    SeparatingState { state: Element, value: Value },
    /// Spectrum bound of a Hermitian matrix.
    Spectrum { min_eigenvalue: f64 },
    /// Norm comparison `t ≥ ‖x‖` for a norm cone.
    NormBound { t: Value, norm: Value },
    /// A generator whose image leaves the cone.
    GeneratorImage { generator: Element, image: Element },
    /// An interval element that the map moves: `φ(g) ≠ g`.
    MovedElement { g: Element, image: Element },
    /// A state `ω` with `ω(f) = 1` but `ω∘φ ≠ ω`.
    StateChange { state: Element, pulled_back: Element },
    /// An element witnessing the failure of an existence condition.
    Witness { g: Element, note: String },
    /// A feasible point of the defining program.
    LpPoint { point: Vec<Rat> },
    /// Farkas multipliers refuting a linear system.
    Farkas { multipliers: Vec<Rat> },
    /// A map pair witnessing a failed identity.
    MapWitness { map: Mat<f64>, defect: f64 },
    /// A randomized check with a fixed seed found no counterexample.
    Sampled { samples: usize, seed: u64 },
    /// The verdict follows from the form of the object.
    Structural(String),
    /// Two values that should agree but do not.
    Mismatch { expected: Value, actual: Value },
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn pass(certificate: Certificate) -> Self {
        Verdict { holds: true, certificate }
    }

    pub fn fail(certificate: Certificate) -> Self {
        Verdict { holds: false, certificate }
    }

    pub fn from_bool(holds: bool) -> Self {
        Verdict { holds, certificate: Certificate::None }
    }
}
