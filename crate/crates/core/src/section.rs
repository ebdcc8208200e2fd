//! Transport of maps through sections `τ: W → V`, `τ′: V → W` with
//! `τ′ ∘ τ = id`.

use nalgebra::DMatrix;

use crate::certificate::Verdict;
use crate::error::{CoreError, Result};
use crate::maps::{is_coherent, is_f_compatible, is_neutral, positive_between, MapMatrix, PositiveMap};
use crate::matrix::Mat;
use crate::space::{AouSpace, Element};

/// Denominator bound used to return transported maps on exact spaces.
pub const MAX_DENOMINATOR: i64 = 64;

#[derive(Clone, Debug)]
pub struct TransportReport {
    /// `τ′ ∘ φ ∘ τ` on `W`.
    pub map: PositiveMap,
    pub source_coherent: Verdict,
    pub source_neutral: Verdict,
    pub f_compatible: Verdict,
    pub coherent: Verdict,
    pub neutral: Verdict,
}

fn float_rank(m: &Mat<f64>) -> usize {
    let d = DMatrix::from_row_slice(m.nrows(), m.ncols(), m.entries());
    d.rank(1e-9)
}

fn section_error(what: &str) -> CoreError {
    CoreError::InvalidInput(format!("section axiom fails: {what}"))
}

/// Checks the section axioms, then returns `τ′ ∘ φ ∘ τ` with its
/// classification relative to `f ∈ W` next to that of `φ` relative to
/// `τ(f)`.
pub fn section_transport(
    w: &AouSpace,
    v: &AouSpace,
    tau: &PositiveMap,
    tau_prime: &PositiveMap,
    phi: &PositiveMap,
    f: &Element,
) -> Result<TransportReport> {
    let (vd, wd) = (v.dim(), w.dim());
    if tau.shape() != (vd, wd) || tau_prime.shape() != (wd, vd) {
        return Err(CoreError::DimensionMismatch { expected: vd * wd, got: tau.shape().0 * tau.shape().1 });
    }
    let unit_image = v.coerce(&tau.apply(&w.unit()))?;
    if !crate::scalar::vnear(&unit_image.to_f64(), &v.unit().to_f64()) {
        return Err(section_error("tau is not unital"));
    }
    if !positive_between(w, v, tau)?.holds {
        return Err(section_error("tau is not positive"));
    }
    if !positive_between(v, w, tau_prime)?.holds {
        return Err(section_error("tau' is not positive"));
    }
    if float_rank(&tau.to_f64()) != wd {
        return Err(section_error("tau is not injective"));
    }
    if float_rank(&tau_prime.to_f64()) != wd {
        return Err(section_error("tau' is not surjective"));
    }
    if !tau_prime.compose(tau).to_f64().near(&Mat::identity(wd)) {
        return Err(section_error("tau' o tau is not the identity"));
    }
    let phi = phi.coerce(v)?;
    let f = w.coerce(f)?;
    let tf = v.coerce(&tau.apply(&f))?;
    let raw = tau_prime.compose(&phi).compose(tau);
    let map = match (&raw.matrix, w.is_exact()) {
        (MapMatrix::Float(m), true) => PositiveMap::exact(
            Mat::rationalize(m, MAX_DENOMINATOR)
                .ok_or_else(|| CoreError::Unsupported("transported map is not a small-denominator rational".into()))?,
        ),
        _ => PositiveMap { matrix: raw.matrix.clone(), kraus: None },
    };
    Ok(TransportReport {
        source_coherent: is_coherent(v, &phi, &tf)?,
        source_neutral: is_neutral(v, &phi, &tf)?,
        f_compatible: is_f_compatible(w, &map, &f)?,
        coherent: is_coherent(w, &map, &f)?,
        neutral: is_neutral(w, &map, &f)?,
        map,
    })
}

/// The classical-to-quantum section `v ↦ diag(v)` with diagonal
/// extraction as left inverse.
pub fn diagonal_section(n: usize) -> (PositiveMap, PositiveMap) {
    let dim = n * n;
    let mut tau = Mat::zeros(dim, n);
    let mut back = Mat::zeros(n, dim);
    for k in 0..n {
        tau[(k, k)] = 1.0;
        back[(k, k)] = 1.0;
    }
    (PositiveMap::float(tau), PositiveMap::float(back))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum;
    use gpm_exact::rat::ints;

    #[test]
    fn quantum_projection_transports_to_classical_clr() {
        let w = AouSpace::classical(2).unwrap();
        let v = AouSpace::quantum(2).unwrap();
        let (tau, back) = diagonal_section(2);
        let phi = PositiveMap::conjugation(&quantum::diag(&[1.0, 0.0]));
        let f = Element::Exact(ints(&[1, 0]));
        let r = section_transport(&w, &v, &tau, &back, &phi, &f).unwrap();
        assert_eq!(r.map.as_exact().unwrap(), &Mat::from_rows(&[ints(&[1, 0]), ints(&[0, 0])]));
        assert!(r.source_coherent.holds && r.coherent.holds && r.neutral.holds && r.f_compatible.holds);
    }

    #[test]
    fn identity_section_leaves_map_unchanged() {
        let s = AouSpace::classical(3).unwrap();
        let id = PositiveMap::identity(&s);
        let phi = PositiveMap::exact(Mat::from_rows(&[ints(&[1, 0, 0]), ints(&[0, 0, 0]), ints(&[0, 0, 0])]));
        let r = section_transport(&s, &s, &id, &id, &phi, &Element::Exact(ints(&[1, 0, 0]))).unwrap();
        assert_eq!(r.map, phi);
    }

    #[test]
    fn non_unital_embedding_is_rejected() {
        let w = AouSpace::classical(2).unwrap();
        let v = AouSpace::quantum(2).unwrap();
        let (tau, back) = diagonal_section(2);
        let half = PositiveMap::float(tau.to_f64().scale(&0.5));
        let phi = PositiveMap::identity(&v);
        let f = Element::Exact(ints(&[1, 0]));
        assert!(section_transport(&w, &v, &half, &back, &phi, &f).is_err());
    }
}
