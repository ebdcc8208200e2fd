//! Linear maps on a space and their classification: positivity,
//! `f`-compatibility, projectivity, neutrality and coherence.

use gpm_exact::rat::{self, dot, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::certificate::{Certificate, Verdict};
use crate::error::{check_len, CoreError, Result};
use crate::matrix::Mat;
use crate::quantum::{self, CMat};
use crate::scalar::TOL;
use crate::space::{AouSpace, Element, PolyCone};

/// Seed for every sampled check, so verdicts are reproducible.
pub const SAMPLE_SEED: u64 = 0x0005_eed1_u64;

#[derive(Clone, Debug, PartialEq)]
pub enum MapMatrix {
    Exact(Mat<Rat>),
    Float(Mat<f64>),
}

/// A linear map `φ` in matrix form (column `j` is the image of basis
/// vector `j`). Positivity is a checked property, not an invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveMap {
    pub matrix: MapMatrix,
    /// Kraus operators when the map is known to be `X ↦ Σ K X K†`.
    pub kraus: Option<Vec<CMat>>,
}

impl PositiveMap {
    pub fn exact(m: Mat<Rat>) -> Self {
        PositiveMap { matrix: MapMatrix::Exact(m), kraus: None }
    }

    pub fn float(m: Mat<f64>) -> Self {
        PositiveMap { matrix: MapMatrix::Float(m), kraus: None }
    }

    /// `X ↦ K X K†` on Hermitian coordinates.
    pub fn conjugation(k: &CMat) -> Self {
        PositiveMap {
            matrix: MapMatrix::Float(quantum::conjugation_map(k)),
            kraus: Some(vec![k.clone()]),
        }
    }

    pub fn identity(space: &AouSpace) -> Self {
        let n = space.dim();
        if space.is_exact() {
            Self::exact(Mat::identity(n))
        } else {
            Self::float(Mat::identity(n))
        }
    }

    pub fn zero(space: &AouSpace) -> Self {
        let n = space.dim();
        if space.is_exact() {
            Self::exact(Mat::zeros(n, n))
        } else {
            Self::float(Mat::zeros(n, n))
        }
    }

    /// The rank-one map `x ↦ ω(x) f`.
    pub fn rank_one(f: &Element, omega: &Element) -> Self {
        match (f, omega) {
            (Element::Exact(f), Element::Exact(w)) => Self::exact(Mat::outer(f, w)),
            _ => Self::float(Mat::outer(&f.to_f64(), &omega.to_f64())),
        }
    }

    pub fn dim(&self) -> usize {
        self.shape().0
    }

    /// `(rows, columns)`; maps between different spaces are rectangular.
    pub fn shape(&self) -> (usize, usize) {
        match &self.matrix {
            MapMatrix::Exact(m) => (m.nrows(), m.ncols()),
            MapMatrix::Float(m) => (m.nrows(), m.ncols()),
        }
    }

    pub fn as_exact(&self) -> Option<&Mat<Rat>> {
        match &self.matrix {
            MapMatrix::Exact(m) => Some(m),
            MapMatrix::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> Mat<f64> {
        match &self.matrix {
            MapMatrix::Exact(m) => m.to_f64(),
            MapMatrix::Float(m) => m.clone(),
        }
    }

    pub fn apply(&self, x: &Element) -> Element {
        match (&self.matrix, x) {
            (MapMatrix::Exact(m), Element::Exact(v)) => Element::Exact(m.apply(v)),
            _ => Element::Float(self.to_f64().apply(&x.to_f64())),
        }
    }

    /// The functional `ω ∘ φ`.
    pub fn pullback(&self, w: &Element) -> Element {
        match (&self.matrix, w) {
            (MapMatrix::Exact(m), Element::Exact(v)) => Element::Exact(m.pullback(v)),
            _ => Element::Float(self.to_f64().pullback(&w.to_f64())),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PositiveMap) -> PositiveMap {
        let matrix = match (&self.matrix, &other.matrix) {
            (MapMatrix::Exact(a), MapMatrix::Exact(b)) => MapMatrix::Exact(a.compose(b)),
            _ => MapMatrix::Float(self.to_f64().compose(&other.to_f64())),
        };
        let kraus = match (&self.kraus, &other.kraus) {
            (Some(a), Some(b)) => Some(
                a.iter().flat_map(|k| b.iter().map(move |l| k * l)).collect(),
            ),
            _ => None,
        };
        PositiveMap { matrix, kraus }
    }

    pub fn sub(&self, other: &PositiveMap) -> PositiveMap {
        let matrix = match (&self.matrix, &other.matrix) {
            (MapMatrix::Exact(a), MapMatrix::Exact(b)) => MapMatrix::Exact(a.sub(b)),
            _ => MapMatrix::Float(self.to_f64().sub(&other.to_f64())),
        };
        PositiveMap { matrix, kraus: None }
    }

    /// Equality, exact for two exact maps and within tolerance otherwise.
    pub fn near(&self, other: &PositiveMap) -> bool {
        match (&self.matrix, &other.matrix) {
            (MapMatrix::Exact(a), MapMatrix::Exact(b)) => a == b,
            _ => self.to_f64().near(&other.to_f64()),
        }
    }

    /// Largest absolute matrix entry.
    pub fn max_abs(&self) -> f64 {
        self.to_f64().max_abs()
    }

    /// Checks the shape and coordinate kind against a space.
    pub fn coerce(&self, space: &AouSpace) -> Result<PositiveMap> {
        check_len(space.dim(), self.shape().0)?;
        check_len(space.dim(), self.shape().1)?;
        match (space.is_exact(), &self.matrix) {
            (true, MapMatrix::Float(_)) => Err(CoreError::NeedsExact("maps on this space")),
            (false, MapMatrix::Exact(m)) => Ok(PositiveMap {
                matrix: MapMatrix::Float(m.to_f64()),
                kraus: self.kraus.clone(),
            }),
            _ => Ok(self.clone()),
        }
    }
}

fn elements_near(a: &Element, b: &Element) -> bool {
    match (a, b) {
        (Element::Exact(x), Element::Exact(y)) => x == y,
        _ => crate::scalar::vnear(&a.to_f64(), &b.to_f64()),
    }
}

pub(crate) fn exact_parts<'a>(
    space: &'a AouSpace,
    phi: &'a PositiveMap,
    f: &'a Element,
) -> Option<(&'a PolyCone, &'a Mat<Rat>, &'a [Rat])> {
    Some((space.poly()?, phi.as_exact()?, f.exact()?))
}

/// Unit vectors in the given norm, drawn with a fixed seed.
fn sample_norm_sphere(space: &AouSpace, count: usize) -> Vec<Vec<f64>> {
    let AouSpace::Dichotomic(d) = space else { return Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..count)
        .map(|_| {
            let u: Vec<f64> = (0..d.d).map(|_| rng.sample(StandardNormal)).collect();
            let n = d.norm.eval(&u);
            u.iter().map(|x| x / n).collect()
        })
        .collect()
}

/// Pure states used to probe positivity on quantum spaces: the basis, the
/// pairwise superpositions, and a fixed random sample.
pub(crate) fn probe_states(n: usize, random: usize) -> Vec<CMat> {
    use nalgebra::DVector;
    let one = quantum::C64::new(1.0, 0.0);
    let i = quantum::C64::new(0.0, 1.0);
    let mut out = Vec::new();
    for a in 0..n {
        let mut v = DVector::zeros(n);
        v[a] = one;
        out.push(quantum::projector(&v));
        for b in a + 1..n {
            for phase in [one, -one, i, -i] {
                let mut v = DVector::zeros(n);
                v[a] = one;
                v[b] = phase;
                out.push(quantum::projector(&v));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for _ in 0..random {
        out.push(quantum::projector(&quantum::random_unit_vector(n, &mut rng)));
    }
    out
}

/// Whether `φ(V⁺) ⊂ V⁺`. Exact on polyhedral spaces (every generator is
/// checked); structural for Kraus-form quantum maps; sampled otherwise.
pub fn is_positive(space: &AouSpace, phi: &PositiveMap) -> Result<Verdict> {
    let phi = phi.coerce(space)?;
    if phi.kraus.is_some() {
        return Ok(Verdict::pass(Certificate::Structural(
            "map is a sum of conjugations X -> K X K^dagger".into(),
        )));
    }
    positive_between(space, space, &phi)
}

/// Whether a map from `from` to `to` sends `from⁺` into `to⁺`, tested on
/// the generators of `from⁺` (sampled when there are infinitely many).
pub fn positive_between(from: &AouSpace, to: &AouSpace, phi: &PositiveMap) -> Result<Verdict> {
    let (rows, cols) = phi.shape();
    check_len(to.dim(), rows)?;
    check_len(from.dim(), cols)?;
    let (probes, sampled): (Vec<Element>, bool) = match from {
        _ if from.poly().is_some() => {
            let c = from.poly().expect("checked");
            (c.generators().iter().cloned().map(Element::Exact).collect(), false)
        }
        AouSpace::Quantum(q) => (
            probe_states(q.n, 2000).iter().map(|p| Element::Float(quantum::to_coords(p))).collect(),
            true,
        ),
        AouSpace::Dichotomic(_) => (
            sample_norm_sphere(from, 10_000)
                .into_iter()
                .map(|u| {
                    let mut x = vec![1.0];
                    x.extend(u);
                    Element::Float(x)
                })
                .collect(),
            true,
        ),
        _ => unreachable!("every other flavor is polyhedral"),
    };
    for a in &probes {
        let img = phi.apply(a);
        let inside = match (&img, to.poly()) {
            // float images in an exact space are tested against the facets
            (Element::Float(x), Some(c)) => c
                .facets()
                .iter()
                .all(|h| crate::scalar::dot(&h.iter().map(rat::to_f64).collect::<Vec<_>>(), x) >= -TOL),
            _ => to.contains(&to.coerce(&img)?)?.holds,
        };
        if !inside {
            return Ok(Verdict::fail(Certificate::GeneratorImage { generator: a.clone(), image: img }));
        }
    }
    Ok(if sampled {
        Verdict::pass(Certificate::Sampled { samples: probes.len(), seed: SAMPLE_SEED })
    } else {
        Verdict::pass(Certificate::AllFacets { count: probes.len() })
    })
}

pub(crate) fn require_effect(space: &AouSpace, f: &Element) -> Result<Element> {
    let f = space.coerce(f)?;
    if !space.is_effect(&f)?.holds {
        return Err(CoreError::InvalidInput(format!("{f} is not an effect")));
    }
    Ok(f)
}

/// `φ` positive with `φ(e) = f`.
pub fn is_f_compatible(space: &AouSpace, phi: &PositiveMap, f: &Element) -> Result<Verdict> {
    let f = require_effect(space, f)?;
    let phi = phi.coerce(space)?;
    let image = phi.apply(&space.unit());
    if !elements_near(&image, &f) {
        return Ok(Verdict::fail(Certificate::MovedElement { g: space.unit(), image }));
    }
    is_positive(space, &phi)
}

/// `φ ∘ φ = φ`.
pub fn is_projective(phi: &PositiveMap) -> Verdict {
    let sq = phi.compose(phi);
    if sq.near(phi) {
        Verdict::pass(Certificate::Structural("phi o phi = phi".into()))
    } else {
        let defect = sq.sub(phi);
        Verdict::fail(Certificate::MapWitness { defect: defect.max_abs(), map: defect.to_f64() })
    }
}

/// `ω ∘ φ = ω` for every state with `ω(f) = 1`.
pub fn is_neutral(space: &AouSpace, phi: &PositiveMap, f: &Element) -> Result<Verdict> {
    let f = require_effect(space, f)?;
    let phi = phi.coerce(space)?;
    let check = |states: Vec<Element>| -> Verdict {
        for w in states {
            let back = phi.pullback(&w);
            if !elements_near(&back, &w) {
                return Verdict::fail(Certificate::StateChange { state: w, pulled_back: back });
            }
        }
        Verdict::pass(Certificate::Structural("every state certain of f is preserved".into()))
    };
    if let Some(c) = space.poly() {
        let fx = f.exact().expect("exact effect");
        let face: Vec<Element> = c
            .states()
            .iter()
            .filter(|s| dot(s, fx) == Rat::from_integer(1.into()))
            .cloned()
            .map(Element::Exact)
            .collect();
        return Ok(check(face));
    }
    let x = f.to_f64();
    match space {
        AouSpace::Dichotomic(d) => {
            let n = d.norm.eval(&x[1..]);
            if 1.0 - x[0] > n + TOL {
                return Ok(Verdict::pass(Certificate::Structural("no state is certain of f".into())));
            }
            if n <= TOL {
                // f = e: every state, so φ must be the identity on the dual
                let id = PositiveMap::identity(space);
                return Ok(if phi.near(&id) {
                    Verdict::pass(Certificate::Structural("phi is the identity".into()))
                } else {
                    Verdict::fail(Certificate::MapWitness {
                        defect: phi.sub(&id).max_abs(),
                        map: phi.sub(&id).to_f64(),
                    })
                });
            }
            let mut w = vec![1.0];
            w.extend(d.norm.norming(&x[1..]));
            Ok(check(vec![Element::Float(w)]))
        }
        AouSpace::Quantum(q) => {
            let fm = quantum::from_coords(q.n, &x);
            let basis = quantum::eigenspace(&fm, 1.0);
            let face = quantum::hermitian_basis_on(&basis)
                .iter()
                .map(|r| Element::Float(quantum::to_dual(r)))
                .collect();
            Ok(check(face))
        }
        _ => unreachable!("polyhedral spaces handled above"),
    }
}

/// `φ(g) = g` for every `0 ≤ g ≤ f`.
///
/// Exact on polyhedral spaces via the vertices of `[0, f]`. Norm cones of
/// strictly convex norms use the face structure of `[0, f]`. Quantum
/// spaces are sampled with `G = √F K √F`, `0 ≤ K ≤ 1`, which covers
/// `[0, F]` for any effect `F`.
pub fn is_coherent(space: &AouSpace, phi: &PositiveMap, f: &Element) -> Result<Verdict> {
    let f = require_effect(space, f)?;
    let phi = phi.coerce(space)?;
    if let Some((c, m, fx)) = exact_parts(space, &phi, &f) {
        for v in c.interval_vertices(fx)? {
            let img = m.apply(&v);
            if img != v {
                return Ok(Verdict::fail(Certificate::MovedElement {
                    g: Element::Exact(v),
                    image: Element::Exact(img),
                }));
            }
        }
        return Ok(Verdict::pass(Certificate::Structural(
            "every vertex of [0, f] is fixed".into(),
        )));
    }
    let x = f.to_f64();
    match space {
        AouSpace::Dichotomic(d) => {
            let n = d.norm.eval(&x[1..]);
            if n >= x[0] - TOL {
                // boundary f: [0, f] is the segment from 0 to f
                let img = phi.apply(&f);
                return Ok(if elements_near(&img, &f) {
                    Verdict::pass(Certificate::Structural("[0, f] is a segment fixed by phi".into()))
                } else {
                    Verdict::fail(Certificate::MovedElement { g: f, image: img })
                });
            }
            // interior f: [0, f] spans the space
            for j in 0..space.dim() {
                let mut b = vec![0.0; space.dim()];
                b[j] = 1.0;
                let g = Element::Float(b);
                let img = phi.apply(&g);
                if !elements_near(&img, &g) {
                    return Ok(Verdict::fail(Certificate::MovedElement { g, image: img }));
                }
            }
            Ok(Verdict::pass(Certificate::Structural("[0, f] spans V and phi is the identity".into())))
        }
        AouSpace::Quantum(q) => {
            let fm = quantum::from_coords(q.n, &x);
            let root = quantum::sqrt_psd(&fm);
            let m = phi.to_f64();
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            let mut ks = vec![CMat::zeros(q.n, q.n), CMat::identity(q.n, q.n)];
            for _ in 0..200 {
                let u = quantum::random_unitary(q.n, &mut rng);
                let lambda: Vec<f64> = (0..q.n).map(|_| rng.random_range(0.0..=1.0)).collect();
                ks.push(&u * quantum::diag(&lambda) * u.adjoint());
            }
            for k in &ks {
                let g = &root * k * &root;
                let img = quantum::apply_map(&m, &g);
                if quantum::max_entry(&(&img - &g)) > TOL {
                    return Ok(Verdict::fail(Certificate::MovedElement {
                        g: Element::Float(quantum::to_coords(&g)),
                        image: Element::Float(quantum::to_coords(&img)),
                    }));
                }
            }
            Ok(Verdict::pass(Certificate::Sampled { samples: ks.len(), seed: SAMPLE_SEED }))
        }
        _ => unreachable!("polyhedral spaces handled above"),
    }
}

/// All classification flags of a map relative to an effect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub positive: bool,
    pub f_compatible: bool,
    pub projective: bool,
    pub neutral: bool,
    pub coherent: bool,
}

pub fn classify(space: &AouSpace, phi: &PositiveMap, f: &Element) -> Result<Classification> {
    Ok(Classification {
        positive: is_positive(space, phi)?.holds,
        f_compatible: is_f_compatible(space, phi, f)?.holds,
        projective: is_projective(phi).holds,
        neutral: is_neutral(space, phi, f)?.holds,
        coherent: is_coherent(space, phi, f)?.holds,
    })
}

/// Outcome of an NLR check (neutral `f`-compatible projection).
#[derive(Clone, Debug, PartialEq)]
pub struct NlrReport {
    pub f_compatible: Verdict,
    pub projective: Verdict,
    pub neutral: Verdict,
}

impl NlrReport {
    pub fn holds(&self) -> bool {
        self.f_compatible.holds && self.projective.holds && self.neutral.holds
    }
}

pub fn verify_nlr(space: &AouSpace, phi: &PositiveMap, f: &Element) -> Result<NlrReport> {
    Ok(NlrReport {
        f_compatible: is_f_compatible(space, phi, f)?,
        projective: is_projective(&phi.coerce(space)?),
        neutral: is_neutral(space, phi, f)?,
    })
}

/// A filter: an NLR for `f` together with an NLR for `e − f`.
pub fn verify_filter(
    space: &AouSpace,
    phi: &PositiveMap,
    f: &Element,
    complement_map: &PositiveMap,
) -> Result<(NlrReport, NlrReport)> {
    let neg = space.sub(&space.unit(), f)?;
    Ok((verify_nlr(space, phi, f)?, verify_nlr(space, complement_map, &neg)?))
}

/// Perfect repeatability `φ_k ∘ φ_ℓ = δ_{kℓ} φ_k` for a family of
/// `f_k`-compatible projections with `Σ f_k ≤ e`.
pub fn repeatability_check(
    space: &AouSpace,
    effects: &[Element],
    maps: &[PositiveMap],
) -> Result<Verdict> {
    if effects.len() != maps.len() {
        return Err(CoreError::InvalidInput("one map per effect is required".into()));
    }
    let mut total = space.zero();
    for (f, phi) in effects.iter().zip(maps) {
        if !is_f_compatible(space, phi, f)?.holds || !is_projective(&phi.coerce(space)?).holds {
            return Err(CoreError::InvalidInput(format!("map for {f} is not an f-compatible projection")));
        }
        total = space.add(&total, f)?;
    }
    if !space.le(&total, &space.unit())? {
        return Err(CoreError::InvalidInput("effects sum beyond the order unit".into()));
    }
    let maps: Vec<PositiveMap> = maps.iter().map(|m| m.coerce(space)).collect::<Result<_>>()?;
    let zero = PositiveMap::zero(space);
    for (k, a) in maps.iter().enumerate() {
        for (l, b) in maps.iter().enumerate() {
            let prod = a.compose(b);
            let expected = if k == l { a } else { &zero };
            if !prod.near(expected) {
                let defect = prod.sub(expected);
                return Ok(Verdict::fail(Certificate::MapWitness {
                    defect: defect.max_abs(),
                    map: defect.to_f64(),
                }));
            }
        }
    }
    Ok(Verdict::pass(Certificate::Structural(format!(
        "{}x{} products checked",
        maps.len(),
        maps.len()
    ))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Norm;
    use gpm_exact::rat::{int, ints, rat};

    #[test]
    fn identity_and_negation() {
        let s = AouSpace::classical(3).unwrap();
        let id = PositiveMap::identity(&s);
        assert!(is_positive(&s, &id).unwrap().holds);
        let neg = PositiveMap::exact(Mat::identity(3).scale(&int(-1)));
        let v = is_positive(&s, &neg).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.certificate, Certificate::GeneratorImage { .. }));
    }

    #[test]
    fn zero_map_and_identity_are_compatible() {
        let s = AouSpace::classical(2).unwrap();
        assert!(is_f_compatible(&s, &PositiveMap::zero(&s), &s.zero()).unwrap().holds);
        assert!(is_f_compatible(&s, &PositiveMap::identity(&s), &s.unit()).unwrap().holds);
        assert!(is_neutral(&s, &PositiveMap::identity(&s), &Element::Exact(ints(&[1, 0]))).unwrap().holds);
    }

    #[test]
    fn e_omega_is_a_projection_but_not_coherent() {
        let s = AouSpace::classical(2).unwrap();
        let w = Element::Exact(vec![rat(1, 2), rat(1, 2)]);
        let phi = PositiveMap::rank_one(&s.unit(), &w);
        assert!(is_projective(&phi).holds);
        assert!(is_f_compatible(&s, &phi, &s.unit()).unwrap().holds);
        let v = is_coherent(&s, &phi, &s.unit()).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.certificate, Certificate::MovedElement { .. }));
    }

    #[test]
    fn quantum_compression_by_projector() {
        let s = AouSpace::quantum(2).unwrap();
        let f = quantum::diag(&[1.0, 0.0]);
        let phi = PositiveMap::conjugation(&f);
        let fe = Element::Float(quantum::to_coords(&f));
        assert!(is_projective(&phi).holds);
        assert!(is_coherent(&s, &phi, &fe).unwrap().holds);
        assert!(is_neutral(&s, &phi, &fe).unwrap().holds);
        let half = quantum::diag(&[0.5, 0.0]);
        assert!(!is_projective(&PositiveMap::conjugation(&half)).holds);
    }

    #[test]
    fn euclidean_rank_one_update() {
        let s = AouSpace::dichotomic(3, Norm::Euclidean).unwrap();
        let f = Element::Float(vec![0.5, 0.5, 0.0, 0.0]);
        let w = Element::Float(vec![1.0, 1.0, 0.0, 0.0]);
        let phi = PositiveMap::rank_one(&f, &w);
        assert!(is_positive(&s, &phi).unwrap().holds);
        assert!(is_f_compatible(&s, &phi, &f).unwrap().holds);
        assert!(is_coherent(&s, &phi, &f).unwrap().holds);
        assert!(is_neutral(&s, &phi, &f).unwrap().holds);
    }
}
