//! Order unit spaces `(V, V⁺, e)` in four concrete flavors.

use std::fmt;

use gpm_exact::lp::{solve_lp, LinearProgram};
use gpm_exact::rat::{self, dot, int, to_f64, unit, Rat};
use gpm_exact::{cone_v_to_h, linalg, poly_h_to_v, Halfspace};
use num_traits::{One, Signed, Zero};

use crate::certificate::{Certificate, Verdict};
use crate::error::{check_len, CoreError, Result};
use crate::quantum;
use crate::scalar::TOL;

/// Norm on `ℝ^d` defining a dichotomic cone `{(t, x) : t ≥ ‖x‖}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Norm {
    Manhattan,
    Euclidean,
    /// `p`-norm with rational `p > 1`.
    PNorm(Rat),
    Max,
}

impl Norm {
    pub fn pnorm(p: Rat) -> Result<Self> {
        if p <= Rat::one() {
            return Err(CoreError::InvalidInput(format!("p-norm needs p > 1, got {p}")));
        }
        Ok(if p == int(2) { Norm::Euclidean } else { Norm::PNorm(p) })
    }

    /// Manhattan and max norms have polytopes as unit balls.
    pub fn is_polyhedral(&self) -> bool {
        matches!(self, Norm::Manhattan | Norm::Max)
    }

    pub fn exponent(&self) -> f64 {
        match self {
            Norm::Manhattan => 1.0,
            Norm::Euclidean => 2.0,
            Norm::PNorm(p) => to_f64(p),
            Norm::Max => f64::INFINITY,
        }
    }

    /// The dual norm `‖w‖_* = sup{w·y : ‖y‖ ≤ 1}`.
    pub fn dual(&self) -> Norm {
        match self {
            Norm::Manhattan => Norm::Max,
            Norm::Max => Norm::Manhattan,
            Norm::Euclidean => Norm::Euclidean,
            Norm::PNorm(p) => {
                let q = p / (p - Rat::one());
                if q == int(2) {
                    Norm::Euclidean
                } else {
                    Norm::PNorm(q)
                }
            }
        }
    }

    pub fn eval_exact(&self, x: &[Rat]) -> Option<Rat> {
        match self {
            Norm::Manhattan => Some(x.iter().map(Signed::abs).sum()),
            Norm::Max => Some(x.iter().map(Signed::abs).max().unwrap_or_else(Rat::zero)),
            _ => None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Norm::Manhattan => x.iter().map(|v| v.abs()).sum(),
            Norm::Max => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            Norm::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Norm::PNorm(p) => {
                let p = to_f64(p);
                x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }

    /// A dual vector `w` with `‖w‖_* ≤ 1` and `w·x = ‖x‖`, exact for the
    /// polyhedral norms.
    pub fn norming_exact(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        match self {
            Norm::Manhattan => Some(x.iter().map(Signed::signum).collect()),
            Norm::Max => {
                let m = self.eval_exact(x)?;
                let mut w = vec![Rat::zero(); x.len()];
                if let Some(k) = x.iter().position(|v| v.abs() == m && !m.is_zero()) {
                    w[k] = x[k].signum();
                }
                Some(w)
            }
            _ => None,
        }
    }

    pub fn norming(&self, x: &[f64]) -> Vec<f64> {
        let n = self.eval(x);
        if n <= 0.0 {
            return vec![0.0; x.len()];
        }
        match self {
            Norm::Manhattan => x.iter().map(|v| if *v == 0.0 { 0.0 } else { v.signum() }).collect(),
            Norm::Max => {
                let k = x.iter().position(|v| v.abs() == n).unwrap_or(0);
                let mut w = vec![0.0; x.len()];
                w[k] = x[k].signum();
                w
            }
            Norm::Euclidean => x.iter().map(|v| v / n).collect(),
            Norm::PNorm(p) => {
                let p = to_f64(p);
                x.iter().map(|v| v.signum() * (v.abs() / n).powf(p - 1.0)).collect()
            }
        }
    }

    /// Vertices of the unit ball for polyhedral norms.
    pub fn ball_vertices(&self, d: usize) -> Option<Vec<Vec<Rat>>> {
        match self {
            Norm::Manhattan => Some(
                (0..d)
                    .flat_map(|k| [unit(d, k), rat::neg(&unit(d, k))])
                    .collect(),
            ),
            Norm::Max => Some(
                (0..1usize << d)
                    .map(|mask| {
                        (0..d)
                            .map(|k| if mask >> k & 1 == 1 { int(-1) } else { int(1) })
                            .collect()
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Norm::Manhattan => "manhattan".into(),
            Norm::Euclidean => "euclidean".into(),
            Norm::PNorm(p) => format!("p={p}"),
            Norm::Max => "max".into(),
        }
    }
}

/// Coordinates of a vector of the space.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Exact(Vec<Rat>),
    Float(Vec<f64>),
}

impl Element {
    pub fn len(&self) -> usize {
        match self {
            Element::Exact(v) => v.len(),
            Element::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact(&self) -> Option<&[Rat]> {
        match self {
            Element::Exact(v) => Some(v),
            Element::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Element::Exact(v) => v.iter().map(to_f64).collect(),
            Element::Float(v) => v.clone(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Exact(v) => write!(f, "{}", rat::fmt_vec(v)),
            Element::Float(v) => {
                let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// A scalar result, exact when the space is.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rat),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A finitely generated pointed cone with an order unit, the polyhedral
/// backbone of every exact space.
#[derive(Clone, Debug)]
pub struct PolyCone {
    dim: usize,
    generators: Vec<Vec<Rat>>,
    facets: Vec<Vec<Rat>>,
    unit: Vec<Rat>,
    rays: Vec<Vec<Rat>>,
    states: Vec<Vec<Rat>>,
}

impl PolyCone {
    /// Computes facets by double description and certifies the order unit
    /// with one linear program per signed basis direction.
    pub fn new(generators: Vec<Vec<Rat>>, unit_vec: Vec<Rat>) -> Result<Self> {
        let dim = unit_vec.len();
        for g in &generators {
            check_len(dim, g.len())?;
        }
        let facets = cone_v_to_h(&generators, dim)?;
        certify_order_unit(&generators, &unit_vec)?;

        let mut rays: Vec<Vec<Rat>> = Vec::new();
        for g in &generators {
            let tight: Vec<Vec<Rat>> =
                facets.iter().filter(|h| dot(h, g).is_zero()).cloned().collect();
            if rat::is_zero_vec(g) || linalg::rank(&tight, dim) + 1 != dim {
                continue;
            }
            let norm = order_norm_poly(&facets, &unit_vec, g);
            let r = rat::scale(&norm.recip(), g);
            if !rays.contains(&r) {
                rays.push(r);
            }
        }
        rays.sort();

        let mut states: Vec<Vec<Rat>> = facets
            .iter()
            .map(|h| rat::scale(&dot(h, &unit_vec).recip(), h))
            .collect();
        states.sort();

        Ok(PolyCone { dim, generators, facets, unit: unit_vec, rays, states })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn facets(&self) -> &[Vec<Rat>] {
        &self.facets
    }

    pub fn unit(&self) -> &[Rat] {
        &self.unit
    }

    /// Extremal rays normalized to order norm one, sorted.
    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    /// Extreme points of the state polytope, in dual coordinates, sorted.
    pub fn states(&self) -> &[Vec<Rat>] {
        &self.states
    }

    /// First violated facet, if any.
    pub fn violation(&self, x: &[Rat]) -> Option<(Vec<Rat>, Rat)> {
        self.facets.iter().find_map(|h| {
            let v = dot(h, x);
            v.is_negative().then(|| (h.clone(), v))
        })
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.violation(x).is_none()
    }

    pub fn le(&self, x: &[Rat], y: &[Rat]) -> bool {
        self.contains(&rat::sub(y, x))
    }

    pub fn order_norm(&self, x: &[Rat]) -> Rat {
        order_norm_poly(&self.facets, &self.unit, x)
    }

    pub fn is_effect(&self, f: &[Rat]) -> bool {
        self.contains(f) && self.le(f, &self.unit)
    }

    /// Whether `x` spans a one-dimensional face.
    pub fn is_extremal(&self, x: &[Rat]) -> bool {
        if rat::is_zero_vec(x) || !self.contains(x) {
            return false;
        }
        let tight: Vec<Vec<Rat>> =
            self.facets.iter().filter(|h| dot(h, x).is_zero()).cloned().collect();
        linalg::rank(&tight, self.dim) + 1 == self.dim
    }

    /// Vertices of the order interval `[0, f]`, sorted.
    pub fn interval_vertices(&self, f: &[Rat]) -> Result<Vec<Vec<Rat>>> {
        let mut hs = Vec::with_capacity(2 * self.facets.len());
        for h in &self.facets {
            hs.push(Halfspace::new(h.clone(), Rat::zero()));
            hs.push(Halfspace::new(rat::neg(h), -dot(h, f)));
        }
        let mut v = poly_h_to_v(&hs, self.dim)?;
        v.sort();
        Ok(v)
    }

    /// Facets of the state polytope membership test: `ω(e) = 1` and
    /// `ω(a) ≥ 0` on every generator. Returns the offending generator.
    pub fn state_violation(&self, w: &[Rat]) -> Option<Option<Vec<Rat>>> {
        if dot(w, &self.unit) != Rat::one() {
            return Some(None);
        }
        self.generators
            .iter()
            .find(|a| dot(w, a).is_negative())
            .map(|a| Some(a.clone()))
    }
}

fn order_norm_poly(facets: &[Vec<Rat>], e: &[Rat], x: &[Rat]) -> Rat {
    facets
        .iter()
        .map(|h| dot(h, x).abs() / dot(h, e))
        .max()
        .unwrap_or_else(Rat::zero)
}

fn certify_order_unit(generators: &[Vec<Rat>], e: &[Rat]) -> Result<()> {
    let dim = e.len();
    let k = generators.len();
    for j in 0..dim {
        for sign in [1, -1] {
            let x = rat::scale(&int(sign), &unit(dim, j));
            // r e + x = Σ λ_a a with λ ≥ 0; variables (r, λ)
            let mut lp = LinearProgram::feasibility(k + 1);
            for i in 0..dim {
                let mut row = vec![e[i].clone()];
                row.extend(generators.iter().map(|a| -a[i].clone()));
                lp.add_eq(row, -x[i].clone());
            }
            for l in 0..k {
                lp.add_ge(unit(k + 1, l + 1), Rat::zero());
            }
            if !solve_lp(&lp)?.is_optimal() {
                return Err(CoreError::NotOrderUnit {
                    direction: x.iter().map(ToString::to_string).collect(),
                });
            }
        }
    }
    Ok(())
}

/// A dichotomic norm cone on `ℝ × ℝ^d`, coordinates `(t, x)`.
#[derive(Clone, Debug)]
pub struct Dichotomic {
    pub d: usize,
    pub norm: Norm,
    poly: Option<PolyCone>,
}

impl Dichotomic {
    pub fn new(d: usize, norm: Norm) -> Result<Self> {
        if d == 0 {
            return Err(CoreError::InvalidInput("dichotomic cone needs d ≥ 1".into()));
        }
        let poly = if norm.is_polyhedral() { Some(norm_cone(d, &norm)?) } else { None };
        Ok(Dichotomic { d, norm, poly })
    }

    pub fn poly(&self) -> Option<&PolyCone> {
        self.poly.as_ref()
    }
}

fn norm_cone(d: usize, norm: &Norm) -> Result<PolyCone> {
    let verts = norm
        .ball_vertices(d)
        .ok_or_else(|| CoreError::Unsupported(format!("{} ball is not a polytope", norm.name())))?;
    let gens = verts
        .into_iter()
        .map(|v| {
            let mut g = vec![Rat::one()];
            g.extend(v);
            g
        })
        .collect();
    PolyCone::new(gens, unit(d + 1, 0))
}

/// The finite-dimensional quantum space of `n×n` Hermitian matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumSpace {
    pub n: usize,
}

#[derive(Clone, Debug)]
pub enum AouSpace {
    FiniteCone(PolyCone),
    Dichotomic(Dichotomic),
    Classical { n: usize, cone: PolyCone },
    Quantum(QuantumSpace),
}

/// Extremal rays: a finite list for polyhedral spaces, otherwise a
/// description of the parametric family.
#[derive(Clone, Debug, PartialEq)]
pub enum Extremals {
    Finite(Vec<Element>),
    Parametric(String),
}

impl AouSpace {
    pub fn finite_cone(generators: Vec<Vec<Rat>>, unit_vec: Vec<Rat>) -> Result<Self> {
        Ok(AouSpace::FiniteCone(PolyCone::new(generators, unit_vec)?))
    }

    pub fn classical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidInput("classical space needs n ≥ 1".into()));
        }
        let gens = (0..n).map(|k| unit(n, k)).collect();
        Ok(AouSpace::Classical { n, cone: PolyCone::new(gens, vec![Rat::one(); n])? })
    }

    pub fn dichotomic(d: usize, norm: Norm) -> Result<Self> {
        Ok(AouSpace::Dichotomic(Dichotomic::new(d, norm)?))
    }

    pub fn quantum(n: usize) -> Result<Self> {
        if !(1..=8).contains(&n) {
            return Err(CoreError::InvalidInput(format!("quantum dimension {n} outside 1..=8")));
        }
        Ok(AouSpace::Quantum(QuantumSpace { n }))
    }

    pub fn dim(&self) -> usize {
        match self {
            AouSpace::FiniteCone(c) => c.dim(),
            AouSpace::Dichotomic(d) => d.d + 1,
            AouSpace::Classical { n, .. } => *n,
            AouSpace::Quantum(q) => q.n * q.n,
        }
    }

    /// The polyhedral view, when there is one.
    pub fn poly(&self) -> Option<&PolyCone> {
        match self {
            AouSpace::FiniteCone(c) | AouSpace::Classical { cone: c, .. } => Some(c),
            AouSpace::Dichotomic(d) => d.poly(),
            AouSpace::Quantum(_) => None,
        }
    }

    /// Whether elements carry exact rational coordinates.
    pub fn is_exact(&self) -> bool {
        self.poly().is_some()
    }

    pub fn describe(&self) -> String {
        match self {
            AouSpace::FiniteCone(c) => {
                format!("finite cone, dim {}, {} generators", c.dim(), c.generators().len())
            }
            AouSpace::Dichotomic(d) => format!("dichotomic {} cone, d = {}", d.norm.name(), d.d),
            AouSpace::Classical { n, .. } => format!("classical, n = {n}"),
            AouSpace::Quantum(q) => format!("quantum, hilbert dim {}", q.n),
        }
    }

    pub fn unit(&self) -> Element {
        match self.poly() {
            Some(c) => Element::Exact(c.unit().to_vec()),
            None => match self {
                AouSpace::Quantum(q) => {
                    Element::Float(quantum::to_coords(&quantum::diag(&vec![1.0; q.n])))
                }
                _ => {
                    let mut v = vec![0.0; self.dim()];
                    v[0] = 1.0;
                    Element::Float(v)
                }
            },
        }
    }

    pub fn zero(&self) -> Element {
        if self.is_exact() {
            Element::Exact(rat::zeros(self.dim()))
        } else {
            Element::Float(vec![0.0; self.dim()])
        }
    }

    /// Validates length and coordinate kind. Exact inputs are accepted in
    /// float spaces.
    pub fn coerce(&self, x: &Element) -> Result<Element> {
        check_len(self.dim(), x.len())?;
        match (self.is_exact(), x) {
            (true, Element::Exact(_)) | (false, Element::Float(_)) => Ok(x.clone()),
            (false, Element::Exact(v)) => Ok(Element::Float(v.iter().map(to_f64).collect())),
            (true, Element::Float(_)) => Err(CoreError::NeedsExact("this space")),
        }
    }

    fn exact_coords<'a>(&self, x: &'a Element) -> Result<&'a [Rat]> {
        check_len(self.dim(), x.len())?;
        x.exact().ok_or(CoreError::NeedsExact("this space"))
    }

    /// Membership in `V⁺` with a separating certificate on rejection.
    pub fn contains(&self, x: &Element) -> Result<Verdict> {
        if let Some(c) = self.poly() {
            let x = self.exact_coords(x)?;
            return Ok(match c.violation(x) {
                None => Verdict::pass(Certificate::AllFacets { count: c.facets().len() }),
                Some((h, _)) => {
                    let s = rat::scale(&dot(&h, c.unit()).recip(), &h);
                    let value = dot(&s, x);
                    Verdict::fail(Certificate::SeparatingState {
                        state: Element::Exact(s),
                        value: Value::Exact(value),
                    })
                }
            });
        }
        let x = self.coerce(x)?.to_f64();
        Ok(match self {
            AouSpace::Dichotomic(d) => {
                let n = d.norm.eval(&x[1..]);
                if x[0] >= n - TOL {
                    Verdict::pass(Certificate::NormBound { t: Value::Float(x[0]), norm: Value::Float(n) })
                } else {
                    let mut w = vec![1.0];
                    w.extend(d.norm.norming(&x[1..]).iter().map(|v| -v));
                    let value = crate::scalar::dot(&w, &x);
                    Verdict::fail(Certificate::SeparatingState {
                        state: Element::Float(w),
                        value: Value::Float(value),
                    })
                }
            }
            AouSpace::Quantum(q) => {
                let m = quantum::from_coords(q.n, &x);
                let (vals, vecs) = quantum::eigh(&m);
                if vals[0] >= -TOL {
                    Verdict::pass(Certificate::Spectrum { min_eigenvalue: vals[0] })
                } else {
                    let v = vecs.column(0).into_owned();
                    let rho = quantum::projector(&v);
                    Verdict::fail(Certificate::SeparatingState {
                        state: Element::Float(quantum::to_dual(&rho)),
                        value: Value::Float(vals[0]),
                    })
                }
            }
            _ => unreachable!("polyhedral spaces handled above"),
        })
    }

    /// `‖x‖ = inf{r : −re ≤ x ≤ re}`.
    pub fn order_norm(&self, x: &Element) -> Result<Value> {
        if let Some(c) = self.poly() {
            let x = self.exact_coords(x)?;
            return Ok(Value::Exact(match self {
                AouSpace::Classical { .. } => x.iter().map(Signed::abs).max().unwrap_or_default(),
                AouSpace::Dichotomic(d) => {
                    x[0].abs() + d.norm.eval_exact(&x[1..]).expect("polyhedral norm")
                }
                _ => c.order_norm(x),
            }));
        }
        let x = self.coerce(x)?.to_f64();
        Ok(Value::Float(match self {
            AouSpace::Dichotomic(d) => x[0].abs() + d.norm.eval(&x[1..]),
            AouSpace::Quantum(q) => quantum::spectral_norm(&quantum::from_coords(q.n, &x)),
            _ => unreachable!("polyhedral spaces handled above"),
        }))
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        let (x, y) = (self.coerce(x)?, self.coerce(y)?);
        Ok(match (x, y) {
            (Element::Exact(a), Element::Exact(b)) => Element::Exact(rat::sub(&a, &b)),
            (a, b) => Element::Float(crate::scalar::vsub(&a.to_f64(), &b.to_f64())),
        })
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        let (x, y) = (self.coerce(x)?, self.coerce(y)?);
        Ok(match (x, y) {
            (Element::Exact(a), Element::Exact(b)) => Element::Exact(rat::add(&a, &b)),
            (a, b) => Element::Float(crate::scalar::vadd(&a.to_f64(), &b.to_f64())),
        })
    }

    /// `x ≤ y` in the cone order.
    pub fn le(&self, x: &Element, y: &Element) -> Result<bool> {
        Ok(self.contains(&self.sub(y, x)?)?.holds)
    }

    /// `0 ≤ f ≤ e`, with the failing certificate on rejection.
    pub fn is_effect(&self, f: &Element) -> Result<Verdict> {
        let lower = self.contains(f)?;
        if !lower.holds {
            return Ok(lower);
        }
        let upper = self.contains(&self.sub(&self.unit(), f)?)?;
        if !upper.holds {
            return Ok(upper);
        }
        Ok(lower)
    }

    /// Normalized extremal rays (order norm one).
    pub fn extremal_rays(&self) -> Extremals {
        match (self, self.poly()) {
            (_, Some(c)) => Extremals::Finite(c.rays().iter().cloned().map(Element::Exact).collect()),
            (AouSpace::Dichotomic(d), None) => Extremals::Parametric(format!(
                "(1/2, x) with ‖x‖ = 1/2 in the {} norm on R^{}",
                d.norm.name(),
                d.d
            )),
            (AouSpace::Quantum(q), None) => Extremals::Parametric(format!(
                "rank-one projectors |v><v| with v a unit vector in C^{}",
                q.n
            )),
            _ => unreachable!("every other flavor is polyhedral"),
        }
    }

    /// Whether `f` spans an extremal ray with order norm one.
    pub fn is_extremal_effect(&self, f: &Element) -> Result<bool> {
        if let Some(c) = self.poly() {
            let f = self.exact_coords(f)?;
            return Ok(c.is_extremal(f) && c.order_norm(f) == Rat::one());
        }
        let x = self.coerce(f)?.to_f64();
        Ok(match self {
            AouSpace::Dichotomic(d) => {
                (x[0] - 0.5).abs() <= TOL && (d.norm.eval(&x[1..]) - 0.5).abs() <= TOL
            }
            AouSpace::Quantum(q) => {
                let m = quantum::from_coords(q.n, &x);
                quantum::is_projector(&m) && (m.trace().re - 1.0).abs() <= 1e-8
            }
            _ => unreachable!("polyhedral spaces handled above"),
        })
    }

    pub fn order_interval_vertices(&self, f: &Element) -> Result<Vec<Vec<Rat>>> {
        let c = self.poly().ok_or_else(|| {
            CoreError::Unsupported("order interval vertices need a polyhedral space".into())
        })?;
        let f = self.exact_coords(f)?;
        if !c.is_effect(f) {
            return Err(CoreError::InvalidInput(format!("{} is not an effect", rat::fmt_vec(f))));
        }
        c.interval_vertices(f)
    }

    /// The finite cone with the same geometry as a polyhedral dichotomic
    /// cone.
    pub fn dichotomic_to_polyhedral(&self) -> Result<AouSpace> {
        match self {
            AouSpace::Dichotomic(d) if d.norm.is_polyhedral() => {
                Ok(AouSpace::FiniteCone(norm_cone(d.d, &d.norm)?))
            }
            AouSpace::Dichotomic(d) => Err(CoreError::Unsupported(format!(
                "{} norm has no polyhedral ball",
                d.norm.name()
            ))),
            _ => Err(CoreError::Unsupported("not a dichotomic cone".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpm_exact::rat::{ints, rat};

    fn ex(v: &[i64]) -> Element {
        Element::Exact(ints(v))
    }

    #[test]
    fn classical_membership_and_norm() {
        let s = AouSpace::classical(2).unwrap();
        assert!(s.contains(&s.unit()).unwrap().holds);
        let v = s.contains(&ex(&[-1, 1])).unwrap();
        assert!(!v.holds);
        match v.certificate {
            Certificate::SeparatingState { state, .. } => assert_eq!(state, ex(&[1, 0])),
            other => panic!("unexpected certificate {other:?}"),
        }
        let s3 = AouSpace::classical(3).unwrap();
        assert_eq!(s3.order_norm(&ex(&[1, -2, 3])).unwrap(), Value::Exact(int(3)));
        assert!(!s.is_effect(&ex(&[2, 0])).unwrap().holds);
    }

    #[test]
    fn manhattan_norm_and_bridge() {
        let s = AouSpace::dichotomic(2, Norm::Manhattan).unwrap();
        let x = Element::Exact(vec![int(1), rat(1, 2), int(0)]);
        assert_eq!(s.order_norm(&x).unwrap(), Value::Exact(rat(3, 2)));
        let bridge = s.dichotomic_to_polyhedral().unwrap();
        let c = bridge.poly().unwrap();
        assert_eq!(c.generators().len(), 4);
        assert_eq!(c.facets().len(), 4);
        assert_eq!(bridge.order_norm(&x).unwrap(), Value::Exact(rat(3, 2)));
    }

    #[test]
    fn euclidean_and_quantum_membership() {
        let s = AouSpace::dichotomic(3, Norm::Euclidean).unwrap();
        assert!(s.contains(&Element::Float(vec![1.0, 0.6, 0.8, 0.0])).unwrap().holds);
        let v = s.contains(&Element::Float(vec![1.0, 0.6, 0.9, 0.0])).unwrap();
        assert!(!v.holds);
        let q = AouSpace::quantum(2).unwrap();
        assert!(q.contains(&q.unit()).unwrap().holds);
        assert_eq!(q.order_norm(&q.unit()).unwrap(), Value::Float(1.0));
        let neg = Element::Float(vec![1.0, -1.0, 0.0, 0.0]);
        assert!(!q.contains(&neg).unwrap().holds);
    }

    #[test]
    fn order_unit_must_be_interior() {
        let err = AouSpace::finite_cone(vec![ints(&[1, 0]), ints(&[0, 1])], ints(&[1, 0]));
        assert!(matches!(err, Err(CoreError::NotOrderUnit { .. })));
    }

    #[test]
    fn zero_effect_interval_is_a_point() {
        let s = AouSpace::classical(3).unwrap();
        assert_eq!(s.order_interval_vertices(&s.zero()).unwrap(), vec![rat::zeros(3)]);
    }
}
