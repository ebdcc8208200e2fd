//! Coherent Lüders rules: existence conditions, construction and
//! uniqueness.

use gpm_exact::lp::{solve_lp, LinearProgram, LpOutcome, Sense};
use gpm_exact::rat::{self, dot, Rat};
use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::certificate::{Certificate, Verdict};
use crate::error::{CoreError, Result};
use crate::maps::{require_effect, PositiveMap};
use crate::matrix::Mat;
use crate::quantum::{self, CMat, C64};
use crate::scalar::TOL;
use crate::space::{AouSpace, Dichotomic, Element, Norm, PolyCone};

/// Existence conditions, construction and uniqueness for one effect.
#[derive(Clone, Debug, PartialEq)]
pub struct ClrReport {
    pub f: Element,
    /// `g ≤ f‖g‖` for all `0 ≤ g ≤ f`.
    pub cond_ii: Verdict,
    /// `0 ≤ g ≤ f` and `g ≤ e − f` only for `g = 0`.
    pub cond_iii: Verdict,
    pub constructible: Option<Verdict>,
    pub map: Option<PositiveMap>,
    pub unique: Option<Verdict>,
}

impl ClrReport {
    /// The implication chain constructible ⇒ (ii) ⇒ (iii).
    pub fn chain_consistent(&self) -> bool {
        let built = self.constructible.as_ref().is_some_and(|v| v.holds);
        (!built || self.cond_ii.holds) && (!self.cond_ii.holds || self.cond_iii.holds)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClrConstruction {
    Map(PositiveMap),
    Infeasible {
        certificate: Certificate,
        /// The refuted program, when the refutation is a Farkas certificate.
        program: Option<LinearProgram>,
    },
}

impl ClrConstruction {
    pub fn map(&self) -> Option<&PositiveMap> {
        match self {
            ClrConstruction::Map(m) => Some(m),
            ClrConstruction::Infeasible { .. } => None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            ClrConstruction::Map(_) => {
                Verdict::pass(Certificate::Structural("explicit map constructed".into()))
            }
            ClrConstruction::Infeasible { certificate, .. } => Verdict::fail(certificate.clone()),
        }
    }
}

/// Shape of a dichotomic effect `(t, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DichotomicKind {
    Zero,
    Unit,
    Extremal,
    /// `t = ‖x‖ = ½` on a face of a polyhedral ball that is not a ray.
    Face,
    /// `t = ‖x‖ < ½`: a proper multiple of an extremal effect.
    ShortRay,
    /// `t > ‖x‖` and `f ≠ e`.
    Interior,
}

fn dichotomic_kind(d: &Dichotomic, f: &Element) -> DichotomicKind {
    let x = f.to_f64();
    let t = x[0];
    let n = d.norm.eval(&x[1..]);
    if t.abs() <= TOL && n <= TOL {
        DichotomicKind::Zero
    } else if (t - 1.0).abs() <= TOL && n <= TOL {
        DichotomicKind::Unit
    } else if (t - 0.5).abs() <= TOL && (n - 0.5).abs() <= TOL {
        match (d.poly(), f) {
            (Some(c), Element::Exact(v)) if !c.is_extremal(v) => DichotomicKind::Face,
            _ => DichotomicKind::Extremal,
        }
    } else if t - n <= TOL {
        DichotomicKind::ShortRay
    } else {
        DichotomicKind::Interior
    }
}

fn scaled(c: f64, x: &[f64]) -> Element {
    Element::Float(x.iter().map(|v| c * v).collect())
}

/// Closed-form conditions on a non-polyhedral norm cone, where (ii), (iii)
/// and constructibility all reduce to `f ∈ {0, e}` or `f` extremal.
fn dichotomic_conditions(d: &Dichotomic, f: &Element) -> (Verdict, Verdict) {
    let x = &f.to_f64()[..];
    let t = x[0];
    let n = d.norm.eval(&x[1..]);
    let mut e = vec![0.0; x.len()];
    e[0] = 1.0;
    match dichotomic_kind(d, f) {
        DichotomicKind::Face => unreachable!("face points only occur on polyhedral balls"),
        DichotomicKind::Zero | DichotomicKind::Unit | DichotomicKind::Extremal => {
            let ok = Verdict::pass(Certificate::Structural(
                "f is 0, e or extremal in a norm cone".into(),
            ));
            (ok.clone(), ok)
        }
        DichotomicKind::ShortRay => {
            let eps = (1.0 / (2.0 * t) - 1.0).min(1.0);
            (
                Verdict::fail(Certificate::Witness {
                    g: Element::Float(x.to_vec()),
                    note: format!("g = f has order norm {} < 1 but is not below f·‖f‖", 2.0 * t),
                }),
                Verdict::fail(Certificate::Witness {
                    g: scaled(eps, x),
                    note: "a multiple of f lies below both f and e − f".into(),
                }),
            )
        }
        DichotomicKind::Interior => {
            let ii = Verdict::fail(Certificate::Witness {
                g: scaled(t - n, &e),
                note: "a multiple of e below f violates g ≤ f‖g‖".into(),
            });
            let g = if 1.0 - t - n > TOL {
                scaled((t - n).min(1.0 - t - n), &e)
            } else {
                let comp: Vec<f64> = e.iter().zip(x).map(|(a, b)| a - b).collect();
                scaled(((t - n) / (1.0 - t + n)).min(1.0), &comp)
            };
            let iii = Verdict::fail(Certificate::Witness {
                g,
                note: "nonzero element below both f and e − f".into(),
            });
            (ii, iii)
        }
    }
}

/// Adds `h·x ≥ 0` for every facet and `h·(f − x) ≥ 0` for the leading
/// `dim` variables of a program with `nvars` variables.
fn add_interval(lp: &mut LinearProgram, c: &PolyCone, f: &[Rat], nvars: usize) {
    for h in c.facets() {
        let mut row = h.clone();
        row.resize(nvars, Rat::zero());
        lp.add_ge(row.clone(), Rat::zero());
        lp.add_le(row, dot(h, f));
    }
}

fn poly_cond_iii(c: &PolyCone, f: &[Rat]) -> Result<Verdict> {
    let dim = c.dim();
    let rest = rat::sub(c.unit(), f);
    for w in c.states() {
        let mut lp = LinearProgram::new(dim, Sense::Maximize).with_objective(w.clone());
        add_interval(&mut lp, c, f, dim);
        for h in c.facets() {
            lp.add_le(h.clone(), dot(h, &rest));
        }
        if let LpOutcome::Optimal { value, point, .. } = solve_lp(&lp)? {
            if value.is_positive() {
                return Ok(Verdict::fail(Certificate::Witness {
                    g: Element::Exact(point),
                    note: "nonzero element below both f and e − f".into(),
                }));
            }
        }
    }
    Ok(Verdict::pass(Certificate::Structural(format!(
        "max ω(g) = 0 over [0, f] ∩ [0, e − f] for all {} state vertices",
        c.states().len()
    ))))
}

/// A normalized generator `a` with `p·a ≤ f` exactly for `p ≤ p_max ∈ (0, 1)`,
/// scanning generators in the order they were given.
fn ray_witness(c: &PolyCone, f: &[Rat]) -> Option<Vec<Rat>> {
    c.generators().iter().find_map(|g| {
        let a = rat::scale(&(Rat::one() / c.order_norm(g)), g);
        let p_max = c
            .facets()
            .iter()
            .filter(|h| dot(h, &a).is_positive())
            .map(|h| dot(h, f) / dot(h, &a))
            .min()?;
        (p_max.is_positive() && p_max < Rat::one()).then(|| rat::scale(&p_max, &a))
    })
}

fn poly_cond_ii(c: &PolyCone, f: &[Rat]) -> Result<Verdict> {
    let dim = c.dim();
    for w in c.states() {
        // variables (g, t): maximize t with ω(g) − ω(f) σ(g) ≥ t for all σ
        let mut obj = vec![Rat::zero(); dim + 1];
        obj[dim] = Rat::one();
        let mut lp = LinearProgram::new(dim + 1, Sense::Maximize).with_objective(obj);
        add_interval(&mut lp, c, f, dim + 1);
        let wf = dot(w, f);
        for s in c.states() {
            let mut row: Vec<Rat> = w.iter().zip(s).map(|(a, b)| a - &wf * b).collect();
            row.push(-Rat::one());
            lp.add_ge(row, Rat::zero());
        }
        if let LpOutcome::Optimal { value, point, .. } = solve_lp(&lp)? {
            if value.is_positive() {
                let g = ray_witness(c, f).unwrap_or_else(|| point[..dim].to_vec());
                return Ok(Verdict::fail(Certificate::Witness {
                    g: Element::Exact(g),
                    note: "0 ≤ g ≤ f but g is not below f‖g‖".into(),
                }));
            }
        }
    }
    Ok(Verdict::pass(Certificate::Structural(format!(
        "max ω(g) − ω(f)‖g‖ ≤ 0 over [0, f] for all {} state vertices",
        c.states().len()
    ))))
}

fn quantum_conditions(n: usize, x: &[f64]) -> (Verdict, Verdict) {
    let f = quantum::from_coords(n, x);
    if quantum::is_projector(&f) {
        let ok = Verdict::pass(Certificate::Structural("F is a projection".into()));
        return (ok.clone(), ok);
    }
    let w = Certificate::Witness {
        g: Element::Float(quantum::to_coords(&(&f - &f * &f))),
        note: "F − F² is nonzero".into(),
    };
    (Verdict::fail(w.clone()), Verdict::fail(w))
}

/// Conditions (ii) and (iii) of the existence criterion, each decided
/// independently.
pub fn clr_existence_conditions(space: &AouSpace, f: &Element) -> Result<ClrReport> {
    let f = require_effect(space, f)?;
    let (cond_ii, cond_iii) = match (space, space.poly()) {
        (_, Some(c)) => {
            let fx = f.exact().expect("exact effect");
            (poly_cond_ii(c, fx)?, poly_cond_iii(c, fx)?)
        }
        (AouSpace::Dichotomic(d), None) => dichotomic_conditions(d, &f),
        (AouSpace::Quantum(q), None) => quantum_conditions(q.n, &f.to_f64()),
        _ => unreachable!("every other flavor is polyhedral"),
    };
    Ok(ClrReport { f, cond_ii, cond_iii, constructible: None, map: None, unique: None })
}

/// Conditions, construction and uniqueness together.
pub fn clr_report(space: &AouSpace, f: &Element) -> Result<ClrReport> {
    let mut report = clr_existence_conditions(space, f)?;
    let built = construct_clr(space, &report.f)?;
    report.constructible = Some(built.verdict());
    if let ClrConstruction::Map(m) = built {
        report.unique = Some(clr_unique(space, &report.f)?);
        report.map = Some(m);
    }
    Ok(report)
}

/// The canonical vector `f′` with `f′·x = ‖x‖` and `‖f′‖_* = 1`: signs for
/// the Manhattan norm, the uniform average over the maximal coordinates for
/// the max norm, and the Hölder dual vector otherwise.
pub fn update_vector(norm: &Norm, x: &Element) -> Element {
    match (norm, x) {
        (Norm::Manhattan, Element::Exact(v)) => Element::Exact(v.iter().map(Signed::signum).collect()),
        (Norm::Max, Element::Exact(v)) => {
            let m = norm.eval_exact(v).expect("polyhedral norm");
            if m.is_zero() {
                return Element::Exact(vec![Rat::zero(); v.len()]);
            }
            let top: Vec<usize> = (0..v.len()).filter(|&k| v[k].abs() == m).collect();
            let weight = Rat::new(1.into(), (top.len() as i64).into());
            let mut w = vec![Rat::zero(); v.len()];
            for k in top {
                w[k] = v[k].signum() * &weight;
            }
            Element::Exact(w)
        }
        (Norm::Max, Element::Float(v)) => {
            let m = norm.eval(v);
            let top: Vec<usize> = (0..v.len()).filter(|&k| (v[k].abs() - m).abs() <= TOL).collect();
            let mut w = vec![0.0; v.len()];
            if m > TOL {
                for &k in &top {
                    w[k] = v[k].signum() / top.len() as f64;
                }
            }
            Element::Float(w)
        }
        _ => Element::Float(norm.norming(&x.to_f64())),
    }
}

/// `φ(t, x) = (t + f′·x) f` for an extremal `f = (½, x)` of a norm cone.
pub fn extremal_clr_map(norm: &Norm, f: &Element) -> PositiveMap {
    let tail = match f {
        Element::Exact(v) => Element::Exact(v[1..].to_vec()),
        Element::Float(v) => Element::Float(v[1..].to_vec()),
    };
    let fp = update_vector(norm, &tail);
    let state = crate::state::dichotomic_state(&fp);
    PositiveMap::rank_one(f, &state)
}

fn clr_program(c: &PolyCone, f: &[Rat], vertices: &[Vec<Rat>]) -> LinearProgram {
    let n = c.dim();
    let var = |i: usize, j: usize| i * n + j;
    let mut lp = LinearProgram::feasibility(n * n);
    for a in c.generators() {
        for h in c.facets() {
            let mut row = vec![Rat::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    row[var(i, j)] = &h[i] * &a[j];
                }
            }
            lp.add_ge(row, Rat::zero());
        }
    }
    let mut fix = |x: &[Rat], y: &[Rat]| {
        for i in 0..n {
            let mut row = vec![Rat::zero(); n * n];
            for j in 0..n {
                row[var(i, j)] = x[j].clone();
            }
            lp.add_eq(row, y[i].clone());
        }
    };
    fix(c.unit(), f);
    for v in vertices.iter().filter(|v| !rat::is_zero_vec(v)) {
        fix(v, v);
    }
    lp
}

fn map_from_point(n: usize, point: &[Rat]) -> Mat<Rat> {
    Mat::from_rows(&point.chunks(n).map(<[Rat]>::to_vec).collect::<Vec<_>>())
}

fn poly_construct(c: &PolyCone, f: &[Rat]) -> Result<ClrConstruction> {
    let lp = clr_program(c, f, &c.interval_vertices(f)?);
    Ok(match solve_lp(&lp)? {
        LpOutcome::Optimal { point, .. } => {
            ClrConstruction::Map(PositiveMap::exact(map_from_point(c.dim(), &point)))
        }
        LpOutcome::Infeasible { farkas } => ClrConstruction::Infeasible {
            certificate: Certificate::Farkas { multipliers: farkas },
            program: Some(lp),
        },
        LpOutcome::Unbounded { .. } => unreachable!("feasibility programs have no objective"),
    })
}

/// A CLR for `f`, or a certificate that none exists.
pub fn construct_clr(space: &AouSpace, f: &Element) -> Result<ClrConstruction> {
    let f = require_effect(space, f)?;
    match space {
        AouSpace::Dichotomic(d) => {
            let kind = dichotomic_kind(d, &f);
            match kind {
                DichotomicKind::Zero => return Ok(ClrConstruction::Map(PositiveMap::zero(space))),
                DichotomicKind::Unit => return Ok(ClrConstruction::Map(PositiveMap::identity(space))),
                DichotomicKind::Extremal => return Ok(ClrConstruction::Map(extremal_clr_map(&d.norm, &f))),
                _ => {}
            }
            if d.poly().is_none() {
                let (_, iii) = dichotomic_conditions(d, &f);
                return Ok(ClrConstruction::Infeasible { certificate: iii.certificate, program: None });
            }
        }
        AouSpace::Quantum(q) => {
            let fm = quantum::from_coords(q.n, &f.to_f64());
            if quantum::is_projector(&fm) {
                return Ok(ClrConstruction::Map(PositiveMap::conjugation(&fm)));
            }
            let (_, iii) = quantum_conditions(q.n, &f.to_f64());
            return Ok(ClrConstruction::Infeasible { certificate: iii.certificate, program: None });
        }
        _ => {}
    }
    let c = space.poly().expect("remaining spaces are polyhedral");
    poly_construct(c, f.exact().expect("exact effect"))
}

fn poly_unique(c: &PolyCone, f: &[Rat]) -> Result<Verdict> {
    let n = c.dim();
    let base = clr_program(c, f, &c.interval_vertices(f)?);
    for k in 0..n * n {
        let mut extremes = Vec::with_capacity(2);
        for sense in [Sense::Maximize, Sense::Minimize] {
            let mut lp = base.clone();
            lp.sense = sense;
            lp.objective = rat::unit(n * n, k);
            match solve_lp(&lp)? {
                LpOutcome::Optimal { value, point, .. } => extremes.push((value, point)),
                _ => return Err(CoreError::InvalidInput("f admits no CLR".into())),
            }
        }
        if extremes[0].0 != extremes[1].0 {
            let a = map_from_point(n, &extremes[0].1);
            let b = map_from_point(n, &extremes[1].1);
            let diff = a.sub(&b).to_f64();
            return Ok(Verdict::fail(Certificate::MapWitness { defect: diff.max_abs(), map: diff }));
        }
    }
    Ok(Verdict::pass(Certificate::Structural(format!(
        "max = min for all {} map entries",
        n * n
    ))))
}

fn dichotomic_unique(d: &Dichotomic, f: &Element) -> Result<Verdict> {
    let x = f.to_f64();
    match dichotomic_kind(d, f) {
        DichotomicKind::Zero | DichotomicKind::Unit => {
            return Ok(Verdict::pass(Certificate::Structural("zero map or identity".into())))
        }
        DichotomicKind::Extremal => {}
        _ => return Err(CoreError::InvalidInput("f admits no CLR".into())),
    }
    let v = &x[1..];
    let half = 0.5;
    // a second point of the face {f′ : f′·x = ½, ‖f′‖_* ≤ 1}
    let other: Option<Vec<f64>> = match d.norm {
        Norm::Manhattan => v.iter().position(|c| c.abs() <= TOL).map(|k| {
            let mut w: Vec<f64> = v.iter().map(|c| if c.abs() <= TOL { 0.0 } else { c.signum() }).collect();
            w[k] = 1.0;
            w
        }),
        Norm::Max => {
            let top: Vec<usize> = (0..v.len()).filter(|&k| (v[k].abs() - half).abs() <= TOL).collect();
            (top.len() > 1).then(|| {
                let mut w = vec![0.0; v.len()];
                w[top[0]] = v[top[0]].signum();
                w
            })
        }
        Norm::Euclidean | Norm::PNorm(_) => None,
    };
    Ok(match other {
        None => Verdict::pass(Certificate::Structural(
            "the face of the dual ball normed by f is a single point".into(),
        )),
        Some(w) => {
            let a = extremal_clr_map(&d.norm, f).to_f64();
            let mut state = vec![1.0];
            state.extend(w);
            let b = Mat::outer(&x, &state);
            let diff = a.sub(&b);
            Verdict::fail(Certificate::MapWitness { defect: diff.max_abs(), map: diff })
        }
    })
}

/// Whether the CLR of `f` is unique. Requires that one exists.
pub fn clr_unique(space: &AouSpace, f: &Element) -> Result<Verdict> {
    let f = require_effect(space, f)?;
    match space {
        AouSpace::Dichotomic(d) => dichotomic_unique(d, &f),
        AouSpace::Quantum(q) => {
            let fm = quantum::from_coords(q.n, &f.to_f64());
            if !quantum::is_projector(&fm) {
                return Err(CoreError::InvalidInput("f admits no CLR".into()));
            }
            let sol = quantum_clr_solution(&fm);
            Ok(if sol.nullity == 0 && sol.deviation <= TOL {
                Verdict::pass(Certificate::Structural(format!(
                    "the constraint system has a unique solution, deviation {:.1e} from X -> FXF",
                    sol.deviation
                )))
            } else {
                Verdict::fail(Certificate::Structural(format!(
                    "solution set has dimension {}, deviation {:.1e}",
                    sol.nullity, sol.deviation
                )))
            })
        }
        _ => {
            let c = space.poly().expect("remaining spaces are polyhedral");
            poly_unique(c, f.exact().expect("exact effect"))
        }
    }
}

/// Solution of the linear constraints every CLR of a projector `F` obeys.
#[derive(Clone, Debug)]
pub struct QuantumClrSolution {
    /// Dimension of the solution set.
    pub nullity: usize,
    /// Least-squares solution.
    pub map: Mat<f64>,
    /// Largest entry of `map` minus the matrix of `X ↦ FXF`.
    pub deviation: f64,
}

/// Solves for the map matrix under linear consequences of being a CLR:
/// `φ(1) = F`, `φ(G) = G` on operators supported in the range of `F`,
/// `φ(G) = 0` on operators supported in the kernel (they lie below
/// `1 − F`, which `φ` annihilates), and `φ(|u⟩⟨v| + h.c.) = 0` across the
/// two subspaces (positivity on the pencil `|u + sv⟩⟨u + sv|`).
pub fn quantum_clr_solution(f: &CMat) -> QuantumClrSolution {
    let n = f.nrows();
    let dim = n * n;
    let range = quantum::eigenspace(f, 1.0);
    let kernel = quantum::eigenspace(f, 0.0);
    let zero = CMat::zeros(n, n);
    let mut pairs: Vec<(CMat, CMat)> = vec![(CMat::identity(n, n), f.clone())];
    pairs.extend(quantum::hermitian_basis_on(&range).into_iter().map(|g| (g.clone(), g)));
    pairs.extend(quantum::hermitian_basis_on(&kernel).into_iter().map(|g| (g, zero.clone())));
    let i = C64::new(0.0, 1.0);
    for u in &range {
        for v in &kernel {
            pairs.push((u * v.adjoint() + v * u.adjoint(), zero.clone()));
            pairs.push((u * v.adjoint() * i - v * u.adjoint() * i, zero.clone()));
        }
    }
    // unknown: row-major map matrix m, equation m · coords(X) = coords(Y)
    let rows = pairs.len() * dim;
    let mut a = DMatrix::<f64>::zeros(rows, dim * dim);
    let mut b = nalgebra::DVector::<f64>::zeros(rows);
    for (p, (x, y)) in pairs.iter().enumerate() {
        let (xc, yc) = (quantum::to_coords(x), quantum::to_coords(y));
        for r in 0..dim {
            let row = p * dim + r;
            for (j, xj) in xc.iter().enumerate() {
                a[(row, r * dim + j)] = *xj;
            }
            b[row] = yc[r];
        }
    }
    let svd = a.svd(true, true);
    let rank = svd.rank(TOL * svd.singular_values.max().max(1.0));
    let sol = svd.solve(&b, TOL).expect("SVD with both factors");
    let map = Mat::from_rows(&sol.as_slice().chunks(dim).map(<[f64]>::to_vec).collect::<Vec<_>>());
    let deviation = map.sub(&quantum::conjugation_map(f)).max_abs();
    QuantumClrSolution { nullity: dim * dim - rank, map, deviation }
}

/// Outcome of the compatibility identities for nested effects `g ≤ f`.
#[derive(Clone, Debug, PartialEq)]
pub struct SharpCompatibility {
    /// `f♯(g) = g`.
    pub f_sharp_g: Verdict,
    /// `g♯(f) = g`.
    pub g_sharp_f: Verdict,
    /// `f♯ ∘ g♯ = g♯ ∘ f♯`, checked only when `g♯` is unique.
    pub commute: Option<Verdict>,
}

impl SharpCompatibility {
    pub fn holds(&self) -> bool {
        self.f_sharp_g.holds && self.g_sharp_f.holds && self.commute.as_ref().is_none_or(|v| v.holds)
    }
}

pub fn sharp_compatibility_check(space: &AouSpace, f: &Element, g: &Element) -> Result<SharpCompatibility> {
    let f = require_effect(space, f)?;
    let g = require_effect(space, g)?;
    if !space.le(&g, &f)? {
        return Err(CoreError::InvalidInput(format!("{g} is not below {f}")));
    }
    let clr = |x: &Element| -> Result<PositiveMap> {
        construct_clr(space, x)?
            .map()
            .cloned()
            .ok_or_else(|| CoreError::InvalidInput(format!("{x} admits no CLR")))
    };
    let (fs, gs) = (clr(&f)?, clr(&g)?);
    let fixed = |m: &PositiveMap, x: &Element| {
        let img = m.apply(x);
        let same = match (&img, &g) {
            (Element::Exact(a), Element::Exact(b)) => a == b,
            _ => crate::scalar::vnear(&img.to_f64(), &g.to_f64()),
        };
        if same {
            Verdict::pass(Certificate::Structural("image equals g".into()))
        } else {
            Verdict::fail(Certificate::MovedElement { g: x.clone(), image: img })
        }
    };
    let commute = if clr_unique(space, &g)?.holds {
        let (ab, ba) = (fs.compose(&gs), gs.compose(&fs));
        Some(if ab.near(&ba) {
            Verdict::pass(Certificate::Structural("f♯ g♯ = g♯ f♯".into()))
        } else {
            let diff = ab.sub(&ba);
            Verdict::fail(Certificate::MapWitness { defect: diff.max_abs(), map: diff.to_f64() })
        })
    } else {
        None
    };
    Ok(SharpCompatibility { f_sharp_g: fixed(&fs, &g), g_sharp_f: fixed(&gs, &f), commute })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{is_coherent, is_f_compatible};
    use gpm_exact::rat::{int, ints, rat};

    #[test]
    fn gbit_face_point_is_not_extremal() {
        let s = AouSpace::dichotomic(2, Norm::Manhattan).unwrap();
        let f = Element::Exact(vec![rat(1, 2), rat(-1, 4), rat(1, 4)]);
        assert!(!clr_existence_conditions(&s, &f).unwrap().cond_ii.holds);
        match construct_clr(&s, &f).unwrap() {
            ClrConstruction::Infeasible { certificate: Certificate::Farkas { multipliers }, program: Some(lp) } => {
                assert!(lp.verify_farkas(&multipliers))
            }
            other => panic!("face point got {other:?}"),
        }
    }

    #[test]
    fn classical_sharp_effects_have_unique_diagonal_clrs() {
        let s = AouSpace::classical(3).unwrap();
        let f = Element::Exact(ints(&[1, 0, 1]));
        let r = clr_report(&s, &f).unwrap();
        assert!(r.cond_ii.holds && r.cond_iii.holds);
        let m = r.map.clone().unwrap();
        assert_eq!(m.as_exact().unwrap(), &Mat::from_rows(&[ints(&[1, 0, 0]), ints(&[0, 0, 0]), ints(&[0, 0, 1])]));
        assert!(r.chain_consistent());
        assert!(r.unique.unwrap().holds);
    }

    #[test]
    fn classical_unsharp_effect_fails_both_conditions() {
        let s = AouSpace::classical(2).unwrap();
        let f = Element::Exact(vec![rat(1, 2), int(1)]);
        let r = clr_report(&s, &f).unwrap();
        assert!(!r.cond_iii.holds && !r.cond_ii.holds);
        match construct_clr(&s, &f).unwrap() {
            ClrConstruction::Infeasible { certificate: Certificate::Farkas { multipliers }, program } => {
                assert!(program.unwrap().verify_farkas(&multipliers));
            }
            other => panic!("expected Farkas refutation, got {other:?}"),
        }
    }

    #[test]
    fn quantum_uniqueness_system_is_determined() {
        let f = quantum::diag(&[1.0, 0.0, 1.0]);
        let sol = quantum_clr_solution(&f);
        assert_eq!(sol.nullity, 0);
        assert!(sol.deviation < 1e-10);
    }

    #[test]
    fn euclidean_extremal_clr() {
        let s = AouSpace::dichotomic(3, Norm::Euclidean).unwrap();
        let f = Element::Float(vec![0.5, 0.3, 0.4, 0.0]);
        let m = construct_clr(&s, &f).unwrap().map().cloned().unwrap();
        assert!(is_f_compatible(&s, &m, &f).unwrap().holds);
        assert!(is_coherent(&s, &m, &f).unwrap().holds);
        assert!(clr_unique(&s, &f).unwrap().holds);
        let r = clr_existence_conditions(&s, &Element::Float(vec![0.5, 0.1, 0.0, 0.0])).unwrap();
        assert!(!r.cond_ii.holds && !r.cond_iii.holds);
    }

    #[test]
    fn max_norm_tie_is_not_unique() {
        let s = AouSpace::dichotomic(2, Norm::Max).unwrap();
        let f = Element::Exact(vec![rat(1, 2), rat(1, 2), rat(-1, 2)]);
        assert_eq!(update_vector(&Norm::Max, &Element::Exact(vec![rat(1, 2), rat(-1, 2)])), Element::Exact(vec![rat(1, 2), rat(-1, 2)]));
        assert!(!clr_unique(&s, &f).unwrap().holds);
        let c = s.poly().unwrap();
        assert!(!poly_unique(c, f.exact().unwrap()).unwrap().holds);
    }
}
