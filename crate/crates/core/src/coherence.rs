//! Equivalent forms of coherence, checked independently.

use gpm_exact::dd::{poly_h_to_v, Halfspace};
use gpm_exact::lp::{solve_lp, LinearProgram, LpOutcome, Sense};
use gpm_exact::rat::{self, dot, Rat};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, Verdict};
use crate::error::{CoreError, Result};
use crate::maps::{is_f_compatible, require_effect, PositiveMap};
use crate::matrix::Mat;
use crate::quantum::{self, CMat};
use crate::space::{AouSpace, Element, PolyCone};

/// Vertex data for an effect `f` of a polyhedral space: the vertices of
/// `[0, f]` and of `P = {(a, g) : 0 ≤ a ≤ f, a ≤ g ≤ e}`.
#[derive(Clone, Debug)]
pub struct EffectGeometry {
    pub f: Vec<Rat>,
    pub interval: Vec<Vec<Rat>>,
    /// Vertices of `P`, each stored as `(a, g)` concatenated.
    pub pairs: Vec<Vec<Rat>>,
}

impl EffectGeometry {
    pub fn new(c: &PolyCone, f: &[Rat]) -> Result<Self> {
        let n = c.dim();
        let lift = |a: &[Rat], g: &[Rat]| {
            let mut v = a.to_vec();
            v.extend_from_slice(g);
            v
        };
        let zero = vec![Rat::zero(); n];
        let mut hs = Vec::with_capacity(4 * c.facets().len());
        for h in c.facets() {
            let nh = rat::neg(h);
            hs.push(Halfspace::new(lift(h, &zero), Rat::zero()));
            hs.push(Halfspace::new(lift(&nh, &zero), -dot(h, f)));
            hs.push(Halfspace::new(lift(&nh, h), Rat::zero()));
            hs.push(Halfspace::new(lift(&zero, &nh), -dot(h, c.unit())));
        }
        Ok(EffectGeometry {
            f: f.to_vec(),
            interval: c.interval_vertices(f)?,
            pairs: poly_h_to_v(&hs, 2 * n)?,
        })
    }
}

/// Verdicts for the four equivalent statements:
/// (i) `φ(e) = f` and `φ(g) = g` on `[0, f]`;
/// (ii) `φ(e) ≤ f` and `φ(g) ≥ g` on `[0, f]`;
/// (iii) `a ≤ φ(g) ≤ f‖g‖` for `g ≥ 0`, `0 ≤ a ≤ f`, `a ≤ g`;
/// (iv) `a ≤ φ(g) ≤ f` for `g ∈ [0, e]`, `0 ≤ a ≤ f`, `a ≤ g`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceProfile {
    pub i: Verdict,
    pub ii: Verdict,
    pub iii: Verdict,
    pub iv: Verdict,
}

impl CoherenceProfile {
    pub fn all_equal(&self) -> bool {
        let v = self.i.holds;
        self.ii.holds == v && self.iii.holds == v && self.iv.holds == v
    }

    pub fn verdicts(&self) -> [bool; 4] {
        [self.i.holds, self.ii.holds, self.iii.holds, self.iv.holds]
    }
}

fn first_outside(c: &PolyCone, xs: impl IntoIterator<Item = (Vec<Rat>, Vec<Rat>)>) -> Option<(Vec<Rat>, Vec<Rat>)> {
    xs.into_iter().find(|(_, d)| !c.contains(d))
}

fn statement_i(c: &PolyCone, m: &Mat<Rat>, geo: &EffectGeometry) -> Verdict {
    let image = m.apply(c.unit());
    if image != geo.f {
        return Verdict::fail(Certificate::MovedElement {
            g: Element::Exact(c.unit().to_vec()),
            image: Element::Exact(image),
        });
    }
    for v in &geo.interval {
        let img = m.apply(v);
        if &img != v {
            return Verdict::fail(Certificate::MovedElement {
                g: Element::Exact(v.clone()),
                image: Element::Exact(img),
            });
        }
    }
    Verdict::pass(Certificate::Structural(format!(
        "phi(e) = f and {} interval vertices fixed",
        geo.interval.len()
    )))
}

fn statement_ii(c: &PolyCone, m: &Mat<Rat>, geo: &EffectGeometry) -> Verdict {
    let unit = c.unit().to_vec();
    let checks = std::iter::once((unit.clone(), rat::sub(&geo.f, &m.apply(&unit))))
        .chain(geo.interval.iter().map(|v| (v.clone(), rat::sub(&m.apply(v), v))));
    match first_outside(c, checks) {
        Some((g, _)) => Verdict::fail(Certificate::Witness {
            note: if g == unit { "phi(e) is not below f".into() } else { "phi(g) is not above g".into() },
            g: Element::Exact(g),
        }),
        None => Verdict::pass(Certificate::Structural(format!(
            "phi(e) <= f and phi(g) >= g on {} interval vertices",
            geo.interval.len()
        ))),
    }
}

fn statement_iii(c: &PolyCone, m: &Mat<Rat>, geo: &EffectGeometry) -> Result<Verdict> {
    let n = c.dim();
    // upper bound φ(g) ≤ f‖g‖: variables (g, s) with ‖g‖ ≤ s ≤ 1
    for w in c.states() {
        let mut obj = m.pullback(w);
        obj.push(-dot(w, &geo.f));
        let mut lp = LinearProgram::new(n + 1, Sense::Maximize).with_objective(obj);
        for h in c.facets() {
            let mut row = h.clone();
            row.push(Rat::zero());
            lp.add_ge(row, Rat::zero());
        }
        for s in c.states() {
            let mut row = s.clone();
            row.push(-Rat::one());
            lp.add_le(row, Rat::zero());
        }
        lp.add_le(rat::unit(n + 1, n), Rat::one());
        if let LpOutcome::Optimal { value, point, .. } = solve_lp(&lp)? {
            if value.is_positive() {
                return Ok(Verdict::fail(Certificate::Witness {
                    g: Element::Exact(point[..n].to_vec()),
                    note: "phi(g) is not below f‖g‖".into(),
                }));
            }
        }
    }
    // lower bound a ≤ φ(g): variables (a, g) with a ∈ [0, f], g − a ∈ V⁺
    for h in c.facets() {
        let mut obj = rat::neg(h);
        obj.extend(m.pullback(h));
        let mut lp = LinearProgram::new(2 * n, Sense::Minimize).with_objective(obj);
        for k in c.facets() {
            let mut row = k.clone();
            row.extend(vec![Rat::zero(); n]);
            lp.add_ge(row.clone(), Rat::zero());
            lp.add_le(row, dot(k, &geo.f));
            let mut diff = rat::neg(k);
            diff.extend(k.iter().cloned());
            lp.add_ge(diff, Rat::zero());
        }
        match solve_lp(&lp)? {
            LpOutcome::Optimal { value, point, .. } if value.is_negative() => {
                return Ok(Verdict::fail(Certificate::Witness {
                    g: Element::Exact(point[n..].to_vec()),
                    note: "phi(g) is not above some a <= f with a <= g".into(),
                }))
            }
            LpOutcome::Unbounded { point, .. } => {
                return Ok(Verdict::fail(Certificate::Witness {
                    g: Element::Exact(point[n..].to_vec()),
                    note: "h(phi(g) - a) is unbounded below".into(),
                }))
            }
            _ => {}
        }
    }
    Ok(Verdict::pass(Certificate::Structural(format!(
        "{} upper and {} lower programs have no violation",
        c.states().len(),
        c.facets().len()
    ))))
}

fn statement_iv(c: &PolyCone, m: &Mat<Rat>, geo: &EffectGeometry) -> Verdict {
    let n = c.dim();
    for v in &geo.pairs {
        let (a, g) = v.split_at(n);
        let img = m.apply(g);
        if !c.le(a, &img) || !c.le(&img, &geo.f) {
            return Verdict::fail(Certificate::Witness {
                g: Element::Exact(g.to_vec()),
                note: format!("fails a <= phi(g) <= f with a = {}", rat::fmt_vec(a)),
            });
        }
    }
    Verdict::pass(Certificate::Structural(format!("{} vertices of P checked", geo.pairs.len())))
}

/// Checks each statement on its own, exactly, for a polyhedral space.
pub fn coherence_profile(space: &AouSpace, phi: &PositiveMap, f: &Element) -> Result<CoherenceProfile> {
    let geo = {
        let c = space
            .poly()
            .ok_or_else(|| CoreError::Unsupported("the profile needs a polyhedral space".into()))?;
        let f = require_effect(space, f)?;
        EffectGeometry::new(c, f.exact().expect("exact effect"))?
    };
    coherence_profile_with(space, phi, &geo)
}

/// [`coherence_profile`] with precomputed vertex data, for repeated use.
pub fn coherence_profile_with(space: &AouSpace, phi: &PositiveMap, geo: &EffectGeometry) -> Result<CoherenceProfile> {
    let c = space
        .poly()
        .ok_or_else(|| CoreError::Unsupported("the profile needs a polyhedral space".into()))?;
    let phi = phi.coerce(space)?;
    let m = phi.as_exact().expect("polyhedral maps are exact");
    Ok(CoherenceProfile {
        i: statement_i(c, m, geo),
        ii: statement_ii(c, m, geo),
        iii: statement_iii(c, m, geo)?,
        iv: statement_iv(c, m, geo),
    })
}

/// Tests `φ ∘ ψ = ψ` on maps `ψ = (f − g)ω + gσ` with `0 ≤ g ≤ f` and
/// states `ω ≠ σ`. Every vertex `g` of `[0, f]` is paired with a random
/// state pair, then `trials` further random draws follow.
pub fn coherence_vs_noisy_maps(
    space: &AouSpace,
    phi: &PositiveMap,
    f: &Element,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    let f = require_effect(space, f)?;
    if !is_f_compatible(space, phi, &f)?.holds {
        return Err(CoreError::InvalidInput("phi is not f-compatible".into()));
    }
    let phi = phi.coerce(space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let check = |psi: PositiveMap| -> Option<Verdict> {
        let delta = phi.compose(&psi).sub(&psi);
        let zero = PositiveMap::zero(space).coerce(space).ok()?;
        (!delta.near(&zero)).then(|| {
            Verdict::fail(Certificate::MapWitness { defect: delta.max_abs(), map: psi.to_f64() })
        })
    };
    let mut count = 0;
    if let Some(c) = space.poly() {
        let fx = f.exact().expect("exact effect");
        let states = c.states();
        if states.len() < 2 {
            return Err(CoreError::Unsupported("needs two distinct states".into()));
        }
        let vertices = c.interval_vertices(fx)?;
        let draw = |rng: &mut ChaCha8Rng, g: &[Rat]| {
            let i = rng.random_range(0..states.len());
            let j = (i + rng.random_range(1..states.len())) % states.len();
            Mat::outer(&rat::sub(fx, g), &states[i]).add(&Mat::outer(g, &states[j]))
        };
        for k in 0..vertices.len() + trials {
            let g = if k < vertices.len() {
                vertices[k].clone()
            } else {
                // random convex combination of two vertices
                let (a, b) = (&vertices[rng.random_range(0..vertices.len())], &vertices[rng.random_range(0..vertices.len())]);
                let t = Rat::new(rng.random_range(0..=16).into(), 16.into());
                rat::add(&rat::scale(&t, a), &rat::scale(&(Rat::one() - &t), b))
            };
            count += 1;
            if let Some(v) = check(PositiveMap::exact(draw(&mut rng, &g))) {
                return Ok(v);
            }
        }
    } else if let AouSpace::Quantum(q) = space {
        let fm = quantum::from_coords(q.n, &f.to_f64());
        let root = quantum::sqrt_psd(&fm);
        for k in 0..trials.max(2) {
            let kmat = match k {
                0 => CMat::zeros(q.n, q.n),
                1 => CMat::identity(q.n, q.n),
                _ => {
                    let u = quantum::random_unitary(q.n, &mut rng);
                    let lambda: Vec<f64> = (0..q.n).map(|_| rng.random_range(0.0..=1.0)).collect();
                    &u * quantum::diag(&lambda) * u.adjoint()
                }
            };
            let g = quantum::to_coords(&(&root * kmat * &root));
            let w = quantum::to_dual(&quantum::projector(&quantum::random_unit_vector(q.n, &mut rng)));
            let s = quantum::to_dual(&quantum::projector(&quantum::random_unit_vector(q.n, &mut rng)));
            let rest: Vec<f64> = f.to_f64().iter().zip(&g).map(|(a, b)| a - b).collect();
            count += 1;
            if let Some(v) = check(PositiveMap::float(Mat::outer(&rest, &w).add(&Mat::outer(&g, &s)))) {
                return Ok(v);
            }
        }
    } else {
        return Err(CoreError::Unsupported(
            "noisy-map sampling needs a polyhedral or quantum space".into(),
        ));
    }
    Ok(Verdict::pass(Certificate::Sampled { samples: count, seed }))
}
