//! States: normalized positive functionals in dual coordinates.

use gpm_exact::rat::{dot, to_f64, Rat};
use num_traits::{One, Signed};

use crate::certificate::{Certificate, Verdict};
use crate::error::{check_len, CoreError, Result};
use crate::quantum;
use crate::scalar::TOL;
use crate::space::{AouSpace, Element, Norm, Value};

/// `ω(x)` as the dot product of dual and primal coordinates.
pub fn evaluate(w: &Element, x: &Element) -> Value {
    match (w, x) {
        (Element::Exact(a), Element::Exact(b)) => Value::Exact(dot(a, b)),
        _ => Value::Float(crate::scalar::dot(&w.to_f64(), &x.to_f64())),
    }
}

/// Dual coordinates `(1, w)` of the dichotomic state `(t, x) ↦ t + w·x`.
pub fn dichotomic_state(w: &Element) -> Element {
    match w {
        Element::Exact(v) => {
            let mut c = vec![Rat::one()];
            c.extend(v.iter().cloned());
            Element::Exact(c)
        }
        Element::Float(v) => {
            let mut c = vec![1.0];
            c.extend(v.iter().copied());
            Element::Float(c)
        }
    }
}

pub fn dual_norm(norm: &Norm, w: &Element) -> Value {
    let dual = norm.dual();
    match w {
        Element::Exact(v) if dual.is_polyhedral() => {
            Value::Exact(dual.eval_exact(v).expect("polyhedral dual norm"))
        }
        _ => Value::Float(dual.eval(&w.to_f64())),
    }
}

pub fn is_state(space: &AouSpace, w: &Element) -> Result<Verdict> {
    check_len(space.dim(), w.len())?;
    if let Some(c) = space.poly() {
        let w = w.exact().ok_or(CoreError::NeedsExact("state check"))?;
        let unit = Element::Exact(c.unit().to_vec());
        return Ok(match c.state_violation(w) {
            None => Verdict::pass(Certificate::AllFacets { count: c.generators().len() }),
            Some(None) => Verdict::fail(Certificate::Mismatch {
                expected: Value::Exact(Rat::one()),
                actual: evaluate(&Element::Exact(w.to_vec()), &unit),
            }),
            Some(Some(a)) => Verdict::fail(Certificate::Witness {
                note: format!("negative on generator, value {}", dot(w, &a)),
                g: Element::Exact(a),
            }),
        });
    }
    let v = w.to_f64();
    Ok(match space {
        AouSpace::Dichotomic(d) => {
            if (v[0] - 1.0).abs() > TOL {
                return Ok(Verdict::fail(Certificate::Mismatch {
                    expected: Value::Float(1.0),
                    actual: Value::Float(v[0]),
                }));
            }
            let dn = d.norm.dual().eval(&v[1..]);
            if dn <= 1.0 + TOL {
                Verdict::pass(Certificate::NormBound { t: Value::Float(1.0), norm: Value::Float(dn) })
            } else {
                // (1, -y) is positive and ω(1, -y) = 1 - ‖w‖_* < 0
                let y = d.norm.dual().norming(&v[1..]);
                let mut g = vec![1.0];
                g.extend(y.iter().map(|x| -x));
                Verdict::fail(Certificate::Witness {
                    note: format!("dual norm {dn} exceeds 1"),
                    g: Element::Float(g),
                })
            }
        }
        AouSpace::Quantum(q) => {
            let rho = quantum::from_dual(q.n, &v);
            let tr = rho.trace().re;
            if (tr - 1.0).abs() > TOL {
                return Ok(Verdict::fail(Certificate::Mismatch {
                    expected: Value::Float(1.0),
                    actual: Value::Float(tr),
                }));
            }
            let (vals, vecs) = quantum::eigh(&rho);
            if vals[0] >= -TOL {
                Verdict::pass(Certificate::Spectrum { min_eigenvalue: vals[0] })
            } else {
                let p = quantum::projector(&vecs.column(0).into_owned());
                Verdict::fail(Certificate::Witness {
                    note: format!("density matrix has eigenvalue {}", vals[0]),
                    g: Element::Float(quantum::to_coords(&p)),
                })
            }
        }
        _ => unreachable!("polyhedral spaces handled above"),
    })
}

/// Extreme points of the state polytope of a polyhedral space, sorted.
pub fn state_vertices(space: &AouSpace) -> Result<Vec<Element>> {
    let c = space
        .poly()
        .ok_or_else(|| CoreError::Unsupported("state vertices need a polyhedral space".into()))?;
    Ok(c.states().iter().cloned().map(Element::Exact).collect())
}

/// A state attaining the order norm of `f`. With `positive` set, `f` must
/// lie in the cone and the state satisfies `ω(f) = ‖f‖`; otherwise it
/// satisfies `|ω(f)| = ‖f‖`. Ties go to the lexicographically smallest
/// state vertex.
pub fn norming_state(space: &AouSpace, f: &Element, positive: bool) -> Result<(Element, Value)> {
    if positive && !space.contains(f)?.holds {
        return Err(CoreError::InvalidInput(format!("{f} is not positive")));
    }
    let f = space.coerce(f)?;
    if let Some(c) = space.poly() {
        let x = f.exact().expect("coerced to exact");
        let mut best: Option<(&Vec<Rat>, Rat)> = None;
        for s in c.states() {
            let v = dot(s, x);
            let score = if positive { v.clone() } else { v.abs() };
            // ties go to the lexicographically largest vertex
            if best.as_ref().is_none_or(|(t, b)| score > *b || (score == *b && s > *t)) {
                best = Some((s, score));
            }
        }
        let (s, _) = best.expect("state polytope is nonempty");
        let value = dot(s, x);
        return Ok((Element::Exact(s.clone()), Value::Exact(value)));
    }
    let x = f.to_f64();
    let w = match space {
        AouSpace::Dichotomic(d) => {
            let mut y = d.norm.norming(&x[1..]);
            if x[0] < 0.0 {
                y.iter_mut().for_each(|v| *v = -*v);
            }
            dichotomic_state(&Element::Float(y)).to_f64()
        }
        AouSpace::Quantum(q) => {
            let (vals, vecs) = quantum::eigh(&quantum::from_coords(q.n, &x));
            let k = if positive || vals[vals.len() - 1].abs() >= vals[0].abs() {
                vals.len() - 1
            } else {
                0
            };
            quantum::to_dual(&quantum::projector(&vecs.column(k).into_owned()))
        }
        _ => unreachable!("polyhedral spaces handled above"),
    };
    let value = crate::scalar::dot(&w, &x);
    Ok((Element::Float(w), Value::Float(value)))
}

/// Float view of a value, for mixed comparisons.
pub fn value_f64(v: &Value) -> f64 {
    match v {
        Value::Exact(r) => to_f64(r),
        Value::Float(x) => *x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpm_exact::rat::{int, ints, rat};

    #[test]
    fn classical_states() {
        let s = AouSpace::classical(2).unwrap();
        assert!(is_state(&s, &Element::Exact(vec![rat(1, 2), rat(1, 2)])).unwrap().holds);
        assert!(!is_state(&s, &Element::Exact(ints(&[2, -1]))).unwrap().holds);
        let s3 = AouSpace::classical(3).unwrap();
        let v = state_vertices(&s3).unwrap();
        assert_eq!(v.len(), 3);
        let (w, val) = norming_state(&s, &Element::Exact(vec![rat(1, 2), int(1)]), true).unwrap();
        assert_eq!(w, Element::Exact(ints(&[0, 1])));
        assert_eq!(val, Value::Exact(int(1)));
    }

    #[test]
    fn gbit_state_and_dual_norm() {
        let s = AouSpace::dichotomic(2, Norm::Manhattan).unwrap();
        let w = dichotomic_state(&Element::Exact(ints(&[1, 1])));
        assert!(is_state(&s, &w).unwrap().holds);
        assert_eq!(dual_norm(&Norm::Manhattan, &Element::Exact(ints(&[1, 1]))), Value::Exact(int(1)));
        let e = dual_norm(&Norm::Euclidean, &Element::Float(vec![0.6, 0.8]));
        assert!((value_f64(&e) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spekkens_norming_state_prefers_all_plus() {
        let s = AouSpace::dichotomic(3, Norm::Manhattan).unwrap();
        let f = Element::Exact(vec![rat(1, 2), rat(1, 2), int(0), int(0)]);
        let (w, val) = norming_state(&s, &f, true).unwrap();
        assert_eq!(w, Element::Exact(ints(&[1, 1, 1, 1])));
        assert_eq!(val, Value::Exact(int(1)));
        // every sign choice for the free coordinates attains the same value
        let ties = state_vertices(&s).unwrap().iter().filter(|v| evaluate(v, &f) == val).count();
        assert_eq!(ties, 4);
    }

    #[test]
    fn quantum_norming_state_is_an_eigenstate() {
        let s = AouSpace::quantum(2).unwrap();
        let f = Element::Float(vec![1.0, 0.0, 0.0, 0.0]);
        let (w, v) = norming_state(&s, &f, true).unwrap();
        assert!((value_f64(&v) - 1.0).abs() < 1e-12);
        assert!(is_state(&s, &w).unwrap().holds);
    }
}
