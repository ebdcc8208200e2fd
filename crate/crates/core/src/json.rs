//! JSON formats for models, elements, states, maps and slit families.
//! Rationals travel as `"p/q"` strings; plain JSON numbers are read as
//! floats unless they are integers.

use gpm_exact::rat::{self, parse_rat, Rat};
use serde_json::{json, Map, Value as Json};

use crate::certificate::{Certificate, Verdict};
use crate::error::{CoreError, Result};
use crate::maps::{MapMatrix, PositiveMap};
use crate::matrix::Mat;
use crate::nslit::{parse_subset, subset_label, SlitModel};
use crate::space::{AouSpace, Element, Norm, Value};
use crate::state::dichotomic_state;

fn bad(msg: impl Into<String>) -> CoreError {
    CoreError::InvalidInput(msg.into())
}

enum Scalar {
    Exact(Rat),
    Float(f64),
}

fn scalar(v: &Json) -> Result<Scalar> {
    match v {
        Json::String(s) => parse_rat(s).map(Scalar::Exact).map_err(|e| bad(format!("`{s}`: {e}"))),
        Json::Number(n) => match n.as_i64() {
            Some(i) => Ok(Scalar::Exact(rat::int(i))),
            None => n.as_f64().map(Scalar::Float).ok_or_else(|| bad(format!("bad number {n}"))),
        },
        other => Err(bad(format!("expected a number or rational string, got {other}"))),
    }
}

/// A vector of scalars: exact if every entry is, otherwise float.
pub fn parse_vector(v: &Json) -> Result<Element> {
    let items = v.as_array().ok_or_else(|| bad(format!("expected an array, got {v}")))?;
    let parsed: Vec<Scalar> = items.iter().map(scalar).collect::<Result<_>>()?;
    if parsed.iter().all(|s| matches!(s, Scalar::Exact(_))) {
        Ok(Element::Exact(
            parsed.into_iter().map(|s| if let Scalar::Exact(r) = s { r } else { unreachable!() }).collect(),
        ))
    } else {
        Ok(Element::Float(
            parsed
                .into_iter()
                .map(|s| match s {
                    Scalar::Exact(r) => rat::to_f64(&r),
                    Scalar::Float(x) => x,
                })
                .collect(),
        ))
    }
}

fn exact_vector(v: &Json) -> Result<Vec<Rat>> {
    match parse_vector(v)? {
        Element::Exact(x) => Ok(x),
        Element::Float(_) => Err(bad("expected rational entries given as \"p/q\" strings")),
    }
}

fn field<'a>(v: &'a Json, key: &str) -> Result<&'a Json> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn usize_field(v: &Json, key: &str) -> Result<usize> {
    field(v, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("`{key}` must be a nonnegative integer")))
}

pub fn parse_norm(v: &Json) -> Result<Norm> {
    match v {
        Json::String(s) => match s.as_str() {
            "manhattan" | "l1" => Ok(Norm::Manhattan),
            "euclidean" | "l2" => Ok(Norm::Euclidean),
            "max" | "linf" => Ok(Norm::Max),
            other => Err(bad(format!("unknown norm `{other}`"))),
        },
        Json::Object(o) => match o.get("p") {
            Some(p) => match scalar(p)? {
                Scalar::Exact(p) => Norm::pnorm(p),
                Scalar::Float(_) => Err(bad("p must be rational")),
            },
            None => Err(bad("norm object needs `p`")),
        },
        other => Err(bad(format!("bad norm {other}"))),
    }
}

pub fn norm_json(norm: &Norm) -> Json {
    match norm {
        Norm::PNorm(p) => json!({ "p": p.to_string() }),
        other => json!(other.name()),
    }
}

pub fn parse_model(v: &Json) -> Result<AouSpace> {
    let kind = field(v, "type")?.as_str().ok_or_else(|| bad("`type` must be a string"))?;
    match kind {
        "finite_cone" => {
            let dim = usize_field(v, "dim")?;
            let gens = field(v, "generators")?
                .as_array()
                .ok_or_else(|| bad("`generators` must be an array"))?
                .iter()
                .map(exact_vector)
                .collect::<Result<Vec<_>>>()?;
            let unit = exact_vector(field(v, "order_unit")?)?;
            if let Some(g) = gens.iter().chain([&unit]).find(|g| g.len() != dim) {
                return Err(CoreError::DimensionMismatch { expected: dim, got: g.len() });
            }
            AouSpace::finite_cone(gens, unit)
        }
        "dichotomic" => AouSpace::dichotomic(usize_field(v, "d")?, parse_norm(field(v, "norm")?)?),
        "classical" => AouSpace::classical(usize_field(v, "n")?),
        "quantum" => AouSpace::quantum(usize_field(v, "dim")?),
        other => Err(bad(format!("unknown model type `{other}`"))),
    }
}

pub fn model_json(space: &AouSpace) -> Json {
    match space {
        AouSpace::FiniteCone(c) => json!({
            "type": "finite_cone",
            "dim": c.dim(),
            "generators": c.generators().iter().map(|g| rats_json(g)).collect::<Vec<_>>(),
            "order_unit": rats_json(c.unit()),
        }),
        AouSpace::Dichotomic(d) => json!({ "type": "dichotomic", "d": d.d, "norm": norm_json(&d.norm) }),
        AouSpace::Classical { n, .. } => json!({ "type": "classical", "n": n }),
        AouSpace::Quantum(q) => json!({ "type": "quantum", "dim": q.n }),
    }
}

/// An element as a bare array or `{"coords": [...]}`.
pub fn parse_element(space: &AouSpace, v: &Json) -> Result<Element> {
    let x = parse_vector(v.get("coords").unwrap_or(v))?;
    space.coerce(&x)
}

/// `{"dual_coords": [...]}`, or `{"w": [...]}` for the dichotomic state
/// `(t, x) ↦ t + w·x`.
pub fn parse_state(space: &AouSpace, v: &Json) -> Result<Element> {
    let w = if let Some(c) = v.get("dual_coords") {
        parse_vector(c)?
    } else if let Some(w) = v.get("w") {
        if !matches!(space, AouSpace::Dichotomic(_)) {
            return Err(bad("`w` states are for dichotomic models"));
        }
        dichotomic_state(&parse_vector(w)?)
    } else if v.is_array() {
        parse_vector(v)?
    } else {
        return Err(bad("a state needs `dual_coords` or `w`"));
    };
    space.coerce(&w)
}

/// `{"matrix": [[...], ...]}` where column `j` is the image of basis
/// vector `j`.
pub fn parse_map(space: &AouSpace, v: &Json) -> Result<PositiveMap> {
    parse_matrix(v.get("matrix").unwrap_or(v))?.coerce(space)
}

fn parse_matrix(v: &Json) -> Result<PositiveMap> {
    let rows = v.as_array().ok_or_else(|| bad("a matrix is an array of rows"))?;
    let rows: Vec<Element> = rows.iter().map(parse_vector).collect::<Result<_>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad("matrix rows must be nonempty and of equal length"));
    }
    if rows.iter().all(|r| r.exact().is_some()) {
        let rows: Vec<Vec<Rat>> = rows.into_iter().map(|r| r.exact().unwrap().to_vec()).collect();
        Ok(PositiveMap::exact(Mat::from_rows(&rows)))
    } else {
        let rows: Vec<Vec<f64>> = rows.iter().map(Element::to_f64).collect();
        Ok(PositiveMap::float(Mat::from_rows(&rows)))
    }
}

/// `{"slits": n, "maps": {"{1,2}": matrix, ...}}`; the empty subset is
/// the zero map and may be omitted.
pub fn parse_slits(space: &AouSpace, v: &Json) -> Result<SlitModel> {
    let n = usize_field(v, "slits")?;
    if n == 0 || n > crate::nslit::MAX_SLITS {
        return Err(bad(format!("slit count must be 1..={}", crate::nslit::MAX_SLITS)));
    }
    let given = field(v, "maps")?.as_object().ok_or_else(|| bad("`maps` must be an object"))?;
    let mut maps: Vec<Option<PositiveMap>> = vec![None; 1 << n];
    maps[0] = Some(PositiveMap::zero(space));
    for (label, m) in given {
        let mask = parse_subset(label)
            .filter(|&m| m < 1 << n)
            .ok_or_else(|| bad(format!("bad subset label `{label}`")))?;
        maps[mask] = Some(parse_map(space, m)?);
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(mask, m)| m.ok_or_else(|| bad(format!("missing map for {}", subset_label(mask)))))
        .collect::<Result<_>>()?;
    SlitModel::new(space.clone(), n, maps)
}

pub fn slits_json(model: &SlitModel) -> Json {
    let maps: Map<String, Json> =
        (1..=model.full()).map(|m| (subset_label(m), map_json(&model.maps[m]))).collect();
    json!({ "slits": model.slits, "maps": maps })
}

pub fn rat_json(r: &Rat) -> Json {
    Json::String(r.to_string())
}

pub fn rats_json(v: &[Rat]) -> Json {
    Json::Array(v.iter().map(rat_json).collect())
}

pub fn element_json(x: &Element) -> Json {
    match x {
        Element::Exact(v) => rats_json(v),
        Element::Float(v) => json!(v),
    }
}

pub fn value_json(x: &Value) -> Json {
    match x {
        Value::Exact(r) => rat_json(r),
        Value::Float(f) => json!(f),
    }
}

pub fn matrix_json(m: &MapMatrix) -> Json {
    match m {
        MapMatrix::Exact(m) => Json::Array(m.to_rows().iter().map(|r| rats_json(r)).collect()),
        MapMatrix::Float(m) => json!(m.to_rows()),
    }
}

pub fn map_json(phi: &PositiveMap) -> Json {
    json!({ "matrix": matrix_json(&phi.matrix) })
}

pub fn certificate_json(c: &Certificate) -> Json {
    match c {
        Certificate::AllFacets { count } => json!({ "kind": "all_facets", "count": count }),
        Certificate::ViolatedFacet { facet, value } => {
            json!({ "kind": "violated_facet", "facet": rats_json(facet), "value": rat_json(value) })
        }
        Certificate::SeparatingState { state, value } => {
            json!({ "kind": "separating_state", "state": element_json(state), "value": value_json(value) })
        }
        Certificate::Spectrum { min_eigenvalue } => json!({ "kind": "spectrum", "min_eigenvalue": min_eigenvalue }),
        Certificate::NormBound { t, norm } => json!({ "kind": "norm_bound", "t": value_json(t), "norm": value_json(norm) }),
        Certificate::GeneratorImage { generator, image } => {
            json!({ "kind": "generator_image", "generator": element_json(generator), "image": element_json(image) })
        }
        Certificate::MovedElement { g, image } => {
            json!({ "kind": "moved_element", "g": element_json(g), "image": element_json(image) })
        }
        Certificate::StateChange { state, pulled_back } => json!({
            "kind": "state_change",
            "state": element_json(state),
            "pulled_back": element_json(pulled_back),
        }),
        Certificate::Witness { g, note } => json!({ "kind": "witness", "g": element_json(g), "note": note }),
        Certificate::LpPoint { point } => json!({ "kind": "lp_point", "point": rats_json(point) }),
        Certificate::Farkas { multipliers } => json!({ "kind": "farkas", "multipliers": rats_json(multipliers) }),
        Certificate::MapWitness { map, defect } => {
            json!({ "kind": "map_witness", "map": map.to_rows(), "defect": defect })
        }
        Certificate::Sampled { samples, seed } => json!({ "kind": "sampled", "samples": samples, "seed": seed }),
        Certificate::Structural(s) => json!({ "kind": "structural", "reason": s }),
        Certificate::Mismatch { expected, actual } => {
            json!({ "kind": "mismatch", "expected": value_json(expected), "actual": value_json(actual) })
        }
        Certificate::None => json!({ "kind": "none" }),
    }
}

pub fn verdict_json(v: &Verdict) -> Json {
    json!({ "holds": v.holds, "certificate": certificate_json(&v.certificate) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpm_exact::rat::{ints, rat};

    #[test]
    fn model_round_trip() {
        let src = json!({
            "type": "finite_cone",
            "dim": 2,
            "generators": [["1", "0"], ["0", "1"]],
            "order_unit": ["1", "1"],
        });
        let space = parse_model(&src).unwrap();
        assert_eq!(model_json(&space), src);
        let d = parse_model(&json!({ "type": "dichotomic", "d": 3, "norm": { "p": "3/2" } })).unwrap();
        assert_eq!(model_json(&d)["norm"], json!({ "p": "3/2" }));
        assert!(parse_model(&json!({ "type": "torus" })).is_err());
    }

    #[test]
    fn states_and_maps() {
        let space = AouSpace::dichotomic(2, Norm::Manhattan).unwrap();
        let w = parse_state(&space, &json!({ "w": ["1", "-1"] })).unwrap();
        assert_eq!(w, Element::Exact(ints(&[1, 1, -1])));
        let m = parse_map(&space, &json!({ "matrix": [["1", "0", "0"], ["0", "1/2", "0"], ["0", "0", 1]] })).unwrap();
        assert_eq!(m.as_exact().unwrap()[(1, 1)], rat(1, 2));
        assert_eq!(map_json(&m)["matrix"][1][1], json!("1/2"));
        assert!(parse_map(&space, &json!({ "matrix": [["1"]] })).is_err());
    }

    #[test]
    fn slit_round_trip() {
        let q = AouSpace::quantum(2).unwrap();
        let p0 = crate::quantum::diag(&[1.0, 0.0]);
        let p1 = crate::quantum::diag(&[0.0, 1.0]);
        let model = crate::nslit::quantum_slits(&[p0, p1]).unwrap();
        let back = parse_slits(&q, &slits_json(&model)).unwrap();
        assert!(back.maps.iter().zip(&model.maps).all(|(a, b)| a.near(b)));
    }
}
