//! Named scenarios for `gpm reproduce`. Each one rebuilds a worked example
//! from scratch and compares the outcome against the expected values.

use std::thread;
use std::time::Instant;

use gpm_core::catalog::{self, pathological_generator};
use gpm_core::clr::{clr_existence_conditions, construct_clr, quantum_clr_solution, ClrConstruction};
use gpm_core::json::{certificate_json, element_json, map_json, rat_json, rats_json, value_json};
use gpm_core::maps::{verify_filter, verify_nlr, PositiveMap};
use gpm_core::matrix::Mat;
use gpm_core::nslit::{
    find_state_choices, quantum_slits, sorkin_decomposition, sqrt_instrument_slits, subset_label, trislit_a4_witness,
    trislit_toy_model, ChoiceObjective, SlitModel, MAX_SLITS,
};
use gpm_core::quantum::{self, CMat};
use gpm_core::section::{diagonal_section, section_transport};
use gpm_core::sequential::{lg_optimize, lg_sharp_bound, spekkens_table};
use gpm_core::state::{is_state, value_f64};
use gpm_core::{AouSpace, Certificate, Element, Norm};
use gpm_exact::rat::{self, int, ints, rat, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{Origin, Report};
use crate::CliError;

pub const SCENARIOS: [&str; 10] = [
    "spekkens-table",
    "pathological-nlr",
    "pathological-no-clr",
    "quantum-luders-uniqueness",
    "lg-manhattan-3",
    "lg-euclidean-3-2",
    "trislit-interference",
    "sqrtA-counterexample",
    "quantum-slits-vanish",
    "section-transport",
];

type Outcome = gpm_core::Result<Report>;

pub fn reproduce(name: &str) -> Result<Vec<Report>, CliError> {
    if name == "all" {
        // each scenario builds its own inputs, so they can run side by side
        let results: Vec<Result<Report, CliError>> = thread::scope(|s| {
            let handles: Vec<_> = SCENARIOS.iter().map(|n| s.spawn(move || run_one(n))).collect();
            handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
        });
        return results.into_iter().collect();
    }
    Ok(vec![run_one(name)?])
}

fn run_one(name: &str) -> Result<Report, CliError> {
    let start = Instant::now();
    let outcome = match name {
        "spekkens-table" => spekkens(),
        "pathological-nlr" => pathological_nlr(),
        "pathological-no-clr" => pathological_no_clr(),
        "quantum-luders-uniqueness" => luders_uniqueness(),
        "lg-manhattan-3" => lg_manhattan(),
        "lg-euclidean-3-2" => lg_euclidean(),
        "trislit-interference" => trislit(),
        "sqrtA-counterexample" => sqrt_counterexample(),
        "quantum-slits-vanish" => quantum_slits_vanish(),
        "section-transport" => transport(),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown scenario `{name}`; expected one of {} or all",
                SCENARIOS.join(", ")
            )))
        }
    };
    let mut report = outcome.map_err(CliError::Input)?;
    report.runtime = start.elapsed();
    Ok(report)
}

fn spekkens() -> Outcome {
    let mut r = Report::new("spekkens-table");
    let t = spekkens_table()?;
    let label = |l: i32| format!("a{l:+}");
    r.result("labels", json!(t.labels.iter().map(|&l| label(l)).collect::<Vec<_>>()));
    r.result("ratios", json!(t.ratios.iter().map(|row| rats_json(row)).collect::<Vec<_>>()));
    for (i, &li) in t.labels.iter().enumerate() {
        for (j, &lj) in t.labels.iter().enumerate() {
            let want = if li == lj {
                int(1)
            } else if li == -lj {
                int(0)
            } else {
                rat(1, 2)
            };
            r.expect_eq(
                format!("P({} then {}) / P({})", label(li), label(lj), label(li)),
                rat_json(&want),
                rat_json(&t.ratios[i][j]),
                Origin::Published,
            );
        }
    }
    r.expect_eq("repeatability of each observable", json!(true), json!(t.repeatable), Origin::Published);
    Ok(r)
}

fn pathological_parts() -> gpm_core::Result<(catalog::CatalogEntry, Element)> {
    let entry = catalog::build("pathological")?;
    let f = entry.element("e-a1-a2")?;
    Ok((entry, f))
}

fn pathological_nlr() -> Outcome {
    let mut r = Report::new("pathological-nlr");
    let (entry, f) = pathological_parts()?;
    let space = &entry.space;
    let omega = Element::Exact(ints(&[0, 0, 1, 1]));
    let on_rays: Vec<Rat> = (1..=6).map(|k| rat::dot(omega.exact().unwrap(), &pathological_generator(k))).collect();
    r.result("f", element_json(&f));
    r.result("omega", element_json(&omega));
    r.expect_eq("omega on a1..a6", rats_json(&ints(&[0, 0, 1, 1, 0, 0])), rats_json(&on_rays), Origin::Published);
    r.expect_eq("omega is a state", json!(true), json!(is_state(space, &omega)?.holds), Origin::Published);
    let phi = PositiveMap::rank_one(&f, &omega);
    let psi = PositiveMap::exact(
        Mat::outer(&pathological_generator(1), &ints(&[1, 0, 0, 0]))
            .add(&Mat::outer(&pathological_generator(2), &ints(&[0, 1, 0, 0]))),
    );
    r.result("phi", map_json(&phi));
    r.result("complement_map", map_json(&psi));
    let (a, b) = verify_filter(space, &phi, &f, &psi)?;
    let nlr = verify_nlr(space, &phi, &f)?;
    for (what, rep) in [("f·omega", &nlr), ("a1 omega1 + a2 omega2", &b)] {
        r.expect_eq(format!("{what} is f-compatible"), json!(true), json!(rep.f_compatible.holds), Origin::Published);
        r.expect_eq(format!("{what} is a projection"), json!(true), json!(rep.projective.holds), Origin::Published);
        r.expect_eq(format!("{what} is neutral"), json!(true), json!(rep.neutral.holds), Origin::Published);
    }
    r.expect_eq("the two maps form a filter", json!(true), json!(a.holds() && b.holds()), Origin::Published);
    Ok(r)
}

fn pathological_no_clr() -> Outcome {
    let mut r = Report::new("pathological-no-clr");
    let (entry, f) = pathological_parts()?;
    let space = &entry.space;
    let c = space.poly().expect("pathological cone is polyhedral");
    r.result("f", element_json(&f));
    let cond = clr_existence_conditions(space, &f)?;
    r.expect_eq("condition (iii) holds", json!(true), json!(cond.cond_iii.holds), Origin::Published);
    r.expect_eq("condition (ii) holds", json!(false), json!(cond.cond_ii.holds), Origin::Published);
    let witness = match &cond.cond_ii.certificate {
        Certificate::Witness { g, .. } => g.exact(),
        _ => None,
    };
    r.expect_eq("exact witness for (ii)", json!(true), json!(witness.is_some()), Origin::Definitional);
    if let Some(g) = witness {
        r.result("witness", rats_json(g));
        let a3 = pathological_generator(3);
        let coeff = &g[2] / &a3[2];
        let multiple = rat::scale(&coeff, &a3) == g;
        r.expect_eq("witness is a multiple of a3", json!(true), json!(multiple), Origin::Published);
        let normalized = &coeff / c.order_norm(g);
        r.result("normalized_a3_coefficient", rat_json(&normalized));
        r.expect_eq(
            "normalized witness exceeds 1/2 a3",
            json!(true),
            json!(normalized > rat(1, 2)),
            Origin::Published,
        );
    }
    match construct_clr(space, &f)? {
        ClrConstruction::Infeasible { certificate, program } => {
            r.result("construction", json!("infeasible"));
            r.result("certificate", certificate_json(&certificate));
            let verified = match (&certificate, &program) {
                (Certificate::Farkas { multipliers }, Some(lp)) => lp.verify_farkas(multipliers),
                _ => false,
            };
            r.expect_eq("Farkas certificate verifies", json!(true), json!(verified), Origin::Definitional);
        }
        ClrConstruction::Map(phi) => {
            r.result("construction", json!("map"));
            r.result("map", map_json(&phi));
            r.expect_eq("no CLR exists", json!("infeasible"), json!("map"), Origin::Published);
        }
    }
    Ok(r)
}

fn random_projector(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let rank = rng.random_range(1..n);
    quantum::random_projector(n, rank, rng)
}

fn luders_uniqueness() -> Outcome {
    let mut r = Report::new("quantum-luders-uniqueness");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst, mut max_nullity, mut count) = (0.0f64, 0usize, 0usize);
    for n in 2..=4 {
        for _ in 0..20 {
            let f = random_projector(n, &mut rng);
            let sol = quantum_clr_solution(&f);
            let direct = quantum::map_from_fn(n, |x| &f * x * &f);
            worst = worst.max(sol.map.sub(&direct).max_abs());
            max_nullity = max_nullity.max(sol.nullity);
            count += 1;
        }
    }
    r.result("projectors", json!(count));
    r.result("max_deviation_from_FXF", json!(worst));
    r.expect_eq("dimension of the solution set", json!(0), json!(max_nullity), Origin::Published);
    r.expect_eq("solution equals X -> FXF within 1e-10", json!(true), json!(worst < 1e-10), Origin::Published);
    Ok(r)
}

fn lg_manhattan() -> Outcome {
    let mut r = Report::new("lg-manhattan-3");
    let space = AouSpace::dichotomic(3, Norm::Manhattan)?;
    let a_vec = Element::Exact(vec![rat(1, 2), int(0), int(0)]);
    let a_prime = Element::Exact(ints(&[1, 1, 1]));
    let (b, best) = lg_optimize(&space, &a_vec, &a_prime, 0)?;
    let bound = lg_sharp_bound(&space, &a_vec, &a_prime, &b)?;
    r.result("a_vec", element_json(&a_vec));
    r.result("a_prime", element_json(&a_prime));
    r.result("b_vec", element_json(&b));
    r.result("state", element_json(&bound.state));
    r.expect_eq("maximal bound", json!("3"), value_json(&best), Origin::Published);
    r.expect_eq("bound reached at the state", json!("3"), value_json(&bound.bound), Origin::Published);
    r.push_check(
        "attaining state is exact and valid",
        bound.attained.holds && bound.state.exact().is_some() && is_state(&space, &bound.state)?.holds,
        json!(true),
        json!(bound.attained.holds),
        Origin::Definitional,
        Some(certificate_json(&bound.attained.certificate)),
    );
    Ok(r)
}

fn lg_euclidean() -> Outcome {
    let mut r = Report::new("lg-euclidean-3-2");
    let space = AouSpace::dichotomic(3, Norm::Euclidean)?;
    let a_vec = Element::Float(vec![0.5, 0.0, 0.0]);
    let a_prime = Element::Float(vec![1.0, 0.0, 0.0]);
    let (b, v) = lg_optimize(&space, &a_vec, &a_prime, 720)?;
    let bound = lg_sharp_bound(&space, &a_vec, &a_prime, &b)?;
    let v = value_f64(&v);
    r.result("b_vec", element_json(&b));
    r.result("bound", json!(v));
    r.result("state", element_json(&bound.state));
    r.expect_eq("bound is 3/2 within 1e-9", json!(true), json!((v - 1.5).abs() < 1e-9), Origin::Published);
    r.expect_eq("bound reached at the state", json!(true), json!(bound.attained.holds), Origin::Definitional);
    Ok(r)
}

fn trislit() -> Outcome {
    let mut r = Report::new("trislit-interference");
    let choices = find_state_choices(ChoiceObjective::Both)?;
    r.expect_eq("a state assignment with vanishing pairwise terms exists", json!(true), json!(choices.is_some()), Origin::Published);
    let Some(choices) = choices else { return Ok(r) };
    let assignment: serde_json::Map<String, serde_json::Value> = choices
        .iter()
        .map(|((mask, k), w)| (format!("{} a{}", subset_label(*mask), k + 1), rats_json(w)))
        .collect();
    r.result("state_choices", serde_json::Value::Object(assignment));
    let dec = sorkin_decomposition(&trislit_toy_model(&choices)?);
    let exact_zero = |mask: usize| dec.eta[mask].as_exact().is_some_and(|m| m.entries().iter().all(|x| *x == int(0)));
    for pair in [0b011, 0b101, 0b110] {
        r.expect_eq(format!("eta{} = 0", subset_label(pair)), json!(true), json!(exact_zero(pair)), Origin::Published);
    }
    r.result("eta{1,2,3}", map_json(&dec.eta[0b111]));
    r.expect_eq("eta{1,2,3} = 0", json!(false), json!(exact_zero(0b111)), Origin::Published);
    let witness = trislit_a4_witness(&dec);
    if let Some((col, coeff)) = &witness {
        r.result("a4_witness", json!({ "generator": format!("a{}", col + 1), "a4_coefficient": rat_json(coeff) }));
    }
    r.expect_eq("eta{1,2,3} has an a4 component", json!(true), json!(witness.is_some()), Origin::Published);
    r.expect_eq("terms sum back to every map", json!(true), json!(dec.reconstructs), Origin::Definitional);
    Ok(r)
}

fn sqrt_ops() -> [CMat; 3] {
    [quantum::diag(&[0.5, 0.5]), quantum::diag(&[0.5, 0.0]), quantum::diag(&[0.0, 0.5])]
}

fn sqrt_counterexample() -> Outcome {
    let mut r = Report::new("sqrtA-counterexample");
    let dec = sorkin_decomposition(&sqrt_instrument_slits(&sqrt_ops())?);
    let eta = dec.norm(0b111);
    r.result("eta{1,2,3}_norm", json!(eta));
    r.result("max_order", json!(dec.max_order(1e-12)));
    r.expect_eq("eta{1,2,3} norm exceeds 1e-3", json!(true), json!(eta > 1e-3), Origin::Published);
    Ok(r)
}

fn quantum_slits_vanish() -> Outcome {
    let mut r = Report::new("quantum-slits-vanish");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst, mut families) = (0.0f64, 0);
    for n in 3..=6 {
        let slits = n.min(4);
        for _ in 0..10 {
            let u = quantum::random_unitary(n, &mut rng);
            let projectors: Vec<CMat> = (0..slits)
                .map(|s| {
                    (0..n)
                        .filter(|j| j % slits == s)
                        .fold(CMat::zeros(n, n), |acc, j| acc + quantum::projector(&u.column(j).into_owned()))
                })
                .collect();
            let dec = sorkin_decomposition(&quantum_slits(&projectors)?);
            worst = worst.max(dec.order_norm(3));
            families += 1;
        }
    }
    r.result("families", json!(families));
    r.result("max_order3_norm", json!(worst));
    r.expect_eq("every order-3 term is below 1e-12", json!(true), json!(worst < 1e-12), Origin::Published);
    Ok(r)
}

fn transport() -> Outcome {
    let mut r = Report::new("section-transport");
    let (w, v) = (AouSpace::classical(2)?, AouSpace::quantum(2)?);
    let (tau, back) = diagonal_section(2);
    let proj = quantum::diag(&[1.0, 0.0]);
    let phi = PositiveMap::conjugation(&proj);
    let f = Element::Exact(ints(&[1, 0]));
    let t = section_transport(&w, &v, &tau, &back, &phi, &f)?;
    r.result("f", element_json(&f));
    r.result("transported_map", map_json(&t.map));
    r.expect_eq("FXF is coherent for F", json!(true), json!(t.source_coherent.holds), Origin::Published);
    let want = PositiveMap::exact(Mat::from_rows(&[ints(&[1, 0]), ints(&[0, 0])]));
    r.expect_eq("transported map", map_json(&want), map_json(&t.map), Origin::Computed);
    r.expect_eq("transported map is f-compatible", json!(true), json!(t.f_compatible.holds), Origin::Published);
    r.expect_eq("transported map is coherent", json!(true), json!(t.coherent.holds), Origin::Published);
    r.expect_eq("transported map is neutral", json!(true), json!(t.neutral.holds), Origin::Published);
    Ok(r)
}

/// Slit families that can be named on the command line.
pub fn builtin_slits(name: &str) -> Result<SlitModel, CliError> {
    let model = match name {
        "sqrt-counterexample" => sqrt_instrument_slits(&sqrt_ops()),
        "trislit" => find_state_choices(ChoiceObjective::Both)
            .and_then(|c| trislit_toy_model(&c.expect("a consistent assignment exists"))),
        _ => {
            let n = name
                .strip_prefix("basis:")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| (2..=MAX_SLITS).contains(n))
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown slit family `{name}`; expected sqrt-counterexample, trislit or basis:n with n in 2..={MAX_SLITS}"
                    ))
                })?;
            let projectors: Vec<CMat> = (0..n)
                .map(|k| {
                    let mut d = vec![0.0; n];
                    d[k] = 1.0;
                    quantum::diag(&d)
                })
                .collect();
            quantum_slits(&projectors)
        }
    };
    model.map_err(CliError::Input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_passes() {
        for report in reproduce("all").unwrap() {
            assert!(report.passed(), "{}", report.to_text());
        }
    }

    #[test]
    fn builtin_families() {
        assert_eq!(builtin_slits("basis:3").unwrap().slits, 3);
        assert!(builtin_slits("basis:9").is_err());
        assert!(builtin_slits("sqrt-counterexample").is_ok());
    }
}
