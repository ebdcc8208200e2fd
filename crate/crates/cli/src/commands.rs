//! Subcommand definitions and handlers.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gpm_core::catalog::{self, NAMES};
use gpm_core::clr::{clr_existence_conditions, clr_unique, construct_clr, update_vector, ClrConstruction};
use gpm_core::json::{element_json, map_json, value_json, verdict_json};
use gpm_core::coherence::coherence_profile;
use gpm_core::maps::{classify, is_positive, PositiveMap};
use gpm_core::nslit::{sorkin_decomposition, subset_label};
use gpm_core::sequential::{
    lg_optimize, lg_sharp_bound, lg_value, seq_probability, sharp_observable, DichotomicObservable,
};
use gpm_core::state::{is_state, norming_state};
use gpm_core::{AouSpace, Certificate, Element, Verdict};
use serde_json::{json, Value as Json};

use crate::input::{self, Model};
use crate::report::{Origin, Report};
use crate::{scenarios, CliError};

#[derive(Parser, Debug)]
#[command(name = "gpm", version, about = "Coherent Lüders rules and sequential measurements in order unit spaces")]
pub struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List or describe the built-in models.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Classify an element, state or map.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Existence, construction and uniqueness of coherent Lüders rules.
    #[command(subcommand)]
    Clr(ClrCmd),
    /// Sequential measurements on dichotomic cones.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Interference terms of slit experiments.
    #[command(subcommand)]
    Sorkin(SorkinCmd),
    /// Rerun a named example, or `all`.
    Reproduce { scenario: String },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    List,
    Show { name: String },
}

#[derive(Args, Debug)]
pub struct ModelArg {
    /// Catalog name (e.g. `spekkens`, `quantum:2`), model JSON, or `@file`.
    #[arg(long)]
    pub model: String,
}

#[derive(Args, Debug)]
pub struct Expect {
    /// Exit with status 1 unless the main verdict equals this value.
    #[arg(long)]
    pub expect: Option<bool>,
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    Effect {
        #[command(flatten)]
        model: ModelArg,
        /// Alias expression, JSON coordinates or `@file`.
        #[arg(long)]
        element: String,
        #[command(flatten)]
        expect: Expect,
    },
    State {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        state: String,
        #[command(flatten)]
        expect: Expect,
    },
    Map {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        map: String,
        /// Effect for the classification relative to `f`.
        #[arg(long)]
        effect: Option<String>,
        #[command(flatten)]
        expect: Expect,
    },
}

#[derive(Args, Debug)]
pub struct ModelEffect {
    #[command(flatten)]
    pub model: ModelArg,
    #[arg(long)]
    pub effect: String,
    #[command(flatten)]
    pub expect: Expect,
}

#[derive(Subcommand, Debug)]
pub enum ClrCmd {
    Conditions(ModelEffect),
    Construct(ModelEffect),
    Unique(ModelEffect),
}

#[derive(Args, Debug)]
pub struct Observable {
    #[command(flatten)]
    pub model: ModelArg,
    /// The extremal effect `a` of the first measurement.
    #[arg(long)]
    pub a: String,
    /// Update vector `a′` as a JSON array; defaults to the canonical one.
    #[arg(long)]
    pub a_prime: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum SeqCmd {
    /// `ω(φ_f(g))`, with the constructed CLR of `f` unless `--map` is given.
    Prob {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        state: String,
        #[arg(long)]
        effect: String,
        #[arg(long)]
        then: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// `A♯B` and its closed form.
    Sharp {
        #[command(flatten)]
        obs: Observable,
        #[arg(long)]
        b: String,
    },
    /// `ω(A♯B + B − A)`.
    LgValue {
        #[command(flatten)]
        obs: Observable,
        #[arg(long)]
        b: String,
        #[arg(long)]
        state: String,
    },
    /// The sharp bound `2‖b − a‖ + 2a′·b` with an attaining state.
    LgBound {
        #[command(flatten)]
        obs: Observable,
        #[arg(long)]
        b: String,
    },
    /// Maximizes the bound over extremal `b`.
    LgOptimize {
        #[command(flatten)]
        obs: Observable,
        #[arg(long, default_value_t = 720)]
        resolution: usize,
    },
}

#[derive(Args, Debug)]
pub struct SlitsArg {
    /// Slit JSON, `@file`, or `sqrt-counterexample`, `trislit`, `basis:n`.
    #[arg(long)]
    pub slits: String,
    /// Model for slit JSON without a `model` field.
    #[arg(long)]
    pub model: Option<String>,
    /// Entries below this size count as zero on float models.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum SorkinCmd {
    Decompose(SlitsArg),
    MaxOrder(SlitsArg),
}

pub fn dispatch(command: Command) -> Result<Vec<Report>, CliError> {
    let start = Instant::now();
    let single = match command {
        Command::Catalog(c) => catalog_cmd(c),
        Command::Check(c) => check_cmd(c),
        Command::Clr(c) => clr_cmd(c),
        Command::Seq(c) => seq_cmd(c),
        Command::Sorkin(c) => sorkin_cmd(c),
        Command::Reproduce { scenario } => return scenarios::reproduce(&scenario),
    };
    let mut report = single?;
    report.runtime = start.elapsed();
    Ok(vec![report])
}

fn core<T>(r: gpm_core::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Input)
}

fn expectation(report: &mut Report, expect: &Expect, name: &str, verdict: &Verdict) {
    if let Some(want) = expect.expect {
        report.expect_eq(name, json!(want), json!(verdict.holds), Origin::Requested);
    }
}

fn catalog_cmd(cmd: CatalogCmd) -> Result<Report, CliError> {
    match cmd {
        CatalogCmd::List => {
            let mut r = Report::new("catalog list");
            for name in NAMES {
                let probe = name.replace(":n", ":2").replace(":d", ":4");
                let summary = catalog::build(&probe).map(|e| e.summary).unwrap_or("");
                r.result(name, json!(summary));
            }
            Ok(r)
        }
        CatalogCmd::Show { name } => {
            let mut r = Report::new(format!("catalog show {name}"));
            let entry = core(catalog::build(&name))?;
            r.result("name", json!(entry.name));
            r.result("summary", json!(entry.summary));
            r.result("space", json!(entry.space.describe()));
            r.result("model", gpm_core::json::model_json(&entry.space));
            r.result("extremal_rays", json!(entry.extremal_count));
            r.result("clr_admitting", json!(entry.clr_admitting));
            let aliases: serde_json::Map<String, Json> =
                entry.aliases.iter().map(|(n, x)| (n.clone(), element_json(x))).collect();
            r.result("aliases", Json::Object(aliases));
            for fact in &entry.facts {
                r.push_check(fact.statement.clone(), fact.holds, json!(true), json!(fact.holds), Origin::Published, None);
            }
            Ok(r)
        }
    }
}

fn check_cmd(cmd: CheckCmd) -> Result<Report, CliError> {
    match cmd {
        CheckCmd::Effect { model, element, expect } => {
            let m = input::model(&model.model)?;
            let x = input::element(&m, &element)?;
            let mut r = Report::new(format!("check effect on {}", m.name()));
            r.result("element", element_json(&x));
            let positive = core(m.space.contains(&x))?;
            let verdict = core(m.space.is_effect(&x))?;
            r.result("positive", verdict_json(&positive));
            r.result("effect", verdict_json(&verdict));
            r.result("order_norm", value_json(&core(m.space.order_norm(&x))?));
            if verdict.holds {
                r.result("extremal", json!(core(m.space.is_extremal_effect(&x))?));
                if m.space.poly().is_some() || !matches!(m.space, AouSpace::FiniteCone(_)) {
                    if let Ok((w, v)) = norming_state(&m.space, &x, true) {
                        r.result("norming_state", element_json(&w));
                        r.result("norming_value", value_json(&v));
                    }
                }
            }
            expectation(&mut r, &expect, "element is an effect", &verdict);
            Ok(r)
        }
        CheckCmd::State { model, state, expect } => {
            let m = input::model(&model.model)?;
            let w = input::state(&m, &state)?;
            let mut r = Report::new(format!("check state on {}", m.name()));
            r.result("state", element_json(&w));
            let verdict = core(is_state(&m.space, &w))?;
            r.result("is_state", verdict_json(&verdict));
            expectation(&mut r, &expect, "functional is a state", &verdict);
            Ok(r)
        }
        CheckCmd::Map { model, map, effect, expect } => {
            let m = input::model(&model.model)?;
            let phi = input::map(&m, &map)?;
            let mut r = Report::new(format!("check map on {}", m.name()));
            r.result("map", map_json(&phi));
            let positive = core(is_positive(&m.space, &phi))?;
            r.result("positive", verdict_json(&positive));
            let mut main = positive.clone();
            if let Some(f) = effect {
                let f = input::element(&m, &f)?;
                r.result("effect", element_json(&f));
                let c = core(classify(&m.space, &phi, &f))?;
                r.result(
                    "classification",
                    json!({
                        "f_compatible": c.f_compatible,
                        "projective": c.projective,
                        "neutral": c.neutral,
                        "coherent": c.coherent,
                    }),
                );
                let clr = c.positive && c.f_compatible && c.coherent;
                r.result("clr", json!(clr));
                if m.space.poly().is_some() && c.positive {
                    let p = core(coherence_profile(&m.space, &phi, &f))?;
                    r.result("coherence_profile", json!(p.verdicts()));
                    r.push_check(
                        "the four coherence statements agree",
                        p.all_equal(),
                        json!(true),
                        json!(p.all_equal()),
                        Origin::Definitional,
                        None,
                    );
                }
                main = Verdict::from_bool(clr);
            }
            expectation(&mut r, &expect, "map verdict", &main);
            Ok(r)
        }
    }
}

fn farkas_check(r: &mut Report, construction: &ClrConstruction) {
    if let ClrConstruction::Infeasible { certificate: Certificate::Farkas { multipliers }, program: Some(lp) } = construction {
        let ok = lp.verify_farkas(multipliers);
        r.push_check(
            "Farkas certificate verifies",
            ok,
            json!(true),
            json!(ok),
            Origin::Definitional,
            Some(gpm_core::json::certificate_json(&Certificate::Farkas { multipliers: multipliers.clone() })),
        );
    }
}

fn clr_cmd(cmd: ClrCmd) -> Result<Report, CliError> {
    let (kind, args) = match cmd {
        ClrCmd::Conditions(a) => ("conditions", a),
        ClrCmd::Construct(a) => ("construct", a),
        ClrCmd::Unique(a) => ("unique", a),
    };
    let m = input::model(&args.model.model)?;
    let f = input::element(&m, &args.effect)?;
    let mut r = Report::new(format!("clr {kind} on {}", m.name()));
    r.result("effect", element_json(&f));
    let main = match kind {
        "conditions" => {
            let c = core(clr_existence_conditions(&m.space, &f))?;
            r.result("cond_ii", verdict_json(&c.cond_ii));
            r.result("cond_iii", verdict_json(&c.cond_iii));
            let chain = !c.cond_ii.holds || c.cond_iii.holds;
            r.push_check("(ii) implies (iii)", chain, json!(true), json!(chain), Origin::Published, None);
            Verdict::from_bool(c.cond_ii.holds && c.cond_iii.holds)
        }
        "construct" => {
            let built = core(construct_clr(&m.space, &f))?;
            match &built {
                ClrConstruction::Map(phi) => {
                    r.result("outcome", json!("map"));
                    r.result("map", map_json(phi));
                    let c = core(classify(&m.space, phi, &f))?;
                    let ok = c.positive && c.f_compatible && c.coherent && c.projective;
                    r.push_check(
                        "constructed map is a positive coherent f-compatible projection",
                        ok,
                        json!(true),
                        json!(ok),
                        Origin::Definitional,
                        None,
                    );
                }
                ClrConstruction::Infeasible { certificate, .. } => {
                    r.result("outcome", json!("infeasible"));
                    r.result("certificate", gpm_core::json::certificate_json(certificate));
                    farkas_check(&mut r, &built);
                }
            }
            built.verdict()
        }
        _ => {
            let built = core(construct_clr(&m.space, &f))?;
            if built.map().is_none() {
                r.result("outcome", json!("infeasible"));
                farkas_check(&mut r, &built);
                Verdict::from_bool(false)
            } else {
                let u = core(clr_unique(&m.space, &f))?;
                r.result("unique", verdict_json(&u));
                u
            }
        }
    };
    expectation(&mut r, &args.expect, &format!("clr {kind} verdict"), &main);
    Ok(r)
}

fn tail(x: &Element) -> Element {
    match x {
        Element::Exact(v) => Element::Exact(v[1..].to_vec()),
        Element::Float(v) => Element::Float(v[1..].to_vec()),
    }
}

fn observable(m: &Model, obs: &Observable) -> Result<(Element, Element, DichotomicObservable), CliError> {
    let AouSpace::Dichotomic(d) = &m.space else {
        return Err(CliError::Usage("sequential commands need a dichotomic model".into()));
    };
    let a = input::element(m, &obs.a)?;
    let a_prime = match &obs.a_prime {
        Some(s) => input::vector(s)?,
        None => update_vector(&d.norm, &tail(&a)),
    };
    let o = core(DichotomicObservable::with_update_vector(&m.space, &a, &a_prime))?;
    Ok((a, a_prime, o))
}

fn seq_cmd(cmd: SeqCmd) -> Result<Report, CliError> {
    match cmd {
        SeqCmd::Prob { model, state, effect, then, map } => {
            let m = input::model(&model.model)?;
            let w = input::state(&m, &state)?;
            let f = input::element(&m, &effect)?;
            let g = input::element(&m, &then)?;
            let phi: PositiveMap = match map {
                Some(s) => input::map(&m, &s)?,
                None => core(construct_clr(&m.space, &f))?
                    .map()
                    .cloned()
                    .ok_or_else(|| CliError::Usage("the effect admits no CLR; pass --map".into()))?,
            };
            let mut r = Report::new(format!("seq prob on {}", m.name()));
            r.result("probability", value_json(&core(seq_probability(&m.space, &w, &phi, &g))?));
            Ok(r)
        }
        SeqCmd::Sharp { obs, b } => {
            let m = input::model(&obs.model.model)?;
            let (_, a_prime, o) = observable(&m, &obs)?;
            let b = input::element(&m, &b)?;
            let s = core(sharp_observable(&m.space, &o, &b))?;
            let mut r = Report::new(format!("seq sharp on {}", m.name()));
            r.result("a_prime", element_json(&a_prime));
            r.result("sharp", element_json(&s.value));
            if let Some(cf) = &s.closed_form {
                r.result("closed_form", element_json(cf));
                let ok = s.matches_closed_form() == Some(true);
                r.push_check("A♯B = (2β − 1)A + 2(a′·b)e", ok, json!(true), json!(ok), Origin::Published, None);
            }
            Ok(r)
        }
        SeqCmd::LgValue { obs, b, state } => {
            let m = input::model(&obs.model.model)?;
            let (_, _, o) = observable(&m, &obs)?;
            let b = input::element(&m, &b)?;
            let w = input::state(&m, &state)?;
            let mut r = Report::new(format!("seq lg-value on {}", m.name()));
            r.result("lg_value", value_json(&core(lg_value(&m.space, &w, &o, &b))?));
            Ok(r)
        }
        SeqCmd::LgBound { obs, b } => {
            let m = input::model(&obs.model.model)?;
            let (a, a_prime, _) = observable(&m, &obs)?;
            let b = input::element(&m, &b)?;
            let bound = core(lg_sharp_bound(&m.space, &tail(&a), &a_prime, &tail(&b)))?;
            let mut r = Report::new(format!("seq lg-bound on {}", m.name()));
            r.result("bound", value_json(&bound.bound));
            r.result("state", element_json(&bound.state));
            r.push_check(
                "bound attained at the state",
                bound.attained.holds,
                json!(true),
                json!(bound.attained.holds),
                Origin::Computed,
                Some(gpm_core::json::certificate_json(&bound.attained.certificate)),
            );
            Ok(r)
        }
        SeqCmd::LgOptimize { obs, resolution } => {
            let m = input::model(&obs.model.model)?;
            let (a, a_prime, _) = observable(&m, &obs)?;
            let (b, v) = core(lg_optimize(&m.space, &tail(&a), &a_prime, resolution))?;
            let mut r = Report::new(format!("seq lg-optimize on {}", m.name()));
            r.result("b_vec", element_json(&b));
            r.result("bound", value_json(&v));
            Ok(r)
        }
    }
}

fn sorkin_cmd(cmd: SorkinCmd) -> Result<Report, CliError> {
    let (kind, args) = match cmd {
        SorkinCmd::Decompose(a) => ("decompose", a),
        SorkinCmd::MaxOrder(a) => ("max-order", a),
    };
    let model = input::slits(&args.slits, args.model.as_deref())?;
    let d = sorkin_decomposition(&model);
    let mut r = Report::new(format!("sorkin {kind}"));
    r.result("slits", json!(model.slits));
    if kind == "decompose" {
        let norms: serde_json::Map<String, Json> =
            (1..=model.full()).map(|m| (subset_label(m), json!(d.norm(m)))).collect();
        r.result("eta_norms", Json::Object(norms));
        if model.space.is_exact() {
            let maps: serde_json::Map<String, Json> =
                (1..=model.full()).map(|m| (subset_label(m), map_json(&d.eta[m]))).collect();
            r.result("eta", Json::Object(maps));
        }
    }
    r.result("max_order", json!(d.max_order(args.tol)));
    r.push_check(
        "terms sum back to every map",
        d.reconstructs,
        json!(true),
        json!(d.reconstructs),
        Origin::Definitional,
        None,
    );
    Ok(r)
}
