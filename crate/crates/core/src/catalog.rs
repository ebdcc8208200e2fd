//! Named example spaces with their documented structure checked on
//! construction, plus element aliases such as `e`, `a1` or `e-a1-a2`.

use std::fmt;

use gpm_exact::rat::{self, ints, parse_rat, rat, Rat};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clr::{clr_existence_conditions, construct_clr};
use crate::error::{CoreError, Result};
use crate::maps::PositiveMap;
use crate::nslit::trislit_space;
use crate::quantum;
use crate::space::{AouSpace, Element, Norm};

pub const QUANTUM_DIMS: std::ops::RangeInclusive<usize> = 2..=8;

/// Catalog names, with `:n` marking a size parameter.
pub const NAMES: [&str; 10] = [
    "classical:n",
    "gbit",
    "qubit_cone",
    "hyperbit:d",
    "manhattan:d",
    "max_cone:d",
    "spekkens",
    "pathological",
    "trislit",
    "quantum:n",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Fact {
    pub statement: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub summary: &'static str,
    pub space: AouSpace,
    /// Number of normalized extremal rays, when finite.
    pub extremal_count: Option<usize>,
    pub clr_admitting: String,
    pub aliases: Vec<(String, Element)>,
    pub facts: Vec<Fact>,
}

impl CatalogEntry {
    pub fn alias(&self, name: &str) -> Option<&Element> {
        self.aliases.iter().find(|(n, _)| n == name).map(|(_, x)| x)
    }

    /// Parses `e`, `a1`, `e-a1-a2`, `1/2*a3+a4` and similar combinations
    /// of aliases with rational coefficients.
    pub fn element(&self, expr: &str) -> Result<Element> {
        let bad = |msg: &str| CoreError::InvalidInput(format!("cannot parse element `{expr}`: {msg}"));
        let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut names: Vec<&str> = self.aliases.iter().map(|(n, _)| n.as_str()).collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        let mut acc = self.space.zero();
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = Rat::one();
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
            } else if !first {
                return Err(bad("expected + or -"));
            }
            first = false;
            let mut coef = Rat::one();
            let num_len = rest.find(|c: char| !(c.is_ascii_digit() || c == '/' || c == '.')).unwrap_or(rest.len());
            if num_len > 0 {
                coef = parse_rat(&rest[..num_len]).map_err(|e| bad(&e.to_string()))?;
                rest = &rest[num_len..];
                match rest.strip_prefix('*') {
                    Some(r) => rest = r,
                    None if rest.is_empty() || rest.starts_with(['+', '-']) => {
                        return Err(bad("bare numbers are not elements"));
                    }
                    None => {}
                }
            }
            let name = names
                .iter()
                .find(|n| rest.starts_with(**n))
                .ok_or_else(|| bad(&format!("unknown alias at `{rest}`")))?;
            rest = &rest[name.len()..];
            let x = self.alias(name).expect("alias exists");
            acc = self.space.add(&acc, &scale(&(sign * coef), x))?;
        }
        Ok(acc)
    }
}

fn scale(c: &Rat, x: &Element) -> Element {
    match x {
        Element::Exact(v) => Element::Exact(rat::scale(c, v)),
        Element::Float(v) => {
            let c = rat::to_f64(c);
            Element::Float(v.iter().map(|y| c * y).collect())
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, self.summary)?;
        writeln!(f, "  space: {}", self.space.describe())?;
        match self.extremal_count {
            Some(n) => writeln!(f, "  extremal rays: {n}")?,
            None => writeln!(f, "  extremal rays: infinitely many")?,
        }
        writeln!(f, "  effects admitting a CLR: {}", self.clr_admitting)?;
        let names: Vec<&str> = self.aliases.iter().map(|(n, _)| n.as_str()).collect();
        writeln!(f, "  aliases: {}", names.join(", "))?;
        for fact in &self.facts {
            writeln!(f, "  [{}] {}", if fact.holds { "ok" } else { "FAILED" }, fact.statement)?;
        }
        Ok(())
    }
}

/// Splits `manhattan:3` or `manhattan(3)` into name and parameter.
fn split_name(name: &str) -> Result<(String, Option<usize>)> {
    let name = name.trim();
    let (base, param) = if let Some((b, p)) = name.split_once(':') {
        (b, Some(p))
    } else if let Some((b, p)) = name.split_once('(') {
        let p = p.strip_suffix(')').ok_or_else(|| CoreError::UnknownModel(name.into()))?;
        (b, Some(p))
    } else {
        (name, None)
    };
    let param = param
        .map(|p| p.trim().parse::<usize>().map_err(|_| CoreError::InvalidInput(format!("bad parameter in `{name}`"))))
        .transpose()?;
    Ok((base.trim().to_ascii_lowercase().replace('-', "_"), param))
}

/// Builds a catalog entry, failing if any of its documented facts does not
/// hold.
pub fn build(name: &str) -> Result<CatalogEntry> {
    let (base, param) = split_name(name)?;
    let need = |lo: usize, hi: usize| -> Result<usize> {
        let n = param.ok_or_else(|| CoreError::InvalidInput(format!("`{base}` needs a size parameter")))?;
        if (lo..=hi).contains(&n) {
            Ok(n)
        } else {
            Err(CoreError::InvalidInput(format!("`{base}` size must be in {lo}..={hi}, got {n}")))
        }
    };
    let none = || -> Result<()> {
        match param {
            Some(_) => Err(CoreError::InvalidInput(format!("`{base}` takes no parameter"))),
            None => Ok(()),
        }
    };
    let entry = match base.as_str() {
        "classical" => classical(need(1, 8)?)?,
        "gbit" => {
            none()?;
            dichotomic("gbit".into(), "local part of a PR box: Manhattan norm cone, d = 2", 2, Norm::Manhattan)?
        }
        "qubit_cone" => {
            none()?;
            dichotomic("qubit_cone".into(), "qubit state cone: Euclidean norm cone, d = 3", 3, Norm::Euclidean)?
        }
        "hyperbit" => {
            let d = need(4, 8)?;
            dichotomic(format!("hyperbit:{d}"), "Euclidean norm cone beyond d = 3", d, Norm::Euclidean)?
        }
        "manhattan" => {
            let d = need(1, 6)?;
            dichotomic(format!("manhattan:{d}"), "Manhattan norm cone", d, Norm::Manhattan)?
        }
        "max_cone" => {
            let d = need(1, 4)?;
            dichotomic(format!("max_cone:{d}"), "max norm cone", d, Norm::Max)?
        }
        "spekkens" => {
            none()?;
            spekkens()?
        }
        "pathological" => {
            none()?;
            pathological()?
        }
        "trislit" => {
            none()?;
            trislit()?
        }
        "quantum" => quantum_entry(need(*QUANTUM_DIMS.start(), *QUANTUM_DIMS.end())?)?,
        _ => return Err(CoreError::UnknownModel(name.into())),
    };
    if let Some(f) = entry.facts.iter().find(|f| !f.holds) {
        return Err(CoreError::InvalidInput(format!("{}: documented fact fails: {}", entry.name, f.statement)));
    }
    Ok(entry)
}

fn fact(statement: impl Into<String>, holds: bool) -> Fact {
    Fact { statement: statement.into(), holds }
}

fn exact(v: Vec<Rat>) -> Element {
    Element::Exact(v)
}

/// Facts shared by every finite cone: ray count and unit bounds.
fn finite_facts(space: &AouSpace, expected_rays: usize) -> Result<Vec<Fact>> {
    let c = space.poly().expect("polyhedral");
    let rays = c.rays().len();
    let mut facts = vec![fact(format!("{expected_rays} extremal rays"), rays == expected_rays)];
    let unit_ok = c.rays().iter().all(|r| c.is_effect(r));
    facts.push(fact("every normalized extremal ray is an effect", unit_ok));
    facts.push(fact("e has order norm 1", c.order_norm(c.unit()) == Rat::one()));
    Ok(facts)
}

fn ray_aliases(space: &AouSpace) -> Vec<(String, Element)> {
    let c = space.poly().expect("polyhedral");
    let mut out = vec![("e".to_string(), exact(c.unit().to_vec()))];
    out.extend(c.rays().iter().enumerate().map(|(i, r)| (format!("a{}", i + 1), exact(r.clone()))));
    out
}

fn classical(n: usize) -> Result<CatalogEntry> {
    let space = AouSpace::classical(n)?;
    let mut aliases = vec![("e".to_string(), space.unit())];
    aliases.extend((0..n).map(|k| (format!("a{}", k + 1), exact(rat::unit(n, k)))));
    let mut facts = finite_facts(&space, n)?;
    let decomposition = unit_decomposition_exists(&space)?;
    facts.push(fact("e is the sum of all extremal effects", decomposition.is_some_and(|s| s.len() == n)));
    Ok(CatalogEntry {
        name: format!("classical:{n}"),
        summary: "n-fold product of the real line",
        space,
        extremal_count: Some(n),
        clr_admitting: "0/1-valued effects".into(),
        aliases,
        facts,
    })
}

/// `a+k = (½, ½e_k)` and `a-k = (½, −½e_k)`.
fn signed_axis(d: usize, k: usize, positive: bool) -> Vec<Rat> {
    let mut v = rat::zeros(d + 1);
    v[0] = rat(1, 2);
    v[k] = if positive { rat(1, 2) } else { rat(-1, 2) };
    v
}

fn dichotomic(name: String, summary: &'static str, d: usize, norm: Norm) -> Result<CatalogEntry> {
    let space = AouSpace::dichotomic(d, norm.clone())?;
    let mut aliases = vec![("e".to_string(), space.unit())];
    for k in 1..=d {
        aliases.push((format!("a+{k}"), exact(signed_axis(d, k, true))));
        aliases.push((format!("a-{k}"), exact(signed_axis(d, k, false))));
    }
    let extremal_count = match &norm {
        Norm::Manhattan => Some(2 * d),
        Norm::Max => Some(1 << d),
        _ => None,
    };
    let mut facts = match extremal_count {
        Some(n) => {
            aliases.extend(ray_aliases(&space).into_iter().skip(1));
            finite_facts(&space, n)?
        }
        None => Vec::new(),
    };
    if norm != Norm::Max {
        let mut axes_extremal = true;
        for (_, a) in &aliases[1..=2 * d] {
            axes_extremal &= space.is_extremal_effect(a)?;
        }
        facts.push(fact("every a±k is an extremal effect", axes_extremal));
    }
    let mut pairs_ok = true;
    for k in 0..d {
        let sum = space.add(&aliases[1 + 2 * k].1, &aliases[2 + 2 * k].1)?;
        pairs_ok &= sum == space.unit();
    }
    facts.push(fact("e = a+k + a-k for every k", pairs_ok));
    Ok(CatalogEntry {
        name,
        summary,
        space,
        extremal_count,
        clr_admitting: "0, e and the extremal effects (1/2, x), x extreme with ‖x‖ = 1/2".into(),
        aliases,
        facts,
    })
}

fn spekkens() -> Result<CatalogEntry> {
    let gens: Vec<Vec<Rat>> = (1..=3).flat_map(|k| [signed_axis(3, k, true), signed_axis(3, k, false)]).collect();
    let space = AouSpace::finite_cone(gens.clone(), ints(&[1, 0, 0, 0]))?;
    let mut aliases = vec![("e".to_string(), space.unit())];
    for k in 1..=3 {
        aliases.push((format!("a+{k}"), exact(gens[2 * k - 2].clone())));
        aliases.push((format!("a-{k}"), exact(gens[2 * k - 1].clone())));
    }
    let mut facts = finite_facts(&space, 6)?;
    let pairs = (0..3).all(|k| rat::add(&gens[2 * k], &gens[2 * k + 1]) == space.poly().unwrap().unit());
    facts.push(fact("e = a+k + a-k for k = 1, 2, 3", pairs));
    facts.push(fact("e has a unit decomposition", unit_decomposition_exists(&space)?.is_some()));
    Ok(CatalogEntry {
        name: "spekkens".into(),
        summary: "Spekkens toy theory: Manhattan norm cone with d = 3",
        space,
        extremal_count: Some(6),
        clr_admitting: "0, e and the six extremal effects a±k".into(),
        aliases,
        facts,
    })
}

/// Generators `a₁…a₄` (standard basis), `a₅ = (1,0,−1,1)`, `a₆ = (0,1,1,−1)`
/// with `e = a₁ + a₂ + ½(a₃ + a₄)`.
pub fn pathological_space() -> Result<AouSpace> {
    let mut gens: Vec<Vec<Rat>> = (0..4).map(|k| rat::unit(4, k)).collect();
    gens.push(ints(&[1, 0, -1, 1]));
    gens.push(ints(&[0, 1, 1, -1]));
    AouSpace::finite_cone(gens, vec![Rat::one(), Rat::one(), rat(1, 2), rat(1, 2)])
}

/// The generator `a_k` of the pathological cone, unnormalized.
pub fn pathological_generator(k: usize) -> Vec<Rat> {
    match k {
        1..=4 => rat::unit(4, k - 1),
        5 => ints(&[1, 0, -1, 1]),
        6 => ints(&[0, 1, 1, -1]),
        _ => panic!("the pathological cone has generators a1..a6"),
    }
}

fn generator_aliases(e: Element, gens: impl Iterator<Item = (usize, Vec<Rat>)>) -> Vec<(String, Element)> {
    let mut out = vec![("e".to_string(), e)];
    out.extend(gens.map(|(k, g)| (format!("a{k}"), exact(g))));
    out
}

fn pathological() -> Result<CatalogEntry> {
    let space = pathological_space()?;
    let mut facts = finite_facts(&space, 6)?;
    let g = |k| pathological_generator(k);
    let half = rat(1, 2);
    let e = rat::add(&rat::add(&g(1), &g(2)), &rat::scale(&half, &rat::add(&g(3), &g(4))));
    facts.push(fact("e = a1 + a2 + (a3 + a4)/2", e == space.poly().unwrap().unit()));
    facts.push(fact("e is not a sum of distinct extremal effects", unit_decomposition_exists(&space)?.is_none()));
    Ok(CatalogEntry {
        name: "pathological".into(),
        summary: "four-dimensional cone where e - a1 - a2 satisfies (iii) but not (ii)",
        aliases: generator_aliases(space.unit(), (1..=6).map(|k| (k, g(k)))),
        space,
        extremal_count: Some(6),
        clr_admitting: "decided per effect by the existence conditions; e - a1 - a2 has none".into(),
        facts,
    })
}

fn trislit() -> Result<CatalogEntry> {
    use crate::nslit::trislit_generator as g;
    let space = trislit_space()?;
    let mut facts = finite_facts(&space, 5)?;
    let unit = space.poly().unwrap().unit().to_vec();
    let three = rat::add(&rat::add(&g(1), &g(2)), &g(3));
    facts.push(fact("e = a1 + a2 + a3 = a4 + a5", three == unit && rat::add(&g(4), &g(5)) == unit));
    Ok(CatalogEntry {
        name: "trislit".into(),
        summary: "triple-slit toy cone with a5 = a1 + a2 + a3 - a4",
        aliases: generator_aliases(space.unit(), (1..=5).map(|k| (k, g(k)))),
        space,
        extremal_count: Some(5),
        clr_admitting: "decided per effect by the existence conditions".into(),
        facts,
    })
}

fn quantum_entry(n: usize) -> Result<CatalogEntry> {
    let space = AouSpace::quantum(n)?;
    let mut aliases = vec![("e".to_string(), space.unit())];
    let mut sum = space.zero();
    let mut extremal = true;
    for k in 0..n {
        let mut d = vec![0.0; n];
        d[k] = 1.0;
        let p = Element::Float(quantum::to_coords(&quantum::diag(&d)));
        extremal &= space.is_extremal_effect(&p)?;
        sum = space.add(&sum, &p)?;
        aliases.push((format!("p{}", k + 1), p));
    }
    let facts = vec![
        fact("basis projectors are extremal effects", extremal),
        fact("basis projectors sum to e", crate::scalar::vnear(&sum.to_f64(), &space.unit().to_f64())),
    ];
    Ok(CatalogEntry {
        name: format!("quantum:{n}"),
        summary: "Hermitian n x n matrices with the positive semidefinite cone",
        space,
        extremal_count: None,
        clr_admitting: "projections".into(),
        aliases,
        facts,
    })
}

/// Every catalog entry at its smallest interesting size.
pub fn default_entries() -> Result<Vec<CatalogEntry>> {
    [
        "classical:3",
        "gbit",
        "qubit_cone",
        "hyperbit:4",
        "manhattan:3",
        "max_cone:2",
        "spekkens",
        "pathological",
        "trislit",
        "quantum:2",
    ]
    .iter()
    .map(|n| build(n))
    .collect()
}

pub const MAX_DECOMPOSITION_RAYS: usize = 20;

/// A set of distinct normalized extremal rays summing exactly to `e`, by
/// exhaustive subset search.
pub fn unit_decomposition_exists(space: &AouSpace) -> Result<Option<Vec<usize>>> {
    let c = space
        .poly()
        .ok_or_else(|| CoreError::Unsupported("unit decomposition needs finitely many rays".into()))?;
    let rays = c.rays();
    if rays.len() > MAX_DECOMPOSITION_RAYS {
        return Err(CoreError::Unsupported(format!(
            "{} rays exceed the subset search limit of {MAX_DECOMPOSITION_RAYS}",
            rays.len()
        )));
    }
    // sort by mask size so the smallest decomposition is reported
    let mut masks: Vec<u32> = (1..1u32 << rays.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    Ok(masks.into_iter().find_map(|m| {
        let idx: Vec<usize> = (0..rays.len()).filter(|i| m >> i & 1 == 1).collect();
        let sum = idx.iter().fold(rat::zeros(c.dim()), |acc, &i| rat::add(&acc, &rays[i]));
        (sum == c.unit()).then_some(idx)
    }))
}

/// Outcome of checking the characterization of CLR-admitting effects of a
/// dichotomic cone on its polyhedral bridge.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmittingSet {
    pub description: String,
    pub verification: Option<AdmittingCheck>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmittingCheck {
    /// Normalized extremal rays of the bridge.
    pub extremal_checked: usize,
    /// Extremal effects where a CLR was not constructed.
    pub extremal_failures: Vec<Element>,
    /// `0 ↦ 0` and `e ↦ id`.
    pub trivial_ok: bool,
    pub non_extremal_checked: usize,
    /// Non-extremal effects that nevertheless passed (ii) and (iii).
    pub non_extremal_failures: Vec<Element>,
}

impl AdmittingCheck {
    pub fn holds(&self) -> bool {
        self.trivial_ok && self.extremal_failures.is_empty() && self.non_extremal_failures.is_empty()
    }
}

/// Seed for the sampled effects in [`clr_admitting_set`].
pub const ADMITTING_SEED: u64 = 0x0a11_ce5e;

/// The effects admitting a CLR are `0`, `e` and the extremal effects. For
/// polyhedral norms this is checked exactly on the bridge: every extremal
/// effect admits a CLR and `samples` non-extremal, non-trivial effects
/// fail (ii) or (iii).
pub fn clr_admitting_set(space: &AouSpace, samples: usize) -> Result<AdmittingSet> {
    let AouSpace::Dichotomic(d) = space else {
        return Err(CoreError::Unsupported("the admitting set is characterized for dichotomic cones".into()));
    };
    let description = format!(
        "{{0, e}} ∪ {{(1/2, x) : x an extreme point of the ball ‖x‖ ≤ 1/2}} in the {} norm on R^{}",
        d.norm.name(),
        d.d
    );
    if !d.norm.is_polyhedral() {
        return Ok(AdmittingSet { description, verification: None });
    }
    let bridge = space.dichotomic_to_polyhedral()?;
    let c = bridge.poly().expect("bridge is polyhedral");
    let mut rng = ChaCha8Rng::seed_from_u64(ADMITTING_SEED);
    let norm = |x: &[Rat]| d.norm.eval_exact(x).expect("polyhedral norm");

    let trivial_ok = {
        let zero = construct_clr(&bridge, &bridge.zero())?;
        let one = construct_clr(&bridge, &bridge.unit())?;
        zero.map() == Some(&PositiveMap::zero(&bridge)) && one.map() == Some(&PositiveMap::identity(&bridge))
    };

    let extremal: Vec<Vec<Rat>> = c.rays().to_vec();
    let mut extremal_failures = Vec::new();
    for f in &extremal {
        let f = Element::Exact(f.clone());
        let report = clr_existence_conditions(&bridge, &f)?;
        let built = construct_clr(&bridge, &f)?.map().is_some();
        if !(report.cond_ii.holds && report.cond_iii.holds && built) {
            extremal_failures.push(f);
        }
    }

    let mut non_extremal_failures = Vec::new();
    let mut checked = 0;
    while checked < samples {
        let f = Element::Exact(random_effect(&mut rng, d.d, &norm));
        if f == bridge.zero() || f == bridge.unit() || bridge.is_extremal_effect(&f)? {
            continue;
        }
        checked += 1;
        let report = clr_existence_conditions(&bridge, &f)?;
        if report.cond_ii.holds && report.cond_iii.holds {
            non_extremal_failures.push(f);
        }
    }
    Ok(AdmittingSet {
        description,
        verification: Some(AdmittingCheck {
            extremal_checked: extremal.len(),
            extremal_failures,
            trivial_ok,
            non_extremal_checked: samples,
            non_extremal_failures,
        }),
    })
}

fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rat> {
    (0..d).map(|_| rat(rng.random_range(-8..=8), 8)).collect()
}

/// A random effect `(t, x)`. A third of the draws have `t = ½` and
/// `‖x‖ = ½`, mostly on faces of the ball rather than at its vertices; a
/// third sit elsewhere on the cone boundary `‖x‖ = min(t, 1 − t)`.
fn random_effect(rng: &mut ChaCha8Rng, d: usize, norm: &dyn Fn(&[Rat]) -> Rat) -> Vec<Rat> {
    let kind = rng.random_range(0..3);
    let t = if kind == 0 { rat(1, 2) } else { rat(rng.random_range(1..8), 8) };
    let room = std::cmp::min(t.clone(), Rat::one() - &t);
    let x = random_vec(rng, d);
    let n = norm(&x);
    let x = if n.is_zero() {
        x
    } else {
        let shrink = if kind < 2 { Rat::one() } else { rat(rng.random_range(0..8), 8) };
        rat::scale(&(room * shrink / n), &x)
    };
    let mut f = vec![t];
    f.extend(x);
    f
}
