//! Reports: named results, checked expectations and their rendering as
//! text or as `gpm-report/1` JSON. Both renderings come from the same JSON
//! values, so they carry the same numbers.

use std::time::Duration;

use serde_json::{json, Value as Json};

pub const SCHEMA: &str = "gpm-report/1";

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// A value stated in the published example.
    Published,
    /// Obtained by an independent computation.
    Computed,
    /// Holds by definition or construction.
    Definitional,
    /// Supplied on the command line with `--expect`.
    Requested,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Published => "published",
            Origin::Computed => "computed",
            Origin::Definitional => "definitional",
            Origin::Requested => "requested",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: Json,
    pub actual: Json,
    pub origin: Origin,
    pub certificate: Option<Json>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub results: Vec<(String, Json)>,
    pub checks: Vec<Check>,
    pub runtime: Duration,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), results: Vec::new(), checks: Vec::new(), runtime: Duration::ZERO }
    }

    pub fn result(&mut self, key: impl Into<String>, value: Json) -> &mut Self {
        self.results.push((key.into(), value));
        self
    }

    /// Records an expectation compared by equality of the JSON values.
    pub fn expect_eq(&mut self, name: impl Into<String>, expected: Json, actual: Json, origin: Origin) -> &mut Self {
        let passed = expected == actual;
        self.push_check(name, passed, expected, actual, origin, None)
    }

    pub fn push_check(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        expected: Json,
        actual: Json,
        origin: Origin,
        certificate: Option<Json>,
    ) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, expected, actual, origin, certificate });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Json {
        let results: serde_json::Map<String, Json> = self.results.iter().cloned().collect();
        json!({
            "schema": SCHEMA,
            "title": self.title,
            "results": results,
            "checks": self.checks.iter().map(|c| {
                let mut o = json!({
                    "name": c.name,
                    "passed": c.passed,
                    "expected": c.expected,
                    "actual": c.actual,
                    "origin": c.origin.name(),
                });
                if let Some(cert) = &c.certificate {
                    o["certificate"] = cert.clone();
                }
                o
            }).collect::<Vec<_>>(),
            "passed": self.passed(),
            "runtime_ms": runtime_ms(self.runtime),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for (k, v) in &self.results {
            out.push_str(&format!("{k}: {}\n", render(v)));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}: expected {}, got {} ({})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                render(&c.expected),
                render(&c.actual),
                c.origin.name()
            ));
            if let Some(cert) = &c.certificate {
                out.push_str(&format!("       certificate: {}\n", render(cert)));
            }
        }
        out.push_str(&format!(
            "result: {} ({} checks, runtime_ms {})\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            render(&runtime_ms(self.runtime))
        ));
        out
    }
}

fn runtime_ms(d: Duration) -> Json {
    json!((d.as_secs_f64() * 1e6).round() / 1e3)
}

/// Compact text form of a JSON value: strings unquoted, numbers as JSON
/// prints them.
pub fn render(v: &Json) -> String {
    match v {
        Json::Null => "-".into(),
        Json::Bool(b) => b.to_string(),
        Json::Number(n) => n.to_string(),
        Json::String(s) => s.clone(),
        Json::Array(items) => format!("[{}]", items.iter().map(render).collect::<Vec<_>>().join(", ")),
        Json::Object(o) => format!(
            "{{{}}}",
            o.iter().map(|(k, v)| format!("{k}: {}", render(v))).collect::<Vec<_>>().join(", ")
        ),
    }
}

/// Several reports under one envelope, for `reproduce all`.
pub fn bundle_json(reports: &[Report]) -> Json {
    json!({
        "schema": SCHEMA,
        "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
        "passed": reports.iter().all(Report::passed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree_on_values() {
        let mut r = Report::new("demo");
        r.result("value", json!("1/2"));
        r.expect_eq("value is one half", json!("1/2"), json!("1/2"), Origin::Published);
        r.expect_eq("count", json!(3), json!(4), Origin::Computed);
        assert!(!r.passed());
        let text = r.to_text();
        assert!(text.contains("value: 1/2"));
        assert!(text.contains("[FAIL] count: expected 3, got 4 (computed)"));
        assert_eq!(r.to_json()["checks"][0]["origin"], "published");
        assert_eq!(r.to_json()["schema"], SCHEMA);
    }

    #[test]
    fn render_nested() {
        assert_eq!(render(&json!([["1", 2], {"a": 1.5}])), "[[1, 2], {a: 1.5}]");
    }
}
