//! Command-line inputs: catalog names, inline JSON or `@file` references.

use std::fs;

use gpm_core::catalog::{self, CatalogEntry};
use gpm_core::json;
use gpm_core::maps::PositiveMap;
use gpm_core::nslit::SlitModel;
use gpm_core::{AouSpace, Element};
use serde_json::Value as Json;

use crate::CliError;

/// A model with its catalog entry when it was given by name.
pub struct Model {
    pub space: AouSpace,
    pub entry: Option<CatalogEntry>,
}

impl Model {
    pub fn name(&self) -> String {
        match &self.entry {
            Some(e) => e.name.clone(),
            None => self.space.describe(),
        }
    }
}

/// The argument itself, or the contents of the file after `@`.
pub fn text(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_json(s: &str) -> Result<Json, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))
}

fn looks_like_json(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('{' | '['))
}

pub fn model(arg: &str) -> Result<Model, CliError> {
    let s = text(arg)?;
    if looks_like_json(&s) {
        let space = json::parse_model(&parse_json(&s)?).map_err(CliError::Input)?;
        Ok(Model { space, entry: None })
    } else {
        let entry = catalog::build(s.trim()).map_err(CliError::Input)?;
        Ok(Model { space: entry.space.clone(), entry: Some(entry) })
    }
}

/// JSON coordinates, or an alias expression such as `e-a1-a2` for
/// catalog models.
pub fn element(m: &Model, arg: &str) -> Result<Element, CliError> {
    let s = text(arg)?;
    if looks_like_json(&s) {
        return json::parse_element(&m.space, &parse_json(&s)?).map_err(CliError::Input);
    }
    match &m.entry {
        Some(entry) => entry.element(&s).map_err(CliError::Input),
        None => Err(CliError::Usage(format!("`{s}` is not JSON and the model has no aliases"))),
    }
}

pub fn state(m: &Model, arg: &str) -> Result<Element, CliError> {
    json::parse_state(&m.space, &parse_json(&text(arg)?)?).map_err(CliError::Input)
}

pub fn map(m: &Model, arg: &str) -> Result<PositiveMap, CliError> {
    json::parse_map(&m.space, &parse_json(&text(arg)?)?).map_err(CliError::Input)
}

/// A bare JSON vector, such as an update vector `a′`.
pub fn vector(arg: &str) -> Result<Element, CliError> {
    json::parse_vector(&parse_json(&text(arg)?)?).map_err(CliError::Input)
}

/// A slit family as JSON (with `"model"` or the `--model` argument), or one
/// of the built-in families `sqrt-counterexample`, `trislit` and
/// `basis:n`.
pub fn slits(arg: &str, model_arg: Option<&str>) -> Result<SlitModel, CliError> {
    let s = text(arg)?;
    if !looks_like_json(&s) {
        return crate::scenarios::builtin_slits(s.trim());
    }
    let v = parse_json(&s)?;
    let space = match (v.get("model"), model_arg) {
        (Some(m), _) => json::parse_model(m).map_err(CliError::Input)?,
        (None, Some(m)) => model(m)?.space,
        (None, None) => return Err(CliError::Usage("slit JSON needs a `model` field or --model".into())),
    };
    json::parse_slits(&space, &v).map_err(CliError::Input)
}
