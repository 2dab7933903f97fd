//! File formats.
//!
//! Distributions are stored as JSON `{"n": …, "probs": […]}` or as
//! whitespace-separated text: `n` first, then the `n` probabilities. Text
//! may carry `#` comments. Partitions, hypotheses, mixtures, family specs
//! and learn reports are JSON only.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use flathist_core::families::{generate, generate_mixture, FamilySpec};
use flathist_core::learn::LearnReport;
use flathist_core::{Distribution, FlatHypothesis, IntervalPartition, MixtureSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::target::Target;

/// On-disk encoding of a distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl Format {
    /// Text for `.txt`, JSON otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("txt") => Format::Text,
            _ => Format::Json,
        }
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_json<T: DeserializeOwned>(origin: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::malformed(origin, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&path.display().to_string(), &read_to_string(path)?)
}

/// Compact JSON plus a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

pub fn format_text(p: &Distribution) -> String {
    let mut out = format!("{}\n", p.n());
    for x in p.probs() {
        writeln!(out, "{x}").unwrap();
    }
    out
}

pub fn parse_text(origin: &str, text: &str) -> Result<Distribution> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let n: usize = tokens
        .next()
        .ok_or_else(|| Error::malformed(origin, "empty file"))?
        .parse()
        .map_err(|e| Error::malformed(origin, format_args!("bad domain size: {e}")))?;
    let probs = tokens
        .map(|t| {
            t.parse::<f64>()
                .map_err(|e| Error::malformed(origin, format_args!("bad probability {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if probs.len() != n {
        return Err(Error::malformed(
            origin,
            format_args!("header says {n} points, found {} values", probs.len()),
        ));
    }
    Ok(Distribution::new(probs)?)
}

pub fn format_distribution(p: &Distribution, format: Format) -> String {
    match format {
        Format::Json => to_json(p),
        Format::Text => format_text(p),
    }
}

/// A mixture given by family specs instead of explicit components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyMixture {
    pub components: Vec<FamilySpec>,
    pub weights: Vec<f64>,
}

impl FamilyMixture {
    pub fn build(&self) -> Result<MixtureSpec> {
        Ok(generate_mixture(&self.components, self.weights.clone())?)
    }
}

/// Parses a distribution-like document: text, a distribution, a flat
/// hypothesis, a mixture (explicit or by family specs), a family spec or a
/// learn report (its hypothesis).
pub fn parse_target(origin: &str, text: &str) -> Result<Target> {
    if !text.trim_start().starts_with('{') {
        return Ok(Target::Single(parse_text(origin, text)?));
    }
    let value: serde_json::Value = parse_json(origin, text)?;
    let key = ["probs", "masses", "family", "hypothesis", "components"]
        .into_iter()
        .find(|k| value.get(k).is_some());
    let by_family = value
        .get("components")
        .and_then(|c| c.as_array())
        .and_then(|c| c.first())
        .is_some_and(|c| c.get("family").is_some());
    Ok(match key {
        Some("probs") => Target::Single(decode(origin, value)?),
        Some("masses") => {
            Target::Single(decode::<FlatHypothesis>(origin, value)?.to_distribution())
        }
        Some("family") => Target::Single(generate(&decode::<FamilySpec>(origin, value)?)?),
        Some("hypothesis") => Target::Single(
            decode::<LearnReport>(origin, value)?
                .hypothesis
                .to_distribution(),
        ),
        Some(_) if by_family => Target::Mixture(decode::<FamilyMixture>(origin, value)?.build()?),
        Some(_) => Target::Mixture(decode(origin, value)?),
        None => {
            return Err(Error::malformed(
                origin,
                "not a distribution, hypothesis, mixture, family spec or learn report",
            ))
        }
    })
}

fn decode<T: DeserializeOwned>(origin: &str, value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::malformed(origin, e))
}

pub fn read_target(path: &Path) -> Result<Target> {
    parse_target(&path.display().to_string(), &read_to_string(path)?)
}

pub fn read_partition(path: &Path) -> Result<IntervalPartition> {
    read_json(path)
}
