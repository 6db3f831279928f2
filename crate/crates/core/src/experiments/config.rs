//! Flat `key = value` configuration files with `#` comments.

use std::collections::BTreeMap;

use super::{ExperimentError, Result};
use crate::analysis::GridSpec;
use crate::geometry::{DomainSpec, OuterShape, Point};

/// Parsed `key = value` pairs, remembering the line of each key.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

fn config_error(line: usize, message: impl Into<String>) -> ExperimentError {
    ExperimentError::Config {
        line,
        message: message.into(),
    }
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(i + 1, format!("expected 'key = value', found '{line}'")))?;
            let key = key.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(config_error(i + 1, "empty key"));
            }
            if entries.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(config_error(i + 1, format!("duplicate key '{key}'")));
            }
        }
        Ok(Self { entries })
    }

    /// Fails on any key outside `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, (line, _))) => Err(config_error(*line, format!("unknown key '{k}'"))),
            None => Ok(()),
        }
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.raw(key).ok_or_else(|| config_error(0, format!("missing key '{key}'")))
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|(line, v)| v.parse().map_err(|e: T::Err| config_error(line, format!("{key}: {e}"))))
            .transpose()
    }

    /// Values separated by commas or whitespace.
    pub fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|(line, v)| {
                v.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|e: T::Err| config_error(line, format!("{key}: {e}"))))
                    .collect()
            })
            .transpose()
    }
}

/// Grid for the lemma scans. Keys: `n_values`, `ratio_values`, `r_samples`,
/// `t_samples`; missing keys keep their defaults, an empty list is an error.
pub fn parse_grid_config(text: &str) -> Result<GridSpec> {
    let kv = KeyValues::parse(text)?;
    kv.only(&["n_values", "ratio_values", "r_samples", "t_samples"])?;
    let mut grid = GridSpec::default();
    if let Some(n) = kv.list("n_values")? {
        grid.n_values = n;
    }
    if let Some(l) = kv.list("ratio_values")? {
        grid.ratio_values = l;
    }
    if let Some(r) = kv.parsed("r_samples")? {
        grid.r_samples = r;
    }
    if let Some(t) = kv.parsed("t_samples")? {
        grid.t_samples = t;
    }
    grid.validate()?;
    Ok(grid)
}

/// `disk R`, `ellipse a b` or `rectangle w h`.
pub fn parse_outer(line: usize, value: &str) -> Result<OuterShape> {
    let mut parts = value.split_whitespace();
    let kind = parts.next().unwrap_or("").to_ascii_lowercase();
    let nums: Vec<f64> = parts
        .map(|s| s.parse().map_err(|e| config_error(line, format!("outer: {e}"))))
        .collect::<Result<_>>()?;
    match (kind.as_str(), nums.as_slice()) {
        ("disk", &[radius]) => Ok(OuterShape::Disk { radius }),
        ("ellipse", &[semi_x, semi_y]) => Ok(OuterShape::Ellipse { semi_x, semi_y }),
        ("rectangle", &[width, height]) => Ok(OuterShape::Rectangle { width, height }),
        _ => Err(config_error(line, format!("cannot read outer shape '{value}'"))),
    }
}

pub fn parse_point(line: usize, value: &str) -> Result<Point> {
    let nums: Vec<f64> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| config_error(line, format!("point '{value}': {e}"))))
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        &[x, y] => Ok([x, y]),
        _ => Err(config_error(line, format!("expected two coordinates, found '{value}'"))),
    }
}

pub(crate) fn outer_of(kv: &KeyValues) -> Result<OuterShape> {
    let (line, v) = kv.required("outer")?;
    parse_outer(line, v)
}

pub(crate) fn point_list(kv: &KeyValues, key: &str) -> Result<Vec<Point>> {
    let (line, v) = kv.required(key)?;
    v.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_point(line, s)).collect()
}

/// Domain file: JSON (`{"outer": {"shape": "disk", "radius": 5}, ...}`) or
/// keys `outer`, `hole_center` (default `0 0`) and `hole_radius` (default 1).
pub fn parse_domain_spec(text: &str) -> Result<DomainSpec> {
    if text.trim_start().starts_with('{') {
        let spec: DomainSpec = serde_json::from_str(text).map_err(|e| config_error(e.line(), e.to_string()))?;
        spec.validate()?;
        return Ok(spec);
    }
    let kv = KeyValues::parse(text)?;
    kv.only(&["outer", "hole_center", "hole_radius"])?;
    let center = match kv.raw("hole_center") {
        Some((line, v)) => parse_point(line, v)?,
        None => [0.0, 0.0],
    };
    let radius = kv.parsed("hole_radius")?.unwrap_or(1.0);
    Ok(DomainSpec::new(outer_of(&kv)?, center, radius)?)
}
