use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_RANGE_POINTS: usize = 1_000_000;

/// Parses a number or a multiple of `pi`: `0.5`, `pi`, `-pi/4`, `3pi/4`,
/// `3*pi/4`, `2pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim();
    let bad = || {
        Error::config(format!(
            "cannot read `{text}` as a number or multiple of pi"
        ))
    };
    if s.is_empty() {
        return Err(bad());
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (body, None),
    };
    let numerator = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = if coef.is_empty() {
            1.0
        } else {
            coef.parse::<f64>().map_err(|_| bad())?
        };
        c * PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let value = match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            numerator / d
        }
        None => numerator,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(sign * value)
}

/// Parses `v`, `a,b,c`, `{a,b,c}` or `start:stop:step` (inclusive of `stop`
/// up to rounding). Entries may use `pi`.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let s = text.trim();
    let s = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(s);
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::config(format!(
                "range `{text}` must read start:stop:step"
            )));
        }
        let (a, b, h) = (
            parse_angle(parts[0])?,
            parse_angle(parts[1])?,
            parse_angle(parts[2])?,
        );
        if !(h > 0.0) || b < a {
            return Err(Error::config(format!(
                "range `{text}` needs step > 0 and stop >= start"
            )));
        }
        let count = ((b - a) / h + 1e-9).floor() + 1.0;
        if count > MAX_RANGE_POINTS as f64 {
            return Err(Error::config(format!(
                "range `{text}` has more than {MAX_RANGE_POINTS} points"
            )));
        }
        Ok((0..count as usize).map(|i| a + i as f64 * h).collect())
    } else {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(parse_angle)
            .collect()
    }
}

/// Flattens repeated value arguments: each may itself be a list or range.
pub fn parse_value_args(args: &[String]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for a in args {
        out.extend(parse_values(a)?);
    }
    Ok(out)
}

/// Parses `key=value` pairs separated by commas; every key must be one of
/// `allowed`.
pub fn parse_angle_map(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::config(format!("angle `{item}` must read key=value")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(Error::config(format!(
                "unknown angle `{k}`; expected one of {}",
                allowed.join(", ")
            )));
        }
        out.insert(k.to_string(), parse_angle(v)?);
    }
    Ok(out)
}

/// Reads a `key = value` file; blank lines and lines starting with `#` are
/// skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::config(format!(
                "config line {}: expected key = value, got `{line}`",
                i + 1
            ))
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::config(format!("config line {}: empty key", i + 1)));
        }
        out.push((k.to_string(), v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}
