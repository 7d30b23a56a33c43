//! Scenario files and result files.
//!
//! A scenario file is TOML with the sections `grid`, `topography`, `initial`,
//! `boundary`, `sources`, `friction`, `run` and `output`. It may instead start
//! from a built-in scenario:
//!
//! ```toml
//! base = "cascade_single"
//!
//! [overrides]
//! alpha = 5
//!
//! [run]
//! cfl = 0.9
//! ```
//!
//! `overrides` takes the same keys as [`crate::scenarios::build`]; any section
//! present is merged key by key into the base, except that a table whose
//! `type` differs from the base replaces it.

use std::fs;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::scenario::{ModelVariant, RechargePlacement, Scenario};
use crate::scenarios::{self, mm_per_hour};
use crate::trajectory::{RunOutputs, Snapshot};

fn parse_error(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string().trim_end().to_string())
}

fn value_text(key: &str, v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Integer(i) => Ok(i.to_string()),
        Value::Float(f) => Ok(f.to_string()),
        Value::Boolean(b) => Ok(b.to_string()),
        _ => Err(Error::invalid(key, "override values must be scalars")),
    }
}

fn merge(base: &mut Table, patch: Table) {
    for (key, value) in patch {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(old)), Value::Table(new)) => {
                let retyped = new.get("type").is_some_and(|t| old.get("type") != Some(t));
                if retyped {
                    *old = new;
                } else {
                    merge(old, new);
                }
            }
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

/// Parses a scenario file, applying `extra` overrides after those in the file.
pub fn parse_scenario_with(text: &str, extra: &[(String, String)]) -> Result<Scenario> {
    let mut doc: Table = text.parse().map_err(parse_error)?;
    let base = match doc.remove("base") {
        None => None,
        Some(Value::String(name)) => Some(name),
        Some(_) => return Err(Error::invalid("base", "must be a scenario name")),
    };
    let mut overrides = Vec::new();
    match doc.remove("overrides") {
        None => {}
        Some(Value::Table(t)) => {
            for (k, v) in &t {
                overrides.push((k.clone(), value_text(k, v)?));
            }
        }
        Some(_) => return Err(Error::invalid("overrides", "must be a table")),
    }
    overrides.extend(extra.iter().cloned());

    let scenario = match base {
        Some(name) => {
            let built = scenarios::build(&name, &overrides)?;
            let mut table = Table::try_from(&built).map_err(parse_error)?;
            merge(&mut table, doc);
            let merged: Scenario = Value::Table(table).try_into().map_err(parse_error)?;
            merged
        }
        None => {
            let mut s: Scenario = Value::Table(doc).try_into().map_err(parse_error)?;
            for (k, v) in &overrides {
                apply_override(&mut s, k, v)?;
            }
            s
        }
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    parse_scenario_with(text, &[])
}

pub fn serialize_scenario(s: &Scenario) -> Result<String> {
    toml::to_string(s).map_err(parse_error)
}

fn number(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::invalid(key, format!("expected a finite number, got `{value}`")))
}

/// Applies one `key = value` override to a fully specified scenario.
///
/// Rain overrides act on every rain box; `rain_duration` keeps each box's start.
pub fn apply_override(s: &mut Scenario, key: &str, value: &str) -> Result<()> {
    match key {
        "alpha" => s.friction.alpha = number(key, value)?,
        "kappa_lam" => s.friction.kappa_lam = number(key, value)?,
        "kappa_tur" => s.friction.kappa_tur = number(key, value)?,
        "model" => {
            s.friction.model = match value.trim() {
                "extended" => ModelVariant::Extended,
                "legacy" => ModelVariant::Legacy,
                other => {
                    return Err(Error::invalid(
                        key,
                        format!("expected extended or legacy, got `{other}`"),
                    ))
                }
            }
        }
        "recharge_placement" => {
            s.friction.recharge_placement = match value.trim() {
                "source" => RechargePlacement::Source,
                "potential" => RechargePlacement::Potential,
                other => {
                    return Err(Error::invalid(
                        key,
                        format!("expected source or potential, got `{other}`"),
                    ))
                }
            }
        }
        "cells" => {
            s.grid.cells = value
                .trim()
                .parse()
                .map_err(|_| Error::invalid(key, format!("expected a cell count, got `{value}`")))?
        }
        "final_time" => s.run.final_time = number(key, value)?,
        "cfl" => s.run.cfl = number(key, value)?,
        "gravity" => s.run.gravity = number(key, value)?,
        "h_dry" => s.run.h_dry = number(key, value)?,
        "rain_rate" | "rain_rate_mm_per_hour" => {
            let mut rate = number(key, value)?;
            if key == "rain_rate_mm_per_hour" {
                rate = mm_per_hour(rate);
            }
            s.sources.rain.iter_mut().for_each(|b| b.rate = rate);
        }
        "rain_duration" => {
            let d = number(key, value)?;
            s.sources
                .rain
                .iter_mut()
                .for_each(|b| b.time[1] = b.time[0] + d);
        }
        other => {
            return Err(Error::invalid(
                other,
                format!(
                    "unknown override; expected one of {}",
                    scenarios::OVERRIDE_KEYS.join(", ")
                ),
            ))
        }
    }
    Ok(())
}

/// Resolves `name_or_path`: a built-in name, else a scenario file.
pub fn load_scenario(name_or_path: &str, overrides: &[(String, String)]) -> Result<Scenario> {
    if scenarios::NAMES.contains(&name_or_path) {
        return scenarios::build(name_or_path, overrides);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::UnknownScenario(name_or_path.to_string()));
    }
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario_with(&text, overrides)
}

/// 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_path(path).map_err(csv_error(path))?;
    w.write_record(header).map_err(csv_error(path))?;
    for row in rows {
        w.write_record(&row).map_err(csv_error(path))?;
    }
    w.flush().map_err(io_error(path))
}

/// File name of the snapshot taken at `t`.
pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_{t}.csv")
}

fn snapshot_rows(s: &Snapshot) -> impl Iterator<Item = Vec<String>> + '_ {
    (0..s.x.len()).map(move |i| {
        [
            s.x[i],
            s.z[i],
            s.h[i],
            s.q[i],
            s.u[i],
            s.entropy[i],
            s.head[i],
        ]
        .iter()
        .map(|&v| format_number(v))
        .collect()
    })
}

/// Writes `probes.csv`, `diagnostics.csv` and one `snapshot_<t>.csv` per
/// snapshot into `dir`, creating it if needed. Returns the written paths.
pub fn write_outputs(out: &RunOutputs, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let mut written = Vec::new();

    let path = dir.join("probes.csv");
    write_csv(
        &path,
        &["t", "probe_x", "h", "q", "u"],
        out.probes.iter().map(|p| {
            [p.t, p.x, p.h, p.q, p.u]
                .iter()
                .map(|&v| format_number(v))
                .collect()
        }),
    )?;
    written.push(path);

    for s in &out.snapshots {
        let path = dir.join(snapshot_file_name(s.t));
        write_csv(
            &path,
            &["x", "Z", "h", "q", "u", "E", "psi"],
            snapshot_rows(s),
        )?;
        written.push(path);
    }

    let path = dir.join("diagnostics.csv");
    write_csv(
        &path,
        &[
            "t",
            "dt",
            "total_mass",
            "total_entropy",
            "mass_error",
            "decay_violations",
            "threshold_violations",
            "clamped_cells",
            "clamp_mass",
        ],
        out.diagnostics.iter().map(|d| {
            vec![
                format_number(d.t),
                format_number(d.dt),
                format_number(d.total_mass),
                format_number(d.total_entropy),
                format_number(d.mass_error),
                d.decay_violations.to_string(),
                d.threshold_violations.to_string(),
                d.clamped_cells.to_string(),
                format_number(d.clamp_mass),
            ]
        }),
    )?;
    written.push(path);
    Ok(written)
}
