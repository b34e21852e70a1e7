//! Schema-1 network description files.
//!
//! Networks are described in a structured-text (TOML) document with a
//! `schema = 1` marker, a `[[mode]]` list, a `[[component]]` array, an
//! `[input]` table and optional `[frequency_grid]`, `external_loss` and
//! `slice_hz` keys. Mode references are by label; angle-valued keys accept
//! either radians or the literal tokens `pi`, `pi/2`, `-pi`, `3pi/2`, ...
//! Frequencies and linewidths are given in Hz (`*_hz` keys) and converted to
//! angular frequencies internally.
//!
//! Example:
//!
//! ```toml
//! schema = 1
//! readout_mode = "fm"
//! external_loss = 0.263
//! slice_hz = 3.75e6
//!
//! [input]
//! mode = "fm"
//! squeeze_db = 15.0
//!
//! [[mode]]
//! name = "fm"
//! order = 0
//!
//! [[mode]]
//! name = "hom"
//! order = 1
//!
//! [frequency_grid]
//! start_hz = 0.0
//! stop_hz = 1.0e7
//! points = 201
//!
//! [[component]]
//! kind = "coupler"
//! epsilon = 0.08
//! modes = ["fm", "hom"]
//!
//! [[component]]
//! kind = "gouy"
//! psi = "pi/2"
//! mode = "hom"
//! sweep = true
//! ```

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::components::Component;
use crate::error::{Error, Result};
use crate::network::{InputSqueeze, ModeDef, NetworkSpec, DEFAULT_SLICE_HZ};
use crate::squeeze_param_from_db;

pub const SCHEMA_VERSION: u32 = 1;

/// Parse an angle given in radians or as a `pi` token: `pi`, `-pi`, `pi/2`,
/// `2pi`, `3pi/4`, ...
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(x);
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    if let Some(idx) = rest.find("pi") {
        let (num_s, tail) = rest.split_at(idx);
        let tail = &tail[2..];
        let num: f64 = if num_s.is_empty() {
            1.0
        } else {
            num_s.parse().map_err(|_| bad_angle(text))?
        };
        let den: f64 = match tail.strip_prefix('/') {
            Some(d) => d.parse().map_err(|_| bad_angle(text))?,
            None if tail.is_empty() => 1.0,
            None => return Err(bad_angle(text)),
        };
        if den == 0.0 {
            return Err(bad_angle(text));
        }
        return Ok(sign * num * PI / den);
    }
    Err(bad_angle(text))
}

fn bad_angle(text: &str) -> Error {
    Error::config(format!(
        "cannot parse angle '{text}' (radians or pi tokens expected)"
    ))
}

/// An angle that deserializes from a number (radians) or a `pi` token.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Angle(pub f64);

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(x) => Ok(Angle(x)),
            Raw::Text(s) => parse_angle(&s).map(Angle).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawMode {
    pub name: String,
    #[serde(default)]
    pub order: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawInput {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squeeze_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<Angle>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawGrid {
    Linear {
        start_hz: f64,
        stop_hz: f64,
        points: usize,
    },
    List {
        list_hz: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RawComponent {
    Coupler {
        epsilon: f64,
        modes: [String; 2],
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
    },
    Phase {
        phi: Angle,
        mode: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
    },
    Gouy {
        psi: Angle,
        mode: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
    },
    Cavity {
        mode: String,
        resonant: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma_hz: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta_hz: Option<f64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
    },
    Loss {
        lambda: f64,
        mode: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
    },
    Squeezer {
        mode: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        squeeze_db: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        angle: Option<Angle>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        sweep: bool,
    },
}

/// The schema-1 document as written on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub schema: u32,
    pub readout_mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub external_loss: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_hz: Option<f64>,
    pub input: RawInput,
    #[serde(rename = "mode")]
    pub modes: Vec<RawMode>,
    #[serde(default, rename = "component")]
    pub components: Vec<RawComponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_grid: Option<RawGrid>,
}

impl NetworkConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: NetworkConfig = toml::from_str(text)
            .map_err(|e| Error::config(format!("cannot parse network file: {e}")))?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::config(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                cfg.schema
            )));
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("network config serializes")
    }

    /// Resolve mode labels, units and defaults into an evaluable network.
    pub fn resolve(&self) -> Result<NetworkSpec> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, m) in self.modes.iter().enumerate() {
            if index.insert(m.name.as_str(), i).is_some() {
                return Err(Error::config(format!("duplicate mode label '{}'", m.name)));
            }
        }
        let lookup = |label: &str| -> Result<usize> {
            index
                .get(label)
                .copied()
                .ok_or_else(|| Error::config(format!("unknown mode label '{label}'")))
        };

        let mut components = Vec::with_capacity(self.components.len());
        let mut sweep_component = None;
        for (i, rc) in self.components.iter().enumerate() {
            let (component, sweep) = match rc {
                RawComponent::Coupler {
                    epsilon,
                    modes,
                    sweep,
                } => (
                    Component::Coupler {
                        epsilon: *epsilon,
                        modes: (lookup(&modes[0])?, lookup(&modes[1])?),
                    },
                    *sweep,
                ),
                RawComponent::Phase { phi, mode, sweep } => (
                    Component::Phase {
                        phi: phi.0,
                        mode: lookup(mode)?,
                    },
                    *sweep,
                ),
                RawComponent::Gouy { psi, mode, sweep } => {
                    let mode_idx = lookup(mode)?;
                    (
                        Component::Gouy {
                            psi: psi.0,
                            mode_order: self.modes[mode_idx].order,
                            mode: mode_idx,
                        },
                        *sweep,
                    )
                }
                RawComponent::Cavity {
                    mode,
                    resonant,
                    gamma_hz,
                    delta_hz,
                    sweep,
                } => {
                    let gamma_hz = gamma_hz.ok_or_else(|| {
                        Error::config(format!("component {i}: cavity needs an explicit gamma_hz"))
                    })?;
                    let delta_hz = if *resonant {
                        delta_hz.ok_or_else(|| {
                            Error::config(format!(
                                "component {i}: resonant cavity needs an explicit delta_hz"
                            ))
                        })?
                    } else {
                        delta_hz.unwrap_or(0.0)
                    };
                    (
                        Component::Cavity {
                            delta: 2.0 * PI * delta_hz,
                            gamma: 2.0 * PI * gamma_hz,
                            mode: lookup(mode)?,
                            resonant: *resonant,
                        },
                        *sweep,
                    )
                }
                RawComponent::Loss {
                    lambda,
                    mode,
                    sweep,
                } => (
                    Component::Loss {
                        lambda: *lambda,
                        mode: lookup(mode)?,
                    },
                    *sweep,
                ),
                RawComponent::Squeezer {
                    mode,
                    r,
                    squeeze_db,
                    angle,
                    sweep,
                } => (
                    Component::Squeezer {
                        r: resolve_squeeze(*r, *squeeze_db)
                            .map_err(|e| Error::config(format!("component {i}: {e}")))?,
                        angle: angle.map_or(0.0, |a| a.0),
                        mode: lookup(mode)?,
                    },
                    *sweep,
                ),
            };
            if sweep {
                if sweep_component.is_some() {
                    return Err(Error::config("more than one component marked sweep = true"));
                }
                sweep_component = Some(i);
            }
            components.push(component);
        }

        let frequency_grid = match &self.frequency_grid {
            None => crate::network::default_frequency_grid(),
            Some(RawGrid::List { list_hz }) => {
                if list_hz.is_empty() {
                    return Err(Error::config("frequency_grid list is empty"));
                }
                list_hz.iter().map(|f| 2.0 * PI * f).collect()
            }
            Some(RawGrid::Linear {
                start_hz,
                stop_hz,
                points,
            }) => {
                if *points < 2 || stop_hz <= start_hz {
                    return Err(Error::config(
                        "frequency_grid needs points >= 2 and stop > start",
                    ));
                }
                (0..*points)
                    .map(|i| {
                        2.0 * PI
                            * (start_hz + (stop_hz - start_hz) * i as f64 / (*points - 1) as f64)
                    })
                    .collect()
            }
        };

        let spec = NetworkSpec {
            modes: self
                .modes
                .iter()
                .map(|m| ModeDef {
                    label: m.name.clone(),
                    order: m.order,
                })
                .collect(),
            components,
            readout_mode: lookup(&self.readout_mode)?,
            input: InputSqueeze {
                mode: lookup(&self.input.mode)?,
                r: resolve_squeeze(self.input.r, self.input.squeeze_db)?,
                angle: self.input.angle.map_or(0.0, |a| a.0),
            },
            external_loss: self.external_loss.unwrap_or(0.0),
            frequency_grid,
            slice_omega: 2.0 * PI * self.slice_hz.unwrap_or(DEFAULT_SLICE_HZ),
            sweep_component,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn resolve_squeeze(r: Option<f64>, squeeze_db: Option<f64>) -> Result<f64> {
    match (r, squeeze_db) {
        (Some(r), None) => Ok(r),
        (None, Some(db)) => Ok(squeeze_param_from_db(db)),
        (None, None) => Err(Error::config("either r or squeeze_db must be given")),
        (Some(_), Some(_)) => Err(Error::config("give r or squeeze_db, not both")),
    }
}

/// Load, apply `key=value` overrides, and resolve a network file.
pub fn load_network(
    text: &str,
    overrides: &[(String, String)],
) -> Result<(NetworkConfig, NetworkSpec)> {
    let cfg = if overrides.is_empty() {
        NetworkConfig::from_toml_str(text)?
    } else {
        let value: toml::Value = toml::from_str(text)
            .map_err(|e| Error::config(format!("cannot parse network file: {e}")))?;
        let value = apply_overrides(value, overrides)?;
        let text = toml::to_string(&value).map_err(|e| Error::config(e.to_string()))?;
        NetworkConfig::from_toml_str(&text)?
    };
    let spec = cfg.resolve()?;
    Ok((cfg, spec))
}

/// Apply dotted-path overrides (`external_loss=0.1`, `input.squeeze_db=12`,
/// `component.1.phi=pi/2`) to a parsed TOML document. Paths must reference
/// existing keys.
pub fn apply_overrides(
    mut value: toml::Value,
    overrides: &[(String, String)],
) -> Result<toml::Value> {
    for (path, raw) in overrides {
        let mut cursor = &mut value;
        let segments: Vec<&str> = path.split('.').collect();
        for (i, seg) in segments.iter().enumerate() {
            let last = i + 1 == segments.len();
            if last {
                set_leaf(cursor, seg, raw, path)?;
            } else {
                cursor = descend(cursor, seg, path)?;
            }
        }
    }
    Ok(value)
}

fn descend<'a>(value: &'a mut toml::Value, seg: &str, path: &str) -> Result<&'a mut toml::Value> {
    if let Ok(idx) = seg.parse::<usize>() {
        value
            .as_array_mut()
            .and_then(|a| a.get_mut(idx))
            .ok_or_else(|| Error::config(format!("override '{path}': no element '{seg}'")))
    } else {
        value
            .as_table_mut()
            .and_then(|t| t.get_mut(seg))
            .ok_or_else(|| Error::config(format!("override '{path}': no key '{seg}'")))
    }
}

fn set_leaf(value: &mut toml::Value, seg: &str, raw: &str, path: &str) -> Result<()> {
    let table = value
        .as_table_mut()
        .ok_or_else(|| Error::config(format!("override '{path}': parent is not a table")))?;
    if !table.contains_key(seg) {
        return Err(Error::config(format!("override '{path}': no key '{seg}'")));
    }
    table.insert(seg.to_string(), parse_override_value(raw));
    Ok(())
}

fn parse_override_value(raw: &str) -> toml::Value {
    if let Ok(b) = raw.parse::<bool>() {
        return toml::Value::Boolean(b);
    }
    if let Ok(i) = raw.parse::<i64>() {
        return toml::Value::Integer(i);
    }
    if let Ok(f) = raw.parse::<f64>() {
        return toml::Value::Float(f);
    }
    toml::Value::String(raw.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const EXAMPLE: &str = r#"
schema = 1
readout_mode = "fm"
external_loss = 0.263
slice_hz = 3.75e6

[input]
mode = "fm"
squeeze_db = 15.0

[[mode]]
name = "fm"
order = 0

[[mode]]
name = "hom"
order = 1

[frequency_grid]
start_hz = 0.0
stop_hz = 1.0e7
points = 11

[[component]]
kind = "coupler"
epsilon = 0.08
modes = ["fm", "hom"]

[[component]]
kind = "gouy"
psi = "pi/2"
mode = "hom"
sweep = true

[[component]]
kind = "cavity"
mode = "fm"
resonant = true
gamma_hz = 15.0e6
delta_hz = 0.0

[[component]]
kind = "coupler"
epsilon = 0.08
modes = ["hom", "fm"]
"#;

    #[test]
    fn parses_and_resolves_the_example() {
        let (cfg, spec) = load_network(EXAMPLE, &[]).unwrap();
        assert_eq!(cfg.schema, 1);
        assert_eq!(spec.n_modes(), 2);
        assert_eq!(spec.readout_mode, 0);
        assert_eq!(spec.sweep_component, Some(1));
        assert_eq!(spec.frequency_grid.len(), 11);
        assert_relative_eq!(spec.slice_omega, 2.0 * PI * 3.75e6);
        assert_relative_eq!(spec.input.r, squeeze_param_from_db(15.0));
        match &spec.components[1] {
            Component::Gouy {
                psi,
                mode_order,
                mode,
            } => {
                assert_relative_eq!(*psi, PI / 2.0);
                assert_eq!(*mode_order, 1);
                assert_eq!(*mode, 1);
            }
            other => panic!("expected gouy, got {other:?}"),
        }
    }

    #[test]
    fn angle_tokens() {
        assert_relative_eq!(parse_angle("pi").unwrap(), PI);
        assert_relative_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_relative_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_relative_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_relative_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_relative_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("two pi").is_err());
        assert!(parse_angle("pi/0").is_err());
    }

    #[test]
    fn unknown_mode_label_is_rejected() {
        let text = EXAMPLE.replace("readout_mode = \"fm\"", "readout_mode = \"nope\"");
        assert!(matches!(load_network(&text, &[]), Err(Error::Config(_))));
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = EXAMPLE.replace("schema = 1", "schema = 2");
        assert!(load_network(&text, &[]).is_err());
    }

    #[test]
    fn resonant_cavity_without_detuning_is_rejected() {
        let text = EXAMPLE.replace("delta_hz = 0.0", "");
        assert!(load_network(&text, &[]).is_err());
    }

    #[test]
    fn overrides_update_existing_keys_only() {
        let ovr = vec![
            ("external_loss".to_string(), "0.1".to_string()),
            ("component.1.psi".to_string(), "pi".to_string()),
        ];
        let (_, spec) = load_network(EXAMPLE, &ovr).unwrap();
        assert_relative_eq!(spec.external_loss, 0.1);
        assert_relative_eq!(spec.swept_value().unwrap(), PI);

        let bad = vec![("no_such_key".to_string(), "1".to_string())];
        assert!(matches!(load_network(EXAMPLE, &bad), Err(Error::Config(_))));
        let bad_idx = vec![("component.9.psi".to_string(), "1".to_string())];
        assert!(matches!(
            load_network(EXAMPLE, &bad_idx),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn round_trips_through_toml() {
        let (cfg, spec) = load_network(EXAMPLE, &[]).unwrap();
        let text = cfg.to_toml_string();
        let (_, spec2) = load_network(&text, &[]).unwrap();
        assert_eq!(spec.components, spec2.components);
        assert_eq!(spec.readout_mode, spec2.readout_mode);
        assert_eq!(spec.frequency_grid, spec2.frequency_grid);
    }
}
