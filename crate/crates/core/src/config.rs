//! The JSON configuration format for systems of similitudes.
//!
//! ```json
//! {
//!   "maps": [
//!     { "ratio": 0.5,
//!       "angle": { "kind": "rational_pi", "num": 0, "den": 1 },
//!       "anchor": { "kind": "center", "x": 0.0, "y": 0.0 } }
//!   ],
//!   "defaults": { "tol": 1e-9, "depth": 6, "min_side_length": 1e-4 }
//! }
//! ```
//!
//! An angle is either `{"kind": "rational_pi", "num", "den"}` (the exact
//! angle `num/den·π`) or `{"kind": "radians", "value"}`. An anchor is either
//! the fixed point (`"center"`, giving `z ↦ r·e^{iα}(z − c) + c`) or the
//! translation part (`"offset"`, giving `z ↦ r·e^{iα}z + b`).

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::similitude::{Angle, IfsSystem, Similitude};
use crate::{Error, Point, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigIssue {
    /// Field path such as `maps[0].ratio`.
    pub path: String,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngleSpec {
    RationalPi { num: i64, den: i64 },
    Radians { value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnchorSpec {
    Center { x: f64, y: f64 },
    Offset { x: f64, y: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub ratio: f64,
    pub angle: AngleSpec,
    pub anchor: AnchorSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDefaults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_side_length: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsConfig {
    pub maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub defaults: AnalysisDefaults,
}

fn is_default(d: &AnalysisDefaults) -> bool {
    *d == AnalysisDefaults::default()
}

impl IfsConfig {
    pub fn to_system(&self) -> Result<IfsSystem> {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.to_similitude().map_err(|e| {
                    Error::Config(vec![ConfigIssue {
                        path: format!("maps[{i}]"),
                        message: e.to_string(),
                    }])
                })
            })
            .collect::<Result<Vec<_>>>()?;
        IfsSystem::new(maps)
    }

    /// Config for `sys`, with offset anchors and exact angles kept exact.
    pub fn from_system(sys: &IfsSystem) -> Self {
        let maps = sys
            .maps()
            .iter()
            .map(|m| {
                let angle = match m.angle().as_pi_multiple() {
                    Some(r) => AngleSpec::RationalPi {
                        num: *r.numer(),
                        den: *r.denom(),
                    },
                    None => AngleSpec::Radians {
                        value: m.angle().to_radians(),
                    },
                };
                let b = m.offset();
                MapSpec {
                    ratio: m.ratio(),
                    angle,
                    anchor: AnchorSpec::Offset { x: b.x, y: b.y },
                }
            })
            .collect();
        Self {
            maps,
            defaults: AnalysisDefaults::default(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

impl MapSpec {
    pub fn to_similitude(&self) -> Result<Similitude> {
        let angle = match self.angle {
            AngleSpec::RationalPi { num, den } => Angle::pi_fraction(num, den)?,
            AngleSpec::Radians { value } => Angle::radians(value)?,
        };
        match self.anchor {
            AnchorSpec::Center { x, y } => {
                Similitude::from_center(self.ratio, angle, Point::new(x, y))
            }
            AnchorSpec::Offset { x, y } => {
                Similitude::from_offset(self.ratio, angle, Point::new(x, y))
            }
        }
    }
}

/// Parses and validates a config, collecting every problem with its field path.
pub fn parse_config(text: &str) -> Result<IfsConfig> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        Error::Config(vec![ConfigIssue {
            path: "$".into(),
            message: format!("malformed JSON: {e}"),
        }])
    })?;
    let mut v = Validator::default();
    let cfg = v.config(&root);
    match cfg {
        Some(cfg) if v.issues.is_empty() => Ok(cfg),
        _ => Err(Error::Config(v.issues)),
    }
}

/// Convenience: parse and build the system.
pub fn parse_system(text: &str) -> Result<IfsSystem> {
    parse_config(text)?.to_system()
}

#[derive(Default)]
struct Validator {
    issues: Vec<ConfigIssue>,
}

impl Validator {
    fn issue(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(ConfigIssue {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Map<String, Value>> {
        let o = v.as_object();
        if o.is_none() {
            self.issue(path, "expected an object");
        }
        o
    }

    fn field<'a>(&mut self, o: &'a Map<String, Value>, key: &str, path: &str) -> Option<&'a Value> {
        let f = o.get(key);
        if f.is_none() {
            self.issue(&format!("{path}.{key}"), "missing field");
        }
        f
    }

    fn number(&mut self, o: &Map<String, Value>, key: &str, path: &str) -> Option<f64> {
        let v = self.field(o, key, path)?;
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.issue(
                    &format!("{path}.{key}"),
                    format!("expected a finite number, got {v}"),
                );
                None
            }
        }
    }

    fn integer(&mut self, o: &Map<String, Value>, key: &str, path: &str) -> Option<i64> {
        let v = self.field(o, key, path)?;
        let x = v.as_i64();
        if x.is_none() {
            self.issue(
                &format!("{path}.{key}"),
                format!("expected an integer, got {v}"),
            );
        }
        x
    }

    fn unknown_keys(&mut self, o: &Map<String, Value>, allowed: &[&str], path: &str) {
        for k in o.keys() {
            if !allowed.contains(&k.as_str()) {
                self.issue(&format!("{path}.{k}"), "unknown field");
            }
        }
    }

    fn config(&mut self, root: &Value) -> Option<IfsConfig> {
        let o = self.object(root, "$")?;
        self.unknown_keys(o, &["maps", "defaults"], "$");
        let defaults = match o.get("defaults") {
            Some(d) => self.defaults(d),
            None => AnalysisDefaults::default(),
        };
        let maps = match self.field(o, "maps", "$")?.as_array() {
            Some(a) if a.is_empty() => {
                self.issue("maps", "at least one map is required");
                return None;
            }
            Some(a) => a,
            None => {
                self.issue("maps", "expected an array");
                return None;
            }
        };
        let specs: Vec<Option<MapSpec>> = maps
            .iter()
            .enumerate()
            .map(|(i, m)| self.map(m, &format!("maps[{i}]")))
            .collect();
        let maps = specs.into_iter().collect::<Option<Vec<_>>>()?;
        Some(IfsConfig { maps, defaults })
    }

    fn defaults(&mut self, v: &Value) -> AnalysisDefaults {
        let path = "defaults";
        let Some(o) = self.object(v, path) else {
            return AnalysisDefaults::default();
        };
        self.unknown_keys(o, &["tol", "depth", "min_side_length"], path);
        let mut d = AnalysisDefaults::default();
        if o.contains_key("tol") {
            d.tol = self.number(o, "tol", path);
            if d.tol.is_some_and(|t| t <= 0.0) {
                self.issue("defaults.tol", "must be positive");
            }
        }
        if o.contains_key("depth") {
            d.depth = self.integer(o, "depth", path).and_then(|x| {
                if x < 1 {
                    self.issue("defaults.depth", "must be at least 1");
                    None
                } else {
                    Some(x as usize)
                }
            });
        }
        if o.contains_key("min_side_length") {
            d.min_side_length = self.number(o, "min_side_length", path);
            if d.min_side_length.is_some_and(|t| t <= 0.0) {
                self.issue("defaults.min_side_length", "must be positive");
            }
        }
        d
    }

    fn map(&mut self, v: &Value, path: &str) -> Option<MapSpec> {
        let o = self.object(v, path)?;
        self.unknown_keys(o, &["ratio", "angle", "anchor"], path);
        let ratio = self.number(o, "ratio", path);
        if let Some(r) = ratio {
            if !(r > 0.0 && r < 1.0) {
                self.issue(
                    &format!("{path}.ratio"),
                    format!("must lie in (0, 1), got {r}"),
                );
            }
        }
        let angle = self
            .field(o, "angle", path)
            .and_then(|a| self.angle(a, &format!("{path}.angle")));
        let anchor = self
            .field(o, "anchor", path)
            .and_then(|a| self.anchor(a, &format!("{path}.anchor")));
        Some(MapSpec {
            ratio: ratio.filter(|r| *r > 0.0 && *r < 1.0)?,
            angle: angle?,
            anchor: anchor?,
        })
    }

    fn kind<'a>(&mut self, o: &'a Map<String, Value>, path: &str) -> Option<&'a str> {
        let k = self.field(o, "kind", path)?;
        let s = k.as_str();
        if s.is_none() {
            self.issue(&format!("{path}.kind"), "expected a string");
        }
        s
    }

    fn angle(&mut self, v: &Value, path: &str) -> Option<AngleSpec> {
        let o = self.object(v, path)?;
        match self.kind(o, path)? {
            "rational_pi" => {
                self.unknown_keys(o, &["kind", "num", "den"], path);
                let num = self.integer(o, "num", path);
                let den = self.integer(o, "den", path);
                if den.is_some_and(|d| d <= 0) {
                    self.issue(&format!("{path}.den"), "denominator must be positive");
                    return None;
                }
                Some(AngleSpec::RationalPi {
                    num: num?,
                    den: den?,
                })
            }
            "radians" => {
                self.unknown_keys(o, &["kind", "value"], path);
                Some(AngleSpec::Radians {
                    value: self.number(o, "value", path)?,
                })
            }
            other => {
                self.issue(
                    &format!("{path}.kind"),
                    format!("expected \"rational_pi\" or \"radians\", got \"{other}\""),
                );
                None
            }
        }
    }

    fn anchor(&mut self, v: &Value, path: &str) -> Option<AnchorSpec> {
        let o = self.object(v, path)?;
        let kind = self.kind(o, path)?;
        if kind != "center" && kind != "offset" {
            self.issue(
                &format!("{path}.kind"),
                format!("expected \"center\" or \"offset\", got \"{kind}\""),
            );
            return None;
        }
        self.unknown_keys(o, &["kind", "x", "y"], path);
        let x = self.number(o, "x", path);
        let y = self.number(o, "y", path);
        let (x, y) = (x?, y?);
        Some(if kind == "center" {
            AnchorSpec::Center { x, y }
        } else {
            AnchorSpec::Offset { x, y }
        })
    }
}
