//! Problem files.
//!
//! The text format is line oriented. `#` starts a comment, `[name]` opens a
//! section, and every other nonblank line belongs to the open section:
//!
//! ```text
//! file        = { line } ;
//! line        = blank | comment | header | entry ;
//! header      = "[" ( "problem" | "ideal" | "map" | "domain" | "orbit" | "options" ) "]" ;
//! problem     = key "=" value ;            (* name, mode, base, fiber, tags *)
//! ideal       = poly { "," poly } ;
//! map         = var "=" rational_expr ;
//! domain      = closed { "\" closed } ;    (* one locally closed member per line *)
//! closed      = "V(" [ poly { "," poly } ] ")" ;
//! orbit       = key "=" value              (* point_vars, group, identity, point, injective *)
//!             | "translation" label "=" poly { "," poly }
//!             | "inverse" label "=" poly { "," poly } ;
//! options     = key "=" value ;            (* strategy, iteration, seed, hyperplane_budget,
//!                                             hyperplanes, saturate_graph, oracle, samples *)
//! ```
//!
//! The same structure is accepted as JSON (any file whose first nonblank
//! character is `{`), with field names as in [`ProblemSpec`].

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::chevalley::{Iteration, Strategy};
use crate::error::{Error, Result};
use crate::polyring::parse::split_top_level;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Project `V(ideal)` to the base.
    #[default]
    Projection,
    /// Image of a polynomial or rational map from the fiber space to the base.
    Map,
    /// One group orbit.
    Orbit,
    /// Several orbits and their closure order.
    Stratification,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Projection => "projection",
            Mode::Map => "map",
            Mode::Orbit => "orbit",
            Mode::Stratification => "stratification",
        }
    }
}

/// `target = expr`, where `expr` may be a quotient of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapComponent {
    pub target: String,
    pub expr: String,
}

/// `V(equations) \ V(removed[0]) \ V(removed[1]) …`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainMember {
    pub equations: Vec<String>,
    pub removed: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TranslationSpec {
    pub label: String,
    pub map: Vec<String>,
    pub inverse: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitSpec {
    /// Names standing for the coordinates of the point `y` inside the action
    /// formulas; replaced by each point before solving.
    pub point_vars: Vec<String>,
    /// Equations of the group among the fiber variables.
    pub group: Vec<String>,
    pub identity: Vec<String>,
    pub points: Vec<Vec<String>>,
    pub injective: bool,
    pub translations: Vec<TranslationSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpecOptions {
    pub strategy: Option<Strategy>,
    pub iteration: Option<Iteration>,
    pub seed: Option<u64>,
    pub hyperplane_budget: Option<usize>,
    pub hyperplanes: Vec<String>,
    pub saturate_graph: bool,
    pub oracle: Vec<u64>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    pub mode: Mode,
    pub base: Vec<String>,
    pub fiber: Vec<String>,
    /// Free-form labels; the corpus runner skips `slow` entries unless asked.
    pub tags: Vec<String>,
    pub ideal: Vec<String>,
    pub map: Vec<MapComponent>,
    pub domain: Vec<DomainMember>,
    pub orbit: Option<OrbitSpec>,
    pub options: SpecOptions,
}

impl ProblemSpec {
    /// Parses either format.
    pub fn parse(src: &str) -> Result<Self> {
        if src.trim_start().starts_with('{') {
            Self::from_json(src)
        } else {
            Self::from_text(src)
        }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_text(src: &str) -> Result<Self> {
        let mut spec = ProblemSpec::default();
        let mut section = "problem".to_string();
        let mut offset = 0;
        for (lineno, raw) in src.split('\n').enumerate() {
            let at = offset;
            offset += raw.len() + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::parse(at, format!("line {}: {msg}", lineno + 1));
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated section header".into()))?
                    .trim();
                if !["problem", "ideal", "map", "domain", "orbit", "options"].contains(&name) {
                    return Err(err(format!("unknown section `{name}`")));
                }
                if name == "orbit" && spec.orbit.is_none() {
                    spec.orbit = Some(OrbitSpec::default());
                }
                section = name.to_string();
                continue;
            }
            match section.as_str() {
                "ideal" => spec.ideal.extend(list(line)),
                "domain" => spec.domain.push(parse_member(line).map_err(err)?),
                "map" => {
                    let (k, v) = key_value(line).ok_or_else(|| err("expected `var = expression`".into()))?;
                    spec.map.push(MapComponent { target: k.to_string(), expr: v.to_string() });
                }
                "problem" => {
                    let (k, v) = key_value(line).ok_or_else(|| err("expected `key = value`".into()))?;
                    match k {
                        "name" => spec.name = v.to_string(),
                        "mode" => spec.mode = parse_enum(v).map_err(err)?,
                        "base" => spec.base = list(v),
                        "fiber" => spec.fiber = list(v),
                        "tags" => spec.tags = list(v),
                        _ => return Err(err(format!("unknown key `{k}`"))),
                    }
                }
                "orbit" => {
                    let orbit = spec.orbit.get_or_insert_with(OrbitSpec::default);
                    let (k, v) = key_value(line).ok_or_else(|| err("expected `key = value`".into()))?;
                    if let Some(label) = k.strip_prefix("translation ") {
                        orbit.translations.push(TranslationSpec {
                            label: label.trim().to_string(),
                            map: list(v),
                            inverse: Vec::new(),
                        });
                        continue;
                    }
                    if let Some(label) = k.strip_prefix("inverse ") {
                        let label = label.trim();
                        let t = orbit
                            .translations
                            .iter_mut()
                            .find(|t| t.label == label)
                            .ok_or_else(|| err(format!("inverse for unknown translation `{label}`")))?;
                        t.inverse = list(v);
                        continue;
                    }
                    match k {
                        "point_vars" => orbit.point_vars = list(v),
                        "group" => orbit.group = list(v),
                        "identity" => orbit.identity = list(v),
                        "point" => orbit.points.push(list(v)),
                        "injective" => orbit.injective = parse_bool(v).map_err(err)?,
                        _ => return Err(err(format!("unknown key `{k}`"))),
                    }
                }
                "options" => {
                    let (k, v) = key_value(line).ok_or_else(|| err("expected `key = value`".into()))?;
                    let o = &mut spec.options;
                    match k {
                        "strategy" => o.strategy = Some(parse_enum(v).map_err(err)?),
                        "iteration" => o.iteration = Some(parse_enum(v).map_err(err)?),
                        "seed" => o.seed = Some(parse_num(v).map_err(err)?),
                        "hyperplane_budget" => o.hyperplane_budget = Some(parse_num(v).map_err(err)?),
                        "hyperplanes" => o.hyperplanes = list(v),
                        "saturate_graph" => o.saturate_graph = parse_bool(v).map_err(err)?,
                        "oracle" => {
                            o.oracle = list(v).iter().map(|p| parse_num(p)).collect::<std::result::Result<_, _>>().map_err(err)?
                        }
                        "samples" => o.samples = Some(parse_num(v).map_err(err)?),
                        _ => return Err(err(format!("unknown option `{k}`"))),
                    }
                }
                _ => unreachable!("sections are validated on entry"),
            }
        }
        Ok(spec)
    }

    /// The text form; `from_text(to_text(s)) == s`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "[problem]");
        if !self.name.is_empty() {
            let _ = writeln!(w, "name = {}", self.name);
        }
        let _ = writeln!(w, "mode = {}", self.mode.as_str());
        if !self.base.is_empty() {
            let _ = writeln!(w, "base = {}", self.base.join(", "));
        }
        if !self.fiber.is_empty() {
            let _ = writeln!(w, "fiber = {}", self.fiber.join(", "));
        }
        if !self.tags.is_empty() {
            let _ = writeln!(w, "tags = {}", self.tags.join(", "));
        }
        if !self.ideal.is_empty() {
            let _ = writeln!(w, "\n[ideal]");
            for g in &self.ideal {
                let _ = writeln!(w, "{g}");
            }
        }
        if !self.map.is_empty() {
            let _ = writeln!(w, "\n[map]");
            for c in &self.map {
                let _ = writeln!(w, "{} = {}", c.target, c.expr);
            }
        }
        if !self.domain.is_empty() {
            let _ = writeln!(w, "\n[domain]");
            for m in &self.domain {
                let _ = writeln!(w, "{m}");
            }
        }
        if let Some(o) = &self.orbit {
            let _ = writeln!(w, "\n[orbit]");
            if !o.point_vars.is_empty() {
                let _ = writeln!(w, "point_vars = {}", o.point_vars.join(", "));
            }
            if !o.group.is_empty() {
                let _ = writeln!(w, "group = {}", o.group.join(", "));
            }
            if !o.identity.is_empty() {
                let _ = writeln!(w, "identity = {}", o.identity.join(", "));
            }
            for p in &o.points {
                let _ = writeln!(w, "point = {}", p.join(", "));
            }
            if o.injective {
                let _ = writeln!(w, "injective = true");
            }
            for t in &o.translations {
                let _ = writeln!(w, "translation {} = {}", t.label, t.map.join(", "));
                if !t.inverse.is_empty() {
                    let _ = writeln!(w, "inverse {} = {}", t.label, t.inverse.join(", "));
                }
            }
        }
        let o = &self.options;
        if *o != SpecOptions::default() {
            let _ = writeln!(w, "\n[options]");
            if let Some(s) = o.strategy {
                let _ = writeln!(w, "strategy = {}", enum_str(&s));
            }
            if let Some(i) = o.iteration {
                let _ = writeln!(w, "iteration = {}", enum_str(&i));
            }
            if let Some(s) = o.seed {
                let _ = writeln!(w, "seed = {s}");
            }
            if let Some(b) = o.hyperplane_budget {
                let _ = writeln!(w, "hyperplane_budget = {b}");
            }
            if !o.hyperplanes.is_empty() {
                let _ = writeln!(w, "hyperplanes = {}", o.hyperplanes.join(", "));
            }
            if o.saturate_graph {
                let _ = writeln!(w, "saturate_graph = true");
            }
            if !o.oracle.is_empty() {
                let primes: Vec<String> = o.oracle.iter().map(|p| p.to_string()).collect();
                let _ = writeln!(w, "oracle = {}", primes.join(", "));
            }
            if let Some(s) = o.samples {
                let _ = writeln!(w, "samples = {s}");
            }
        }
        out
    }
}

impl fmt::Display for DomainMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V({})", self.equations.join(", "))?;
        for r in &self.removed {
            write!(f, " \\ V({})", r.join(", "))?;
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

fn key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once('=')?;
    let k = k.trim();
    (!k.is_empty()).then_some((k, v.trim()))
}

fn list(v: &str) -> Vec<String> {
    split_top_level(v)
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_member(line: &str) -> std::result::Result<DomainMember, String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in line.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '\\' if depth == 0 => {
                parts.push(&line[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&line[start..]);
    let mut sets = parts.into_iter().map(|p| {
        let p = p.trim();
        p.strip_prefix("V(")
            .and_then(|r| r.strip_suffix(')'))
            .map(list)
            .ok_or_else(|| format!("expected `V(...)`, found `{p}`"))
    });
    let equations = sets.next().expect("split yields at least one part")?;
    let removed = sets.collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(DomainMember { equations, removed })
}

fn parse_enum<T: for<'de> Deserialize<'de>>(v: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(v.to_string())).map_err(|_| format!("invalid value `{v}`"))
}

fn enum_str<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => unreachable!("unit enums serialize to strings"),
    }
}

fn parse_num<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    v.trim().parse().map_err(|_| format!("invalid number `{v}`"))
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("invalid boolean `{v}`")),
    }
}
