//! Scenario files: a flat TOML document of physical parameters.
//!
//! ```toml
//! p_t_w = 1.0            # or eirp_product_w = 4 (gains folded in)
//! g_t_dbi = 8.5
//! g_r_dbi = "8.5dBi"
//! f_hz = "1GHz"
//! v_min_v = "100mV"
//! r_r_ohm = 50
//! r_l_ohm = 50
//! area_m2 = "0.04km2"    # or width_m + height_m
//! strategy = "hex_grid"  # square_grid | hex_grid | explicit
//! sources = [[10.0, 10.0], [40.0, 10.0]]
//! node_count = 1000
//! seed = 7
//! ```
//!
//! Numbers are SI. Strings may carry a unit suffix (`GHz`, `MHz`, `kHz`,
//! `Hz`, `W`, `mW`, `dBm`, `dBW`, `V`, `mV`, `uV`, `ohm`, `kohm`, `dBi`,
//! `m`, `km`, `m2`, `km2`), which must match the key's dimension. Every
//! field is optional; absent values fall back to the built-in defaults
//! (1 W, 8.5 dBi per antenna, 1 GHz, 100 mV, 50 + 50 ohm, 4e4 m^2).

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use toml::Value;

use crate::coverage::EventField;
use crate::deployment::{place_sources, Deployment, Grid, NodeField, Point, Strategy};
use crate::link_budget::{max_range, RadioParams};
use crate::quantities::{dbm_to_watts, Area, Frequency, Gain, Length, Power, Resistance, Voltage};
use crate::sweep::{default_radio, Axis, Figure, Series, Spacing, SweepSpec};

pub const DEFAULT_AREA_M2: f64 = 4e4;
pub const DEFAULT_NODE_COUNT: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;

/// Physical dimension a value or unit suffix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dim {
    Power,
    Frequency,
    Voltage,
    Resistance,
    Gain,
    Length,
    Area,
}

impl Dim {
    fn base_suffix(self) -> &'static str {
        match self {
            Dim::Power => "W",
            Dim::Frequency => "Hz",
            Dim::Voltage => "V",
            Dim::Resistance => "ohm",
            Dim::Gain => "dBi",
            Dim::Length => "m",
            Dim::Area => "m2",
        }
    }

    fn name(self) -> &'static str {
        match self {
            Dim::Power => "power",
            Dim::Frequency => "frequency",
            Dim::Voltage => "voltage",
            Dim::Resistance => "resistance",
            Dim::Gain => "gain",
            Dim::Length => "length",
            Dim::Area => "area",
        }
    }
}

enum Conv {
    Scale(f64),
    Dbm,
    Dbw,
}

// longest suffix first so "mV" wins over "V" and "dBm" over "m"
const UNITS: &[(&str, Dim, Conv)] = &[
    ("kohm", Dim::Resistance, Conv::Scale(1e3)),
    ("km2", Dim::Area, Conv::Scale(1e6)),
    ("GHz", Dim::Frequency, Conv::Scale(1e9)),
    ("MHz", Dim::Frequency, Conv::Scale(1e6)),
    ("kHz", Dim::Frequency, Conv::Scale(1e3)),
    ("dBm", Dim::Power, Conv::Dbm),
    ("dBW", Dim::Power, Conv::Dbw),
    ("dBi", Dim::Gain, Conv::Scale(1.0)),
    ("ohm", Dim::Resistance, Conv::Scale(1.0)),
    ("Hz", Dim::Frequency, Conv::Scale(1.0)),
    ("mW", Dim::Power, Conv::Scale(1e-3)),
    ("mV", Dim::Voltage, Conv::Scale(1e-3)),
    ("uV", Dim::Voltage, Conv::Scale(1e-6)),
    ("µV", Dim::Voltage, Conv::Scale(1e-6)),
    ("m2", Dim::Area, Conv::Scale(1.0)),
    ("km", Dim::Length, Conv::Scale(1e3)),
    ("Ω", Dim::Resistance, Conv::Scale(1.0)),
    ("W", Dim::Power, Conv::Scale(1.0)),
    ("V", Dim::Voltage, Conv::Scale(1.0)),
    ("m", Dim::Length, Conv::Scale(1.0)),
];

/// Parses `"<number><suffix>"` into an SI value and the suffix dimension.
/// A bare number has no dimension.
pub fn parse_quantity(text: &str) -> Result<(f64, Option<Dim>), String> {
    let text = text.trim();
    if let Ok(v) = text.parse::<f64>() {
        return Ok((v, None));
    }
    for (suffix, dim, conv) in UNITS {
        let Some(number) = text.strip_suffix(suffix) else {
            continue;
        };
        let Ok(v) = number.trim().parse::<f64>() else {
            continue;
        };
        let si = match conv {
            Conv::Scale(s) => v * s,
            Conv::Dbm => dbm_to_watts(v).map_err(|e| e.to_string())?.as_watts(),
            Conv::Dbw => dbm_to_watts(v + 30.0).map_err(|e| e.to_string())?.as_watts(),
        };
        return Ok((si, Some(*dim)));
    }
    Err(format!("cannot read {text:?} as a number with a unit"))
}

/// Error category of a rejected scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The document is not valid TOML.
    Syntax,
    UnknownKey,
    /// Wrong value type or a unit of the wrong dimension.
    Unit,
    /// A value violates a physical or structural constraint.
    Constraint,
    /// Mutually exclusive keys given together.
    Conflict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub kind: ErrorKind,
    /// Offending key(s), comma separated.
    pub key: String,
    /// 1-based line of the offending key, when known.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Syntax => "syntax error",
            ErrorKind::UnknownKey => "unknown key",
            ErrorKind::Unit => "unit error",
            ErrorKind::Constraint => "constraint violation",
            ErrorKind::Conflict => "conflicting keys",
        };
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "{kind}")?;
        if !self.key.is_empty() {
            write!(f, " [{}]", self.key)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ScenarioError {}

/// How the transmit side of the budget is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerEntry {
    /// Transmit power in watts; gains apply separately.
    Transmit(f64),
    /// `p_t * g_t * g_r` in watts; antenna gains are treated as unity.
    GainProduct(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldEntry {
    Rect { width: f64, height: f64 },
    Area(f64),
}

/// A number optionally tagged with the dimension its unit suffix named.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged {
    pub value: f64,
    pub dim: Option<Dim>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesEntry {
    Scalar(Tagged),
    Pair(Tagged, Tagged),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepEntry {
    pub start: Option<Tagged>,
    pub stop: Option<Tagged>,
    pub points: Option<usize>,
    pub spacing: Option<Spacing>,
    pub series: Option<Vec<SeriesEntry>>,
}

impl SweepEntry {
    fn is_empty(&self) -> bool {
        *self == SweepEntry::default()
    }
}

/// Validated scenario. Every field is optional; accessors resolve defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub power: Option<PowerEntry>,
    pub g_t_dbi: Option<f64>,
    pub g_r_dbi: Option<f64>,
    pub f_hz: Option<f64>,
    pub v_min_v: Option<f64>,
    pub r_r_ohm: Option<f64>,
    pub r_l_ohm: Option<f64>,
    pub field: Option<FieldEntry>,
    pub r_rf_m: Option<f64>,
    pub strategy: Option<Strategy>,
    pub sources: Option<Vec<Point>>,
    pub node_count: Option<usize>,
    pub seed: Option<u64>,
    pub sweep: SweepEntry,
}

const KEYS: &[&str] = &[
    "p_t_w",
    "eirp_product_w",
    "g_t_dbi",
    "g_r_dbi",
    "f_hz",
    "v_min_v",
    "r_r_ohm",
    "r_l_ohm",
    "width_m",
    "height_m",
    "area_m2",
    "r_rf_m",
    "strategy",
    "sources",
    "node_count",
    "seed",
    "sweep_start",
    "sweep_stop",
    "sweep_points",
    "sweep_spacing",
    "sweep_series",
];

fn line_of(src: &str, key: &str) -> Option<usize> {
    src.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .map(|rest| rest.trim_start().starts_with('='))
            .unwrap_or(false)
    })
    .map(|i| i + 1)
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn err(&self, kind: ErrorKind, key: &str, message: impl Into<String>) -> ScenarioError {
        ScenarioError {
            kind,
            key: key.to_string(),
            line: line_of(self.src, key),
            message: message.into(),
        }
    }

    fn tagged(&self, key: &str, v: &Value) -> Result<Tagged, ScenarioError> {
        match v {
            Value::Integer(i) => Ok(Tagged {
                value: *i as f64,
                dim: None,
            }),
            Value::Float(f) => Ok(Tagged {
                value: *f,
                dim: None,
            }),
            Value::String(s) => parse_quantity(s)
                .map(|(value, dim)| Tagged { value, dim })
                .map_err(|m| self.err(ErrorKind::Unit, key, m)),
            other => Err(self.err(
                ErrorKind::Unit,
                key,
                format!("expected a number or a string with a unit, found {}", other.type_str()),
            )),
        }
    }

    /// Value in SI units of `dim`; rejects suffixes of another dimension.
    fn quantity(&self, key: &str, v: &Value, dim: Dim) -> Result<f64, ScenarioError> {
        let t = self.tagged(key, v)?;
        match t.dim {
            Some(d) if d != dim => Err(self.err(
                ErrorKind::Unit,
                key,
                format!("expected a {} unit, found a {} unit", dim.name(), d.name()),
            )),
            _ => {
                if !t.value.is_finite() {
                    return Err(self.err(ErrorKind::Constraint, key, "must be finite"));
                }
                Ok(t.value)
            }
        }
    }

    fn positive(&self, key: &str, v: &Value, dim: Dim) -> Result<f64, ScenarioError> {
        let x = self.quantity(key, v, dim)?;
        if x <= 0.0 {
            return Err(self.err(ErrorKind::Constraint, key, format!("must be positive, got {x}")));
        }
        Ok(x)
    }

    fn integer(&self, key: &str, v: &Value) -> Result<u64, ScenarioError> {
        match v {
            Value::Integer(i) if *i >= 0 => Ok(*i as u64),
            Value::Integer(i) => Err(self.err(
                ErrorKind::Constraint,
                key,
                format!("must be non-negative, got {i}"),
            )),
            Value::String(s) => s
                .trim()
                .parse::<u64>()
                .map_err(|_| self.err(ErrorKind::Unit, key, format!("{s:?} is not an integer"))),
            other => Err(self.err(
                ErrorKind::Unit,
                key,
                format!("expected an integer, found {}", other.type_str()),
            )),
        }
    }

    fn string<'v>(&self, key: &str, v: &'v Value) -> Result<&'v str, ScenarioError> {
        v.as_str().ok_or_else(|| {
            self.err(
                ErrorKind::Unit,
                key,
                format!("expected a string, found {}", v.type_str()),
            )
        })
    }
}

impl Scenario {
    /// Parses and validates a scenario document.
    pub fn parse(src: &str) -> Result<Scenario, ScenarioError> {
        let table: toml::Table = src.parse().map_err(|e: toml::de::Error| {
            let line = e
                .span()
                .map(|s| src[..s.start.min(src.len())].matches('\n').count() + 1);
            ScenarioError {
                kind: ErrorKind::Syntax,
                key: String::new(),
                line,
                message: e.message().to_string(),
            }
        })?;
        let mut scenario = Scenario::default();
        let ctx = Ctx { src };

        if table.contains_key("p_t_w") && table.contains_key("eirp_product_w") {
            return Err(ctx.err(
                ErrorKind::Conflict,
                "p_t_w, eirp_product_w",
                "give either p_t_w or eirp_product_w, not both",
            ));
        }
        let has_rect = table.contains_key("width_m") || table.contains_key("height_m");
        if has_rect && table.contains_key("area_m2") {
            return Err(ctx.err(
                ErrorKind::Conflict,
                "width_m, height_m, area_m2",
                "give either width_m and height_m, or area_m2",
            ));
        }

        for (key, value) in &table {
            if !KEYS.contains(&key.as_str()) {
                return Err(ctx.err(ErrorKind::UnknownKey, key, format!("unknown key {key:?}")));
            }
            scenario.apply(&ctx, key, value)?;
        }
        scenario.check(&ctx)?;
        Ok(scenario)
    }

    /// Overrides one key from a command-line string, with the same unit
    /// rules as the file.
    pub fn set_from_str(&mut self, key: &str, text: &str) -> Result<(), ScenarioError> {
        self.set_many(&[(key, text)])
    }

    /// Applies several overrides, validating once all are in place.
    pub fn set_many(&mut self, pairs: &[(&str, &str)]) -> Result<(), ScenarioError> {
        let ctx = Ctx { src: "" };
        for &(key, text) in pairs {
            if !KEYS.contains(&key) {
                return Err(ctx.err(ErrorKind::UnknownKey, key, format!("unknown key {key:?}")));
            }
            self.apply(&ctx, key, &Value::String(text.to_string()))?;
        }
        self.check(&ctx)
    }

    fn apply(&mut self, ctx: &Ctx<'_>, key: &str, value: &Value) -> Result<(), ScenarioError> {
        match key {
            "p_t_w" => self.power = Some(PowerEntry::Transmit(ctx.positive(key, value, Dim::Power)?)),
            "eirp_product_w" => {
                self.power = Some(PowerEntry::GainProduct(ctx.positive(key, value, Dim::Power)?))
            }
            "g_t_dbi" => self.g_t_dbi = Some(ctx.quantity(key, value, Dim::Gain)?),
            "g_r_dbi" => self.g_r_dbi = Some(ctx.quantity(key, value, Dim::Gain)?),
            "f_hz" => self.f_hz = Some(ctx.positive(key, value, Dim::Frequency)?),
            "v_min_v" => self.v_min_v = Some(ctx.positive(key, value, Dim::Voltage)?),
            "r_r_ohm" => self.r_r_ohm = Some(ctx.positive(key, value, Dim::Resistance)?),
            "r_l_ohm" => self.r_l_ohm = Some(ctx.positive(key, value, Dim::Resistance)?),
            "width_m" | "height_m" => {
                let v = ctx.positive(key, value, Dim::Length)?;
                let (mut w, mut h) = match self.field {
                    Some(FieldEntry::Rect { width, height }) => (width, height),
                    _ => (f64::NAN, f64::NAN),
                };
                if key == "width_m" {
                    w = v;
                } else {
                    h = v;
                }
                self.field = Some(FieldEntry::Rect {
                    width: w,
                    height: h,
                });
            }
            "area_m2" => self.field = Some(FieldEntry::Area(ctx.positive(key, value, Dim::Area)?)),
            "r_rf_m" => self.r_rf_m = Some(ctx.positive(key, value, Dim::Length)?),
            "strategy" => {
                self.strategy = Some(match ctx.string(key, value)? {
                    "square_grid" => Strategy::SquareGrid,
                    "hex_grid" => Strategy::HexGrid,
                    "explicit" => Strategy::Explicit,
                    other => {
                        return Err(ctx.err(
                            ErrorKind::Constraint,
                            key,
                            format!("{other:?} is not one of square_grid, hex_grid, explicit"),
                        ))
                    }
                })
            }
            "sources" => {
                let arr = value.as_array().ok_or_else(|| {
                    ctx.err(ErrorKind::Unit, key, "expected an array of [x, y] pairs")
                })?;
                let mut pts = Vec::with_capacity(arr.len());
                for item in arr {
                    match item.as_array().map(|a| a.as_slice()) {
                        Some([x, y]) => pts.push(Point::new(
                            ctx.quantity(key, x, Dim::Length)?,
                            ctx.quantity(key, y, Dim::Length)?,
                        )),
                        _ => {
                            return Err(ctx.err(
                                ErrorKind::Unit,
                                key,
                                "each source must be an [x, y] pair",
                            ))
                        }
                    }
                }
                self.sources = Some(pts);
            }
            "node_count" => self.node_count = Some(ctx.integer(key, value)? as usize),
            "seed" => self.seed = Some(ctx.integer(key, value)?),
            "sweep_start" => self.sweep.start = Some(ctx.tagged(key, value)?),
            "sweep_stop" => self.sweep.stop = Some(ctx.tagged(key, value)?),
            "sweep_points" => {
                let n = ctx.integer(key, value)? as usize;
                if n < 2 {
                    return Err(ctx.err(ErrorKind::Constraint, key, "need at least 2 points"));
                }
                self.sweep.points = Some(n);
            }
            "sweep_spacing" => {
                self.sweep.spacing = Some(match ctx.string(key, value)? {
                    "linear" => Spacing::Linear,
                    "logarithmic" | "log" => Spacing::Logarithmic,
                    other => {
                        return Err(ctx.err(
                            ErrorKind::Constraint,
                            key,
                            format!("{other:?} is not linear or logarithmic"),
                        ))
                    }
                })
            }
            "sweep_series" => {
                let items: Vec<Value> = match value {
                    Value::Array(a) => a.clone(),
                    Value::String(s) => s
                        .split(',')
                        .map(|part| Value::String(part.trim().to_string()))
                        .collect(),
                    _ => {
                        return Err(ctx.err(ErrorKind::Unit, key, "expected an array"));
                    }
                };
                let mut series = Vec::with_capacity(items.len());
                for item in &items {
                    series.push(match item {
                        Value::Array(pair) => match pair.as_slice() {
                            [a, b] => SeriesEntry::Pair(ctx.tagged(key, a)?, ctx.tagged(key, b)?),
                            _ => {
                                return Err(ctx.err(
                                    ErrorKind::Unit,
                                    key,
                                    "series pairs must have two elements",
                                ))
                            }
                        },
                        Value::String(s) if s.contains(':') => {
                            let (a, b) = s.split_once(':').expect("checked");
                            SeriesEntry::Pair(
                                ctx.tagged(key, &Value::String(a.into()))?,
                                ctx.tagged(key, &Value::String(b.into()))?,
                            )
                        }
                        other => SeriesEntry::Scalar(ctx.tagged(key, other)?),
                    });
                }
                if series.is_empty() {
                    return Err(ctx.err(ErrorKind::Constraint, key, "series list is empty"));
                }
                self.sweep.series = Some(series);
            }
            _ => unreachable!("key list checked"),
        }
        Ok(())
    }

    fn check(&self, ctx: &Ctx<'_>) -> Result<(), ScenarioError> {
        if let Some(FieldEntry::Rect { width, height }) = self.field {
            if width.is_nan() || height.is_nan() {
                return Err(ctx.err(
                    ErrorKind::Constraint,
                    "width_m, height_m",
                    "width_m and height_m must be given together",
                ));
            }
        }
        if let (Some(s), Some(_)) = (self.strategy, &self.sources) {
            if s != Strategy::Explicit {
                return Err(ctx.err(
                    ErrorKind::Conflict,
                    "strategy, sources",
                    "an explicit source list needs strategy = \"explicit\"",
                ));
            }
        }
        if self.strategy == Some(Strategy::Explicit) && self.sources.is_none() {
            return Err(ctx.err(
                ErrorKind::Constraint,
                "sources",
                "strategy \"explicit\" needs a sources list",
            ));
        }
        // the radio must assemble, e.g. a gain of -inf dBi is rejected here
        self.radio().map_err(|e| ctx.err(ErrorKind::Constraint, "", e.to_string()))?;
        Ok(())
    }

    /// Radio parameters with defaults filled in.
    pub fn radio(&self) -> crate::Result<RadioParams> {
        let d = default_radio();
        let f = self.f_hz.map(Frequency::hertz).transpose()?.unwrap_or(d.f());
        let v = self.v_min_v.map(Voltage::volts).transpose()?.unwrap_or(d.v_min());
        let r_r = self.r_r_ohm.map(Resistance::ohms).transpose()?.unwrap_or(d.r_r());
        let r_l = self.r_l_ohm.map(Resistance::ohms).transpose()?.unwrap_or(d.r_l());
        match self.power {
            Some(PowerEntry::GainProduct(p)) => {
                RadioParams::from_gain_product(Power::watts(p)?, f, v, r_r, r_l)
            }
            other => {
                let p = match other {
                    Some(PowerEntry::Transmit(p)) => Power::watts(p)?,
                    _ => d.p_t(),
                };
                let g_t = self.g_t_dbi.map(Gain::from_dbi).transpose()?.unwrap_or(d.g_t());
                let g_r = self.g_r_dbi.map(Gain::from_dbi).transpose()?.unwrap_or(d.g_r());
                RadioParams::new(p, g_t, g_r, f, v, r_r, r_l)
            }
        }
    }

    /// Whether any radio key was given, in the file or on the command line.
    pub fn has_radio_overrides(&self) -> bool {
        self.power.is_some()
            || self.g_t_dbi.is_some()
            || self.g_r_dbi.is_some()
            || self.f_hz.is_some()
            || self.v_min_v.is_some()
            || self.r_r_ohm.is_some()
            || self.r_l_ohm.is_some()
    }

    pub fn event_field(&self) -> crate::Result<EventField> {
        Ok(match self.field {
            Some(FieldEntry::Rect { width, height }) => {
                EventField::new(Length::meters(width)?, Length::meters(height)?)
            }
            Some(FieldEntry::Area(a)) => EventField::square(Area::square_meters(a)?),
            None => EventField::square(Area::square_meters(DEFAULT_AREA_M2)?),
        })
    }

    /// Common source range: `r_rf_m` if given, else the radio's activation
    /// range.
    pub fn range(&self) -> crate::Result<Length> {
        match self.r_rf_m {
            Some(r) => Length::meters(r),
            None => Ok(max_range(&self.radio()?)),
        }
    }

    pub fn strategy(&self) -> Strategy {
        match (self.strategy, &self.sources) {
            (Some(s), _) => s,
            (None, Some(_)) => Strategy::Explicit,
            (None, None) => Strategy::SquareGrid,
        }
    }

    pub fn deployment(&self) -> crate::Result<Deployment> {
        let field = self.event_field()?;
        let r = self.range()?;
        match self.strategy() {
            Strategy::SquareGrid => place_sources(field, r, Grid::Square),
            Strategy::HexGrid => place_sources(field, r, Grid::Hex),
            Strategy::Explicit => {
                Deployment::explicit(field, r, self.sources.clone().unwrap_or_default())
            }
        }
    }

    pub fn nodes(&self) -> crate::Result<NodeField> {
        Ok(crate::deployment::scatter_nodes(
            self.event_field()?,
            self.node_count.unwrap_or(DEFAULT_NODE_COUNT),
            self.seed.unwrap_or(DEFAULT_SEED),
        ))
    }

    /// The figure's built-in sweep with this scenario's values applied.
    /// The base radio is replaced only when the scenario names a radio key.
    pub fn sweep_spec(&self, figure: Figure) -> Result<SweepSpec, ScenarioError> {
        let ctx = Ctx { src: "" };
        let core = |e: crate::Error| ctx.err(ErrorKind::Constraint, "", e.to_string());
        let mut spec = figure.default_spec();
        if self.has_radio_overrides() {
            spec.radio = self.radio().map_err(core)?;
        }
        if self.field.is_some() {
            spec.field = self.event_field().map_err(core)?;
        }
        let axis_dim = match spec.axis {
            Axis::ReceivedPower | Axis::TransmitPower => Dim::Power,
            Axis::Frequency => Dim::Frequency,
            Axis::Area => Dim::Area,
        };
        let axis_value = |key: &str, t: Tagged| match t.dim {
            Some(d) if d != axis_dim => Err(ctx.err(
                ErrorKind::Unit,
                key,
                format!(
                    "figure {} sweeps {}, found a {} unit",
                    figure.number(),
                    axis_dim.name(),
                    d.name()
                ),
            )),
            _ => Ok(t.value),
        };
        let sweep = &self.sweep;
        if let Some(t) = sweep.start {
            spec.start = axis_value("sweep_start", t)?;
        }
        if let Some(t) = sweep.stop {
            spec.stop = axis_value("sweep_stop", t)?;
        }
        if sweep.start.is_some() || sweep.stop.is_some() {
            let (lo, hi) = (spec.start, spec.stop);
            spec.extra_points.retain(|v| *v > lo && *v < hi);
        }
        if let Some(n) = sweep.points {
            spec.points = n;
        }
        if let Some(s) = sweep.spacing {
            spec.spacing = s;
        }
        if let Some(entries) = &sweep.series {
            spec.series = series_for(&ctx, &spec.series, entries)?;
        }
        spec.validate().map_err(core)?;
        Ok(spec)
    }

    /// Renders the scenario back to a document that parses to an equal
    /// value.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let float = |v: f64| format!("{v:?}");
        let tagged = |t: &Tagged| match t.dim {
            Some(d) => format!("\"{:?}{}\"", t.value, d.base_suffix()),
            None => format!("{:?}", t.value),
        };
        match self.power {
            Some(PowerEntry::Transmit(p)) => put("p_t_w", float(p)),
            Some(PowerEntry::GainProduct(p)) => put("eirp_product_w", float(p)),
            None => {}
        }
        for (k, v) in [
            ("g_t_dbi", self.g_t_dbi),
            ("g_r_dbi", self.g_r_dbi),
            ("f_hz", self.f_hz),
            ("v_min_v", self.v_min_v),
            ("r_r_ohm", self.r_r_ohm),
            ("r_l_ohm", self.r_l_ohm),
        ] {
            if let Some(v) = v {
                put(k, float(v));
            }
        }
        match self.field {
            Some(FieldEntry::Rect { width, height }) => {
                put("width_m", float(width));
                put("height_m", float(height));
            }
            Some(FieldEntry::Area(a)) => put("area_m2", float(a)),
            None => {}
        }
        if let Some(r) = self.r_rf_m {
            put("r_rf_m", float(r));
        }
        if let Some(st) = self.strategy {
            let name = match st {
                Strategy::SquareGrid => "square_grid",
                Strategy::HexGrid => "hex_grid",
                Strategy::Explicit => "explicit",
            };
            put("strategy", format!("\"{name}\""));
        }
        if let Some(pts) = &self.sources {
            let items: Vec<String> = pts
                .iter()
                .map(|p| format!("[{:?}, {:?}]", p.x, p.y))
                .collect();
            put("sources", format!("[{}]", items.join(", ")));
        }
        if let Some(n) = self.node_count {
            put("node_count", n.to_string());
        }
        if let Some(seed) = self.seed {
            // TOML integers are signed 64-bit
            put("seed", format!("\"{seed}\""));
        }
        if !self.sweep.is_empty() {
            let sw = &self.sweep;
            if let Some(t) = &sw.start {
                put("sweep_start", tagged(t));
            }
            if let Some(t) = &sw.stop {
                put("sweep_stop", tagged(t));
            }
            if let Some(n) = sw.points {
                put("sweep_points", n.to_string());
            }
            if let Some(sp) = sw.spacing {
                let name = match sp {
                    Spacing::Linear => "linear",
                    Spacing::Logarithmic => "logarithmic",
                };
                put("sweep_spacing", format!("\"{name}\""));
            }
            if let Some(series) = &sw.series {
                let items: Vec<String> = series
                    .iter()
                    .map(|e| match e {
                        SeriesEntry::Scalar(t) => tagged(t),
                        SeriesEntry::Pair(a, b) => format!("[{}, {}]", tagged(a), tagged(b)),
                    })
                    .collect();
                put("sweep_series", format!("[{}]", items.join(", ")));
            }
        }
        s
    }
}

fn series_for(
    ctx: &Ctx<'_>,
    template: &Series,
    entries: &[SeriesEntry],
) -> Result<Series, ScenarioError> {
    const KEY: &str = "sweep_series";
    let expect_dim = |t: &Tagged, dim: Dim| match t.dim {
        Some(d) if d != dim => Err(ctx.err(
            ErrorKind::Unit,
            KEY,
            format!("expected a {} unit, found a {} unit", dim.name(), d.name()),
        )),
        _ => Ok(t.value),
    };
    let shape_err = |what: &str| ctx.err(ErrorKind::Unit, KEY, format!("this figure takes {what}"));
    let constraint = |e: crate::Error| ctx.err(ErrorKind::Constraint, KEY, e.to_string());
    match template {
        Series::None => Err(ctx.err(
            ErrorKind::Constraint,
            KEY,
            "this figure has no series",
        )),
        Series::Frequencies(_) => entries
            .iter()
            .map(|e| match e {
                SeriesEntry::Scalar(t) => {
                    Frequency::hertz(expect_dim(t, Dim::Frequency)?).map_err(constraint)
                }
                _ => Err(shape_err("a list of frequencies")),
            })
            .collect::<Result<_, _>>()
            .map(Series::Frequencies),
        Series::SourceCounts(_) => entries
            .iter()
            .map(|e| match e {
                SeriesEntry::Scalar(t) if t.dim.is_none() => {
                    if t.value >= 1.0 && t.value.fract() == 0.0 && t.value <= u64::MAX as f64 {
                        Ok(t.value as u64)
                    } else {
                        Err(ctx.err(
                            ErrorKind::Constraint,
                            KEY,
                            format!("source count must be an integer >= 1, got {}", t.value),
                        ))
                    }
                }
                _ => Err(shape_err("a list of source counts")),
            })
            .collect::<Result<_, _>>()
            .map(Series::SourceCounts),
        Series::PowerFrequency(_) => entries
            .iter()
            .map(|e| match e {
                SeriesEntry::Pair(p, f) => {
                    let p = Power::watts(expect_dim(p, Dim::Power)?).map_err(constraint)?;
                    if p.as_watts() <= 0.0 {
                        return Err(ctx.err(ErrorKind::Constraint, KEY, "power must be positive"));
                    }
                    Ok((p, Frequency::hertz(expect_dim(f, Dim::Frequency)?).map_err(constraint)?))
                }
                _ => Err(shape_err("a list of [power, frequency] pairs")),
            })
            .collect::<Result<_, _>>()
            .map(Series::PowerFrequency),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SECTION4: &str = r#"
p_t_w = 1.0
g_t_dbi = 8.5
g_r_dbi = 8.5
f_hz = "1GHz"
v_min_v = "100mV"
r_r_ohm = 50
r_l_ohm = 50
area_m2 = "0.04km2"
"#;

    #[test]
    fn parses_default_block() {
        let s = Scenario::parse(SECTION4).unwrap();
        assert_eq!(s.power, Some(PowerEntry::Transmit(1.0)));
        assert_eq!(s.f_hz, Some(1e9));
        assert_relative_eq!(s.v_min_v.unwrap(), 0.1, max_relative = 1e-15);
        assert_relative_eq!(
            s.event_field().unwrap().area().as_square_meters(),
            4e4,
            max_relative = 1e-12
        );
        assert_eq!(s.radio().unwrap(), default_radio());
        // empty document resolves to the same defaults
        assert_eq!(Scenario::parse("").unwrap().radio().unwrap(), default_radio());
    }

    #[test]
    fn unit_suffixes() {
        let cases = [
            ("1GHz", 1e9, Dim::Frequency),
            ("500MHz", 5e8, Dim::Frequency),
            ("100mV", 0.1, Dim::Voltage),
            ("30dBm", 1.0, Dim::Power),
            ("0dBW", 1.0, Dim::Power),
            ("0.04km2", 4e4, Dim::Area),
            ("2km", 2000.0, Dim::Length),
            ("50ohm", 50.0, Dim::Resistance),
            ("8.5dBi", 8.5, Dim::Gain),
            ("1e9Hz", 1e9, Dim::Frequency),
        ];
        for (text, want, dim) in cases {
            let (v, d) = parse_quantity(text).unwrap();
            assert_relative_eq!(v, want, max_relative = 1e-12);
            assert_eq!(d, Some(dim), "{text}");
        }
        assert_eq!(parse_quantity("42").unwrap(), (42.0, None));
        assert!(parse_quantity("12 furlongs").is_err());
    }

    #[test]
    fn both_power_keys_rejected() {
        let err = Scenario::parse("p_t_w = 1\neirp_product_w = 4\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Conflict);
        assert!(err.to_string().contains("p_t_w"));
        assert!(err.to_string().contains("eirp_product_w"));
    }

    #[test]
    fn unknown_key_named_with_line() {
        let err = Scenario::parse("f_hz = 1e9\n\nfrequency = 3\n").unwrap_err();
        assert_eq!(err.kind, ErrorKind::UnknownKey);
        assert_eq!(err.key, "frequency");
        assert_eq!(err.line, Some(3));
    }

    #[test]
    fn error_categories() {
        let kind = |doc: &str| Scenario::parse(doc).unwrap_err().kind;
        assert_eq!(kind("f_hz = = 3"), ErrorKind::Syntax);
        assert_eq!(kind("f_hz = \"100mV\""), ErrorKind::Unit);
        assert_eq!(kind("f_hz = true"), ErrorKind::Unit);
        assert_eq!(kind("f_hz = -5"), ErrorKind::Constraint);
        assert_eq!(kind("width_m = 10"), ErrorKind::Constraint);
        assert_eq!(kind("area_m2 = 1\nwidth_m = 1\nheight_m = 1"), ErrorKind::Conflict);
        assert_eq!(kind("strategy = \"explicit\""), ErrorKind::Constraint);
        assert_eq!(kind("strategy = \"spiral\""), ErrorKind::Constraint);
        assert_eq!(kind("sources = [[1, 2, 3]]"), ErrorKind::Unit);
        let syntax = Scenario::parse("f_hz = 1\nv_min_v = = 3").unwrap_err();
        assert_eq!(syntax.line, Some(2));
    }

    #[test]
    fn gain_product_folds_gains() {
        let s = Scenario::parse("eirp_product_w = 4\nf_hz = \"2GHz\"").unwrap();
        let r = s.radio().unwrap();
        assert_eq!(r.gain_power_product(), 4.0);
        assert!((max_range(&r).as_meters() - 6.754).abs() < 0.01);
    }

    #[test]
    fn round_trip() {
        let doc = r#"
eirp_product_w = "36dBm"
g_t_dbi = 3
f_hz = "915MHz"
v_min_v = 0.2
r_r_ohm = "1kohm"
r_l_ohm = 73.1
width_m = 120
height_m = "0.08km"
r_rf_m = 9.5
strategy = "explicit"
sources = [[1, 2], [3.25, 4]]
node_count = 77
seed = "18446744073709551615"
sweep_start = "0.5W"
sweep_stop = 20
sweep_points = 9
sweep_spacing = "log"
sweep_series = [["1W", "1GHz"], [2, "433MHz"]]
"#;
        let s = Scenario::parse(doc).unwrap();
        assert_eq!(s.seed, Some(u64::MAX));
        let again = Scenario::parse(&s.to_toml()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn command_line_override() {
        let mut s = Scenario::parse(SECTION4).unwrap();
        s.set_from_str("eirp_product_w", "4").unwrap();
        assert_eq!(s.power, Some(PowerEntry::GainProduct(4.0)));
        s.set_from_str("f_hz", "2GHz").unwrap();
        assert_eq!(s.f_hz, Some(2e9));
        assert_eq!(
            s.set_from_str("f_hz", "3V").unwrap_err().kind,
            ErrorKind::Unit
        );
        assert_eq!(
            s.set_from_str("colour", "red").unwrap_err().kind,
            ErrorKind::UnknownKey
        );
    }

    #[test]
    fn sweep_overrides() {
        let s = Scenario::parse(
            "sweep_start = \"200MHz\"\nsweep_stop = \"2GHz\"\nsweep_points = 4\nsweep_series = [3, 4]",
        )
        .unwrap();
        let spec = s.sweep_spec(Figure::PowerVsFrequency).unwrap();
        assert_eq!(spec.start, 2e8);
        assert_eq!(spec.series, Series::SourceCounts(vec![3, 4]));
        // the default radio is kept when no radio key is present
        assert_eq!(spec.radio, default_radio());
        assert_eq!(
            s.sweep_spec(Figure::SourcesVsPower).unwrap_err().kind,
            ErrorKind::Unit
        );
    }

    #[test]
    fn deployment_from_scenario() {
        let s = Scenario::parse(
            "width_m = 100\nheight_m = 100\nr_rf_m = 13.49\nstrategy = \"square_grid\"",
        )
        .unwrap();
        assert_eq!(s.deployment().unwrap().len(), 9);
        let s = Scenario::parse("width_m = 10\nheight_m = 10\nr_rf_m = 1\nsources = [[1, 1]]")
            .unwrap();
        assert_eq!(s.strategy(), Strategy::Explicit);
        assert_eq!(s.deployment().unwrap().len(), 1);
    }
}
