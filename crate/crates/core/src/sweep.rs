//! Parameter sweeps over the link-budget and coverage formulas, with CSV and
//! SVG serializers.
//!
//! Each [`Figure`] is one dataset: induced voltage against received power,
//! activation range against transmit power, source count against transmit
//! power, required power against frequency, and source count against area.
//! Rows are evaluated independently (in parallel when enabled) and always
//! assembled in axis order, then series order.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coverage::{required_power, source_count, EventField};
use crate::error::{Error, Result};
use crate::link_budget::{induced_voltage, max_range, RadioParams};
use crate::par::{self, Execution};
use crate::quantities::{
    Area, Frequency, Gain, Power, Resistance, Voltage, SPEED_OF_LIGHT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    ReceivedPower,
    TransmitPower,
    Frequency,
    Area,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::ReceivedPower => "received_power",
            Axis::TransmitPower => "transmit_power",
            Axis::Frequency => "frequency",
            Axis::Area => "area",
        }
    }

    fn check(self, v: f64) -> Result<()> {
        match self {
            Axis::ReceivedPower => Power::watts(v).map(drop),
            Axis::TransmitPower => check_positive("transmit power", v),
            Axis::Frequency => Frequency::hertz(v).map(drop),
            Axis::Area => Area::square_meters(v).map(drop),
        }
    }
}

fn check_positive(quantity: &'static str, v: f64) -> Result<()> {
    Power::watts(v)?;
    if v <= 0.0 {
        return Err(Error::InvalidQuantity {
            quantity,
            value: v,
            reason: "must be positive",
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Secondary parameter that splits a sweep into several lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    None,
    Frequencies(Vec<Frequency>),
    SourceCounts(Vec<u64>),
    PowerFrequency(Vec<(Power, Frequency)>),
}

impl Series {
    fn len(&self) -> usize {
        match self {
            Series::None => 1,
            Series::Frequencies(v) => v.len(),
            Series::SourceCounts(v) => v.len(),
            Series::PowerFrequency(v) => v.len(),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Series::None => "none",
            Series::Frequencies(_) => "frequencies",
            Series::SourceCounts(_) => "source counts",
            Series::PowerFrequency(_) => "(power, frequency) pairs",
        }
    }

    /// Ascending copy.
    fn sorted(&self) -> Series {
        match self {
            Series::None => Series::None,
            Series::Frequencies(v) => {
                let mut v = v.clone();
                v.sort_by(|a, b| a.as_hertz().total_cmp(&b.as_hertz()));
                v.dedup();
                Series::Frequencies(v)
            }
            Series::SourceCounts(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                Series::SourceCounts(v)
            }
            Series::PowerFrequency(v) => {
                let mut v = v.clone();
                v.sort_by(|a, b| {
                    a.0.as_watts()
                        .total_cmp(&b.0.as_watts())
                        .then(a.1.as_hertz().total_cmp(&b.1.as_hertz()))
                });
                v.dedup();
                Series::PowerFrequency(v)
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            Series::None => String::new(),
            Series::Frequencies(v) => join(v.iter().map(|f| num(f.as_hertz()))),
            Series::SourceCounts(v) => join(v.iter().map(|k| k.to_string())),
            Series::PowerFrequency(v) => join(
                v.iter()
                    .map(|(p, f)| format!("{}:{}", num(p.as_watts()), num(f.as_hertz()))),
            ),
        }
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(";")
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    format!("{v}")
}

/// Axis definition, series and base parameters of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Values merged into the generated grid, e.g. reference operating
    /// points that would otherwise fall between grid nodes.
    pub extra_points: Vec<f64>,
    pub series: Series,
    pub radio: RadioParams,
    pub field: EventField,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start >= self.stop {
            return Err(Error::InvalidSweep(format!(
                "start ({}) must be below stop ({})",
                self.start, self.stop
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidSweep(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        if self.spacing == Spacing::Logarithmic && self.start <= 0.0 {
            return Err(Error::InvalidSweep(
                "logarithmic spacing needs a positive start".into(),
            ));
        }
        if self.series.len() == 0 {
            return Err(Error::InvalidSweep("series list is empty".into()));
        }
        if let Series::SourceCounts(ks) = &self.series {
            if let Some(&k) = ks.iter().find(|&&k| k < 1) {
                return Err(Error::InvalidSourceCount(k));
            }
        }
        for v in [self.start, self.stop].iter().chain(&self.extra_points) {
            self.axis.check(*v)?;
        }
        Ok(())
    }

    /// Ascending, de-duplicated axis values including the extra points.
    pub fn axis_values(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.points;
        let last = (n - 1) as f64;
        let mut values: Vec<f64> = (0..n)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Logarithmic => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect();
        values.extend_from_slice(&self.extra_points);
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(values)
    }

    fn expect(&self, figure: Figure) -> Result<()> {
        let (axis, series_ok) = match figure {
            Figure::VoltageVsPower => (Axis::ReceivedPower, matches!(self.series, Series::None)),
            Figure::RangeVsPower | Figure::SourcesVsPower => (
                Axis::TransmitPower,
                matches!(self.series, Series::Frequencies(_)),
            ),
            Figure::PowerVsFrequency => (
                Axis::Frequency,
                matches!(self.series, Series::SourceCounts(_)),
            ),
            Figure::SourcesVsArea => (
                Axis::Area,
                matches!(self.series, Series::PowerFrequency(_)),
            ),
        };
        if self.axis != axis {
            return Err(Error::InvalidSweep(format!(
                "figure {} sweeps {}, not {}",
                figure.number(),
                axis.name(),
                self.axis.name()
            )));
        }
        if !series_ok {
            return Err(Error::InvalidSweep(format!(
                "figure {} cannot use a series of {}",
                figure.number(),
                self.series.kind()
            )));
        }
        Ok(())
    }

    fn metadata(&self, figure: Figure) -> Vec<(String, String)> {
        let r = &self.radio;
        let kv = |k: &str, v: String| (k.to_string(), v);
        vec![
            kv("figure", figure.number().to_string()),
            kv("dataset", figure.title().to_string()),
            kv("axis", self.axis.name().to_string()),
            kv(
                "spacing",
                match self.spacing {
                    Spacing::Linear => "linear",
                    Spacing::Logarithmic => "logarithmic",
                }
                .to_string(),
            ),
            kv("start", num(self.start)),
            kv("stop", num(self.stop)),
            kv("points", self.points.to_string()),
            kv("extra_points", join(self.extra_points.iter().map(|v| num(*v)))),
            kv("series", self.series.describe()),
            kv("p_t_w", num(r.p_t().as_watts())),
            kv("g_t_linear", num(r.g_t().as_linear())),
            kv("g_r_linear", num(r.g_r().as_linear())),
            kv("f_hz", num(r.f().as_hertz())),
            kv("v_min_v", num(r.v_min().as_volts())),
            kv("r_r_ohm", num(r.r_r().as_ohms())),
            kv("r_l_ohm", num(r.r_l().as_ohms())),
            kv("field_width_m", num(self.field.width().as_meters())),
            kv("field_height_m", num(self.field.height().as_meters())),
            kv("area_m2", num(self.field.area().as_square_meters())),
            kv("speed_of_light_m_s", num(SPEED_OF_LIGHT)),
        ]
    }
}

/// Columns, rows and the input record of an evaluated sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// The datasets the sweep engine knows how to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    VoltageVsPower,
    RangeVsPower,
    SourcesVsPower,
    PowerVsFrequency,
    SourcesVsArea,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::VoltageVsPower,
        Figure::RangeVsPower,
        Figure::SourcesVsPower,
        Figure::PowerVsFrequency,
        Figure::SourcesVsArea,
    ];

    pub fn from_number(n: u32) -> Option<Figure> {
        Self::ALL.into_iter().find(|f| f.number() == n)
    }

    pub fn number(self) -> u32 {
        match self {
            Figure::VoltageVsPower => 4,
            Figure::RangeVsPower => 5,
            Figure::SourcesVsPower => 6,
            Figure::PowerVsFrequency => 7,
            Figure::SourcesVsArea => 8,
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Figure::VoltageVsPower => "induced voltage vs received power",
            Figure::RangeVsPower => "activation range vs transmit power",
            Figure::SourcesVsPower => "source count vs transmit power",
            Figure::PowerVsFrequency => "required transmit power vs carrier frequency",
            Figure::SourcesVsArea => "source count vs event area",
        }
    }

    /// Built-in sweep: 100 mV threshold, 50 + 50 ohm, 4e4 m^2 field.
    /// The range sweep folds all gain into the transmit power (unity
    /// gains); the others use 8.5 dBi on each antenna.
    pub fn default_spec(self) -> SweepSpec {
        let ghz = |v: f64| Frequency::hertz(v * 1e9).expect("positive");
        let field = EventField::square(Area::square_meters(4e4).expect("positive"));
        let radio = default_radio();
        let anchor_f = [ghz(0.5), ghz(1.0), ghz(2.0)];
        match self {
            Figure::VoltageVsPower => SweepSpec {
                axis: Axis::ReceivedPower,
                start: 0.0,
                stop: 1e-4,
                points: 41,
                spacing: Spacing::Linear,
                extra_points: vec![1.25e-5],
                series: Series::None,
                radio,
                field,
            },
            Figure::RangeVsPower => SweepSpec {
                axis: Axis::TransmitPower,
                start: 0.1,
                stop: 10.0,
                points: 50,
                spacing: Spacing::Logarithmic,
                extra_points: vec![1.0, 4.0],
                series: Series::Frequencies(anchor_f.to_vec()),
                radio: radio.with_gains(Gain::UNITY, Gain::UNITY),
                field,
            },
            Figure::SourcesVsPower => SweepSpec {
                axis: Axis::TransmitPower,
                start: 0.1,
                stop: 10.0,
                points: 50,
                spacing: Spacing::Logarithmic,
                extra_points: vec![1.0],
                series: Series::Frequencies(anchor_f.to_vec()),
                radio,
                field,
            },
            Figure::PowerVsFrequency => SweepSpec {
                axis: Axis::Frequency,
                start: 1e8,
                stop: 3e9,
                points: 50,
                spacing: Spacing::Logarithmic,
                extra_points: vec![5e8, 1e9, 2e9],
                series: Series::SourceCounts(vec![1, 2, 5, 6, 10, 20]),
                radio,
                field,
            },
            Figure::SourcesVsArea => {
                let w = |v: f64| Power::watts(v).expect("positive");
                SweepSpec {
                    axis: Axis::Area,
                    start: 1e3,
                    stop: 1e5,
                    points: 50,
                    spacing: Spacing::Linear,
                    extra_points: vec![4e4],
                    series: Series::PowerFrequency(vec![
                        (w(0.5), ghz(1.0)),
                        (w(1.0), ghz(0.5)),
                        (w(1.0), ghz(1.0)),
                        (w(1.0), ghz(2.0)),
                        (w(4.0), ghz(1.0)),
                    ]),
                    radio,
                    field,
                }
            }
        }
    }

    pub fn run(self, spec: &SweepSpec) -> Result<SweepTable> {
        match self {
            Figure::VoltageVsPower => sweep_voltage_vs_power(spec),
            Figure::RangeVsPower => sweep_range_vs_power(spec),
            Figure::SourcesVsPower => sweep_sources_vs_power(spec),
            Figure::PowerVsFrequency => sweep_power_vs_frequency(spec),
            Figure::SourcesVsArea => sweep_sources_vs_area(spec),
        }
    }

    /// Plot layout matching the table this figure produces.
    pub fn plot_options(self) -> PlotOptions {
        let (x, y, series, log_x, log_y): (&str, &str, &[&str], bool, bool) = match self {
            Figure::VoltageVsPower => ("p_r_w", "v_induced_v", &[], false, false),
            Figure::RangeVsPower => ("p_t_w", "range_m", &["f_hz"], true, true),
            Figure::SourcesVsPower => ("p_t_w", "k_exact", &["f_hz"], true, true),
            Figure::PowerVsFrequency => ("f_hz", "p_t_w", &["k"], true, true),
            Figure::SourcesVsArea => ("area_m2", "k_exact", &["p_t_w", "f_hz"], false, false),
        };
        PlotOptions {
            title: self.title().to_string(),
            x_column: x.into(),
            y_column: y.into(),
            series_columns: series.iter().map(|s| s.to_string()).collect(),
            log_x,
            log_y,
            ..PlotOptions::default()
        }
    }
}

/// 1 W, 8.5 dBi per antenna, 1 GHz, 100 mV, 50 + 50 ohm.
pub fn default_radio() -> RadioParams {
    RadioParams::new(
        Power::watts(1.0).expect("positive"),
        Gain::from_dbi(8.5).expect("finite"),
        Gain::from_dbi(8.5).expect("finite"),
        Frequency::hertz(1e9).expect("positive"),
        Voltage::volts(0.1).expect("positive"),
        Resistance::ohms(50.0).expect("positive"),
        Resistance::ohms(50.0).expect("positive"),
    )
    .expect("valid defaults")
}

fn build(
    figure: Figure,
    spec: &SweepSpec,
    columns: &[&str],
    row_fn: impl Fn(f64, &Series) -> Result<Vec<Vec<f64>>> + Sync + Send,
) -> Result<SweepTable> {
    spec.expect(figure)?;
    let axis = spec.axis_values()?;
    let series = spec.series.sorted();
    let blocks = par::map_slice(&axis, Execution::Parallel, |&x| row_fn(x, &series));
    let mut rows = Vec::with_capacity(axis.len() * series.len());
    for block in blocks {
        rows.extend(block?);
    }
    Ok(SweepTable {
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
        metadata: spec.metadata(figure),
    })
}

/// Rows `(p_r, v)` with `v` the voltage induced by received power `p_r`.
pub fn sweep_voltage_vs_power(spec: &SweepSpec) -> Result<SweepTable> {
    let (r_r, r_l) = (spec.radio.r_r(), spec.radio.r_l());
    build(
        Figure::VoltageVsPower,
        spec,
        &["p_r_w", "v_induced_v"],
        |p, _| {
            let v = induced_voltage(Power::watts(p)?, r_r, r_l);
            Ok(vec![vec![p, v.as_volts()]])
        },
    )
}

fn frequencies(series: &Series) -> &[Frequency] {
    match series {
        Series::Frequencies(f) => f,
        _ => unreachable!("checked by SweepSpec::expect"),
    }
}

/// Rows `(p_t, f, range)` per carrier frequency.
pub fn sweep_range_vs_power(spec: &SweepSpec) -> Result<SweepTable> {
    build(
        Figure::RangeVsPower,
        spec,
        &["p_t_w", "f_hz", "range_m"],
        |p, series| {
            let radio = spec.radio.with_power(Power::watts(p)?)?;
            Ok(frequencies(series)
                .iter()
                .map(|&f| {
                    let range = max_range(&radio.with_frequency(f));
                    vec![p, f.as_hertz(), range.as_meters()]
                })
                .collect())
        },
    )
}

/// Rows `(p_t, f, k_exact, k_required)` per carrier frequency.
pub fn sweep_sources_vs_power(spec: &SweepSpec) -> Result<SweepTable> {
    let area = spec.field.area();
    build(
        Figure::SourcesVsPower,
        spec,
        &["p_t_w", "f_hz", "k_exact", "k_required"],
        |p, series| {
            let radio = spec.radio.with_power(Power::watts(p)?)?;
            Ok(frequencies(series)
                .iter()
                .map(|&f| {
                    let k = source_count(area, &radio.with_frequency(f));
                    vec![p, f.as_hertz(), k.exact, k.required as f64]
                })
                .collect())
        },
    )
}

/// Rows `(f, k, p_t)`: transmit power at which `k` sources cover the field.
pub fn sweep_power_vs_frequency(spec: &SweepSpec) -> Result<SweepTable> {
    let area = spec.field.area();
    build(
        Figure::PowerVsFrequency,
        spec,
        &["f_hz", "k", "p_t_w"],
        |f, series| {
            let radio = spec.radio.with_frequency(Frequency::hertz(f)?);
            let Series::SourceCounts(ks) = series else {
                unreachable!("checked by SweepSpec::expect")
            };
            ks.iter()
                .map(|&k| Ok(vec![f, k as f64, required_power(area, k, &radio)?.as_watts()]))
                .collect()
        },
    )
}

/// Rows `(area, p_t, f, k_exact, k_required)` per `(p_t, f)` pair.
pub fn sweep_sources_vs_area(spec: &SweepSpec) -> Result<SweepTable> {
    build(
        Figure::SourcesVsArea,
        spec,
        &["area_m2", "p_t_w", "f_hz", "k_exact", "k_required"],
        |a, series| {
            let area = Area::square_meters(a)?;
            let Series::PowerFrequency(pairs) = series else {
                unreachable!("checked by SweepSpec::expect")
            };
            pairs
                .iter()
                .map(|&(p, f)| {
                    let radio = spec.radio.with_power(p)?.with_frequency(f);
                    let k = source_count(area, &radio);
                    Ok(vec![a, p.as_watts(), f.as_hertz(), k.exact, k.required as f64])
                })
                .collect()
        },
    )
}

/// Writes `# key = value` metadata lines, the header and one line per row.
pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> std::io::Result<()> {
    for (k, v) in &table.metadata {
        if v.is_empty() {
            writeln!(out, "# {k} =")?;
        } else {
            writeln!(out, "# {k} = {v}")?;
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let into_io = |e: csv::Error| std::io::Error::other(e);
    w.write_record(&table.columns).map_err(into_io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| num(*v))).map_err(into_io)?;
    }
    w.flush()
}

pub fn write_csv_file(table: &SweepTable, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut buf = BufWriter::new(file);
    write_csv(table, &mut buf).map_err(io_err)?;
    buf.flush().map_err(io_err)
}

/// Reads back a table written by [`write_csv`]. Metadata comments are
/// parsed into key/value pairs.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<SweepTable> {
    use std::io::BufRead;
    let path = || std::path::PathBuf::from("<input>");
    let mut metadata = Vec::new();
    let mut body = String::new();
    for line in std::io::BufReader::new(input).lines() {
        let line = line.map_err(|source| Error::Io {
            path: path(),
            source,
        })?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let csv_err = |source| Error::Csv {
        path: path(),
        source,
    };
    let columns = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidSweep(format!("non-numeric cell {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(SweepTable {
        columns,
        rows,
        metadata,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOptions {
    pub title: String,
    pub x_column: String,
    pub y_column: String,
    /// Columns whose value combination identifies a line. Empty for a
    /// single-line plot.
    pub series_columns: Vec<String>,
    pub log_x: bool,
    pub log_y: bool,
    pub width: f64,
    pub height: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            title: String::new(),
            x_column: String::new(),
            y_column: String::new(),
            series_columns: Vec::new(),
            log_x: false,
            log_y: false,
            width: 800.0,
            height: 600.0,
        }
    }
}

/// Maps data values onto a pixel interval, linearly or by decade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    lo: f64,
    hi: f64,
    log: bool,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    pub fn new(min: f64, max: f64, log: bool, px_lo: f64, px_hi: f64) -> Self {
        let (mut lo, mut hi) = if log {
            (min.log10(), max.log10())
        } else {
            (min, max)
        };
        if lo == hi {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.5 };
            lo -= pad;
            hi += pad;
        }
        Self {
            lo,
            hi,
            log,
            px_lo,
            px_hi,
        }
    }

    pub fn map(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        self.px_lo + (t - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }

    /// Tick positions in data units.
    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let first = self.lo.ceil() as i32;
            let last = self.hi.floor() as i32;
            if last >= first {
                return (first..=last).map(|e| 10f64.powi(e)).collect();
            }
            return vec![10f64.powf(self.lo), 10f64.powf(self.hi)];
        }
        let span = self.hi - self.lo;
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| span / s <= 6.0)
            .unwrap_or(10.0 * mag);
        let start = (self.lo / step).ceil() as i64;
        let end = (self.hi / step).floor() as i64;
        (start..=end).map(|i| i as f64 * step).collect()
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-2..1e4).contains(&a) {
        let s = format!("{v:.1e}");
        return s.replace(".0e", "e");
    }
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

type Polyline = Vec<(f64, f64)>;

/// Renders a self-contained SVG line plot, one polyline per series.
pub fn render_svg(table: &SweepTable, opts: &PlotOptions) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::InvalidPlot("table has no rows".into()));
    }
    let col = |name: &str| {
        table
            .column_index(name)
            .ok_or_else(|| Error::InvalidPlot(format!("no column {name:?}")))
    };
    let xi = col(&opts.x_column)?;
    let yi = col(&opts.y_column)?;
    let si = opts
        .series_columns
        .iter()
        .map(|c| col(c))
        .collect::<Result<Vec<_>>>()?;

    // group rows by series key, in order of first appearance
    let mut groups: Vec<(Vec<f64>, Polyline)> = Vec::new();
    for row in &table.rows {
        let key: Vec<f64> = si.iter().map(|&i| row[i]).collect();
        let pt = (row[xi], row[yi]);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push(pt),
            None => groups.push((key, vec![pt])),
        }
    }

    let check_log = |on: bool, name: &str, v: f64| {
        if on && v <= 0.0 {
            Err(Error::InvalidPlot(format!(
                "log scale on {name} needs positive values, found {v}"
            )))
        } else {
            Ok(())
        }
    };
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (_, pts) in &groups {
        for &(x, y) in pts {
            check_log(opts.log_x, &opts.x_column, x)?;
            check_log(opts.log_y, &opts.y_column, y)?;
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
    }

    let (w, h) = (opts.width, opts.height);
    let (left, right, top, bottom) = (80.0, w - 190.0, 50.0, h - 60.0);
    let sx = Scale::new(xmin, xmax, opts.log_x, left, right);
    let sy = Scale::new(ymin, ymax, opts.log_y, bottom, top);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        escape(&opts.title)
    );
    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{left:.2}" y1="{top:.2}" x2="{left:.2}" y2="{bottom:.2}" stroke="black"/>"#
    );
    for t in sx.ticks() {
        let px = sx.map(t);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{bottom:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            bottom + 18.0,
            tick_label(t)
        );
    }
    for t in sy.ticks() {
        let py = sy.map(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{left:.2}" y2="{py:.2}" stroke="black"/>"#,
            left - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            left - 8.0,
            py + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}{}</text>"#,
        (left + right) / 2.0,
        h - 20.0,
        escape(&opts.x_column),
        if opts.log_x { " (log)" } else { "" }
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(&opts.y_column),
        if opts.log_y { " (log)" } else { "" }
    );

    for (n, (key, pts)) in groups.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx.map(x), sy.map(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let label = if key.is_empty() {
            opts.y_column.clone()
        } else {
            opts.series_columns
                .iter()
                .zip(key)
                .map(|(c, v)| format!("{c}={}", num(*v)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let ly = top + 10.0 + 18.0 * n as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            right + 15.0,
            right + 35.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            right + 40.0,
            ly + 4.0,
            escape(&label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg_plot<W: Write>(table: &SweepTable, opts: &PlotOptions, mut out: W) -> Result<()> {
    let svg = render_svg(table, opts)?;
    out.write_all(svg.as_bytes()).map_err(|source| Error::Io {
        path: "<output>".into(),
        source,
    })
}

pub fn write_svg_file(table: &SweepTable, opts: &PlotOptions, path: &Path) -> Result<()> {
    let svg = render_svg(table, opts)?;
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
