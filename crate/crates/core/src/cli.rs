//! Command-line front end. Every subcommand is a thin adapter over the
//! library; numbers on stdout use the shortest round-trip decimal form.
//!
//! Exit codes: 0 success, 1 usage/validation/parse error, 2 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::coverage::{required_power, source_count};
use crate::deployment::{coverage_report, detect_interference, monte_carlo_coverage};
use crate::link_budget::max_range;
use crate::scenario::{Scenario, ScenarioError};
use crate::sweep::{num, write_csv_file, write_svg_file, Figure};

#[derive(Debug, Parser)]
#[command(name = "wpsn", version, about = "RF-source coverage planning for passive sensor networks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (TOML)
    #[arg(long, global = true, value_name = "PATH")]
    scenario: Option<PathBuf>,
    /// Output directory for emitted files
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// RNG seed for node scatter and Monte Carlo sampling
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Transmit power, e.g. 1, 500mW, 30dBm
    #[arg(long, global = true, conflicts_with = "eirp_product")]
    p_t: Option<String>,
    /// Folded p_t*g_t*g_r product; antenna gains are then unity
    #[arg(long, global = true)]
    eirp_product: Option<String>,
    /// Source antenna gain in dBi
    #[arg(long, global = true, allow_hyphen_values = true)]
    g_t: Option<String>,
    /// Node antenna gain in dBi
    #[arg(long, global = true, allow_hyphen_values = true)]
    g_r: Option<String>,
    /// Carrier frequency, e.g. 915MHz
    #[arg(long, global = true)]
    f: Option<String>,
    /// Minimum induced voltage, e.g. 100mV
    #[arg(long, global = true)]
    v_min: Option<String>,
    /// Node antenna resistance
    #[arg(long, global = true)]
    r_r: Option<String>,
    /// Load/source resistance
    #[arg(long, global = true)]
    r_l: Option<String>,
    /// Field width (needs --height)
    #[arg(long, global = true, requires = "height", conflicts_with = "area")]
    width: Option<String>,
    /// Field height (needs --width)
    #[arg(long, global = true, requires = "width")]
    height: Option<String>,
    /// Field area; the field is a square
    #[arg(long, global = true)]
    area: Option<String>,
    /// Common source range, overriding the computed activation range
    #[arg(long, global = true)]
    r_rf: Option<String>,
    /// square_grid, hex_grid or explicit
    #[arg(long, global = true)]
    strategy: Option<String>,
    /// Number of passive nodes to scatter
    #[arg(long, global = true)]
    nodes: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the activation range in meters
    Range,
    /// Print the exact and required source counts
    Sources,
    /// Print the transmit power at which K sources cover the field
    Power {
        #[arg(long)]
        k: u64,
    },
    /// Place sources, write sources.csv and report coverage
    Deploy {
        /// Monte Carlo samples for area coverage
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Write interference_pairs.csv and interference_nodes.csv
    Interference,
    /// Write figure<N>.csv (and .svg with --svg)
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..=8))]
        figure: u32,
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Core(#[from] crate::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Core(crate::Error::Io { .. } | crate::Error::Csv { .. }) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs the CLI against `args` (including the program name), writing
/// results to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_scenario(common: &Common) -> Result<Scenario, CliError> {
    let mut scenario = match &common.scenario {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            Scenario::parse(&text).map_err(|mut e| {
                e.message = format!("{}: {}", path.display(), e.message);
                e
            })?
        }
        None => Scenario::default(),
    };
    // a power flag replaces whichever power key the file used
    if common.p_t.is_some() || common.eirp_product.is_some() {
        scenario.power = None;
    }
    if common.width.is_some() || common.area.is_some() {
        scenario.field = None;
    }
    let overrides: Vec<(&str, &str)> = [
        ("p_t_w", &common.p_t),
        ("eirp_product_w", &common.eirp_product),
        ("g_t_dbi", &common.g_t),
        ("g_r_dbi", &common.g_r),
        ("f_hz", &common.f),
        ("v_min_v", &common.v_min),
        ("r_r_ohm", &common.r_r),
        ("r_l_ohm", &common.r_l),
        ("width_m", &common.width),
        ("height_m", &common.height),
        ("area_m2", &common.area),
        ("r_rf_m", &common.r_rf),
        ("node_count", &common.nodes),
        ("seed", &common.seed),
        ("strategy", &common.strategy),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
    .collect();
    if common.strategy.as_deref().is_some_and(|s| s != "explicit") {
        scenario.sources = None;
    }
    scenario.set_many(&overrides)?;
    Ok(scenario)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_lines(path: &Path, lines: &[String]) -> Result<(), CliError> {
    let mut text = String::new();
    for l in lines {
        text.push_str(l);
        text.push('\n');
    }
    fs::write(path, text).map_err(io_err(path))
}

fn out(stdout: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(stdout, "{key} = {value}").map_err(io_err(Path::new("<stdout>")))
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let scenario = load_scenario(&cli.common)?;
    let dir = &cli.common.out;
    match cli.command {
        Command::Range => {
            let r = max_range(&scenario.radio()?);
            out(stdout, "max_range_m", num(r.as_meters()))?;
        }
        Command::Sources => {
            let k = source_count(scenario.event_field()?.area(), &scenario.radio()?);
            out(stdout, "k_exact", num(k.exact))?;
            out(stdout, "k_required", k.required)?;
        }
        Command::Power { k } => {
            let p = required_power(scenario.event_field()?.area(), k, &scenario.radio()?)?;
            out(stdout, "p_t_w", num(p.as_watts()))?;
        }
        Command::Deploy { samples } => {
            let dep = scenario.deployment()?;
            let nodes = scenario.nodes()?;
            let report = coverage_report(&dep, &nodes)?;
            let mc = monte_carlo_coverage(&dep, samples, nodes.seed())?;
            ensure_dir(dir)?;
            let path = dir.join("sources.csv");
            let mut lines = vec!["source_index,x_m,y_m".to_string()];
            lines.extend(
                dep.sources()
                    .iter()
                    .enumerate()
                    .map(|(i, p)| format!("{i},{},{}", num(p.x), num(p.y))),
            );
            write_lines(&path, &lines)?;
            let bound = crate::coverage::source_count_from_range(dep.field().area(), dep.r_rf());
            out(stdout, "r_rf_m", num(dep.r_rf().as_meters()))?;
            out(stdout, "sources", dep.len())?;
            out(stdout, "k_exact", num(bound.exact))?;
            out(stdout, "nodes_total", report.total_count)?;
            out(stdout, "nodes_covered", report.covered_count)?;
            out(stdout, "node_coverage_fraction", num(report.coverage_fraction))?;
            out(stdout, "area_coverage_fraction", num(mc))?;
        }
        Command::Interference => {
            let dep = scenario.deployment()?;
            let nodes = scenario.nodes()?;
            let report = detect_interference(&dep, &nodes)?;
            let coverage = coverage_report(&dep, &nodes)?;
            ensure_dir(dir)?;
            let pairs_path = dir.join("interference_pairs.csv");
            let mut lines = vec!["source_i,source_j,distance_m".to_string()];
            lines.extend(
                report
                    .source_pairs
                    .iter()
                    .map(|p| format!("{},{},{}", p.i, p.j, num(p.distance))),
            );
            write_lines(&pairs_path, &lines)?;
            let nodes_path = dir.join("interference_nodes.csv");
            let mut lines = vec!["node_index,x_m,y_m,feeding_sources".to_string()];
            lines.extend(report.multi_fed_nodes.iter().map(|&n| {
                let p = nodes.positions()[n];
                let fed: Vec<String> = coverage.feeding_sources[n]
                    .iter()
                    .map(|i| i.to_string())
                    .collect();
                format!("{n},{},{},{}", num(p.x), num(p.y), fed.join(";"))
            }));
            write_lines(&nodes_path, &lines)?;
            out(stdout, "overlapping_source_pairs", report.source_pairs.len())?;
            out(stdout, "multi_fed_nodes", report.multi_fed_nodes.len())?;
        }
        Command::Sweep { figure, svg } => {
            let figure = Figure::from_number(figure).expect("range checked by clap");
            let spec = scenario.sweep_spec(figure)?;
            let table = figure.run(&spec)?;
            ensure_dir(dir)?;
            let csv_path = dir.join(format!("figure{}.csv", figure.number()));
            write_csv_file(&table, &csv_path)?;
            out(stdout, "csv", csv_path.display())?;
            if svg {
                let svg_path = dir.join(format!("figure{}.svg", figure.number()));
                write_svg_file(&table, &figure.plot_options(), &svg_path)?;
                out(stdout, "svg", svg_path.display())?;
            }
        }
    }
    Ok(())
}
