//! The `routeprobe` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use routeprobe::codegen::emit_component;
use routeprobe::synth::{
    generate_fleet, parse_faults, parse_fleet_config, write_labels, FaultSpec, FleetConfig,
};
use routeprobe::{
    builtin, fleet_report, load_regions, measure_count_in_state, measure_max_attribute,
    parse_trace, run_probe, write_trace, Attribute, Exact, FleetReport, ProbeDef, ProbeResult,
    RegionSet, ReportRow, Trace, Verdict,
};

/// Directory searched for `regions.csv` and probe files when no explicit
/// path is given.
pub const CONFIG_DIR_ENV: &str = "ROUTEPROBE_CONFIG_DIR";

pub const LABELS_FILE: &str = "labels.txt";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot access `{}`: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error in `{}`: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "routeprobe",
    version,
    about = "Check vehicle GPS traces against region probes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Builtin probe name (loose, strict) or a probe file.
    #[arg(long, default_value = "loose")]
    pub probe: String,
    /// Region file; defaults to regions.csv in the config directory, else the
    /// built-in airport route regions.
    #[arg(long)]
    pub regions: Option<PathBuf>,
    #[arg(long, env = CONFIG_DIR_ENV, hide_env_values = true)]
    pub config_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Field delimiter of trace files.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one trace. Exit status 0 if accepted, 1 if rejected.
    Check {
        trace: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        input: TraceArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Check every trace in the given files and directories (`*.csv`, by
    /// name). Exit status 0 if all are accepted.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        input: TraceArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Write one series per probe state plus MaxLatitude.
    Measures {
        trace: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        input: TraceArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a labelled synthetic fleet.
    Synth {
        /// Total number of traces, faulty ones included.
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Route parameters (TOML).
        #[arg(long)]
        route: Option<PathBuf>,
        /// Fault list (TOML).
        #[arg(long)]
        faults: Option<PathBuf>,
        /// Add one vehicle that detours from the garage.
        #[arg(long)]
        detour: bool,
        #[arg(long)]
        regions: Option<PathBuf>,
        #[arg(long, env = CONFIG_DIR_ENV, hide_env_values = true)]
        config_dir: Option<PathBuf>,
    },
    /// Emit the straight-line component text for a trace.
    Codegen {
        trace: PathBuf,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        chunk_size: u64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input: TraceArgs,
    },
    /// Load and validate the region and probe configuration.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
    },
}

fn load_region_set(
    explicit: Option<&Path>,
    config_dir: Option<&Path>,
) -> Result<RegionSet<Exact>, CliError> {
    let path = match (explicit, config_dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join("regions.csv")).filter(|p| p.exists()),
        (None, None) => None,
    };
    match path {
        Some(p) => load_regions(&read(&p)?).map_err(|e| parse_err(&p, e)),
        None => Ok(RegionSet::airport_route()),
    }
}

fn load_config(args: &ConfigArgs) -> Result<(RegionSet<Exact>, ProbeDef), CliError> {
    let regions = load_region_set(args.regions.as_deref(), args.config_dir.as_deref())?;
    let probe = match builtin(&args.probe) {
        Some(p) => p,
        None => {
            let direct = PathBuf::from(&args.probe);
            let path = match &args.config_dir {
                Some(dir) if !direct.exists() => dir.join(&args.probe),
                _ => direct,
            };
            let source = read(&path)?;
            routeprobe::probe::parse_probe_unchecked(&source).map_err(|e| parse_err(&path, e))?
        }
    };
    probe
        .validate(&regions)
        .map_err(|e| CliError::Invalid(format!("probe `{}`: {e}", probe.name())))?;
    Ok((regions, probe))
}

fn delimiter(args: &TraceArgs) -> Result<u8, CliError> {
    u8::try_from(args.delimiter)
        .ok()
        .filter(u8::is_ascii)
        .ok_or_else(|| CliError::Invalid(format!("delimiter `{}` is not ASCII", args.delimiter)))
}

fn vehicle_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_trace(path: &Path, delim: u8) -> Result<Trace<Exact>, CliError> {
    parse_trace(&read(path)?, vehicle_id(path), delim).map_err(|e| parse_err(path, e))
}

fn render_verdict(v: &Verdict, format: Format) -> String {
    match format {
        Format::Records => v.to_record() + "\n",
        Format::Table => {
            let yes_no = |b| if b { "Yes" } else { "No" };
            let mut s = format!(
                "Vehicle:         {}\nInitial state:   {}\nFinal state:     {}\nAIRPORT visited: {}\nCENTRE visited:  {}\nERROR seen:      {}\n",
                v.vehicle_id,
                v.initial_state,
                v.final_state,
                yes_no(v.airport_visited),
                yes_no(v.centre_visited),
                yes_no(v.error_seen),
            );
            if let Some(i) = v.error_event_index {
                s.push_str(&format!("Error at event:  {i}\n"));
            }
            s.push_str(&format!("Probe result:    {:?}\n", v.result));
            s
        }
    }
}

/// Trace files named on the command line, expanding directories to their
/// `.csv` files in name order.
fn collect_traces(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            })?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && f.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::Invalid("no trace files found".into()));
    }
    Ok(out)
}

/// Runs a parsed command, writing normal output to `out`. Returns the exit
/// status.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Check {
            trace,
            config,
            input,
            format,
        } => {
            let (regions, probe) = load_config(&config)?;
            let trace = load_trace(&trace, delimiter(&input)?)?;
            let run = run_probe(&trace, &probe, &regions)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            out.write_all(render_verdict(&run.verdict, format).as_bytes())?;
            Ok(match run.verdict.result {
                ProbeResult::Accepted => 0,
                ProbeResult::Rejected => 1,
            })
        }
        Command::Report {
            paths,
            config,
            input,
            format,
        } => {
            let (regions, probe) = load_config(&config)?;
            let delim = delimiter(&input)?;
            let files = collect_traces(&paths)?;
            let parsed: Vec<Result<Trace<Exact>, CliError>> =
                files.iter().map(|f| load_trace(f, delim)).collect();
            let ok: Vec<(&Trace<Exact>, &ProbeDef)> = parsed
                .iter()
                .filter_map(|r| r.as_ref().ok())
                .map(|t| (t, &probe))
                .collect();
            let mut checked = fleet_report(&ok, &regions).rows.into_iter();
            let rows = parsed
                .iter()
                .zip(&files)
                .map(|(r, f)| match r {
                    Ok(_) => checked.next().expect("one row per parsed trace"),
                    Err(e) => ReportRow::Failed {
                        vehicle_id: vehicle_id(f),
                        message: e.to_string(),
                    },
                })
                .collect();
            let report = FleetReport { rows };
            let text = match format {
                Format::Table => report.render_table(),
                Format::Records => report.to_records(),
            };
            out.write_all(text.as_bytes())?;
            Ok(
                if report.count(ProbeResult::Accepted) == report.rows.len() {
                    0
                } else {
                    1
                },
            )
        }
        Command::Measures {
            trace,
            config,
            input,
            out: dir,
        } => {
            let (regions, probe) = load_config(&config)?;
            let trace = load_trace(&trace, delimiter(&input)?)?;
            let run = run_probe(&trace, &probe, &regions)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            let mut series: Vec<(String, String)> = Vec::new();
            for state in probe.states() {
                let m = measure_count_in_state(&run.history, state)
                    .map_err(|e| CliError::Invalid(e.to_string()))?;
                series.push((m.name.clone(), m.to_csv()));
            }
            let max = measure_max_attribute(&trace, Attribute::Latitude);
            series.push((max.name.clone(), max.to_csv()));
            for (name, csv) in series {
                let path = dir.join(format!("{name}.csv"));
                write(&path, &csv)?;
                writeln!(out, "{}", path.display())?;
            }
            Ok(0)
        }
        Command::Synth {
            count,
            seed,
            out: dir,
            route,
            faults,
            detour,
            regions,
            config_dir,
        } => {
            let regions = load_region_set(regions.as_deref(), config_dir.as_deref())?;
            let config = match &route {
                Some(p) => parse_fleet_config(&read(p)?).map_err(|e| parse_err(p, e))?,
                None => FleetConfig::default(),
            };
            let mut fault_list = match &faults {
                Some(p) => parse_faults(&read(p)?).map_err(|e| parse_err(p, e))?,
                None => Vec::new(),
            };
            if detour {
                fault_list.push(FaultSpec::default_detour());
            }
            let n_correct = count.checked_sub(fault_list.len()).ok_or_else(|| {
                CliError::Invalid(format!(
                    "count {count} is smaller than the {} faults",
                    fault_list.len()
                ))
            })?;
            let fleet = generate_fleet(n_correct, &fault_list, seed, &config, &regions)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            if fleet.is_empty() {
                return Ok(0);
            }
            fs::create_dir_all(&dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            for lt in &fleet {
                write(
                    &dir.join(format!("{}.csv", lt.trace.vehicle_id())),
                    &write_trace(&lt.trace, ','),
                )?;
            }
            write(&dir.join(LABELS_FILE), &write_labels(&fleet))?;
            writeln!(out, "wrote {} traces to {}", fleet.len(), dir.display())?;
            Ok(0)
        }
        Command::Codegen {
            trace,
            chunk_size,
            out: file,
            input,
        } => {
            let trace = load_trace(&trace, delimiter(&input)?)?;
            let text = emit_component(&trace, chunk_size as usize);
            match file {
                Some(path) => write(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Validate { config } => {
            let (regions, probe) = load_config(&config)?;
            writeln!(
                out,
                "regions: {}",
                regions.names().collect::<Vec<_>>().join(", ")
            )?;
            writeln!(
                out,
                "probe {}: {} states, {} transitions, deterministic and total",
                probe.name(),
                probe.states().len(),
                probe.transitions().len()
            )?;
            Ok(0)
        }
    }
}
