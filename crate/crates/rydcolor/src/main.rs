use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rydcolor::config::{AxisValue, GraphBlock, RunConfig, SweepAxis, SweepBlock};
use rydcolor::report::{spectrum_csv, to_json, write_atomic};
use rydcolor::runner::{classical_summary, run, sweep, write_outputs};
use rydcolor::CliError;
use rydcolor_core::evolution::instantaneous_spectrum;
use rydcolor_core::graph::{builtin_spacing, Optimizer, BUILTIN_GRAPHS};
use rydcolor_core::interactions::validate_encoding;
use rydcolor_core::presets::list_presets;

/// Graph coloring by multi-level Rydberg annealing.
#[derive(Parser)]
#[command(name = "rydcolor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in graphs and their spacings.
    ListGraphs,
    /// Named experiment presets.
    ListPresets,
    /// Check the encoding constraints without running.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Exit with status 3 when a constraint is violated.
        #[arg(long)]
        strict: bool,
    },
    /// Run the anneal and write report.json / trajectory.csv.
    Anneal(Input),
    /// Lowest eigenvalues of H(t) at the given times.
    Spectrum(Input),
    /// Exact and heuristic classical colorings.
    Classical(Input),
    /// Grid sweep over configuration parameters.
    Sweep {
        #[command(flatten)]
        input: Input,
        /// `parameter=v1,v2,...`; repeatable, combined as a grid.
        #[arg(long = "axis")]
        axes: Vec<String>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
struct Input {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Built-in graph label (A..J), overriding the preset graph.
    #[arg(long)]
    graph: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    samples: Option<usize>,
    /// Probability cutoff for the decomposition.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    trotter_steps: Option<usize>,
    /// Comma separated times in μs.
    #[arg(long, value_delimiter = ',')]
    spectrum_times: Option<Vec<f64>>,
    #[arg(long)]
    spectrum_levels: Option<usize>,
}

impl Input {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.preset {
            cfg.preset = Some(p.clone());
        }
        if let Some(g) = &self.graph {
            let block = cfg.graph.get_or_insert_with(GraphBlock::default);
            block.builtin = Some(g.clone());
            block.positions = None;
            block.edges = None;
        }
        if let Some(s) = self.trotter_steps {
            cfg.drive.get_or_insert_with(Default::default).trotter_steps = Some(s);
        }
        let out = &mut cfg.output;
        if let Some(d) = &self.out {
            out.dir = Some(d.clone());
        }
        if let Some(s) = self.samples {
            out.samples = s;
        }
        if let Some(t) = self.threshold {
            out.threshold = t;
        }
        if let Some(t) = &self.spectrum_times {
            out.spectrum_times = t.clone();
        }
        if let Some(l) = self.spectrum_levels {
            out.spectrum_levels = l;
        }
        if cfg.preset.is_none() && cfg.graph.is_none() {
            return Err(CliError::Config("give --preset, --graph or a --config file".into()));
        }
        Ok(cfg)
    }
}

fn out_dir(cfg: &RunConfig, fallback: &str) -> PathBuf {
    cfg.output.dir.clone().unwrap_or_else(|| Path::new("rydcolor-out").join(fallback))
}

fn parse_axis(s: &str) -> Result<SweepAxis, CliError> {
    let (name, values) = s.split_once('=').ok_or_else(|| CliError::Config(format!("axis `{s}` is not name=v1,v2")))?;
    let values = values
        .split(',')
        .filter(|v| !v.is_empty())
        .map(|v| v.trim().parse::<f64>().map(AxisValue::Number).unwrap_or_else(|_| AxisValue::Text(v.trim().into())))
        .collect();
    Ok(SweepAxis { parameter: name.trim().into(), values })
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::ListGraphs => {
            println!("label  name                         a(2ryd)  a(3ryd)  [um]");
            for (c, name) in BUILTIN_GRAPHS {
                let a2 = builtin_spacing(c, Optimizer::TwoRydberg).map_or("-".into(), |a| format!("{a:.2}"));
                let a3 = builtin_spacing(c, Optimizer::ThreeRydberg).map_or("-".into(), |a| format!("{a:.2}"));
                println!("{c:<6} {name:<28} {a2:>7}  {a3:>7}");
            }
        }
        Command::ListPresets => {
            for p in list_presets() {
                println!("{:<28} graph {}  {}  {}", p.name, p.graph, p.levels, p.description);
            }
        }
        Command::Validate { input, strict } => {
            let r = input.config()?.resolve()?;
            let report = validate_encoding(&r.graph, &r.levels, &r.plan)?;
            for c in &report.checks {
                println!(
                    "level {} shell {:.3} um: {:.3} < delta={} < {:.3}  {}",
                    c.level,
                    c.distance,
                    c.window.lower,
                    c.delta,
                    c.window.upper,
                    if c.passes() { "ok" } else { "VIOLATED" }
                );
            }
            if let Some(w) = report.spacing_window {
                println!("spacing window ({:.3}, {:.3}) um, a = {:.3}", w.a_min, w.a_max, report.spacing_a);
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if !report.passes() {
                eprintln!("warning: encoding constraints violated; annealing may not find a valid coloring");
                if strict {
                    return Ok(3);
                }
            }
        }
        Command::Anneal(input) => {
            let cfg = input.config()?;
            let r = cfg.resolve()?;
            let dir = out_dir(&cfg, r.preset.as_deref().unwrap_or(&r.graph.name));
            let out = run(&r)?;
            write_outputs(&dir, &out)?;
            for w in &out.report.warnings {
                eprintln!("warning: {w}");
            }
            let rep = &out.report;
            println!("valid fidelity {:.6}  invalid {:.6}  substeps {}", rep.valid_total, rep.invalid_total, rep.substeps);
            for c in rep.classes.iter().filter(|c| c.probability >= r.output.threshold) {
                println!(
                    "class {:>3}  E={:>10.4}  size {:>3}  {}  p={:.6}  e.g. {}",
                    c.rank,
                    c.energy,
                    c.size,
                    if c.valid { "valid  " } else { "invalid" },
                    c.probability,
                    c.representative
                );
            }
            println!("wrote {}", dir.display());
        }
        Command::Spectrum(input) => {
            let cfg = input.config()?;
            let r = cfg.resolve()?;
            if r.output.spectrum_times.is_empty() {
                return Err(CliError::Config("--spectrum-times is required".into()));
            }
            let trace = instantaneous_spectrum(
                &r.graph,
                &r.levels,
                &r.plan,
                &r.output.spectrum_times,
                r.output.spectrum_levels,
                None,
            )?;
            let dir = out_dir(&cfg, r.preset.as_deref().unwrap_or(&r.graph.name));
            write_atomic(&dir.join("spectrum.csv"), &spectrum_csv(&trace)?)?;
            println!("wrote {}", dir.join("spectrum.csv").display());
        }
        Command::Classical(input) => {
            let r = input.config()?.resolve()?;
            let s = classical_summary(&r.graph)?;
            print!("{}", String::from_utf8_lossy(&to_json(&s)?));
        }
        Command::Sweep { input, axes, workers } => {
            let mut cfg = input.config()?;
            if !axes.is_empty() {
                let parsed = axes.iter().map(|a| parse_axis(a)).collect::<Result<_, _>>()?;
                let w = cfg.sweep.as_ref().and_then(|s| s.workers);
                cfg.sweep = Some(SweepBlock { axes: parsed, workers: w });
            }
            let workers = workers
                .or(cfg.sweep.as_ref().and_then(|s| s.workers))
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let dir = out_dir(&cfg, "sweep");
            let rows = sweep(&cfg, workers, Some(&dir))?;
            for row in &rows {
                let params: Vec<String> = row.parameters.iter().map(|(n, v)| format!("{n}={v}")).collect();
                println!("{:>4}  {:<40} valid {:.6}", row.point, params.join(" "), row.valid_total);
            }
            println!("wrote {}", dir.join("sweep.csv").display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
