//! TOML run configuration and its resolution into model objects.

use std::path::{Path, PathBuf};

use rydcolor_core::evolution::{AnnealOptions, DEFAULT_MAX_PHASE_CYCLES, DEFAULT_SAMPLES};
use rydcolor_core::graph::{builtin_graph, builtin_graph_at, parse_graph_name, Optimizer, Position, ProblemGraph};
use rydcolor_core::interactions::{DrivePlan, LevelScheme};
use rydcolor_core::presets::{find_preset, ExperimentPreset};
use rydcolor_core::schedule::StepRule;
use rydcolor_core::DEGENERACY_TOL;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Top-level config file. Every block is optional when `preset` is given;
/// explicit blocks override the preset field by field.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub graph: Option<GraphBlock>,
    pub levels: Option<LevelsBlock>,
    pub drive: Option<DriveBlock>,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub simulation: SimulationBlock,
    pub sweep: Option<SweepBlock>,
}

/// Either a built-in label or explicit coordinates and edges.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphBlock {
    /// Built-in label A..J.
    pub builtin: Option<String>,
    /// 2 or 3; selects the built-in spacing. Defaults to the level count.
    pub optimizer: Option<usize>,
    /// Overrides the tabulated spacing of a built-in graph (μm).
    pub spacing_a: Option<f64>,
    pub name: Option<String>,
    /// μm
    pub positions: Option<Vec<[f64; 3]>>,
    /// 0-based vertex pairs.
    pub edges: Option<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelsBlock {
    pub preset: Option<String>,
    pub k: Option<usize>,
    /// GHz·μm⁶
    pub intra: Option<Vec<f64>>,
    /// Full symmetric k×k matrix, GHz·μm⁶; the diagonal is ignored.
    pub inter: Option<Vec<Vec<f64>>>,
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveBlock {
    /// MHz (Ω/2π)
    pub omega_max: Option<Vec<f64>>,
    /// MHz (Δ/2π)
    pub delta_max: Option<Vec<f64>>,
    pub t_i: Option<f64>,
    pub t_f: Option<f64>,
    pub t_total: Option<f64>,
    pub trotter_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: Option<PathBuf>,
    pub samples: usize,
    pub threshold: f64,
    /// μs; empty disables spectrum output.
    pub spectrum_times: Vec<f64>,
    pub spectrum_levels: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { dir: None, samples: DEFAULT_SAMPLES, threshold: 1e-3, spectrum_times: Vec::new(), spectrum_levels: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationBlock {
    pub step_rule: StepRule,
    pub max_phase_cycles: f64,
    pub substeps: Option<usize>,
    /// μm
    pub cutoff: Option<f64>,
    /// MHz
    pub degeneracy_tol: f64,
}

impl Default for SimulationBlock {
    fn default() -> Self {
        Self {
            step_rule: StepRule::Midpoint,
            max_phase_cycles: DEFAULT_MAX_PHASE_CYCLES,
            substeps: None,
            cutoff: None,
            degeneracy_tol: DEGENERACY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub axes: Vec<SweepAxis>,
    pub workers: Option<usize>,
}

/// One sweep dimension. Parameters: `preset`, `graph`, `spacing_a`,
/// `trotter_steps`, `delta_max.<level>`, `omega_max.<level>` (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    pub values: Vec<AxisValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValue {
    Number(f64),
    Text(String),
}

impl std::fmt::Display for AxisValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxisValue::Number(x) => write!(f, "{x}"),
            AxisValue::Text(s) => f.write_str(s),
        }
    }
}

/// Fully resolved inputs of one run. Serialized into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub preset: Option<String>,
    pub graph: ProblemGraph,
    pub levels: LevelScheme,
    pub plan: DrivePlan,
    pub output: OutputBlock,
    pub simulation: SimulationBlock,
}

impl Resolved {
    pub fn anneal_options(&self) -> AnnealOptions {
        AnnealOptions {
            samples: self.output.samples,
            rule: self.simulation.step_rule,
            max_phase_cycles: Some(self.simulation.max_phase_cycles),
            substeps: self.simulation.substeps,
            cutoff: self.simulation.cutoff,
            degeneracy_tol: self.simulation.degeneracy_tol,
            ..AnnealOptions::default()
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Self::from_toml(&text)
    }

    pub fn from_preset(name: &str) -> Self {
        Self { preset: Some(name.to_string()), ..Self::default() }
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let preset: Option<ExperimentPreset> = self.preset.as_deref().map(find_preset).transpose()?;
        let lb = self.levels.clone().unwrap_or_default();
        let k = lb
            .k
            .or(lb.intra.as_ref().map(Vec::len))
            .or(self.graph.as_ref().and_then(|g| g.optimizer))
            .or(preset.as_ref().map(|p| p.optimizer.k()))
            .ok_or_else(|| CliError::Config("cannot determine the number of Rydberg levels".into()))?;
        let levels = resolve_levels(&lb, k, preset.as_ref())?;
        let graph = resolve_graph(self.graph.as_ref(), k, preset.as_ref())?;
        let db = self.drive.clone().unwrap_or_default();
        let base = preset.as_ref().map(ExperimentPreset::plan);
        let pick = |own: Option<f64>, from: fn(&DrivePlan) -> f64, default: f64| {
            own.or(base.as_ref().map(from)).unwrap_or(default)
        };
        let plan = DrivePlan {
            omega_max: db
                .omega_max
                .or(base.as_ref().map(|b| b.omega_max.clone()))
                .ok_or_else(|| CliError::Config("drive.omega_max missing".into()))?,
            delta_max: db
                .delta_max
                .or(base.as_ref().map(|b| b.delta_max.clone()))
                .ok_or_else(|| CliError::Config("drive.delta_max missing".into()))?,
            t_i: pick(db.t_i, |b| b.t_i, rydcolor_core::interactions::DEFAULT_T_I),
            t_f: pick(db.t_f, |b| b.t_f, rydcolor_core::interactions::DEFAULT_T_F),
            t_total: pick(db.t_total, |b| b.t_total, rydcolor_core::interactions::DEFAULT_T_TOTAL),
            trotter_steps: db
                .trotter_steps
                .or(base.as_ref().map(|b| b.trotter_steps))
                .unwrap_or(rydcolor_core::interactions::DEFAULT_TROTTER_STEPS),
        };
        plan.check_against(&levels)?;
        let out = &self.output;
        if !(0.0..1.0).contains(&out.threshold) {
            return Err(CliError::Config(format!("output.threshold {} outside [0, 1)", out.threshold)));
        }
        if !(self.simulation.max_phase_cycles > 0.0) || !(self.simulation.degeneracy_tol >= 0.0) {
            return Err(CliError::Config("simulation tolerances must be positive".into()));
        }
        Ok(Resolved {
            preset: preset.map(|p| p.name),
            graph,
            levels,
            plan,
            output: out.clone(),
            simulation: self.simulation.clone(),
        })
    }
}

fn resolve_levels(lb: &LevelsBlock, k: usize, preset: Option<&ExperimentPreset>) -> Result<LevelScheme, CliError> {
    let name = lb.preset.clone().or(preset.map(|p| p.levels.clone()));
    let mut levels = match (&lb.intra, name) {
        (Some(intra), _) => {
            let inter = lb
                .inter
                .as_ref()
                .ok_or_else(|| CliError::Config("levels.inter required with levels.intra".into()))?;
            let s = LevelScheme {
                k: intra.len(),
                c6_intra: intra.clone(),
                c6_inter: inter.iter().enumerate().map(|(i, r)| {
                    r.iter().enumerate().map(|(j, &c)| if i == j { 0.0 } else { c }).collect()
                }).collect(),
                labels: lb.labels.clone().unwrap_or_default(),
            };
            s.check()?;
            s
        }
        (None, Some(name)) => LevelScheme::preset(&name, k)?,
        (None, None) => LevelScheme::rb_65_70_75(k)?,
    };
    if levels.k != k {
        return Err(CliError::Config(format!("level scheme has {} levels, expected {k}", levels.k)));
    }
    if let Some(l) = &lb.labels {
        levels.labels = l.clone();
        levels.check()?;
    }
    Ok(levels)
}

fn resolve_graph(gb: Option<&GraphBlock>, k: usize, preset: Option<&ExperimentPreset>) -> Result<ProblemGraph, CliError> {
    let gb = gb.cloned().unwrap_or_default();
    if let Some(pos) = gb.positions {
        let edges = gb.edges.ok_or_else(|| CliError::Config("graph.edges required with graph.positions".into()))?;
        let positions: Vec<Position> = pos.iter().map(|p| Position::new(p[0], p[1], p[2])).collect();
        let a = match gb.spacing_a {
            Some(a) => a,
            None => {
                let g = ProblemGraph::new("tmp", positions.clone(), edges.iter().map(|e| (e[0], e[1])), 1.0)?;
                g.edge_shells().first().copied().unwrap_or(1.0)
            }
        };
        return Ok(ProblemGraph::new(
            gb.name.unwrap_or_else(|| "custom".into()),
            positions,
            edges.iter().map(|e| (e[0], e[1])),
            a,
        )?);
    }
    let label = match (&gb.builtin, preset) {
        (Some(s), _) => parse_graph_name(s)?,
        (None, Some(p)) => p.graph,
        (None, None) => return Err(CliError::Config("no graph given".into())),
    };
    let opt = gb.optimizer.unwrap_or(k);
    let optimizer = Optimizer::from_k(opt)
        .ok_or_else(|| CliError::Config(format!("optimizer must be 2 or 3, got {opt}")))?;
    let mut g = match gb.spacing_a {
        Some(a) => builtin_graph_at(label, a)?,
        None => builtin_graph(label, optimizer)?,
    };
    if let Some(n) = gb.name {
        g.name = n;
    }
    Ok(g)
}

/// Applies one sweep coordinate to a config.
pub fn apply_axis(cfg: &mut RunConfig, parameter: &str, value: &AxisValue) -> Result<(), CliError> {
    let num = || match value {
        AxisValue::Number(x) => Ok(*x),
        AxisValue::Text(s) => s.parse::<f64>().map_err(|_| CliError::Config(format!("{parameter}: `{s}` is not a number"))),
    };
    let text = value.to_string();
    match parameter {
        "preset" => cfg.preset = Some(text),
        "graph" => cfg.graph.get_or_insert_with(GraphBlock::default).builtin = Some(text),
        "spacing_a" => cfg.graph.get_or_insert_with(GraphBlock::default).spacing_a = Some(num()?),
        "trotter_steps" => cfg.drive.get_or_insert_with(DriveBlock::default).trotter_steps = Some(num()? as usize),
        p => {
            let (field, level) = p
                .split_once('.')
                .and_then(|(f, l)| Some((f, l.parse::<usize>().ok()?)))
                .ok_or_else(|| CliError::Config(format!("unknown sweep parameter `{p}`")))?;
            if level == 0 {
                return Err(CliError::Config("sweep levels are 1-based".into()));
            }
            let current = cfg.clone().resolve()?;
            let drive = cfg.drive.get_or_insert_with(DriveBlock::default);
            let (slot, cur) = match field {
                "delta_max" => (&mut drive.delta_max, current.plan.delta_max),
                "omega_max" => (&mut drive.omega_max, current.plan.omega_max),
                _ => return Err(CliError::Config(format!("unknown sweep parameter `{p}`"))),
            };
            let mut v = slot.clone().unwrap_or(cur);
            let entry = v
                .get_mut(level - 1)
                .ok_or_else(|| CliError::Config(format!("{p}: level out of range")))?;
            *entry = num()?;
            *slot = Some(v);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_resolves() {
        let r = RunConfig::from_preset("fig4-triangle-2ryd").resolve().unwrap();
        assert_eq!(r.graph.n(), 3);
        assert_eq!(r.levels.k, 2);
        assert_eq!(r.plan.delta_max, [8.0, 19.0]);
    }

    #[test]
    fn custom_blocks_parse() {
        let cfg = RunConfig::from_toml(
            r#"
            [graph]
            name = "pair"
            positions = [[0, 0, 0], [5.0, 0, 0]]
            edges = [[0, 1]]
            [levels]
            intra = [361.0, 862.7]
            inter = [[0, -94.1], [-94.1, 0]]
            [drive]
            omega_max = [3, 7]
            delta_max = [8, 19]
            trotter_steps = 50
            "#,
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        assert_eq!(r.graph.spacing_a, 5.0);
        assert_eq!(r.plan.trotter_steps, 50);
        assert_eq!(r.levels.c6(1, 2), -94.1);
    }

    #[test]
    fn override_and_errors() {
        let cfg = RunConfig::from_toml("preset = \"fig8a-equal-drive\"\n[graph]\nbuiltin = \"D\"\n").unwrap();
        assert_eq!(cfg.resolve().unwrap().graph.n(), 5);
        assert!(RunConfig::from_toml("bogus = 1").is_err());
        assert!(RunConfig::from_preset("nope").resolve().is_err());
        let bad = RunConfig::from_toml("preset = \"fig4-triangle-2ryd\"\n[drive]\ndelta_max = [1.0]\n").unwrap();
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn axes_apply() {
        let mut cfg = RunConfig::from_preset("fig6-pentagon-3ryd");
        apply_axis(&mut cfg, "delta_max.1", &AxisValue::Number(3.0)).unwrap();
        assert_eq!(cfg.resolve().unwrap().plan.delta_max, [3.0, 10.0, 15.0]);
        apply_axis(&mut cfg, "graph", &AxisValue::Text("I".into())).unwrap();
        assert_eq!(cfg.resolve().unwrap().graph.n(), 4);
        assert!(apply_axis(&mut cfg, "delta_max.9", &AxisValue::Number(1.0)).is_err());
        assert!(apply_axis(&mut cfg, "colour", &AxisValue::Number(1.0)).is_err());
    }
}
