//! Report types and atomic JSON/CSV writers.

use std::io::Write;
use std::path::{Path, PathBuf};

use rydcolor_core::evolution::{SpectrumTrace, Trajectory};
use rydcolor_core::interactions::{BlockadeRadii, EncodingReport};
use serde::{Deserialize, Serialize};

use crate::config::Resolved;
use crate::CliError;

pub const REPORT_FORMAT: &str = "rydcolor-report/1";

pub const UNITS_BANNER: &str =
    "frequencies and energies in MHz as values of f/2pi; times in us; lengths in um; C6 in GHz*um^6";

pub const BASIS_NOTE: &str =
    "colorings are digit strings in vertex order v1..vN; digit 0 = ground, i = Rydberg level i; \
     basis index = sum_v digit(v) * (k+1)^(v-1)";

pub const TRAJECTORY_COLUMNS: &str =
    "time_us,norm,energy_mhz,ground_overlap,<one column per tracked class: class_<rank>>";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub units: String,
    pub basis_ordering: String,
    pub trajectory_columns: String,
}

impl Default for Header {
    fn default() -> Self {
        Self {
            format: REPORT_FORMAT.into(),
            units: UNITS_BANNER.into(),
            basis_ordering: BASIS_NOTE.into(),
            trajectory_columns: TRAJECTORY_COLUMNS.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub name: String,
    pub vertices: usize,
    /// 1-based vertex labels.
    pub edges: Vec<[usize; 2]>,
    pub spacing_a: f64,
    pub automorphism_order: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub index: usize,
    pub coloring: String,
    pub probability: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    /// Position in the energy-ordered class list.
    pub rank: usize,
    pub energy: f64,
    pub size: usize,
    pub valid: bool,
    pub probability: f64,
    pub representative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicResult {
    pub solver: String,
    pub colors: usize,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSummary {
    pub chromatic_number: usize,
    pub optimal_colorings: u64,
    pub witness: String,
    pub heuristics: Vec<HeuristicResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalGroundStates {
    pub colorings: Vec<String>,
    pub all_valid: bool,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealReport {
    pub header: Header,
    pub config: Resolved,
    pub graph: GraphSummary,
    /// Absent when some level is not driven.
    pub blockade_radii: Option<BlockadeRadii>,
    pub encoding: EncodingReport,
    pub encoding_passes: bool,
    pub warnings: Vec<String>,
    pub substeps: usize,
    pub final_norm: f64,
    pub decomposition: Vec<DecompositionEntry>,
    pub classes: Vec<ClassEntry>,
    pub valid_total: f64,
    pub invalid_total: f64,
    /// Rank of the most populated class.
    pub dominant_class: Option<usize>,
    pub final_ground_states: FinalGroundStates,
    pub classical: ClassicalSummary,
    pub trajectory: Trajectory,
    pub spectrum: Option<SpectrumTrace>,
}

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e| CliError::Io(path.to_path_buf(), e);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    let mut tmp: PathBuf = path.to_path_buf();
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    tmp.set_file_name(name);
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

fn csv_bytes<F>(fill: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        fill(&mut w).map_err(|e| CliError::Output(e.to_string()))?;
        w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    }
    Ok(buf)
}

pub fn trajectory_csv(traj: &Trajectory, tracked_ranks: &[usize]) -> Result<Vec<u8>, CliError> {
    csv_bytes(|w| {
        let mut head = vec!["time_us".to_string(), "norm".into(), "energy_mhz".into(), "ground_overlap".into()];
        head.extend(tracked_ranks.iter().map(|r| format!("class_{r}")));
        w.write_record(&head)?;
        for s in &traj.samples {
            let mut row = vec![
                s.time.to_string(),
                s.norm.to_string(),
                s.energy.to_string(),
                s.ground_overlap.map(|x| x.to_string()).unwrap_or_default(),
            ];
            row.extend(s.tracked.iter().map(f64::to_string));
            w.write_record(&row)?;
        }
        Ok(())
    })
}

pub fn spectrum_csv(trace: &SpectrumTrace) -> Result<Vec<u8>, CliError> {
    csv_bytes(|w| {
        w.write_record(["time_us", "level", "energy_mhz", "class_rank"])?;
        for (t, (ev, cls)) in trace.times.iter().zip(trace.eigenvalues.iter().zip(&trace.classes)) {
            for (lvl, (e, c)) in ev.iter().zip(cls).enumerate() {
                w.write_record([
                    t.to_string(),
                    lvl.to_string(),
                    e.to_string(),
                    c.map(|x| x.to_string()).unwrap_or_default(),
                ])?;
            }
        }
        Ok(())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: usize,
    pub parameters: Vec<(String, String)>,
    pub valid_total: f64,
    pub dominant_class: Option<usize>,
    pub dominant_valid: Option<bool>,
    pub dominant_probability: f64,
    pub encoding_passes: bool,
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<Vec<u8>, CliError> {
    csv_bytes(|w| {
        let names: Vec<String> =
            rows.first().map(|r| r.parameters.iter().map(|p| p.0.clone()).collect()).unwrap_or_default();
        let mut head = vec!["point".to_string()];
        head.extend(names);
        head.extend(
            ["valid_total", "dominant_class", "dominant_valid", "dominant_probability", "encoding_passes"]
                .map(String::from),
        );
        w.write_record(&head)?;
        for r in rows {
            let mut row = vec![r.point.to_string()];
            row.extend(r.parameters.iter().map(|p| p.1.clone()));
            row.push(r.valid_total.to_string());
            row.push(r.dominant_class.map(|c| c.to_string()).unwrap_or_default());
            row.push(r.dominant_valid.map(|c| c.to_string()).unwrap_or_default());
            row.push(r.dominant_probability.to_string());
            row.push(r.encoding_passes.to_string());
            w.write_record(&row)?;
        }
        Ok(())
    })
}

/// JSON schema for `report.json`.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
