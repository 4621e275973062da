//! validate → anneal → analyze pipeline, and concurrent parameter sweeps.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rydcolor_core::analysis::{class_lookup, classify_states, decompose, fidelity_by_class, is_valid_coloring};
use rydcolor_core::basis::{Basis, DENSE_LIMIT};
use rydcolor_core::classical::{chromatic_bruteforce, dsatur, final_ground_states, rlf_mis_first, welsh_powell, CHROMATIC_LIMIT};
use rydcolor_core::evolution::{anneal, instantaneous_spectrum};
use rydcolor_core::graph::automorphisms;
use rydcolor_core::hamiltonian::DiagonalModel;
use rydcolor_core::interactions::{blockade_radii, validate_encoding};

use crate::config::{apply_axis, AxisValue, Resolved, RunConfig};
use crate::report::*;
use crate::CliError;

/// Number of lowest-energy classes whose weight is tracked over time.
pub const TRACKED_CLASSES: usize = 4;

/// Lowest-energy classes always listed in the report.
const LISTED_CLASSES: usize = 6;

pub struct RunOutput {
    pub report: AnnealReport,
    pub tracked_ranks: Vec<usize>,
}

fn render(digits: &[usize]) -> String {
    digits.iter().map(|d| char::from_digit(*d as u32, 36).unwrap_or('?')).collect()
}

/// Classical reference data for the graph.
pub fn classical_summary(g: &rydcolor_core::graph::ProblemGraph) -> Result<ClassicalSummary, CliError> {
    let (chi, count, witness) = if g.n() <= CHROMATIC_LIMIT {
        let r = chromatic_bruteforce(g)?;
        (r.chi, r.count, render(&r.witness))
    } else {
        (0, 0, String::new())
    };
    let mut heuristics = Vec::new();
    let (c, k) = dsatur(g);
    heuristics.push(HeuristicResult { solver: "dsatur".into(), colors: k, witness: render(&c) });
    let (c, k) = welsh_powell(g);
    heuristics.push(HeuristicResult { solver: "welsh-powell".into(), colors: k, witness: render(&c) });
    if let Ok((c, k)) = rlf_mis_first(g) {
        heuristics.push(HeuristicResult { solver: "rlf-mis-first".into(), colors: k, witness: render(&c) });
    }
    Ok(ClassicalSummary { chromatic_number: chi, optimal_colorings: count, witness, heuristics })
}

/// Runs one resolved configuration without touching the filesystem.
pub fn run(cfg: &Resolved) -> Result<RunOutput, CliError> {
    let (g, levels, plan) = (&cfg.graph, &cfg.levels, &cfg.plan);
    let encoding = validate_encoding(g, levels, plan)?;
    // Undefined for an undriven level.
    let radii = blockade_radii(levels, &plan.omega_max).ok();
    let basis = Basis::new(g.n(), levels.k)?;
    let tol = cfg.simulation.degeneracy_tol;
    let classes = classify_states(g, levels, &plan.delta_max, tol)?;
    let tracked_ranks: Vec<usize> = (0..classes.len().min(TRACKED_CLASSES)).collect();
    let mut opts = cfg.anneal_options();
    opts.tracked = tracked_ranks.iter().map(|&r| classes[r].members.clone()).collect();
    let out = anneal(g, levels, plan, &opts)?;
    let fid = fidelity_by_class(&out.state, &classes);
    let threshold = cfg.output.threshold;
    let decomposition = decompose(&out.state, threshold)?
        .into_iter()
        .map(|(index, probability)| {
            let digits = basis.decode(index).expect("index from state");
            DecompositionEntry { index, coloring: render(&digits), probability, valid: is_valid_coloring(&digits, g) }
        })
        .collect();
    let class_entries = classes
        .iter()
        .zip(&fid.per_class)
        .enumerate()
        .filter(|(rank, (_, &p))| *rank < LISTED_CLASSES || (p >= threshold && p > 0.0))
        .map(|(rank, (c, &p))| ClassEntry {
            rank,
            energy: c.energy,
            size: c.members.len(),
            valid: c.valid,
            probability: p,
            representative: render(&c.representative),
        })
        .collect();
    let dominant_class = fid
        .per_class
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|x| x.0);
    let ground = final_ground_states(g, levels, &plan.delta_max, tol)?;
    let model = DiagonalModel::new(g, levels, None)?;
    let final_ground_states = FinalGroundStates {
        all_valid: ground.iter().all(|&i| is_valid_coloring(&basis.decode(i).unwrap(), g)),
        energy: ground.first().map(|&i| model.energy(i, &plan.delta_max)).unwrap_or(0.0),
        colorings: ground.iter().map(|&i| basis.label(i)).collect(),
    };
    let spectrum = if cfg.output.spectrum_times.is_empty() {
        None
    } else {
        let lookup = class_lookup(&classes, basis.dim());
        Some(instantaneous_spectrum(g, levels, plan, &cfg.output.spectrum_times, cfg.output.spectrum_levels, Some(&lookup))?)
    };
    let mut warnings = encoding.warnings.clone();
    for c in encoding.checks.iter().filter(|c| !c.passes()) {
        warnings.push(format!(
            "encoding constraint violated: level {} at {:.3} um needs {:.3} < delta < {:.3}, got {}",
            c.level, c.distance, c.window.lower, c.window.upper, c.delta
        ));
    }
    if let Some(w) = encoding.spacing_window {
        if w.is_empty() {
            warnings.push(format!("empty spacing window ({:.3}, {:.3}) um", w.a_min, w.a_max));
        }
    }
    let report = AnnealReport {
        header: Header::default(),
        config: cfg.clone(),
        graph: GraphSummary {
            name: g.name.clone(),
            vertices: g.n(),
            edges: g.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
            spacing_a: g.spacing_a,
            automorphism_order: automorphisms(g)?.order(),
            dimension: basis.dim(),
        },
        blockade_radii: radii,
        encoding_passes: encoding.passes(),
        encoding,
        warnings,
        substeps: out.substeps,
        final_norm: out.state.norm(),
        decomposition,
        classes: class_entries,
        valid_total: fid.valid_total,
        invalid_total: fid.invalid_total,
        dominant_class,
        final_ground_states,
        classical: classical_summary(g)?,
        trajectory: out.trajectory,
        spectrum,
    };
    Ok(RunOutput { report, tracked_ranks })
}

/// Writes report.json, trajectory.csv and, when present, spectrum.csv.
pub fn write_outputs(dir: &Path, out: &RunOutput) -> Result<(), CliError> {
    write_atomic(&dir.join("report.json"), &to_json(&out.report)?)?;
    write_atomic(&dir.join("trajectory.csv"), &trajectory_csv(&out.report.trajectory, &out.tracked_ranks)?)?;
    if let Some(s) = &out.report.spectrum {
        write_atomic(&dir.join("spectrum.csv"), &spectrum_csv(s)?)?;
    }
    Ok(())
}

/// Cartesian product of the sweep axes in row-major order.
pub fn sweep_points(cfg: &RunConfig) -> Result<Vec<Vec<(String, AxisValue)>>, CliError> {
    let axes = cfg.sweep.as_ref().map(|s| s.axes.as_slice()).unwrap_or_default();
    if axes.is_empty() || axes.iter().any(|a| a.values.is_empty()) {
        return Err(CliError::Config("sweep needs at least one axis with values".into()));
    }
    let mut points: Vec<Vec<(String, AxisValue)>> = vec![vec![]];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((axis.parameter.clone(), v.clone()));
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Runs every sweep point on up to `workers` threads. Per-point reports go
/// to `<dir>/points/<nnnn>/` and the summary to `<dir>/sweep.csv`.
pub fn sweep(cfg: &RunConfig, workers: usize, dir: Option<&Path>) -> Result<Vec<SweepRow>, CliError> {
    let points = sweep_points(cfg)?;
    let resolved: Vec<Resolved> = points
        .iter()
        .map(|p| {
            let mut c = cfg.clone();
            c.sweep = None;
            for (name, v) in p {
                apply_axis(&mut c, name, v)?;
            }
            c.resolve()
        })
        .collect::<Result<_, _>>()?;
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<SweepRow, CliError>>>> =
        Mutex::new((0..points.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, points.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= points.len() {
                    break;
                }
                let row = run_point(i, &points[i], &resolved[i], dir);
                results.lock().unwrap()[i] = Some(row);
            });
        }
    });
    let rows: Vec<SweepRow> =
        results.into_inner().unwrap().into_iter().map(|r| r.expect("every point visited")).collect::<Result<_, _>>()?;
    if let Some(d) = dir {
        write_atomic(&d.join("sweep.csv"), &sweep_csv(&rows)?)?;
    }
    Ok(rows)
}

fn run_point(i: usize, point: &[(String, AxisValue)], cfg: &Resolved, dir: Option<&Path>) -> Result<SweepRow, CliError> {
    let out = run(cfg)?;
    if let Some(d) = dir {
        write_outputs(&d.join("points").join(format!("{i:04}")), &out)?;
    }
    let r = &out.report;
    let dom = r.dominant_class.and_then(|c| r.classes.iter().find(|e| e.rank == c));
    Ok(SweepRow {
        point: i,
        parameters: point.iter().map(|(n, v)| (n.clone(), v.to_string())).collect(),
        valid_total: r.valid_total,
        dominant_class: r.dominant_class,
        dominant_valid: dom.map(|d| d.valid),
        dominant_probability: dom.map_or(0.0, |d| d.probability),
        encoding_passes: r.encoding_passes,
    })
}

/// Dense spectrum limit re-exported for CLI messages.
pub const SPECTRUM_LIMIT: usize = DENSE_LIMIT;
