//! Built-in experiment presets.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{builtin_graph, Optimizer, ProblemGraph};
use crate::interactions::{DrivePlan, LevelScheme, DEFAULT_TROTTER_STEPS, DEFAULT_T_F, DEFAULT_T_I, DEFAULT_T_TOTAL};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentPreset {
    pub name: String,
    pub graph: char,
    pub optimizer: Optimizer,
    pub levels: String,
    pub omega_max: Vec<f64>,
    pub delta_max: Vec<f64>,
    pub t_i: f64,
    pub t_f: f64,
    pub t_total: f64,
    pub trotter_steps: usize,
    pub description: String,
}

impl ExperimentPreset {
    pub fn graph(&self) -> Result<ProblemGraph> {
        builtin_graph(self.graph, self.optimizer)
    }

    pub fn level_scheme(&self) -> Result<LevelScheme> {
        LevelScheme::preset(&self.levels, self.optimizer.k())
    }

    pub fn plan(&self) -> DrivePlan {
        DrivePlan {
            omega_max: self.omega_max.clone(),
            delta_max: self.delta_max.clone(),
            t_i: self.t_i,
            t_f: self.t_f,
            t_total: self.t_total,
            trotter_steps: self.trotter_steps,
        }
    }
}

fn preset(name: &str, graph: char, k: usize, levels: &str, omega: &[f64], delta: &[f64], desc: &str) -> ExperimentPreset {
    ExperimentPreset {
        name: name.to_string(),
        graph,
        optimizer: Optimizer::from_k(k).unwrap(),
        levels: levels.to_string(),
        omega_max: omega.to_vec(),
        delta_max: delta.to_vec(),
        t_i: DEFAULT_T_I,
        t_f: DEFAULT_T_F,
        t_total: DEFAULT_T_TOTAL,
        trotter_steps: DEFAULT_TROTTER_STEPS,
        description: desc.to_string(),
    }
}

const RB1: &str = "rb-65-70-75";
const RB2: &str = "rb-60-65-75";
const OM2: [f64; 2] = [3.0, 7.0];
const OM3: [f64; 3] = [1.0, 2.0, 5.0];
const DE3: [f64; 3] = [5.0, 10.0, 15.0];

/// Every built-in preset.
pub fn list_presets() -> Vec<ExperimentPreset> {
    let mut out = Vec::new();
    for (tag, g) in [("triangle", 'A'), ("square", 'B'), ("diamond", 'C'), ("3fan", 'D')] {
        out.push(preset(&alloc::format!("fig4-{tag}-2ryd"), g, 2, RB1, &OM2, &[8.0, 19.0], "equidistant graph, 2 levels"));
        out.push(preset(&alloc::format!("fig4-{tag}-3ryd"), g, 3, RB1, &OM3, &DE3, "equidistant graph, 3 levels"));
    }
    for (tag, g) in [("triangle-lattice", 'E'), ("ladder", 'F')] {
        out.push(preset(&alloc::format!("fig5-{tag}-2ryd"), g, 2, RB1, &OM2, &[12.0, 14.0], "larger equidistant graph, 2 levels"));
        out.push(preset(&alloc::format!("fig5-{tag}-3ryd"), g, 3, RB1, &OM3, &DE3, "larger equidistant graph, 3 levels"));
    }
    for (tag, g) in [("triangleK4", 'G'), ("squareK4", 'H'), ("tetrahedron", 'I')] {
        out.push(preset(&alloc::format!("fig6-{tag}-3ryd"), g, 3, RB1, &OM3, &DE3, "K4 embedding"));
    }
    out.push(preset("fig6-pentagon-3ryd", 'J', 3, RB2, &[2.0, 3.0, 5.0], &[2.5, 10.0, 15.0], "wheel W6 with two edge lengths"));
    out.push(preset("fig8a-equal-drive", 'C', 2, RB1, &[3.0, 3.0], &[10.0, 10.0], "protocol (a): equal drive and detuning"));
    out.push(preset("fig8b-unequal-drive", 'C', 2, RB1, &[3.0, 7.0], &[10.0, 10.0], "protocol (b): stronger level-2 drive"));
    out.push(preset("fig8c-optimized", 'C', 2, RB1, &[3.0, 7.0], &[8.0, 19.0], "protocol (c): stronger level-2 drive and detuning"));
    out
}

/// Looks up a preset by name. A missing `-3ryd`/`-2ryd` suffix is accepted
/// when the name is otherwise unique.
pub fn find_preset(name: &str) -> Result<ExperimentPreset> {
    let all = list_presets();
    if let Some(p) = all.iter().find(|p| p.name == name) {
        return Ok(p.clone());
    }
    let hits: Vec<&ExperimentPreset> = all
        .iter()
        .filter(|p| p.name.strip_suffix("-2ryd").or_else(|| p.name.strip_suffix("-3ryd")) == Some(name))
        .collect();
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

/// The three robustness protocols, instantiated on `graph`.
pub fn robustness_protocols(graph: char) -> Result<Vec<ExperimentPreset>> {
    let mut out = vec![];
    for n in ["fig8a-equal-drive", "fig8b-unequal-drive", "fig8c-optimized"] {
        let mut p = find_preset(n)?;
        p.graph = graph;
        p.graph()?;
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_consistent() {
        for p in list_presets() {
            let g = p.graph().unwrap();
            let l = p.level_scheme().unwrap();
            p.plan().check_against(&l).unwrap();
            assert!(g.n() >= 3, "{}", p.name);
        }
    }

    #[test]
    fn lookups() {
        let p = find_preset("fig4-triangle-2ryd").unwrap();
        assert_eq!((p.delta_max.as_slice(), p.omega_max.as_slice()), (&[8.0, 19.0][..], &[3.0, 7.0][..]));
        assert_eq!(find_preset("fig8a-equal-drive").unwrap().omega_max, [3.0, 3.0]);
        assert_eq!(find_preset("fig6-pentagon-3ryd").unwrap().levels, "rb-60-65-75");
        assert_eq!(find_preset("fig6-squareK4").unwrap().graph, 'H');
        assert!(find_preset("fig4-triangle").is_err());
        assert!(find_preset("nope").is_err());
        assert_eq!(robustness_protocols('D').unwrap()[2].graph, 'D');
    }
}
