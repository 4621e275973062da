//! Van der Waals interaction model, blockade radii and the encoding
//! constraint validator.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::ProblemGraph;
use crate::DISTANCE_TOL;

/// Rydberg level scheme.
///
/// Levels are 1-based in every accessor (`1..=k`); `c6_inter[i][j]` is
/// stored 0-based with an unused zero diagonal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelScheme {
    pub k: usize,
    /// GHz·μm⁶
    pub c6_intra: Vec<f64>,
    /// GHz·μm⁶, symmetric
    pub c6_inter: Vec<Vec<f64>>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub labels: Vec<String>,
}

/// Named coefficient sets shipped with the crate.
pub const LEVEL_PRESETS: [&str; 2] = ["rb-65-70-75", "rb-60-65-75"];

impl LevelScheme {
    /// Builds a scheme from intra coefficients and the upper triangle of
    /// inter coefficients in the order (1,2), (1,3), .., (2,3), ...
    pub fn new(c6_intra: Vec<f64>, inter_upper: &[f64], labels: Vec<String>) -> Result<Self> {
        let k = c6_intra.len();
        let expected = k * k.saturating_sub(1) / 2;
        if inter_upper.len() != expected {
            return Err(Error::InvalidLevels(format!(
                "{k} levels need {expected} inter coefficients, got {}",
                inter_upper.len()
            )));
        }
        let mut m = vec![vec![0.0; k]; k];
        let mut it = inter_upper.iter();
        for i in 0..k {
            for j in i + 1..k {
                let c = *it.next().unwrap();
                m[i][j] = c;
                m[j][i] = c;
            }
        }
        let s = Self { k, c6_intra, c6_inter: m, labels };
        s.check()?;
        Ok(s)
    }

    /// Hard checks: k ≥ 1, square symmetric inter matrix, finite values,
    /// positive intra coefficients.
    pub fn check(&self) -> Result<()> {
        let k = self.k;
        if k == 0 || self.c6_intra.len() != k {
            return Err(Error::InvalidLevels(format!("expected {k} intra coefficients")));
        }
        if self.c6_inter.len() != k || self.c6_inter.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidLevels("inter matrix must be k x k".into()));
        }
        if self.c6_intra.iter().any(|&c| !(c.is_finite() && c > 0.0)) {
            return Err(Error::InvalidLevels("intra coefficients must be positive".into()));
        }
        for i in 0..k {
            for j in 0..k {
                let c = self.c6_inter[i][j];
                if !c.is_finite() || (i != j && (c - self.c6_inter[j][i]).abs() > 1e-12) {
                    return Err(Error::InvalidLevels("inter matrix must be finite and symmetric".into()));
                }
            }
        }
        if !self.labels.is_empty() && self.labels.len() != k {
            return Err(Error::InvalidLevels(format!("expected {k} labels")));
        }
        Ok(())
    }

    /// Soft checks that are reported rather than rejected.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        for i in 0..self.k {
            for j in i + 1..self.k {
                let c = self.c6_inter[i][j];
                if c >= 0.0 {
                    w.push(format!("C6({},{}) = {c} is not negative", i + 1, j + 1));
                }
                if c.abs() >= self.c6_intra[i].min(self.c6_intra[j]) {
                    w.push(format!(
                        "|C6({},{})| = {} is not below min(C6({}), C6({}))",
                        i + 1,
                        j + 1,
                        c.abs(),
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        w
    }

    /// Coefficient between Rydberg levels `i` and `j` (1-based).
    #[inline]
    pub fn c6(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.c6_intra[i - 1]
        } else {
            self.c6_inter[i - 1][j - 1]
        }
    }

    /// Keeps only the first `k` levels.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.k {
            return Err(Error::InvalidLevels(format!("cannot truncate {} levels to {k}", self.k)));
        }
        Ok(Self {
            k,
            c6_intra: self.c6_intra[..k].to_vec(),
            c6_inter: self.c6_inter[..k].iter().map(|r| r[..k].to_vec()).collect(),
            labels: self.labels.iter().take(k).cloned().collect(),
        })
    }

    /// States 65S, 70S, 75S; `k = 2` keeps the first two.
    pub fn rb_65_70_75(k: usize) -> Result<Self> {
        let full = Self::new(
            vec![361.0, 862.7, 1984.5],
            &[-94.1, -35.0, -226.7],
            vec!["65S".into(), "70S".into(), "75S".into()],
        )?;
        full.truncate(k)
    }

    /// States 60S, 65S, 75S.
    pub fn rb_60_65_75(k: usize) -> Result<Self> {
        let full = Self::new(
            vec![138.9, 360.7, 1948.4],
            &[-28.5, -8.0, -34.9],
            vec!["60S".into(), "65S".into(), "75S".into()],
        )?;
        full.truncate(k)
    }

    /// Looks up one of [`LEVEL_PRESETS`].
    pub fn preset(name: &str, k: usize) -> Result<Self> {
        match name {
            "rb-65-70-75" => Self::rb_65_70_75(k),
            "rb-60-65-75" => Self::rb_60_65_75(k),
            _ => Err(Error::InvalidLevels(format!("unknown level preset `{name}`"))),
        }
    }
}

/// Drive amplitudes and the anneal timing.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DrivePlan {
    /// Peak Rabi frequencies Ω/2π, MHz.
    pub omega_max: Vec<f64>,
    /// Peak detunings Δ/2π, MHz.
    pub delta_max: Vec<f64>,
    /// μs
    pub t_i: f64,
    /// μs
    pub t_f: f64,
    /// Total duration T, μs.
    pub t_total: f64,
    pub trotter_steps: usize,
}

pub const DEFAULT_T_I: f64 = 0.4;
pub const DEFAULT_T_F: f64 = 8.0;
pub const DEFAULT_T_TOTAL: f64 = 8.4;
pub const DEFAULT_TROTTER_STEPS: usize = 300;

impl DrivePlan {
    /// Plan with the default timing (0.4, 8, 8.4 μs) and 300 steps.
    pub fn standard(omega_max: Vec<f64>, delta_max: Vec<f64>) -> Self {
        Self {
            omega_max,
            delta_max,
            t_i: DEFAULT_T_I,
            t_f: DEFAULT_T_F,
            t_total: DEFAULT_T_TOTAL,
            trotter_steps: DEFAULT_TROTTER_STEPS,
        }
    }

    pub fn k(&self) -> usize {
        self.omega_max.len()
    }

    /// Checks timing order and lengths. Zero drive amplitudes are accepted
    /// because a switched-off drive is a useful control run.
    pub fn check(&self) -> Result<()> {
        if self.omega_max.len() != self.delta_max.len() || self.omega_max.is_empty() {
            return Err(Error::InvalidPlan("omega_max and delta_max must have equal nonzero length".into()));
        }
        if !(0.0 < self.t_i && self.t_i < self.t_f && self.t_f < self.t_total) {
            return Err(Error::InvalidPlan(format!(
                "need 0 < t_i < t_f < T, got {}, {}, {}",
                self.t_i, self.t_f, self.t_total
            )));
        }
        if self.omega_max.iter().any(|&o| !(o.is_finite() && o >= 0.0)) {
            return Err(Error::InvalidPlan("omega_max must be finite and non-negative".into()));
        }
        if self.delta_max.iter().any(|&d| !(d.is_finite() && d > 0.0)) {
            return Err(Error::InvalidPlan("delta_max must be positive".into()));
        }
        if self.trotter_steps == 0 {
            return Err(Error::InvalidPlan("trotter_steps must be at least 1".into()));
        }
        Ok(())
    }

    pub fn check_against(&self, levels: &LevelScheme) -> Result<()> {
        self.check()?;
        if self.k() != levels.k {
            return Err(Error::DimensionMismatch(format!(
                "plan drives {} levels, scheme has {}",
                self.k(),
                levels.k
            )));
        }
        Ok(())
    }
}

/// Pair shift C6/r⁶ in MHz for C6 in GHz·μm⁶ and r in μm.
pub fn vdw_shift(c6: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveDistance(r));
    }
    Ok(shift(c6, r))
}

#[inline]
pub(crate) fn shift(c6: f64, r: f64) -> f64 {
    let r2 = r * r;
    c6 * 1000.0 / (r2 * r2 * r2)
}

/// Distance at which |C6|/r⁶ equals `omega_eff` (MHz).
pub fn blockade_radius(c6: f64, omega_eff: f64) -> Result<f64> {
    if !(omega_eff > 0.0) {
        return Err(Error::NonPositiveFrequency(omega_eff));
    }
    Ok(libm::pow(c6.abs() * 1000.0 / omega_eff, 1.0 / 6.0))
}

/// Blockade radii at the resonance point for every level and level pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockadeRadii {
    /// R_b^(i), μm
    pub intra: Vec<f64>,
    /// (i, j, R_b^(ij)) with 1-based i < j, μm
    pub inter: Vec<(usize, usize, f64)>,
}

pub fn blockade_radii(levels: &LevelScheme, omega_max: &[f64]) -> Result<BlockadeRadii> {
    if omega_max.len() != levels.k {
        return Err(Error::DimensionMismatch("omega_max length differs from k".into()));
    }
    let mut intra = Vec::with_capacity(levels.k);
    for i in 1..=levels.k {
        intra.push(blockade_radius(levels.c6(i, i), omega_max[i - 1])?);
    }
    let mut inter = Vec::new();
    for i in 1..=levels.k {
        for j in i + 1..=levels.k {
            let avg = (omega_max[i - 1] + omega_max[j - 1]) / 2.0;
            inter.push((i, j, blockade_radius(levels.c6(i, j), avg)?));
        }
    }
    Ok(BlockadeRadii { intra, inter })
}

/// Admissible lattice spacing for equidistant embeddings.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpacingWindow {
    pub a_min: f64,
    pub a_max: f64,
}

impl SpacingWindow {
    pub fn is_empty(&self) -> bool {
        self.a_min >= self.a_max
    }

    pub fn contains(&self, a: f64) -> bool {
        self.a_min < a && a < self.a_max
    }
}

/// `a_min` is the largest inter-level radius, `a_max` is 0.8 R_b^(1).
pub fn spacing_window(levels: &LevelScheme, omega_max: &[f64]) -> Result<SpacingWindow> {
    if levels.k < 2 {
        return Err(Error::InvalidLevels("spacing window needs at least two levels".into()));
    }
    let radii = blockade_radii(levels, omega_max)?;
    let a_min = radii.inter.iter().map(|t| t.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(SpacingWindow { a_min, a_max: 0.8 * radii.intra[0] })
}

/// Detuning bounds (MHz).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
}

impl Window {
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

/// Interaction values at one pair distance. Indices are 0-based level
/// offsets: `intra[i]` is V^(i+1).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShellInteractions {
    pub distance: f64,
    pub intra: Vec<f64>,
    /// (i, j, V^(ij)) with 1-based i < j
    pub inter: Vec<(usize, usize, f64)>,
}

impl ShellInteractions {
    pub fn at(levels: &LevelScheme, distance: f64) -> Self {
        let intra = (1..=levels.k).map(|i| shift(levels.c6(i, i), distance)).collect();
        let mut inter = Vec::new();
        for i in 1..=levels.k {
            for j in i + 1..=levels.k {
                inter.push((i, j, shift(levels.c6(i, j), distance)));
            }
        }
        Self { distance, intra, inter }
    }
}

/// Constraint check for one level on one edge shell.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelCheck {
    /// 1-based level
    pub level: usize,
    pub distance: f64,
    /// Window with the configuration-specific upper bound.
    pub window: Window,
    /// Upper bound of the worst-case form |V^(i) + (α−1) V_max^(ij)|.
    pub upper_alpha: f64,
    pub delta: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub upper_alpha_ok: bool,
}

impl LevelCheck {
    pub fn passes(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EncodingReport {
    pub shells: Vec<ShellInteractions>,
    pub checks: Vec<LevelCheck>,
    pub max_degree: usize,
    pub spacing_window: Option<SpacingWindow>,
    pub spacing_a: f64,
    pub warnings: Vec<String>,
}

impl EncodingReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(LevelCheck::passes)
    }

    pub fn check(&self, level: usize, shell: usize) -> Option<&LevelCheck> {
        let d = self.shells.get(shell)?.distance;
        self.checks.iter().find(|c| c.level == level && (c.distance - d).abs() <= DISTANCE_TOL)
    }

    /// Per-level window intersected over all shells.
    pub fn level_window(&self, level: usize) -> Window {
        let mut w = Window { lower: 0.0, upper: f64::INFINITY };
        for c in self.checks.iter().filter(|c| c.level == level) {
            w.lower = w.lower.max(c.window.lower);
            w.upper = w.upper.min(c.window.upper);
        }
        w
    }
}

/// Checks the detuning window of every level on every edge shell.
///
/// Lower bound: the largest inter-level shift magnitude at the shell
/// distance. Upper bound: the energy of putting both endpoints of a shell
/// edge in level `i`, lowered by the most favourable proper assignment of
/// the remaining neighbours of one endpoint to other labels. The minimum is
/// taken over all edges of the shell and both endpoints.
pub fn validate_encoding(g: &ProblemGraph, levels: &LevelScheme, plan: &DrivePlan) -> Result<EncodingReport> {
    plan.check_against(levels)?;
    let k = levels.k;
    let dist = g.distance_matrix();
    let adj = g.adjacency();
    let alpha = g.max_degree();
    let shells: Vec<ShellInteractions> =
        g.edge_shells().into_iter().map(|d| ShellInteractions::at(levels, d)).collect();
    let mut checks = Vec::new();
    for sh in &shells {
        let shell_edges: Vec<(usize, usize)> = g
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| (dist[u][v] - sh.distance).abs() <= DISTANCE_TOL)
            .collect();
        for i in 1..=k {
            let mut lower = 0.0_f64;
            let mut vmax_inter = 0.0_f64;
            for &(a, b, v) in &sh.inter {
                if a == i || b == i {
                    lower = lower.max(v.abs());
                    if v.abs() > vmax_inter.abs() {
                        vmax_inter = v;
                    }
                }
            }
            let vi = sh.intra[i - 1];
            let mut upper = f64::INFINITY;
            for &(u, v) in &shell_edges {
                for (end, other) in [(u, v), (v, u)] {
                    let others: Vec<usize> =
                        g.neighbors(end).into_iter().filter(|&w| w != other).collect();
                    let relief = min_neighbor_energy(levels, i, end, &others, &dist, &adj);
                    upper = upper.min(vi + relief);
                }
            }
            if !upper.is_finite() {
                upper = vi;
            }
            let upper_alpha = (vi + (alpha as f64 - 1.0) * vmax_inter).abs();
            let delta = plan.delta_max[i - 1];
            checks.push(LevelCheck {
                level: i,
                distance: sh.distance,
                window: Window { lower, upper },
                upper_alpha,
                delta,
                lower_ok: delta > lower,
                upper_ok: delta < upper,
                upper_alpha_ok: delta < upper_alpha,
            });
        }
    }
    let spacing = if k >= 2 { spacing_window(levels, &plan.omega_max).ok() } else { None };
    Ok(EncodingReport {
        shells,
        checks,
        max_degree: alpha,
        spacing_window: spacing,
        spacing_a: g.spacing_a,
        warnings: levels.warnings(),
    })
}

/// Minimum over labelings of `others` (labels 0..=k except `level`, adjacent
/// ones distinct) of the summed shift they exert on `center` in `level`.
fn min_neighbor_energy(
    levels: &LevelScheme,
    level: usize,
    center: usize,
    others: &[usize],
    dist: &[Vec<f64>],
    adj: &[Vec<bool>],
) -> f64 {
    let labels: Vec<usize> = (0..=levels.k).filter(|&l| l != level).collect();
    let cost = |w: usize, l: usize| if l == 0 { 0.0 } else { shift(levels.c6(level, l), dist[center][w]) };
    let mut assign = vec![0usize; others.len()];
    let mut best = f64::INFINITY;
    fn go(
        pos: usize,
        acc: f64,
        assign: &mut [usize],
        labels: &[usize],
        others: &[usize],
        adj: &[Vec<bool>],
        cost: &dyn Fn(usize, usize) -> f64,
        best: &mut f64,
    ) {
        if pos == others.len() {
            *best = best.min(acc);
            return;
        }
        for &l in labels {
            if (0..pos).any(|q| assign[q] == l && adj[others[q]][others[pos]]) {
                continue;
            }
            assign[pos] = l;
            go(pos + 1, acc + cost(others[pos], l), assign, labels, others, adj, cost, best);
        }
    }
    go(0, 0.0, &mut assign, &labels, others, adj, &cost, &mut best);
    best
}

/// Detuning windows implied by requiring the constraint across a whole
/// range of NN spacings: the lower bound uses the strongest inter-level
/// shift (at `a_lo`), the upper bound the weakest intra shift (at `a_hi`).
pub fn detuning_window_range(levels: &LevelScheme, a_lo: f64, a_hi: f64) -> Result<Vec<Window>> {
    if !(0.0 < a_lo && a_lo <= a_hi) {
        return Err(Error::NonPositiveDistance(a_lo));
    }
    let near = ShellInteractions::at(levels, a_lo);
    let far = ShellInteractions::at(levels, a_hi);
    Ok((1..=levels.k)
        .map(|i| {
            let lower = near
                .inter
                .iter()
                .filter(|t| t.0 == i || t.1 == i)
                .map(|t| t.2.abs())
                .fold(0.0, f64::max);
            Window { lower, upper: far.intra[i - 1] }
        })
        .collect())
}

/// Nearest-neighbour windows of the 3-fan at spacing `a`.
pub fn detuning_window_3fan(levels: &LevelScheme, a: f64) -> Result<Vec<Window>> {
    detuning_window_range(levels, a, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, Optimizer};
    use approx::assert_relative_eq;

    #[test]
    fn shift_values() {
        assert!((vdw_shift(-28.5, 4.10).unwrap() + 6.0).abs() < 0.05);
        assert!(vdw_shift(1.0, 0.0).is_err());
        assert!(vdw_shift(100.0, 50.0).unwrap() < vdw_shift(100.0, 10.0).unwrap());
    }

    #[test]
    fn radii_two_rydberg() {
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let r = blockade_radii(&l, &[3.0, 7.0]).unwrap();
        assert!((r.intra[0] - 7.02).abs() < 0.01);
        assert!((r.intra[1] - 7.05).abs() < 0.01);
        assert!((r.inter[0].2 - 5.15).abs() < 0.01);
        assert!(blockade_radius(1.0, 0.0).is_err());
    }

    #[test]
    fn windows_of_spacing() {
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let w = spacing_window(&l, &[3.0, 7.0]).unwrap();
        assert!((w.a_min - 5.15).abs() < 0.01 && (w.a_max - 5.62).abs() < 0.01);
        let degenerate = LevelScheme::new(vec![100.0, 100.0], &[-100.0], vec![]).unwrap();
        assert!(spacing_window(&degenerate, &[1.0, 1.0]).unwrap().is_empty());
        assert_eq!(degenerate.warnings().len(), 1);
    }

    #[test]
    fn truncation_and_lookup() {
        let l = LevelScheme::preset("rb-60-65-75", 3).unwrap();
        assert_eq!(l.c6(2, 3), -34.9);
        assert_eq!(l.c6(3, 2), -34.9);
        assert_eq!(l.truncate(2).unwrap().c6_inter, vec![vec![0.0, -28.5], vec![-28.5, 0.0]]);
        assert!(LevelScheme::preset("nope", 2).is_err());
        assert!(LevelScheme::new(vec![1.0, 2.0], &[], vec![]).is_err());
    }

    #[test]
    fn plan_checks() {
        let mut p = DrivePlan::standard(vec![3.0, 7.0], vec![8.0, 19.0]);
        assert!(p.check().is_ok());
        p.t_f = 9.0;
        assert!(p.check().is_err());
        let l3 = LevelScheme::rb_65_70_75(3).unwrap();
        assert!(DrivePlan::standard(vec![3.0, 7.0], vec![8.0, 19.0]).check_against(&l3).is_err());
    }

    #[test]
    fn pentagon_windows() {
        let g = builtin_graph('J', Optimizer::ThreeRydberg).unwrap();
        let l = LevelScheme::rb_60_65_75(3).unwrap();
        let plan = DrivePlan::standard(vec![2.0, 3.0, 5.0], vec![2.5, 10.0, 15.0]);
        let rep = validate_encoding(&g, &l, &plan).unwrap();
        let c1 = rep.check(1, 1).unwrap();
        assert!((c1.window.lower - 2.3).abs() < 0.1 && (c1.window.upper - 4.4).abs() < 0.1);
        assert!(c1.passes());
        let c2 = rep.check(2, 1).unwrap();
        assert!((c2.window.lower - 2.8).abs() < 0.1 && (c2.window.upper - 19.1).abs() < 0.1);
        assert!(c2.passes());
    }

    #[test]
    fn three_fan_range() {
        let l = LevelScheme::rb_65_70_75(2).unwrap();
        let w = detuning_window_3fan(&l, 5.62).unwrap();
        assert!((w[0].upper - 11.5).abs() < 0.05);
        let w = detuning_window_3fan(&l, 5.26).unwrap();
        assert_relative_eq!(w[0].lower, 94.1e3 / 5.26f64.powi(6), epsilon = 1e-12);
        assert!(w[0].contains(8.0));
    }
}
