//! Dimensionless detuning and drive envelopes.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interactions::DrivePlan;

/// Where in a Trotter step the Hamiltonian parameters are frozen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum StepRule {
    #[default]
    Midpoint,
    LeftEndpoint,
}

impl StepRule {
    pub fn time(self, step: usize, dt: f64) -> f64 {
        match self {
            StepRule::Midpoint => (step as f64 + 0.5) * dt,
            StepRule::LeftEndpoint => step as f64 * dt,
        }
    }
}

fn check_time(t: f64, plan: &DrivePlan) -> Result<()> {
    // small overshoot from accumulated step arithmetic is clamped
    if !(t >= -1e-12 && t <= plan.t_total + 1e-9) {
        return Err(Error::TimeOutOfRange { t, total: plan.t_total });
    }
    Ok(())
}

/// δ̃(t): −1 until t_i, cubic (8/τ³)(t − t₀)³ up to t_f, then +1.
pub fn schedule_delta(t: f64, plan: &DrivePlan) -> Result<f64> {
    check_time(t, plan)?;
    Ok(if t < plan.t_i {
        -1.0
    } else if t <= plan.t_f {
        let tau = plan.t_f - plan.t_i;
        let x = t - (plan.t_i + plan.t_f) / 2.0;
        8.0 * x * x * x / (tau * tau * tau)
    } else {
        1.0
    })
}

/// ω̃(t): linear ramp up to t_i, flat, linear ramp down to zero at T.
pub fn schedule_omega(t: f64, plan: &DrivePlan) -> Result<f64> {
    check_time(t, plan)?;
    Ok(if t < plan.t_i {
        t.max(0.0) / plan.t_i
    } else if t <= plan.t_f {
        1.0
    } else {
        ((plan.t_total - t) / (plan.t_total - plan.t_f)).max(0.0)
    })
}

/// Instantaneous Δ_i(t) and Ω_i(t) in MHz.
pub fn parameters_at(t: f64, plan: &DrivePlan) -> Result<(Vec<f64>, Vec<f64>)> {
    let dl = schedule_delta(t, plan)?;
    let om = schedule_omega(t, plan)?;
    Ok((
        plan.delta_max.iter().map(|d| d * dl).collect(),
        plan.omega_max.iter().map(|o| o * om).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn plan() -> DrivePlan {
        DrivePlan::standard(vec![3.0, 7.0], vec![8.0, 19.0])
    }

    #[test]
    fn delta_breakpoints() {
        let p = plan();
        assert_eq!(schedule_delta(0.0, &p).unwrap(), -1.0);
        assert_relative_eq!(schedule_delta(4.2, &p).unwrap(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(schedule_delta(0.4, &p).unwrap(), -1.0, epsilon = 1e-14);
        assert_relative_eq!(schedule_delta(8.0, &p).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(schedule_delta(8.3, &p).unwrap(), 1.0);
        assert!(schedule_delta(9.0, &p).is_err());
        assert!(schedule_delta(-0.1, &p).is_err());
    }

    #[test]
    fn omega_breakpoints() {
        let p = plan();
        assert_eq!(schedule_omega(0.0, &p).unwrap(), 0.0);
        assert_relative_eq!(schedule_omega(8.4, &p).unwrap(), 0.0);
        assert_relative_eq!(schedule_omega(0.2, &p).unwrap(), 0.5);
        assert_relative_eq!(schedule_omega(8.2, &p).unwrap(), 0.5, epsilon = 1e-12);
        assert_eq!(schedule_omega(5.0, &p).unwrap(), 1.0);
    }

    #[test]
    fn step_rule_times() {
        assert_relative_eq!(StepRule::Midpoint.time(0, 0.028), 0.014);
        assert_eq!(StepRule::LeftEndpoint.time(3, 0.5), 1.5);
    }
}
