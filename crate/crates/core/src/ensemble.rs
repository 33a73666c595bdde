//! Full Hilbert-space audit of the `∫g dt` lower bound.
//!
//! One computer is evolved per possible marked item `m`, each under
//! `H_m(s) = (f + g) I - f |psi0><psi0| - g |m><m|`, all starting from the
//! uniform superposition. The overlap sum
//!
//! ```text
//! S(t) = Σ_{m, m'} [1 - |<psi_m(t)|psi_m'(t)>|²]
//! ```
//!
//! starts at zero, can grow no faster than `4 N^{3/2} g(s)`, and must end
//! near `N (N - 1)` if the computers distinguish every item. Chaining the
//! two gives `∫g dt >= k sqrt(N) (1 - 1/N) / 4`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{StepUnitary, TimeParametrization};
use crate::error::{Error, Result};
use crate::schedule::Schedule;
use crate::spectral::EffectiveHamiltonian;

pub const ENSEMBLE_MAX_N: usize = 64;
pub const MIN_SAMPLES: usize = 10;
/// Final per-computer fidelity required before the theorem chain is applied.
pub const HIGH_FIDELITY: f64 = 0.9;
/// Relative slack on both inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-6;
const NORM_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    pub n: usize,
    /// `states[m]` is the computer searching for item `m`.
    pub states: Vec<Vec<C64>>,
    pub t: f64,
}

impl EnsembleState {
    pub fn initial(n: usize) -> Self {
        let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
        EnsembleState {
            n,
            states: vec![vec![amp; n]; n],
            t: 0.0,
        }
    }

    pub fn overlap(&self, m: usize, mp: usize) -> C64 {
        self.states[m]
            .iter()
            .zip(&self.states[mp])
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `S(t)` over ordered pairs `m != m'`.
    pub fn overlap_sum(&self) -> f64 {
        let mut sum = 0.0;
        for m in 0..self.n {
            for mp in m + 1..self.n {
                sum += 1.0 - self.overlap(m, mp).norm_sqr();
            }
        }
        2.0 * sum
    }

    /// `min_{m != m'} 1 - |<psi_m|psi_m'>|²`.
    pub fn distinguishability(&self) -> f64 {
        let mut k = f64::INFINITY;
        for m in 0..self.n {
            for mp in m + 1..self.n {
                k = k.min(1.0 - self.overlap(m, mp).norm_sqr());
            }
        }
        k
    }

    pub fn fidelities(&self) -> Vec<f64> {
        self.states
            .iter()
            .enumerate()
            .map(|(m, v)| v[m].norm_sqr())
            .collect()
    }

    fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|v| (v.iter().map(C64::norm_sqr).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Applies `exp(-i H_m dt)` to every computer.
    ///
    /// `H_m` acts as the shared 2x2 block on `span{e_m, u_m}`, with
    /// `u_m = (psi0 - e_m / sqrt(n)) / sqrt(1 - 1/n)`, and as `(f + g) I` on
    /// the complement.
    fn step(&mut self, block: &StepUnitary, complement_phase: C64) {
        let n = self.n as f64;
        // u_m has entries 1 / sqrt(n - 1) off the marked index and 0 on it
        let u_entry = 1.0 / (n - 1.0).sqrt();
        for (m, v) in self.states.iter_mut().enumerate() {
            let total: C64 = v.iter().sum();
            let c_m = v[m];
            let c_perp = (total - c_m) * u_entry;
            let (new_m, new_perp) = block.apply(c_m, c_perp);
            let shift = (new_perp - complement_phase * c_perp) * u_entry;
            for (k, x) in v.iter_mut().enumerate() {
                if k != m {
                    *x = complement_phase * *x + shift;
                }
            }
            v[m] = new_m;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapSample {
    pub t: f64,
    pub s: f64,
    pub overlap_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateMargin {
    pub t: f64,
    /// Central-difference estimate of `dS/dt`.
    pub rate: f64,
    /// `4 N^{3/2} g(s(t))`.
    pub bound: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub n: usize,
    pub total_time: f64,
    pub steps: usize,
    pub overlap_sum_trajectory: Vec<OverlapSample>,
    pub rate_margins: Vec<RateMargin>,
    /// `S(T) - S(0)`.
    pub integrated_lhs: f64,
    /// `4 N^{3/2} ∫ g dt`.
    pub integrated_rhs: f64,
    pub g_time_integral: f64,
    pub k_measured: f64,
    pub final_fidelities: Vec<f64>,
    pub max_norm_drift: f64,
}

impl EnsembleReport {
    pub fn rate_inequality_holds(&self) -> bool {
        self.rate_margins.iter().all(|r| r.satisfied)
    }
}

/// Evolves the `n` computers and samples `S(t)` at `samples` uniform times.
///
/// The step count is rounded up to a multiple of `samples - 1` so every
/// sample lands on a step boundary.
pub fn evolve_ensemble(
    n: usize,
    schedule: &Schedule,
    param: &TimeParametrization,
    steps: usize,
    samples: usize,
) -> Result<EnsembleReport> {
    if !(2..=ENSEMBLE_MAX_N).contains(&n) {
        return Err(Error::Size(format!(
            "ensemble needs 2 <= n <= {ENSEMBLE_MAX_N}, got {n}"
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "samples must be >= {MIN_SAMPLES}, got {samples}"
        )));
    }
    if steps == 0 {
        return Err(Error::domain("steps must be >= 1"));
    }
    let nf = n as f64;
    let intervals = samples - 1;
    let per_interval = steps.div_ceil(intervals);
    let steps = per_interval * intervals;
    let total = param.total_time();
    let dt = total / steps as f64;
    let bound_scale = 4.0 * nf.powf(1.5);

    let mut ensemble = EnsembleState::initial(n);
    let mut trajectory = Vec::with_capacity(samples);
    trajectory.push(OverlapSample {
        t: 0.0,
        s: 0.0,
        overlap_sum: ensemble.overlap_sum(),
    });
    let mut g_integral = 0.0;
    let mut g_left = schedule.eval(0.0)?.g;
    let mut max_drift = 0.0f64;

    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) * dt;
        let sample = schedule.eval(param.s_at(t_mid))?;
        let h = EffectiveHamiltonian::new_unchecked(nf, sample.f, sample.g);
        let block = StepUnitary::new(h.h11, h.h12, h.h22, dt);
        let complement = C64::from_polar(1.0, -(sample.f + sample.g) * dt);
        ensemble.step(&block, complement);

        let t_right = if k + 1 == steps {
            total
        } else {
            (k + 1) as f64 * dt
        };
        ensemble.t = t_right;
        let s_right = param.s_at(t_right);
        let g_right = schedule.eval(s_right)?.g;
        g_integral += 0.5 * (g_left + g_right) * dt;
        g_left = g_right;

        if (k + 1) % per_interval == 0 {
            let drift = ensemble.max_norm_drift();
            if !drift.is_finite() || drift > NORM_DRIFT_LIMIT {
                return Err(Error::Integration {
                    step: k,
                    detail: format!("norm drift {drift:e} exceeds {NORM_DRIFT_LIMIT:e}"),
                });
            }
            max_drift = max_drift.max(drift);
            trajectory.push(OverlapSample {
                t: t_right,
                s: s_right,
                overlap_sum: ensemble.overlap_sum(),
            });
        }
    }

    let mut rate_margins = Vec::with_capacity(samples.saturating_sub(2));
    for w in trajectory.windows(3) {
        let rate = (w[2].overlap_sum - w[0].overlap_sum) / (w[2].t - w[0].t);
        let bound = bound_scale * schedule.eval(w[1].s)?.g;
        rate_margins.push(RateMargin {
            t: w[1].t,
            rate,
            bound,
            satisfied: rate <= bound * (1.0 + INEQUALITY_SLACK),
        });
    }

    let s_start = trajectory[0].overlap_sum;
    let s_end = trajectory[trajectory.len() - 1].overlap_sum;
    Ok(EnsembleReport {
        n,
        total_time: total,
        steps,
        overlap_sum_trajectory: trajectory,
        rate_margins,
        integrated_lhs: s_end - s_start,
        integrated_rhs: bound_scale * g_integral,
        g_time_integral: g_integral,
        k_measured: ensemble.distinguishability(),
        final_fidelities: ensemble.fidelities(),
        max_norm_drift: max_drift,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

/// `S(T) - S(0) <= 4 N^{3/2} ∫ g dt`.
pub fn integrated_bound_check(report: &EnsembleReport) -> BoundCheck {
    let (lhs, rhs) = (report.integrated_lhs, report.integrated_rhs);
    BoundCheck {
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + INEQUALITY_SLACK),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremBound {
    pub valid: bool,
    pub reason: Option<String>,
    pub k_measured: f64,
    /// `k sqrt(N) (1 - 1/N) / 4`.
    pub implied_lower_bound: f64,
    /// `k sqrt(N) / 4`, the large-`N` form.
    pub asymptotic_lower_bound: f64,
    pub g_time_integral: f64,
    /// Whether the measured `∫ g dt` is at least the implied bound.
    pub closes: bool,
}

/// Turns a completed run into the lower bound it implies on `∫ g dt`.
pub fn derive_theorem_bound(report: &EnsembleReport, n: usize) -> TheoremBound {
    let nf = n as f64;
    let k = report.k_measured;
    let implied = k * nf.sqrt() * (1.0 - 1.0 / nf) / 4.0;
    let reason = if n != report.n {
        Some(format!("report is for n = {}, not {n}", report.n))
    } else {
        report
            .final_fidelities
            .iter()
            .enumerate()
            .find(|(_, &f)| f < HIGH_FIDELITY)
            .map(|(m, f)| format!("computer {m} ended with fidelity {f} < {HIGH_FIDELITY}"))
    };
    TheoremBound {
        valid: reason.is_none(),
        reason,
        k_measured: k,
        implied_lower_bound: implied,
        asymptotic_lower_bound: k * nf.sqrt() / 4.0,
        g_time_integral: report.g_time_integral,
        closes: implied <= report.g_time_integral,
    }
}
