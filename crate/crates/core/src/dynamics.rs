//! Time parametrizations `s(t)`, unitary integration of the Schrödinger
//! equation in the invariant subspace, and runtime bookkeeping.
//!
//! Units: `ħ = 1`, energies dimensionless, times in inverse energy.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::Schedule;
use crate::spectral::{self, check_n, point_from_sample, EffectiveHamiltonian};

/// Lower cap on `|<-|dH/ds|+>|` when turning the adiabatic condition into a
/// sweep rate; below it the rate would be unbounded.
pub const M_FLOOR: f64 = 1e-12;
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_RESOLUTION: usize = 10_000;
pub const DEFAULT_STEPS: usize = 100_000;
pub const MIN_RESOLUTION: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Constant `ds/dt`, slow enough for the worst point on the grid.
    UniformSpeed,
    /// `ds/dt = ε Δ² / M` at every `s`.
    LocalAdiabatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub t: f64,
    pub s: f64,
}

/// Piecewise-linear monotone map `s(t)` with `s(0) = 0` and `s(T) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeParametrization {
    strategy: Strategy,
    epsilon: f64,
    total_time: f64,
    knots: Vec<Knot>,
}

impl TimeParametrization {
    /// Builds a parametrization from explicit knots, checking monotonicity
    /// and the endpoint conditions.
    pub fn from_knots(strategy: Strategy, epsilon: f64, knots: Vec<Knot>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("a parametrization needs at least two knots"));
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if first.t != 0.0 || first.s.abs() > 1e-9 || (last.s - 1.0).abs() > 1e-9 {
            return Err(Error::domain(
                "a parametrization must start at (t=0, s=0) and end at s=1",
            ));
        }
        if !(last.t.is_finite() && last.t > 0.0) {
            return Err(Error::domain(format!(
                "total time must be positive and finite, got {}",
                last.t
            )));
        }
        if let Some(w) = knots
            .windows(2)
            .find(|w| !(w[1].t > w[0].t && w[1].s > w[0].s))
        {
            return Err(Error::domain(format!(
                "knots must be strictly increasing in t and s: ({}, {}) -> ({}, {})",
                w[0].t, w[0].s, w[1].t, w[1].s
            )));
        }
        Ok(TimeParametrization {
            strategy,
            epsilon,
            total_time: last.t,
            knots,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    /// Same path traversed `factor` times slower (`factor` multiplies every `t`).
    pub fn time_scaled(&self, factor: f64) -> Result<Self> {
        let knots = self
            .knots
            .iter()
            .map(|k| Knot {
                t: k.t * factor,
                s: k.s,
            })
            .collect();
        Self::from_knots(self.strategy, self.epsilon / factor, knots)
    }

    // index i such that t lies in [knots[i].t, knots[i + 1].t]
    fn segment_by_t(&self, t: f64) -> usize {
        let idx = self.knots.partition_point(|k| k.t <= t);
        idx.clamp(1, self.knots.len() - 1) - 1
    }

    fn segment_by_s(&self, s: f64) -> usize {
        let idx = self.knots.partition_point(|k| k.s <= s);
        idx.clamp(1, self.knots.len() - 1) - 1
    }

    fn slope(&self, i: usize) -> f64 {
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        (b.s - a.s) / (b.t - a.t)
    }

    /// `s(t)`, with `t` clamped to `[0, T]`.
    pub fn s_at(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.total_time);
        let i = self.segment_by_t(t);
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        let s = a.s + (t - a.t) * (b.s - a.s) / (b.t - a.t);
        s.clamp(0.0, 1.0)
    }

    /// `ds/dt` at time `t` (slope of the segment containing `t`).
    pub fn rate_at(&self, t: f64) -> f64 {
        self.slope(self.segment_by_t(t.clamp(0.0, self.total_time)))
    }

    /// `ds/dt` where the path passes through `s`.
    pub fn rate_at_s(&self, s: f64) -> f64 {
        self.slope(self.segment_by_s(s.clamp(0.0, 1.0)))
    }

    /// Central finite-difference slope at interior knot `i`.
    pub fn knot_rate(&self, i: usize) -> Option<f64> {
        if i == 0 || i + 1 >= self.knots.len() {
            return None;
        }
        let (a, b) = (self.knots[i - 1], self.knots[i + 1]);
        Some((b.s - a.s) / (b.t - a.t))
    }
}

/// `M(s) / Δ(s)²`, the time spent per unit `s` at unit budget.
fn dwell(n: f64, schedule: &Schedule, s: f64) -> Result<f64> {
    let p = spectral::spectral_point(n, schedule, s)?;
    if p.gap.is_nan() || p.gap <= 0.0 {
        return Err(Error::Consistency(format!("gap closes at s = {s}")));
    }
    Ok(p.matrix_element.max(M_FLOOR) / (p.gap * p.gap))
}

const GRID_PASSES: usize = 4;

/// `points` values of `s` on `[0, 1]`, equally spaced in `∫ ds / Δ(s)`.
///
/// Spacing shrinks in proportion to the gap, so narrow avoided crossings get
/// as many knots as the smooth parts. Starts from a uniform grid and
/// redistributes a few times so features narrower than the uniform spacing
/// are picked up.
pub fn gap_adapted_grid(n: f64, schedule: &Schedule, points: usize) -> Result<Vec<f64>> {
    check_n(n)?;
    if points < 2 {
        return Err(Error::domain(format!("points must be >= 2, got {points}")));
    }
    let mut grid: Vec<f64> = spectral::uniform_grid(points).collect();
    let mut phi = vec![0.0; points];
    for _ in 0..GRID_PASSES {
        let density: Vec<f64> = grid
            .iter()
            .map(|&s| {
                let gap = spectral::spectral_point(n, schedule, s)?.gap;
                if gap > 0.0 {
                    Ok(1.0 / gap)
                } else {
                    Err(Error::Consistency(format!("gap closes at s = {s}")))
                }
            })
            .collect::<Result<_>>()?;
        for i in 1..points {
            phi[i] = phi[i - 1] + 0.5 * (density[i - 1] + density[i]) * (grid[i] - grid[i - 1]);
        }
        let total = phi[points - 1];
        let mut next = Vec::with_capacity(points);
        next.push(0.0);
        let mut seg = 0;
        for j in 1..points - 1 {
            let target = total * j as f64 / (points - 1) as f64;
            while phi[seg + 1] < target {
                seg += 1;
            }
            let w = (target - phi[seg]) / (phi[seg + 1] - phi[seg]);
            next.push(grid[seg] + w * (grid[seg + 1] - grid[seg]));
        }
        next.push(1.0);
        grid = next;
    }
    Ok(grid)
}

pub fn build_parametrization(
    n: f64,
    schedule: &Schedule,
    epsilon: f64,
    strategy: Strategy,
    resolution: usize,
) -> Result<TimeParametrization> {
    check_n(n)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::domain(format!(
            "resolution must be >= {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let grid = gap_adapted_grid(n, schedule, resolution)?;
    let dwell: Vec<f64> = grid
        .iter()
        .map(|&s| dwell(n, schedule, s))
        .collect::<Result<_>>()?;

    let knots = match strategy {
        Strategy::UniformSpeed => {
            let worst = dwell.iter().copied().fold(0.0, f64::max);
            let total = worst / epsilon;
            grid.iter().map(|&s| Knot { t: s * total, s }).collect()
        }
        Strategy::LocalAdiabatic => {
            let mut knots = Vec::with_capacity(resolution);
            let mut acc = 0.0;
            knots.push(Knot { t: 0.0, s: 0.0 });
            for i in 1..resolution {
                acc += 0.5 * (dwell[i - 1] + dwell[i]) * (grid[i] - grid[i - 1]);
                knots.push(Knot {
                    t: acc / epsilon,
                    s: grid[i],
                });
            }
            knots
        }
    };
    TimeParametrization::from_knots(strategy, epsilon, knots)
        .map_err(|e| Error::Consistency(e.to_string()))
}

/// Amplitudes on `|m>` and `|m_perp>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    pub a_m: C64,
    pub a_perp: C64,
}

impl QuantumState {
    /// The uniform superposition over `n` items.
    pub fn initial(n: f64) -> Self {
        QuantumState {
            a_m: C64::new(1.0 / n.sqrt(), 0.0),
            a_perp: C64::new((1.0 - 1.0 / n).sqrt(), 0.0),
        }
    }

    pub fn marked() -> Self {
        QuantumState {
            a_m: C64::new(1.0, 0.0),
            a_perp: C64::new(0.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a_m.norm_sqr() + self.a_perp.norm_sqr()
    }

    /// `|<m|psi>|²`.
    pub fn fidelity(&self) -> f64 {
        self.a_m.norm_sqr()
    }

    fn is_finite(&self) -> bool {
        self.a_m.is_finite() && self.a_perp.is_finite()
    }
}

/// `exp(-i H dt)` for a real symmetric 2x2 `H`, split into the trace phase
/// and an SU(2) part.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepUnitary {
    /// `exp(-i (tr H / 2) dt)`
    pub phase: C64,
    pub u: [[C64; 2]; 2],
}

impl StepUnitary {
    pub fn new(h11: f64, h12: f64, h22: f64, dt: f64) -> Self {
        let mean = 0.5 * (h11 + h22);
        let d = 0.5 * (h11 - h22);
        let omega = d.hypot(h12);
        let theta = omega * dt;
        let (sin, cos) = theta.sin_cos();
        let sinc = if omega > 0.0 { sin / omega } else { dt };
        let i = C64::i();
        let u = [
            [C64::new(cos, 0.0) - i * (sinc * d), -i * (sinc * h12)],
            [-i * (sinc * h12), C64::new(cos, 0.0) + i * (sinc * d)],
        ];
        StepUnitary {
            phase: C64::from_polar(1.0, -mean * dt),
            u,
        }
    }

    #[inline]
    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        (
            self.phase * (self.u[0][0] * x + self.u[0][1] * y),
            self.phase * (self.u[1][0] * x + self.u[1][1] * y),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionResult {
    pub final_state: QuantumState,
    /// `|<m|psi0>|² = 1/N`.
    pub initial_fidelity: f64,
    pub fidelity: f64,
    pub norm_drift: f64,
    /// Largest `M ds/dt / Δ²` seen at the step midpoints.
    pub adiabaticity_margin: f64,
    /// `∫_0^T g(s(t)) dt` by the trapezoid rule on the step grid.
    pub g_time_integral: f64,
    /// Largest instantaneous ground energy of the Hamiltonian actually
    /// integrated (zero for energy-shifted runs).
    pub max_ground_energy: f64,
    pub min_gap: f64,
    pub total_time: f64,
    pub steps: usize,
    pub energy_shifted: bool,
}

fn integrate(
    n: f64,
    schedule: &Schedule,
    param: &TimeParametrization,
    steps: usize,
    shifted: bool,
) -> Result<EvolutionResult> {
    check_n(n)?;
    if steps == 0 {
        return Err(Error::domain("steps must be >= 1"));
    }
    let total = param.total_time();
    let dt = total / steps as f64;
    let mut state = QuantumState::initial(n);
    let initial_fidelity = state.fidelity();

    let mut norm_drift = 0.0f64;
    let mut margin = 0.0f64;
    let mut max_ground = f64::NEG_INFINITY;
    let mut min_gap = f64::INFINITY;
    let mut g_integral = 0.0;
    let mut g_left = schedule.eval(param.s_at(0.0))?.g;

    for k in 0..steps {
        let t_mid = (k as f64 + 0.5) * dt;
        let sample = schedule.eval(param.s_at(t_mid))?;
        let point = point_from_sample(n, &sample);
        let shift = if shifted { point.e_minus } else { 0.0 };
        let h = EffectiveHamiltonian::new_unchecked(n, sample.f, sample.g);

        let step = StepUnitary::new(h.h11 - shift, h.h12, h.h22 - shift, dt);
        let (a_m, a_perp) = step.apply(state.a_m, state.a_perp);
        state = QuantumState { a_m, a_perp };
        if !state.is_finite() {
            return Err(Error::Integration {
                step: k,
                detail: "non-finite amplitude".into(),
            });
        }
        norm_drift = norm_drift.max((state.norm_sqr() - 1.0).abs());

        if point.gap > 0.0 {
            margin = margin.max(point.matrix_element * param.rate_at(t_mid) / point.gap.powi(2));
        }
        max_ground = max_ground.max(point.e_minus - shift);
        min_gap = min_gap.min(point.gap);

        let t_right = if k + 1 == steps {
            total
        } else {
            (k + 1) as f64 * dt
        };
        let g_right = schedule.eval(param.s_at(t_right))?.g;
        g_integral += 0.5 * (g_left + g_right) * dt;
        g_left = g_right;
    }

    Ok(EvolutionResult {
        final_state: state,
        initial_fidelity,
        fidelity: state.fidelity().min(1.0),
        norm_drift,
        adiabaticity_margin: margin,
        g_time_integral: g_integral,
        max_ground_energy: max_ground,
        min_gap,
        total_time: total,
        steps,
        energy_shifted: shifted,
    })
}

/// Integrates `i dψ/dt = H(s(t)) ψ` from the uniform superposition.
///
/// Each step applies the exact exponential of the Hamiltonian sampled at the
/// step midpoint, so the scheme is second order and unitary.
pub fn evolve(
    n: f64,
    schedule: &Schedule,
    param: &TimeParametrization,
    steps: usize,
) -> Result<EvolutionResult> {
    integrate(n, schedule, param, steps, false)
}

/// As [`evolve`], but with `H(s) - E-(s) I`, whose ground energy is zero.
pub fn evolve_energy_shifted(
    n: f64,
    schedule: &Schedule,
    param: &TimeParametrization,
    steps: usize,
) -> Result<EvolutionResult> {
    integrate(n, schedule, param, steps, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub k: f64,
    pub satisfied: bool,
}

/// Compares `∫g dt` of a run against `k sqrt(N) / 4`.
pub fn lower_bound_check(result: &EvolutionResult, n: f64, k: f64) -> LowerBoundReport {
    let lhs = result.g_time_integral;
    let rhs = k * n.sqrt() / 4.0;
    LowerBoundReport {
        lhs,
        rhs,
        k,
        satisfied: lhs >= rhs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditPoint {
    pub s: f64,
    pub margin: f64,
}

/// `M(s) (ds/dt) / Δ(s)²` at `points` uniform values of `s`.
pub fn adiabaticity_audit(
    n: f64,
    schedule: &Schedule,
    param: &TimeParametrization,
    points: usize,
) -> Result<Vec<AuditPoint>> {
    check_n(n)?;
    if points < 2 {
        return Err(Error::domain(format!("points must be >= 2, got {points}")));
    }
    spectral::uniform_grid(points)
        .map(|s| {
            let p = spectral::spectral_point(n, schedule, s)?;
            Ok(AuditPoint {
                s,
                margin: p.matrix_element * param.rate_at_s(s) / (p.gap * p.gap),
            })
        })
        .collect()
}
