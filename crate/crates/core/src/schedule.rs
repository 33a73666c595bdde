//! Interpolation schedules `f(s)`, `g(s)` weighting the two projector
//! Hamiltonians.
//!
//! Every schedule must satisfy `f(0) = g(1) = 1` and `f(1) = g(0) = 0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for the four boundary values.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Linear,
    Modified,
    Custom,
}

impl ScheduleKind {
    /// Instantiates a built-in schedule for a database of size `n`.
    ///
    /// `Custom` has no canonical instance and is rejected.
    pub fn build(self, n: f64) -> Result<Schedule> {
        match self {
            ScheduleKind::Linear => Ok(Schedule::Linear),
            ScheduleKind::Modified => Schedule::modified_for_n(n),
            ScheduleKind::Custom => Err(Error::domain(
                "custom schedules must be constructed with Schedule::custom",
            )),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Linear => "linear",
            ScheduleKind::Modified => "modified",
            ScheduleKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// User-supplied schedule. Derivatives are analytic and supplied by the caller.
#[derive(Clone)]
pub struct CustomSchedule {
    pub f: ScalarFn,
    pub g: ScalarFn,
    pub df: ScalarFn,
    pub dg: ScalarFn,
}

impl fmt::Debug for CustomSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomSchedule { .. }")
    }
}

#[derive(Debug, Clone)]
pub enum Schedule {
    /// `f = 1 - s`, `g = s`.
    Linear,
    /// `f = 1 - s + sqrt(N) s (1 - s)`, `g = s + sqrt(N) s (1 - s)`.
    Modified {
        sqrt_n: f64,
    },
    Custom(CustomSchedule),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSample {
    pub s: f64,
    pub f: f64,
    pub g: f64,
    pub df: f64,
    pub dg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCheck {
    /// Human readable label, e.g. `"f(0)"`.
    pub label: String,
    pub expected: f64,
    pub actual: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub checks: Vec<BoundaryCheck>,
    pub passed: bool,
}

impl BoundaryReport {
    pub fn failures(&self) -> impl Iterator<Item = &BoundaryCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl Schedule {
    /// The `sqrt(N)`-boosted schedule, parametrized directly by `sqrt(N)`.
    pub fn modified(sqrt_n: f64) -> Result<Self> {
        if !sqrt_n.is_finite() || sqrt_n < 1.0 {
            return Err(Error::domain(format!(
                "sqrt_n must be finite and >= 1, got {sqrt_n}"
            )));
        }
        Ok(Schedule::Modified { sqrt_n })
    }

    pub fn modified_for_n(n: f64) -> Result<Self> {
        Self::modified(n.sqrt())
    }

    pub fn custom<F, G, DF, DG>(f: F, g: G, df: DF, dg: DG) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        DF: Fn(f64) -> f64 + Send + Sync + 'static,
        DG: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Schedule::Custom(CustomSchedule {
            f: Arc::new(f),
            g: Arc::new(g),
            df: Arc::new(df),
            dg: Arc::new(dg),
        })
    }

    pub fn kind(&self) -> ScheduleKind {
        match self {
            Schedule::Linear => ScheduleKind::Linear,
            Schedule::Modified { .. } => ScheduleKind::Modified,
            Schedule::Custom(_) => ScheduleKind::Custom,
        }
    }

    /// `sqrt(N)` cached by the modified schedule, `None` otherwise.
    pub fn sqrt_n(&self) -> Option<f64> {
        match self {
            Schedule::Modified { sqrt_n } => Some(*sqrt_n),
            _ => None,
        }
    }

    /// Evaluates `f`, `g` and their derivatives at `s ∈ [0, 1]`.
    pub fn eval(&self, s: f64) -> Result<ScheduleSample> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::domain(format!("s must lie in [0, 1], got {s}")));
        }
        let sample = match self {
            Schedule::Linear => ScheduleSample {
                s,
                f: 1.0 - s,
                g: s,
                df: -1.0,
                dg: 1.0,
            },
            Schedule::Modified { sqrt_n } => {
                let bump = sqrt_n * s * (1.0 - s);
                let dbump = sqrt_n * (1.0 - 2.0 * s);
                ScheduleSample {
                    s,
                    f: 1.0 - s + bump,
                    g: s + bump,
                    df: -1.0 + dbump,
                    dg: 1.0 + dbump,
                }
            }
            Schedule::Custom(c) => {
                let sample = ScheduleSample {
                    s,
                    f: (c.f)(s),
                    g: (c.g)(s),
                    df: (c.df)(s),
                    dg: (c.dg)(s),
                };
                for (name, v) in [
                    ("f", sample.f),
                    ("g", sample.g),
                    ("f'", sample.df),
                    ("g'", sample.dg),
                ] {
                    if !v.is_finite() {
                        return Err(Error::Evaluation {
                            s,
                            detail: format!("{name} returned {v}"),
                        });
                    }
                }
                sample
            }
        };
        Ok(sample)
    }

    /// Checks `f(0) = 1`, `g(0) = 0`, `f(1) = 0`, `g(1) = 1`.
    ///
    /// Never fails: evaluation errors are recorded as failed checks with an
    /// infinite residual.
    pub fn validate_boundaries(&self) -> BoundaryReport {
        let mut checks = Vec::with_capacity(4);
        for (s, f_expected, g_expected) in [(0.0, 1.0, 0.0), (1.0, 0.0, 1.0)] {
            let (f, g) = match self.eval(s) {
                Ok(sample) => (sample.f, sample.g),
                Err(_) => (f64::NAN, f64::NAN),
            };
            for (name, expected, actual) in [("f", f_expected, f), ("g", g_expected, g)] {
                let residual = if actual.is_finite() {
                    (actual - expected).abs()
                } else {
                    f64::INFINITY
                };
                checks.push(BoundaryCheck {
                    label: format!("{name}({s})"),
                    expected,
                    actual,
                    residual,
                    passed: residual <= BOUNDARY_TOLERANCE,
                });
            }
        }
        let passed = checks.iter().all(|c| c.passed);
        BoundaryReport { checks, passed }
    }
}
