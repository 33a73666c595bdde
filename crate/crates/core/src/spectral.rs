//! Spectrum of `H(s) = f H0 + g H1` in the invariant subspace
//! `span{|m>, |m_perp>}`, where `|m_perp>` is the uniform superposition with
//! its `|m>` component removed and renormalized.
//!
//! With `a = <m|psi0> = 1/sqrt(N)` the restriction is
//!
//! ```text
//! [ f (1 - 1/N)          -f a sqrt(1 - 1/N) ]
//! [ -f a sqrt(1 - 1/N)    g + f / N          ]
//! ```
//!
//! whose eigenvalues are `(f + g ∓ Δ) / 2` with `Δ² = (f - g)² + 4 f g / N`.
//! The remaining `N - 2` eigenvalues of the full operator are all `f + g`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{Schedule, ScheduleSample};

/// Upper limit on the dimension of [`dense_hamiltonian`].
pub const DENSE_MAX_N: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveHamiltonian {
    pub n: f64,
    pub f: f64,
    pub g: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub s: f64,
    pub f: f64,
    pub g: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub gap: f64,
    /// `|<-| dH/ds |+>|`.
    pub matrix_element: f64,
}

pub(crate) fn check_n(n: f64) -> Result<()> {
    if !n.is_finite() || n < 2.0 {
        return Err(Error::domain(format!("n must be >= 2, got {n}")));
    }
    Ok(())
}

/// `(1/sqrt(N)) * sqrt(1 - 1/N)`, the overlap factor in the off-diagonal entry.
#[inline]
pub(crate) fn coupling(n: f64) -> f64 {
    (n - 1.0).sqrt() / n
}

/// Gap from `(f - g)² + 4 f g / N` without squaring large `f`, `g`.
#[inline]
pub(crate) fn gap_from(n: f64, f: f64, g: f64) -> f64 {
    let fg = f * g;
    if fg >= 0.0 {
        (f - g).hypot(2.0 * (fg / n).sqrt())
    } else {
        // custom schedules may leave the positive quadrant; the expression is
        // still a sum of squares once written in matrix form
        ((f - g).powi(2) + 4.0 * fg / n).max(0.0).sqrt()
    }
}

/// `(E-, E+, Δ)`; `E-` uses `det / E+` where `f + g > 0` to avoid cancellation.
#[inline]
pub(crate) fn eigenvalues_from(n: f64, f: f64, g: f64) -> (f64, f64, f64) {
    let gap = gap_from(n, f, g);
    let trace = f + g;
    let e_plus = 0.5 * (trace + gap);
    let e_minus = if trace > 0.0 && e_plus > 0.0 {
        f * g * (1.0 - 1.0 / n) / e_plus
    } else {
        0.5 * (trace - gap)
    };
    (e_minus, e_plus, gap)
}

impl EffectiveHamiltonian {
    pub fn new(n: f64, f: f64, g: f64) -> Result<Self> {
        check_n(n)?;
        Ok(Self::new_unchecked(n, f, g))
    }

    pub(crate) fn new_unchecked(n: f64, f: f64, g: f64) -> Self {
        EffectiveHamiltonian {
            n,
            f,
            g,
            h11: f * (1.0 - 1.0 / n),
            h12: -f * coupling(n),
            h22: g + f / n,
        }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.h11, self.h12], [self.h12, self.h22]]
    }

    /// `(E-, E+)` via the closed-form gap.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let (lo, hi, _) = eigenvalues_from(self.n, self.f, self.g);
        (lo, hi)
    }

    pub fn gap(&self) -> f64 {
        gap_from(self.n, self.f, self.g)
    }

    /// Ground and excited eigenvectors in the `(|m>, |m_perp>)` basis.
    ///
    /// The ground vector has a nonnegative `|m>` component (ties broken
    /// toward a nonnegative `|m_perp>` component); the excited vector is its
    /// counter-clockwise rotation by 90 degrees.
    pub fn eigenvectors(&self) -> ([f64; 2], [f64; 2]) {
        let theta = 0.5 * (2.0 * self.h12).atan2(self.h11 - self.h22);
        let (sin, cos) = theta.sin_cos();
        let mut ground = [-sin, cos];
        if ground[0] < 0.0 || (ground[0] == 0.0 && ground[1] < 0.0) {
            ground = [-ground[0], -ground[1]];
        }
        let excited = [-ground[1], ground[0]];
        (ground, excited)
    }

    /// Restriction of `dH/ds = f' H0 + g' H1` to the same basis.
    pub fn derivative(n: f64, sample: &ScheduleSample) -> [[f64; 2]; 2] {
        let d = Self::new_unchecked(n, sample.df, sample.dg);
        d.matrix()
    }
}

fn bilinear(u: &[f64; 2], a: &[[f64; 2]; 2], v: &[f64; 2]) -> f64 {
    u[0] * (a[0][0] * v[0] + a[0][1] * v[1]) + u[1] * (a[1][0] * v[0] + a[1][1] * v[1])
}

pub fn effective_hamiltonian(n: f64, schedule: &Schedule, s: f64) -> Result<EffectiveHamiltonian> {
    check_n(n)?;
    let p = schedule.eval(s)?;
    Ok(EffectiveHamiltonian::new_unchecked(n, p.f, p.g))
}

pub(crate) fn point_from_sample(n: f64, sample: &ScheduleSample) -> SpectralPoint {
    let h = EffectiveHamiltonian::new_unchecked(n, sample.f, sample.g);
    let (e_minus, e_plus, gap) = eigenvalues_from(n, sample.f, sample.g);
    let (ground, excited) = h.eigenvectors();
    let dh = EffectiveHamiltonian::derivative(n, sample);
    SpectralPoint {
        s: sample.s,
        f: sample.f,
        g: sample.g,
        e_minus,
        e_plus,
        gap,
        matrix_element: bilinear(&ground, &dh, &excited).abs(),
    }
}

pub fn spectral_point(n: f64, schedule: &Schedule, s: f64) -> Result<SpectralPoint> {
    check_n(n)?;
    let sample = schedule.eval(s)?;
    Ok(point_from_sample(n, &sample))
}

/// Uniformly spaced `s` grid on `[0, 1]` with both endpoints.
pub(crate) fn uniform_grid(points: usize) -> impl Iterator<Item = f64> {
    let last = (points - 1) as f64;
    (0..points).map(move |i| {
        if i + 1 == points {
            1.0
        } else {
            i as f64 / last
        }
    })
}

pub fn gap_curve(n: f64, schedule: &Schedule, points: usize) -> Result<Vec<SpectralPoint>> {
    check_n(n)?;
    if points < 2 {
        return Err(Error::domain(format!("points must be >= 2, got {points}")));
    }
    uniform_grid(points)
        .map(|s| spectral_point(n, schedule, s))
        .collect()
}

/// Full `n x n` Hamiltonian with the marked item at index 0.
pub fn dense_hamiltonian(n: usize, schedule: &Schedule, s: f64) -> Result<DMatrix<f64>> {
    if !(2..=DENSE_MAX_N).contains(&n) {
        return Err(Error::Size(format!(
            "dense Hamiltonian needs 2 <= n <= {DENSE_MAX_N}, got {n}"
        )));
    }
    let p = schedule.eval(s)?;
    let uniform = p.f / n as f64;
    let mut h = DMatrix::from_element(n, n, -uniform);
    for i in 0..n {
        h[(i, i)] += p.f + p.g;
    }
    h[(0, 0)] -= p.g;
    Ok(h)
}

/// Eigenvalues of [`dense_hamiltonian`], ascending.
pub fn dense_spectrum(n: usize, schedule: &Schedule, s: f64) -> Result<Vec<f64>> {
    let h = dense_hamiltonian(n, schedule, s)?;
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// The constant to subtract from `H(s)` so its ground energy is zero.
pub fn shifted_ground_energy(point: &SpectralPoint) -> f64 {
    point.e_minus
}
