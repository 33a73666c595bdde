//! Closed-form spectrum checked against independent routes: dense
//! diagonalization, finite differences of the 2x2 Hamiltonian, and the
//! rotation-angle identity `|<-|H'|+>| = Δ |θ'|`.

use adiasearch::{
    dense_spectrum, effective_hamiltonian, spectral_point, EffectiveHamiltonian, Schedule,
};
use proptest::prelude::*;

fn schedules(n: f64) -> [Schedule; 2] {
    [Schedule::Linear, Schedule::modified_for_n(n).unwrap()]
}

fn matvec(a: &[[f64; 2]; 2], v: &[f64; 2]) -> [f64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

// M = sqrt(N - 1)/N * |f g' - g f'| / Δ, from differentiating the mixing angle
fn angle_route_matrix_element(n: f64, sched: &Schedule, s: f64) -> f64 {
    let p = sched.eval(s).unwrap();
    let gap = ((p.f - p.g).powi(2) + 4.0 * p.f * p.g / n).sqrt();
    (n - 1.0).sqrt() / n * (p.f * p.dg - p.g * p.df).abs() / gap
}

#[test]
fn dense_oracle_equivalence() {
    for n in [2usize, 4, 16, 64, 256] {
        let nf = n as f64;
        for sched in schedules(nf) {
            for i in 0..21 {
                let s = i as f64 / 20.0;
                let ev = dense_spectrum(n, &sched, s).unwrap();
                let p = spectral_point(nf, &sched, s).unwrap();
                assert!((ev[0] - p.e_minus).abs() <= 1e-10, "n={n} s={s}");
                assert!((ev[1] - p.e_plus).abs() <= 1e-10, "n={n} s={s}");
                for &rest in &ev[2..] {
                    assert!((rest - (p.f + p.g)).abs() <= 1e-10, "n={n} s={s}");
                }
            }
        }
    }
}

#[test]
fn matrix_element_matches_finite_differences() {
    let h = 1e-6;
    for n in [4.0, 100.0, 1e4] {
        for sched in schedules(n) {
            for i in 0..51 {
                let s = (i as f64 / 50.0).clamp(h, 1.0 - h);
                let p = spectral_point(n, &sched, s).unwrap();
                let (ground, excited) = effective_hamiltonian(n, &sched, s).unwrap().eigenvectors();
                let hp = effective_hamiltonian(n, &sched, s + h).unwrap().matrix();
                let hm = effective_hamiltonian(n, &sched, s - h).unwrap().matrix();
                let dh = [
                    [
                        (hp[0][0] - hm[0][0]) / (2.0 * h),
                        (hp[0][1] - hm[0][1]) / (2.0 * h),
                    ],
                    [
                        (hp[1][0] - hm[1][0]) / (2.0 * h),
                        (hp[1][1] - hm[1][1]) / (2.0 * h),
                    ],
                ];
                let v = matvec(&dh, &excited);
                let fd = (ground[0] * v[0] + ground[1] * v[1]).abs();
                assert!(
                    (fd - p.matrix_element).abs() <= 1e-5,
                    "n={n} s={s}: {fd} vs {}",
                    p.matrix_element
                );
            }
        }
    }
}

#[test]
fn matrix_element_matches_angle_identity() {
    for n in [2.0, 64.0, 1e4, 1e8, 1e12] {
        for sched in schedules(n) {
            for i in 0..=100 {
                let s = i as f64 / 100.0;
                let m = spectral_point(n, &sched, s).unwrap().matrix_element;
                let oracle = angle_route_matrix_element(n, &sched, s);
                assert!(
                    (m - oracle).abs() <= 1e-9 * (1.0 + oracle),
                    "n={n} s={s}: {m} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn eigenpairs_satisfy_eigen_equation() {
    for n in [2.0, 1e3, 1e9] {
        for sched in schedules(n) {
            for i in 0..=20 {
                let s = i as f64 / 20.0;
                let h = effective_hamiltonian(n, &sched, s).unwrap();
                let (lo, hi) = h.eigenvalues();
                let (g, e) = h.eigenvectors();
                let scale = 1.0 + h.f.abs() + h.g.abs();
                for (v, val) in [(g, lo), (e, hi)] {
                    let hv = matvec(&h.matrix(), &v);
                    assert!((hv[0] - val * v[0]).abs() <= 1e-12 * scale);
                    assert!((hv[1] - val * v[1]).abs() <= 1e-12 * scale);
                }
            }
        }
    }
}

#[test]
fn large_n_modified_gap_limit() {
    let n = 1e8;
    let sched = Schedule::modified_for_n(n).unwrap();
    for i in 0..=200 {
        let s = i as f64 / 200.0;
        let gap = spectral_point(n, &sched, s).unwrap().gap;
        assert!((gap - (1.0 - 2.0 * s * (1.0 - s))).abs() <= 3.0 / n.sqrt());
    }
}

#[test]
fn boundary_ground_energies_vanish() {
    for n in [2.0, 10.0, 1e16] {
        for sched in schedules(n) {
            assert_eq!(spectral_point(n, &sched, 0.0).unwrap().e_minus, 0.0);
            assert_eq!(spectral_point(n, &sched, 1.0).unwrap().e_minus, 0.0);
        }
    }
}

#[test]
fn derivative_restriction_matches_schedule_derivative() {
    let n = 37.0;
    let sched = Schedule::modified_for_n(n).unwrap();
    let sample = sched.eval(0.3).unwrap();
    let d = EffectiveHamiltonian::derivative(n, &sample);
    let expect = EffectiveHamiltonian::new(n, sample.df, sample.dg)
        .unwrap()
        .matrix();
    assert_eq!(d, expect);
}

proptest! {
    #[test]
    fn closed_form_identities(s in 0.0f64..=1.0, log_n in 0.302f64..12.0, modified in any::<bool>()) {
        let n = 10f64.powf(log_n).max(2.0);
        let sched = if modified { Schedule::modified_for_n(n).unwrap() } else { Schedule::Linear };
        let p = spectral_point(n, &sched, s).unwrap();
        let scale = 1.0 + p.f + p.g;
        // gap formula against the eigenvalue difference
        let direct = ((p.f - p.g).powi(2) + 4.0 * p.f * p.g / n).sqrt();
        prop_assert!((p.gap - direct).abs() <= 1e-12 * scale);
        prop_assert!((p.e_plus - p.e_minus - p.gap).abs() <= 1e-12 * scale);
        // trace identity
        prop_assert!((p.e_minus + p.e_plus - (p.f + p.g)).abs() <= 1e-12 * scale);
        prop_assert!(p.gap > 0.0);
        prop_assert!(p.matrix_element >= 0.0);
    }

    #[test]
    fn linear_gap_is_symmetric(s in 0.0f64..=1.0, log_n in 0.302f64..10.0) {
        let n = 10f64.powf(log_n).max(2.0);
        let a = spectral_point(n, &Schedule::Linear, s).unwrap().gap;
        let b = spectral_point(n, &Schedule::Linear, 1.0 - s).unwrap().gap;
        prop_assert!((a - b).abs() <= 1e-12);
    }
}
