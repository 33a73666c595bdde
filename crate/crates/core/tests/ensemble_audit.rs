use adiasearch::{
    build_parametrization, derive_theorem_bound, evolve, evolve_ensemble, integrated_bound_check,
    Schedule, Strategy, TimeParametrization,
};

fn local(n: usize, sched: &Schedule, eps: f64) -> TimeParametrization {
    build_parametrization(n as f64, sched, eps, Strategy::LocalAdiabatic, 10_000).unwrap()
}

fn schedules(n: usize) -> [Schedule; 2] {
    [
        Schedule::Linear,
        Schedule::modified_for_n(n as f64).unwrap(),
    ]
}

#[test]
fn every_computer_follows_the_two_level_dynamics() {
    for n in [2usize, 5, 16] {
        for sched in schedules(n) {
            let p = local(n, &sched, 0.1);
            let report = evolve_ensemble(n, &sched, &p, 20_000, 50).unwrap();
            let two_level = evolve(n as f64, &sched, &p, report.steps).unwrap();
            let first = report.final_fidelities[0];
            for &f in &report.final_fidelities {
                assert!((f - two_level.fidelity).abs() <= 1e-6);
                assert!((f - first).abs() <= 1e-9, "permutation symmetry");
            }
            assert!(
                (report.g_time_integral - two_level.g_time_integral).abs()
                    <= 1e-9 * two_level.g_time_integral
            );
        }
    }
}

#[test]
fn inequalities_hold_for_both_schedules() {
    for n in [2usize, 4, 8, 16] {
        for sched in schedules(n) {
            let p = local(n, &sched, 0.1);
            let report = evolve_ensemble(n, &sched, &p, 20_000, 200).unwrap();
            let traj = &report.overlap_sum_trajectory;
            assert!(traj[0].overlap_sum.abs() <= 1e-9);
            let cap = (n * (n - 1)) as f64;
            assert!(traj
                .iter()
                .all(|x| x.overlap_sum >= -1e-9 && x.overlap_sum <= cap + 1e-9));
            assert!(report.rate_inequality_holds(), "n={n} {:?}", sched.kind());
            assert!(integrated_bound_check(&report).satisfied);
            assert!(report.max_norm_drift <= 1e-9);
        }
    }
}

#[test]
fn eight_item_rate_bound_constant() {
    let sched = Schedule::Linear;
    let p = local(8, &sched, 0.05);
    let report = evolve_ensemble(8, &sched, &p, 20_000, 200).unwrap();
    let scale = 4.0 * 8f64.powf(1.5);
    assert!((scale - 90.50966799187809).abs() < 1e-12);
    for m in &report.rate_margins {
        let g = sched.eval(p.s_at(m.t)).unwrap().g;
        assert!((m.bound - scale * g).abs() <= 1e-9 * (1.0 + m.bound));
        assert!(m.satisfied);
    }
}

#[test]
fn linear_overlap_sum_does_not_dip() {
    let sched = Schedule::Linear;
    let p = local(8, &sched, 0.05);
    let report = evolve_ensemble(8, &sched, &p, 20_000, 200).unwrap();
    let traj = &report.overlap_sum_trajectory;
    assert!(traj.last().unwrap().overlap_sum >= traj[0].overlap_sum);
    assert!(traj.iter().all(|x| x.overlap_sum >= -1e-9));
}

#[test]
fn two_item_run_separates_states() {
    let sched = Schedule::Linear;
    let p = local(2, &sched, 0.1);
    let report = evolve_ensemble(2, &sched, &p, 20_000, 100).unwrap();
    let fid = report.final_fidelities[0];
    assert!(fid >= 0.9, "fidelity {fid}");
    // for two items the final overlap is 2 Re(a* b) with |b|² = 1 - fidelity
    assert!(report.k_measured >= 1.0 - 4.0 * fid * (1.0 - fid));
    let s_end = report.overlap_sum_trajectory.last().unwrap().overlap_sum;
    assert!((s_end - 2.0 * report.k_measured).abs() < 1e-12);
}

#[test]
fn theorem_chain_closes_for_sixteen_items() {
    let sched = Schedule::Linear;
    let p = local(16, &sched, 0.05);
    let report = evolve_ensemble(16, &sched, &p, 50_000, 200).unwrap();
    let tb = derive_theorem_bound(&report, 16);
    assert!(tb.valid, "{:?}", tb.reason);
    assert!(tb.k_measured >= 0.99);
    let expected = tb.k_measured * 4.0 * (15.0 / 16.0) / 4.0;
    assert!((tb.implied_lower_bound - expected).abs() < 1e-12);
    assert!(tb.implied_lower_bound > 0.92);
    assert!(tb.closes);
}

#[test]
fn modified_sixteen_item_integrated_bound() {
    let sched = Schedule::modified_for_n(16.0).unwrap();
    let p = local(16, &sched, 0.1);
    let report = evolve_ensemble(16, &sched, &p, 20_000, 200).unwrap();
    let check = integrated_bound_check(&report);
    assert!(check.satisfied);
    // g reaches 0.5 + sqrt(16)/4 = 1.5 at the midpoint
    assert!(report.g_time_integral > p.total_time() * 0.5);
}
