use condsqueeze::harness::{
    amplitude_grid, coupling_grid, default_config, moment_ratio_curves, open_fidelity_curves, r_grid,
    sweep_amplitude, sweep_coupling, Experiment, RateCombo, FIG4_COMBOS,
};
use condsqueeze::Error;

#[test]
fn grids() {
    let a = amplitude_grid();
    assert_eq!(a.len(), 81);
    assert_eq!((a[0], a[38], a[80]), (0.5, 2.4, 4.5));
    assert_eq!(coupling_grid(false), [1e-3, 3e-3, 1e-2, 3e-2, 1e-1]);
    assert_eq!(coupling_grid(true).len(), 7);
    assert_eq!(r_grid().len(), 60);
}

#[test]
fn amplitude_sweep_prefers_the_root() {
    let cfg = default_config(Experiment::Fig2a, false);
    let rows = sweep_amplitude(&cfg, &[1.0, 2.405]).unwrap();
    assert_eq!(rows[0].0, 1.0);
    assert!(rows[1].1 > rows[0].1, "{rows:?}");
    assert!(matches!(sweep_amplitude(&cfg, &[0.0]), Err(Error::OutOfRange(_))));
}

#[test]
fn coupling_sweep_degrades_with_g() {
    let cfg = default_config(Experiment::Fig2b, false);
    let rows = sweep_coupling(&cfg, &coupling_grid(false)).unwrap();
    assert!(rows.windows(2).all(|w| w[1].1 < w[0].1), "{rows:?}");
    assert!(rows[0].1 > 0.99);
}

#[test]
fn sweeps_are_cutoff_robust() {
    let mut cfg = default_config(Experiment::Fig2b, false);
    let grid = [1e-2, 1e-1];
    let base = sweep_coupling(&cfg, &grid).unwrap();
    cfg.fock_cutoff *= 2;
    let doubled = sweep_coupling(&cfg, &grid).unwrap();
    for (a, b) in base.iter().zip(&doubled) {
        assert!((a.1 - b.1).abs() < 1e-5, "{a:?} {b:?}");
    }
}

#[test]
fn sweeps_reject_noise() {
    let mut cfg = default_config(Experiment::Fig2b, false);
    cfg.noise.gamma_1 = 1e-4;
    assert!(matches!(sweep_coupling(&cfg, &[1e-2]), Err(Error::Config(_))));
}

#[test]
fn moment_curves() {
    let rows = moment_ratio_curves(&r_grid(), &[1, 2, 3, 4]).unwrap();
    assert_eq!(rows.len(), 240);
    assert_eq!((rows[5].r, rows[5].p), (0.1, 2));
    assert!(rows.iter().filter(|r| r.r >= 0.1).all(|r| r.ratio > 0.0 && r.ratio <= 1.0));
    let ratio = |r: f64| rows.iter().find(|x| x.r == r && x.p == 1).unwrap().ratio;
    assert!((1.0 - ratio(3.0)).abs() < (1.0 - ratio(1.0)).abs());
    assert!(moment_ratio_curves(&[0.0], &[1]).is_err());
}

#[test]
fn open_curves_small_space() {
    let mut cfg = default_config(Experiment::Fig4, false);
    cfg.fock_cutoff = 24;
    cfg.t_end_in_g_units = 0.6;
    let rows = open_fidelity_curves(&cfg, &[FIG4_COMBOS[0], FIG4_COMBOS[3]]).unwrap();
    assert_eq!(rows.len(), 2 * 13);
    assert_eq!(rows[0].combo, "0.1/0.1");
    assert_eq!(rows[13].combo, "1.0/1.0");
    assert_eq!(rows[12].g_t, 0.6);
    for r in &rows {
        assert!(r.fidelity <= 1.0 + 1e-12 && r.trace_drift <= 1e-6);
        if r.g_t == 0.0 {
            assert!((r.fidelity - 1.0).abs() < 1e-12);
        }
    }
    assert!(rows[12].fidelity > rows[25].fidelity);

    cfg.noise.gamma_m = 0.0;
    let closed = open_fidelity_curves(&cfg, &[RateCombo::new(0.0, 0.0)]).unwrap();
    assert_eq!(closed[0].combo, "0.0/0.0");
    assert!(closed.iter().all(|r| (1.0 - r.fidelity).abs() <= 1e-6));
}
