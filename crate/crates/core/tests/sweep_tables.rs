use std::f64::consts::PI;

use emitsurf::sweep::{grid_density, scan_pattern, sweep_asymmetry, sweep_rates, zone_code};
use emitsurf::{DipolePolarization, InterfaceConfig, PatternPlane, PatternZone, ResultTable, SweepRequest, XSpec};

fn request(u: DipolePolarization) -> SweepRequest {
    SweepRequest::new(InterfaceConfig::silica_cs_d2(), u)
}

fn cell(t: &ResultTable, row: usize, col: &str) -> f64 {
    t.rows[row][t.column_index(col).unwrap()]
}

#[test]
fn rates_peak_at_contact_for_x_dipole() {
    let mut req = request(DipolePolarization::x());
    req.x = "0:800:2".parse().unwrap();
    let t = sweep_rates(&req).unwrap();
    assert_eq!(t.rows.len(), 401);
    let g = t.column("gamma_total").unwrap();
    let best = g.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert_eq!(best, 0);
    assert!(t.column("status").unwrap().iter().all(|s| *s == 0.0));
}

#[test]
fn quadrature_failure_marks_row() {
    let mut req = request(DipolePolarization::x());
    req.x = XSpec::List(vec![0.0, 400.0]);
    req.quadrature.rel_tol = 1e-15;
    req.quadrature.abs_tol = 1e-300;
    req.quadrature.max_subdivisions = 10;
    let t = sweep_rates(&req).unwrap();
    assert!(t.is_rectangular());
    let status = t.column("status").unwrap();
    assert!(status.contains(&1.0));
    for (row, s) in t.rows.iter().zip(&status) {
        if *s == 1.0 {
            assert!(row[0].is_finite());
            assert!(row[1].is_nan());
        }
    }
    assert!(ResultTable::from_csv(&t.to_csv()).unwrap().same_as(&t));
}

#[test]
fn tables_are_deterministic_and_thread_independent() {
    let mut req = request(DipolePolarization::eps_xz());
    req.x = "0:300:25".parse().unwrap();
    req.grid_size = 24;
    req.theta_samples = 91;
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let build = || {
        (
            sweep_rates(&req).unwrap(),
            sweep_asymmetry(&req).unwrap(),
            grid_density(&req).unwrap(),
            scan_pattern(&req).unwrap(),
        )
    };
    let a = build();
    let b = serial.install(build);
    assert!(a.0.same_as(&b.0) && a.1.same_as(&b.1) && a.2.same_as(&b.2) && a.3.same_as(&b.3));
    assert_eq!(a.0.to_csv(), b.0.to_csv());
    assert_eq!(a.2.to_json(), b.2.to_json());
}

#[test]
fn round_trip_every_table() {
    let mut req = request(DipolePolarization::theta_xz());
    req.x = XSpec::List(vec![0.0, 123.4]);
    req.grid_size = 16;
    req.theta_samples = 31;
    for t in [
        sweep_rates(&req).unwrap(),
        sweep_asymmetry(&req).unwrap(),
        grid_density(&req).unwrap(),
        scan_pattern(&req).unwrap(),
    ] {
        assert!(t.is_rectangular());
        assert!(ResultTable::from_csv(&t.to_csv()).unwrap().same_as(&t));
        assert!(ResultTable::from_json(&t.to_json()).unwrap().same_as(&t));
    }
}

fn grid(u: DipolePolarization, x: f64, n: usize) -> ResultTable {
    let mut req = request(u);
    req.x = XSpec::List(vec![x]);
    req.grid_size = n;
    grid_density(&req).unwrap()
}

#[test]
fn linear_x_dipole_grid_is_cylindrical() {
    let n = 41;
    let t = grid(DipolePolarization::x(), 150.0, n);
    let c = n / 2;
    for k in 1..=c {
        let at = |i: usize, j: usize| cell(&t, i * n + j, "f");
        let v = [at(c + k, c), at(c - k, c), at(c, c + k), at(c, c - k)];
        if v[0].is_nan() {
            assert!(v.iter().all(|f| f.is_nan()));
            continue;
        }
        for w in &v[1..] {
            assert!((w - v[0]).abs() <= 1e-12 * v[0].abs().max(1.0), "{v:?}");
        }
    }
}

#[test]
fn circular_dipole_grid_symmetries() {
    let n = 40;
    let t = grid(DipolePolarization::eps_xz(), 200.0, n);
    let f = |i: usize, j: usize| cell(&t, i * n + j, "f");
    let mut kz_asymmetric = false;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (f(i, j), f(n - 1 - i, j));
            if a.is_finite() {
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
            let c = f(i, n - 1 - j);
            if a.is_finite() && (a - c).abs() > 1e-6 * a.abs() {
                kz_asymmetric = true;
            }
        }
    }
    assert!(kz_asymmetric);

    let t0 = grid(DipolePolarization::eps_xz(), 0.0, n);
    let region = |k: usize| cell(&t0, k, "region");
    let (mut rad_worst, mut evan_asym) = (0.0f64, false);
    for k in 0..n * n {
        let mirror = n * n - 1 - k;
        let (a, b) = (cell(&t0, k, "f"), cell(&t0, mirror, "f"));
        match region(k) as i32 {
            2 => rad_worst = rad_worst.max((a - b).abs() / a.abs().max(1.0)),
            1 => evan_asym |= (a - b).abs() > 1e-6 * a.abs(),
            _ => {}
        }
    }
    assert!(rad_worst < 1e-12, "{rad_worst}");
    assert!(evan_asym);
}

#[test]
fn radiation_only_grid() {
    let mut req = request(DipolePolarization::z());
    req.grid_size = 16;
    req.radiation_only = true;
    let t = grid_density(&req).unwrap();
    for k in 0..t.rows.len() {
        let r = cell(&t, k, "region");
        assert!(r != 1.0);
        if r == 2.0 {
            assert!(cell(&t, k, "f_evan").is_nan());
            let sum = cell(&t, k, "f_rad_mat") + cell(&t, k, "f_rad_vac");
            assert!((sum - cell(&t, k, "f_rad")).abs() <= 1e-12 * sum.abs().max(1.0));
        }
    }
}

/// Largest relative mismatch between the `φ = π/2` and `φ = 3π/2` halves in a zone.
fn mirror_mismatch(t: &ResultTable, zone: PatternZone) -> f64 {
    let half = t.rows.len() / 2;
    let mut worst = 0.0f64;
    for k in 0..half {
        if cell(t, k, "zone") != zone_code(zone) {
            continue;
        }
        assert_eq!(cell(t, k, "theta"), cell(t, k + half, "theta"));
        let (a, b) = (cell(t, k, "p"), cell(t, k + half, "p"));
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1e-300));
    }
    worst
}

fn xz_pattern(u: DipolePolarization) -> ResultTable {
    let mut req = request(u);
    req.x = XSpec::List(vec![50.0]);
    req.plane = PatternPlane::Xz;
    req.theta_samples = 721;
    let t = scan_pattern(&req).unwrap();
    assert_eq!(cell(&t, 0, "phi"), PI / 2.0);
    assert!(t.column("p").unwrap().iter().all(|p| *p >= 0.0));
    t
}

#[test]
fn linear_dipole_pattern_symmetries() {
    let t = xz_pattern(DipolePolarization::theta_xz());
    assert!(mirror_mismatch(&t, PatternZone::EvanForbidden) < 1e-12);
    assert!(mirror_mismatch(&t, PatternZone::RadMaterial) > 1e-3);
    assert!(mirror_mismatch(&t, PatternZone::RadVacuum) > 1e-3);
}

#[test]
fn circular_dipole_pattern_symmetries() {
    let t = xz_pattern(DipolePolarization::eps_xz());
    assert!(mirror_mismatch(&t, PatternZone::RadMaterial) < 1e-12);
    assert!(mirror_mismatch(&t, PatternZone::EvanForbidden) > 1e-3);
    assert!(mirror_mismatch(&t, PatternZone::RadVacuum) > 1e-3);
}
