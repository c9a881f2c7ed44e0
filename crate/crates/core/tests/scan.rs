use dcp_core::scan::{run_sweep, GridSpec};
use dcp_core::{analyze_trace, Column, Model, PhysicalParams};

fn model() -> Model {
    Model::new(PhysicalParams::new(1.0, 1.0, 2.0, 1.0).unwrap()).unwrap()
}

#[test]
fn sign_change_brackets_are_stable_under_refinement() {
    let m = model();
    let coarse = run_sweep(&m, 10.0, GridSpec::time(0.0, 19.9, 400)).unwrap();
    let fine = run_sweep(&m, 10.0, GridSpec::time(0.0, 19.9, 800)).unwrap();
    let spacing = 19.9 / 399.0;
    for col in [Column::ForcePartial, Column::EnergyPartial, Column::EnergyBare] {
        let c = analyze_trace(&coarse, col, 5.0, 0.05).unwrap().sign_changes;
        let f = analyze_trace(&fine, col, 5.0, 0.05).unwrap().sign_changes;
        assert_eq!(c.len(), f.len(), "{col:?}");
        for (cb, fb) in c.iter().zip(&f) {
            assert!(
                (cb.0 - fb.0).abs() < spacing && (cb.1 - fb.1).abs() < spacing,
                "{col:?}"
            );
        }
    }
}

#[test]
fn identical_sweeps_serialize_identically() {
    let m = model();
    let a = run_sweep(&m, 10.0, GridSpec::time(0.0, 100.0, 300)).unwrap();
    let b = run_sweep(&m, 10.0, GridSpec::time(0.0, 100.0, 300)).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn no_exclusions_when_grid_avoids_light_cone() {
    let m = model();
    // a = 1 at t = 2d = 20.6; the grid spacing 0.5 steps over it.
    let t = run_sweep(&m, 10.3, GridSpec::time(0.0, 40.0, 81)).unwrap();
    assert!(t.meta.excluded.is_empty());
    assert_eq!(t.rows.len(), 81);
}

#[test]
fn light_cone_point_is_recorded() {
    let m = model();
    let t = run_sweep(&m, 10.0, GridSpec::time(0.0, 40.0, 81)).unwrap();
    assert_eq!(t.meta.excluded.len(), 1);
    assert_eq!(t.meta.excluded[0].a, 1.0);
    assert_eq!(t.rows.len(), 80);
    let mut g = GridSpec::time(0.0, 40.0, 81);
    g.exclude_lightcone = false;
    let kept = run_sweep(&m, 10.0, g).unwrap();
    assert_eq!(kept.rows.len(), 81);
    assert!(kept.rows[40].f_p.is_nan());
}

#[test]
fn distance_sweep_runs() {
    let m = model();
    let t = run_sweep(&m, 5.0, GridSpec::distance(1.0, 20.0, 50)).unwrap();
    assert_eq!(t.rows.len() + t.meta.excluded.len(), 50);
    assert!(t.rows.iter().all(|r| r.t == 5.0));
}
