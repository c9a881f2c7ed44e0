//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use dcp_core::dynamics::energy_dressed_with;
use dcp_core::kernels::KernelOptions;
use dcp_core::scan::{analyze_trace_against, run_sweep, GridSpec, Reference, SweepTable};
use dcp_core::validation::{oracle_grid, run_validation, GridSize};
use dcp_core::{analyze_trace, Column, EvalPoint, Model, PhysicalParams, QuadratureConfig, StateKind};

const NEAR_ZONE_RTOL: f64 = 1e-3;
const ORACLE_ATOL: f64 = 1e-9;
const ORACLE_DEFAULT_TOL: f64 = 1e-10;
const DERIVATIVE_RTOL: f64 = 1e-6;
const DERIVATIVE_POINTS: usize = 200;
const BARE_ZERO_ATOL: f64 = 1e-12;
const IDENTITY_RTOL: f64 = 1e-12;
/// `F_b(0)` must be below this fraction of `|F_d|`; `F_p(0)` above it.
const ZERO_FORCE_FRACTION: f64 = 1e-9;
const MIN_SIGN_CHANGES: usize = 2;
const PINNED_SIGN_CHANGES: usize = 4;
const LATE_TOL: f64 = 0.01;
const SETTLING_TOL: f64 = 0.05;
const PINNED_SETTLING_PARTIAL: f64 = 25.545405675709468;
const PINNED_SETTLING_BARE: f64 = 25.79292411551444;
const PIN_ATOL: f64 = 1e-9;
const LIGHTCONE_DELTAS: [f64; 4] = [1e-1, 3e-2, 1e-2, 3e-3];

const D: f64 = 10.0;
const WINDOW: f64 = 10.0 * D;

type Outcome = Result<String, String>;

fn figure_model() -> Model {
    Model::new(PhysicalParams::new(1.0, 1.0, 2.0, 1.0).unwrap()).unwrap()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn near_zone_limit() -> Outcome {
    let (mu, d) = (1.3f64, 1.0f64);
    let model = Model::new(PhysicalParams::new(mu, 1e-5, 1e-5, 1.0).unwrap()).unwrap();
    let pt = EvalPoint::new(d, 0.0).unwrap();
    let e = model.energy_dressed(d).map_err(|e| e.to_string())?;
    let f = model.force(StateKind::Dressed, pt).map_err(|e| e.to_string())?;
    let e_ref = -mu * mu / (12.0 * d.powi(3));
    let f_ref = -mu * mu / (4.0 * d.powi(4));
    let (re, rf) = (((e - e_ref) / e_ref).abs(), ((f - f_ref) / f_ref).abs());
    ensure(
        re <= NEAR_ZONE_RTOL && rf <= NEAR_ZONE_RTOL,
        format!("energy rel {re:.2e}, force rel {rf:.2e} (tol {NEAR_ZONE_RTOL:e})"),
    )
}

fn oracle_equivalence() -> Outcome {
    let grid = oracle_grid(GridSize::Full);
    let inside = grid.iter().any(|&(m, a, _)| a < m);
    let outside = grid.iter().any(|&(m, a, _)| a > m);
    let cfg = QuadratureConfig::with_tol(ORACLE_DEFAULT_TOL);
    let report = run_validation(GridSize::Full, &cfg, &KernelOptions::default()).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut points = 0;
    for c in report.checks.iter().filter(|c| c.name.ends_with("_vs_oracle")) {
        worst = worst.max(c.max_deviation);
        points += c.points;
    }
    ensure(
        inside && outside && points > 0 && worst <= ORACLE_ATOL,
        format!("{points} points, max |closed − quad| {worst:.2e} (tol {ORACLE_ATOL:e}), both branches"),
    )
}

fn derivative_suite() -> Outcome {
    let report = run_validation(GridSize::Full, &QuadratureConfig::default(), &KernelOptions::default())
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut ok = true;
    for c in report.checks.iter().filter(|c| c.name.ends_with("_m_derivatives")) {
        worst = worst.max(c.max_deviation);
        ok &= c.points == DERIVATIVE_POINTS;
    }
    ensure(
        ok && worst <= DERIVATIVE_RTOL,
        format!("{DERIVATIVE_POINTS} points per jet, max rel {worst:.2e} (tol {DERIVATIVE_RTOL:e})"),
    )
}

fn degeneracy_identities() -> Outcome {
    let mut worst = [0.0f64; 3];
    for &(mu, k0, k0p) in &[(1.0, 1.0, 2.0), (0.5, 0.3, 1.7), (2.0, 2.5, 0.4)] {
        let model = Model::new(PhysicalParams::new(mu, k0, k0p, 1.0).unwrap()).unwrap();
        let same = Model::new(PhysicalParams::new(mu, k0, k0, 1.0).unwrap()).unwrap();
        for d in [0.5f64, 3.0, 10.0, 40.0] {
            let scale = mu * mu / d.powi(3);
            let t0 = EvalPoint::new(d, 0.0).unwrap();
            let eb = model.energy_bare(t0).map_err(|e| e.to_string())?;
            worst[0] = worst[0].max(eb.abs() / scale);
            let ep = model.energy_partial(t0).map_err(|e| e.to_string())?;
            let edp = energy_dressed_with(mu, k0p, d).map_err(|e| e.to_string())?;
            worst[2] = worst[2].max(((ep - edp) / edp).abs());
            let ed = same.energy_dressed(d).map_err(|e| e.to_string())?;
            for &a in &[0.0, 0.2, 0.7, 1.4, 5.0] {
                let pt = EvalPoint::new(d, 2.0 * d * a).unwrap();
                let ep = same.energy_partial(pt).map_err(|e| e.to_string())?;
                worst[1] = worst[1].max(((ep - ed) / ed).abs());
            }
        }
    }
    ensure(
        worst[0] <= BARE_ZERO_ATOL && worst[1] <= IDENTITY_RTOL && worst[2] <= IDENTITY_RTOL,
        format!(
            "|E_b(0)|·d³/μ² {:.1e}, E_p(k0′=k0) rel {:.1e}, E_p(0) rel {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn figure_shapes() -> Outcome {
    let model = figure_model();
    let mut notes = Vec::new();
    let mut ok = true;

    // (a) behavior at the first grid point of the t < 2d/c sweep.
    let early = run_sweep(&model, D, GridSpec::time(0.0, 19.9, 400)).map_err(|e| e.to_string())?;
    let first = early.rows[0];
    let zero_b = first.f_b.abs() <= ZERO_FORCE_FRACTION * first.f_d.abs();
    let nonzero_p = first.f_p.abs() > ZERO_FORCE_FRACTION * first.f_d.abs();
    ok &= zero_b && nonzero_p;
    notes.push(format!(
        "(a) F_b(0)/F_d {:.1e} F_p(0)/F_d {:.3}",
        first.f_b / first.f_d,
        first.f_p / first.f_d
    ));

    // (b) sign changes of F_p in (0, 2d/c).
    let n = analyze_trace(&early, Column::ForcePartial, WINDOW, SETTLING_TOL)
        .map_err(|e| e.to_string())?
        .sign_changes
        .len();
    ok &= n >= MIN_SIGN_CHANGES && n == PINNED_SIGN_CHANGES;
    notes.push(format!("(b) {n} sign changes"));

    // (c), (e) windowed means for T ≥ 100 d/c.
    let late = run_sweep(&model, D, GridSpec::time(100.0 * D, 120.0 * D, 4001)).map_err(|e| e.to_string())?;
    let start = late.meta.grid.start;
    for col in [Column::ForceBare, Column::ForcePartial, Column::RelativeForce] {
        let s = analyze_trace(&late, col, WINDOW, LATE_TOL)
            .map_err(|e| e.to_string())?
            .settling_time;
        let settled = s == Some(start);
        ok &= settled;
        notes.push(format!(
            "({}) {} late means {}",
            if col == Column::RelativeForce { 'e' } else { 'c' },
            col.name(),
            if settled { "within 1%" } else { "outside 1%" }
        ));
    }

    // (d) settling order after the light cone.
    let after = run_sweep(&model, D, GridSpec::time(20.1, 2000.0, 8000)).map_err(|e| e.to_string())?;
    let settle = |c: Column| -> Result<Option<f64>, String> {
        Ok(
            analyze_trace_against(&after, c, Reference::Column(Column::ForceDressed), WINDOW, SETTLING_TOL)
                .map_err(|e| e.to_string())?
                .settling_time,
        )
    };
    match (settle(Column::ForcePartial)?, settle(Column::ForceBare)?) {
        (Some(tp), Some(tb)) => {
            ok &= tp < tb
                && (tp - PINNED_SETTLING_PARTIAL).abs() <= PIN_ATOL
                && (tb - PINNED_SETTLING_BARE).abs() <= PIN_ATOL;
            notes.push(format!("(d) settling F_p {tp} < F_b {tb}"));
        }
        other => {
            ok = false;
            notes.push(format!("(d) settling not detected: {other:?}"));
        }
    }
    ensure(ok, notes.join("; "))
}

fn light_cone_growth() -> Outcome {
    let model = figure_model();
    let mut ok = true;
    let mut notes = Vec::new();
    for (side, sign) in [("a<1", -1.0), ("a>1", 1.0)] {
        let mut prev = 0.0;
        let mut values = Vec::new();
        for delta in LIGHTCONE_DELTAS {
            let pt = EvalPoint::new(D, 2.0 * D * (1.0 + sign * delta)).unwrap();
            let f = model.force(StateKind::Partial, pt).map_err(|e| e.to_string())?.abs();
            ok &= f > prev;
            prev = f;
            values.push(format!("{f:.2e}"));
        }
        notes.push(format!("{side}: {}", values.join(" < ")));
    }
    ensure(ok, format!("|F_p| {}", notes.join("; ")))
}

fn figure_tables(model: &Model) -> Result<Vec<String>, String> {
    let cone = 2.0 * D / model.params.c;
    [
        GridSpec::time(0.0, cone, 400),
        GridSpec::time(cone, 5.0 * cone, 800),
        GridSpec::time(0.0, 5.0 * cone, 1000),
    ]
    .into_iter()
    .map(|g| {
        run_sweep(model, D, g)
            .map(|t: SweepTable| t.to_csv())
            .map_err(|e| e.to_string())
    })
    .collect()
}

fn determinism() -> Outcome {
    let model = figure_model();
    let first = figure_tables(&model)?;
    let second = figure_tables(&model)?;
    let bytes: usize = first.iter().map(String::len).sum();
    ensure(
        first == second,
        format!("3 tables, {bytes} bytes, identical: {}", first == second),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("near-zone static limit", near_zone_limit),
        ("oracle equivalence grid", oracle_equivalence),
        ("derivative suite", derivative_suite),
        ("degeneracy identities", degeneracy_identities),
        ("figure shapes", figure_shapes),
        ("light-cone growth", light_cone_growth),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
