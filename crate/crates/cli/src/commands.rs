use std::fmt::Write as _;

use dcp_core::kernels::KernelOptions;
use dcp_core::scan::{run_sweep, GridSpec};
use dcp_core::validation::{run_validation, GridSize};
use dcp_core::{EvalPoint, Model, PhysicalParams, QuadratureConfig, StateKind};
use serde_json::json;

use crate::output::{emit, gnuplot_script, write_atomic, CliError};
use crate::{EvalArgs, FiguresArgs, Format, Grid, ModelArgs, SweepArgs, ValidateArgs, Vary};

fn build_model(args: &ModelArgs) -> Result<Model, CliError> {
    let params = PhysicalParams::new(args.mu, args.k0, args.k0p, args.c)?;
    Ok(Model::with_lightcone_eps(params, args.lightcone_eps)?)
}

pub fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    let pt = EvalPoint::new(args.d, args.t)?;
    let p = model.params;
    let a = model.reduced_time(pt);
    let x0 = 2.0 * p.k0 * pt.d;
    let x0p = 2.0 * p.k0p * pt.d;
    let e_d = model.energy_dressed(pt.d)?;
    let e_b = model.energy_bare(pt)?;
    let e_p = model.energy_partial(pt)?;
    let f_d = model.force(StateKind::Dressed, pt)?;
    let f_b = model.force(StateKind::Bare, pt)?;
    let f_p = model.force(StateKind::Partial, pt)?;
    let rel_f = model.relative_force_difference(pt)?;
    let text = match args.format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# t,d,a,x0,x0p,E_d,E_b,E_p,F_d,F_b,F_p,relF");
            let _ = writeln!(
                s,
                "{},{},{a},{x0},{x0p},{e_d},{e_b},{e_p},{f_d},{f_b},{f_p},{rel_f}",
                pt.t, pt.d
            );
            s
        }
        Format::Json => {
            let v = json!({
                "params": p,
                "lightcone_eps": model.lightcone_eps,
                "t": pt.t, "d": pt.d, "a": a, "x0": x0, "x0p": x0p,
                "E_d": e_d, "E_b": e_b, "E_p": e_p,
                "F_d": f_d, "F_b": f_b, "F_p": f_p, "relF": rel_f,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    emit(args.out.as_deref(), &text)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    let (fixed, mut grid) = match args.vary {
        Vary::Time => (args.d, GridSpec::time(args.tmin, args.tmax, args.steps)),
        Vary::Distance => (args.t, GridSpec::distance(args.dmin, args.dmax, args.steps)),
    };
    grid.exclude_lightcone = !args.keep_lightcone;
    let table = run_sweep(&model, fixed, grid)?;
    let text = match args.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    };
    emit(args.out.as_deref(), &text)
}

pub fn cmd_figures(args: &FiguresArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    if !(args.d > 0.0) {
        return Err(CliError::Usage(format!("distance must be positive, got {}", args.d)));
    }
    if args.steps < 10 {
        return Err(CliError::Usage("figures need at least 10 steps".into()));
    }
    let cone = 2.0 * args.d / model.params.c;
    let tables = [
        ("fig1.csv", GridSpec::time(0.0, cone, args.steps)),
        ("fig2.csv", GridSpec::time(cone, 5.0 * cone, 2 * args.steps)),
        ("fig3.csv", GridSpec::time(0.0, 5.0 * cone, 5 * args.steps / 2)),
    ];
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    for (name, grid) in tables {
        let table = run_sweep(&model, args.d, grid)?;
        write_atomic(&args.out.join(name), &table.to_csv())?;
    }
    write_atomic(&args.out.join("figures.gp"), &gnuplot_script(args.d, model.params.c))?;
    Ok(())
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let cfg = QuadratureConfig::with_tol(args.tol);
    cfg.validate()?;
    let opts = KernelOptions {
        flip_inside_branch: args.inject_branch_fault,
        ..KernelOptions::default()
    };
    let size = match args.grid {
        Grid::Small => GridSize::Small,
        Grid::Full => GridSize::Full,
    };
    let report = run_validation(size, &cfg, &opts)?;
    emit(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")),
    )?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::ValidationFailed(failed));
    }
    Ok(())
}
