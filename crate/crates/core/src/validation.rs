//! Cross-checks of the closed forms against the quadrature oracle and of the
//! analytic `m`-derivatives against finite differences.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::{i1_jet, i3_jet_with, KernelOptions, MJet};
use crate::oracle::{quad_i1, quad_i3, QuadratureConfig};

pub const ORACLE_TOL: f64 = 1e-9;
pub const DERIVATIVE_RTOL: f64 = 1e-6;
/// Magnitude below which derivative deviations are compared absolutely.
pub const DERIVATIVE_FLOOR: f64 = 1e-4;
/// Relative step of the finite-difference stencil in `m`.
pub const DERIVATIVE_STEP: f64 = 1e-4;
/// Minimum `|a − m|` for grid points.
pub const GRID_LIGHTCONE_GAP: f64 = 0.05;

pub const FULL_M: [f64; 3] = [0.7, 1.0, 1.5];
pub const FULL_A: [f64; 5] = [0.0, 0.3, 0.9, 1.5, 3.0];
pub const FULL_X0: [f64; 4] = [0.5, 5.0, 20.0, 60.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSize {
    Small,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub m: f64,
    pub a: f64,
    pub xd: f64,
    pub xp: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub points: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub failures: Vec<Failure>,
}

impl Check {
    fn new(name: &str, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            passed: true,
            points: 0,
            max_deviation: 0.0,
            tolerance,
            failures: Vec::new(),
        }
    }

    /// `deviation` is already normalized so that failure means `> tolerance`.
    fn record(&mut self, deviation: f64, at: (f64, f64, f64, f64)) {
        self.points += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        if !(deviation <= self.tolerance) {
            self.passed = false;
            self.failures.push(Failure {
                m: at.0,
                a: at.1,
                xd: at.2,
                xp: at.3,
                deviation,
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub grid: GridSize,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `(m, a, x0)` points of the oracle-equivalence grid.
pub fn oracle_grid(size: GridSize) -> Vec<(f64, f64, f64)> {
    let (ms, as_, xs): (&[f64], &[f64], &[f64]) = match size {
        GridSize::Small => (&[1.0], &[0.0, 0.3, 1.5, 3.0], &[5.0, 20.0]),
        GridSize::Full => (&FULL_M, &FULL_A, &FULL_X0),
    };
    let mut out = Vec::new();
    for &m in ms {
        for &a in as_ {
            for &x0 in xs {
                if (a - m).abs() > GRID_LIGHTCONE_GAP {
                    out.push((m, a, x0));
                }
            }
        }
    }
    out
}

/// Deterministic low-discrepancy points `(m, a, xd, xp)` away from the light cone.
pub fn derivative_points(count: usize) -> Vec<(f64, f64, f64, f64)> {
    const PHI: [f64; 4] = [
        0.569_840_290_998_053,
        0.324_717_957_244_746,
        0.754_877_666_246_693,
        0.430_159_709_001_947,
    ];
    let mut out = Vec::with_capacity(count);
    let mut k = 1u64;
    while out.len() < count {
        let u = PHI.map(|p| (k as f64 * p).fract());
        k += 1;
        let m = 0.7 + 0.8 * u[0];
        let a = 3.0 * u[1];
        if (a - m).abs() <= GRID_LIGHTCONE_GAP {
            continue;
        }
        let xd = 0.5 * (120.0f64).powf(u[2]);
        let xp = 0.5 * (120.0f64).powf(u[3]);
        out.push((m, a, xd, xp));
    }
    out
}

/// Five-point central estimates of the first and second derivative.
pub fn five_point_derivatives<F: Fn(f64) -> Result<f64>>(f: F, m: f64, h: f64) -> Result<(f64, f64)> {
    let (fm2, fm1, f0, fp1, fp2) = (f(m - 2.0 * h)?, f(m - h)?, f(m)?, f(m + h)?, f(m + 2.0 * h)?);
    let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    Ok((d1, d2))
}

fn derivative_deviation(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(DERIVATIVE_FLOOR)
}

fn check_jet_derivatives<F: Fn(f64) -> Result<MJet>>(
    check: &mut Check,
    jet_at: F,
    at: (f64, f64, f64, f64),
) -> Result<()> {
    let m = at.0;
    let jet = jet_at(m)?;
    let h = DERIVATIVE_STEP * m;
    let (d1, _) = five_point_derivatives(|mm| Ok(jet_at(mm)?.value), m, h)?;
    // A second difference of the value loses ~eps/h² to cancellation; the
    // first difference of the (already checked) first derivative does not.
    let (d2, _) = five_point_derivatives(|mm| Ok(jet_at(mm)?.dm1), m, h)?;
    let dev = derivative_deviation(jet.dm1, d1).max(derivative_deviation(jet.dm2, d2));
    check.record(dev, at);
    Ok(())
}

pub fn run_validation(size: GridSize, cfg: &QuadratureConfig, opts: &KernelOptions) -> Result<ValidationReport> {
    let grid = oracle_grid(size);

    let mut i1 = Check::new("i1_vs_oracle", ORACLE_TOL);
    let mut seen_i1 = Vec::new();
    for &(m, _, x0) in &grid {
        if seen_i1.contains(&(m, x0)) {
            continue;
        }
        seen_i1.push((m, x0));
        let closed = i1_jet(m, x0)?.value;
        let quad = quad_i1(m, x0, cfg)?.value;
        i1.record((closed - quad).abs(), (m, 0.0, x0, x0));
    }

    let mut i3 = Check::new("i3_vs_oracle", ORACLE_TOL);
    for &(m, a, x0) in &grid {
        let mut pairs = vec![(x0, x0)];
        if size == GridSize::Full {
            pairs.push((2.0 * x0, x0));
        }
        for (xd, xp) in pairs {
            let closed = i3_jet_with(m, a, xd, xp, opts)?.value;
            let quad = quad_i3(m, a, xd, xp, cfg)?.value;
            i3.record((closed - quad).abs(), (m, a, xd, xp));
        }
    }

    let count = match size {
        GridSize::Small => 40,
        GridSize::Full => 200,
    };
    let mut d_i1 = Check::new("i1_m_derivatives", DERIVATIVE_RTOL);
    let mut d_i3 = Check::new("i3_m_derivatives", DERIVATIVE_RTOL);
    for at @ (_, a, xd, xp) in derivative_points(count) {
        check_jet_derivatives(&mut d_i1, |mm| i1_jet(mm, xd), at)?;
        check_jet_derivatives(&mut d_i3, |mm| i3_jet_with(mm, a, xd, xp, opts), at)?;
    }

    Ok(ValidationReport {
        grid: size,
        checks: vec![i1, i3, d_i1, d_i3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_respect_light_cone_gap() {
        let g = oracle_grid(GridSize::Full);
        assert!(g.iter().all(|&(m, a, _)| (a - m).abs() > GRID_LIGHTCONE_GAP));
        assert!(g.iter().any(|&(m, a, _)| a < m) && g.iter().any(|&(m, a, _)| a > m));
        let p = derivative_points(200);
        assert_eq!(p.len(), 200);
        assert!(p.iter().all(|&(m, a, _, _)| (a - m).abs() > GRID_LIGHTCONE_GAP));
    }

    #[test]
    fn small_validation_passes() {
        let report = run_validation(GridSize::Small, &QuadratureConfig::default(), &KernelOptions::default()).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{} max {:e}: {:?}", c.name, c.max_deviation, c.failures);
        }
    }
}
