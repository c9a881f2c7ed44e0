//! Direct numerical evaluation of the semi-infinite oscillatory integrals,
//! independent of the closed forms in [`crate::kernels`].
//!
//! Each integrand is written as a linear combination of
//! `sin(ωx + θ)/(x + s)` terms. For every term the half-line is cut at the
//! zeros of `sin(ωx + θ)`; each half-period is integrated with adaptive
//! Gauss-Kronrod, and the alternating series of half-period contributions is
//! summed with an Euler transform after a directly summed head.

mod gauss_kronrod;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub(crate) use gauss_kronrod::adaptive;

/// Frequencies `|m − a|` at or below this are refused.
pub const ORACLE_LIGHTCONE_EPS: f64 = 1e-6;

/// Half-period count the per-panel tolerance is budgeted against.
const PANEL_BUDGET: f64 = 1024.0;
const INITIAL_HEAD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_halfperiods: usize,
    pub acceleration_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            max_halfperiods: 1_000_000,
            acceleration_depth: 20,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1e-14..=1e-4).contains(&self.abs_tol) {
            return Err(domain(format!("abs_tol {} outside [1e-14, 1e-4]", self.abs_tol)));
        }
        if self.max_halfperiods < 100 {
            return Err(domain("max_halfperiods must be at least 100"));
        }
        if !(2..=64).contains(&self.acceleration_depth) {
            return Err(domain("acceleration_depth must lie in [2, 64]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub est_err: f64,
    pub halfperiods_used: usize,
    pub converged: bool,
}

/// `∫₀^∞ sin(mx)/(x + x₀) dx`.
pub fn quad_i1(m: f64, x0: f64, cfg: &QuadratureConfig) -> Result<OracleResult> {
    check_positive("m", m)?;
    check_positive("x0", x0)?;
    integrate(&[Wave::new(1.0, m, 0.0)], x0, cfg)
}

/// `∫₀^∞ sin(mx)/(x + x_d) · cos[a(x + x_p)] dx`.
pub fn quad_i3(m: f64, a: f64, xd: f64, xp: f64, cfg: &QuadratureConfig) -> Result<OracleResult> {
    check_positive("m", m)?;
    check_non_negative("a", a)?;
    check_positive("xd", xd)?;
    check_positive("xp", xp)?;
    check_frequency_gap(m, a)?;
    let waves = [Wave::new(0.5, m + a, a * xp), Wave::new(0.5, m - a, -a * xp)];
    integrate(&waves, xd, cfg)
}

/// `∫₀^∞ sin(mx)/(x + x₀) · (1 − cos[a(x + x₀)]) dx`.
pub fn quad_bare_kernel(m: f64, a: f64, x0: f64, cfg: &QuadratureConfig) -> Result<OracleResult> {
    check_positive("m", m)?;
    check_non_negative("a", a)?;
    check_positive("x0", x0)?;
    if a > 0.0 {
        check_frequency_gap(m, a)?;
    }
    let waves = [
        Wave::new(1.0, m, 0.0),
        Wave::new(-0.5, m + a, a * x0),
        Wave::new(-0.5, m - a, -a * x0),
    ];
    integrate(&waves, x0, cfg)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFiniteInput(v));
    }
    if v <= 0.0 {
        return Err(domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFiniteInput(v));
    }
    if v < 0.0 {
        return Err(domain(format!("{name} must be non-negative, got {v}")));
    }
    Ok(())
}

fn check_frequency_gap(m: f64, a: f64) -> Result<()> {
    if (m - a).abs() <= ORACLE_LIGHTCONE_EPS {
        return Err(Error::LightConeProximity {
            a,
            cone: m,
            eps: ORACLE_LIGHTCONE_EPS,
        });
    }
    Ok(())
}

/// `coef · sin(omega·x + phase)`, normalized to `omega > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Wave {
    coef: f64,
    omega: f64,
    phase: f64,
}

impl Wave {
    fn new(coef: f64, omega: f64, phase: f64) -> Self {
        if omega < 0.0 {
            Wave {
                coef: -coef,
                omega: -omega,
                phase: -phase,
            }
        } else {
            Wave { coef, omega, phase }
        }
    }
}

fn merge(waves: &[Wave]) -> Vec<Wave> {
    let mut out: Vec<Wave> = Vec::with_capacity(waves.len());
    for w in waves {
        match out.iter_mut().find(|o| o.omega == w.omega && o.phase == w.phase) {
            Some(o) => o.coef += w.coef,
            None => out.push(*w),
        }
    }
    out.retain(|w| w.coef != 0.0);
    out
}

fn integrate(waves: &[Wave], shift: f64, cfg: &QuadratureConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let waves = merge(waves);
    let weight: f64 = waves.iter().map(|w| w.coef.abs()).sum();
    let mut total = OracleResult {
        value: 0.0,
        est_err: 0.0,
        halfperiods_used: 0,
        converged: true,
    };
    for w in &waves {
        let part = single_wave(w.omega, w.phase, shift, cfg.abs_tol / weight, cfg);
        total.value += w.coef * part.value;
        total.est_err += w.coef.abs() * part.est_err;
        total.halfperiods_used += part.halfperiods_used;
        total.converged &= part.converged;
    }
    total.converged &= total.est_err <= cfg.abs_tol;
    if !total.converged {
        return Err(Error::NoConvergence {
            tol: cfg.abs_tol,
            est_err: total.est_err,
            halfperiods: total.halfperiods_used,
        });
    }
    Ok(total)
}

/// Half-period contributions of `sin(ωx + θ)/(x + s)`, produced on demand.
struct HalfPeriods {
    omega: f64,
    phase: f64,
    shift: f64,
    first_zero_index: f64,
    panel_tol: f64,
    values: Vec<f64>,
    quad_err: f64,
}

impl HalfPeriods {
    fn new(omega: f64, phase: f64, shift: f64, panel_tol: f64) -> Self {
        let phase = phase.rem_euclid(2.0 * PI);
        HalfPeriods {
            omega,
            phase,
            shift,
            first_zero_index: (phase / PI).floor() + 1.0,
            panel_tol,
            values: Vec::new(),
            quad_err: 0.0,
        }
    }

    fn boundary(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            ((self.first_zero_index + (k - 1) as f64) * PI - self.phase) / self.omega
        }
    }

    fn ensure(&mut self, n: usize) {
        let (omega, phase, shift) = (self.omega, self.phase, self.shift);
        let f = move |x: f64| (omega * x + phase).sin() / (x + shift);
        while self.values.len() < n {
            let k = self.values.len();
            let est = adaptive(&f, self.boundary(k), self.boundary(k + 1), self.panel_tol);
            self.values.push(est.value);
            self.quad_err += est.error;
        }
    }

    /// Head summed directly up to `head`, tail by Euler transform of depth
    /// `depth`.
    fn accelerated(&self, head: usize, depth: usize) -> f64 {
        let direct: f64 = self.values[..head].iter().sum();
        direct + euler_transform(&self.values[head..head + depth + 1])
    }
}

/// Euler transform of an alternating series given its first terms:
/// `Σ_j u_j = Σ_n (−1)^n Δⁿv₀ / 2^{n+1}` with `v_j = (−1)^j u_j`.
/// Uses `terms.len() − 1` differences.
pub(crate) fn euler_transform(terms: &[f64]) -> f64 {
    let mut v: Vec<f64> = terms
        .iter()
        .enumerate()
        .map(|(j, &u)| if j % 2 == 0 { u } else { -u })
        .collect();
    let mut sum = 0.0;
    let mut scale = 0.5;
    let mut sign = 1.0;
    for n in 0..terms.len() - 1 {
        sum += sign * scale * v[0];
        for j in 0..v.len() - n - 1 {
            v[j] = v[j + 1] - v[j];
        }
        scale *= 0.5;
        sign = -sign;
    }
    sum
}

fn single_wave(omega: f64, phase: f64, shift: f64, tol: f64, cfg: &QuadratureConfig) -> OracleResult {
    let depth = cfg.acceleration_depth;
    let mut series = HalfPeriods::new(omega, phase, shift, tol / PANEL_BUDGET);
    let mut head = INITIAL_HEAD;
    loop {
        let needed = head + depth + 3;
        if needed > cfg.max_halfperiods {
            let used = series.values.len();
            let best = if used >= head / 2 + depth + 3 {
                series.accelerated(head / 2, depth)
            } else {
                f64::NAN
            };
            return OracleResult {
                value: best,
                est_err: f64::INFINITY,
                halfperiods_used: used,
                converged: false,
            };
        }
        series.ensure(needed);
        let e0 = series.accelerated(head, depth);
        let e1 = series.accelerated(head + 1, depth);
        let e2 = series.accelerated(head + 2, depth);
        let spread = (e0 - e1).abs().max((e0 - e2).abs());
        let rounding = 8.0 * f64::EPSILON * series.values.iter().map(|v| v.abs()).sum::<f64>();
        let est_err = 2.0 * spread + series.quad_err + rounding;
        if est_err <= tol {
            return OracleResult {
                value: e0,
                est_err,
                halfperiods_used: series.values.len(),
                converged: true,
            };
        }
        head *= 2;
    }
}
