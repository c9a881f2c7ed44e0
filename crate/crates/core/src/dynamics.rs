//! Interaction energies for the dressed, bare and partially dressed initial
//! states, the forces obtained from them by differentiation in the distance,
//! and the relative deviation of the partially dressed force from its static
//! value.
//!
//! Units: the energies are the `D_m` images of the reduced integrals, so they
//! scale as `μ²/d³` in whatever units `μ` and `d` carry. With `c = 1` time is
//! measured in the same unit as distance.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::{apply_dm, i1_jet, i3_jet_with, KernelOptions, MJet, DEFAULT_LIGHTCONE_EPS};

/// The atom-wall configuration. `k0` is the wavenumber after the frequency
/// quench at `t = 0`, `k0p` the one before it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mu: f64,
    pub k0: f64,
    pub k0p: f64,
    pub c: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            mu: 1.0,
            k0: 1.0,
            k0p: 2.0,
            c: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(mu: f64, k0: f64, k0p: f64, c: f64) -> Result<Self> {
        let p = PhysicalParams { mu, k0, k0p, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("k0", self.k0), ("k0p", self.k0p), ("c", self.c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Atom-wall distance and time since the quench.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub d: f64,
    pub t: f64,
}

impl EvalPoint {
    pub fn new(d: f64, t: f64) -> Result<Self> {
        let pt = EvalPoint { d, t };
        pt.validate()?;
        Ok(pt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(domain(format!("distance must be finite and positive, got {}", self.d)));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(domain(format!("time must be finite and non-negative, got {}", self.t)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Dressed,
    Bare,
    Partial,
}

/// The three energies at one point. Off the light cone all entries are
/// finite; on it the time-dependent ones are NaN and `on_lightcone` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyTriple {
    pub e_dressed: f64,
    pub e_bare: f64,
    pub e_partial: f64,
    pub on_lightcone: bool,
    pub a: f64,
}

/// Evaluates energies and forces for fixed physical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub params: PhysicalParams,
    pub lightcone_eps: f64,
    kernel: KernelOptions,
}

impl Model {
    pub fn new(params: PhysicalParams) -> Result<Self> {
        Model::with_lightcone_eps(params, DEFAULT_LIGHTCONE_EPS)
    }

    pub fn with_lightcone_eps(params: PhysicalParams, lightcone_eps: f64) -> Result<Self> {
        params.validate()?;
        if !(lightcone_eps > 0.0 && lightcone_eps < 1.0) {
            return Err(domain(format!("lightcone_eps must lie in (0, 1), got {lightcone_eps}")));
        }
        Ok(Model {
            params,
            lightcone_eps,
            kernel: KernelOptions {
                lightcone_eps,
                flip_inside_branch: false,
            },
        })
    }

    #[doc(hidden)]
    pub fn with_kernel_options(mut self, kernel: KernelOptions) -> Self {
        self.lightcone_eps = kernel.lightcone_eps;
        self.kernel = kernel;
        self
    }

    /// `a = ct/(2d)`.
    pub fn reduced_time(&self, pt: EvalPoint) -> f64 {
        self.params.c * pt.t / (2.0 * pt.d)
    }

    pub fn on_lightcone(&self, pt: EvalPoint) -> bool {
        (self.reduced_time(pt) - 1.0).abs() <= self.lightcone_eps
    }

    fn check_lightcone(&self, pt: EvalPoint) -> Result<f64> {
        let a = self.reduced_time(pt);
        if (a - 1.0).abs() <= self.lightcone_eps {
            return Err(Error::LightConeProximity {
                a,
                cone: 1.0,
                eps: self.lightcone_eps,
            });
        }
        Ok(a)
    }

    fn mu2(&self) -> f64 {
        self.params.mu * self.params.mu
    }

    /// Energies at unit dipole; every output carries the factor `μ²` applied
    /// once at the end so that rescaling `μ` is exact.
    fn unit_energy(&self, kind: StateKind, pt: EvalPoint) -> Result<f64> {
        pt.validate()?;
        let x0 = 2.0 * self.params.k0 * pt.d;
        let jet = match kind {
            StateKind::Dressed => return energy_dressed_with(1.0, self.params.k0, pt.d),
            StateKind::Bare => {
                let a = self.check_lightcone(pt)?;
                i1_jet(1.0, x0)? - i3_jet_with(1.0, a, x0, x0, &self.kernel)?
            }
            StateKind::Partial => {
                let a = self.check_lightcone(pt)?;
                let x0p = 2.0 * self.params.k0p * pt.d;
                let jet: MJet = i1_jet(1.0, x0)? - i3_jet_with(1.0, a, x0, x0, &self.kernel)?;
                jet + i3_jet_with(1.0, a, x0p, x0, &self.kernel)?
            }
        };
        apply_dm(jet, 1.0, pt.d)
    }

    /// Static energy of the fully dressed atom.
    pub fn energy_dressed(&self, d: f64) -> Result<f64> {
        energy_dressed_with(self.params.mu, self.params.k0, d)
    }

    pub fn energy_bare(&self, pt: EvalPoint) -> Result<f64> {
        self.energy(StateKind::Bare, pt)
    }

    pub fn energy_partial(&self, pt: EvalPoint) -> Result<f64> {
        self.energy(StateKind::Partial, pt)
    }

    pub fn energy(&self, kind: StateKind, pt: EvalPoint) -> Result<f64> {
        Ok(self.mu2() * self.unit_energy(kind, pt)?)
    }

    pub fn energy_triple(&self, pt: EvalPoint) -> Result<EnergyTriple> {
        pt.validate()?;
        let a = self.reduced_time(pt);
        let e_dressed = self.energy_dressed(pt.d)?;
        if self.on_lightcone(pt) {
            return Ok(EnergyTriple {
                e_dressed,
                e_bare: f64::NAN,
                e_partial: f64::NAN,
                on_lightcone: true,
                a,
            });
        }
        Ok(EnergyTriple {
            e_dressed,
            e_bare: self.energy_bare(pt)?,
            e_partial: self.energy_partial(pt)?,
            on_lightcone: false,
            a,
        })
    }

    /// `−∂E/∂d` at fixed `t`.
    pub fn force(&self, kind: StateKind, pt: EvalPoint) -> Result<f64> {
        Ok(self.mu2() * self.unit_force(kind, pt)?)
    }

    fn unit_force(&self, kind: StateKind, pt: EvalPoint) -> Result<f64> {
        pt.validate()?;
        if kind != StateKind::Dressed {
            self.check_lightcone(pt)?;
        }
        let t = pt.t;
        let energy = |d: f64| self.unit_energy(kind, EvalPoint { d, t });
        Ok(-richardson_derivative(energy, pt.d, STENCIL_STEP * pt.d)?)
    }

    /// `(F_p − F_d)/F_d`.
    pub fn relative_force_difference(&self, pt: EvalPoint) -> Result<f64> {
        let fd = self.unit_force(StateKind::Dressed, pt)?;
        if fd == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let fp = self.unit_force(StateKind::Partial, pt)?;
        Ok((fp - fd) / fd)
    }
}

/// `D_m I₁(m; 2k₀d)` at `m = 1`.
pub fn energy_dressed_with(mu: f64, k0: f64, d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(domain(format!("distance must be finite and positive, got {d}")));
    }
    Ok(mu * mu * apply_dm(i1_jet(1.0, 2.0 * k0 * d)?, 1.0, d)?)
}

/// Relative step of the distance stencil.
pub const STENCIL_STEP: f64 = 1e-5;

fn five_point<F: Fn(f64) -> Result<f64>>(f: &F, x: f64, h: f64) -> Result<f64> {
    let fp2 = f(x + 2.0 * h)?;
    let fp1 = f(x + h)?;
    let fm1 = f(x - h)?;
    let fm2 = f(x - 2.0 * h)?;
    Ok((-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h))
}

/// Five-point central difference at steps `h` and `h/2`, combined by one
/// Richardson level (the stencil error is O(h⁴)).
pub fn richardson_derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    let coarse = five_point(&f, x, h)?;
    let fine = five_point(&f, x, 0.5 * h)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(k0: f64, k0p: f64) -> Model {
        Model::new(PhysicalParams::new(1.0, k0, k0p, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn richardson_on_known_function() {
        let d = richardson_derivative(|x: f64| Ok(x.powi(-3)), 2.0, 2e-5).unwrap();
        assert!((d + 3.0 / 16.0).abs() < 1e-10);
    }

    #[test]
    fn near_zone_dressed_limit() {
        let m = model(1e-5, 1e-5);
        let e = m.energy_dressed(1.0).unwrap();
        assert!((e / (-1.0 / 12.0) - 1.0).abs() < 1e-3);
        let f = m.force(StateKind::Dressed, EvalPoint::new(1.0, 0.0).unwrap()).unwrap();
        assert!((f / (-0.25) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn bare_energy_vanishes_at_quench() {
        let m = model(1.0, 2.0);
        let e = m.energy_bare(EvalPoint::new(10.0, 0.0).unwrap()).unwrap();
        assert!(e.abs() < 1e-12 / 1000.0);
    }

    #[test]
    fn partial_at_quench_is_old_static_energy() {
        let m = model(1.0, 2.0);
        let e = m.energy_partial(EvalPoint::new(10.0, 0.0).unwrap()).unwrap();
        let old = energy_dressed_with(1.0, 2.0, 10.0).unwrap();
        assert!((e / old - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mu_scaling() {
        let p1 = PhysicalParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        let p2 = PhysicalParams { mu: 2.0, ..p1 };
        let (m1, m2) = (Model::new(p1).unwrap(), Model::new(p2).unwrap());
        let pt = EvalPoint::new(10.0, 5.0).unwrap();
        assert!((m2.energy_dressed(10.0).unwrap() / m1.energy_dressed(10.0).unwrap() - 4.0).abs() < 1e-14);
        assert!((m2.energy_partial(pt).unwrap() / m1.energy_partial(pt).unwrap() - 4.0).abs() < 1e-14);
        let r1 = m1.relative_force_difference(pt).unwrap();
        let r2 = m2.relative_force_difference(pt).unwrap();
        assert!((r1 - r2).abs() < 1e-12 * r1.abs().max(1.0));
    }

    #[test]
    fn light_cone_errors() {
        let m = model(1.0, 2.0);
        let on = EvalPoint::new(10.0, 20.0).unwrap();
        assert!(matches!(m.energy_bare(on), Err(Error::LightConeProximity { .. })));
        assert!(matches!(
            m.force(StateKind::Partial, on),
            Err(Error::LightConeProximity { .. })
        ));
        assert!(m.force(StateKind::Dressed, on).is_ok());
        let triple = m.energy_triple(on).unwrap();
        assert!(triple.on_lightcone && triple.e_bare.is_nan());
    }

    #[test]
    fn invalid_points() {
        assert!(EvalPoint::new(-1.0, 0.0).is_err());
        assert!(EvalPoint::new(1.0, -1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(model(1.0, 1.0).energy_dressed(0.0).is_err());
    }
}
