//! Closed forms of the two regularized integrals
//!
//! ```text
//! I₁(m; x₀)        = ∫₀^∞ sin(mx)/(x + x₀) dx
//! I₃(m; a, x_d, x_p) = ∫₀^∞ sin(mx)/(x + x_d) · cos[a(x + x_p)] dx
//! ```
//!
//! carried as second-order jets in `m`, and the operator
//! `D_m = −μ²/(12π d³)[2 − 2∂_m + ∂²_m]` evaluated on them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{ci_jet, si_jet, SpecFunJet};

/// Default half-width of the excluded window around `a = m`.
pub const DEFAULT_LIGHTCONE_EPS: f64 = 1e-3;

/// Value of a quantity together with its first and second derivatives in `m`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MJet {
    pub value: f64,
    pub dm1: f64,
    pub dm2: f64,
}

impl MJet {
    pub const fn new(value: f64, dm1: f64, dm2: f64) -> Self {
        MJet { value, dm1, dm2 }
    }

    pub const fn constant(value: f64) -> Self {
        MJet::new(value, 0.0, 0.0)
    }

    /// `offset + slope·m` evaluated at `m`.
    pub fn affine(m: f64, slope: f64, offset: f64) -> Self {
        MJet::new(offset + slope * m, slope, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.dm1.is_finite() && self.dm2.is_finite()
    }

    /// Chain rule: `outer` holds (f, f', f'') at `self.value`.
    pub fn compose(self, outer: SpecFunJet) -> Self {
        MJet::new(
            outer.value,
            outer.d1 * self.dm1,
            outer.d1 * self.dm2 + outer.d2 * self.dm1 * self.dm1,
        )
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(SpecFunJet {
            value: s,
            d1: c,
            d2: -s,
        })
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(SpecFunJet {
            value: c,
            d1: -s,
            d2: -c,
        })
    }

    pub fn si(self) -> Result<Self> {
        Ok(self.compose(si_jet(self.value)?))
    }

    pub fn ci(self) -> Result<Self> {
        Ok(self.compose(ci_jet(self.value)?))
    }

    pub fn scale(self, k: f64) -> Self {
        MJet::new(k * self.value, k * self.dm1, k * self.dm2)
    }
}

impl Add for MJet {
    type Output = MJet;
    fn add(self, rhs: MJet) -> MJet {
        MJet::new(self.value + rhs.value, self.dm1 + rhs.dm1, self.dm2 + rhs.dm2)
    }
}

impl Sub for MJet {
    type Output = MJet;
    fn sub(self, rhs: MJet) -> MJet {
        MJet::new(self.value - rhs.value, self.dm1 - rhs.dm1, self.dm2 - rhs.dm2)
    }
}

impl Neg for MJet {
    type Output = MJet;
    fn neg(self) -> MJet {
        self.scale(-1.0)
    }
}

impl Mul for MJet {
    type Output = MJet;
    fn mul(self, rhs: MJet) -> MJet {
        MJet::new(
            self.value * rhs.value,
            self.dm1 * rhs.value + self.value * rhs.dm1,
            self.dm2 * rhs.value + 2.0 * self.dm1 * rhs.dm1 + self.value * rhs.dm2,
        )
    }
}

/// Reduced variables `a = ct/(2d)`, `x₀ = 2k₀d`, `x₀′ = 2k₀′d` and the
/// regularization parameter `m` (physical value 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessArgs {
    pub a: f64,
    pub x0: f64,
    pub x0p: f64,
    pub m: f64,
}

impl DimensionlessArgs {
    pub fn new(a: f64, x0: f64, x0p: f64, m: f64) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(domain(format!("a must be finite and non-negative, got {a}")));
        }
        for (name, v) in [("x0", x0), ("x0p", x0p), ("m", m)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(DimensionlessArgs { a, x0, x0p, m })
    }
}

/// Sign selecting the branch of the closed form of `I₃`: −1 before the light
/// cone (`a < m`), +1 after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchFlag {
    Inside = -1,
    Outside = 1,
}

impl BranchFlag {
    pub fn for_point(a: f64, m: f64, eps: f64) -> Result<Self> {
        if (a - m).abs() <= eps {
            return Err(Error::LightConeProximity { a, cone: m, eps });
        }
        Ok(if a < m { BranchFlag::Inside } else { BranchFlag::Outside })
    }

    pub fn sign(self) -> f64 {
        self as i32 as f64
    }
}

/// Options for the `I₃` closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub lightcone_eps: f64,
    /// Fault injection for mutation tests of the validation harness: evaluates
    /// the `lπ` term of the `a < m` branch with the wrong sign.
    #[doc(hidden)]
    pub flip_inside_branch: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            lightcone_eps: DEFAULT_LIGHTCONE_EPS,
            flip_inside_branch: false,
        }
    }
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

/// `I₁(m; x₀) = Ci(mx₀) sin(mx₀) + ½ cos(mx₀)(π − 2 Si(mx₀))`.
pub fn i1_jet(m: f64, x0: f64) -> Result<MJet> {
    check_positive("m", m)?;
    check_positive("x0", x0)?;
    let u = MJet::affine(m, x0, 0.0);
    let half_pi_minus_si = MJet::constant(FRAC_PI_2) - u.si()?;
    Ok(u.ci()? * u.sin() + u.cos() * half_pi_minus_si)
}

/// `I₃(m; a, x_d, x_p)` with the default light-cone window.
pub fn i3_jet(m: f64, a: f64, xd: f64, xp: f64) -> Result<MJet> {
    i3_jet_with(m, a, xd, xp, &KernelOptions::default())
}

/// `I₃(m; a, x_d, x_p)`; here `x_d` shifts the denominator and `x_p` the
/// phase of the cosine. With `φ = a(x_p − x_d)`:
///
/// ```text
/// ¼[ −2 Ci((a+m)x_d) sin(φ − m x_d) + 2 Ci(|a−m| x_d) sin(φ + m x_d)
///    + cos(φ + m x_d)(−lπ + 2 Si((a−m)x_d)) + cos(φ − m x_d)(π − 2 Si((a+m)x_d)) ]
/// ```
pub fn i3_jet_with(m: f64, a: f64, xd: f64, xp: f64, opts: &KernelOptions) -> Result<MJet> {
    check_positive("m", m)?;
    check_positive("xd", xd)?;
    check_positive("xp", xp)?;
    if !a.is_finite() {
        return Err(Error::NonFiniteInput(a));
    }
    if a < 0.0 {
        return Err(domain(format!("a must be non-negative, got {a}")));
    }
    let branch = BranchFlag::for_point(a, m, opts.lightcone_eps)?;
    let l = branch.sign();
    let pi_sign = if opts.flip_inside_branch && branch == BranchFlag::Inside {
        -l
    } else {
        l
    };

    let phase = a * (xp - xd);
    let theta_plus = MJet::affine(m, xd, phase);
    let theta_minus = MJet::affine(m, -xd, phase);
    let sum_arg = MJet::affine(m, xd, a * xd);
    let diff_arg = MJet::affine(m, -xd, a * xd);
    // l(a − m) = |a − m|
    let folded_arg = diff_arg.scale(l);

    let si_sum = sum_arg.si()?;
    let t1 = (sum_arg.ci()? * theta_minus.sin()).scale(-2.0);
    let t2 = (folded_arg.ci()? * theta_plus.sin()).scale(2.0);
    let t3 = theta_plus.cos() * (MJet::constant(-pi_sign * PI) + diff_arg.si()?.scale(2.0));
    let t4 = theta_minus.cos() * (MJet::constant(PI) - si_sum.scale(2.0));
    Ok((t1 + t2 + t3 + t4).scale(0.25))
}

/// `D_m` at the jet's evaluation point: `−μ²/(12π d³)(2f − 2∂_m f + ∂²_m f)`.
pub fn apply_dm(jet: MJet, mu: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(domain(format!("distance must be positive, got {d}")));
    }
    let prefactor = -mu * mu / (12.0 * PI * d * d * d);
    Ok(prefactor * (2.0 * jet.value - 2.0 * jet.dm1 + jet.dm2))
}
