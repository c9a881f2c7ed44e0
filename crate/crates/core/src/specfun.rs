//! Sine and cosine integrals.
//!
//! ```text
//! Si(x) = ∫₀ˣ sin(u)/u du
//! Ci(x) = γ + ln x + ∫₀ˣ (cos(u) − 1)/u du
//! ```
//!
//! Two regimes are used. For `|x| ≤ SERIES_LIMIT` the Maclaurin series is
//! summed with compensated summation. Above it, `E₁(ix) = −Ci(x) + i(Si(x) − π/2)`
//! is evaluated from its continued fraction with the modified Lentz method,
//! which yields the auxiliary functions `f`, `g` implicitly
//! (`Si = π/2 − f cos − g sin`, `Ci = f sin − g cos`).
//!
//! Every value carries an absolute error bound built from the truncation
//! criterion and a running count of rounding steps.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Switchover between the Maclaurin series and the continued fraction.
pub const SERIES_LIMIT: f64 = 4.0;

const EPS: f64 = f64::EPSILON;
const MAX_SERIES_TERMS: usize = 64;
const MAX_CF_ITERATIONS: usize = 10_000;

/// A special-function value with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunValue {
    pub value: f64,
    pub abs_err_bound: f64,
}

/// Value and first two derivatives of Si or Ci at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Sine integral. Odd in `x`.
pub fn si(x: f64) -> Result<SpecFunValue> {
    if !x.is_finite() {
        return Err(Error::NonFiniteInput(x));
    }
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        si_series(ax)
    } else {
        si_ci_continued_fraction(ax).0
    };
    Ok(SpecFunValue {
        value: v.value.copysign(x),
        abs_err_bound: v.abs_err_bound,
    })
}

/// Cosine integral, defined for `x > 0` only.
pub fn ci(x: f64) -> Result<SpecFunValue> {
    if !x.is_finite() {
        return Err(Error::NonFiniteInput(x));
    }
    if x <= 0.0 {
        return Err(domain(format!("Ci requires a positive argument, got {x}")));
    }
    Ok(if x <= SERIES_LIMIT {
        ci_series(x)
    } else {
        si_ci_continued_fraction(x).1
    })
}

/// `Si(x)` with `Si'(x) = sin(x)/x` and `Si''(x) = (x cos x − sin x)/x²`.
pub fn si_jet(x: f64) -> Result<SpecFunJet> {
    let value = si(x)?.value;
    Ok(SpecFunJet {
        value,
        d1: sinc(x),
        d2: sinc_prime(x),
    })
}

/// `Ci(x)` with `Ci'(x) = cos(x)/x` and `Ci''(x) = −(x sin x + cos x)/x²`.
pub fn ci_jet(x: f64) -> Result<SpecFunJet> {
    let value = ci(x)?.value;
    let (s, c) = x.sin_cos();
    Ok(SpecFunJet {
        value,
        d1: c / x,
        d2: -(x * s + c) / (x * x),
    })
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

// d/dx [sin(x)/x]; the closed form cancels badly near the origin.
fn sinc_prime(x: f64) -> f64 {
    if x.abs() < 0.25 {
        // Σ_{k≥1} (−1)^k 2k x^{2k−1} / (2k+1)!
        let x2 = x * x;
        let mut p = x / 6.0; // x^{2k−1}/(2k+1)! at k = 1
        let mut sum = 0.0;
        for k in 1..12 {
            let kf = k as f64;
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            sum += sign * 2.0 * kf * p;
            p *= x2 / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
        }
        sum
    } else {
        let (s, c) = x.sin_cos();
        (x * c - s) / (x * x)
    }
}

/// Neumaier-compensated accumulator that also tracks Σ|term|·(ops) for the
/// rounding bound.
struct Accumulator {
    sum: f64,
    comp: f64,
    abs_weighted: f64,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            sum: 0.0,
            comp: 0.0,
            abs_weighted: 0.0,
        }
    }

    fn add(&mut self, term: f64, ops: usize) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
        self.abs_weighted += term.abs() * (ops as f64 + 2.0);
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn si_series(x: f64) -> SpecFunValue {
    let x2 = x * x;
    let mut acc = Accumulator::new();
    // p = (−1)^k x^{2k+1}/(2k+1)!
    let mut p = x;
    let mut tail = 0.0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        let term = p / (2.0 * kf + 1.0);
        acc.add(term, 3 * k + 1);
        p *= -x2 / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
        let next = p / (2.0 * kf + 3.0);
        // Terms decrease in magnitude once 2k+2 > x, so the alternating
        // remainder is bounded by the first omitted term.
        if 2.0 * kf + 2.0 > x && next.abs() <= 0.25 * EPS * acc.total().abs() {
            tail = next.abs();
            break;
        }
    }
    let value = acc.total();
    SpecFunValue {
        value,
        abs_err_bound: tail + EPS * acc.abs_weighted + 2.0 * EPS * value.abs(),
    }
}

pub(crate) fn ci_series(x: f64) -> SpecFunValue {
    let x2 = x * x;
    let ln = x.ln();
    let mut acc = Accumulator::new();
    acc.add(EULER_GAMMA, 0);
    acc.add(ln, 1);
    // q = (−1)^k x^{2k}/(2k)!
    let mut q = 1.0;
    let mut tail = 0.0;
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        q *= -x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
        let term = q / (2.0 * kf);
        acc.add(term, 3 * k + 1);
        let next = q * x2 / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0) * (2.0 * kf + 2.0));
        if 2.0 * kf + 1.0 > x && next.abs() <= 0.25 * EPS * acc.total().abs() {
            tail = next.abs();
            break;
        }
    }
    let value = acc.total();
    SpecFunValue {
        value,
        abs_err_bound: tail + EPS * acc.abs_weighted + 2.0 * EPS * value.abs(),
    }
}

/// Continued fraction for E₁(ix), valid for x well away from the origin.
/// Returns (Si, Ci).
pub(crate) fn si_ci_continued_fraction(x: f64) -> (SpecFunValue, SpecFunValue) {
    let tiny = f64::MIN_POSITIVE / EPS;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut iterations = 1usize;
    for i in 2..MAX_CF_ITERATIONS {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        iterations = i;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    let (s, co) = x.sin_cos();
    let e1 = Complex64::new(co, -s) * h;
    let rounding = 2.0 * (iterations as f64 + 6.0) * EPS * h.norm();
    let si = SpecFunValue {
        value: FRAC_PI_2 + e1.im,
        abs_err_bound: rounding + EPS * FRAC_PI_2,
    };
    let ci = SpecFunValue {
        value: -e1.re,
        abs_err_bound: rounding,
    };
    (si, ci)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // High-precision references (50-digit arithmetic), rounded to f64.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.01, 0.00999994444461111, -4.027979520982392),
        (0.5, 0.4931074180430667, -0.1777840788066129),
        (1.0, 0.946083070367183, 0.33740392290096816),
        (4.0, 1.7582031389490531, -0.1409816978869304),
        (16.0, 1.6313022682700329, -0.014200190120190023),
        (100.0, 1.5622254668890563, -0.005148825142610492),
        (1000.0, 1.5702331219687713, 0.0008263155110906822),
        (1e5, 1.570806320399394, 3.5758791572935135e-07),
    ];

    #[test]
    fn reference_values() {
        for &(x, s, c) in REFERENCE {
            let sv = si(x).unwrap();
            let cv = ci(x).unwrap();
            assert!((sv.value - s).abs() < 1e-14, "si({x}) = {}", sv.value);
            assert!((cv.value - c).abs() < 1e-14, "ci({x}) = {}", cv.value);
            assert!(sv.abs_err_bound <= 1e-13);
            assert!(cv.abs_err_bound <= 1e-13);
        }
    }

    #[test]
    fn si_zero_is_zero() {
        assert_eq!(si(0.0).unwrap().value, 0.0);
    }

    #[test]
    fn small_argument_limits() {
        let c = ci(1e-8).unwrap().value;
        assert!((c - (EULER_GAMMA + 1e-8f64.ln())).abs() < 1e-14);
        assert!((c + 17.843_465_079_050_83).abs() < 1e-12);
        assert!(ci(1e-300).unwrap().value.is_finite());
        assert_eq!(si(1e-300).unwrap().value, 1e-300);
    }

    #[test]
    fn large_argument_limits() {
        assert!((si(1e6).unwrap().value - FRAC_PI_2).abs() < 1e-6);
        assert!(ci(1e6).unwrap().value.abs() < 2e-6);
        let big = si(1e8).unwrap();
        assert!((big.value - FRAC_PI_2).abs() < 2e-8);
        assert!(big.abs_err_bound <= 1e-13);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(si(f64::NAN), Err(Error::NonFiniteInput(_))));
        assert!(matches!(ci(f64::INFINITY), Err(Error::NonFiniteInput(_))));
        assert!(matches!(ci(0.0), Err(Error::Domain(_))));
        assert!(matches!(ci(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn regimes_agree_at_switchover() {
        for x in [SERIES_LIMIT, 3.5, 4.5, 5.0] {
            let (s_cf, c_cf) = si_ci_continued_fraction(x);
            let s_ser = si_series(x);
            let c_ser = ci_series(x);
            assert!((s_cf.value - s_ser.value).abs() < 1e-12, "si at {x}");
            assert!((c_cf.value - c_ser.value).abs() < 1e-12, "ci at {x}");
        }
    }

    #[test]
    fn jet_trivial_derivatives() {
        assert!(si_jet(PI).unwrap().d1.abs() < 1e-16);
        assert!(ci_jet(FRAC_PI_2).unwrap().d1.abs() < 1e-16);
        assert!((si_jet(1.0).unwrap().d1 - 0.841_470_984_807_896_5).abs() < 1e-15);
        let j = si_jet(0.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (0.0, 1.0, 0.0));
    }

    #[test]
    fn sinc_prime_branches_meet() {
        for x in [0.249_999, 0.25, 0.250_001] {
            let (s, c) = f64::sin_cos(x);
            let closed = (x * c - s) / (x * x);
            assert!((sinc_prime(x) - closed).abs() < 1e-13);
        }
    }

    #[test]
    fn envelope_beyond_fifty() {
        let mut x = 50.0;
        while x < 5000.0 {
            assert!((si(x).unwrap().value - FRAC_PI_2).abs() <= 2.0 / x);
            assert!(ci(x).unwrap().value.abs() <= 2.0 / x);
            x *= 1.037;
        }
    }
}
