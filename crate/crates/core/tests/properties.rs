use dcp_core::scan::{run_sweep, GridSpec, SweepTable};
use dcp_core::specfun::{ci, ci_jet, si, si_jet};
use dcp_core::{EvalPoint, Model, PhysicalParams, StateKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn si_is_odd(x in -1e6f64..1e6) {
        prop_assert_eq!(si(-x).unwrap().value.to_bits(), (-si(x).unwrap().value).to_bits());
    }

    #[test]
    fn energies_and_forces_scale_as_mu_squared(
        mu in 0.1f64..10.0,
        d in 1.0f64..30.0,
        a in 0.0f64..3.0,
    ) {
        prop_assume!((a - 1.0).abs() > 0.01);
        let base = Model::new(PhysicalParams::new(1.0, 1.0, 2.0, 1.0).unwrap()).unwrap();
        let scaled = Model::new(PhysicalParams::new(mu, 1.0, 2.0, 1.0).unwrap()).unwrap();
        let pt = EvalPoint::new(d, 2.0 * d * a).unwrap();
        let mu2 = mu * mu;
        // F_b vanishes at a = 0, leaving only stencil rounding noise.
        let floor = 1e-8 * mu2 / d.powi(4);
        for kind in [StateKind::Dressed, StateKind::Bare, StateKind::Partial] {
            let e0 = base.energy(kind, pt).unwrap();
            let e1 = scaled.energy(kind, pt).unwrap();
            prop_assert!((e1 - mu2 * e0).abs() <= 1e-13 * (mu2 * e0).abs().max(1e-300));
            let f0 = base.force(kind, pt).unwrap();
            let f1 = scaled.force(kind, pt).unwrap();
            prop_assert!((f1 - mu2 * f0).abs() <= 1e-12 * (mu2 * f0).abs().max(floor));
        }
        let r0 = base.relative_force_difference(pt).unwrap();
        let r1 = scaled.relative_force_difference(pt).unwrap();
        prop_assert_eq!(r1.to_bits(), r0.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn csv_round_trip_is_byte_identical(
        k0 in 0.2f64..3.0,
        k0p in 0.2f64..3.0,
        d in 1.0f64..20.0,
        steps in 10usize..40,
        keep in any::<bool>(),
    ) {
        let model = Model::new(PhysicalParams::new(1.0, k0, k0p, 1.0).unwrap()).unwrap();
        let mut grid = GridSpec::time(0.0, 4.0 * d, steps);
        grid.exclude_lightcone = !keep;
        let table = run_sweep(&model, d, grid).unwrap();
        let csv = table.to_csv();
        let parsed = SweepTable::from_csv(&csv).unwrap();
        prop_assert_eq!(parsed.to_csv(), csv);
    }
}

/// Central differences, compared against the natural `1/x` scale of the
/// derivatives so that zeros of sin and cos do not blow up the ratio.
#[test]
fn jets_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(0.01..100.0);
        let h = x * 1e-6;
        let scale = 1.0 / x;
        let dsi = (si(x + h).unwrap().value - si(x - h).unwrap().value) / (2.0 * h);
        let dci = (ci(x + h).unwrap().value - ci(x - h).unwrap().value) / (2.0 * h);
        let js = si_jet(x).unwrap();
        let jc = ci_jet(x).unwrap();
        assert!((dsi - js.d1).abs() <= 1e-6 * js.d1.abs().max(scale), "si x={x}");
        assert!((dci - jc.d1).abs() <= 1e-6 * jc.d1.abs().max(scale), "ci x={x}");
    }
}
