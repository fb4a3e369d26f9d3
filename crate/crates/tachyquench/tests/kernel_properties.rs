//! Property suites for the single-mode kernels and the lattice layer.

use proptest::prelude::*;

use tachyquench::lattice::{
    dispersion_sq, mass_map, mode_at, momentum_grid, unstable_mode_count, CoupledFieldParams,
    QuenchSpec, WhichMass,
};
use tachyquench::mode::{beta_eff, beta_eff_deep, ModeQuench};

/// Uncertainty product <q^2><p^2> - Re<qp>^2 >= 1/4 at all times, with
/// equality at t = 0 (the state starts pure).
#[test]
fn heisenberg_bound_on_the_reference_grid() {
    for &omega0 in &[0.1, 1.0, 10.0] {
        for &omega_sq in &[-4.0, -1.0, 0.0, 1.0, 4.0] {
            let mode = ModeQuench::new(omega0, omega_sq).unwrap();
            let mut t = 0.0;
            while t <= 20.0 {
                if mode.xi() * t <= 30.0 {
                    let qq = mode.var_qq(t).unwrap();
                    let pp = mode.var_pp(t).unwrap();
                    let qp = mode.cov_qp(t).unwrap();
                    let det = qq * pp - qp * qp;
                    // The determinant is exactly 1/4 analytically; in
                    // f64 the subtraction of the two products leaves
                    // rounding proportional to their size, so the
                    // absolute 1e-9 margin is only resolvable while
                    // qq*pp stays moderate.
                    let slack = if qq * pp <= 1e6 { 0.0 } else { 2e-15 * qq * pp };
                    assert!(
                        det >= 0.25 - 1e-9 - slack,
                        "uncertainty violated: w0={omega0}, w2={omega_sq}, t={t}: {det}"
                    );
                    if t == 0.0 {
                        assert!((det - 0.25).abs() <= 1e-12, "purity at t=0: {det}");
                    }
                }
                t += 0.25;
            }
        }
    }
}

proptest! {
    #[test]
    fn heisenberg_bound_random(
        omega0 in 0.05f64..50.0,
        omega_sq in -25.0f64..25.0,
        t in 0.0f64..20.0,
    ) {
        let mode = ModeQuench::new(omega0, omega_sq).unwrap();
        prop_assume!(mode.xi() * t <= 30.0);
        let qq = mode.var_qq(t).unwrap();
        let pp = mode.var_pp(t).unwrap();
        let qp = mode.cov_qp(t).unwrap();
        let det = qq * pp - qp * qp;
        // Relative slack on top of the absolute floor: the product of
        // two exponentially large numbers carries rounding of its own.
        prop_assert!(det >= 0.25 - 1e-9 - 1e-13 * (qq * pp).abs());
    }

    #[test]
    fn stable_kernels_are_periodic(
        omega0 in 0.1f64..10.0,
        omega in 0.2f64..5.0,
        t in 0.0f64..15.0,
    ) {
        let mode = ModeQuench::new(omega0, omega * omega).unwrap();
        let period = std::f64::consts::PI / omega;
        for f in [ModeQuench::var_qq, ModeQuench::var_pp, ModeQuench::cov_qp, ModeQuench::occupation] {
            let a = f(&mode, t).unwrap();
            let b = f(&mode, t + period).unwrap();
            prop_assert!(
                (a - b).abs() <= 1e-10 * a.abs().max(b.abs()) + 1e-10,
                "{a} vs {b} at t={t}, period={period}"
            );
        }
    }

    #[test]
    fn mass_map_round_trips(m_sq in -100.0f64..100.0, g in -100.0f64..100.0) {
        let (plus, minus) = mass_map(CoupledFieldParams { m_sq, g });
        prop_assert!(((plus + minus) / 2.0 - m_sq).abs() <= 1e-12 * m_sq.abs().max(1.0));
        prop_assert!(((plus - minus) / 2.0 - g).abs() <= 1e-12 * g.abs().max(1.0));
        // Tachyonic sector appears exactly when g exceeds m^2.
        prop_assert_eq!(minus < 0.0, g > m_sq);
    }

    #[test]
    fn occupation_nonnegative(
        omega0 in 0.05f64..100.0,
        omega_sq in -25.0f64..25.0,
        t in 0.0f64..20.0,
    ) {
        let mode = ModeQuench::new(omega0, omega_sq).unwrap();
        prop_assume!(mode.xi() * t <= 30.0);
        prop_assert!(mode.occupation(t).unwrap() >= 0.0);
    }
}

#[test]
fn beta_eff_matches_deep_quench_expansion() {
    // Relative agreement improves as w0 grows past w.
    let omega = 1.0;
    let mut prev = f64::INFINITY;
    for &omega0 in &[10.0, 100.0, 1000.0] {
        let exact = beta_eff(omega0, omega).unwrap();
        let approx = beta_eff_deep(omega0, omega);
        let rel = (exact / approx - 1.0).abs();
        assert!(rel < prev, "expansion should improve with omega0");
        prev = rel;
    }
    assert!(prev < 1e-5);
}

/// Dispersion floor: omega0_k >= m0 and omega_k^2 >= m_sq_final, with
/// equality at k = 0.
#[test]
fn dispersion_bounds() {
    let spec = QuenchSpec {
        dims: 2,
        sites_per_dim: vec![9, 9],
        spacing: 0.7,
        omega: Some(4.0),
        m0: 1.7,
        m_sq_final: -2.2,
        deep_quench: false,
    };
    for k in momentum_grid(&spec).unwrap() {
        let m = mode_at(&spec, &k).unwrap();
        assert!(m.omega0() >= spec.m0 - 1e-14);
        assert!(m.omega_sq() >= spec.m_sq_final - 1e-14);
    }
    let k0 = mode_at(&spec, &[0.0, 0.0]).unwrap();
    assert_eq!(k0.omega0(), spec.m0);
    assert_eq!(k0.omega_sq(), spec.m_sq_final);
}

/// Unstable condition on the grid agrees with the closed inequality
/// m > 2 Omega |sin(ka/2)| in one dimension.
#[test]
fn unstable_condition_closed_form() {
    let spec = QuenchSpec {
        dims: 1,
        sites_per_dim: vec![401],
        spacing: 1.0,
        omega: Some(3.0),
        m0: 1.0,
        m_sq_final: -2.56,
        deep_quench: false,
    };
    let m = 1.6f64;
    let brute = momentum_grid(&spec)
        .unwrap()
        .iter()
        .filter(|k| m > 2.0 * 3.0 * (k[0] * 0.5).sin().abs())
        .count();
    assert_eq!(unstable_mode_count(&spec).unwrap(), brute);
    // Continuum check at small k.
    for &k in &[1e-3, 4e-3] {
        let w = dispersion_sq(&spec, &[k], WhichMass::Final).unwrap();
        let cont = 9.0 * k * k + spec.m_sq_final;
        assert!((w - cont).abs() <= 1e-4 * 9.0 * k * k);
    }
}
