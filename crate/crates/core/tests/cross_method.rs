//! Trajectory and Hamilton–Jacobi exponents over the profile test matrix.

use resonance_core::axis::tunneling_exponent;
use resonance_core::model::{InhomogeneityProfile, ModelParams};
use resonance_core::quad::QuadSettings;
use resonance_core::trajectory::{solve_trajectory, total_action};

fn matrix() -> Vec<InhomogeneityProfile<f64>> {
    let mut m = vec![InhomogeneityProfile::Zero];
    for a0 in [0.5, 1.0, 2.0] {
        m.push(InhomogeneityProfile::constant(a0).unwrap());
    }
    for a in [35.0, 38.0, 39.5] {
        m.push(InhomogeneityProfile::gaussian(2.0, a).unwrap());
    }
    m
}

#[test]
fn total_action_equals_axis_exponent() {
    for profile in matrix() {
        for b in [1.0f64, 7.5] {
            let model = ModelParams::at_continuum_border(b, profile).unwrap();
            let tr = solve_trajectory(&model, &QuadSettings::default()).unwrap();
            let axis = tunneling_exponent(&model).unwrap();
            let rel = (tr.a_total - axis).abs() / tr.a_total.abs().max(1.0);
            assert!(rel < 1e-8, "{profile:?}: {} vs {axis}", tr.a_total);
            total_action(&tr, &model).unwrap();
        }
    }
}

#[test]
fn constant_profiles_share_the_closed_form() {
    for a0 in [0.5f64, 1.0, 2.0] {
        let b = 3.0;
        let model = ModelParams::at_continuum_border(b, InhomogeneityProfile::constant(a0).unwrap()).unwrap();
        let expect = 2.0 * b * (2.0 / 3.0) * (1.0 + a0 * a0).powf(1.5);
        let axis = tunneling_exponent(&model).unwrap();
        let tr = solve_trajectory(&model, &QuadSettings::default()).unwrap();
        assert!((axis - expect).abs() < 1e-10 * expect);
        assert!((tr.a_total - expect).abs() < 1e-10 * expect);
    }
}

#[test]
fn zero_profile_is_the_triangular_barrier() {
    for b in [0.5f64, 1.0, 40.0] {
        let model = ModelParams::at_continuum_border(b, InhomogeneityProfile::Zero).unwrap();
        let a = tunneling_exponent(&model).unwrap();
        assert!((a - 4.0 * b / 3.0).abs() < 1e-12 * a);
    }
}
