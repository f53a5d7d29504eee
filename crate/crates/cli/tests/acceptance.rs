//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use resonance_core::axis::{self, find_resonance, AxisPoint, ResonanceSettings};
use resonance_core::caustics::{caustic_pair, CausticSettings};
use resonance_core::hj::{action_at, gradient_at, hj_residual, refine, Continuation, MarchSettings, NewtonSettings};
use resonance_core::model::{InhomogeneityProfile, ModelParams};
use resonance_core::quad::QuadSettings;
use resonance_core::trajectory::solve_trajectory;
use resonance_core::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn failed(detail: impl std::fmt::Display) -> Outcome {
    Outcome {
        pass: false,
        detail: format!("error: {detail}"),
    }
}

fn resonance() -> (resonance_core::ResonanceResult, Duration) {
    let start = Instant::now();
    let r = find_resonance(2.0, (30.0, 50.0), &ResonanceSettings::default()).expect("resonance search");
    (r, start.elapsed())
}

fn criterion_resonance(r: &resonance_core::ResonanceResult, elapsed: Duration) -> Outcome {
    let ok = (r.a_r - 39.5).abs() <= 2.0 && elapsed < Duration::from_secs(5);
    check(ok, format!("a_R = {:.6} (39.5 ± 2.0), {:.2} s (< 5 s)", r.a_r, elapsed.as_secs_f64()))
}

fn criterion_slope(r: &resonance_core::ResonanceResult) -> Outcome {
    check(
        (r.slope - 2.1).abs() <= 0.15,
        format!("slope = {:.4} over [{:.3}, {:.3}] (2.1 ± 0.15)", r.slope, r.fit_window.0, r.fit_window.1),
    )
}

fn criterion_exit(a_r: f64) -> Outcome {
    let g = InhomogeneityProfile::gaussian(2.0, a_r).unwrap();
    match axis::trans_barrier_exit(&g) {
        Ok((_, x0)) => check((x0 - 16.0).abs() <= 1.0, format!("x_exit = {x0:.4} (16 ± 1)")),
        Err(e) => failed(e),
    }
}

fn criterion_caustic(a_r: f64) -> Outcome {
    let g = InhomogeneityProfile::gaussian(2.0, a_r).unwrap();
    match caustic_pair(&g, &CausticSettings::default()) {
        Ok([up, down]) => {
            let ok = (up.x_c - 5.6).abs() <= 0.3
                && (up.y_c - 0.14).abs() <= 0.03
                && (down.x_c - up.x_c).abs() < 1e-9
                && (down.y_c + up.y_c).abs() < 1e-9;
            check(
                ok,
                format!(
                    "x_c = {:.4} (5.6 ± 0.3), y_c = ±{:.4} (0.14 ± 0.03), mirror at y = {:.4}",
                    up.x_c, up.y_c, down.y_c
                ),
            )
        }
        Err(e) => failed(e),
    }
}

fn criterion_zero_profile() -> Outcome {
    let mut worst: f64 = 0.0;
    for b in [0.5f64, 1.0, 10.0, 123.0] {
        let m = ModelParams::at_continuum_border(b, InhomogeneityProfile::Zero).unwrap();
        match axis::tunneling_exponent(&m) {
            Ok(a) => worst = worst.max((a - 4.0 * b / 3.0).abs() / (4.0 * b / 3.0)),
            Err(e) => return failed(e),
        }
    }
    check(worst < 1e-12, format!("max relative error {worst:.2e} (< 1e-12)"))
}

fn criterion_constant_identity() -> Outcome {
    let b = 2.0;
    let mut worst: f64 = 0.0;
    for a0 in [0.5f64, 1.0, 2.0] {
        let m = ModelParams::at_continuum_border(b, InhomogeneityProfile::constant(a0).unwrap()).unwrap();
        let expect = 2.0 * b * (2.0 / 3.0) * (1.0 + a0 * a0).powf(1.5);
        let axis_value = match axis::tunneling_exponent(&m) {
            Ok(v) => v,
            Err(e) => return failed(e),
        };
        let traj = match solve_trajectory(&m, &QuadSettings::default()) {
            Ok(t) => t.a_total,
            Err(e) => return failed(e),
        };
        worst = worst.max((axis_value - expect).abs() / expect).max((traj - expect).abs() / expect);
    }
    check(worst < 1e-10, format!("max relative error {worst:.2e} (< 1e-10)"))
}

fn criterion_cross_method() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [35.0, 38.0, 39.5] {
        let m = ModelParams::at_continuum_border(1.0, InhomogeneityProfile::gaussian(2.0, a).unwrap()).unwrap();
        let (tr, ax): (f64, f64) = match (solve_trajectory(&m, &QuadSettings::default()), axis::tunneling_exponent(&m)) {
            (Ok(t), Ok(x)) => (t.a_total, x),
            (Err(e), _) | (_, Err(e)) => return failed(e),
        };
        worst = worst.max((tr - ax).abs() / tr.abs().max(1.0));
    }
    check(worst < 1e-8, format!("max relative difference {worst:.2e} (< 1e-8)"))
}

fn criterion_hj_residual() -> Outcome {
    let g = InhomogeneityProfile::gaussian(2.0, 39.5).unwrap();
    let (_, x_exit) = match axis::trans_barrier_exit(&g) {
        Ok(e) => e,
        Err(e) => return failed(e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let quad = QuadSettings::with_abs_tol(1e-14);
    let newton = NewtonSettings::default();
    let h = 1e-5;
    let (mut worst_res, mut worst_grad): (f64, f64) = (0.0, 0.0);
    let mut points = 0;
    while points < 1000 {
        let x = rng.gen_range(0.0..1.0) * x_exit;
        let y = rng.gen_range(-1.0..=1.0);
        let mut march = Continuation::from_wire(&g, y, MarchSettings::default());
        let p = match march.advance_to(x) {
            Ok(p) => *p,
            Err(e) => return failed(format!("march to ({x}, {y}): {e}")),
        };
        let (dx, dy) = gradient_at(&g, &p);
        worst_res = worst_res.max(hj_residual(dx, dy, x));
        let sigma = |x: f64, y: f64| -> Option<Complex64> {
            let mut guess = p;
            guess.x = x;
            guess.y = y;
            let (q, _) = refine(&g, guess, &newton).ok()?;
            action_at(&g, &q, &quad).ok()
        };
        let fd = (|| {
            let fx = (sigma(x + h, y)? - sigma(x - h, y)?) / (2.0 * h);
            let fy = (sigma(x, y + h)? - sigma(x, y - h)?) / (2.0 * h);
            Some((fx, fy))
        })();
        let Some((fx, fy)) = fd else {
            return failed(format!("finite differences at ({x}, {y})"));
        };
        let err = ((fx - dx).norm_sqr() + (fy - dy).norm_sqr()).sqrt();
        worst_grad = worst_grad.max(err / (dx.norm_sqr() + dy.norm_sqr()).sqrt());
        points += 1;
    }
    check(
        worst_res < 1e-10 && worst_grad < 1e-5,
        format!(
            "{points} points on x in (0, {x_exit:.3}), |y| <= 1: max residual {worst_res:.2e} (< 1e-10), max gradient error {worst_grad:.2e} (< 1e-5)"
        ),
    )
}

fn criterion_round_trip() -> Outcome {
    let g = InhomogeneityProfile::gaussian(2.0, 39.5).unwrap();
    let roots = match axis::exit_roots(&g) {
        Ok(r) if r.len() == 2 => r,
        Ok(r) => return failed(format!("expected two exits, found {}", r.len())),
        Err(e) => return failed(e),
    };
    let (v1, v2): (f64, f64) = (roots[0], roots[1]);
    let ranges = [(0.0, v1), (v2, (2.0 * v2 - v1).min(axis::scan_limit(&g)))];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for (lo, hi) in ranges {
        for _ in 0..1000 {
            let v = rng.gen_range(lo..=hi);
            let p = match AxisPoint::on_branch(&g, v) {
                Ok(p) => p,
                Err(e) => return failed(format!("x_of_v({v}): {e}")),
            };
            let best = axis::enumerate_axis_roots(&g, p.x)
                .into_iter()
                .map(|r: f64| (r - v).abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
    }
    check(worst < 1e-9, format!("2 x 1000 samples, max |v - v'| = {worst:.2e} (< 1e-9)"))
}

fn criterion_determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let exe = env!("CARGO_BIN_EXE_eres");
    let runs: [(&str, &[&str]); 6] = [
        ("resonance", &[]),
        ("sweep", &[]),
        ("branch-map", &["--set", "branch_map.x_step=0.25"]),
        ("trajectory", &[]),
        ("trajectory", &["--format", "csv"]),
        ("caustic", &[]),
    ];
    for (k, (cmd, extra)) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{k}_{rep}.out"));
            let status = Command::new(exe)
                .arg(cmd)
                .args(*extra)
                .arg("--output")
                .arg(&path)
                .status()
                .expect("spawn eres");
            if !status.success() {
                return failed(format!("eres {cmd} exited with {status}"));
            }
            outputs.push(std::fs::read(&path).expect("read output"));
        }
        if outputs[0] != outputs[1] {
            return check(false, format!("eres {cmd} {extra:?}: outputs differ"));
        }
    }
    check(true, format!("{} subcommand runs byte-identical", runs.len()))
}

fn main() {
    let start = Instant::now();
    let (r, elapsed) = resonance();
    let results = [
        ("resonance value", criterion_resonance(&r, elapsed)),
        ("slope", criterion_slope(&r)),
        ("exit point", criterion_exit(r.a_r)),
        ("caustic pinning", criterion_caustic(r.a_r)),
        ("zero-profile WKB limit", criterion_zero_profile()),
        ("constant-alpha identity", criterion_constant_identity()),
        ("cross-method oracle", criterion_cross_method()),
        ("HJ residual and gradient", criterion_hj_residual()),
        ("axis round trip", criterion_round_trip()),
        ("CLI determinism", criterion_determinism()),
    ];
    let mut failures = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        failures += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        results.len() - failures,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
