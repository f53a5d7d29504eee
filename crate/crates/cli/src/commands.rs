//! Subcommand implementations. Each builds both a JSON body and a table so
//! either format can be requested.

use rayon::prelude::*;
use serde_json::{json, Value};

use resonance_core::axis::{self, ResonanceSettings};
use resonance_core::branches::{branch_line, BranchMapSettings};
use resonance_core::caustics::{caustic_pair, CausticSettings};
use resonance_core::hj::MarchSettings;
use resonance_core::model::{InhomogeneityProfile, ModelParams};
use resonance_core::quad::QuadSettings;
use resonance_core::roots::linspace;
use resonance_core::trajectory::{self, caustic_parabola};
use resonance_core::Error;

use crate::config::{stepped, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;

pub struct Report {
    pub json: Value,
    pub table: Table,
}

fn quad(cfg: &RunConfig) -> QuadSettings<f64> {
    QuadSettings::with_abs_tol(cfg.tol.quad_abs)
}

fn gaussian_amplitude(cfg: &RunConfig) -> Result<f64, CliError> {
    match cfg.profile {
        InhomogeneityProfile::Gaussian { .. } => Ok(cfg.profile.alpha0()),
        _ => Err(CliError::Config {
            key: "profile.kind".into(),
            message: "this command scans the Gaussian width and needs profile.kind = gaussian".into(),
        }),
    }
}

fn status<T>(outcome: &Result<T, Error>) -> String {
    match outcome {
        Ok(_) => "ok".into(),
        Err(e) => snake(e.name()),
    }
}

fn snake(name: &str) -> String {
    let mut out = String::new();
    for (k, c) in name.chars().enumerate() {
        if c.is_uppercase() && k > 0 {
            out.push('_');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

pub fn resonance(cfg: &RunConfig) -> Result<Report, CliError> {
    let alpha0 = gaussian_amplitude(cfg)?;
    let settings = ResonanceSettings {
        root_tol: cfg.tol.root,
        fit_width: cfg.fit_width,
        fit_points: cfg.fit_points,
        quad: quad(cfg),
    };
    let r = axis::find_resonance(alpha0, cfg.bracket, &settings)?;
    let profile = InhomogeneityProfile::gaussian(alpha0, r.a_r)?;
    let (_, x_exit) = axis::trans_barrier_exit(&profile)?;
    let json = json!({
        "a_R": r.a_r,
        "slope": r.slope,
        "fit_window": [r.fit_window.0, r.fit_window.1],
        "exponent_at_aR": r.exponent_at_ar,
        "x_exit": x_exit,
    });
    let mut table = Table::new(vec!["a_R", "slope", "fit_lo", "fit_hi", "exponent_at_aR", "x_exit"]);
    table.push(vec![
        Cell::Num(r.a_r),
        Cell::Num(r.slope),
        Cell::Num(r.fit_window.0),
        Cell::Num(r.fit_window.1),
        Cell::Num(r.exponent_at_ar),
        Cell::Num(x_exit),
    ]);
    Ok(Report { json, table })
}

/// Exponent A/B and exit point at one width.
type SweepPoint = Result<(f64, f64), Error>;

pub fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let alpha0 = gaussian_amplitude(cfg)?;
    let q = quad(cfg);
    let widths = stepped(cfg.sweep.0, cfg.sweep.1, cfg.sweep.2);
    let points: Vec<(f64, SweepPoint)> = widths
        .par_iter()
        .map(|&a| {
            let r = InhomogeneityProfile::gaussian(alpha0, a).and_then(|p| {
                let half = axis::exit_action(&p, &q)?;
                let (_, x_exit) = axis::trans_barrier_exit(&p)?;
                Ok((2.0 * half, x_exit))
            });
            (a, r)
        })
        .collect();
    let mut table = Table::new(vec!["a", "A_over_B", "x_exit", "status"]);
    let mut rows = Vec::new();
    for (a, r) in &points {
        let (e, x) = *r.as_ref().unwrap_or(&(f64::NAN, f64::NAN));
        table.push(vec![Cell::Num(*a), Cell::Num(e), Cell::Num(x), Cell::Text(status(r))]);
        rows.push(json!({"a": a, "A_over_B": e, "x_exit": x, "status": status(r)}));
    }
    Ok(Report {
        json: json!({ "sweep": rows }),
        table,
    })
}

pub fn branch_map(cfg: &RunConfig) -> Result<Report, CliError> {
    let xs = stepped(cfg.x_grid.0, cfg.x_grid.1, cfg.x_grid.2);
    let mut settings = BranchMapSettings {
        march: MarchSettings::default(),
        quad: quad(cfg),
        ..BranchMapSettings::default()
    };
    settings.march.newton.tol = cfg.tol.newton;
    let lines: Vec<_> = cfg
        .ys
        .par_iter()
        .map(|&y| branch_line(&cfg.profile, y, &xs, &settings))
        .collect();
    let mut table = Table::new(vec!["y", "x", "branch_id", "v_or_Reu", "Imu", "Im_sigma", "psi_envelope", "status"]);
    let mut rows = Vec::new();
    for sample in lines.into_iter().flatten() {
        let (label, im_u, im_sigma) = match &sample.outcome {
            Ok(p) => {
                let label = if sample.y == 0.0 { p.u.im } else { p.u.re };
                (label, p.u.im, p.sigma.im)
            }
            Err(_) => (f64::NAN, f64::NAN, f64::NAN),
        };
        let envelope = (-cfg.b * im_sigma).exp();
        let st = status(&sample.outcome);
        rows.push(json!({
            "y": sample.y, "x": sample.x, "branch_id": sample.branch_id,
            "v_or_Reu": label, "Imu": im_u, "Im_sigma": im_sigma,
            "psi_envelope": envelope, "status": st,
        }));
        table.push(vec![
            Cell::Num(sample.y),
            Cell::Num(sample.x),
            Cell::Int(sample.branch_id as i64),
            Cell::Num(label),
            Cell::Num(im_u),
            Cell::Num(im_sigma),
            Cell::Num(envelope),
            Cell::Text(st),
        ]);
    }
    Ok(Report {
        json: json!({ "rows": rows }),
        table,
    })
}

pub fn trajectory(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = ModelParams::at_continuum_border(cfg.b, cfg.profile)?;
    let tr = trajectory::solve_trajectory(&model, &quad(cfg))?;
    trajectory::total_action(&tr, &model)?;
    let a_axis = axis::tunneling_exponent(&model)?;
    let ep = trajectory::Endpoint {
        eta0: tr.eta0,
        tau0: tr.tau0,
        alpha_star: tr.alpha_star,
        x_top: tr.x_top,
    };
    let mut table = Table::new(vec!["tau", "x", "eta"]);
    let mut path = Vec::new();
    for tau in linspace(0.0, tr.tau0, cfg.trajectory_samples) {
        let (x, eta) = ep.eval(tau)?;
        table.push(vec![Cell::Num(tau), Cell::Num(x), Cell::Num(eta)]);
        path.push(json!({"tau": tau, "x": x, "eta": eta}));
    }
    let json = json!({
        "eta0": tr.eta0,
        "tau0": tr.tau0,
        "alpha_star": tr.alpha_star,
        "x_top": tr.x_top,
        "A0_over_2B": tr.a0_over_2b,
        "A1_over_2B": tr.a1_over_2b,
        "A_total": tr.a_total,
        "A_axis": a_axis,
        "relative_difference": (tr.a_total - a_axis).abs() / tr.a_total.abs().max(1.0),
        "path": path,
    });
    Ok(Report { json, table })
}

pub fn caustic(cfg: &RunConfig) -> Result<Report, CliError> {
    let settings = CausticSettings {
        tol: cfg.tol.newton,
        ..CausticSettings::default()
    };
    let pair = caustic_pair(&cfg.profile, &settings)?;
    let mut table = Table::new(vec!["x_c", "y_c", "Re_u_c", "Im_u_c", "residual_F", "residual_dF"]);
    let mut points = Vec::new();
    for c in &pair {
        table.push(vec![
            Cell::Num(c.x_c),
            Cell::Num(c.y_c),
            Cell::Num(c.u_c.re),
            Cell::Num(c.u_c.im),
            Cell::Num(c.residuals.0),
            Cell::Num(c.residuals.1),
        ]);
        let mut parabola = Vec::new();
        for x in linspace(0.0, c.x_c, cfg.parabola_samples) {
            let d = caustic_parabola(c.x_c, c.y_c, x)?;
            parabola.push(json!({"x": x, "Im_dy": d.im}));
        }
        points.push(json!({
            "x_c": c.x_c, "y_c": c.y_c,
            "u_c": [c.u_c.re, c.u_c.im],
            "residuals": [c.residuals.0, c.residuals.1],
            "parabola": parabola,
        }));
    }
    Ok(Report {
        json: json!({ "caustics": points }),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_names_are_snake_case() {
        assert_eq!(snake("BranchJump"), "branch_jump");
        assert_eq!(snake("NoConvergence"), "no_convergence");
        assert_eq!(snake("Domain"), "domain");
    }
}
