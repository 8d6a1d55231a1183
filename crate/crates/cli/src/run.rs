// SPDX-License-Identifier: Apache-2.0

//! The four workflows. Each returns a table plus a JSON summary; nothing here
//! touches the filesystem.

use std::collections::BTreeSet;
use std::time::Instant;

use qbm_core::propositions::{
    default_onset_grid, product_initial_state, scaling_row, SeparabilityCertificate,
};
use qbm_core::{
    build_certificate, immediate_entanglement_check, mean_energy, ppt_verdict, prop1_constants,
    verify_all_times_separable, CovarianceMatrix, Dynamics, Separability,
};
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, TimeGrid};
use crate::table::{Cell, ResultTable};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: ResultTable,
    pub summary: Value,
    /// Whether the scientific check of the workflow held.
    pub passed: bool,
    /// Certificate document written next to the table by `certify`.
    pub certificate: Option<Value>,
    pub warnings: Vec<String>,
    /// Column charted by default.
    pub default_column: &'static str,
}

fn verdict_name(s: Separability) -> &'static str {
    match s {
        Separability::Separable => "separable",
        Separability::Entangled => "entangled",
        Separability::Inconclusive => "inconclusive",
    }
}

fn certificate_json(cert: &SeparabilityCertificate, slack: f64) -> Value {
    let c = &cert.constants;
    let g = &cert.gamma0_sys;
    json!({
        "omega_inf": c.omega_inf,
        "omega_max": c.omega_max,
        "delta": c.delta,
        "big_omega": c.big_omega,
        "gamma": c.gamma,
        "beta_star": cert.beta_star,
        "beta": cert.beta,
        "gamma0_sys": [[g[(0, 0)], g[(0, 1)]], [g[(1, 0)], g[(1, 1)]]],
        "margin": cert.margin,
        "slack": slack,
    })
}

/// `G_0^S (+) G(beta H_E)` from the configured state, or the certified
/// initial state.
fn initial_state(
    cfg: &ExperimentConfig,
    net: &qbm_core::OscillatorNetwork,
) -> Result<(CovarianceMatrix, Option<SeparabilityCertificate>), CliError> {
    match cfg.system_covariance()? {
        Some(sys) => {
            let beta = cfg.require_beta()?;
            Ok((product_initial_state(&sys, net, beta)?, None))
        }
        None => {
            let cert = build_certificate(net, cfg.tolerances.margin)?;
            Ok((cert.initial_covariance(net)?, Some(cert)))
        }
    }
}

pub fn run_evolve(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let net = cfg.network()?;
    let tol = cfg.tolerances.separability;
    let (g0, cert) = initial_state(cfg, &net)?;
    let times = cfg.times_or(TimeGrid::linear(0.0, 10.0, 101));
    let dynamics = Dynamics::new(&net);
    let form = net.quadratic_form();

    let mut table = ResultTable::new([
        "t",
        "min_pt_symplectic",
        "log_negativity",
        "mean_energy",
        "min_symplectic",
    ]);
    let mut min_pt = f64::INFINITY;
    let mut max_ln: f64 = 0.0;
    for &t in &times {
        let gt = dynamics.evolve(&g0, t)?;
        let v = ppt_verdict(&gt, tol)?;
        min_pt = min_pt.min(v.min_pt_symplectic);
        max_ln = max_ln.max(v.log_negativity);
        table.push(vec![
            t.into(),
            v.min_pt_symplectic.into(),
            v.log_negativity.into(),
            mean_energy(&gt, &form)?.into(),
            gt.min_symplectic_eigenvalue().into(),
        ]);
    }
    // a certified state must stay separable; otherwise evolve only reports
    let passed = cert.is_none() || min_pt >= 1.0 - tol;
    Ok(RunOutput {
        table,
        summary: json!({
            "min_pt_symplectic": min_pt,
            "max_log_negativity": max_ln,
            "initial_energy": mean_energy(&g0, &form)?,
        }),
        passed,
        certificate: None,
        warnings: Vec::new(),
        default_column: "min_pt_symplectic",
    })
}

pub fn run_certify(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let net = cfg.network()?;
    let cert = build_certificate(&net, cfg.tolerances.margin)?;
    let times = cfg.times_or(TimeGrid::linear(0.0, 100.0, 400));
    let report = verify_all_times_separable(&cert, &net, &times, cfg.tolerances.separability)?;

    let mut table = ResultTable::new([
        "t",
        "min_pt_symplectic",
        "log_negativity",
        "min_symplectic",
        "verdict",
    ]);
    for s in &report.samples {
        table.push(vec![
            s.t.into(),
            s.verdict.min_pt_symplectic.into(),
            s.verdict.log_negativity.into(),
            s.min_symplectic.into(),
            verdict_name(s.verdict.separability).into(),
        ]);
    }
    let certificate = certificate_json(&cert, cert.slack(&net)?);
    Ok(RunOutput {
        table,
        summary: json!({
            "certificate": certificate,
            "min_pt_symplectic": report.min_pt_symplectic,
            "passed": report.passed,
        }),
        passed: report.passed,
        certificate: Some(certificate),
        warnings: Vec::new(),
        default_column: "min_pt_symplectic",
    })
}

pub fn run_immediate(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let net = cfg.network()?;
    let beta = cfg.require_beta()?;
    let sys = cfg.system_covariance()?.ok_or_else(|| CliError::Field {
        field: "system_state".into(),
        message: "immediate needs a pure state, not `certificate`".into(),
    })?;
    let times = match &cfg.time_grid {
        Some(g) => g.times(),
        None => default_onset_grid(),
    };
    let report = immediate_entanglement_check(&sys, &net, beta, &times)?;

    let mut columns = vec!["t".to_owned()];
    columns.extend(report.modes.iter().map(|m| format!("lambda_mode_{m}")));
    columns.push("min_lambda".into());
    columns.push("full_min_pt_symplectic".into());
    let mut table = ResultTable::new(columns);
    for s in &report.onset_curve {
        let mut row: Vec<Cell> = vec![s.t.into()];
        row.extend(s.lambdas.iter().map(|&l| Cell::from(l)));
        row.push(s.min_lambda.into());
        row.push(s.full_min_pt.into());
        table.push(row);
    }
    let rates: Vec<Value> = report
        .rates
        .iter()
        .map(|r| {
            json!({
                "mode": r.mode,
                "lambda_dot0": r.analytic,
                "lambda_dot0_quoted_blocks": r.quoted,
                "lambda_dot0_fd": r.finite_difference,
            })
        })
        .collect();
    Ok(RunOutput {
        table,
        summary: json!({
            "lambda_at_zero": report.lambda_at_zero,
            "rates": rates,
            "onset_order": report.onset_fit.map(|f| f.order),
            "onset_coefficient": report.onset_fit.map(|f| f.coefficient),
            "onset_fit_points": report.onset_fit.map(|f| f.points),
            "epsilon_found": report.epsilon_found,
            "passed": report.passed,
        }),
        passed: report.passed,
        certificate: None,
        warnings: Vec::new(),
        default_column: "min_lambda",
    })
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let template = cfg.family()?;
    let requested = cfg.ns.as_ref().ok_or_else(|| CliError::Field {
        field: "ns".into(),
        message: "sweep needs a list of bath sizes".into(),
    })?;
    let ns: BTreeSet<usize> = requested.iter().copied().collect();
    let mut warnings = Vec::new();
    if ns.len() < requested.len() {
        warnings.push(format!(
            "duplicate bath sizes in ns ignored; running {}",
            ns.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }

    let mut table = ResultTable::new([
        "n_env",
        "delta",
        "big_omega",
        "gamma",
        "beta_star",
        "wall_clock_s",
        "status",
    ]);
    let mut failures = 0;
    for &n in &ns {
        let start = Instant::now();
        match scaling_row(&template.with_n_env(n), cfg.tolerances.margin) {
            Ok(row) => table.push(vec![
                n.into(),
                row.delta.into(),
                row.big_omega.into(),
                row.gamma.into(),
                row.beta_star.into(),
                start.elapsed().as_secs_f64().into(),
                "ok".into(),
            ]),
            Err(e) => {
                failures += 1;
                let mut row: Vec<Cell> = vec![n.into()];
                row.extend((0..4).map(|_| Cell::from("")));
                row.push(start.elapsed().as_secs_f64().into());
                row.push(format!("error: {e}").into());
                table.push(row);
            }
        }
    }
    let gamma = prop1_constants(&qbm_core::make_spectral_model(&template)?)?.gamma;
    Ok(RunOutput {
        table,
        summary: json!({ "gamma": gamma, "failed_rows": failures }),
        passed: failures == 0,
        certificate: None,
        warnings,
        default_column: "beta_star",
    })
}
