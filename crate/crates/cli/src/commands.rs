//! Subcommand bodies. Each returns its result as a table or text so the
//! binary only handles flags and output.

use rayon::prelude::*;
use rrho_core::analytic::{dimension_servers, known_areas, p_rr_marginal, signaling_rate};
use rrho_core::montecarlo::{estimate_ho, estimate_rr, estimate_rr_unknown, Estimate};
use rrho_core::protocol::{export_trace, ho_sequence, rr_sequence, simulate_load, HoMode};
use rrho_core::scenario::{ServerKind, SignalingConfig};

use crate::config::{Scenario, SweepOutput, SweepSpec};
use crate::output::{format_number, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Rr,
    Ho,
}

pub fn analytic(scenario: &Scenario) -> Result<Table, CliError> {
    match scenario {
        Scenario::Known(scene) if scene.mobility.speed.is_fixed() && scene.mobility.angle.is_fixed() => {
            let (d, xi) = (scene.mobility.speed.mean(), scene.mobility.angle.mean());
            let a = known_areas(scene, d, xi)?;
            let p = rrho_core::analytic::p_rr_with_areas(a.a1, a.a_extra, scene.lambda_ris)?;
            let mut t = Table::new(["p_rr", "a_e", "a_b", "a1", "a_extra"]);
            t.push([p, a.a_e, a.a_b, a.a1, a.a_extra].map(format_number).to_vec());
            Ok(t)
        }
        Scenario::Known(scene) => {
            let m = p_rr_marginal(scene, &scene.mobility)?;
            let mut t = Table::new(["p_rr", "outside_nodes"]);
            t.push(vec![format_number(m.p), m.outside_nodes.to_string()]);
            Ok(t)
        }
        Scenario::Unknown { scenario, signaling } => {
            let r = signaling_rate(scenario, signaling)?;
            let mut t = Table::new(["p_rr", "p_ho", "e_rr", "e_ho", "e_sb", "e_so", "e_gamma", "e_gamma_factored"]);
            t.push([r.p_rr, r.p_ho, r.e_rr, r.e_ho, r.e_sb, r.e_so, r.e_gamma, r.e_gamma_factored].map(format_number).to_vec());
            Ok(t)
        }
    }
}

fn estimate(scenario: &Scenario, which: Estimator, trials: u64, seed: u64) -> Result<Estimate, CliError> {
    Ok(match (scenario, which) {
        (Scenario::Known(scene), Estimator::Rr) => estimate_rr(scene, &scene.mobility, trials, seed)?,
        (Scenario::Known(_), Estimator::Ho) => {
            return Err(CliError::validation("kind: ho needs an unknown-obstacle scenario"));
        }
        (Scenario::Unknown { scenario, .. }, Estimator::Rr) => estimate_rr_unknown(scenario, &scenario.mobility, trials, seed)?,
        (Scenario::Unknown { scenario, .. }, Estimator::Ho) => estimate_ho(scenario, &scenario.mobility, trials, seed)?,
    })
}

pub fn simulate(scenario: &Scenario, which: Option<Estimator>, trials: u64, seed: u64) -> Result<Table, CliError> {
    if trials == 0 {
        return Err(CliError::validation("trials: must be at least 1"));
    }
    let estimators = match (which, scenario) {
        (Some(e), _) => vec![e],
        (None, Scenario::Known(_)) => vec![Estimator::Rr],
        (None, Scenario::Unknown { .. }) => vec![Estimator::Rr, Estimator::Ho],
    };
    let mut t = Table::new(["estimator", "mean", "stderr", "trials", "seed"]);
    for e in estimators {
        let est = estimate(scenario, e, trials, seed)?;
        let name = if e == Estimator::Rr { "mc_rr" } else { "mc_ho" };
        t.push(vec![
            name.to_string(),
            format_number(est.mean),
            format_number(est.stderr),
            est.trials.to_string(),
            est.seed.to_string(),
        ]);
    }
    Ok(t)
}

fn sweep_point(spec: &SweepSpec, value: f64, trials: u64, seed: u64) -> Result<Vec<String>, CliError> {
    let scenario = spec.scenario_at(value).to_scenario()?;
    let report = match &scenario {
        Scenario::Unknown { scenario, signaling } if spec.outputs.iter().any(|o| !o.is_simulated()) => {
            Some(signaling_rate(scenario, signaling)?)
        }
        _ => None,
    };
    let mut row = vec![format_number(value)];
    for &o in &spec.outputs {
        match (o, &scenario, &report) {
            (SweepOutput::PRr, Scenario::Known(scene), _) => row.push(format_number(p_rr_marginal(scene, &scene.mobility)?.p)),
            (SweepOutput::McRr | SweepOutput::McHo, _, _) => {
                let which = if o == SweepOutput::McRr { Estimator::Rr } else { Estimator::Ho };
                let est = estimate(&scenario, which, trials, seed)?;
                row.push(format_number(est.mean));
                row.push(format_number(est.stderr));
            }
            (_, Scenario::Unknown { .. }, Some(r)) => row.push(format_number(match o {
                SweepOutput::PRr => r.p_rr,
                SweepOutput::PHo => r.p_ho,
                SweepOutput::ERr => r.e_rr,
                SweepOutput::EHo => r.e_ho,
                _ => r.e_gamma,
            })),
            _ => return Err(CliError::validation(format!("outputs: {} is unavailable here", o.label()))),
        }
    }
    Ok(row)
}

/// Runs the sweep points in parallel; rows keep the order of `values`.
pub fn sweep(spec: &SweepSpec, trials: u64, seed: u64) -> Result<Table, CliError> {
    spec.validate()?;
    if trials == 0 {
        return Err(CliError::validation("trials: must be at least 1"));
    }
    let mut header = vec![spec.variable.label().to_string()];
    for o in &spec.outputs {
        header.push(o.label().to_string());
        if o.is_simulated() {
            header.push(format!("{}_stderr", o.label()));
        }
    }
    let rows = spec
        .values
        .par_iter()
        .map(|&v| sweep_point(spec, v, trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Table { header, rows })
}

fn unknown(scenario: &Scenario) -> Result<(&rrho_core::scenario::ScenarioUnknown, &SignalingConfig), CliError> {
    match scenario {
        Scenario::Unknown { scenario, signaling } => Ok((scenario, signaling)),
        Scenario::Known(_) => Err(CliError::validation("kind: this command needs an unknown-obstacle scenario")),
    }
}

pub fn dimension(scenario: &Scenario, threshold: f64, kind: ServerKind) -> Result<Table, CliError> {
    let (s, sig) = unknown(scenario)?;
    let d = dimension_servers(threshold, s, sig, kind)?;
    let label = match kind {
        ServerKind::Sgw => "sgw",
        ServerKind::RisM => "rism",
    };
    let mut t = Table::new(["kind", "threshold", "servers", "per_server_load", "total_load"]);
    t.push(vec![
        label.to_string(),
        format_number(threshold),
        d.servers.to_string(),
        format_number(d.per_server_load),
        format_number(d.per_server_load * d.servers as f64),
    ]);
    Ok(t)
}

pub fn protocol_trace(which: Estimator, mode: HoMode) -> String {
    match which {
        Estimator::Rr => export_trace(&rr_sequence()),
        Estimator::Ho => export_trace(&ho_sequence(mode)),
    }
}

/// Per-entity message rates of a simulated load run, followed by the
/// sequence initiation rates.
pub fn protocol_load(scenario: &Scenario, duration: f64, mode: HoMode, seed: u64) -> Result<Table, CliError> {
    let (s, sig) = unknown(scenario)?;
    let run = simulate_load(s, sig, duration, mode, seed)?;
    let mut t = Table::new(["entity", "sent_rate", "received_rate"]);
    let sent = run.sent_rates();
    let received = run.received_rates();
    for (kind, rx) in &received {
        t.push(vec![
            kind.label().to_string(),
            format_number(sent.get(kind).copied().unwrap_or(0.0)),
            format_number(*rx),
        ]);
    }
    t.push(vec!["ho_initiation".into(), String::new(), format_number(run.ho_initiation_rate())]);
    t.push(vec!["rr_initiation".into(), String::new(), format_number(run.rr_initiation_rate())]);
    Ok(t)
}
