use rrho_core::analytic::{ho_rate, rr_rate};
use rrho_core::protocol::*;
use rrho_core::scenario::{ScenarioUnknown, SignalingConfig};

fn config(sgw: f64, rism: f64, p_a: f64) -> SignalingConfig {
    SignalingConfig {
        sgw_rates: vec![sgw],
        rism_rates: vec![rism],
        p_a,
    }
}

#[test]
fn templates_are_gapless_and_consistent() {
    for t in [
        rr_sequence(),
        ho_sequence(HoMode::X2),
        ho_sequence(HoMode::S1),
        basic_sequence(SessionClass::Sgw),
        basic_sequence(SessionClass::RisM),
    ] {
        t.validate().unwrap();
        for (i, pair) in t.messages.windows(2).enumerate() {
            assert_eq!(pair[1].step, pair[0].step + 1, "gap after index {i}");
        }
        for m in &t.messages {
            assert_eq!(m.internal, m.from == m.to);
        }
    }
}

#[test]
fn ris_manager_handles_one_message_each_way_per_rr() {
    let rr = rr_sequence();
    let inbound: Vec<u32> = rr.wire_messages().filter(|m| m.to.kind == EntityKind::RisM).map(|m| m.step).collect();
    let outbound: Vec<u32> = rr.wire_messages().filter(|m| m.from.kind == EntityKind::RisM).map(|m| m.step).collect();
    assert_eq!((inbound, outbound), (vec![7], vec![9]));
    assert_eq!(rr.wire_count(), 11);
}

#[test]
fn internal_steps_carry_no_load() {
    let s = ScenarioUnknown::reference();
    let run = simulate_load(&s, &config(0.0, 20.0, 1.0), 500.0, HoMode::X2, 8).unwrap();
    let rism = run.per_entity[&EntityKind::RisM];
    // Basic registrations plus one request per counted RR; step 8 is not a message.
    assert_eq!(rism.received, run.sessions + run.rr_emitted);
    assert_eq!(rism.sent, run.rr_emitted);
}

#[test]
fn no_mobility_events_leaves_basic_load_only() {
    let mut s = ScenarioUnknown::reference();
    s.lambda_enb = 0.0;
    s.lambda_ris = 0.0;
    let run = simulate_load(&s, &config(5.0, 3.0, 1.0), 1_000.0, HoMode::S1, 3).unwrap();
    assert_eq!((run.ho_initiated, run.rr_initiated, run.ho_emitted, run.rr_emitted), (0, 0, 0, 0));
    let total: u64 = run.per_entity.values().map(|l| l.received).sum();
    assert_eq!(total, run.sessions);
    assert!(run.events.iter().all(|e| e.kind == SequenceKind::Basic));
}

#[test]
fn fixed_seed_gives_identical_trace() {
    let s = ScenarioUnknown::reference();
    let c = config(2.0, 2.0, 0.7);
    let a = simulate_load(&s, &c, 50.0, HoMode::X2, 99).unwrap();
    let b = simulate_load(&s, &c, 50.0, HoMode::X2, 99).unwrap();
    assert_eq!(export_trace(&a), export_trace(&b));
    assert_eq!(a, b);
    let other = simulate_load(&s, &c, 50.0, HoMode::X2, 100).unwrap();
    assert_ne!(export_trace(&a), export_trace(&other));
}

#[test]
fn empty_run_exports_header_only() {
    let s = ScenarioUnknown::reference();
    let run = simulate_load(&s, &config(0.0, 0.0, 1.0), 10.0, HoMode::X2, 1).unwrap();
    assert_eq!(export_trace(&run), format!("time | {TRACE_HEADER}\n"));
    assert_eq!(export_trace(&rr_sequence()).lines().count(), 14);
}

#[test]
fn initiation_rates_track_analytic_rates() {
    let mut s = ScenarioUnknown::reference();
    s.lambda_enb = 0.05;
    s.lambda_ris = 0.02;
    let c = config(1.0, 1.0, 0.5);
    let duration = 1e4;
    let run = simulate_load(&s, &c, duration, HoMode::X2, 12).unwrap();
    for (sim, exact) in [
        (run.ho_initiation_rate(), ho_rate(&s, &c).unwrap()),
        (run.rr_initiation_rate(), rr_rate(&s, &c).unwrap()),
    ] {
        let sigma = (exact * duration).sqrt() / duration;
        assert!((sim - exact).abs() <= 3.0 * sigma, "simulated {sim} analytic {exact}");
    }
    assert!(run.ho_emitted <= run.ho_initiated && run.rr_emitted <= run.rr_initiated);
}

#[test]
fn invalid_duration_is_rejected() {
    let s = ScenarioUnknown::reference();
    assert!(simulate_load(&s, &config(1.0, 1.0, 1.0), 0.0, HoMode::X2, 1).is_err());
    assert!(simulate_load(&s, &config(1.0, 1.0, 1.0), f64::INFINITY, HoMode::X2, 1).is_err());
}
