//! Message-level model of the RR and HO signaling sequences.
//!
//! The sequences are stored as data in `templates.json`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::analytic::{p_ho_marginal, p_rr_unknown_marginal};
use crate::error::{Error, Result};
use crate::scenario::{ScenarioUnknown, SignalingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    #[serde(rename = "UE")]
    Ue,
    #[serde(rename = "serving-RIS")]
    ServingRis,
    #[serde(rename = "target-RIS")]
    TargetRis,
    #[serde(rename = "serving-eNB")]
    ServingEnb,
    #[serde(rename = "target-eNB")]
    TargetEnb,
    #[serde(rename = "RIS-M")]
    RisM,
    #[serde(rename = "MME")]
    Mme,
    #[serde(rename = "SGW")]
    Sgw,
    #[serde(rename = "RIS-controller")]
    RisController,
}

impl EntityKind {
    pub const ALL: [EntityKind; 9] = [
        EntityKind::Ue,
        EntityKind::ServingRis,
        EntityKind::TargetRis,
        EntityKind::ServingEnb,
        EntityKind::TargetEnb,
        EntityKind::RisM,
        EntityKind::Mme,
        EntityKind::Sgw,
        EntityKind::RisController,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EntityKind::Ue => "UE",
            EntityKind::ServingRis => "serving-RIS",
            EntityKind::TargetRis => "target-RIS",
            EntityKind::ServingEnb => "serving-eNB",
            EntityKind::TargetEnb => "target-eNB",
            EntityKind::RisM => "RIS-M",
            EntityKind::Mme => "MME",
            EntityKind::Sgw => "SGW",
            EntityKind::RisController => "RIS-controller",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entity {
    pub kind: EntityKind,
    #[serde(default)]
    pub id: u32,
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}#{}", self.kind, self.id)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalingMessage {
    pub step: u32,
    pub name: String,
    pub from: Entity,
    pub to: Entity,
    /// A decision or admission action inside one entity; not sent on a wire.
    pub internal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    Rr,
    Ho,
    Basic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HoMode {
    X2,
    S1,
}

/// Which server class a basic session belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SessionClass {
    Sgw,
    RisM,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTemplate {
    pub kind: SequenceKind,
    pub messages: Vec<SignalingMessage>,
}

impl SequenceTemplate {
    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn wire_messages(&self) -> impl Iterator<Item = &SignalingMessage> {
        self.messages.iter().filter(|m| !m.internal)
    }

    pub fn wire_count(&self) -> usize {
        self.wire_messages().count()
    }

    /// Checks that steps are gapless and that only internal steps stay
    /// inside one entity.
    pub fn validate(&self) -> Result<()> {
        for pair in self.messages.windows(2) {
            if pair[1].step != pair[0].step + 1 {
                return Err(Error::Template(format!(
                    "step {} follows step {}",
                    pair[1].step, pair[0].step
                )));
            }
        }
        if let Some(m) = self.messages.iter().find(|m| (m.from == m.to) != m.internal) {
            return Err(Error::Template(format!(
                "step {} must be internal exactly when sender and receiver coincide",
                m.step
            )));
        }
        Ok(())
    }

    /// Line-per-message text: `step | from -> to | name`.
    pub fn trace(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for m in &self.messages {
            let _ = writeln!(out, "{} | {} -> {} | {}", m.step, m.from, m.to, m.name);
        }
        out
    }
}

pub const TRACE_HEADER: &str = "step | from -> to | name";

#[derive(Deserialize)]
struct RawMessage {
    step: u32,
    name: String,
    from: EntityKind,
    to: EntityKind,
    #[serde(default)]
    internal: bool,
}

#[derive(Deserialize)]
struct RawTemplates {
    basic_sgw: Vec<RawMessage>,
    basic_rism: Vec<RawMessage>,
    rr: Vec<RawMessage>,
    ho_x2: Vec<RawMessage>,
    ho_s1: Vec<RawMessage>,
}

struct Templates {
    basic_sgw: SequenceTemplate,
    basic_rism: SequenceTemplate,
    rr: SequenceTemplate,
    ho_x2: SequenceTemplate,
    ho_s1: SequenceTemplate,
}

fn build(kind: SequenceKind, raw: Vec<RawMessage>) -> SequenceTemplate {
    SequenceTemplate {
        kind,
        messages: raw
            .into_iter()
            .map(|m| SignalingMessage {
                step: m.step,
                name: m.name,
                from: Entity { kind: m.from, id: 0 },
                to: Entity { kind: m.to, id: 0 },
                internal: m.internal,
            })
            .collect(),
    }
}

/// Parse a template set in the bundled JSON layout.
fn parse_templates(text: &str) -> Result<Templates> {
    let raw: RawTemplates = serde_json::from_str(text).map_err(|e| Error::Template(e.to_string()))?;
    let t = Templates {
        basic_sgw: build(SequenceKind::Basic, raw.basic_sgw),
        basic_rism: build(SequenceKind::Basic, raw.basic_rism),
        rr: build(SequenceKind::Rr, raw.rr),
        ho_x2: build(SequenceKind::Ho, raw.ho_x2),
        ho_s1: build(SequenceKind::Ho, raw.ho_s1),
    };
    for tpl in [&t.basic_sgw, &t.basic_rism, &t.rr, &t.ho_x2, &t.ho_s1] {
        tpl.validate()?;
    }
    Ok(t)
}

fn templates() -> &'static Templates {
    static CELL: OnceLock<Templates> = OnceLock::new();
    CELL.get_or_init(|| parse_templates(include_str!("templates.json")).expect("bundled templates are valid"))
}

pub fn rr_sequence() -> SequenceTemplate {
    templates().rr.clone()
}

pub fn ho_sequence(mode: HoMode) -> SequenceTemplate {
    match mode {
        HoMode::X2 => templates().ho_x2.clone(),
        HoMode::S1 => templates().ho_s1.clone(),
    }
}

pub fn basic_sequence(class: SessionClass) -> SequenceTemplate {
    match class {
        SessionClass::Sgw => templates().basic_sgw.clone(),
        SessionClass::RisM => templates().basic_rism.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EntityLoad {
    pub sent: u64,
    pub received: u64,
}

/// One sequence emitted during a load run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunEvent {
    pub time: f64,
    pub kind: SequenceKind,
    pub class: SessionClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadRun {
    pub duration: f64,
    pub mode: HoMode,
    pub sessions: u64,
    pub ho_initiated: u64,
    pub rr_initiated: u64,
    /// Sequences counted as overhead after the session-success draw.
    pub ho_emitted: u64,
    pub rr_emitted: u64,
    pub per_entity: BTreeMap<EntityKind, EntityLoad>,
    pub events: Vec<RunEvent>,
}

impl LoadRun {
    pub fn ho_initiation_rate(&self) -> f64 {
        self.ho_initiated as f64 / self.duration
    }

    pub fn rr_initiation_rate(&self) -> f64 {
        self.rr_initiated as f64 / self.duration
    }

    /// Received messages per unit time, by entity kind.
    pub fn received_rates(&self) -> BTreeMap<EntityKind, f64> {
        self.per_entity
            .iter()
            .map(|(k, l)| (*k, l.received as f64 / self.duration))
            .collect()
    }

    pub fn sent_rates(&self) -> BTreeMap<EntityKind, f64> {
        self.per_entity
            .iter()
            .map(|(k, l)| (*k, l.sent as f64 / self.duration))
            .collect()
    }

    /// Message trace of the run, prefixed by the emission time.
    pub fn trace(&self) -> String {
        let mut out = format!("time | {TRACE_HEADER}\n");
        for e in &self.events {
            let tpl = match e.kind {
                SequenceKind::Basic => basic_sequence(e.class),
                SequenceKind::Rr => rr_sequence(),
                SequenceKind::Ho => ho_sequence(self.mode),
            };
            for m in &tpl.messages {
                let _ = writeln!(out, "{:.6} | {} | {} -> {} | {}", e.time, m.step, m.from, m.to, m.name);
            }
        }
        out
    }
}

/// Trace of a template or a run.
pub trait Trace {
    fn trace(&self) -> String;
}

impl Trace for SequenceTemplate {
    fn trace(&self) -> String {
        SequenceTemplate::trace(self)
    }
}

impl Trace for LoadRun {
    fn trace(&self) -> String {
        LoadRun::trace(self)
    }
}

pub fn export_trace<T: Trace + ?Sized>(item: &T) -> String {
    item.trace()
}

fn tally(per_entity: &mut BTreeMap<EntityKind, EntityLoad>, tpl: &SequenceTemplate) {
    for m in tpl.wire_messages() {
        per_entity.entry(m.from.kind).or_default().sent += 1;
        per_entity.entry(m.to.kind).or_default().received += 1;
    }
}

/// Poisson session arrivals at every SGW and RIS-M over `[0, duration)`.
/// Every session sends its basic message. SGW sessions start an HO with the
/// HO probability and RIS-M sessions start an RR with the RR probability;
/// a started sequence is counted as overhead with probability `p_a`.
pub fn simulate_load(
    s: &ScenarioUnknown,
    sig: &SignalingConfig,
    duration: f64,
    mode: HoMode,
    seed: u64,
) -> Result<LoadRun> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::invalid("duration", "must be positive and finite"));
    }
    s.validate()?;
    sig.validate()?;
    let p_ho = p_ho_marginal(s)?;
    let p_rr = p_rr_unknown_marginal(s)?;

    let mut per_entity: BTreeMap<EntityKind, EntityLoad> = BTreeMap::new();
    let mut events = Vec::new();
    let (mut sessions, mut ho_initiated, mut rr_initiated, mut ho_emitted, mut rr_emitted) = (0, 0, 0, 0, 0);
    let servers = sig
        .sgw_rates
        .iter()
        .map(|&r| (SessionClass::Sgw, r))
        .chain(sig.rism_rates.iter().map(|&r| (SessionClass::RisM, r)));
    for (index, (class, rate)) in servers.enumerate() {
        if rate == 0.0 {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let gap = Exp::new(rate).map_err(|e| Error::invalid("rate", e.to_string()))?;
        let (p_event, kind) = match class {
            SessionClass::Sgw => (p_ho, SequenceKind::Ho),
            SessionClass::RisM => (p_rr, SequenceKind::Rr),
        };
        let basic = basic_sequence(class);
        let overhead = match kind {
            SequenceKind::Ho => ho_sequence(mode),
            _ => rr_sequence(),
        };
        let mut t = gap.sample(&mut rng);
        while t < duration {
            sessions += 1;
            tally(&mut per_entity, &basic);
            events.push(RunEvent {
                time: t,
                kind: SequenceKind::Basic,
                class,
            });
            let started = rng.random::<f64>() < p_event;
            let counted = rng.random::<f64>() < sig.p_a;
            if started {
                match kind {
                    SequenceKind::Ho => ho_initiated += 1,
                    _ => rr_initiated += 1,
                }
                if counted {
                    match kind {
                        SequenceKind::Ho => ho_emitted += 1,
                        _ => rr_emitted += 1,
                    }
                    tally(&mut per_entity, &overhead);
                    events.push(RunEvent { time: t, kind, class });
                }
            }
            t += gap.sample(&mut rng);
        }
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.kind.cmp(&b.kind)));
    Ok(LoadRun {
        duration,
        mode,
        sessions,
        ho_initiated,
        rr_initiated,
        ho_emitted,
        rr_emitted,
        per_entity,
        events,
    })
}
