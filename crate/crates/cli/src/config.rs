//! JSON scenario and sweep files.
//!
//! Angles are given in degrees and densities carry an explicit unit; both
//! are converted to radians and per-m² here.

use std::path::Path;

use rrho_core::geometry::{Point2D, Rect, SegmentObstacle};
use rrho_core::scenario::{Law, MobilitySpec, ScenarioKnown, ScenarioUnknown, SelfBlockPlacement, SignalingConfig, Turn};
use rrho_core::stochastic::{RandomObstacleModel, SelfBlockModel};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityUnit {
    #[serde(rename = "per-m2")]
    PerM2,
    #[serde(rename = "per-km2")]
    PerKm2,
}

impl DensityUnit {
    pub fn to_per_m2(self, value: f64) -> f64 {
        match self {
            DensityUnit::PerM2 => value,
            DensityUnit::PerKm2 => value * 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Density {
    pub value: f64,
    pub unit: DensityUnit,
}

impl Density {
    pub fn per_m2(&self) -> f64 {
        self.unit.to_per_m2(self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MobilityFile {
    pub speed: Law,
    pub angle_deg: Law,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enb_angle_deg: Option<Law>,
}

fn law_to_radians(l: Law) -> Law {
    match l {
        Law::Fixed(v) => Law::Fixed(v.to_radians()),
        Law::Uniform(a, b) => Law::Uniform(a.to_radians(), b.to_radians()),
    }
}

impl MobilityFile {
    pub fn to_spec(&self) -> MobilitySpec {
        MobilitySpec {
            speed: self.speed,
            angle: law_to_radians(self.angle_deg),
            enb_angle: self.enb_angle_deg.map(law_to_radians),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoomFile {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfBlockFile {
    pub theta_deg: f64,
    /// Sector centre relative to the direction of travel.
    pub offset_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownFile {
    pub room: RoomFile,
    pub enb: [f64; 2],
    pub walls: Vec<[[f64; 2]; 2]>,
    #[serde(default)]
    pub extra_obstacles: Vec<[[f64; 2]; 2]>,
    pub serving_ris_distance: f64,
    pub lambda_ris: Density,
    #[serde(default)]
    pub self_block: Option<SelfBlockFile>,
    pub mobility: MobilityFile,
    pub ue_start: [f64; 2],
    pub serving_bearing_deg: f64,
    #[serde(default)]
    pub turn: Turn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleFile {
    pub density: Density,
    pub mean_length: f64,
    pub mean_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalingFile {
    pub sgw_rates: Vec<f64>,
    pub rism_rates: Vec<f64>,
    pub p_a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnknownFile {
    pub lambda_ris: Density,
    pub lambda_enb: Density,
    pub obstacles: ObstacleFile,
    pub self_block_deg: f64,
    pub r_los: f64,
    pub r_ris: f64,
    pub r_enb: f64,
    pub mobility: MobilityFile,
    #[serde(default)]
    pub signaling: Option<SignalingFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScenarioFile {
    Known(KnownFile),
    Unknown(UnknownFile),
}

/// A validated scenario ready for computation.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Known(ScenarioKnown),
    Unknown {
        scenario: ScenarioUnknown,
        signaling: SignalingConfig,
    },
}

fn point(p: [f64; 2]) -> Point2D {
    Point2D::new(p[0], p[1])
}

fn segment(field: &str, s: [[f64; 2]; 2]) -> Result<SegmentObstacle, CliError> {
    SegmentObstacle::new(point(s[0]), point(s[1])).map_err(|e| CliError::validation(format!("{field}: {e}")))
}

impl KnownFile {
    pub fn to_scenario(&self) -> Result<ScenarioKnown, CliError> {
        let walls = self.walls.iter().map(|&w| segment("walls", w)).collect::<Result<_, _>>()?;
        let extra_obstacles = self
            .extra_obstacles
            .iter()
            .map(|&w| segment("extra_obstacles", w))
            .collect::<Result<_, _>>()?;
        let s = ScenarioKnown {
            room: Rect::new(point(self.room.min), point(self.room.max))
                .map_err(|e| CliError::validation(format!("room: {e}")))?,
            enb: point(self.enb),
            walls,
            extra_obstacles,
            r: self.serving_ris_distance,
            lambda_ris: self.lambda_ris.per_m2(),
            self_block: self.self_block.map(|sb| SelfBlockPlacement {
                model: SelfBlockModel {
                    theta: sb.theta_deg.to_radians(),
                },
                offset: sb.offset_deg.to_radians(),
            }),
            mobility: self.mobility.to_spec(),
            ue_start: point(self.ue_start),
            serving_bearing: self.serving_bearing_deg.to_radians(),
            turn: self.turn,
        };
        s.validate()?;
        Ok(s)
    }
}

impl UnknownFile {
    pub fn to_scenario(&self) -> Result<(ScenarioUnknown, SignalingConfig), CliError> {
        let s = ScenarioUnknown {
            lambda_ris: self.lambda_ris.per_m2(),
            lambda_enb: self.lambda_enb.per_m2(),
            obstacles: RandomObstacleModel {
                lambda_b: self.obstacles.density.per_m2(),
                mean_l: self.obstacles.mean_length,
                mean_w: self.obstacles.mean_width,
            },
            self_block: SelfBlockModel {
                theta: self.self_block_deg.to_radians(),
            },
            r_los: self.r_los,
            r_ris: self.r_ris,
            r_enb: self.r_enb,
            mobility: self.mobility.to_spec(),
        };
        s.validate()?;
        let sig = match &self.signaling {
            Some(f) => SignalingConfig {
                sgw_rates: f.sgw_rates.clone(),
                rism_rates: f.rism_rates.clone(),
                p_a: f.p_a,
            },
            None => SignalingConfig {
                sgw_rates: Vec::new(),
                rism_rates: Vec::new(),
                p_a: 1.0,
            },
        };
        sig.validate()?;
        Ok((s, sig))
    }
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<Scenario, CliError> {
        Ok(match self {
            ScenarioFile::Known(k) => Scenario::Known(k.to_scenario()?),
            ScenarioFile::Unknown(u) => {
                let (scenario, signaling) = u.to_scenario()?;
                Scenario::Unknown { scenario, signaling }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "lambda_RIS")]
    LambdaRis,
    #[serde(rename = "lambda_eNB")]
    LambdaEnb,
    #[serde(rename = "lambda_B")]
    LambdaB,
    #[serde(rename = "d_U")]
    DU,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "N_RISM")]
    NRism,
    #[serde(rename = "N_SGW")]
    NSgw,
}

impl SweepVariable {
    pub fn label(self) -> &'static str {
        match self {
            SweepVariable::LambdaRis => "lambda_RIS",
            SweepVariable::LambdaEnb => "lambda_eNB",
            SweepVariable::LambdaB => "lambda_B",
            SweepVariable::DU => "d_U",
            SweepVariable::Theta => "theta",
            SweepVariable::NRism => "N_RISM",
            SweepVariable::NSgw => "N_SGW",
        }
    }

    fn is_density(self) -> bool {
        matches!(self, SweepVariable::LambdaRis | SweepVariable::LambdaEnb | SweepVariable::LambdaB)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOutput {
    PRr,
    PHo,
    ERr,
    EHo,
    EGamma,
    McRr,
    McHo,
}

impl SweepOutput {
    pub fn label(self) -> &'static str {
        match self {
            SweepOutput::PRr => "p_rr",
            SweepOutput::PHo => "p_ho",
            SweepOutput::ERr => "e_rr",
            SweepOutput::EHo => "e_ho",
            SweepOutput::EGamma => "e_gamma",
            SweepOutput::McRr => "mc_rr",
            SweepOutput::McHo => "mc_ho",
        }
    }

    pub fn is_simulated(self) -> bool {
        matches!(self, SweepOutput::McRr | SweepOutput::McHo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    /// Unit of density values; per-m² when absent. Angles are in degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<DensityUnit>,
    pub scenario: ScenarioFile,
    pub outputs: Vec<SweepOutput>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.values.is_empty() {
            return Err(CliError::validation("values: must not be empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::validation(format!("values: {v} is not finite")));
        }
        let increasing = self.values.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.values.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(CliError::validation("values: must be strictly monotone"));
        }
        if self.outputs.is_empty() {
            return Err(CliError::validation("outputs: must not be empty"));
        }
        if self.unit.is_some() && !self.variable.is_density() {
            return Err(CliError::validation(format!("unit: {} is not a density", self.variable.label())));
        }
        if matches!(self.variable, SweepVariable::NRism | SweepVariable::NSgw) {
            if let Some(v) = self.values.iter().find(|v| **v < 1.0 || v.fract() != 0.0) {
                return Err(CliError::validation(format!("values: server count {v} must be a positive integer")));
            }
        }
        if let ScenarioFile::Known(k) = &self.scenario {
            let unsupported = match self.variable {
                SweepVariable::LambdaEnb | SweepVariable::LambdaB | SweepVariable::NRism | SweepVariable::NSgw => true,
                SweepVariable::Theta => k.self_block.is_none(),
                _ => false,
            };
            if unsupported {
                return Err(CliError::validation(format!(
                    "variable: {} does not apply to this known scenario",
                    self.variable.label()
                )));
            }
            if let Some(o) = self.outputs.iter().find(|o| !matches!(o, SweepOutput::PRr | SweepOutput::McRr)) {
                return Err(CliError::validation(format!("outputs: {} needs an unknown-obstacle scenario", o.label())));
            }
        }
        self.scenario.to_scenario().map(|_| ())
    }

    /// The scenario file with the swept variable set to `value`.
    pub fn scenario_at(&self, value: f64) -> ScenarioFile {
        let mut file = self.scenario.clone();
        let density = Density {
            value,
            unit: self.unit.unwrap_or(DensityUnit::PerM2),
        };
        match &mut file {
            ScenarioFile::Known(k) => match self.variable {
                SweepVariable::LambdaRis => k.lambda_ris = density,
                SweepVariable::DU => k.mobility.speed = Law::Fixed(value),
                SweepVariable::Theta => {
                    if let Some(sb) = &mut k.self_block {
                        sb.theta_deg = value;
                    }
                }
                _ => {}
            },
            ScenarioFile::Unknown(u) => match self.variable {
                SweepVariable::LambdaRis => u.lambda_ris = density,
                SweepVariable::LambdaEnb => u.lambda_enb = density,
                SweepVariable::LambdaB => u.obstacles.density = density,
                SweepVariable::DU => u.mobility.speed = Law::Fixed(value),
                SweepVariable::Theta => u.self_block_deg = value,
                SweepVariable::NRism | SweepVariable::NSgw => {
                    // The class total is held fixed and spread over the servers.
                    let sig = u.signaling.get_or_insert(SignalingFile {
                        sgw_rates: Vec::new(),
                        rism_rates: Vec::new(),
                        p_a: 1.0,
                    });
                    let n = value as usize;
                    let rates = if self.variable == SweepVariable::NRism {
                        &mut sig.rism_rates
                    } else {
                        &mut sig.sgw_rates
                    };
                    let total: f64 = rates.iter().sum();
                    *rates = vec![total / n as f64; n];
                }
            },
        }
        file
    }
}

/// Raw bytes and parsed contents of a config file.
pub struct Loaded<T> {
    pub bytes: Vec<u8>,
    pub value: T,
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Loaded<T>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    Ok(Loaded { bytes, value })
}

/// SHA-256 of the config with formatting and key order normalised.
pub fn digest(bytes: &[u8]) -> String {
    let canonical = serde_json::from_slice::<serde_json::Value>(bytes)
        .map(|v| v.to_string().into_bytes())
        .unwrap_or_else(|_| bytes.to_vec());
    hex::encode(Sha256::digest(&canonical))
}
