//! Scenario descriptions shared by the analytic and simulation code.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CircularSector, MovePositions, Point2D, Rect, SegmentObstacle};
use crate::stochastic::{RandomObstacleModel, SelfBlockModel};

/// Distribution of a scalar mobility parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Fixed(f64),
    Uniform(f64, f64),
}

impl Law {
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Law::Fixed(v) => (v, v),
            Law::Uniform(a, b) => (a, b),
        }
    }

    pub fn mean(&self) -> f64 {
        let (a, b) = self.support();
        0.5 * (a + b)
    }

    /// Point masses and zero-width ranges both count as fixed.
    pub fn is_fixed(&self) -> bool {
        let (a, b) = self.support();
        a == b
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Law::Fixed(v) => v,
            Law::Uniform(a, b) => a + (b - a) * rng.random::<f64>(),
        }
    }

    fn validate(&self, field: &str, lo: f64, hi: f64) -> Result<()> {
        let (a, b) = self.support();
        if !(a.is_finite() && b.is_finite()) || a < lo || b > hi || a > b {
            return Err(Error::invalid(
                field,
                format!("support [{a}, {b}] must be ordered and inside [{lo}, {hi}]"),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobilitySpec {
    /// Displacement per unit time, meters.
    pub speed: Law,
    /// Direction relative to the serving RIS, radians.
    pub angle: Law,
    /// Direction relative to the serving eNB; defaults to `angle`.
    pub enb_angle: Option<Law>,
}

impl MobilitySpec {
    pub fn fixed(d_u: f64, xi: f64) -> Self {
        MobilitySpec {
            speed: Law::Fixed(d_u),
            angle: Law::Fixed(xi),
            enb_angle: None,
        }
    }

    pub fn enb_law(&self) -> Law {
        self.enb_angle.unwrap_or(self.angle)
    }

    pub fn validate(&self) -> Result<()> {
        self.speed.validate("speed", 0.0, f64::MAX)?;
        self.angle.validate("angle", 0.0, PI)?;
        self.enb_law().validate("enb_angle", 0.0, PI)
    }
}

/// Which way the UE turns off the line away from its serving RIS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    #[default]
    Left,
    Right,
}

impl Turn {
    fn sign(self) -> f64 {
        match self {
            Turn::Left => 1.0,
            Turn::Right => -1.0,
        }
    }
}

/// Self-blockage sector anchored at the moved UE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfBlockPlacement {
    pub model: SelfBlockModel,
    /// Sector centre relative to the direction of travel, radians.
    pub offset: f64,
}

/// Room with known walls and obstacles, one eNB and a PPP of RISs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioKnown {
    pub room: Rect,
    pub enb: Point2D,
    pub walls: Vec<SegmentObstacle>,
    pub extra_obstacles: Vec<SegmentObstacle>,
    /// Distance from the UE to its serving RIS before the move.
    pub r: f64,
    /// RISs per m².
    pub lambda_ris: f64,
    pub self_block: Option<SelfBlockPlacement>,
    pub mobility: MobilitySpec,
    pub ue_start: Point2D,
    /// Direction from the UE to its serving RIS, radians.
    pub serving_bearing: f64,
    pub turn: Turn,
}

impl ScenarioKnown {
    /// The 10 m x 10 m room with the eNB at (0, 4), a wall from (4, 2.8) to
    /// (4, 5), a 2 m serving-RIS distance and a 2 m move at 45 degrees.
    /// The UE start, serving-RIS bearing and body-sector offset are
    /// calibrated placements.
    pub fn reference_room() -> Self {
        ScenarioKnown {
            room: Rect {
                min: Point2D::new(0.0, 0.0),
                max: Point2D::new(10.0, 10.0),
            },
            enb: Point2D::new(0.0, 4.0),
            walls: vec![SegmentObstacle {
                a: Point2D::new(4.0, 2.8),
                b: Point2D::new(4.0, 5.0),
            }],
            extra_obstacles: Vec::new(),
            r: 2.0,
            lambda_ris: 0.2,
            self_block: None,
            mobility: MobilitySpec::fixed(2.0, PI / 4.0),
            ue_start: Point2D::new(7.25, 5.7),
            serving_bearing: 61f64.to_radians(),
            turn: Turn::Left,
        }
    }

    /// The reference room plus the obstacle from (5, 2) to (6.5, 2).
    pub fn reference_room_obstacle() -> Self {
        let mut s = Self::reference_room();
        s.extra_obstacles.push(SegmentObstacle {
            a: Point2D::new(5.0, 2.0),
            b: Point2D::new(6.5, 2.0),
        });
        s
    }

    /// The reference room with a body sector of angle `theta`.
    pub fn reference_room_self_block(theta: f64) -> Self {
        let mut s = Self::reference_room();
        s.self_block = Some(SelfBlockPlacement {
            model: SelfBlockModel { theta },
            offset: -28f64.to_radians(),
        });
        s
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::invalid("serving_ris_distance", "must be positive"));
        }
        if !(self.lambda_ris >= 0.0 && self.lambda_ris.is_finite()) {
            return Err(Error::invalid("lambda_ris", "must be nonnegative"));
        }
        Rect::new(self.room.min, self.room.max)?;
        if !self.room.contains(self.enb) {
            return Err(Error::invalid("enb", "must lie inside the room"));
        }
        for o in self.walls.iter().chain(&self.extra_obstacles) {
            SegmentObstacle::new(o.a, o.b)?;
        }
        if let Some(sb) = &self.self_block {
            SelfBlockModel::new(sb.model.theta)?;
        }
        self.mobility.validate()
    }

    pub fn positions(&self, d_u: f64, xi: f64) -> MovePositions {
        let heading = self.serving_bearing + PI + self.turn.sign() * xi;
        let before = self.ue_start;
        MovePositions {
            before,
            serving: before + Point2D::from_angle(self.serving_bearing) * self.r,
            after: before + Point2D::from_angle(heading) * d_u,
            heading,
        }
    }

    pub fn self_block_sector(&self, pos: &MovePositions) -> Option<CircularSector> {
        self.self_block.map(|sb| CircularSector {
            origin: pos.after,
            radius: None,
            start_angle: pos.heading + sb.offset - sb.model.theta / 2.0,
            sweep: sb.model.theta,
        })
    }
}

/// Statistical scenario where obstacles are known only through densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioUnknown {
    /// RISs per m².
    pub lambda_ris: f64,
    /// eNBs per m².
    pub lambda_enb: f64,
    pub obstacles: RandomObstacleModel,
    pub self_block: SelfBlockModel,
    pub r_los: f64,
    pub r_ris: f64,
    pub r_enb: f64,
    pub mobility: MobilitySpec,
}

impl ScenarioUnknown {
    /// Densities, obstacle sizes, body angle, LoS radius and move from the
    /// unknown-obstacle reference setup, with `r_eNB = r_RIS = 2 m`.
    pub fn reference() -> Self {
        ScenarioUnknown {
            lambda_ris: 0.2,
            lambda_enb: 0.001,
            obstacles: RandomObstacleModel {
                lambda_b: 0.2e-6,
                mean_l: 10.0,
                mean_w: 10.0,
            },
            self_block: SelfBlockModel {
                theta: PI / 4.0,
            },
            r_los: 10_000.0,
            r_ris: 2.0,
            r_enb: 2.0,
            mobility: MobilitySpec::fixed(2.0, PI / 4.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda_ris", self.lambda_ris), ("lambda_enb", self.lambda_enb)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be nonnegative and finite")));
            }
        }
        for (name, v) in [("r_los", self.r_los), ("r_ris", self.r_ris), ("r_enb", self.r_enb)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be positive and finite")));
            }
        }
        RandomObstacleModel::new(self.obstacles.lambda_b, self.obstacles.mean_l, self.obstacles.mean_w)?;
        SelfBlockModel::new(self.self_block.theta)?;
        self.mobility.validate()
    }
}

/// Session arrival rates per SGW and per RIS-M, and the session success rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalingConfig {
    pub sgw_rates: Vec<f64>,
    pub rism_rates: Vec<f64>,
    pub p_a: f64,
}

impl SignalingConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, rates) in [("sgw_rates", &self.sgw_rates), ("rism_rates", &self.rism_rates)] {
            if let Some(v) = rates.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return Err(Error::invalid(name, format!("rate {v} must be nonnegative and finite")));
            }
        }
        if !(0.0..=1.0).contains(&self.p_a) {
            return Err(Error::invalid("p_a", format!("{} is outside [0, 1]", self.p_a)));
        }
        Ok(())
    }

    pub fn total_sgw(&self) -> f64 {
        self.sgw_rates.iter().sum()
    }

    pub fn total_rism(&self) -> f64 {
        self.rism_rates.iter().sum()
    }

    /// The same total load spread evenly over `n` servers of a class.
    pub fn split(&self, kind: ServerKind, n: usize) -> SignalingConfig {
        let mut out = self.clone();
        let n = n.max(1);
        match kind {
            ServerKind::Sgw => out.sgw_rates = vec![self.total_sgw() / n as f64; n],
            ServerKind::RisM => out.rism_rates = vec![self.total_rism() / n as f64; n],
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ServerKind {
    Sgw,
    RisM,
}
