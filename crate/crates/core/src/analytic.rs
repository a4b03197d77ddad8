//! Closed-form RR, HO and signaling rates and server dimensioning.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    displaced_distance, excess_area, hidden_by, visible_area_exact, visible_excess_area_a1, BlockageWedge,
    blocked_candidate_area, MoveGeometry,
};
use crate::quadrature::{integrate, integrate_2d};
use crate::scenario::{Law, MobilitySpec, ScenarioKnown, ScenarioUnknown, ServerKind, SignalingConfig};
use crate::stochastic::p_not_blocked_z;

/// Absolute tolerance of the mobility-law quadratures.
pub const MARGINAL_TOLERANCE: f64 = 1e-7;

/// Upper bound on the server count searched by [`dimension_servers`].
pub const MAX_SERVERS: usize = 100_000;

fn p_from_mean(mean: f64) -> f64 {
    -(-mean).exp_m1()
}

/// Probability that at least one unblocked eNB is closer than the serving
/// eNB after the move.
pub fn p_ho(s: &ScenarioUnknown, d_u: f64, xi: f64) -> Result<f64> {
    let g = MoveGeometry::new(s.r_enb, d_u, xi)?;
    let big_r = displaced_distance(&g);
    let z = p_not_blocked_z(&s.obstacles, &s.self_block, s.r_los);
    Ok(p_from_mean(z * s.lambda_enb * PI * big_r * big_r))
}

/// Same as [`p_ho`] for RISs.
pub fn p_rr_unknown(s: &ScenarioUnknown, d_u: f64, xi: f64) -> Result<f64> {
    let g = MoveGeometry::new(s.r_ris, d_u, xi)?;
    let big_r = displaced_distance(&g);
    let z = p_not_blocked_z(&s.obstacles, &s.self_block, s.r_los);
    Ok(p_from_mean(z * s.lambda_ris * PI * big_r * big_r))
}

/// Average of `f(d_U, xi)` over independent speed and angle laws.
fn average_over<F>(speed: Law, angle: Law, mut f: F) -> Result<f64>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut failure = None;
    let mut eval = |d: f64, x: f64| match f(d, x) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let (d0, d1) = speed.support();
    let (x0, x1) = angle.support();
    let value = match (speed.is_fixed(), angle.is_fixed()) {
        (true, true) => eval(d0, x0),
        (false, true) => integrate(|d| eval(d, x0), d0, d1, MARGINAL_TOLERANCE * (d1 - d0)).value / (d1 - d0),
        (true, false) => integrate(|x| eval(d0, x), x0, x1, MARGINAL_TOLERANCE * (x1 - x0)).value / (x1 - x0),
        (false, false) => {
            let area = (d1 - d0) * (x1 - x0);
            integrate_2d(eval, (d0, d1), (x0, x1), MARGINAL_TOLERANCE * area).value / area
        }
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// HO probability averaged over the scenario's speed and eNB-angle laws.
pub fn p_ho_marginal(s: &ScenarioUnknown) -> Result<f64> {
    let survive = average_over(s.mobility.speed, s.mobility.enb_law(), |d, x| Ok(1.0 - p_ho(s, d, x)?))?;
    Ok((1.0 - survive).clamp(0.0, 1.0))
}

/// RR probability averaged over the scenario's speed and angle laws.
pub fn p_rr_unknown_marginal(s: &ScenarioUnknown) -> Result<f64> {
    let survive = average_over(s.mobility.speed, s.mobility.angle, |d, x| Ok(1.0 - p_rr_unknown(s, d, x)?))?;
    Ok((1.0 - survive).clamp(0.0, 1.0))
}

pub fn ho_rate(s: &ScenarioUnknown, sig: &SignalingConfig) -> Result<f64> {
    Ok(sig.total_sgw() * p_ho_marginal(s)?)
}

pub fn rr_rate(s: &ScenarioUnknown, sig: &SignalingConfig) -> Result<f64> {
    Ok(sig.total_rism() * p_rr_unknown_marginal(s)?)
}

/// Probability that a PPP of density `lambda_ris` puts a node in area `a`.
pub fn p_rr_known(a: f64, lambda_ris: f64) -> Result<f64> {
    if a.is_nan() || a < 0.0 {
        return Err(Error::invalid("area", format!("{a} must be nonnegative")));
    }
    Ok(p_from_mean(a * lambda_ris))
}

/// RR probability after removing an extra blocked area from `a1`.
pub fn p_rr_with_areas(a1: f64, a_extra: f64, lambda_ris: f64) -> Result<f64> {
    if a_extra.is_nan() || a_extra < 0.0 {
        return Err(Error::invalid("a_extra", format!("{a_extra} must be nonnegative")));
    }
    if a_extra > a1 * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::InconsistentAreas {
            blocked: a_extra,
            visible: a1,
        });
    }
    p_rr_known((a1 - a_extra).max(0.0), lambda_ris)
}

/// Area decomposition of one move in a known scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnownAreas {
    pub a_e: f64,
    pub a_b: f64,
    pub a1: f64,
    /// Further area hidden by extra obstacles and the body sector.
    pub a_extra: f64,
    /// Both UE positions lie in the wall shadow.
    pub in_shadow: bool,
}

impl KnownAreas {
    pub fn visible(&self) -> f64 {
        (self.a1 - self.a_extra).max(0.0)
    }
}

/// Areas for a move, without requiring the UE to stay in the shadow.
pub fn known_areas_unchecked(scene: &ScenarioKnown, d_u: f64, xi: f64) -> Result<KnownAreas> {
    let g = MoveGeometry::new(scene.r, d_u, xi)?;
    let pos = scene.positions(d_u, xi);
    let a_e = excess_area(&g)?;
    let big_r = displaced_distance(&g);
    let in_shadow = scene.walls.is_empty()
        || (hidden_by(&scene.walls, scene.enb, pos.before) && hidden_by(&scene.walls, scene.enb, pos.after));
    let a1 = if in_shadow {
        visible_excess_area_a1(scene, &g)?
    } else {
        let mut a_b = 0.0;
        for wall in &scene.walls {
            let w = BlockageWedge::from_wall(scene.enb, wall, pos.before, pos.after);
            a_b += blocked_candidate_area(&w, g.r, big_r)?.a_b;
        }
        (a_e - a_b).clamp(0.0, a_e)
    };
    let sector = scene.self_block_sector(&pos);
    let a_extra = if scene.extra_obstacles.is_empty() && sector.is_none() || a1 == 0.0 {
        0.0
    } else {
        let plain = visible_area_exact(&pos, g.r, big_r, scene.enb, &scene.walls, &[], None)?;
        let blocked =
            visible_area_exact(&pos, g.r, big_r, scene.enb, &scene.walls, &scene.extra_obstacles, sector.as_ref())?;
        (plain - blocked).clamp(0.0, a1)
    };
    Ok(KnownAreas {
        a_e,
        a_b: a_e - a1,
        a1,
        a_extra,
        in_shadow,
    })
}

/// Areas for a move; fails if the UE leaves the wall shadow.
pub fn known_areas(scene: &ScenarioKnown, d_u: f64, xi: f64) -> Result<KnownAreas> {
    let areas = known_areas_unchecked(scene, d_u, xi)?;
    if !areas.in_shadow {
        let p = scene.positions(d_u, xi).after;
        return Err(Error::OutsideBlockedRegion { x: p.x, y: p.y });
    }
    Ok(areas)
}

/// RR probability of a known scenario for one deterministic move.
pub fn p_rr_known_at(scene: &ScenarioKnown, d_u: f64, xi: f64) -> Result<f64> {
    let a = known_areas(scene, d_u, xi)?;
    p_rr_with_areas(a.a1, a.a_extra, scene.lambda_ris)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marginal {
    pub p: f64,
    /// Quadrature nodes at which the UE left the wall shadow.
    pub outside_nodes: usize,
}

/// RR probability of a known scenario averaged over the mobility laws.
pub fn p_rr_marginal(scene: &ScenarioKnown, mobility: &MobilitySpec) -> Result<Marginal> {
    mobility.validate()?;
    let mut outside_nodes = 0usize;
    let survive = average_over(mobility.speed, mobility.angle, |d, x| {
        let a = known_areas_unchecked(scene, d, x)?;
        if !a.in_shadow {
            outside_nodes += 1;
        }
        Ok((-scene.lambda_ris * a.visible()).exp())
    })?;
    if outside_nodes > 0 {
        log::warn!("{outside_nodes} quadrature nodes left the wall shadow; their areas are used unchanged");
    }
    Ok(Marginal {
        p: (1.0 - survive).clamp(0.0, 1.0),
        outside_nodes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub p_rr: f64,
    pub p_ho: f64,
    pub e_rr: f64,
    pub e_ho: f64,
    pub e_sb: f64,
    pub e_so: f64,
    pub e_gamma: f64,
    /// `[sum (1 + P_HO) lambda_k + sum (1 + P_RR) lambda_s] (1 + p_a)`, kept
    /// for comparison with `e_gamma`.
    pub e_gamma_factored: f64,
}

pub fn signaling_rate(s: &ScenarioUnknown, sig: &SignalingConfig) -> Result<RateReport> {
    s.validate()?;
    sig.validate()?;
    let p_ho = p_ho_marginal(s)?;
    let p_rr = p_rr_unknown_marginal(s)?;
    let (sgw, rism) = (sig.total_sgw(), sig.total_rism());
    let e_ho = sgw * p_ho;
    let e_rr = rism * p_rr;
    let e_sb = sgw + rism;
    let e_so = e_ho + e_rr;
    Ok(RateReport {
        p_rr,
        p_ho,
        e_rr,
        e_ho,
        e_sb,
        e_so,
        e_gamma: e_sb + sig.p_a * e_so,
        e_gamma_factored: ((1.0 + p_ho) * sgw + (1.0 + p_rr) * rism) * (1.0 + sig.p_a),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dimensioning {
    pub servers: usize,
    pub per_server_load: f64,
}

/// Smallest number of servers of one class whose even share of the class's
/// basic and overhead load stays within `capacity`.
pub fn dimension_servers(
    capacity: f64,
    s: &ScenarioUnknown,
    sig: &SignalingConfig,
    kind: ServerKind,
) -> Result<Dimensioning> {
    if !(capacity > 0.0 && capacity.is_finite()) {
        return Err(Error::invalid("threshold", format!("{capacity} must be positive and finite")));
    }
    s.validate()?;
    sig.validate()?;
    let load = match kind {
        ServerKind::Sgw => sig.total_sgw() * (1.0 + sig.p_a * p_ho_marginal(s)?),
        ServerKind::RisM => sig.total_rism() * (1.0 + sig.p_a * p_rr_unknown_marginal(s)?),
    };
    let mut servers = ((load / capacity).ceil() as usize).max(1);
    // Guard against rounding in the division.
    while servers > 1 && load / (servers - 1) as f64 <= capacity {
        servers -= 1;
    }
    while load / servers as f64 > capacity {
        servers += 1;
    }
    if servers > MAX_SERVERS {
        return Err(Error::Infeasible {
            load,
            capacity,
            max_servers: MAX_SERVERS,
        });
    }
    Ok(Dimensioning {
        servers,
        per_server_load: load / servers as f64,
    })
}
