//! Monte Carlo estimators of the RR and HO probabilities.
//!
//! Trial `i` of a run with master seed `s` draws from its own ChaCha stream
//! `(s, i)`, so estimates are identical however the trials are scheduled.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{displaced_distance, hidden_by, segment_visibility, CircularSector, MoveGeometry, Point2D};
use crate::scenario::{MobilitySpec, ScenarioKnown, ScenarioUnknown};
use crate::stochastic::{sample_poisson, sample_ppp, sample_uniform, PppRegion, PppShape};

/// Trial count used when none is given.
pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub rr_occurred: bool,
    pub ho_occurred: bool,
    pub candidate_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Estimate {
    fn from_hits(hits: u64, trials: u64, seed: u64) -> Self {
        let mean = hits as f64 / trials as f64;
        Estimate {
            mean,
            stderr: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }
}

/// Random stream of trial `index` under master seed `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn rr_trial_with<R: Rng + ?Sized>(scene: &ScenarioKnown, d_u: f64, xi: f64, rng: &mut R) -> Result<TrialOutcome> {
    let g = MoveGeometry::new(scene.r, d_u, xi)?;
    let big_r = displaced_distance(&g);
    let pos = scene.positions(d_u, xi);
    let sector = scene.self_block_sector(&pos);
    let field = sample_ppp(&PppRegion::new(PppShape::Rect(scene.room), scene.lambda_ris)?, rng);
    let mut blockers = scene.walls.clone();
    blockers.extend_from_slice(&scene.extra_obstacles);
    let candidate_count = field
        .iter()
        .filter(|&&p| {
            p.distance(pos.after) < big_r
                && p.distance(pos.before) >= scene.r
                && !hidden_by(&scene.walls, scene.enb, p)
                && segment_visibility(pos.after, p, &blockers, sector.as_ref())
        })
        .count();
    Ok(TrialOutcome {
        rr_occurred: candidate_count > 0,
        ho_occurred: false,
        candidate_count,
    })
}

/// One RR trial in a known scenario: an RR happens when some RIS is closer
/// to the moved UE than the serving RIS, lies outside the old serving
/// circle, is reachable from the eNB and is visible from the UE.
pub fn run_rr_trial(scene: &ScenarioKnown, d_u: f64, xi: f64, seed: u64) -> Result<TrialOutcome> {
    rr_trial_with(scene, d_u, xi, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn count_hits<F>(z: u64, seed: u64, trial: F) -> Result<u64>
where
    F: Fn(&mut ChaCha8Rng) -> Result<bool> + Sync,
{
    if z == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    (0..z)
        .into_par_iter()
        .map(|i| trial(&mut trial_rng(seed, i)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

pub fn estimate_rr(scene: &ScenarioKnown, mobility: &MobilitySpec, z: u64, seed: u64) -> Result<Estimate> {
    scene.validate()?;
    mobility.validate()?;
    let hits = count_hits(z, seed, |rng| {
        let d = mobility.speed.sample(rng);
        let xi = mobility.angle.sample(rng);
        Ok(rr_trial_with(scene, d, xi, rng)?.rr_occurred)
    })?;
    Ok(Estimate::from_hits(hits, z, seed))
}

/// Nodes of density `lambda` in the disk of radius `big_r` about the moved
/// UE, thinned by random-length LoS blockage and a body sector.
fn thinned_field_hit<R: Rng + ?Sized>(s: &ScenarioUnknown, lambda: f64, big_r: f64, rng: &mut R) -> Result<(bool, usize)> {
    if big_r == 0.0 {
        return Ok((false, 0));
    }
    let shape = PppShape::Disk {
        center: Point2D::default(),
        radius: big_r,
    };
    let n = sample_poisson(PppRegion::new(shape, lambda)?.mean_count(), rng);
    // The body sector faces away from the direction of travel (+x).
    let body = CircularSector::centered(Point2D::default(), PI, s.self_block.theta)?;
    let (beta, beta0) = (s.obstacles.beta(), s.obstacles.beta0());
    let mut survivors = 0;
    // Each node consumes its draws in turn, so a denser field under the same
    // stream extends a sparser one.
    for _ in 0..n {
        let p = sample_uniform(&shape, rng);
        let los = s.r_los * rng.random::<f64>().sqrt();
        let clear = rng.random::<f64>() < (-(beta * los + beta0)).exp();
        if clear && !body.contains(p) {
            survivors += 1;
        }
    }
    Ok((survivors > 0, survivors))
}

fn ho_trial_with<R: Rng + ?Sized>(s: &ScenarioUnknown, d_u: f64, xi: f64, rng: &mut R) -> Result<TrialOutcome> {
    let big_r = displaced_distance(&MoveGeometry::new(s.r_enb, d_u, xi)?);
    let (hit, n) = thinned_field_hit(s, s.lambda_enb, big_r, rng)?;
    Ok(TrialOutcome {
        rr_occurred: false,
        ho_occurred: hit,
        candidate_count: n,
    })
}

fn rr_unknown_trial_with<R: Rng + ?Sized>(s: &ScenarioUnknown, d_u: f64, xi: f64, rng: &mut R) -> Result<TrialOutcome> {
    let big_r = displaced_distance(&MoveGeometry::new(s.r_ris, d_u, xi)?);
    let (hit, n) = thinned_field_hit(s, s.lambda_ris, big_r, rng)?;
    Ok(TrialOutcome {
        rr_occurred: hit,
        ho_occurred: false,
        candidate_count: n,
    })
}

/// One HO trial with statistically known obstacles.
pub fn run_ho_trial(s: &ScenarioUnknown, d_u: f64, xi: f64, seed: u64) -> Result<TrialOutcome> {
    ho_trial_with(s, d_u, xi, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// One RR trial with statistically known obstacles.
pub fn run_rr_unknown_trial(s: &ScenarioUnknown, d_u: f64, xi: f64, seed: u64) -> Result<TrialOutcome> {
    rr_unknown_trial_with(s, d_u, xi, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn estimate_ho(s: &ScenarioUnknown, mobility: &MobilitySpec, z: u64, seed: u64) -> Result<Estimate> {
    s.validate()?;
    mobility.validate()?;
    let enb = mobility.enb_law();
    let hits = count_hits(z, seed, |rng| {
        let d = mobility.speed.sample(rng);
        let xi = enb.sample(rng);
        Ok(ho_trial_with(s, d, xi, rng)?.ho_occurred)
    })?;
    Ok(Estimate::from_hits(hits, z, seed))
}

pub fn estimate_rr_unknown(s: &ScenarioUnknown, mobility: &MobilitySpec, z: u64, seed: u64) -> Result<Estimate> {
    s.validate()?;
    mobility.validate()?;
    let hits = count_hits(z, seed, |rng| {
        let d = mobility.speed.sample(rng);
        let xi = mobility.angle.sample(rng);
        Ok(rr_unknown_trial_with(s, d, xi, rng)?.rr_occurred)
    })?;
    Ok(Estimate::from_hits(hits, z, seed))
}
