//! Blockage probabilities and Poisson point process sampling.

use std::f64::consts::{FRAC_2_PI, PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point2D, Rect};

/// Below this value of `beta * R_LoS` the LoS factor switches to its series.
pub const LOS_SERIES_SWITCH: f64 = 0.05;
const LOS_SERIES_TERMS: usize = 12;

/// Largest Poisson mean sampled by inversion; larger means use `rand_distr`.
pub const POISSON_INVERSION_LIMIT: f64 = 500.0;

/// Rectangular obstacles with Poisson centres and uniform orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomObstacleModel {
    /// Obstacles per m².
    pub lambda_b: f64,
    pub mean_l: f64,
    pub mean_w: f64,
}

impl RandomObstacleModel {
    pub fn new(lambda_b: f64, mean_l: f64, mean_w: f64) -> Result<Self> {
        for (name, v) in [("lambda_B", lambda_b), ("mean_l", mean_l), ("mean_w", mean_w)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be nonnegative and finite")));
            }
        }
        Ok(RandomObstacleModel {
            lambda_b,
            mean_l,
            mean_w,
        })
    }

    pub fn none() -> Self {
        RandomObstacleModel {
            lambda_b: 0.0,
            mean_l: 0.0,
            mean_w: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        FRAC_2_PI * self.lambda_b * (self.mean_l + self.mean_w)
    }

    pub fn beta0(&self) -> f64 {
        self.lambda_b * self.mean_l * self.mean_w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfBlockModel {
    /// Blocking angle, radians.
    pub theta: f64,
}

impl SelfBlockModel {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=TAU).contains(&theta) {
            return Err(Error::invalid("theta", format!("{theta} is outside [0, 2pi]")));
        }
        Ok(SelfBlockModel { theta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PppShape {
    Rect(Rect),
    Disk { center: Point2D, radius: f64 },
}

impl PppShape {
    pub fn area(&self) -> f64 {
        match self {
            PppShape::Rect(r) => r.area(),
            PppShape::Disk { radius, .. } => PI * radius * radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PppRegion {
    pub shape: PppShape,
    /// Points per m².
    pub density: f64,
}

impl PppRegion {
    pub fn new(shape: PppShape, density: f64) -> Result<Self> {
        if !(density >= 0.0 && density.is_finite()) {
            return Err(Error::invalid("density", format!("{density} must be nonnegative and finite")));
        }
        if !(shape.area() > 0.0 && shape.area().is_finite()) {
            return Err(Error::invalid("shape", "must have positive finite area"));
        }
        Ok(PppRegion { shape, density })
    }

    pub fn mean_count(&self) -> f64 {
        self.density * self.shape.area()
    }
}

/// Poisson variate. Small means use inversion from a single uniform, so
/// the count is nondecreasing in the mean under common random numbers.
pub fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean > POISSON_INVERSION_LIMIT {
        return Poisson::new(mean).map(|p| p.sample(rng) as u64).unwrap_or(0);
    }
    let u: f64 = rng.random();
    let mut k = 0u64;
    let mut pk = (-mean).exp();
    let mut cdf = pk;
    while u > cdf {
        k += 1;
        pk *= mean / k as f64;
        cdf += pk;
        if pk == 0.0 && k as f64 > mean {
            break;
        }
    }
    k
}

/// Uniform point in the shape.
pub fn sample_uniform<R: Rng + ?Sized>(shape: &PppShape, rng: &mut R) -> Point2D {
    match *shape {
        PppShape::Rect(r) => Point2D::new(
            r.min.x + r.width() * rng.random::<f64>(),
            r.min.y + r.height() * rng.random::<f64>(),
        ),
        PppShape::Disk { center, radius } => {
            let rho = radius * rng.random::<f64>().sqrt();
            let phi = TAU * rng.random::<f64>();
            center + Point2D::from_angle(phi) * rho
        }
    }
}

/// Homogeneous PPP sample over the region.
pub fn sample_ppp<R: Rng + ?Sized>(region: &PppRegion, rng: &mut R) -> Vec<Point2D> {
    let n = sample_poisson(region.mean_count(), rng);
    (0..n).map(|_| sample_uniform(&region.shape, rng)).collect()
}

/// Probability that a link of length `r` is blocked by a random obstacle.
pub fn p_blocked_static(r: f64, m: &RandomObstacleModel) -> f64 {
    -(-(m.beta() * r + m.beta0())).exp_m1()
}

pub fn p_self_blocked(m: &SelfBlockModel) -> f64 {
    m.theta / TAU
}

/// `(2/x²)[1 − (1 + x)e^(−x)]`, the mean LoS survival over the LoS-radius
/// distribution with `x = beta * R_LoS`.
pub fn los_factor(x: f64) -> f64 {
    if x < LOS_SERIES_SWITCH {
        // Sum over k of (-1)^k 2(k+1) x^k / (k+2)!
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut fact = 2.0;
        for k in 0..LOS_SERIES_TERMS {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * 2.0 * (k as f64 + 1.0) * pow / fact;
            pow *= x;
            fact *= k as f64 + 3.0;
        }
        sum
    } else {
        2.0 / (x * x) * (1.0 - (1.0 + x) * (-x).exp())
    }
}

/// Probability that a candidate node within the LoS radius is blocked
/// neither by obstacles nor by the user's body.
pub fn p_not_blocked_z(m: &RandomObstacleModel, s: &SelfBlockModel, r_los: f64) -> f64 {
    let x = m.beta() * r_los;
    let p = (1.0 - p_self_blocked(s)) * (-m.beta0()).exp() * los_factor(x);
    p.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table4() -> (RandomObstacleModel, SelfBlockModel) {
        (
            RandomObstacleModel::new(0.2e-6, 10.0, 10.0).unwrap(),
            SelfBlockModel::new(45f64.to_radians()).unwrap(),
        )
    }

    #[test]
    fn static_blockage_examples() {
        assert_eq!(p_blocked_static(100.0, &RandomObstacleModel::none()), 0.0);
        let (m, _) = table4();
        assert_abs_diff_eq!(p_blocked_static(1000.0, &m), 0.002_563_188_497_69, epsilon = 1e-12);
        let dense = RandomObstacleModel::new(1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(p_blocked_static(1e4, &dense), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn self_blockage_examples() {
        assert_eq!(p_self_blocked(&SelfBlockModel::new(0.0).unwrap()), 0.0);
        assert_abs_diff_eq!(p_self_blocked(&SelfBlockModel::new(PI).unwrap()), 0.5);
        assert_abs_diff_eq!(p_self_blocked(&SelfBlockModel::new(40f64.to_radians()).unwrap()), 1.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn z_examples() {
        let (m, _) = table4();
        assert_eq!(p_not_blocked_z(&m, &SelfBlockModel::new(TAU).unwrap(), 1e4), 0.0);
        let s0 = SelfBlockModel::new(0.0).unwrap();
        assert_eq!(p_not_blocked_z(&RandomObstacleModel::none(), &s0, 1e4), 1.0);
        let (m, s) = table4();
        assert_abs_diff_eq!(p_not_blocked_z(&m, &s, 1e4), 0.860_27, epsilon = 1e-5);
    }

    #[test]
    fn los_series_matches_closed_form_at_switch() {
        let x = LOS_SERIES_SWITCH;
        let closed = 2.0 / (x * x) * (1.0 - (1.0 + x) * (-x).exp());
        assert_abs_diff_eq!(los_factor(x * (1.0 - 1e-15)), closed, epsilon = 1e-12);
        assert_eq!(los_factor(0.0), 1.0);
    }

    #[test]
    fn validation() {
        assert!(RandomObstacleModel::new(-1.0, 1.0, 1.0).is_err());
        assert!(SelfBlockModel::new(7.0).is_err());
        assert!(PppRegion::new(PppShape::Disk { center: Point2D::default(), radius: 1.0 }, -0.1).is_err());
    }

    #[test]
    fn empty_field_and_determinism() {
        let room = PppShape::Rect(Rect::new(Point2D::new(0.0, 0.0), Point2D::new(10.0, 10.0)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(sample_ppp(&PppRegion::new(room, 0.0).unwrap(), &mut rng).is_empty());
        let region = PppRegion::new(room, 0.2).unwrap();
        let a = sample_ppp(&region, &mut ChaCha8Rng::seed_from_u64(9));
        let b = sample_ppp(&region, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.x >= 0.0 && p.x <= 10.0 && p.y >= 0.0 && p.y <= 10.0));
    }

    #[test]
    fn large_mean_uses_library_sampler() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n: u64 = (0..200).map(|_| sample_poisson(2000.0, &mut rng)).sum();
        let mean = n as f64 / 200.0;
        assert!((mean - 2000.0).abs() < 5.0 * (2000.0f64 / 200.0).sqrt());
    }
}
