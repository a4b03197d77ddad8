#![allow(clippy::excessive_precision)]

//! Adaptive Gauss-Kronrod (7, 15) quadrature.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MIN_DEPTH: u32 = 3;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol` by recursive
/// bisection.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
    }
    let mut evaluations = 0;
    let (value, error) = refine(&mut f, a, b, tol, 0, &mut evaluations);
    Quadrature {
        value,
        error,
        evaluations,
    }
}

fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    evaluations: &mut usize,
) -> (f64, f64) {
    let (value, error) = gk15(f, a, b);
    *evaluations += 15;
    if (error <= tol && depth >= MIN_DEPTH) || depth >= MAX_DEPTH {
        return (value, error);
    }
    let mid = 0.5 * (a + b);
    let (v1, e1) = refine(f, a, mid, 0.5 * tol, depth + 1, evaluations);
    let (v2, e2) = refine(f, mid, b, 0.5 * tol, depth + 1, evaluations);
    (v1 + v2, e1 + e2)
}

/// Iterated integral of `f(x, y)` over `[ax, bx] x [ay, by]`.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    tol: f64,
) -> Quadrature {
    let width = (bx - ax).abs().max(f64::MIN_POSITIVE);
    let inner_tol = 0.5 * tol / width;
    let mut evaluations = 0;
    let mut inner_error = 0.0f64;
    let outer = integrate(
        |x| {
            let q = integrate(|y| f(x, y), ay, by, inner_tol);
            evaluations += q.evaluations;
            inner_error = inner_error.max(q.error);
            q.value
        },
        ax,
        bx,
        0.5 * tol,
    );
    Quadrature {
        value: outer.value,
        error: outer.error + inner_error * width,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| 3.0 * x * x - x + 1.0, -1.0, 2.0, 1e-14);
        assert_abs_diff_eq!(q.value, 9.0 - 1.5 + 3.0, epsilon = 1e-13);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let q = integrate(f64::sin, 0.0, PI, 1e-12);
        assert_abs_diff_eq!(q.value, 2.0, epsilon = 1e-12);
        let q = integrate(|x| (-50.0 * x).exp(), 0.0, 20.0, 1e-13);
        assert_abs_diff_eq!(q.value, 0.02, epsilon = 1e-13);
    }

    #[test]
    fn double_integral() {
        let q = integrate_2d(|x, y| x * y.cos(), (0.0, 2.0), (0.0, PI / 2.0), 1e-12);
        assert_abs_diff_eq!(q.value, 2.0, epsilon = 1e-11);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-9).value, 0.0);
    }
}
