//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

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

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("quadrature on [{lower}, {upper}] stopped at estimated error {achieved_error:e} (value {value})")]
pub struct QuadError {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub achieved_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
    lower: f64,
    upper: f64,
}

impl QuadResult {
    pub fn check(self) -> Result<f64, QuadError> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(QuadError {
                lower: self.lower,
                upper: self.upper,
                value: self.value,
                achieved_error: self.abs_error,
            })
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F, E>(f: &mut F, a: f64, b: f64) -> Result<Segment, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Integrates a fallible integrand over [a, b]. Errors raised by the
/// integrand abort the integration; running out of subdivisions does not,
/// and is reported through [`QuadResult::converged`].
pub fn try_integrate<F, E>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            converged: true,
            lower: a,
            upper: b,
        });
    }
    let first = kronrod15(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let target = |v: f64| tol.abs.max(tol.rel * v.abs());
    while total_err > target(total) && heap.len() < tol.max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer divisible in floating point
            heap.push(worst);
            break;
        }
        let left = kronrod15(&mut f, worst.a, mid)?;
        let right = kronrod15(&mut f, mid, worst.b)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to drop the drift accumulated by the incremental updates
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let abs_error: f64 = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
        converged: abs_error <= target(value),
        lower: a,
        upper: b,
    })
}

pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    match try_integrate(|x| Ok::<f64, std::convert::Infallible>(f(x)), a, b, tol) {
        Ok(r) => r,
        Err(never) => match never {},
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TIGHT: Tolerance = Tolerance::new(1e-14, 1e-13);

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, TIGHT);
        // [x^6/6 - x^3 + x] from -1 to 2
        let want = (64.0 / 6.0 - 8.0 + 2.0) - (1.0 / 6.0 + 1.0 - 1.0);
        assert!((r.value - want).abs() < 1e-13);
        assert!(r.converged);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn endpoint_power_singularity() {
        // ∫₀¹ x^0.6 dx = 1/1.6
        let r = integrate(|x| x.powf(0.6), 0.0, 1.0, TIGHT);
        assert!(r.converged);
        assert!((r.value - 1.0 / 1.6).abs() < 1e-13);
    }

    #[test]
    fn sharply_peaked_integrand() {
        let r = integrate(|x| (-(x - 0.3).powi(2) * 1e4).exp(), 0.0, 1.0, TIGHT);
        let want = (std::f64::consts::PI / 1e4).sqrt();
        assert!((r.value - want).abs() < 1e-13);
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|x| x, 3.0, 3.0, TIGHT);
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn exhausted_subdivisions_report_error() {
        let tol = Tolerance {
            abs: 1e-30,
            rel: 1e-30,
            max_intervals: 3,
        };
        let r = integrate(|x| (1.0 / x).sin(), 1e-3, 1.0, tol);
        assert!(!r.converged);
        let err = r.check().unwrap_err();
        assert!(err.achieved_error > 0.0);
    }

    #[test]
    fn integrand_errors_propagate() {
        let r: Result<QuadResult, &str> = try_integrate(|x| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.0, 1.0, TIGHT);
        assert_eq!(r.unwrap_err(), "boom");
    }
}
