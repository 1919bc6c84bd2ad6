//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Kronrod rule supplies the per-interval estimate and the
//! embedded 7-point Gauss rule its error; the interval with the largest
//! error is bisected until the summed error meets the requested
//! tolerance. Kronrod abscissae are interior points, so integrable
//! endpoint singularities never get evaluated at the endpoint itself.

use crate::error::{Error, Result};
use std::collections::BinaryHeap;

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    /// Number of subintervals in the final partition.
    pub intervals: usize,
}

#[derive(Debug)]
struct Segment {
    lo: f64,
    hi: f64,
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
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// QUADPACK-style conservative rescaling of the raw |K15 - G7| error.
fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if result_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / result_asc).powf(1.5);
        scaled = if scale < 1.0 {
            result_asc * scale
        } else {
            result_asc
        };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * result_abs);
    }
    scaled
}

fn qk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);

    let mut result_gauss = 0.0;
    let mut result_kronrod = f_center * WGK[7];
    let mut result_abs = result_kronrod.abs();
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * fsum;
        }
        result_kronrod += WGK[j] * fsum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
    }
    result_gauss += WG[3] * f_center;

    let mean = result_kronrod * 0.5;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = ((result_kronrod - result_gauss) * half).abs();
    Segment {
        lo,
        hi,
        value: result_kronrod * half,
        error: rescale_error(err, result_abs * half.abs(), result_asc * half.abs()),
    }
}

const MAX_SEGMENTS: usize = 4096;

/// Adaptive integral of `f` over [lo, hi].
///
/// Converges when the summed error estimate drops below
/// `max(abs_tol, rel_tol * |integral|)`; reports
/// [`Error::NoConvergence`] if the segment budget is exhausted first.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_with_breakpoints(f, &[lo, hi], abs_tol, rel_tol)
}

/// Adaptive integral over `[points[0], points[last]]` with the interior
/// points used as initial subdivision boundaries (known peaks,
/// singular endpoints).
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if points.len() < 2 || points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid(
            "quadrature",
            "breakpoints must be strictly increasing with at least two entries",
        ));
    }
    if !(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0) {
        return Err(Error::invalid(
            "quadrature",
            "tolerances must be nonnegative and not both zero",
        ));
    }

    let mut heap = BinaryHeap::with_capacity(64);
    let mut total_value = 0.0;
    let mut total_error = 0.0;
    for w in points.windows(2) {
        let seg = qk15(&f, w[0], w[1]);
        total_value += seg.value;
        total_error += seg.error;
        heap.push(seg);
    }

    while total_error > abs_tol.max(rel_tol * total_value.abs()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::NoConvergence {
                context: "quadrature",
                tolerance: abs_tol.max(rel_tol * total_value.abs()),
                limit: MAX_SEGMENTS,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // interval at floating-point resolution; keep it as is
            total_error -= worst.error;
            total_value -= worst.value;
            let pinned = Segment {
                error: 0.0,
                ..worst
            };
            total_value += pinned.value;
            heap.push(pinned);
            continue;
        }
        let left = qk15(&f, worst.lo, mid);
        let right = qk15(&f, mid, worst.hi);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // re-sum the final partition in positional order; the incremental
    // running totals carry accumulated cancellation
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = segments.iter().map(|s| s.value).sum();
    let error_estimate = segments.iter().map(|s| s.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        intervals: segments.len(),
    })
}
