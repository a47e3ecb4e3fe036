//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.
//!
//! Panels are kept in a max-heap keyed on their error estimate; the worst
//! panel is bisected until the summed error meets the tolerance. The error
//! rescaling follows QUADPACK's `qk21`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_panels: 4000,
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-14, 1e-11)
    }
}

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        if !(f1.is_finite() && f2.is_finite()) {
            return Err(Error::Quadrature(format!(
                "non-finite integrand near {} on [{a}, {b}]",
                center - dx
            )));
        }
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !fc.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand at {center}")));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = (res_k - res_g) * half;
    Ok(Panel {
        a,
        b,
        value,
        error: rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    })
}

/// Integrate a fallible integrand over `[a, b]`.
pub fn try_integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    try_integrate_breaks(f, &[a, b], tol)
}

/// Integrate over consecutive panels `[p0, p1], [p1, p2], ...`.
///
/// The break points seed the panel heap, which is the right place to put
/// known kinks or scale changes of the integrand.
pub fn try_integrate_breaks<F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if points.len() < 2 {
        return Err(Error::Quadrature("need at least two break points".into()));
    }
    if points.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Quadrature(format!(
            "break points must be strictly increasing: {points:?}"
        )));
    }
    let mut heap = BinaryHeap::with_capacity(2 * points.len());
    let mut value = 0.0;
    let mut error = 0.0;
    for w in points.windows(2) {
        let p = gk21(&mut f, w[0], w[1])?;
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    let mut panels = heap.len();
    loop {
        let target = tol.abs.max(tol.rel * value.abs());
        if error <= target {
            break;
        }
        if panels >= tol.max_panels {
            return Err(Error::Quadrature(format!(
                "error {error:.3e} above target {target:.3e} after {panels} panels"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel can no longer be split in floating point; accept it.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
    // Re-sum to avoid drift from the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(Estimate {
        value,
        error,
        evaluations: 21 * (2 * panels - (points.len() - 1)),
    })
}

/// Integrate an infallible integrand over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, tol)
}

/// Infallible variant of [`try_integrate_breaks`].
pub fn integrate_breaks<F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_breaks(|x| Ok(f(x)), points, tol)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
