//! Spectral heat content of Brownian motion (generator `Δ`) killed on leaving
//! an interval or a 3-ball.
//!
//! Two exact representations are combined. For `t / L^2 >= 0.1` the
//! Dirichlet eigenfunction series converges in a handful of terms; below that
//! the method of images (Poisson summation of the same series) does. The image
//! form also yields the deficit `|D| - Q(t)` and the remainder
//! `Q(t) - (|D| - 2|∂D| sqrt(t/pi))` without subtractive cancellation, which
//! the subordination integrals rely on.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{erfc, exp_erfc_gap};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Below this value of `t / L^2` the image representation is used.
const IMAGE_SWITCH: f64 = 0.1;

/// Relative size of the neglected eigen-series tail.
const SERIES_TAIL: f64 = 1e-17;

/// An interval `(a, b)` or a ball of radius `r` in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Ball3 { radius: f64 },
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::UnsupportedDomain(format!("interval ({a}, {b})")));
        }
        Ok(Domain::Interval { a, b })
    }

    pub fn ball3(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::UnsupportedDomain(format!("ball of radius {radius}")));
        }
        Ok(Domain::Ball3 { radius })
    }

    pub fn unit_interval() -> Self {
        Domain::Interval { a: 0.0, b: 1.0 }
    }

    pub fn unit_ball() -> Self {
        Domain::Ball3 { radius: 1.0 }
    }

    /// Lebesgue measure `|D|`.
    pub fn volume(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Ball3 { radius } => 4.0 * PI * radius.powi(3) / 3.0,
        }
    }

    /// Surface measure `|∂D|`; two points for an interval.
    pub fn perimeter(&self) -> f64 {
        match *self {
            Domain::Interval { .. } => 2.0,
            Domain::Ball3 { radius } => 4.0 * PI * radius * radius,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Ball3 { .. } => 3,
        }
    }

    /// Length `b - a` or radius `r`; eigenvalues are `(n pi / L)^2`.
    pub fn length_scale(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Ball3 { radius } => radius,
        }
    }

    /// Coefficient of `sqrt(t)` in `|D| - Q(t)`, i.e. `2 |∂D| / sqrt(pi)`.
    pub fn sqrt_coefficient(&self) -> f64 {
        2.0 * self.perimeter() / SQRT_PI
    }

    /// Limit of `(Q(t) - (|D| - 2|∂D| sqrt(t/pi))) / t` as `t -> 0`:
    /// zero for intervals, `4 pi r` for the 3-ball.
    pub fn remainder_slope(&self) -> f64 {
        match *self {
            Domain::Interval { .. } => 0.0,
            Domain::Ball3 { radius } => 4.0 * PI * radius,
        }
    }

    /// `n`-th Dirichlet eigenvalue of `-Δ` carried by the expansion of the
    /// constant initial condition (odd modes only on an interval).
    fn eigenvalue(&self, n: usize) -> f64 {
        let l = self.length_scale();
        (n as f64 * PI / l).powi(2)
    }

    /// Distance to the centre (ball) or offset from `a` (interval), after
    /// checking the point lies in the open domain.
    fn coordinate(&self, x: &[f64]) -> Result<f64> {
        match *self {
            Domain::Interval { a, b } => {
                if x.len() != 1 || !(x[0] > a && x[0] < b) {
                    return Err(Error::PointOutsideDomain(x.to_vec()));
                }
                Ok(x[0] - a)
            }
            Domain::Ball3 { radius } => {
                if x.len() != 3 {
                    return Err(Error::PointOutsideDomain(x.to_vec()));
                }
                let rho = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                if !(rho < radius) {
                    return Err(Error::PointOutsideDomain(x.to_vec()));
                }
                Ok(rho)
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval { a, b } => write!(f, "interval:{a},{b}"),
            Domain::Ball3 { radius } => write!(f, "ball3:{radius}"),
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    /// Parses `interval:a,b` or `ball3:r`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedDomain(format!("cannot parse domain '{s}'"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind.trim(), nums.as_slice()) {
            ("interval", [a, b]) => Domain::interval(*a, *b),
            ("ball3", [r]) => Domain::ball3(*r),
            _ => Err(bad()),
        }
    }
}

/// One term `m_n e^{-lambda_n t}` of the heat content expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub eigenvalue: f64,
    pub mass: f64,
}

/// Eigen-expansion `Q(t) = sum_n m_n e^{-lambda_n t}` truncated at `N` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSeries {
    pub domain: Domain,
    pub modes: Vec<Mode>,
    pub truncation: usize,
}

impl SpectralSeries {
    /// Sum of the retained masses.
    pub fn mass(&self) -> f64 {
        self.modes.iter().map(|m| m.mass).sum()
    }

    /// Upper bound on the masses of the omitted modes.
    ///
    /// Masses decay like `C / n^2`, so the tail is at most `C / N`.
    pub fn mass_tail_bound(&self) -> f64 {
        let n = self.truncation as f64;
        match self.domain {
            // odd n > N: sum 8L/(pi^2 n^2) <= 8L/pi^2 * 1/(2N)
            Domain::Interval { a, b } => 4.0 * (b - a) / (PI * PI * n),
            Domain::Ball3 { radius } => 8.0 * radius.powi(3) / (PI * n),
        }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| m.mass * (-m.eigenvalue * t).exp())
            .sum()
    }
}

/// Dirichlet expansion of the heat content with `n_modes` retained modes.
pub fn spectral_series(domain: &Domain, n_modes: usize) -> SpectralSeries {
    let modes = (0..n_modes)
        .map(|i| mode(domain, i))
        .collect::<Vec<_>>();
    SpectralSeries {
        domain: *domain,
        modes,
        truncation: match domain {
            Domain::Interval { .. } => 2 * n_modes - 1,
            Domain::Ball3 { .. } => n_modes,
        },
    }
}

/// The `i`-th (zero based) nonvanishing mode.
fn mode(domain: &Domain, i: usize) -> Mode {
    match *domain {
        Domain::Interval { a, b } => {
            let n = 2 * i + 1;
            let nf = n as f64;
            Mode {
                eigenvalue: domain.eigenvalue(n),
                mass: 8.0 * (b - a) / (nf * nf * PI * PI),
            }
        }
        Domain::Ball3 { radius } => {
            let n = i + 1;
            let nf = n as f64;
            Mode {
                eigenvalue: domain.eigenvalue(n),
                mass: 8.0 * radius.powi(3) / (PI * nf * nf),
            }
        }
    }
}

/// `Q(t)` by the eigen-series, truncated once `e^{-lambda t}` drops below
/// [`SERIES_TAIL`]; since the masses sum to `|D|` this bounds the tail by
/// `SERIES_TAIL * |D|`.
fn q2_series(domain: &Domain, t: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0.. {
        let m = mode(domain, i);
        let decay = (-m.eigenvalue * t).exp();
        sum += m.mass * decay;
        if decay < SERIES_TAIL {
            break;
        }
    }
    sum
}

/// Sum of `weight(k) * G(y_k)` over image indices until `y_k` is large enough
/// that the remaining terms vanish in double precision.
fn image_sum(first: f64, step: f64, alternating: bool) -> f64 {
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        let y = first + step * k as f64;
        if y > 28.0 {
            break;
        }
        let g = exp_erfc_gap(y);
        sum += if alternating && k % 2 == 1 { -g } else { g };
        k += 1;
    }
    sum
}

/// Image part of the remainder `Q(t) - (|D| - 2|∂D| sqrt(t/pi))`, valid for
/// any `t > 0` but used only below the switch.
fn remainder_images(domain: &Domain, t: f64) -> f64 {
    let st = t.sqrt();
    match *domain {
        Domain::Interval { a, b } => {
            let l = b - a;
            // (8 sqrt(t)/sqrt(pi)) sum_{m>=1} (-1)^{m+1} G(m L / (2 sqrt t))
            8.0 * st / SQRT_PI * image_sum(l / (2.0 * st), l / (2.0 * st), true)
        }
        Domain::Ball3 { radius } => {
            let r = radius;
            // 4 pi r t - 16 sqrt(pi) r^2 sqrt(t) sum_{k>=1} G(k r / sqrt t)
            4.0 * PI * r * t - 16.0 * SQRT_PI * r * r * st * image_sum(r / st, r / st, false)
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || t.is_nan() {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

fn use_images(domain: &Domain, t: f64) -> bool {
    t < IMAGE_SWITCH * domain.length_scale().powi(2)
}

/// Spectral heat content `Q_D(t) = int_D P_x(tau_D > t) dx`.
pub fn q2(domain: &Domain, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(domain.volume());
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    if use_images(domain, t) {
        Ok(domain.volume() - q2_deficit(domain, t)?)
    } else {
        Ok(q2_series(domain, t))
    }
}

/// `|D| - Q_D(t)`, accurate in relative terms also when it is tiny.
pub fn q2_deficit(domain: &Domain, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if t.is_infinite() {
        return Ok(domain.volume());
    }
    if use_images(domain, t) {
        Ok(domain.sqrt_coefficient() * t.sqrt() - remainder_images(domain, t))
    } else {
        Ok(domain.volume() - q2_series(domain, t))
    }
}

/// `Q_D(t) - (|D| - 2|∂D| sqrt(t/pi))`.
pub fn q2_remainder(domain: &Domain, t: f64) -> Result<f64> {
    check_time(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    if use_images(domain, t) {
        Ok(remainder_images(domain, t))
    } else {
        Ok(q2_series(domain, t) - domain.volume() + domain.sqrt_coefficient() * t.sqrt())
    }
}

/// The bound `10^d |D| t / R_0^2` on `|q2_remainder|` for a ball, with
/// localisation radius `R_0 = r / 2`.
pub fn ball_remainder_bound(domain: &Domain, t: f64) -> Option<f64> {
    match *domain {
        Domain::Ball3 { radius } => {
            let r0 = 0.5 * radius;
            Some(1e3 * domain.volume() * t / (r0 * r0))
        }
        Domain::Interval { .. } => None,
    }
}

/// `P_x(tau_D <= t)` in the image representation.
fn exit_probability_images(domain: &Domain, coord: f64, t: f64) -> f64 {
    let c = 2.0 * t.sqrt();
    match *domain {
        Domain::Interval { a, b } => {
            let l = b - a;
            let mut sum = 0.0;
            for n in 0.. {
                let nf = n as f64;
                let near = erfc((nf * l + coord) / c) + erfc(((nf + 1.0) * l - coord) / c);
                sum += if n % 2 == 0 { near } else { -near };
                if nf * l / c > 28.0 {
                    break;
                }
            }
            sum
        }
        Domain::Ball3 { radius } => {
            let r = radius;
            let mut sum = 0.0;
            if coord < 1e-7 * r {
                // limit rho -> 0 of (r / rho) [erfc((a - rho)/c) - erfc((a + rho)/c)]
                for n in 0.. {
                    let a = (2 * n + 1) as f64 * r;
                    if a / c > 28.0 {
                        break;
                    }
                    sum += 4.0 / (SQRT_PI * c) * (-(a / c).powi(2)).exp();
                }
                return r * sum;
            }
            for n in 0.. {
                let a = (2 * n + 1) as f64 * r;
                if (a - coord) / c > 28.0 {
                    break;
                }
                sum += erfc((a - coord) / c) - erfc((a + coord) / c);
            }
            r / coord * sum
        }
    }
}

fn survival_series(domain: &Domain, coord: f64, t: f64) -> f64 {
    match *domain {
        Domain::Interval { a, b } => {
            let l = b - a;
            let mut sum = 0.0;
            for i in 0.. {
                let n = (2 * i + 1) as f64;
                let decay = (-(n * PI / l).powi(2) * t).exp();
                sum += 4.0 / (n * PI) * (n * PI * coord / l).sin() * decay;
                if decay < SERIES_TAIL {
                    break;
                }
            }
            sum
        }
        Domain::Ball3 { radius } => {
            let r = radius;
            let mut sum = 0.0;
            for n in 1.. {
                let k = n as f64 * PI / r;
                let decay = (-k * k * t).exp();
                let z = k * coord;
                // sin(z) / rho = k sinc(z)
                let ratio = if z < 1e-8 { k } else { z.sin() / coord };
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                sum += sign * 2.0 / k * ratio * decay;
                if decay < SERIES_TAIL {
                    break;
                }
            }
            sum
        }
    }
}

/// `P_x(tau_D > t)` for Brownian motion started at `x`.
pub fn survival(domain: &Domain, x: &[f64], t: f64) -> Result<f64> {
    let coord = domain.coordinate(x)?;
    check_time(t)?;
    Ok(survival_at(domain, coord, t))
}

/// Survival as a function of the reduced coordinate (offset from `a` on an
/// interval, radius in the ball).
pub(crate) fn survival_at(domain: &Domain, coord: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let p = if use_images(domain, t) {
        1.0 - exit_probability_images(domain, coord, t)
    } else {
        survival_series(domain, coord, t)
    };
    p.clamp(0.0, 1.0)
}

/// Solves `survival(x, t) = u` for `t` by bracketing and bisection in `ln t`
/// to relative accuracy `1e-10`.
pub(crate) fn inverse_survival(domain: &Domain, coord: f64, u: f64) -> f64 {
    let l2 = domain.length_scale().powi(2);
    let mut hi = 0.01 * l2;
    while survival_at(domain, coord, hi) > u {
        hi *= 2.0;
    }
    let mut lo = 0.5 * hi;
    while survival_at(domain, coord, lo) <= u {
        hi = lo;
        lo *= 0.5;
        if lo < 1e-300 {
            return lo;
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = (lo * hi).sqrt();
        if survival_at(domain, coord, mid) > u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

/// Draws the exit time `tau_D` of Brownian motion started at `x` by inverting
/// the survival function at a uniform variate.
pub fn exit_time_sample<R: Rng + ?Sized>(domain: &Domain, x: &[f64], rng: &mut R) -> Result<f64> {
    let coord = domain.coordinate(x)?;
    let u = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    Ok(inverse_survival(domain, coord, u))
}

/// Uniform point of the domain, returned as its reduced coordinate.
pub(crate) fn uniform_coordinate<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> f64 {
    match *domain {
        Domain::Interval { a, b } => (b - a) * rng.gen::<f64>(),
        Domain::Ball3 { radius } => radius * rng.gen::<f64>().cbrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn geometry() {
        let d = Domain::interval(-1.0, 2.0).unwrap();
        assert_eq!((d.volume(), d.perimeter(), d.dimension()), (3.0, 2.0, 1));
        let b = Domain::ball3(2.0).unwrap();
        assert!((b.volume() - 32.0 * PI / 3.0).abs() < 1e-12);
        assert!((b.perimeter() - 16.0 * PI).abs() < 1e-12);
        assert!((b.eigenvalue(3) - (1.5 * PI).powi(2)).abs() < 1e-12);
        assert!(Domain::interval(1.0, 1.0).is_err());
        assert!(Domain::ball3(-1.0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["interval:0,1", "ball3:2.5", "interval:-1,3"] {
            let d: Domain = s.parse().unwrap();
            assert_eq!(d.to_string().parse::<Domain>().unwrap(), d);
        }
        assert!("disk:1".parse::<Domain>().is_err());
        assert!("interval:1".parse::<Domain>().is_err());
    }

    #[test]
    fn first_mode_of_unit_interval() {
        let s = spectral_series(&Domain::unit_interval(), 10);
        assert!((s.modes[0].mass - 8.0 / (PI * PI)).abs() < 1e-15);
        assert!((s.modes[0].eigenvalue - PI * PI).abs() < 1e-12);
        assert!((s.modes[0].mass - 0.810_569_469_138_702_7).abs() < 1e-15);
    }

    #[test]
    fn masses_sum_to_volume_within_tail_bound() {
        for d in [Domain::unit_interval(), Domain::unit_ball()] {
            let s = spectral_series(&d, 200_000);
            let gap = d.volume() - s.mass();
            assert!(gap > 0.0 && gap <= s.mass_tail_bound());
            assert!(s.mass_tail_bound() < 1e-5 * d.volume());
            assert!(s.modes.windows(2).all(|w| w[1].eigenvalue > w[0].eigenvalue));
            assert!(s.modes.iter().all(|m| m.mass > 0.0));
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for d in [Domain::unit_interval(), Domain::unit_ball(), Domain::ball3(0.3).unwrap()] {
            let t = IMAGE_SWITCH * d.length_scale().powi(2);
            for f in [0.5, 1.0, 2.0] {
                let img = d.volume() - (d.sqrt_coefficient() * (f * t).sqrt() - remainder_images(&d, f * t));
                let ser = q2_series(&d, f * t);
                assert!((img - ser).abs() < 1e-14 * d.volume(), "{d} {img} {ser}");
                for c in [0.05, 0.3, 0.5] {
                    let coord = c * d.length_scale();
                    let a = 1.0 - exit_probability_images(&d, coord, f * t);
                    let b = survival_series(&d, coord, f * t);
                    assert!((a - b).abs() < 1e-13, "{d} coord {coord}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn q2_basics() {
        let d = Domain::unit_interval();
        assert_eq!(q2(&d, 0.0).unwrap(), 1.0);
        assert!(q2(&d, -1.0).is_err());
        assert!(q2(&d, 50.0).unwrap() < 1e-200);
        let ratio = q2_deficit(&d, 1e-8).unwrap() / 1e-4;
        assert!((ratio - 4.0 / SQRT_PI).abs() < 1e-3 * 4.0 / SQRT_PI);
    }

    #[test]
    fn remainder_vanishes_faster_than_sqrt() {
        for d in [Domain::unit_interval(), Domain::unit_ball()] {
            let t = 1e-10;
            assert!(q2_remainder(&d, t).unwrap().abs() / t.sqrt() < 1e-3);
        }
        let b = Domain::unit_ball();
        let r = q2_remainder(&b, 1e-6).unwrap();
        assert!((r / 1e-6 - 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn ball_remainder_respects_bound() {
        let b = Domain::unit_ball();
        let bound = ball_remainder_bound(&b, 0.01).unwrap();
        assert!((bound - 167.551_608_191_455_6).abs() < 1e-9);
        assert!(q2_remainder(&b, 0.01).unwrap().abs() <= bound);
        assert!(ball_remainder_bound(&Domain::unit_interval(), 0.01).is_none());
    }

    #[test]
    fn survival_edge_cases() {
        let d = Domain::unit_interval();
        assert_eq!(survival(&d, &[0.5], 0.0).unwrap(), 1.0);
        assert!(survival(&d, &[1.5], 0.1).is_err());
        assert!(survival(&d, &[0.5, 0.1], 0.1).is_err());
        for t in [0.001, 0.03, 0.2, 1.0] {
            let l = survival(&d, &[0.2], t).unwrap();
            let r = survival(&d, &[0.8], t).unwrap();
            assert!((l - r).abs() < 1e-14);
        }
        let b = Domain::unit_ball();
        assert!(survival(&b, &[0.6, 0.6, 0.6], 0.1).is_err());
        let p = survival(&b, &[0.3, 0.0, 0.0], 0.05).unwrap();
        let q = survival(&b, &[0.0, -0.3, 0.0], 0.05).unwrap();
        assert!((p - q).abs() < 1e-15);
        // centre agrees with a point next to it
        let c = survival(&b, &[0.0, 0.0, 0.0], 0.05).unwrap();
        let n = survival(&b, &[1e-5, 0.0, 0.0], 0.05).unwrap();
        assert!((c - n).abs() < 1e-9);
    }

    #[test]
    fn exit_time_inverts_survival() {
        let d = Domain::unit_interval();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let tau = exit_time_sample(&d, &[0.37], &mut rng).unwrap();
            assert!(tau > 0.0 && tau.is_finite());
        }
        for u in [1e-6, 0.1, 0.5, 0.9, 0.999_999] {
            let t = inverse_survival(&d, 0.37, u);
            assert!((survival_at(&d, 0.37, t) - u).abs() < 1e-8 * u.max(1e-3));
        }
    }
}
