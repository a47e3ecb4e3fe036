//! The `(alpha/2)`-stable subordinator: transition density, tail and moment
//! integrals, and exact sampling.
//!
//! Writing `rho = alpha / 2`, the subordinator has Laplace transform
//! `E exp(-lambda S_t) = exp(-t lambda^rho)` and scales as
//! `S_t = t^{1/rho} S_1` in law. The density at time one is evaluated by
//! one of two exact representations:
//!
//! * the convergent power series in `x^{-rho}`, used for `x >= x*(alpha)`;
//! * Zolotarev's non-oscillatory integral over `(0, pi)`, used below the
//!   crossover where the series suffers cancellation.
//!
//! The real-form Fourier inversion is kept as an independent cross-check.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::quadrature::{try_integrate_breaks, Tolerance};
use crate::specfun::{gamma, ln_gamma, sin_pi, tail_density_constant};

/// Largest cancellation amplification `sum |a_n| / |sum a_n|` accepted from
/// the series branch.
pub const CANCELLATION_BUDGET: f64 = 1e3;

const MAX_SERIES_TERMS: usize = 4000;

/// Safety factor applied on top of the scanned envelope ratio.
const ENVELOPE_SAFETY: f64 = 1.05;

/// How a density value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityMethod {
    Series,
    Zolotarev,
    Fourier,
}

impl DensityMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityMethod::Series => "series",
            DensityMethod::Zolotarev => "zolotarev",
            DensityMethod::Fourier => "fourier",
        }
    }
}

/// A density value together with the branch used and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEval {
    pub value: f64,
    pub method: DensityMethod,
    pub est_error: f64,
}

/// Stirling majorant of the absolute series terms summed from `n_start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBound {
    pub n_start: usize,
    pub bound: f64,
}

/// Stable subordinator of index `alpha / 2` with its per-`alpha` tables.
#[derive(Debug)]
pub struct StableSubordinator {
    alpha: Alpha,
    /// `ln |c_n|` and `sign(c_n)` of `c_n = (-1)^{n+1} Gamma(1 + rho n) sin(pi rho n) / (pi n!)`,
    /// index 0 holds `n = 1`.
    coef: Vec<(f64, f64)>,
    crossover: f64,
    envelope: OnceLock<f64>,
}

impl Clone for StableSubordinator {
    fn clone(&self) -> Self {
        let envelope = OnceLock::new();
        if let Some(c) = self.envelope.get() {
            let _ = envelope.set(*c);
        }
        Self {
            alpha: self.alpha,
            coef: self.coef.clone(),
            crossover: self.crossover,
            envelope,
        }
    }
}

/// Outcome of one series evaluation.
struct SeriesSum {
    value: f64,
    abs_sum: f64,
    terms: usize,
    tail: f64,
}

impl StableSubordinator {
    pub fn new(alpha: Alpha) -> Self {
        let rho = alpha.rho();
        let coef = (1..=MAX_SERIES_TERMS)
            .map(|n| {
                let nf = n as f64;
                let s = sin_pi(rho * nf);
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 } * s.signum();
                let ln_mag = ln_gamma(1.0 + rho * nf).expect("positive argument")
                    - ln_gamma(nf + 1.0).expect("positive argument")
                    + s.abs().ln()
                    - PI.ln();
                (ln_mag, if s == 0.0 { 0.0 } else { sign })
            })
            .collect();
        let mut sub = Self {
            alpha,
            coef,
            crossover: f64::INFINITY,
            envelope: OnceLock::new(),
        };
        sub.crossover = sub.scan_crossover();
        sub
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    /// Smallest `x` from which the series branch is trusted.
    pub fn crossover(&self) -> f64 {
        self.crossover
    }

    /// Walks a geometric grid downward from `x = 200` and stops at the first
    /// point where the series either fails to converge or amplifies rounding
    /// by more than [`CANCELLATION_BUDGET`].
    fn scan_crossover(&self) -> f64 {
        let mut x = 200.0;
        let mut last_ok = x;
        while x > 1e-3 {
            match self.series(x, -1.0, None, 1e-15) {
                Some(s) if s.value > 0.0 && s.abs_sum <= CANCELLATION_BUDGET * s.value => {
                    last_ok = x;
                }
                _ => break,
            }
            x /= 1.05;
        }
        last_ok
    }

    /// `sum_n c_n x^{offset - rho n} / (rho n - divisor)^{[divisor given]}`.
    ///
    /// Stops once the Stirling majorant of the remaining terms drops below
    /// `rel_tol` times the running absolute sum. Returns `None` when that does
    /// not happen within the coefficient table.
    fn series(&self, x: f64, offset: f64, divisor: Option<f64>, rel_tol: f64) -> Option<SeriesSum> {
        let rho = self.alpha.rho();
        let lx = x.ln();
        let mut value = 0.0;
        let mut abs_sum = 0.0;
        for (i, &(ln_c, sign)) in self.coef.iter().enumerate() {
            let n = (i + 1) as f64;
            let mut ln_term = ln_c + (offset - rho * n) * lx;
            if let Some(g) = divisor {
                ln_term -= (rho * n - g).ln();
            }
            let mag = if sign == 0.0 { 0.0 } else { ln_term.exp() };
            value += sign * mag;
            abs_sum += mag;
            if !abs_sum.is_finite() {
                return None;
            }
            if i >= 2 && mag <= rel_tol * abs_sum {
                let mut tail = self.truncation_bound(x, i + 2).bound * x.powf(offset + 1.0);
                if let Some(g) = divisor {
                    tail /= rho * (n + 1.0) - g;
                }
                if tail <= rel_tol * abs_sum.max(f64::MIN_POSITIVE) {
                    return Some(SeriesSum {
                        value,
                        abs_sum,
                        terms: i + 1,
                        tail,
                    });
                }
            }
        }
        None
    }

    /// Explicit majorant of `sum_{n >= n_start} |c_n| x^{-rho n - 1}` from the
    /// two-sided Stirling bounds `Gamma(1+z) <= sqrt(2 pi z) (z/e)^z e^{1/(12z)}`
    /// and `n! >= sqrt(2 pi n) (n/e)^n`.
    pub fn truncation_bound(&self, x: f64, n_start: usize) -> TruncationBound {
        let rho = self.alpha.rho();
        let lx = x.ln();
        let ln_majorant = |n: f64| {
            0.5 * rho.ln() + 1.0 / (12.0 * rho * n) + rho * n * rho.ln()
                - (1.0 - rho) * n * (n.ln() - 1.0)
                - (rho * n + 1.0) * lx
                - PI.ln()
        };
        let n_start = n_start.max(1);
        let mut bound = 0.0;
        let mut prev = f64::INFINITY;
        let mut n = n_start as f64;
        loop {
            let term = ln_majorant(n).exp();
            bound += term;
            // Terms are eventually log-concave decreasing; once the ratio drops
            // below 1/2 the remainder is bounded by the current term.
            if term < prev && term <= 0.5 * prev && term <= 1e-30 * bound.max(f64::MIN_POSITIVE) {
                bound += term;
                break;
            }
            if !term.is_finite() || n > 1e6 {
                bound = f64::INFINITY;
                break;
            }
            prev = term;
            n += 1.0;
        }
        TruncationBound { n_start, bound }
    }

    /// Density of `S_1` at `x`, with relative tolerance `tol`.
    pub fn density_at_one(&self, x: f64, tol: f64) -> Result<DensityEval> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("density needs x > 0, got {x}")));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        if x >= self.crossover {
            self.density_series(x, tol)
        } else {
            self.density_zolotarev(x, tol)
        }
    }

    /// Density of `S_t` at `x` via exact scaling of [`Self::density_at_one`].
    pub fn density(&self, t: f64, x: f64, tol: f64) -> Result<DensityEval> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        let scale = t.powf(-1.0 / self.alpha.rho());
        let at_one = self.density_at_one(x * scale, tol)?;
        Ok(DensityEval {
            value: scale * at_one.value,
            est_error: scale * at_one.est_error,
            ..at_one
        })
    }

    pub fn density_series(&self, x: f64, tol: f64) -> Result<DensityEval> {
        let s = self.series(x, -1.0, None, tol.min(1e-10) * 1e-3).ok_or_else(|| {
            Error::Nonconvergence(format!("density series at x = {x} (alpha {})", self.alpha))
        })?;
        if s.abs_sum > CANCELLATION_BUDGET * s.value.abs() {
            return Err(Error::Nonconvergence(format!(
                "cancellation amplification {:.2e} at x = {x}",
                s.abs_sum / s.value.abs()
            )));
        }
        let rounding = s.abs_sum * f64::EPSILON * s.terms as f64;
        Ok(DensityEval {
            value: s.value.max(0.0),
            method: DensityMethod::Series,
            est_error: s.tail + rounding,
        })
    }

    /// `ln A(phi)` for Kanter's function
    /// `A(phi) = (sin(rho phi)/sin phi)^{1/(1-rho)} sin((1-rho) phi) / sin(rho phi)`.
    #[inline]
    fn ln_kanter(&self, phi: f64) -> f64 {
        self.ln_kanter_floor() + self.ln_kanter_excess(phi)
    }

    /// `ln A(phi) - ln A(0+)`, written through `ln(sin z / z)` so that it stays
    /// accurate as `phi -> 0`.
    #[inline]
    fn ln_kanter_excess(&self, phi: f64) -> f64 {
        let rho = self.alpha.rho();
        let l_rho = ln_sinc(rho * phi);
        (l_rho - ln_sinc(phi)) / (1.0 - rho) + ln_sinc((1.0 - rho) * phi) - l_rho
    }

    fn ln_kanter_floor(&self) -> f64 {
        let rho = self.alpha.rho();
        (1.0 - rho).ln() + rho / (1.0 - rho) * rho.ln()
    }

    /// `A(0+) = (1 - rho) rho^{rho/(1-rho)}`, the minimum of Kanter's function.
    fn kanter_floor(&self) -> f64 {
        self.ln_kanter_floor().exp()
    }

    fn zolotarev_breaks(k: f64) -> Vec<f64> {
        let depth = (0.5 * k.max(1.0).log2() + 3.0).clamp(3.0, 40.0) as i32;
        let mut pts: Vec<f64> = (0..=depth).rev().map(|j| PI * 0.5f64.powi(j)).collect();
        pts.insert(0, 0.0);
        pts.pop();
        pts.extend([0.5 * PI, 0.75 * PI, 0.9 * PI, 0.97 * PI, PI]);
        pts.dedup();
        pts
    }

    pub fn density_zolotarev(&self, x: f64, tol: f64) -> Result<DensityEval> {
        let rho = self.alpha.rho();
        let k = x.powf(-rho / (1.0 - rho));
        let floor = self.kanter_floor();
        let breaks = Self::zolotarev_breaks(k);
        let est = try_integrate_breaks(
            |phi| {
                let excess = floor * self.ln_kanter_excess(phi).exp_m1();
                Ok((floor + excess) * (-k * excess).exp())
            },
            &breaks,
            Tolerance::new(1e-300, (0.01 * tol).max(2e-13)),
        )?;
        let ln_pref = (rho / (1.0 - rho)).ln() - x.ln() / (1.0 - rho) - k * floor - PI.ln();
        let pref = ln_pref.exp();
        Ok(DensityEval {
            value: pref * est.value,
            method: DensityMethod::Zolotarev,
            est_error: pref * est.error,
        })
    }

    /// Density by real-form Fourier inversion,
    /// `(1/pi) int_0^inf exp(-th^rho cos(pi rho/2)) cos(x th - th^rho sin(pi rho/2)) d th`.
    ///
    /// Accurate in absolute terms only; used as a cross-check.
    pub fn density_fourier(&self, x: f64, abs_tol: f64) -> Result<DensityEval> {
        let rho = self.alpha.rho();
        let c = (0.5 * PI * rho).cos();
        let s = (0.5 * PI * rho).sin();
        let theta_max = (45.0 / c).powf(1.0 / rho);
        if theta_max > 1e7 {
            return Err(Error::Quadrature(format!(
                "Fourier integrand decays too slowly for alpha = {}",
                self.alpha
            )));
        }
        let period = PI / x;
        let n_panels = ((theta_max / period).ceil() as usize).clamp(8, 20_000);
        let step = theta_max / n_panels as f64;
        let mut breaks: Vec<f64> = (0..=n_panels).map(|i| i as f64 * step).collect();
        // the integrand has an infinite derivative at 0 when rho < 1
        breaks.insert(1, 1e-6 * step);
        let est = try_integrate_breaks(
            |th| {
                let p = th.powf(rho);
                Ok((-p * c).exp() * (x * th - p * s).cos())
            },
            &breaks,
            Tolerance::new(abs_tol * PI, 0.0).with_max_panels(200_000),
        )?;
        Ok(DensityEval {
            value: est.value / PI,
            method: DensityMethod::Fourier,
            est_error: est.error / PI,
        })
    }

    /// `P(S_1 <= x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Ok(0.0);
        }
        if x >= self.crossover {
            return Ok(1.0 - self.tail_moment_series(0.0, x)?);
        }
        let rho = self.alpha.rho();
        let k = x.powf(-rho / (1.0 - rho));
        let floor = self.kanter_floor();
        let est = try_integrate_breaks(
            |phi| Ok((-k * floor * self.ln_kanter_excess(phi).exp_m1()).exp()),
            &Self::zolotarev_breaks(k),
            Tolerance::new(1e-300, 2e-13),
        )?;
        Ok((-k * floor).exp() * est.value / PI)
    }

    /// `int_x^inf u^gamma g(1, u) du` by term-wise integration of the series.
    /// Needs `gamma < rho` and `x` in the series region.
    pub fn tail_moment_series(&self, gamma_exp: f64, x: f64) -> Result<f64> {
        let rho = self.alpha.rho();
        if !(gamma_exp < rho) {
            return Err(Error::Domain(format!(
                "tail moment of order {gamma_exp} diverges for rho = {rho}"
            )));
        }
        let s = self
            .series(x, gamma_exp, Some(gamma_exp), 1e-16)
            .ok_or_else(|| Error::Nonconvergence(format!("tail series at x = {x}")))?;
        if s.abs_sum > CANCELLATION_BUDGET * s.value.abs() {
            return Err(Error::Nonconvergence(format!(
                "tail series cancellation at x = {x}"
            )));
        }
        Ok(s.value)
    }

    /// First `n_terms` terms of the term-wise integrated tail series, with a
    /// Stirling bound on the omitted ones.
    pub fn tail_moment_terms(&self, gamma_exp: f64, x: f64, n_terms: usize) -> Result<(f64, f64)> {
        let rho = self.alpha.rho();
        if !(gamma_exp < rho) {
            return Err(Error::Domain(format!(
                "tail moment of order {gamma_exp} diverges for rho = {rho}"
            )));
        }
        let n_terms = n_terms.clamp(1, MAX_SERIES_TERMS - 1);
        let lx = x.ln();
        let value = self.coef[..n_terms]
            .iter()
            .enumerate()
            .map(|(i, &(ln_c, sign))| {
                let n = (i + 1) as f64;
                sign * (ln_c + (gamma_exp - rho * n) * lx).exp() / (rho * n - gamma_exp)
            })
            .sum();
        let omitted = self.truncation_bound(x, n_terms + 1).bound * x.powf(gamma_exp + 1.0)
            / (rho * (n_terms + 1) as f64 - gamma_exp);
        Ok((value, omitted))
    }

    /// Lower cut below which `P(S_1 <= u) <= e^{-45}`.
    ///
    /// Uses `P(S_1 <= u) <= exp(-A(0+) u^{-rho/(1-rho)})`, which follows from
    /// Kanter's function being bounded below by its value at the origin.
    pub fn negligible_below(&self) -> f64 {
        let rho = self.alpha.rho();
        (self.kanter_floor() / 45.0).powf((1.0 - rho) / rho)
    }

    /// `E[S_1^gamma] = Gamma(1 - gamma/rho) / Gamma(1 - gamma)` for `gamma < rho`.
    pub fn fractional_moment(&self, gamma_exp: f64) -> Result<f64> {
        fractional_moment(self.alpha, gamma_exp)
    }

    /// `int_a^b u^gamma g(1, u) du` in the log variable, with the density
    /// evaluated branch-wise.
    pub fn moment_between(&self, gamma_exp: f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
        let lo = a.max(self.negligible_below() * 1e-3);
        if !(b > lo) {
            return Ok(0.0);
        }
        let (wl, wh) = (lo.ln(), b.ln());
        let mut breaks = vec![wl];
        let mut w = wl.floor() + 1.0;
        while w < wh {
            if w - breaks[breaks.len() - 1] > 0.25 {
                breaks.push(w);
            }
            w += 2.0;
        }
        let wc = self.crossover.ln();
        if wc > wl && wc < wh {
            breaks.push(wc);
        }
        breaks.push(wh);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
        let est = try_integrate_breaks(
            |w| {
                let u = w.exp();
                let g = self.density_at_one(u, 1e-12)?.value;
                Ok(g * u.powf(gamma_exp + 1.0))
            },
            &breaks,
            Tolerance::new(0.0, rel_tol),
        )?;
        Ok(est.value)
    }

    /// `E[S_1^{k/2}; S_1 < cutoff]`.
    pub fn truncated_moment(&self, k: u32, cutoff: f64) -> Result<f64> {
        if k < 1 {
            return Err(Error::Domain("truncated moment order k must be >= 1".into()));
        }
        if !(cutoff > 0.0) {
            return Err(Error::Domain(format!("cutoff must be positive, got {cutoff}")));
        }
        self.moment_between(0.5 * k as f64, 0.0, cutoff, 1e-10)
    }

    /// `int_cutoff^inf s^{1/2} g(1, s) ds` for `alpha` in (1, 2).
    pub fn tail_half_moment(&self, cutoff: f64) -> Result<f64> {
        if self.alpha.value() <= 1.0 {
            return Err(Error::Domain(format!(
                "half moment is infinite for alpha = {}",
                self.alpha
            )));
        }
        if !(cutoff >= 0.0) {
            return Err(Error::Domain(format!("cutoff must be >= 0, got {cutoff}")));
        }
        let split = cutoff.max(self.crossover);
        let head = if cutoff < split {
            self.moment_between(0.5, cutoff, split, 1e-12)?
        } else {
            0.0
        };
        Ok(head + self.tail_moment_series(0.5, split)?)
    }

    /// Certified constant `C` with `g(t, x) <= C (t^{-2/alpha} ^ t x^{-1-alpha/2})`.
    ///
    /// Both sides scale identically, so the ratio depends on `y = x t^{-2/alpha}`
    /// only; it is scanned on a log grid of `y` and inflated by 5%.
    pub fn envelope_constant(&self) -> f64 {
        *self.envelope.get_or_init(|| {
            let rho = self.alpha.rho();
            let mut sup = tail_density_constant(self.alpha);
            let (lo, hi) = (self.negligible_below().ln(), 40.0_f64);
            let n = 1200;
            for i in 0..=n {
                let y = (lo + (hi - lo) * i as f64 / n as f64).exp();
                if let Ok(d) = self.density_at_one(y, 1e-8) {
                    let shape = 1.0_f64.min(y.powf(-1.0 - rho));
                    sup = sup.max(d.value / shape);
                }
            }
            ENVELOPE_SAFETY * sup
        })
    }

    pub fn density_upper_envelope(&self, t: f64, x: f64) -> f64 {
        let rho = self.alpha.rho();
        self.envelope_constant() * t.powf(-1.0 / rho).min(t * x.powf(-1.0 - rho))
    }

    /// One draw of `S_1` by Kanter's representation
    /// `S_1 = (A(U) / E)^{(1-rho)/rho}`, `U ~ Unif(0, pi)`, `E ~ Exp(1)`.
    pub fn sample_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let rho = self.alpha.rho();
        let phi = loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                break PI * u;
            }
        };
        let e: f64 = Exp1.sample(rng);
        (((1.0 - rho) / rho) * (self.ln_kanter(phi) - e.ln())).exp()
    }

    /// `sqrt(S_1)` from the same two variates as [`Self::sample_unit`], in the
    /// cheaper form `sqrt(sin rho phi) (sin((1-rho) phi) / E)^{(1-rho)/(2 rho)}
    /// (sin phi)^{-1/(2 rho)}`. Used for the inner loop of path simulation.
    #[inline]
    pub fn sample_unit_sqrt<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let rho = self.alpha.rho();
        let phi = loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                break PI * u;
            }
        };
        let e: f64 = Exp1.sample(rng);
        let (s1, c1) = phi.sin_cos();
        let (sr, cr) = (rho * phi).sin_cos();
        let s_rest = s1 * cr - c1 * sr;
        let c = (1.0 - rho) / (2.0 * rho);
        sr.sqrt() * (c * (s_rest / e).ln() - s1.ln() / (2.0 * rho)).exp()
    }

    /// One draw of `S_t = t^{2/alpha} S_1`.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        t.powf(1.0 / self.alpha.rho()) * self.sample_unit(rng)
    }
}

/// `ln(sin z / z)` for `z` in `[0, pi)`.
#[inline]
fn ln_sinc(z: f64) -> f64 {
    if z < 0.1 {
        let z2 = z * z;
        // sin z / z - 1
        let m = -z2 / 6.0
            * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0 * (1.0 - z2 / 110.0))));
        m.ln_1p()
    } else if z > 0.5 * PI {
        ((PI - z).sin() / z).ln()
    } else {
        (z.sin() / z).ln()
    }
}

/// `E[S_1^gamma] = Gamma(1 - 2 gamma / alpha) / Gamma(1 - gamma)`, `gamma < alpha/2`.
pub fn fractional_moment(alpha: Alpha, gamma_exp: f64) -> Result<f64> {
    if !(gamma_exp < alpha.rho()) {
        return Err(Error::Domain(format!(
            "moment of order {gamma_exp} is infinite for alpha = {alpha}"
        )));
    }
    Ok(gamma(1.0 - gamma_exp / alpha.rho())? / gamma(1.0 - gamma_exp)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Closed form of the 1/2-stable density, independent of the code above.
    fn levy(x: f64) -> f64 {
        (-0.25 / x).exp() / (2.0 * PI.sqrt() * x.powf(1.5))
    }

    fn sub(a: f64) -> StableSubordinator {
        StableSubordinator::new(Alpha::new(a).unwrap())
    }

    #[test]
    fn levy_examples() {
        let s = sub(1.0);
        let d = s.density_at_one(1.0, 1e-10).unwrap();
        assert!(((d.value - 0.219_695_644_733_861) / d.value).abs() < 1e-10);
        let d = s.density_at_one(0.04, 1e-10).unwrap();
        assert_eq!(d.method, DensityMethod::Zolotarev);
        assert!(((d.value - levy(0.04)) / levy(0.04)).abs() < 1e-10);
        assert!((d.value - 0.068_0).abs() < 1e-3);
        let d = s.density(4.0, 1.0, 1e-10).unwrap();
        assert!(((d.value - 0.0625 * levy(0.0625)) / d.value).abs() < 1e-10);
    }

    #[test]
    fn square_root_draw_matches_kanter() {
        for a in [0.3, 1.0, 1.5, 1.95] {
            let s = sub(a);
            let mut r1 = ChaCha8Rng::seed_from_u64(8);
            let mut r2 = ChaCha8Rng::seed_from_u64(8);
            for _ in 0..2000 {
                let full = s.sample_unit(&mut r1);
                let root = s.sample_unit_sqrt(&mut r2);
                assert!((root * root - full).abs() <= 1e-11 * full, "alpha {a}: {full} {root}");
            }
        }
    }

    #[test]
    fn t_one_is_bit_identical() {
        let s = sub(1.3);
        for x in [0.2, 1.0, 7.5] {
            assert_eq!(s.density(1.0, x, 1e-9).unwrap(), s.density_at_one(x, 1e-9).unwrap());
        }
    }

    #[test]
    fn branches_overlap_near_crossover() {
        for i in 0..20 {
            let a = 0.1 + 0.09 * i as f64;
            let s = sub(a);
            let xs = s.crossover();
            for f in [0.5, 0.8, 1.0, 1.3, 2.0] {
                let x = xs * f;
                let z = s.density_zolotarev(x, 1e-12).unwrap().value;
                if let Ok(sr) = s.density_series(x, 1e-12) {
                    assert!(
                        ((z - sr.value) / z).abs() < 1e-8,
                        "alpha {a} x {x} zolotarev {z} series {}",
                        sr.value
                    );
                } else {
                    assert!(f < 1.0, "series must work above x* (alpha {a}, x {x})");
                }
            }
        }
    }

    #[test]
    fn fourier_agrees_in_moderate_range() {
        for a in [0.6, 1.0, 1.5] {
            let s = sub(a);
            for x in [0.3, 1.0, 3.0] {
                let f = s.density_fourier(x, 1e-12).unwrap().value;
                let d = s.density_at_one(x, 1e-12).unwrap().value;
                assert!((f - d).abs() < 1e-9, "alpha {a} x {x}: {f} vs {d}");
            }
        }
    }

    #[test]
    fn truncation_bound_is_decreasing_and_dominates() {
        let s = sub(1.2);
        let x = 3.0;
        let mut prev = f64::INFINITY;
        for n in 1..30 {
            let b = s.truncation_bound(x, n).bound;
            assert!(b < prev);
            prev = b;
        }
        // each |c_n| x^{-rho n - 1} below the majorant summed from n
        for (i, &(ln_c, sign)) in s.coef.iter().take(40).enumerate() {
            let n = i + 1;
            if sign != 0.0 {
                let term = (ln_c - (0.6 * n as f64 + 1.0) * x.ln()).exp();
                assert!(term <= s.truncation_bound(x, n).bound);
            }
        }
    }

    #[test]
    fn fractional_moment_examples() {
        let a = Alpha::new(1.5).unwrap();
        assert_eq!(fractional_moment(a, 0.0).unwrap(), 1.0);
        let m = fractional_moment(a, 0.5).unwrap();
        assert!((m - 1.511_429_216_246_800_6).abs() < 1e-12);
        assert!(fractional_moment(a, 0.75).is_err());
        let s = sub(1.2);
        let q = s.moment_between(0.3, 0.0, s.crossover(), 1e-12).unwrap()
            + s.tail_moment_series(0.3, s.crossover()).unwrap();
        let exact = s.fractional_moment(0.3).unwrap();
        assert!((q - exact).abs() < 1e-6);
    }

    #[test]
    fn tail_half_moment_properties() {
        let s = sub(1.5);
        let full = s.tail_half_moment(0.0).unwrap();
        assert!((full - s.fractional_moment(0.5).unwrap()).abs() < 1e-9);
        let mut prev = full;
        for c in [0.5, 1.0, 5.0, 50.0, 1e4] {
            let v = s.tail_half_moment(c).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(sub(1.0).tail_half_moment(1.0).is_err());
    }

    #[test]
    fn truncated_moment_approaches_full_moment() {
        let s = sub(1.6);
        let full = s.fractional_moment(0.5).unwrap();
        let mut prev = 0.0;
        for c in [1.0, 1e3, 1e6, 1e12] {
            let near = s.truncated_moment(1, c).unwrap();
            assert!(near > prev && near < full);
            let split = near + s.tail_half_moment(c).unwrap();
            assert!((split - full).abs() < 1e-9 * full, "cutoff {c}: {split} vs {full}");
            prev = near;
        }
    }

    #[test]
    fn errors() {
        let s = sub(0.7);
        assert!(s.density_at_one(0.0, 1e-8).is_err());
        assert!(s.density_at_one(1.0, 0.0).is_err());
        assert!(s.density(-1.0, 1.0, 1e-8).is_err());
        assert!(s.truncated_moment(0, 1.0).is_err());
    }

    #[test]
    fn cdf_matches_levy_closed_form() {
        let s = sub(1.0);
        // P(S_1 <= 1) = erfc(1/2) for the 1/2-stable law
        let p = s.cdf(1.0).unwrap();
        assert!((p - 0.479_500_122_186_953_5).abs() < 1e-12, "{p}");
        let p = s.cdf(200.0).unwrap();
        assert!((p - libm::erfc(0.5 / 200f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn sample_scaling_is_exact() {
        let s = sub(1.4);
        for t in [0.01, 0.5, 3.0] {
            let mut r1 = ChaCha8Rng::seed_from_u64(9);
            let mut r2 = ChaCha8Rng::seed_from_u64(9);
            for _ in 0..100 {
                let st = s.sample(t, &mut r1);
                let s1 = s.sample_unit(&mut r2);
                assert_eq!(st, t.powf(1.0 / 0.7) * s1);
            }
        }
    }
}
