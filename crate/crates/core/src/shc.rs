//! Heat content of subordinate killed Brownian motion, `Q̃_D^{(alpha)}(t)`,
//! and Monte Carlo estimators for it and for the killed subordinate process.
//!
//! The quadrature route integrates the Brownian quantity against the law of
//! the subordinator,
//!
//! `|D| - Q̃(t) = int_0^inf (|D| - Q2(s u)) g(1, u) du`, `s = t^{2/alpha}`,
//!
//! in the variable `ln u`. Beyond `U` with `s U` past the Brownian saturation
//! time the Brownian factor is `|D|` (or `k sqrt(v) - |D|` for the remainder)
//! to double precision, and the `u`-integral is closed with the term-wise
//! integrated density series.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::heat_brownian::{q2, q2_deficit, q2_remainder, survival_at, uniform_coordinate, Domain};
use crate::mc::{estimate, estimate_mean, McConfig, McEstimate};
use crate::quadrature::{try_integrate_breaks, Tolerance};
use crate::subordinator::StableSubordinator;

/// `Q2(v) <= |D| e^{-lambda_1 v}`; beyond `SATURATION / lambda_1` the
/// Brownian heat content is below `1e-18 |D|`.
const SATURATION: f64 = 41.5;

/// Settings of the subordination quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Extra break points in the subordinator variable `u`.
    pub split_points: Vec<f64>,
    /// Number of density-series terms kept in the tail closure; `0` sums the
    /// series to convergence.
    pub tail_order: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-30,
            split_points: Vec::new(),
            tail_order: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.split_points.iter().any(|&p| !(p > 0.0))
            || self.split_points.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Domain("split points must be positive and increasing".into()));
        }
        Ok(())
    }
}

/// A domain paired with the subordinator of index `alpha / 2`.
#[derive(Debug, Clone)]
pub struct Subordination {
    domain: Domain,
    sub: StableSubordinator,
}

/// Which Brownian quantity is integrated against the subordinator.
#[derive(Clone, Copy)]
enum Integrand {
    Content,
    Deficit,
    Remainder,
}

impl Subordination {
    pub fn new(domain: Domain, alpha: Alpha) -> Self {
        Subordination {
            domain,
            sub: StableSubordinator::new(alpha),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn alpha(&self) -> Alpha {
        self.sub.alpha()
    }

    pub fn subordinator(&self) -> &StableSubordinator {
        &self.sub
    }

    /// `(int_U^inf u^gamma g(1,u) du, bound on omitted terms)` with the
    /// requested number of series terms.
    fn tail(&self, gamma_exp: f64, u: f64, order: u32) -> Result<(f64, f64)> {
        if order == 0 {
            Ok((self.sub.tail_moment_series(gamma_exp, u)?, 0.0))
        } else {
            self.sub.tail_moment_terms(gamma_exp, u, order as usize)
        }
    }

    /// `int_{from}^{to} F(s u) g(1, u) du` with `to = None` meaning infinity.
    fn integrate(
        &self,
        which: Integrand,
        t: f64,
        from: f64,
        to: Option<f64>,
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        spec.validate()?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        let d = &self.domain;
        let vol = d.volume();
        let k = d.sqrt_coefficient();
        let rho = self.sub.alpha().rho();
        let s = t.powf(1.0 / rho);
        let lambda1 = (std::f64::consts::PI / d.length_scale()).powi(2);
        let u_lo = (self.sub.negligible_below() * 1e-3).max(from);

        // Tail start: Brownian factor saturated, density in the series region,
        // and, for a truncated tail, omitted terms below abs_tol.
        let saturation = match which {
            // e^{-745} underflows: nothing is dropped relative to Q̃ itself
            Integrand::Content => 745.0,
            _ => SATURATION,
        };
        let mut u_hi = (saturation / lambda1 / s).max(self.sub.crossover()).max(u_lo * 10.0);
        if let Some(to) = to {
            u_hi = to;
        }
        if !(u_hi > u_lo) {
            return Ok(0.0);
        }
        let closing = |u: f64| -> Result<(f64, f64)> {
            let (t0, e0) = self.tail(0.0, u, spec.tail_order)?;
            match which {
                Integrand::Content => Ok((0.0, 0.0)),
                Integrand::Deficit => Ok((vol * t0, vol * e0)),
                Integrand::Remainder => {
                    let (th, eh) = self.tail(0.5, u, spec.tail_order)?;
                    Ok((k * s.sqrt() * th - vol * t0, k * s.sqrt() * eh + vol * e0))
                }
            }
        };
        let mut tail = if to.is_some() { (0.0, 0.0) } else { closing(u_hi)? };
        while to.is_none() && tail.1 > spec.abs_tol {
            u_hi *= 2.0;
            if u_hi > 1e300 {
                return Err(Error::ToleranceNotMet(format!(
                    "tail closure of order {} cannot reach abs_tol {}",
                    spec.tail_order, spec.abs_tol
                )));
            }
            tail = closing(u_hi)?;
        }

        let (wl, wh) = (u_lo.ln(), u_hi.ln());
        let mut breaks = vec![wl, wh];
        let mut w = wl.ceil();
        while w < wh {
            breaks.push(w);
            w += 2.0;
        }
        let mut marks = vec![
            self.sub.crossover(),
            0.1 * d.length_scale().powi(2) / s,
            1.0 / (lambda1 * s),
        ];
        marks.extend(spec.split_points.iter().copied());
        breaks.extend(marks.iter().filter(|&&u| u > u_lo && u < u_hi).map(|u| u.ln()));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-6);

        let inner = |v: f64| -> Result<f64> {
            match which {
                Integrand::Content => q2(d, v),
                Integrand::Deficit => q2_deficit(d, v),
                Integrand::Remainder => q2_remainder(d, v),
            }
        };
        // The direct content is only used where it is small; keep it relative.
        let abs_tol = match which {
            Integrand::Content => 1e-300,
            _ => spec.abs_tol,
        };
        let est = try_integrate_breaks(
            |w| {
                let u = w.exp();
                let g = self.sub.density_at_one(u, 1e-12)?.value;
                Ok(inner(s * u)? * g * u)
            },
            &breaks,
            Tolerance::new(abs_tol, spec.rel_tol).with_max_panels(20_000),
        )
        .map_err(|e| {
            Error::ToleranceNotMet(format!(
                "subordination integral at t = {t}, alpha = {}: {e}",
                self.sub.alpha()
            ))
        })?;
        Ok(est.value + tail.0)
    }

    /// `|D| - Q̃(t)`.
    pub fn q_tilde_deficit(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        self.integrate(Integrand::Deficit, t, 0.0, None, spec)
    }

    /// `Q̃(t)`; integrated directly once the deficit exceeds `|D| / 2`, so
    /// that large-time values keep their relative accuracy.
    pub fn q_tilde(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let vol = self.domain.volume();
        let deficit = self.q_tilde_deficit(t, spec)?;
        if deficit <= 0.5 * vol {
            Ok(vol - deficit)
        } else {
            self.integrate(Integrand::Content, t, 0.0, None, spec)
        }
    }

    /// `Q̃(t) - (|D| - c t^{1/alpha})` with `c = (2|∂D|/sqrt(pi)) E[S_1^{1/2}]`,
    /// computed directly from the Brownian remainder; needs `alpha > 1`.
    pub fn q_tilde_third_term(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        if self.alpha().value() <= 1.0 {
            return Err(Error::Domain(format!(
                "third-order term needs alpha > 1, got {}",
                self.alpha()
            )));
        }
        self.integrate(Integrand::Remainder, t, 0.0, None, spec)
    }

    /// `int_0^{t^{-2/alpha}} R(t^{2/alpha} u) g(1, u) du`, the part of the
    /// third-order term coming from Brownian times below one, where `R` is
    /// the Brownian remainder [`q2_remainder`].
    pub fn near_remainder(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let cut = t.powf(-1.0 / self.alpha().rho());
        self.integrate(Integrand::Remainder, t, 0.0, Some(cut), spec)
    }

    /// `int_{t^{-2/alpha}}^inf (|D| - Q2(t^{2/alpha} u)) g(1, u) du`.
    pub fn far_deficit(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let cut = t.powf(-1.0 / self.alpha().rho());
        self.integrate(Integrand::Deficit, t, cut, None, spec)
    }

    /// Monte Carlo estimate of `Q̃(t) = int_D P_x(tau > S_t) dx`.
    ///
    /// Each sample draws `x`, `S_t` and a uniform `U`; the event
    /// `{U < P_x(tau > S_t)}` is the event `{tau > S_t}` for the exit time
    /// obtained by inverting the survival function at `U`.
    pub fn q_tilde_mc(&self, t: f64, cfg: &McConfig) -> McEstimate {
        let d = self.domain;
        let vol = d.volume();
        estimate_mean(cfg, |rng| {
            let coord = uniform_coordinate(&d, rng);
            let s = self.sub.sample(t, rng);
            let u: f64 = rng.gen();
            if u < survival_at(&d, coord, s) {
                vol
            } else {
                0.0
            }
        })
    }

    /// Symmetric `alpha`-stable increment over a step of length `dt`:
    /// a Brownian increment of variance `2 dS` at a subordinator increment
    /// `dS = scale S_1`, with `root_2scale = sqrt(2 scale)`.
    #[inline]
    fn stable_step(&self, root_2scale: f64, rng: &mut ChaCha8Rng) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        root_2scale * self.sub.sample_unit_sqrt(rng) * z
    }

    /// Monte Carlo heat content of the killed subordinate process
    /// `Q^{(alpha)}(t)`, monitored on `n_grid / 4`, `n_grid / 2` and `n_grid`
    /// equal steps of one simulated path.
    pub fn q_alpha_mc(&self, t: f64, n_grid: usize, cfg: &McConfig) -> Result<MonitoredEstimate> {
        let (a, b) = match self.domain {
            Domain::Interval { a, b } => (a, b),
            _ => {
                return Err(Error::UnsupportedDomain(
                    "killed subordinate simulation is implemented for intervals".into(),
                ))
            }
        };
        let alpha = self.alpha().value();
        if !(1.0..2.0).contains(&alpha) {
            return Err(Error::Domain(format!("q_alpha_mc needs alpha in [1, 2), got {alpha}")));
        }
        check_grid(n_grid)?;
        let vol = b - a;
        let scale = (2.0 * (t / n_grid as f64).powf(1.0 / self.alpha().rho())).sqrt();
        let est = estimate(cfg, 3, |rng, out| {
            let mut x = a + vol * rng.gen::<f64>();
            let mut alive = [true; 3];
            for j in 1..=n_grid {
                x += self.stable_step(scale, rng);
                if x <= a || x >= b {
                    alive[2] = false;
                    if j % 2 == 0 {
                        alive[1] = false;
                    }
                    if j % 4 == 0 {
                        alive[0] = false;
                        break;
                    }
                }
            }
            for (o, l) in out.iter_mut().zip(alive) {
                *o = if l { vol } else { 0.0 };
            }
        });
        Ok(MonitoredEstimate::new(n_grid, est))
    }
}

fn check_grid(n_grid: usize) -> Result<()> {
    if n_grid < 4 || n_grid % 4 != 0 {
        return Err(Error::Domain(format!(
            "n_grid must be a positive multiple of 4, got {n_grid}"
        )));
    }
    Ok(())
}

/// Estimates on three nested monitoring grids with their refinement trend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitoredEstimate {
    /// Grid sizes `n/4, n/2, n`.
    pub grids: [usize; 3],
    pub estimates: [McEstimate; 3],
    /// Successive differences `est(n/2) - est(n/4)` and `est(n) - est(n/2)`.
    pub trend: [f64; 2],
    /// Aitken-extrapolated continuum value when the differences shrink
    /// geometrically, else the finest estimate.
    pub extrapolated: f64,
}

impl MonitoredEstimate {
    fn new(n: usize, est: Vec<McEstimate>) -> Self {
        let e = [est[0], est[1], est[2]];
        let d1 = e[1].mean - e[0].mean;
        let d2 = e[2].mean - e[1].mean;
        let extrapolated = if d1 != 0.0 && d2 / d1 > 0.0 && d2 / d1 < 1.0 {
            e[2].mean + d2 * (d2 / d1) / (1.0 - d2 / d1)
        } else {
            e[2].mean
        };
        MonitoredEstimate {
            grids: [n / 4, n / 2, n],
            estimates: e,
            trend: [d1, d2],
            extrapolated,
        }
    }

    pub fn finest(&self) -> McEstimate {
        self.estimates[2]
    }
}

/// Grid-maximum estimate of `E[sup_{s<=1} X_s]` for the symmetric
/// `alpha`-stable process, on grids of `n_grid / 4`, `n_grid / 2`, `n_grid`
/// steps of one path.
pub fn sup_stable_mc(alpha: Alpha, cfg: &McConfig, n_grid: usize) -> Result<MonitoredEstimate> {
    if alpha.value() <= 1.0 {
        return Err(Error::Domain(format!(
            "E[sup X_1] is infinite for alpha = {alpha}"
        )));
    }
    check_grid(n_grid)?;
    let model = Subordination::new(Domain::unit_interval(), alpha);
    let scale = (2.0 * (1.0 / n_grid as f64).powf(1.0 / alpha.rho())).sqrt();
    let est = estimate(cfg, 3, |rng, out| {
        let mut x = 0.0f64;
        let mut max = [0.0f64; 3];
        for j in 1..=n_grid {
            x += model.stable_step(scale, rng);
            if x > max[2] {
                max[2] = x;
                if j % 2 == 0 {
                    max[1] = x;
                }
                if j % 4 == 0 {
                    max[0] = x;
                }
            } else {
                if j % 2 == 0 && x > max[1] {
                    max[1] = x;
                }
                if j % 4 == 0 && x > max[0] {
                    max[0] = x;
                }
            }
        }
        out.copy_from_slice(&max);
    });
    Ok(MonitoredEstimate::new(n_grid, est))
}

/// `Q̃_D^{(alpha)}(t)`.
pub fn q_tilde(domain: &Domain, alpha: Alpha, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    Subordination::new(*domain, alpha).q_tilde(t, spec)
}

/// Monte Carlo estimate of `Q̃_D^{(alpha)}(t)`.
pub fn q_tilde_mc(domain: &Domain, alpha: Alpha, t: f64, cfg: &McConfig) -> McEstimate {
    Subordination::new(*domain, alpha).q_tilde_mc(t, cfg)
}

/// Monte Carlo estimate of `Q_D^{(alpha)}(t)` with discrete monitoring.
pub fn q_alpha_mc(
    domain: &Domain,
    alpha: Alpha,
    t: f64,
    n_grid: usize,
    cfg: &McConfig,
) -> Result<MonitoredEstimate> {
    Subordination::new(*domain, alpha).q_alpha_mc(t, n_grid, cfg)
}
