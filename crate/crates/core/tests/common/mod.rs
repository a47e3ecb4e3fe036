#![allow(dead_code)]

use shc_core::quadrature::{integrate_breaks, Tolerance};
use shc_core::specfun::gamma;
use shc_core::{Alpha, StableSubordinator};

pub fn alpha(a: f64) -> Alpha {
    Alpha::new(a).unwrap()
}

/// 1/2-stable density with Laplace transform `exp(-sqrt(lambda))`.
pub fn levy_density(x: f64) -> f64 {
    (-0.25 / x).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(1.5))
}

/// `int_0^inf w(x) g(1, x) dx`, integrating the density in `ln x` on
/// `[1e-6 * floor, x_max]` and adding `tail(x_max)` by hand.
pub fn density_integral(
    sub: &StableSubordinator,
    w: impl Fn(f64) -> f64,
    x_max: f64,
    tail: f64,
) -> f64 {
    let lo = (sub.negligible_below() * 1e-6).ln();
    let hi = x_max.ln();
    let mut pts = vec![lo];
    let mut k = lo.ceil();
    while k < hi {
        if k - pts[pts.len() - 1] > 0.1 {
            pts.push(k);
        }
        k += 1.0;
    }
    pts.push(hi);
    integrate_breaks(
        |v| {
            let x = v.exp();
            w(x) * sub.density_at_one(x, 1e-13).unwrap().value * x
        },
        &pts,
        Tolerance::new(1e-300, 1e-12).with_max_panels(50_000),
    )
    .unwrap()
    .value
        + tail
}

/// `int_X^inf x^gamma g(1, x) dx` summed from the asymptotic series with
/// coefficients built here from the Gamma function.
pub fn series_tail(alpha: Alpha, gamma_exp: f64, x: f64) -> f64 {
    let rho = alpha.rho();
    let mut sum = 0.0;
    let mut fact = 1.0;
    for n in 1..60 {
        let nf = n as f64;
        fact *= nf;
        let arg = 1.0 + rho * nf;
        if arg > 170.0 {
            break;
        }
        let c = (-1f64).powi(n + 1) * gamma(arg).unwrap() * (std::f64::consts::PI * rho * nf).sin()
            / (std::f64::consts::PI * fact);
        let term = c * x.powf(gamma_exp - rho * nf) / (rho * nf - gamma_exp);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}
