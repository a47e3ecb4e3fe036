//! Browser bindings: subordinator density, heat content curves and the
//! small-time constants.
//!
//! Each export is a thin wrapper over a plain function so the numerics can be
//! tested on the host.

use shc_core::asymptotics::{ball_third_term_bracket, f_alpha, geometric_grid, second_term_constant, third_term_constant};
use shc_core::{q2, Alpha, Domain, QuadratureSpec, Regime, StableSubordinator, Subordination};
use wasm_bindgen::prelude::*;

/// Abscissae with one or more value columns.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Series {
    xs: Vec<f64>,
    columns: Vec<Vec<f64>>,
}

#[wasm_bindgen]
impl Series {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.columns.get(i).cloned().unwrap_or_default()
    }

    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.columns.len()
    }
}

#[wasm_bindgen]
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    pub volume: f64,
    pub perimeter: f64,
    pub sqrt_coefficient: f64,
    /// Second-term constant of the two-term law.
    pub second_term: f64,
    /// Third-term constant; NaN outside `1 < alpha < 2`.
    pub third_term: f64,
    pub third_term_exact: f64,
    /// Ball bracket for the third-term constant; NaN for intervals.
    pub bracket_low: f64,
    pub bracket_high: f64,
}

fn parse(domain: &str, alpha: f64) -> Result<(Domain, Alpha), String> {
    let d: Domain = domain.parse().map_err(|e: shc_core::Error| e.to_string())?;
    let a = Alpha::new(alpha).map_err(|e| e.to_string())?;
    Ok((d, a))
}

/// `g(t, x)` on a logarithmic grid of `x`.
pub fn density_series_impl(alpha: f64, t: f64, x_min: f64, x_max: f64, points: usize) -> Result<Series, String> {
    let a = Alpha::new(alpha).map_err(|e| e.to_string())?;
    if !(x_min > 0.0 && x_max > x_min) || !(2..=5000).contains(&points) {
        return Err("need 0 < x_min < x_max and 2..=5000 points".into());
    }
    let sub = StableSubordinator::new(a);
    let step = (x_max / x_min).ln() / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| x_min * (step * i as f64).exp()).collect();
    let ys = xs
        .iter()
        .map(|&x| sub.density(t, x, 1e-10).map(|e| e.value).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Series { xs, columns: vec![ys] })
}

/// Columns: `Q2(t)`, `Q̃(t)` and `(|D| - Q̃(t)) / f_alpha(t)`.
pub fn heat_curves_impl(domain: &str, alpha: f64, t_max: f64, t_min: f64, points: usize) -> Result<Series, String> {
    let (d, a) = parse(domain, alpha)?;
    if points > 400 {
        return Err("at most 400 points".into());
    }
    let ts = geometric_grid(t_max, t_min, points).map_err(|e| e.to_string())?;
    let model = Subordination::new(d, a);
    let spec = QuadratureSpec::default();
    let mut cols = vec![Vec::new(), Vec::new(), Vec::new()];
    for &t in &ts {
        cols[0].push(q2(&d, t).map_err(|e| e.to_string())?);
        let deficit = model.q_tilde_deficit(t, &spec).map_err(|e| e.to_string())?;
        cols[1].push(model.q_tilde(t, &spec).map_err(|e| e.to_string())?);
        // the scaling function needs t < 1 when alpha = 1
        cols[2].push(f_alpha(a, t).map_or(f64::NAN, |f| deficit / f));
    }
    Ok(Series { xs: ts, columns: cols })
}

pub fn constants_impl(domain: &str, alpha: f64) -> Result<Constants, String> {
    let (d, a) = parse(domain, alpha)?;
    let second_term = second_term_constant(&d, a).map_err(|e| e.to_string())?;
    let (third_term, third_term_exact) = if a.regime() == Regime::Supercritical {
        let c = third_term_constant(&d, a).map_err(|e| e.to_string())?;
        (c.stated, c.exact)
    } else {
        (f64::NAN, f64::NAN)
    };
    let (bracket_low, bracket_high) = if a.regime() == Regime::Supercritical {
        ball_third_term_bracket(&d, a).unwrap_or((f64::NAN, f64::NAN))
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(Constants {
        volume: d.volume(),
        perimeter: d.perimeter(),
        sqrt_coefficient: d.sqrt_coefficient(),
        second_term,
        third_term,
        third_term_exact,
        bracket_low,
        bracket_high,
    })
}

#[wasm_bindgen]
pub fn density_series(alpha: f64, t: f64, x_min: f64, x_max: f64, points: usize) -> Result<Series, JsError> {
    density_series_impl(alpha, t, x_min, x_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn heat_curves(domain: &str, alpha: f64, t_max: f64, t_min: f64, points: usize) -> Result<Series, JsError> {
    heat_curves_impl(domain, alpha, t_max, t_min, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn constants(domain: &str, alpha: f64) -> Result<Constants, JsError> {
    constants_impl(domain, alpha).map_err(|e| JsError::new(&e))
}
