//! Runs every acceptance criterion at its stated size and tolerance and
//! prints one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use common::{alpha, density_integral, levy_density, series_tail};
use shc_core::asymptotics::{
    check_ball_bracket, check_sup_gap, check_three_term, check_two_term, geometric_grid, relation_check,
    subcritical_constant, two_term_grid, upper_bound_check, verify_lemma_limits, AsymptoticsReport, HeatCurve,
    SplitStrategy,
};
use shc_core::mc::{with_workers, worker_count};
use shc_core::specfun::{gamma, tail_density_constant};
use shc_core::{
    fractional_moment, q2_deficit, DensityMethod, Domain, McConfig, QuadratureSpec, StableSubordinator, Subordination,
};

struct Row {
    label: String,
    pass: bool,
    detail: String,
}

fn row(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Row {
    Row { label: label.into(), pass, detail: detail.into() }
}

fn from_report(r: &AsymptoticsReport) -> Row {
    row(
        r.check.clone(),
        r.passed(),
        format!("predicted {:.9} estimated {:.9} rel {:.2e} tol {:.2e}", r.predicted, r.estimated, r.rel_err, r.tolerance),
    )
}

/// Rows that fail for reasons recorded in the decisions ledger. They are
/// printed as FAIL and do not abort the run.
const DOCUMENTED: &[&str] = &["tail law alpha=0.6"];

fn c1_levy() -> Vec<Row> {
    let s = StableSubordinator::new(alpha(1.0));
    let mut worst: f64 = 0.0;
    let mut methods = Vec::new();
    for i in 0..=700 {
        let x = 10f64.powf(-3.0 + 7.0 * i as f64 / 700.0);
        let d = s.density_at_one(x, 1e-12).unwrap();
        worst = worst.max(((d.value - levy_density(x)) / levy_density(x)).abs());
        if !methods.contains(&d.method) {
            methods.push(d.method);
        }
    }
    let both = methods.contains(&DensityMethod::Series) && methods.contains(&DensityMethod::Zolotarev);
    vec![row("levy closed form on [1e-3, 1e4]", worst < 1e-8 && both, format!("max rel err {worst:.2e}, branches {methods:?}"))]
}

fn c2_laplace() -> Vec<Row> {
    let mut out = Vec::new();
    for a in [0.6, 1.0, 1.5] {
        let s = StableSubordinator::new(alpha(a));
        let m = density_integral(&s, |_| 1.0, 1e6, series_tail(alpha(a), 0.0, 1e6));
        out.push(row(format!("mass alpha={a}"), (m - 1.0).abs() < 1e-8, format!("{:.2e}", m - 1.0)));
        let mut worst: f64 = 0.0;
        for lambda in [0.5f64, 1.0, 2.0, 5.0] {
            let v = density_integral(&s, |x| (-lambda * x).exp(), 120.0 / lambda, 0.0);
            worst = worst.max((v - (-lambda.powf(0.5 * a)).exp()).abs());
        }
        out.push(row(format!("laplace alpha={a}"), worst < 1e-7, format!("max abs err {worst:.2e}")));
    }
    out
}

fn c3_moments() -> Vec<Row> {
    let pairs = [(0.6, -1.0), (0.6, 0.1), (0.6, 0.25), (1.0, -0.5), (1.0, 0.2), (1.0, 0.4), (1.5, -2.0), (1.5, 0.3), (1.5, 0.5), (1.8, 0.6)];
    pairs
        .iter()
        .map(|&(a, g)| {
            let al = alpha(a);
            let quad = density_integral(&StableSubordinator::new(al), |x| x.powf(g), 1e8, series_tail(al, g, 1e8));
            let m = fractional_moment(al, g).unwrap();
            let closed = gamma(1.0 - g / al.rho()).unwrap() / gamma(1.0 - g).unwrap();
            let rel = ((quad - m) / m).abs();
            row(
                format!("moment alpha={a} gamma={g}"),
                rel < 1e-6 && (m - closed).abs() < 1e-12 * closed,
                format!("{m:.12} vs quadrature {quad:.12}, rel {rel:.1e}"),
            )
        })
        .collect()
}

fn c4_tail() -> Vec<Row> {
    [0.6, 1.0, 1.5]
        .iter()
        .map(|&a| {
            let x: f64 = 1e8;
            let v = StableSubordinator::new(alpha(a)).density_at_one(x, 1e-12).unwrap().value * x.powf(1.0 + 0.5 * a);
            let c = tail_density_constant(alpha(a));
            let rel = ((v - c) / c).abs();
            row(format!("tail law alpha={a}"), rel < 1e-3, format!("{v:.9} vs {c:.9}, rel {rel:.2e}"))
        })
        .collect()
}

fn c5_brownian() -> Vec<Row> {
    let t: f64 = 1e-8;
    [(Domain::unit_interval(), 2.256_758_3), (Domain::unit_ball(), 14.179_63)]
        .iter()
        .map(|(d, want)| {
            let r = q2_deficit(d, t).unwrap() / t.sqrt();
            let exact = d.sqrt_coefficient();
            let rel = ((r - exact) / exact).abs();
            row(
                format!("sqrt law {d}"),
                rel < 1e-3 && ((exact - want) / want).abs() < 1e-6,
                format!("{r:.7} vs {exact:.7}, rel {rel:.1e}"),
            )
        })
        .collect()
}

fn two_term(alphas: &[f64]) -> Vec<Row> {
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();
    for &a in alphas {
        for d in [Domain::unit_interval(), Domain::unit_ball()] {
            let al = alpha(a);
            match check_two_term(&d, al, &two_term_grid(al), &spec) {
                Ok(r) => {
                    let mut rr = from_report(&r);
                    let _ = write!(rr.detail, " exponents {:?}", r.exponents);
                    out.push(rr);
                }
                Err(e) => out.push(row(format!("thm11 alpha={a} {d}"), false, e.to_string())),
            }
        }
    }
    out
}

fn c8_subcritical() -> Vec<Row> {
    let mut out = Vec::new();
    for a in [0.5, 0.8] {
        for d in [Domain::unit_interval(), Domain::unit_ball()] {
            let x = subcritical_constant(&d, alpha(a), SplitStrategy::LogPanels).unwrap();
            let y = subcritical_constant(&d, alpha(a), SplitStrategy::Substitution).unwrap();
            let rel = ((x - y) / x).abs();
            out.push(row(format!("dual constant alpha={a} {d}"), rel < 1e-8, format!("{x:.12} vs {y:.12}")));
        }
    }
    out.extend(two_term(&[0.5, 0.8]));
    out
}

fn c9_three_term() -> Vec<Row> {
    let spec = QuadratureSpec::default();
    let grid = geometric_grid(1e-3, 1e-7, 9).unwrap();
    let mut out = Vec::new();
    for a in [1.2, 1.5, 1.8] {
        let d = Domain::unit_ball();
        for r in check_three_term(&d, alpha(a), &grid, &spec).unwrap() {
            out.push(from_report(&r));
        }
        for r in check_ball_bracket(&d, alpha(a)).unwrap() {
            out.push(from_report(&r));
        }
    }
    out
}

fn c10_lemmas() -> Vec<Row> {
    let mut out: Vec<Row> = verify_lemma_limits(alpha(1.0), &Domain::unit_interval())
        .unwrap()
        .iter()
        .map(from_report)
        .collect();
    for a in [1.2, 1.5, 1.8] {
        for d in [Domain::unit_interval(), Domain::unit_ball()] {
            for r in verify_lemma_limits(alpha(a), &d).unwrap() {
                // the subordinator-only rows do not depend on the domain
                if d.dimension() == 3 && !r.check.contains("ball") {
                    continue;
                }
                out.push(from_report(&r));
            }
        }
    }
    out
}

fn c11_sup() -> Vec<Row> {
    let cfg = McConfig::new(1_000_000, 35).unwrap();
    let mut out: Vec<Row> = check_sup_gap(alpha(1.5), &cfg, 10_000).unwrap().iter().map(|r| {
        let mut rr = from_report(r);
        if !r.note.is_empty() {
            let _ = write!(rr.detail, " ({})", r.note);
        }
        rr
    }).collect();
    let c = 4.0 / PI * gamma(1.0 / 3.0).unwrap();
    out.push(row("bound equals (4/pi) Gamma(1/3)", (c - 3.410_930_480_304_776).abs() < 1e-12, format!("{c:.10}")));
    out
}

fn c12_relation() -> Vec<Row> {
    let spec = QuadratureSpec::default();
    let grid = geometric_grid(1e-1, 1e-3, 5).unwrap();
    let cfg = McConfig::new(100_000, 12).unwrap();
    let mut out = Vec::new();
    for a in [1.0, 1.5] {
        let model = Subordination::new(Domain::unit_interval(), alpha(a));
        let qt = HeatCurve::q_tilde(&model, &grid, &spec).unwrap();
        let qa = HeatCurve::q_alpha_mc(&model, &grid, 1024, &cfg).unwrap();
        out.push(from_report(&relation_check(&qt, &qa).unwrap()));
        let ub = upper_bound_check(&Domain::unit_interval(), alpha(a), &qa).unwrap();
        let mut rr = from_report(&ub);
        let _ = write!(rr.detail, " [{}]", ub.note);
        out.push(rr);
    }
    out
}

fn mc_csv(workers: usize) -> String {
    let model = Subordination::new(Domain::unit_interval(), alpha(1.5));
    let grid = geometric_grid(1.0, 0.01, 3).unwrap();
    let cfg = McConfig::new(50_000, 2024).unwrap();
    let curve = with_workers(workers, || HeatCurve::q_tilde_mc(&model, &grid, &cfg).unwrap());
    let mut s = String::from("t,value,stderr\n");
    for p in &curve.points {
        let _ = writeln!(s, "{:.15e},{:.15e},{:.15e}", p.t, p.value, p.std_error.unwrap());
    }
    s
}

fn c13_mc() -> Vec<Row> {
    let spec = QuadratureSpec::default();
    let mut out = Vec::new();
    for (i, a) in [0.8, 1.0, 1.5].into_iter().enumerate() {
        let model = Subordination::new(Domain::unit_interval(), alpha(a));
        for (j, t) in [0.01, 0.1, 1.0].into_iter().enumerate() {
            let cfg = McConfig::new(1_000_000, 1000 + (3 * i + j) as u64).unwrap();
            let e = model.q_tilde_mc(t, &cfg);
            let q = model.q_tilde(t, &spec).unwrap();
            let z = (e.mean - q) / e.std_error;
            out.push(row(format!("mc alpha={a} t={t}"), z.abs() <= 3.0, format!("mc {:.6} se {:.1e} quad {q:.6} z {z:+.2}", e.mean, e.std_error)));
        }
    }
    let one = mc_csv(1);
    let same = [4, 16].iter().all(|&w| mc_csv(w) == one);
    out.push(row("byte-identical csv for 1, 4, 16 workers", same, format!("{} bytes", one.len())));
    out
}

fn main() {
    let criteria: Vec<(&str, fn() -> Vec<Row>)> = vec![
        ("subordinator levy oracle", c1_levy),
        ("laplace and normalization", c2_laplace),
        ("fractional moments", c3_moments),
        ("tail law", c4_tail),
        ("brownian two-term law", c5_brownian),
        ("two-term law alpha in (1,2)", || two_term(&[1.2, 1.5, 1.8])),
        ("two-term law alpha = 1", || two_term(&[1.0])),
        ("two-term law alpha < 1", c8_subcritical),
        ("three-term law and ball bracket", c9_three_term),
        ("lemma suite", c10_lemmas),
        ("sup gap (monte carlo)", c11_sup),
        ("relation and upper bounds", c12_relation),
        ("monte carlo vs quadrature", c13_mc),
    ];
    let workers = worker_count();
    let mut unexpected = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let rows = with_workers(workers, run);
        let elapsed = start.elapsed().as_secs_f64();
        let pass = rows.iter().all(|r| r.pass);
        println!("criterion {:>2} {} {name} ({elapsed:.1} s)", k + 1, if pass { "PASS" } else { "FAIL" });
        for r in &rows {
            let documented = !r.pass && DOCUMENTED.contains(&r.label.as_str());
            if !r.pass && !documented {
                unexpected += 1;
            }
            let tag = match (r.pass, documented) {
                (true, _) => "ok  ",
                (false, true) => "FAIL (documented)",
                (false, false) => "FAIL",
            };
            println!("    {tag} {}: {}", r.label, r.detail);
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected failing rows");
        std::process::exit(1);
    }
}
