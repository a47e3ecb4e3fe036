mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shc_core::heat_brownian::{exit_time_sample, survival};
use shc_core::quadrature::gauss_legendre;
use shc_core::{q2, q2_deficit, Domain};

/// Solves `v_t = v_xx` on `(0, 1)` with zero boundary values by
/// Crank-Nicolson. Steps grow geometrically from far below `h^2` up to `dt`,
/// so the corner incompatibility is resolved in time before the steps become
/// stiff. Returns `v` on the interior nodes at each requested time.
fn crank_nicolson(v0: impl Fn(f64) -> f64, n: usize, dt: f64, times: &[f64]) -> Vec<Vec<f64>> {
    let h = 1.0 / n as f64;
    let m = n - 1;
    let mut v: Vec<f64> = (1..n).map(|i| v0(i as f64 * h)).collect();
    let solve = |v: &mut Vec<f64>, theta: f64, tau: f64| {
        let r = tau / (h * h);
        // (I + theta r A) v_new = (I - (1 - theta) r A) v_old, A = tridiag(-1, 2, -1)
        let rhs: Vec<f64> = (0..m)
            .map(|i| {
                let l = if i > 0 { v[i - 1] } else { 0.0 };
                let u = if i + 1 < m { v[i + 1] } else { 0.0 };
                v[i] + (1.0 - theta) * r * (l - 2.0 * v[i] + u)
            })
            .collect();
        let (a, b) = (-theta * r, 1.0 + 2.0 * theta * r);
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = a / b;
        d[0] = rhs[0] / b;
        for i in 1..m {
            let den = b - a * c[i - 1];
            c[i] = a / den;
            d[i] = (rhs[i] - a * d[i - 1]) / den;
        }
        v[m - 1] = d[m - 1];
        for i in (0..m - 1).rev() {
            v[i] = d[i] - c[i] * v[i + 1];
        }
    };
    let mut out = Vec::new();
    let mut t = 0.0;
    let mut tau = 1e-4 * h * h;
    while tau < dt {
        solve(&mut v, 0.5, tau);
        t += tau;
        tau *= 1.02;
    }
    for &target in times {
        while t < target - 1e-12 {
            let step = dt.min(target - t);
            solve(&mut v, 0.5, step);
            t += step;
        }
        out.push(v.clone());
    }
    out
}

fn simpson(f: &[f64], h: f64) -> f64 {
    // f includes both (zero) end values and an even number of panels
    let n = f.len() - 1;
    assert!(n % 2 == 0);
    let mut s = f[0] + f[n];
    for (i, v) in f.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

#[test]
fn crank_nicolson_oracle() {
    let times = [0.01, 0.1, 1.0];
    let n = 2000;
    let h = 1.0 / n as f64;
    let dt = 1e-5;
    let with_ends = |v: &Vec<f64>| {
        let mut f = vec![0.0];
        f.extend_from_slice(v);
        f.push(0.0);
        f
    };

    let iv = crank_nicolson(|_| 1.0, n, dt, &times);
    for (t, v) in times.iter().zip(&iv) {
        let q = simpson(&with_ends(v), h);
        let want = q2(&Domain::unit_interval(), *t).unwrap();
        assert!((q - want).abs() < 1e-5, "interval t {t}: pde {q} vs {want}");
    }

    // radial: v = r u solves the same equation with v(r, 0) = r
    let bv = crank_nicolson(|r| r, n, dt, &times);
    for (t, v) in times.iter().zip(&bv) {
        let f: Vec<f64> = with_ends(v).iter().enumerate().map(|(i, x)| 4.0 * PI * i as f64 * h * x).collect();
        let q = simpson(&f, h);
        let want = q2(&Domain::unit_ball(), *t).unwrap();
        assert!((q - want).abs() < 1e-5 * want.max(1.0), "ball t {t}: pde {q} vs {want}");
    }
}

#[test]
fn two_term_law_at_tiny_time() {
    let t: f64 = 1e-8;
    for (d, want) in [(Domain::unit_interval(), 4.0 / PI.sqrt()), (Domain::unit_ball(), 8.0 * PI.sqrt())] {
        let r = q2_deficit(&d, t).unwrap() / t.sqrt();
        assert!(((r - want) / want).abs() < 1e-3, "{d}: {r} vs {want}");
    }
    assert!((4.0 / PI.sqrt() - 2.256_758_3).abs() < 1e-7);
    assert!((8.0 * PI.sqrt() - 14.179_630).abs() < 1e-5);
}

#[test]
fn survival_integrates_to_heat_content() {
    let (x, w) = gauss_legendre(200);
    for t in [1e-4, 1e-2, 0.1, 1.0] {
        let iv: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| 0.5 * wi * survival(&Domain::unit_interval(), &[0.5 + 0.5 * xi], t).unwrap())
            .sum();
        let want = q2(&Domain::unit_interval(), t).unwrap();
        assert!((iv - want).abs() < 1e-8, "interval t {t}: {iv} vs {want}");

        let b: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let r = 0.5 + 0.5 * xi;
                0.5 * wi * 4.0 * PI * r * r * survival(&Domain::unit_ball(), &[r, 0.0, 0.0], t).unwrap()
            })
            .sum();
        let want = q2(&Domain::unit_ball(), t).unwrap();
        assert!((b - want).abs() < 1e-8, "ball t {t}: {b} vs {want}");
    }
}

#[test]
fn scaling_under_dilation() {
    for t in [1e-6, 1e-3, 0.05, 0.7] {
        for l in [0.3, 2.5] {
            let a = q2(&Domain::interval(-1.0, -1.0 + l).unwrap(), t).unwrap();
            let b = l * q2(&Domain::unit_interval(), t / (l * l)).unwrap();
            assert!((a - b).abs() < 1e-12 * b.max(1e-300), "interval L {l} t {t}");
            let a = q2(&Domain::ball3(l).unwrap(), t).unwrap();
            let b = l.powi(3) * q2(&Domain::unit_ball(), t / (l * l)).unwrap();
            assert!((a - b).abs() < 1e-12 * b.max(1e-300), "ball r {l} t {t}");
        }
    }
}

/// Survival from the centre: `sum_{odd n} 4/(n pi) (-1)^{(n-1)/2} e^{-n^2 pi^2 t}` on
/// the unit interval and `sum_n 2 (-1)^{n+1} e^{-n^2 pi^2 t}` in the unit ball.
fn centre_survival(ball: bool, t: f64) -> f64 {
    (1..400)
        .map(|n| {
            let nf = n as f64;
            let e = (-nf * nf * PI * PI * t).exp();
            if ball {
                2.0 * if n % 2 == 1 { 1.0 } else { -1.0 } * e
            } else if n % 2 == 1 {
                4.0 / (nf * PI) * if (n / 2) % 2 == 0 { 1.0 } else { -1.0 } * e
            } else {
                0.0
            }
        })
        .sum()
}

fn centre_median(ball: bool) -> f64 {
    let (mut lo, mut hi) = (1e-4, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if centre_survival(ball, mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn exit_times_from_centre() {
    let n = 20_000;
    for (ball, d, x) in [
        (false, Domain::unit_interval(), vec![0.5]),
        (true, Domain::unit_ball(), vec![0.0, 0.0, 0.0]),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut ts: Vec<f64> = (0..n).map(|_| exit_time_sample(&d, &x, &mut rng).unwrap()).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let nf = n as f64;
        let ks = ts
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let f = 1.0 - centre_survival(ball, t);
                (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks <= 1.63 / nf.sqrt(), "{d}: KS {ks}");
        let med = centre_median(ball);
        let emp = ts[n / 2];
        // quantile standard error 1 / (2 f(m) sqrt(n)), f(m) of order 1/m
        assert!((emp - med).abs() < 0.03 * med, "{d}: median {emp} vs {med}");
        assert!((survival(&d, &x, med).unwrap() - 0.5).abs() < 1e-10);
    }
}

#[test]
fn survival_stochastically_ordered() {
    let d = Domain::unit_ball();
    for t in [0.001, 0.01, 0.1] {
        let mut prev = 1.0;
        for i in 0..20 {
            let r = 0.05 * i as f64;
            let s = survival(&d, &[0.0, r, 0.0], t).unwrap();
            assert!(s <= prev + 1e-15, "t {t} r {r}");
            prev = s;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// First three differences of Q2 alternate in sign.
    #[test]
    fn complete_monotonicity(t in 1e-6f64..2.0, ball in any::<bool>()) {
        let d = if ball { Domain::unit_ball() } else { Domain::unit_interval() };
        let h = 0.1 * t;
        let f: Vec<f64> = (0..4).map(|k| q2(&d, t + k as f64 * h).unwrap()).collect();
        let d1 = f[1] - f[0];
        let d2 = f[2] - 2.0 * f[1] + f[0];
        let d3 = f[3] - 3.0 * f[2] + 3.0 * f[1] - f[0];
        let tol = 1e-13 * d.volume();
        prop_assert!(d1 <= tol);
        prop_assert!(d2 >= -tol);
        prop_assert!(d3 <= tol);
    }

    #[test]
    fn survival_decreases_in_time(x in 0.001f64..0.999, t in 1e-6f64..1.0, r in 1.01f64..4.0) {
        let d = Domain::unit_interval();
        let a = survival(&d, &[x], t).unwrap();
        let b = survival(&d, &[x], t * r).unwrap();
        prop_assert!(b <= a + 1e-14);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
