//! Seeded invariant suite behind `action-waves verify`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bessel::{bessel_j, bessel_row, bessel_series_oracle, ode_residual, BesselArgument};
use crate::cli::{expand_table, sweep_table};
use crate::duality::{
    chart_invert, dual_reconstruct, normalize_angle, quantum_ratio, selfdual_phase, Chart, Regime,
    SpherePoint,
};
use crate::partial_waves::{
    folded_partial_sums, i_pow, max_safe_order, reconstruct, required_order, target_phase,
    time_sum, time_sum_closed_form, ActionState, MIN_TOLERANCE,
};
use crate::table::format_real;

const SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyCheck {
    pub name: &'static str,
    /// Worst value of the checked quantity over all samples.
    pub worst: f64,
    pub limit: f64,
    pub passed: bool,
}

impl PropertyCheck {
    fn at_most(name: &'static str, worst: f64, limit: f64) -> Self {
        PropertyCheck {
            name,
            worst,
            limit,
            passed: worst <= limit,
        }
    }

    fn exact(name: &'static str, mismatches: usize) -> Self {
        PropertyCheck {
            name,
            worst: mismatches as f64,
            limit: 0.0,
            passed: mismatches == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub tol: f64,
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {:<28} worst={} limit={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                format_real(c.worst),
                format_real(c.limit),
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            out,
            "{} of {} properties passed (tol={}, seed={})",
            self.checks.len() - failed,
            self.checks.len(),
            format_real(self.tol),
            self.seed
        );
        out
    }
}

fn arg(w: f64) -> BesselArgument {
    BesselArgument::new(w).expect("sampled argument in domain")
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_state(rng: &mut ChaCha8Rng) -> ActionState {
    let s = log_uniform(rng, 1e-2, 1e2);
    let hbar = log_uniform(rng, 1e-2, 1e2);
    ActionState::new(s, hbar).expect("sampled state valid")
}

fn same_bits(a: Complex64, b: Complex64) -> bool {
    a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// `J_0 + 2 sum_{k=1}^{K} J_2k - 1` for `K = ceil(w) + 20`.
pub fn normalization_defect(w: BesselArgument) -> f64 {
    let k = w.value().ceil() as usize + 20;
    let row = bessel_row(2 * k, w).expect("row in domain");
    let v = row.nonnegative();
    let even: f64 = (1..=k).map(|j| v[2 * j]).sum();
    (v[0] + 2.0 * even - 1.0).abs()
}

pub const ODE_CASES: [(i64, f64); 3] = [(0, 5.0), (2, 10.0), (5, 8.0)];
pub const ODE_STEPS: [f64; 3] = [1e-1, 1e-2, 1e-3];

pub fn ode_slope(n: i64, w: f64) -> f64 {
    let r: Vec<f64> = ODE_STEPS
        .iter()
        .map(|&h| ode_residual(n, arg(w), h).expect("stencil in domain"))
        .collect();
    loglog_slope(&ODE_STEPS, &r)
}

pub const ORACLE_ORDERS: std::ops::RangeInclusive<usize> = 0..=20;
pub const ORACLE_ARGS: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

pub fn oracle_gap() -> f64 {
    let mut worst: f64 = 0.0;
    for n in ORACLE_ORDERS {
        for &w in &ORACLE_ARGS {
            let a = bessel_j(n as i64, arg(w)).unwrap();
            let b = bessel_series_oracle(n, arg(w), 60).unwrap();
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

pub const EXPANSION_ARGS: [f64; 5] = [0.1, 1.0, 2.0, 5.0, 10.0];

/// Largest signed increase of the reconstruction error from one order to the
/// next, for orders `ceil(w)..=N*`.
fn convergence_increase(w: f64, tol: f64) -> (f64, f64) {
    let w = arg(w);
    let start = w.value().ceil() as usize;
    let end = required_order(w, (0.1 * tol).max(MIN_TOLERANCE))
        .unwrap()
        .max(start);
    let errs: Vec<f64> = (start..=end)
        .map(|n| reconstruct(w, n).unwrap().abs_error)
        .collect();
    let rise = errs
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(f64::NEG_INFINITY, f64::max);
    (rise.max(0.0), *errs.last().unwrap())
}

pub fn run_suite(tol: f64, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // bessel
    let mut mismatches = 0;
    for _ in 0..SAMPLES {
        let n = rng.gen_range(1..=50i64);
        let w = arg(rng.gen_range(0.0..100.0));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        if bessel_j(-n, w).unwrap() != sign * bessel_j(n, w).unwrap() {
            mismatches += 1;
        }
    }
    checks.push(PropertyCheck::exact("reflection", mismatches));

    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let n = rng.gen_range(1..=40i64);
        let w = arg(rng.gen_range(0.5..=50.0));
        let mid = bessel_j(n, w).unwrap();
        let r = bessel_j(n - 1, w).unwrap() + bessel_j(n + 1, w).unwrap()
            - 2.0 * n as f64 / w.value() * mid;
        worst = worst.max(r.abs() / mid.abs().max(1.0));
    }
    checks.push(PropertyCheck::at_most(
        "three-term recurrence",
        worst,
        1e-10,
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        worst = worst.max(normalization_defect(arg(rng.gen_range(0.0..100.0))));
    }
    checks.push(PropertyCheck::at_most("normalization", worst, tol));

    checks.push(PropertyCheck::at_most(
        "oracle equivalence",
        oracle_gap(),
        tol,
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let n = rng.gen_range(0..=50usize);
        let w = rng.gen_range(0.0..100.0);
        let j = bessel_j(n as i64, arg(w)).unwrap().abs();
        let bound = (1..=n).fold(1.0, |acc, k| acc * (0.5 * w) / k as f64);
        let excess = (j - 1.0).max(j - bound * (1.0 + 1e-14));
        worst = worst.max(excess);
    }
    checks.push(PropertyCheck::at_most("boundedness", worst.max(0.0), 0.0));

    let worst = ODE_CASES
        .iter()
        .map(|&(n, w)| (ode_slope(n, w) - 2.0).abs())
        .fold(0.0, f64::max);
    checks.push(PropertyCheck::at_most("ode residual order h^2", worst, 0.2));

    // partial waves
    let mut mismatches = 0;
    for _ in 0..20 {
        let w = arg(rng.gen_range(0.0..50.0));
        let row = bessel_row(60, w).unwrap();
        let sums = folded_partial_sums(&row);
        let mut doubled = Complex64::new(row.nonnegative()[0], 0.0);
        for n in 1..=60i64 {
            let j = row.get(n).unwrap();
            let u = i_pow(n);
            doubled += Complex64::new(u.re * j, u.im * j) * 2.0;
            if !same_bits(doubled, sums[n as usize]) {
                mismatches += 1;
            }
        }
    }
    checks.push(PropertyCheck::exact("folding identity", mismatches));

    let mut rise: f64 = 0.0;
    let mut last: f64 = 0.0;
    for &w in &EXPANSION_ARGS {
        let (r, e) = convergence_increase(w, tol);
        rise = rise.max(r);
        last = last.max(e);
    }
    checks.push(PropertyCheck::at_most(
        "convergence monotone",
        rise,
        4.0 * f64::EPSILON,
    ));
    checks.push(PropertyCheck::at_most("convergence final error", last, tol));

    let mut worst = f64::NEG_INFINITY;
    for &w in &EXPANSION_ARGS {
        let start = w.ceil() as usize;
        for n in start..=start + 40 {
            let r = reconstruct(arg(w), n).unwrap();
            worst = worst.max(r.abs_error - r.bound);
        }
    }
    checks.push(PropertyCheck::at_most("bound validity", worst, 0.0));

    let mut worst: f64 = 0.0;
    for &w in &EXPANSION_ARGS {
        let n = required_order(arg(w), (0.1 * tol).max(MIN_TOLERANCE)).unwrap();
        let r = reconstruct(arg(w), n).unwrap();
        worst = worst.max((r.partial_sum.norm() - 1.0).abs());
    }
    checks.push(PropertyCheck::at_most("target modulus", worst, tol));

    let mut mismatches = 0;
    for _ in 0..20 {
        let state = random_state(&mut rng)
            .with_time(rng.gen_range(-5.0..5.0), 0.0)
            .unwrap();
        let Ok(w) = quantum_ratio(&state, Regime::Semiclassical) else {
            continue;
        };
        let n = required_order(w, 1e-13).unwrap().min(crate::bessel::N_MAX);
        let sum = time_sum(&state, n, TAU).unwrap();
        if !same_bits(sum, reconstruct(w, n).unwrap().partial_sum) {
            mismatches += 1;
        }
    }
    checks.push(PropertyCheck::exact("time reduction at t=0", mismatches));

    let mut worst: f64 = 0.0;
    let cases: [(f64, &[f64]); 2] = [(0.1, &[0.0, 0.1, 0.5, 1.0]), (1.0, &[0.0, 0.1, 0.5])];
    for (w, thetas) in cases {
        for &theta in thetas {
            let state = ActionState::new(w, 1.0)
                .unwrap()
                .with_time(1.0, theta)
                .unwrap();
            let n = max_safe_order(&state, TAU);
            let sum = time_sum(&state, n, TAU).unwrap();
            worst = worst.max((sum - time_sum_closed_form(&state, TAU)).norm());
        }
    }
    checks.push(PropertyCheck::at_most("time oracle", worst, 1e-10));

    // duality
    let mut worst: f64 = 0.0;
    let mut mismatches = 0;
    let mut modulus: f64 = 0.0;
    let mut angle: f64 = 0.0;
    for _ in 0..100 {
        let chart = if rng.gen_bool(0.5) {
            Chart::Z
        } else {
            Chart::ZTilde
        };
        let p = SpherePoint::from_polar(
            chart,
            log_uniform(&mut rng, 1e-3, 1e3),
            rng.gen_range(-PI..PI),
        )
        .unwrap();
        let q = chart_invert(&p);
        let back = chart_invert(&q);
        if back.chart != p.chart {
            mismatches += 1;
        }
        worst = worst.max((back.coord - p.coord).norm() / p.coord.norm().max(1.0));
        modulus = modulus.max((q.rho * p.rho - 1.0).abs());
        angle = angle.max(normalize_angle(q.phi + p.phi + PI).abs());
    }
    checks.push(PropertyCheck::at_most("involution", worst, 1e-14));
    checks.push(PropertyCheck::exact("involution chart label", mismatches));
    checks.push(PropertyCheck::at_most("modulus inversion", modulus, 1e-14));
    checks.push(PropertyCheck::at_most("angle law", angle, 1e-14));

    let mut worst: f64 = 0.0;
    for z in [Complex64::i(), -Complex64::i()] {
        let p = SpherePoint::from_coord(Chart::Z, z).unwrap();
        worst = worst.max((chart_invert(&p).coord - z).norm());
    }
    checks.push(PropertyCheck::at_most("fixed points +-i", worst, 1e-15));

    let mut mismatches = 0;
    let mut swaps = 0;
    let mut product: f64 = 0.0;
    for _ in 0..100 {
        let state = random_state(&mut rng);
        let n = rng.gen_range(0..=40usize);
        let w = quantum_ratio(&state, Regime::StrongQuantum).unwrap();
        if dual_reconstruct(&state, n).unwrap() != reconstruct(w, n).unwrap() {
            mismatches += 1;
        }
        if !same_bits(selfdual_phase(&state), selfdual_phase(&state.swapped())) {
            swaps += 1;
        }
        let a = quantum_ratio(&state, Regime::Semiclassical)
            .unwrap()
            .value();
        product = product.max((a * w.value() - 1.0).abs());
    }
    checks.push(PropertyCheck::exact("duality consistency", mismatches));
    checks.push(PropertyCheck::exact("self-dual swap", swaps));
    checks.push(PropertyCheck::at_most("product law", product, 1e-15));

    let mut worst = f64::NEG_INFINITY;
    let mut ratios = vec![10.0, 100.0, 1000.0, 1e4];
    ratios.extend((0..50).map(|_| log_uniform(&mut rng, 10.0, 1e4)));
    for ratio in ratios {
        let state = ActionState::new(ratio, 1.0).unwrap();
        let gap = (selfdual_phase(&state) - target_phase(state.w_classical())).norm();
        worst = worst.max(gap - state.w_quantum());
    }
    checks.push(PropertyCheck::at_most("semiclassical limit", worst, 0.0));

    // cli
    let render = || {
        let a = expand_table(arg(2.5), 20).unwrap().to_csv();
        let b = sweep_table(arg(2.5), 20).unwrap().to_csv();
        a + &b
    };
    checks.push(PropertyCheck::exact(
        "determinism",
        usize::from(render() != render()),
    ));

    SuiteReport { tol, seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_suite(1e-12, 7);
        assert!(report.all_passed(), "{}", report.render());
    }

    #[test]
    fn roundoff_floor_fails() {
        let report = run_suite(1e-16, 7);
        assert!(!report.all_passed());
        assert!(report.render().contains("FAIL"));
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0];
        let ys = [3.0, 12.0, 48.0];
        assert!((loglog_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }
}
