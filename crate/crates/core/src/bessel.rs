//! Integer-order Bessel functions of the first kind on the non-negative real axis.
//!
//! Values come from Miller's downward recurrence normalized with
//! `J_0 + 2 sum J_2k = 1`; for small arguments the ascending power series is
//! summed directly. Negative orders are produced from the non-negative kernel
//! by the reflection `J_{-n} = (-1)^n J_n`, so the symmetry holds exactly.

use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Largest argument accepted at the public boundary.
pub const W_MAX: f64 = 1.0e4;

/// Largest order magnitude accepted at the public boundary.
pub const N_MAX: usize = 1000;

/// Below this argument the ascending series replaces the recurrence.
const SERIES_CUTOFF: f64 = 0.5;

const RESCALE_AT: f64 = 1.0e200;
const RESCALE_BY: f64 = 1.0e-200;

/// A validated Bessel argument `w`, finite and in `[0, W_MAX]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselArgument(f64);

impl BesselArgument {
    pub const ZERO: BesselArgument = BesselArgument(0.0);

    pub fn new(w: f64) -> Result<Self> {
        Self::named("w", w)
    }

    /// Like [`BesselArgument::new`], reporting `param` in the error.
    pub fn named(param: &'static str, w: f64) -> Result<Self> {
        if !w.is_finite() {
            return Err(Error::domain(param, w, "is not finite"));
        }
        if w < 0.0 {
            return Err(Error::domain(param, w, "must be non-negative"));
        }
        if w > W_MAX {
            return Err(Error::domain(param, w, "exceeds the argument cap 1e4"));
        }
        Ok(BesselArgument(w))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BesselArgument {
    type Error = Error;

    fn try_from(w: f64) -> Result<Self> {
        BesselArgument::new(w)
    }
}

/// `J_n(w)` for `n = -n_max..=n_max` at a fixed argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselRow {
    w: BesselArgument,
    n_max: usize,
    values: Vec<f64>,
}

impl BesselRow {
    pub fn w(&self) -> BesselArgument {
        self.w
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// All values, ordered from `n = -n_max` up to `n = n_max`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values for `n = 0..=n_max`.
    pub fn nonnegative(&self) -> &[f64] {
        &self.values[self.n_max..]
    }

    /// `J_n(w)`, or `None` when `|n| > n_max`.
    pub fn get(&self, n: i64) -> Option<f64> {
        if n.unsigned_abs() as usize > self.n_max {
            return None;
        }
        Some(self.values[(n + self.n_max as i64) as usize])
    }

    /// `(n, J_n)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let offset = self.n_max as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - offset, v))
    }
}

fn check_order(param: &'static str, n: i64) -> Result<usize> {
    let magnitude = n.unsigned_abs() as usize;
    if magnitude > N_MAX {
        return Err(Error::OrderTooLarge {
            param,
            value: n,
            max: N_MAX,
        });
    }
    Ok(magnitude)
}

#[inline]
fn reflect(n: i64, value: f64) -> f64 {
    if n < 0 && n % 2 != 0 {
        -value
    } else {
        value
    }
}

/// `J_n(w)` for any integer order with `|n| <= N_MAX`.
pub fn bessel_j(n: i64, w: BesselArgument) -> Result<f64> {
    let order = check_order("n", n)?;
    let row = nonnegative_orders(order, w.value());
    Ok(reflect(n, row[order]))
}

/// Computes the whole row `J_{-n_max}..J_{n_max}` from one recurrence pass.
pub fn bessel_row(n_max: usize, w: BesselArgument) -> Result<BesselRow> {
    check_order("n_max", n_max as i64)?;
    let positive = nonnegative_orders(n_max, w.value());
    let mut values = Vec::with_capacity(2 * n_max + 1);
    for n in (1..=n_max).rev() {
        values.push(reflect(-(n as i64), positive[n]));
    }
    values.extend_from_slice(&positive);
    Ok(BesselRow { w, n_max, values })
}

/// `J_0..=J_{n_max}` at `w >= 0`; callers validate the inputs.
fn nonnegative_orders(n_max: usize, w: f64) -> Vec<f64> {
    if w == 0.0 {
        let mut row = vec![0.0; n_max + 1];
        row[0] = 1.0;
        row
    } else if w < SERIES_CUTOFF {
        ascending_row(n_max, w)
    } else {
        miller_row(n_max, w)
    }
}

fn ascending_row(n_max: usize, w: f64) -> Vec<f64> {
    let half = 0.5 * w;
    let neg_sq = -half * half;
    let mut lead = 1.0;
    let mut row = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            lead *= half / n as f64;
        }
        let mut term = lead;
        let mut sum = lead;
        for k in 1..60 {
            term *= neg_sq / (k as f64 * (n + k) as f64);
            sum += term;
            if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
                break;
            }
        }
        row.push(sum);
    }
    row
}

fn miller_row(n_max: usize, w: f64) -> Vec<f64> {
    let start = n_max + 30 + (1.5 * w).ceil() as usize;
    let mut row = vec![0.0; n_max + 1];
    let mut above = 0.0; // f_{k+1}
    let mut current = 1.0; // f_k
    let mut norm = 0.0;

    for k in (1..=start).rev() {
        if k <= n_max {
            row[k] = current;
        }
        if k % 2 == 0 {
            norm += 2.0 * current;
        }
        let below = (2.0 * k as f64 / w) * current - above;
        above = current;
        current = below;

        if current.abs() > RESCALE_AT {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            norm *= RESCALE_BY;
            if k <= n_max {
                for v in &mut row[k..] {
                    *v *= RESCALE_BY;
                }
            }
        }
    }
    row[0] = current;
    norm += current;

    for v in &mut row {
        *v /= norm;
    }
    row
}

/// Truncated ascending series `sum_{k<terms} (-1)^k (w/2)^{n+2k} / (k! (n+k)!)`.
///
/// Accumulated in double-double arithmetic so that the alternating terms
/// (up to ~1e11 at `w = 30`) cancel without destroying the result. This is
/// the reference the recurrence is checked against, and shares no code with it.
pub fn bessel_series_oracle(n: usize, w: BesselArgument, terms: usize) -> Result<f64> {
    if n > 60 {
        return Err(Error::OrderTooLarge {
            param: "n",
            value: n as i64,
            max: 60,
        });
    }
    if w.value() > 30.0 {
        return Err(Error::domain("w", w.value(), "exceeds the oracle range 30"));
    }
    if terms == 0 {
        return Err(Error::domain("terms", 0.0, "must be at least 1"));
    }

    let half = TwoFloat::from(w.value()) / 2.0;
    let mut lead = TwoFloat::from(1.0);
    for j in 1..=n {
        lead = lead * half / j as f64;
    }
    let neg_sq = -(half * half);
    let mut term = lead;
    let mut sum = lead;
    for k in 1..terms {
        term = term * neg_sq / ((k * (n + k)) as f64);
        sum += term;
    }
    Ok(sum.hi() + sum.lo())
}

/// Residual of the order-`n` Bessel equation at `w` with central differences of step `h`.
pub fn ode_residual(n: i64, w: BesselArgument, h: f64) -> Result<f64> {
    check_order("n", n)?;
    stencil_residual(|x| bessel_j(n, BesselArgument::new(x)?), n, w.value(), h)
}

fn stencil_residual<F>(f: F, n: i64, w: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::domain("h", h, "must lie in (0, 0.1]"));
    }
    if w - 2.0 * h <= 0.0 {
        return Err(Error::domain(
            "w",
            w,
            "leaves no room for the stencil (w - 2h <= 0)",
        ));
    }
    let lo = f(w - h)?;
    let mid = f(w)?;
    let hi = f(w + h)?;
    let second = (hi - 2.0 * mid + lo) / (h * h);
    let first = (hi - lo) / (2.0 * h);
    let nf = n as f64;
    Ok(second + first / w + (1.0 - nf * nf / (w * w)) * mid)
}

/// Quadratic Casimir `l(l + N - 1)` of rotations on the `N`-sphere.
pub fn casimir(space_dim_minus_one: u32, l: i64) -> Result<i64> {
    if space_dim_minus_one == 0 {
        return Err(Error::domain("N", 0.0, "must be at least 1"));
    }
    Ok(l * (l + space_dim_minus_one as i64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arg(w: f64) -> BesselArgument {
        BesselArgument::new(w).unwrap()
    }

    #[test]
    fn argument_domain() {
        assert!(BesselArgument::new(-1.0).is_err());
        assert!(BesselArgument::new(f64::NAN).is_err());
        assert!(BesselArgument::new(f64::INFINITY).is_err());
        assert!(BesselArgument::new(W_MAX).is_ok());
        assert!(BesselArgument::new(W_MAX * 1.000_001).is_err());
        match BesselArgument::named("hbar/S", -2.0) {
            Err(Error::Domain { param, .. }) => assert_eq!(param, "hbar/S"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, BesselArgument::ZERO).unwrap(), 1.0);
        assert_eq!(bessel_j(3, BesselArgument::ZERO).unwrap(), 0.0);
        assert_eq!(bessel_j(-3, BesselArgument::ZERO).unwrap(), 0.0);
    }

    #[test]
    fn reflection_even_order() {
        let w = arg(1.5);
        assert_eq!(bessel_j(-2, w).unwrap(), bessel_j(2, w).unwrap());
        assert_eq!(bessel_j(-3, w).unwrap(), -bessel_j(3, w).unwrap());
    }

    #[test]
    fn order_cap() {
        assert!(bessel_j(1001, arg(1.0)).is_err());
        assert!(bessel_j(-1001, arg(1.0)).is_err());
        assert!(bessel_j(1000, arg(1.0)).is_ok());
        assert!(bessel_row(1001, arg(1.0)).is_err());
    }

    #[test]
    fn j1_at_two_matches_series() {
        let oracle = bessel_series_oracle(1, arg(2.0), 60).unwrap();
        let value = bessel_j(1, arg(2.0)).unwrap();
        assert!((value - oracle).abs() <= 1e-12, "{value} vs {oracle}");
    }

    #[test]
    fn tabulated_values() {
        // Abramowitz & Stegun, table 9.1
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (0, 5.0, -0.177_596_771_314_338_3),
            (2, 10.0, 0.254_630_313_685_120_6),
            (0, 100.0, 0.019_985_850_304_223_12),
        ];
        for (n, w, expected) in cases {
            let got = bessel_j(n, arg(w)).unwrap();
            assert!((got - expected).abs() < 1e-14, "J_{n}({w}) = {got}");
        }
    }

    #[test]
    fn row_examples() {
        let row = bessel_row(2, BesselArgument::ZERO).unwrap();
        assert_eq!(row.values(), &[0.0, 0.0, 1.0, 0.0, 0.0]);

        let single = bessel_row(0, arg(5.0)).unwrap();
        assert_eq!(single.values().len(), 1);
        assert_eq!(single.values()[0], bessel_j(0, arg(5.0)).unwrap());

        let row = bessel_row(20, arg(1.0)).unwrap();
        let nonneg = row.nonnegative();
        let norm = nonneg[0] + 2.0 * nonneg.iter().skip(2).step_by(2).sum::<f64>();
        assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn row_agrees_with_pointwise() {
        for &w in &[0.1, 0.7, 3.0, 25.0, 120.0] {
            let row = bessel_row(60, arg(w)).unwrap();
            for (n, v) in row.iter() {
                let single = bessel_j(n, arg(w)).unwrap();
                assert!((v - single).abs() <= 1e-13, "n={n} w={w}");
            }
        }
    }

    #[test]
    fn row_reflection_is_exact() {
        let row = bessel_row(15, arg(7.3)).unwrap();
        for n in 1..=15i64 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(row.get(-n).unwrap(), sign * row.get(n).unwrap());
        }
        assert_eq!(row.get(16), None);
    }

    #[test]
    fn large_argument_row_survives_rescaling() {
        let row = bessel_row(N_MAX, arg(W_MAX)).unwrap();
        assert!(row.values().iter().all(|v| v.is_finite() && v.abs() <= 1.0));
        let small = bessel_row(N_MAX, arg(1.0)).unwrap();
        assert_eq!(small.get(1000).unwrap(), 0.0);
        assert!(small.values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            bessel_series_oracle(0, BesselArgument::ZERO, 1).unwrap(),
            1.0
        );
        assert_eq!(
            bessel_series_oracle(1, BesselArgument::ZERO, 5).unwrap(),
            0.0
        );
        let a = bessel_series_oracle(2, arg(3.0), 40).unwrap();
        let b = bessel_series_oracle(2, arg(3.0), 60).unwrap();
        assert!((a - b).abs() < 1e-14);
        // A&S table 9.1: J_2(3)
        assert!((a - 0.486_091_260_585_891_1).abs() < 1e-15);
    }

    #[test]
    fn oracle_domain() {
        assert!(bessel_series_oracle(61, arg(1.0), 10).is_err());
        assert!(bessel_series_oracle(0, arg(30.5), 10).is_err());
        assert!(bessel_series_oracle(0, arg(1.0), 0).is_err());
    }

    #[test]
    fn oracle_improves_with_terms() {
        let reference = bessel_series_oracle(3, arg(12.0), 60).unwrap();
        let mut last = f64::INFINITY;
        for terms in [4, 8, 12, 16, 20, 24] {
            let err = (bessel_series_oracle(3, arg(12.0), terms).unwrap() - reference).abs();
            assert!(err < last, "terms={terms}");
            last = err;
        }
    }

    #[test]
    fn ode_residual_small_at_fine_step() {
        let r = ode_residual(2, arg(10.0), 1e-3).unwrap();
        assert!(r.abs() <= 1e-5, "{r}");
    }

    #[test]
    fn ode_residual_halving_quarters() {
        let coarse = ode_residual(0, arg(5.0), 0.08).unwrap();
        let fine = ode_residual(0, arg(5.0), 0.04).unwrap();
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn ode_residual_of_zero_function_is_zero() {
        let r = stencil_residual(|_| Ok(0.0), 3, 2.0, 0.01).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn ode_residual_domain() {
        assert!(ode_residual(0, arg(0.1), 0.05).is_err());
        assert!(ode_residual(0, arg(1.0), 0.0).is_err());
        assert!(ode_residual(0, arg(1.0), 0.2).is_err());
        assert!(ode_residual(0, arg(W_MAX), 0.01).is_err());
    }

    #[test]
    fn casimir_values() {
        assert_eq!(casimir(1, 2).unwrap(), 4);
        assert_eq!(casimir(3, 1).unwrap(), 3);
        for n in 1..6 {
            assert_eq!(casimir(n, 0).unwrap(), 0);
        }
        for l in -5..=5 {
            assert_eq!(casimir(1, l).unwrap(), l * l);
        }
        assert!(casimir(0, 1).is_err());
    }
}
