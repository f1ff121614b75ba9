//! Partial-wave expansion of the phase `e^{iw}` into `i^n J_n(w)` terms, its
//! truncation control, and the time-dependent sum with angular factors
//! `exp(i C n e^{-iEt/hbar})`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::bessel::{bessel_row, BesselArgument, BesselRow, N_MAX};
use crate::error::{Error, Result};

/// Largest exponent allowed in the angular factor before it is reported as overflow.
pub const ANGULAR_EXP_LIMIT: f64 = 700.0;

/// Smallest tolerance accepted by [`required_order`].
pub const MIN_TOLERANCE: f64 = 1.0e-15;

/// Rounding allowance folded into [`ExpansionReport::bound`]. The tail bound
/// alone goes to zero, while the computed partial sum stalls at the binary64
/// floor of a few ulps per unit of argument.
pub fn rounding_allowance(w: BesselArgument) -> f64 {
    64.0 * f64::EPSILON * (1.0 + w.value())
}

/// Physical inputs: action `S`, quantum `hbar`, and optionally energy, time and mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionState {
    s: f64,
    hbar: f64,
    energy: f64,
    time: f64,
    mass: Option<f64>,
}

impl ActionState {
    /// Static state with `E = t = 0` and no mass.
    pub fn new(s: f64, hbar: f64) -> Result<Self> {
        for (param, value) in [("S", s), ("hbar", hbar)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::domain(param, value, "must be positive and finite"));
            }
        }
        let (ratio, dual) = (s / hbar, hbar / s);
        if !ratio.is_finite() || ratio == 0.0 {
            return Err(Error::domain("S/hbar", ratio, "is not representable"));
        }
        if !dual.is_finite() || dual == 0.0 {
            return Err(Error::domain("hbar/S", dual, "is not representable"));
        }
        Ok(ActionState {
            s,
            hbar,
            energy: 0.0,
            time: 0.0,
            mass: None,
        })
    }

    pub fn with_time(mut self, energy: f64, time: f64) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::domain("E", energy, "is not finite"));
        }
        if !time.is_finite() {
            return Err(Error::domain("t", time, "is not finite"));
        }
        self.energy = energy;
        self.time = time;
        Ok(self)
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::domain("m", mass, "must be positive and finite"));
        }
        self.mass = Some(mass);
        Ok(self)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn mass(&self) -> Option<f64> {
        self.mass
    }

    /// `S / hbar`.
    pub fn w_classical(&self) -> f64 {
        self.s / self.hbar
    }

    /// `hbar / S`.
    pub fn w_quantum(&self) -> f64 {
        self.hbar / self.s
    }

    /// Dimensionless time `E t / hbar`.
    pub fn phase_angle(&self) -> f64 {
        self.energy * self.time / self.hbar
    }

    /// The same state with `S` and `hbar` exchanged.
    pub fn swapped(&self) -> Self {
        ActionState {
            s: self.hbar,
            hbar: self.s,
            ..*self
        }
    }
}

/// One partial wave `i^n J_n(w)` with its angular factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveTerm {
    pub n: i64,
    pub radial: f64,
    pub coefficient: Complex64,
    pub angular: Complex64,
}

impl WaveTerm {
    /// `coefficient * angular`; an exactly unit angular factor leaves the coefficient untouched.
    pub fn value(&self) -> Complex64 {
        if self.angular == Complex64::new(1.0, 0.0) {
            self.coefficient
        } else {
            self.coefficient * self.angular
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionReport {
    pub w: BesselArgument,
    pub n_max: usize,
    pub partial_sum: Complex64,
    pub target: Complex64,
    pub abs_error: f64,
    /// Tail bound plus [`rounding_allowance`]; infinite outside the bound regime.
    pub bound: f64,
}

/// `i^n` with exact components.
pub fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn coefficient(n: i64, radial: f64) -> Complex64 {
    let unit = i_pow(n);
    Complex64::new(unit.re * radial, unit.im * radial)
}

/// `e^{iw}` evaluated directly.
pub fn target_phase(w: f64) -> Complex64 {
    let (sin, cos) = w.sin_cos();
    Complex64::new(cos, sin)
}

/// Partial sums `sum_{|n|<=k} i^n J_n` for `k = 0..=n_max` from one row.
///
/// The orders `n` and `-n` are added as a pair before entering the running
/// sum; by reflection the pair is exactly `2 i^n J_n`.
pub fn folded_partial_sums(row: &BesselRow) -> Vec<Complex64> {
    let mut sums = Vec::with_capacity(row.n_max() + 1);
    let j = |n: i64| row.get(n).expect("order inside row");
    let mut acc = coefficient(0, j(0));
    sums.push(acc);
    for n in 1..=row.n_max() as i64 {
        acc += coefficient(n, j(n)) + coefficient(-n, j(-n));
        sums.push(acc);
    }
    sums
}

fn report_for(w: BesselArgument, n_max: usize, partial_sum: Complex64) -> ExpansionReport {
    let target = target_phase(w.value());
    let tail = tail_bound(w, n_max);
    ExpansionReport {
        w,
        n_max,
        partial_sum,
        target,
        abs_error: (partial_sum - target).norm(),
        bound: if tail.is_finite() && n_max as f64 >= w.value().ceil() {
            tail + rounding_allowance(w)
        } else {
            f64::INFINITY
        },
    }
}

/// Truncated reconstruction of `e^{iw}` from orders `-n_max..=n_max`.
pub fn reconstruct(w: BesselArgument, n_max: usize) -> Result<ExpansionReport> {
    let row = bessel_row(n_max, w)?;
    let sums = folded_partial_sums(&row);
    Ok(report_for(w, n_max, sums[n_max]))
}

/// One report per truncation order `0..=n_max`, all drawn from a single row.
pub fn reconstruct_progressive(w: BesselArgument, n_max: usize) -> Result<Vec<ExpansionReport>> {
    let row = bessel_row(n_max, w)?;
    Ok(folded_partial_sums(&row)
        .into_iter()
        .enumerate()
        .map(|(k, s)| report_for(w, k, s))
        .collect())
}

/// Upper bound on `sum_{|n|>n_max} |J_n(w)|`:
/// `2 (w/2)^{n+1} / (n+1)! / (1 - w / (2n + 4))`.
///
/// Returns `+inf` when `n_max < ceil(w/2)`, where the geometric domination
/// does not apply.
pub fn tail_bound(w: BesselArgument, n_max: usize) -> f64 {
    let mut ln_factorial = 0.0;
    for k in 2..=n_max + 1 {
        ln_factorial += (k as f64).ln();
    }
    tail_bound_with(w.value(), n_max, ln_factorial)
}

/// `ln_factorial` is `ln((n_max + 1)!)`.
fn tail_bound_with(w: f64, n_max: usize, ln_factorial: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    if (n_max as f64) < (0.5 * w).ceil() {
        return f64::INFINITY;
    }
    let m = (n_max + 1) as f64;
    let lead = (m * (0.5 * w).ln() - ln_factorial).exp();
    2.0 * lead / (1.0 - w / (2.0 * n_max as f64 + 4.0))
}

/// Smallest `n_max` whose [`tail_bound`] does not exceed `tol`.
pub fn required_order(w: BesselArgument, tol: f64) -> Result<usize> {
    if !tol.is_finite() || tol < MIN_TOLERANCE {
        return Err(Error::domain(
            "tol",
            tol,
            "must be finite and at least 1e-15",
        ));
    }
    let mut ln_factorial = 0.0;
    let mut n = 0usize;
    loop {
        ln_factorial += ((n + 1) as f64).ln();
        if tail_bound_with(w.value(), n, ln_factorial) <= tol {
            return Ok(n);
        }
        n += 1;
    }
}

/// Largest order whose angular factor stays below `exp(700)`, capped at `N_MAX`.
pub fn max_safe_order(state: &ActionState, c: f64) -> usize {
    let rate = (c * state.phase_angle().sin()).abs();
    if rate == 0.0 {
        return N_MAX;
    }
    let limit = (ANGULAR_EXP_LIMIT / rate).floor();
    if limit >= N_MAX as f64 {
        N_MAX
    } else {
        limit as usize
    }
}

/// `exp(i c n e^{-i theta})`, split into modulus `exp(c n sin theta)` and
/// phase `c n cos theta`. The phase is reduced in turns so that integer
/// multiples of a full turn give exactly `1`.
fn angular_factor(n: i64, theta: f64, c: f64, state: &ActionState) -> Result<Complex64> {
    let (sin, cos) = theta.sin_cos();
    let growth = c * n as f64 * sin;
    if growth.abs() > ANGULAR_EXP_LIMIT {
        return Err(Error::AngularOverflow {
            order: n,
            limit: max_safe_order(state, c),
        });
    }
    let turns = (c / TAU) * n as f64 * cos;
    let angle = TAU * (turns - turns.round());
    let (s, co) = angle.sin_cos();
    let modulus = growth.exp();
    Ok(Complex64::new(modulus * co, modulus * s))
}

fn classical_argument(state: &ActionState) -> Result<BesselArgument> {
    BesselArgument::named("S/hbar", state.w_classical())
}

fn check_angular_scale(c: f64) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::domain("C", c, "is not finite"));
    }
    Ok(())
}

fn term_from_row(row: &BesselRow, n: i64, state: &ActionState, c: f64) -> Result<WaveTerm> {
    let radial = row.get(n).expect("order inside row");
    Ok(WaveTerm {
        n,
        radial,
        coefficient: coefficient(n, radial),
        angular: angular_factor(n, state.phase_angle(), c, state)?,
    })
}

/// Partial wave of order `n` at `w = S/hbar` with angular scale `c`.
pub fn time_term(n: i64, state: &ActionState, c: f64) -> Result<WaveTerm> {
    check_angular_scale(c)?;
    let w = classical_argument(state)?;
    let row = bessel_row(n.unsigned_abs() as usize, w)?;
    term_from_row(&row, n, state, c)
}

/// `sum_{n=-n_max}^{n_max} i^n J_n(S/hbar) exp(i c n e^{-iEt/hbar})`.
pub fn time_sum(state: &ActionState, n_max: usize, c: f64) -> Result<Complex64> {
    check_angular_scale(c)?;
    let w = classical_argument(state)?;
    let row = bessel_row(n_max, w)?;
    let top = n_max as i64;
    // the extreme orders carry the largest modulus
    angular_factor(top, state.phase_angle(), c, state)?;
    angular_factor(-top, state.phase_angle(), c, state)?;

    let mut acc = term_from_row(&row, 0, state, c)?.value();
    for n in 1..=top {
        let up = term_from_row(&row, n, state, c)?.value();
        let down = term_from_row(&row, -n, state, c)?.value();
        acc += up + down;
    }
    Ok(acc)
}

/// Generating-function closed form of [`time_sum`]:
/// `exp(i w cos(c e^{-iEt/hbar}))` with `w = S/hbar`.
pub fn time_sum_closed_form(state: &ActionState, c: f64) -> Complex64 {
    let theta = state.phase_angle();
    let angle = Complex64::new(0.0, -theta).exp() * c;
    (Complex64::i() * state.w_classical() * angle.cos()).exp()
}

/// `e^{i(S - Et)/hbar}`, the left-hand side the time-dependent sum is sometimes equated with.
pub fn time_shifted_phase(state: &ActionState) -> Complex64 {
    target_phase((state.s - state.energy * state.time) / state.hbar)
}

/// Dimensionless radius `rho = alpha r` with `alpha = sqrt(2 m E) / hbar`.
pub fn radial_coordinate(r: f64, state: &ActionState) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::domain("r", r, "must be non-negative and finite"));
    }
    let mass = state.mass.ok_or(Error::domain(
        "m",
        f64::NAN,
        "is required for the radial coordinate",
    ))?;
    if state.energy <= 0.0 {
        return Err(Error::domain("E", state.energy, "must be positive"));
    }
    let alpha = (2.0 * mass * state.energy).sqrt() / state.hbar;
    Ok(alpha * r)
}

/// Angular eigenfunction `e^{i l phi}`.
pub fn angular_eigenfunction(l: i64, phi: f64) -> Complex64 {
    target_phase(l as f64 * phi)
}
