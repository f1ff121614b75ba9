//! Command-line front end: argument model and the table/report producers
//! behind each subcommand.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::bessel::{bessel_row, BesselArgument};
use crate::duality::{classify_regime, dual_reconstruct, quantum_ratio, selfdual_phase, Regime};
use crate::error::{Error, Result};
use crate::partial_waves::{
    i_pow, max_safe_order, reconstruct, reconstruct_progressive, required_order, time_sum,
    time_sum_closed_form, ActionState, MIN_TOLERANCE,
};
use crate::table::{serialize_real, Cell, Table};
use crate::verify::{run_suite, SuiteReport};

pub const EXPAND_HEADER: &[&str] = &[
    "n",
    "J_n",
    "re_coeff",
    "im_coeff",
    "re_partial",
    "im_partial",
    "abs_error",
    "bound",
];
pub const GRID_HEADER: &[&str] = &["rho", "phi", "re", "im"];
pub const SWEEP_HEADER: &[&str] = &["n_max", "abs_error", "bound"];
pub const TIMEWAVE_HEADER: &[&str] = &[
    "t",
    "re_sum",
    "im_sum",
    "re_oracle",
    "im_oracle",
    "abs_diff",
];

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_SEED: u64 = 20_050_601;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const OVERFLOW: i32 = 3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "action-waves",
    version,
    about = "Bessel partial-wave expansions of exp(iS/hbar) and the S <-> hbar duality"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial waves, running partial sums and errors of e^{iw}
    Expand {
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        /// Truncation order; defaults to the order whose tail bound is below tol/10
        #[arg(long, allow_negative_numbers = true)]
        nmax: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_TOL, allow_negative_numbers = true)]
        tol: f64,
        /// Emit the field sum_n i^n J_n(rho) e^{i n phi} on a polar grid with rho in [0, w]
        #[arg(long)]
        grid: bool,
        /// Grid points per axis for --grid
        #[arg(long, default_value_t = 41, allow_negative_numbers = true)]
        steps: i64,
    },
    /// Reconstruction error and bound for every truncation order 0..=nmax
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        #[arg(long, default_value_t = 30, allow_negative_numbers = true)]
        nmax: i64,
    },
    /// Time-dependent partial-wave sum against its closed form
    Timewave {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        hbar: f64,
        #[arg(long, allow_negative_numbers = true)]
        e: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, default_value_t = 11, allow_negative_numbers = true)]
        steps: i64,
        /// Truncation order; defaults to the largest overflow-safe order over the range
        #[arg(long, allow_negative_numbers = true)]
        nmax: Option<i64>,
        #[arg(long, default_value_t = TAU, allow_negative_numbers = true)]
        c: f64,
    },
    /// Semiclassical and strong-quantum expansions and the self-dual phase (JSON)
    Duality {
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        hbar: f64,
        #[arg(long, default_value_t = DEFAULT_TOL, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        threshold: f64,
    },
    /// Run the invariant suite and print one PASS/FAIL line per property
    Verify {
        #[arg(long, default_value_t = DEFAULT_TOL, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// What a subcommand produced.
#[derive(Debug)]
pub enum Output {
    Table(Table),
    Json(String),
    Verify(SuiteReport),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Table(t) => match format {
                Format::Csv => t.to_csv(),
                Format::Json => t.to_json(),
            },
            Output::Json(s) => s.clone(),
            Output::Verify(report) => report.render(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Verify(r) if !r.all_passed() => exit::VERIFY_FAILED,
            _ => exit::SUCCESS,
        }
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::AngularOverflow { .. } => exit::OVERFLOW,
        _ => exit::USAGE,
    }
}

fn order_param(param: &'static str, n: i64) -> Result<usize> {
    if n < 0 {
        return Err(Error::domain(param, n as f64, "must be non-negative"));
    }
    if n as u64 > crate::bessel::N_MAX as u64 {
        return Err(Error::OrderTooLarge {
            param,
            value: n,
            max: crate::bessel::N_MAX,
        });
    }
    Ok(n as usize)
}

fn tolerance(tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::domain("tol", tol, "must be positive and finite"));
    }
    Ok(tol)
}

/// Order used when none is given: tail bound at a tenth of the tolerance,
/// clamped at the smallest supported tolerance.
pub fn default_order(w: BesselArgument, tol: f64) -> Result<usize> {
    let n = required_order(w, (0.1 * tol).max(MIN_TOLERANCE))?;
    order_param("nmax", n as i64)
}

pub fn dispatch(command: &Command) -> Result<Output> {
    match *command {
        Command::Expand {
            w,
            nmax,
            tol,
            grid,
            steps,
        } => {
            let w = BesselArgument::named("w", w)?;
            let tol = tolerance(tol)?;
            let n_max = match nmax {
                Some(n) => order_param("nmax", n)?,
                None => default_order(w, tol)?,
            };
            if grid {
                if steps < 2 {
                    return Err(Error::domain(
                        "steps",
                        steps as f64,
                        "must be at least 2 for a grid",
                    ));
                }
                Ok(Output::Table(plane_grid(w, steps as usize, n_max)?))
            } else {
                Ok(Output::Table(expand_table(w, n_max)?))
            }
        }
        Command::Sweep { w, nmax } => {
            let w = BesselArgument::named("w", w)?;
            Ok(Output::Table(sweep_table(w, order_param("nmax", nmax)?)?))
        }
        Command::Timewave {
            s,
            hbar,
            e,
            t0,
            t1,
            steps,
            nmax,
            c,
        } => {
            let state = ActionState::new(s, hbar)?.with_time(e, t0)?;
            state.with_time(e, t1)?;
            if steps < 1 {
                return Err(Error::domain("steps", steps as f64, "must be at least 1"));
            }
            let nmax = nmax.map(|n| order_param("nmax", n)).transpose()?;
            Ok(Output::Table(timewave_table(
                &state,
                t1,
                steps as usize,
                nmax,
                c,
            )?))
        }
        Command::Duality {
            s,
            hbar,
            tol,
            threshold,
        } => {
            let state = ActionState::new(s, hbar)?;
            let report = duality_report(&state, tolerance(tol)?, threshold)?;
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            Ok(Output::Json(json))
        }
        Command::Verify { tol, seed } => Ok(Output::Verify(run_suite(tolerance(tol)?, seed))),
    }
}

/// Rows `n = 0..=n_max`: `J_n`, `i^n J_n`, the folded partial sum through `n`,
/// its error against `e^{iw}` and the error bound at that order.
pub fn expand_table(w: BesselArgument, n_max: usize) -> Result<Table> {
    let row = bessel_row(n_max, w)?;
    let reports = reconstruct_progressive(w, n_max)?;
    let mut table = Table::new(EXPAND_HEADER);
    for (n, report) in reports.iter().enumerate() {
        let j = row.nonnegative()[n];
        let unit = i_pow(n as i64);
        table.push(vec![
            Cell::from(n),
            Cell::from(j),
            Cell::from(unit.re * j),
            Cell::from(unit.im * j),
            Cell::from(report.partial_sum.re),
            Cell::from(report.partial_sum.im),
            Cell::from(report.abs_error),
            Cell::from(report.bound),
        ]);
    }
    Ok(table)
}

/// `sum_{|n|<=n_max} i^n J_n(rho) e^{i n phi}` on a `steps x steps` polar grid
/// with `rho` in `[0, rho_max]` and `phi` in `[-pi, pi]`.
pub fn plane_grid(rho_max: BesselArgument, steps: usize, n_max: usize) -> Result<Table> {
    let mut table = Table::new(GRID_HEADER);
    let last = (steps - 1) as f64;
    for i in 0..steps {
        let rho = BesselArgument::new(rho_max.value() * i as f64 / last)?;
        let row = bessel_row(n_max, rho)?;
        for k in 0..steps {
            let phi = -PI + TAU * k as f64 / last;
            let mut acc = Complex64::new(row.nonnegative()[0], 0.0);
            for n in 1..=n_max as i64 {
                let up =
                    i_pow(n) * row.get(n).unwrap() * Complex64::from_polar(1.0, n as f64 * phi);
                let down = i_pow(-n)
                    * row.get(-n).unwrap()
                    * Complex64::from_polar(1.0, -(n as f64) * phi);
                acc += up + down;
            }
            table.push(vec![
                Cell::from(rho.value()),
                Cell::from(phi),
                Cell::from(acc.re),
                Cell::from(acc.im),
            ]);
        }
    }
    Ok(table)
}

/// One [`reconstruct`] per truncation order `0..=n_max`.
pub fn sweep_table(w: BesselArgument, n_max: usize) -> Result<Table> {
    let mut table = Table::new(SWEEP_HEADER);
    for k in 0..=n_max {
        let r = reconstruct(w, k)?;
        table.push(vec![
            Cell::from(k),
            Cell::from(r.abs_error),
            Cell::from(r.bound),
        ]);
    }
    Ok(table)
}

fn time_grid(t0: f64, t1: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![t0];
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|j| t0 + (t1 - t0) * j as f64 / last)
        .collect()
}

/// Rows over `t` in `[state.time(), t1]` comparing the truncated time sum
/// with its generating-function closed form.
pub fn timewave_table(
    state: &ActionState,
    t1: f64,
    steps: usize,
    n_max: Option<usize>,
    c: f64,
) -> Result<Table> {
    let times = time_grid(state.time(), t1, steps);
    let states = times
        .iter()
        .map(|&t| state.with_time(state.energy(), t))
        .collect::<Result<Vec<_>>>()?;
    let n_max = match n_max {
        Some(n) => n,
        None => states
            .iter()
            .map(|s| max_safe_order(s, c))
            .min()
            .unwrap_or(0),
    };
    let mut table = Table::new(TIMEWAVE_HEADER);
    for (t, st) in times.iter().zip(&states) {
        let sum = time_sum(st, n_max, c)?;
        let oracle = time_sum_closed_form(st, c);
        table.push(vec![
            Cell::from(*t),
            Cell::from(sum.re),
            Cell::from(sum.im),
            Cell::from(oracle.re),
            Cell::from(oracle.im),
            Cell::from((sum - oracle).norm()),
        ]);
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    #[serde(serialize_with = "serialize_real")]
    pub w_classical: f64,
    #[serde(serialize_with = "serialize_real")]
    pub w_quantum: f64,
    pub regime: Regime,
    #[serde(serialize_with = "serialize_real")]
    pub reconstruct_error: f64,
    #[serde(serialize_with = "serialize_real")]
    pub dual_reconstruct_error: f64,
    #[serde(serialize_with = "serialize_real")]
    pub selfdual_phase_re: f64,
    #[serde(serialize_with = "serialize_real")]
    pub selfdual_phase_im: f64,
    pub swap_check: bool,
}

pub fn duality_report(state: &ActionState, tol: f64, threshold: f64) -> Result<DualityReport> {
    let classical = quantum_ratio(state, Regime::Semiclassical)?;
    let quantum = quantum_ratio(state, Regime::StrongQuantum)?;
    let regime = classify_regime(state, threshold)?;

    let direct = reconstruct(classical, default_order(classical, tol)?)?;
    let n_dual = default_order(quantum, tol)?;
    let dual = dual_reconstruct(state, n_dual)?;

    let swapped = state.swapped();
    let phase = selfdual_phase(state);
    let phase_swapped = selfdual_phase(&swapped);
    let phase_symmetric = phase.re.to_bits() == phase_swapped.re.to_bits()
        && phase.im.to_bits() == phase_swapped.im.to_bits();
    let expansion_symmetric =
        dual == reconstruct(quantum_ratio(&swapped, Regime::Semiclassical)?, n_dual)?;

    Ok(DualityReport {
        w_classical: classical.value(),
        w_quantum: quantum.value(),
        regime,
        reconstruct_error: direct.abs_error,
        dual_reconstruct_error: dual.abs_error,
        selfdual_phase_re: phase.re,
        selfdual_phase_im: phase.im,
        swap_check: phase_symmetric && expansion_symmetric,
    })
}
