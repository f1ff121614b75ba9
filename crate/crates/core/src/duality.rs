//! The two-chart atlas of the auxiliary Riemann sphere and the `S <-> hbar` exchange.
//!
//! Chart `Z` carries `z = rho e^{i phi}` with `rho = S/hbar`; chart `ZTilde`
//! carries `z~ = -1/z` with `rho~ = hbar/S` and `phi~ = -(phi + pi)`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::bessel::BesselArgument;
use crate::error::{Error, Result};
use crate::partial_waves::{reconstruct, ActionState, ExpansionReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Z,
    ZTilde,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::Z => Chart::ZTilde,
            Chart::ZTilde => Chart::Z,
        }
    }

    /// The regime whose expansion lives in this chart.
    pub fn regime(self) -> Regime {
        match self {
            Chart::Z => Regime::Semiclassical,
            Chart::ZTilde => Regime::StrongQuantum,
        }
    }
}

/// Which ratio feeds the expansion. Semiclassical waves are outgoing from
/// `z = 0`; strong-quantum waves are incoming to it, with opposite chirality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    Semiclassical,
    StrongQuantum,
}

impl Regime {
    pub fn chart(self) -> Chart {
        match self {
            Regime::Semiclassical => Chart::Z,
            Regime::StrongQuantum => Chart::ZTilde,
        }
    }

    pub fn direction(self) -> &'static str {
        match self {
            Regime::Semiclassical => "outgoing",
            Regime::StrongQuantum => "incoming",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Semiclassical => "SEMICLASSICAL",
            Regime::StrongQuantum => "STRONG_QUANTUM",
        })
    }
}

/// Reduce an angle into `(-pi, pi]`.
pub fn normalize_angle(angle: f64) -> f64 {
    if angle > -PI && angle <= PI {
        return angle;
    }
    let reduced = angle.rem_euclid(TAU);
    if reduced > PI {
        reduced - TAU
    } else {
        reduced
    }
}

/// A point of the sphere expressed in one chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub chart: Chart,
    pub coord: Complex64,
    pub rho: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn from_polar(chart: Chart, rho: f64, phi: f64) -> Result<Self> {
        if !rho.is_finite() || rho < 0.0 {
            return Err(Error::domain("rho", rho, "must be non-negative and finite"));
        }
        if !phi.is_finite() {
            return Err(Error::domain("phi", phi, "is not finite"));
        }
        let phi = normalize_angle(phi);
        Ok(SpherePoint {
            chart,
            coord: Complex64::from_polar(rho, phi),
            rho,
            phi,
        })
    }

    pub fn from_coord(chart: Chart, coord: Complex64) -> Result<Self> {
        if !coord.is_finite() {
            return Err(Error::domain("coord", f64::NAN, "is not finite"));
        }
        Ok(SpherePoint {
            chart,
            coord,
            rho: coord.norm(),
            phi: normalize_angle(coord.arg()),
        })
    }

    /// `true` at `rho = 0`: the wave origin in `Z`, the point at infinity of `Z` in `ZTilde`.
    pub fn is_origin(&self) -> bool {
        self.rho == 0.0
    }

    /// `|coord - rho e^{i phi}|`.
    pub fn polar_mismatch(&self) -> f64 {
        (self.coord - Complex64::from_polar(self.rho, self.phi)).norm()
    }
}

/// The same point in the other chart, `coord -> -1/coord`.
///
/// A chart origin is sent to the other chart's origin.
pub fn chart_invert(p: &SpherePoint) -> SpherePoint {
    let chart = p.chart.other();
    if p.is_origin() {
        return SpherePoint { chart, ..*p };
    }
    SpherePoint {
        chart,
        coord: -p.coord.inv(),
        rho: 1.0 / p.rho,
        phi: normalize_angle(-(p.phi + PI)),
    }
}

/// `S/hbar` for the semiclassical regime, `hbar/S` for the strong-quantum one.
pub fn quantum_ratio(state: &ActionState, regime: Regime) -> Result<BesselArgument> {
    match regime {
        Regime::Semiclassical => BesselArgument::named("S/hbar", state.w_classical()),
        Regime::StrongQuantum => BesselArgument::named("hbar/S", state.w_quantum()),
    }
}

/// Expansion of `e^{i hbar/S}`; literally [`reconstruct`] at `w = hbar/S`.
pub fn dual_reconstruct(state: &ActionState, n_max: usize) -> Result<ExpansionReport> {
    reconstruct(quantum_ratio(state, Regime::StrongQuantum)?, n_max)
}

/// `exp(i (S/hbar + hbar/S))`, formed as the product `e^{i S/hbar} e^{i hbar/S}`.
///
/// Complex multiplication of the two factors is commutative in binary64, so
/// the result is bitwise symmetric under `S <-> hbar`. Accepts any valid
/// state: no Bessel function is evaluated, so the argument cap does not apply.
pub fn selfdual_phase(state: &ActionState) -> Complex64 {
    let classical = Complex64::from_polar(1.0, state.w_classical());
    let quantum = Complex64::from_polar(1.0, state.w_quantum());
    classical * quantum
}

/// Semiclassical when `S/hbar >= threshold`, strong-quantum otherwise.
pub fn classify_regime(state: &ActionState, threshold: f64) -> Result<Regime> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::domain(
            "threshold",
            threshold,
            "must be positive and finite",
        ));
    }
    Ok(if state.w_classical() >= threshold {
        Regime::Semiclassical
    } else {
        Regime::StrongQuantum
    })
}
