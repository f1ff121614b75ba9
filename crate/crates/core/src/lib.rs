//! Partial-wave ("action wave") decomposition of the phase `exp(iS/hbar)`
//! into integer-order Bessel waves, with the `S <-> hbar` duality on the
//! auxiliary Riemann sphere.
//!
//! ```
//! use action_waves::{reconstruct, required_order, BesselArgument};
//!
//! let w = BesselArgument::new(1.0).unwrap();
//! let n = required_order(w, 1e-13).unwrap();
//! let report = reconstruct(w, n).unwrap();
//! assert!(report.abs_error <= 1e-12);
//! ```

pub mod bessel;
pub mod cli;
pub mod duality;
pub mod error;
pub mod partial_waves;
pub mod table;
pub mod verify;

pub use bessel::{
    bessel_j, bessel_row, bessel_series_oracle, casimir, ode_residual, BesselArgument, BesselRow,
    N_MAX, W_MAX,
};
pub use duality::{
    chart_invert, classify_regime, dual_reconstruct, quantum_ratio, selfdual_phase, Chart, Regime,
    SpherePoint,
};
pub use error::{Error, Result};
pub use partial_waves::{
    angular_eigenfunction, radial_coordinate, reconstruct, required_order, tail_bound, time_sum,
    time_sum_closed_form, time_term, ActionState, ExpansionReport, WaveTerm,
};
