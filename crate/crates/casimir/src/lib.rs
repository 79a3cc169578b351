//! Casimir/van der Waals pressure between parallel dielectric layers.
//!
//! The pressure is obtained by summing the perturbed plasmon-polariton mode
//! spectrum of the layered structure, evaluated as a two-dimensional integral
//! over imaginary frequency and transverse wavenumber. Permittivities are
//! multi-oscillator models evaluated on the imaginary axis, where everything
//! is real and monotone. Finite temperature is handled by a Matsubara sum.
//!
//! All spectral quantities are carried in inverse nanometres; conversion to
//! SI happens once, in the pressure prefactor.

pub mod asymptotics;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod gauss;
pub mod permittivity;
pub mod quadrature;
pub mod thermal;
pub mod types;
pub mod validation;

pub use asymptotics::{Regime, RegimeEstimate};
pub use constants::PhysicalConstants;
pub use dispersion::{AxisPoint, InverseCharValue};
pub use error::{CasimirError, Result};
pub use permittivity::{eps_imag_axis, eps_static, Material, OscillatorTerm, PermittivityModel};
pub use quadrature::{pressure_p_k_form, pressure_zero_t, PressureResult, QuadratureSettings};
pub use thermal::{
    pressure_finite_t, pressure_high_t, pressure_low_t_correction, MatsubaraGrid, Temperature,
    ZeroFreqConvention,
};
pub use types::{Configuration, Geometry, Length, Pressure, WaveNumber};
pub use validation::{run_suite, run_suite_filtered, OracleScheme, OracleSettings, SuiteReport};
