//! Physical constants and the single nm -> SI conversion point.

use crate::error::Result;
use crate::types::Length;

/// CODATA 2018 constants. Immutable after construction; the engine uses
/// [`PhysicalConstants::codata`] everywhere, but validation can inject a
/// perturbed set to prove the cross-checks are sensitive to them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
}

impl PhysicalConstants {
    pub const fn codata() -> Self {
        Self {
            hbar: 1.054_571_817e-34,
            c: 299_792_458.0,
            k_b: 1.380_649e-23,
        }
    }

    /// hbar*c in J m.
    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.c
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// Inverse nanometres per inverse metre and its reciprocal. The round trip
/// is exact to 1 ulp because both factors are powers of ten.
pub const INV_NM_PER_INV_M: f64 = 1e-9;
pub const INV_M_PER_INV_NM: f64 = 1e9;

/// Conversion factor for a spectral integral carried out in inverse
/// nanometres (dimension nm^-4) to an SI pressure in N/m^2:
/// hbar*c/(2 pi^2) * (1e9)^4.
///
/// The gap only sets the scale of the integrand, not of the prefactor:
/// `unit_pressure_prefactor(d) == unit_pressure_prefactor(2 d)`.
pub fn unit_pressure_prefactor(d: Length) -> Result<f64> {
    d.require_positive_gap()?;
    Ok(unit_pressure_prefactor_with(&PhysicalConstants::codata()))
}

pub(crate) fn unit_pressure_prefactor_with(constants: &PhysicalConstants) -> f64 {
    constants.hbar_c() / (2.0 * std::f64::consts::PI.powi(2)) * 1e36
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactor_reproduces_ideal_plate_value() {
        // pi^2/240 * prefactor * 2 pi^2 / d^4 must equal the ideal-plate
        // magnitude pi^2 hbar c / (240 d^4); checked at d = 10 nm.
        let pf = unit_pressure_prefactor(Length::new(10.0).unwrap()).unwrap();
        let c = PhysicalConstants::codata();
        let ideal = std::f64::consts::PI.powi(2) * c.hbar_c() / (240.0 * (10e-9f64).powi(4));
        let via_prefactor = pf * std::f64::consts::PI.powi(4) / 120.0 / 10f64.powi(4);
        assert!((via_prefactor - ideal).abs() / ideal < 1e-12);
        assert!((ideal - 1.300e5).abs() / 1.300e5 < 1e-3);
    }

    #[test]
    fn prefactor_independent_of_gap() {
        let a = unit_pressure_prefactor(Length::new(1.0).unwrap()).unwrap();
        let b = unit_pressure_prefactor(Length::new(2.0).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nm_round_trip_is_exact() {
        let k = 0.137;
        let back = k * INV_M_PER_INV_NM * INV_NM_PER_INV_M;
        assert_eq!(back, k);
    }
}
