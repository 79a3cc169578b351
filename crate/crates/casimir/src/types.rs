//! Shared domain types. All of these are plain immutable values.

use crate::error::{CasimirError, Result};
use crate::permittivity::Material;

/// Gaps below this are rejected: the continuum picture of the layers has
/// broken down and the integral cost grows like 1/d.
pub const MIN_GAP_NM: f64 = 1e-3;

/// A wavenumber on the imaginary-frequency axis or transverse to the layers,
/// in inverse nanometres. Non-negative by construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WaveNumber(f64);

impl WaveNumber {
    pub fn new(inv_nm: f64) -> Result<Self> {
        if !inv_nm.is_finite() || inv_nm < 0.0 {
            return Err(CasimirError::InvalidParameter(format!(
                "wavenumber must be finite and non-negative, got {inv_nm}"
            )));
        }
        Ok(Self(inv_nm))
    }

    pub const ZERO: WaveNumber = WaveNumber(0.0);

    pub fn inv_nm(self) -> f64 {
        self.0
    }
}

/// A length (gap or layer thickness) in nanometres. Non-negative; a zero
/// thickness is meaningful (absent slab), a zero gap is not.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Length(f64);

impl Length {
    pub fn new(nm: f64) -> Result<Self> {
        if !nm.is_finite() || nm < 0.0 {
            return Err(CasimirError::InvalidParameter(format!(
                "length must be finite and non-negative, got {nm}"
            )));
        }
        Ok(Self(nm))
    }

    pub const ZERO: Length = Length(0.0);

    pub fn nm(self) -> f64 {
        self.0
    }

    /// Check this length is usable as a gap.
    pub fn require_positive_gap(self) -> Result<()> {
        if self.0 < MIN_GAP_NM {
            return Err(CasimirError::GapZero { min_nm: MIN_GAP_NM });
        }
        Ok(())
    }
}

/// Force per unit area in N/m^2. Negative means attraction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Pressure(f64);

impl Pressure {
    pub fn new(n_per_m2: f64) -> Result<Self> {
        if !n_per_m2.is_finite() {
            return Err(CasimirError::InvalidParameter(format!(
                "pressure must be finite, got {n_per_m2}"
            )));
        }
        Ok(Self(n_per_m2))
    }

    pub fn n_per_m2(self) -> f64 {
        self.0
    }
}

/// Layer arrangement across the gap.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Perfectly reflecting plates (reflection factor one for both modes).
    IdealCasimir,
    /// Two identical finite-thickness slabs. Unequal thicknesses are not
    /// supported; for thin slabs the force carries a t1*t2 product law that
    /// the thin-plate asymptote covers at the estimate level.
    SlabSlab { thickness: Length },
    /// Two half-spaces (the slab problem at infinite thickness).
    HalfSpaces,
    /// Two slabs with the gap filled by a second dielectric.
    FilledGap {
        thickness: Length,
        gap_material: Material,
    },
    /// A single free-standing film of the plate material, thickness = gap.
    FilmInVacuum,
    /// Two infinitesimally thin conductive sheets with normalized
    /// conductivity zeta.
    ConductiveSheets { zeta: f64 },
}

/// Geometry plus materials plus gap: everything a pressure evaluation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub geometry: Geometry,
    pub plate_material: Material,
    pub gap: Length,
}

impl Configuration {
    pub fn new(geometry: Geometry, plate_material: Material, gap: Length) -> Result<Self> {
        if let Geometry::ConductiveSheets { zeta } = &geometry {
            if !zeta.is_finite() || *zeta <= 0.0 {
                return Err(CasimirError::InvalidParameter(format!(
                    "sheet conductivity zeta must be positive, got {zeta}"
                )));
            }
        }
        if let Geometry::SlabSlab { thickness } = &geometry {
            if thickness.nm() <= 0.0 {
                return Err(CasimirError::InvalidParameter(
                    "slab thickness must be positive".into(),
                ));
            }
        }
        Ok(Self {
            geometry,
            plate_material,
            gap,
        })
    }

    pub fn ideal(gap: Length) -> Self {
        Self {
            geometry: Geometry::IdealCasimir,
            plate_material: Material::vacuum(),
            gap,
        }
    }

    pub fn half_spaces(material: Material, gap: Length) -> Self {
        Self {
            geometry: Geometry::HalfSpaces,
            plate_material: material,
            gap,
        }
    }

    pub fn slabs(material: Material, thickness: Length, gap: Length) -> Self {
        Self {
            geometry: Geometry::SlabSlab { thickness },
            plate_material: material,
            gap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_rejects_negative_and_nan() {
        assert!(WaveNumber::new(-1.0).is_err());
        assert!(WaveNumber::new(f64::NAN).is_err());
        assert!(WaveNumber::new(0.0).is_ok());
    }

    #[test]
    fn gap_floor_is_enforced() {
        assert!(Length::new(1e-4).unwrap().require_positive_gap().is_err());
        assert!(Length::new(1.0).unwrap().require_positive_gap().is_ok());
    }

    #[test]
    fn types_are_plain_values() {
        let a = Length::new(3.0).unwrap();
        let b = a;
        assert_eq!(a, b);
        let p = Pressure::new(-1.0).unwrap();
        assert_eq!(p, p);
    }
}
