//! Dielectric permittivity models on the imaginary-frequency axis.
//!
//! With the frequency continued as omega = -i c k (k real, in 1/nm) every
//! oscillator term is real and positive, so the whole force path runs in
//! real arithmetic.

use crate::error::{CasimirError, Result};
use crate::types::WaveNumber;

/// A single Lorentz oscillator in wavenumber parameterization: plasma
/// wavenumber k_p (strength), resonance wavenumber k_r (transition), and
/// collision wavenumber k_c (relaxation). A free-carrier (Drude) term is an
/// oscillator with k_r = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorTerm {
    pub k_p: WaveNumber,
    pub k_r: WaveNumber,
    pub k_c: WaveNumber,
}

impl OscillatorTerm {
    pub fn new(k_p: f64, k_r: f64, k_c: f64) -> Result<Self> {
        Ok(Self {
            k_p: WaveNumber::new(k_p)?,
            k_r: WaveNumber::new(k_r)?,
            k_c: WaveNumber::new(k_c)?,
        })
    }

    /// Contribution k_p^2 / (k_r^2 + k^2 + k_c k) of a bound oscillator.
    fn bound_susceptibility(&self, k: f64) -> f64 {
        let kp = self.k_p.inv_nm();
        kp * kp / (self.k_r.inv_nm().powi(2) + k * k + self.k_c.inv_nm() * k)
    }
}

/// How the oscillator sum S enters the permittivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermittivityModel {
    /// Dilute limit: eps = 1 + S. Valid whenever the oscillator density is
    /// small; the engine default.
    #[default]
    SmallDensity,
    /// Internal-field corrected form eps = (1 + 2S/3)/(1 - S/3). Rejected at
    /// evaluation when the denominator is not positive.
    ClausiusMossotti,
}

/// A dispersive material: bound oscillators, an optional free-carrier term,
/// and an optional binding cutoff k_s that regularizes the free-carrier pole
/// at k = 0 (finite structures cannot have truly free electrons).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Material {
    bound_terms: Vec<OscillatorTerm>,
    drude: Option<OscillatorTerm>,
    drude_binding: Option<WaveNumber>,
    model: PermittivityModel,
}

impl Material {
    pub fn new(
        bound_terms: Vec<OscillatorTerm>,
        drude: Option<OscillatorTerm>,
        drude_binding: Option<WaveNumber>,
        model: PermittivityModel,
    ) -> Result<Self> {
        if let Some(term) = &drude {
            if term.k_r.inv_nm() != 0.0 {
                return Err(CasimirError::InvalidParameter(
                    "free-carrier term must have k_r = 0".into(),
                ));
            }
        }
        if drude_binding.is_some() && drude.is_none() {
            return Err(CasimirError::InvalidParameter(
                "binding cutoff k_s given without a free-carrier term".into(),
            ));
        }
        Ok(Self {
            bound_terms,
            drude,
            drude_binding,
            model,
        })
    }

    /// eps == 1 identically.
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn is_vacuum(&self) -> bool {
        self.bound_terms.is_empty() && self.drude.is_none()
    }

    pub fn bound_terms(&self) -> &[OscillatorTerm] {
        &self.bound_terms
    }

    pub fn drude(&self) -> Option<&OscillatorTerm> {
        self.drude.as_ref()
    }

    pub fn drude_binding(&self) -> Option<WaveNumber> {
        self.drude_binding
    }

    pub fn model(&self) -> PermittivityModel {
        self.model
    }

    /// The built-in six-oscillator reference dielectric: k_p = 0.05 for every
    /// term, resonances at 0.01, 0.02, 0.03, 0.04, 0.05, 0.08 and collision
    /// wavenumber 1e-6 (all 1/nm). Static permittivity 37.98.
    pub fn default_dielectric() -> Self {
        let resonances = [0.01, 0.02, 0.03, 0.04, 0.05, 0.08];
        let bound_terms = resonances
            .iter()
            .map(|&k_r| OscillatorTerm::new(0.05, k_r, 1e-6).unwrap())
            .collect();
        Self {
            bound_terms,
            drude: None,
            drude_binding: None,
            model: PermittivityModel::SmallDensity,
        }
    }

    /// The reference dielectric plus a free-carrier term k_p = 0.05,
    /// k_c = 1e-6, with the binding cutoff defaulted to k_s = k_c.
    pub fn default_conductive() -> Self {
        let mut material = Self::default_dielectric();
        material.drude = Some(OscillatorTerm::new(0.05, 0.0, 1e-6).unwrap());
        material.drude_binding = Some(WaveNumber::new(1e-6).unwrap());
        material
    }

    /// Single-term surrogate with a chosen static permittivity: one bound
    /// oscillator with k_p/k_r fixed by eps_static (k_r is set to the given
    /// transition wavenumber).
    pub fn single_oscillator(eps_static: f64, k_r: f64) -> Result<Self> {
        if eps_static <= 1.0 {
            return Err(CasimirError::EpsAtMostOne { eps0: eps_static });
        }
        let k_p = k_r * (eps_static - 1.0).sqrt();
        Ok(Self {
            bound_terms: vec![OscillatorTerm::new(k_p, k_r, 0.0)?],
            drude: None,
            drude_binding: None,
            model: PermittivityModel::SmallDensity,
        })
    }

    /// Largest bound resonance wavenumber, 0 if there are no bound terms.
    pub fn max_resonance(&self) -> f64 {
        self.bound_terms
            .iter()
            .map(|t| t.k_r.inv_nm())
            .fold(0.0, f64::max)
    }

    /// Wavenumbers where the spectral structure changes fastest: the smallest
    /// collision wavenumber and every bound resonance. Used for subdomain
    /// splitting of the radial integration.
    pub fn subdomain_edges(&self) -> Vec<f64> {
        let mut edges: Vec<f64> = self
            .bound_terms
            .iter()
            .map(|t| t.k_r.inv_nm())
            .filter(|&k| k > 0.0)
            .collect();
        let min_kc = self
            .bound_terms
            .iter()
            .map(|t| t.k_c.inv_nm())
            .chain(self.drude.iter().map(|t| t.k_c.inv_nm()))
            .filter(|&k| k > 0.0)
            .fold(f64::INFINITY, f64::min);
        if min_kc.is_finite() {
            edges.push(min_kc);
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();
        edges
    }

    /// Oscillator sum S(k), including the free-carrier term.
    fn susceptibility_sum(&self, k: f64) -> Result<f64> {
        let mut sum: f64 = self.bound_terms.iter().map(|t| t.bound_susceptibility(k)).sum();
        if let Some(term) = &self.drude {
            match self.drude_binding {
                Some(k_s) => {
                    sum += chi_drude_bound(term, k_s, WaveNumber::new(k)?)?;
                }
                None => {
                    if k == 0.0 {
                        return Err(CasimirError::DrudeAtZero);
                    }
                    let kp = term.k_p.inv_nm();
                    sum += kp * kp / (k * k + term.k_c.inv_nm() * k);
                }
            }
        }
        Ok(sum)
    }
}

/// Permittivity eps(k) on the imaginary axis, k in 1/nm.
pub fn eps_imag_axis(material: &Material, k: WaveNumber) -> Result<f64> {
    let sum = material.susceptibility_sum(k.inv_nm())?;
    match material.model() {
        PermittivityModel::SmallDensity => Ok(1.0 + sum),
        PermittivityModel::ClausiusMossotti => {
            let denominator = 1.0 - sum / 3.0;
            if denominator <= 0.0 {
                return Err(CasimirError::CMDenominatorNonpositive { sum, denominator });
            }
            Ok((1.0 + 2.0 * sum / 3.0) / denominator)
        }
    }
}

/// Static permittivity eps(0). Requires every bound term to have k_r > 0 and
/// the free-carrier term (if any) to be regularized by a binding cutoff.
pub fn eps_static(material: &Material) -> Result<f64> {
    if material
        .bound_terms()
        .iter()
        .any(|t| t.k_r.inv_nm() == 0.0)
    {
        return Err(CasimirError::DrudeAtZero);
    }
    eps_imag_axis(material, WaveNumber::ZERO)
}

/// Bound-variant free-carrier susceptibility k_p^2 / (k_s^2 + k^2 - k_c k).
/// The minus sign on the collision term is kept as given; the domain guard
/// makes the expression safe for the tiny collision wavenumbers it is meant
/// for.
pub fn chi_drude_bound(term: &OscillatorTerm, k_s: WaveNumber, k: WaveNumber) -> Result<f64> {
    let kv = k.inv_nm();
    let denominator = k_s.inv_nm().powi(2) + kv * kv - term.k_c.inv_nm() * kv;
    if denominator <= 0.0 {
        return Err(CasimirError::BoundDenominatorNonpositive { denominator });
    }
    let kp = term.k_p.inv_nm();
    Ok(kp * kp / denominator)
}
