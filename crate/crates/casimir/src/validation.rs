//! Independent brute-force evaluation of the pressure integral and the
//! cross-check suite that ties quadrature, thermal, dispersion, and the
//! asymptotic estimates together.
//!
//! The brute-force path shares only the dispersion functions with the
//! production quadrature: it integrates on a plain Cartesian (kappa, k) grid
//! with Simpson (or trapezoid) weights and Richardson refinement, no polar
//! substitution and no closed-form tail.

use rayon::prelude::*;

use crate::asymptotics::casimir_ideal_with;
use crate::constants::{unit_pressure_prefactor, PhysicalConstants};
use crate::dispersion::{inv_f_halfspace, inv_f_impedance, inverse_char_values, AxisPoint};
use crate::error::{CasimirError, Result};
use crate::permittivity::{eps_static, Material};
use crate::quadrature::{
    pressure_p_k_form, pressure_zero_t, tail_closed_form, PressureResult, QuadratureSettings,
};
use crate::thermal::{pressure_finite_t, Temperature};
use crate::types::{Configuration, Length, Pressure, WaveNumber};

/// Grid parameters of the brute-force oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    /// Grid intervals along kappa and k (must be even for Simpson).
    pub grid_kappa: usize,
    pub grid_k: usize,
    /// Cutoffs in 1/nm; default twice the quadrature's radial cutoff.
    pub kappa_max: Option<f64>,
    pub k_max: Option<f64>,
    pub scheme: OracleScheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleScheme {
    Trapezoid,
    #[default]
    Simpson,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            grid_kappa: 8192,
            grid_k: 8192,
            kappa_max: None,
            k_max: None,
            scheme: OracleScheme::Simpson,
        }
    }
}

impl OracleSettings {
    fn validate(&self) -> Result<()> {
        if self.grid_kappa < 256 || self.grid_k < 256 {
            return Err(CasimirError::InvalidParameter(format!(
                "oracle grids must have at least 256 intervals, got {} and {}",
                self.grid_kappa, self.grid_k
            )));
        }
        if self.grid_kappa % 2 != 0 || self.grid_k % 2 != 0 {
            return Err(CasimirError::InvalidParameter(
                "oracle grid interval counts must be even".into(),
            ));
        }
        Ok(())
    }
}

fn composite_weights(n: usize, h: f64, scheme: OracleScheme) -> Vec<f64> {
    match scheme {
        OracleScheme::Trapezoid => {
            let mut w = vec![h; n + 1];
            w[0] = 0.5 * h;
            w[n] = 0.5 * h;
            w
        }
        OracleScheme::Simpson => {
            let mut w = vec![0.0; n + 1];
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = if i == 0 || i == n {
                    h / 3.0
                } else if i % 2 == 1 {
                    4.0 * h / 3.0
                } else {
                    2.0 * h / 3.0
                };
            }
            w
        }
    }
}

/// One full grid pass; the k = 0 column is evaluated just inside the axis
/// (k = 10^-12) where every geometry's limit is well defined.
fn grid_pass(
    config: &Configuration,
    kappa_max: f64,
    k_max: f64,
    n_kappa: usize,
    n_k: usize,
    scheme: OracleScheme,
) -> Result<f64> {
    let h_kappa = kappa_max / n_kappa as f64;
    let h_k = k_max / n_k as f64;
    let w_kappa = composite_weights(n_kappa, h_kappa, scheme);
    let w_k = composite_weights(n_k, h_k, scheme);

    let rows: Vec<f64> = (0..=n_kappa)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let kappa = i as f64 * h_kappa;
            if kappa == 0.0 {
                return Ok(0.0); // integrand carries a kappa factor
            }
            let mut row = 0.0;
            for j in 0..=n_k {
                let k = if j == 0 { 1e-12 } else { j as f64 * h_k };
                let point = AxisPoint::new(WaveNumber::new(kappa)?, WaveNumber::new(k)?);
                let g = inverse_char_values(config, point)?;
                row += w_k[j] * point.k0() * g.sum();
            }
            Ok(w_kappa[i] * kappa * row)
        })
        .collect::<Result<_>>()?;
    Ok(rows.iter().sum())
}

/// Brute-force pressure on a dense Cartesian grid with Richardson
/// refinement. Slow; exists as ground truth for the production quadrature.
pub fn pressure_bruteforce(
    config: &Configuration,
    oracle: &OracleSettings,
) -> Result<PressureResult> {
    config.gap.require_positive_gap()?;
    oracle.validate()?;
    let chi_max = QuadratureSettings::chi_max_rule(config);
    let kappa_max = oracle.kappa_max.unwrap_or(2.0 * chi_max);
    let k_max = oracle.k_max.unwrap_or(2.0 * chi_max);

    let coarse = grid_pass(
        config,
        kappa_max,
        k_max,
        oracle.grid_kappa / 2,
        oracle.grid_k / 2,
        oracle.scheme,
    )?;
    let fine = grid_pass(
        config,
        kappa_max,
        k_max,
        oracle.grid_kappa,
        oracle.grid_k,
        oracle.scheme,
    )?;
    let refined = match oracle.scheme {
        OracleScheme::Simpson => (16.0 * fine - coarse) / 15.0,
        OracleScheme::Trapezoid => (4.0 * fine - coarse) / 3.0,
    };

    let prefactor = unit_pressure_prefactor(config.gap)?;
    let pressure = -prefactor * refined;
    let change = prefactor * (fine - coarse).abs();
    if pressure != 0.0 && change / pressure.abs() > 1e-2 {
        return Err(CasimirError::NonConvergent {
            relative_change: change / pressure.abs(),
            limit: 1e-2,
        });
    }
    // Truncation bound from the closed-form tail with unit brackets.
    let tail_bound = prefactor
        * kappa_max.min(k_max)
        * tail_closed_form(
            WaveNumber::new(kappa_max.min(k_max))?,
            config.gap,
            1.0,
            1.0,
        )?;
    let evals = ((oracle.grid_kappa + 1) * (oracle.grid_k + 1)
        + (oracle.grid_kappa / 2 + 1) * (oracle.grid_k / 2 + 1)) as u64;
    Ok(PressureResult {
        pressure: Pressure::new(pressure)?,
        tail_fraction: if pressure != 0.0 {
            tail_bound / pressure.abs()
        } else {
            0.0
        },
        evaluations: evals,
        est_error: change.max(tail_bound),
    })
}

/// Result of one suite item.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Measured figure (usually a relative deviation).
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// A full cross-check run.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<32} measured={:.3e} tolerance={:.3e} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{}: {}/{} checks passed\n",
            if self.all_passed() { "OK" } else { "FAILED" },
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,passed,measured,tolerance\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e}\n",
                c.name, c.passed, c.measured, c.tolerance
            ));
        }
        out
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn check(name: &'static str, measured: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed: measured.is_finite() && measured <= tolerance,
        measured,
        tolerance,
        detail,
    }
}

fn fail(name: &'static str, err: &CasimirError) -> CheckResult {
    CheckResult {
        name,
        passed: false,
        measured: f64::NAN,
        tolerance: 0.0,
        detail: format!("error: {err}"),
    }
}

/// Names of the suite checks, in execution order.
pub const CHECK_NAMES: [&str; 10] = [
    "ideal-casimir-quadrature",
    "dual-parameterization",
    "bruteforce-vs-quadrature",
    "tail-closed-form",
    "impedance-vs-fresnel",
    "slab-saturation",
    "large-distance-slope",
    "matsubara-zero-t-limit",
    "three-digit-reproducibility",
    "static-permittivity-reference",
];

/// Cross-check suite with the standard physical constants.
pub fn run_suite() -> SuiteReport {
    run_suite_with(&PhysicalConstants::codata())
}

/// Cross-check suite with injectable constants for the analytic references.
/// Feeding perturbed constants makes the analytic-reference checks fail,
/// which proves the suite is sensitive to them.
pub fn run_suite_with(constants: &PhysicalConstants) -> SuiteReport {
    run_suite_filtered_with(constants, None)
}

/// Run only the checks whose name contains `filter`; `None` runs everything.
/// A filter matching nothing yields an empty (vacuously passing) report.
pub fn run_suite_filtered(filter: Option<&str>) -> SuiteReport {
    run_suite_filtered_with(&PhysicalConstants::codata(), filter)
}

pub fn run_suite_filtered_with(constants: &PhysicalConstants, filter: Option<&str>) -> SuiteReport {
    let settings = QuadratureSettings {
        n_theta: 300,
        n_chi: 3000,
        ..QuadratureSettings::default()
    };
    let material = Material::default_dielectric();
    let d10 = Length::new(10.0).unwrap();

    type Item = Box<dyn Fn() -> CheckResult + Send + Sync>;
    let items: Vec<Item> = vec![
        Box::new({
            let settings = settings.clone();
            let constants = *constants;
            move || {
                let config = Configuration::ideal(d10);
                let numeric = match pressure_zero_t(&config, &settings) {
                    Ok(r) => r.pressure.n_per_m2(),
                    Err(e) => return fail("ideal-casimir-quadrature", &e),
                };
                let analytic = casimir_ideal_with(&constants, d10).unwrap().n_per_m2();
                check(
                    "ideal-casimir-quadrature",
                    rel_diff(numeric, analytic),
                    1e-4,
                    format!("quadrature {numeric:.6e} vs closed form {analytic:.6e}"),
                )
            }
        }),
        Box::new({
            let settings = settings.clone();
            let material = material.clone();
            move || {
                let config = Configuration::half_spaces(material.clone(), d10);
                let (polar, pk) = match (
                    pressure_zero_t(&config, &settings),
                    pressure_p_k_form(&config, &settings),
                ) {
                    (Ok(a), Ok(b)) => (a.pressure.n_per_m2(), b.pressure.n_per_m2()),
                    (Err(e), _) | (_, Err(e)) => return fail("dual-parameterization", &e),
                };
                check(
                    "dual-parameterization",
                    rel_diff(polar, pk),
                    1e-4,
                    format!("polar {polar:.6e} vs p-k {pk:.6e}"),
                )
            }
        }),
        Box::new({
            let settings = settings.clone();
            let material = material.clone();
            move || {
                let config = Configuration::half_spaces(material.clone(), d10);
                let oracle = OracleSettings {
                    grid_kappa: 4096,
                    grid_k: 4096,
                    ..OracleSettings::default()
                };
                let (fast, slow) = match (
                    pressure_zero_t(&config, &settings),
                    pressure_bruteforce(&config, &oracle),
                ) {
                    (Ok(a), Ok(b)) => (a.pressure.n_per_m2(), b.pressure.n_per_m2()),
                    (Err(e), _) | (_, Err(e)) => return fail("bruteforce-vs-quadrature", &e),
                };
                check(
                    "bruteforce-vs-quadrature",
                    rel_diff(fast, slow),
                    1e-4,
                    format!("quadrature {fast:.6e} vs brute force {slow:.6e}"),
                )
            }
        }),
        Box::new(move || {
            let chi0 = WaveNumber::new(0.7).unwrap();
            let d = Length::new(3.0).unwrap();
            let closed = tail_closed_form(chi0, d, 1.9417, 1.9083).unwrap();
            let numeric = crate::gauss::integrate(400, 0.7, 0.7 + 30.0 / 3.0, |chi| {
                chi * chi * (-2.0 * chi * 3.0).exp() * (1.0 / 1.9417 + 1.0 / 1.9083)
            });
            check(
                "tail-closed-form",
                rel_diff(closed, numeric),
                1e-10,
                format!("closed {closed:.12e} vs numeric {numeric:.12e}"),
            )
        }),
        Box::new(move || {
            let mut worst: f64 = 0.0;
            for &(kappa, k, eps) in
                &[(0.1, 0.2, 5.6), (0.02, 0.01, 37.98), (1.0, 0.7, 2.0)]
            {
                let p = AxisPoint::new(
                    WaveNumber::new(kappa).unwrap(),
                    WaveNumber::new(k).unwrap(),
                );
                let a = inv_f_impedance(p, d10, eps).unwrap();
                let b = inv_f_halfspace(p, d10, eps).unwrap();
                worst = worst.max(rel_diff(a.g_e, b.g_e)).max(rel_diff(a.g_h, b.g_h));
            }
            check(
                "impedance-vs-fresnel",
                worst,
                1e-10,
                "half-space functions from impedance mismatch".into(),
            )
        }),
        Box::new({
            let settings = settings.clone();
            let material = material.clone();
            move || {
                let slab = Configuration::slabs(material.clone(), Length::new(20.0).unwrap(), d10);
                let half = Configuration::half_spaces(material.clone(), d10);
                let (p_slab, p_half) = match (
                    pressure_zero_t(&slab, &settings),
                    pressure_zero_t(&half, &settings),
                ) {
                    (Ok(a), Ok(b)) => (a.pressure.n_per_m2(), b.pressure.n_per_m2()),
                    (Err(e), _) | (_, Err(e)) => return fail("slab-saturation", &e),
                };
                let ratio = p_slab.abs() / p_half.abs();
                check(
                    "slab-saturation",
                    1.0 - ratio,
                    0.05,
                    format!("|P(t=20)|/|P(inf)| = {ratio:.4} at d = 10 nm"),
                )
            }
        }),
        Box::new({
            let settings = settings.clone();
            let material = material.clone();
            move || {
                let mut pressures = Vec::new();
                for d in [500.0, 2000.0] {
                    let config =
                        Configuration::half_spaces(material.clone(), Length::new(d).unwrap());
                    match pressure_zero_t(&config, &settings) {
                        Ok(r) => pressures.push(r.pressure.n_per_m2().abs()),
                        Err(e) => return fail("large-distance-slope", &e),
                    }
                }
                let slope = (pressures[1] / pressures[0]).ln() / (2000.0f64 / 500.0).ln();
                check(
                    "large-distance-slope",
                    (slope + 4.0).abs(),
                    0.05,
                    format!("log-log slope {slope:.4} over d in [500, 2000] nm"),
                )
            }
        }),
        Box::new({
            let settings = settings.clone();
            let material = material.clone();
            move || {
                let config =
                    Configuration::half_spaces(material.clone(), Length::new(100.0).unwrap());
                let cold = Temperature::new(10.0).unwrap();
                let (finite, zero) = match (
                    pressure_finite_t(&config, cold, &settings),
                    pressure_zero_t(&config, &settings),
                ) {
                    (Ok(a), Ok(b)) => (a.pressure.n_per_m2(), b.pressure.n_per_m2()),
                    (Err(e), _) | (_, Err(e)) => return fail("matsubara-zero-t-limit", &e),
                };
                check(
                    "matsubara-zero-t-limit",
                    rel_diff(finite, zero),
                    5e-3,
                    format!("Matsubara at 10 K {finite:.6e} vs zero-T {zero:.6e}"),
                )
            }
        }),
        Box::new({
            let settings = settings.clone();
            let material = material.clone();
            move || {
                let config = Configuration::half_spaces(material.clone(), d10);
                let refined = QuadratureSettings {
                    n_theta: settings.n_theta * 2,
                    n_chi: settings.n_chi * 2,
                    ..settings.clone()
                };
                let (base, fine) = match (
                    pressure_zero_t(&config, &settings),
                    pressure_zero_t(&config, &refined),
                ) {
                    (Ok(a), Ok(b)) => (a.pressure.n_per_m2(), b.pressure.n_per_m2()),
                    (Err(e), _) | (_, Err(e)) => return fail("three-digit-reproducibility", &e),
                };
                check(
                    "three-digit-reproducibility",
                    rel_diff(base, fine),
                    1e-3,
                    format!("default {base:.6e} vs refined {fine:.6e}"),
                )
            }
        }),
        Box::new(move || {
            let eps0 = match eps_static(&Material::default_dielectric()) {
                Ok(v) => v,
                Err(e) => return fail("static-permittivity-reference", &e),
            };
            check(
                "static-permittivity-reference",
                rel_diff(eps0, 37.9809027778),
                1e-9,
                format!("eps(0) = {eps0:.10}"),
            )
        }),
    ];

    let checks: Vec<CheckResult> = items
        .par_iter()
        .zip(CHECK_NAMES.par_iter())
        .filter(|(_, name)| filter.map_or(true, |f| name.contains(f)))
        .map(|(item, name)| {
            let result = item();
            debug_assert_eq!(result.name, *name);
            result
        })
        .collect();
    SuiteReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::casimir_ideal;

    fn len(nm: f64) -> Length {
        Length::new(nm).unwrap()
    }

    fn small_oracle() -> OracleSettings {
        OracleSettings {
            grid_kappa: 2048,
            grid_k: 2048,
            ..OracleSettings::default()
        }
    }

    #[test]
    fn bruteforce_reproduces_ideal_plates() {
        let config = Configuration::ideal(len(10.0));
        let result = pressure_bruteforce(&config, &small_oracle()).unwrap();
        let expected = casimir_ideal(len(10.0)).unwrap().n_per_m2();
        assert!(
            (result.pressure.n_per_m2() - expected).abs() / expected.abs() < 1e-3,
            "got {}",
            result.pressure.n_per_m2()
        );
    }

    #[test]
    fn bruteforce_matches_quadrature() {
        let config = Configuration::half_spaces(Material::default_dielectric(), len(10.0));
        let oracle = OracleSettings {
            grid_kappa: 4096,
            grid_k: 4096,
            ..OracleSettings::default()
        };
        let slow = pressure_bruteforce(&config, &oracle).unwrap();
        let fast = pressure_zero_t(
            &config,
            &QuadratureSettings {
                n_theta: 200,
                n_chi: 2000,
                ..QuadratureSettings::default()
            },
        )
        .unwrap();
        let rel = (slow.pressure.n_per_m2() - fast.pressure.n_per_m2()).abs()
            / fast.pressure.n_per_m2().abs();
        assert!(rel < 1e-4, "oracle and quadrature differ by {rel:.3e}");
    }

    #[test]
    fn bruteforce_vacuum_is_zero() {
        let config = Configuration::half_spaces(Material::vacuum(), len(10.0));
        let result = pressure_bruteforce(&config, &small_oracle()).unwrap();
        assert_eq!(result.pressure.n_per_m2(), 0.0);
    }

    #[test]
    fn oracle_settings_validated() {
        let config = Configuration::ideal(len(10.0));
        let too_small = OracleSettings {
            grid_kappa: 100,
            grid_k: 100,
            ..OracleSettings::default()
        };
        assert!(pressure_bruteforce(&config, &too_small).is_err());
        let odd = OracleSettings {
            grid_kappa: 301,
            grid_k: 300,
            ..OracleSettings::default()
        };
        assert!(pressure_bruteforce(&config, &odd).is_err());
    }

    #[test]
    fn trapezoid_scheme_agrees_roughly() {
        let config = Configuration::ideal(len(10.0));
        let trap = pressure_bruteforce(
            &config,
            &OracleSettings {
                scheme: OracleScheme::Trapezoid,
                ..small_oracle()
            },
        )
        .unwrap();
        let expected = casimir_ideal(len(10.0)).unwrap().n_per_m2();
        assert!((trap.pressure.n_per_m2() - expected).abs() / expected.abs() < 1e-2);
    }

    #[test]
    fn corrupted_constants_break_the_casimir_check() {
        let mut constants = PhysicalConstants::codata();
        constants.hbar *= 2.0;
        let report = run_suite_with(&constants);
        let item = report
            .checks
            .iter()
            .find(|c| c.name == "ideal-casimir-quadrature")
            .unwrap();
        assert!(!item.passed);
        // Off by a factor of two: relative deviation 0.5 against the doubled
        // reference.
        assert!((item.measured - 0.5).abs() < 1e-3, "measured {}", item.measured);
    }

    #[test]
    fn report_rendering() {
        let report = SuiteReport {
            checks: vec![CheckResult {
                name: "demo",
                passed: true,
                measured: 1e-6,
                tolerance: 1e-4,
                detail: "x".into(),
            }],
        };
        assert!(report.all_passed());
        assert!(report.to_text().contains("PASS demo"));
        assert!(report.to_csv().starts_with("check,passed,measured,tolerance\n"));
    }
}
