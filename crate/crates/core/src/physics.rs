//! Closed-form cavity-QED estimates for the module's atom/photon interaction.
//!
//! Units: rates (β, Γ, Δ, κ) are in MHz and are used directly as inverse
//! microseconds, with no factor of 2π. Times come out in microseconds.

use std::f64::consts::PI;

use log::warn;

use crate::error::{Error, Result};

/// Absorption budget used when none is given.
pub const DEFAULT_ZETA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct CavityParams {
    pub label: String,
    /// Atom/cavity coupling β.
    pub beta: f64,
    /// Atomic decay rate Γ.
    pub gamma_decay: f64,
    /// Detuning Δ; the minimum allowed by `zeta` when absent.
    pub delta: Option<f64>,
    /// Single-photon absorption budget ζ.
    pub zeta: f64,
    /// Experimentally reported photon storage time, in microseconds.
    pub experimental_time: Option<f64>,
}

impl CavityParams {
    pub fn new(label: impl Into<String>, beta: f64, gamma_decay: f64) -> Result<Self> {
        let params = Self {
            label: label.into(),
            beta,
            gamma_decay,
            delta: None,
            zeta: DEFAULT_ZETA,
            experimental_time: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_zeta(mut self, zeta: f64) -> Result<Self> {
        self.zeta = zeta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = Some(delta);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("beta", self.beta)?;
        positive("gamma", self.gamma_decay)?;
        check_zeta(self.zeta)?;
        if let Some(d) = self.delta {
            positive("delta", d)?;
        }
        Ok(())
    }

    /// Built-in cavity systems: Cs, Rb and NV (also accepted as `NV-`).
    pub fn preset(label: &str) -> Result<Self> {
        let (name, beta, gamma, exp_t) = match label.to_ascii_lowercase().as_str() {
            "cs" => ("Cs", 34.0, 2.6, 0.24),
            "rb" => ("Rb", 366.0, 6.3, 0.0017),
            "nv" | "nv-" => ("NV", 1.0e4, 83.0, 0.0034),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown cavity preset {label:?}"
                )))
            }
        };
        let mut p = Self::new(name, beta, gamma)?;
        p.experimental_time = Some(exp_t);
        Ok(p)
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["Cs", "Rb", "NV"]
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} must be positive"
        )))
    }
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "zeta = {zeta} must lie in (0, 1)"
        )))
    }
}

/// Light shift `δ = -β²/Δ`, valid for `Δ ≫ β`.
pub fn light_shift(beta: f64, delta: f64) -> Result<f64> {
    positive("delta", delta)?;
    positive("beta", beta)?;
    if delta < 10.0 * beta {
        warn!(
            "detuning {delta} is below 10·β = {}; light-shift formula is approximate",
            10.0 * beta
        );
    }
    Ok(-beta * beta / delta)
}

/// Time `t = γΔ/β²` the photon must stay in the cavity to imprint phase γ.
pub fn interaction_time(gamma_phase: f64, delta: f64, beta: f64) -> Result<f64> {
    positive("phase", gamma_phase)?;
    positive("delta", delta)?;
    positive("beta", beta)?;
    Ok(gamma_phase * delta / (beta * beta))
}

/// Required photon storage rate `κ = 1/t = β²/(γΔ)`.
pub fn required_kappa(gamma_phase: f64, delta: f64, beta: f64) -> Result<f64> {
    Ok(1.0 / interaction_time(gamma_phase, delta, beta)?)
}

/// Smallest detuning keeping absorption below ζ: `Δ = β/√ζ`.
pub fn min_detuning(beta: f64, zeta: f64) -> Result<f64> {
    positive("beta", beta)?;
    check_zeta(zeta)?;
    Ok(beta / zeta.sqrt())
}

/// π-phase interaction time at the minimum detuning: `t = π/(β√ζ)`.
pub fn pi_phase_time(beta: f64, zeta: f64) -> Result<f64> {
    positive("beta", beta)?;
    check_zeta(zeta)?;
    Ok(PI / (beta * zeta.sqrt()))
}

/// Photons the atom can see within one coherence time `1/Γ`:
/// `round((1/Γ)/t)`. Values of 0 or 1 mean no multi-photon parity.
pub fn max_parity_weight(interaction_time: f64, gamma_decay: f64) -> usize {
    if !(interaction_time > 0.0 && gamma_decay > 0.0) {
        return 0;
    }
    ((1.0 / gamma_decay) / interaction_time).round().max(0.0) as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub params: CavityParams,
    /// π-phase time at the minimum detuning, µs.
    pub pi_time: f64,
    pub min_detuning: f64,
    /// Detuning actually used: the supplied Δ or the minimum.
    pub detuning: f64,
    /// π-phase interaction time at `detuning`, µs.
    pub interaction_time: f64,
    pub required_kappa: f64,
    pub light_shift: f64,
    /// `1/Γ`, µs.
    pub coherence_time: f64,
    pub max_parity_weight: usize,
}

impl FeasibilityReport {
    /// True when the atom can measure at least two-photon parities.
    pub fn supports_parity(&self) -> bool {
        self.max_parity_weight >= 2
    }
}

pub fn feasibility_report(params: &CavityParams) -> Result<FeasibilityReport> {
    params.validate()?;
    let pi_time = pi_phase_time(params.beta, params.zeta)?;
    let dmin = min_detuning(params.beta, params.zeta)?;
    let detuning = params.delta.unwrap_or(dmin);
    let t = interaction_time(PI, detuning, params.beta)?;
    let coherence_time = 1.0 / params.gamma_decay;
    Ok(FeasibilityReport {
        params: params.clone(),
        pi_time,
        min_detuning: dmin,
        detuning,
        interaction_time: t,
        required_kappa: 1.0 / t,
        light_shift: light_shift(params.beta, detuning)?,
        coherence_time,
        max_parity_weight: max_parity_weight(t, params.gamma_decay),
    })
}

/// Formats `x` with `digits` significant figures, without exponent notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let factor = 10f64.powi(digits as i32 - 1 - magnitude);
    let rounded = (x * factor).round() / factor;
    format!("{rounded:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn light_shift_examples() {
        assert!(close(light_shift(10.0, 100.0).unwrap(), -1.0, 1e-15));
        // -34²/107.5 = -10.7535
        assert!(close(
            light_shift(34.0, 107.5).unwrap(),
            -10.753_488_372_093,
            1e-9
        ));
        let beta = 3.0;
        assert!(light_shift(beta, beta * beta * 1e6).unwrap().abs() < 1e-6 * beta);
        assert!(light_shift(1.0, 0.0).is_err());
        assert!(light_shift(1.0, -2.0).is_err());
    }

    #[test]
    fn interaction_time_examples() {
        assert!(close(interaction_time(PI, 100.0, 10.0).unwrap(), PI, 1e-15));
        assert!(close(
            interaction_time(PI, 107.5, 34.0).unwrap(),
            0.292,
            5e-4
        ));
        let beta = 34.0;
        let via_detuning = interaction_time(PI, min_detuning(beta, 0.1).unwrap(), beta).unwrap();
        assert!(close(
            via_detuning,
            pi_phase_time(beta, 0.1).unwrap(),
            1e-12 * via_detuning
        ));
        assert!(close(
            required_kappa(PI, 100.0, 10.0).unwrap(),
            1.0 / PI,
            1e-15
        ));
        assert!(interaction_time(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn min_detuning_examples() {
        assert!(close(min_detuning(34.0, 0.1).unwrap(), 107.5, 0.05));
        assert!(close(min_detuning(366.0, 0.1).unwrap(), 1157.4, 0.05));
        assert!(close(min_detuning(5.0, 1.0 - 1e-12).unwrap(), 5.0, 1e-9));
        assert!(min_detuning(5.0, 1.0).is_err());
        assert!(min_detuning(5.0, 0.0).is_err());
    }

    #[test]
    fn table_rows() {
        let cases = [("Cs", "0.29", 1), ("Rb", "0.027", 6), ("NV", "0.00099", 12)];
        for (label, t, pm) in cases {
            let r = feasibility_report(&CavityParams::preset(label).unwrap()).unwrap();
            assert_eq!(format_significant(r.pi_time, 2), t, "{label}");
            assert_eq!(r.max_parity_weight, pm, "{label}");
            assert!(close(r.interaction_time, r.pi_time, 1e-15));
        }
        assert!(CavityParams::preset("Xe").is_err());
    }

    #[test]
    fn max_weight_examples() {
        assert_eq!(max_parity_weight(0.292, 2.6), 1);
        assert_eq!(max_parity_weight(0.0272, 6.3), 6);
        assert_eq!(max_parity_weight(0.00099, 83.0), 12);
        assert_eq!(max_parity_weight(10.0, 83.0), 0);
    }

    #[test]
    fn light_shift_times_time_is_minus_phase() {
        for (beta, delta, phase) in [(34.0, 200.0, PI), (366.0, 5000.0, 1.3), (1e4, 4e4, 0.2)] {
            let prod =
                light_shift(beta, delta).unwrap() * interaction_time(phase, delta, beta).unwrap();
            assert!(close(prod, -phase, 1e-12 * phase));
        }
    }

    #[test]
    fn significant_figures() {
        assert_eq!(format_significant(0.29215, 2), "0.29");
        assert_eq!(format_significant(1157.38, 5), "1157.4");
        assert_eq!(format_significant(27.14, 2), "27");
    }

    #[test]
    fn param_validation() {
        let p = CavityParams::new("x", 366.0, 6.3).unwrap();
        assert!(p.clone().with_zeta(1.5).is_err());
        assert!(p.clone().with_delta(-1.0).is_err());
        assert!(CavityParams::new("x", 0.0, 1.0).is_err());
    }
}
