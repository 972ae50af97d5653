//! Per-site thermodynamics in the thermodynamic limit: `ln Z / N`, the
//! internal energy, the magnetization and the staggered magnetization.
//!
//! Each quantity is evaluated from its own zone integral rather than by
//! differentiating `ln Z`; the derivative identities are checked in tests.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::model::{kink_angles, region_q, ChainParams, Thermal};
use crate::quadrature::{branch_split_ratio, integrate, thermal_factor, QuadSpec};

/// `(1/2π) ∫₀^π kernel(q, Θ(q)) dq` with the Fermi angles and `π/2`
/// registered as breakpoints. At large `β` each Fermi angle also gets a
/// geometric ladder of breakpoints down to a distance `1/β`, so the thermal
/// step is never hidden between Kronrod nodes.
pub(crate) fn zone_average<F>(
    p: &ChainParams,
    t: Thermal,
    quad: &QuadSpec,
    kernel: F,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let spec = quad.clone().with_breakpoints(&breakpoints(p, t))?;
    let r = integrate(|q| kernel(q, p.theta_unchecked(q)), &spec);
    let r = crate::quadrature::Integral {
        value: r.value / (2.0 * PI),
        error: r.error / (2.0 * PI),
        ..r
    };
    r.into_result()
}

fn breakpoints(p: &ChainParams, t: Thermal) -> Vec<f64> {
    let kinks = kink_angles(p);
    let beta = match t {
        Thermal::Finite(beta) if beta > LADDER_MIN_BETA => beta,
        _ => return kinks,
    };
    let mut out = kinks.clone();
    for &k in kinks
        .iter()
        .filter(|&&k| region_q(p).boundaries().contains(&k))
    {
        let mut d = 1.0 / beta;
        while d < LADDER_MAX_OFFSET {
            out.extend([k - d, k + d].into_iter().filter(|&x| x > 0.0 && x < PI));
            d *= 4.0;
        }
    }
    out
}

const LADDER_MIN_BETA: f64 = 20.0;
const LADDER_MAX_OFFSET: f64 = 0.2;

/// `ln(2 cosh x)` without overflow.
#[inline]
fn ln_two_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Per-site thermodynamic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    /// `None` at zero temperature.
    pub ln_z_per_site: Option<f64>,
    pub u: f64,
    pub m: f64,
    pub m_s: f64,
}

/// `ln Z / N = (1/2π) ∫ ln[4 cosh(βΛ⁺) cosh(βΛ⁻)] dq`.
pub fn ln_z_per_site(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<f64> {
    let beta = match t {
        Thermal::Finite(beta) => beta,
        Thermal::ZeroTemperature => return Err(Error::ZeroTemperatureUnsupported),
    };
    let field = p.field;
    zone_average(p, t, quad, |_, th| {
        ln_two_cosh(beta * (field + th)) + ln_two_cosh(beta * (field - th))
    })
}

/// Internal energy per site, `u = -(1/2π) ∫ [Λ⁺ tf(Λ⁺) + Λ⁻ tf(Λ⁻)] dq`.
pub fn internal_energy(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<f64> {
    let field = p.field;
    zone_average(p, t, quad, |_, th| {
        let (lp, lm) = (field + th, field - th);
        -(lp * thermal_factor(t, lp) + lm * thermal_factor(t, lm))
    })
}

/// Magnetization per site, `(1/2π) ∫ [tf(Λ⁺) + tf(Λ⁻)] dq`.
pub fn magnetization(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<f64> {
    let field = p.field;
    zone_average(p, t, quad, |_, th| {
        thermal_factor(t, field + th) + thermal_factor(t, field - th)
    })
}

/// Staggered magnetization per site, `(1/2π) ∫ b [tf(Λ⁺) - tf(Λ⁻)] / Θ dq`.
pub fn staggered_magnetization(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<f64> {
    if p.alt_field == 0.0 {
        return Ok(0.0);
    }
    let (field, b) = (p.field, p.alt_field);
    zone_average(p, t, quad, |_, th| b * branch_split_ratio(t, field, th))
}

pub fn thermo_point(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<ThermoPoint> {
    let ln_z_per_site = match t {
        Thermal::Finite(_) => Some(ln_z_per_site(p, t, quad)?),
        Thermal::ZeroTemperature => None,
    };
    Ok(ThermoPoint {
        ln_z_per_site,
        u: internal_energy(p, t, quad)?,
        m: magnetization(p, t, quad)?,
        m_s: staggered_magnetization(p, t, quad)?,
    })
}

/// High-temperature value of `ln Z / N`.
pub const INFINITE_TEMPERATURE_LN_Z: f64 = LN_2;
