//! Zero-temperature closed forms and quantum-critical-point scans.
//!
//! Every quantity here is written branch by branch in terms of the Fermi
//! angle `Ξ`, the field magnitude `|B|` and the two incomplete integrals
//! `∫Θ dq` and `∫1/Θ dq`. The thermal module reaches the same numbers as the
//! `β → ∞` limit of its zone integrals, which is how the two are tested
//! against each other.
//!
//! `ε_g` and `E_MW` are even in `B` and `b`; `m_g` is odd in `B`; `m_s,g` is
//! odd in `b` and even in `B`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::{classify_region, xi, ChainParams, CouplingOrder, PhaseRegion};
use crate::quadrature::{integrate_range, QuadSpec};

/// Ground-state summary at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundReport {
    pub region: PhaseRegion,
    /// `ε_g`, energy per site.
    pub energy: f64,
    pub m_g: f64,
    pub m_s_g: f64,
    pub e_mw: f64,
    /// `(√(J²+b²), √(j²+b²))`.
    pub qcp_fields: (f64, f64),
}

/// The branch of the closed forms that applies at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch {
    /// `|j| < J` below saturation: `Q = (0,Ξ) ∪ (π-Ξ,π)`.
    WeakFilled { xi: f64 },
    /// `|j| = J` below saturation: flat band `Θ = √(J²+b²)`.
    Dimerized,
    /// `|j| > J`, `|B| < √(J²+b²)`: `Q = (0,π)`.
    StrongFilled,
    /// `|j| > J`, `√(J²+b²) ≤ |B| < √(j²+b²)`: `Q = (Ξ, π-Ξ)`.
    StrongPartial { xi: f64 },
    /// Fully polarized.
    Saturated,
}

fn branch(p: &ChainParams) -> Branch {
    let region = classify_region(p);
    if region.is_polarized() {
        return Branch::Saturated;
    }
    match (p.coupling_order(), region) {
        (CouplingOrder::Equal, _) => Branch::Dimerized,
        (CouplingOrder::AltWeaker, _) => Branch::WeakFilled {
            xi: xi(p).unwrap_or(FRAC_PI_2),
        },
        (CouplingOrder::AltStronger, PhaseRegion::B1) => Branch::StrongFilled,
        (CouplingOrder::AltStronger, _) => Branch::StrongPartial {
            xi: xi(p).unwrap_or(0.0),
        },
    }
}

fn theta_integral(p: &ChainParams, a: f64, b: f64, quad: &QuadSpec) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    integrate_range(|q| p.theta_unchecked(q), a, b, quad).into_result()
}

/// `b ∫ₐᵇ dq / Θ`, zero when `b = 0` so the `Θ(π/2) = 0` point of the bare
/// XX chain is never evaluated.
fn inverse_theta_integral(p: &ChainParams, a: f64, b: f64, quad: &QuadSpec) -> Result<f64> {
    if b <= a || p.alt_field == 0.0 {
        return Ok(0.0);
    }
    let alt = p.alt_field;
    integrate_range(|q| alt / p.theta_unchecked(q), a, b, quad).into_result()
}

/// Ground-state energy per site `ε_g`.
pub fn energy(p: &ChainParams, quad: &QuadSpec) -> Result<f64> {
    let field = p.field.abs();
    Ok(match branch(p) {
        Branch::WeakFilled { xi } => {
            (2.0 * xi / PI - 1.0) * field - 2.0 / PI * theta_integral(p, 0.0, xi, quad)?
        }
        Branch::Dimerized => -p.qcp_fields().0,
        Branch::StrongFilled => -2.0 / PI * theta_integral(p, 0.0, FRAC_PI_2, quad)?,
        Branch::StrongPartial { xi } => {
            -2.0 / PI * xi * field - 2.0 / PI * theta_integral(p, xi, FRAC_PI_2, quad)?
        }
        Branch::Saturated => -field,
    })
}

/// Ground-state magnetization per site `m_g`.
pub fn magnetization_t0(p: &ChainParams) -> f64 {
    let magnitude = match branch(p) {
        Branch::WeakFilled { xi } => 1.0 - 2.0 * xi / PI,
        Branch::Dimerized | Branch::StrongFilled => 0.0,
        Branch::StrongPartial { xi } => 2.0 * xi / PI,
        Branch::Saturated => 1.0,
    };
    if p.field < 0.0 {
        -magnitude
    } else {
        magnitude
    }
}

/// Ground-state staggered magnetization per site `m_s,g`.
pub fn staggered_magnetization_t0(p: &ChainParams, quad: &QuadSpec) -> Result<f64> {
    Ok(match branch(p) {
        Branch::WeakFilled { xi } => 2.0 / PI * inverse_theta_integral(p, 0.0, xi, quad)?,
        Branch::Dimerized => p.alt_field / p.qcp_fields().0,
        Branch::StrongFilled => 2.0 / PI * inverse_theta_integral(p, 0.0, FRAC_PI_2, quad)?,
        Branch::StrongPartial { xi } => 2.0 / PI * inverse_theta_integral(p, xi, FRAC_PI_2, quad)?,
        Branch::Saturated => 0.0,
    })
}

/// Meyer-Wallach measure of the ground state,
/// `1 - ½(⟨σᶻ_even⟩² + ⟨σᶻ_odd⟩²)`, written in the closed form of each branch.
pub fn meyer_wallach(p: &ChainParams, quad: &QuadSpec) -> Result<f64> {
    let stag = |v: f64| v * v;
    let v = match branch(p) {
        Branch::WeakFilled { xi } => {
            let f = xi / PI;
            4.0 * f * (1.0 - f) - stag(2.0 / PI * inverse_theta_integral(p, 0.0, xi, quad)?)
        }
        Branch::Dimerized => {
            let (c, _) = p.qcp_fields();
            if c == 0.0 {
                1.0
            } else {
                p.coupling * p.coupling / (c * c)
            }
        }
        Branch::StrongFilled => {
            1.0 - stag(2.0 / PI * inverse_theta_integral(p, 0.0, FRAC_PI_2, quad)?)
        }
        Branch::StrongPartial { xi } => {
            let f = 2.0 * xi / PI;
            1.0 - f * f - stag(2.0 / PI * inverse_theta_integral(p, xi, FRAC_PI_2, quad)?)
        }
        Branch::Saturated => 0.0,
    };
    Ok(v.clamp(0.0, 1.0))
}

/// `1 - m² - m_s²` from the sublattice magnetizations.
pub fn meyer_wallach_from_magnetizations(m: f64, m_s: f64) -> f64 {
    1.0 - 0.5 * ((m + m_s).powi(2) + (m - m_s).powi(2))
}

pub fn report(p: &ChainParams, quad: &QuadSpec) -> Result<GroundReport> {
    Ok(GroundReport {
        region: classify_region(p),
        energy: energy(p, quad)?,
        m_g: magnetization_t0(p),
        m_s_g: staggered_magnetization_t0(p, quad)?,
        e_mw: meyer_wallach(p, quad)?,
        qcp_fields: p.qcp_fields(),
    })
}

/// Parameter varied by a QCP scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    Field,
    AltField,
    AltCoupling,
}

impl ScanAxis {
    pub fn label(self) -> &'static str {
        match self {
            ScanAxis::Field => "B",
            ScanAxis::AltField => "b",
            ScanAxis::AltCoupling => "j",
        }
    }

    pub fn apply(self, p: ChainParams, v: f64) -> Result<ChainParams> {
        match self {
            ScanAxis::Field => p.with_field(v),
            ScanAxis::AltField => p.with_alt_field(v),
            ScanAxis::AltCoupling => p.with_alt_coupling(v),
        }
    }
}

impl std::str::FromStr for ScanAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(ScanAxis::Field),
            "b" => Ok(ScanAxis::AltField),
            "j" => Ok(ScanAxis::AltCoupling),
            other => Err(Error::InvalidScan(format!(
                "unknown axis {other:?}, expected B, b or j"
            ))),
        }
    }
}

/// One interior point of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcpPoint {
    pub value: f64,
    pub energy: f64,
    /// Central second difference `d²ε_g/dx²`.
    pub d2e: f64,
    pub flagged: bool,
}

/// A flagged peak must jump away from a neighbour by this multiple of the
/// typical point-to-point change in `d2e`.
pub const PEAK_JUMP_FACTOR: f64 = 10.0;

/// Typical point-to-point changes below this are treated as exact zeros.
pub const PEAK_NOISE_FLOOR: f64 = 1e-6;

/// Second differences of `ε_g` along `axis` on `start, start+step, …, stop`.
///
/// A point is flagged when `|d2e|` is a local maximum and differs from a
/// neighbour by more than `PEAK_JUMP_FACTOR` times the median point-to-point
/// change (floored at `PEAK_NOISE_FLOOR`). The median of `|d2e|` itself is
/// not used because a scan that sits mostly between two critical points has
/// curvature of the same order as the peaks.
pub fn qcp_scan(
    p_base: &ChainParams,
    axis: ScanAxis,
    start: f64,
    stop: f64,
    step: f64,
    quad: &QuadSpec,
) -> Result<Vec<QcpPoint>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidScan(format!(
            "step must be positive, got {step}"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && stop > start) {
        return Err(Error::InvalidScan(format!("empty range [{start}, {stop}]")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n < 3 {
        return Err(Error::InvalidScan("range holds fewer than 3 points".into()));
    }
    if axis == ScanAxis::AltCoupling {
        let j = p_base.coupling;
        for target in [j, -j] {
            if target >= start - step && target <= start + (n - 1) as f64 * step + step {
                return Err(Error::InvalidScan(format!(
                    "j range passes within one step of |j| = J = {j}"
                )));
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| start + i as f64 * step).collect();
    let energies = values
        .iter()
        .map(|&v| energy(&axis.apply(*p_base, v)?, quad))
        .collect::<Result<Vec<_>>>()?;
    let d2: Vec<f64> = (1..n - 1)
        .map(|i| (energies[i + 1] - 2.0 * energies[i] + energies[i - 1]) / (step * step))
        .collect();

    let mut jumps: Vec<f64> = d2.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    jumps.sort_by(f64::total_cmp);
    let typical = if jumps.is_empty() {
        0.0
    } else {
        jumps[jumps.len() / 2]
    };
    let threshold = PEAK_JUMP_FACTOR * typical.max(PEAK_NOISE_FLOOR);

    let flagged = |i: usize| {
        if i == 0 || i + 1 >= d2.len() {
            return false;
        }
        let a = d2[i].abs();
        let local_max = a >= d2[i - 1].abs() && a >= d2[i + 1].abs();
        let jump = (d2[i] - d2[i - 1]).abs().max((d2[i] - d2[i + 1]).abs());
        local_max && jump > threshold
    };

    Ok((0..d2.len())
        .map(|i| QcpPoint {
            value: values[i + 1],
            energy: energies[i + 1],
            d2e: d2[i],
            flagged: flagged(i),
        })
        .collect())
}

/// Values of the flagged points of a scan.
pub fn flagged_values(scan: &[QcpPoint]) -> Vec<f64> {
    scan.iter().filter(|p| p.flagged).map(|p| p.value).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Thermal;
    use crate::thermo::{internal_energy, magnetization, staggered_magnetization};
    use std::f64::consts::FRAC_2_PI;

    fn params(jj: f64, j: f64, bb: f64, b: f64) -> ChainParams {
        ChainParams::new(jj, j, bb, b).unwrap()
    }

    fn q() -> QuadSpec {
        QuadSpec::default()
    }

    fn tight() -> QuadSpec {
        QuadSpec::new(1e-13, 1e-13, 200).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert!((energy(&params(1.0, 0.0, 0.0, 0.0), &q()).unwrap() + FRAC_2_PI).abs() < 1e-12);
        let e = energy(&params(1.0, 1.0, 0.5, 0.5), &q()).unwrap();
        assert!((e + 1.25f64.sqrt()).abs() < 1e-12);
        assert_eq!(energy(&params(1.0, 0.0, 2.0, 0.0), &q()).unwrap(), -2.0);
    }

    #[test]
    fn magnetization_examples() {
        assert!((magnetization_t0(&params(1.0, 0.0, 0.5, 0.0)) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(magnetization_t0(&params(1.0, 2.0, 0.5, 0.0)), 0.0);
        assert_eq!(magnetization_t0(&params(1.0, 1.0, 0.9, 0.0)), 0.0);
        assert!((magnetization_t0(&params(1.0, 0.0, -0.5, 0.0)) + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn meyer_wallach_examples() {
        assert!((meyer_wallach(&params(1.0, 1.0, 0.5, 0.0), &q()).unwrap() - 1.0).abs() < 1e-12);
        assert!((meyer_wallach(&params(1.0, 1.0, 0.5, 1.0), &q()).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(
            meyer_wallach(&params(1.0, 0.0, 2.0, 0.0), &q()).unwrap(),
            0.0
        );
    }

    #[test]
    fn closed_forms_match_thermal_limit() {
        let t = Thermal::ZeroTemperature;
        for p in [
            params(1.0, 0.3, 0.2, 0.4),
            params(1.0, 0.3, 0.9, 0.4),
            params(1.0, 0.3, -0.9, -0.4),
            params(1.0, 1.6, 0.5, 0.3),
            params(1.0, 1.6, 1.3, 0.3),
            params(1.0, 1.6, 1.9, 0.3),
            params(1.0, 1.0, 0.4, 0.7),
            params(1.0, 1.0, 1.4, 0.7),
            params(1.0, 0.0, 0.0, 0.0),
        ] {
            let e = energy(&p, &tight()).unwrap();
            let u = internal_energy(&p, t, &tight()).unwrap();
            assert!((e - u).abs() < 1e-10, "{p:?}");
            let m = magnetization(&p, t, &tight()).unwrap();
            assert!((magnetization_t0(&p) - m).abs() < 1e-10, "{p:?}");
            let ms = staggered_magnetization(&p, t, &tight()).unwrap();
            assert!(
                (staggered_magnetization_t0(&p, &tight()).unwrap() - ms).abs() < 1e-10,
                "{p:?}"
            );
            let mw = meyer_wallach(&p, &tight()).unwrap();
            assert!(
                (mw - meyer_wallach_from_magnetizations(m, ms)).abs() < 1e-10,
                "{p:?}"
            );
        }
    }

    #[test]
    fn polarized_means_product_state() {
        for p in [
            params(1.0, 0.4, 3.0, 0.5),
            params(1.0, 1.4, 3.0, 0.5),
            params(1.0, 1.0, 2.0, 0.0),
        ] {
            let r = report(&p, &q()).unwrap();
            assert!(r.region.is_polarized());
            assert_eq!(r.e_mw, 0.0);
            assert_eq!(r.m_g, 1.0);
        }
        let r = report(&params(1.0, 0.4, 0.3, 0.5), &q()).unwrap();
        assert!(r.e_mw > 0.0 && r.m_g < 1.0);
    }

    #[test]
    fn magnetization_kinks_at_critical_fields() {
        let base = params(1.0, 1.5, 0.0, 0.4);
        let (c1, c2) = base.qcp_fields();
        let h = 1e-3;
        for c in [c1, c2] {
            let m = |b: f64| magnetization_t0(&base.with_field(b).unwrap());
            let left = (m(c) - m(c - h)) / h;
            let right = (m(c + h) - m(c)) / h;
            assert!((left - right).abs() > 0.1, "{c}: {left} {right}");
        }
    }

    #[test]
    fn single_peak_below_lower_field() {
        let p = params(1.0, 0.3, 0.5, 0.0);
        let scan = qcp_scan(&p, ScanAxis::AltField, 0.0, 1.0, 5e-3, &tight()).unwrap();
        let peaks = flagged_values(&scan);
        assert_eq!(peaks.len(), 1, "{peaks:?}");
        assert!((peaks[0] - 0.4).abs() <= 5e-3);
    }

    #[test]
    fn two_peaks_at_both_critical_fields() {
        let p = params(1.0, 0.5, 1.5, 0.0);
        let scan = qcp_scan(&p, ScanAxis::AltField, 0.0, 2.0, 5e-3, &tight()).unwrap();
        let peaks = flagged_values(&scan);
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        assert!((peaks[0] - 1.25f64.sqrt()).abs() <= 5e-3);
        assert!((peaks[1] - 2f64.sqrt()).abs() <= 5e-3);
    }

    #[test]
    fn saturated_scan_is_flat() {
        let p = params(1.0, 0.3, 5.0, 0.0);
        let scan = qcp_scan(&p, ScanAxis::AltField, 0.0, 1.0, 5e-3, &tight()).unwrap();
        assert!(flagged_values(&scan).is_empty());
        assert!(scan.iter().all(|s| s.d2e.abs() < 1e-6));
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        let p = params(1.0, 0.3, 0.5, 0.0);
        assert!(qcp_scan(&p, ScanAxis::AltField, 0.0, 1.0, 0.0, &q()).is_err());
        assert!(qcp_scan(&p, ScanAxis::AltField, 1.0, 0.0, 0.1, &q()).is_err());
        assert!(qcp_scan(&p, ScanAxis::AltCoupling, 0.0, 2.0, 0.1, &q()).is_err());
        assert!(qcp_scan(&p, ScanAxis::AltCoupling, 0.0, 0.9, 0.05, &q()).is_ok());
        assert!("x".parse::<ScanAxis>().is_err());
        assert_eq!("j".parse::<ScanAxis>().unwrap(), ScanAxis::AltCoupling);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn report_is_bounded(j in 0.0..2.0f64, bb in -2.0..2.0f64, b in -2.0..2.0f64) {
                let p = ChainParams::new(1.0, j, bb, b).unwrap();
                let r = report(&p, &QuadSpec::default()).unwrap();
                prop_assert!((0.0..=1.0).contains(&r.e_mw));
                prop_assert!(r.m_g.abs() <= 1.0);
                prop_assert!(r.m_s_g.abs() <= 1.0 + 1e-12);
                prop_assert!(r.energy <= -bb.abs() + 1e-12);
                prop_assert_eq!(r.region.is_polarized(), r.e_mw == 0.0 && r.m_g.abs() == 1.0);
            }

            #[test]
            fn symmetric_in_field_signs(j in 0.0..2.0f64, bb in 0.0..2.0f64, b in 0.0..2.0f64) {
                let p = ChainParams::new(1.0, j, bb, b).unwrap();
                let n = ChainParams::new(1.0, j, -bb, -b).unwrap();
                let (a, c) = (report(&p, &QuadSpec::default()).unwrap(), report(&n, &QuadSpec::default()).unwrap());
                prop_assert_eq!(a.energy, c.energy);
                prop_assert_eq!(a.e_mw, c.e_mw);
                prop_assert_eq!(a.m_g, -c.m_g);
                prop_assert_eq!(a.m_s_g, -c.m_s_g);
            }
        }
    }
}
