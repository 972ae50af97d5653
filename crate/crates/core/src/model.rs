//! Chain parameters, the single-particle dispersion and the geometry of the
//! negative branch.
//!
//! The chain is
//!
//! ```text
//! H = -Σ_l [ (J_l / 2)(σˣ_l σˣ_{l+1} + σʸ_l σʸ_{l+1}) + B_l σᶻ_l ]
//! J_l = J + (-1)^l j,   B_l = B + (-1)^l b
//! ```
//!
//! After the Jordan-Wigner map every momentum pair `(q, q + π)` contributes
//! two quasi-particle energies `Λ±(q) = B ± Θ(q)` with
//! `Θ(q) = √(J² cos² q + b² + j² sin² q)`. Everything downstream is an
//! integral over `q ∈ [0, π]` of functions of these two branches.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// The four couplings of the staggered chain.
///
/// `coupling` is `J`, `alt_coupling` is `j`, `field` is `B` and `alt_field` is
/// `b`. Even sites see `B + b` and even bonds `(l, l+1)` carry `J + j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub coupling: f64,
    pub alt_coupling: f64,
    pub field: f64,
    pub alt_field: f64,
}

impl ChainParams {
    /// Builds a parameter set, rejecting non-finite values and `J < 0`.
    pub fn new(coupling: f64, alt_coupling: f64, field: f64, alt_field: f64) -> Result<Self> {
        for (name, v) in [
            ("J", coupling),
            ("j", alt_coupling),
            ("B", field),
            ("b", alt_field),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFiniteParameter { name, value: v });
            }
        }
        if coupling < 0.0 {
            return Err(Error::NegativeCoupling(coupling));
        }
        Ok(Self {
            coupling,
            alt_coupling,
            field,
            alt_field,
        })
    }

    /// Uniform XX chain in a uniform field.
    pub fn uniform(coupling: f64, field: f64) -> Result<Self> {
        Self::new(coupling, 0.0, field, 0.0)
    }

    pub fn with_coupling(self, v: f64) -> Result<Self> {
        Self::new(v, self.alt_coupling, self.field, self.alt_field)
    }

    pub fn with_alt_coupling(self, v: f64) -> Result<Self> {
        Self::new(self.coupling, v, self.field, self.alt_field)
    }

    pub fn with_field(self, v: f64) -> Result<Self> {
        Self::new(self.coupling, self.alt_coupling, v, self.alt_field)
    }

    pub fn with_alt_field(self, v: f64) -> Result<Self> {
        Self::new(self.coupling, self.alt_coupling, self.field, v)
    }

    /// `Θ(q)` without the domain check, for integrands.
    #[inline]
    pub(crate) fn theta_unchecked(&self, q: f64) -> f64 {
        let (s, c) = q.sin_cos();
        let jc = self.coupling * c;
        let js = self.alt_coupling * s;
        (jc * jc + self.alt_field * self.alt_field + js * js).sqrt()
    }

    /// Field values at which the ground state changes non-analytically:
    /// `(√(J² + b²), √(j² + b²))`.
    pub fn qcp_fields(&self) -> (f64, f64) {
        (
            self.coupling.hypot(self.alt_field),
            self.alt_coupling.hypot(self.alt_field),
        )
    }

    /// Ordering of `|j|` against `J`, which selects the zero-temperature branch.
    pub fn coupling_order(&self) -> CouplingOrder {
        let a = self.alt_coupling.abs();
        if a < self.coupling {
            CouplingOrder::AltWeaker
        } else if a == self.coupling {
            CouplingOrder::Equal
        } else {
            CouplingOrder::AltStronger
        }
    }
}

/// How `|j|` compares with `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingOrder {
    /// `|j| < J`
    AltWeaker,
    /// `|j| = J`, the dimerizable line
    Equal,
    /// `|j| > J`
    AltStronger,
}

/// Temperature of the Gibbs state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thermal {
    /// Inverse temperature `β > 0`.
    Finite(f64),
    /// The `β → ∞` limit.
    ZeroTemperature,
}

impl Thermal {
    pub fn beta(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta > 0.0 {
            Ok(Thermal::Finite(beta))
        } else {
            Err(Error::InvalidBeta(beta))
        }
    }

    /// `T = 0` maps to [`Thermal::ZeroTemperature`].
    pub fn temperature(t: f64) -> Result<Self> {
        if t == 0.0 {
            Ok(Thermal::ZeroTemperature)
        } else if t.is_finite() && t > 0.0 {
            Self::beta(1.0 / t)
        } else {
            Err(Error::InvalidTemperature(t))
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Thermal::ZeroTemperature)
    }
}

/// Field regions of the zero-temperature phase diagram, classified on `|B|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseRegion {
    /// `|B| < √(J² + b²)`
    B1,
    /// `√(J² + b²) ≤ |B| < √(j² + b²)`; only exists for `|j| > J`
    B2,
    /// `|B| ≥ √(j² + b²)` when `|j| > J`
    B3,
    /// `|B| ≥ √(J² + b²)` when `|j| ≤ J`
    B3Prime,
}

impl PhaseRegion {
    pub fn label(&self) -> &'static str {
        match self {
            PhaseRegion::B1 => "B1",
            PhaseRegion::B2 => "B2",
            PhaseRegion::B3 => "B3",
            PhaseRegion::B3Prime => "B3prime",
        }
    }

    /// Regions where the ground state is fully polarized.
    pub fn is_polarized(&self) -> bool {
        matches!(self, PhaseRegion::B3 | PhaseRegion::B3Prime)
    }
}

fn check_angle(q: f64) -> Result<()> {
    if (0.0..=PI).contains(&q) {
        Ok(())
    } else {
        Err(Error::AngleOutOfDomain(q))
    }
}

/// `Θ(q) = √(J² cos² q + b² + j² sin² q)` for `q ∈ [0, π]`.
pub fn theta_of_q(p: &ChainParams, q: f64) -> Result<f64> {
    check_angle(q)?;
    Ok(p.theta_unchecked(q))
}

/// The two branches `(Λ⁺, Λ⁻) = (B + Θ(q), B - Θ(q))`.
pub fn lambda_pm(p: &ChainParams, q: f64) -> Result<(f64, f64)> {
    let th = theta_of_q(p, q)?;
    Ok((p.field + th, p.field - th))
}

/// `Ξ = arccos √((B² - b² - j²) / (J² - j²))`, the Fermi angle of the lower
/// branch.
///
/// The ratio under the root is clamped to `[0, 1]`, so `Ξ = π/2` below the
/// lower critical field and `Ξ = 0` above the upper one. Returns `None` on the
/// `|j| = J` line, where the ratio is undefined.
pub fn xi(p: &ChainParams) -> Option<f64> {
    let den = p.coupling * p.coupling - p.alt_coupling * p.alt_coupling;
    if den == 0.0 {
        return None;
    }
    let num = p.field * p.field - p.alt_field * p.alt_field - p.alt_coupling * p.alt_coupling;
    let r = (num / den).clamp(0.0, 1.0);
    Some(r.sqrt().acos())
}

/// An open sub-interval `(start, end)` of `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, q: f64) -> bool {
        q > self.start && q < self.end
    }
}

/// Set of momenta where the lower branch is negative, `{q : Λ⁻(q) < 0}`.
///
/// Stored as disjoint open intervals; empty intervals are dropped. Isolated
/// points where `Λ⁻ = 0` exactly are excluded.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NegativeBranch {
    pub intervals: Vec<Interval>,
}

impl NegativeBranch {
    pub fn contains(&self, q: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(q))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total measure of the set.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Interior end points, i.e. the Fermi angles.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            for e in [iv.start, iv.end] {
                if e > 0.0 && e < PI {
                    out.push(e);
                }
            }
        }
        out
    }

    fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self {
            intervals: pairs
                .iter()
                .map(|&(start, end)| Interval { start, end })
                .filter(|iv| !iv.is_empty())
                .collect(),
        }
    }
}

/// Region `Q` of momenta with `Λ⁻(q) < 0`.
///
/// Uses the closed forms `(0, Ξ) ∪ (π - Ξ, π)` for `|j| < J`, `(Ξ, π - Ξ)` for
/// `|j| > J` and all-or-nothing on `|j| = J`. Negative `B` is folded onto
/// `|B|`: the set where `Λ⁺ < 0` for `-B` coincides with the set where
/// `Λ⁻ < 0` for `B`.
pub fn region_q(p: &ChainParams) -> NegativeBranch {
    let field = p.field.abs();
    let folded = ChainParams { field, ..*p };
    match p.coupling_order() {
        CouplingOrder::Equal => {
            let th = p.coupling.hypot(p.alt_field);
            if field < th {
                NegativeBranch::from_pairs(&[(0.0, PI)])
            } else {
                NegativeBranch::default()
            }
        }
        CouplingOrder::AltWeaker => {
            let x = xi(&folded).expect("J != |j|");
            if x >= FRAC_PI_2 {
                // Λ⁻ < 0 everywhere except possibly at q = π/2.
                let (_, lower) = folded.qcp_fields();
                if field < lower {
                    NegativeBranch::from_pairs(&[(0.0, PI)])
                } else {
                    NegativeBranch::from_pairs(&[(0.0, FRAC_PI_2), (FRAC_PI_2, PI)])
                }
            } else {
                NegativeBranch::from_pairs(&[(0.0, x), (PI - x, PI)])
            }
        }
        CouplingOrder::AltStronger => {
            let x = xi(&folded).expect("J != |j|");
            NegativeBranch::from_pairs(&[(x, PI - x)])
        }
    }
}

/// Zero-temperature field region containing `|B|`.
pub fn classify_region(p: &ChainParams) -> PhaseRegion {
    let field = p.field.abs();
    let (upper_j, upper_alt) = p.qcp_fields();
    match p.coupling_order() {
        CouplingOrder::AltWeaker | CouplingOrder::Equal => {
            if field < upper_j {
                PhaseRegion::B1
            } else {
                PhaseRegion::B3Prime
            }
        }
        CouplingOrder::AltStronger => {
            if field < upper_j {
                PhaseRegion::B1
            } else if field < upper_alt {
                PhaseRegion::B2
            } else {
                PhaseRegion::B3
            }
        }
    }
}

/// Angles in `(0, π)` where the integrands may be non-smooth: `π/2` (where
/// `Θ` can touch zero) and the Fermi angles of both branches.
pub fn kink_angles(p: &ChainParams) -> Vec<f64> {
    let mut out = vec![FRAC_PI_2];
    out.extend(region_q(p).boundaries());
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    out
}
