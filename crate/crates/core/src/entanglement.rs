//! Pairwise concurrence, both from a general two-qubit density matrix and
//! from the Wick form of the chain's reduced states, and the energy-based
//! entanglement witness.
//!
//! The reduced state of two sites is an X-state because total `σᶻ` is
//! conserved. For such a state
//! `C = 2 max{0, |ρ₂₃| - √(ρ₁₁ρ₄₄)}` with
//! `ρ₁₁ρ₄₄ = [(1 + ⟨σᶻσᶻ⟩)² - (⟨σᶻ_a⟩ + ⟨σᶻ_b⟩)²] / 16`.
//!
//! Parity bookkeeping: for the pair `(l, l+1)`, `⟨σᶻ_l⟩ + ⟨σᶻ_{l+1}⟩ = 2m`
//! because the staggered parts cancel. For `(l, l+2)` both sites share the
//! parity of `l`, site `l+1` has the opposite parity, and the JW string
//! gives `|ρ₂₃| = ½ |G_{l,1} G_{l+1,1} - G_{l,2} ⟨σᶻ_{l+1}⟩|`.

use nalgebra::{Complex, Matrix4, SymmetricEigen};

use crate::correlations::{CorrelationSet, Parity};
use crate::error::{Error, Result};
use crate::model::{ChainParams, Thermal};
use crate::quadrature::QuadSpec;
use crate::thermo::{internal_energy, magnetization, staggered_magnetization};

pub type C64 = Complex<f64>;
pub type DensityMatrix = Matrix4<C64>;

/// Tolerance on hermiticity, positivity and trace of an input state.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Negative radicands above this are treated as round-off and clamped.
pub const RADICAND_TOLERANCE: f64 = 1e-9;

/// Concurrence on pairs starting at an odd and at an even site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConcurrencePair {
    pub odd: f64,
    pub even: f64,
}

impl ConcurrencePair {
    pub fn at(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Odd => self.odd,
            Parity::Even => self.even,
        }
    }

    pub fn any_positive(&self) -> bool {
        self.odd > 0.0 || self.even > 0.0
    }

    fn from_fn(mut f: impl FnMut(Parity) -> Result<f64>) -> Result<Self> {
        Ok(Self {
            odd: f(Parity::Odd)?,
            even: f(Parity::Even)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessValue {
    pub lhs: f64,
    /// `lhs > 1`
    pub detected: bool,
}

fn sigma_y_sigma_y() -> DensityMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // σʸ⊗σʸ in the basis |00⟩, |01⟩, |10⟩, |11⟩
    Matrix4::new(
        z, z, z, -one, //
        z, z, one, z, //
        z, one, z, z, //
        -one, z, z, z,
    )
}

fn check_state(rho: &DensityMatrix) -> Result<SymmetricEigen<C64, nalgebra::U4>> {
    let herm = (rho - rho.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    // Written so that NaN fails the check.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(herm <= STATE_TOLERANCE) {
        return Err(Error::InvalidState(format!(
            "not Hermitian (deviation {herm:e})"
        )));
    }
    let trace = rho.trace();
    if !((trace.re - 1.0).abs() <= STATE_TOLERANCE && trace.im.abs() <= STATE_TOLERANCE) {
        return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
    }
    let eig = SymmetricEigen::new(*rho);
    let min = eig.eigenvalues.min();
    if min < -STATE_TOLERANCE {
        return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
    }
    Ok(eig)
}

/// Eigenvalues of `ρ` below this are round-off and are dropped before taking
/// square roots, which would otherwise promote them to `~1e-8`.
const NULL_EIGENVALUE: f64 = 1e-14;

/// Wootters concurrence `max{0, λ₁ - λ₂ - λ₃ - λ₄}`, with `λᵢ` the
/// decreasing square roots of the spectrum of `ρρ̃`.
///
/// With `ρ = W W†` the `λᵢ` are the singular values of `Wᵀ (σʸ⊗σʸ) W`.
pub fn wootters(rho: &DensityMatrix) -> Result<f64> {
    let eig = check_state(rho)?;
    let sqrt_vals = eig.eigenvalues.map(|v| {
        if v > NULL_EIGENVALUE {
            C64::new(v.sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let w = eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals);
    let tau = w.transpose() * sigma_y_sigma_y() * w;
    let mut lambda: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Two-qubit X-state with `⟨σᶻ_a⟩`, `⟨σᶻ_b⟩`, `⟨σᶻσᶻ⟩` and
/// `⟨σˣσˣ + σʸσʸ⟩`, in the basis `|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩`.
pub fn x_state(sz_a: f64, sz_b: f64, zz: f64, xx_yy: f64) -> DensityMatrix {
    let c = |x: f64| C64::new(x / 4.0, 0.0);
    let z = C64::new(0.0, 0.0);
    Matrix4::new(
        c(1.0 - sz_a - sz_b + zz),
        z,
        z,
        z, //
        z,
        c(1.0 - sz_a + sz_b - zz),
        c(xx_yy),
        z, //
        z,
        c(xx_yy),
        c(1.0 + sz_a - sz_b - zz),
        z, //
        z,
        z,
        z,
        c(1.0 + sz_a + sz_b + zz),
    )
}

/// `max{0, off - ½√radicand}` with the radicand guard.
fn x_state_concurrence(off: f64, radicand: f64) -> Result<f64> {
    if radicand < -RADICAND_TOLERANCE || radicand.is_nan() {
        return Err(Error::NegativeRadicand(radicand));
    }
    Ok((off - 0.5 * radicand.max(0.0).sqrt()).max(0.0))
}

/// Nearest-neighbour concurrence for the pair starting at a site of `parity`.
pub fn c1_at(set: &CorrelationSet, parity: Parity) -> Result<f64> {
    let zz = set.zz(parity, 1);
    let m2 = set.sz(parity) + set.sz(parity.flip());
    x_state_concurrence(set.g_site(parity, 1).abs(), (1.0 + zz).powi(2) - m2 * m2)
}

/// Off-diagonal weight `2|ρ₂₃|` of the `(l, l+2)` reduced state.
pub fn c2_hopping(set: &CorrelationSet, parity: Parity) -> f64 {
    let next = parity.flip();
    set.g_site(parity, 1) * set.g_site(next, 1) - set.g_site(parity, 2) * set.sz(next)
}

/// Next-nearest-neighbour concurrence for the pair `(l, l+2)`, `l` of `parity`.
pub fn c2_at(set: &CorrelationSet, parity: Parity) -> Result<f64> {
    let zz = set.zz(parity, 2);
    let s = set.sz(parity);
    x_state_concurrence(
        c2_hopping(set, parity).abs(),
        (1.0 + zz).powi(2) - 4.0 * s * s,
    )
}

/// `set` must hold `R = 1`.
pub fn c1_from_set(set: &CorrelationSet) -> Result<ConcurrencePair> {
    ConcurrencePair::from_fn(|s| c1_at(set, s))
}

/// `set` must hold `R = 1, 2`.
pub fn c2_from_set(set: &CorrelationSet) -> Result<ConcurrencePair> {
    ConcurrencePair::from_fn(|s| c2_at(set, s))
}

pub fn c1(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<ConcurrencePair> {
    c1_from_set(&CorrelationSet::compute(p, t, 1, quad)?)
}

pub fn c2(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<ConcurrencePair> {
    c2_from_set(&CorrelationSet::compute(p, t, 2, quad)?)
}

/// `(C₁, C₂)` from a single correlation evaluation.
pub fn concurrences(
    p: &ChainParams,
    t: Thermal,
    quad: &QuadSpec,
) -> Result<(ConcurrencePair, ConcurrencePair)> {
    let set = CorrelationSet::compute(p, t, 2, quad)?;
    Ok((c1_from_set(&set)?, c2_from_set(&set)?))
}

/// Witness value from per-site `u`, `m`, `m_s`.
pub fn witness_from(p: &ChainParams, u: f64, m: f64, m_s: f64) -> Result<WitnessValue> {
    let denom = (p.coupling - p.alt_coupling).abs() + (p.coupling + p.alt_coupling).abs();
    if denom == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    let lhs = 4.0 * (u + p.field * m + p.alt_field * m_s).abs() / denom;
    Ok(WitnessValue {
        lhs,
        detected: lhs > 1.0,
    })
}

/// `4|u + B·m + b·m_s| / (|J - j| + |J + j|)`; separable states give at most 1.
pub fn witness(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<WitnessValue> {
    if p.coupling == 0.0 && p.alt_coupling == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    witness_from(
        p,
        internal_energy(p, t, quad)?,
        magnetization(p, t, quad)?,
        staggered_magnetization(p, t, quad)?,
    )
}
