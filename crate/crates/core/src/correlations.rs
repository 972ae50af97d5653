//! Equal-time two-point functions of the chain at any temperature.
//!
//! The fermionic contraction `G_{l,R} = -⟨a†_l a_{l+R} - a_l a†_{l+R}⟩`
//! splits into a uniform and a staggered part,
//! `G_{l,R} = G_R⁰ + (-1)^l G_Rˢ`, and likewise
//! `⟨σᶻ_l⟩ = m + (-1)^l m_s`. Even sites carry `+`. With
//! `D(q) = [tf(Λ⁺) - tf(Λ⁻)] / Θ` and `S(q) = tf(Λ⁺) + tf(Λ⁻)`:
//!
//! | `R`  | `G_R⁰`                              | `G_Rˢ`                             |
//! |------|-------------------------------------|------------------------------------|
//! | odd  | `-⟨cos(qR) J cos q · D⟩`            | `-⟨sin(qR) j sin q · D⟩`           |
//! | even | `⟨cos(qR) · S⟩`                     | `⟨cos(qR) b · D⟩`                  |
//!
//! where `⟨·⟩ = (1/2π)∫₀^π dq`. At `R = 0` the even row reduces to
//! `(m, m_s)`. The staggered even-`R` part vanishes only when `b = 0`; the
//! alternative sine-weighted form `∫ b sin(qR) D` is identically zero by the
//! `q → π - q` symmetry and does not describe the lattice (see the
//! real-space checks in the oracle tests).
//!
//! Spin correlators follow from Wick's theorem:
//! `⟨σᶻ_l σᶻ_{l+R}⟩ = ⟨σᶻ_l⟩⟨σᶻ_{l+R}⟩ - G_{l,R}²` and
//! `⟨σˣσˣ + σʸσʸ⟩_{l,l+1} = -2 G_{l,1}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{ChainParams, Thermal};
use crate::quadrature::{branch_split_ratio, thermal_factor, QuadSpec};
use crate::thermo::{magnetization, staggered_magnetization, zone_average};

/// Sublattice of a site `l`; even sites see `B + b` and start a `J + j` bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `e^{iπl}`
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn of_site(l: usize) -> Self {
        if l.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of `l + r` given the parity of `l`.
    pub fn shifted(self, r: usize) -> Self {
        if r.is_multiple_of(2) {
            self
        } else {
            self.flip()
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Uniform and staggered parts of a sublattice-resolved quantity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Staggered {
    pub uniform: f64,
    pub staggered: f64,
}

impl Staggered {
    /// Value on a site of the given parity.
    pub fn at(&self, parity: Parity) -> f64 {
        self.uniform + parity.sign() * self.staggered
    }
}

/// `⟨σᶻ⟩⁰ = m` and `⟨σᶻ⟩ˢ = m_s`.
pub type SigmaZ = Staggered;

/// `(G_R⁰, G_Rˢ)`.
pub type Contraction = Staggered;

pub fn sigma_z(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<SigmaZ> {
    Ok(SigmaZ {
        uniform: magnetization(p, t, quad)?,
        staggered: staggered_magnetization(p, t, quad)?,
    })
}

/// Nearest-neighbour contraction, equal to `-(1/β) ∂_J ln Z / N` and
/// `-(1/β) ∂_j ln Z / N`.
pub fn g1(p: &ChainParams, t: Thermal, quad: &QuadSpec) -> Result<Contraction> {
    odd_contraction(p, t, 1, quad)
}

/// Contraction at even separation `R ≥ 2`.
pub fn g_even(p: &ChainParams, t: Thermal, r: usize, quad: &QuadSpec) -> Result<Contraction> {
    if r == 0 || !r.is_multiple_of(2) {
        return Err(Error::InvalidSeparation(r, "g_even needs an even R >= 2"));
    }
    even_contraction(p, t, r, quad)
}

/// Contraction at odd separation `R ≥ 3`.
pub fn g_odd(p: &ChainParams, t: Thermal, r: usize, quad: &QuadSpec) -> Result<Contraction> {
    if r < 3 || r % 2 != 1 {
        return Err(Error::InvalidSeparation(r, "g_odd needs an odd R >= 3"));
    }
    odd_contraction(p, t, r, quad)
}

/// Contraction at any separation `R ≥ 1`.
pub fn g_r(p: &ChainParams, t: Thermal, r: usize, quad: &QuadSpec) -> Result<Contraction> {
    match r {
        0 => Err(Error::InvalidSeparation(0, "separation must be positive")),
        r if r % 2 == 0 => even_contraction(p, t, r, quad),
        r => odd_contraction(p, t, r, quad),
    }
}

pub(crate) fn even_contraction(
    p: &ChainParams,
    t: Thermal,
    r: usize,
    quad: &QuadSpec,
) -> Result<Contraction> {
    let field = p.field;
    let rf = r as f64;
    let uniform = zone_average(p, t, quad, |q, th| {
        (q * rf).cos() * (thermal_factor(t, field + th) + thermal_factor(t, field - th))
    })?;
    let staggered = if p.alt_field == 0.0 {
        0.0
    } else {
        let b = p.alt_field;
        zone_average(p, t, quad, |q, th| {
            (q * rf).cos() * b * branch_split_ratio(t, field, th)
        })?
    };
    Ok(Contraction { uniform, staggered })
}

fn odd_contraction(p: &ChainParams, t: Thermal, r: usize, quad: &QuadSpec) -> Result<Contraction> {
    let field = p.field;
    let rf = r as f64;
    let uniform = if p.coupling == 0.0 {
        0.0
    } else {
        let jj = p.coupling;
        zone_average(p, t, quad, |q, th| {
            -(q * rf).cos() * jj * q.cos() * branch_split_ratio(t, field, th)
        })?
    };
    let staggered = if p.alt_coupling == 0.0 {
        0.0
    } else {
        let j = p.alt_coupling;
        zone_average(p, t, quad, |q, th| {
            -(q * rf).sin() * j * q.sin() * branch_split_ratio(t, field, th)
        })?
    };
    Ok(Contraction { uniform, staggered })
}

/// `G_{l,R}` on a site of the given parity.
pub fn g_site(
    p: &ChainParams,
    t: Thermal,
    parity: Parity,
    r: usize,
    quad: &QuadSpec,
) -> Result<f64> {
    Ok(g_r(p, t, r, quad)?.at(parity))
}

/// `⟨σᶻ_l σᶻ_{l+R}⟩ = ⟨σᶻ_l⟩⟨σᶻ_{l+R}⟩ - G_{l,R}²`.
pub fn zz_correlator(
    p: &ChainParams,
    t: Thermal,
    parity: Parity,
    r: usize,
    quad: &QuadSpec,
) -> Result<f64> {
    let sz = sigma_z(p, t, quad)?;
    let g = g_site(p, t, parity, r, quad)?;
    Ok(sz.at(parity) * sz.at(parity.shifted(r)) - g * g)
}

/// `⟨σˣ_l σˣ_{l+1} + σʸ_l σʸ_{l+1}⟩ = -2 G_{l,1}`.
pub fn xx_plus_yy(p: &ChainParams, t: Thermal, parity: Parity, quad: &QuadSpec) -> Result<f64> {
    Ok(-2.0 * g_site(p, t, parity, 1, quad)?)
}

/// `⟨σᶻ⟩` and the contractions for `R = 1..=r_max`, computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub sigma_z: SigmaZ,
    pub g: BTreeMap<usize, Contraction>,
}

impl CorrelationSet {
    pub fn compute(p: &ChainParams, t: Thermal, r_max: usize, quad: &QuadSpec) -> Result<Self> {
        let sigma_z = sigma_z(p, t, quad)?;
        let g = (1..=r_max)
            .map(|r| Ok((r, g_r(p, t, r, quad)?)))
            .collect::<Result<_>>()?;
        Ok(Self { sigma_z, g })
    }

    /// `⟨σᶻ_l⟩`.
    pub fn sz(&self, parity: Parity) -> f64 {
        self.sigma_z.at(parity)
    }

    /// `G_{l,R}`; panics if `R` was not computed.
    pub fn g_site(&self, parity: Parity, r: usize) -> f64 {
        self.g[&r].at(parity)
    }

    pub fn zz(&self, parity: Parity, r: usize) -> f64 {
        let g = self.g_site(parity, r);
        self.sz(parity) * self.sz(parity.shifted(r)) - g * g
    }

    pub fn xx_plus_yy(&self, parity: Parity) -> f64 {
        -2.0 * self.g_site(parity, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::ln_z_per_site;
    use std::f64::consts::{FRAC_2_PI, PI};

    fn params(jj: f64, j: f64, bb: f64, b: f64) -> ChainParams {
        ChainParams::new(jj, j, bb, b).unwrap()
    }

    fn q() -> QuadSpec {
        QuadSpec::default()
    }

    const T0: Thermal = Thermal::ZeroTemperature;

    #[test]
    fn g1_xx_chain_ground_state() {
        let g = g1(&params(1.0, 0.0, 0.0, 0.0), T0, &q()).unwrap();
        assert!((g.uniform + FRAC_2_PI).abs() < 1e-12);
        assert_eq!(g.staggered, 0.0);
    }

    #[test]
    fn g1_dimer() {
        let p = params(1.0, 1.0, 0.0, 0.0);
        let g = g1(&p, T0, &q()).unwrap();
        assert!((g.uniform + 0.5).abs() < 1e-12);
        assert!((g.staggered + 0.5).abs() < 1e-12);
        assert!((g_site(&p, T0, Parity::Even, 1, &q()).unwrap() + 1.0).abs() < 1e-12);
        assert!(g_site(&p, T0, Parity::Odd, 1, &q()).unwrap().abs() < 1e-12);
        assert!((xx_plus_yy(&p, T0, Parity::Even, &q()).unwrap() - 2.0).abs() < 1e-12);
        assert!(xx_plus_yy(&p, T0, Parity::Odd, &q()).unwrap().abs() < 1e-12);
        assert!((zz_correlator(&p, T0, Parity::Even, 1, &q()).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn g1_matches_coupling_derivatives() {
        let p = params(1.0, 0.5, 0.4, 0.3);
        let beta = 3.0;
        let tight = QuadSpec::new(1e-13, 1e-13, 200).unwrap();
        let h = 1e-4;
        let lz = |p: ChainParams| ln_z_per_site(&p, Thermal::Finite(beta), &tight).unwrap();
        let d_j = -(lz(p.with_coupling(1.0 + h).unwrap()) - lz(p.with_coupling(1.0 - h).unwrap()))
            / (2.0 * h * beta);
        let d_alt = -(lz(p.with_alt_coupling(0.5 + h).unwrap())
            - lz(p.with_alt_coupling(0.5 - h).unwrap()))
            / (2.0 * h * beta);
        let g = g1(&p, Thermal::Finite(beta), &tight).unwrap();
        assert!((g.uniform - d_j).abs() < 1e-5);
        assert!((g.staggered - d_alt).abs() < 1e-5);
    }

    #[test]
    fn even_r_at_zero_separation_is_sigma_z() {
        let tight = QuadSpec::new(1e-12, 1e-12, 200).unwrap();
        for (p, t) in [
            (params(1.0, 0.5, 0.6, 0.5), Thermal::Finite(2.0)),
            (params(1.0, 1.3, 1.1, 0.2), T0),
        ] {
            let c = even_contraction(&p, t, 0, &tight).unwrap();
            let sz = sigma_z(&p, t, &tight).unwrap();
            assert!((c.uniform - sz.uniform).abs() < 1e-10);
            assert!((c.staggered - sz.staggered).abs() < 1e-10);
        }
    }

    #[test]
    fn g_even_examples() {
        let c = g_even(&params(1.0, 0.0, 0.0, 0.0), T0, 2, &q()).unwrap();
        assert_eq!(c.uniform, 0.0);
        assert_eq!(c.staggered, 0.0);
        assert!(g_even(&params(1.0, 0.0, 0.0, 0.0), T0, 3, &q()).is_err());
        assert!(g_even(&params(1.0, 0.0, 0.0, 0.0), T0, 0, &q()).is_err());
        // without a staggered field both sublattices agree
        let p = params(1.0, 0.7, 0.4, 0.0);
        let a = g_site(&p, Thermal::Finite(2.0), Parity::Even, 4, &q()).unwrap();
        let b = g_site(&p, Thermal::Finite(2.0), Parity::Odd, 4, &q()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn g_odd_examples() {
        let p = params(1.0, 0.0, 0.3, 0.2);
        for r in [3, 5, 7] {
            assert_eq!(
                g_odd(&p, Thermal::Finite(1.0), r, &q()).unwrap().staggered,
                0.0
            );
        }
        assert!(g_odd(&p, T0, 1, &q()).is_err());
        assert!(g_odd(&p, T0, 4, &q()).is_err());

        // XX chain, B = 0: -(1/π) ∫₀^π cos 3q sign(cos q) cos q ... evaluated by a
        // plain midpoint sum at high resolution as the reference.
        let n = 2_000_000;
        let h = PI / n as f64;
        let reference: f64 = (0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                -(3.0 * x).cos() * x.cos().signum() * 2.0
            })
            .sum::<f64>()
            * h
            / (2.0 * PI);
        let c = g_odd(&params(1.0, 0.0, 0.0, 0.0), T0, 3, &q()).unwrap();
        assert!((c.uniform - reference).abs() < 1e-9);
        assert!((c.uniform - 2.0 / (3.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn dimer_has_no_contraction_across_a_cut() {
        let p = params(1.0, 1.0, 0.0, 0.0);
        let c = g_odd(&p, T0, 3, &q()).unwrap();
        assert!((c.uniform + c.staggered).abs() < 1e-12);
        assert!((c.uniform - c.staggered).abs() < 1e-12);
    }

    #[test]
    fn xx_chain_zz() {
        let v = zz_correlator(&params(1.0, 0.0, 0.0, 0.0), T0, Parity::Even, 1, &q()).unwrap();
        assert!((v + FRAC_2_PI * FRAC_2_PI).abs() < 1e-12);
        let v = xx_plus_yy(&params(1.0, 0.0, 0.0, 0.0), T0, Parity::Odd, &q()).unwrap();
        assert!((v - 4.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature_is_uncorrelated() {
        let p = params(1.0, 0.6, 0.8, 0.4);
        let t = Thermal::Finite(1e-9);
        for r in 1..=4 {
            for parity in [Parity::Even, Parity::Odd] {
                assert!(zz_correlator(&p, t, parity, r, &q()).unwrap().abs() < 1e-8);
            }
        }
    }

    #[test]
    fn swapping_sign_of_alt_coupling_swaps_parities() {
        let t = Thermal::Finite(1.5);
        let p = params(1.0, 0.6, 0.3, 0.0);
        let m = params(1.0, -0.6, 0.3, 0.0);
        let a = g_site(&p, t, Parity::Even, 1, &q()).unwrap();
        let b = g_site(&m, t, Parity::Odd, 1, &q()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sine_weighted_even_form_vanishes() {
        let p = params(1.0, 0.4, 0.5, 0.7);
        for r in [2usize, 4, 6] {
            let v = zone_average(&p, Thermal::Finite(2.0), &q(), |x, th| {
                p.alt_field
                    * (x * r as f64).sin()
                    * branch_split_ratio(Thermal::Finite(2.0), p.field, th)
            })
            .unwrap();
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn correlation_set_is_consistent_with_free_functions() {
        let p = params(1.0, 0.5, 0.6, 0.5);
        let t = Thermal::Finite(2.0);
        let set = CorrelationSet::compute(&p, t, 3, &q()).unwrap();
        assert_eq!(set.g.len(), 3);
        for parity in [Parity::Even, Parity::Odd] {
            for r in 1..=3 {
                assert_eq!(
                    set.g_site(parity, r),
                    g_site(&p, t, parity, r, &q()).unwrap()
                );
                assert_eq!(
                    set.zz(parity, r),
                    zz_correlator(&p, t, parity, r, &q()).unwrap()
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn bounded_contractions(j in 0.0..2.0f64, bb in 0.0..2.0f64, b in 0.0..2.0f64,
                                    beta in 0.1..20.0f64) {
                let p = ChainParams::new(1.0, j, bb, b).unwrap();
                let set = CorrelationSet::compute(&p, Thermal::Finite(beta), 3, &QuadSpec::default()).unwrap();
                for parity in [Parity::Even, Parity::Odd] {
                    for r in 1..=3 {
                        prop_assert!(set.g_site(parity, r).abs() <= 1.0 + 1e-9);
                        let zz = set.zz(parity, r);
                        prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&zz));
                    }
                }
            }
        }
    }
}
