use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Complex, Matrix2, SymmetricEigen, Vector2};

use super::FiniteChainSpec;
use crate::correlations::Contraction;
use crate::model::{ChainParams, Thermal};

type C64 = Complex<f64>;

/// Sums over the momenta `k = 2πκ/N`, `κ = 1..N/2`, of a periodic fermion
/// ring; the integrals they approximate are `(1/2π)∫₀^π dq`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeFermionResult {
    pub n_sites: usize,
    pub u: f64,
    pub m: f64,
    pub m_s: f64,
    /// `None` at zero temperature.
    pub ln_z_per_site: Option<f64>,
    /// `(G_R⁰, G_Rˢ)` for `R = 1..=r_max`.
    pub g: BTreeMap<usize, Contraction>,
    /// Largest gap between a block eigenvalue and `2B ± 2Θ(k)`.
    pub block_deviation: f64,
}

/// The k-block in the `(k, k+π)` basis,
/// `[[2B - 2J cos k, 2b + 2ij sin k], [2b - 2ij sin k, 2B + 2J cos k]]`.
pub fn block_matrix(p: &ChainParams, k: f64) -> Matrix2<C64> {
    let (s, c) = k.sin_cos();
    let diag = |x: f64| C64::new(x, 0.0);
    let nu_plus = C64::new(2.0 * p.alt_field, 2.0 * p.alt_coupling * s);
    Matrix2::new(
        diag(2.0 * p.field - 2.0 * p.coupling * c),
        nu_plus,
        nu_plus.conj(),
        diag(2.0 * p.field + 2.0 * p.coupling * c),
    )
}

/// Largest gap between the eigenvalues of [`block_matrix`] and `2B ± 2Θ(k)`.
pub fn block_deviation(p: &ChainParams, k: f64) -> f64 {
    let mut eps: Vec<f64> = SymmetricEigen::new(block_matrix(p, k))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eps.sort_by(f64::total_cmp);
    let theta = p.theta_unchecked(k);
    (eps[0] - 2.0 * p.field + 2.0 * theta)
        .abs()
        .max((eps[1] - 2.0 * p.field - 2.0 * theta).abs())
}

fn fermi(t: Thermal, e: f64) -> f64 {
    match t {
        Thermal::Finite(beta) => 1.0 / ((beta * e).exp() + 1.0),
        Thermal::ZeroTemperature if e < 0.0 => 1.0,
        Thermal::ZeroTemperature if e > 0.0 => 0.0,
        Thermal::ZeroTemperature => 0.5,
    }
}

/// `ln(1 + eˣ)` without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Thermodynamic-limit quantities evaluated on a finite momentum grid.
pub fn finite_free_fermion(spec: &FiniteChainSpec, r_max: usize) -> FreeFermionResult {
    let n = spec.n_sites();
    let p = spec.params;
    let t = spec.thermal;
    let nf = n as f64;

    let (mut energy, mut occupation, mut stag, mut ln_z, mut deviation) =
        (0.0, 0.0, 0.0, 0.0, 0.0f64);
    let mut g0 = vec![0.0; r_max + 1];
    let mut gs = vec![0.0; r_max + 1];

    for kappa in 1..=n / 2 {
        let k = 2.0 * PI * kappa as f64 / nf;
        let eig = SymmetricEigen::new(block_matrix(&p, k));
        let theta = p.theta_unchecked(k);
        let mut eps = [eig.eigenvalues[0], eig.eigenvalues[1]];
        let mut sorted = eps;
        sorted.sort_by(f64::total_cmp);
        let expected = [2.0 * p.field - 2.0 * theta, 2.0 * p.field + 2.0 * theta];
        deviation = deviation
            .max((sorted[0] - expected[0]).abs())
            .max((sorted[1] - expected[1]).abs());

        // n_{αβ} = ⟨d†_α d_β⟩ = conj(U f U†)
        let f = eps.map(|e| fermi(t, e));
        let u = &eig.eigenvectors;
        let weights =
            Matrix2::from_diagonal(&Vector2::new(C64::new(f[0], 0.0), C64::new(f[1], 0.0)));
        let occ = (u * weights * u.adjoint()).map(|z| z.conj());

        energy += eps[0] * f[0] + eps[1] * f[1];
        occupation += occ[(0, 0)].re + occ[(1, 1)].re;
        stag += occ[(0, 1)].re;
        if let Thermal::Finite(beta) = t {
            eps.sort_by(f64::total_cmp);
            ln_z += softplus(-beta * eps[0]) + softplus(-beta * eps[1]) + 2.0 * beta * p.field;
        }
        for r in 1..=r_max {
            let phase = C64::from_polar(1.0, k * r as f64);
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            g0[r] += (phase * (occ[(0, 0)] + occ[(1, 1)] * sign)).re;
            gs[r] += (phase * (occ[(0, 1)] * sign + occ[(1, 0)])).re;
        }
    }

    FreeFermionResult {
        n_sites: n,
        u: energy / nf - p.field,
        m: 1.0 - 2.0 * occupation / nf,
        m_s: -4.0 * stag / nf,
        ln_z_per_site: match t {
            Thermal::Finite(_) => Some(ln_z / nf),
            Thermal::ZeroTemperature => None,
        },
        g: (1..=r_max)
            .map(|r| {
                (
                    r,
                    Contraction {
                        uniform: -2.0 * g0[r] / nf,
                        staggered: -2.0 * gs[r] / nf,
                    },
                )
            })
            .collect(),
        block_deviation: deviation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::CorrelationSet;
    use crate::quadrature::QuadSpec;
    use crate::thermo::thermo_point;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(n: usize, jj: f64, j: f64, bb: f64, b: f64, t: Thermal) -> FiniteChainSpec {
        FiniteChainSpec::new(n, ChainParams::new(jj, j, bb, b).unwrap(), t).unwrap()
    }

    #[test]
    fn block_spectrum_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst = 0.0f64;
        for _ in 0..500 {
            let n = 2 * rng.gen_range(2..500);
            let s = spec(
                n,
                rng.gen_range(0.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                Thermal::Finite(1.0),
            );
            worst = worst.max(finite_free_fermion(&s, 0).block_deviation);
        }
        assert!(worst < 1e-12, "{worst}");
    }

    /// `⟨c†_a c_b⟩` of down-spin fermions with `h_ll = 2B_l` and
    /// `h_{l,l+1} = -J_l` on a periodic ring.
    fn real_space_correlations(s: &FiniteChainSpec, beta: f64) -> DMatrix<f64> {
        let n = s.n_sites();
        let p = s.params;
        let mut h = DMatrix::zeros(n, n);
        for l in 1..=n {
            let i = l - 1;
            h[(i, i)] = 2.0 * super::super::site_field(&p, l);
            let j = l % n;
            h[(i, j)] = -super::super::bond_coupling(&p, l);
            h[(j, i)] = -super::super::bond_coupling(&p, l);
        }
        let eig = nalgebra::SymmetricEigen::new(h);
        let f = eig.eigenvalues.map(|e| 1.0 / ((beta * e).exp() + 1.0));
        &eig.eigenvectors * DMatrix::from_diagonal(&f) * eig.eigenvectors.transpose()
    }

    #[test]
    fn momentum_sums_match_real_space_fermions() {
        // σᶻ_l = 1 - 2n_l and G_{l,R} = -2⟨c†_l c_{l+R}⟩
        let s = spec(40, 1.0, 0.4, 0.3, 0.5, Thermal::Finite(2.0));
        let beta = 2.0;
        let c = real_space_correlations(&s, beta);
        let ff = finite_free_fermion(&s, 3);
        let n = s.n_sites();
        let site_sz = |l: usize| 1.0 - 2.0 * c[(l - 1, l - 1)];
        let m = (1..=n).map(site_sz).sum::<f64>() / n as f64;
        assert!((m - ff.m).abs() < 1e-12, "{m} {}", ff.m);
        let ms = (1..=n)
            .map(|l| if l % 2 == 0 { site_sz(l) } else { -site_sz(l) })
            .sum::<f64>()
            / n as f64;
        assert!((ms - ff.m_s).abs() < 1e-12, "{ms} {}", ff.m_s);
        for r in 1..=3 {
            let g = ff.g[&r];
            for l in [1usize, 2] {
                let hop = c[(l - 1, (l - 1 + r) % n)];
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!(
                    (-2.0 * hop - (g.uniform + sign * g.staggered)).abs() < 1e-12,
                    "R={r} l={l}"
                );
            }
        }
    }

    #[test]
    fn sums_approach_integrals() {
        let p = ChainParams::new(1.0, 0.5, 0.6, 0.5).unwrap();
        let t = Thermal::Finite(2.0);
        let q = QuadSpec::new(1e-13, 1e-13, 200).unwrap();
        let exact = thermo_point(&p, t, &q).unwrap();
        let set = CorrelationSet::compute(&p, t, 3, &q).unwrap();
        let ff = finite_free_fermion(&FiniteChainSpec::new(256, p, t).unwrap(), 3);
        assert!((ff.u - exact.u).abs() < 1e-10);
        assert!((ff.m - exact.m).abs() < 1e-10);
        assert!((ff.m_s - exact.m_s).abs() < 1e-10);
        assert!((ff.ln_z_per_site.unwrap() - exact.ln_z_per_site.unwrap()).abs() < 1e-10);
        for r in 1..=3 {
            assert!((ff.g[&r].uniform - set.g[&r].uniform).abs() < 1e-10);
            assert!((ff.g[&r].staggered - set.g[&r].staggered).abs() < 1e-10);
        }
    }
}
