use nalgebra::{DMatrix, SymmetricEigen};

use super::{bond_coupling, site_field, ByParity, FiniteChainSpec};
use crate::correlations::Parity;
use crate::entanglement::{witness_from, wootters, ConcurrencePair, DensityMatrix, C64};
use crate::error::{Error, Result};
use crate::model::{ChainParams, Thermal};

pub const MAX_ED_SITES: usize = 12;

/// Eigenvalues closer than this to the ground energy count as degenerate.
const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Eigenvectors with relative Gibbs weight below this are dropped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-18;

/// Two-site reduced state averaged over all pairs `(l, l+R)` with `l` of a
/// given parity.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    pub rho: DensityMatrix,
    pub zz: f64,
    pub xx_yy: f64,
    pub concurrence: f64,
}

impl PairState {
    /// Fermionic contraction for `R = 1`, `-⟨σˣσˣ + σʸσʸ⟩ / 2`.
    pub fn g(&self) -> f64 {
        -0.5 * self.xx_yy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdResult {
    pub n_sites: usize,
    /// Thermal `⟨H⟩ / N`; the ground energy at zero temperature.
    pub energy_per_site: f64,
    pub ground_energy_per_site: f64,
    pub ground_degeneracy: usize,
    pub magnetization: f64,
    pub staggered_magnetization: f64,
    pub sigma_z: ByParity<f64>,
    pub nearest: ByParity<PairState>,
    pub next_nearest: ByParity<PairState>,
    pub c1: ConcurrencePair,
    pub c2: ConcurrencePair,
    /// Meyer-Wallach measure of the (uniformly mixed) ground space.
    pub e_mw: f64,
    /// `None` when `J = j = 0`.
    pub witness_lhs: Option<f64>,
}

struct Sector {
    states: Vec<u32>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn spin(state: u32, site: usize) -> f64 {
    if state >> (site - 1) & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// `H = -Σ_l [J_l (σ⁺_l σ⁻_{l+1} + h.c.) + B_l σᶻ_l]` on the listed states.
fn build_block(n: usize, p: &ChainParams, states: &[u32], index: &[usize]) -> DMatrix<f64> {
    let d = states.len();
    let mut h = DMatrix::zeros(d, d);
    for (i, &s) in states.iter().enumerate() {
        h[(i, i)] = -(1..=n).map(|l| site_field(p, l) * spin(s, l)).sum::<f64>();
        for l in 1..=n {
            let (a, b) = (l - 1, l % n);
            if (s >> a & 1) != (s >> b & 1) {
                let t = s ^ (1 << a) ^ (1 << b);
                h[(index[t as usize], i)] -= bond_coupling(p, l);
            }
        }
    }
    h
}

/// Full `2^N × 2^N` Hamiltonian in the computational basis.
pub fn dense_hamiltonian(n: usize, p: &ChainParams) -> Result<DMatrix<f64>> {
    if n > MAX_ED_SITES {
        return Err(Error::DimensionTooLarge(n));
    }
    let states: Vec<u32> = (0..1u32 << n).collect();
    let index: Vec<usize> = (0..1usize << n).collect();
    Ok(build_block(n, p, &states, &index))
}

fn sectors(spec: &FiniteChainSpec) -> Result<Vec<Sector>> {
    let n = spec.n_sites();
    if n > MAX_ED_SITES {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut by_count: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    let mut index = vec![0usize; 1 << n];
    for s in 0..1u32 << n {
        let bucket = &mut by_count[s.count_ones() as usize];
        index[s as usize] = bucket.len();
        bucket.push(s);
    }
    Ok(by_count
        .into_iter()
        .map(|states| {
            let h = build_block(n, &spec.params, &states, &index);
            let eig = SymmetricEigen::new(h);
            Sector {
                states,
                energies: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            }
        })
        .collect())
}

/// Spectrum of each fixed-magnetization sector, keyed by the number of up spins.
pub fn sector_spectra(spec: &FiniteChainSpec) -> Result<Vec<(usize, Vec<f64>)>> {
    Ok(sectors(spec)?
        .into_iter()
        .enumerate()
        .map(|(k, s)| (k, s.energies))
        .collect())
}

/// Pair `(a, b)` of 1-based sites.
type Pair = (usize, usize);

/// Weighted state: per sector, the kept eigenvectors scaled by `√(w/Z)`,
/// stored transposed so that `ρ_ij` is a dot product of two columns.
struct Mixture {
    scaled: Vec<(Vec<u32>, DMatrix<f64>)>,
    index: Vec<usize>,
}

impl Mixture {
    fn new(n: usize, sectors: &[Sector], weight: impl Fn(f64) -> f64) -> Self {
        let z: f64 = sectors
            .iter()
            .flat_map(|s| s.energies.iter())
            .map(|&e| weight(e))
            .sum();
        let w_max = sectors
            .iter()
            .flat_map(|s| s.energies.iter())
            .map(|&e| weight(e))
            .fold(0.0, f64::max);
        let mut index = vec![0usize; 1 << n];
        let scaled = sectors
            .iter()
            .map(|s| {
                for (i, &st) in s.states.iter().enumerate() {
                    index[st as usize] = i;
                }
                let kept: Vec<usize> = (0..s.energies.len())
                    .filter(|&k| weight(s.energies[k]) > NEGLIGIBLE_WEIGHT * w_max)
                    .collect();
                let mut a = DMatrix::zeros(kept.len(), s.states.len());
                for (r, &k) in kept.iter().enumerate() {
                    let c = (weight(s.energies[k]) / z).sqrt();
                    for i in 0..s.states.len() {
                        a[(r, i)] = c * s.vectors[(i, k)];
                    }
                }
                (s.states.clone(), a)
            })
            .collect();
        Self { scaled, index }
    }

    fn element(a: &DMatrix<f64>, i: usize, j: usize) -> f64 {
        a.column(i).dot(&a.column(j))
    }

    /// `⟨σᶻ_l⟩` for every site.
    fn sigma_z(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n + 1];
        for (states, a) in &self.scaled {
            for (i, &s) in states.iter().enumerate() {
                let pr = a.column(i).norm_squared();
                for (l, o) in out.iter_mut().enumerate().skip(1) {
                    *o += pr * spin(s, l);
                }
            }
        }
        out
    }

    /// Reduced density matrix of the pair in the basis
    /// `|↓↓⟩, |↓↑⟩, |↑↓⟩, |↑↑⟩`.
    fn reduced(&self, (a, b): Pair) -> [[f64; 4]; 4] {
        let mut rho = [[0.0; 4]; 4];
        let bit = |s: u32, site: usize| (s >> (site - 1) & 1) as usize;
        for (states, m) in &self.scaled {
            for (i, &s) in states.iter().enumerate() {
                let k = 2 * bit(s, a) + bit(s, b);
                rho[k][k] += m.column(i).norm_squared();
                if k == 2 {
                    let t = s ^ (1 << (a - 1)) ^ (1 << (b - 1));
                    let v = Self::element(m, i, self.index[t as usize]);
                    rho[2][1] += v;
                    rho[1][2] += v;
                }
            }
        }
        rho
    }
}

fn pair_state(mix: &Mixture, n: usize, parity: Parity, r: usize) -> Result<PairState> {
    let sites: Vec<usize> = (1..=n).filter(|&l| Parity::of_site(l) == parity).collect();
    let mut acc = [[0.0; 4]; 4];
    for &l in &sites {
        let b = (l - 1 + r) % n + 1;
        let rho = mix.reduced((l, b));
        for i in 0..4 {
            for j in 0..4 {
                acc[i][j] += rho[i][j] / sites.len() as f64;
            }
        }
    }
    let rho = DensityMatrix::from_fn(|i, j| C64::new(acc[i][j], 0.0));
    let zz = acc[0][0] + acc[3][3] - acc[1][1] - acc[2][2];
    Ok(PairState {
        concurrence: wootters(&rho)?,
        zz,
        xx_yy: 4.0 * acc[1][2],
        rho,
    })
}

/// Exact diagonalization of the periodic spin ring.
///
/// At zero temperature the state is the uniform mixture over the ground
/// space. Sublattice quantities are averaged over all sites of a parity.
pub fn dense_ed(spec: &FiniteChainSpec) -> Result<EdResult> {
    let n = spec.n_sites();
    let sectors = sectors(spec)?;
    let e0 = sectors
        .iter()
        .flat_map(|s| s.energies.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let is_ground = |e: f64| e - e0 < DEGENERACY_TOLERANCE * e0.abs().max(1.0);
    let ground_degeneracy = sectors
        .iter()
        .flat_map(|s| s.energies.iter())
        .filter(|&&e| is_ground(e))
        .count();
    let ground_weight = |e: f64| if is_ground(e) { 1.0 } else { 0.0 };

    let mix = match spec.thermal {
        Thermal::ZeroTemperature => Mixture::new(n, &sectors, ground_weight),
        Thermal::Finite(beta) => Mixture::new(n, &sectors, |e| (-beta * (e - e0)).exp()),
    };
    let energy_per_site = match spec.thermal {
        Thermal::ZeroTemperature => e0 / n as f64,
        Thermal::Finite(beta) => {
            let (mut num, mut z) = (0.0, 0.0);
            for &e in sectors.iter().flat_map(|s| s.energies.iter()) {
                let w = (-beta * (e - e0)).exp();
                num += w * e;
                z += w;
            }
            num / z / n as f64
        }
    };

    let sz = mix.sigma_z(n);
    let avg = |parity: Parity, v: &[f64]| {
        let sites: Vec<usize> = (1..=n).filter(|&l| Parity::of_site(l) == parity).collect();
        sites.iter().map(|&l| v[l]).sum::<f64>() / sites.len() as f64
    };
    let sigma_z = ByParity::build(|s| avg(s, &sz));
    let magnetization = 0.5 * (sigma_z.even + sigma_z.odd);
    let staggered_magnetization = 0.5 * (sigma_z.even - sigma_z.odd);

    let nearest = ByParity {
        odd: pair_state(&mix, n, Parity::Odd, 1)?,
        even: pair_state(&mix, n, Parity::Even, 1)?,
    };
    let next_nearest = ByParity {
        odd: pair_state(&mix, n, Parity::Odd, 2)?,
        even: pair_state(&mix, n, Parity::Even, 2)?,
    };

    let ground_sz = match spec.thermal {
        Thermal::ZeroTemperature => sz.clone(),
        Thermal::Finite(_) => Mixture::new(n, &sectors, ground_weight).sigma_z(n),
    };
    let e_mw = 1.0 - ground_sz.iter().skip(1).map(|s| s * s).sum::<f64>() / n as f64;

    let witness_lhs = witness_from(
        &spec.params,
        energy_per_site,
        magnetization,
        staggered_magnetization,
    )
    .ok()
    .map(|w| w.lhs);

    Ok(EdResult {
        n_sites: n,
        energy_per_site,
        ground_energy_per_site: e0 / n as f64,
        ground_degeneracy,
        magnetization,
        staggered_magnetization,
        sigma_z,
        c1: ConcurrencePair {
            odd: nearest.odd.concurrence,
            even: nearest.even.concurrence,
        },
        c2: ConcurrencePair {
            odd: next_nearest.odd.concurrence,
            even: next_nearest.even.concurrence,
        },
        nearest,
        next_nearest,
        e_mw,
        witness_lhs,
    })
}
