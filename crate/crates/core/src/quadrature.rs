//! Adaptive Gauss-Kronrod integration over the half Brillouin zone `[0, π]`.
//!
//! Every thermodynamic and correlation quantity of the chain is a
//! `∫₀^π dq/2π` of a function of `Λ±(q)`. At low temperature these integrands
//! develop steep fronts (and at `T = 0` jumps) at the Fermi angles, which are
//! known in closed form. Registering them as breakpoints lets the 21-point
//! rule converge at full order on each smooth piece.
//!
//! The scheme is the usual global one: integrate each initial panel, then
//! repeatedly bisect the panel with the largest error estimate until the
//! summed estimate drops below `max(abs_tol, rel_tol·|value|)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::Thermal;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_626_469,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and known non-smooth points for one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    breakpoints: Vec<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 60,
            breakpoints: Vec::new(),
        }
    }
}

impl QuadSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) || !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidQuadSpec(format!(
                "tolerances must be positive and finite (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
            breakpoints: Vec::new(),
        })
    }

    /// Same tolerances, tightened by `factor` (< 1 tightens).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..self.clone()
        }
    }

    /// Adds interior breakpoints. Points must lie strictly inside `(0, π)`;
    /// the stored list stays sorted and deduplicated.
    pub fn with_breakpoints(mut self, points: &[f64]) -> Result<Self> {
        for &p in points {
            if !(p > 0.0 && p < PI) {
                return Err(Error::InvalidQuadSpec(format!(
                    "breakpoint {p} is not strictly inside (0, pi)"
                )));
            }
        }
        self.breakpoints.extend_from_slice(points);
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        Ok(self)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl Integral {
    /// The value, or [`Error::ToleranceNotReached`] carrying the best estimate.
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::ToleranceNotReached {
                value: self.value,
                error: self.error,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut res_g = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for i in 0..10 {
        let dx = half * XGK[i];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[i] = f1;
        fv2[i] = f2;
        res_k += WGK[i] * (f1 + f2);
        res_abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            res_g += WG[i / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for i in 0..10 {
        res_asc += WGK[i] * ((fv1[i] - mean).abs() + (fv2[i] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// `∫₀^π f(q) dq` under `spec`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &QuadSpec) -> Integral {
    integrate_range(f, 0.0, PI, spec)
}

/// `∫_a^b f(q) dq`, splitting first at the breakpoints of `spec` that fall
/// strictly inside `(a, b)`.
pub fn integrate_range<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Integral {
    if b <= a {
        return Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
            converged: true,
        };
    }
    let mut edges = vec![a];
    edges.extend(spec.breakpoints.iter().copied().filter(|&p| p > a && p < b));
    edges.push(b);

    let mut panels: Vec<Panel> = edges
        .windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= spec.target(value) {
            return Integral {
                value,
                error,
                subdivisions,
                converged: true,
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        // Stop once the worst panel can no longer be split in floating point.
        if subdivisions >= spec.max_subdivisions || mid <= p.a || mid >= p.b {
            return Integral {
                value,
                error,
                subdivisions,
                converged: false,
            };
        }
        panels[worst] = gauss_kronrod(&f, p.a, mid);
        panels.push(gauss_kronrod(&f, mid, p.b));
        subdivisions += 1;
    }
}

/// `|Λ|` at or below this counts as a zero mode at `T = 0`. Flat bands at
/// the Fermi level (`|j| = J`, `b = 0`, `|B| = J`) otherwise pick up a
/// random sign from round-off in `Θ`.
pub const ZERO_MODE_TOLERANCE: f64 = 1e-12;

/// `tanh(βΛ)` at finite temperature, `sign(Λ)` (with `sign(0) = 0`) at `T = 0`.
#[inline]
pub fn thermal_factor(t: Thermal, lambda: f64) -> f64 {
    match t {
        Thermal::Finite(beta) => (beta * lambda).tanh(),
        Thermal::ZeroTemperature => {
            if lambda > ZERO_MODE_TOLERANCE {
                1.0
            } else if lambda < -ZERO_MODE_TOLERANCE {
                -1.0
            } else {
                0.0
            }
        }
    }
}

/// `[tf(B + Θ) - tf(B - Θ)] / Θ` with its removable `Θ → 0` limit.
///
/// At finite β the small-`Θ` branch uses
/// `tanh x - tanh y = 2 sinh(x - y) / (cosh(x + y) + cosh(x - y))`, which is
/// free of cancellation; the limit is `2β sech²(βB)`. At `T = 0` the limit is
/// taken as 0, which is exact whenever `B ≠ 0`.
#[inline]
pub(crate) fn branch_split_ratio(t: Thermal, field: f64, theta: f64) -> f64 {
    match t {
        Thermal::Finite(beta) => {
            let x = beta * theta;
            if x >= 0.5 {
                ((beta * (field + theta)).tanh() - (beta * (field - theta)).tanh()) / theta
            } else if theta == 0.0 {
                let s = 1.0 / (beta * field).cosh();
                2.0 * beta * s * s
            } else {
                let num = 2.0 * (2.0 * x).sinh() / theta;
                num / ((2.0 * beta * field).cosh() + (2.0 * x).cosh())
            }
        }
        Thermal::ZeroTemperature => {
            if theta == 0.0 {
                0.0
            } else {
                (thermal_factor(t, field + theta) - thermal_factor(t, field - theta)) / theta
            }
        }
    }
}
