//! Analytic values against the finite-chain oracles.

use xxchain::correlations::{CorrelationSet, Parity};
use xxchain::entanglement::{c1_from_set, c2_from_set};
use xxchain::model::{ChainParams, Thermal};
use xxchain::oracle::{
    dense_ed, finite_free_fermion, EdResult, FiniteChainSpec, FreeFermionResult, MAX_ED_SITES,
};
use xxchain::quadrature::QuadSpec;
use xxchain::thermo::thermo_point;

use crate::format::format_g;
use crate::CliError;

/// ED gaps may grow by this much between consecutive sizes.
pub const ED_BAND: f64 = 1e-3;
/// Largest acceptable ED gap at the biggest size.
pub const ED_FINAL_GAP: f64 = 0.02;
/// Largest acceptable free-fermion gap at the biggest size.
pub const FF_FINAL_GAP: f64 = 1e-4;
/// Free-fermion gaps this small are at round-off and need not decrease.
pub const FF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Ed,
    FreeFermion,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Ed => "ed",
            Source::FreeFermion => "free_fermion",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub source: Source,
    pub n: usize,
    pub quantity: &'static str,
    pub analytic: f64,
    pub oracle: f64,
}

impl ReportRow {
    pub fn gap(&self) -> f64 {
        (self.analytic - self.oracle).abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub source: Source,
    pub quantity: &'static str,
    pub passed: bool,
    pub gaps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<ReportRow>,
    pub checks: Vec<Check>,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("source,n,quantity,analytic,oracle,gap\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.source.name(),
                r.n,
                r.quantity,
                format_g(r.analytic),
                format_g(r.oracle),
                format_g(r.gap())
            ));
        }
        out
    }
}

type EdGetter = fn(&EdResult) -> f64;
type FfGetter = Box<dyn Fn(&FreeFermionResult) -> f64>;

fn ed_converges(gaps: &[f64]) -> bool {
    gaps.windows(2).all(|w| w[1] <= w[0] + ED_BAND) && gaps.last().is_none_or(|&g| g < ED_FINAL_GAP)
}

fn ff_converges(gaps: &[f64]) -> bool {
    gaps.windows(2).all(|w| w[1] < w[0] || w[1] <= FF_FLOOR)
        && gaps.last().is_none_or(|&g| g < FF_FINAL_GAP)
}

/// Runs both oracles at every requested size and checks that the gaps to
/// the analytic values shrink.
pub fn run_oracle_compare(
    p: &ChainParams,
    t: Thermal,
    ed_sizes: &[usize],
    ff_sizes: &[usize],
    quad: &QuadSpec,
) -> Result<CompareReport, CliError> {
    let mut sizes: Vec<usize> = ed_sizes.to_vec();
    sizes.sort_unstable();
    if let Some(&n) = sizes.iter().find(|&&n| n > MAX_ED_SITES) {
        return Err(CliError::Validation(format!(
            "ED size {n} exceeds {MAX_ED_SITES}"
        )));
    }
    let mut ff: Vec<usize> = ff_sizes.to_vec();
    ff.sort_unstable();

    let tp = thermo_point(p, t, quad)?;
    let set = CorrelationSet::compute(p, t, 3, quad)?;
    let c1 = c1_from_set(&set)?;
    let c2 = c2_from_set(&set)?;

    let mut rows = Vec::new();
    let mut checks = Vec::new();

    let ed_results = sizes
        .iter()
        .map(|&n| Ok(dense_ed(&FiniteChainSpec::new(n, *p, t)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let ed_quantities: [(&'static str, f64, EdGetter); 9] = [
        ("u", tp.u, |r| r.energy_per_site),
        ("m", tp.m, |r| r.magnetization),
        ("m_s", tp.m_s, |r| r.staggered_magnetization),
        ("zz1_odd", set.zz(Parity::Odd, 1), |r| r.nearest.odd.zz),
        ("zz1_even", set.zz(Parity::Even, 1), |r| r.nearest.even.zz),
        ("c1_odd", c1.odd, |r| r.c1.odd),
        ("c1_even", c1.even, |r| r.c1.even),
        ("c2_odd", c2.odd, |r| r.c2.odd),
        ("c2_even", c2.even, |r| r.c2.even),
    ];
    if !ed_results.is_empty() {
        for (name, analytic, get) in ed_quantities {
            let mut gaps = Vec::new();
            for r in &ed_results {
                let row = ReportRow {
                    source: Source::Ed,
                    n: r.n_sites,
                    quantity: name,
                    analytic,
                    oracle: get(r),
                };
                gaps.push(row.gap());
                rows.push(row);
            }
            checks.push(Check {
                source: Source::Ed,
                quantity: name,
                passed: ed_converges(&gaps),
                gaps,
            });
        }
    }

    let ff_results = ff
        .iter()
        .map(|&n| Ok(finite_free_fermion(&FiniteChainSpec::new(n, *p, t)?, 3)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut ff_quantities: Vec<(&'static str, f64, FfGetter)> = vec![
        ("u", tp.u, Box::new(|r| r.u)),
        ("m", tp.m, Box::new(|r| r.m)),
        ("m_s", tp.m_s, Box::new(|r| r.m_s)),
    ];
    const G_NAMES: [[&str; 2]; 3] = [
        ["g1_uniform", "g1_staggered"],
        ["g2_uniform", "g2_staggered"],
        ["g3_uniform", "g3_staggered"],
    ];
    for r in 1..=3usize {
        let g = set.g[&r];
        ff_quantities.push((
            G_NAMES[r - 1][0],
            g.uniform,
            Box::new(move |x| x.g[&r].uniform),
        ));
        ff_quantities.push((
            G_NAMES[r - 1][1],
            g.staggered,
            Box::new(move |x| x.g[&r].staggered),
        ));
    }
    if !ff_results.is_empty() {
        for (name, analytic, get) in ff_quantities {
            let mut gaps = Vec::new();
            for r in &ff_results {
                let row = ReportRow {
                    source: Source::FreeFermion,
                    n: r.n_sites,
                    quantity: name,
                    analytic,
                    oracle: get(r),
                };
                gaps.push(row.gap());
                rows.push(row);
            }
            checks.push(Check {
                source: Source::FreeFermion,
                quantity: name,
                passed: ff_converges(&gaps),
                gaps,
            });
        }
    }
    Ok(CompareReport { rows, checks })
}
