use std::fmt;
use std::str::FromStr;

use xxchain::correlations::CorrelationSet;
use xxchain::entanglement::{c1_from_set, c2_from_set, witness_from, ConcurrencePair};
use xxchain::ground;
use xxchain::model::{ChainParams, Thermal};
use xxchain::quadrature::QuadSpec;
use xxchain::thermo::{internal_energy, magnetization, staggered_magnetization};
use xxchain::Error;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    U,
    M,
    MS,
    EMw,
    C1Odd,
    C1Even,
    C2Odd,
    C2Even,
    WitnessLhs,
    EnergyT0,
    MT0,
}

impl Quantity {
    pub const ALL: [Quantity; 11] = [
        Quantity::U,
        Quantity::M,
        Quantity::MS,
        Quantity::EMw,
        Quantity::C1Odd,
        Quantity::C1Even,
        Quantity::C2Odd,
        Quantity::C2Even,
        Quantity::WitnessLhs,
        Quantity::EnergyT0,
        Quantity::MT0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::U => "u",
            Quantity::M => "m",
            Quantity::MS => "m_s",
            Quantity::EMw => "e_mw",
            Quantity::C1Odd => "c1_odd",
            Quantity::C1Even => "c1_even",
            Quantity::C2Odd => "c2_odd",
            Quantity::C2Even => "c2_even",
            Quantity::WitnessLhs => "witness_lhs",
            Quantity::EnergyT0 => "energy_t0",
            Quantity::MT0 => "m_t0",
        }
    }

    /// Ground-state quantities that do not depend on temperature.
    pub fn is_ground_only(self) -> bool {
        matches!(self, Quantity::EMw | Quantity::EnergyT0 | Quantity::MT0)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s.trim())
            .ok_or_else(|| {
                let known: Vec<_> = Quantity::ALL.iter().map(|q| q.name()).collect();
                CliError::Validation(format!(
                    "unknown quantity {s:?}; expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

pub fn parse_list(items: &[String]) -> Result<Vec<Quantity>, CliError> {
    if items.is_empty() {
        return Err(CliError::Validation("no quantities requested".into()));
    }
    items.iter().map(|s| s.parse()).collect()
}

/// Values of the requested quantities at one point; failures become `NaN`
/// plus a `quantity:kind` flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub values: Vec<f64>,
    pub flags: Vec<String>,
}

impl Record {
    pub fn err_flags(&self) -> String {
        self.flags.join(";")
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ToleranceNotReached { .. } => "tolerance",
        Error::NegativeRadicand(_) => "radicand",
        Error::DegenerateCoupling => "degenerate",
        Error::ZeroTemperatureUnsupported => "zero_temperature",
        _ => "error",
    }
}

/// Evaluates each quantity once, sharing the thermal integrals and the
/// correlation set between quantities that need them.
struct Evaluator<'a> {
    p: ChainParams,
    t: Thermal,
    quad: &'a QuadSpec,
    thermo: Option<Result<(f64, f64, f64), Error>>,
    conc: Option<Result<(ConcurrencePair, ConcurrencePair), Error>>,
}

impl Evaluator<'_> {
    fn thermo(&mut self) -> Result<(f64, f64, f64), Error> {
        let (p, t, quad) = (self.p, self.t, self.quad);
        self.thermo
            .get_or_insert_with(|| {
                Ok((
                    internal_energy(&p, t, quad)?,
                    magnetization(&p, t, quad)?,
                    staggered_magnetization(&p, t, quad)?,
                ))
            })
            .clone()
    }

    fn concurrences(&mut self) -> Result<(ConcurrencePair, ConcurrencePair), Error> {
        let (p, t, quad) = (self.p, self.t, self.quad);
        self.conc
            .get_or_insert_with(|| {
                let set = CorrelationSet::compute(&p, t, 2, quad)?;
                Ok((c1_from_set(&set)?, c2_from_set(&set)?))
            })
            .clone()
    }

    fn eval(&mut self, q: Quantity) -> Result<f64, Error> {
        Ok(match q {
            Quantity::U => self.thermo()?.0,
            Quantity::M => self.thermo()?.1,
            Quantity::MS => self.thermo()?.2,
            Quantity::EMw => ground::meyer_wallach(&self.p, self.quad)?,
            Quantity::C1Odd => self.concurrences()?.0.odd,
            Quantity::C1Even => self.concurrences()?.0.even,
            Quantity::C2Odd => self.concurrences()?.1.odd,
            Quantity::C2Even => self.concurrences()?.1.even,
            Quantity::WitnessLhs => {
                let (u, m, ms) = self.thermo()?;
                witness_from(&self.p, u, m, ms)?.lhs
            }
            Quantity::EnergyT0 => ground::energy(&self.p, self.quad)?,
            Quantity::MT0 => ground::magnetization_t0(&self.p),
        })
    }
}

pub fn run_point(p: &ChainParams, t: Thermal, quantities: &[Quantity], quad: &QuadSpec) -> Record {
    let mut ev = Evaluator {
        p: *p,
        t,
        quad,
        thermo: None,
        conc: None,
    };
    let mut flags = Vec::new();
    let values = quantities
        .iter()
        .map(|&q| {
            ev.eval(q).unwrap_or_else(|e| {
                flags.push(format!("{q}:{}", error_kind(&e)));
                f64::NAN
            })
        })
        .collect();
    Record { values, flags }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        assert!("c3_odd".parse::<Quantity>().is_err());
    }

    #[test]
    fn failures_are_flagged() {
        let p = ChainParams::new(0.0, 0.0, 1.0, 0.0).unwrap();
        let r = run_point(
            &p,
            Thermal::ZeroTemperature,
            &[Quantity::M, Quantity::WitnessLhs],
            &QuadSpec::default(),
        );
        assert!((r.values[0] - 1.0).abs() < 1e-12);
        assert!(r.values[1].is_nan());
        assert_eq!(r.err_flags(), "witness_lhs:degenerate");
    }

    #[test]
    fn dimer_point() {
        let p = ChainParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let r = run_point(
            &p,
            Thermal::ZeroTemperature,
            &[Quantity::C1Odd, Quantity::C1Even],
            &QuadSpec::default(),
        );
        assert!(r.values[0].abs() < 1e-12);
        assert!((r.values[1] - 1.0).abs() < 1e-12);
        assert!(r.flags.is_empty());
    }
}
