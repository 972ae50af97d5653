//! TOML sweep configuration.
//!
//! ```toml
//! [model]          # optional; J = 1, everything else 0
//! J = 1.0
//! j = 0.5
//! B = 0.0
//! b = 0.0
//!
//! [thermal]        # optional; T = 0 is the ground state
//! T = 0.0
//!
//! [sweep]
//! x = "B"
//! x_start = 0.0
//! x_stop = 2.0
//! x_steps = 41
//! y = "j"
//! y_start = 0.0
//! y_stop = 2.0
//! y_steps = 41
//! quantities = ["e_mw", "c1_even"]
//! output = "mw.csv"  # optional; stdout otherwise
//!
//! [quadrature]     # optional overrides
//! abs_tol = 1e-10
//! rel_tol = 1e-10
//! max_subdivisions = 60
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use xxchain::model::{ChainParams, Thermal};
use xxchain::quadrature::QuadSpec;

use crate::quantity::{parse_list, Quantity};
use crate::CliError;

/// Parameter that a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Field,
    AltField,
    AltCoupling,
    Temperature,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Field => "B",
            SweepParam::AltField => "b",
            SweepParam::AltCoupling => "j",
            SweepParam::Temperature => "T",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "B" => Ok(SweepParam::Field),
            "b" => Ok(SweepParam::AltField),
            "j" => Ok(SweepParam::AltCoupling),
            "T" => Ok(SweepParam::Temperature),
            other => Err(CliError::Validation(format!(
                "unknown sweep axis {other:?}; expected B, b, j or T"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
    }
}

/// A validated two-dimensional sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub x: Axis,
    pub y: Axis,
    pub params: ChainParams,
    pub temperature: f64,
    pub quantities: Vec<Quantity>,
    pub quad: QuadSpec,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    /// Parameters and thermal state at grid indices `(ix, iy)`.
    pub fn point(&self, ix: usize, iy: usize) -> Result<(ChainParams, Thermal), xxchain::Error> {
        let mut p = self.params;
        let mut temperature = self.temperature;
        for (axis, i) in [(self.x, ix), (self.y, iy)] {
            let v = axis.value(i);
            match axis.param {
                SweepParam::Field => p = p.with_field(v)?,
                SweepParam::AltField => p = p.with_alt_field(v)?,
                SweepParam::AltCoupling => p = p.with_alt_coupling(v)?,
                SweepParam::Temperature => temperature = v,
            }
        }
        Ok((p, Thermal::temperature(temperature)?))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    model: ModelTable,
    #[serde(default)]
    thermal: ThermalTable,
    sweep: SweepTable,
    #[serde(default)]
    quadrature: QuadTable,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelTable {
    #[serde(rename = "J", default = "one")]
    coupling: f64,
    #[serde(rename = "j", default)]
    alt_coupling: f64,
    #[serde(rename = "B", default)]
    field: f64,
    #[serde(rename = "b", default)]
    alt_field: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for ModelTable {
    fn default() -> Self {
        Self {
            coupling: 1.0,
            alt_coupling: 0.0,
            field: 0.0,
            alt_field: 0.0,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThermalTable {
    #[serde(rename = "T", default)]
    temperature: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepTable {
    x: String,
    x_start: f64,
    x_stop: f64,
    x_steps: usize,
    y: String,
    y_start: f64,
    y_stop: f64,
    y_steps: usize,
    quantities: Vec<String>,
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadTable {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
}

impl QuadTable {
    pub fn resolve(&self, base: QuadSpec) -> Result<QuadSpec, CliError> {
        QuadSpec::new(
            self.abs_tol.unwrap_or(base.abs_tol),
            self.rel_tol.unwrap_or(base.rel_tol),
            self.max_subdivisions.unwrap_or(base.max_subdivisions),
        )
        .map_err(|e| CliError::Validation(e.to_string()))
    }
}

fn axis(param: &str, start: f64, stop: f64, steps: usize, label: char) -> Result<Axis, CliError> {
    let param: SweepParam = param.parse()?;
    if steps < 2 {
        return Err(CliError::Validation(format!(
            "{label}_steps must be at least 2, got {steps}"
        )));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Validation(format!(
            "{label} range must be finite"
        )));
    }
    if param == SweepParam::Temperature && (start < 0.0 || stop < 0.0) {
        return Err(CliError::Validation(format!(
            "{label} axis T must stay non-negative"
        )));
    }
    Ok(Axis {
        param,
        start,
        stop,
        steps,
    })
}

/// Parses and validates a config file's text.
pub fn parse_config(text: &str) -> Result<SweepSpec, CliError> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Validation(e.to_string()))?;
    let s = &file.sweep;
    let x = axis(&s.x, s.x_start, s.x_stop, s.x_steps, 'x')?;
    let y = axis(&s.y, s.y_start, s.y_stop, s.y_steps, 'y')?;
    if x.param == y.param {
        return Err(CliError::Validation(format!(
            "x and y both sweep {}",
            x.param
        )));
    }
    let quantities = parse_list(&s.quantities)?;
    let sweeps_t = x.param == SweepParam::Temperature || y.param == SweepParam::Temperature;
    if let Some(q) = quantities
        .iter()
        .find(|q| q.is_ground_only())
        .filter(|_| sweeps_t)
    {
        return Err(CliError::Validation(format!(
            "{q} is a zero-temperature quantity and cannot be swept along T"
        )));
    }
    let m = &file.model;
    let params = ChainParams::new(m.coupling, m.alt_coupling, m.field, m.alt_field)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Thermal::temperature(file.thermal.temperature)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(SweepSpec {
        x,
        y,
        params,
        temperature: file.thermal.temperature,
        quantities,
        quad: file.quadrature.resolve(QuadSpec::default())?,
        output: s.output.clone(),
    })
}

pub fn load_config(path: &Path) -> Result<SweepSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[sweep]
x = "B"
x_start = 0.0
x_stop = 1.0
x_steps = 2
y = "b"
y_start = 0.0
y_stop = 1.0
y_steps = 2
quantities = ["m"]
"#;

    #[test]
    fn defaults_are_applied() {
        let s = parse_config(MINIMAL).unwrap();
        assert_eq!(s.params, ChainParams::new(1.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(s.temperature, 0.0);
        assert_eq!(s.quad, QuadSpec::default());
        assert_eq!(s.output, None);
        assert_eq!(s.x.value(0), 0.0);
        assert_eq!(s.x.value(1), 1.0);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = format!("{MINIMAL}\n[model]\nJ = 1.0\nk = 2.0\n");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("unknown field `k`"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn temperature_axis_conflicts_with_ground_quantities() {
        let text = MINIMAL
            .replace("y = \"b\"", "y = \"T\"")
            .replace("[\"m\"]", "[\"m\", \"e_mw\"]");
        let err = parse_config(&text).unwrap_err();
        assert!(
            matches!(err, CliError::Validation(ref m) if m.contains("e_mw")),
            "{err}"
        );
        let text = MINIMAL.replace("y = \"b\"", "y = \"T\"");
        assert!(parse_config(&text).is_ok());
    }

    #[test]
    fn axis_validation() {
        assert!(parse_config(&MINIMAL.replace("x_steps = 2", "x_steps = 1")).is_err());
        assert!(parse_config(&MINIMAL.replace("y = \"b\"", "y = \"B\"")).is_err());
        assert!(parse_config(&MINIMAL.replace("y = \"b\"", "y = \"J\"")).is_err());
        let neg_t = MINIMAL
            .replace("y = \"b\"", "y = \"T\"")
            .replace("y_start = 0.0", "y_start = -1.0");
        assert!(parse_config(&neg_t).is_err());
        assert!(parse_config(&MINIMAL.replace("[\"m\"]", "[]")).is_err());
        assert!(parse_config(&format!("{MINIMAL}\n[model]\nJ = -1.0\n")).is_err());
        assert!(parse_config(&format!(
            "{MINIMAL}\n[quadrature]\nabs_tol = 0.0\nrel_tol = 0.0\n"
        ))
        .is_err());
    }
}
