//! JSON run configuration.
//!
//! Coefficients are strings (`"3"`, `"-1/2"`, `"1/2+3/4i"`) so that they
//! round-trip exactly. Polynomials in `z` are coefficient lists in ascending
//! order; a rational function is either such a list or
//! `{"num": [...], "den": [...]}`.

use std::str::FromStr;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;
use toda_core::bipoly::{BiPoly, BiRat, GaussCoeff};
use toda_core::curve::{RMatrix, RScaling, UnitWronskianPair};
use toda_core::verify::GridSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Wronskian,
    Plucker,
    Frames,
    Kernel,
    Reduced,
    Numeric,
}

impl Suite {
    /// Run order.
    pub const ALL: [Suite; 6] = [Suite::Wronskian, Suite::Plucker, Suite::Frames, Suite::Kernel, Suite::Reduced, Suite::Numeric];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Wronskian => "wronskian",
            Suite::Plucker => "plucker",
            Suite::Frames => "frames",
            Suite::Kernel => "kernel",
            Suite::Reduced => "reduced",
            Suite::Numeric => "numeric",
        }
    }

    /// Whether the suite needs a unit-Wronskian pair.
    pub fn needs_pair(self) -> bool {
        matches!(self, Suite::Wronskian | Suite::Frames | Suite::Kernel)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Pair,
    Function,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRat {
    Coeffs(Vec<String>),
    Fraction { num: Vec<String>, den: Option<Vec<String>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    v0: RawRat,
    v1: RawRat,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawR {
    Named(String),
    Rows(Vec<Vec<String>>),
    Scaled { rows: Vec<Vec<String>>, scaling: Option<RScaling> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    center: Option<[f64; 2]>,
    half_width: f64,
    points_per_side: usize,
    exclusion_radius: Option<f64>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSuites {
    One(String),
    Many(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: usize,
    input_kind: InputKind,
    pair: Option<RawPair>,
    f: Option<RawRat>,
    #[serde(rename = "R")]
    r: Option<RawR>,
    grid: Option<RawGrid>,
    suites: Option<RawSuites>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Pair(UnitWronskianPair),
    Function(BiRat),
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub input: Input,
    /// Given explicitly; otherwise the rational normal matrix is used.
    pub r: Option<RMatrix>,
    pub grid: Option<GridSpec>,
    /// Sorted into run order.
    pub suites: Vec<Suite>,
    /// `false` when the suites were `"all"` or omitted.
    pub explicit_suites: bool,
}

impl RunConfig {
    /// `R` or the rational normal matrix of size `n + 1`.
    pub fn r_or_default(&self) -> RMatrix {
        self.r.clone().unwrap_or_else(|| RMatrix::rational_normal(self.n))
    }

    pub fn applicable(&self, suite: Suite) -> bool {
        !suite.needs_pair() || matches!(self.input, Input::Pair(_))
    }
}

fn coeffs(list: &[String]) -> Result<Vec<GaussCoeff>, ConfigError> {
    list.iter()
        .map(|s| GaussCoeff::from_str(s).map_err(|e| invalid(e.to_string())))
        .collect()
}

fn poly(list: &[String]) -> Result<BiPoly, ConfigError> {
    Ok(BiPoly::from_z_coeffs(&coeffs(list)?))
}

fn rat(raw: &RawRat, what: &str) -> Result<BiRat, ConfigError> {
    let (num, den) = match raw {
        RawRat::Coeffs(c) => (poly(c)?, BiPoly::one()),
        RawRat::Fraction { num, den } => (poly(num)?, den.as_deref().map(poly).transpose()?.unwrap_or_else(BiPoly::one)),
    };
    BiRat::try_new(num, den).ok_or_else(|| invalid(format!("{what} has a zero denominator")))
}

fn r_matrix(raw: &RawR, n: usize) -> Result<RMatrix, ConfigError> {
    let r = match raw {
        RawR::Named(s) => match s.as_str() {
            "identity" => RMatrix::identity(n),
            "rational-normal" => RMatrix::rational_normal(n),
            other => return Err(invalid(format!("unknown R `{other}`; expected identity, rational-normal or rows"))),
        },
        RawR::Rows(rows) => rows_matrix(rows, RScaling::Plain)?,
        RawR::Scaled { rows, scaling } => rows_matrix(rows, scaling.unwrap_or(RScaling::Plain))?,
    };
    if r.n() != n {
        return Err(invalid(format!("R must be {0}x{0} for n = {n}, got {1}x{1}", n + 1, r.n() + 1)));
    }
    if !r.is_normalized() {
        return Err(invalid(format!(
            "R is not normalized: (prod (m-1)! R_mm)^2 = {}",
            r.normalization_squared()
        )));
    }
    Ok(r)
}

fn rows_matrix(rows: &[Vec<String>], scaling: RScaling) -> Result<RMatrix, ConfigError> {
    let rows = rows.iter().map(|r| coeffs(r)).collect::<Result<Vec<_>, _>>()?;
    RMatrix::from_rows(rows, scaling).map_err(|e| invalid(e.to_string()))
}

fn suites(raw: Option<&RawSuites>) -> Result<(Vec<Suite>, bool), ConfigError> {
    let names: Vec<&str> = match raw {
        None => return Ok((Suite::ALL.to_vec(), false)),
        Some(RawSuites::One(s)) => vec![s.as_str()],
        Some(RawSuites::Many(v)) => v.iter().map(String::as_str).collect(),
    };
    if names.contains(&"all") {
        return Ok((Suite::ALL.to_vec(), false));
    }
    if names.is_empty() {
        return Err(invalid("suites is empty"));
    }
    let mut out = Vec::new();
    for name in names {
        let s = Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| invalid(format!("unknown suite `{name}`")))?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort();
    Ok((out, true))
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text)?;
        if raw.n == 0 {
            return Err(invalid("n must be positive"));
        }
        let input = match raw.input_kind {
            InputKind::Pair => {
                if raw.f.is_some() {
                    return Err(invalid("input_kind is pair but f is also given"));
                }
                let p = raw.pair.as_ref().ok_or_else(|| invalid("input_kind is pair but no pair is given"))?;
                let pair = UnitWronskianPair::new(rat(&p.v0, "v0")?, rat(&p.v1, "v1")?).map_err(|e| invalid(e.to_string()))?;
                Input::Pair(pair)
            }
            InputKind::Function => {
                if raw.pair.is_some() {
                    return Err(invalid("input_kind is function but pair is also given"));
                }
                let f = rat(raw.f.as_ref().ok_or_else(|| invalid("input_kind is function but no f is given"))?, "f")?;
                if f.derive(toda_core::bipoly::Var::Z).is_zero() {
                    return Err(invalid(format!("f = {f} is constant")));
                }
                Input::Function(f)
            }
        };
        let r = raw.r.as_ref().map(|r| r_matrix(r, raw.n)).transpose()?;
        let grid = raw
            .grid
            .as_ref()
            .map(|g| {
                let c = g.center.unwrap_or([0.0, 0.0]);
                GridSpec::new(Complex64::new(c[0], c[1]), g.half_width, g.points_per_side, g.exclusion_radius)
                    .map_err(|e| invalid(e.to_string()))
            })
            .transpose()?;
        let (suites, explicit_suites) = suites(raw.suites.as_ref())?;
        let cfg = RunConfig { n: raw.n, input, r, grid, suites, explicit_suites };
        if cfg.explicit_suites {
            if let Some(s) = cfg.suites.iter().find(|s| !cfg.applicable(**s)) {
                return Err(invalid(format!("suite `{}` needs a pair input", s.name())));
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pair_config() {
        let c: RunConfig = r#"{"n": 2, "input_kind": "pair", "pair": {"v0": ["1"], "v1": ["0", "1"]}, "suites": "all"}"#
            .parse()
            .unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.suites, Suite::ALL.to_vec());
        assert!(!c.explicit_suites);
    }

    #[test]
    fn parses_function_config() {
        let c: RunConfig = r#"{"n": 1, "input_kind": "function", "f": {"num": ["0", "1"]}, "R": "identity", "suites": ["reduced"]}"#
            .parse()
            .unwrap();
        assert_eq!(c.input, Input::Function(BiRat::z()));
        assert_eq!(c.r, Some(RMatrix::identity(1)));
    }

    #[test]
    fn rejections() {
        let bad = [
            r#"{"n": 2, "input_kind": "function", "f": ["0", "1"], "suites": ["frames"]}"#,
            r#"{"n": 2, "input_kind": "pair", "suites": ["plucker"]}"#,
            r#"{"n": 1, "input_kind": "pair", "pair": {"v0": ["1"], "v1": ["0", "2"]}}"#,
            r#"{"n": 1, "input_kind": "function", "f": ["0", "1"], "R": [["1", "0"], ["0", "2"]]}"#,
            r#"{"n": 1, "input_kind": "function", "f": ["0", "1/0"]}"#,
            r#"{"n": 1, "input_kind": "function", "f": ["3"]}"#,
            r#"{"n": 1, "input_kind": "function", "f": ["0", "1"], "suites": ["bogus"]}"#,
            r#"{"n": 1, "input_kind": "function", "f": ["0", "1"], "grid": {"half_width": 1, "points_per_side": 4}}"#,
        ];
        for text in bad {
            assert!(text.parse::<RunConfig>().is_err(), "{text}");
        }
    }
}
