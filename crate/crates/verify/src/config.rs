//! Runner configuration and its validation.

use std::fmt;
use std::str::FromStr;

use affine_core::mutation::Mutation;
use affine_core::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_SEED: u64 = 0xA11FEE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("grid size {0} is not a power of two")]
    GridNotPowerOfTwo(usize),
    #[error("grid size {grid} must exceed 4 * band = {}", 4 * band)]
    GridTooSmall { grid: usize, band: usize },
    #[error("tolerance {name} must be positive, got {value}")]
    Tolerance { name: &'static str, value: f64 },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("at least one k value is required")]
    NoLevels,
    #[error("cannot parse complex number `{0}`")]
    BadComplex(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("cannot load algebra `{name}`: {reason}")]
    Algebra { name: String, reason: String },
    #[error("malformed case id `{0}`")]
    BadCaseId(String),
}

/// Identity families, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Loop,
    Affine,
    Phase,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Algebra, Suite::Loop, Suite::Affine, Suite::Phase];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Loop => "loop",
            Suite::Affine => "affine",
            Suite::Phase => "phase",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| ConfigError::UnknownSuite(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// `sl2`, `so3` or a path to a JSON basis.
    pub algebra: String,
    pub band: usize,
    pub grid: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(rename = "k", with = "complex_list")]
    pub k_values: Vec<Complex64>,
    pub tol_exact: f64,
    pub tol_grid: f64,
    pub tol_fd: f64,
    pub suites: Vec<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            algebra: "sl2".into(),
            band: 4,
            grid: 128,
            trials: 50,
            seed: DEFAULT_SEED,
            k_values: vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.5)],
            tol_exact: 1e-12,
            tol_grid: 1e-8,
            tol_fd: 1e-6,
            suites: Suite::ALL.to_vec(),
            case: None,
            mutation: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.grid.is_power_of_two() {
            return Err(ConfigError::GridNotPowerOfTwo(self.grid));
        }
        if self.grid <= 4 * self.band {
            return Err(ConfigError::GridTooSmall { grid: self.grid, band: self.band });
        }
        for (name, value) in [("tol-exact", self.tol_exact), ("tol-grid", self.tol_grid), ("tol-fd", self.tol_fd)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::Tolerance { name, value });
            }
        }
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.k_values.is_empty() {
            return Err(ConfigError::NoLevels);
        }
        Ok(())
    }

    pub fn runs(&self, suite: Suite) -> bool {
        self.suites.contains(&suite)
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Result<Complex64, ConfigError> {
    let bad = || ConfigError::BadComplex(s.to_owned());
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

mod complex_list {
    use super::{format_complex, parse_complex};
    use affine_core::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| format_complex(*c)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Vec::<String>::deserialize(d)?.iter().map(|s| parse_complex(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        for (s, v) in [
            ("1", c(1.0, 0.0)),
            ("1+0.5i", c(1.0, 0.5)),
            ("1 - 2i", c(1.0, -2.0)),
            ("-2i", c(0.0, -2.0)),
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            ("1e-3+2.5e+1i", c(1e-3, 25.0)),
            ("-0.25", c(-0.25, 0.0)),
        ] {
            assert_eq!(parse_complex(s).unwrap(), v, "{s}");
            assert_eq!(parse_complex(&format_complex(v)).unwrap(), v);
        }
        for s in ["", "1+", "x", "1+2j", "i1"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let bad = |f: fn(&mut SuiteConfig)| {
            let mut cfg = SuiteConfig::default();
            f(&mut cfg);
            cfg.validate().unwrap_err()
        };
        assert_eq!(bad(|c| c.grid = 96), ConfigError::GridNotPowerOfTwo(96));
        assert_eq!(bad(|c| c.band = 32), ConfigError::GridTooSmall { grid: 128, band: 32 });
        assert!(matches!(bad(|c| c.tol_fd = 0.0), ConfigError::Tolerance { name: "tol-fd", .. }));
        assert_eq!(bad(|c| c.trials = 0), ConfigError::NoTrials);
        assert_eq!(bad(|c| c.k_values.clear()), ConfigError::NoLevels);
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("phases".parse::<Suite>().is_err());
    }
}
