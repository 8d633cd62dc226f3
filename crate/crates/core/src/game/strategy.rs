use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// The frustration values a player may pick each turn.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ActionSet(Vec<f64>);

impl ActionSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("game.actions", "action set is empty"));
        }
        for &v in &values {
            check_frustration(v).map_err(|reason| Error::param("game.actions", reason))?;
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("game.actions", "values must be distinct and sorted ascending"));
        }
        Ok(ActionSet(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.0.contains(&v)
    }

    /// Every length-`turns` sequence of actions, first turn most significant.
    pub fn strategies(&self, turns: usize) -> Vec<Strategy> {
        let a = self.len();
        let total = a.pow(turns as u32);
        (0..total)
            .map(|mut code| {
                let mut seq = vec![0.0; turns];
                for k in (0..turns).rev() {
                    seq[k] = self.0[code % a];
                    code /= a;
                }
                Strategy(seq)
            })
            .collect()
    }
}

impl Default for ActionSet {
    fn default() -> Self {
        ActionSet(vec![0.0, PI / 3.0, 2.0 * PI / 3.0, PI])
    }
}

impl<'de> Deserialize<'de> for ActionSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = angles::deserialize(d)?;
        ActionSet::new(values).map_err(serde::de::Error::custom)
    }
}

fn check_frustration(v: f64) -> std::result::Result<(), String> {
    if v.is_finite() && (0.0..=PI).contains(&v) {
        Ok(())
    } else {
        Err(format!("frustration {v} is outside [0, pi]"))
    }
}

/// One frustration per turn.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Strategy(Vec<f64>);

impl Strategy {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidStrategy("a strategy needs at least one turn".into()));
        }
        for &v in &values {
            check_frustration(v).map_err(Error::InvalidStrategy)?;
        }
        Ok(Strategy(values))
    }

    /// The same frustration on every turn.
    pub fn constant(value: f64, turns: usize) -> Result<Self> {
        Strategy::new(vec![value; turns])
    }

    pub fn turns(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn at(&self, turn: usize) -> f64 {
        self.0[turn]
    }

    /// Machine-readable label: values separated by `;`, each printed with
    /// enough digits to parse back exactly.
    pub fn label(&self) -> String {
        self.0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
    }

    pub fn parse_label(label: &str) -> Result<Self> {
        let values = label
            .split(';')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidStrategy(format!("bad value `{s}` in `{label}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Strategy::new(values)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|&v| format_pi(v)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<'de> Deserialize<'de> for Strategy {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = angles::deserialize(d)?;
        Strategy::new(values).map_err(serde::de::Error::custom)
    }
}

/// Short human label in multiples of pi, e.g. `0.33pi`.
pub fn format_pi(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{:.2}pi", v / PI)
    }
}

/// Angles in config files may be plain numbers or strings such as `"pi/3"`,
/// `"2pi/3"`, `"0.5pi"` or `"pi"`.
pub mod angles {
    use std::f64::consts::PI;

    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }

    pub fn parse(text: &str) -> Result<f64, String> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let err = || format!("cannot read angle `{text}`");
        if let Ok(v) = t.parse::<f64>() {
            return Ok(v);
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, Some(d.parse::<f64>().map_err(|_| err())?)),
            None => (t.as_str(), None),
        };
        let coeff = num.strip_suffix("pi").ok_or_else(err)?;
        let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
        let coeff = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().map_err(|_| err())? };
        let den = den.unwrap_or(1.0);
        if den == 0.0 {
            return Err(err());
        }
        Ok(coeff * PI / den)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw = Vec::<Raw>::deserialize(d)?;
        raw.into_iter()
            .map(|r| match r {
                Raw::Number(v) => Ok(v),
                Raw::Text(s) => parse(&s).map_err(serde::de::Error::custom),
            })
            .collect()
    }

    pub fn deserialize_one<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(v),
            Raw::Text(s) => parse(&s).map_err(serde::de::Error::custom),
        }
    }
}
