//! Frozen constants for the balanced quicksort: its comparison budget and
//! thickness regression threshold. `liarsel calibrate` re-measures them
//! and writes a `key=value` file that [`Calibration::parse`] reads back.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    /// Budget term proportional to `s`.
    pub budget_linear: usize,
    /// Budget term proportional to `s * ceil(log2 s)`.
    pub budget_nlogn: usize,
    /// `C_t`: balanced quicksort thickness stays at or below `C_t * s`.
    pub thickness_constant: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            budget_linear: 32,
            budget_nlogn: 4,
            thickness_constant: 4.0,
        }
    }
}

pub fn ceil_log2(s: usize) -> usize {
    if s <= 1 {
        0
    } else {
        (usize::BITS - (s - 1).leading_zeros()) as usize
    }
}

impl Calibration {
    pub fn sort_budget(&self, s: usize) -> usize {
        self.budget_linear * s + self.budget_nlogn * s * ceil_log2(s)
    }

    pub fn thickness_limit(&self, s: usize) -> f64 {
        self.thickness_constant * s as f64
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sort_budget_linear={}", self.budget_linear)?;
        writeln!(f, "sort_budget_nlogn={}", self.budget_nlogn)?;
        writeln!(f, "thickness_constant={}", self.thickness_constant)
    }
}

impl FromStr for Calibration {
    type Err = Error;

    /// Unknown keys are ignored so calibration reports can carry extra
    /// measurements alongside the constants.
    fn from_str(text: &str) -> Result<Self> {
        let mut cal = Calibration::default();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || Error::Parse(format!("bad value for {key}: {value:?}"));
            match key {
                "sort_budget_linear" => cal.budget_linear = value.parse().map_err(|_| bad())?,
                "sort_budget_nlogn" => cal.budget_nlogn = value.parse().map_err(|_| bad())?,
                "thickness_constant" => cal.thickness_constant = value.parse().map_err(|_| bad())?,
                _ => {}
            }
        }
        Ok(cal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        let got: Vec<usize> = [1, 2, 3, 4, 5, 8, 9, 4096].iter().map(|&s| ceil_log2(s)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 12]);
    }

    #[test]
    fn key_value_round_trip() {
        let cal = Calibration {
            budget_linear: 7,
            budget_nlogn: 3,
            thickness_constant: 2.5,
        };
        assert_eq!(cal.to_string().parse::<Calibration>().unwrap(), cal);
        let partial: Calibration = "# measured\nthickness_constant = 4\nobserved_max=9\n".parse().unwrap();
        assert_eq!(partial.thickness_constant, 4.0);
        assert_eq!(partial.budget_linear, Calibration::default().budget_linear);
        assert!("thickness_constant".parse::<Calibration>().is_err());
        assert!("sort_budget_linear=x".parse::<Calibration>().is_err());
    }
}
