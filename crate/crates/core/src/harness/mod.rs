//! Experiment engine: instance generation, uniqueness certificates, solver
//! runs checked against rate predictions, and closed-form rate sweeps.

pub mod certificate;
pub mod experiment;
pub mod generate;
pub mod sweep;

pub use certificate::{verify_uniqueness, Certificate, TAU_CERT};
pub use experiment::{
    run_experiment, write_error_curve, ExperimentSpec, InstanceSource, RateReport, RateRow,
    RunSpec, RunStatus, StartSpec, SweepSpec,
};
pub use generate::{dct_rows, generate_instance, random_start, Distribution, GeneratedInstance};
pub use sweep::{sweep_rates, SpectralCheck, SweepRow, SweepTable};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inclusive grid `start, start+step, …, end`, written `a:b:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && step > 0.0 && end >= start) {
            return Err(Error::InvalidArgument(format!(
                "bad grid {start}:{end}:{step}"
            )));
        }
        Ok(Self { start, end, step })
    }

    /// Grid points, computed as `start + i·step` so that they do not drift.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }

    /// Checks that every point lies in `(lo, hi]`.
    pub fn check_within(&self, lo: f64, hi: f64, what: &str) -> Result<()> {
        if self.start <= lo || self.end > hi + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "{what} grid must lie in ({lo}, {hi}], got {self}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.step)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad grid {s:?}")))
        };
        match parts.as_slice() {
            [a, b, step] => Grid::new(parse(a)?, parse(b)?, parse(step)?),
            [a] => {
                let v = parse(a)?;
                Grid::new(v, v, 1.0)
            }
            _ => Err(Error::InvalidArgument(format!("grid must be a:b:step, got {s:?}"))),
        }
    }
}
