use rand::RngExt;
use serde::{Deserialize, Serialize};

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// Uniform law on `(low, high)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpLaw {
    pub low: f64,
    pub high: f64,
}

impl JumpLaw {
    pub const fn uniform(low: f64, high: f64) -> Self {
        JumpLaw { low, high }
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.low + self.high)
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.low && v <= self.high
    }
}

/// Jump law per region index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JumpTable {
    pub laws: Vec<JumpLaw>,
}

impl Default for JumpTable {
    /// Diagonal regions 0 and 2 share the low law; regions 1 and 3 get the
    /// two high laws, so neighbours never share a law.
    fn default() -> Self {
        JumpTable {
            laws: vec![
                JumpLaw::uniform(0.0, 1.0),
                JumpLaw::uniform(5.0, 6.0),
                JumpLaw::uniform(0.0, 1.0),
                JumpLaw::uniform(10.0, 11.0),
            ],
        }
    }
}

impl JumpTable {
    pub fn validate(&self) -> Result<()> {
        if self.laws.len() != 4 {
            return Err(Error::Config(format!(
                "jump table needs one law per quadrangle (4), got {}",
                self.laws.len()
            )));
        }
        for (i, law) in self.laws.iter().enumerate() {
            if !(law.low.is_finite() && law.high.is_finite() && law.low >= 0.0 && law.low < law.high) {
                return Err(Error::Config(format!(
                    "jump law {i} must satisfy 0 <= low < high, got ({}, {})",
                    law.low, law.high
                )));
            }
        }
        for i in 0..4 {
            if self.laws[i] == self.laws[(i + 1) % 4] {
                return Err(Error::Config(format!(
                    "adjacent regions {i} and {} share the same jump law",
                    (i + 1) % 4
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpHeights {
    values: Vec<f64>,
    laws: Vec<JumpLaw>,
}

impl JumpHeights {
    pub fn new(values: Vec<f64>, laws: Vec<JumpLaw>) -> Result<Self> {
        if values.len() != laws.len() {
            return Err(Error::DimensionMismatch {
                expected: laws.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().zip(&laws).position(|(v, l)| !l.contains(*v)) {
            return Err(Error::InvalidArgument(format!(
                "jump height {} outside its law ({}, {})",
                values[i], laws[i].low, laws[i].high
            )));
        }
        Ok(JumpHeights { values, laws })
    }

    /// All-zero heights, for deterministic checks.
    pub fn zeros(tau: usize) -> Self {
        JumpHeights {
            values: vec![0.0; tau],
            laws: vec![JumpLaw::uniform(0.0, 0.0); tau],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn laws(&self) -> &[JumpLaw] {
        &self.laws
    }
}

/// Independent uniform jump heights, law chosen by region index.
pub fn sample_jump_heights(
    partition: &Partition,
    table: &JumpTable,
    stream: &RandomStream,
) -> Result<JumpHeights> {
    if partition.tau() != 4 {
        return Err(Error::InvalidArgument(format!(
            "jump sampler expects 4 regions, got {}",
            partition.tau()
        )));
    }
    table.validate()?;
    let mut rng = stream.rng();
    let values = table
        .laws
        .iter()
        .map(|law| law.low + (law.high - law.low) * rng.random::<f64>())
        .collect();
    Ok(JumpHeights {
        values,
        laws: table.laws.clone(),
    })
}
