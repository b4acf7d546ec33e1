use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation and tolerance parameters shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Requested absolute error.
    pub target_abs_err: f64,
    /// Number of Bernoulli correction terms in Euler–Maclaurin tails.
    pub em_order: usize,
    /// Hard cap on direct-sum terms.
    pub max_terms: usize,
    /// Minimum distance to a known pole.
    pub pole_guard: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            target_abs_err: 1e-12,
            em_order: 12,
            max_terms: 10_000_000,
            pole_guard: 1e-8,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_err > 0.0) {
            return Err(Error::InvalidConfig("target_abs_err must be positive".into()));
        }
        if self.em_order < 1 || self.em_order > MAX_EM_ORDER {
            return Err(Error::InvalidConfig(format!(
                "em_order must lie in 1..={MAX_EM_ORDER}"
            )));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidConfig("max_terms must be at least 1".into()));
        }
        if !(self.pole_guard > 0.0) {
            return Err(Error::InvalidConfig("pole_guard must be positive".into()));
        }
        Ok(())
    }

    pub fn with_target(mut self, target_abs_err: f64) -> Self {
        self.target_abs_err = target_abs_err;
        self
    }
}

/// Largest supported Euler–Maclaurin order; bounded by the Bernoulli table.
pub const MAX_EM_ORDER: usize = 24;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        EvalConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_fields() {
        let bad = [
            EvalConfig { target_abs_err: 0.0, ..Default::default() },
            EvalConfig { em_order: 0, ..Default::default() },
            EvalConfig { max_terms: 0, ..Default::default() },
            EvalConfig { pole_guard: -1.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }
}
