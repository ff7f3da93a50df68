//! Size caps shared by every dense operation.

use crate::error::{QpaError, Result};

/// Environment variable mirroring `--max-dim`.
pub const MAX_DIM_ENV: &str = "QPA_MAX_DIM";

/// Largest Hilbert-space dimension a dense operation may allocate.
pub const DEFAULT_MAX_DIM: u128 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub max_dim: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

impl Limits {
    pub fn new(max_dim: u128) -> Self {
        Limits { max_dim }
    }

    /// Default limits, overridden by `QPA_MAX_DIM` when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u128>().ok())
            .map(Limits::new)
            .unwrap_or_default()
    }

    pub fn check(&self, what: &str, required: u128) -> Result<()> {
        if required > self.max_dim {
            Err(QpaError::SizeLimit {
                what: what.to_string(),
                required,
                limit: self.max_dim,
            })
        } else {
            Ok(())
        }
    }
}

/// `base^exp` with overflow mapped to `u128::MAX` (always beyond any limit).
pub(crate) fn pow_dim(base: usize, exp: usize) -> u128 {
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}
