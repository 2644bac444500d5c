//! Caps on exhaustive enumeration.

use crate::error::{Error, Result};

/// Environment variable overriding the default cell-enumeration cap.
pub const BUDGET_ENV: &str = "MONOAPPROX_BUDGET_CELLS";

/// Default number of cells (or lattice points, or indices) an exhaustive
/// enumeration may visit.
pub const DEFAULT_CELLS: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub cells: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            cells: DEFAULT_CELLS,
        }
    }
}

impl Budget {
    pub fn new(cells: u64) -> Self {
        Self { cells }
    }

    /// Default budget, overridden by `MONOAPPROX_BUDGET_CELLS` when it parses.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => match v.trim().parse::<u64>() {
                Ok(cells) => Self { cells },
                Err(_) => {
                    log::warn!("ignoring unparsable {BUDGET_ENV}={v:?}");
                    Self::default()
                }
            },
            Err(_) => Self::default(),
        }
    }

    /// `base^exp` if it fits the budget.
    pub fn check_power(&self, what: &'static str, base: u64, exp: usize) -> Result<u64> {
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc.saturating_mul(base as u128);
            if acc > self.cells as u128 {
                return Err(Error::Budget {
                    what,
                    needed: saturating_pow(base, exp),
                    budget: self.cells as u128,
                });
            }
        }
        Ok(acc as u64)
    }

    pub fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.cells as u128 {
            Err(Error::Budget {
                what,
                needed,
                budget: self.cells as u128,
            })
        } else {
            Ok(())
        }
    }
}

fn saturating_pow(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_within_and_beyond() {
        let b = Budget::new(64);
        assert_eq!(b.check_power("cells", 4, 3).unwrap(), 64);
        assert!(matches!(
            b.check_power("cells", 4, 4),
            Err(Error::Budget { needed: 256, .. })
        ));
        assert_eq!(b.check_power("cells", 7, 0).unwrap(), 1);
    }
}
