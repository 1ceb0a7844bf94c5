use std::str::FromStr;

use crate::{usage, UsageError};

/// Inclusive range `lo:hi:step`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self { lo: x, hi: x, step: 1.0 }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.hi == self.lo {
            return vec![self.lo];
        }
        // tolerate hi landing a hair off the step lattice
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| if k == n && (self.lo + self.step * n as f64 - self.hi).abs() < 1e-9 * self.step {
                self.hi
            } else {
                self.lo + self.step * k as f64
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        let nums: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| UsageError(format!("grid '{s}': expected lo:hi:step or a number")))?;
        let g = match nums[..] {
            [x] => Grid::single(x),
            [lo, hi, step] => Grid { lo, hi, step },
            _ => return usage(format!("grid '{s}': expected lo:hi:step or a number")),
        };
        if !(g.lo.is_finite() && g.hi.is_finite() && g.step.is_finite()) {
            return usage(format!("grid '{s}': non-finite value"));
        }
        if g.step <= 0.0 {
            return usage(format!("grid '{s}': step must be > 0"));
        }
        if g.lo > g.hi {
            return usage(format!("grid '{s}': lo > hi"));
        }
        if g.lo < 0.0 || g.hi > 1.0 {
            return usage(format!("grid '{s}': values must lie in [0, 1]"));
        }
        Ok(g)
    }
}
