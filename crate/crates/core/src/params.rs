use crate::error::{Error, Result};

/// Control knobs of one experiment: neuron count, threshold coefficient and
/// load, together with the activity `p` and pattern count `M` they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    gamma: f64,
    alpha: f64,
    p: f64,
    m: usize,
}

/// Activity `ln N / N`.
pub fn activity(n: usize) -> f64 {
    let n = n as f64;
    libm::log(n) / n
}

/// Pattern count `max(1, ⌊α N² / ln² N⌋)`.
pub fn pattern_count(n: usize, alpha: f64) -> usize {
    let nf = n as f64;
    let ln = libm::log(nf);
    let m = libm::floor(alpha * nf * nf / (ln * ln));
    if m < 1.0 {
        1
    } else {
        m as usize
    }
}

impl ModelParams {
    pub fn new(n: usize, gamma: f64, alpha: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewNeurons(n));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "must be finite and non-negative",
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be finite and positive",
            });
        }
        Ok(ModelParams {
            n,
            gamma,
            alpha,
            p: activity(n),
            m: pattern_count(n, alpha),
        })
    }

    /// Parameters with an explicit activity and pattern count instead of the
    /// sparse-regime formulas. Meant for small hand-built instances and tests;
    /// `alpha` is reported as `NaN` since no load was specified.
    pub fn with_override(n: usize, m: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "must be positive",
            });
        }
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "m",
                value: 0.0,
                reason: "must be positive",
            });
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "must lie in (0, 1)",
            });
        }
        Ok(ModelParams {
            n,
            gamma: 0.0,
            alpha: f64::NAN,
            p,
            m,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Probability that a pattern entry is non-zero.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Number of stored patterns.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Threshold `γ ln N` of the adjusted dynamics.
    pub fn threshold(&self, gamma: f64) -> f64 {
        gamma * libm::log(self.n as f64)
    }
}
