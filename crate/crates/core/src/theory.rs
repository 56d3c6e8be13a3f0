//! Analytic capacity calculator.
//!
//! The adjusted dynamics keeps a random stored pattern fixed with probability
//! tending to one iff `0 < γ < 2` and `α < α*(γ) = γ / (x*_γ − 1)`, where
//! `x*_γ` is the root above 1 of
//!
//! ```text
//! g_γ(x) = x (1 + 2/γ − ln x) − 1 − 2/γ.
//! ```
//!
//! `g_γ` rises from `g_γ(1) = 0` to its maximum at `x̂_γ = e^{2/γ}` and then
//! decreases to −∞, so `x*_γ > x̂_γ` is found by bracketing from `x̂_γ` and
//! bisecting. The remaining functions are the per-`ln N` exponents of the
//! three error types; a negative exponent means the corresponding error
//! probability vanishes.
//!
//! The concentration parameter `ρ` (ratio of a pattern's activity to `ln N`)
//! is exposed where it enters a formula; classification uses `ρ = 1`.

use crate::error::{Error, Result};

/// Precomputed point on the capacity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryPoint {
    pub gamma: f64,
    /// Maximiser `e^{2/γ}` of `g_γ`.
    pub x_hat: f64,
    /// Root of `g_γ` above `x_hat`.
    pub x_star: f64,
    pub alpha_star: f64,
}

/// Asymptotic verdict for a `(γ, α)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Admissibility {
    Stable,
    Unstable,
    /// `γ > 2`: active neurons are erased whatever the load.
    InadmissibleGamma,
}

/// Half-width of the band around `α*(γ)` classified as unstable.
pub const BOUNDARY_BAND: f64 = 1e-9;

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

/// `g_γ(x) = x (1 + 2/γ − ln x) − 1 − 2/γ`.
pub fn g(gamma: f64, x: f64) -> Result<f64> {
    positive("gamma", gamma)?;
    positive("x", x)?;
    Ok(g_unchecked(gamma, x))
}

#[inline]
fn g_unchecked(gamma: f64, x: f64) -> f64 {
    let c = 2.0 / gamma;
    x * (1.0 + c - libm::log(x)) - 1.0 - c
}

/// `x̂_γ = e^{2/γ}`, where `g_γ' = 2/γ − ln x` vanishes.
pub fn x_hat(gamma: f64) -> Result<f64> {
    positive("gamma", gamma)?;
    Ok(libm::exp(2.0 / gamma))
}

/// Root of `g_γ` in `(x̂_γ, ∞)`.
///
/// The bracket `[x̂, X]` is grown by doubling `X` until `g_γ(X) < 0`; bisection
/// then runs until the bracket cannot be split further in `f64`, which is
/// tighter than a relative tolerance of `1e-12`.
pub fn root_xstar(gamma: f64) -> Result<f64> {
    let mut lo = x_hat(gamma)?;
    if !lo.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "too small: e^(2/gamma) overflows",
        });
    }
    let mut hi = 2.0 * lo;
    while g_unchecked(gamma, hi) >= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "root bracket overflows",
            });
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_unchecked(gamma, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (glo, ghi) = (g_unchecked(gamma, lo), g_unchecked(gamma, hi));
    Ok(if glo.abs() <= ghi.abs() { lo } else { hi })
}

/// Critical load `α*(γ) = γ / (x*_γ − 1)` for `0 < γ ≤ 2`.
pub fn alpha_star(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "capacity curve is defined for 0 < gamma <= 2",
        });
    }
    Ok(gamma / (root_xstar(gamma)? - 1.0))
}

pub fn theory_point(gamma: f64) -> Result<TheoryPoint> {
    let alpha_star = alpha_star(gamma)?;
    Ok(TheoryPoint {
        gamma,
        x_hat: x_hat(gamma)?,
        x_star: root_xstar(gamma)?,
        alpha_star,
    })
}

/// `f_{α,ρ}(x) = 1 + ½ ρ α (−x ln x + x − 1)`.
pub fn f_exponent(alpha: f64, rho: f64, x: f64) -> f64 {
    1.0 + 0.5 * rho * alpha * (-x * libm::log(x) + x - 1.0)
}

/// Chernoff exponent of a `0 → ±1` error before optimisation:
/// `h(t) = −t γ + ρ α (½ e^{2t} − ½ − t)`.
pub fn zero_error_h(t: f64, alpha: f64, gamma: f64, rho: f64) -> f64 {
    -t * gamma + rho * alpha * (0.5 * libm::exp(2.0 * t) - 0.5 - t)
}

/// Minimiser `t* = ½ ln(1 + γ/(ρα))` of [`zero_error_h`].
pub fn zero_error_tstar(alpha: f64, gamma: f64, rho: f64) -> f64 {
    0.5 * libm::log1p(gamma / (rho * alpha))
}

/// Exponent of the `0 → ±1` error probability per `ln N`:
/// `f_{α,ρ}(1 + γ/(ρα))`. Negative iff that error vanishes asymptotically.
pub fn zero_error_exponent(alpha: f64, gamma: f64, rho: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    positive("gamma", gamma)?;
    positive("rho", rho)?;
    Ok(f_exponent(alpha, rho, 1.0 + gamma / (rho * alpha)))
}

/// `v = 1 − 2/α + γ/(ρα)`.
pub fn erase_v(alpha: f64, gamma: f64, rho: f64) -> f64 {
    1.0 - 2.0 / alpha + gamma / (rho * alpha)
}

/// Optimal tilt `u* = −½ ln v` for the erasure bound; defined when `v > 0`.
pub fn erase_ustar(alpha: f64, gamma: f64, rho: f64) -> f64 {
    -0.5 * libm::log(erase_v(alpha, gamma, rho))
}

/// Exponent of the erasure probability per `ln N`:
/// `½ ρ α (−v ln v + v − 1)` when `v > 0`, and `−∞` otherwise (the bound
/// can then be made arbitrarily negative).
pub fn erase_error_exponent(alpha: f64, gamma: f64, rho: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    positive("gamma", gamma)?;
    positive("rho", rho)?;
    if gamma >= 2.0 {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "erasure exponent requires gamma < 2",
        });
    }
    let v = erase_v(alpha, gamma, rho);
    if v > 0.0 {
        Ok(0.5 * rho * alpha * (-v * libm::log(v) + v - 1.0))
    } else {
        Ok(f64::NEG_INFINITY)
    }
}

/// Optimal tilt `s* = arsinh(1/α)` for the sign-flip bound.
pub fn signflip_sstar(alpha: f64) -> f64 {
    libm::asinh(1.0 / alpha)
}

/// Exponent of the sign-flip probability per active neuron:
/// `−arsinh(1/α) + α (cosh(arsinh(1/α)) − 1)`, with `cosh(arsinh y) = √(1 + y²)`.
pub fn signflip_exponent(alpha: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    let y = 1.0 / alpha;
    Ok(-libm::asinh(y) + alpha * (libm::sqrt(1.0 + y * y) - 1.0))
}

/// Survival exponent of an active neuron when `γ > 2`:
/// `½ α (−w ln w + w − 1)` with `w = 1 + (γ − 2)/α`. Always negative, so
/// active neurons are erased with probability tending to one.
pub fn inadmissible_survival_exponent(gamma: f64, alpha: f64) -> Result<f64> {
    positive("alpha", alpha)?;
    if !(gamma > 2.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "survival exponent applies to gamma > 2",
        });
    }
    let w = 1.0 + (gamma - 2.0) / alpha;
    Ok(0.5 * alpha * (-w * libm::log(w) + w - 1.0))
}

fn check_cramer_args(lambda: f64, epsilon: f64) -> Result<()> {
    positive("lambda", lambda)?;
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            reason: "must lie in [0, 1/2)",
        });
    }
    Ok(())
}

/// Rate function of the compound Poisson sum `Σ_{n ≤ Y_λ} Z_n(ε)` with
/// `Z_n(ε) ∈ {−ε, 2 − ε}` equiprobable:
///
/// ```text
/// Λ*_{λ,ε}(x) = sup_t  t x + λ − (λ/2) e^{−εt} (e^{2t} + 1)
/// ```
///
/// For `ε = 0` this is `(x/2) ln(x/λ) − (x − λ)/2`; otherwise the supremum
/// is located numerically. Requires `x > λ(1 − ε)`; `x = λ` is accepted at
/// `ε = 0`, where the rate is zero.
pub fn cramer_rate(lambda: f64, epsilon: f64, x: f64) -> Result<f64> {
    check_cramer_args(lambda, epsilon)?;
    if epsilon == 0.0 {
        if !(x >= lambda && x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "x",
                value: x,
                reason: "must not lie below the mean lambda",
            });
        }
        return Ok(0.5 * x * libm::log(x / lambda) - 0.5 * (x - lambda));
    }
    cramer_rate_numeric(lambda, epsilon, x)
}

/// [`cramer_rate`] by maximising the concave `ψ_ε(t)` on
/// `[0, ln(1 + 2x/λ)]`, bisecting on `ψ_ε'` to a width of `1e-10`.
/// Valid for `ε = 0` as well, which makes it a second route to the closed form.
pub fn cramer_rate_numeric(lambda: f64, epsilon: f64, x: f64) -> Result<f64> {
    check_cramer_args(lambda, epsilon)?;
    let mean = lambda * (1.0 - epsilon);
    if !(x > mean && x.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must exceed the mean lambda (1 - epsilon)",
        });
    }
    let half = 0.5 * lambda;
    let psi = |t: f64| t * x + lambda - half * libm::exp(-epsilon * t) * (libm::exp(2.0 * t) + 1.0);
    let dpsi = |t: f64| {
        x + epsilon * half * libm::exp(-epsilon * t)
            - (2.0 - epsilon) * half * libm::exp((2.0 - epsilon) * t)
    };
    let (mut lo, mut hi) = (0.0, libm::log1p(2.0 * x / lambda));
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if dpsi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(psi(0.5 * (lo + hi)))
}

/// Classifies `(γ, α)`: `γ > 2` is inadmissible; otherwise stable iff
/// `α < α*(γ)`, with `α` within [`BOUNDARY_BAND`] of the boundary counted
/// as unstable.
pub fn gamma_admissibility(gamma: f64, alpha: f64) -> Result<Admissibility> {
    positive("gamma", gamma)?;
    positive("alpha", alpha)?;
    if gamma > 2.0 {
        return Ok(Admissibility::InadmissibleGamma);
    }
    if alpha < alpha_star(gamma)? - BOUNDARY_BAND {
        Ok(Admissibility::Stable)
    } else {
        Ok(Admissibility::Unstable)
    }
}
