//! Scalar analytics: the `λ_c` root, the truncated Poisson law `TP(2, λ)`,
//! parameters derived from `(n, m)` and log-space helpers.
//!
//! Throughout, `h(λ) = e^λ - 1 - λ` is the normaliser of `TP(2, λ)` and
//! `g(λ) = λ (e^λ - 1) / h(λ)` its mean. Three evaluation branches keep
//! every quantity accurate from `λ ≈ 1e-6` (average degree just above 2)
//! to `λ` in the hundreds:
//!
//! - `λ < 1e-3`: Taylor series for `h`,
//! - `1e-3 ≤ λ < 1`: `expm1`,
//! - `λ ≥ 1`: everything rescaled by `e^{-λ}` so nothing overflows.

mod logreal;
mod special;

pub use logreal::LogReal;
pub use special::{ln_binomial, ln_factorial, ln_rising_factorial, log_double_factorial};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SERIES_CUTOFF: f64 = 1e-3;

/// Residual tolerance for the root, in `g`-space.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// `e^λ - 1 - λ` by its Taylor series through `λ^8 / 8!`.
fn h_series(l: f64) -> f64 {
    // Horner on λ^2 (1/2! + λ/3! + … + λ^6/8!)
    const INV_FACT: [f64; 7] = [
        1.0 / 2.0,
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 120.0,
        1.0 / 720.0,
        1.0 / 5040.0,
        1.0 / 40320.0,
    ];
    let mut acc = 0.0;
    for c in INV_FACT.iter().rev() {
        acc = acc * l + c;
    }
    acc * l * l
}

/// `h(λ) = e^λ - 1 - λ`. Overflows for `λ > ~709`; use [`ln_h`] there.
pub fn h(l: f64) -> f64 {
    if l < SERIES_CUTOFF {
        h_series(l)
    } else {
        l.exp_m1() - l
    }
}

/// `ln h(λ)`, finite for every `λ > 0`.
pub fn ln_h(l: f64) -> f64 {
    if l < SERIES_CUTOFF {
        h_series(l).ln()
    } else if l < 1.0 {
        (l.exp_m1() - l).ln()
    } else {
        let t = (-l).exp();
        l + (-t - l * t).ln_1p()
    }
}

/// Mean of `TP(2, λ)`: `g(λ) = λ (e^λ - 1) / (e^λ - 1 - λ)`.
pub fn g(l: f64) -> f64 {
    if l < 1.0 {
        l * l.exp_m1() / h(l)
    } else {
        let t = (-l).exp();
        let one_minus_t = -(-l).exp_m1();
        l * one_minus_t / (one_minus_t - l * t)
    }
}

/// `g'(λ) = 1 + λ (2h - λ(e^λ - 1)) / h²`.
fn g_prime(l: f64) -> f64 {
    if l < 0.5 {
        // 2h - λ(e^λ-1) = Σ_{j≥3} (2-j) λ^j / j!
        let mut term = l * l / 2.0; // λ^2/2!
        let mut sum = 0.0;
        for j in 3..40 {
            term *= l / j as f64;
            let add = (2.0 - j as f64) * term;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        let hv = h(l);
        1.0 + l * sum / (hv * hv)
    } else {
        let t = (-l).exp();
        let one_minus_t = -(-l).exp_m1();
        let scaled_h = one_minus_t - l * t;
        1.0 + l * t * (2.0 * scaled_h - l * one_minus_t) / (scaled_h * scaled_h)
    }
}

/// `η̄ = λ e^λ / (e^λ - 1)`.
pub fn eta_bar_of(l: f64) -> f64 {
    l / -(-l).exp_m1()
}

/// `η̄ - 1`, accurate for small `λ`.
fn eta_bar_minus_one(l: f64) -> f64 {
    if l < 0.1 {
        // (λe^λ - e^λ + 1) = Σ_{k≥2} (k-1) λ^k / k!
        let mut term = l; // λ^1/1!
        let mut num = 0.0;
        for k in 2..40 {
            term *= l / k as f64;
            let add = (k as f64 - 1.0) * term;
            num += add;
            if add < 1e-18 * num {
                break;
            }
        }
        num / l.exp_m1()
    } else {
        eta_bar_of(l) - 1.0
    }
}

/// `P(Y = 2)` for `Y ~ TP(2, λ)`: `λ² / (2 h(λ))`.
pub fn p2_of(l: f64) -> f64 {
    if l < 1.0 {
        l * l / (2.0 * h(l))
    } else {
        let t = (-l).exp();
        l * l * t / (2.0 * (-(-l).exp_m1() - l * t))
    }
}

/// The unique positive root of `g(λ) = c`.
///
/// Bisection on `(1e-12, max(20, c+10))` followed by safeguarded Newton
/// steps. `g` is strictly increasing, so the bracket always holds the root.
pub fn solve_lambda(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::domain("average degree must be finite"));
    }
    if c <= 2.0 {
        return Err(Error::domain("average degree must exceed 2"));
    }
    let mut lo = 1e-12f64;
    let mut hi = 20f64.max(c + 10.0);
    if g(lo) >= c {
        return Err(Error::domain(format!(
            "average degree {c} is too close to 2 to resolve"
        )));
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < c {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    let mut best = 0.5 * (lo + hi);
    let mut best_res = (g(best) - c).abs();
    let mut x = best;
    for _ in 0..4 {
        let step = (g(x) - c) / g_prime(x);
        let next = x - step;
        if !(next > lo && next < hi) {
            break;
        }
        let res = (g(next) - c).abs();
        if res < best_res {
            best = next;
            best_res = res;
        }
        x = next;
    }
    if best_res > ROOT_TOLERANCE * c.max(1.0) {
        return Err(Error::Internal(format!(
            "root solve for c = {c} stalled at residual {best_res:e}"
        )));
    }
    Ok(best)
}

/// Scalar parameters derived from `(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: u64,
    pub m: u64,
    /// Average degree `2m/n`.
    pub c: f64,
    /// Excess `2m - 2n`.
    pub r: u64,
    pub lambda_c: f64,
    pub eta_bar: f64,
    pub p_c: f64,
    /// `(λ_c / c)²`.
    pub delta: f64,
    /// `exp(-c/2 - λ_c²/4)`.
    pub p_a: f64,
}

impl ModelParams {
    /// `c - 2`, computed from the integers rather than from `c`.
    pub fn c_minus_two(&self) -> f64 {
        self.r as f64 / self.n as f64
    }

    /// `1 + η̄_c - c` without the cancellation of the direct expression.
    pub fn one_plus_eta_minus_c(&self) -> f64 {
        eta_bar_minus_one(self.lambda_c) - self.c_minus_two()
    }

    /// `c (1 + η̄_c - c)`, the variance of `TP(2, λ_c)`.
    pub fn variance(&self) -> f64 {
        self.c * self.one_plus_eta_minus_c()
    }

    /// `(c - 2p_c)/c`, using the identity `c - 2p_c = λ_c`.
    pub fn kernel_edge_fraction(&self) -> f64 {
        self.lambda_c / self.c
    }
}

/// Derives [`ModelParams`] for `m > n >= 3`.
pub fn derive_params(n: u64, m: u64) -> Result<ModelParams> {
    if n < 3 {
        return Err(Error::domain(format!("need at least 3 vertices, got n = {n}")));
    }
    if m <= n {
        return Err(Error::domain(format!(
            "need m > n (average degree must exceed 2), got n = {n}, m = {m}"
        )));
    }
    let c = 2.0 * m as f64 / n as f64;
    let lambda_c = solve_lambda(c)?;
    let eta_bar = eta_bar_of(lambda_c);
    let p_c = p2_of(lambda_c);
    let delta = (lambda_c / c).powi(2);
    let p_a = (-c / 2.0 - lambda_c * lambda_c / 4.0).exp();
    Ok(ModelParams {
        n,
        m,
        c,
        r: 2 * (m - n),
        lambda_c,
        eta_bar,
        p_c,
        delta,
        p_a,
    })
}

/// Poisson(λ) conditioned on being at least 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncatedPoisson {
    lambda: f64,
    ln_lambda: f64,
    ln_norm: f64,
}

impl TruncatedPoisson {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
        }
        Ok(TruncatedPoisson { lambda, ln_lambda: lambda.ln(), ln_norm: ln_h(lambda) })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ln_pmf(&self, j: u64) -> f64 {
        if j < 2 {
            return f64::NEG_INFINITY;
        }
        j as f64 * self.ln_lambda - ln_factorial(j) - self.ln_norm
    }

    pub fn pmf(&self, j: u64) -> f64 {
        self.ln_pmf(j).exp()
    }

    pub fn mean(&self) -> f64 {
        g(self.lambda)
    }

    /// `E[Y(Y-1)] = λ² e^λ / h(λ)`.
    pub fn second_factorial_moment(&self) -> f64 {
        let l = self.lambda;
        if l < 1.0 {
            l * l * l.exp() / h(l)
        } else {
            let t = (-l).exp();
            l * l / (-(-l).exp_m1() - l * t)
        }
    }

    /// `E[C(Y, 2)]`.
    pub fn binom2_mean(&self) -> f64 {
        0.5 * self.second_factorial_moment()
    }
}

/// `P(Y = j)` for `Y ~ TP(2, λ)`; zero outside the support.
pub fn trunc_poisson_pmf(lambda: f64, j: u64) -> Result<f64> {
    Ok(TruncatedPoisson::new(lambda)?.pmf(j))
}

/// `η(d) = Σ d_i (d_i - 1) / Σ d_i`.
pub fn eta_of(degrees: &[u32]) -> Result<f64> {
    if degrees.is_empty() {
        return Err(Error::domain("empty degree sequence"));
    }
    let (mut num, mut den) = (0u128, 0u128);
    for &d in degrees {
        let d = d as u128;
        num += d * d.saturating_sub(1);
        den += d;
    }
    if den == 0 {
        return Err(Error::domain("degree sequence has zero sum"));
    }
    Ok(num as f64 / den as f64)
}
