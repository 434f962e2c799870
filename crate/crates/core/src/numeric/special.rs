use super::LogReal;

/// `ln(k!)`. Exact products for small `k`, log-gamma beyond.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    if k <= 20 {
        let mut p = 1.0f64;
        for i in 2..=k {
            p *= i as f64;
        }
        return p.ln();
    }
    libm::lgamma(k as f64 + 1.0)
}

/// `ln((2m-1)!!)` computed as `ln((2m)!) - m ln 2 - ln(m!)`.
/// `m = 0` is the empty product.
pub fn log_double_factorial(m: u64) -> LogReal {
    if m == 0 {
        return LogReal::ONE;
    }
    LogReal::from_ln(ln_factorial(2 * m) - m as f64 * std::f64::consts::LN_2 - ln_factorial(m))
}

/// `ln C(total, k)`; `-inf` when `k > total`.
pub fn ln_binomial(total: u64, k: u64) -> f64 {
    if k > total {
        return f64::NEG_INFINITY;
    }
    ln_factorial(total) - ln_factorial(k) - ln_factorial(total - k)
}

/// `ln` of the rising factorial `x (x+1) ⋯ (x+k-1)`.
pub fn ln_rising_factorial(x: u64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    assert!(x > 0, "rising factorial of 0 with k > 0 is zero");
    ln_factorial(x + k - 1) - ln_factorial(x - 1)
}
