//! Leading-order asymptotic counts, all in log space.
//!
//! Every evaluator returns a [`CountEstimate`] whose `breakdown` lists the
//! natural-log contribution of each factor; `log_count` is their sum. The
//! `(1 + O(1/r))`-type corrections are not modelled.
//!
//! Shared skeleton: `(2m-1)!! · h(λ_c)^n · λ_c^{-2m}` with
//! `h(λ) = e^λ - 1 - λ`, divided by a Gaussian normaliser and multiplied
//! by a regime-specific connectivity factor.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::DegreeSequence;
use crate::numeric::{self, derive_params, ln_binomial, ln_factorial, log_double_factorial, LogReal, ModelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Valid across the whole range `m - n → ∞`, `m = O(n log n)`.
    Main,
    /// Average degree `c → 2`.
    CaseA,
    /// Bounded `c > 2`; the same expression as `Main`.
    CaseB,
    /// `c → ∞`.
    CaseC,
    /// 2-edge-connected graphs.
    TwoEdge,
    /// Excess `k = m - n = o(n^{2/3})`.
    Wright,
    /// Graphs of minimum degree at least 2.
    Mindeg2,
}

impl Regime {
    /// `c < 2.2` selects case (a), `c > 30` case (c), anything else `Main`.
    pub fn auto(c: f64) -> Regime {
        if c < 2.2 {
            Regime::CaseA
        } else if c > 30.0 {
            Regime::CaseC
        } else {
            Regime::Main
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::Main => "main",
            Regime::CaseA => "case_a",
            Regime::CaseB => "case_b",
            Regime::CaseC => "case_c",
            Regime::TwoEdge => "two_edge",
            Regime::Wright => "wright",
            Regime::Mindeg2 => "mindeg2",
        }
    }
}

/// Regime for degree-sequence counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegseqRegime {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    pub log_count: LogReal,
    pub regime: Regime,
    pub params: ModelParams,
    /// Natural-log contribution of each named factor.
    pub breakdown: BTreeMap<String, f64>,
}

impl CountEstimate {
    fn from_factors(regime: Regime, params: ModelParams, factors: &[(&str, f64)]) -> Self {
        let breakdown: BTreeMap<String, f64> =
            factors.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let ln: f64 = breakdown.values().sum();
        CountEstimate { log_count: LogReal::from_ln(ln), regime, params, breakdown }
    }

    pub fn ln(&self) -> f64 {
        self.log_count.ln()
    }

    pub fn log10(&self) -> f64 {
        self.log_count.log10_abs()
    }
}

/// `ln (2m-1)!!`, `n ln h(λ_c)` and `-2m ln λ_c`.
fn skeleton(p: &ModelParams) -> [(&'static str, f64); 3] {
    [
        ("double_factorial", log_double_factorial(p.m).ln()),
        ("poisson_normaliser", p.n as f64 * numeric::ln_h(p.lambda_c)),
        ("lambda_power", -2.0 * p.m as f64 * p.lambda_c.ln()),
    ]
}

fn gaussian_normaliser(p: &ModelParams) -> Result<f64> {
    let var = p.variance();
    if var <= 0.0 {
        return Err(Error::Internal(format!("non-positive variance term {var:e}")));
    }
    Ok(-0.5 * (2.0 * PI * p.n as f64 * var).ln())
}

/// `ln Q(n, m)` to leading order:
/// `h(λ_c)^n λ_c^{-2m} / sqrt(2π n c (1 + η̄_c - c))`.
pub fn log_q_factor(p: &ModelParams) -> Result<LogReal> {
    let [_, pn, lp] = skeleton(p);
    Ok(LogReal::from_ln(pn.1 + lp.1 + gaussian_normaliser(p)?))
}

fn main_factors(p: &ModelParams) -> Result<Vec<(&'static str, f64)>> {
    let mut f = skeleton(p).to_vec();
    f.push(("gaussian_normaliser", gaussian_normaliser(p)?));
    f.push(("kernel_fraction", 0.5 * p.kernel_edge_fraction().ln()));
    f.push(("exponential", -p.c / 2.0 - p.lambda_c * p.lambda_c / 4.0));
    Ok(f)
}

/// The count of 2-connected `(n, m)`-graphs, valid over the whole range.
pub fn log_count_main(p: &ModelParams) -> Result<CountEstimate> {
    Ok(CountEstimate::from_factors(Regime::Main, *p, &main_factors(p)?))
}

/// Bounded-`c` formula; identical to [`log_count_main`].
pub fn log_count_case_b(p: &ModelParams) -> Result<CountEstimate> {
    Ok(CountEstimate::from_factors(Regime::CaseB, *p, &main_factors(p)?))
}

/// `c → 2` formula: normaliser `sqrt(2π n (c-2))`, factor `sqrt(3r)/(e sqrt(2m))`.
pub fn log_count_case_a(p: &ModelParams) -> Result<CountEstimate> {
    if p.r == 0 {
        return Err(Error::domain("case (a) needs r = 2m - 2n > 0"));
    }
    let mut f = skeleton(p).to_vec();
    f.push(("gaussian_normaliser", -0.5 * (2.0 * PI * p.n as f64 * p.c_minus_two()).ln()));
    f.push(("kernel_fraction", 0.5 * (3.0 * p.r as f64).ln() - 0.5 * (2.0 * p.m as f64).ln()));
    f.push(("exponential", -1.0));
    Ok(CountEstimate::from_factors(Regime::CaseA, *p, &f))
}

/// `c → ∞` formula: normaliser `sqrt(2π n c)`, factor `exp(-η̄/2 - η̄²/4)`.
pub fn log_count_case_c(p: &ModelParams) -> Result<CountEstimate> {
    let mut f = skeleton(p).to_vec();
    f.push(("gaussian_normaliser", -0.5 * (2.0 * PI * p.n as f64 * p.c).ln()));
    f.push(("exponential", -p.eta_bar / 2.0 - p.eta_bar * p.eta_bar / 4.0));
    Ok(CountEstimate::from_factors(Regime::CaseC, *p, &f))
}

/// 2-edge-connected graphs: the main formula times
/// `exp(λ_c³ / (2 (e^{λ_c} - 1)²))`.
pub fn log_count_two_edge(p: &ModelParams) -> Result<CountEstimate> {
    let mut f = main_factors(p)?;
    f.push(("two_edge_correction", two_edge_exponent(p.lambda_c)));
    Ok(CountEstimate::from_factors(Regime::TwoEdge, *p, &f))
}

/// `λ³ / (2 (e^λ - 1)²)`, written to stay finite for large `λ`.
pub fn two_edge_exponent(l: f64) -> f64 {
    let t = (-l).exp();
    let one_minus_t = -(-l).exp_m1();
    if l < 1.0 {
        l.powi(3) / (2.0 * l.exp_m1().powi(2))
    } else {
        l.powi(3) * t * t / (2.0 * one_minus_t * one_minus_t)
    }
}

/// The constant `sqrt(3) / (e sqrt(2π))` of the small-excess formula.
pub fn wright_constant() -> f64 {
    3f64.sqrt() / (E * (2.0 * PI).sqrt())
}

/// Small-excess formula for `k = m - n`:
/// `sqrt(3)/(e sqrt(2π)) · n^{n+3k-1/2} · e^{2k-n+3k²/(2n)} · (18k²)^{-k}`.
pub fn log_count_wright(n: u64, k: u64) -> Result<CountEstimate> {
    if k == 0 {
        return Err(Error::domain("excess k = m - n must be at least 1"));
    }
    let p = derive_params(n, n + k)?;
    let (nf, kf) = (n as f64, k as f64);
    let f = [
        ("constant", wright_constant().ln()),
        ("vertex_power", (nf + 3.0 * kf - 0.5) * nf.ln()),
        ("exponential", 2.0 * kf - nf + 3.0 * kf * kf / (2.0 * nf)),
        ("excess_power", -kf * (18.0 * kf * kf).ln()),
    ];
    Ok(CountEstimate::from_factors(Regime::Wright, p, &f))
}

/// Graphs of minimum degree at least 2:
/// `(2m-1)!! Q(n, m) exp(-η̄/2 - η̄²/4)`. Agrees with case (c) as `c → ∞`;
/// it keeps the full `sqrt(c(1 + η̄ - c))` normaliser of `Q` at finite `c`.
pub fn log_count_mindeg2(p: &ModelParams) -> Result<CountEstimate> {
    let mut f = skeleton(p).to_vec();
    f.push(("gaussian_normaliser", gaussian_normaliser(p)?));
    f.push(("exponential", -p.eta_bar / 2.0 - p.eta_bar * p.eta_bar / 4.0));
    Ok(CountEstimate::from_factors(Regime::Mindeg2, *p, &f))
}

/// Dispatches on `regime`; `Wright` uses `k = m - n`.
pub fn log_count(regime: Regime, p: &ModelParams) -> Result<CountEstimate> {
    match regime {
        Regime::Main => log_count_main(p),
        Regime::CaseA => log_count_case_a(p),
        Regime::CaseB => log_count_case_b(p),
        Regime::CaseC => log_count_case_c(p),
        Regime::TwoEdge => log_count_two_edge(p),
        Regime::Wright => log_count_wright(p.n, p.m - p.n),
        Regime::Mindeg2 => log_count_mindeg2(p),
    }
}

/// 2-connected graphs with degree sequence `d`:
/// `(2m-1)!! / ∏ d_i!` times the regime factor.
pub fn log_count_degseq(d: &DegreeSequence, regime: DegseqRegime) -> Result<CountEstimate> {
    if !d.has_even_sum() {
        return Err(Error::domain("degree sum is odd"));
    }
    if d.is_empty() || d.min_degree() < 2 {
        return Err(Error::domain("every degree must be at least 2"));
    }
    let n = d.len() as u64;
    let m = d.m();
    let p = derive_params(n, m)?;
    let dfact: f64 = d.degrees().iter().map(|&x| ln_factorial(x as u64)).sum();
    let mut f = vec![
        ("double_factorial", log_double_factorial(m).ln()),
        ("degree_factorials", -dfact),
    ];
    match regime {
        DegseqRegime::A => {
            f.push(("kernel_fraction", 0.5 * (3.0 * p.r as f64).ln() - 0.5 * (2.0 * m as f64).ln()));
            f.push(("exponential", -1.0));
        }
        DegseqRegime::B => {
            f.push(("kernel_fraction", 0.5 * p.kernel_edge_fraction().ln()));
            f.push(("exponential", -p.c / 2.0 - p.lambda_c * p.lambda_c / 4.0));
        }
        DegseqRegime::C => {
            let eta = d.eta()?;
            f.push(("exponential", -eta / 2.0 - eta * eta / 4.0));
        }
    }
    let regime = match regime {
        DegseqRegime::A => Regime::CaseA,
        DegseqRegime::B => Regime::CaseB,
        DegseqRegime::C => Regime::CaseC,
    };
    Ok(CountEstimate::from_factors(regime, p, &f))
}

/// `ln C(n(n-1)/2, m)`: the number of all `(n, m)`-graphs.
pub fn log_count_all(n: u64, m: u64) -> f64 {
    ln_binomial(n * (n - 1) / 2, m)
}
