use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex degree sequence with cached summary statistics.
///
/// The total may be odd: unconditioned truncated Poisson draws are
/// degree sequences too. Operations that need a graphical sum check
/// [`DegreeSequence::has_even_sum`] themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    /// `counts[j]` is `D_j`, the number of vertices of degree `j`.
    counts: Vec<u64>,
    total: u64,
    /// Sum of the degrees that are at least 3.
    kernel_total: u64,
    falling2_total: u64,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Self {
        let max = degrees.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; max + 1];
        let (mut total, mut kernel_total, mut falling2_total) = (0u64, 0u64, 0u64);
        for &d in &degrees {
            counts[d as usize] += 1;
            let d = d as u64;
            total += d;
            falling2_total += d * d.saturating_sub(1);
            if d >= 3 {
                kernel_total += d;
            }
        }
        DegreeSequence { degrees, counts, total, kernel_total, falling2_total }
    }

    /// Parses whitespace-separated non-negative integers.
    pub fn parse(text: &str) -> Result<Self> {
        let degrees = text
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("bad degree {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if degrees.is_empty() {
            return Err(Error::Parse("empty degree sequence".into()));
        }
        Ok(Self::new(degrees))
    }

    pub fn to_text(&self) -> String {
        let mut s = self.degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        s.push('\n');
        s
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `D_j`.
    pub fn count(&self, j: u32) -> u64 {
        self.counts.get(j as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn has_even_sum(&self) -> bool {
        self.total.is_multiple_of(2)
    }

    /// Half the degree sum.
    pub fn m(&self) -> u64 {
        self.total / 2
    }

    /// `n'`: vertices of degree at least 3.
    pub fn n_prime(&self) -> u64 {
        self.counts.iter().skip(3).sum()
    }

    /// `m'`: half the sum of the degrees that are at least 3.
    pub fn m_prime(&self) -> u64 {
        self.kernel_total / 2
    }

    pub fn kernel_total(&self) -> u64 {
        self.kernel_total
    }

    pub fn min_degree(&self) -> u32 {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.counts.len().saturating_sub(1) as u32
    }

    /// `η(d) = Σ d_i (d_i - 1) / Σ d_i`.
    pub fn eta(&self) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::domain("degree sequence has zero sum"));
        }
        Ok(self.falling2_total as f64 / self.total as f64)
    }

    /// `Σ C(d_i, 2)`.
    pub fn binom2_sum(&self) -> u64 {
        self.falling2_total / 2
    }
}
