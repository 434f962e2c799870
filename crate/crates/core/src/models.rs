//! Random samplers: the pairing model, the kernel configuration model and
//! truncated Poisson degree sequences, plus typical-set classification.
//!
//! Every sampler has a `seed` entry point (ChaCha8, stream 0) and a
//! `_with_rng` form for callers that manage their own streams.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{batch_rng, map_batches, Execution};
use crate::graphs::{DegreeSequence, Multigraph};
use crate::numeric::{ln_factorial, solve_lambda, ModelParams, TruncatedPoisson};

pub const DEFAULT_MAX_TRIES: u64 = 100_000_000;
pub const DEFAULT_EPSILON: f64 = 0.1;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One point per unit of degree, labelled by its vertex.
fn points(degrees: &[u32]) -> Vec<usize> {
    degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d as usize))
        .collect()
}

pub fn sample_pairing(d: &DegreeSequence, seed: u64) -> Result<Multigraph> {
    sample_pairing_with_rng(d, &mut seeded_rng(seed))
}

/// Uniform perfect matching on the points of `d`, projected to a multigraph
/// on vertices `0..d.len()`.
pub fn sample_pairing_with_rng<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Result<Multigraph> {
    if !d.has_even_sum() {
        return Err(Error::domain("degree sum is odd"));
    }
    let mut pts = points(d.degrees());
    pts.shuffle(rng);
    Multigraph::new(d.len(), pts.chunks_exact(2).map(|p| (p[0], p[1])))
}

/// A kernel with ordered lists of degree-2 vertices on its edges.
#[derive(Clone, Debug)]
pub struct KernelConfig {
    /// Pairing on the vertices of degree at least 3, labelled by their
    /// index in the degree sequence.
    pub kernel: Multigraph,
    /// `assignment[i]` lists the degree-2 vertices subdividing
    /// `kernel.edges()[i]`, in order from its first endpoint to its second.
    pub assignment: Vec<Vec<usize>>,
    /// The kernel with every edge subdivided by its list; vertices are
    /// `0..d.len()` with identity labels.
    pub pre_kernel: Multigraph,
}

impl KernelConfig {
    /// Builds the pre-kernel from a kernel and an assignment. Every vertex
    /// in `0..n` must appear in the kernel or in exactly one list.
    pub fn assemble(n: usize, kernel: Multigraph, assignment: Vec<Vec<usize>>) -> Result<Self> {
        if assignment.len() != kernel.edge_count() {
            return Err(Error::Internal("assignment does not match kernel edges".into()));
        }
        let mut edges = Vec::with_capacity(n + kernel.edge_count());
        for (&(a, b), list) in kernel.edges().iter().zip(&assignment) {
            let mut prev = kernel.label(a);
            for &x in list {
                edges.push((prev, x));
                prev = x;
            }
            edges.push((prev, kernel.label(b)));
        }
        let pre_kernel = Multigraph::new(n, edges)?;
        Ok(KernelConfig { kernel, assignment, pre_kernel })
    }

    /// Degree-2 vertices on each kernel edge.
    pub fn subdivisions(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.iter().map(Vec::len)
    }

    /// Text dump: one line per kernel edge, `u v : x1 x2 ...`.
    pub fn assignment_text(&self) -> String {
        let mut out = String::new();
        for (&(a, b), list) in self.kernel.edges().iter().zip(&self.assignment) {
            out.push_str(&format!("{} {} :", self.kernel.label(a), self.kernel.label(b)));
            for x in list {
                out.push_str(&format!(" {x}"));
            }
            out.push('\n');
        }
        out
    }
}

fn check_kernel_degrees(d: &DegreeSequence) -> Result<()> {
    if d.is_empty() || d.min_degree() < 2 {
        return Err(Error::domain("kernel configuration needs every degree at least 2"));
    }
    if d.kernel_total() == 0 {
        return Err(Error::domain("kernel configuration needs a vertex of degree at least 3"));
    }
    if d.kernel_total() % 2 == 1 {
        return Err(Error::domain("sum of degrees at least 3 is odd"));
    }
    Ok(())
}

pub fn sample_kernel_config(d: &DegreeSequence, seed: u64) -> Result<KernelConfig> {
    sample_kernel_config_with_rng(d, &mut seeded_rng(seed))
}

/// Pairing on the degree-at-least-3 cells, then each degree-2 vertex (in
/// label order) is inserted at a uniform one of the `M + t` slots, where
/// `t` counts the vertices already placed. Slot `i < M` is the front of
/// kernel edge `i`; slot `M + j` is right after the `j`-th placed vertex.
pub fn sample_kernel_config_with_rng<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Result<KernelConfig> {
    check_kernel_degrees(d)?;
    let degs = d.degrees();
    let kernel_vertices: Vec<usize> = (0..degs.len()).filter(|&v| degs[v] >= 3).collect();
    let kernel_degs: Vec<u32> = kernel_vertices.iter().map(|&v| degs[v]).collect();
    let mut pts = points(&kernel_degs);
    pts.shuffle(rng);
    let edges: Vec<(usize, usize)> =
        pts.chunks_exact(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
    let arcs = edges.len();
    let kernel = Multigraph::from_parts(kernel_vertices, edges);

    // singly linked lists: `head[e]` and `next[j]` hold placement indices
    const END: usize = usize::MAX;
    let twos: Vec<usize> = (0..degs.len()).filter(|&v| degs[v] == 2).collect();
    let mut head = vec![END; arcs];
    let mut next = vec![END; twos.len()];
    for j in 0..twos.len() {
        let pick = rng.random_range(0..(arcs + j) as u64) as usize;
        if pick < arcs {
            next[j] = head[pick];
            head[pick] = j;
        } else {
            next[j] = next[pick - arcs];
            next[pick - arcs] = j;
        }
    }
    let assignment = head
        .iter()
        .map(|&h| {
            let mut list = Vec::new();
            let mut j = h;
            while j != END {
                list.push(twos[j]);
                j = next[j];
            }
            list
        })
        .collect();
    KernelConfig::assemble(degs.len(), kernel, assignment)
}

/// Inversion sampler for `TP(2, λ)`.
#[derive(Clone, Debug)]
pub struct DegreeTable {
    dist: TruncatedPoisson,
    /// `cdf[i] = P(Y <= i + 2)`, up to where the tail drops below 1e-15.
    cdf: Vec<f64>,
}

impl DegreeTable {
    pub fn new(lambda: f64) -> Result<Self> {
        let dist = TruncatedPoisson::new(lambda)?;
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        let mut j = 2u64;
        loop {
            acc += dist.pmf(j);
            cdf.push(acc);
            if (1.0 - acc < 1e-15 && j as f64 > lambda) || j > 100_000 {
                break;
            }
            j += 1;
        }
        Ok(DegreeTable { dist, cdf })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c <= u);
        if idx < self.cdf.len() {
            return idx as u32 + 2;
        }
        let mut acc = *self.cdf.last().unwrap();
        let mut j = self.cdf.len() as u64 + 2;
        loop {
            let p = self.dist.pmf(j);
            acc += p;
            if acc > u || p == 0.0 {
                return j as u32;
            }
            j += 1;
        }
    }
}

pub fn sample_degrees(n: usize, lambda: f64, seed: u64) -> Result<DegreeSequence> {
    sample_degrees_with_rng(n, lambda, &mut seeded_rng(seed))
}

/// `n` independent `TP(2, λ)` draws.
pub fn sample_degrees_with_rng<R: Rng + ?Sized>(n: usize, lambda: f64, rng: &mut R) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::domain("need at least one vertex"));
    }
    let table = DegreeTable::new(lambda)?;
    Ok(DegreeSequence::new((0..n).map(|_| table.draw(rng)).collect()))
}

/// One rejection attempt: fills `buf` and reports whether the sum is
/// `target`. Stops early once the target is out of reach.
fn attempt<R: Rng + ?Sized>(table: &DegreeTable, buf: &mut [u32], target: u64, rng: &mut R) -> bool {
    let n = buf.len() as u64;
    let mut sum = 0u64;
    for (i, slot) in buf.iter_mut().enumerate() {
        let y = table.draw(rng);
        *slot = y;
        sum += y as u64;
        if sum + 2 * (n - 1 - i as u64) > target {
            return false;
        }
    }
    sum == target
}

fn conditioned_table(n: u64, m: u64) -> Result<DegreeTable> {
    if n == 0 || m <= n {
        return Err(Error::domain(format!("need m > n >= 1, got n = {n}, m = {m}")));
    }
    DegreeTable::new(solve_lambda(2.0 * m as f64 / n as f64)?)
}

pub fn sample_degrees_conditioned(n: u64, m: u64, seed: u64, max_tries: u64) -> Result<DegreeSequence> {
    sample_degrees_conditioned_with_rng(n, m, &mut seeded_rng(seed), max_tries).map(|(d, _)| d)
}

/// Rejection sampling of `TP(2, λ_c)^n` given the sum is `2m`. Returns the
/// sequence and the number of attempts used.
pub fn sample_degrees_conditioned_with_rng<R: Rng + ?Sized>(
    n: u64,
    m: u64,
    rng: &mut R,
    max_tries: u64,
) -> Result<(DegreeSequence, u64)> {
    if max_tries == 0 {
        return Err(Error::domain("max_tries must be at least 1"));
    }
    let table = conditioned_table(n, m)?;
    let mut buf = vec![0u32; n as usize];
    for tries in 1..=max_tries {
        if attempt(&table, &mut buf, 2 * m, rng) {
            return Ok((DegreeSequence::new(buf), tries));
        }
    }
    Err(Error::RetryExhausted { attempts: max_tries, accepted: 0 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceStats {
    pub attempts: u64,
    pub accepted: u64,
    pub rate: f64,
    pub std_error: f64,
    /// `1 / sqrt(2π n c (1 + η̄_c - c))`.
    pub predicted: f64,
}

/// Runs `attempts` independent rejection attempts in batches and counts
/// how many hit the target sum.
pub fn measure_acceptance(n: u64, m: u64, attempts: u64, seed: u64, exec: Execution) -> Result<AcceptanceStats> {
    let p = crate::numeric::derive_params(n, m)?;
    let table = conditioned_table(n, m)?;
    let hits: u64 = map_batches(exec, attempts, |b, len| {
        let mut rng = batch_rng(seed, b);
        let mut buf = vec![0u32; n as usize];
        (0..len).filter(|_| attempt(&table, &mut buf, 2 * m, &mut rng)).count() as u64
    })
    .into_iter()
    .sum();
    let rate = hits as f64 / attempts as f64;
    Ok(AcceptanceStats {
        attempts,
        accepted: hits,
        rate,
        std_error: (rate * (1.0 - rate) / attempts as f64).sqrt(),
        predicted: 1.0 / (2.0 * std::f64::consts::PI * n as f64 * p.variance()).sqrt(),
    })
}

/// Weights below this fraction of a table's peak are dropped.
const TRIM: f64 = 1e-250;

/// Weight table over a contiguous range of totals.
#[derive(Clone, Debug)]
struct Window {
    lo: usize,
    w: Vec<f64>,
}

impl Window {
    fn get(&self, k: usize) -> f64 {
        k.checked_sub(self.lo).and_then(|i| self.w.get(i)).copied().unwrap_or(0.0)
    }

    fn trimmed(lo: usize, mut w: Vec<f64>) -> Window {
        let peak = w.iter().cloned().fold(0.0, f64::max);
        for x in &mut w {
            *x /= peak;
        }
        let first = w.iter().position(|&x| x >= TRIM).unwrap_or(0);
        let last = w.iter().rposition(|&x| x >= TRIM).unwrap_or(0);
        Window { lo: lo + first, w: w[first..=last].to_vec() }
    }
}

/// Draws `TP(2, λ)^n` conditioned on summing to `2m` without rejection.
///
/// The excesses `d_i - 2` are split recursively: a block of `s` vertices
/// with total excess `t` sends `j` to its left half with probability
/// proportional to `W_left(j) W_right(t - j)`, where `W_s` is the `s`-fold
/// convolution of the excess weights. The conditional law does not depend
/// on `λ`, which only tilts the tables to keep them in floating-point
/// range. Exact apart from weights below 1e-250 of a table's peak.
#[derive(Clone, Debug)]
pub struct ConditionedSampler {
    n: usize,
    excess: usize,
    tables: HashMap<usize, Window>,
}

impl ConditionedSampler {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if n == 0 || m < n {
            return Err(Error::domain(format!("need m >= n >= 1, got n = {n}, m = {m}")));
        }
        let excess = (2 * (m - n)) as usize;
        let lambda = if m > n { solve_lambda(2.0 * m as f64 / n as f64)? } else { 1.0 };
        let base: Vec<f64> = (0..=excess)
            .map(|k| k as f64 * lambda.ln() - ln_factorial(k as u64 + 2))
            .collect();
        let top = base.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let base = Window::trimmed(0, base.iter().map(|x| (x - top).exp()).collect());
        let mut s = ConditionedSampler { n: n as usize, excess, tables: HashMap::new() };
        s.tables.insert(1, base);
        s.build(n as usize);
        Ok(s)
    }

    fn build(&mut self, size: usize) {
        if self.tables.contains_key(&size) {
            return;
        }
        let (l, r) = (size / 2, size - size / 2);
        self.build(l);
        self.build(r);
        let (a, b) = (&self.tables[&l], &self.tables[&r]);
        let lo = a.lo + b.lo;
        let hi = (a.lo + a.w.len() - 1 + b.lo + b.w.len() - 1).min(self.excess);
        let mut w = vec![0.0; hi + 1 - lo];
        for (i, &x) in a.w.iter().enumerate() {
            for (j, &y) in b.w.iter().enumerate() {
                let k = i + j;
                if k + lo > hi {
                    break;
                }
                w[k] += x * y;
            }
        }
        let t = Window::trimmed(lo, w);
        self.tables.insert(size, t);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DegreeSequence {
        let mut out = vec![0u32; self.n];
        self.fill(&mut out, self.excess, rng);
        for x in &mut out {
            *x += 2;
        }
        DegreeSequence::new(out)
    }

    fn fill<R: Rng + ?Sized>(&self, out: &mut [u32], total: usize, rng: &mut R) {
        if out.len() == 1 {
            out[0] = total as u32;
            return;
        }
        if total == 0 {
            // `out` starts zeroed
            return;
        }
        let half = out.len() / 2;
        let (a, b) = (&self.tables[&half], &self.tables[&(out.len() - half)]);
        let lo = a.lo.max(total.saturating_sub(b.lo + b.w.len() - 1));
        let hi = (a.lo + a.w.len() - 1).min(total.saturating_sub(b.lo));
        if lo == hi {
            let (left, right) = out.split_at_mut(half);
            self.fill(left, lo, rng);
            self.fill(right, total - lo, rng);
            return;
        }
        let weight = |j: usize| a.get(j) * b.get(total - j);
        let sum: f64 = (lo..=hi).map(weight).sum();
        let mut u = rng.random::<f64>() * sum;
        let mut split = hi;
        for j in lo..=hi {
            u -= weight(j);
            if u < 0.0 {
                split = j;
                break;
            }
        }
        let (left, right) = out.split_at_mut(half);
        self.fill(left, split, rng);
        self.fill(right, total - split, rng);
    }
}

/// Expected degree statistics of `n` independent `TP(2, λ_c)` draws.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    /// `n P(Y = 2)`.
    pub degree2: f64,
    /// `n P(Y = 3)`.
    pub degree3: f64,
    /// `n E[C(Y, 2)]`.
    pub binom2: f64,
}

pub fn expected_counts(p: &ModelParams) -> Result<ExpectedCounts> {
    let tp = TruncatedPoisson::new(p.lambda_c)?;
    let n = p.n as f64;
    Ok(ExpectedCounts { degree2: n * tp.pmf(2), degree3: n * tp.pmf(3), binom2: n * tp.binom2_mean() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypicalRegime {
    /// Average degree tending to 2.
    A,
    /// Bounded average degree.
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalityReport {
    pub regime: TypicalRegime,
    pub member: bool,
    pub violations: Vec<String>,
    pub measured: BTreeMap<String, f64>,
    pub targets: BTreeMap<String, f64>,
    pub psi: f64,
    pub notes: Vec<String>,
}

/// Checks `d` against the typical set for `p`.
///
/// Regime a: `|D_2 - μ2|`, `|D_3 - μ3|` and `|Σ C(d_i, 2) - μ|` at most
/// `ψ = r^{1-ε}`, and `max d_i <= 8 ln n'` with `n' = n - D_2`.
/// Regime b: `max d_i <= 6 ln n`, `|η(d) - η̄_c| <= n^{-ε}` and
/// `|D_2 - p_c n| <= n^{1-ε}`; `psi` reports `n^{1-ε}`.
pub fn classify_typical(
    d: &DegreeSequence,
    p: &ModelParams,
    regime: TypicalRegime,
    epsilon: f64,
) -> Result<TypicalityReport> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::domain(format!("epsilon must lie in (0, 1/4), got {epsilon}")));
    }
    if regime == TypicalRegime::A && p.r == 0 {
        return Err(Error::domain("regime a needs r > 0"));
    }
    let n = p.n as f64;
    let exp = expected_counts(p)?;
    let (d2, d3) = (d.count(2) as f64, d.count(3) as f64);
    let binom2 = d.binom2_sum() as f64;
    let max_deg = d.max_degree() as f64;
    let eta = d.eta()?;

    let mut measured = BTreeMap::new();
    measured.insert("degree2".to_string(), d2);
    measured.insert("degree3".to_string(), d3);
    measured.insert("binom2_sum".to_string(), binom2);
    measured.insert("eta".to_string(), eta);
    measured.insert("max_degree".to_string(), max_deg);
    let mut targets = BTreeMap::new();
    targets.insert("mu2".to_string(), exp.degree2);
    targets.insert("mu3".to_string(), exp.degree3);
    targets.insert("mu".to_string(), exp.binom2);
    targets.insert("eta_bar".to_string(), p.eta_bar);
    targets.insert("p_c_n".to_string(), p.p_c * n);

    let mut violations = Vec::new();
    let mut notes = Vec::new();
    let mut check = |ok: bool, name: &str| {
        if !ok {
            violations.push(name.to_string());
        }
    };
    let psi = match regime {
        TypicalRegime::A => {
            let psi = (p.r as f64).powf(1.0 - epsilon);
            let n_prime = n - d2;
            check((d2 - exp.degree2).abs() <= psi, "degree2");
            check((d3 - exp.degree3).abs() <= psi, "degree3");
            check((binom2 - exp.binom2).abs() <= psi, "binom2_sum");
            check(n_prime >= 1.0 && max_deg <= 8.0 * n_prime.ln(), "max_degree");
            notes.push("max degree bound uses 8 ln(n - D_2); the looser prose bound is 6 ln n".into());
            psi
        }
        TypicalRegime::B => {
            let psi = n.powf(1.0 - epsilon);
            check(max_deg <= 6.0 * n.ln(), "max_degree");
            check((eta - p.eta_bar).abs() <= n.powf(-epsilon), "eta");
            check((d2 - p.p_c * n).abs() <= psi, "degree2");
            psi
        }
    };
    Ok(TypicalityReport { regime, member: violations.is_empty(), violations, measured, targets, psi, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{kernel, pre_kernel};
    use crate::numeric::derive_params;

    fn ds(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec())
    }

    #[test]
    fn pairing_preserves_degrees() {
        let d = ds(&[1, 3, 2, 4, 2, 5, 1]);
        for seed in 0..50 {
            let g = sample_pairing(&d, seed).unwrap();
            assert_eq!(g.degrees(), d.degrees());
            assert_eq!(g.edge_count() as u64, d.m());
        }
        assert!(sample_pairing(&ds(&[1, 2]), 0).is_err());
        let g = sample_pairing(&ds(&[1, 1]), 7).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn pairing_is_deterministic() {
        let d = ds(&[3; 20]);
        assert_eq!(sample_pairing(&d, 5).unwrap(), sample_pairing(&d, 5).unwrap());
    }

    #[test]
    fn kernel_config_structure() {
        let d = ds(&[3, 2, 4, 2, 2, 3, 6, 2, 3, 3]);
        for seed in 0..100 {
            let kc = sample_kernel_config(&d, seed).unwrap();
            let mut kd: Vec<u32> = kc.kernel.degrees();
            kd.sort_unstable();
            assert_eq!(kd, vec![3, 3, 3, 3, 4, 6]);
            assert_eq!(kc.kernel.edge_count() as u64, d.m_prime());
            assert_eq!(kc.pre_kernel.degrees(), d.degrees());
            let mut seen: Vec<usize> = kc.assignment.iter().flatten().copied().collect();
            seen.sort_unstable();
            assert_eq!(seen, vec![1, 3, 4, 7]);
            // the pre-kernel's kernel is the sampled kernel when no
            // degree-2 cycle is closed off by itself
            let pk = pre_kernel(&kc.pre_kernel);
            if pk.vertex_count() == kc.pre_kernel.vertex_count() {
                assert_eq!(kernel(&pk), kc.kernel);
            }
        }
    }

    #[test]
    fn kernel_config_rejects_bad_input() {
        assert!(sample_kernel_config(&ds(&[2, 2, 2]), 0).is_err());
        assert!(sample_kernel_config(&ds(&[3, 1, 3]), 0).is_err());
        assert!(sample_kernel_config(&ds(&[3, 2, 2]), 0).is_err());
    }

    #[test]
    fn single_subdivision_lands_uniformly() {
        // (3,3,2): given a triple-edge kernel, each edge gets vertex 2
        // with probability 1/3
        let d = ds(&[3, 3, 2]);
        let mut counts = [0u32; 3];
        let mut theta = 0;
        let mut rng = seeded_rng(11);
        for _ in 0..30_000 {
            let kc = sample_kernel_config_with_rng(&d, &mut rng).unwrap();
            if kc.kernel.loop_count() == 0 {
                theta += 1;
                let e = kc.assignment.iter().position(|l| !l.is_empty()).unwrap();
                counts[e] += 1;
            }
        }
        for c in counts {
            let f = c as f64 / theta as f64;
            assert!((f - 1.0 / 3.0).abs() < 0.02, "{f}");
        }
        // 6 of the 15 kernel matchings have no loop
        let f = theta as f64 / 30_000.0;
        assert!((f - 0.4).abs() < 0.015, "{f}");
    }

    #[test]
    fn degree_draws_respect_support_and_mean() {
        let lambda = 2.149125799;
        let d = sample_degrees(200_000, lambda, 3).unwrap();
        assert!(d.min_degree() >= 2);
        let tp = TruncatedPoisson::new(lambda).unwrap();
        let mean = d.total() as f64 / 200_000.0;
        let sd = (3.0 * 0.4326 / 200_000.0f64).sqrt();
        assert!((mean - tp.mean()).abs() < 4.0 * sd, "{mean}");
        let f2 = d.count(2) as f64 / 200_000.0;
        assert!((f2 - tp.pmf(2)).abs() < 0.005);
    }

    #[test]
    fn degree_table_tail_fallback() {
        let t = DegreeTable::new(40.0).unwrap();
        let mut rng = seeded_rng(1);
        let xs: Vec<u32> = (0..10_000).map(|_| t.draw(&mut rng)).collect();
        let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / 1e4;
        assert!((mean - 40.0).abs() < 0.5);
    }

    #[test]
    fn rejection_sums_exactly() {
        for seed in 0..20 {
            let d = sample_degrees_conditioned(10, 11, seed, 1_000_000).unwrap();
            assert_eq!(d.total(), 22);
            assert!(d.min_degree() >= 2);
        }
        assert!(matches!(
            sample_degrees_conditioned(1000, 1600, 0, 1),
            Err(Error::RetryExhausted { .. }) | Ok(_)
        ));
        assert!(sample_degrees_conditioned(10, 10, 0, 10).is_err());
    }

    #[test]
    fn split_sampler_sums_exactly() {
        let s = ConditionedSampler::new(10_000, 15_000).unwrap();
        let mut rng = seeded_rng(4);
        for _ in 0..20 {
            let d = s.sample(&mut rng);
            assert_eq!(d.total(), 30_000);
            assert_eq!(d.len(), 10_000);
        }
        let s = ConditionedSampler::new(5, 5).unwrap();
        assert_eq!(s.sample(&mut rng).degrees(), &[2; 5]);
    }

    /// Exact law of conditioned degrees: `P(d) ∝ ∏ λ^{d_i} / d_i!`, and
    /// with a fixed sum the `λ` factor drops out.
    fn exact_conditioned_law(n: usize, total: u32) -> Vec<(Vec<u32>, f64)> {
        fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<(Vec<u32>, f64)>) {
            if prefix.len() == n - 1 {
                if left >= 2 {
                    prefix.push(left);
                    let w = prefix.iter().map(|&x| -ln_factorial(x as u64)).sum::<f64>().exp();
                    out.push((prefix.clone(), w));
                    prefix.pop();
                }
                return;
            }
            for x in 2..=left {
                prefix.push(x);
                rec(prefix, n, left - x, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, total, &mut out);
        let z: f64 = out.iter().map(|x| x.1).sum();
        out.iter_mut().for_each(|x| x.1 /= z);
        out
    }

    fn chi_square(observed: &HashMap<Vec<u32>, u64>, law: &[(Vec<u32>, f64)], samples: u64) -> (f64, usize) {
        let mut stat = 0.0;
        for (k, p) in law {
            let e = p * samples as f64;
            let o = *observed.get(k).unwrap_or(&0) as f64;
            stat += (o - e).powi(2) / e;
        }
        assert_eq!(observed.keys().filter(|k| !law.iter().any(|(l, _)| l == *k)).count(), 0);
        (stat, law.len() - 1)
    }

    #[test]
    fn conditioned_samplers_match_exact_law() {
        let (n, m) = (5u64, 8u64);
        let law = exact_conditioned_law(n as usize, 2 * m as u32);
        let samples = 60_000u64;
        let split = ConditionedSampler::new(n, m).unwrap();
        let mut rng = seeded_rng(21);
        let mut obs_split = HashMap::new();
        let mut obs_rej = HashMap::new();
        for _ in 0..samples {
            *obs_split.entry(split.sample(&mut rng).degrees().to_vec()).or_insert(0) += 1;
            let (d, _) = sample_degrees_conditioned_with_rng(n, m, &mut rng, 1_000_000).unwrap();
            *obs_rej.entry(d.degrees().to_vec()).or_insert(0) += 1;
        }
        // 99.9% quantile of χ² with k dof is below k + 4.5 sqrt(2k) + 10
        for obs in [obs_split, obs_rej] {
            let (stat, dof) = chi_square(&obs, &law, samples);
            let bound = dof as f64 + 4.5 * (2.0 * dof as f64).sqrt() + 10.0;
            assert!(stat < bound, "χ² {stat} with {dof} dof");
        }
    }

    #[test]
    fn split_sampler_marginals_at_scale() {
        let (n, m) = (10_000u64, 15_000u64);
        let p = derive_params(n, m).unwrap();
        let s = ConditionedSampler::new(n, m).unwrap();
        let mut rng = seeded_rng(8);
        let mut d2 = 0.0;
        for _ in 0..50 {
            d2 += s.sample(&mut rng).count(2) as f64;
        }
        let f2 = d2 / 50.0 / n as f64;
        assert!((f2 - p.p_c).abs() < 0.005, "{f2} vs {}", p.p_c);
    }

    #[test]
    fn expected_counts_small_excess() {
        let n = 1_000_000u64;
        let mut r = (n as f64).powf(0.6).round() as u64;
        r += r % 2;
        let p = derive_params(n, n + r / 2).unwrap();
        let e = expected_counts(&p).unwrap();
        let r = r as f64;
        assert!((e.degree2 - (n as f64 - r)).abs() <= 0.05 * r);
        assert!((e.degree3 - r).abs() <= 0.05 * r);
        assert!((e.binom2 - (n as f64 + 2.0 * r)).abs() <= 0.05 * r);
    }

    #[test]
    fn typicality_all_twos_fails_regime_b() {
        let p = derive_params(1000, 1500).unwrap();
        let d = ds(&[2; 1000]);
        let rep = classify_typical(&d, &p, TypicalRegime::B, 0.1).unwrap();
        assert!(!rep.member);
        assert!(rep.violations.contains(&"eta".to_string()));
    }

    #[test]
    fn typicality_member_iff_no_violations() {
        let p = derive_params(10_000, 15_000).unwrap();
        let s = ConditionedSampler::new(10_000, 15_000).unwrap();
        let mut rng = seeded_rng(2);
        for _ in 0..5 {
            let d = s.sample(&mut rng);
            for regime in [TypicalRegime::A, TypicalRegime::B] {
                let rep = classify_typical(&d, &p, regime, 0.1).unwrap();
                assert_eq!(rep.member, rep.violations.is_empty());
            }
            assert!(classify_typical(&d, &p, TypicalRegime::B, 0.1).unwrap().member);
        }
        assert!(classify_typical(&ds(&[3; 4]), &derive_params(4, 6).unwrap(), TypicalRegime::B, 0.3).is_err());
    }

    #[test]
    fn acceptance_counter_sequential_matches_parallel() {
        let a = measure_acceptance(300, 450, 2000, 9, Execution::Sequential).unwrap();
        let b = measure_acceptance(300, 450, 2000, 9, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.accepted > 0);
    }
}
