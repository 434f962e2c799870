//! Monte Carlo estimates over the pairing and kernel configuration models.
//!
//! Samples are drawn in batches (see [`crate::exec`]); per-batch integer
//! tallies and floating-point sums are merged in batch order, so every
//! result depends only on the spec, the sample count and the seed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{batch_rng, map_batches, Execution};
use crate::graphs::{is_simple, is_two_connected, is_two_edge_connected, DegreeSequence, Multigraph};
use crate::models::{
    classify_typical, sample_kernel_config_with_rng, sample_pairing_with_rng, ConditionedSampler, KernelConfig,
    TypicalRegime,
};
use crate::numeric::{derive_params, ModelParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub statistic: String,
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Estimate {
    /// Frequency estimate from `hits` successes.
    pub fn proportion(statistic: &str, hits: u64, samples: u64, seed: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Estimate {
            statistic: statistic.to_string(),
            value: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            seed,
        }
    }

    /// Mean estimate from a sum and a sum of squares.
    pub fn mean(statistic: &str, sum: f64, sum_sq: f64, samples: u64, seed: u64) -> Self {
        let n = samples as f64;
        let mean = sum / n;
        let var = if samples > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Estimate { statistic: statistic.to_string(), value: mean, std_error: (var / n).sqrt(), samples, seed }
    }

    /// `|value - target| / target`.
    pub fn relative_error(&self, target: f64) -> f64 {
        (self.value - target).abs() / target.abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Pairing,
    KernelConfig,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pairing" => Ok(Model::Pairing),
            "kernel" | "kernel-config" | "kernel_config" => Ok(Model::KernelConfig),
            _ => Err(Error::Parse(format!("unknown model {s:?}"))),
        }
    }
}

/// Where each sample's degree sequence comes from.
#[derive(Clone, Debug)]
pub enum DegreeSource {
    Fixed(DegreeSequence),
    /// A fresh `TP(2, λ_c)^n` sequence conditioned on summing to `2m` for
    /// every sample.
    Conditioned { n: u64, m: u64 },
}

#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub model: Model,
    pub degrees: DegreeSource,
}

impl SampleSpec {
    pub fn new(model: Model, degrees: DegreeSource) -> Self {
        SampleSpec { model, degrees }
    }

    pub fn kernel_conditioned(n: u64, m: u64) -> Self {
        SampleSpec { model: Model::KernelConfig, degrees: DegreeSource::Conditioned { n, m } }
    }

    pub fn params(&self) -> Option<ModelParams> {
        match self.degrees {
            DegreeSource::Conditioned { n, m } => derive_params(n, m).ok(),
            DegreeSource::Fixed(_) => None,
        }
    }
}

/// Draws the degree sequences of a spec.
enum DegreeDraw<'a> {
    Fixed(&'a DegreeSequence),
    Conditioned(ConditionedSampler),
}

impl DegreeDraw<'_> {
    fn new(src: &DegreeSource) -> Result<DegreeDraw<'_>> {
        Ok(match src {
            DegreeSource::Fixed(d) => DegreeDraw::Fixed(d),
            DegreeSource::Conditioned { n, m } => {
                derive_params(*n, *m)?;
                DegreeDraw::Conditioned(ConditionedSampler::new(*n, *m)?)
            }
        })
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> DegreeSequence {
        match self {
            DegreeDraw::Fixed(d) => (*d).clone(),
            DegreeDraw::Conditioned(s) => s.sample(rng),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Event {
    /// The sampled graph (pairing) or pre-kernel (kernel model) is simple.
    #[serde(rename = "simple")]
    Simple,
    /// Simple and 2-connected.
    #[serde(rename = "two_connected_and_simple")]
    TwoConnectedAndSimple,
    /// The kernel model's pre-kernel is 2-connected and simple.
    #[serde(rename = "2cs")]
    TwoCs,
    /// Simple and 2-edge-connected.
    #[serde(rename = "two_edge_connected_pre_kernel")]
    TwoEdgeConnectedPreKernel,
    /// The kernel is 2-connected but not 2-edge-connected, or the reverse.
    #[serde(rename = "prop5_discrepancy")]
    KernelDiscrepancy,
}

impl Event {
    pub const ALL: [Event; 5] = [
        Event::Simple,
        Event::TwoConnectedAndSimple,
        Event::TwoCs,
        Event::TwoEdgeConnectedPreKernel,
        Event::KernelDiscrepancy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Event::Simple => "simple",
            Event::TwoConnectedAndSimple => "two_connected_and_simple",
            Event::TwoCs => "2cs",
            Event::TwoEdgeConnectedPreKernel => "two_edge_connected_pre_kernel",
            Event::KernelDiscrepancy => "prop5_discrepancy",
        }
    }

    fn needs_kernel_model(&self) -> bool {
        matches!(self, Event::TwoCs | Event::KernelDiscrepancy)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        Event::ALL
            .into_iter()
            .find(|e| e.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown event {s:?}")))
    }
}

enum Outcome {
    Graph(Multigraph),
    Kernel(KernelConfig),
}

impl Outcome {
    fn holds(&self, event: Event) -> bool {
        match self {
            Outcome::Graph(g) => event_holds(g, None, event),
            Outcome::Kernel(kc) => event_holds(&kc.pre_kernel, Some(kc), event),
        }
    }
}

fn event_holds(g: &Multigraph, kc: Option<&KernelConfig>, event: Event) -> bool {
    match event {
        Event::Simple => is_simple(g),
        Event::TwoConnectedAndSimple | Event::TwoCs => is_simple(g) && is_two_connected(g),
        Event::TwoEdgeConnectedPreKernel => is_simple(g) && is_two_edge_connected(g),
        Event::KernelDiscrepancy => {
            kc.is_some_and(|kc| is_two_connected(&kc.kernel) != is_two_edge_connected(&kc.kernel))
        }
    }
}

fn draw_outcome<R: Rng + ?Sized>(model: Model, d: &DegreeSequence, rng: &mut R) -> Result<Outcome> {
    Ok(match model {
        Model::Pairing => Outcome::Graph(sample_pairing_with_rng(d, rng)?),
        Model::KernelConfig => Outcome::Kernel(sample_kernel_config_with_rng(d, rng)?),
    })
}

fn check_spec(spec: &SampleSpec, events: &[Event]) -> Result<()> {
    if spec.model == Model::Pairing {
        if let Some(e) = events.iter().find(|e| e.needs_kernel_model()) {
            return Err(Error::domain(format!("event {e} needs the kernel configuration model")));
        }
    }
    if let DegreeSource::Fixed(d) = &spec.degrees {
        if !d.has_even_sum() {
            return Err(Error::domain("degree sum is odd"));
        }
        if spec.model == Model::KernelConfig && (d.min_degree() < 2 || d.kernel_total() == 0) {
            return Err(Error::domain(
                "kernel configuration needs every degree at least 2 and some degree at least 3",
            ));
        }
    }
    Ok(())
}

/// Frequency of `event` over `samples` draws.
pub fn estimate_event(spec: &SampleSpec, event: Event, samples: u64, seed: u64, exec: Execution) -> Result<Estimate> {
    Ok(estimate_events(spec, &[event], samples, seed, exec)?.remove(0))
}

/// Frequencies of several events evaluated on the same draws.
pub fn estimate_events(
    spec: &SampleSpec,
    events: &[Event],
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Estimate>> {
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    check_spec(spec, events)?;
    let draw = DegreeDraw::new(&spec.degrees)?;
    let per_batch = map_batches(exec, samples, |b, len| -> Result<Vec<u64>> {
        let mut rng = batch_rng(seed, b);
        let mut hits = vec![0u64; events.len()];
        for _ in 0..len {
            let d = draw.draw(&mut rng);
            let outcome = draw_outcome(spec.model, &d, &mut rng)?;
            for (h, &e) in hits.iter_mut().zip(events) {
                *h += outcome.holds(e) as u64;
            }
        }
        Ok(hits)
    });
    let mut hits = vec![0u64; events.len()];
    for batch in per_batch {
        for (h, x) in hits.iter_mut().zip(batch?) {
            *h += x;
        }
    }
    Ok(events
        .iter()
        .zip(hits)
        .map(|(e, h)| Estimate::proportion(e.name(), h, samples, seed))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum XyzMode {
    /// `X` counts every kernel loop; `Z` is always 0.
    #[serde(rename = "section5")]
    TwoConnected,
    /// `X` counts loops at degree-3 vertices and `Z` loops at vertices of
    /// degree at least 4 carrying at most one degree-2 vertex.
    #[serde(rename = "section8")]
    TwoEdgeConnected,
}

impl FromStr for XyzMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "section5" => Ok(XyzMode::TwoConnected),
            "section8" => Ok(XyzMode::TwoEdgeConnected),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XyzStats {
    pub x: u64,
    pub y: u64,
    pub z: u64,
    pub mode: XyzMode,
}

/// Loop and double-edge counts of one kernel configuration.
///
/// `y` counts unordered pairs of parallel non-loop kernel edges that both
/// carry no degree-2 vertex.
pub fn xyz_of(kc: &KernelConfig, mode: XyzMode) -> XyzStats {
    let deg = kc.kernel.degrees();
    let (mut x, mut z) = (0u64, 0u64);
    let mut bare: Vec<(usize, usize)> = Vec::new();
    for (&(a, b), list) in kc.kernel.edges().iter().zip(&kc.assignment) {
        if a == b {
            match mode {
                XyzMode::TwoConnected => x += 1,
                XyzMode::TwoEdgeConnected if deg[a] == 3 => x += 1,
                XyzMode::TwoEdgeConnected if list.len() <= 1 => z += 1,
                XyzMode::TwoEdgeConnected => {}
            }
        } else if list.is_empty() {
            bare.push((a, b));
        }
    }
    bare.sort_unstable();
    let mut y = 0u64;
    for run in bare.chunk_by(|p, q| p == q) {
        let k = run.len() as u64;
        y += k * (k - 1) / 2;
    }
    XyzStats { x, y, z, mode }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XyzReport {
    pub mode: XyzMode,
    pub per_sample: Vec<XyzStats>,
    /// Means of `x`, `y`, `z`, `x_plus_y`, `x_plus_y_falling2`
    /// (`(X+Y)(X+Y-1)`) and `x_plus_y_plus_z`.
    pub summary: BTreeMap<String, Estimate>,
}

/// Runs `f` on `samples` kernel configurations and returns its values in
/// sample order.
fn kernel_records<T, F>(spec: &SampleSpec, what: &str, samples: u64, seed: u64, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&DegreeSequence, &KernelConfig) -> T + Sync + Send,
{
    if spec.model != Model::KernelConfig {
        return Err(Error::domain(format!("{what} need the kernel configuration model")));
    }
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    check_spec(spec, &[])?;
    let draw = DegreeDraw::new(&spec.degrees)?;
    let per_batch = map_batches(exec, samples, |b, len| -> Result<Vec<T>> {
        let mut rng = batch_rng(seed, b);
        (0..len)
            .map(|_| {
                let d = draw.draw(&mut rng);
                Ok(f(&d, &sample_kernel_config_with_rng(&d, &mut rng)?))
            })
            .collect()
    });
    let mut out = Vec::with_capacity(samples as usize);
    for batch in per_batch {
        out.extend(batch?);
    }
    Ok(out)
}

fn xyz_summary(per_sample: &[XyzStats], seed: u64) -> BTreeMap<String, Estimate> {
    let samples = per_sample.len() as u64;
    let stat = |name: &str, f: &dyn Fn(&XyzStats) -> u64| {
        let (s, s2) = per_sample.iter().fold((0u128, 0u128), |(s, s2), v| {
            let x = f(v) as u128;
            (s + x, s2 + x * x)
        });
        (name.to_string(), Estimate::mean(name, s as f64, s2 as f64, samples, seed))
    };
    [
        stat("x", &|v| v.x),
        stat("y", &|v| v.y),
        stat("z", &|v| v.z),
        stat("x_plus_y", &|v| v.x + v.y),
        stat("x_plus_y_falling2", &|v| {
            let w = v.x + v.y;
            w * w.saturating_sub(1)
        }),
        stat("x_plus_y_plus_z", &|v| v.x + v.y + v.z),
    ]
    .into_iter()
    .collect()
}

/// Per-sample `X`, `Y`, `Z` and their summary moments.
pub fn collect_xyz(spec: &SampleSpec, samples: u64, seed: u64, mode: XyzMode, exec: Execution) -> Result<XyzReport> {
    let per_sample = kernel_records(spec, "X, Y, Z statistics", samples, seed, exec, |_, kc| xyz_of(kc, mode))?;
    let summary = xyz_summary(&per_sample, seed);
    Ok(XyzReport { mode, per_sample, summary })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelShape {
    /// Mean number of kernel edges `m'`.
    pub m_prime: Estimate,
    /// Mean of `D_3 / m'`.
    pub degree3_ratio: Estimate,
    /// Mean fraction of kernel edges carrying no degree-2 vertex.
    pub empty_edge_rate: Estimate,
    /// `3r/2`, when the spec has `(n, m)`.
    pub target_m_prime: Option<f64>,
    /// `λ_c / c`, when the spec has `(n, m)`.
    pub target_empty_rate: Option<f64>,
}

fn shape_row(d: &DegreeSequence, kc: &KernelConfig) -> [f64; 3] {
    let mk = kc.kernel.edge_count() as f64;
    let empty = kc.subdivisions().filter(|&s| s == 0).count() as f64;
    [mk, d.count(3) as f64 / mk, empty / mk]
}

fn shape_summary(rows: &[[f64; 3]], spec: &SampleSpec, seed: u64) -> KernelShape {
    let samples = rows.len() as u64;
    let mut acc = [0.0; 6];
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            acc[2 * i] += v;
            acc[2 * i + 1] += v * v;
        }
    }
    let p = spec.params();
    KernelShape {
        m_prime: Estimate::mean("m_prime", acc[0], acc[1], samples, seed),
        degree3_ratio: Estimate::mean("degree3_ratio", acc[2], acc[3], samples, seed),
        empty_edge_rate: Estimate::mean("empty_edge_rate", acc[4], acc[5], samples, seed),
        target_m_prime: p.map(|p| 1.5 * p.r as f64),
        target_empty_rate: p.map(|p| p.kernel_edge_fraction()),
    }
}

/// Kernel size and subdivision statistics under the kernel model.
pub fn kernel_shape_stats(spec: &SampleSpec, samples: u64, seed: u64, exec: Execution) -> Result<KernelShape> {
    let rows = kernel_records(spec, "kernel shape statistics", samples, seed, exec, shape_row)?;
    Ok(shape_summary(&rows, spec, seed))
}

/// Event frequencies, both `X, Y, Z` summaries and the shape statistics,
/// all from the same draws. Each part equals what the dedicated function
/// returns for the same spec, sample count and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSurvey {
    pub events: Vec<Estimate>,
    pub two_connected_xyz: BTreeMap<String, Estimate>,
    pub two_edge_xyz: BTreeMap<String, Estimate>,
    pub shape: KernelShape,
}

pub fn survey_kernels(
    spec: &SampleSpec,
    events: &[Event],
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<KernelSurvey> {
    check_spec(spec, events)?;
    let rows = kernel_records(spec, "kernel surveys", samples, seed, exec, |d, kc| {
        let hits: Vec<bool> = events.iter().map(|&e| event_holds(&kc.pre_kernel, Some(kc), e)).collect();
        (hits, xyz_of(kc, XyzMode::TwoConnected), xyz_of(kc, XyzMode::TwoEdgeConnected), shape_row(d, kc))
    })?;
    let events = events
        .iter()
        .enumerate()
        .map(|(i, e)| Estimate::proportion(e.name(), rows.iter().filter(|r| r.0[i]).count() as u64, samples, seed))
        .collect();
    let x5: Vec<XyzStats> = rows.iter().map(|r| r.1).collect();
    let x8: Vec<XyzStats> = rows.iter().map(|r| r.2).collect();
    let shape: Vec<[f64; 3]> = rows.iter().map(|r| r.3).collect();
    Ok(KernelSurvey {
        events,
        two_connected_xyz: xyz_summary(&x5, seed),
        two_edge_xyz: xyz_summary(&x8, seed),
        shape: shape_summary(&shape, spec, seed),
    })
}

/// Sum over distinct ordered `q`-tuples of kernel vertices of
/// `∏ C(d_i, 2)`, divided by `(2M)^q`, where `M` is the number of kernel
/// edges. Evaluated from power sums.
pub fn lemma9_sum(d: &DegreeSequence, q: u32) -> Result<f64> {
    if !(1..=3).contains(&q) {
        return Err(Error::limit(format!("q must be 1, 2 or 3, got {q}")));
    }
    if d.is_empty() || d.min_degree() < 2 || d.kernel_total() == 0 {
        return Err(Error::domain("need every degree at least 2 and some degree at least 3"));
    }
    let (mut p1, mut p2, mut p3) = (0i128, 0i128, 0i128);
    for &k in d.degrees().iter().filter(|&&k| k >= 3) {
        let a = (k as i128) * (k as i128 - 1) / 2;
        p1 += a;
        p2 += a * a;
        p3 += a * a * a;
    }
    let tuples = match q {
        1 => p1,
        2 => p1 * p1 - p2,
        _ => p1 * p1 * p1 - 3 * p1 * p2 + 2 * p3,
    };
    let two_m = d.kernel_total() as f64;
    Ok(tuples as f64 / two_m.powi(q as i32))
}

/// Fraction of conditioned degree sequences in the typical set.
pub fn typical_frequency(
    n: u64,
    m: u64,
    regime: TypicalRegime,
    epsilon: f64,
    samples: u64,
    seed: u64,
    exec: Execution,
) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let p = derive_params(n, m)?;
    let sampler = ConditionedSampler::new(n, m)?;
    let per_batch = map_batches(exec, samples, |b, len| -> Result<u64> {
        let mut rng = batch_rng(seed, b);
        let mut hits = 0;
        for _ in 0..len {
            let d = sampler.sample(&mut rng);
            hits += classify_typical(&d, &p, regime, epsilon)?.member as u64;
        }
        Ok(hits)
    });
    let mut hits = 0;
    for h in per_batch {
        hits += h?;
    }
    Ok(Estimate::proportion("typical", hits, samples, seed))
}
