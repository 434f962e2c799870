//! Exact counts by exhaustive enumeration at tiny sizes.
//!
//! Graphs are handled as per-vertex adjacency bitmasks and tested with
//! definitional predicates (deleting each vertex or edge and re-checking
//! connectivity), independently of the low-link code in
//! [`crate::graphs`].

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::graphs::{is_simple, is_two_connected, DegreeSequence, Multigraph};
use crate::models::KernelConfig;

/// Largest `n` for [`exact_count`] without the override.
pub const MAX_VERTICES: u64 = 8;
/// Largest `n` with the override.
pub const MAX_VERTICES_OVERRIDE: u64 = 9;
/// Largest degree sum for pairing enumeration.
pub const MAX_POINTS: u64 = 18;
/// Largest degree-at-least-3 sum for kernel configuration enumeration.
pub const MAX_KERNEL_POINTS: u64 = 12;
/// Largest number of degree-2 vertices for kernel configuration enumeration.
pub const MAX_SUBDIVISIONS: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    TwoConnected,
    TwoEdgeConnected,
    MinDegree2,
    Connected,
    All,
}

impl Predicate {
    pub const ALL: [Predicate; 5] = [
        Predicate::TwoConnected,
        Predicate::TwoEdgeConnected,
        Predicate::MinDegree2,
        Predicate::Connected,
        Predicate::All,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Predicate::TwoConnected => "two-connected",
            Predicate::TwoEdgeConnected => "two-edge-connected",
            Predicate::MinDegree2 => "min-degree-2",
            Predicate::Connected => "connected",
            Predicate::All => "all",
        }
    }

    /// Evaluates the predicate on a simple graph given by adjacency masks.
    fn holds(&self, adj: &[u32]) -> bool {
        let n = adj.len();
        let everyone = full(n);
        match self {
            Predicate::All => true,
            Predicate::Connected => connected(adj, everyone),
            Predicate::MinDegree2 => adj.iter().all(|a| a.count_ones() >= 2),
            Predicate::TwoConnected => {
                n >= 3
                    && connected(adj, everyone)
                    && (0..n).all(|v| connected(adj, everyone & !(1 << v)))
            }
            Predicate::TwoEdgeConnected => {
                if n <= 1 {
                    return n == 1;
                }
                if !connected(adj, everyone) {
                    return false;
                }
                let mut work = adj.to_vec();
                for u in 0..n {
                    let mut higher = adj[u] & !((2u32 << u) - 1);
                    while higher != 0 {
                        let v = higher.trailing_zeros() as usize;
                        higher &= higher - 1;
                        work[u] &= !(1 << v);
                        work[v] &= !(1 << u);
                        let ok = connected(&work, everyone);
                        work[u] |= 1 << v;
                        work[v] |= 1 << u;
                        if !ok {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown predicate {s:?}")))
    }
}

fn full(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Whether the vertices in `alive` induce a connected graph (vacuously
/// true when `alive` is empty).
fn connected(adj: &[u32], alive: u32) -> bool {
    if alive == 0 {
        return true;
    }
    let mut seen = 1u32 << alive.trailing_zeros();
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adj[v] & alive & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == alive
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn double_factorial_odd(m: u64) -> BigUint {
    // (2m - 1)!!
    (1..=m).fold(BigUint::one(), |acc, i| acc * (2 * i - 1))
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of labelled simple graphs on `n` vertices with `m` edges
/// satisfying `predicate`, by enumerating every edge subset.
pub fn exact_count(n: u64, m: u64, predicate: Predicate) -> Result<BigUint> {
    exact_count_with(n, m, predicate, false, Execution::default())
}

/// [`exact_count`] with the size override and an explicit executor.
pub fn exact_count_with(
    n: u64,
    m: u64,
    predicate: Predicate,
    allow_override: bool,
    exec: Execution,
) -> Result<BigUint> {
    let cap = if allow_override { MAX_VERTICES_OVERRIDE } else { MAX_VERTICES };
    if n > cap {
        return Err(Error::limit(format!("exact counts are limited to n <= {cap}, got n = {n}")));
    }
    if n < 3 {
        return Err(Error::domain(format!("exact counts need n >= 3, got n = {n}")));
    }
    let slots = n * (n - 1) / 2;
    if m > slots {
        return Err(Error::domain(format!("m = {m} exceeds n(n-1)/2 = {slots}")));
    }
    let pairs: Vec<(usize, usize)> =
        (0..n as usize).flat_map(|u| (u + 1..n as usize).map(move |v| (u, v))).collect();
    let to_adj = |mask: u64, adj: &mut Vec<u32>| {
        adj.iter_mut().for_each(|a| *a = 0);
        let mut rest = mask;
        while rest != 0 {
            let (u, v) = pairs[rest.trailing_zeros() as usize];
            rest &= rest - 1;
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    };
    if m == 0 {
        let adj = vec![0u32; n as usize];
        return Ok(BigUint::from(predicate.holds(&adj) as u32));
    }
    // Split by the highest chosen edge; the other m - 1 edges range over
    // the lower positions in Gosper order.
    let per_top = map_indices(exec, slots, |top| {
        if top + 1 < m {
            return 0u64;
        }
        let mut adj = vec![0u32; n as usize];
        let high = 1u64 << top;
        let k = m - 1;
        let mut hits = 0u64;
        if k == 0 {
            to_adj(high, &mut adj);
            return predicate.holds(&adj) as u64;
        }
        let mut x: u64 = (1 << k) - 1;
        while x < high {
            to_adj(x | high, &mut adj);
            hits += predicate.holds(&adj) as u64;
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
        hits
    });
    Ok(per_top.into_iter().fold(BigUint::zero(), |acc, h| acc + h))
}

/// Matchings of the pairing model for `d` whose projection is simple and
/// satisfies `predicate`, and the total number of matchings.
pub fn favorable_matchings(d: &DegreeSequence, predicate: Predicate) -> Result<(BigUint, BigUint)> {
    if !d.has_even_sum() {
        return Err(Error::domain("degree sum is odd"));
    }
    if d.total() > MAX_POINTS {
        return Err(Error::limit(format!(
            "pairing enumeration is limited to degree sum <= {MAX_POINTS}, got {}",
            d.total()
        )));
    }
    if d.len() > 32 {
        return Err(Error::limit("pairing enumeration supports at most 32 vertices"));
    }
    let owner: Vec<usize> = d
        .degrees()
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize))
        .collect();
    let total = double_factorial_odd(d.m());
    if owner.is_empty() {
        let adj = vec![0u32; d.len()];
        return Ok((BigUint::from(predicate.holds(&adj) as u32), total));
    }
    let n = d.len();
    let points = owner.len();
    // The first point is paired with each other point in turn; those
    // branches run independently.
    let hits: u64 = map_indices(Execution::default(), points as u64 - 1, |i| {
        let q = i as usize + 1;
        let mut adj = vec![0u32; n];
        let (u, v) = (owner[0], owner[q]);
        if u == v {
            return 0;
        }
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        let used = 1u32 | (1 << q);
        count_simple(&owner, used, &mut adj, predicate)
    })
    .into_iter()
    .sum();
    Ok((BigUint::from(hits), total))
}

/// Completes the matching from the smallest free point, abandoning any
/// branch that creates a loop or a repeated edge.
fn count_simple(owner: &[usize], used: u32, adj: &mut [u32], predicate: Predicate) -> u64 {
    let points = owner.len();
    if used == full(points) {
        return predicate.holds(adj) as u64;
    }
    let p = (!used).trailing_zeros() as usize;
    let mut hits = 0;
    for q in p + 1..points {
        if used & (1 << q) != 0 {
            continue;
        }
        let (u, v) = (owner[p], owner[q]);
        if u == v || adj[u] & (1 << v) != 0 {
            continue;
        }
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        hits += count_simple(owner, used | (1 << p) | (1 << q), adj, predicate);
        adj[u] &= !(1 << v);
        adj[v] &= !(1 << u);
    }
    hits
}

/// Number of labelled simple graphs with degree sequence `d` satisfying
/// `predicate`: favorable matchings divided by `∏ d_i!`.
pub fn exact_count_degseq(d: &DegreeSequence, predicate: Predicate) -> Result<BigUint> {
    let (fav, _) = favorable_matchings(d, predicate)?;
    let cells = d.degrees().iter().fold(BigUint::one(), |acc, &k| acc * factorial(k as u64));
    if !(&fav % &cells).is_zero() {
        return Err(Error::Internal(format!(
            "{fav} favorable matchings are not divisible by {cells}"
        )));
    }
    Ok(fav / cells)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Probability that the pairing model on `d` is simple.
pub fn exact_u(d: &DegreeSequence) -> Result<BigRational> {
    let (fav, total) = favorable_matchings(d, Predicate::All)?;
    Ok(ratio(fav, total))
}

/// Probability that the pairing model on `d` is simple and 2-connected.
pub fn exact_u_prime(d: &DegreeSequence) -> Result<BigRational> {
    let (fav, total) = favorable_matchings(d, Predicate::TwoConnected)?;
    Ok(ratio(fav, total))
}

fn check_kernel_guard(d: &DegreeSequence) -> Result<()> {
    if d.is_empty() || d.min_degree() < 2 {
        return Err(Error::domain("kernel configurations need every degree at least 2"));
    }
    if d.kernel_total() == 0 || d.kernel_total() % 2 == 1 {
        return Err(Error::domain("degrees at least 3 must exist and have an even sum"));
    }
    if d.kernel_total() > MAX_KERNEL_POINTS || d.count(2) > MAX_SUBDIVISIONS {
        return Err(Error::limit(format!(
            "kernel enumeration is limited to a degree-3+ sum <= {MAX_KERNEL_POINTS} \
             and at most {MAX_SUBDIVISIONS} degree-2 vertices"
        )));
    }
    Ok(())
}

/// Every perfect matching of `points` (as pairs of point indices).
fn all_matchings(points: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(used: u32, points: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if used == full(points) {
            out.push(cur.clone());
            return;
        }
        let p = (!used).trailing_zeros() as usize;
        for q in p + 1..points {
            if used & (1 << q) == 0 {
                cur.push((p, q));
                rec(used | (1 << p) | (1 << q), points, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, points, &mut Vec::new(), &mut out);
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Ways to write `total` as an ordered sum of `parts` non-negative terms.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn kernel_matchings(d: &DegreeSequence) -> (Vec<usize>, Vec<Vec<(usize, usize)>>) {
    let degs = d.degrees();
    let kernel_vertices: Vec<usize> = (0..degs.len()).filter(|&v| degs[v] >= 3).collect();
    let owner: Vec<usize> = kernel_vertices
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| std::iter::repeat_n(i, degs[v] as usize))
        .collect();
    let matchings = all_matchings(owner.len())
        .into_iter()
        .map(|mm| {
            mm.into_iter()
                .map(|(p, q)| (owner[p].min(owner[q]), owner[p].max(owner[q])))
                .collect()
        })
        .collect();
    (kernel_vertices, matchings)
}

fn outcomes_for(
    n: usize,
    kernel_vertices: &[usize],
    edges: &[(usize, usize)],
    perms: &[Vec<usize>],
    splits: &[Vec<usize>],
) -> Result<Vec<KernelConfig>> {
    let mut out = Vec::with_capacity(perms.len() * splits.len());
    for perm in perms {
        for split in splits {
            let mut assignment = Vec::with_capacity(edges.len());
            let mut at = 0;
            for &len in split {
                assignment.push(perm[at..at + len].to_vec());
                at += len;
            }
            let kernel = Multigraph::from_parts(kernel_vertices.to_vec(), edges.to_vec());
            out.push(KernelConfig::assemble(n, kernel, assignment)?);
        }
    }
    Ok(out)
}

fn kernel_outcomes_unchecked(d: &DegreeSequence) -> Result<Vec<KernelConfig>> {
    let (kv, matchings) = kernel_matchings(d);
    let twos: Vec<usize> = (0..d.len()).filter(|&v| d.degrees()[v] == 2).collect();
    let perms = permutations(&twos);
    let splits = compositions(twos.len(), d.m_prime() as usize);
    let mut out = Vec::new();
    for edges in &matchings {
        out.extend(outcomes_for(d.len(), &kv, edges, &perms, &splits)?);
    }
    Ok(out)
}

/// All kernel configuration outcomes for `d`, one entry per equally likely
/// (matching, assignment) pair.
pub fn kernel_outcomes(d: &DegreeSequence) -> Result<Vec<KernelConfig>> {
    check_kernel_guard(d)?;
    kernel_outcomes_unchecked(d)
}

/// Exact probability that the kernel configuration model's pre-kernel is
/// 2-connected and simple.
pub fn exact_prob_2cs(d: &DegreeSequence) -> Result<BigRational> {
    check_kernel_guard(d)?;
    let (kv, matchings) = kernel_matchings(d);
    let twos: Vec<usize> = (0..d.len()).filter(|&v| d.degrees()[v] == 2).collect();
    let perms = permutations(&twos);
    let splits = compositions(twos.len(), d.m_prime() as usize);
    let per_matching = map_indices(Execution::default(), matchings.len() as u64, |i| {
        outcomes_for(d.len(), &kv, &matchings[i as usize], &perms, &splits).map(|outs| {
            let hits = outs
                .iter()
                .filter(|kc| is_two_connected(&kc.pre_kernel) && is_simple(&kc.pre_kernel))
                .count() as u64;
            (hits, outs.len() as u64)
        })
    });
    let (mut hits, mut total) = (0u64, 0u64);
    for r in per_matching {
        let (h, t) = r?;
        hits += h;
        total += t;
    }
    // (2M - 1)!! matchings times the rising factorial [M]^{D_2}
    let m_k = d.m_prime();
    let d2 = twos.len() as u64;
    let expected = double_factorial_odd(m_k) * (m_k..m_k + d2).fold(BigUint::one(), |a, x| a * x);
    if BigUint::from(total) != expected {
        return Err(Error::Internal(format!("enumerated {total} outcomes, expected {expected}")));
    }
    Ok(ratio(BigUint::from(hits), BigUint::from(total)))
}

/// `T(d)` rebuilt from the kernel model:
/// `(2m'-1)!! (m-1)! P(2cs) / ((m'-1)! ∏_{d_i >= 3} d_i!)`.
pub fn count_from_kernel_model(d: &DegreeSequence) -> Result<BigRational> {
    let p = exact_prob_2cs(d)?;
    let (m, mk) = (d.m(), d.m_prime());
    let cells = d
        .degrees()
        .iter()
        .filter(|&&k| k >= 3)
        .fold(BigUint::one(), |acc, &k| acc * factorial(k as u64));
    let num = double_factorial_odd(mk) * factorial(m - 1);
    let den = factorial(mk - 1) * cells;
    Ok(p * ratio(num, den))
}

/// `C(n(n-1)/2, m)` exactly.
pub fn all_graphs(n: u64, m: u64) -> BigUint {
    binomial(n * (n - 1) / 2, m)
}
