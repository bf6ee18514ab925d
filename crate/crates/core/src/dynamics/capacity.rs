//! ε-box capacity of orbit strings.
//!
//! `Cap_ε Γᵏ` is approximated by the number of distinct ε-boxes of `X^k` hit
//! by sampled strings `(x, φx, …, φ^{k−1}x)`. Occupied-box counting
//! undercounts the covering number by at most a dimension-dependent constant
//! factor and additionally misses boxes no sample lands in, so the estimate is
//! biased low; the log-slope in `k` absorbs the constant.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{fit_with, log_plus, EntropyEstimate};

use super::cells;
use super::maps::{Domain, MapSystem, Point};

/// Minimum number of samples along each side of an ε-box.
pub const MIN_SAMPLES_PER_BOX_SIDE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitGraphSpec {
    pub k: usize,
    pub epsilon: f64,
    /// Samples per axis; the sample set has `sample_grid²` points.
    pub sample_grid: usize,
}

impl OrbitGraphSpec {
    pub fn new(k: usize, epsilon: f64, sample_grid: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("string length k must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Input(format!(
                "box size must be positive, got {epsilon}"
            )));
        }
        if sample_grid == 0 {
            return Err(Error::Input("sample grid must be non-empty".into()));
        }
        Ok(OrbitGraphSpec {
            k,
            epsilon,
            sample_grid,
        })
    }

    /// Every `(k, ε)` combination with one sample grid.
    pub fn schedule(ks: &[usize], epsilons: &[f64], sample_grid: usize) -> Result<Vec<Self>> {
        let mut out = Vec::with_capacity(ks.len() * epsilons.len());
        for &e in epsilons {
            for &k in ks {
                out.push(OrbitGraphSpec::new(k, e, sample_grid)?);
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonSlope {
    pub epsilon: f64,
    /// `None` for exact cell enumeration.
    pub sample_grid: Option<usize>,
    pub slope: f64,
    pub residual: f64,
    pub fit_window: (usize, usize),
    /// `(k, occupied box count)`.
    pub counts: Vec<(usize, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityEstimate {
    /// Estimate at the smallest ε.
    pub estimate: EntropyEstimate,
    /// One entry per ε, largest first.
    pub per_epsilon: Vec<EpsilonSlope>,
}

impl CapacityEstimate {
    pub fn value(&self) -> f64 {
        self.estimate.value
    }
}

/// Sample points: a per-axis grid whose rows and columns are shifted by
/// Kronecker offsets, so that thin strips aligned with either axis are still
/// hit in proportion to their area.
pub(crate) fn sample_point(domain: &Domain, n: usize, i: usize, j: usize) -> Point {
    const G1: f64 = 0.618_033_988_749_894_9;
    const G2: f64 = 0.414_213_562_373_095_1;
    let fx = ((j as f64 + 0.5) * G1).fract();
    let fy = ((i as f64 + 0.5) * G2).fract();
    [
        domain.lo[0] + (i as f64 + fx) / n as f64 * domain.extent(0),
        domain.lo[1] + (j as f64 + fy) / n as f64 * domain.extent(1),
    ]
}

struct Quantizer {
    lo: Point,
    inv_eps: f64,
    cells: [u64; 2],
    bits: u32,
}

impl Quantizer {
    fn new(domain: &Domain, epsilon: f64) -> Self {
        let cells = [0, 1].map(|a| ((domain.extent(a) / epsilon).ceil() as u64).max(1));
        let max_index = cells[0].max(cells[1]) - 1;
        let bits = (u64::BITS - max_index.leading_zeros()).max(1);
        Quantizer {
            lo: domain.lo,
            inv_eps: 1.0 / epsilon,
            cells,
            bits,
        }
    }

    fn index(&self, p: Point) -> [u64; 2] {
        [0, 1].map(|a| {
            let q = ((p[a] - self.lo[a]) * self.inv_eps).floor();
            (q.max(0.0) as u64).min(self.cells[a] - 1)
        })
    }
}

/// Occupied-box counts for every `k` in `ks` (sorted, deduplicated) from one
/// pass: each sample's longest string is packed into a `u128`, the keys are
/// sorted, and the count at `k` is the number of distinct `k`-prefixes among
/// samples whose orbit stays in the phase space for `k − 1` steps.
fn box_counts(map: &MapSystem, ks: &[usize], epsilon: f64, n: usize) -> Result<Vec<(usize, u64)>> {
    let k_max = *ks.last().expect("non-empty k list");
    let domain = map.domain();
    let quant = Quantizer::new(&domain, epsilon);
    let len_bits = u64::BITS - (k_max as u64).leading_zeros();
    let step_bits = 2 * quant.bits;
    let total_bits = k_max as u32 * step_bits + len_bits;
    if total_bits > u128::BITS {
        return Err(Error::Config(format!(
            "k = {k_max} strings at ε = {epsilon} need {total_bits} key bits (limit 128)"
        )));
    }
    let mut keys: Vec<u128> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let mut p = Some(sample_point(&domain, n, idx / n, idx % n));
            let mut key = 0u128;
            let mut len = 0u128;
            for _ in 0..k_max {
                key <<= step_bits;
                if let Some(q) = p {
                    let [a, b] = quant.index(q);
                    key |= ((a as u128) << quant.bits) | b as u128;
                    len += 1;
                    p = map.step(q);
                }
            }
            (key << len_bits) | len
        })
        .collect();
    keys.par_sort_unstable();
    let len_mask = (1u128 << len_bits) - 1;
    let mut counts = vec![0u64; ks.len()];
    let mut last: Vec<Option<u128>> = vec![None; ks.len()];
    for &entry in &keys {
        let len = (entry & len_mask) as usize;
        let key = entry >> len_bits;
        for (slot, &k) in ks.iter().enumerate() {
            if len < k {
                break;
            }
            let prefix = key >> ((k_max - k) as u32 * step_bits);
            if last[slot] != Some(prefix) {
                last[slot] = Some(prefix);
                counts[slot] += 1;
            }
        }
    }
    Ok(ks.iter().copied().zip(counts).collect())
}

/// Occupied-box count of sampled `k`-strings for a single spec.
pub fn orbit_box_count(map: &MapSystem, spec: &OrbitGraphSpec) -> Result<u64> {
    check_resolution(map, spec)?;
    Ok(box_counts(map, &[spec.k], spec.epsilon, spec.sample_grid)?[0].1)
}

fn check_resolution(map: &MapSystem, spec: &OrbitGraphSpec) -> Result<()> {
    let domain = map.domain();
    for axis in 0..2 {
        let per_side = spec.sample_grid as f64 * spec.epsilon / domain.extent(axis);
        if per_side < MIN_SAMPLES_PER_BOX_SIDE {
            return Err(Error::Config(format!(
                "sample grid {} gives {per_side:.2} samples per side of an ε = {} box \
                 (need ≥ {MIN_SAMPLES_PER_BOX_SIDE}); refine the grid",
                spec.sample_grid, spec.epsilon
            )));
        }
    }
    Ok(())
}

/// Capacity entropy: for each ε the slope of `log⁺(box count)` against `k`
/// over the upper half of that ε's `k` range; the estimate is the slope at the
/// smallest ε, clamped at zero.
pub fn capacity_entropy(map: &MapSystem, schedule: &[OrbitGraphSpec]) -> Result<CapacityEstimate> {
    map.validate()?;
    // ε keyed by its bit pattern (all positive, so the order matches), then grid
    let mut groups: BTreeMap<(u64, usize), Vec<usize>> = BTreeMap::new();
    for spec in schedule {
        OrbitGraphSpec::new(spec.k, spec.epsilon, spec.sample_grid)?;
        check_resolution(map, spec)?;
        groups
            .entry((spec.epsilon.to_bits(), spec.sample_grid))
            .or_default()
            .push(spec.k);
    }
    let distinct_eps: std::collections::BTreeSet<u64> = groups.keys().map(|g| g.0).collect();
    if distinct_eps.len() < 2 {
        return Err(Error::Input(
            "capacity schedule needs at least 2 values of ε".into(),
        ));
    }
    let mut levels = Vec::new();
    for ((eps_bits, grid), ks) in groups.into_iter().rev() {
        levels.push((f64::from_bits(eps_bits), Some(grid), ks));
    }
    assemble(levels, |epsilon, grid, ks| {
        box_counts(map, ks, epsilon, grid.unwrap_or(0))
    })
}

/// Capacity entropy from exact occupied-box counts, for piecewise-affine maps.
/// The counts are the limit of the sampled ones as the sample grid is refined.
pub fn capacity_entropy_exact(
    map: &MapSystem,
    ks: &[usize],
    epsilons: &[f64],
) -> Result<CapacityEstimate> {
    map.validate()?;
    let mut eps: Vec<f64> = Vec::with_capacity(epsilons.len());
    for &e in epsilons {
        for &k in ks {
            OrbitGraphSpec::new(k, e, 1)?;
        }
        if !eps.contains(&e) {
            eps.push(e);
        }
    }
    if eps.len() < 2 {
        return Err(Error::Input(
            "capacity schedule needs at least 2 values of ε".into(),
        ));
    }
    eps.sort_by(|a, b| b.total_cmp(a));
    let levels = eps.into_iter().map(|e| (e, None, ks.to_vec())).collect();
    assemble(levels, |epsilon, _, ks| {
        let k_max = ks.iter().copied().max().unwrap_or(0);
        let all = cells::exact_box_counts(map, k_max, epsilon)?;
        Ok(ks.iter().map(|&k| (k, all[k - 1])).collect())
    })
}

type Level = (f64, Option<usize>, Vec<usize>);

/// Per-ε slopes for levels ordered from the largest ε down.
fn assemble<F>(levels: Vec<Level>, count: F) -> Result<CapacityEstimate>
where
    F: Fn(f64, Option<usize>, &[usize]) -> Result<Vec<(usize, u64)>>,
{
    let mut per_epsilon = Vec::new();
    for (epsilon, grid, mut ks) in levels {
        ks.sort_unstable();
        ks.dedup();
        if ks.len() < 3 {
            return Err(Error::Input(format!(
                "capacity schedule needs at least 3 values of k at ε = {epsilon}"
            )));
        }
        let counts = count(epsilon, grid, &ks)?;
        let series: Vec<(usize, f64)> = counts.iter().map(|&(k, c)| (k, c as f64)).collect();
        let (slope, fit_window, residual) = fit_with(&series, log_plus);
        per_epsilon.push(EpsilonSlope {
            epsilon,
            sample_grid: grid,
            slope,
            residual,
            fit_window,
            counts,
        });
    }
    // several grids at the same ε: the finest grid wins
    let last_eps = per_epsilon.last().map(|e| e.epsilon).unwrap_or_default();
    let best = per_epsilon
        .iter()
        .filter(|e| e.epsilon == last_eps)
        .max_by_key(|e| e.sample_grid)
        .expect("schedule is non-empty");
    let value = best.slope.max(0.0);
    let estimate = EntropyEstimate {
        value,
        growth_factor: value.exp(),
        fit_window: best.fit_window,
        residual: best.residual,
        fit_slope: best.slope,
    };
    Ok(CapacityEstimate {
        estimate,
        per_epsilon,
    })
}

/// Number of length-`k` itineraries of the full two-branch horseshoe,
/// counted as words of the full 2-shift by a transfer-matrix recursion.
pub fn symbolic_horseshoe_oracle(k: u32) -> Result<u64> {
    if k > 62 {
        return Err(Error::Input(format!(
            "itinerary count 2^{k} overflows the supported range (k ≤ 62)"
        )));
    }
    // words ending in symbol 0 / symbol 1; every transition is allowed
    let mut ends = [1u64, 1u64];
    if k == 0 {
        return Ok(1);
    }
    for _ in 1..k {
        let total = ends[0] + ends[1];
        ends = [total, total];
    }
    Ok(ends[0] + ends[1])
}

/// `n_or_k,count_or_length` CSV of a raw growth series.
pub fn counts_csv<T: std::fmt::Display>(series: &[(usize, T)]) -> String {
    let mut out = String::from("n_or_k,count_or_length\n");
    for (n, v) in series {
        out.push_str(&format!("{n},{v}\n"));
    }
    out
}
