use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{Curve, Point};
use crate::error::{Error, Result};

use super::tomograph::{Region, Tomograph};

/// A sign change with `|difference|` below this is flagged as a tangency.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CroftonReport {
    pub d: usize,
    pub r: f64,
    pub n_samples: usize,
    /// Monte-Carlo estimate of `∫_{B^d_r} N(s) ds`.
    pub integral: f64,
    pub stderr: f64,
    /// Length of `L₂ ∩ W`.
    pub volume: f64,
    pub ratio: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub samples: Vec<(Vec<f64>, u32)>,
}

impl CroftonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `sample,s1,…,sd,n` with one row per parameter sample.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("sample");
        for i in 1..=self.d {
            out.push_str(&format!(",s{i}"));
        }
        out.push_str(",n\n");
        for (k, (s, n)) in self.samples.iter().enumerate() {
            out.push_str(&k.to_string());
            for x in s {
                out.push_str(&format!(",{x}"));
            }
            out.push_str(&format!(",{n}\n"));
        }
        out
    }
}

/// Sum with pairwise (cascade) splitting, so rounding does not depend on the
/// length of a running accumulator.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn ball_volume(d: usize, r: f64) -> f64 {
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 * r };
    let mut k = if d % 2 == 0 { 0 } else { 1 };
    while k < d {
        k += 2;
        v *= 2.0 * std::f64::consts::PI * r * r / k as f64;
    }
    v
}

/// Uniform sample of the ball by rejection from the bounding cube.
fn sample_ball<R: Rng>(rng: &mut R, d: usize, r: f64) -> Vec<f64> {
    loop {
        let s: Vec<f64> = (0..d).map(|_| rng.gen_range(-r..=r)).collect();
        if s.iter().map(|x| x * x).sum::<f64>() <= r * r {
            return s;
        }
    }
}

/// `L₂` prepared for repeated intersection counts against `L^s`.
struct Probe {
    /// Per dense vertex: `y − l1_height` and `(g₁′(x), …, g_d′(x))`.
    base: Vec<f64>,
    grads: Vec<Vec<f64>>,
    /// Segments whose sign may change for some `s` in the ball.
    active: Vec<usize>,
    /// Crossings shared by every `s`.
    fixed: u32,
    fixed_tangent: bool,
}

fn dense(curve: &Curve, resolution: usize) -> Vec<Point> {
    let h = 1.0 / resolution as f64;
    let mut out = Vec::new();
    for w in curve.points.windows(2) {
        let steps = (((w[1][0] - w[0][0]).abs() / h).ceil() as usize).max(1);
        for i in 0..steps {
            let t = i as f64 / steps as f64;
            out.push([
                w[0][0] + t * (w[1][0] - w[0][0]),
                w[0][1] + t * (w[1][1] - w[0][1]),
            ]);
        }
    }
    out.extend(curve.points.last().copied());
    out
}

impl Probe {
    fn new(t: &Tomograph, curve: &Curve) -> Self {
        let pts = dense(curve, t.resolution);
        let base: Vec<f64> = pts.iter().map(|p| p[1] - t.l1_height).collect();
        let grads: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| t.bumps.iter().map(|g| g.derivative(p[0])).collect())
            .collect();
        // |Σ sᵢ gᵢ′| ≤ r ‖g′‖₂ on the ball
        let reach: Vec<f64> = grads
            .iter()
            .map(|g| t.radius * g.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        let mut active = Vec::new();
        let mut fixed = 0;
        let mut fixed_tangent = false;
        for j in 0..pts.len().saturating_sub(1) {
            let frozen = base[j].abs() > reach[j] && base[j + 1].abs() > reach[j + 1];
            if frozen {
                if (base[j] > 0.0) != (base[j + 1] > 0.0) {
                    fixed += 1;
                    fixed_tangent |= base[j].abs().min(base[j + 1].abs()) < TANGENCY_TOLERANCE;
                }
            } else {
                active.push(j);
            }
        }
        Probe {
            base,
            grads,
            active,
            fixed,
            fixed_tangent,
        }
    }

    fn diff(&self, j: usize, s: &[f64]) -> f64 {
        let shift: f64 = self.grads[j].iter().zip(s).map(|(g, x)| g * x).sum();
        self.base[j] - shift
    }

    /// `(N(s), tangency seen)`.
    fn count(&self, s: &[f64]) -> (u32, bool) {
        let mut n = self.fixed;
        let mut tangent = self.fixed_tangent;
        for &j in &self.active {
            let (a, b) = (self.diff(j, s), self.diff(j + 1, s));
            if (a > 0.0) != (b > 0.0) {
                n += 1;
                tangent |= a.abs().min(b.abs()) < TANGENCY_TOLERANCE;
            }
        }
        (n, tangent)
    }
}

/// Length of the part of the polyline inside `W`: exact clipping in the fibre
/// direction, base membership decided per dense segment.
pub fn length_in_region(curve: &Curve, region: &Region, resolution: usize) -> f64 {
    let pts = dense(curve, resolution);
    let mut parts: Vec<f64> = Vec::with_capacity(pts.len());
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !region.covers_base(0.5 * (a[0] + b[0])) {
            continue;
        }
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let (lo, hi) = (a[1].min(b[1]), a[1].max(b[1]));
        let frac = if hi == lo {
            if (region.p_lo..=region.p_hi).contains(&lo) {
                1.0
            } else {
                0.0
            }
        } else {
            ((hi.min(region.p_hi) - lo.max(region.p_lo)) / (hi - lo)).max(0.0)
        };
        parts.push(len * frac);
    }
    pairwise_sum(&parts)
}

/// Monte-Carlo check of `∫_{B^d_r} #(L^s ∩ L₂) ds ≤ C · Vol(L₂ ∩ W)`.
pub fn crofton_check(
    t: &Tomograph,
    l2: &Curve,
    n_samples: usize,
    seed: u64,
) -> Result<CroftonReport> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::Input(format!(
            "crofton_check needs at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    let d = t.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<Vec<f64>> = (0..n_samples)
        .map(|_| sample_ball(&mut rng, d, t.radius))
        .collect();
    let probe = Probe::new(t, l2);
    let counts: Vec<(u32, bool)> = params.par_iter().map(|s| probe.count(s)).collect();
    let vol_ball = ball_volume(d, t.radius);
    let values: Vec<f64> = counts.iter().map(|c| c.0 as f64).collect();
    let mean = pairwise_sum(&values) / n_samples as f64;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n_samples - 1) as f64;
    let integral = vol_ball * mean;
    let stderr = vol_ball * (var / n_samples as f64).sqrt();
    let volume = length_in_region(l2, &t.region, t.resolution);
    let ratio = if integral == 0.0 {
        0.0
    } else if volume > 0.0 {
        integral / volume
    } else {
        f64::INFINITY
    };
    let tangent = counts.iter().filter(|c| c.1).count();
    let mut warnings = Vec::new();
    if tangent * 100 > n_samples {
        warnings.push(format!(
            "transversality: {tangent} of {n_samples} samples had a near-tangent crossing"
        ));
    }
    Ok(CroftonReport {
        d,
        r: t.radius,
        n_samples,
        integral,
        stderr,
        volume,
        ratio,
        warnings,
        samples: params.into_iter().zip(counts.iter().map(|c| c.0)).collect(),
    })
}

/// Exact intersection count `N(s)` of `L^s` with `L₂`.
pub fn intersection_count(t: &Tomograph, l2: &Curve, s: &[f64]) -> Result<u32> {
    if s.len() != t.dimension() {
        return Err(Error::Input("parameter dimension mismatch".into()));
    }
    Ok(Probe::new(t, l2).count(s).0)
}
