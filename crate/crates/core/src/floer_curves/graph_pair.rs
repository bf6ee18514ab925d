use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::{FilteredComplex, Generator};
use crate::rational::quantize;

use super::trig::TrigPoly;

/// Actions are rounded to this grid before becoming exact rationals.
pub const ACTION_TOLERANCE: f64 = 1e-9;
/// Relative size of `h″` (resp. `min |h′|`) below which a critical point
/// counts as degenerate.
const DEGENERACY_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_RESOLUTION: usize = 4096;

/// Graphs of `df₁` and `df₂` in the cotangent bundle of the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphPair {
    pub f1: TrigPoly,
    pub f2: TrigPoly,
    /// Number of sample points used to bracket critical points.
    pub resolution: usize,
}

impl GraphPair {
    pub fn new(f1: TrigPoly, f2: TrigPoly) -> Self {
        GraphPair {
            f1,
            f2,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    /// `h = f₂ − f₁`; its critical points are the intersection points.
    pub fn difference(&self) -> TrigPoly {
        self.f2.sub(&self.f1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    /// Position in `[0, 1)`.
    pub q: f64,
    pub value: f64,
    /// Morse index: 0 for a minimum, 1 for a maximum.
    pub index: u8,
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    for _ in 0..100 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - R * (b - a);
        d = a + R * (b - a);
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Non-degenerate critical points of `h`, sorted by position.
pub fn critical_points(h: &TrigPoly, resolution: usize) -> Result<Vec<CriticalPoint>> {
    if resolution < 8 * h.degree().max(1) {
        return Err(Error::Input(format!(
            "resolution {resolution} is too coarse for a trig polynomial of degree {}",
            h.degree()
        )));
    }
    let d1 = |q: f64| h.derivative(q, 1);
    let scale1 = h.derivative_bound(1);
    let scale2 = h.derivative_bound(2);
    if scale1 == 0.0 {
        return Err(Error::Degenerate {
            location: 0.0,
            detail: "h is constant, every point is critical".into(),
        });
    }
    // offset grid: symmetric functions often vanish exactly on dyadic points
    let theta = 0.381_966_011_250_105_1;
    let n = resolution;
    let qs: Vec<f64> = (0..=n).map(|i| (i as f64 + theta) / n as f64).collect();
    let g: Vec<f64> = qs.iter().map(|&q| d1(q)).collect();
    if g.iter().all(|v| v.abs() <= DEGENERACY_TOLERANCE * scale1) {
        return Err(Error::Degenerate {
            location: 0.0,
            detail: "h is constant at the sample resolution".into(),
        });
    }
    let sign = |v: f64| v > 0.0;
    let mut out = Vec::new();
    for i in 0..n {
        if sign(g[i]) != sign(g[i + 1]) {
            let r = bisect(d1, qs[i], qs[i + 1]);
            let curv = h.derivative(r, 2);
            let q = r.rem_euclid(1.0);
            if curv.abs() <= DEGENERACY_TOLERANCE * scale2.max(1.0) {
                return Err(Error::Degenerate {
                    location: q,
                    detail: format!("h'' = {curv:e} at a critical point"),
                });
            }
            out.push(CriticalPoint {
                q,
                value: h.value(r),
                index: if curv > 0.0 { 0 } else { 1 },
            });
        }
    }
    // tangencies: |h′| dips to zero without changing sign
    for i in 0..n {
        let prev = if i == 0 { n - 1 } else { i - 1 };
        let next = i + 1;
        let no_change = sign(g[prev]) == sign(g[i]) && sign(g[i]) == sign(g[next]);
        if no_change && g[i].abs() <= g[prev].abs() && g[i].abs() <= g[next].abs() {
            let lo = if i == 0 {
                qs[0] - 1.0 / n as f64
            } else {
                qs[prev]
            };
            let (x, m) = golden_min(|q| d1(q).abs(), lo, qs[next]);
            if m <= DEGENERACY_TOLERANCE * scale1 {
                return Err(Error::Degenerate {
                    location: x.rem_euclid(1.0),
                    detail: "h' touches zero without changing sign".into(),
                });
            }
        }
    }
    out.sort_by(|a, b| a.q.total_cmp(&b.q));
    let m = out.len();
    for i in 0..m {
        let next = &out[(i + 1) % m];
        if next.index == out[i].index {
            return Err(Error::Degenerate {
                location: next.q,
                detail: "critical points do not alternate; raise the resolution".into(),
            });
        }
    }
    Ok(out)
}

/// The circle Morse complex of `h = f₂ − f₁`: minima in degree 0, maxima in
/// degree 1, each maximum bounding its two neighbouring minima (which cancel
/// over 𝔽₂ when they coincide). Actions are `h` rounded to [`ACTION_TOLERANCE`].
pub fn graph_pair_complex(pair: &GraphPair) -> Result<FilteredComplex> {
    let points = critical_points(&pair.difference(), pair.resolution)?;
    let m = points.len();
    let mut gens = Vec::with_capacity(m);
    for (i, p) in points.iter().enumerate() {
        let prefix = if p.index == 0 { "min" } else { "max" };
        gens.push(Generator::new(
            format!("{prefix}{i}"),
            p.index,
            quantize(p.value, ACTION_TOLERANCE)?,
        ));
    }
    let mut entries = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if p.index == 1 {
            let before = (i + m - 1) % m;
            let after = (i + 1) % m;
            for &j in &[before, after] {
                if gens[j].action >= gens[i].action {
                    return Err(Error::Degenerate {
                        location: p.q,
                        detail: "critical values of a maximum and its neighbouring minimum collide"
                            .into(),
                    });
                }
            }
            if before != after {
                entries.push((i, before));
                entries.push((i, after));
            }
        }
    }
    FilteredComplex::from_indices(gens, &entries)
}
