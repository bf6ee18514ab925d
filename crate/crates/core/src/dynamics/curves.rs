//! Volume growth of iterated curves and of their orbit graphs.
//!
//! Curves live on lifted coordinates, so images of connected pieces stay
//! connected and torus lengths are Euclidean lengths in the plane. A segment
//! is split when the image of its midpoint strays from the chord of the
//! image by more than the tolerance. Affine pieces are therefore never split,
//! however much they stretch, while branch cuts and escape boundaries are
//! bisected down to a minimum parameter length and then cut.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{fit_with, log_plus, EntropyEstimate};

use super::maps::{Domain, MapSystem, Point};

/// Default cap on the total number of polyline vertices.
pub const DEFAULT_VERTEX_BUDGET: usize = 4_000_000;

/// Segments shorter than `tolerance · MIN_SPLIT_FACTOR` are no longer split.
const MIN_SPLIT_FACTOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub points: Vec<Point>,
    /// The last point is identified with the first modulo the periods of the
    /// phase space (the closing segment is stored explicitly).
    pub closed: bool,
    pub tolerance: f64,
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

impl Curve {
    /// Polyline with consecutive vertices at most `tolerance` apart.
    pub fn new(points: Vec<Point>, closed: bool, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Input(format!(
                "curve tolerance must be positive, got {tolerance}"
            )));
        }
        if points.len() < 2 {
            return Err(Error::Input("a curve needs at least 2 vertices".into()));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Input("curve vertices must be finite".into()));
        }
        if let Some(i) = points
            .windows(2)
            .position(|w| dist(w[0], w[1]) > tolerance * (1.0 + 1e-9))
        {
            return Err(Error::Validation(format!(
                "vertices {i} and {} are {} apart, more than the tolerance {tolerance}",
                i + 1,
                dist(points[i], points[i + 1])
            )));
        }
        Ok(Curve {
            points,
            closed,
            tolerance,
        })
    }

    /// Polyline through `points`, with extra vertices inserted on segments
    /// longer than `tolerance`.
    pub fn densified(points: &[Point], closed: bool, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Input(format!(
                "curve tolerance must be positive, got {tolerance}"
            )));
        }
        let mut out = Vec::with_capacity(points.len());
        for w in points.windows(2) {
            let pieces = ((dist(w[0], w[1]) / tolerance).ceil() as usize).max(1);
            for i in 0..pieces {
                let t = i as f64 / pieces as f64;
                out.push([
                    w[0][0] + t * (w[1][0] - w[0][0]),
                    w[0][1] + t * (w[1][1] - w[0][1]),
                ]);
            }
        }
        out.extend(points.last().copied());
        Curve::new(out, closed, tolerance)
    }

    /// Straight segment from `a` to `b`, subdivided to the tolerance.
    pub fn segment(a: Point, b: Point, tolerance: f64) -> Result<Self> {
        let pieces = ((dist(a, b) / tolerance).ceil() as usize).max(1);
        let points = (0..=pieces)
            .map(|i| {
                let t = i as f64 / pieces as f64;
                [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
            })
            .collect();
        Curve::new(points, false, tolerance)
    }

    /// Closed curve `{y = height}` going once around a periodic first axis
    /// of width `period`.
    pub fn horizontal_loop(height: f64, x0: f64, period: f64, tolerance: f64) -> Result<Self> {
        let mut c = Curve::segment([x0, height], [x0 + period, height], tolerance)?;
        c.closed = true;
        Ok(c)
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| dist(w[0], w[1])).sum()
    }

    /// Checks the vertices lie in the domain (non-periodic axes) and that a
    /// closed curve closes up modulo the periods.
    pub fn check_in(&self, domain: &Domain) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            for axis in 0..2 {
                if !domain.periodic[axis] && !(domain.lo[axis]..=domain.hi[axis]).contains(&p[axis])
                {
                    return Err(Error::Input(format!(
                        "curve vertex {i} at {p:?} lies outside the domain"
                    )));
                }
            }
        }
        if self.closed {
            let first = self.points[0];
            let last = self.points[self.points.len() - 1];
            for axis in 0..2 {
                let gap = last[axis] - first[axis];
                let ok = if domain.periodic[axis] {
                    let w = gap / domain.extent(axis);
                    (w - w.round()).abs() < 1e-9
                } else {
                    gap.abs() < 1e-12
                };
                if !ok {
                    return Err(Error::Validation(format!(
                        "closed curve does not wrap consistently along axis {axis} (gap {gap})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A connected polyline piece. Each vertex keeps its origin on the initial
/// curve next to its current image, so inserted vertices are exact orbit
/// points. `mean_sq[i]` is the mean over all levels so far of the squared
/// displacement of segment `i`.
#[derive(Debug, Clone)]
struct Piece {
    origins: Vec<Point>,
    images: Vec<Point>,
    mean_sq: Vec<f64>,
}

impl Piece {
    fn empty() -> Self {
        Piece {
            origins: Vec::new(),
            images: Vec::new(),
            mean_sq: Vec::new(),
        }
    }
}

struct PieceBuilder {
    done: Vec<Piece>,
    current: Piece,
    /// Number of levels already averaged into the incoming means.
    levels: f64,
}

impl PieceBuilder {
    fn push(&mut self, a: (Point, Point), b: (Point, Point), mean: f64) {
        if self.current.origins.is_empty() {
            self.current.origins.push(a.0);
            self.current.images.push(a.1);
        }
        let d = dist(a.1, b.1);
        self.current.origins.push(b.0);
        self.current.images.push(b.1);
        self.current
            .mean_sq
            .push(mean + (d * d - mean) / (self.levels + 1.0));
    }

    fn cut(&mut self) {
        let piece = std::mem::replace(&mut self.current, Piece::empty());
        if piece.origins.len() >= 2 {
            self.done.push(piece);
        }
    }
}

struct Stepper<'a> {
    map: &'a MapSystem,
    tol: f64,
    min_len: f64,
}

impl Stepper<'_> {
    /// `x, φx, …, φⁿx`, or `None` if the orbit leaves the phase space.
    fn history(&self, x: Point, n: usize) -> Option<Vec<Point>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(x);
        for _ in 0..n {
            out.push(self.map.lift_step(out[out.len() - 1])?);
        }
        Some(out)
    }

    fn mean_sq(&self, a: Point, b: Point, level: usize) -> Option<f64> {
        let ha = self.history(a, level)?;
        let hb = self.history(b, level)?;
        let total: f64 = ha.iter().zip(&hb).map(|(p, q)| dist(*p, *q).powi(2)).sum();
        Some(total / (level + 1) as f64)
    }

    /// Refines the segment between origins `a` and `b` at level `level + 1`;
    /// `fa`, `fb` are their images there and `mean` the mean over levels
    /// `0..=level`.
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        a: Point,
        b: Point,
        fa: Option<Point>,
        fb: Option<Point>,
        mean: f64,
        level: usize,
        out: &mut PieceBuilder,
    ) {
        if fa.is_none() && fb.is_none() {
            // the escaping region of every testbed map is convex
            out.cut();
            return;
        }
        let m = midpoint(a, b);
        let fm = self.history(m, level + 1).map(|h| h[level + 1]);
        if let (Some(pa), Some(pb), Some(pm)) = (fa, fb, fm) {
            if dist(pm, midpoint(pa, pb)) <= self.tol {
                out.push((a, pa), (b, pb), mean);
                return;
            }
        }
        if dist(a, b) < self.min_len {
            out.cut();
            return;
        }
        let halves = (self.mean_sq(a, m, level), self.mean_sq(m, b, level));
        match halves {
            (Some(left), Some(right)) => {
                self.refine(a, m, fa, fm, left, level, out);
                self.refine(m, b, fm, fb, right, level, out);
            }
            // the midpoint escaped at an earlier level
            _ => {
                self.refine(a, m, fa, None, mean / 4.0, level, out);
                self.refine(m, b, None, fb, mean / 4.0, level, out);
            }
        }
    }

    /// Maps a level-`level` piece to level `level + 1`.
    fn advance(&self, piece: &Piece, level: usize) -> Vec<Piece> {
        let mut out = PieceBuilder {
            done: Vec::new(),
            current: Piece::empty(),
            levels: (level + 1) as f64,
        };
        let next: Vec<Option<Point>> = piece
            .images
            .iter()
            .map(|&p| self.map.lift_step(p))
            .collect();
        for i in 0..piece.mean_sq.len() {
            self.refine(
                piece.origins[i],
                piece.origins[i + 1],
                next[i],
                next[i + 1],
                piece.mean_sq[i],
                level,
                &mut out,
            );
        }
        out.cut();
        out.done
    }
}

/// Length of the part of a segment inside the box spanned by the
/// non-periodic axes of `w`.
fn clipped_length(a: Point, b: Point, w: &Domain) -> f64 {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for axis in 0..2 {
        if w.periodic[axis] {
            continue;
        }
        let d = b[axis] - a[axis];
        let (lo, hi) = (w.lo[axis] - a[axis], w.hi[axis] - a[axis]);
        if d == 0.0 {
            if lo > 0.0 || hi < 0.0 {
                return 0.0;
            }
        } else {
            let (s0, s1) = if d > 0.0 {
                (lo / d, hi / d)
            } else {
                (hi / d, lo / d)
            };
            t0 = t0.max(s0);
            t1 = t1.min(s1);
        }
    }
    if t1 <= t0 {
        0.0
    } else {
        (t1 - t0) * dist(a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeGrowth {
    pub estimate: EntropyEstimate,
    /// `(n or k, length)`.
    pub lengths: Vec<(usize, f64)>,
}

/// Iterates a curve and records, per level, the curve length inside the
/// support and the normalised graph length `Σ_seg √(mean_j |Δ_j|²)`.
struct Orbit<'a> {
    stepper: Stepper<'a>,
    pieces: Vec<Piece>,
    levels: usize,
    budget: usize,
}

impl<'a> Orbit<'a> {
    fn new(map: &'a MapSystem, curve: &Curve, budget: usize) -> Result<Self> {
        map.validate()?;
        curve.check_in(&map.domain())?;
        let pts = curve.points.clone();
        let mean_sq = pts.windows(2).map(|w| dist(w[0], w[1]).powi(2)).collect();
        let piece = Piece {
            origins: pts.clone(),
            images: pts,
            mean_sq,
        };
        Ok(Orbit {
            stepper: Stepper {
                map,
                tol: curve.tolerance,
                min_len: curve.tolerance * MIN_SPLIT_FACTOR,
            },
            pieces: vec![piece],
            levels: 1,
            budget,
        })
    }

    fn curve_length(&self) -> f64 {
        let w = self.stepper.map.support();
        self.pieces
            .iter()
            .map(|p| {
                p.images
                    .windows(2)
                    .map(|s| clipped_length(s[0], s[1], &w))
                    .sum::<f64>()
            })
            .sum()
    }

    fn graph_length(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.mean_sq.iter().map(|m| m.sqrt()).sum::<f64>())
            .sum()
    }

    fn step(&mut self, partial: &[(usize, f64)]) -> Result<()> {
        let levels = self.levels;
        let stepper = &self.stepper;
        self.pieces = self
            .pieces
            .par_iter()
            .flat_map_iter(|p| stepper.advance(p, levels - 1))
            .collect();
        self.levels += 1;
        let vertices: usize = self.pieces.iter().map(|p| p.images.len()).sum();
        if vertices > self.budget {
            return Err(Error::Resource {
                message: format!(
                    "curve refinement reached {vertices} vertices at iterate {} (budget {})",
                    self.levels - 1,
                    self.budget
                ),
                partial: partial.to_vec(),
            });
        }
        Ok(())
    }
}

fn fit_lengths(lengths: &[(usize, f64)]) -> EntropyEstimate {
    let (slope, fit_window, residual) = fit_with(lengths, log_plus);
    let value = slope.max(0.0);
    EntropyEstimate {
        value,
        growth_factor: value.exp(),
        fit_window,
        residual,
        fit_slope: slope,
    }
}

fn check_horizon(n: usize, what: &str) -> Result<()> {
    if n < 4 {
        return Err(Error::Input(format!("{what} must be at least 4, got {n}")));
    }
    Ok(())
}

/// Growth rate of `Vol(φⁿ(Y) ∩ W)` for `n = 0..=n_max`, slope of the log
/// over the upper half of the range, clamped at zero.
pub fn curve_volume_growth(map: &MapSystem, curve: &Curve, n_max: usize) -> Result<VolumeGrowth> {
    curve_volume_growth_with_budget(map, curve, n_max, DEFAULT_VERTEX_BUDGET)
}

pub fn curve_volume_growth_with_budget(
    map: &MapSystem,
    curve: &Curve,
    n_max: usize,
    vertex_budget: usize,
) -> Result<VolumeGrowth> {
    check_horizon(n_max, "n_max")?;
    let mut orbit = Orbit::new(map, curve, vertex_budget)?;
    let mut lengths = vec![(0, orbit.curve_length())];
    for n in 1..=n_max {
        orbit.step(&lengths)?;
        lengths.push((n, orbit.curve_length()));
    }
    Ok(VolumeGrowth {
        estimate: fit_lengths(&lengths),
        lengths,
    })
}

/// Growth rate of the length of the orbit graph `Γᵏ = {(y, φy, …, φ^{k−1}y)}`
/// in the Euclidean product metric, `k = 1..=k_max`. Lengths are divided by
/// `√k`, the exact graph factor of an isometry, so the identity map has
/// constant normalised length; polynomial factors do not change the rate.
pub fn graph_volume_growth(map: &MapSystem, curve: &Curve, k_max: usize) -> Result<VolumeGrowth> {
    graph_volume_growth_with_budget(map, curve, k_max, DEFAULT_VERTEX_BUDGET)
}

pub fn graph_volume_growth_with_budget(
    map: &MapSystem,
    curve: &Curve,
    k_max: usize,
    vertex_budget: usize,
) -> Result<VolumeGrowth> {
    check_horizon(k_max, "k_max")?;
    let mut orbit = Orbit::new(map, curve, vertex_budget)?;
    let mut lengths = vec![(1, orbit.graph_length())];
    for k in 2..=k_max {
        orbit.step(&lengths)?;
        lengths.push((k, orbit.graph_length()));
    }
    Ok(VolumeGrowth {
        estimate: fit_lengths(&lengths),
        lengths,
    })
}

/// Lifted polyline of `φⁿ(curve)` after refinement, one vector per connected
/// piece that survives inside the phase space.
pub fn iterate_curve(map: &MapSystem, curve: &Curve, n: usize) -> Result<Vec<Vec<Point>>> {
    let mut orbit = Orbit::new(map, curve, DEFAULT_VERTEX_BUDGET)?;
    for _ in 0..n {
        orbit.step(&[])?;
    }
    Ok(orbit.pieces.into_iter().map(|p| p.images).collect())
}
