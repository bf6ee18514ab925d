//! Exact occupied-box counts for piecewise-affine maps.
//!
//! The set of points whose `k`-string visits a given sequence of ε-boxes is
//! a finite union of convex polygons, obtained by mapping the polygons of the
//! previous level through the affine pieces and cutting them along the ε-grid.
//! A string box is counted when its polygons have positive area, which is the
//! limit of the sampled count as the sample grid is refined.

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};

use super::maps::{AffinePiece, Domain, MapSystem, Point};

type Poly = SmallVec<[Point; 12]>;

/// Polygons below `AREA_FLOOR · ε²` are treated as empty.
const AREA_FLOOR: f64 = 1e-10;

fn area(p: &Poly) -> f64 {
    let n = p.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

/// Sutherland–Hodgman clip against `sign · (x[axis] − bound) ≥ 0`.
fn clip(p: &Poly, axis: usize, bound: f64, sign: f64) -> Poly {
    let mut out = Poly::new();
    let n = p.len();
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        let da = sign * (a[axis] - bound);
        let db = sign * (b[axis] - bound);
        if da >= 0.0 {
            out.push(a);
        }
        if (da >= 0.0) != (db >= 0.0) {
            let t = da / (da - db);
            let mut q = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            q[axis] = bound;
            out.push(q);
        }
    }
    out
}

fn clip_rect(p: &Poly, lo: Point, hi: Point) -> Poly {
    let mut q = clip(p, 0, lo[0], 1.0);
    q = clip(&q, 0, hi[0], -1.0);
    q = clip(&q, 1, lo[1], 1.0);
    clip(&q, 1, hi[1], -1.0)
}

struct Grid {
    domain: Domain,
    epsilon: f64,
    cells: [i64; 2],
    floor: f64,
}

impl Grid {
    fn new(domain: Domain, epsilon: f64) -> Self {
        let cells = [0, 1].map(|a| ((domain.extent(a) / epsilon).ceil() as i64).max(1));
        Grid {
            domain,
            epsilon,
            cells,
            floor: AREA_FLOOR * epsilon * epsilon,
        }
    }

    fn index(&self, x: f64, axis: usize) -> i64 {
        ((x - self.domain.lo[axis]) / self.epsilon).floor() as i64
    }

    fn edge(&self, i: i64, axis: usize) -> f64 {
        self.domain.lo[axis] + i as f64 * self.epsilon
    }

    /// Cuts a polygon along grid lines. Pieces are returned with their box
    /// index, shifted back into the fundamental domain on periodic axes.
    fn split(&self, poly: &Poly, out: &mut Vec<((i64, i64), Poly)>) -> Result<()> {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in poly {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let i_range = [0, 1].map(|a| (self.index(lo[a], a), self.index(hi[a], a)));
        for a in 0..2 {
            if self.domain.periodic[a] && i_range[a].1 - i_range[a].0 + 1 > self.cells[a] {
                return Err(Error::Config(format!(
                    "ε = {} is too coarse for exact counting: an image wraps around the domain",
                    self.epsilon
                )));
            }
        }
        for i in i_range[0].0..=i_range[0].1 {
            let col = clip(
                &clip(poly, 0, self.edge(i, 0), 1.0),
                0,
                self.edge(i + 1, 0),
                -1.0,
            );
            if area(&col) <= self.floor {
                continue;
            }
            for j in i_range[1].0..=i_range[1].1 {
                let mut piece = clip(
                    &clip(&col, 1, self.edge(j, 1), 1.0),
                    1,
                    self.edge(j + 1, 1),
                    -1.0,
                );
                if area(&piece) <= self.floor {
                    continue;
                }
                let mut idx = [i, j];
                for a in 0..2 {
                    if self.domain.periodic[a] {
                        let wraps = idx[a].div_euclid(self.cells[a]);
                        if wraps != 0 {
                            let shift = wraps as f64 * self.domain.extent(a);
                            for p in piece.iter_mut() {
                                p[a] -= shift;
                            }
                            idx[a] -= wraps * self.cells[a];
                        }
                    } else if idx[a] < 0 || idx[a] >= self.cells[a] {
                        // slivers created by rounding at the domain edge
                        idx[a] = idx[a].clamp(0, self.cells[a] - 1);
                    }
                }
                out.push(((idx[0], idx[1]), piece));
            }
        }
        Ok(())
    }
}

struct Enumerator<'a> {
    grid: Grid,
    pieces: &'a [AffinePiece],
    k_max: usize,
}

impl Enumerator<'_> {
    /// `cell` is the image under `φ^depth` of the points with one fixed
    /// `(depth + 1)`-string, all inside a single box.
    fn descend(&self, cell: &[Poly], depth: usize, counts: &mut [u64]) -> Result<()> {
        counts[depth] += 1;
        if depth + 1 == self.k_max {
            return Ok(());
        }
        let mut children: Vec<((i64, i64), Vec<Poly>)> = Vec::new();
        let mut cut = Vec::new();
        for poly in cell {
            for piece in self.pieces {
                let part = match piece.region {
                    Some((lo, hi)) => clip_rect(poly, lo, hi),
                    None => poly.clone(),
                };
                if area(&part) <= self.grid.floor {
                    continue;
                }
                let image: Poly = part.iter().map(|&p| piece.apply(p)).collect();
                cut.clear();
                self.grid.split(&image, &mut cut)?;
                for (key, q) in cut.drain(..) {
                    match children.iter_mut().find(|c| c.0 == key) {
                        Some(c) => c.1.push(q),
                        None => children.push((key, vec![q])),
                    }
                }
            }
        }
        for (_, polys) in &children {
            self.descend(polys, depth + 1, counts)?;
        }
        Ok(())
    }
}

/// Exact occupied-box counts for `k = 1..=k_max`.
pub(crate) fn exact_box_counts(map: &MapSystem, k_max: usize, epsilon: f64) -> Result<Vec<u64>> {
    let pieces = map.affine_pieces().ok_or_else(|| {
        Error::Config(format!(
            "exact box counting needs a piecewise-affine map, got '{map}'"
        ))
    })?;
    let domain = map.domain();
    let e = Enumerator {
        grid: Grid::new(domain, epsilon),
        pieces: &pieces,
        k_max,
    };
    let cells = e.grid.cells;
    let per_box: Vec<Result<Vec<u64>>> = (0..cells[0] * cells[1])
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / cells[1], idx % cells[1]);
            let lo = [e.grid.edge(i, 0), e.grid.edge(j, 1)];
            let hi = [
                e.grid.edge(i + 1, 0).min(domain.hi[0]),
                e.grid.edge(j + 1, 1).min(domain.hi[1]),
            ];
            let square: Poly = SmallVec::from_slice(&[lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]]);
            let mut counts = vec![0u64; k_max];
            if area(&square) > e.grid.floor {
                e.descend(&[square], 0, &mut counts)?;
            }
            Ok(counts)
        })
        .collect();
    let mut total = vec![0u64; k_max];
    for counts in per_box {
        for (t, c) in total.iter_mut().zip(counts?) {
            *t += c;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_helpers() {
        let sq: Poly = SmallVec::from_slice(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert_eq!(area(&sq), 1.0);
        assert_eq!(area(&clip(&sq, 0, 0.25, 1.0)), 0.75);
        assert_eq!(area(&clip_rect(&sq, [0.5, 0.5], [2.0, 2.0])), 0.25);
    }

    #[test]
    fn identity_counts_are_constant() {
        let counts = exact_box_counts(&MapSystem::identity(), 4, 0.125).unwrap();
        assert_eq!(counts, vec![64; 4]);
    }

    #[test]
    fn horseshoe_counts_double() {
        let counts = exact_box_counts(&MapSystem::standard_horseshoe(), 6, 0.125).unwrap();
        for w in counts.windows(2) {
            assert_eq!(w[1], 2 * w[0]);
        }
    }

    #[test]
    fn cat_map_matches_dense_sampling() {
        // sampled counts at 256 samples per box side, k ≤ 5, are exact
        let exact = exact_box_counts(&MapSystem::cat_map(), 5, 0.125).unwrap();
        assert_eq!(exact, vec![64, 256, 1024, 3584, 11264]);
    }

    #[test]
    fn twist_is_rejected() {
        let p = super::super::maps::TwistProfile {
            inner: 0.3,
            outer: 0.7,
            amplitude: 0.5,
        };
        let m = MapSystem::annulus_twist(p, 0.0, 1.0).unwrap();
        assert!(matches!(
            exact_box_counts(&m, 3, 0.125),
            Err(Error::Config(_))
        ));
    }
}
