use rayon::prelude::*;

use crate::dynamics::{iterate_curve, Curve, MapSystem, Point};
use crate::error::{Error, Result};
use crate::floer_curves::{Bars, GraphPair, PairFamily, TrigPoly};

use super::config::parse_curve;

/// A pair `(L₁, L₂)` whose barcode is tracked along `φⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSpec {
    Family(PairFamily),
    /// Polylines in a planar phase space; `φⁿ(L₁)` is iterated with the map
    /// and its transverse crossings with `L₂` are the generators. The pieces
    /// of `φⁿ(L₁)` are pairwise disjoint arcs that meet `L₂` transversally, so
    /// no strip connects two generators and every bar is infinite.
    Curves {
        map: MapSystem,
        l1: Curve,
        l2: Curve,
    },
}

impl PairSpec {
    /// `geodesic a b c d` (the system must be a torus automorphism),
    /// `graph F1 ; F2 [; SHEAR]` with trigonometric polynomials `c | a… | b…`,
    /// or `curves <curve> ; <curve>`.
    pub fn parse(s: &str, system: Option<&MapSystem>, curve_tolerance: f64) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(' ').unwrap_or((s, ""));
        match kind {
            "geodesic" => {
                let v: Vec<i64> = rest
                    .split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| Error::Config(format!("bad geodesic entry {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                if v.len() != 4 {
                    return Err(Error::Config(format!(
                        "geodesic pair takes 4 integers, got {s:?}"
                    )));
                }
                let matrix = match system {
                    Some(MapSystem::TorusAutomorphism { matrix }) => *matrix,
                    _ => {
                        return Err(Error::Config(
                            "geodesic pairs need a torus automorphism `system`".into(),
                        ))
                    }
                };
                Ok(PairSpec::Family(PairFamily::Geodesic {
                    v1: [v[0], v[1]],
                    v2: [v[2], v[3]],
                    matrix,
                }))
            }
            "graph" => {
                let parts: Vec<&str> = rest.split(';').collect();
                if !(2..=3).contains(&parts.len()) {
                    return Err(Error::Config(format!(
                        "graph pair is `graph F1 ; F2 [; SHEAR]`, got {s:?}"
                    )));
                }
                let shear = match parts.get(2) {
                    Some(p) => TrigPoly::parse(p)?,
                    None => TrigPoly::default(),
                };
                Ok(PairSpec::Family(PairFamily::Graph {
                    pair: GraphPair::new(TrigPoly::parse(parts[0])?, TrigPoly::parse(parts[1])?),
                    shear,
                }))
            }
            "curves" => {
                let map = match system {
                    Some(MapSystem::TorusAutomorphism { .. }) => {
                        return Err(Error::Config(
                            "curve pairs on the torus are not supported; use a geodesic pair"
                                .into(),
                        ))
                    }
                    Some(m) => m.clone(),
                    None => return Err(Error::Config("curve pairs need a `system`".into())),
                };
                let (a, b) = rest.split_once(';').ok_or_else(|| {
                    Error::Config(format!("curve pair is `curves C1 ; C2`, got {s:?}"))
                })?;
                Ok(PairSpec::Curves {
                    map,
                    l1: parse_curve(a, curve_tolerance)?,
                    l2: parse_curve(b, curve_tolerance)?,
                })
            }
            _ => Err(Error::Config(format!(
                "unknown pair kind {kind:?} (geodesic, graph, curves)"
            ))),
        }
    }

    pub fn bars(&self, n: usize) -> Result<Bars> {
        match self {
            PairSpec::Family(f) => f.bars(n),
            PairSpec::Curves { map, l1, l2 } => {
                let pieces = iterate_curve(map, l1, n)?;
                Ok(Bars::Infinite(crossing_count(&pieces, &l2.points)? as u128))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            PairSpec::Family(f) => f.label(),
            PairSpec::Curves { l1, l2, .. } => format!(
                "curves L1 from {:?} ({} points), L2 from {:?} ({} points)",
                l1.points[0],
                l1.points.len(),
                l2.points[0],
                l2.points.len()
            ),
        }
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn boxes_meet(a: Point, b: Point, c: Point, d: Point) -> bool {
    (0..2).all(|i| a[i].min(b[i]) <= c[i].max(d[i]) && c[i].min(d[i]) <= a[i].max(b[i]))
}

/// Transverse crossings between polyline pieces and a second polyline. A
/// vertex lying exactly on the other curve makes the count ambiguous and is
/// reported as degenerate.
pub fn crossing_count(pieces: &[Vec<Point>], other: &[Point]) -> Result<usize> {
    pieces
        .par_iter()
        .map(|piece| {
            let mut n = 0;
            for s in piece.windows(2) {
                for t in other.windows(2) {
                    if !boxes_meet(s[0], s[1], t[0], t[1]) {
                        continue;
                    }
                    let (o1, o2) = (orient(s[0], s[1], t[0]), orient(s[0], s[1], t[1]));
                    let (o3, o4) = (orient(t[0], t[1], s[0]), orient(t[0], t[1], s[1]));
                    if o1 == 0.0 || o2 == 0.0 || o3 == 0.0 || o4 == 0.0 {
                        return Err(Error::Degenerate {
                            location: s[0][0],
                            detail: "polyline vertex lies on the other curve".into(),
                        });
                    }
                    if (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0) {
                        n += 1;
                    }
                }
            }
            Ok(n)
        })
        .sum()
}
