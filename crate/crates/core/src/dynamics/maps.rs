use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, to_f64};

pub type Point = [f64; 2];

/// Smooth bump profile of an annulus twist: `τ(r) = amplitude · sin²(π t)`
/// for `t = (r − inner)/(outer − inner) ∈ [0, 1]`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistProfile {
    pub inner: f64,
    pub outer: f64,
    pub amplitude: f64,
}

impl TwistProfile {
    pub fn value(&self, r: f64) -> f64 {
        if r <= self.inner || r >= self.outer {
            return 0.0;
        }
        let t = (r - self.inner) / (self.outer - self.inner);
        let s = (std::f64::consts::PI * t).sin();
        self.amplitude * s * s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSystem {
    /// Linear automorphism of the flat torus `ℝ²/ℤ²`.
    TorusAutomorphism { matrix: [[i64; 2]; 2] },
    /// Piecewise-affine two-branch horseshoe on the unit square. The lower
    /// strip `y ≤ 1/stretch` maps by `(x, y) ↦ (c x, s y)`, the upper strip
    /// `y ≥ 1 − 1/stretch` by `(x, y) ↦ (1 − c x, s (1 − y))`; the middle strip
    /// leaves the square. On the collar `[−padding, 1 + padding]² ∖ [0, 1]²`
    /// the map is the identity.
    Horseshoe {
        contraction: f64,
        stretch: f64,
        padding: f64,
    },
    /// `(θ, r) ↦ (θ + τ(r) mod 1, r)` on the annulus `ℝ/ℤ × [r_min, r_max]`.
    AnnulusTwist {
        profile: TwistProfile,
        r_min: f64,
        r_max: f64,
    },
}

/// Axis-aligned sampling/support box. Periodic axes have period `hi − lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub lo: Point,
    pub hi: Point,
    pub periodic: [bool; 2],
}

impl Domain {
    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }
}

/// Restriction of a piecewise-affine map to an axis-aligned rectangle
/// (`None`: the whole plane): `x ↦ m x + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct AffinePiece {
    pub region: Option<(Point, Point)>,
    pub m: [[f64; 2]; 2],
    pub t: Point,
}

impl AffinePiece {
    pub fn apply(&self, p: Point) -> Point {
        [
            self.m[0][0] * p[0] + self.m[0][1] * p[1] + self.t[0],
            self.m[1][0] * p[0] + self.m[1][1] * p[1] + self.t[1],
        ]
    }
}

impl MapSystem {
    pub fn cat_map() -> Self {
        MapSystem::TorusAutomorphism {
            matrix: [[2, 1], [1, 1]],
        }
    }

    pub fn identity() -> Self {
        MapSystem::TorusAutomorphism {
            matrix: [[1, 0], [0, 1]],
        }
    }

    pub fn torus(matrix: [[i64; 2]; 2]) -> Result<Self> {
        let m = MapSystem::TorusAutomorphism { matrix };
        m.validate()?;
        Ok(m)
    }

    pub fn horseshoe(contraction: f64, stretch: f64, padding: f64) -> Result<Self> {
        let m = MapSystem::Horseshoe {
            contraction,
            stretch,
            padding,
        };
        m.validate()?;
        Ok(m)
    }

    /// Horseshoe with contraction 1/3, stretch 3 and no collar.
    pub fn standard_horseshoe() -> Self {
        MapSystem::Horseshoe {
            contraction: 1.0 / 3.0,
            stretch: 3.0,
            padding: 0.0,
        }
    }

    pub fn annulus_twist(profile: TwistProfile, r_min: f64, r_max: f64) -> Result<Self> {
        let m = MapSystem::AnnulusTwist {
            profile,
            r_min,
            r_max,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MapSystem::TorusAutomorphism { matrix: m } => {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if det.abs() != 1 {
                    return Err(Error::Validation(format!(
                        "torus matrix must have |det| = 1, got {det}"
                    )));
                }
            }
            MapSystem::Horseshoe {
                contraction,
                stretch,
                padding,
            } => {
                if !(contraction > 0.0 && contraction < 0.5) {
                    return Err(Error::Validation(format!(
                        "horseshoe contraction must lie in (0, 1/2), got {contraction}"
                    )));
                }
                if !(stretch > 2.0 && stretch.is_finite()) {
                    return Err(Error::Validation(format!(
                        "horseshoe stretch must exceed 2, got {stretch}"
                    )));
                }
                if !(padding >= 0.0 && padding.is_finite()) {
                    return Err(Error::Validation(format!(
                        "horseshoe padding must be non-negative, got {padding}"
                    )));
                }
            }
            MapSystem::AnnulusTwist {
                profile,
                r_min,
                r_max,
            } => {
                if !(r_min < profile.inner
                    && profile.inner < profile.outer
                    && profile.outer < r_max)
                {
                    return Err(Error::Validation(format!(
                        "twist profile support [{}, {}] must lie strictly inside ({r_min}, {r_max})",
                        profile.inner, profile.outer
                    )));
                }
                if !profile.amplitude.is_finite() {
                    return Err(Error::Validation("twist amplitude must be finite".into()));
                }
            }
        }
        Ok(())
    }

    /// Whole phase space sampled by the capacity estimator.
    pub fn domain(&self) -> Domain {
        match *self {
            MapSystem::TorusAutomorphism { .. } => Domain {
                lo: [0.0, 0.0],
                hi: [1.0, 1.0],
                periodic: [true, true],
            },
            MapSystem::Horseshoe { padding, .. } => Domain {
                lo: [-padding, -padding],
                hi: [1.0 + padding, 1.0 + padding],
                periodic: [false, false],
            },
            MapSystem::AnnulusTwist { r_min, r_max, .. } => Domain {
                lo: [0.0, r_min],
                hi: [1.0, r_max],
                periodic: [true, false],
            },
        }
    }

    /// Compact region `W` carrying the dynamics; curve volumes are measured
    /// inside it.
    pub fn support(&self) -> Domain {
        match *self {
            MapSystem::Horseshoe { .. } => Domain {
                lo: [0.0, 0.0],
                hi: [1.0, 1.0],
                periodic: [false, false],
            },
            _ => self.domain(),
        }
    }

    /// Same map with the phase space cut down to the support square
    /// (horseshoe collar removed); other maps are returned unchanged.
    pub fn restricted_to_support(&self) -> Self {
        match *self {
            MapSystem::Horseshoe {
                contraction,
                stretch,
                ..
            } => MapSystem::Horseshoe {
                contraction,
                stretch,
                padding: 0.0,
            },
            ref other => other.clone(),
        }
    }

    /// One step on lifted coordinates (no reduction modulo periods), so that
    /// images of connected curves stay connected. `None` means the point
    /// leaves the phase space.
    pub fn lift_step(&self, p: Point) -> Option<Point> {
        match *self {
            MapSystem::TorusAutomorphism { matrix: m } => Some([
                m[0][0] as f64 * p[0] + m[0][1] as f64 * p[1],
                m[1][0] as f64 * p[0] + m[1][1] as f64 * p[1],
            ]),
            MapSystem::Horseshoe {
                contraction,
                stretch,
                padding,
            } => {
                let [x, y] = p;
                let inside = (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y);
                if !inside {
                    let lo = -padding;
                    let hi = 1.0 + padding;
                    let in_domain = (lo..=hi).contains(&x) && (lo..=hi).contains(&y);
                    return in_domain.then_some(p);
                }
                if y <= 1.0 / stretch {
                    Some([contraction * x, stretch * y])
                } else if y >= 1.0 - 1.0 / stretch {
                    Some([1.0 - contraction * x, stretch * (1.0 - y)])
                } else {
                    None
                }
            }
            MapSystem::AnnulusTwist { profile, .. } => Some([p[0] + profile.value(p[1]), p[1]]),
        }
    }

    /// One step on reduced coordinates inside [`MapSystem::domain`].
    pub fn step(&self, p: Point) -> Option<Point> {
        let q = self.lift_step(p)?;
        let d = self.domain();
        let mut out = q;
        for axis in 0..2 {
            if d.periodic[axis] {
                let w = d.extent(axis);
                out[axis] = d.lo[axis] + (q[axis] - d.lo[axis]).rem_euclid(w);
                // rem_euclid can round up to the period itself
                if out[axis] >= d.hi[axis] {
                    out[axis] = d.lo[axis];
                }
            }
        }
        Some(out)
    }

    /// Affine pieces on lifted coordinates covering every point that stays in
    /// the phase space; `None` for maps that are not piecewise affine.
    pub(crate) fn affine_pieces(&self) -> Option<Vec<AffinePiece>> {
        const ID: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
        match *self {
            MapSystem::TorusAutomorphism { matrix: m } => Some(vec![AffinePiece {
                region: None,
                m: [
                    [m[0][0] as f64, m[0][1] as f64],
                    [m[1][0] as f64, m[1][1] as f64],
                ],
                t: [0.0, 0.0],
            }]),
            MapSystem::Horseshoe {
                contraction: c,
                stretch: s,
                padding: p,
            } => {
                let mut pieces = vec![
                    AffinePiece {
                        region: Some(([0.0, 0.0], [1.0, 1.0 / s])),
                        m: [[c, 0.0], [0.0, s]],
                        t: [0.0, 0.0],
                    },
                    AffinePiece {
                        region: Some(([0.0, 1.0 - 1.0 / s], [1.0, 1.0])),
                        m: [[-c, 0.0], [0.0, -s]],
                        t: [1.0, s],
                    },
                ];
                if p > 0.0 {
                    let collar = [
                        ([-p, -p], [0.0, 1.0 + p]),
                        ([1.0, -p], [1.0 + p, 1.0 + p]),
                        ([0.0, -p], [1.0, 0.0]),
                        ([0.0, 1.0], [1.0, 1.0 + p]),
                    ];
                    pieces.extend(collar.into_iter().map(|r| AffinePiece {
                        region: Some(r),
                        m: ID,
                        t: [0.0, 0.0],
                    }));
                }
                Some(pieces)
            }
            MapSystem::AnnulusTwist { .. } => None,
        }
    }

    /// Parses `cat`, `identity`, `torus a b c d`, `horseshoe [c s [padding]]`
    /// or `annulus_twist inner outer amplitude [r_min r_max]`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let nums = |from: usize| -> Result<Vec<f64>> {
            parts[from..]
                .iter()
                .map(|t| {
                    parse_rational(t)
                        .map(|r| to_f64(&r))
                        .or_else(|_| t.parse::<f64>())
                        .map_err(|_| Error::Config(format!("bad number '{t}' in map spec '{s}'")))
                })
                .collect()
        };
        match parts.first().copied() {
            Some("cat") if parts.len() == 1 => Ok(MapSystem::cat_map()),
            Some("identity") if parts.len() == 1 => Ok(MapSystem::identity()),
            Some("torus") if parts.len() == 5 => {
                let v: Vec<i64> = parts[1..]
                    .iter()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| Error::Config(format!("bad matrix entry '{t}'")))
                    })
                    .collect::<Result<_>>()?;
                MapSystem::torus([[v[0], v[1]], [v[2], v[3]]])
            }
            Some("horseshoe") => {
                let v = nums(1)?;
                match v.len() {
                    0 => Ok(MapSystem::standard_horseshoe()),
                    2 => MapSystem::horseshoe(v[0], v[1], 0.0),
                    3 => MapSystem::horseshoe(v[0], v[1], v[2]),
                    _ => Err(Error::Config(format!(
                        "horseshoe takes 0, 2 or 3 numbers: '{s}'"
                    ))),
                }
            }
            Some("annulus_twist") => {
                let v = nums(1)?;
                let profile = |v: &[f64]| TwistProfile {
                    inner: v[0],
                    outer: v[1],
                    amplitude: v[2],
                };
                match v.len() {
                    3 => MapSystem::annulus_twist(profile(&v), 0.0, 1.0),
                    5 => MapSystem::annulus_twist(profile(&v), v[3], v[4]),
                    _ => Err(Error::Config(format!(
                        "annulus_twist takes 3 or 5 numbers: '{s}'"
                    ))),
                }
            }
            _ => Err(Error::Config(format!("unrecognised map spec '{s}'"))),
        }
    }
}

impl fmt::Display for MapSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MapSystem::TorusAutomorphism { matrix: m } => {
                write!(f, "torus {} {} {} {}", m[0][0], m[0][1], m[1][0], m[1][1])
            }
            MapSystem::Horseshoe {
                contraction,
                stretch,
                padding,
            } => write!(f, "horseshoe {contraction} {stretch} {padding}"),
            MapSystem::AnnulusTwist {
                profile,
                r_min,
                r_max,
            } => write!(
                f,
                "annulus_twist {} {} {} {r_min} {r_max}",
                profile.inner, profile.outer, profile.amplitude
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(MapSystem::torus([[2, 1], [1, 1]]).is_ok());
        assert!(MapSystem::torus([[2, 0], [0, 1]]).is_err());
        assert!(MapSystem::horseshoe(0.5, 3.0, 0.0).is_err());
        assert!(MapSystem::horseshoe(0.3, 2.0, 0.0).is_err());
        let p = TwistProfile {
            inner: 0.0,
            outer: 0.5,
            amplitude: 1.0,
        };
        assert!(MapSystem::annulus_twist(p, 0.0, 1.0).is_err());
    }

    #[test]
    fn horseshoe_branches() {
        let h = MapSystem::standard_horseshoe();
        let a = h.step([0.3, 0.1]).unwrap();
        assert!((a[0] - 0.1).abs() < 1e-15 && (a[1] - 0.3).abs() < 1e-15);
        let b = h.step([0.3, 0.9]).unwrap();
        assert!((b[0] - 0.9).abs() < 1e-15 && (b[1] - 0.3).abs() < 1e-12);
        assert!(h.step([0.3, 0.5]).is_none());
        let padded = MapSystem::horseshoe(1.0 / 3.0, 3.0, 0.1).unwrap();
        assert_eq!(padded.step([-0.05, 0.5]), Some([-0.05, 0.5]));
        assert_eq!(padded.step([-0.2, 0.5]), None);
    }

    #[test]
    fn torus_reduces_mod_one() {
        let c = MapSystem::cat_map();
        let p = c.step([0.75, 0.5]).unwrap();
        assert!((p[0] - 0.0).abs() < 1e-15 && (p[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "cat",
            "torus 1 1 0 1",
            "horseshoe 0.25 3 0.0625",
            "annulus_twist 0.3 0.7 0.5 0 1",
        ] {
            let m = MapSystem::parse(s).unwrap();
            assert_eq!(MapSystem::parse(&m.to_string()).unwrap(), m);
        }
        assert!(MapSystem::parse("baker").is_err());
    }
}
