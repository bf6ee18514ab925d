use serde::{Deserialize, Serialize};

use crate::dynamics::{Curve, Point};
use crate::error::{Error, Result};

/// Base points per unit length used for every sup-norm bound and polyline.
pub const DEFAULT_BASE_RESOLUTION: usize = 2048;
/// `max_i |g_i′|` below this fraction of its overall maximum counts as not
/// spanning the fibre.
const SPAN_TOLERANCE: f64 = 1e-6;
const MAX_HALVINGS: usize = 60;

/// Smooth bump `height · exp(1 − 1/(1 − t²))`, `t = (q − center)/width`,
/// on the circle `ℝ/ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub height: f64,
}

impl Bump {
    fn offset(&self, q: f64) -> f64 {
        let d = (q - self.center).rem_euclid(1.0);
        if d > 0.5 {
            d - 1.0
        } else {
            d
        }
    }

    pub fn value(&self, q: f64) -> f64 {
        let t = self.offset(q) / self.width;
        if t.abs() >= 1.0 {
            return 0.0;
        }
        self.height * (1.0 - 1.0 / (1.0 - t * t)).exp()
    }

    pub fn derivative(&self, q: f64) -> f64 {
        let t = self.offset(q) / self.width;
        if t.abs() >= 1.0 {
            return 0.0;
        }
        let u = 1.0 - t * t;
        self.height * (1.0 - 1.0 / u).exp() * (-2.0 * t / (u * u)) / self.width
    }

    /// Closed support as a base interval `[center − width, center + width]`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.width, self.center + self.width)
    }
}

/// `W = [q_lo, q_hi] × [p_lo, p_hi]` in the annulus `ℝ/ℤ × ℝ`; `q_hi − q_lo = 1`
/// means the whole circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub q_lo: f64,
    pub q_hi: f64,
    pub p_lo: f64,
    pub p_hi: f64,
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        let ok = self.q_lo < self.q_hi
            && self.q_hi - self.q_lo <= 1.0
            && self.p_lo < self.p_hi
            && [self.q_lo, self.q_hi, self.p_lo, self.p_hi]
                .iter()
                .all(|v| v.is_finite());
        if !ok {
            return Err(Error::Input(format!("invalid region {self:?}")));
        }
        Ok(())
    }

    pub fn full_circle(&self) -> bool {
        self.q_hi - self.q_lo >= 1.0
    }

    /// Whether the base point `q` (any lift) lies over `[q_lo, q_hi]`.
    pub fn covers_base(&self, q: f64) -> bool {
        self.full_circle() || (q - self.q_lo).rem_euclid(1.0) <= self.q_hi - self.q_lo
    }

    pub fn contains(&self, p: Point) -> bool {
        self.covers_base(p[0]) && (self.p_lo..=self.p_hi).contains(&p[1])
    }
}

/// The pair to probe: `L₁ = {p = l1_height}` and the curve `L₂` (lifted
/// coordinates, base first), inside the compact region `W`, with the bumps
/// placed over `W₀ = [window.0, window.1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographTarget {
    pub l1_height: f64,
    pub l2: Curve,
    pub region: Region,
    pub window: (f64, f64),
    /// Height of the automatically placed bumps.
    pub bump_height: f64,
}

/// `L^s = graph(d f_s)` over `L₁`, `f_s = Σ sᵢ gᵢ`, `‖s‖ ≤ radius`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tomograph {
    pub bumps: Vec<Bump>,
    pub radius: f64,
    pub l1_height: f64,
    pub region: Region,
    pub window: (f64, f64),
    /// Distance between `L₁` and `L₂` outside `W`, capped by the distance
    /// from `L₁` to the fibre boundary of `W`.
    pub ell: f64,
    pub epsilon: f64,
    pub resolution: usize,
}

impl Tomograph {
    pub fn dimension(&self) -> usize {
        self.bumps.len()
    }

    pub fn f(&self, s: &[f64], q: f64) -> f64 {
        self.bumps
            .iter()
            .zip(s)
            .map(|(g, si)| si * g.value(q))
            .sum()
    }

    pub fn df(&self, s: &[f64], q: f64) -> f64 {
        self.bumps
            .iter()
            .zip(s)
            .map(|(g, si)| si * g.derivative(q))
            .sum()
    }

    fn check_parameter(&self, s: &[f64]) -> Result<()> {
        if s.len() != self.bumps.len() {
            return Err(Error::Input(format!(
                "parameter has {} entries, tomograph dimension is {}",
                s.len(),
                self.bumps.len()
            )));
        }
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > self.radius * (1.0 + 1e-12) {
            return Err(Error::Input(format!(
                "‖s‖ = {norm} exceeds the ball radius {}",
                self.radius
            )));
        }
        Ok(())
    }
}

fn base_grid(resolution: usize) -> impl Iterator<Item = f64> {
    (0..resolution).map(move |i| (i as f64 + 0.5) / resolution as f64)
}

/// Sup over the base of `‖(g₁(q), …, g_d(q))‖₂` and of `‖(g₁′(q), …)‖₂`: by
/// Cauchy–Schwarz, `sup_{‖s‖≤r} |f_s(q)| = r ‖g(q)‖₂`.
fn profile_norms(bumps: &[Bump], resolution: usize) -> (f64, f64) {
    let mut gv = 0.0f64;
    let mut gd = 0.0f64;
    for q in base_grid(resolution) {
        gv = gv.max(bumps.iter().map(|b| b.value(q).powi(2)).sum::<f64>().sqrt());
        gd = gd.max(
            bumps
                .iter()
                .map(|b| b.derivative(q).powi(2))
                .sum::<f64>()
                .sqrt(),
        );
    }
    (gv, gd)
}

/// Densifies `L₂` to points at most `1/resolution` apart in the base.
fn dense_points(curve: &Curve, resolution: usize) -> Vec<Point> {
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

fn min_distance_outside(target: &TomographTarget, resolution: usize) -> f64 {
    let r = &target.region;
    let mut ell = (target.l1_height - r.p_lo).min(r.p_hi - target.l1_height);
    if !r.full_circle() {
        for p in dense_points(&target.l2, resolution) {
            if !r.covers_base(p[0]) {
                ell = ell.min((p[1] - target.l1_height).abs());
            }
        }
    }
    ell
}

/// Checks the good-pair condition: `L₁ ∩ L₂ = ∅` over the part of the base
/// outside `W`, and `L₁` meets `W`.
fn check_good_pair(target: &TomographTarget, resolution: usize) -> Result<()> {
    let r = &target.region;
    if !(r.p_lo < target.l1_height && target.l1_height < r.p_hi) {
        return Err(Error::Precondition(format!(
            "L1 at height {} does not pass through the interior of W",
            target.l1_height
        )));
    }
    if r.full_circle() {
        return Ok(());
    }
    let pts = dense_points(&target.l2, resolution);
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let outside = !r.covers_base(a[0]) || !r.covers_base(b[0]);
        let da = a[1] - target.l1_height;
        let db = b[1] - target.l1_height;
        if outside && (da == 0.0 || db == 0.0 || (da > 0.0) != (db > 0.0)) {
            return Err(Error::Precondition(format!(
                "L1 and L2 meet near q = {} outside W; not a good pair",
                a[0].rem_euclid(1.0)
            )));
        }
    }
    Ok(())
}

/// A base point of `[a, b]` where every `gᵢ′` (nearly) vanishes, if any.
fn spanning_gap(bumps: &[Bump], a: f64, b: f64) -> Option<f64> {
    let strength = |q: f64| {
        bumps
            .iter()
            .map(|g| g.derivative(q).abs())
            .fold(0.0, f64::max)
    };
    let samples = 1000;
    let qs: Vec<f64> = (0..=samples)
        .map(|i| a + (b - a) * i as f64 / samples as f64)
        .collect();
    let overall = qs.iter().map(|&q| strength(q)).fold(0.0, f64::max);
    if overall == 0.0 {
        return Some(a);
    }
    let floor = SPAN_TOLERANCE * overall;
    for w in qs.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if strength(lo) <= floor {
            return Some(lo);
        }
        // a common zero inside needs every derivative to vanish or change sign
        let all_cross = bumps.iter().all(|g| {
            let (x, y) = (g.derivative(lo), g.derivative(hi));
            x * y <= 0.0
        });
        if all_cross {
            let (mut l, mut h) = (lo, hi);
            const R: f64 = 0.618_033_988_749_894_9;
            for _ in 0..100 {
                let c = h - R * (h - l);
                let d = l + R * (h - l);
                if strength(c) < strength(d) {
                    h = d;
                } else {
                    l = c;
                }
            }
            let m = 0.5 * (l + h);
            if strength(m) <= floor {
                return Some(m);
            }
        }
    }
    (strength(b) <= floor).then_some(b)
}

/// `d` bumps with centres spread over `W₀`, each wide enough that its
/// neighbour's derivative covers its own critical centre.
pub fn default_bumps(d: usize, window: (f64, f64), height: f64) -> Vec<Bump> {
    let (a, b) = window;
    let span = b - a;
    let step = if d > 1 { span / (d - 1) as f64 } else { span };
    (0..d)
        .map(|i| Bump {
            center: a + step * i as f64,
            width: 1.25 * step,
            height,
        })
        .collect()
}

/// Tomograph with [`default_bumps`].
pub fn build_tomograph(d: usize, epsilon: f64, target: &TomographTarget) -> Result<Tomograph> {
    if d < 2 {
        return Err(Error::Input(format!(
            "tomograph dimension must be at least 2, got {d}"
        )));
    }
    build_tomograph_with(
        default_bumps(d, target.window, target.bump_height),
        epsilon,
        target,
    )
}

/// Validates the bumps against `W`, `W₀` and the target, computes `ℓ`, and
/// halves the radius from 1 until `osc f_s < ε/2` and `‖d f_s‖ < ℓ` on the
/// whole ball.
pub fn build_tomograph_with(
    bumps: Vec<Bump>,
    epsilon: f64,
    target: &TomographTarget,
) -> Result<Tomograph> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Input(format!("ε must be positive, got {epsilon}")));
    }
    target.region.validate()?;
    let (a, b) = target.window;
    if !(a < b) || !target.region.covers_base(a) || !target.region.covers_base(b) {
        return Err(Error::Input(format!(
            "window {:?} must lie over W",
            target.window
        )));
    }
    if bumps
        .iter()
        .any(|g| !(g.width > 0.0 && g.width < 0.5) || !g.height.is_finite())
    {
        return Err(Error::Input("bump widths must lie in (0, 1/2)".into()));
    }
    let resolution = DEFAULT_BASE_RESOLUTION;
    check_good_pair(target, resolution)?;
    // condition (A): every bump vanishes outside W
    if !target.region.full_circle() {
        for g in &bumps {
            let (lo, hi) = g.support();
            if !target.region.covers_base(lo) || !target.region.covers_base(hi) {
                return Err(Error::Config(format!(
                    "bump centred at {} is not supported inside W",
                    g.center
                )));
            }
        }
    }
    // condition (B): the differentials span the fibre over W₀
    if let Some(q) = spanning_gap(&bumps, a, b) {
        return Err(Error::Config(format!(
            "the bump differentials do not span the fibre at q = {q}; use a larger d"
        )));
    }
    let ell = min_distance_outside(target, resolution);
    if !(ell > 0.0) {
        return Err(Error::Precondition(
            "L1 touches L2 or the boundary of W".into(),
        ));
    }
    let (gv, gd) = profile_norms(&bumps, resolution);
    let mut radius = 1.0;
    for _ in 0..MAX_HALVINGS {
        let osc = 2.0 * radius * gv;
        let slope = radius * gd;
        if osc < epsilon / 2.0 && slope < ell {
            return Ok(Tomograph {
                bumps,
                radius,
                l1_height: target.l1_height,
                region: target.region,
                window: target.window,
                ell,
                epsilon,
                resolution,
            });
        }
        radius /= 2.0;
    }
    Err(Error::Config("no admissible ball radius found".into()))
}

/// The curve `L^s`: `q ↦ (q, l1_height + f_s′(q))` once around the circle.
pub fn sample_curve(t: &Tomograph, s: &[f64]) -> Result<Curve> {
    t.check_parameter(s)?;
    let n = t.resolution;
    let pts: Vec<Point> = (0..=n)
        .map(|i| {
            let q = i as f64 / n as f64;
            [q, t.l1_height + t.df(s, q)]
        })
        .collect();
    let tol = pts
        .windows(2)
        .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
        .fold(0.0, f64::max);
    Curve::new(pts, true, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn target() -> TomographTarget {
        TomographTarget {
            l1_height: 0.5,
            l2: Curve::segment([0.3, 0.0], [0.3, 1.0], 0.01).unwrap(),
            region: Region {
                q_lo: 0.0,
                q_hi: 1.0,
                p_lo: 0.0,
                p_hi: 1.0,
            },
            window: (0.2, 0.5),
            bump_height: 0.05,
        }
    }

    #[test]
    fn bump_derivative_matches_difference_quotient() {
        let g = Bump {
            center: 0.95,
            width: 0.2,
            height: 2.0,
        };
        for q in [0.8, 0.9, 0.99, 0.05, 0.1] {
            let h = 1e-6;
            let fd = (g.value(q + h) - g.value(q - h)) / (2.0 * h);
            assert!((fd - g.derivative(q)).abs() < 1e-5, "{q}");
        }
        assert_eq!(g.value(0.5), 0.0);
        assert_eq!(g.value(0.95), 2.0);
    }

    #[test]
    fn two_offset_bumps_span() {
        let t = build_tomograph(2, 0.1, &target()).unwrap();
        assert_eq!(t.dimension(), 2);
        let (gv, gd) = profile_norms(&t.bumps, t.resolution);
        assert!(2.0 * t.radius * gv < 0.05);
        assert!(t.radius * gd < t.ell);
        assert_eq!(t.ell, 0.5);
    }

    #[test]
    fn zero_bumps_are_a_config_error() {
        let mut tg = target();
        tg.bump_height = 0.0;
        assert!(matches!(
            build_tomograph(2, 0.1, &tg),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn single_centred_bump_does_not_span() {
        let g = Bump {
            center: 0.4,
            width: 0.3,
            height: 1.0,
        };
        // g′ vanishes at its own centre, inside W₀
        assert!(matches!(
            build_tomograph_with(vec![g], 0.1, &target()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn bad_pair_is_rejected() {
        let mut tg = target();
        tg.region.q_lo = 0.1;
        tg.region.q_hi = 0.7;
        tg.window = (0.35, 0.45);
        // L2 at q = 0.3 crosses L1 inside W: still good
        assert!(build_tomograph(2, 0.1, &tg).is_ok());
        tg.l2 = Curve::segment([0.9, 0.0], [0.9, 1.0], 0.01).unwrap();
        assert!(matches!(
            build_tomograph(2, 0.1, &tg),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sample_curves() {
        let t = build_tomograph(3, 0.1, &target()).unwrap();
        let zero = sample_curve(&t, &[0.0, 0.0, 0.0]).unwrap();
        assert!(zero.points.iter().all(|p| p[1] == 0.5));
        let e1 = sample_curve(&t, &[t.radius, 0.0, 0.0]).unwrap();
        for p in &e1.points {
            assert!((p[1] - 0.5 - t.radius * t.bumps[0].derivative(p[0])).abs() < 1e-15);
        }
        assert!(sample_curve(&t, &[t.radius, t.radius, 0.0]).is_err());
        assert!(sample_curve(&t, &[0.0]).is_err());
    }
}
