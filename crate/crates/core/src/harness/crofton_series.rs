use serde::Serialize;

use crate::crofton::{build_tomograph, crofton_check, TomographTarget};
use crate::dynamics::{iterate_curve, Curve};
use crate::error::{Error, Result};

use super::config::{ExperimentConfig, DEFAULT_CURVE_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CroftonRow {
    pub n: usize,
    pub r: f64,
    pub integral: f64,
    pub stderr: f64,
    /// Standard error of a second run with twice the samples.
    pub stderr_doubled: f64,
    pub volume: f64,
    pub ratio: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CroftonSeries {
    pub d: usize,
    pub epsilon: f64,
    pub samples: usize,
    pub rows: Vec<CroftonRow>,
    /// `max_n ratio(n) / ratio(1)`.
    pub max_ratio_over_first: f64,
}

impl CroftonSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,r,integral,stderr,stderr_doubled,volume,ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n, r.r, r.integral, r.stderr, r.stderr_doubled, r.volume, r.ratio
            ));
        }
        out
    }
}

/// Crofton check of `L₂ = φⁿ(curve)` for `n = 1..=iterates`, each with a
/// tomograph fitted to that `L₂`. Seeds are `seed + n` and `seed + n + 2³²`.
pub fn crofton_series(cfg: &ExperimentConfig) -> Result<CroftonSeries> {
    let spec = cfg
        .crofton
        .as_ref()
        .ok_or_else(|| Error::Config("missing key `crofton_curve`".into()))?;
    let map = cfg.map()?;
    let mut rows = Vec::with_capacity(spec.iterates);
    for n in 1..=spec.iterates {
        let pieces = iterate_curve(map, &spec.curve, n)?;
        if pieces.len() != 1 {
            return Err(Error::Config(format!(
                "φ^{n} of the crofton curve has {} pieces; expected one",
                pieces.len()
            )));
        }
        let l2 = Curve::densified(&pieces[0], spec.curve.closed, DEFAULT_CURVE_TOLERANCE)?;
        let target = TomographTarget {
            l1_height: spec.l1_height,
            l2: l2.clone(),
            region: spec.region,
            window: spec.window,
            bump_height: spec.bump_height,
        };
        let t = build_tomograph(spec.d, spec.epsilon, &target)?;
        let seed = cfg.seed.wrapping_add(n as u64);
        let rep = crofton_check(&t, &l2, spec.samples, seed)?;
        let twice = crofton_check(&t, &l2, 2 * spec.samples, seed.wrapping_add(1 << 32))?;
        rows.push(CroftonRow {
            n,
            r: rep.r,
            integral: rep.integral,
            stderr: rep.stderr,
            stderr_doubled: twice.stderr,
            volume: rep.volume,
            ratio: rep.ratio,
            warnings: rep.warnings,
        });
    }
    let first = rows[0].ratio;
    let max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(CroftonSeries {
        d: spec.d,
        epsilon: spec.epsilon,
        samples: spec.samples,
        rows,
        max_ratio_over_first: if first > 0.0 {
            max / first
        } else {
            f64::INFINITY
        },
    })
}
