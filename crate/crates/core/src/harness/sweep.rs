use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::EntropyEstimate;

use super::compare::{run_bar, run_capacity, run_cat, run_volume};
use super::config::ExperimentConfig;
use super::output::csv_field;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub pair: String,
    pub h_bar: f64,
    pub running_max: f64,
    pub running_min: f64,
}

/// `h_bar` over a family of pairs next to the `h_top` and `h_cat` estimates.
/// Nothing here is asserted; the observations only juxtapose the numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub max_h_bar: f64,
    pub min_h_bar: f64,
    pub h_top_capacity: Option<EntropyEstimate>,
    pub h_top_volume: Option<EntropyEstimate>,
    pub h_cat_model: Option<EntropyEstimate>,
    pub observations: Vec<String>,
}

impl SweepTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("pair,h_bar,running_max,running_min\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&r.pair),
                r.h_bar,
                r.running_max,
                r.running_min
            ));
        }
        out
    }
}

pub fn sup_inf_sweep(cfg: &ExperimentConfig) -> Result<SweepTable> {
    cfg.validate()?;
    if cfg.pairs.len() < 3 {
        return Err(Error::Precondition(format!(
            "a sweep needs at least 3 pairs, got {}",
            cfg.pairs.len()
        )));
    }
    let values: Vec<f64> = cfg
        .pairs
        .par_iter()
        .map(|p| run_bar(cfg, p).map(|t| t.h_bar.value))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(values.len());
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, v) in cfg.pairs.iter().zip(values) {
        hi = hi.max(v);
        lo = lo.min(v);
        rows.push(SweepRow {
            pair: p.label(),
            h_bar: v,
            running_max: hi,
            running_min: lo,
        });
    }
    let h_top_capacity = run_capacity(cfg)?.map(|c| c.estimate);
    let h_top_volume = run_volume(cfg)?.map(|v| v.estimate);
    let h_cat_model = run_cat(cfg)?;

    let mut observations = Vec::new();
    for (name, est) in [
        ("h_top_capacity", h_top_capacity),
        ("h_top_volume", h_top_volume),
    ] {
        if let Some(e) = est {
            observations.push(format!(
                "max h_bar over pairs = {hi}, {name} = {}, difference {}",
                e.value,
                hi - e.value
            ));
        }
    }
    if let Some(e) = h_cat_model {
        observations.push(format!(
            "min h_bar over pairs = {lo}, h_cat_model = {}, difference {}",
            e.value,
            lo - e.value
        ));
    }
    Ok(SweepTable {
        rows,
        max_h_bar: hi,
        min_h_bar: lo,
        h_top_capacity,
        h_top_volume,
        h_cat_model,
        observations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_is_rejected() {
        let cfg = ExperimentConfig::parse("system: cat\npair: geodesic 1 0 0 1\n").unwrap();
        assert!(matches!(sup_inf_sweep(&cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn running_extremes() {
        let cfg = ExperimentConfig::parse(
            "system: cat\nbar_n_max: 10\n\
             pair.1: geodesic 1 0 0 1\n\
             pair.2: graph 0 ; 0 | 0 0 0.7\n\
             pair.3: geodesic 1 2 0 1\n",
        )
        .unwrap();
        let t = sup_inf_sweep(&cfg).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.min_h_bar, 0.0);
        assert_eq!(t.rows[1].running_min, 0.0);
        assert_eq!(t.rows[0].running_min, t.rows[0].h_bar);
        assert!(t
            .rows
            .windows(2)
            .all(|w| w[1].running_max >= w[0].running_max));
        assert!(t.observations.is_empty());
        assert_eq!(t.to_csv().lines().count(), 4);
    }
}
