use serde::Serialize;

use crate::catalg::hom_growth_entropy;
use crate::dynamics::{
    capacity_entropy, capacity_entropy_exact, counts_csv, curve_volume_growth, CapacityEstimate,
    OrbitGraphSpec, VolumeGrowth,
};
use crate::error::{Error, Result};
use crate::floer_curves::{barcode_entropy_experiment, BarcodeEntropyTable};
use crate::growth::EntropyEstimate;

use super::config::{CapacityMode, ExperimentConfig};
use super::output::csv_field;
use super::pairs::PairSpec;

/// One inequality `lhs ≤ rhs + tol`. The direction is fixed by the caller,
/// never by the values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub inequality: String,
    pub lhs: String,
    pub lhs_value: f64,
    pub rhs: String,
    pub rhs_value: f64,
    pub tol: f64,
    /// `rhs + tol − lhs`; negative exactly when the verdict fails.
    pub slack: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn check(lhs: &str, lhs_value: f64, rhs: &str, rhs_value: f64, tol: f64) -> Self {
        let slack = rhs_value + tol - lhs_value;
        Verdict {
            inequality: format!("{lhs} <= {rhs} + tol"),
            lhs: lhs.to_string(),
            lhs_value,
            rhs: rhs.to_string(),
            rhs_value,
            tol,
            slack,
            pass: slack >= 0.0,
        }
    }

    pub fn summary(&self) -> String {
        if self.pass {
            format!(
                "PASS {}: {} <= {} + {} (slack {:.4})",
                self.inequality, self.lhs_value, self.rhs_value, self.tol, self.slack
            )
        } else {
            format!(
                "FAIL {}: {} = {} > {} + {} with {} = {}",
                self.inequality,
                self.lhs,
                self.lhs_value,
                self.rhs_value,
                self.tol,
                self.rhs,
                self.rhs_value
            )
        }
    }
}

/// Per-estimator series behind the headline numbers, written as CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComparisonSeries {
    pub bar: Option<BarcodeEntropyTable>,
    pub capacity: Option<CapacityEstimate>,
    pub volume: Option<VolumeGrowth>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub system: Option<String>,
    pub pair: Option<String>,
    pub tol: f64,
    pub seed: u64,
    pub h_cat_model: Option<EntropyEstimate>,
    pub h_bar: Option<EntropyEstimate>,
    pub h_top_capacity: Option<EntropyEstimate>,
    pub h_top_volume: Option<EntropyEstimate>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub series: ComparisonSeries,
}

impl ComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// The `h_top` used in verdicts: capacity when present, volume otherwise.
    pub fn h_top(&self) -> Option<(&'static str, f64)> {
        self.h_top_capacity
            .map(|e| ("h_top_capacity", e.value))
            .or(self.h_top_volume.map(|e| ("h_top_volume", e.value)))
    }

    /// Largest pairwise gap among `h_cat`, `h_bar` and `h_top`.
    pub fn spread(&self) -> f64 {
        let vals: Vec<f64> = [
            self.h_cat_model.map(|e| e.value),
            self.h_bar.map(|e| e.value),
            self.h_top().map(|t| t.1),
        ]
        .into_iter()
        .flatten()
        .collect();
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if vals.is_empty() {
            0.0
        } else {
            max - min
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `estimate,value,growth_factor,fit_lo,fit_hi,residual,base2`.
    pub fn estimates_csv(&self) -> String {
        let mut out = String::from("estimate,value,growth_factor,fit_lo,fit_hi,residual,base2\n");
        for (name, e) in [
            ("h_cat_model", &self.h_cat_model),
            ("h_bar", &self.h_bar),
            ("h_top_capacity", &self.h_top_capacity),
            ("h_top_volume", &self.h_top_volume),
        ] {
            if let Some(e) = e {
                out.push_str(&format!(
                    "{name},{},{},{},{},{},{}\n",
                    e.value,
                    e.growth_factor,
                    e.fit_window.0,
                    e.fit_window.1,
                    e.residual,
                    e.base2()
                ));
            }
        }
        out
    }

    /// `inequality,lhs,lhs_value,rhs,rhs_value,tol,slack,verdict`.
    pub fn verdicts_csv(&self) -> String {
        let mut out = String::from("inequality,lhs,lhs_value,rhs,rhs_value,tol,slack,verdict\n");
        for v in &self.verdicts {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_field(&v.inequality),
                v.lhs,
                v.lhs_value,
                v.rhs,
                v.rhs_value,
                v.tol,
                v.slack,
                if v.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }

    /// Every artifact of the run as `(file name, contents)`.
    pub fn artifacts(&self) -> Vec<(String, String)> {
        let mut files = vec![
            ("comparison.json".to_string(), self.to_json()),
            ("estimates.csv".to_string(), self.estimates_csv()),
            ("verdicts.csv".to_string(), self.verdicts_csv()),
        ];
        if let Some(b) = &self.series.bar {
            files.push(("bar.csv".into(), b.to_csv()));
        }
        if let Some(c) = &self.series.capacity {
            files.push(("capacity.csv".into(), capacity_csv(c)));
        }
        if let Some(v) = &self.series.volume {
            files.push(("volume.csv".into(), counts_csv(&v.lengths)));
        }
        files
    }
}

/// `epsilon,k,count`.
pub fn capacity_csv(c: &CapacityEstimate) -> String {
    let mut out = String::from("epsilon,k,count\n");
    for e in &c.per_epsilon {
        for (k, n) in &e.counts {
            out.push_str(&format!("{},{k},{n}\n", e.epsilon));
        }
    }
    out
}

/// A failed estimator together with the report assembled up to that point.
#[derive(Debug, Clone, thiserror::Error)]
pub enum CompareFailure {
    #[error(transparent)]
    Config(#[from] Error),
    #[error("{estimator} estimator failed: {error}")]
    Estimator {
        estimator: &'static str,
        error: Error,
        partial: Box<ComparisonReport>,
    },
}

pub fn run_capacity(cfg: &ExperimentConfig) -> Result<Option<CapacityEstimate>> {
    let Some(c) = &cfg.capacity else {
        return Ok(None);
    };
    let map = cfg.map()?;
    let est = match c.mode {
        CapacityMode::Exact => capacity_entropy_exact(map, &c.ks, &c.epsilons)?,
        CapacityMode::Sampled { grid } => {
            capacity_entropy(map, &OrbitGraphSpec::schedule(&c.ks, &c.epsilons, grid)?)?
        }
    };
    Ok(Some(est))
}

pub fn run_volume(cfg: &ExperimentConfig) -> Result<Option<VolumeGrowth>> {
    let Some(v) = &cfg.volume else {
        return Ok(None);
    };
    Ok(Some(curve_volume_growth(cfg.map()?, &v.curve, v.n_max)?))
}

pub fn run_bar(cfg: &ExperimentConfig, pair: &PairSpec) -> Result<BarcodeEntropyTable> {
    barcode_entropy_experiment(|n| pair.bars(n), &cfg.bar.epsilons, cfg.bar.n_max)
}

pub fn run_cat(cfg: &ExperimentConfig) -> Result<Option<EntropyEstimate>> {
    let Some(m) = &cfg.cat_model else {
        return Ok(None);
    };
    Ok(Some(hom_growth_entropy(&m.tree, &m.word, m.n_max)?))
}

/// Runs every configured estimator and checks `h_cat ≤ h_bar`, `h_bar ≤ h_top`
/// and `h_cat ≤ h_top`, each up to `cfg.tol`. `h_bar` uses the first pair.
pub fn compare_entropies(
    cfg: &ExperimentConfig,
) -> std::result::Result<ComparisonReport, CompareFailure> {
    cfg.validate()?;
    let available = [
        cfg.cat_model.is_some(),
        !cfg.pairs.is_empty(),
        cfg.capacity.is_some() || cfg.volume.is_some(),
    ]
    .iter()
    .filter(|x| **x)
    .count();
    if available < 2 {
        return Err(Error::Precondition(
            "comparison needs at least two of: categorical model, pair, topological estimator"
                .into(),
        )
        .into());
    }
    let mut report = ComparisonReport {
        system: cfg.system_spec.clone(),
        pair: cfg.pairs.first().map(|p| p.label()),
        tol: cfg.tol,
        seed: cfg.seed,
        h_cat_model: None,
        h_bar: None,
        h_top_capacity: None,
        h_top_volume: None,
        verdicts: Vec::new(),
        series: ComparisonSeries::default(),
    };
    fn fail(estimator: &'static str, error: Error, partial: &ComparisonReport) -> CompareFailure {
        CompareFailure::Estimator {
            estimator,
            error,
            partial: Box::new(partial.clone()),
        }
    }

    match run_cat(cfg) {
        Ok(h) => report.h_cat_model = h,
        Err(e) => return Err(fail("categorical", e, &report)),
    }
    if let Some(pair) = cfg.pairs.first() {
        match run_bar(cfg, pair) {
            Ok(t) => {
                report.h_bar = Some(t.h_bar);
                report.series.bar = Some(t);
            }
            Err(e) => return Err(fail("barcode", e, &report)),
        }
    }
    match run_capacity(cfg) {
        Ok(c) => {
            report.h_top_capacity = c.as_ref().map(|c| c.estimate);
            report.series.capacity = c;
        }
        Err(e) => return Err(fail("capacity", e, &report)),
    }
    match run_volume(cfg) {
        Ok(v) => {
            report.h_top_volume = v.as_ref().map(|v| v.estimate);
            report.series.volume = v;
        }
        Err(e) => return Err(fail("volume", e, &report)),
    }

    let tol = cfg.tol;
    let cat = report.h_cat_model.map(|e| e.value);
    let bar = report.h_bar.map(|e| e.value);
    let top = report.h_top();
    if let (Some(c), Some(b)) = (cat, bar) {
        report
            .verdicts
            .push(Verdict::check("h_cat", c, "h_bar", b, tol));
    }
    if let (Some(b), Some((name, t))) = (bar, top) {
        report
            .verdicts
            .push(Verdict::check("h_bar", b, name, t, tol));
    }
    if let (Some(c), Some((name, t))) = (cat, top) {
        report
            .verdicts
            .push(Verdict::check("h_cat", c, name, t, tol));
    }
    Ok(report)
}
