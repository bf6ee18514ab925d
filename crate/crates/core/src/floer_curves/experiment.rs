use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{growth_rate_fit, EntropyEstimate};
use crate::persistence::{barcode, count_b_epsilon, BarLength, Barcode};
use crate::rational::{format_rational, Rational};

use super::geodesic::{geodesic_intersection_count, GeodesicPair};
use super::graph_pair::{graph_pair_complex, GraphPair};
use super::trig::TrigPoly;

/// Bars produced at one iterate. Pure infinite barcodes are kept as a count so
/// large intersection numbers are never materialised.
#[derive(Debug, Clone, PartialEq)]
pub enum Bars {
    Barcode(Barcode),
    Infinite(u128),
}

impl Bars {
    pub fn b_epsilon(&self, epsilon: &Rational) -> Result<u128> {
        match self {
            Bars::Barcode(b) => Ok(count_b_epsilon(b, BarLength::Finite(*epsilon))? as u128),
            Bars::Infinite(n) => Ok(*n),
        }
    }
}

/// A pair of curves whose second member is pushed forward by `φⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairFamily {
    /// Straight geodesics on the torus under a linear automorphism
    /// (analogue model: the torus is closed, bars are infinite by construction).
    Geodesic {
        v1: [i64; 2],
        v2: [i64; 2],
        matrix: [[i64; 2]; 2],
    },
    /// Graph pair in the cotangent bundle of the circle with `φ` a fibrewise
    /// shear by `d(shear)`, so `φⁿ` moves `f₂` to `f₂ + n·shear`. A zero shear
    /// means the second curve avoids the support of `φ`.
    Graph { pair: GraphPair, shear: TrigPoly },
}

impl PairFamily {
    pub fn bars(&self, n: usize) -> Result<Bars> {
        match self {
            PairFamily::Geodesic { v1, v2, matrix } => {
                let n =
                    u32::try_from(n).map_err(|_| Error::Input(format!("iterate {n} too large")))?;
                let pair = GeodesicPair::new(*v1, *v2, *matrix, n)?;
                Ok(Bars::Infinite(geodesic_intersection_count(&pair)?))
            }
            PairFamily::Graph { pair, shear } => {
                let moved = GraphPair {
                    f2: pair.f2.add(&shear.scale(n as f64)),
                    ..pair.clone()
                };
                Ok(Bars::Barcode(barcode(&graph_pair_complex(&moved)?)?))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            PairFamily::Geodesic { v1, v2, matrix } => {
                format!("geodesic v1={v1:?} v2={v2:?} A={matrix:?} (analogue model)")
            }
            PairFamily::Graph { pair, shear } => {
                format!("graph f1=[{}] f2=[{}] shear=[{shear}]", pair.f1, pair.f2)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub b_epsilon: u128,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonEntropy {
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub estimate: EntropyEstimate,
    /// Every count was zero.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarcodeEntropyTable {
    pub rows: Vec<ExperimentRow>,
    /// One entry per ε, in the order given (decreasing).
    pub per_epsilon: Vec<EpsilonEntropy>,
    /// `h_ε` at the smallest ε.
    pub h_bar: EntropyEstimate,
    /// Largest pairwise difference of `h_ε` over the last three ε values.
    pub plateau: f64,
}

impl BarcodeEntropyTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,epsilon,b_epsilon\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                r.n,
                format_rational(&r.epsilon),
                r.b_epsilon
            ));
        }
        out
    }
}

/// `h_ε` for each ε from `b_ε(n)`, `n = 1..=n_max`, and `h_bar` at the
/// smallest ε.
pub fn barcode_entropy_experiment<F>(
    generator: F,
    epsilons: &[Rational],
    n_max: usize,
) -> Result<BarcodeEntropyTable>
where
    F: Fn(usize) -> Result<Bars> + Sync,
{
    if n_max < 6 {
        return Err(Error::Input(format!(
            "n_max must be at least 6, got {n_max}"
        )));
    }
    if epsilons.is_empty() {
        return Err(Error::Input("ε grid is empty".into()));
    }
    if epsilons.iter().any(|e| *e < Rational::from(0)) {
        return Err(Error::Input("ε values must be non-negative".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Input("ε grid must be strictly decreasing".into()));
    }
    let bars: Vec<Bars> = (1..=n_max)
        .into_par_iter()
        .map(&generator)
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(n_max * epsilons.len());
    for (i, b) in bars.iter().enumerate() {
        for e in epsilons {
            rows.push(ExperimentRow {
                n: i + 1,
                epsilon: *e,
                b_epsilon: b.b_epsilon(e)?,
            });
        }
    }
    let mut per_epsilon = Vec::with_capacity(epsilons.len());
    for (j, e) in epsilons.iter().enumerate() {
        let series: Vec<(usize, f64)> = rows
            .iter()
            .skip(j)
            .step_by(epsilons.len())
            .map(|r| (r.n, r.b_epsilon as f64))
            .collect();
        per_epsilon.push(EpsilonEntropy {
            epsilon: *e,
            estimate: growth_rate_fit(&series)?,
            trivial: series.iter().all(|p| p.1 == 0.0),
        });
    }
    let tail = &per_epsilon[per_epsilon.len().saturating_sub(3)..];
    let mut plateau = 0.0f64;
    for a in tail {
        for b in tail {
            plateau = plateau.max((a.estimate.value - b.estimate.value).abs());
        }
    }
    Ok(BarcodeEntropyTable {
        rows,
        h_bar: per_epsilon[per_epsilon.len() - 1].estimate,
        per_epsilon,
        plateau,
    })
}
