use serde::Serialize;

use crate::error::Result;
use crate::kv::KeyValues;

use super::entropy::{compact_model_entropy, hom_growth_entropy, word_homology_action};
use super::spectral::spectral_radius;
use super::tree::{Parity, PlumbingTree, TwistWord};

/// Tree/word input:
///
/// ```text
/// tree: A2
/// parity: even
/// word: A+ B-
/// n_max: 30
/// ```
#[derive(Debug, Clone)]
pub struct CatalgConfig {
    pub tree: PlumbingTree,
    pub parity: Parity,
    pub word: TwistWord,
    pub n_max: usize,
}

impl CatalgConfig {
    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        let tree = PlumbingTree::parse(kv.require("tree")?)?;
        let parity = Parity::parse(kv.get("parity").unwrap_or("even"))?;
        let word = TwistWord::parse(kv.get("word").unwrap_or(""))?;
        word.resolve(&tree)?;
        let n_max = kv.parse_or("n_max", 30usize)?;
        Ok(CatalgConfig {
            tree,
            parity,
            word,
            n_max,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_kv(&KeyValues::parse(text)?)
    }

    pub fn run(&self) -> Result<CatalgReport> {
        let action = word_homology_action(&self.tree, &self.word, self.parity)?;
        let rad = spectral_radius(&action);
        let h = hom_growth_entropy(&self.tree, &self.word, self.n_max)?;
        let c = compact_model_entropy(&self.tree, &self.word, self.n_max)?;
        let log_rad = rad.ln();
        let ln2 = std::f64::consts::LN_2;
        Ok(CatalgReport {
            word: self.word.to_string(),
            rad,
            log_rad,
            h_cat_model: h.value,
            h_compact_model: c.value,
            base2_values: Base2Values {
                log_rad: log_rad / ln2,
                h_cat_model: h.value / ln2,
                h_compact_model: c.value / ln2,
            },
            growth_factor: h.growth_factor,
            homology_action: action.rows(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Base2Values {
    pub log_rad: f64,
    pub h_cat_model: f64,
    pub h_compact_model: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalgReport {
    pub word: String,
    pub rad: f64,
    pub log_rad: f64,
    pub h_cat_model: f64,
    pub h_compact_model: f64,
    pub base2_values: Base2Values,
    pub growth_factor: f64,
    pub homology_action: Vec<Vec<i64>>,
}
