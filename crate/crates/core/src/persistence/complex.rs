use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: String,
    /// ℤ/2 grading tag, 0 or 1. Not used by the reduction.
    pub degree: u8,
    pub action: Rational,
}

impl Generator {
    pub fn new(id: impl Into<String>, degree: u8, action: Rational) -> Self {
        Generator {
            id: id.into(),
            degree,
            action,
        }
    }
}

/// A chain over the two-element field: a sorted set of generator indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn zero() -> Self {
        Chain(Vec::new())
    }

    pub fn from_indices(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        // Pairs cancel over 𝔽₂.
        let mut out: Vec<usize> = Vec::with_capacity(idx.len());
        for i in idx {
            if out.last() == Some(&i) {
                out.pop();
            } else {
                out.push(i);
            }
        }
        Chain(out)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum over 𝔽₂ (symmetric difference).
    pub fn add(&self, other: &Chain) -> Chain {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Chain(out)
    }

    pub fn add_assign(&mut self, other: &Chain) {
        *self = self.add(other);
    }
}

/// Filtered chain complex over 𝔽₂ whose differential strictly lowers action.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    generators: Vec<Generator>,
    /// `boundary[j]` is the differential of generator `j`.
    boundary: Vec<Chain>,
    index: HashMap<String, usize>,
}

impl FilteredComplex {
    /// Builds and validates a complex from generators and nonzero
    /// differential entries `(from, to)`, meaning `to` appears in `∂from`.
    pub fn new(generators: Vec<Generator>, entries: &[(String, String)]) -> Result<Self> {
        let mut index = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.degree > 1 {
                return Err(Error::Input(format!("degree of {} must be 0 or 1", g.id)));
            }
            if index.insert(g.id.clone(), i).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate generator id {}",
                    g.id
                )));
            }
        }
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); generators.len()];
        for (from, to) in entries {
            let f = *index
                .get(from)
                .ok_or_else(|| Error::Input(format!("unknown generator {from}")))?;
            let t = *index
                .get(to)
                .ok_or_else(|| Error::Input(format!("unknown generator {to}")))?;
            if cols[f].contains(&t) {
                return Err(Error::Validation(format!(
                    "duplicate differential entry {from} -> {to}"
                )));
            }
            cols[f].push(t);
        }
        let boundary = cols.into_iter().map(Chain::from_indices).collect();
        let complex = FilteredComplex {
            generators,
            boundary,
            index,
        };
        complex.validate()?;
        Ok(complex)
    }

    /// Same as [`FilteredComplex::new`] but with index-based entries.
    pub fn from_indices(generators: Vec<Generator>, entries: &[(usize, usize)]) -> Result<Self> {
        let n = generators.len();
        if let Some(&(f, t)) = entries.iter().find(|&&(f, t)| f >= n || t >= n) {
            return Err(Error::Input(format!(
                "differential entry ({f}, {t}) out of range"
            )));
        }
        let named: Vec<(String, String)> = entries
            .iter()
            .map(|&(f, t)| (generators[f].id.clone(), generators[t].id.clone()))
            .collect();
        Self::new(generators, &named)
    }

    pub fn empty() -> Self {
        FilteredComplex {
            generators: Vec::new(),
            boundary: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Checks `∂∘∂ = 0` and that every differential entry strictly lowers action.
    pub fn validate(&self) -> Result<()> {
        for (j, col) in self.boundary.iter().enumerate() {
            for &i in col.indices() {
                if self.generators[i].action >= self.generators[j].action {
                    return Err(Error::Validation(format!(
                        "differential {} -> {} does not decrease action ({} -> {})",
                        self.generators[j].id,
                        self.generators[i].id,
                        format_rational(&self.generators[j].action),
                        format_rational(&self.generators[i].action),
                    )));
                }
            }
            let dd = self.differential(col);
            if !dd.is_zero() {
                return Err(Error::Validation(format!(
                    "∂∂ ≠ 0 on generator {}",
                    self.generators[j].id
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn action(&self, i: usize) -> &Rational {
        &self.generators[i].action
    }

    pub fn boundary_of(&self, i: usize) -> &Chain {
        &self.boundary[i]
    }

    /// Nonzero differential entries as `(from, to)` index pairs.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        self.boundary
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.indices().iter().map(move |&i| (j, i)))
            .collect()
    }

    pub fn differential(&self, chain: &Chain) -> Chain {
        let mut out = Chain::zero();
        for &i in chain.indices() {
            out.add_assign(&self.boundary[i]);
        }
        out
    }

    /// Builds a chain from generator ids; repeated ids cancel.
    pub fn chain(&self, ids: &[&str]) -> Result<Chain> {
        let idx = ids
            .iter()
            .map(|id| {
                self.generator_index(id)
                    .ok_or_else(|| Error::Input(format!("unknown generator {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Chain::from_indices(idx))
    }

    /// Non-Archimedean action norm: the maximal action over the support.
    /// `None` stands for `−∞`, the norm of the zero chain.
    pub fn norm(&self, chain: &Chain) -> Option<Rational> {
        chain
            .indices()
            .iter()
            .map(|&i| self.generators[i].action)
            .max()
    }

    /// [`FilteredComplex::norm`] for a chain given by generator ids.
    pub fn norm_of_ids(&self, ids: &[&str]) -> Result<Option<Rational>> {
        Ok(self.norm(&self.chain(ids)?))
    }

    /// Copy with every action shifted by `c`.
    pub fn shifted(&self, c: Rational) -> Self {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.action += c;
        }
        out
    }

    /// Copy with new actions (same ids and differential), revalidated.
    pub fn with_actions(&self, actions: &[Rational]) -> Result<Self> {
        if actions.len() != self.len() {
            return Err(Error::Input("action vector length mismatch".into()));
        }
        let mut out = self.clone();
        for (g, a) in out.generators.iter_mut().zip(actions) {
            g.action = *a;
        }
        out.validate()?;
        Ok(out)
    }
}
