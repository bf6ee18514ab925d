use crate::error::Result;
use crate::rational::Rational;

use super::complex::{Chain, FilteredComplex};

/// A pair `(β, γ)` of the singular basis with `∂γ = β`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPair {
    pub beta: Chain,
    pub gamma: Chain,
    /// `𝒜(γ) − 𝒜(β)`.
    pub length: Rational,
}

/// Singular value decomposition of a filtered complex: cycles `αᵢ` carrying
/// homology and pairs `(βⱼ, γⱼ)` sorted by non-decreasing bar length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularBasis {
    pub alphas: Vec<Chain>,
    pub pairs: Vec<SingularPair>,
}

impl SingularBasis {
    pub fn len(&self) -> usize {
        self.alphas.len() + 2 * self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All basis chains, alphas first, then `β₁, γ₁, β₂, γ₂, …`.
    pub fn chains(&self) -> Vec<&Chain> {
        self.alphas
            .iter()
            .chain(self.pairs.iter().flat_map(|p| [&p.beta, &p.gamma]))
            .collect()
    }
}

/// Generator indices in filtration order: increasing action, ties by id.
pub(crate) fn filtration_order(complex: &FilteredComplex) -> Vec<usize> {
    let gens = complex.generators();
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by(|&a, &b| {
        gens[a]
            .action
            .cmp(&gens[b].action)
            .then_with(|| gens[a].id.cmp(&gens[b].id))
    });
    order
}

/// Computes a singular basis by column reduction over 𝔽₂.
///
/// Columns are visited in filtration order (increasing action, ties broken by
/// id). A column's pivot is its entry latest in that order, i.e. the entry of
/// largest action; a column is reduced against earlier columns sharing its
/// pivot. The reduced column is `β`, the accumulated column operations give
/// `γ`, so `∂γ = β`, `𝒜(β)` is the pivot action and `𝒜(γ)` is the column
/// action.
pub fn reduce(complex: &FilteredComplex) -> Result<SingularBasis> {
    complex.validate()?;
    let n = complex.len();
    let order = filtration_order(complex);
    let mut position = vec![0usize; n];
    for (p, &g) in order.iter().enumerate() {
        position[g] = p;
    }
    let pivot_of = |c: &Chain| c.indices().iter().copied().max_by_key(|&i| position[i]);

    // reduced[g] / ops[g] indexed by generator
    let mut reduced: Vec<Chain> = vec![Chain::zero(); n];
    let mut ops: Vec<Chain> = vec![Chain::zero(); n];
    // owner[row generator] = column generator whose pivot it is
    let mut owner: Vec<Option<usize>> = vec![None; n];

    for &j in &order {
        let mut r = complex.boundary_of(j).clone();
        let mut v = Chain::from_indices(vec![j]);
        while let Some(low) = pivot_of(&r) {
            match owner[low] {
                Some(k) => {
                    r.add_assign(&reduced[k]);
                    v.add_assign(&ops[k]);
                }
                None => {
                    owner[low] = Some(j);
                    break;
                }
            }
        }
        reduced[j] = r;
        ops[j] = v;
    }

    let mut alphas = Vec::new();
    let mut pairs = Vec::new();
    for &j in &order {
        if let Some(low) = pivot_of(&reduced[j]) {
            let length = complex.action(j) - complex.action(low);
            pairs.push((
                position[j],
                SingularPair {
                    beta: reduced[j].clone(),
                    gamma: ops[j].clone(),
                    length,
                },
            ));
        } else if owner[j].is_none() {
            alphas.push(ops[j].clone());
        }
    }
    // stable sort keeps filtration order within equal lengths
    pairs.sort_by(|a, b| a.1.length.cmp(&b.1.length).then(a.0.cmp(&b.0)));
    Ok(SingularBasis {
        alphas,
        pairs: pairs.into_iter().map(|p| p.1).collect(),
    })
}
