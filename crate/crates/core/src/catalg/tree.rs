use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Parity of the sphere dimension `n` in the plumbing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `(−1)^n`.
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Input(format!(
                "parity must be even or odd, got {other:?}"
            ))),
        }
    }
}

/// Plumbing tree: one Lagrangian sphere per vertex, adjacent spheres meeting
/// in one point. Vertex order fixes the intersection-sign convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingTree {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl PlumbingTree {
    pub fn new(vertices: Vec<String>, edges: &[(String, String)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Input("tree needs at least one vertex".into()));
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate vertex {v}")));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::Input(format!("unknown vertex {a}")))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::Input(format!("unknown vertex {b}")))?;
            if ia == ib {
                return Err(Error::Input(format!("self-loop at {a}")));
            }
            let e = (ia.min(ib), ia.max(ib));
            if idx_edges.contains(&e) {
                return Err(Error::Input(format!("duplicate edge {a}-{b}")));
            }
            idx_edges.push(e);
        }
        if idx_edges.len() + 1 != vertices.len() {
            return Err(Error::Input(format!(
                "a tree on {} vertices has {} edges, got {}",
                vertices.len(),
                vertices.len() - 1,
                idx_edges.len()
            )));
        }
        // connected + |E| = |V| - 1 ⇒ acyclic
        let mut seen = vec![false; vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &idx_edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Input("tree is not connected".into()));
        }
        Ok(PlumbingTree {
            vertices,
            edges: idx_edges,
            index,
        })
    }

    /// The `A_k` chain with vertices named `A, B, C, …`.
    pub fn a_chain(k: usize) -> Result<Self> {
        if k == 0 || k > 26 {
            return Err(Error::Input(format!("A_k needs 1 ≤ k ≤ 26, got {k}")));
        }
        let names: Vec<String> = (0..k)
            .map(|i| ((b'A' + i as u8) as char).to_string())
            .collect();
        let edges: Vec<(String, String)> = names
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        Self::new(names, &edges)
    }

    /// `A3` style names, or an edge list `A-B, B-C, B-D`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(k) = spec.strip_prefix('A').and_then(|k| k.parse::<usize>().ok()) {
            return Self::a_chain(k);
        }
        let mut vertices: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for tok in spec.split([',', ' ']).filter(|t| !t.is_empty()) {
            let mut add = |v: &str| {
                if !vertices.iter().any(|x| x == v) {
                    vertices.push(v.to_string());
                }
            };
            match tok.split_once('-') {
                Some((a, b)) => {
                    add(a);
                    add(b);
                    edges.push((a.to_string(), b.to_string()));
                }
                None => add(tok),
            }
        }
        Self::new(vertices, &edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::Input(format!("vertex {v} not in tree")))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// A word in Dehn twists, applied as a composition `τ_{l₁} ∘ τ_{l₂} ∘ …`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwistWord {
    pub letters: Vec<(String, i8)>,
}

impl TwistWord {
    pub fn new(letters: Vec<(String, i8)>) -> Result<Self> {
        if let Some((v, e)) = letters.iter().find(|(_, e)| *e != 1 && *e != -1) {
            return Err(Error::Input(format!("exponent of {v} must be ±1, got {e}")));
        }
        Ok(TwistWord { letters })
    }

    pub fn empty() -> Self {
        TwistWord::default()
    }

    /// Parses `A+ B- C+`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (v, e) = if let Some(v) = tok.strip_suffix('+') {
                (v, 1)
            } else if let Some(v) = tok.strip_suffix('-') {
                (v, -1)
            } else {
                return Err(Error::Input(format!("letter {tok:?} must end in + or -")));
            };
            if v.is_empty() {
                return Err(Error::Input(format!("letter {tok:?} has no vertex")));
            }
            letters.push((v.to_string(), e));
        }
        Ok(TwistWord { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The inverse word: reversed with flipped exponents.
    pub fn inverse(&self) -> Self {
        TwistWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(v, e)| (v.clone(), -e))
                .collect(),
        }
    }

    pub fn concat(&self, other: &TwistWord) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        TwistWord { letters }
    }

    /// Free reduction followed by cyclic reduction: cancels `v⁺v⁻` pairs,
    /// including across the ends. The result is conjugate to `self`.
    pub fn cyclically_reduced(&self) -> Self {
        let mut stack: Vec<(String, i8)> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            match stack.last() {
                Some(top) if top.0 == l.0 && top.1 == -l.1 => {
                    stack.pop();
                }
                _ => stack.push(l.clone()),
            }
        }
        let (mut lo, mut hi) = (0, stack.len());
        while hi - lo >= 2 && stack[lo].0 == stack[hi - 1].0 && stack[lo].1 == -stack[hi - 1].1 {
            lo += 1;
            hi -= 1;
        }
        TwistWord {
            letters: stack[lo..hi].to_vec(),
        }
    }

    pub(crate) fn resolve(&self, tree: &PlumbingTree) -> Result<Vec<(usize, i8)>> {
        self.letters
            .iter()
            .map(|(v, e)| Ok((tree.vertex_index(v)?, *e)))
            .collect()
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(v, e)| format!("{v}{}", if *e > 0 { '+' } else { '-' }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_validation() {
        assert!(PlumbingTree::a_chain(3).is_ok());
        assert!(PlumbingTree::parse("A-B, B-C, B-D").is_ok());
        assert!(PlumbingTree::parse("A-B, B-C, C-A").is_err());
        assert!(PlumbingTree::new(vec!["A".into(), "B".into()], &[]).is_err());
        assert!(PlumbingTree::new(vec![], &[]).is_err());
        let single = PlumbingTree::parse("S").unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn word_parse_and_reduce() {
        let w = TwistWord::parse("A+ B- B+ A+ A-").unwrap();
        assert_eq!(w.cyclically_reduced().to_string(), "A+");
        let conj = TwistWord::parse("B+ A+ B- B-").unwrap();
        assert_eq!(conj.cyclically_reduced().to_string(), "A+ B-");
        assert!(TwistWord::parse("A").is_err());
        assert_eq!(w.inverse().to_string(), "A+ A- B- B+ A-");
    }
}
