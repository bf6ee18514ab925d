use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_negative, Rational};

use super::complex::FilteredComplex;
use super::reduce::reduce;

/// A bar length, or a threshold for counting bars: finite rational or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BarLength {
    Finite(Rational),
    Infinite,
}

impl PartialOrd for BarLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BarLength {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BarLength::Finite(a), BarLength::Finite(b)) => a.cmp(b),
            (BarLength::Finite(_), BarLength::Infinite) => Ordering::Less,
            (BarLength::Infinite, BarLength::Finite(_)) => Ordering::Greater,
            (BarLength::Infinite, BarLength::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for BarLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarLength::Finite(r) => write!(f, "{}", format_rational(r)),
            BarLength::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for BarLength {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<Rational> for BarLength {
    fn from(r: Rational) -> Self {
        BarLength::Finite(r)
    }
}

/// Multiset of bar lengths, kept sorted (finite bars first, ascending).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Barcode {
    bars: Vec<BarLength>,
}

impl Barcode {
    pub fn new(mut bars: Vec<BarLength>) -> Self {
        bars.sort();
        Barcode { bars }
    }

    /// `count` infinite bars and nothing else.
    pub fn infinite(count: usize) -> Self {
        Barcode {
            bars: vec![BarLength::Infinite; count],
        }
    }

    pub fn bars(&self) -> &[BarLength] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn infinite_count(&self) -> usize {
        self.bars
            .iter()
            .filter(|b| **b == BarLength::Infinite)
            .count()
    }

    pub fn finite_lengths(&self) -> Vec<Rational> {
        self.bars
            .iter()
            .filter_map(|b| match b {
                BarLength::Finite(r) => Some(*r),
                BarLength::Infinite => None,
            })
            .collect()
    }

    /// CSV with a single `length` column; infinite bars are written `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length\n");
        for b in &self.bars {
            out.push_str(&b.to_string());
            out.push('\n');
        }
        out
    }
}

/// Barcode of a filtered complex: one infinite bar per cycle `αᵢ` and one
/// finite bar `𝒜(γⱼ) − 𝒜(βⱼ)` per pair of the singular basis.
pub fn barcode(complex: &FilteredComplex) -> Result<Barcode> {
    let basis = reduce(complex)?;
    let mut bars: Vec<BarLength> = basis
        .pairs
        .iter()
        .map(|p| BarLength::Finite(p.length))
        .collect();
    bars.extend(std::iter::repeat_n(BarLength::Infinite, basis.alphas.len()));
    Ok(Barcode::new(bars))
}

/// `b_ε`: number of bars of length `≥ ε`. `ε = ∞` counts infinite bars.
pub fn count_b_epsilon(barcode: &Barcode, epsilon: BarLength) -> Result<usize> {
    if let BarLength::Finite(e) = &epsilon {
        if is_negative(e) {
            return Err(Error::Input(format!(
                "ε must be non-negative, got {}",
                format_rational(e)
            )));
        }
    }
    // bars are sorted, so everything from the first qualifying bar onward counts
    let first = barcode.bars.partition_point(|b| *b < epsilon);
    Ok(barcode.bars.len() - first)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    /// `b_{ε+δ}` of the perturbed complex.
    pub perturbed_upper: usize,
    /// `b_ε` of the base complex.
    pub base: usize,
    /// `b_{ε−δ}` of the perturbed complex.
    pub perturbed_lower: usize,
}

impl StabilityReport {
    /// `b_{ε+δ}(perturbed) ≤ b_ε(base)`.
    pub fn left_holds(&self) -> bool {
        self.perturbed_upper <= self.base
    }

    /// `b_ε(base) ≤ b_{ε−δ}(perturbed)`.
    pub fn right_holds(&self) -> bool {
        self.base <= self.perturbed_lower
    }

    pub fn holds(&self) -> bool {
        self.left_holds() && self.right_holds()
    }
}

/// Checks the bar-count stability sandwich for an action perturbation.
///
/// `perturbed` must have the same generators and differential as `base`,
/// with every action moved by at most `δ/2`. This is the complex-level
/// stand-in for a Hamiltonian perturbation of Hofer size below `δ/2`.
pub fn check_stability(
    base: &FilteredComplex,
    perturbed: &FilteredComplex,
    delta: Rational,
    epsilon: Rational,
) -> Result<StabilityReport> {
    if is_negative(&delta) || delta >= epsilon {
        return Err(Error::Input(format!(
            "need 0 ≤ δ < ε, got δ = {}, ε = {}",
            format_rational(&delta),
            format_rational(&epsilon)
        )));
    }
    if base.len() != perturbed.len() || base.entries() != perturbed.entries() {
        return Err(Error::Input(
            "perturbed complex must share generators and differential".into(),
        ));
    }
    let half = delta / Rational::from_integer(2);
    for (g, h) in base.generators().iter().zip(perturbed.generators()) {
        if g.id != h.id {
            return Err(Error::Input(format!(
                "generator mismatch {} vs {}",
                g.id, h.id
            )));
        }
        if (g.action - h.action).abs() > half {
            return Err(Error::Input(format!(
                "action of {} moved by more than δ/2",
                g.id
            )));
        }
    }
    let bb = barcode(base)?;
    let pb = barcode(perturbed)?;
    Ok(StabilityReport {
        perturbed_upper: count_b_epsilon(&pb, BarLength::Finite(epsilon + delta))?,
        base: count_b_epsilon(&bb, BarLength::Finite(epsilon))?,
        perturbed_lower: count_b_epsilon(&pb, BarLength::Finite(epsilon - delta))?,
    })
}

/// Finite stand-in for `liminf b_ε` over shrinking perturbations.
///
/// `schedule` is ordered by decreasing perturbation size; the result is the
/// minimum of `b_ε` over its tail, the last `⌈len/2⌉` entries. This is an
/// approximation of the limit, exact only when the tail has stabilised.
pub fn good_pair_b_epsilon(schedule: &[FilteredComplex], epsilon: Rational) -> Result<usize> {
    if schedule.is_empty() {
        return Err(Error::Input("empty perturbation schedule".into()));
    }
    if epsilon < Rational::zero() {
        return Err(Error::Input("ε must be non-negative".into()));
    }
    let tail = &schedule[schedule.len() / 2..];
    tail.iter()
        .map(|c| count_b_epsilon(&barcode(c)?, BarLength::Finite(epsilon)))
        .try_fold(usize::MAX, |acc, b| b.map(|b| acc.min(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::complex::Generator;
    use crate::rational::rat;

    fn inf_inf_two() -> Barcode {
        Barcode::new(vec![
            BarLength::Infinite,
            BarLength::Finite(rat(2, 1)),
            BarLength::Infinite,
        ])
    }

    #[test]
    fn b_epsilon_examples() {
        let b = inf_inf_two();
        assert_eq!(
            count_b_epsilon(&b, BarLength::Finite(rat(0, 1))).unwrap(),
            3
        );
        assert_eq!(
            count_b_epsilon(&b, BarLength::Finite(rat(3, 1))).unwrap(),
            2
        );
        assert_eq!(
            count_b_epsilon(&b, BarLength::Finite(rat(2, 1))).unwrap(),
            3
        );
        assert_eq!(count_b_epsilon(&b, BarLength::Infinite).unwrap(), 2);
        assert!(matches!(
            count_b_epsilon(&b, BarLength::Finite(rat(-1, 2))),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn zero_differential_gives_infinite_bars() {
        let gens = (0..5)
            .map(|i| Generator::new(format!("g{i}"), 0, rat(i, 3)))
            .collect();
        let c = FilteredComplex::new(gens, &[]).unwrap();
        assert_eq!(barcode(&c).unwrap(), Barcode::infinite(5));
    }

    #[test]
    fn acyclic_pair_gives_single_finite_bar() {
        let c = FilteredComplex::new(
            vec![
                Generator::new("g", 1, rat(1, 100)),
                Generator::new("b", 0, rat(0, 1)),
            ],
            &[("g".into(), "b".into())],
        )
        .unwrap();
        let bc = barcode(&c).unwrap();
        assert_eq!(bc.bars(), &[BarLength::Finite(rat(1, 100))]);
        assert_eq!(bc.to_csv(), "length\n1/100\n");
    }

    fn inf_two_complex() -> FilteredComplex {
        // one infinite bar (born at 0) and one bar [1, 3)
        FilteredComplex::new(
            vec![
                Generator::new("a", 0, rat(0, 1)),
                Generator::new("b", 0, rat(1, 1)),
                Generator::new("c", 1, rat(3, 1)),
            ],
            &[("c".into(), "b".into())],
        )
        .unwrap()
    }

    #[test]
    fn stability_identity_and_small_shift() {
        let base = inf_two_complex();
        let r = check_stability(&base, &base, rat(1, 10), rat(1, 1)).unwrap();
        assert!(r.holds());
        let pert = base
            .with_actions(&[rat(1, 10), rat(9, 10), rat(31, 10)])
            .unwrap();
        let r = check_stability(&base, &pert, rat(3, 10), rat(1, 1)).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn stability_rejects_bad_parameters() {
        let base = inf_two_complex();
        assert!(matches!(
            check_stability(&base, &base, rat(1, 1), rat(1, 1)),
            Err(Error::Input(_))
        ));
        let pert = base.with_actions(&[rat(1, 1), rat(1, 1), rat(3, 1)]);
        // b moved from 1 to 1 is fine but a moved by 1 > δ/2
        let pert = pert.unwrap();
        assert!(matches!(
            check_stability(&base, &pert, rat(1, 2), rat(1, 1)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn good_pair_examples() {
        let c = inf_two_complex();
        let constant = vec![c.clone(), c.clone(), c.clone()];
        let b1 = count_b_epsilon(&barcode(&c).unwrap(), BarLength::Finite(rat(1, 1))).unwrap();
        assert_eq!(good_pair_b_epsilon(&constant, rat(1, 1)).unwrap(), b1);
        assert_eq!(good_pair_b_epsilon(&[c.clone()], rat(1, 1)).unwrap(), b1);
        assert!(matches!(
            good_pair_b_epsilon(&[], rat(1, 1)),
            Err(Error::Input(_))
        ));

        // b_1 values 5, 4, 4
        let make = |finite: usize| {
            let mut gens = vec![Generator::new("z", 0, rat(0, 1))];
            let mut entries = Vec::new();
            for i in 0..5 {
                let len = if i < finite { rat(2, 1) } else { rat(1, 2) };
                gens.push(Generator::new(format!("b{i}"), 0, rat(10 * i as i128, 1)));
                gens.push(Generator::new(
                    format!("g{i}"),
                    1,
                    rat(10 * i as i128, 1) + len,
                ));
                entries.push((format!("g{i}"), format!("b{i}")));
            }
            FilteredComplex::new(gens, &entries).unwrap()
        };
        let sched = vec![make(4), make(3), make(3)];
        assert_eq!(good_pair_b_epsilon(&sched, rat(1, 1)).unwrap(), 4);
    }
}
