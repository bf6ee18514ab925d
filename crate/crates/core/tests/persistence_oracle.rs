mod common;

use common::{differential_rank, oracle_barcode_column, oracle_barcode_rank, random_complex};
use entropy_chain::persistence::{
    barcode, count_b_epsilon, reduce, BarLength, FilteredComplex, Generator,
};
use entropy_chain::rational::rat;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn oracles_agree_with_each_other() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rand::Rng::gen_range(&mut rng, 0..=10);
        let c = random_complex(&mut rng, n);
        assert_eq!(oracle_barcode_column(&c), oracle_barcode_rank(&c));
    }
}

#[test]
fn random_ten_generator_complexes_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let c = random_complex(&mut rng, 10);
        let bc = barcode(&c).unwrap();
        assert_eq!(bc.bars(), oracle_barcode_column(&c).as_slice());
    }
}

#[test]
fn singular_basis_invariants_on_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rand::Rng::gen_range(&mut rng, 0..=12);
        let c = random_complex(&mut rng, n);
        let basis = reduce(&c).unwrap();
        assert_eq!(basis.len(), c.len());
        for a in &basis.alphas {
            assert!(c.differential(a).is_zero());
        }
        for p in &basis.pairs {
            assert_eq!(c.differential(&p.gamma), p.beta);
            assert_eq!(
                c.norm(&p.gamma).unwrap() - c.norm(&p.beta).unwrap(),
                p.length
            );
        }
        assert!(basis.pairs.windows(2).all(|w| w[0].length <= w[1].length));
        // linear independence: the basis chains span the whole space
        let rows: Vec<Vec<bool>> = basis
            .chains()
            .iter()
            .map(|ch| {
                let mut r = vec![false; c.len()];
                for &i in ch.indices() {
                    r[i] = true;
                }
                r
            })
            .collect();
        assert_eq!(common::f2_rank(rows), c.len());
        // infinite bars = homology rank
        assert_eq!(basis.alphas.len(), c.len() - 2 * differential_rank(&c));
    }
}

#[test]
fn deterministic_for_fixed_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = random_complex(&mut rng, 12);
    assert_eq!(reduce(&c).unwrap(), reduce(&c).unwrap());
}

#[test]
fn barcode_invariances() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..100 {
        let c = random_complex(&mut rng, 9);
        let bc = barcode(&c).unwrap();
        // global shift
        assert_eq!(barcode(&c.shifted(rat(7, 3))).unwrap(), bc);
        // relabel ids and reverse the generator list
        let gens: Vec<Generator> = c
            .generators()
            .iter()
            .rev()
            .map(|g| {
                Generator::new(
                    format!("r_{}", g.id.len() * 31 + g.id.as_bytes()[1] as usize),
                    g.degree,
                    g.action,
                )
            })
            .collect();
        let n = c.len();
        let entries: Vec<(usize, usize)> = c
            .entries()
            .iter()
            .map(|&(f, t)| (n - 1 - f, n - 1 - t))
            .collect();
        let relabeled = FilteredComplex::from_indices(gens, &entries).unwrap();
        assert_eq!(barcode(&relabeled).unwrap(), bc);
    }
}

#[test]
fn circle_cos4_morse_model() {
    // min/max alternating around the circle for cos(4πq)
    let c = FilteredComplex::new(
        vec![
            Generator::new("max0", 1, rat(1, 1)),
            Generator::new("min1", 0, rat(-1, 1)),
            Generator::new("max2", 1, rat(1, 1)),
            Generator::new("min3", 0, rat(-1, 1)),
        ],
        &[
            ("max0".into(), "min1".into()),
            ("max0".into(), "min3".into()),
            ("max2".into(), "min1".into()),
            ("max2".into(), "min3".into()),
        ],
    )
    .unwrap();
    let bc = barcode(&c).unwrap();
    assert_eq!(bc.infinite_count(), 2);
    assert_eq!(bc.finite_lengths(), vec![rat(2, 1)]);
    assert_eq!(bc.bars(), oracle_barcode_rank(&c).as_slice());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]
    #[test]
    fn b_epsilon_monotone(seed in any::<u64>(), n in 0usize..=12, e1 in 0i128..20, e2 in 0i128..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, n);
        let bc = barcode(&c).unwrap();
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let b_lo = count_b_epsilon(&bc, BarLength::Finite(rat(lo, 4))).unwrap();
        let b_hi = count_b_epsilon(&bc, BarLength::Finite(rat(hi, 4))).unwrap();
        prop_assert!(b_hi <= b_lo);
        prop_assert!(count_b_epsilon(&bc, BarLength::Infinite).unwrap() <= b_hi);
        prop_assert_eq!(bc.infinite_count() + 2 * bc.finite_lengths().len(), c.len());
    }
}
