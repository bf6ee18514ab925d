use entropy_chain::catalg::{
    characteristic_polynomial, distinct_eigenvalues, hom_growth_entropy,
    spectral_lower_bound_check, spectral_radius, spectral_radius_charpoly, spectral_radius_gelfand,
    word_homology_action, IntegerMatrix, Parity, PlumbingTree, TwistWord,
};
use proptest::prelude::*;

fn tree_a3() -> PlumbingTree {
    PlumbingTree::a_chain(3).unwrap()
}

fn d4() -> PlumbingTree {
    PlumbingTree::parse("A-B, B-C, B-D").unwrap()
}

fn word_strategy(
    vertices: &'static [&'static str],
    max_len: usize,
) -> impl Strategy<Value = TwistWord> {
    word_strategy_len(vertices, 0, max_len)
}

fn word_strategy_len(
    vertices: &'static [&'static str],
    min_len: usize,
    max_len: usize,
) -> impl Strategy<Value = TwistWord> {
    prop::collection::vec((0..vertices.len(), prop::bool::ANY), min_len..=max_len).prop_map(
        move |letters| {
            TwistWord::new(
                letters
                    .into_iter()
                    .map(|(v, pos)| (vertices[v].to_string(), if pos { 1 } else { -1 }))
                    .collect(),
            )
            .unwrap()
        },
    )
}

fn parity_strategy() -> impl Strategy<Value = Parity> {
    prop::bool::ANY.prop_map(|b| if b { Parity::Even } else { Parity::Odd })
}

proptest! {
    #[test]
    fn word_times_inverse_is_identity(w in word_strategy(&["A", "B", "C", "D"], 8), p in parity_strategy()) {
        let t = d4();
        let prod = word_homology_action(&t, &w.concat(&w.inverse()), p).unwrap();
        prop_assert_eq!(prod, IntegerMatrix::identity(4));
    }

    #[test]
    fn unimodular_and_radius_at_least_one(w in word_strategy(&["A", "B", "C"], 8), p in parity_strategy()) {
        let m = word_homology_action(&tree_a3(), &w, p).unwrap();
        prop_assert_eq!(m.det().abs(), 1);
        prop_assert!(spectral_radius(&m) >= 1.0 - 1e-9);
    }

    #[test]
    fn two_spectral_routes_agree(w in word_strategy_len(&["A", "B", "C", "D"], 4, 10), p in parity_strategy()) {
        let m = word_homology_action(&d4(), &w, p).unwrap();
        let a = spectral_radius_charpoly(&m);
        // the squaring route loses digits on unit-modulus Jordan blocks
        prop_assume!(a > 1.0 + 1e-6 || distinct_eigenvalues(&m).len() == m.size());
        let b = spectral_radius_gelfand(&m.to_f64_rows());
        prop_assert!((a - b).abs() < 1e-9 * a.max(1.0), "charpoly {} vs gelfand {}", a, b);
    }

    #[test]
    fn conjugation_invariance(w in word_strategy(&["A", "B", "C"], 5), c in word_strategy(&["A", "B", "C"], 4)) {
        let t = tree_a3();
        let conj = c.concat(&w).concat(&c.inverse());
        let h = hom_growth_entropy(&t, &w, 30).unwrap();
        let hc = hom_growth_entropy(&t, &conj, 30).unwrap();
        prop_assert!((h.value - hc.value).abs() < 1e-3);
    }

    #[test]
    fn single_positive_twist_has_zero_entropy(v in 0usize..3) {
        let name = ["A", "B", "C"][v];
        let h = hom_growth_entropy(&tree_a3(), &TwistWord::parse(&format!("{name}+")).unwrap(), 30).unwrap();
        prop_assert!(h.value.abs() < 1e-9);
    }
}

#[test]
fn unipotent_jordan_block_has_unit_radius() {
    let m =
        word_homology_action(&d4(), &TwistWord::parse("B- C- A+").unwrap(), Parity::Odd).unwrap();
    assert_eq!(characteristic_polynomial(&m), vec![1, -4, 6, -4, 1]);
    assert!((spectral_radius(&m) - 1.0).abs() < 1e-12);
}

#[test]
fn random_a3_words_satisfy_spectral_bound() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let t = tree_a3();
    let mut counterexamples = Vec::new();
    for _ in 0..100 {
        let len = rng.gen_range(0..=6);
        let letters = (0..len)
            .map(|_| {
                (
                    ["A", "B", "C"][rng.gen_range(0..3)].to_string(),
                    if rng.gen_bool(0.5) { 1 } else { -1 },
                )
            })
            .collect();
        let w = TwistWord::new(letters).unwrap();
        let parity = if rng.gen_bool(0.5) {
            Parity::Even
        } else {
            Parity::Odd
        };
        let r = spectral_lower_bound_check(&t, &w, parity, 30).unwrap();
        if !r.holds {
            counterexamples.push(serde_json::to_string(&r).unwrap());
        }
    }
    assert!(
        counterexamples.is_empty(),
        "counterexamples:\n{}",
        counterexamples.join("\n")
    );
}

#[test]
fn larger_tree_uses_gelfand_route() {
    // A6 word mixing every vertex, size > 4 so the Gelfand route is used
    let t = PlumbingTree::a_chain(6).unwrap();
    let w = TwistWord::parse("A+ C+ E+ B- D- F-").unwrap();
    let m = word_homology_action(&t, &w, Parity::Even).unwrap();
    let rho = spectral_radius(&m);
    assert!(rho >= 1.0 - 1e-9);
    let r = spectral_lower_bound_check(&t, &w, Parity::Even, 30).unwrap();
    assert!(r.holds, "{r:?}");
}
