use graphman_core::oracle::{bruteforce_bound, bruteforce_phi, evaluate_witness};
use graphman_core::sample::{self, Shape};
use graphman_core::{
    best_bound, bound_general, bound_regular, bound_tree, capital_phi, DecompositionGraph, Error, Gl2Matrix, Limits,
    Theorem,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 1 << 22;

fn valid(seed: u64, shape: &Shape) -> DecompositionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample::valid_graph(&mut rng, shape, 100_000).expect("a valid graph within the attempt budget")
}

/// Like `sample::graph`, but edge labels are arbitrary determinant -1 matrices.
fn unnormalized(seed: u64) -> DecompositionGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = sample::graph(&mut rng, &Shape::default());
    let mut builder = DecompositionGraph::builder();
    for v in g.vertices() {
        builder = builder.vertex(v.id.clone(), v.data.clone());
    }
    for e in g.edges() {
        let m = sample::det_minus_one(&mut rng, 40);
        builder = builder.edge(e.id.clone(), g.vertices()[e.from].id.clone(), g.vertices()[e.to].id.clone(), m);
    }
    builder.build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn best_bound_matches_oracle(seed in any::<u64>()) {
        let g = valid(seed, &Shape::default());
        let report = best_bound(&g, &Limits::default()).unwrap();
        let (total, _) = bruteforce_bound(&g, report.theorem, CAP).unwrap();
        prop_assert_eq!(report.total, total);
        prop_assert_eq!(report.terms.sum(), report.total);
        prop_assert_eq!(evaluate_witness(&g, &report).unwrap(), report.total);
    }

    #[test]
    fn general_matches_oracle(seed in any::<u64>()) {
        let g = valid(seed, &Shape { h_probability: 0.8, ..Shape::default() });
        let report = bound_general(&g, &Limits::default()).unwrap();
        let (total, _) = bruteforce_bound(&g, Theorem::General, CAP).unwrap();
        prop_assert_eq!(report.total, total);
        prop_assert_eq!(evaluate_witness(&g, &report).unwrap(), report.total);
    }

    #[test]
    fn best_bound_is_the_minimum_applicable(seed in any::<u64>()) {
        let g = valid(seed, &Shape::default());
        let limits = Limits::default();
        let best = best_bound(&g, &limits).unwrap();
        for r in [bound_regular(&g), bound_tree(&g, &limits), bound_general(&g, &limits)] {
            match r {
                Ok(r) => prop_assert!(best.total <= r.total),
                Err(e) => prop_assert!(matches!(e, Error::Inapplicable { .. }), "{e}"),
            }
        }
    }

    #[test]
    fn phi_matches_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample::graph(&mut rng, &Shape { max_edges: 8, ..Shape::default() });
        prop_assert_eq!(capital_phi(&g).unwrap(), bruteforce_phi(&g, CAP).unwrap());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample::graph(&mut rng, &Shape::default());
        let text = g.to_json();
        let back = DecompositionGraph::from_json(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn normalization_moves(seed in any::<u64>()) {
        let g = unnormalized(seed);
        let (n, moves) = g.normalize_all().unwrap();
        prop_assert!(n.edges().iter().all(|e| e.matrix.is_normalized().unwrap()));
        let (again, second) = n.normalize_all().unwrap();
        prop_assert_eq!(&again, &n);
        prop_assert!(second.iter().all(|m| m.is_trivial()));
        let shift: i64 = moves.iter().map(|m| m.k - m.h).sum();
        let b_sum = |g: &DecompositionGraph| g.vertices().iter().map(|v| v.data.b()).sum::<i64>();
        prop_assert_eq!(b_sum(&n) - b_sum(&g), shift);
        for (before, after) in g.edges().iter().zip(n.edges()) {
            prop_assert_eq!(before.matrix.beta(), after.matrix.beta());
        }
    }

    #[test]
    fn normalizing_twice_gives_the_same_bound(seed in any::<u64>()) {
        let g = valid(seed, &Shape::default());
        let (n, moves) = g.normalize_all().unwrap();
        prop_assert!(moves.iter().all(|m| m.is_trivial()));
        prop_assert_eq!(best_bound(&n, &Limits::default()).unwrap(), best_bound(&g, &Limits::default()).unwrap());
    }
}

#[test]
fn unnormalized_graphs_are_not_evaluated() {
    let s = graphman_core::SeifertData::from_pairs(0, &[(2, 1), (2, 1)], 0).unwrap();
    let g = DecompositionGraph::builder()
        .vertex("v1", s.clone())
        .vertex("v2", s)
        .edge("e1", "v1", "v2", Gl2Matrix::new(-7, 2, 4, -1).unwrap())
        .build()
        .unwrap();
    assert!(matches!(best_bound(&g, &Limits::default()), Err(Error::NotEvaluable(_))));
    let (n, _) = g.normalize_all().unwrap();
    let report = best_bound(&n, &Limits::default()).unwrap();
    assert_eq!(report.total, 11);
    assert_eq!(bruteforce_bound(&n, report.theorem, CAP).unwrap().0, 11);
}

#[test]
fn bound_is_deterministic() {
    for seed in 0..50 {
        let g = valid(seed, &Shape { h_probability: 0.7, ..Shape::default() });
        let a = best_bound(&g, &Limits::default()).unwrap().to_json();
        let b = best_bound(&g.clone(), &Limits::default()).unwrap().to_json();
        assert_eq!(a, b);
    }
}
