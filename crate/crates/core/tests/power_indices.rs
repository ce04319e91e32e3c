mod support;

use proptest::prelude::*;
use support::{naive_pivot, permutation_shapley, sorted_multisets, subset_banzhaf};
use twotier::{Error, PivotDirection, WeightedVotingGame};

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
    }
}

#[test]
fn small_games_match_permutation_oracle() {
    for m in 1..=5 {
        for ws in sorted_multisets(m, 6) {
            let weights: Vec<f64> = ws.iter().map(|&w| w as f64).collect();
            for q in [0.5, 0.6, 2.0 / 3.0, 0.9] {
                let game = match WeightedVotingGame::new(q, weights.clone()) {
                    Ok(g) => g,
                    Err(Error::DegenerateGame) => continue,
                    Err(e) => panic!("{e}"),
                };
                let oracle = permutation_shapley(&weights, q);
                assert_close(&game.shapley_dp().unwrap().values, &oracle, 1e-12);
                assert_close(&game.shapley_exact().unwrap().values, &oracle, 1e-12);
                assert_close(&game.banzhaf().unwrap().values, &subset_banzhaf(&weights, q), 1e-12);
            }
        }
    }
}

#[test]
fn three_player_majority_values() {
    let cases: [([f64; 3], [f64; 3]); 3] = [
        ([1.0, 1.0, 1.0], [1.0 / 3.0; 3]),
        ([2.0, 1.0, 1.0], [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]),
        ([3.0, 1.0, 1.0], [1.0, 0.0, 0.0]),
    ];
    for (w, phi) in cases {
        let game = WeightedVotingGame::majority(w.to_vec()).unwrap();
        assert_close(&game.shapley_dp().unwrap().values, &phi, 1e-15);
    }
}

#[test]
fn light_player_is_dummy_exactly_for_even_assemblies() {
    for m in 2..=12 {
        let mut w = vec![2.0; m];
        w[0] = 1.0;
        let phi = WeightedVotingGame::majority(w).unwrap().shapley_dp().unwrap();
        assert_eq!(phi.values[0] == 0.0, m % 2 == 0, "m = {m}");
    }
}

#[test]
fn pivot_matches_definition_examples() {
    let g = WeightedVotingGame::majority(vec![1.0, 1.0, 1.0]).unwrap();
    assert_eq!(g.pivotal_index(&[0.9, 0.1, 0.5]).unwrap(), 2);
    let g = WeightedVotingGame::majority(vec![5.0, 1.0, 1.0]).unwrap();
    assert_eq!(g.pivotal_index(&[0.9, 0.1, 0.5]).unwrap(), 0);
    let g = WeightedVotingGame::new(0.75, vec![1.0; 4]).unwrap();
    assert_eq!(g.pivotal_index(&[0.1, 0.2, 0.3, 0.4]).unwrap(), 3);
}

fn game_strategy() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (
        prop::collection::vec(0u32..=9, 1..=8),
        prop::sample::select(vec![0.5, 0.6, 2.0 / 3.0, 0.75]),
    )
        .prop_filter("needs a positive weight", |(w, _)| w.iter().any(|&x| x > 0))
        .prop_map(|(w, q)| (w.into_iter().map(f64::from).collect(), q))
}

proptest! {
    #[test]
    fn dp_exact_and_oracle_agree((weights, q) in game_strategy()) {
        let game = WeightedVotingGame::new(q, weights.clone()).unwrap();
        let oracle = permutation_shapley(&weights, q);
        let dp = game.shapley_dp().unwrap();
        let exact = game.shapley_exact().unwrap();
        prop_assert!(dp.max_abs_diff(&oracle) <= 1e-12);
        prop_assert!(exact.max_abs_diff(&oracle) <= 1e-12);
        prop_assert!((dp.sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dummies_get_nothing((weights, q) in game_strategy()) {
        let game = WeightedVotingGame::new(q, weights.clone()).unwrap();
        let banzhaf = subset_banzhaf(&weights, q);
        let phi = game.shapley_dp().unwrap();
        let bz = game.banzhaf().unwrap();
        for (i, &swings) in banzhaf.iter().enumerate() {
            if swings == 0.0 {
                prop_assert_eq!(phi.values[i], 0.0);
                prop_assert_eq!(bz.values[i], 0.0);
            }
        }
    }

    #[test]
    fn indices_permute_with_weights(
        (weights, q) in game_strategy(),
        seed in any::<u64>(),
    ) {
        let m = weights.len();
        let mut perm: Vec<usize> = (0..m).collect();
        // Fisher-Yates driven by a splitmix-style counter.
        let mut state = seed;
        for i in (1..m).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let permuted: Vec<f64> = perm.iter().map(|&p| weights[p]).collect();
        let a = WeightedVotingGame::new(q, weights).unwrap();
        let b = WeightedVotingGame::new(q, permuted).unwrap();
        let (pa, pb) = (a.shapley_dp().unwrap(), b.shapley_dp().unwrap());
        let (ba, bb) = (a.banzhaf().unwrap(), b.banzhaf().unwrap());
        for (k, &p) in perm.iter().enumerate() {
            prop_assert!((pb.values[k] - pa.values[p]).abs() <= 1e-12);
            prop_assert!((bb.values[k] - ba.values[p]).abs() <= 1e-12);
        }
    }

    #[test]
    fn pivot_invariances(
        (weights, q) in game_strategy(),
        ideal in prop::collection::vec(-5.0f64..5.0, 8),
        factor in 0.001f64..1000.0,
    ) {
        let m = weights.len();
        let ideal = &ideal[..m];
        let game = WeightedVotingGame::new(q, weights.clone()).unwrap();
        let pivot = game.pivotal_index(ideal).unwrap();
        prop_assert_eq!(pivot, naive_pivot(&weights, q, ideal));

        // Rescaling by a power of two keeps the float comparisons exact.
        let exp = factor.log2().round() as i32;
        prop_assert_eq!(game.rescaled(2f64.powi(exp)).unwrap().pivotal_index(ideal).unwrap(), pivot);

        let transformed: Vec<f64> = ideal.iter().map(|x| x.exp() * 3.0 + 1.0).collect();
        prop_assert_eq!(game.pivotal_index(&transformed).unwrap(), pivot);

        // Reversing both the direction and the sign of every ideal point
        // leaves the order of accumulation, and so the pivot, unchanged.
        let mirrored: Vec<f64> = ideal.iter().map(|x| -x).collect();
        let right = game.pivotal_index_directed(&mirrored, PivotDirection::RightToLeft).unwrap();
        let distinct = {
            let mut s = ideal.to_vec();
            s.sort_by(f64::total_cmp);
            s.windows(2).all(|w| w[0] < w[1])
        };
        if distinct {
            prop_assert_eq!(right, pivot);
        }
    }

    #[test]
    fn equal_weights_pick_the_median(
        half in 0usize..6,
        ideal in prop::collection::vec(-1.0f64..1.0, 11),
    ) {
        let m = 2 * half + 1;
        let ideal = &ideal[..m];
        let game = WeightedVotingGame::majority(vec![1.0; m]).unwrap();
        let pivot = game.pivotal_index(ideal).unwrap();
        let below = ideal.iter().filter(|&&x| x < ideal[pivot]).count();
        let ties = ideal.iter().filter(|&&x| x == ideal[pivot]).count();
        prop_assert!(below <= half && half < below + ties);
    }
}
