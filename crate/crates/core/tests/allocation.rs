mod support;

use rayon::prelude::*;
use support::sorted_multisets;
use twotier::allocation::{
    density_rule_weights, inverse_shapley, optimize_alpha, parse_alpha_grid, power_law_weights,
    AlphaSearch, InverseOptions, RuleKind,
};
use twotier::{ConstituencyPartition, DistributionSpec, PreferenceModel, WeightedVotingGame};

fn target_54321() -> Vec<f64> {
    [5.0, 4.0, 3.0, 2.0, 1.0].iter().map(|x| x / 15.0).collect()
}

/// Smallest L-infinity residual over all nonincreasing integer weights <= 30.
fn exhaustive_best(target: &[f64], quota_fraction: f64) -> f64 {
    sorted_multisets(target.len(), 30)
        .par_iter()
        .filter(|w| w[0] > 0)
        .map(|w| {
            let weights = w.iter().map(|&x| f64::from(x)).collect();
            let game = WeightedVotingGame::new(quota_fraction, weights).unwrap();
            game.shapley_exact().unwrap().max_abs_diff(target)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[test]
fn inverse_heuristic_is_near_the_exhaustive_optimum() {
    let target = target_54321();
    let result = inverse_shapley(&target, 0.5, &InverseOptions::default()).unwrap();
    let best = exhaustive_best(&target, 0.5);
    // Majority games on five players cannot get closer than 1/30; the best
    // ones need exact ties, e.g. weights (5, 4, 3, 2, 2).
    assert!((best - 1.0 / 30.0).abs() < 1e-12, "exhaustive optimum {best}");
    assert!(result.residual <= best + 1e-12, "{} vs {best}", result.residual);
    let game = WeightedVotingGame::majority(result.weights.clone()).unwrap();
    assert_eq!(game.shapley_dp().unwrap(), result.shapley);
}

#[test]
fn inverse_history_never_increases() {
    for target in [target_54321(), vec![0.7, 0.1, 0.1, 0.1], vec![0.4, 0.3, 0.2, 0.1, 0.0]] {
        let r = inverse_shapley(&target, 0.6, &InverseOptions::default()).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]), "{:?}", r.history);
        assert_eq!(*r.history.last().unwrap(), r.residual);
        assert!(r.weights.iter().all(|w| w.fract() == 0.0));
    }
}

#[test]
fn inverse_recovers_a_symmetric_target_exactly() {
    let r = inverse_shapley(&[0.25; 4], 0.5, &InverseOptions::default()).unwrap();
    assert!(r.converged && r.residual < 1e-12);
}

#[test]
fn power_law_is_homogeneous_in_sizes() {
    let sizes = vec![1, 3, 17, 101];
    let a = ConstituencyPartition::new(sizes.clone()).unwrap();
    let b = ConstituencyPartition::new(sizes.iter().map(|n| n * 7).collect()).unwrap();
    for alpha in [0.0, 0.5, 1.0, 1.7] {
        let (wa, wb) = (power_law_weights(&a, alpha).unwrap(), power_law_weights(&b, alpha).unwrap());
        for (x, y) in wa.iter().zip(&wb) {
            assert!((x - y).abs() < 1e-12);
        }
    }
    let w = power_law_weights(&ConstituencyPartition::new(vec![1, 3, 5]).unwrap(), 1.0).unwrap();
    assert!((w[0] - 1.0 / 9.0).abs() < 1e-15 && (w[2] - 5.0 / 9.0).abs() < 1e-15);
}

#[test]
fn density_rule_reduces_to_square_root_without_shocks() {
    let partition = ConstituencyPartition::new(vec![1, 9, 25, 1001]).unwrap();
    for g in [DistributionSpec::uniform(0.0, 2.0).unwrap(), DistributionSpec::normal(1.0, 3.0).unwrap()] {
        let model = PreferenceModel::iid(g).unwrap();
        let density = density_rule_weights(&partition, &model).unwrap();
        let root = power_law_weights(&partition, 0.5).unwrap();
        for (x, y) in density.iter().zip(&root) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn density_rule_flattens_with_large_shocks() {
    let partition = ConstituencyPartition::new(vec![1, 1001]).unwrap();
    let g = DistributionSpec::uniform(-0.5, 0.5).unwrap();
    let h = DistributionSpec::normal(0.0, 1.0).unwrap();
    let model = PreferenceModel::new(g, h, 1000.0).unwrap();
    let w = density_rule_weights(&partition, &model).unwrap();
    // Weights become proportional to n.
    assert!((w[1] / w[0] - 1001.0).abs() < 1e-3);
}

#[test]
fn alpha_search_is_deterministic() {
    let partition = ConstituencyPartition::new(vec![3, 11, 25, 49, 101, 201]).unwrap();
    let model = PreferenceModel::iid(DistributionSpec::uniform(-0.5, 0.5).unwrap()).unwrap();
    let grid = parse_alpha_grid("0:1.5:0.25").unwrap();
    let search = AlphaSearch {
        rule_kind: RuleKind::DirectPowerLaw,
        quota_fraction: 0.5,
        replications: 20_000,
        seed: 3,
        resolution: 10_000,
    };
    let a = optimize_alpha(&partition, &model, &grid, &search).unwrap();
    let b = optimize_alpha(&partition, &model, &grid, &search).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.l1_by_alpha.len(), 7);
    assert!(a.l1_by_alpha.iter().any(|p| p.alpha == a.alpha_star && p.l1 == a.min_l1()));
}

#[test]
fn single_constituency_makes_every_alpha_equivalent() {
    let partition = ConstituencyPartition::new(vec![11]).unwrap();
    let model = PreferenceModel::iid(DistributionSpec::uniform(0.0, 1.0).unwrap()).unwrap();
    let search = AlphaSearch {
        rule_kind: RuleKind::ShapleyBasedPowerLaw,
        quota_fraction: 0.5,
        replications: 1_000,
        seed: 1,
        resolution: 100,
    };
    let r = optimize_alpha(&partition, &model, &[0.0, 0.5, 1.0], &search).unwrap();
    assert_eq!(r.alpha_star, 0.0);
    assert!(r.l1_by_alpha.iter().all(|p| p.l1 == r.l1_by_alpha[0].l1));
}
