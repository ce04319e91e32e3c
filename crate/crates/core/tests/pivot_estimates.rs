use twotier::pivot::{
    essential_interval_hit_rate, estimate_pivot_probabilities, estimate_pivot_probabilities_with,
    EstimateOptions,
};
use twotier::{
    ConstituencyPartition, DistributionSpec, PivotDirection, PreferenceModel, WeightedVotingGame,
};

fn uniform() -> DistributionSpec {
    DistributionSpec::uniform(-0.5, 0.5).unwrap()
}

#[test]
fn probabilities_sum_to_one() {
    let game = WeightedVotingGame::new(0.6, vec![5.0, 1.0, 2.0, 2.0, 3.0]).unwrap();
    let partition = ConstituencyPartition::new(vec![1, 3, 5, 7, 9]).unwrap();
    let h = DistributionSpec::normal(0.0, 1.0).unwrap();
    let model = PreferenceModel::new(uniform(), h, 0.3).unwrap();
    let est = estimate_pivot_probabilities(&game, &model, &partition, 30_001, 2).unwrap();
    assert_eq!(est.counts.iter().sum::<u64>(), 30_001);
    assert!((est.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn dummy_is_never_pivotal() {
    let game = WeightedVotingGame::majority(vec![1.0, 2.0, 2.0, 2.0]).unwrap();
    let partition = ConstituencyPartition::new(vec![5; 4]).unwrap();
    let model = PreferenceModel::iid(uniform()).unwrap();
    let est = estimate_pivot_probabilities(&game, &model, &partition, 20_000, 1).unwrap();
    assert_eq!(est.counts[0], 0);
}

#[test]
fn weight_scale_does_not_change_counts() {
    let partition = ConstituencyPartition::new(vec![3, 9, 27, 81]).unwrap();
    let model = PreferenceModel::iid(uniform()).unwrap();
    let w = vec![1.0, 3.0, 4.0, 9.0];
    let a = WeightedVotingGame::majority(w.clone()).unwrap();
    let b = a.rescaled(0.125).unwrap();
    let ea = estimate_pivot_probabilities(&a, &model, &partition, 10_000, 6).unwrap();
    let eb = estimate_pivot_probabilities(&b, &model, &partition, 10_000, 6).unwrap();
    assert_eq!(ea.counts, eb.counts);
}

#[test]
fn pivot_direction_is_symmetric_in_distribution() {
    // Symmetric noise: the mirrored pivot has the same law as the original.
    let game = WeightedVotingGame::new(0.6, vec![5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
    let partition = ConstituencyPartition::new(vec![1, 5, 9, 13, 17]).unwrap();
    let model = PreferenceModel::iid(DistributionSpec::normal(0.0, 1.0).unwrap()).unwrap();
    let reps = 100_000;
    let left = estimate_pivot_probabilities(&game, &model, &partition, reps, 31).unwrap();
    let options = EstimateOptions {
        direction: PivotDirection::RightToLeft,
        ..EstimateOptions::default()
    };
    let right =
        estimate_pivot_probabilities_with(&game, &model, &partition, reps, 32, options).unwrap();
    for i in 0..5 {
        let se = (left.std_errors[i].powi(2) + right.std_errors[i].powi(2)).sqrt();
        let diff = (left.probabilities[i] - right.probabilities[i]).abs();
        assert!(diff <= 4.0 * se + 1e-12, "member {i}: {diff} vs se {se}");
    }
}

#[test]
fn identical_members_are_equally_pivotal() {
    let game = WeightedVotingGame::majority(vec![1.0; 5]).unwrap();
    let partition = ConstituencyPartition::new(vec![11; 5]).unwrap();
    let model = PreferenceModel::iid(uniform()).unwrap();
    let est = estimate_pivot_probabilities(&game, &model, &partition, 50_000, 12).unwrap();
    let (stat, p) = twotier::stats::chi_square_uniform(&est.counts);
    assert!(p > 0.01, "chi2={stat} counts={:?}", est.counts);
}

#[test]
fn estimates_and_csv_are_thread_count_independent() {
    let game = WeightedVotingGame::new(0.6, vec![5.0, 4.0, 3.0, 3.0, 2.0]).unwrap();
    let partition = ConstituencyPartition::new(vec![3, 5, 7, 9, 11]).unwrap();
    let h = DistributionSpec::normal(0.0, 1.0).unwrap();
    let model = PreferenceModel::new(uniform(), h, 2.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                estimate_pivot_probabilities(&game, &model, &partition, 50_000, 77)
                    .unwrap()
                    .to_csv()
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn essential_interval_is_deterministic_and_tightens() {
    let model = PreferenceModel::iid(uniform()).unwrap();
    let rate = |m: usize| {
        let game = WeightedVotingGame::majority(vec![1.0; m]).unwrap();
        let partition = ConstituencyPartition::new(vec![1; m]).unwrap();
        essential_interval_hit_rate(&game, &model, &partition, 5_000, 4).unwrap()
    };
    assert_eq!(rate(101), rate(101));
    assert!(rate(11) <= rate(101));
}
