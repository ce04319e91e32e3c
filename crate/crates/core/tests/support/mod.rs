//! Brute-force oracles shared by the integration tests.

#![allow(dead_code)]

/// Shapley-Shubik index by walking every ordering of the players.
///
/// The walk stops at the pivot of each prefix and credits it with the number
/// of orderings sharing that prefix, so no ordering is visited twice.
pub fn permutation_shapley(weights: &[f64], quota_fraction: f64) -> Vec<f64> {
    let m = weights.len();
    let quota = quota_fraction * weights.iter().sum::<f64>();
    let factorial: Vec<u64> = (0..=m as u64)
        .scan(1u64, |acc, k| {
            if k > 0 {
                *acc *= k;
            }
            Some(*acc)
        })
        .collect();
    let mut swings = vec![0u64; m];
    walk(weights, quota, 0, 0.0, 0, &factorial, &mut swings);
    swings
        .iter()
        .map(|&s| s as f64 / factorial[m] as f64)
        .collect()
}

fn walk(
    weights: &[f64],
    quota: f64,
    used: u32,
    sum: f64,
    depth: usize,
    factorial: &[u64],
    swings: &mut [u64],
) {
    let m = weights.len();
    for i in 0..m {
        if used & (1 << i) != 0 {
            continue;
        }
        let next = sum + weights[i];
        if next > quota {
            swings[i] += factorial[m - depth - 1];
        } else {
            walk(weights, quota, used | (1 << i), next, depth + 1, factorial, swings);
        }
    }
}

/// Normalized Banzhaf index `swings_i / 2^(m-1)` by subset enumeration.
pub fn subset_banzhaf(weights: &[f64], quota_fraction: f64) -> Vec<f64> {
    let m = weights.len();
    let quota = quota_fraction * weights.iter().sum::<f64>();
    let mut swings = vec![0u64; m];
    for mask in 0u32..(1 << m) {
        let sum: f64 = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| weights[i]).sum();
        if sum <= quota {
            continue;
        }
        for (i, s) in swings.iter_mut().enumerate() {
            if mask & (1 << i) != 0 && sum - weights[i] <= quota {
                *s += 1;
            }
        }
    }
    let denom = (1u64 << (m - 1)) as f64;
    swings.iter().map(|&s| s as f64 / denom).collect()
}

/// All nonincreasing vectors of length `m` with entries in `0..=max`.
pub fn sorted_multisets(m: usize, max: u32) -> Vec<Vec<u32>> {
    fn rec(m: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=cap).rev() {
            prefix.push(v);
            rec(m, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, max, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Pivot by the definition: first position in ascending ideal-point order at
/// which the running weight strictly exceeds the quota.
pub fn naive_pivot(weights: &[f64], quota_fraction: f64, ideal: &[f64]) -> usize {
    let quota = quota_fraction * weights.iter().sum::<f64>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| ideal[a].total_cmp(&ideal[b]).then(a.cmp(&b)));
    let mut sum = 0.0;
    for i in order {
        sum += weights[i];
        if sum > quota {
            return i;
        }
    }
    unreachable!("the grand coalition wins")
}
