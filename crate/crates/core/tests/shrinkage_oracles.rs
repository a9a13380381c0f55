mod common;

use common::{ans_two_stocks, unit_vol_path};
use hdicv_core::shrinkage::{ans, apa_spot, permutation, spot_window, AnsOptions};
use hdicv_core::tick::{IncrementKind, IncrementSeries};
use hdicv_core::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn ans_matches_two_stock_brute_force() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<[f64; 2]> = (0..8).map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        let flat: Vec<f64> = cols.iter().flat_map(|c| c.iter().copied()).collect();
        let series = IncrementSeries::from_columns(Matrix::from_column_slice(2, 8, &flat), IncrementKind::PreAveraged { h: 1 }, 16);
        let b = 1 + (seed as usize % 5);
        let theta = 0.5 + seed as f64 / 10.0;
        let (est, plan) = ans(&series, theta, &AnsOptions { b, seed, candidates: None }).unwrap();
        let perms: Vec<Vec<usize>> = (0..b).map(|k| permutation(8, seed, k)).collect();
        let (oracle, m1) = ans_two_stocks(&cols, theta, b, &perms);
        assert_eq!(plan.chosen, m1, "seed {seed}");
        for x in 0..2 {
            for y in 0..2 {
                assert!((est.matrix[(x, y)] - oracle[x][y]).abs() < 1e-13, "seed {seed}");
            }
        }
    }
}

#[test]
fn apa_spot_recovers_unit_variance() {
    let n = 23400;
    let k_n = spot_window(n, 0.75);
    assert_eq!(k_n, 114);
    let values: Vec<f64> = (0..20).map(|s| apa_spot(&unit_vol_path(s, n), n, k_n, 0.75).unwrap()).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    assert!((mean - 1.0).abs() <= 0.1, "mean {mean}");
    assert!(values.iter().all(|v| (v - 1.0).abs() <= 0.5));
}
