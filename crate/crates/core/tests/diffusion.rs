mod common;

use commlt::centrality::{compute, rank, CentralityParams, Measure};
use commlt::community::link_census;
use commlt::diffusion::{lt_simulate, lt_sweep, random_thresholds, seed_count, ThresholdSpec};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn thresholds(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

#[test]
fn matches_fixpoint_oracle_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let extra = rng.gen_range(0.0..0.5);
        let g = random_connected_graph(&mut rng, n, extra);
        let a = adjacency(&g);
        for _ in 0..5 {
            let k = rng.gen_range(0..=n);
            let seeds: Vec<usize> = sample(&mut rng, n, k).into_vec();
            for theta in [vec![0.4; n], vec![0.7; n], thresholds(&mut rng, n)] {
                let ours = lt_simulate(&g, &seeds, &theta);
                let expected = oracle_lt(&a, &seeds, &theta);
                assert_eq!(ours.final_active, expected.iter().filter(|&&x| x).count());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn activation_bounds_and_monotone_rounds(seed in any::<u64>(), n in 2usize..40, f in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.15);
        let seeds: Vec<usize> = sample(&mut rng, n, seed_count(f, n).min(n)).into_vec();
        let theta = thresholds(&mut rng, n);
        let out = lt_simulate(&g, &seeds, &theta);
        prop_assert!(out.final_active >= seeds.len() && out.final_active <= n);
        prop_assert!(out.per_round_active.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(*out.per_round_active.last().unwrap(), out.final_active);
    }

    #[test]
    fn more_seeds_never_shrink_the_cascade(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.2);
        let theta = thresholds(&mut rng, n);
        let k = rng.gen_range(0..=n);
        let big: Vec<usize> = sample(&mut rng, n, k).into_vec();
        let small: Vec<usize> = big.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        prop_assert!(lt_simulate(&g, &small, &theta).final_active <= lt_simulate(&g, &big, &theta).final_active);
    }

    #[test]
    fn higher_thresholds_never_grow_the_cascade(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.2);
        let low = thresholds(&mut rng, n);
        let high: Vec<f64> = low.iter().map(|t| (t + rng.gen_range(0.0..0.3)).min(1.0)).collect();
        let k = rng.gen_range(0..=n);
        let seeds: Vec<usize> = sample(&mut rng, n, k).into_vec();
        prop_assert!(lt_simulate(&g, &seeds, &high).final_active <= lt_simulate(&g, &seeds, &low).final_active);
    }

    #[test]
    fn zero_threshold_floods_the_component(seed in any::<u64>(), n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, 0.1);
        let out = lt_simulate(&g, &[rng.gen_range(0..n)], &vec![0.0; n]);
        prop_assert_eq!(out.final_active, n);
    }
}

#[test]
fn fixed_sweep_is_monotone_in_fraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (g, blocks) = planted_partition_graph(&mut rng, 300, 700, 6, 0.1);
    let p = commlt::community::Partition::from_assignment(&blocks);
    let c = link_census(&g, &p).unwrap();
    let fractions: Vec<f64> = (1..=50).map(|k| k as f64 / 100.0).collect();
    for m in Measure::ALL {
        let ranking = rank(&compute(m, &g, &p, &c, &CentralityParams::default()).unwrap());
        for theta in [0.4, 0.7] {
            let t = lt_sweep(&g, "planted", &ranking, &fractions, ThresholdSpec::Fixed { theta }, 50).unwrap();
            assert!(t.rows.iter().all(|r| r.runs == 1 && r.std_activation == 0.0));
            // prefixes of one ranking are nested seed sets
            assert!(t.rows.windows(2).all(|w| w[0].mean_activation <= w[1].mean_activation), "{m} θ={theta}");
        }
    }
}

#[test]
fn random_sweep_is_reproducible_and_varies() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (g, blocks) = planted_partition_graph(&mut rng, 200, 500, 4, 0.1);
    let p = commlt::community::Partition::from_assignment(&blocks);
    let c = link_census(&g, &p).unwrap();
    let ranking = rank(&compute(Measure::Cbc, &g, &p, &c, &CentralityParams::default()).unwrap());
    let spec = ThresholdSpec::Random { master_seed: 99 };
    let a = lt_sweep(&g, "planted", &ranking, &[0.05, 0.1], spec, 20).unwrap();
    let b = lt_sweep(&g, "planted", &ranking, &[0.05, 0.1], spec, 20).unwrap();
    assert_eq!(a, b);
    assert!(a.rows.iter().any(|r| r.std_activation > 0.0));
    let other = lt_sweep(&g, "other-name", &ranking, &[0.05, 0.1], spec, 20).unwrap();
    assert_ne!(a.rows, other.rows);
}

#[test]
fn random_thresholds_are_uniform() {
    let t = random_thresholds(3, 100_000);
    let mean = t.iter().sum::<f64>() / t.len() as f64;
    assert!((mean - 0.5).abs() < 0.01);
    assert!(t.iter().all(|&x| (0.0..1.0).contains(&x)));
}
