use cantorflip::bounds::lower_bound;
use cantorflip::detfrac::tree_occupancy;
use cantorflip::exact::{brute_force_z_distribution, expected_zn, pi_sequence};
use cantorflip::stochastic::{energy_estimate, evolve, evolve_to_depth, run_trial_traces, run_trials, simulate_paths};
use cantorflip::{DeterministicSpec, IfsSpec, LabelSource, OccupancyMap, ProbVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prob_vector() -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.05f64..1.0, 2..=4).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let head: f64 = p[1..].iter().sum();
        p[0] = 1.0 - head;
        ProbVector::new(p).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mass_and_occupancy_bounds(p in prob_vector(), m in 2u32..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = u64::from(p.alphabet());
        let mut occ = OccupancyMap::root(p.alphabet(), m).unwrap();
        for level in 1..=9usize {
            let next = evolve(&occ, &p, &mut rng).unwrap();
            prop_assert_eq!(next.total_paths(), u128::from(m).pow(level as u32));
            let cap = (n * occ.z() as u64).min(u64::from(m).pow(level as u32));
            prop_assert!(next.z() as u64 <= cap);
            prop_assert!(next.measure().is_normalized());
            occ = next;
        }
    }
}

/// Empirical law of `Z_depth` against the enumerated law.
fn total_variation(p: f64, depth: usize, trials: u64, seed: u64) -> f64 {
    let probs = ProbVector::two(p).unwrap();
    let exact = brute_force_z_distribution(probs.as_slice(), 2, depth).unwrap();
    let traces = run_trial_traces(&probs, 2, depth, trials, seed).unwrap();
    let mut hist = vec![0u64; exact.len()];
    for t in &traces {
        hist[t[depth] as usize] += 1;
    }
    0.5 * hist
        .iter()
        .zip(&exact)
        .map(|(&h, &e)| (h as f64 / trials as f64 - e).abs())
        .sum::<f64>()
}

#[test]
fn occupancy_law_matches_enumeration() {
    for p in [0.5, 1.0 / 3.0] {
        for depth in 1..=3 {
            let tv = total_variation(p, depth, 100_000, 7 + depth as u64);
            assert!(tv < 0.01, "p = {p}, depth = {depth}, TV = {tv}");
        }
    }
}

#[test]
fn mean_occupancy_matches_pi_recursion() {
    let p = ProbVector::uniform(2).unwrap();
    let spec = IfsSpec::canonical(2, 1.0 / 3.0).unwrap();
    let summary = run_trials(&spec, &p, 2, 8, 10_000, 2024).unwrap();
    let want = pi_sequence(2, 2, 8).unwrap().expected_z(8);
    let level = &summary.levels[8];
    assert!(
        (level.mean - want).abs() < 3.0 * level.std_error(10_000),
        "{} vs {want}",
        level.mean
    );
}

#[test]
fn mean_occupancy_matches_generalized_recursion() {
    let p = ProbVector::uniform(2).unwrap();
    let spec = IfsSpec::canonical(2, 1.0 / 3.0).unwrap();
    let summary = run_trials(&spec, &p, 3, 6, 10_000, 99).unwrap();
    let want = expected_zn(&p, 3, 6).unwrap();
    let level = &summary.levels[6];
    assert!(
        (level.mean - want).abs() < 3.0 * level.std_error(10_000),
        "{} vs {want}",
        level.mean
    );
}

#[test]
fn explicit_random_source_matches_depth_two_mean() {
    let p = ProbVector::uniform(2).unwrap();
    let runs = 20_000u64;
    let z: Vec<f64> = (0..runs)
        .map(|seed| {
            let src = LabelSource::random(seed, p.clone());
            simulate_paths(&src, 2, 2).unwrap()[2].z() as f64
        })
        .collect();
    let mean = z.iter().sum::<f64>() / runs as f64;
    let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    let se = (var / runs as f64).sqrt();
    assert!((mean - 39.0 / 16.0).abs() < 3.0 * se, "{mean}");
}

#[test]
fn periodic_source_agrees_with_deterministic_evolution() {
    for m in 3..=9u64 {
        let src = LabelSource::periodic(m, m - 1).unwrap();
        let spec = DeterministicSpec::new(m).unwrap();
        let explicit = simulate_paths(&src, 2, 10).unwrap();
        for (n, occ) in explicit.iter().enumerate().skip(1) {
            assert_eq!(occ, &tree_occupancy(&spec, n).unwrap(), "m = {m}, n = {n}");
        }
    }
    let src = LabelSource::periodic(3, 2).unwrap();
    assert_eq!(simulate_paths(&src, 2, 3).unwrap()[3].z(), 3);
}

#[test]
fn runs_are_reproducible() {
    let p = ProbVector::new(vec![0.2, 0.3, 0.5]).unwrap();
    let spec = IfsSpec::canonical(3, 0.25).unwrap();
    let a = run_trials(&spec, &p, 3, 10, 64, 5).unwrap();
    let b = run_trials(&spec, &p, 3, 10, 64, 5).unwrap();
    assert_eq!(a, b);
    let one = run_trial_traces(&p, 3, 10, 1, 11).unwrap();
    assert_eq!(one, run_trial_traces(&p, 3, 10, 1, 11).unwrap());
}

#[test]
fn near_degenerate_labels_keep_one_word() {
    let p = ProbVector::two(1.0 - 1e-6).unwrap();
    let traces = run_trial_traces(&p, 2, 5, 2_000, 3).unwrap();
    let single = traces.iter().filter(|t| t[5] == 1).count();
    assert!(single as f64 / 2_000.0 > 0.99);
}

#[test]
fn energy_stays_bounded_below_the_lower_bound() {
    let p = ProbVector::uniform(2).unwrap();
    let spec = IfsSpec::canonical(2, 1.0 / 3.0).unwrap();
    let t = 0.5 * lower_bound(&p, 2, 1.0 / 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let levels = evolve_to_depth(&p, 2, 14, &mut rng).unwrap();
    let energies: Vec<f64> = levels[6..=14]
        .iter()
        .map(|occ| energy_estimate(occ, &spec, t).unwrap())
        .collect();
    let max = energies.iter().copied().fold(f64::MIN, f64::max);
    let min = energies.iter().copied().fold(f64::MAX, f64::min);
    assert!(min > 0.0 && max / min < 3.0, "{energies:?}");
}
