use cantorflip::bounds::{
    classify, lambda_equation, lower_bound, phi, sandwich_check, solve_lambda, trivial_upper, two_map_upper,
    upper_bound,
};
use cantorflip::{ProbVector, Sandwich};
use proptest::prelude::*;

fn prob_vector(max_n: usize) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.01f64..1.0, 2..=max_n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut p: Vec<f64> = w.iter().map(|x| x / s).collect();
        let tail: f64 = p[1..].iter().sum();
        p[0] = 1.0 - tail;
        ProbVector::new(p).unwrap()
    })
}

#[test]
fn lower_below_upper_on_grid() {
    for k in 1..=200 {
        let p = ProbVector::two(k as f64 / 201.0).unwrap();
        for m in [2, 3] {
            for r in [1.0 / 3.0, 0.25] {
                let lo = lower_bound(&p, m, r).unwrap();
                let hi = upper_bound(&p, m, r).unwrap();
                assert!(lo <= hi + 1e-12, "p = {:?}, M = {m}, r = {r}", p.as_slice());
            }
        }
    }
}

#[test]
fn symmetric_in_p_for_two_maps() {
    for k in 1..100 {
        let q = k as f64 / 100.0;
        let a = ProbVector::two(q).unwrap();
        let b = ProbVector::two(1.0 - q).unwrap();
        for f in [lower_bound, upper_bound] {
            assert!((f(&a, 2, 1.0 / 3.0).unwrap() - f(&b, 2, 1.0 / 3.0).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn upper_bound_decays_near_zero() {
    let values: Vec<f64> = (2..=8)
        .map(|k| upper_bound(&ProbVector::two(10f64.powi(-k)).unwrap(), 2, 1.0 / 3.0).unwrap())
        .collect();
    for pair in values.windows(2) {
        assert!(pair[1] < pair[0], "{values:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lambda_root_and_phi_inequality(p in prob_vector(4), m in 2u32..=6) {
        let check = sandwich_check(&p, m);
        if check.status == Sandwich::Within {
            let sol = solve_lambda(&p, m).unwrap();
            prop_assert!((0.0..=1.0).contains(&sol.lambda));
            if !sol.degenerate {
                prop_assert!(sol.residual < 1e-12);
                prop_assert!(lambda_equation(&p, m, sol.lambda).abs() < 1e-12);
            }
            let cap = f64::from(m).ln().min((p.len() as f64).ln());
            prop_assert!(phi(&p, m, sol.lambda) <= cap + 1e-12);
        } else {
            prop_assert!(solve_lambda(&p, m).is_err());
        }
    }

    #[test]
    fn report_invariants(p in prob_vector(5), m in 2u32..=7, frac in 0.1f64..=1.0) {
        let r = frac / p.len() as f64;
        let rep = classify(&p, m, r).unwrap();
        prop_assert!(rep.lower >= 0.0);
        prop_assert!(rep.lower <= rep.upper + 1e-12);
        prop_assert!(rep.upper <= rep.trivial_upper + 1e-12);
        if let Some(x) = rep.exact {
            prop_assert!(rep.lower - 1e-12 <= x && x <= rep.upper + 1e-12);
        }
    }

    #[test]
    fn permutation_invariance(p in prob_vector(5), m in 2u32..=6, shift in 1usize..5) {
        let mut v = p.as_slice().to_vec();
        let s = shift % v.len();
        v.rotate_left(s);
        v.reverse();
        let q = ProbVector::new(v).unwrap();
        let r = 1.0 / (p.len() as f64 + 1.0);
        for f in [lower_bound, upper_bound, trivial_upper] {
            prop_assert!((f(&p, m, r).unwrap() - f(&q, m, r).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn two_map_form_matches(u in 0.0f64..=1.0, upper_side in any::<bool>(), m in 2u32..=4) {
        // Largest q <= 1/2 with q(1 - q) <= M^-2.
        let mf = f64::from(m);
        let edge = 0.5 * (1.0 - (1.0 - 4.0 / (mf * mf)).sqrt());
        let q = 0.001 + u * (edge - 0.001);
        let q = if upper_side { 1.0 - q } else { q };
        let p = ProbVector::two(q).unwrap();
        let r = 1.0 / 3.0;
        prop_assert!((two_map_upper(q, m, r).unwrap() - upper_bound(&p, m, r).unwrap()).abs() < 1e-10);
    }
}
