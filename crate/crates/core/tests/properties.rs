use std::f64::consts::{FRAC_PI_4, PI, TAU};

use photon_purify::fock::{
    fidelity, inner_product, input_to_state, make_input, normalize, tensor, Amplitude, InputState,
    StateVector,
};
use photon_purify::measurement::{condition, outcome_distribution, DetectionPattern};
use photon_purify::optics::{apply, beamsplitter, permanent, BeamSplitterParams};
use photon_purify::oracle::{
    naive_permanent, polynomial_to_state, state_to_polynomial, substitute,
};
use photon_purify::random;
use photon_purify::scheme::{
    closed_form_success, optimize_stage_two, run_scheme, solve_cancellation,
    stage_one_coefficients, stage_two, StageOneCoefficients,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_gap(a: &StateVector, b: &StateVector) -> f64 {
    a.iter()
        .map(|(o, x)| (x - b.amplitude(o)).norm())
        .chain(b.iter().map(|(o, y)| (y - a.amplitude(o)).norm()))
        .fold(0.0, f64::max)
}

fn wrap(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tensor_adds_photon_numbers(seed: u64) {
        let mut r = rng(seed);
        let a = random::state(&mut r, 1, 2, 4);
        let b = random::state(&mut r, 2, 2, 4);
        let ab = tensor(&a, &b).unwrap();
        prop_assert_eq!(ab.modes(), 3);
        let mut expected: Vec<u32> = a
            .photon_sectors()
            .iter()
            .flat_map(|x| b.photon_sectors().into_iter().map(move |y| x + y))
            .collect();
        expected.sort_unstable();
        expected.dedup();
        prop_assert_eq!(ab.photon_sectors(), expected);
        prop_assert!((ab.norm_sqr() - a.norm_sqr() * b.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn self_inner_product_is_norm(seed: u64) {
        let mut r = rng(seed);
        let modes = r.gen_range(1..=3);
        let s = random::state(&mut r, modes, 4, 4)
            .scaled(Amplitude::new(r.gen_range(0.1..3.0), 0.0))
            .unwrap();
        let ip = inner_product(&s, &s).unwrap();
        prop_assert_eq!(ip.im, 0.0);
        prop_assert!((ip.re - s.norm_sqr()).abs() < 1e-12);
        prop_assert!(ip.re >= 0.0);
    }

    #[test]
    fn fidelity_symmetric_and_phase_blind(seed: u64, chi in -PI..PI, psi in -PI..PI) {
        let mut r = rng(seed);
        let modes = r.gen_range(1..=3);
        let a = random::state(&mut r, modes, 3, 4);
        let b = random::state(&mut r, modes, 3, 4);
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-12);
        let g = fidelity(&a.with_global_phase(chi), &b.with_global_phase(psi)).unwrap();
        prop_assert!((f - g).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn normalize_yields_unit_norm(seed: u64, scale in 1e-6f64..1e6) {
        let mut r = rng(seed);
        let s = random::state(&mut r, 2, 4, 4)
            .scaled(Amplitude::new(scale, 0.0))
            .unwrap();
        let (n, norm) = normalize(&s).unwrap();
        prop_assert!((n.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((norm / (scale * scale) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_beamsplitters_are_unitary(theta in 0.0..=std::f64::consts::FRAC_PI_2, phi in -PI..=PI) {
        let bs = beamsplitter(BeamSplitterParams::new(theta, phi).unwrap());
        prop_assert!(bs.unitarity_deviation() <= 1e-12);
        let rows = bs.rows().concat();
        prop_assert!(photon_purify::InterferometerUnitary::new(2, rows).is_ok());
        let broken = bs.perturbed(1, 0, Amplitude::new(0.0, 1e-6));
        prop_assert!(photon_purify::InterferometerUnitary::new(2, broken.rows().concat()).is_err());
    }

    #[test]
    fn apply_conserves_norm_and_sectors(seed: u64) {
        let mut r = rng(seed);
        let modes = r.gen_range(1..=3);
        let s = random::state(&mut r, modes, 4, 4);
        let u = random::unitary(&mut r, modes);
        let out = apply(&u, &s).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(out.photon_sectors(), s.photon_sectors());
    }

    #[test]
    fn apply_is_a_representation(seed: u64) {
        let mut r = rng(seed);
        let modes = r.gen_range(1..=3);
        let s = random::state(&mut r, modes, 4, 4);
        let u1 = random::unitary(&mut r, modes);
        let u2 = random::unitary(&mut r, modes);
        let twice = apply(&u2, &apply(&u1, &s).unwrap()).unwrap();
        let once = apply(&u2.compose(&u1).unwrap(), &s).unwrap();
        prop_assert!(max_gap(&twice, &once) < 1e-10);
    }

    #[test]
    fn ryser_matches_naive(seed: u64, n in 0usize..=6) {
        let mut r = rng(seed);
        let m = random::matrix(&mut r, n);
        let diff = (permanent(&m).unwrap() - naive_permanent(&m).unwrap()).norm();
        prop_assert!(diff < 1e-12, "dim {} diff {:e}", n, diff);
    }

    #[test]
    fn apply_matches_polynomial_oracle(seed: u64) {
        let mut r = rng(seed);
        let modes = r.gen_range(1..=3);
        let s = random::state(&mut r, modes, 4, 4);
        let u = random::unitary(&mut r, modes);
        let poly = state_to_polynomial(&s);
        let image = substitute(&poly, &u).unwrap();
        for (deg, _) in image.terms() {
            let total: u32 = deg.iter().sum();
            prop_assert!(s.photon_sectors().contains(&total));
        }
        let oracle = polynomial_to_state(&image).unwrap();
        prop_assert!(max_gap(&apply(&u, &s).unwrap(), &oracle) < 1e-12);
    }

    #[test]
    fn polynomial_round_trip(seed: u64) {
        let mut r = rng(seed);
        let modes = r.gen_range(1..=3);
        let s = random::state(&mut r, modes, 4, 4);
        let back = polynomial_to_state(&state_to_polynomial(&s)).unwrap();
        prop_assert!(max_gap(&s, &back) < 1e-15);
        prop_assert!((fidelity(&s, &back).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_distribution_consistent_with_condition(seed: u64) {
        let mut r = rng(seed);
        let modes = r.gen_range(2..=3);
        let s = random::state(&mut r, modes, 4, 4);
        let detected: Vec<usize> = (0..modes - 1).filter(|_| r.gen_bool(0.7)).collect();
        let dist = outcome_distribution(&s, &detected).unwrap();
        prop_assert!((dist.values().sum::<f64>() - 1.0).abs() < 1e-12);
        for (pattern, p) in &dist {
            if detected.is_empty() {
                break;
            }
            let c = condition(&s, pattern).unwrap();
            prop_assert!((c.probability - p).abs() < 1e-12);
        }
    }

    #[test]
    fn sequential_conditioning_equals_joint(seed: u64) {
        let mut r = rng(seed);
        let s = random::state(&mut r, 3, 4, 4);
        let (x, y) = (r.gen_range(0..=2u32), r.gen_range(0..=2u32));
        let joint = condition(&s, &DetectionPattern::new([(0, x), (2, y)]).unwrap()).unwrap();
        let first = condition(&s, &DetectionPattern::single(0, x)).unwrap();
        match first.state {
            None => prop_assert!(joint.is_impossible()),
            Some(rest) => {
                // mode 2 is renumbered to 1 after mode 0 is removed
                let second = condition(&rest, &DetectionPattern::single(1, y)).unwrap();
                let product = first.probability * second.probability;
                prop_assert!((product - joint.probability).abs() < 1e-12);
                match (second.state, joint.state) {
                    (Some(a), Some(b)) => prop_assert!((fidelity(&a, &b).unwrap() - 1.0).abs() < 1e-12),
                    (None, None) => {}
                    (a, b) => prop_assert!(false, "mismatch {:?} vs {:?}", a, b),
                }
            }
        }
    }

    #[test]
    fn stage_one_closed_form_matches_pipeline(seed: u64) {
        let mut r = rng(seed);
        let in1 = random::input_state(&mut r);
        let in2 = random::input_state(&mut r);
        let bs = random::beamsplitter_params(&mut r);
        let k = stage_one_coefficients(&in1, &in2, bs);
        let joint = tensor(&input_to_state(&in1), &input_to_state(&in2)).unwrap();
        let out = apply(&beamsplitter(bs), &joint).unwrap();
        // unnormalized projection onto mode 1 = 0
        prop_assert!((out.amp(&[0, 0]) - k.c0).norm() < 1e-12);
        prop_assert!((out.amp(&[1, 0]) - k.c1).norm() < 1e-12);
        prop_assert!((out.amp(&[2, 0]) - k.c2).norm() < 1e-12);
        let c = condition(&out, &DetectionPattern::single(1, 0)).unwrap();
        prop_assert!((c.probability - k.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn cancellation_zeroes_single_photon_term(seed: u64) {
        let mut r = rng(seed);
        let in1 = random::input_state(&mut r);
        let in2 = random::input_state(&mut r);
        if let Ok(bs) = solve_cancellation(&in1, &in2) {
            prop_assert!(stage_one_coefficients(&in1, &in2, bs).c1.norm() <= 1e-12);
            prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&bs.theta));
        }
    }

    #[test]
    fn cancellation_phase_tracks_beta1(seed: u64, chi in -PI..PI) {
        let mut r = rng(seed);
        let p1: f64 = r.gen_range(0.05..0.95);
        let p2: f64 = r.gen_range(0.05..0.95);
        let base1 = InputState::from_probability(p1, 0.0).unwrap();
        let in2 = InputState::from_probability(p2, r.gen_range(-PI..PI)).unwrap();
        let shifted = make_input(base1.alpha(), base1.beta() * Amplitude::from_polar(1.0, chi)).unwrap();
        let a = solve_cancellation(&base1, &in2).unwrap();
        let b = solve_cancellation(&shifted, &in2).unwrap();
        prop_assert!((a.theta - b.theta).abs() < 1e-12);
        prop_assert!(wrap(b.phi - a.phi - chi).abs() < 1e-9);
    }

    #[test]
    fn identical_inputs_need_balanced_splitter(seed: u64) {
        let mut r = rng(seed);
        let s = random::input_state(&mut r);
        if let Ok(bs) = solve_cancellation(&s, &s) {
            prop_assert!((bs.theta - FRAC_PI_4).abs() < 1e-12);
        }
    }

    #[test]
    fn scheme_output_is_pure_single_photon(seed: u64) {
        let mut r = rng(seed);
        let in1 = InputState::from_probability(r.gen_range(0.01..0.99), r.gen_range(-PI..PI)).unwrap();
        let in2 = InputState::from_probability(r.gen_range(0.01..0.99), r.gen_range(-PI..PI)).unwrap();
        let res = run_scheme(&in1, &in2);
        prop_assert!(!res.is_degenerate());
        prop_assert!(res.output_fidelity >= 1.0 - 1e-10);
        prop_assert!((res.p_success - closed_form_success(&in1, &in2, res.lambda1)).abs() < 1e-12);

        let k = stage_one_coefficients(&in1, &in2, res.lambda1);
        let two = stage_two(&k, res.lambda2).unwrap();
        prop_assert!((res.p_stage_one - k.norm_sqr()).abs() < 1e-12);
        prop_assert!((res.p_success - k.norm_sqr() * two.probability).abs() < 1e-12);
    }

    #[test]
    fn stage_two_optimum_is_balanced(seed: u64) {
        let mut r = rng(seed);
        let k = StageOneCoefficients {
            c0: random::amplitude(&mut r),
            c1: Amplitude::default(),
            c2: random::amplitude(&mut r),
        };
        let opt = optimize_stage_two(&k).unwrap();
        prop_assert!(opt.angle_gap() < 1e-8, "gap {:e}", opt.angle_gap());
        prop_assert!((opt.max_probability - opt.analytic_probability).abs() < 1e-10);
        let simulated = stage_two(&k, opt.params).unwrap();
        prop_assert!((simulated.probability - opt.max_probability).abs() < 1e-12);
    }
}

#[test]
fn balanced_input_state_round_trips() {
    let h = make_input(
        Amplitude::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Amplitude::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
    )
    .unwrap();
    let s = input_to_state(&h);
    assert_eq!(s.amp(&[0]), h.alpha());
    assert_eq!(s.amp(&[1]), h.beta());
}
