use super::*;
use crate::constellation::{qam_points, Constellation};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(n: usize, kind: DetectorKind, eta: f64, nu: f64, tau: f64, xi: f64) -> ReceiverParams {
    ReceiverParams::new(n, tau, xi, DetectorModel::new(kind, eta, nu).unwrap()).unwrap()
}

#[test]
fn slicing() {
    let c = Constellation::uniform(vec![c64(2.0, 0.0), c64(1.0, 1.0)], 1.0).unwrap();
    assert_eq!(slice_amplitude(&c, 0, 4), c64(1.0, 0.0));
    assert_eq!(slice_amplitude(&c, 1, 1), c64(1.0, 1.0));
    for n in [1, 3, 7, 20] {
        let s = slice_amplitude(&c, 1, n);
        assert!((n as f64 * s.norm_sqr() - 2.0).abs() < 1e-15);
    }
}

#[test]
fn displaced_intensity_examples() {
    let phi = c64(0.4, -0.9);
    for tau in [0.3f64, 0.81, 1.0] {
        let beta = tau.sqrt() * phi;
        assert!(displaced_intensity(phi, beta, tau, 1.0).abs() < 1e-16);
        let any = c64(2.0, 5.0);
        assert!((displaced_intensity(phi, any, tau, 0.0) - tau * phi.norm_sqr()).abs() < 1e-15);
    }
    let i = displaced_intensity(c64(1.0, 0.0), c64(0.0, 0.0), 0.99, 0.995);
    assert!((i - (0.995 * 0.99 + 0.005 * 0.99)).abs() < 1e-15);
    assert!((i - 0.99).abs() < 1e-15);
}

#[test]
fn local_field_examples() {
    let c = Constellation::uniform(vec![c64(2.0, 0.0)], 1.0).unwrap();
    let f = local_field(&c, 0, 0.81, 4);
    assert!((f.amplitude - c64(0.9, 0.0)).norm() < 1e-15);

    let q = qam_points(16, 1.0).unwrap();
    let f = local_field(&q, 0, 1.0, 1);
    assert_eq!(f.amplitude, q.point(0));
    let ideal = ReceiverParams::ideal(5, DetectorKind::OnOff);
    for k in 0..16 {
        let f = local_field(&q, k, 1.0, 5);
        let phi = slice_amplitude(&q, k, 5);
        assert!(displaced_intensity(phi, f.amplitude, 1.0, 1.0).abs() < 1e-15);
        assert_eq!(hypothesis_mean(&q, k, k, &ideal), 0.0);
    }
}

#[test]
fn nulled_hypothesis_cannot_click() {
    let q = qam_points(16, 0.8).unwrap();
    let p = ReceiverParams::ideal(4, DetectorKind::OnOff);
    for k in [0, 5, 15] {
        let like = likelihoods(&q, &local_field(&q, k, 1.0, 4), CountOutcome::Saturated, &p);
        assert_eq!(like[k], 0.0);
        assert!(like.iter().enumerate().all(|(m, &l)| m == k || l > 0.0));
    }
}

#[test]
fn no_mode_match_carries_no_information() {
    let q = qam_points(16, 1.0).unwrap();
    let p = params(3, DetectorKind::PnrdInfinite, 0.9, 1e-3, 0.95, 0.0);
    let field = local_field(&q, 6, p.tau, 3);
    for n in 0..4 {
        let like = likelihoods(&q, &field, CountOutcome::Exact(n), &p);
        for a in 0..16 {
            for b in 0..16 {
                if (q.point(a).norm_sqr() - q.point(b).norm_sqr()).abs() < 1e-12 {
                    assert_eq!(like[a], like[b]);
                }
            }
        }
    }
}

#[test]
fn four_qam_likelihoods_by_hand() {
    // α = 1, N = 2, nulling (−1 − i): slice means |φ_m − φ_0|²/2 = 0, 2, 2, 4
    let q = qam_points(4, 1.0).unwrap();
    let p = ReceiverParams::ideal(2, DetectorKind::PnrdInfinite);
    let like = likelihoods(&q, &local_field(&q, 0, 1.0, 2), CountOutcome::Exact(1), &p);
    let want = [
        0.0,
        2.0 * (-2.0f64).exp(),
        2.0 * (-2.0f64).exp(),
        4.0 * (-4.0f64).exp(),
    ];
    for (g, w) in like.iter().zip(want) {
        assert!((g - w).abs() < 1e-15, "{like:?}");
    }

    // imperfect devices: compare against the generic β-displacement route
    let p = params(2, DetectorKind::PnrdInfinite, 0.8, 0.01, 0.9, 0.95);
    let field = local_field(&q, 2, p.tau, 2);
    let like = likelihoods(&q, &field, CountOutcome::Exact(2), &p);
    for (m, &got) in like.iter().enumerate() {
        let intensity =
            displaced_intensity(slice_amplitude(&q, m, 2), field.amplitude, p.tau, p.xi);
        let mu = p.detector.nu + p.detector.eta * intensity;
        let want = (-mu).exp() * mu * mu / 2.0;
        assert!((got - want).abs() < 1e-14 * want, "{m}: {got} vs {want}");
    }
}

#[test]
fn bayes_examples() {
    assert_eq!(bayes_update(&[0.25; 4], &[0.3; 4]).unwrap(), vec![0.25; 4]);
    let post = bayes_update(&[0.2, 0.3, 0.5], &[0.4, 0.0, 0.1]).unwrap();
    assert_eq!(post[1], 0.0);
    let post = bayes_update(&[0.5, 0.5], &[0.2, 0.6]).unwrap();
    assert!((post[0] - 0.25).abs() < 1e-15 && (post[1] - 0.75).abs() < 1e-15);
    assert!(matches!(
        bayes_update(&[0.5, 0.5], &[0.0, 0.0]),
        Err(Error::DegenerateEvidence)
    ));
}

#[test]
fn map_examples() {
    assert_eq!(map_decision(&[0.1, 0.7, 0.1, 0.1]), 1);
    assert_eq!(map_decision(&[0.25; 4]), 0);
    assert_eq!(map_decision(&[0.1, 0.4, 0.4, 0.1]), 1);
}

#[test]
fn ideal_receiver_never_misses_symbol_zero() {
    let q = qam_points(16, 1.2).unwrap();
    for n in [1, 4, 10] {
        for kind in [
            DetectorKind::OnOff,
            DetectorKind::PnrdFinite(2),
            DetectorKind::PnrdInfinite,
        ] {
            let p = ReceiverParams::ideal(n, kind);
            let rx = AdaptiveReceiver::new(&q, &p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..200 {
                assert_eq!(rx.run_trial(0, &mut rng), 0);
            }
            let (d, trace) = rx.run_trial_traced(0, &mut rng);
            assert_eq!(d, 0);
            assert!(trace.iter().all(|s| s.outcome == CountOutcome::Exact(0)));
        }
    }
}

#[test]
fn single_slice_on_off_decisions() {
    // N = 1, nulling φ_0: a click rules out 0 and favours the farthest point
    let q = qam_points(4, 1.0).unwrap();
    let p = ReceiverParams::ideal(1, DetectorKind::OnOff);
    let f = local_field(&q, 0, 1.0, 1);
    let click = bayes_update(
        q.priors(),
        &likelihoods(&q, &f, CountOutcome::Saturated, &p),
    )
    .unwrap();
    assert_eq!(map_decision(&click), 3);
    let dark = bayes_update(q.priors(), &likelihoods(&q, &f, CountOutcome::Exact(0), &p)).unwrap();
    assert_eq!(map_decision(&dark), 0);

    let rx = AdaptiveReceiver::new(&q, &p).unwrap();
    // click probability for sent = 3 is 1 − e^{−8}; u below e^{−8} gives no click
    assert_eq!(rx.sample_outcome(0, 3, 0.5), 1);
    assert_eq!(rx.sample_outcome(0, 3, 1e-5), 0);
}

#[test]
fn simulate_trial_validates_input() {
    let q = qam_points(4, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(simulate_trial(
        &q,
        4,
        &ReceiverParams::ideal(2, DetectorKind::OnOff),
        &mut rng
    )
    .is_err());
    let mut bad = ReceiverParams::ideal(2, DetectorKind::OnOff);
    bad.n_partitions = 0;
    assert!(simulate_trial(&q, 0, &bad, &mut rng).is_err());
    bad = ReceiverParams::ideal(2, DetectorKind::OnOff);
    bad.xi = 1.5;
    assert!(simulate_trial(&q, 0, &bad, &mut rng).is_err());
}

#[test]
fn table_matches_direct_evaluation() {
    let q = qam_points(16, 1.3).unwrap();
    let p = params(3, DetectorKind::PnrdInfinite, 0.723, 2.7e-5, 0.99, 0.995);
    let rx = AdaptiveReceiver::new(&q, &p).unwrap();
    let mut scratch = Vec::new();
    for target in [0, 9] {
        let field = local_field(&q, target, p.tau, 3);
        for n in [0u32, 1, 5, 30, 5000] {
            let direct = likelihoods(&q, &field, CountOutcome::Exact(n), &p);
            assert_eq!(
                rx.likelihood_row(target, n as usize, &mut scratch),
                direct.as_slice()
            );
        }
    }
}

proptest! {
    #[test]
    fn on_off_is_resolution_zero(i in 0.0..50.0f64, eta in 0.0..=1.0f64, nu in 0.0..0.5f64) {
        let a = count_pmf(i, &DetectorModel::new(DetectorKind::OnOff, eta, nu).unwrap());
        let b = count_pmf(i, &DetectorModel::new(DetectorKind::PnrdFinite(0), eta, nu).unwrap());
        for o in [CountOutcome::Exact(0), CountOutcome::Exact(1), CountOutcome::Saturated] {
            prop_assert_eq!(a.prob(o).to_bits(), b.prob(o).to_bits());
        }
    }

    #[test]
    fn efficiency_and_transmittance_enter_as_product(
        a in 0.0..=1.0f64, b in 0.0..=1.0f64, nu in 0.0..0.1f64, alpha in 0.1..2.0f64,
        sent in 0usize..16, target in 0usize..16, n in 1usize..12,
    ) {
        let q = qam_points(16, alpha).unwrap();
        let mk = |eta: f64, tau: f64| params(n, DetectorKind::PnrdFinite(3), eta, nu, tau, 1.0);
        let m1 = hypothesis_mean(&q, sent, target, &mk(a, b));
        let m2 = hypothesis_mean(&q, sent, target, &mk(b, a));
        let m3 = hypothesis_mean(&q, sent, target, &mk(a * b, 1.0));
        prop_assert_eq!(m1.to_bits(), m2.to_bits());
        prop_assert_eq!(m1.to_bits(), m3.to_bits());
    }

    #[test]
    fn posteriors_stay_normalized(seed in any::<u64>(), sent in 0usize..16, nu in 0.0..0.05f64, xi in 0.9..=1.0f64) {
        let q = qam_points(16, 0.9).unwrap();
        let p = params(8, DetectorKind::PnrdFinite(2), 0.8, nu, 0.97, xi);
        let rx = AdaptiveReceiver::new(&q, &p).unwrap();
        let (_, trace) = rx.run_trial_traced(sent, &mut ChaCha8Rng::seed_from_u64(seed));
        for s in &trace {
            prop_assert!((s.posteriors.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(s.posteriors.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn trials_are_deterministic(seed in any::<u64>(), sent in 0usize..16) {
        let q = qam_points(16, 1.0).unwrap();
        let p = params(6, DetectorKind::PnrdInfinite, 0.9, 1e-3, 1.0, 0.99);
        let rx = AdaptiveReceiver::new(&q, &p).unwrap();
        let a = rx.run_trial(sent, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = rx.run_trial(sent, &mut ChaCha8Rng::seed_from_u64(seed));
        let (c, _) = rx.run_trial_traced(sent, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = simulate_trial(&q, sent, &p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a, c);
        prop_assert_eq!(a, d);
    }

    #[test]
    fn map_is_scale_invariant(v in proptest::collection::vec(0.0..1.0f64, 1..20), s in 1e-3..1e3f64) {
        let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
        prop_assert_eq!(map_decision(&v), map_decision(&scaled));
    }
}
