//! Property checks for Gaussian states, the loss channel, and the
//! measurement-optimized Gaussian discord.

use discordia::gaussian::{
    apply_loss, g_entropy, gaussian_discord, ppt_min_symplectic, GaussianState, LossyChannel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn losses_compose_multiplicatively() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..5 {
        let state = sample_state(&mut rng);
        let eta1 = 0.3 + 0.5 * rng.random::<f64>();
        let eta2 = 0.3 + 0.5 * rng.random::<f64>();
        let staged = apply_loss(
            &apply_loss(&state, 1, &LossyChannel::new(eta1).unwrap(), false).unwrap(),
            1,
            &LossyChannel::new(eta2).unwrap(),
            false,
        )
        .unwrap();
        let direct = apply_loss(&state, 1, &LossyChannel::new(eta1 * eta2).unwrap(), false).unwrap();
        assert!((staged.cov() - direct.cov()).norm() < 1e-10);
        assert!((staged.mean() - direct.mean()).norm() < 1e-10);
    }
}

fn sample_state(rng: &mut ChaCha8Rng) -> GaussianState {
    discordia::sample::random_two_mode_state(rng)
}

#[test]
fn kept_environment_purifies_the_loss() {
    for (mu, eta) in [(2.0, 0.3), (3.0, 0.5), (8.0, 0.8)] {
        let probe = GaussianState::tmsv(mu).unwrap();
        let full = apply_loss(&probe, 1, &LossyChannel::new(eta).unwrap(), true).unwrap();
        assert_eq!(full.modes(), 3);
        let ab = full.marginal(&[0, 1]).unwrap();
        let env = full.marginal(&[2]).unwrap();
        assert!((ab.entropy() - env.entropy()).abs() < 1e-8);
        // The three-mode state is pure overall.
        assert!(full.entropy().abs() < 1e-6);
    }
}

#[test]
fn marginals_commute_with_loss_on_untouched_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..5 {
        let state = sample_state(&mut rng);
        let lossy = apply_loss(&state, 1, &LossyChannel::new(0.6).unwrap(), false).unwrap();
        let before = state.marginal(&[0]).unwrap();
        let after = lossy.marginal(&[0]).unwrap();
        assert!((before.cov() - after.cov()).norm() < 1e-12);
        assert!((before.mean() - after.mean()).norm() < 1e-12);
    }
}

#[test]
fn discord_sits_between_zero_and_mutual_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for round in 0..8 {
        let state = sample_state(&mut rng);
        let mutual = state.mutual_information(&[0], &[1]).unwrap();
        for measured in [0usize, 1] {
            let outcome = gaussian_discord(&state, measured).unwrap();
            assert!(
                outcome.value >= -1e-7,
                "round {round}: discord = {}",
                outcome.value
            );
            assert!(
                outcome.value <= mutual + 1e-6,
                "round {round}: discord = {} exceeds I = {mutual}",
                outcome.value
            );
            assert!(outcome.lambda > 0.0);
            assert!((0.0..std::f64::consts::PI).contains(&outcome.theta));
        }
    }
}

#[test]
fn discord_exceeds_reverse_coherent_information() {
    // delta(B|A) - (S(A) - S(AB)) equals the minimum conditional entropy
    // g(sqrt(det V')), which is nonnegative.
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..8 {
        let state = sample_state(&mut rng);
        let rci = state.marginal(&[0]).unwrap().entropy() - state.entropy();
        let outcome = gaussian_discord(&state, 0).unwrap();
        assert!(
            outcome.value >= rci - 1e-7,
            "discord {} below coherent information {rci}",
            outcome.value
        );
    }
}

#[test]
fn heterodyne_is_optimal_for_the_lossy_probe() {
    // For a two-mode squeezed vacuum through loss, measuring the retained
    // arm with lambda = 1 leaves the lossy arm pure, so the discord equals
    // g(mu) - g((1 - eta) mu + eta) exactly.
    for (mu, eta) in [(2.0, 0.25), (5.0, 0.6), (40.0, 0.85)] {
        let probe = GaussianState::tmsv(mu).unwrap();
        let ab = apply_loss(&probe, 1, &LossyChannel::new(eta).unwrap(), false).unwrap();
        let outcome = gaussian_discord(&ab, 0).unwrap();
        let closed = g_entropy(mu).unwrap() - g_entropy((1.0 - eta) * mu + eta).unwrap();
        assert!(
            (outcome.value - closed).abs() < 1e-7,
            "mu = {mu}, eta = {eta}: discord = {}, closed form = {closed}",
            outcome.value
        );
        assert!((outcome.lambda - 1.0).abs() < 1e-3);
    }
}

#[test]
fn partial_transpose_flags_the_probe_but_not_the_environment_pair() {
    for mu in [1.5, 3.0, 20.0] {
        let probe = GaussianState::tmsv(mu).unwrap();
        let nu_ab = ppt_min_symplectic(&probe, &[1]).unwrap();
        assert!(nu_ab < 1.0, "tmsv({mu}) PPT eigenvalue {nu_ab} not below 1");

        let full = apply_loss(&probe, 1, &LossyChannel::new(0.4).unwrap(), true).unwrap();
        let be = full.marginal(&[1, 2]).unwrap();
        let nu_be = ppt_min_symplectic(&be, &[1]).unwrap();
        assert!(
            nu_be >= 1.0 - 1e-9,
            "mode-environment pair flagged entangled at mu = {mu}: {nu_be}"
        );
    }
}

#[test]
fn symplectic_spectrum_matches_across_a_pure_cut() {
    // Tracing either side of a pure state leaves the same nontrivial
    // symplectic eigenvalues, padded with ones.
    let probe = GaussianState::tmsv(4.0).unwrap();
    let full = apply_loss(&probe, 1, &LossyChannel::new(0.7).unwrap(), true).unwrap();
    let nu_ab = full.marginal(&[0, 1]).unwrap().symplectic_eigenvalues();
    let nu_e = full.marginal(&[2]).unwrap().symplectic_eigenvalues();
    assert_eq!(nu_ab.len(), 2);
    assert_eq!(nu_e.len(), 1);
    assert!((nu_ab[0] - 1.0).abs() < 1e-8, "trivial eigenvalue {}", nu_ab[0]);
    assert!((nu_ab[1] - nu_e[0]).abs() < 1e-8);
}

#[test]
fn gaussian_states_round_trip_through_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..5 {
        let state = sample_state(&mut rng);
        let text = serde_json::to_string(&state).unwrap();
        let back: GaussianState = serde_json::from_str(&text).unwrap();
        assert_eq!(state.modes(), back.modes());
        assert_eq!(state.mean(), back.mean());
        assert_eq!(state.cov(), back.cov());
    }
}
