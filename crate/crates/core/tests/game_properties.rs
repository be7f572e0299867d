//! Property checks for the channel-guessing game and the sampled
//! certification protocol.

use discordia::game::{self, BOUND_SLACK};
use discordia::{info, sample, CertifyStrategy, EncodingEnsemble, QState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_chains(report: &game::GameReport, label: &str) {
    let classical_gain = report.ic - report.i0;
    assert!(
        report.j - report.j_tilde <= classical_gain + BOUND_SLACK,
        "{label}: classical lower bound violated"
    );
    assert!(
        classical_gain <= report.j + BOUND_SLACK,
        "{label}: classical upper bound violated"
    );
    let discord_drop = report.discord_before - report.discord_after;
    let quantum_gain = report.iq - report.ic;
    assert!(
        discord_drop - report.mutual_tilde <= quantum_gain + BOUND_SLACK,
        "{label}: quantum lower bound violated"
    );
    assert!(
        quantum_gain <= discord_drop + BOUND_SLACK,
        "{label}: quantum upper bound violated"
    );
    assert!(report.classical_chain_ok, "{label}: classical flag cleared");
    assert!(report.quantum_chain_ok, "{label}: quantum flag cleared");
}

#[test]
fn information_chains_hold_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..12 {
        let state = sample::random_state(&mut rng, &[2, 2]);
        let ensemble = if round % 2 == 0 {
            EncodingEnsemble::uniform_paulis(0)
        } else {
            sample::random_ensemble(&mut rng, 4, 2, 0)
        };
        let report = game::run_game(&state, &ensemble).unwrap();
        assert_chains(&report, &format!("round {round}"));
        assert!((report.delta_q - (report.iq - report.ic)).abs() < 1e-12);
        // Dephasing the spectator is a channel on each codeword, so the
        // classical ceiling can never exceed the quantum information.
        assert!(report.ic <= report.iq + 1e-9, "round {round}: ic above iq");
        assert!(report.i0 >= -1e-9 && report.iq >= -1e-9);
    }
}

#[test]
fn chains_hold_when_encoding_the_second_qubit() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for round in 0..4 {
        let state = sample::random_state(&mut rng, &[2, 2]);
        let ensemble = sample::random_ensemble(&mut rng, 3, 2, 1);
        let report = game::run_game(&state, &ensemble).unwrap();
        assert_chains(&report, &format!("target-1 round {round}"));
    }
}

#[test]
fn maximal_encoding_identities_on_random_states() {
    // A uniform Pauli ensemble scrambles the encoded qubit completely, so
    // i0, ic, and iq reduce to closed forms in the input correlations.
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..6 {
        let state = sample::random_state(&mut rng, &[2, 2]);
        let ensemble = EncodingEnsemble::uniform_paulis(0);
        let report = game::run_game(&state, &ensemble).unwrap();
        assert!(report.maximal);

        let s_a = info::vn_entropy(&state.partial_trace(&[0]).unwrap());
        let mutual = info::mutual_info(&state, &[0], &[1]).unwrap();
        let (j, _) = info::classical_corr(&state, 1).unwrap();
        assert!((report.i0 - (1.0 - s_a)).abs() < 1e-9);
        assert!((report.iq - (report.i0 + mutual)).abs() < 1e-9);
        assert!(
            (report.ic - (report.i0 + j)).abs() < 2e-4,
            "ic = {}, i0 + J = {}",
            report.ic,
            report.i0 + j
        );
        assert!((report.j - j).abs() < 2e-4);
    }
}

#[test]
fn zero_discord_states_grant_no_quantum_advantage() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..6 {
        let state = sample::random_classical_classical(&mut rng);
        let report = game::run_game(&state, &EncodingEnsemble::uniform_paulis(0)).unwrap();
        assert!(
            report.delta_q <= BOUND_SLACK,
            "classical state yielded quantum advantage {}",
            report.delta_q
        );
    }
}

#[test]
fn certification_is_deterministic_per_seed() {
    let state = QState::bell();
    let a = game::certify(&state, CertifyStrategy::QuantumBell, 2000, 99).unwrap();
    let b = game::certify(&state, CertifyStrategy::QuantumBell, 2000, 99).unwrap();
    assert_eq!(a.transcript, b.transcript);
    assert_eq!(a.mi_estimate.to_bits(), b.mi_estimate.to_bits());
    assert_eq!(a.margin.to_bits(), b.margin.to_bits());
    assert_eq!(a.certified, b.certified);

    let c = game::certify(&state, CertifyStrategy::QuantumBell, 2000, 100).unwrap();
    assert_ne!(a.transcript, c.transcript);
}

#[test]
fn transcripts_stay_within_the_alphabet() {
    let state = QState::werner(0.8).unwrap();
    for strategy in [
        CertifyStrategy::Memoryless,
        CertifyStrategy::Classical,
        CertifyStrategy::QuantumBell,
    ] {
        let report = game::certify(&state, strategy, 1500, 7).unwrap();
        assert_eq!(report.transcript.len(), 1500);
        assert!(report.transcript.iter().all(|&(k, g)| k < 4 && g < 4));
        assert!(report.mi_estimate >= 0.0 && report.mi_estimate <= 2.0);
        assert!(report.margin >= 0.0);
    }
}

#[test]
fn separable_strategies_stay_below_the_ceiling() {
    // On a Bell pair the ceiling is ic = 1; only the entangling
    // measurement should clear it.
    let state = QState::bell();
    for (strategy, seed) in [
        (CertifyStrategy::Memoryless, 41u64),
        (CertifyStrategy::Classical, 42),
    ] {
        let report = game::certify(&state, strategy, 6000, seed).unwrap();
        assert!(
            !report.certified,
            "{:?} certified with mi = {}, ic = {}, margin = {}",
            report.strategy, report.mi_estimate, report.ic, report.margin
        );
    }
    let bell = game::certify(&state, CertifyStrategy::QuantumBell, 6000, 43).unwrap();
    assert!(bell.certified);
    assert!(bell.mi_estimate > bell.ic + bell.margin);
}

#[test]
fn certification_reports_serialize_without_transcripts() {
    let report = game::certify(&QState::bell(), CertifyStrategy::Memoryless, 1000, 5).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    assert!(!text.contains("transcript"));
    let back: game::CertificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.rounds, report.rounds);
    assert_eq!(back.mi_estimate.to_bits(), report.mi_estimate.to_bits());
    assert!(back.transcript.is_empty());
}

#[test]
fn ensembles_round_trip_through_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let ensemble = sample::random_ensemble(&mut rng, 3, 2, 1);
    let text = serde_json::to_string(&ensemble).unwrap();
    let back: EncodingEnsemble = serde_json::from_str(&text).unwrap();
    assert_eq!(back.target(), 1);
    assert_eq!(back.len(), 3);
    for (left, right) in ensemble.entries().iter().zip(back.entries()) {
        assert_eq!(left.0.to_bits(), right.0.to_bits());
        assert_eq!(left.1.matrix(), right.1.matrix());
    }
}
