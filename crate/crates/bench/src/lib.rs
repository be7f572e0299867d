//! Shared fixtures for the criterion targets: states that are expensive
//! enough to exercise the optimizers without dominating setup time.

use discordia::gaussian::{apply_loss, LossyChannel};
use discordia::{GaussianState, QState};

/// Two-qubit state with nontrivial discord for the measurement benches.
pub fn mixed_pair() -> QState {
    QState::werner(0.65).expect("mixing weight is in range")
}

/// Two-mode squeezed vacuum after a balanced loss, the key-rate workload.
pub fn lossy_pair() -> GaussianState {
    let probe = GaussianState::tmsv(3.0).expect("variance is in range");
    apply_loss(
        &probe,
        1,
        &LossyChannel::new(0.5).expect("transmissivity is in range"),
        false,
    )
    .expect("mode index is in range")
}

/// Purified version of [`lossy_pair`], three modes.
pub fn lossy_triple() -> GaussianState {
    let probe = GaussianState::tmsv(3.0).expect("variance is in range");
    apply_loss(
        &probe,
        1,
        &LossyChannel::new(0.5).expect("transmissivity is in range"),
        true,
    )
    .expect("mode index is in range")
}
