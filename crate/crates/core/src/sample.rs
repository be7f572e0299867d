//! Seeded random instances for property tests and benchmarks: states from
//! the Hilbert-Schmidt ensemble, Haar-distributed unitaries, structured
//! zero-discord states, and bona fide Gaussian covariances.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::game::EncodingEnsemble;
use crate::gaussian::GaussianState;
use crate::qmat::{kron, CMatrix, QState, UnitaryOp};

/// Complex Ginibre matrix: independent entries `(N(0,1) + i N(0,1)) / sqrt(2)`.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Density matrix drawn from the Hilbert-Schmidt ensemble,
/// `G G^dag / tr(G G^dag)`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> QState {
    let d: usize = dims.iter().product();
    let g = ginibre(rng, d, d);
    let mut m = &g * g.adjoint();
    let trace = m.trace().re;
    m /= Complex::new(trace, 0.0);
    QState::new(dims.to_vec(), m).expect("Wishart normalization yields a valid density matrix")
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase
/// convention fixed by the diagonal of `R`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = ginibre(rng, dim, dim);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random unitary wrapped as an operation on `target`.
pub fn random_unitary_op<R: Rng + ?Sized>(rng: &mut R, dim: usize, target: usize) -> UnitaryOp {
    UnitaryOp::new(haar_unitary(rng, dim), target).expect("QR produces a unitary matrix")
}

/// Uniform ensemble of `count` Haar-random unitaries on `target`.
pub fn random_ensemble<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    dim: usize,
    target: usize,
) -> EncodingEnsemble {
    let p = 1.0 / count as f64;
    let entries = (0..count)
        .map(|_| (p, random_unitary_op(rng, dim, target)))
        .collect();
    EncodingEnsemble::new(entries).expect("uniform probabilities are valid")
}

/// Random probability vector (normalized uniforms).
fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 1e-9).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// Two-qubit state that is classical on both sides: a random joint
/// distribution over the product of two random local bases. Its discord
/// vanishes for measurements on either side.
pub fn random_classical_classical<R: Rng + ?Sized>(rng: &mut R) -> QState {
    let u_a = haar_unitary(rng, 2);
    let u_b = haar_unitary(rng, 2);
    let p = random_probabilities(rng, 4);
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            let a = u_a.column(i) * u_a.column(i).adjoint();
            let b = u_b.column(j) * u_b.column(j).adjoint();
            m += kron(&a, &b) * Complex::new(p[2 * i + j], 0.0);
        }
    }
    QState::new(vec![2, 2], m).expect("mixture of product projectors is a valid state")
}

/// Two-qubit state that is classical on the second side only:
/// `sum_b p_b rho_b (x) |v_b><v_b|` with a random basis `{v_b}`. Measuring
/// side 1 in that basis extracts all correlations, so the discord of side
/// 0 given that measurement is zero.
pub fn random_classical_on_b<R: Rng + ?Sized>(rng: &mut R) -> QState {
    let u_b = haar_unitary(rng, 2);
    let p = random_probabilities(rng, 2);
    let mut m = CMatrix::zeros(4, 4);
    for b in 0..2 {
        let rho_a = random_state(rng, &[2]);
        let proj_b = u_b.column(b) * u_b.column(b).adjoint();
        m += kron(rho_a.matrix(), &proj_b) * Complex::new(p[b], 0.0);
    }
    QState::new(vec![2, 2], m).expect("classical-quantum mixture is a valid state")
}

/// Bona fide two-mode covariance: `s A A^T + I` dominates the vacuum, so
/// the uncertainty relation holds by construction; the constructor
/// validation acts as the rejection step for floating-point edge cases.
pub fn random_two_mode_state<R: Rng + ?Sized>(rng: &mut R) -> GaussianState {
    loop {
        let scale: f64 = 0.1 + 0.9 * rng.random::<f64>();
        let a = DMatrix::from_fn(4, 4, |_, _| {
            let x: f64 = rng.sample(StandardNormal);
            x
        });
        let cov = &a * a.transpose() * scale + DMatrix::identity(4, 4);
        let mean = DVector::from_fn(4, |_, _| {
            let x: f64 = rng.sample(StandardNormal);
            x
        });
        if let Ok(state) = GaussianState::new(2, mean, cov) {
            return state;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_states_are_valid_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_state(&mut rng, &[2, 2]);
        assert_eq!(a.dims(), &[2, 2]);
        let mut rng2 = ChaCha8Rng::seed_from_u64(3);
        let b = random_state(&mut rng2, &[2, 2]);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn haar_unitaries_pass_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dim in [2usize, 3, 4] {
            let op = random_unitary_op(&mut rng, dim, 0);
            assert_eq!(op.matrix().nrows(), dim);
        }
    }

    #[test]
    fn classical_classical_states_have_no_discord() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let state = random_classical_classical(&mut rng);
            let report = info::discord(&state, 1).unwrap();
            assert!(report.discord.abs() < 1e-6, "discord = {}", report.discord);
        }
    }

    #[test]
    fn classical_on_b_states_have_no_discord_on_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let state = random_classical_on_b(&mut rng);
            let report = info::discord(&state, 1).unwrap();
            assert!(report.discord.abs() < 1e-6, "discord = {}", report.discord);
        }
    }

    #[test]
    fn random_covariances_are_bona_fide() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let state = random_two_mode_state(&mut rng);
            let nu_min = state
                .symplectic_eigenvalues()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            assert!(nu_min >= 1.0 - 1e-9, "nu_min = {nu_min}");
        }
    }
}
