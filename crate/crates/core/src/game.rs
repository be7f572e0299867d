//! Channel-guessing game: how much does memory help identify a random
//! local operation?
//!
//! A referee draws an index `k` with probability `p_k` and applies the
//! unitary `U_k` to one side of a shared bipartite state. Three figures of
//! merit bound the information a player can recover about `k`:
//!
//! * `iq`: perfect quantum memory, keeping the joint output state,
//! * `i0`: no memory at all, keeping only the encoded subsystem,
//! * `ic`: classical memory obtained by dephasing the spectator side
//!   in its best basis.
//!
//! The gaps between these are controlled by the correlation measures of
//! the pre- and post-averaging states, and the [`certify`] protocol turns
//! the `ic` ceiling into a sampling test for entangling measurements.

use nalgebra::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::info::{
    self, bloch_kets, classical_corr, conditional_block, mutual_info, vn_entropy,
    MeasurementBasis, MeasuredGeometry,
};
use crate::optim;
use crate::qmat::{matrix_from_rows, matrix_rows, CMatrix, CVector, QState, UnitaryOp};

/// Slack applied to the information-bound chains: the classical
/// correlations entering them are grid estimates accurate to about 1e-4,
/// while the chains themselves can saturate exactly.
pub const BOUND_SLACK: f64 = 1e-2;

/// Deviation threshold of the averaged marginal from the maximally mixed
/// state under which an encoding counts as maximally randomizing.
pub const MAXIMAL_ENCODING_TOL: f64 = 1e-9;

/// Smallest number of game rounds accepted by [`certify`]; below this the
/// mutual-information estimator bias is comparable to the margins tested.
pub const MIN_CERTIFY_ROUNDS: usize = 1000;

const ANGLE_GRID: usize = 30;

/// Probability-weighted set of unitaries all acting on the same subsystem.
#[derive(Debug, Clone)]
pub struct EncodingEnsemble {
    entries: Vec<(f64, UnitaryOp)>,
}

impl EncodingEnsemble {
    /// Validates probabilities (nonnegative, summing to one) and checks
    /// that every unitary targets the same subsystem with equal dimension.
    pub fn new(entries: Vec<(f64, UnitaryOp)>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::InvalidProbabilities { sum: 0.0 });
        }
        let sum: f64 = entries.iter().map(|(p, _)| p).sum();
        if entries.iter().any(|(p, _)| *p < 0.0) || (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities { sum });
        }
        let target = entries[0].1.target();
        let dim = entries[0].1.matrix().nrows();
        for (_, op) in &entries {
            if op.target() != target {
                return Err(Error::InvalidPartition {
                    reason: "all encoding unitaries must act on the same subsystem".into(),
                });
            }
            if op.matrix().nrows() != dim {
                return Err(Error::DimensionMismatch {
                    context: "encoding unitaries",
                    expected: dim,
                    actual: op.matrix().nrows(),
                });
            }
        }
        Ok(EncodingEnsemble { entries })
    }

    /// Uniform flip ensemble `{I, Z, X, XZ}`, indexed `k = 2a + b` for
    /// `X^a Z^b`. Averaging it fully randomizes any qubit.
    pub fn uniform_paulis(target: usize) -> Self {
        let ops = [
            UnitaryOp::identity(2, target),
            UnitaryOp::pauli_z(target),
            UnitaryOp::pauli_x(target),
            UnitaryOp::pauli_xz(target),
        ];
        EncodingEnsemble {
            entries: ops.into_iter().map(|op| (0.25, op)).collect(),
        }
    }

    pub fn entries(&self) -> &[(f64, UnitaryOp)] {
        &self.entries
    }

    pub fn target(&self) -> usize {
        self.entries[0].1.target()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct EnsembleWire {
    target: usize,
    entries: Vec<EnsembleEntryWire>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleEntryWire {
    p: f64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for EncodingEnsemble {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries = self
            .entries
            .iter()
            .map(|(p, op)| {
                let (re, im) = matrix_rows(op.matrix());
                EnsembleEntryWire { p: *p, re, im }
            })
            .collect();
        EnsembleWire {
            target: self.target(),
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EncodingEnsemble {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = EnsembleWire::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(wire.entries.len());
        for e in &wire.entries {
            let m = matrix_from_rows(&e.re, &e.im).map_err(serde::de::Error::custom)?;
            let op = UnitaryOp::new(m, wire.target).map_err(serde::de::Error::custom)?;
            entries.push((e.p, op));
        }
        EncodingEnsemble::new(entries).map_err(serde::de::Error::custom)
    }
}

/// Codewords `U_k rho U_k^dag` with their probabilities, and the averaged
/// state `sum_k p_k U_k rho U_k^dag`.
pub fn encode(
    state: &QState,
    ensemble: &EncodingEnsemble,
) -> Result<(Vec<(f64, QState)>, QState), Error> {
    let mut codewords = Vec::with_capacity(ensemble.len());
    let mut average = CMatrix::zeros(state.total_dim(), state.total_dim());
    for (p, op) in ensemble.entries() {
        let codeword = state.apply_unitary(op)?;
        average += codeword.matrix() * Complex::new(*p, 0.0);
        codewords.push((*p, codeword));
    }
    let averaged = QState::from_valid_parts(state.dims().to_vec(), average);
    Ok((codewords, averaged))
}

/// Information retrievable with perfect quantum memory:
/// `S(averaged) - S(state)`, the Holevo quantity of the codeword ensemble.
pub fn quantum_memory_info(state: &QState, ensemble: &EncodingEnsemble) -> Result<f64, Error> {
    let (_, averaged) = encode(state, ensemble)?;
    Ok(vn_entropy(&averaged) - vn_entropy(state))
}

/// Information retrievable from the encoded subsystem alone:
/// `S(averaged marginal) - S(marginal)`.
pub fn memoryless_info(state: &QState, ensemble: &EncodingEnsemble) -> Result<f64, Error> {
    let (_, averaged) = encode(state, ensemble)?;
    let keep = [ensemble.target()];
    Ok(vn_entropy(&averaged.partial_trace(&keep)?) - vn_entropy(&state.partial_trace(&keep)?))
}

/// Information ceiling with classical memory: the Holevo quantity of the
/// codewords after the spectator side is dephased in its best basis.
///
/// Dephasing commutes with the encoding, so the objective reduces to
/// `S(dephased averaged) - S(dephased state)`, maximized over rank-1
/// qubit bases on the spectator subsystem.
pub fn classical_memory_info(
    state: &QState,
    ensemble: &EncodingEnsemble,
) -> Result<(f64, MeasurementBasis), Error> {
    let spectator = spectator_subsystem(state, ensemble)?;
    let (_, averaged) = encode(state, ensemble)?;
    let geometry = MeasuredGeometry::new(state, spectator)?;

    let objective = |theta: f64, phi: f64| {
        let (k0, k1) = bloch_kets(theta, phi);
        let mut dephased_avg = 0.0;
        let mut dephased_in = 0.0;
        for ket in [&k0, &k1] {
            dephased_avg += info::raw_entropy(&conditional_block(&averaged, &geometry, ket));
            dephased_in += info::raw_entropy(&conditional_block(state, &geometry, ket));
        }
        dephased_avg - dephased_in
    };
    let outcome = optim::grid_then_refine(
        objective,
        (0.0, std::f64::consts::PI),
        ANGLE_GRID,
        (0.0, std::f64::consts::TAU * (1.0 - 1.0 / ANGLE_GRID as f64)),
        ANGLE_GRID,
    );
    Ok((
        outcome.value,
        MeasurementBasis::from_bloch_angles(outcome.point[0], outcome.point[1]),
    ))
}

/// Full diagnostic record of one game instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameReport {
    /// Memoryless information `i0`.
    pub i0: f64,
    /// Classical-memory ceiling `ic`.
    pub ic: f64,
    /// Spectator basis achieving `ic`.
    pub ic_basis: MeasurementBasis,
    /// Quantum-memory information `iq`.
    pub iq: f64,
    /// Quantum advantage `iq - ic`.
    pub delta_q: f64,
    /// Classical correlations of the input state, measuring the spectator.
    pub j: f64,
    /// Classical correlations of the averaged state.
    pub j_tilde: f64,
    /// Discord of the input state.
    pub discord_before: f64,
    /// Discord of the averaged state.
    pub discord_after: f64,
    /// Mutual information of the averaged state.
    pub mutual_tilde: f64,
    /// Whether the encoding fully randomizes the encoded marginal.
    pub maximal: bool,
    /// `j - j_tilde <= ic - i0 <= j` within [`BOUND_SLACK`].
    pub classical_chain_ok: bool,
    /// `(discord drop) - mutual_tilde <= iq - ic <= discord drop`
    /// within [`BOUND_SLACK`].
    pub quantum_chain_ok: bool,
}

/// Plays one game instance exactly and checks the information-bound chains.
pub fn run_game(state: &QState, ensemble: &EncodingEnsemble) -> Result<GameReport, Error> {
    let spectator = spectator_subsystem(state, ensemble)?;
    let target = ensemble.target();
    let (_, averaged) = encode(state, ensemble)?;

    let iq = vn_entropy(&averaged) - vn_entropy(state);
    let i0 = vn_entropy(&averaged.partial_trace(&[target])?)
        - vn_entropy(&state.partial_trace(&[target])?);
    let (ic, ic_basis) = classical_memory_info(state, ensemble)?;

    let (j, _) = classical_corr(state, spectator)?;
    let (j_tilde, _) = classical_corr(&averaged, spectator)?;
    let sides: (Vec<usize>, Vec<usize>) = (vec![target.min(spectator)], vec![target.max(spectator)]);
    let mutual_before = mutual_info(state, &sides.0, &sides.1)?;
    let mutual_tilde = mutual_info(&averaged, &sides.0, &sides.1)?;
    let discord_before = mutual_before - j;
    let discord_after = mutual_tilde - j_tilde;

    let marginal = averaged.partial_trace(&[target])?;
    let d = marginal.total_dim();
    let mixed = CMatrix::identity(d, d) * Complex::new(1.0 / d as f64, 0.0);
    let maximal = crate::qmat::max_abs(&(marginal.matrix() - mixed)) <= MAXIMAL_ENCODING_TOL;

    let discord_drop = discord_before - discord_after;
    let classical_chain_ok =
        (j - j_tilde) - BOUND_SLACK <= (ic - i0) && (ic - i0) <= j + BOUND_SLACK;
    let quantum_chain_ok = (discord_drop - mutual_tilde) - BOUND_SLACK <= (iq - ic)
        && (iq - ic) <= discord_drop + BOUND_SLACK;

    Ok(GameReport {
        i0,
        ic,
        ic_basis,
        iq,
        delta_q: iq - ic,
        j,
        j_tilde,
        discord_before,
        discord_after,
        mutual_tilde,
        maximal,
        classical_chain_ok,
        quantum_chain_ok,
    })
}

/// Receiver strategies for the sampled certification game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyStrategy {
    /// Discard the spectator qubit; measure the encoded qubit in the best
    /// fixed basis.
    Memoryless,
    /// Measure the spectator qubit in the `ic`-optimal basis before the
    /// encoding, then measure the encoded qubit in the best fixed basis.
    Classical,
    /// Jointly measure both qubits in the Bell basis.
    QuantumBell,
}

impl std::str::FromStr for CertifyStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "memoryless" => Ok(CertifyStrategy::Memoryless),
            "classical" => Ok(CertifyStrategy::Classical),
            "quantum_bell" => Ok(CertifyStrategy::QuantumBell),
            other => Err(Error::domain(format!(
                "unknown strategy '{other}'; expected memoryless, classical, or quantum_bell"
            ))),
        }
    }
}

/// Outcome of a sampled certification run.
///
/// The strategy is certified as entangling when its estimated mutual
/// information clears the classical-memory ceiling by more than the
/// statistical margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificationReport {
    pub strategy: CertifyStrategy,
    pub rounds: usize,
    pub seed: u64,
    /// Classical-memory ceiling of the played game.
    pub ic: f64,
    /// Estimated mutual information between the drawn index and the guess.
    pub mi_estimate: f64,
    /// Three standard errors of the estimate across ten batch splits.
    pub margin: f64,
    pub certified: bool,
    /// Per-round pairs `(k, guess)`, in play order.
    #[serde(skip)]
    pub transcript: Vec<(u8, u8)>,
}

/// Simulates the uniform flip game on a two-qubit state and tests whether
/// the strategy's performance certifies an entangling measurement.
pub fn certify(
    state: &QState,
    strategy: CertifyStrategy,
    rounds: usize,
    seed: u64,
) -> Result<CertificationReport, Error> {
    if state.dims() != [2, 2] {
        return Err(Error::InvalidPartition {
            reason: format!(
                "certification runs on two qubits, got dimensions {:?}",
                state.dims()
            ),
        });
    }
    if rounds < MIN_CERTIFY_ROUNDS {
        return Err(Error::domain(format!(
            "rounds must be at least {MIN_CERTIFY_ROUNDS}, got {rounds}; \
             fewer rounds leave the estimator bias above the certification margin"
        )));
    }
    let ensemble = EncodingEnsemble::uniform_paulis(0);
    let (ic, ic_basis) = classical_memory_info(state, &ensemble)?;

    let table = strategy_table(state, &ensemble, strategy, &ic_basis)?;

    let mut rng = StdRng::seed_from_u64(seed);
    let mut ks = Vec::with_capacity(rounds);
    let mut guesses = Vec::with_capacity(rounds);
    let mut transcript = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let k = rng.random_range(0..ensemble.len());
        let outcome = sample_categorical(&mut rng, &table.outcome_given_k[k]);
        let guess = table.guess[outcome];
        ks.push(k);
        guesses.push(guess);
        transcript.push((k as u8, guess as u8));
    }

    let mi_estimate = estimate_mutual_info(&ks, &guesses);
    let margin = batch_margin(&ks, &guesses, 10);
    Ok(CertificationReport {
        strategy,
        rounds,
        seed,
        ic,
        mi_estimate,
        margin,
        certified: mi_estimate > ic + margin,
        transcript,
    })
}

struct StrategyTable {
    /// `outcome_given_k[k][o]` = probability of joint outcome `o` given
    /// index `k`.
    outcome_given_k: Vec<Vec<f64>>,
    /// Maximum-likelihood guess per outcome (ties resolve to the smallest
    /// index).
    guess: Vec<usize>,
}

fn strategy_table(
    state: &QState,
    ensemble: &EncodingEnsemble,
    strategy: CertifyStrategy,
    ic_basis: &MeasurementBasis,
) -> Result<StrategyTable, Error> {
    let outcome_given_k = match strategy {
        CertifyStrategy::Memoryless => {
            let marginal = state.partial_trace(&[0])?;
            let encoded: Vec<CMatrix> = ensemble
                .entries()
                .iter()
                .map(|(_, op)| op.matrix() * marginal.matrix() * op.matrix().adjoint())
                .collect();
            optimize_local_readout(&encoded)
        }
        CertifyStrategy::Classical => {
            let (theta, phi) = ic_basis
                .angles()
                .expect("ic basis is built from Bloch angles");
            let geometry = MeasuredGeometry::new(state, 1)?;
            let (k0, k1) = bloch_kets(theta, phi);
            // Spectator measured before the encoding: outcome b arrives
            // with probability p_b and leaves the conditioned qubit block.
            let blocks = [
                conditional_block(state, &geometry, &k0),
                conditional_block(state, &geometry, &k1),
            ];
            // Blocks stay unnormalized: their traces carry the joint
            // outcome weights into the readout distributions.
            let mut conditioned = Vec::new();
            for block in &blocks {
                for (_, op) in ensemble.entries() {
                    conditioned.push(op.matrix() * block * op.matrix().adjoint());
                }
            }
            // Joint outcome o = 2 b + a. A single readout basis is chosen
            // to maximize the exact mutual information with k.
            optimize_joint_readout(&conditioned, ensemble.len())
        }
        CertifyStrategy::QuantumBell => {
            let bell_kets = bell_basis();
            let (codewords, _) = encode(state, ensemble)?;
            let mut table = Vec::with_capacity(codewords.len());
            for (_, codeword) in &codewords {
                let dist: Vec<f64> = bell_kets
                    .iter()
                    .map(|ket| (ket.adjoint() * codeword.matrix() * ket)[(0, 0)].re.max(0.0))
                    .collect();
                table.push(dist);
            }
            table
        }
    };

    let outcomes = outcome_given_k[0].len();
    let guess = (0..outcomes)
        .map(|o| {
            (0..outcome_given_k.len())
                .max_by(|&a, &b| {
                    outcome_given_k[a][o]
                        .partial_cmp(&outcome_given_k[b][o])
                        .expect("probabilities are finite")
                        // Stable tie-break toward the smaller index.
                        .then(b.cmp(&a))
                })
                .expect("at least one codeword")
        })
        .collect();
    Ok(StrategyTable {
        outcome_given_k,
        guess,
    })
}

/// Best fixed single-qubit readout of a codeword list: returns
/// `P(outcome | k)` for the basis maximizing the exact mutual information.
fn optimize_local_readout(encoded: &[CMatrix]) -> Vec<Vec<f64>> {
    let distributions = |theta: f64, phi: f64| -> Vec<Vec<f64>> {
        let (k0, k1) = bloch_kets(theta, phi);
        encoded
            .iter()
            .map(|m| {
                [&k0, &k1]
                    .iter()
                    .map(|ket| born_probability(m, ket))
                    .collect()
            })
            .collect()
    };
    let objective =
        |theta: f64, phi: f64| table_mutual_info(&distributions(theta, phi));
    let best = optim::grid_then_refine(
        objective,
        (0.0, std::f64::consts::PI),
        ANGLE_GRID,
        (0.0, std::f64::consts::TAU * (1.0 - 1.0 / ANGLE_GRID as f64)),
        ANGLE_GRID,
    );
    distributions(best.point[0], best.point[1])
}

/// Readout for the classical strategy: `conditioned` holds the
/// unnormalized qubit blocks indexed by `b * k_count + k`, and the joint
/// outcome is `o = 2 b + a`.
fn optimize_joint_readout(conditioned: &[CMatrix], k_count: usize) -> Vec<Vec<f64>> {
    let distributions = |theta: f64, phi: f64| -> Vec<Vec<f64>> {
        let (a0, a1) = bloch_kets(theta, phi);
        (0..k_count)
            .map(|k| {
                let mut dist = Vec::with_capacity(4);
                for b in 0..conditioned.len() / k_count {
                    let block = &conditioned[b * k_count + k];
                    for ket in [&a0, &a1] {
                        dist.push(born_probability(block, ket));
                    }
                }
                dist
            })
            .collect()
    };
    let objective =
        |theta: f64, phi: f64| table_mutual_info(&distributions(theta, phi));
    let best = optim::grid_then_refine(
        objective,
        (0.0, std::f64::consts::PI),
        ANGLE_GRID,
        (0.0, std::f64::consts::TAU * (1.0 - 1.0 / ANGLE_GRID as f64)),
        ANGLE_GRID,
    );
    distributions(best.point[0], best.point[1])
}

fn born_probability(block: &CMatrix, ket: &[Complex<f64>; 2]) -> f64 {
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += ket[i].conj() * block[(i, j)] * ket[j];
        }
    }
    acc.re.max(0.0)
}

/// Exact mutual information `I(K; O)` of a conditional table with uniform
/// `K`.
fn table_mutual_info(outcome_given_k: &[Vec<f64>]) -> f64 {
    let k_count = outcome_given_k.len();
    let outcomes = outcome_given_k[0].len();
    let p_k = 1.0 / k_count as f64;
    let mut marginal = vec![0.0; outcomes];
    let mut conditional_entropy = 0.0;
    for dist in outcome_given_k {
        let total: f64 = dist.iter().sum();
        for (o, &p) in dist.iter().enumerate() {
            marginal[o] += p_k * p;
        }
        // Distributions may be unnormalized by a constant weight; entropy
        // terms are computed on the normalized conditionals.
        if total > 0.0 {
            conditional_entropy += p_k * discrete_entropy_scaled(dist, total);
        }
    }
    let total: f64 = marginal.iter().sum();
    discrete_entropy_scaled(&marginal, total) - conditional_entropy
}

fn discrete_entropy_scaled(dist: &[f64], total: f64) -> f64 {
    -dist
        .iter()
        .filter(|&&p| p > 1e-15)
        .map(|&p| {
            let q = p / total;
            q * q.log2()
        })
        .sum::<f64>()
}

fn bell_basis() -> Vec<CVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut kets = Vec::with_capacity(4);
    for (i, j, sign) in [(0usize, 3usize, 1.0), (0, 3, -1.0), (1, 2, 1.0), (1, 2, -1.0)] {
        let mut ket = CVector::zeros(4);
        ket[i] = Complex::new(h, 0.0);
        ket[j] = Complex::new(sign * h, 0.0);
        kets.push(ket);
    }
    kets
}

fn sample_categorical<R: Rng>(rng: &mut R, dist: &[f64]) -> usize {
    let total: f64 = dist.iter().sum();
    let mut draw = rng.random::<f64>() * total;
    for (i, &p) in dist.iter().enumerate() {
        draw -= p;
        if draw <= 0.0 {
            return i;
        }
    }
    dist.len() - 1
}

/// Plug-in mutual information of paired samples with the Miller-Madow
/// bias correction, clamped to the information-theoretic range
/// `[0, log2(min observed alphabet size)]`.
pub fn estimate_mutual_info(xs: &[usize], ys: &[usize]) -> f64 {
    assert_eq!(xs.len(), ys.len(), "paired samples required");
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    let x_max = xs.iter().max().unwrap() + 1;
    let y_max = ys.iter().max().unwrap() + 1;
    let mut joint = vec![0usize; x_max * y_max];
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        joint[x * y_max + y] += 1;
    }
    let mut x_counts = vec![0usize; x_max];
    let mut y_counts = vec![0usize; y_max];
    for x in 0..x_max {
        for y in 0..y_max {
            x_counts[x] += joint[x * y_max + y];
            y_counts[y] += joint[x * y_max + y];
        }
    }

    let entropy_mm = |counts: &[usize]| -> (f64, usize) {
        let occupied = counts.iter().filter(|&&c| c > 0).count();
        let h: f64 = -counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n as f64;
                p * p.log2()
            })
            .sum::<f64>();
        let corrected = h + (occupied.saturating_sub(1)) as f64
            / (2.0 * n as f64 * std::f64::consts::LN_2);
        (corrected, occupied)
    };

    let (h_x, m_x) = entropy_mm(&x_counts);
    let (h_y, m_y) = entropy_mm(&y_counts);
    let (h_xy, _) = entropy_mm(&joint);
    let raw = h_x + h_y - h_xy;
    let ceiling = (m_x.min(m_y) as f64).log2();
    raw.clamp(0.0, ceiling.max(0.0))
}

/// Three standard errors of the mutual-information estimate, measured
/// across `batches` consecutive splits of the transcript.
fn batch_margin(xs: &[usize], ys: &[usize], batches: usize) -> f64 {
    let n = xs.len();
    let size = n / batches;
    if size == 0 {
        return f64::INFINITY;
    }
    let estimates: Vec<f64> = (0..batches)
        .map(|b| {
            let lo = b * size;
            let hi = if b + 1 == batches { n } else { lo + size };
            estimate_mutual_info(&xs[lo..hi], &ys[lo..hi])
        })
        .collect();
    let mean = estimates.iter().sum::<f64>() / batches as f64;
    let variance = estimates
        .iter()
        .map(|e| (e - mean).powi(2))
        .sum::<f64>()
        / (batches - 1) as f64;
    3.0 * (variance / batches as f64).sqrt()
}

fn spectator_subsystem(state: &QState, ensemble: &EncodingEnsemble) -> Result<usize, Error> {
    let target = ensemble.target();
    if target >= state.subsystem_count() {
        return Err(Error::SubsystemOutOfRange {
            index: target,
            count: state.subsystem_count(),
        });
    }
    if state.subsystem_count() != 2 {
        return Err(Error::InvalidPartition {
            reason: format!(
                "the game is defined on bipartite states, got {} subsystems",
                state.subsystem_count()
            ),
        });
    }
    let spectator = 1 - target;
    if state.dims()[spectator] != 2 {
        return Err(Error::domain(format!(
            "spectator subsystem must be a qubit for the dephasing search, \
             got dimension {}",
            state.dims()[spectator]
        )));
    }
    Ok(spectator)
}
