//! Entropic correlation measures on finite-dimensional states.
//!
//! Classical correlations are defined through the best rank-1 projective
//! measurement on one subsystem: `J = S(rest) - min_basis sum_b p_b S(rest | b)`.
//! Discord is the gap between total and classical correlations,
//! `delta = I - J`. The measurement search is exact on the evaluated
//! points, so `J` is always reached from below and discord from above.

use nalgebra::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::optim;
use crate::qmat::{
    self, eigenvalues_hermitian, matrix_from_rows, matrix_rows, offset_table, strides, CMatrix,
    QState, HERMITICITY_TOL,
};

/// Eigenvalues below this threshold are treated as exact zeros inside
/// logarithms, implementing the `0 log 0 = 0` convention.
pub const EIGENVALUE_CLIP: f64 = 1e-12;

/// Grid resolution of the measurement-angle scan preceding refinement.
const ANGLE_GRID: usize = 30;

/// Von Neumann entropy in bits.
pub fn vn_entropy(state: &QState) -> f64 {
    entropy_from_eigenvalues(&eigenvalues_hermitian(state.matrix()))
}

/// Entropy of a probability-like eigenvalue list, clipping values below
/// [`EIGENVALUE_CLIP`] to zero.
pub fn entropy_from_eigenvalues(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|&&l| l > EIGENVALUE_CLIP)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

/// Mutual information `S(A) + S(B) - S(AB)` across a bipartition.
///
/// `side_a` and `side_b` must be strictly increasing, disjoint, and
/// together cover every subsystem of the state.
pub fn mutual_info(state: &QState, side_a: &[usize], side_b: &[usize]) -> Result<f64, Error> {
    validate_bipartition(state, side_a, side_b)?;
    let s_a = vn_entropy(&state.partial_trace(side_a)?);
    let s_b = vn_entropy(&state.partial_trace(side_b)?);
    Ok(s_a + s_b - vn_entropy(state))
}

/// Holevo quantity `S(sum_k p_k rho_k) - sum_k p_k S(rho_k)` of an ensemble.
pub fn holevo(ensemble: &[(f64, QState)]) -> Result<f64, Error> {
    if ensemble.is_empty() {
        return Err(Error::InvalidProbabilities { sum: 0.0 });
    }
    let sum: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if ensemble.iter().any(|(p, _)| *p < 0.0) || (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities { sum });
    }
    let dim = ensemble[0].1.total_dim();
    if ensemble.iter().any(|(_, s)| s.total_dim() != dim) {
        return Err(Error::DimensionMismatch {
            context: "ensemble members",
            expected: dim,
            actual: ensemble
                .iter()
                .map(|(_, s)| s.total_dim())
                .find(|&d| d != dim)
                .unwrap_or(dim),
        });
    }
    let mut average = CMatrix::zeros(dim, dim);
    let mut member_entropy = 0.0;
    for (p, state) in ensemble {
        average += state.matrix() * Complex::new(*p, 0.0);
        if *p > 0.0 {
            member_entropy += p * vn_entropy(state);
        }
    }
    Ok(entropy_from_eigenvalues(&eigenvalues_hermitian(&average)) - member_entropy)
}

/// Rank-1 projective measurement basis on a single subsystem.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    theta: Option<f64>,
    phi: Option<f64>,
    projectors: Vec<CMatrix>,
}

impl MeasurementBasis {
    /// Qubit basis `{ |b0>, |b1> }` with
    /// `|b0> = cos(theta/2) |0> + e^{i phi} sin(theta/2) |1>`.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let (k0, k1) = bloch_kets(theta, phi);
        let projectors = [k0, k1]
            .iter()
            .map(|k| {
                CMatrix::from_fn(2, 2, |i, j| k[i] * k[j].conj())
            })
            .collect();
        MeasurementBasis {
            theta: Some(theta),
            phi: Some(phi),
            projectors,
        }
    }

    /// Validates a complete set of orthogonal rank-1 projectors.
    pub fn from_projectors(projectors: Vec<CMatrix>) -> Result<Self, Error> {
        if projectors.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "measurement basis needs at least one projector".into(),
            });
        }
        let dim = projectors[0].nrows();
        if projectors.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "projector count vs dimension",
                expected: dim,
                actual: projectors.len(),
            });
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for p in &projectors {
            if p.nrows() != dim || p.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "projector shape",
                    expected: dim,
                    actual: p.nrows().max(p.ncols()),
                });
            }
            let herm_dev = qmat::max_abs(&(p - p.adjoint()));
            if herm_dev > HERMITICITY_TOL {
                return Err(Error::NotHermitian {
                    deviation: herm_dev,
                    tolerance: HERMITICITY_TOL,
                });
            }
            let idem_dev = qmat::max_abs(&(p * p - p));
            if idem_dev > 1e-10 {
                return Err(Error::InvalidPartition {
                    reason: format!("projector is not idempotent: deviation {idem_dev:.3e}"),
                });
            }
            let rank = p.trace().re;
            if (rank - 1.0).abs() > 1e-8 {
                return Err(Error::InvalidPartition {
                    reason: format!("projector rank must be 1, got trace {rank:.6}"),
                });
            }
            sum += p;
        }
        let completeness_dev = qmat::max_abs(&(sum - CMatrix::identity(dim, dim)));
        if completeness_dev > 1e-10 {
            return Err(Error::InvalidPartition {
                reason: format!("projectors do not sum to identity: deviation {completeness_dev:.3e}"),
            });
        }
        Ok(MeasurementBasis {
            theta: None,
            phi: None,
            projectors,
        })
    }

    /// Bloch angles when the basis was built from them.
    pub fn angles(&self) -> Option<(f64, f64)> {
        self.theta.zip(self.phi)
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn outcome_count(&self) -> usize {
        self.projectors.len()
    }
}

#[derive(Serialize, Deserialize)]
struct BasisWire {
    theta: Option<f64>,
    phi: Option<f64>,
    projectors: Vec<ProjectorWire>,
}

#[derive(Serialize, Deserialize)]
struct ProjectorWire {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for MeasurementBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let projectors = self
            .projectors
            .iter()
            .map(|p| {
                let (re, im) = matrix_rows(p);
                ProjectorWire { re, im }
            })
            .collect();
        BasisWire {
            theta: self.theta,
            phi: self.phi,
            projectors,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MeasurementBasis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = BasisWire::deserialize(deserializer)?;
        let mut projectors = Vec::with_capacity(wire.projectors.len());
        for p in &wire.projectors {
            projectors.push(matrix_from_rows(&p.re, &p.im).map_err(serde::de::Error::custom)?);
        }
        let mut basis =
            MeasurementBasis::from_projectors(projectors).map_err(serde::de::Error::custom)?;
        basis.theta = wire.theta;
        basis.phi = wire.phi;
        Ok(basis)
    }
}

/// Classical correlations extracted by measuring one qubit subsystem.
///
/// Scans a 30x30 grid over the Bloch sphere and refines with Nelder-Mead;
/// the reported maximum is accurate to about 1e-4 and never exceeds the
/// true optimum. Subsystems of dimension above two are not searched; use
/// [`classical_corr_with_bases`] with explicit candidates instead.
pub fn classical_corr(state: &QState, measured: usize) -> Result<(f64, MeasurementBasis), Error> {
    let geometry = MeasuredGeometry::new(state, measured)?;
    if geometry.measured_dim != 2 {
        return Err(Error::domain(format!(
            "measurement search requires a qubit subsystem, got dimension {}; \
             supply candidate bases via classical_corr_with_bases",
            geometry.measured_dim
        )));
    }
    let rest_entropy = vn_entropy(&state.partial_trace(&geometry.rest)?);

    let objective = |theta: f64, phi: f64| {
        rest_entropy - conditional_entropy_bloch(state, &geometry, theta, phi)
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

/// Classical correlations over an explicit list of candidate bases.
///
/// Returns the best value and the index of the basis that achieved it.
pub fn classical_corr_with_bases(
    state: &QState,
    measured: usize,
    bases: &[MeasurementBasis],
) -> Result<(f64, usize), Error> {
    if bases.is_empty() {
        return Err(Error::InvalidPartition {
            reason: "candidate basis list is empty".into(),
        });
    }
    let geometry = MeasuredGeometry::new(state, measured)?;
    let rest_entropy = vn_entropy(&state.partial_trace(&geometry.rest)?);
    let mut best = (f64::NEG_INFINITY, 0usize);
    for (idx, basis) in bases.iter().enumerate() {
        if basis.projectors[0].nrows() != geometry.measured_dim {
            return Err(Error::DimensionMismatch {
                context: "basis vs measured subsystem",
                expected: geometry.measured_dim,
                actual: basis.projectors[0].nrows(),
            });
        }
        let mut conditional = 0.0;
        for projector in &basis.projectors {
            let block = conditional_block_from_projector(state, &geometry, projector);
            conditional += raw_block_entropy_term(&block);
        }
        let value = rest_entropy - conditional;
        if value > best.0 {
            best = (value, idx);
        }
    }
    Ok(best)
}

/// Total, classical, and discordant correlations of a state under
/// measurement of one subsystem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub basis: MeasurementBasis,
}

/// Quantum discord `delta = I - J` with the measurement on `measured`.
pub fn discord(state: &QState, measured: usize) -> Result<CorrelationReport, Error> {
    let geometry = MeasuredGeometry::new(state, measured)?;
    let total = mutual_info(state, &geometry.rest, &[measured])?;
    let (classical, basis) = classical_corr(state, measured)?;
    Ok(CorrelationReport {
        mutual_info: total,
        classical_corr: classical,
        discord: total - classical,
        basis,
    })
}

/// Index bookkeeping for measuring one subsystem of a product space.
pub(crate) struct MeasuredGeometry {
    pub measured_dim: usize,
    pub measured_stride: usize,
    /// Remaining subsystems, ascending.
    pub rest: Vec<usize>,
    /// Flat-index offsets of the remaining subsystems' joint values.
    pub rest_offsets: Vec<usize>,
}

impl MeasuredGeometry {
    pub fn new(state: &QState, measured: usize) -> Result<Self, Error> {
        let dims = state.dims();
        if measured >= dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: measured,
                count: dims.len(),
            });
        }
        if dims.len() < 2 {
            return Err(Error::InvalidPartition {
                reason: "measurement-based correlations need at least two subsystems".into(),
            });
        }
        let strides = strides(dims);
        let rest: Vec<usize> = (0..dims.len()).filter(|&i| i != measured).collect();
        let rest_offsets = offset_table(dims, &strides, &rest);
        Ok(MeasuredGeometry {
            measured_dim: dims[measured],
            measured_stride: strides[measured],
            rest,
            rest_offsets,
        })
    }
}

/// Unnormalized post-measurement block `(I (x) <b|) rho (I (x) |b>)` on the
/// unmeasured subsystems, for the outcome ket `b`.
pub(crate) fn conditional_block(
    state: &QState,
    geometry: &MeasuredGeometry,
    ket: &[Complex<f64>],
) -> CMatrix {
    let n = geometry.rest_offsets.len();
    let s = geometry.measured_stride;
    let m = state.matrix();
    CMatrix::from_fn(n, n, |i, j| {
        let oi = geometry.rest_offsets[i];
        let oj = geometry.rest_offsets[j];
        let mut acc = Complex::new(0.0, 0.0);
        for (k, bk) in ket.iter().enumerate() {
            for (l, bl) in ket.iter().enumerate() {
                acc += bk.conj() * m[(oi + k * s, oj + l * s)] * bl;
            }
        }
        acc
    })
}

/// Same block computed from a rank-1 projector `P = |b><b|` directly:
/// `M[i,j] = sum_{k,l} rho[(i,k),(j,l)] P[l,k]`.
pub(crate) fn conditional_block_from_projector(
    state: &QState,
    geometry: &MeasuredGeometry,
    projector: &CMatrix,
) -> CMatrix {
    let n = geometry.rest_offsets.len();
    let s = geometry.measured_stride;
    let m = state.matrix();
    CMatrix::from_fn(n, n, |i, j| {
        let oi = geometry.rest_offsets[i];
        let oj = geometry.rest_offsets[j];
        let mut acc = Complex::new(0.0, 0.0);
        for k in 0..geometry.measured_dim {
            for l in 0..geometry.measured_dim {
                acc += m[(oi + k * s, oj + l * s)] * projector[(l, k)];
            }
        }
        acc
    })
}

/// Contribution of one unnormalized block to the conditional entropy:
/// `p S(M/p) = S_raw(M) + p log2 p` with `S_raw(M) = -sum lambda log2 lambda`.
pub(crate) fn raw_block_entropy_term(block: &CMatrix) -> f64 {
    let p: f64 = (0..block.nrows()).map(|i| block[(i, i)].re).sum();
    if p <= EIGENVALUE_CLIP {
        return 0.0;
    }
    raw_entropy(block) + p * p.log2()
}

/// `-sum lambda log2 lambda` over the eigenvalues of an unnormalized
/// Hermitian PSD block, with a closed form in the 2x2 case.
pub(crate) fn raw_entropy(block: &CMatrix) -> f64 {
    if block.nrows() == 2 {
        let (l0, l1) = eig2(
            block[(0, 0)].re,
            block[(1, 1)].re,
            block[(0, 1)],
        );
        let mut s = 0.0;
        for l in [l0, l1] {
            if l > EIGENVALUE_CLIP {
                s -= l * l.log2();
            }
        }
        s
    } else {
        entropy_from_eigenvalues(&eigenvalues_hermitian(block))
    }
}

/// Eigenvalues of the Hermitian 2x2 matrix `[[a, c], [conj(c), d]]`.
pub(crate) fn eig2(a: f64, d: f64, c: Complex<f64>) -> (f64, f64) {
    let mid = 0.5 * (a + d);
    let disc = (0.5 * (a - d)).hypot(c.norm());
    (mid - disc, mid + disc)
}

pub(crate) fn bloch_kets(theta: f64, phi: f64) -> ([Complex<f64>; 2], [Complex<f64>; 2]) {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let phase = Complex::new(phi.cos(), phi.sin());
    let k0 = [Complex::new(ct, 0.0), phase * st];
    let k1 = [Complex::new(-st, 0.0), phase * ct];
    (k0, k1)
}

fn conditional_entropy_bloch(
    state: &QState,
    geometry: &MeasuredGeometry,
    theta: f64,
    phi: f64,
) -> f64 {
    let (k0, k1) = bloch_kets(theta, phi);
    let block0 = conditional_block(state, geometry, &k0);
    let block1 = conditional_block(state, geometry, &k1);
    raw_block_entropy_term(&block0) + raw_block_entropy_term(&block1)
}

fn validate_bipartition(state: &QState, side_a: &[usize], side_b: &[usize]) -> Result<(), Error> {
    let n = state.subsystem_count();
    let mut seen = vec![false; n];
    for &idx in side_a.iter().chain(side_b.iter()) {
        if idx >= n {
            return Err(Error::SubsystemOutOfRange { index: idx, count: n });
        }
        if seen[idx] {
            return Err(Error::InvalidPartition {
                reason: format!("subsystem {idx} appears on both sides of the cut"),
            });
        }
        seen[idx] = true;
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidPartition {
            reason: "bipartition must cover every subsystem".into(),
        });
    }
    if !side_a.windows(2).all(|w| w[0] < w[1]) || !side_b.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidPartition {
            reason: "cut indices must be strictly increasing".into(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn h2(p: f64) -> f64 {
        let q = 1.0 - p;
        let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
        term(p) + term(q)
    }

    #[test]
    fn entropy_of_pure_and_mixed_states() {
        assert_abs_diff_eq!(vn_entropy(&QState::bell()), 0.0, epsilon = 1e-10);
        let marginal = QState::bell().partial_trace(&[0]).unwrap();
        assert_abs_diff_eq!(vn_entropy(&marginal), 1.0, epsilon = 1e-10);
        // diag(3/4, 1/4): binary entropy evaluated independently.
        let w = QState::werner(0.5).unwrap();
        // Werner(1/2) spectrum: {5/8, 1/8, 1/8, 1/8}.
        let expected = -(5.0 / 8.0f64).log2() * (5.0 / 8.0) - 3.0 * (1.0 / 8.0f64).log2() * (1.0 / 8.0);
        assert_abs_diff_eq!(vn_entropy(&w), expected, epsilon = 1e-10);
    }

    #[test]
    fn mutual_info_of_named_states() {
        assert_abs_diff_eq!(
            mutual_info(&QState::bell(), &[0], &[1]).unwrap(),
            2.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            mutual_info(&QState::classical_correlated(), &[0], &[1]).unwrap(),
            1.0,
            epsilon = 1e-10
        );
        let product = QState::product(
            &QState::bell().partial_trace(&[0]).unwrap(),
            &QState::bell().partial_trace(&[1]).unwrap(),
        );
        assert_abs_diff_eq!(mutual_info(&product, &[0], &[1]).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn mutual_info_rejects_bad_cuts() {
        let bell = QState::bell();
        assert!(matches!(
            mutual_info(&bell, &[0], &[0]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            mutual_info(&bell, &[0], &[]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            mutual_info(&bell, &[0], &[2]),
            Err(Error::SubsystemOutOfRange { .. })
        ));
    }

    #[test]
    fn holevo_of_orthogonal_pure_states_is_one_bit() {
        let mut zero = CMatrix::zeros(2, 2);
        zero[(0, 0)] = Complex::new(1.0, 0.0);
        let mut one = CMatrix::zeros(2, 2);
        one[(1, 1)] = Complex::new(1.0, 0.0);
        let ensemble = vec![
            (0.5, QState::new(vec![2], zero).unwrap()),
            (0.5, QState::new(vec![2], one).unwrap()),
        ];
        assert_abs_diff_eq!(holevo(&ensemble).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn holevo_of_tilted_pure_ensemble() {
        // {1/2 |0><0|, 1/2 |+><+|}: average has eigenvalues (1 +- 1/sqrt2)/2.
        let mut zero = CMatrix::zeros(2, 2);
        zero[(0, 0)] = Complex::new(1.0, 0.0);
        let plus = CMatrix::from_fn(2, 2, |_, _| Complex::new(0.5, 0.0));
        let ensemble = vec![
            (0.5, QState::new(vec![2], zero).unwrap()),
            (0.5, QState::new(vec![2], plus).unwrap()),
        ];
        let lp = 0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2);
        let expected = h2(lp);
        assert_abs_diff_eq!(holevo(&ensemble).unwrap(), expected, epsilon = 1e-10);
        assert_abs_diff_eq!(holevo(&ensemble).unwrap(), 0.600876, epsilon = 1e-6);
    }

    #[test]
    fn holevo_validates_probabilities() {
        let bell = QState::bell();
        let err = holevo(&[(0.7, bell.clone()), (0.7, bell)]).unwrap_err();
        assert!(matches!(err, Error::InvalidProbabilities { .. }));
    }

    #[test]
    fn classical_corr_of_bell_is_one() {
        let (j, basis) = classical_corr(&QState::bell(), 1).unwrap();
        assert_abs_diff_eq!(j, 1.0, epsilon = 1e-6);
        assert!(basis.angles().is_some());
    }

    #[test]
    fn classical_corr_of_classical_mixture_is_one() {
        let (j, basis) = classical_corr(&QState::classical_correlated(), 1).unwrap();
        assert_abs_diff_eq!(j, 1.0, epsilon = 1e-6);
        // The computational basis is optimal: theta at a pole.
        let (theta, _) = basis.angles().unwrap();
        assert!(theta < 1e-2 || (std::f64::consts::PI - theta) < 1e-2, "theta = {theta}");
    }

    #[test]
    fn werner_half_correlations_match_oracle() {
        // Frozen from a dense 2001x2001 angle-grid evaluation.
        let report = discord(&QState::werner(0.5).unwrap(), 1).unwrap();
        assert_abs_diff_eq!(report.mutual_info, 0.451205, epsilon = 1e-6);
        assert_abs_diff_eq!(report.classical_corr, 0.188722, epsilon = 1e-4);
        assert_abs_diff_eq!(report.discord, 0.262483, epsilon = 1e-4);
    }

    #[test]
    fn discord_of_bell_is_one_bit() {
        let report = discord(&QState::bell(), 1).unwrap();
        assert_abs_diff_eq!(report.mutual_info, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(report.classical_corr, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(report.discord, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn discord_of_classical_state_vanishes() {
        let report = discord(&QState::classical_correlated(), 1).unwrap();
        assert!(report.discord.abs() < 1e-9, "discord = {}", report.discord);
    }

    #[test]
    fn discord_is_measurement_side_dependent_but_nonnegative() {
        for side in [0usize, 1] {
            let report = discord(&QState::werner(0.8).unwrap(), side).unwrap();
            assert!(report.discord >= -1e-9);
            assert!(report.classical_corr >= -1e-9);
            assert!(report.classical_corr <= report.mutual_info + 1e-9);
        }
    }

    #[test]
    fn measurement_basis_validation() {
        let z = MeasurementBasis::from_bloch_angles(0.0, 0.0);
        assert_eq!(z.outcome_count(), 2);
        let ok = MeasurementBasis::from_projectors(z.projectors().to_vec());
        assert!(ok.is_ok());

        // Two copies of the same projector: not complete, not orthogonal.
        let p = z.projectors()[0].clone();
        let err = MeasurementBasis::from_projectors(vec![p.clone(), p]).unwrap_err();
        assert!(err.to_string().contains("identity"), "{err}");

        let half = z.projectors()[0].clone() * Complex::new(0.5, 0.0);
        let err = MeasurementBasis::from_projectors(vec![half, z.projectors()[1].clone()])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidPartition { .. }));
    }

    #[test]
    fn explicit_basis_search_matches_optimized_search_on_werner() {
        let state = QState::werner(0.5).unwrap();
        let bases: Vec<MeasurementBasis> = (0..20)
            .map(|i| {
                let theta = std::f64::consts::PI * (i as f64) / 19.0;
                MeasurementBasis::from_bloch_angles(theta, 0.3)
            })
            .collect();
        let (j_listed, _) = classical_corr_with_bases(&state, 1, &bases).unwrap();
        let (j_opt, _) = classical_corr(&state, 1).unwrap();
        // Werner states are isotropic: any rank-1 basis is optimal.
        assert_abs_diff_eq!(j_listed, j_opt, epsilon = 1e-6);
    }

    #[test]
    fn basis_serde_round_trip() {
        let basis = MeasurementBasis::from_bloch_angles(1.1, 2.2);
        let json = serde_json::to_string(&basis).unwrap();
        let back: MeasurementBasis = serde_json::from_str(&json).unwrap();
        assert_eq!(back.angles(), basis.angles());
        for (p, q) in back.projectors().iter().zip(basis.projectors().iter()) {
            assert!(qmat::max_abs(&(p - q)) < 1e-15);
        }
    }
}
