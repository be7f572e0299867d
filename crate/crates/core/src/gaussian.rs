//! Gaussian states in shot-noise units: vacuum covariance is the
//! identity, quadratures are ordered `x1, p1, x2, p2, ...`, and a thermal
//! mode with mean photon number `n` has covariance `(2n + 1) I`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::optim;

/// Largest tolerated asymmetry of a covariance matrix.
pub const COV_SYMMETRY_TOL: f64 = 1e-10;
/// Symplectic eigenvalues may undershoot one by at most this much.
pub const BONA_FIDE_TOL: f64 = 1e-9;

/// Log-range half-width of the squeezing scan in the general-dyne search:
/// the measurement seed eigenvalue runs over `[1e-3, 1e3]`.
const SEED_LOG_RANGE: f64 = 3.0;
const SEED_GRID: usize = 60;
const SEED_ANGLE_GRID: usize = 30;

/// Gaussian state given by its mean vector and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry and the bona fide (uncertainty) condition: every
    /// symplectic eigenvalue must be at least `1 - 1e-9`.
    pub fn new(modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self, Error> {
        if modes == 0 {
            return Err(Error::InvalidPartition {
                reason: "a Gaussian state needs at least one mode".into(),
            });
        }
        let n = 2 * modes;
        if mean.len() != n {
            return Err(Error::DimensionMismatch {
                context: "mean vector vs mode count",
                expected: n,
                actual: mean.len(),
            });
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "covariance vs mode count",
                expected: n,
                actual: cov.nrows().max(cov.ncols()),
            });
        }
        let asym = (&cov - cov.transpose()).iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if asym > COV_SYMMETRY_TOL {
            return Err(Error::CovarianceNotSymmetric {
                deviation: asym,
                tolerance: COV_SYMMETRY_TOL,
            });
        }
        let cov = symmetrize(&cov);
        let nu_min = symplectic_eigenvalues_of(&cov)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if nu_min < 1.0 - BONA_FIDE_TOL {
            return Err(Error::NotBonaFide { nu_min });
        }
        Ok(GaussianState { modes, mean, cov })
    }

    /// Wraps output of internal symplectic transformations, which preserve
    /// validity up to floating-point drift.
    fn from_valid_parts(modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        GaussianState {
            modes,
            mean,
            cov: symmetrize(&cov),
        }
    }

    /// Vacuum on `modes` modes.
    pub fn vacuum(modes: usize) -> Self {
        GaussianState {
            modes,
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Two-mode squeezed vacuum with local variance `mu >= 1`
    /// (mean photon number `(mu - 1) / 2` per mode).
    pub fn tmsv(mu: f64) -> Result<Self, Error> {
        if !mu.is_finite() || mu < 1.0 {
            return Err(Error::domain(format!(
                "two-mode squeezing variance must satisfy mu >= 1, got {mu}"
            )));
        }
        let c = (mu * mu - 1.0).sqrt();
        let mut cov = DMatrix::identity(4, 4) * mu;
        // Off-diagonal block c * diag(1, -1): x-quadratures correlated,
        // p-quadratures anticorrelated.
        cov[(0, 2)] = c;
        cov[(2, 0)] = c;
        cov[(1, 3)] = -c;
        cov[(3, 1)] = -c;
        Ok(GaussianState {
            modes: 2,
            mean: DVector::zeros(4),
            cov,
        })
    }

    /// Single thermal mode with symplectic eigenvalue `nu >= 1`.
    pub fn thermal(nu: f64) -> Result<Self, Error> {
        if !nu.is_finite() || nu < 1.0 {
            return Err(Error::domain(format!(
                "thermal variance must satisfy nu >= 1, got {nu}"
            )));
        }
        Ok(GaussianState {
            modes: 1,
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * nu,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Reduced state on the listed modes (strictly increasing).
    pub fn marginal(&self, modes: &[usize]) -> Result<GaussianState, Error> {
        if modes.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "at least one mode must be kept".into(),
            });
        }
        if !modes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition {
                reason: "kept mode indices must be strictly increasing".into(),
            });
        }
        if let Some(&bad) = modes.iter().find(|&&m| m >= self.modes) {
            return Err(Error::SubsystemOutOfRange {
                index: bad,
                count: self.modes,
            });
        }
        let rows: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_fn(rows.len(), |i, _| self.mean[rows[i]]);
        let cov = DMatrix::from_fn(rows.len(), rows.len(), |i, j| self.cov[(rows[i], rows[j])]);
        Ok(GaussianState::from_valid_parts(modes.len(), mean, cov))
    }

    /// Symplectic spectrum of the covariance matrix, ascending.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues_of(&self.cov)
    }

    /// Von Neumann entropy in bits, `sum_i g(nu_i)`.
    pub fn entropy(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .map(g_clamped)
            .sum()
    }

    /// Mutual information across a bipartition of the modes.
    pub fn mutual_information(&self, side_a: &[usize], side_b: &[usize]) -> Result<f64, Error> {
        let mut seen = vec![false; self.modes];
        for &m in side_a.iter().chain(side_b.iter()) {
            if m >= self.modes {
                return Err(Error::SubsystemOutOfRange {
                    index: m,
                    count: self.modes,
                });
            }
            if seen[m] {
                return Err(Error::InvalidPartition {
                    reason: format!("mode {m} appears on both sides of the cut"),
                });
            }
            seen[m] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidPartition {
                reason: "bipartition must cover every mode".into(),
            });
        }
        let s_a = self.marginal(side_a)?.entropy();
        let s_b = self.marginal(side_b)?.entropy();
        Ok(s_a + s_b - self.entropy())
    }
}

/// Pure-loss (beam-splitter) channel with transmissivity `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossyChannel {
    eta: f64,
}

impl LossyChannel {
    pub fn new(eta: f64) -> Result<Self, Error> {
        if !eta.is_finite() || !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            )));
        }
        Ok(LossyChannel { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Mixes one mode with a fresh vacuum environment on a beam splitter of
/// transmissivity `eta`.
///
/// With `keep_env` the environment output is appended as the last mode,
/// purifying the loss; otherwise it is traced out and the mode count is
/// unchanged. The convention is
/// `mode' = sqrt(eta) mode - sqrt(1 - eta) env`, so `eta = 0` swaps the
/// input into the environment.
pub fn apply_loss(
    state: &GaussianState,
    mode: usize,
    channel: &LossyChannel,
    keep_env: bool,
) -> Result<GaussianState, Error> {
    if mode >= state.modes {
        return Err(Error::SubsystemOutOfRange {
            index: mode,
            count: state.modes,
        });
    }
    let modes_ext = state.modes + 1;
    let n = 2 * modes_ext;
    let mut cov = DMatrix::identity(n, n);
    cov.view_mut((0, 0), (2 * state.modes, 2 * state.modes))
        .copy_from(&state.cov);
    let mut mean = DVector::zeros(n);
    mean.rows_mut(0, 2 * state.modes).copy_from(&state.mean);

    let mut splitter = DMatrix::identity(n, n);
    let (t, r) = (channel.eta.sqrt(), (1.0 - channel.eta).sqrt());
    let (b, e) = (2 * mode, 2 * state.modes);
    for q in 0..2 {
        splitter[(b + q, b + q)] = t;
        splitter[(b + q, e + q)] = -r;
        splitter[(e + q, b + q)] = r;
        splitter[(e + q, e + q)] = t;
    }
    let cov_out = &splitter * cov * splitter.transpose();
    let mean_out = &splitter * mean;
    let full = GaussianState::from_valid_parts(modes_ext, mean_out, cov_out);
    if keep_env {
        Ok(full)
    } else {
        let kept: Vec<usize> = (0..state.modes).collect();
        full.marginal(&kept)
    }
}

/// Bosonic entropy of one symplectic eigenvalue, in bits.
///
/// `g(nu) = ((nu+1)/2) log2((nu+1)/2) - ((nu-1)/2) log2((nu-1)/2)`.
pub fn g_entropy(nu: f64) -> Result<f64, Error> {
    if !nu.is_finite() || nu < 1.0 - BONA_FIDE_TOL {
        return Err(Error::domain(format!(
            "symplectic eigenvalue must be at least 1, got {nu}"
        )));
    }
    Ok(g_clamped(nu))
}

/// Same as [`g_entropy`] but clamping sub-unit arguments to zero entropy,
/// for internal use where dips below one are floating-point artifacts.
pub(crate) fn g_clamped(nu: f64) -> f64 {
    if nu <= 1.0 {
        return 0.0;
    }
    let a = (nu + 1.0) / 2.0;
    let b = (nu - 1.0) / 2.0;
    a * a.log2() - b * b.log2()
}

/// Symplectic form on `modes` modes, block diagonal `[[0, 1], [-1, 0]]`.
pub fn omega(modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        w[(2 * m, 2 * m + 1)] = 1.0;
        w[(2 * m + 1, 2 * m)] = -1.0;
    }
    w
}

/// Williamson spectrum of a covariance matrix, ascending: singular values
/// of `V^{1/2} Omega V^{1/2}` come in equal pairs, one per mode.
pub(crate) fn symplectic_eigenvalues_of(cov: &DMatrix<f64>) -> Vec<f64> {
    let modes = cov.nrows() / 2;
    let root = matrix_sqrt(cov);
    let m = &root * omega(modes) * &root;
    let mut singular: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    singular.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    let mut nus: Vec<f64> = (0..modes).map(|i| singular[2 * i]).collect();
    nus.sort_by(|a, b| a.partial_cmp(b).expect("singular values are finite"));
    nus
}

fn matrix_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = symmetrize(m).symmetric_eigen();
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        out += v * v.transpose() * root;
    }
    out
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Minimum symplectic eigenvalue after partially transposing the listed
/// modes. A value below one witnesses entanglement across the cut; at or
/// above one the state is separable for `1 x n` mode splits.
pub fn ppt_min_symplectic(state: &GaussianState, transposed: &[usize]) -> Result<f64, Error> {
    if transposed.is_empty() || transposed.len() >= state.modes {
        return Err(Error::InvalidPartition {
            reason: "transposed modes must form a nonempty proper subset".into(),
        });
    }
    if !transposed.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidPartition {
            reason: "transposed mode indices must be strictly increasing".into(),
        });
    }
    if let Some(&bad) = transposed.iter().find(|&&m| m >= state.modes) {
        return Err(Error::SubsystemOutOfRange {
            index: bad,
            count: state.modes,
        });
    }
    // Momentum sign flip on the transposed modes.
    let mut flip = DVector::from_element(2 * state.modes, 1.0);
    for &m in transposed {
        flip[2 * m + 1] = -1.0;
    }
    let cov = DMatrix::from_fn(2 * state.modes, 2 * state.modes, |i, j| {
        flip[i] * state.cov[(i, j)] * flip[j]
    });
    Ok(symplectic_eigenvalues_of(&cov)
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

/// Result of the general-dyne discord search on one mode.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaussianDiscord {
    /// Discord of the unmeasured mode given the measurement.
    pub value: f64,
    /// Seed squeezing of the optimal measurement; 1 is heterodyne.
    pub lambda: f64,
    /// Seed orientation of the optimal measurement, in `[0, pi)`.
    pub theta: f64,
}

/// Gaussian discord of a two-mode state under general-dyne measurement of
/// `measured`.
///
/// The measurement seed covariance `R(theta) diag(lambda, 1/lambda)
/// R(theta)^T` is scanned on a 60 x 30 logarithmic grid over
/// `lambda in [1e-3, 1e3]` and refined with Nelder-Mead; the refinement
/// matters because the conditional entropy is steep near pure seeds.
pub fn gaussian_discord(state: &GaussianState, measured: usize) -> Result<GaussianDiscord, Error> {
    if state.modes != 2 {
        return Err(Error::InvalidPartition {
            reason: format!(
                "general-dyne discord is defined for two-mode states, got {} modes",
                state.modes
            ),
        });
    }
    if measured >= 2 {
        return Err(Error::SubsystemOutOfRange {
            index: measured,
            count: 2,
        });
    }
    let other = 1 - measured;
    let a = state.cov.view((2 * measured, 2 * measured), (2, 2)).into_owned();
    let b = state.cov.view((2 * other, 2 * other), (2, 2)).into_owned();
    let c = state.cov.view((2 * measured, 2 * other), (2, 2)).into_owned();

    let s_measured = g_clamped(det2(&a).max(0.0).sqrt());
    let s_total = state.entropy();

    let conditional = |log_lambda: f64, theta: f64| -> f64 {
        let lambda = log_lambda.exp();
        let (cos, sin) = (theta.cos(), theta.sin());
        // R diag(lambda, 1/lambda) R^T.
        let inv = 1.0 / lambda;
        let seed = [
            lambda * cos * cos + inv * sin * sin,
            (lambda - inv) * cos * sin,
            lambda * sin * sin + inv * cos * cos,
        ];
        let m = [
            a[(0, 0)] + seed[0],
            a[(0, 1)] + seed[1],
            a[(1, 1)] + seed[2],
        ];
        let mut det = m[0] * m[2] - m[1] * m[1];
        let mut m = m;
        if det <= 1e-12 * (m[0].abs() + m[2].abs()).max(1.0) {
            // Nearly singular seed + block: regularize before inverting.
            m[0] += 1e-12;
            m[2] += 1e-12;
            det = m[0] * m[2] - m[1] * m[1];
        }
        let minv = [m[2] / det, -m[1] / det, m[0] / det];
        // V' = B - C^T (A + seed)^{-1} C.
        let mut v = b.clone();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0.0;
                for k in 0..2 {
                    for l in 0..2 {
                        let mkl = match (k, l) {
                            (0, 0) => minv[0],
                            (1, 1) => minv[2],
                            _ => minv[1],
                        };
                        acc += c[(k, i)] * mkl * c[(l, j)];
                    }
                }
                v[(i, j)] -= acc;
            }
        }
        g_clamped(det2(&v).max(0.0).sqrt())
    };

    let outcome = optim::grid_then_refine(
        |u, theta| -conditional(u, theta),
        (-SEED_LOG_RANGE * std::f64::consts::LN_10, SEED_LOG_RANGE * std::f64::consts::LN_10),
        SEED_GRID,
        (
            0.0,
            std::f64::consts::PI * (1.0 - 1.0 / SEED_ANGLE_GRID as f64),
        ),
        SEED_ANGLE_GRID,
    );
    let min_conditional = -outcome.value;
    Ok(GaussianDiscord {
        value: s_measured - s_total + min_conditional,
        lambda: outcome.point[0].exp(),
        theta: outcome.point[1].rem_euclid(std::f64::consts::PI),
    })
}

fn det2(m: &DMatrix<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

#[derive(Serialize, Deserialize)]
struct GaussianWire {
    modes: usize,
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

impl Serialize for GaussianState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GaussianWire {
            modes: self.modes,
            mean: self.mean.iter().copied().collect(),
            cov: (0..self.cov.nrows())
                .map(|i| (0..self.cov.ncols()).map(|j| self.cov[(i, j)]).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = GaussianWire::deserialize(deserializer)?;
        let n = wire.mean.len();
        if wire.cov.len() != n || wire.cov.iter().any(|row| row.len() != n) {
            return Err(serde::de::Error::custom(Error::DimensionMismatch {
                context: "covariance rows vs mean length",
                expected: n,
                actual: wire.cov.len(),
            }));
        }
        let mean = DVector::from_vec(wire.mean);
        let cov = DMatrix::from_fn(n, n, |i, j| wire.cov[i][j]);
        GaussianState::new(wire.modes, mean, cov).map_err(serde::de::Error::custom)
    }
}
