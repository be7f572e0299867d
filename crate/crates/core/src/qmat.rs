//! Finite-dimensional density matrices on labeled tensor factors.
//!
//! A [`QState`] stores the full density matrix together with the list of
//! subsystem dimensions. Subsystem 0 is the leftmost Kronecker factor and
//! indices are row-major, so for dims `[dA, dB]` the basis state `|i, j>`
//! sits at flat index `i * dB + j`.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type CMatrix = DMatrix<Complex<f64>>;
pub type CVector = DVector<Complex<f64>>;

/// Largest tolerated deviation from hermiticity, `max |M - M^dag|`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Largest tolerated deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative tolerated eigenvalue of a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Largest tolerated deviation of `U^dag U` from the identity.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Density matrix on a tensor product of finite-dimensional subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl QState {
    /// Validates and wraps a density matrix.
    ///
    /// Rejects matrices that are not square, do not match the product of
    /// `dims`, or violate hermiticity, unit trace, or positivity within the
    /// module tolerances.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self, Error> {
        if dims.is_empty() || dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidPartition {
                reason: "subsystem dimensions must be nonzero".into(),
            });
        }
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let total: usize = dims.iter().product();
        if matrix.nrows() != total {
            return Err(Error::DimensionMismatch {
                context: "density matrix vs subsystem dimensions",
                expected: total,
                actual: matrix.nrows(),
            });
        }
        let herm_dev = max_abs(&(&matrix - matrix.adjoint()));
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: herm_dev,
                tolerance: HERMITICITY_TOL,
            });
        }
        let trace_dev = (matrix.trace() - Complex::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(Error::TraceNotOne {
                deviation: trace_dev,
                tolerance: TRACE_TOL,
            });
        }
        let hermitized = hermitize(&matrix);
        let min_eig = eigenvalues_hermitian(&hermitized)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
                tolerance: POSITIVITY_TOL,
            });
        }
        Ok(QState {
            dims,
            matrix: hermitized,
        })
    }

    /// Wraps a matrix already known to be a valid density matrix.
    ///
    /// Used on internal paths where validity follows from the construction
    /// (mixtures, unitary conjugations, partial traces of valid states).
    /// The matrix is hermitized to absorb floating-point drift.
    pub(crate) fn from_valid_parts(dims: Vec<usize>, matrix: CMatrix) -> Self {
        let matrix = hermitize(&matrix);
        debug_assert!((matrix.trace().re - 1.0).abs() < 1e-8);
        QState { dims, matrix }
    }

    /// Rank-one density matrix `|psi><psi|` of a normalized ket.
    pub fn pure(dims: Vec<usize>, ket: &CVector) -> Result<Self, Error> {
        let norm_dev = (ket.norm() - 1.0).abs();
        if norm_dev > TRACE_TOL {
            return Err(Error::TraceNotOne {
                deviation: norm_dev,
                tolerance: TRACE_TOL,
            });
        }
        let matrix = ket * ket.adjoint();
        QState::new(dims, matrix)
    }

    /// Two-qubit Bell state `(|00> + |11>)/sqrt(2)`.
    pub fn bell() -> Self {
        let inv = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut ket = CVector::zeros(4);
        ket[0] = inv;
        ket[3] = inv;
        QState::pure(vec![2, 2], &ket).expect("Bell ket is normalized")
    }

    /// Classically correlated two-qubit mixture `(|00><00| + |11><11|)/2`.
    pub fn classical_correlated() -> Self {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = Complex::new(0.5, 0.0);
        m[(3, 3)] = Complex::new(0.5, 0.0);
        QState::from_valid_parts(vec![2, 2], m)
    }

    /// Werner state `p |Bell><Bell| + (1 - p) I/4` for `p` in `[0, 1]`.
    pub fn werner(p: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::domain(format!(
                "werner mixing parameter must lie in [0, 1], got {p}"
            )));
        }
        let bell = QState::bell();
        let mut m = bell.matrix * Complex::new(p, 0.0);
        for i in 0..4 {
            m[(i, i)] += Complex::new((1.0 - p) / 4.0, 0.0);
        }
        Ok(QState::from_valid_parts(vec![2, 2], m))
    }

    /// Tensor product of two states; subsystems of `b` follow those of `a`.
    pub fn product(a: &QState, b: &QState) -> Self {
        let mut dims = a.dims.clone();
        dims.extend_from_slice(&b.dims);
        QState::from_valid_parts(dims, a.matrix.kronecker(&b.matrix))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Reduced state on the listed subsystems.
    ///
    /// `keep` must be strictly increasing; kept subsystems retain their
    /// relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<QState, Error> {
        if keep.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "at least one subsystem must be kept".into(),
            });
        }
        if !keep.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition {
                reason: "kept subsystem indices must be strictly increasing".into(),
            });
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.dims.len()) {
            return Err(Error::SubsystemOutOfRange {
                index: bad,
                count: self.dims.len(),
            });
        }

        let strides = strides(&self.dims);
        let traced: Vec<usize> = (0..self.dims.len()).filter(|i| !keep.contains(i)).collect();
        if traced.is_empty() {
            return Ok(self.clone());
        }

        let keep_offsets = offset_table(&self.dims, &strides, keep);
        let traced_offsets = offset_table(&self.dims, &strides, &traced);
        let dk = keep_offsets.len();

        let mut out = CMatrix::zeros(dk, dk);
        for (i, &oi) in keep_offsets.iter().enumerate() {
            for (j, &oj) in keep_offsets.iter().enumerate() {
                let mut acc = Complex::new(0.0, 0.0);
                for &ot in &traced_offsets {
                    acc += self.matrix[(oi + ot, oj + ot)];
                }
                out[(i, j)] = acc;
            }
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(QState::from_valid_parts(kept_dims, out))
    }

    /// Conjugates the state by a unitary acting on a single subsystem.
    pub fn apply_unitary(&self, op: &UnitaryOp) -> Result<QState, Error> {
        if op.target >= self.dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: op.target,
                count: self.dims.len(),
            });
        }
        if op.matrix.nrows() != self.dims[op.target] {
            return Err(Error::DimensionMismatch {
                context: "unitary vs target subsystem",
                expected: self.dims[op.target],
                actual: op.matrix.nrows(),
            });
        }
        let embedded = embed(&op.matrix, &self.dims, op.target);
        let rotated = &embedded * &self.matrix * embedded.adjoint();
        Ok(QState::from_valid_parts(self.dims.clone(), rotated))
    }
}

/// Unitary acting on one subsystem of a larger state.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: CMatrix,
    target: usize,
}

impl UnitaryOp {
    /// Validates unitarity of `matrix` within [`UNITARITY_TOL`].
    pub fn new(matrix: CMatrix, target: usize) -> Result<Self, Error> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let gram = matrix.adjoint() * &matrix;
        let dev = max_abs(&(gram - CMatrix::identity(matrix.nrows(), matrix.ncols())));
        if dev > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation: dev,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(UnitaryOp { matrix, target })
    }

    pub fn identity(dim: usize, target: usize) -> Self {
        UnitaryOp {
            matrix: CMatrix::identity(dim, dim),
            target,
        }
    }

    /// Qubit bit flip `X`.
    pub fn pauli_x(target: usize) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex::new(1.0, 0.0);
        m[(1, 0)] = Complex::new(1.0, 0.0);
        UnitaryOp { matrix: m, target }
    }

    /// Qubit phase flip `Z`.
    pub fn pauli_z(target: usize) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex::new(1.0, 0.0);
        m[(1, 1)] = Complex::new(-1.0, 0.0);
        UnitaryOp { matrix: m, target }
    }

    /// Combined flip `XZ` (equal to `-iY`).
    pub fn pauli_xz(target: usize) -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex::new(-1.0, 0.0);
        m[(1, 0)] = Complex::new(1.0, 0.0);
        UnitaryOp { matrix: m, target }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn target(&self) -> usize {
        self.target
    }
}

/// Kronecker product, `a` on the left.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Embeds a single-subsystem operator into the full space.
pub(crate) fn embed(op: &CMatrix, dims: &[usize], target: usize) -> CMatrix {
    let pre: usize = dims[..target].iter().product();
    let post: usize = dims[target + 1..].iter().product();
    let mut out = CMatrix::identity(pre, pre).kronecker(op);
    if post > 1 {
        out = out.kronecker(&CMatrix::identity(post, post));
    }
    out
}

/// Row-major strides for a list of subsystem dimensions.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat-index offsets contributed by every joint value of the listed
/// subsystems, in row-major order of those subsystems.
pub(crate) fn offset_table(dims: &[usize], strides: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &s in subsystems {
        let mut next = Vec::with_capacity(offsets.len() * dims[s]);
        for &base in &offsets {
            for v in 0..dims[s] {
                next.push(base + v * strides[s]);
            }
        }
        offsets = next;
    }
    offsets
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex::new(0.5, 0.0)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn eigenvalues_hermitian(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    ev
}

#[derive(Serialize, Deserialize)]
struct QStateWire {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

pub(crate) fn matrix_rows(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

pub(crate) fn matrix_from_rows(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<CMatrix, Error> {
    let rows = re.len();
    if rows == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    let cols = re[0].len();
    if im.len() != rows {
        return Err(Error::DimensionMismatch {
            context: "imaginary part row count",
            expected: rows,
            actual: im.len(),
        });
    }
    for (r, i) in re.iter().zip(im.iter()) {
        if r.len() != cols || i.len() != cols {
            return Err(Error::DimensionMismatch {
                context: "matrix row length",
                expected: cols,
                actual: r.len().max(i.len()),
            });
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        Complex::new(re[i][j], im[i][j])
    }))
}

impl Serialize for QState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (re, im) = matrix_rows(&self.matrix);
        QStateWire {
            dims: self.dims.clone(),
            re,
            im,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = QStateWire::deserialize(deserializer)?;
        let matrix = matrix_from_rows(&wire.re, &wire.im).map_err(serde::de::Error::custom)?;
        QState::new(wire.dims, matrix).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn eigen_hermitian(m: &CMatrix) -> (Vec<f64>, CMatrix) {
        let decomp = m.clone().symmetric_eigen();
        (decomp.eigenvalues.iter().copied().collect(), decomp.eigenvectors)
    }

    #[test]
    fn symmetric_eigen_reconstructs_complex_hermitian() {
        // The eigensolver underpins every entropy in the crate; check it
        // reproduces M = V diag(ev) V^dag and returns unitary eigenvectors.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 8, 16] {
            let raw = CMatrix::from_fn(n, n, |_, _| {
                c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let herm = hermitize(&raw);
            let (ev, vecs) = eigen_hermitian(&herm);
            let gram_dev = max_abs(&(vecs.adjoint() * &vecs - CMatrix::identity(n, n)));
            assert!(gram_dev < 1e-9, "eigenvectors not unitary: {gram_dev:.3e}");
            let mut rebuilt = CMatrix::zeros(n, n);
            for (k, &lambda) in ev.iter().enumerate() {
                let v = vecs.column(k);
                rebuilt += (v * v.adjoint()) * c(lambda, 0.0);
            }
            let dev = max_abs(&(rebuilt - herm));
            assert!(dev < 1e-9, "reconstruction failed at n={n}: {dev:.3e}");
        }
    }

    #[test]
    fn bell_state_is_pure_and_unit_trace() {
        let bell = QState::bell();
        assert_eq!(bell.dims(), &[2, 2]);
        assert_abs_diff_eq!(bell.matrix().trace().re, 1.0, epsilon = 1e-12);
        let squared = bell.matrix() * bell.matrix();
        assert_abs_diff_eq!(squared.trace().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_rejects_out_of_range_mixing() {
        assert!(matches!(QState::werner(-0.1), Err(Error::Domain(_))));
        assert!(matches!(QState::werner(1.5), Err(Error::Domain(_))));
        assert!(QState::werner(0.0).is_ok());
        assert!(QState::werner(1.0).is_ok());
    }

    #[test]
    fn new_rejects_non_hermitian_with_diagnostic() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.5, 0.0);
        m[(1, 1)] = c(0.5, 0.0);
        m[(0, 1)] = c(0.3, 0.0);
        let err = QState::new(vec![2], m).unwrap_err();
        assert!(err.to_string().contains("hermiticity violated"), "{err}");
    }

    #[test]
    fn new_rejects_bad_trace_and_negativity() {
        let m = CMatrix::identity(2, 2);
        let err = QState::new(vec![2], m).unwrap_err();
        assert!(err.to_string().contains("unit trace violated"), "{err}");

        let mut neg = CMatrix::zeros(2, 2);
        neg[(0, 0)] = c(1.5, 0.0);
        neg[(1, 1)] = c(-0.5, 0.0);
        let err = QState::new(vec![2], neg).unwrap_err();
        assert!(err.to_string().contains("positivity violated"), "{err}");
    }

    #[test]
    fn partial_trace_of_product_recovers_factors() {
        let a = QState::werner(0.3).unwrap();
        let b = QState::classical_correlated();
        let joint = QState::product(&a, &b);
        assert_eq!(joint.dims(), &[2, 2, 2, 2]);
        let back_a = joint.partial_trace(&[0, 1]).unwrap();
        let back_b = joint.partial_trace(&[2, 3]).unwrap();
        assert!(max_abs(&(back_a.matrix() - a.matrix())) < 1e-12);
        assert!(max_abs(&(back_b.matrix() - b.matrix())) < 1e-12);
    }

    #[test]
    fn partial_trace_validates_indices() {
        let bell = QState::bell();
        assert!(matches!(
            bell.partial_trace(&[]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            bell.partial_trace(&[1, 0]),
            Err(Error::InvalidPartition { .. })
        ));
        assert!(matches!(
            bell.partial_trace(&[2]),
            Err(Error::SubsystemOutOfRange { .. })
        ));
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let bell = QState::bell();
        for keep in [[0usize], [1usize]] {
            let marginal = bell.partial_trace(&keep).unwrap();
            let half_identity = CMatrix::identity(2, 2) * c(0.5, 0.0);
            assert!(max_abs(&(marginal.matrix() - half_identity)) < 1e-12);
        }
    }

    #[test]
    fn apply_unitary_preserves_spectrum() {
        let w = QState::werner(0.7).unwrap();
        let rotated = w.apply_unitary(&UnitaryOp::pauli_x(0)).unwrap();
        let before = eigenvalues_hermitian(w.matrix());
        let after = eigenvalues_hermitian(rotated.matrix());
        for (x, y) in before.iter().zip(after.iter()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn pauli_xz_matches_composition() {
        let x = UnitaryOp::pauli_x(0);
        let z = UnitaryOp::pauli_z(0);
        let xz = UnitaryOp::pauli_xz(0);
        let composed = x.matrix() * z.matrix();
        assert!(max_abs(&(composed - xz.matrix())) < 1e-15);
    }

    #[test]
    fn unitary_op_rejects_non_unitary() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 0)] = c(2.0, 0.0);
        let err = UnitaryOp::new(m, 0).unwrap_err();
        assert!(err.to_string().contains("unitarity violated"), "{err}");
    }

    #[test]
    fn embed_acts_on_middle_subsystem() {
        let dims = [2usize, 2, 2];
        let state = QState::product(
            &QState::product(&QState::werner(0.2).unwrap().partial_trace(&[0]).unwrap(), {
                let mut m = CMatrix::zeros(2, 2);
                m[(0, 0)] = c(1.0, 0.0);
                &QState::from_valid_parts(vec![2], m)
            }),
            {
                let mut m = CMatrix::zeros(2, 2);
                m[(1, 1)] = c(1.0, 0.0);
                &QState::from_valid_parts(vec![2], m)
            },
        );
        assert_eq!(state.dims(), &dims);
        let flipped = state.apply_unitary(&UnitaryOp::pauli_x(1)).unwrap();
        // |0> on the middle qubit becomes |1>: marginal swaps its diagonal.
        let mid = flipped.partial_trace(&[1]).unwrap();
        assert_abs_diff_eq!(mid.matrix()[(1, 1)].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let w = QState::werner(1.0 / 3.0).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: QState = serde_json::from_str(&json).unwrap();
        assert_eq!(back.dims(), w.dims());
        for (x, y) in back.matrix().iter().zip(w.matrix().iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn deserialization_rejects_invalid_density_matrix() {
        let json = r#"{"dims": [2], "re": [[0.9, 0.0], [0.0, 0.9]], "im": [[0.0, 0.0], [0.0, 0.0]]}"#;
        let err = serde_json::from_str::<QState>(json).unwrap_err();
        assert!(err.to_string().contains("unit trace violated"), "{err}");
    }
}
