//! Unitary equivalence between the doublet space `H ⊕ H` and `H ⊗ C²`.
//!
//! The sector isometry `V` sends `(ψ_fwd, ψ_bwd)` to
//! `ψ_fwd ⊗ |fwd⟩ + ψ_bwd ⊗ |bwd⟩`. Tensor vectors use Kronecker order, so
//! component `2i + k` holds grid point `i` with internal state `k`
//! (`k = 0` for `|fwd⟩ ≡ |H⟩`, `k = 1` for `|bwd⟩ ≡ |V⟩`).
//!
//! Block operators on `H ⊕ H` use sector order: the first `N` components are the
//! forward sector.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::massless::DoubletState;

#[derive(Debug, Error, PartialEq)]
pub enum BridgeError {
    #[error("operator is {rows}×{cols}, expected {expected}×{expected}")]
    DimensionMismatch { rows: usize, cols: usize, expected: usize },
    #[error("state norm² is {0}, expected 1 within 1e-9")]
    NotNormalized(f64),
    #[error("tensor vector of length {0} cannot be split into two sectors")]
    OddLength(usize),
    #[error("malformed two-qubit document: {0}")]
    Json(String),
}

pub mod pauli {
    use nalgebra::Matrix2;
    use num_complex::Complex64;

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const L: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);

    pub fn identity() -> Matrix2<Complex64> {
        Matrix2::new(L, O, O, L)
    }

    pub fn x() -> Matrix2<Complex64> {
        Matrix2::new(O, L, L, O)
    }

    pub fn y() -> Matrix2<Complex64> {
        Matrix2::new(O, -I, I, O)
    }

    pub fn z() -> Matrix2<Complex64> {
        Matrix2::new(L, O, O, -L)
    }
}

/// Element of `H ⊗ C²` in Kronecker order.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector(pub DVector<Complex64>);

impl TensorVector {
    pub fn grid_len(&self) -> usize {
        self.0.len() / 2
    }

    pub fn inner(&self, other: &TensorVector) -> Complex64 {
        self.0.dotc(&other.0)
    }
}

/// `V(ψ_fwd ⊕ ψ_bwd) = ψ_fwd ⊗ |fwd⟩ + ψ_bwd ⊗ |bwd⟩`, extended linearly.
pub fn sector_isometry(s: &DoubletState) -> TensorVector {
    let n = s.len();
    let mut v = DVector::zeros(2 * n);
    for i in 0..n {
        v[2 * i] = s.forward()[i];
        v[2 * i + 1] = s.backward()[i];
    }
    TensorVector(v)
}

/// `V⁻¹` onto amplitude pairs `(ψ_fwd, ψ_bwd)`.
pub fn sector_isometry_inverse(t: &TensorVector) -> Result<(Vec<Complex64>, Vec<Complex64>), BridgeError> {
    if !t.0.len().is_multiple_of(2) {
        return Err(BridgeError::OddLength(t.0.len()));
    }
    let fwd = t.0.iter().step_by(2).copied().collect();
    let bwd = t.0.iter().skip(1).step_by(2).copied().collect();
    Ok((fwd, bwd))
}

/// Sector-ordered vector `(ψ_fwd; ψ_bwd)` for use with [`BlockOperator`].
pub fn doublet_vector(s: &DoubletState) -> DVector<Complex64> {
    DVector::from_iterator(2 * s.len(), s.forward().iter().chain(s.backward()).copied())
}

/// `V` as a `2N × 2N` permutation matrix from sector order to Kronecker order.
pub fn isometry_matrix(n: usize) -> DMatrix<Complex64> {
    let mut v = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        v[(2 * i, i)] = Complex64::ONE;
        v[(2 * i + 1, n + i)] = Complex64::ONE;
    }
    v
}

/// `ι(A ⊗ B)` in block form `[[b₀₀A, b₀₁A], [b₁₀A, b₁₁A]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl BlockOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self, BridgeError> {
        let (r, c) = matrix.shape();
        if r != c || r % 2 != 0 {
            return Err(BridgeError::DimensionMismatch { rows: r, cols: c, expected: r.max(c) + r.max(c) % 2 });
        }
        Ok(BlockOperator { n: r / 2, matrix })
    }

    pub fn identity(n: usize) -> Self {
        BlockOperator { n, matrix: DMatrix::identity(2 * n, 2 * n) }
    }

    pub fn grid_len(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Block `(i, j)` with `i, j ∈ {0, 1}`.
    pub fn block(&self, i: usize, j: usize) -> DMatrix<Complex64> {
        self.matrix.view((i * self.n, j * self.n), (self.n, self.n)).into_owned()
    }

    pub fn compose(&self, rhs: &BlockOperator) -> BlockOperator {
        BlockOperator { n: self.n, matrix: &self.matrix * &rhs.matrix }
    }

    pub fn adjoint(&self) -> BlockOperator {
        BlockOperator { n: self.n, matrix: self.matrix.adjoint() }
    }

    pub fn apply(&self, s: &DoubletState) -> DVector<Complex64> {
        &self.matrix * doublet_vector(s)
    }

    pub fn max_abs_diff(&self, other: &BlockOperator) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// The unital *-homomorphism `ι(A ⊗ B)`. `B` need not be Hermitian.
pub fn iota(a: &DMatrix<Complex64>, b: &Matrix2<Complex64>) -> Result<BlockOperator, BridgeError> {
    let (r, c) = a.shape();
    if r != c {
        return Err(BridgeError::DimensionMismatch { rows: r, cols: c, expected: r });
    }
    let n = r;
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for bi in 0..2 {
        for bj in 0..2 {
            m.view_mut((bi * n, bj * n), (n, n)).copy_from(&(a * b[(bi, bj)]));
        }
    }
    Ok(BlockOperator { n, matrix: m })
}

/// `A ⊗ B` on `H ⊗ C²` in Kronecker order.
pub fn tensor_operator(a: &DMatrix<Complex64>, b: &Matrix2<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectationReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
}

/// `⟨Ψ, ι(A⊗B)Ψ⟩` against `⟨VΨ, (A⊗B)VΨ⟩`.
pub fn expectation_equality(
    s: &DoubletState,
    a: &DMatrix<Complex64>,
    b: &Matrix2<Complex64>,
) -> Result<ExpectationReport, BridgeError> {
    let n = s.len();
    if a.shape() != (n, n) {
        return Err(BridgeError::DimensionMismatch { rows: a.nrows(), cols: a.ncols(), expected: n });
    }
    let psi = doublet_vector(s);
    let lhs = psi.dotc(&(iota(a, b)?.matrix() * &psi));
    let v = sector_isometry(s).0;
    let rhs = v.dotc(&(tensor_operator(a, b) * &v));
    Ok(ExpectationReport { lhs, rhs, deviation: (lhs - rhs).norm() })
}

/// `U(Λ∞)` on `H ⊕ H` in block form: off-diagonal identities.
pub fn lambda_inf_block(n: usize) -> BlockOperator {
    iota(&DMatrix::identity(n, n), &pauli::x()).expect("square identity")
}

/// `max |V U(Λ∞) V⁻¹ − 𝕀 ⊗ σx|` entrywise.
pub fn u_lambda_conjugation_check(n: usize) -> f64 {
    let v = isometry_matrix(n);
    let conj = &v * lambda_inf_block(n).matrix() * v.adjoint();
    let target = tensor_operator(&DMatrix::identity(n, n), &pauli::x());
    (conj - target).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// A two-qubit pure state in the ordered basis `(|+⟩|H⟩, |+⟩|V⟩, |−⟩|H⟩, |−⟩|V⟩)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState {
    amplitudes: [Complex64; 4],
}

impl TwoQubitState {
    pub const BASIS: [&'static str; 4] = ["+H", "+V", "-H", "-V"];

    /// Wraps amplitudes without normalizing.
    pub fn from_amplitudes(amplitudes: [Complex64; 4]) -> Self {
        TwoQubitState { amplitudes }
    }

    pub fn normalized(amplitudes: [Complex64; 4]) -> Result<Self, BridgeError> {
        let n = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(BridgeError::NotNormalized(0.0));
        }
        Ok(TwoQubitState { amplitudes: amplitudes.map(|c| c / n) })
    }

    /// Basis state by index into [`Self::BASIS`].
    pub fn basis(k: usize) -> Self {
        let mut a = [Complex64::ZERO; 4];
        a[k] = Complex64::ONE;
        TwoQubitState { amplitudes: a }
    }

    /// `V Ψ` for a doublet on a two-point grid, reading the grid points as the
    /// direction qubit `|+⟩, |−⟩`.
    pub fn from_tensor(t: &TensorVector) -> Result<Self, BridgeError> {
        if t.0.len() != 4 {
            return Err(BridgeError::DimensionMismatch { rows: t.0.len(), cols: 1, expected: 4 });
        }
        Ok(TwoQubitState { amplitudes: [t.0[0], t.0[1], t.0[2], t.0[3]] })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn as_vector(&self) -> nalgebra::Vector4<Complex64> {
        nalgebra::Vector4::from_column_slice(&self.amplitudes)
    }

    /// `⟨ψ| O |ψ⟩`.
    pub fn expectation(&self, op: &nalgebra::Matrix4<Complex64>) -> Complex64 {
        let v = self.as_vector();
        v.dotc(&(op * v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, BridgeError> {
        serde_json::from_str(text).map_err(|e| BridgeError::Json(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct TwoQubitDoc {
    basis: Vec<String>,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for TwoQubitState {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TwoQubitDoc {
            basis: Self::BASIS.iter().map(|s| s.to_string()).collect(),
            amplitudes: self.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TwoQubitState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = TwoQubitDoc::deserialize(deserializer)?;
        if doc.basis != Self::BASIS {
            return Err(D::Error::custom(format!("basis must be {:?}", Self::BASIS)));
        }
        if doc.amplitudes.len() != 4 {
            return Err(D::Error::custom("expected four amplitudes"));
        }
        let mut a = [Complex64::ZERO; 4];
        for (slot, [re, im]) in a.iter_mut().zip(doc.amplitudes) {
            *slot = Complex64::new(re, im);
        }
        Ok(TwoQubitState { amplitudes: a })
    }
}

/// Von Neumann entropy (nats) of the reduced direction qubit.
pub fn entanglement_entropy(t: &TwoQubitState) -> Result<f64, BridgeError> {
    let norm = t.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(BridgeError::NotNormalized(norm));
    }
    let a = t.amplitudes();
    // ρ_dir = M M† with M[d][p] = amplitude(d, p)
    let r00 = a[0].norm_sqr() + a[1].norm_sqr();
    let r11 = a[2].norm_sqr() + a[3].norm_sqr();
    let r01 = a[0] * a[2].conj() + a[1] * a[3].conj();
    let det = r00 * r11 - r01.norm_sqr();
    let tr = r00 + r11;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let entropy =
        [(tr + disc) / 2.0, (tr - disc) / 2.0].iter().filter(|&&l| l > 1e-300).map(|&l| -l * l.ln()).sum::<f64>();
    Ok(entropy.max(0.0))
}
