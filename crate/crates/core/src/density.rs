use crate::error::{invalid, Result};
use crate::tensor::{hermitian_eigenvalues, partial_trace, ComplexMatrix, Dims, SiteSet, C64};

/// Deviation from Hermiticity tolerated on a claimed density matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Deviation of the trace from 1 tolerated on a claimed density matrix.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues in `[-NEGATIVE_TOL, 0)` are roundoff and clipped to 0;
/// anything lower means the input is not positive semidefinite.
pub const NEGATIVE_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit-trace matrix over a register.
///
/// The clipped spectrum is computed once at construction and reused by
/// every entropy functional.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Dims,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        let n = dims.total();
        if matrix.rows() != n || matrix.cols() != n {
            return invalid(format!(
                "density matrix is {}x{} but dims {:?} require {n}x{n}",
                matrix.rows(),
                matrix.cols(),
                dims.as_slice()
            ));
        }
        Self::validated(matrix, dims)
    }

    /// A density matrix with no register structure: one site of dimension
    /// `matrix.rows()`.
    pub fn unstructured(matrix: ComplexMatrix) -> Result<Self> {
        let dims = Dims::new(vec![matrix.rows()])?;
        Self::new(matrix, dims)
    }

    pub fn from_pure(psi: &[C64], dims: Dims) -> Result<Self> {
        Self::new(ComplexMatrix::projector(psi), dims)
    }

    /// Trusted construction for matrices that are density matrices by
    /// construction (e.g. tensor products of known resources) whose spectrum
    /// is known in closed form, skipping the eigendecomposition.
    pub(crate) fn with_known_spectrum(matrix: ComplexMatrix, dims: Dims, mut spectrum: Vec<f64>) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        debug_assert_eq!(spectrum.len(), dims.total());
        debug_assert!((matrix.trace().re - 1.0).abs() <= TRACE_TOL);
        spectrum.sort_by(f64::total_cmp);
        DensityMatrix { matrix, dims, spectrum }
    }

    fn validated(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return invalid(format!("not Hermitian (deviation {herm:.3e})"));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return invalid(format!("trace is {tr}, expected 1"));
        }
        let mut spectrum = hermitian_eigenvalues(&matrix)?;
        if let Some(&low) = spectrum.first() {
            if low < -NEGATIVE_TOL {
                return invalid(format!("not positive semidefinite (eigenvalue {low:.3e})"));
            }
        }
        for x in &mut spectrum {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        Ok(DensityMatrix { matrix, dims, spectrum })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Ascending eigenvalues, clipped at 0.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn reduce(&self, keep: &SiteSet) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return invalid("cannot reduce onto an empty site set");
        }
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = Dims::new(keep.iter().map(|s| self.dims.as_slice()[s]).collect())?;
        Self::new(m, dims)
    }
}
