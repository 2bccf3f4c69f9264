use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian operator: real eigenvalues in descending
/// order and the matching orthonormal eigenvectors as matrix columns.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

/// Hermitian eigendecomposition, eigenvalues descending.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let se = m.clone().symmetric_eigen();
    let d = m.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vecs = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(k));
    }
    (vals, vecs)
}

