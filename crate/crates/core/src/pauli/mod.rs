//! Pauli strings, dense operators and the Fourier transform between them.

mod eigen;
mod fourier;
mod norms;
mod operator;
mod spectrum;
mod string;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use fourier::{direct_coefficient, fourier_coefficients, fourier_transform, inverse_coefficients, inverse_fourier};
pub use norms::{schatten_from_singular, schatten_norm, schatten_norms};
pub use operator::{DenseOperator, MAX_DENSE_QUBITS};
pub use spectrum::Spectrum;
#[allow(unused_imports)]
pub(crate) use spectrum::{format_complex, parse_complex};
pub use string::{pauli_matrix, Pauli, PauliString};

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;

/// `⟨f, g⟩ = 2^{-n} tr(f† g)`.
pub fn inner_product<T: Real>(f: &DenseOperator<T>, g: &DenseOperator<T>) -> Result<Complex<T>> {
    f.inner_product(g)
}

/// `‖f² - I‖_∞ ≤ tol` and `‖f - f†‖_∞ ≤ tol`.
pub fn is_quantum_boolean<T: Real>(f: &DenseOperator<T>, tol: T) -> bool {
    let skew = f - &f.adjoint();
    if !skew.operator_norm_at_most(tol) {
        return false;
    }
    let square = f.matmul(f).expect("same size");
    (&square - &DenseOperator::identity(f.n())).operator_norm_at_most(tol)
}
