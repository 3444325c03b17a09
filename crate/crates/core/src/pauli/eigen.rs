use num_complex::Complex;
use num_traits::{One, Zero};

use crate::pauli::DenseOperator;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `A = V diag(values) V†` with ascending eigenvalues.
///
/// `vectors` is row-major; column `k` is the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub dim: usize,
    pub values: Vec<T>,
    pub vectors: Vec<Complex<T>>,
}

impl<T: Real> HermitianEigen<T> {
    #[inline]
    pub fn vector_entry(&self, row: usize, k: usize) -> Complex<T> {
        self.vectors[row * self.dim + k]
    }

    /// `V diag(values) V†` for replacement eigenvalues.
    pub fn reconstruct(&self, values: &[T]) -> DenseOperator<T> {
        let d = self.dim;
        assert_eq!(values.len(), d);
        let mut out = vec![Complex::zero(); d * d];
        for r in 0..d {
            for c in r..d {
                let mut acc = Complex::zero();
                for (k, &l) in values.iter().enumerate() {
                    if l == T::zero() {
                        continue;
                    }
                    acc += self.vectors[r * d + k] * self.vectors[c * d + k].conj() * l;
                }
                out[r * d + c] = acc;
                out[c * d + r] = acc.conj();
            }
            out[r * d + r].im = T::zero();
        }
        DenseOperator::from_square(out).expect("power-of-two dimension").symmetrized()
    }

    /// `V diag(phases) V†` for complex replacement eigenvalues.
    pub fn reconstruct_complex(&self, values: &[Complex<T>]) -> DenseOperator<T> {
        let d = self.dim;
        assert_eq!(values.len(), d);
        let mut out = vec![Complex::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex::zero();
                for (k, l) in values.iter().enumerate() {
                    acc += self.vectors[r * d + k] * self.vectors[c * d + k].conj() * l;
                }
                out[r * d + c] = acc;
            }
        }
        DenseOperator::from_square(out).expect("power-of-two dimension")
    }
}

/// Cyclic complex Jacobi on a row-major Hermitian `dim x dim` matrix.
///
/// Only the Hermitian part of the input is used implicitly; the caller is
/// expected to pass a matrix that is Hermitian to rounding.
pub fn hermitian_eigen<T: Real>(dim: usize, entries: &[Complex<T>]) -> HermitianEigen<T> {
    assert_eq!(entries.len(), dim * dim);
    let mut a = entries.to_vec();
    let mut v = vec![Complex::<T>::zero(); dim * dim];
    for i in 0..dim {
        v[i * dim + i] = Complex::one();
        a[i * dim + i].im = T::zero();
    }
    let frob: T = a.iter().map(|z| z.norm_sqr()).sum::<T>();
    let scale = T::from_usize_lossy(dim * dim);
    let target = (T::epsilon() * T::epsilon()) * frob * scale;
    let half = T::lit(0.5);

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for r in 0..dim {
            for c in (r + 1)..dim {
                off += a[r * dim + c].norm_sqr();
            }
        }
        if off * (T::one() + T::one()) <= target || off == T::zero() {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let b = a[p * dim + q];
                let mag = b.norm();
                if mag == T::zero() {
                    continue;
                }
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                let phase = b / mag; // e^{iφ}
                let theta = (aqq - app) * half / mag;
                let t = if theta == T::zero() {
                    T::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                let emi = phase.conj();
                let j_pp = Complex::new(cs, T::zero());
                let j_pq = Complex::new(sn, T::zero());
                let j_qp = emi * (-sn);
                let j_qq = emi * cs;

                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = akp * j_pp + akq * j_qp;
                    a[k * dim + q] = akp * j_pq + akq * j_qq;
                }
                let (c_pp, c_pq, c_qp, c_qq) = (j_pp.conj(), j_pq.conj(), j_qp.conj(), j_qq.conj());
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c_pp * apk + c_qp * aqk;
                    a[q * dim + k] = c_pq * apk + c_qq * aqk;
                }
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = vkp * j_pp + vkq * j_qp;
                    v[k * dim + q] = vkp * j_pq + vkq * j_qq;
                }
                a[p * dim + q] = Complex::zero();
                a[q * dim + p] = Complex::zero();
                a[p * dim + p].im = T::zero();
                a[q * dim + q].im = T::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a[i * dim + i].re.partial_cmp(&a[j * dim + j].re).unwrap());
    let values = order.iter().map(|&i| a[i * dim + i].re).collect();
    let mut vectors = vec![Complex::zero(); dim * dim];
    for (new, &old) in order.iter().enumerate() {
        for r in 0..dim {
            vectors[r * dim + new] = v[r * dim + old];
        }
    }
    HermitianEigen { dim, values, vectors }
}
