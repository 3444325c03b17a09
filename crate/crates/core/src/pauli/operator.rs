use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pauli::eigen::{hermitian_eigen, HermitianEigen};
use crate::scalar::Real;

/// Dense design ceiling: `2^10 x 2^10` matrices.
pub const MAX_DENSE_QUBITS: usize = 10;

/// A `2^n x 2^n` complex matrix, row-major.
///
/// Row and column indices are computational-basis labels with qubit 0 as
/// the most significant bit. The `hermitian` flag records that the stored
/// entries are self-adjoint to within [`DenseOperator::default_tolerance`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T> {
    n: usize,
    data: Vec<Complex<T>>,
    hermitian: bool,
}

impl<T: Real> DenseOperator<T> {
    /// Default Hermiticity / booleanity tolerance (`1e-9` in double precision).
    pub fn default_tolerance() -> T {
        T::tol_floor(1e-9, 64.0)
    }

    /// Builds from row-major entries; `data.len()` must be `4^n`.
    pub fn from_entries(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        let dim = 1usize << n;
        if data.len() != dim * dim {
            return Err(Error::MalformedOperator(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                data.len()
            )));
        }
        let mut op = DenseOperator { n, data, hermitian: false };
        op.hermitian = op.hermiticity_deviation() <= Self::default_tolerance();
        Ok(op)
    }

    /// Builds from a square row-major buffer of any length, inferring `n`.
    pub fn from_square(data: Vec<Complex<T>>) -> Result<Self> {
        let len = data.len();
        let dim = (len as f64).sqrt().round() as usize;
        if dim * dim != len || !dim.is_power_of_two() {
            return Err(Error::MalformedOperator(format!(
                "{len} entries: dimension is not a power of two"
            )));
        }
        Self::from_entries(dim.trailing_zeros() as usize, data)
    }

    pub fn from_real_diagonal(n: usize, diag: &[T]) -> Result<Self> {
        let dim = 1usize << n;
        if diag.len() != dim {
            return Err(Error::MalformedOperator(format!("diagonal of length {} for {n} qubits", diag.len())));
        }
        let mut op = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            op.data[i * dim + i] = Complex::new(d, T::zero());
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn zeros(n: usize) -> Self {
        let dim = 1usize << n;
        DenseOperator { n, data: vec![Complex::zero(); dim * dim], hermitian: true }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zeros(n);
        let dim = op.dim();
        for i in 0..dim {
            op.data[i * dim + i] = Complex::one();
        }
        op
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim() + col]
    }

    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Complex<T>> {
        self.data
    }

    /// Re-derives the Hermitian flag after entries were produced elsewhere.
    pub(crate) fn refresh_flag(mut self) -> Self {
        self.hermitian = self.hermiticity_deviation() <= Self::default_tolerance();
        self
    }

    /// Copies the upper triangle onto the lower one; used after exact
    /// constructions whose rounding leaves a tiny anti-Hermitian residue.
    pub fn symmetrized(&self) -> Self {
        let dim = self.dim();
        let half = T::lit(0.5);
        let mut out = self.data.clone();
        for r in 0..dim {
            out[r * dim + r] = Complex::new(self.data[r * dim + r].re, T::zero());
            for c in (r + 1)..dim {
                let v = (self.data[r * dim + c] + self.data[c * dim + r].conj()) * half;
                out[r * dim + c] = v;
                out[c * dim + r] = v.conj();
            }
        }
        DenseOperator { n: self.n, data: out, hermitian: true }
    }

    /// `max |a_rc - conj(a_cr)|`.
    pub fn hermiticity_deviation(&self) -> T {
        let dim = self.dim();
        let mut worst = T::zero();
        for r in 0..dim {
            for c in r..dim {
                let d = (self.data[r * dim + c] - self.data[c * dim + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn check_qubit(&self, j: usize) -> Result<()> {
        if j >= self.n {
            return Err(Error::QubitOutOfRange { index: j, n: self.n });
        }
        Ok(())
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if !self.hermitian {
            return Err(Error::NotHermitian { deviation: self.hermiticity_deviation().as_f64() });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        let mut out = vec![Complex::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                out[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        DenseOperator { n: self.n, data: out, hermitian: self.hermitian }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        DenseOperator {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let data = self.data.iter().map(|z| z * factor).collect();
        let hermitian = self.hermitian && factor.im == T::zero();
        DenseOperator { n: self.n, data, hermitian }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn trace(&self) -> Complex<T> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).fold(Complex::zero(), |a, b| a + b)
    }

    /// `tr(f) / 2^n`, the coefficient of the identity.
    pub fn normalized_trace(&self) -> Complex<T> {
        self.trace() / T::from_usize_lossy(self.dim())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        let dim = self.dim();
        let mut out = vec![Complex::zero(); dim * dim];
        for r in 0..dim {
            let row = &mut out[r * dim..(r + 1) * dim];
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * dim..(k + 1) * dim];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseOperator::from_entries(self.n, out)?)
    }

    /// `A B + B A`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? + &other.matmul(self)?)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Kronecker product `self ⊗ other`; `self` supplies the leading qubits.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim(), other.dim());
        let dim = da * db;
        let mut out = vec![Complex::zero(); dim * dim];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.data[ar * da + ac];
                if a.is_zero() {
                    continue;
                }
                for br in 0..db {
                    for bc in 0..db {
                        out[(ar * db + br) * dim + ac * db + bc] = a * other.data[br * db + bc];
                    }
                }
            }
        }
        DenseOperator { n: self.n + other.n, data: out, hermitian: self.hermitian && other.hermitian }
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_size(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Unnormalized Frobenius norm.
    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Normalized Hilbert-Schmidt inner product `2^{-n} tr(self† other)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_size(other)?;
        let sum = self
            .data
            .iter()
            .zip(&other.data)
            .fold(Complex::zero(), |acc: Complex<T>, (a, b)| acc + a.conj() * b);
        Ok(sum / T::from_usize_lossy(self.dim()))
    }

    /// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
    pub fn eigh(&self) -> Result<HermitianEigen<T>> {
        self.require_hermitian()?;
        Ok(hermitian_eigen(self.dim(), &self.data))
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        Ok(self.eigh()?.values)
    }

    /// Singular values, descending. Hermitian inputs use `|λ|` directly;
    /// other inputs go through the eigenvalues of the symmetrized `f†f`.
    pub fn singular_values(&self) -> Vec<T> {
        let mut sv: Vec<T> = if self.hermitian {
            hermitian_eigen(self.dim(), &self.data).values.into_iter().map(T::abs).collect()
        } else {
            let gram = self.adjoint().matmul(self).expect("same size").symmetrized();
            hermitian_eigen(gram.dim(), &gram.data)
                .values
                .into_iter()
                .map(|l| l.max(T::zero()).sqrt())
                .collect()
        };
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// Operator norm (largest singular value).
    pub fn operator_norm(&self) -> T {
        self.singular_values().first().copied().unwrap_or_else(T::zero)
    }

    /// Decides `‖self‖_∞ ≤ tol` exactly, avoiding an eigensolve when the
    /// Frobenius or max-entry bounds already settle it.
    pub fn operator_norm_at_most(&self, tol: T) -> bool {
        if self.frobenius_norm() <= tol {
            return true;
        }
        if self.data.iter().any(|z| z.norm() > tol) {
            return false;
        }
        self.operator_norm() <= tol
    }

    /// `‖f†f - I‖_∞`.
    pub fn unitarity_deviation(&self) -> T {
        let gram = self.adjoint().matmul(self).expect("same size");
        (&gram - &Self::identity(self.n)).operator_norm()
    }

    pub fn require_unitary(&self, tol: T) -> Result<()> {
        let gram = self.adjoint().matmul(self).expect("same size");
        let residual = &gram - &Self::identity(self.n);
        if residual.operator_norm_at_most(tol) {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation: residual.operator_norm().as_f64() })
        }
    }

    /// Applies a function to the eigenvalues of a Hermitian operator.
    pub fn map_eigenvalues(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let eig = self.eigh()?;
        let values: Vec<T> = eig.values.iter().map(|&l| f(l)).collect();
        Ok(eig.reconstruct(&values))
    }

    /// `U_j M` for a single-qubit `u` (row-major 2x2) acting on qubit `j`.
    pub fn apply_left_single(&self, j: usize, u: &[Complex<T>; 4]) -> Self {
        let dim = self.dim();
        let bit = 1usize << (self.n - 1 - j);
        let mut out = self.data.clone();
        for r in 0..dim {
            if r & bit != 0 {
                continue;
            }
            let r1 = r | bit;
            for c in 0..dim {
                let a = self.data[r * dim + c];
                let b = self.data[r1 * dim + c];
                out[r * dim + c] = u[0] * a + u[1] * b;
                out[r1 * dim + c] = u[2] * a + u[3] * b;
            }
        }
        DenseOperator::from_entries(self.n, out).expect("same size")
    }

    /// `M U_j` for a single-qubit `u` acting on qubit `j`.
    pub fn apply_right_single(&self, j: usize, u: &[Complex<T>; 4]) -> Self {
        let dim = self.dim();
        let bit = 1usize << (self.n - 1 - j);
        let mut out = self.data.clone();
        for r in 0..dim {
            for c in 0..dim {
                if c & bit != 0 {
                    continue;
                }
                let c1 = c | bit;
                let a = self.data[r * dim + c];
                let b = self.data[r * dim + c1];
                out[r * dim + c] = a * u[0] + b * u[2];
                out[r * dim + c1] = a * u[1] + b * u[3];
            }
        }
        DenseOperator::from_entries(self.n, out).expect("same size")
    }

    /// `tr_J(f) ⊗ I_J / 2^{|J|}`: averages out the qubits in `qubits`,
    /// leaving an operator on all `n` qubits that acts trivially on them.
    pub fn average_out(&self, qubits: &[usize]) -> Result<Self> {
        for &j in qubits {
            self.check_qubit(j)?;
        }
        let dim = self.dim();
        let mask = qubits.iter().fold(0usize, |m, &j| m | 1 << (self.n - 1 - j));
        let k = mask.count_ones();
        let norm = T::one() / T::from_usize_lossy(1usize << k);
        // enumerate submasks of `mask`
        let subs: Vec<usize> = {
            let mut v = Vec::with_capacity(1 << k);
            let mut s = mask;
            loop {
                v.push(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & mask;
            }
            v
        };
        let mut out = vec![Complex::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                if (r & mask) != (c & mask) {
                    continue;
                }
                let (rb, cb) = (r & !mask, c & !mask);
                let mut acc = Complex::zero();
                for &a in &subs {
                    acc += self.data[(rb | a) * dim + (cb | a)];
                }
                out[r * dim + c] = acc * norm;
            }
        }
        Ok(DenseOperator { n: self.n, data: out, hermitian: self.hermitian })
    }

    /// Partial trace over `qubits`, returning an operator on the remaining
    /// qubits in their original order.
    pub fn partial_trace(&self, qubits: &[usize]) -> Result<Self> {
        for &j in qubits {
            self.check_qubit(j)?;
        }
        let keep: Vec<usize> = (0..self.n).filter(|j| !qubits.contains(j)).collect();
        let traced: Vec<usize> = (0..self.n).filter(|j| qubits.contains(j)).collect();
        let m = keep.len();
        let dim = self.dim();
        let sub = 1usize << m;
        let place = |bits: usize, positions: &[usize]| -> usize {
            positions.iter().enumerate().fold(0usize, |acc, (i, &q)| {
                let b = (bits >> (positions.len() - 1 - i)) & 1;
                acc | b << (self.n - 1 - q)
            })
        };
        let mut out = vec![Complex::zero(); sub * sub];
        for a in 0..(1usize << traced.len()) {
            let t = place(a, &traced);
            for r in 0..sub {
                let rr = place(r, &keep) | t;
                for c in 0..sub {
                    let cc = place(c, &keep) | t;
                    out[r * sub + c] += self.data[rr * dim + cc];
                }
            }
        }
        DenseOperator::from_entries(m, out)
    }
}

impl<'a, T: Real> Add for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn add(self, rhs: Self) -> DenseOperator<T> {
        assert_eq!(self.n, rhs.n, "operator sizes differ");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        DenseOperator { n: self.n, data, hermitian: false }.refresh_flag()
    }
}

impl<'a, T: Real> Sub for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn sub(self, rhs: Self) -> DenseOperator<T> {
        assert_eq!(self.n, rhs.n, "operator sizes differ");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        DenseOperator { n: self.n, data, hermitian: false }.refresh_flag()
    }
}

impl<'a, T: Real> Neg for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn neg(self) -> DenseOperator<T> {
        self.scale_real(-T::one())
    }
}

impl<'a, T: Real> Mul for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn mul(self, rhs: Self) -> DenseOperator<T> {
        self.matmul(rhs).expect("operator sizes differ")
    }
}
