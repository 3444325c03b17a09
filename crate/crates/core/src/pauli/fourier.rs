//! Pauli-basis Fourier transform.
//!
//! The fast path reorders the matrix so that each qubit owns one base-4
//! digit `2 r_j + c_j` of a combined index, then applies a 4-point basis
//! change per digit. Cost is `O(n 4^n)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::pauli::{DenseOperator, Pauli, PauliString, Spectrum};
use crate::scalar::Real;

/// Spreads the low `n` bits of `x` onto the even bit positions.
#[inline]
fn spread(mut x: usize, n: usize) -> usize {
    let mut out = 0usize;
    for b in 0..n {
        out |= (x & 1) << (2 * b);
        x >>= 1;
    }
    out
}

fn to_combined<T: Real>(f: &DenseOperator<T>) -> Vec<Complex<T>> {
    let n = f.n();
    let dim = f.dim();
    let spreads: Vec<usize> = (0..dim).map(|x| spread(x, n)).collect();
    let mut out = vec![Complex::zero(); dim * dim];
    let data = f.entries();
    for r in 0..dim {
        let sr = spreads[r] << 1;
        for c in 0..dim {
            out[sr | spreads[c]] = data[r * dim + c];
        }
    }
    out
}

fn from_combined<T: Real>(n: usize, buf: &[Complex<T>]) -> DenseOperator<T> {
    let dim = 1usize << n;
    let spreads: Vec<usize> = (0..dim).map(|x| spread(x, n)).collect();
    let mut out = vec![Complex::zero(); dim * dim];
    for r in 0..dim {
        let sr = spreads[r] << 1;
        for c in 0..dim {
            out[r * dim + c] = buf[sr | spreads[c]];
        }
    }
    DenseOperator::from_entries(n, out).expect("4^n entries")
}

/// Applies `step` to every 4-tuple along each base-4 digit.
fn per_digit<T: Real>(buf: &mut [Complex<T>], n: usize, step: impl Fn([Complex<T>; 4]) -> [Complex<T>; 4]) {
    let len = buf.len();
    for digit in 0..n {
        let stride = 1usize << (2 * digit);
        let block = stride * 4;
        for base in (0..len).step_by(block) {
            for off in 0..stride {
                let i = base + off;
                let v = [buf[i], buf[i + stride], buf[i + 2 * stride], buf[i + 3 * stride]];
                let w = step(v);
                buf[i] = w[0];
                buf[i + stride] = w[1];
                buf[i + 2 * stride] = w[2];
                buf[i + 3 * stride] = w[3];
            }
        }
    }
}

/// All `4^n` coefficients `2^{-n} tr(σ^s f)`, indexed by [`PauliString::index`].
pub fn fourier_coefficients<T: Real>(f: &DenseOperator<T>) -> Vec<Complex<T>> {
    let mut buf = to_combined(f);
    let half = T::lit(0.5);
    let i = Complex::new(T::zero(), T::one());
    per_digit(&mut buf, f.n(), |[v0, v1, v2, v3]| {
        [(v0 + v3) * half, (v1 + v2) * half, i * (v1 - v2) * half, (v0 - v3) * half]
    });
    buf
}

/// Dense operator `Σ_s c_s σ^s` from a full coefficient vector.
pub fn inverse_coefficients<T: Real>(n: usize, coeffs: &[Complex<T>]) -> DenseOperator<T> {
    assert_eq!(coeffs.len(), 1usize << (2 * n), "coefficient vector must have 4^n entries");
    let mut buf = coeffs.to_vec();
    let i = Complex::new(T::zero(), T::one());
    per_digit(&mut buf, n, |[w0, w1, w2, w3]| [w0 + w3, w1 - i * w2, w1 + i * w2, w0 - w3]);
    from_combined(n, &buf)
}

/// Fast transform to a sparse spectrum with the default sparsity threshold.
pub fn fourier_transform<T: Real>(f: &DenseOperator<T>) -> Spectrum<T> {
    Spectrum::from_coefficients(f.n(), &fourier_coefficients(f), f.is_hermitian())
}

pub fn inverse_fourier<T: Real>(spec: &Spectrum<T>) -> DenseOperator<T> {
    let op = inverse_coefficients(spec.n(), &spec.to_dense());
    if spec.is_hermitian() {
        op.symmetrized()
    } else {
        op
    }
}

/// Single coefficient by a direct trace, `O(2^n)`. Kept independent of the
/// fast path so either can check the other.
pub fn direct_coefficient<T: Real>(f: &DenseOperator<T>, s: &PauliString) -> Complex<T> {
    let n = f.n();
    assert_eq!(s.len(), n);
    let mask = s.flip_mask();
    let mut acc = Complex::zero();
    for r in 0..f.dim() {
        let mut phase = Complex::new(T::one(), T::zero());
        for (j, p) in s.symbols().iter().enumerate() {
            let bit = (r >> (n - 1 - j)) & 1;
            phase = match (p, bit) {
                (Pauli::Y, 0) => phase * Complex::new(T::zero(), -T::one()),
                (Pauli::Y, _) => phase * Complex::new(T::zero(), T::one()),
                (Pauli::Z, 1) => -phase,
                _ => phase,
            };
        }
        // σ^s[r, r ^ mask] f[r ^ mask, r]
        acc += phase * f.get(r ^ mask, r);
    }
    acc / T::from_usize_lossy(f.dim())
}
