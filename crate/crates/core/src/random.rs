//! Seeded random instances: Hermitian and unitary matrices, quantum boolean
//! functions, stabilizers and anticommuting families.

use num_complex::Complex;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::build::anticommuting_combination;
use crate::error::Result;
use crate::pauli::{pauli_matrix, DenseOperator, Pauli, PauliString, Spectrum};
use crate::scalar::Real;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    Complex::new(gaussian::<T, R>(rng) * h, gaussian::<T, R>(rng) * h)
}

/// Gaussian Hermitian matrix scaled so that `E ‖f‖₂² = 1`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseOperator<T> {
    let dim = 1usize << n;
    let scale = T::one() / T::from_usize_lossy(dim).sqrt();
    let mut data = vec![Complex::zero(); dim * dim];
    for r in 0..dim {
        data[r * dim + r] = Complex::new(gaussian::<T, R>(rng) * scale, T::zero());
        for c in (r + 1)..dim {
            let z = complex_gaussian::<T, R>(rng) * scale;
            data[r * dim + c] = z;
            data[c * dim + r] = z.conj();
        }
    }
    DenseOperator::from_entries(n, data).expect("4^n entries")
}

/// Random Hermitian with the identity component removed.
pub fn random_traceless_hermitian<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseOperator<T> {
    let f = random_hermitian::<T, R>(n, rng);
    let shift = f.normalized_trace().re;
    (&f - &DenseOperator::identity(n).scale_real(shift)).symmetrized()
}

/// Random Hermitian operator of exact degree `d`: independent Gaussian real
/// coefficients on every string of weight at most `d`.
pub fn random_degree_hermitian<T: Real, R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> DenseOperator<T> {
    assert!(d <= n);
    let mut spec = Spectrum::new(n, true);
    for idx in 0..(1usize << (2 * n)) {
        let s = PauliString::from_index(n, idx);
        if s.weight() <= d {
            spec.insert(s, Complex::new(gaussian::<T, R>(rng), T::zero()));
        }
    }
    spec.to_operator()
}

/// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseOperator<T> {
    let dim = 1usize << n;
    // columns stored contiguously
    let mut cols: Vec<Vec<Complex<T>>> = (0..dim).map(|_| (0..dim).map(|_| complex_gaussian(rng)).collect()).collect();
    for k in 0..dim {
        for _pass in 0..2 {
            for j in 0..k {
                let proj: Complex<T> = (0..dim).map(|r| cols[j][r].conj() * cols[k][r]).sum();
                for r in 0..dim {
                    let v = cols[j][r];
                    cols[k][r] -= proj * v;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for z in cols[k].iter_mut() {
            *z = *z / norm;
        }
    }
    let mut data = vec![Complex::zero(); dim * dim];
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            data[r * dim + c] = *z;
        }
    }
    DenseOperator::from_entries(n, data).expect("4^n entries")
}

/// `U diag(±1) U†` with Haar `U`; `traceless` forces equal multiplicities.
pub fn random_quantum_boolean<T: Real, R: Rng + ?Sized>(n: usize, traceless: bool, rng: &mut R) -> DenseOperator<T> {
    let dim = 1usize << n;
    let mut signs: Vec<T> = if traceless {
        (0..dim).map(|i| if i < dim / 2 { T::one() } else { -T::one() }).collect()
    } else {
        (0..dim).map(|_| if rng.random::<bool>() { T::one() } else { -T::one() }).collect()
    };
    if traceless && dim == 1 {
        signs[0] = T::one();
    }
    let u = random_unitary::<T, R>(n, rng);
    let d = DenseOperator::from_real_diagonal(n, &signs).unwrap();
    u.matmul(&d).unwrap().matmul(&u.adjoint()).unwrap().symmetrized()
}

pub fn random_pauli_string<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliString {
    PauliString::new((0..n).map(|_| Pauli::ALL[rng.random_range(0..4)]).collect())
}

/// `±σ^s` for a uniformly random string.
pub fn random_stabilizer<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> (PauliString, DenseOperator<T>) {
    let s = random_pauli_string(n, rng);
    let sign = if rng.random::<bool>() { T::one() } else { -T::one() };
    let m = pauli_matrix::<T>(&s).scale_real(sign);
    (s, m)
}

/// `a·σ` for a uniformly random unit vector `a`.
pub fn random_single_qubit_boolean<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DenseOperator<T> {
    let v: [T; 3] = [gaussian(rng), gaussian(rng), gaussian(rng)];
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let mut acc = DenseOperator::zeros(1);
    for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        acc = &acc + &pauli_matrix::<T>(&PauliString::new(vec![p])).scale_real(v[k] / norm);
    }
    acc.symmetrized()
}

/// `U_1 ⊗ ... ⊗ U_n` of random single-qubit booleans.
pub fn random_local_boolean<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseOperator<T> {
    let mut acc = DenseOperator::identity(0);
    for _ in 0..n {
        acc = acc.kron(&random_single_qubit_boolean::<T, R>(rng));
    }
    acc
}

/// The `2n + 1` Jordan-Wigner strings `Z..Z X I..I`, `Z..Z Y I..I` and
/// `Z..Z`, which pairwise anticommute.
pub fn majorana_strings(n: usize) -> Vec<PauliString> {
    let mut out = Vec::with_capacity(2 * n + 1);
    for k in 0..n {
        for p in [Pauli::X, Pauli::Y] {
            let word = (0..n)
                .map(|j| match j.cmp(&k) {
                    std::cmp::Ordering::Less => Pauli::Z,
                    std::cmp::Ordering::Equal => p,
                    std::cmp::Ordering::Greater => Pauli::I,
                })
                .collect();
            out.push(PauliString::new(word));
        }
    }
    out.push(PauliString::new(vec![Pauli::Z; n]));
    out
}

/// Majorana strings scrambled by a random qubit permutation and a random
/// relabelling of `{X, Y, Z}` on each qubit. Both maps preserve
/// anticommutation.
pub fn random_anticommuting_strings<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<PauliString> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let relabel: Vec<[Pauli; 3]> = (0..n)
        .map(|_| {
            let mut l = [Pauli::X, Pauli::Y, Pauli::Z];
            l.shuffle(rng);
            l
        })
        .collect();
    let mut strings = majorana_strings(n);
    for s in strings.iter_mut() {
        let word = (0..n)
            .map(|j| {
                let p = s.get(order[j]);
                if p.is_identity() {
                    p
                } else {
                    relabel[j][p.label() as usize - 1]
                }
            })
            .collect();
        *s = PauliString::new(word);
    }
    strings.shuffle(rng);
    strings
}

/// Random unit vector of length `m` with Gaussian direction.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<T> {
    let v: Vec<T> = (0..m).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// A random anticommuting quantum boolean function on `n` qubits with `m`
/// terms (`1 ≤ m ≤ 2n + 1`), built through
/// [`anticommuting_combination`]. Returns the strings used and the operator.
pub fn random_anticommuting_boolean<T: Real, R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<(Vec<PauliString>, DenseOperator<T>)> {
    let mut strings = random_anticommuting_strings(n, rng);
    strings.truncate(m.clamp(1, 2 * n + 1));
    let alphas = random_unit_vector::<T, R>(strings.len(), rng);
    let fs: Vec<_> = strings.iter().map(pauli_matrix::<T>).collect();
    let f = anticommuting_combination(&alphas, &fs, T::tol_floor(1e-9, 1e3))?;
    Ok((strings, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::is_quantum_boolean;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..4 {
            let u = random_unitary::<f64, _>(n, &mut rng);
            assert!(u.unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn generated_booleans() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..4 {
            let f = random_quantum_boolean::<f64, _>(n, true, &mut rng);
            assert!(is_quantum_boolean(&f, 1e-9));
            assert!(f.trace().norm() < 1e-10);
            assert!(is_quantum_boolean(&random_local_boolean::<f64, _>(n, &mut rng), 1e-9));
        }
    }

    #[test]
    fn majoranas_anticommute() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            for set in [majorana_strings(n), random_anticommuting_strings(n, &mut rng)] {
                assert_eq!(set.len(), 2 * n + 1);
                for i in 0..set.len() {
                    for j in (i + 1)..set.len() {
                        assert!(set[i].anticommutes_with(&set[j]), "{} {}", set[i], set[j]);
                    }
                }
            }
        }
        let (_, f) = random_anticommuting_boolean::<f64, _>(3, 5, &mut rng).unwrap();
        assert!(is_quantum_boolean(&f, 1e-9));
    }
}
