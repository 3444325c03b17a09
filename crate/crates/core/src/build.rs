//! Constructors for quantum boolean functions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pauli::{is_quantum_boolean, DenseOperator, Pauli};
use crate::scalar::Real;

/// Classical `f: {0,1}^n -> {0,1}`; `values[x]` with `x` read big-endian,
/// so the first input bit is qubit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(values: Vec<bool>) -> Result<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::MalformedOperator(format!("truth table of length {len} is not a power of two")));
        }
        Ok(TruthTable { n: len.trailing_zeros() as usize, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        TruthTable { n, values: (0..1usize << n).map(f).collect() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        self.values[x]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Majority of an odd number of bits.
    pub fn majority(n: usize) -> Self {
        Self::from_fn(n, |x| 2 * (x.count_ones() as usize) > n)
    }

    /// Parity of all bits.
    pub fn parity(n: usize) -> Self {
        Self::from_fn(n, |x| x.count_ones() % 2 == 1)
    }

    /// The bit at qubit `j`.
    pub fn dictator(n: usize, j: usize) -> Self {
        Self::from_fn(n, move |x| (x >> (n - 1 - j)) & 1 == 1)
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    /// A `0`/`1` bitstring; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MalformedOperator(format!("bad truth-table symbol '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        TruthTable::new(values)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(if v { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `|x⟩ ↦ (-1)^{f(x)} |x⟩`.
pub fn phase_oracle<T: Real>(t: &TruthTable) -> DenseOperator<T> {
    let diag: Vec<T> = t.values.iter().map(|&v| if v { -T::one() } else { T::one() }).collect();
    DenseOperator::from_real_diagonal(t.n, &diag).expect("table length is 2^n")
}

/// `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` on `n + 1` qubits; the target is the last qubit.
pub fn bit_oracle<T: Real>(t: &TruthTable) -> DenseOperator<T> {
    let n = t.n + 1;
    let dim = 1usize << n;
    let mut data = vec![Complex::zero(); dim * dim];
    for x in 0..(1usize << t.n) {
        let fx = usize::from(t.get(x));
        for y in 0..2 {
            data[(2 * x + (y ^ fx)) * dim + 2 * x + y] = Complex::one();
        }
    }
    DenseOperator::from_entries(n, data).expect("4^n entries")
}

/// Compresses an oracle on `n + 1` qubits onto the `|−⟩` state of its last
/// qubit: returns `(I ⊗ ⟨−|) U (I ⊗ |−⟩)`. For a bit oracle this is the
/// phase oracle.
pub fn compress_on_minus<T: Real>(u: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    if u.n() == 0 {
        return Err(Error::MalformedOperator("need at least one qubit".into()));
    }
    let n = u.n() - 1;
    let dim = 1usize << n;
    let minus = [T::one(), -T::one()];
    let half = T::lit(0.5);
    let mut data = vec![Complex::zero(); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let mut acc = Complex::zero();
            for (y, &my) in minus.iter().enumerate() {
                for (yp, &myp) in minus.iter().enumerate() {
                    acc += u.get(2 * r + y, 2 * c + yp) * (my * myp);
                }
            }
            data[r * dim + c] = acc * half;
        }
    }
    DenseOperator::from_entries(n, data)
}

/// `I - 2P` for a Hermitian projector `P`.
pub fn projector_qbf<T: Real>(p: &DenseOperator<T>, tol: T) -> Result<DenseOperator<T>> {
    p.require_hermitian()?;
    let residual = &p.matmul(p)? - p;
    if !residual.operator_norm_at_most(tol) {
        return Err(Error::NotProjector { deviation: residual.operator_norm().as_f64() });
    }
    Ok(&DenseOperator::identity(p.n()) - &p.scale_real(T::lit(2.0)))
}

/// `Σ α_j f_j` for a pairwise anticommuting family of quantum boolean
/// functions with `Σ α_j² = 1`.
pub fn anticommuting_combination<T: Real>(
    alphas: &[T],
    fs: &[DenseOperator<T>],
    tol: T,
) -> Result<DenseOperator<T>> {
    if alphas.len() != fs.len() || fs.is_empty() {
        return Err(Error::Precondition(format!(
            "{} coefficients for {} operators",
            alphas.len(),
            fs.len()
        )));
    }
    let sum_squares: T = alphas.iter().map(|&a| a * a).sum();
    if (sum_squares - T::one()).abs() > tol {
        return Err(Error::NotNormalized { sum_squares: sum_squares.as_f64() });
    }
    let n = fs[0].n();
    for (i, f) in fs.iter().enumerate() {
        if f.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: f.n() });
        }
        if !is_quantum_boolean(f, tol) {
            return Err(Error::FamilyMemberNotBoolean { index: i });
        }
    }
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            let anti = fs[i].anticommutator(&fs[j])?;
            if !anti.operator_norm_at_most(tol) {
                return Err(Error::NotAnticommuting { first: i, second: j, norm: anti.operator_norm().as_f64() });
            }
        }
    }
    let mut acc = DenseOperator::zeros(n);
    for (a, f) in alphas.iter().zip(fs) {
        acc = &acc + &f.scale_real(*a);
    }
    if !is_quantum_boolean(&acc, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    Ok(acc)
}

/// Eigenvalues at or below this are mapped to `-1` by [`sign_function`].
pub fn sign_band<T: Real>() -> T {
    T::tol_floor(1e-12, 16.0)
}

/// `sgn(h)` with `sgn(x) = 1` for `x > 0` and `-1` otherwise.
pub fn sign_function<T: Real>(h: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    let band = sign_band::<T>();
    h.map_eigenvalues(|l| if l > band { T::one() } else { -T::one() })
}

/// Spin flip on qubit `j`: the linear map fixing `I` and negating
/// `σ^1, σ^2, σ^3`, i.e. `tr_j(M) ⊗ I_j - M`. On Hermitian `M` it agrees
/// with `σ² M* σ²`.
pub fn spin_flip<T: Real>(m: &DenseOperator<T>, j: usize) -> Result<DenseOperator<T>> {
    m.check_qubit(j)?;
    let avg = m.average_out(&[j])?;
    Ok(&avg.scale_real(T::lit(2.0)) - m)
}

/// `(σ²)^{⊗n} M* (σ²)^{⊗n}`.
pub fn spin_flip_all<T: Real>(m: &DenseOperator<T>) -> DenseOperator<T> {
    let y = Pauli::Y.matrix::<T>();
    let mut out = m.conj();
    for j in 0..m.n() {
        out = out.apply_left_single(j, &y).apply_right_single(j, &y);
    }
    out
}

/// `|0⟩⟨0| ⊗ f - |1⟩⟨1| ⊗ S^{⊗n}(f)` with the ancilla as the new qubit 0.
pub fn balance<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<DenseOperator<T>> {
    if !is_quantum_boolean(f, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    let flipped = spin_flip_all(f);
    let d = f.dim();
    let big = 2 * d;
    let mut data = vec![Complex::zero(); big * big];
    for r in 0..d {
        for c in 0..d {
            data[r * big + c] = f.get(r, c);
            data[(d + r) * big + d + c] = -flipped.get(r, c);
        }
    }
    DenseOperator::from_entries(f.n() + 1, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{fourier_transform, pauli_matrix, PauliString};

    fn pm(s: &str) -> DenseOperator<f64> {
        pauli_matrix(&s.parse::<PauliString>().unwrap())
    }

    #[test]
    fn phase_oracle_examples() {
        let t: TruthTable = "01".parse().unwrap();
        assert_eq!(phase_oracle::<f64>(&t).max_abs_diff(&pm("Z")).unwrap(), 0.0);
        let t: TruthTable = "0000".parse().unwrap();
        assert_eq!(phase_oracle::<f64>(&t).max_abs_diff(&DenseOperator::identity(2)).unwrap(), 0.0);
        let t: TruthTable = "0110".parse().unwrap();
        assert_eq!(phase_oracle::<f64>(&t).max_abs_diff(&pm("ZZ")).unwrap(), 0.0);
    }

    #[test]
    fn majority_spectrum() {
        let spec = fourier_transform(&phase_oracle::<f64>(&TruthTable::majority(3)));
        assert_eq!(spec.len(), 4);
        for s in ["ZII", "IZI", "IIZ"] {
            assert!((spec.get_real(&s.parse().unwrap()) - 0.5).abs() < 1e-15);
        }
        assert!((spec.get_real(&"ZZZ".parse().unwrap()) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn bit_oracle_is_cnot_and_involution() {
        let t: TruthTable = "01".parse().unwrap();
        let u = bit_oracle::<f64>(&t);
        // CNOT = |0⟩⟨0|⊗I + |1⟩⟨1|⊗X
        let zero = DenseOperator::from_real_diagonal(1, &[1.0, 0.0]).unwrap();
        let one = DenseOperator::from_real_diagonal(1, &[0.0, 1.0]).unwrap();
        let want = &zero.kron(&DenseOperator::identity(1)) + &one.kron(&pm("X"));
        assert!(u.max_abs_diff(&want).unwrap() == 0.0);
        let t = TruthTable::from_fn(3, |x| x % 3 == 1);
        let u = bit_oracle::<f64>(&t);
        assert!(u.matmul(&u).unwrap().max_abs_diff(&DenseOperator::identity(4)).unwrap() == 0.0);
        assert!(is_quantum_boolean(&u, 1e-9));
        let zero_table = TruthTable::from_fn(2, |_| false);
        assert_eq!(bit_oracle::<f64>(&zero_table).max_abs_diff(&DenseOperator::identity(3)).unwrap(), 0.0);
    }

    #[test]
    fn bit_oracle_compresses_to_phase_oracle() {
        let t = TruthTable::from_fn(3, |x| (x * 5) % 7 > 3);
        let compressed = compress_on_minus(&bit_oracle::<f64>(&t)).unwrap();
        assert!(compressed.max_abs_diff(&phase_oracle(&t)).unwrap() < 1e-15);
    }

    #[test]
    fn projector_examples() {
        let zero = DenseOperator::<f64>::zeros(1);
        assert_eq!(projector_qbf(&zero, 1e-9).unwrap().max_abs_diff(&DenseOperator::identity(1)).unwrap(), 0.0);
        let p = DenseOperator::from_real_diagonal(1, &[1.0, 0.0]).unwrap();
        // I - 2|0⟩⟨0| = diag(-1, 1)
        assert!(projector_qbf(&p, 1e-9).unwrap().max_abs_diff(&pm("Z").scale_real(-1.0)).unwrap() < 1e-15);
        // uniform superposition on two qubits
        let psi = DenseOperator::from_entries(2, vec![Complex::new(0.25f64, 0.0); 16]).unwrap();
        let f = projector_qbf(&psi, 1e-9).unwrap();
        let eig = f.eigenvalues().unwrap();
        assert!((eig[0] + 1.0).abs() < 1e-12 && eig[1..].iter().all(|l| (l - 1.0).abs() < 1e-12));
        let bad = DenseOperator::from_real_diagonal(1, &[0.5, 0.0]).unwrap();
        assert!(matches!(projector_qbf(&bad, 1e-9), Err(Error::NotProjector { .. })));
    }

    #[test]
    fn anticommuting_examples() {
        let f = anticommuting_combination(&[0.6, 0.8], &[pm("XX"), pm("YI")], 1e-9).unwrap();
        let want = &pm("XX").scale_real(0.6) + &pm("YI").scale_real(0.8);
        assert!(f.max_abs_diff(&want).unwrap() < 1e-15);
        let z = anticommuting_combination(&[1.0], &[pm("Z")], 1e-9).unwrap();
        assert_eq!(z.max_abs_diff(&pm("Z")).unwrap(), 0.0);
        let r = 0.5f64.sqrt();
        assert!(matches!(
            anticommuting_combination(&[r, r], &[pm("X"), pm("X")], 1e-9),
            Err(Error::NotAnticommuting { first: 0, second: 1, .. })
        ));
        assert!(matches!(
            anticommuting_combination(&[0.6, 0.6], &[pm("X"), pm("Z")], 1e-9),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn sign_examples() {
        let h = DenseOperator::from_real_diagonal(1, &[2.0, -3.0]).unwrap();
        assert!(sign_function(&h).unwrap().max_abs_diff(&pm("Z")).unwrap() < 1e-15);
        let zero = DenseOperator::<f64>::zeros(2);
        let neg = DenseOperator::<f64>::identity(2).scale_real(-1.0);
        assert!(sign_function(&zero).unwrap().max_abs_diff(&neg).unwrap() < 1e-15);
        let x = pm("X").scale_real(0.3);
        assert!(sign_function(&x).unwrap().max_abs_diff(&pm("X")).unwrap() < 1e-12);
        let skew = DenseOperator::<f64>::from_entries(1, vec![Complex::zero(), Complex::one(), -Complex::one(), Complex::zero()]).unwrap();
        assert!(sign_function(&skew).is_err());
    }

    #[test]
    fn spin_flip_examples() {
        assert!((&spin_flip(&pm("Z"), 0).unwrap() + &pm("Z")).frobenius_norm() < 1e-15);
        assert!(spin_flip(&pm("I"), 0).unwrap().max_abs_diff(&pm("I")).unwrap() < 1e-15);
        let m = DenseOperator::from_entries(
            1,
            vec![Complex::new(0.3, 0.0), Complex::new(1.0, -2.0), Complex::new(0.5, 0.1), Complex::new(-1.0, 0.0)],
        )
        .unwrap();
        let twice = spin_flip(&spin_flip(&m, 0).unwrap(), 0).unwrap();
        assert!(twice.max_abs_diff(&m).unwrap() < 1e-15);
        assert!(spin_flip(&m, 1).is_err());
        // agrees with σ² M* σ² on Hermitian input
        let h = &pm("X").scale_real(0.2) + &pm("Y").scale_real(-0.7);
        let h = &h + &pm("Z").scale_real(0.1);
        assert!(spin_flip(&h, 0).unwrap().max_abs_diff(&spin_flip_all(&h)).unwrap() < 1e-15);
    }

    #[test]
    fn balance_examples() {
        let g = balance(&DenseOperator::<f64>::identity(1), 1e-9).unwrap();
        assert!(g.trace().norm() < 1e-15);
        assert!(is_quantum_boolean(&g, 1e-9));
        let spec = fourier_transform(&g);
        // ⟨σ³_A ⊗ I, g⟩ equals the trace term of f
        assert!((spec.get_real(&"ZI".parse().unwrap()) - 1.0).abs() < 1e-15);

        let g = balance(&pm("Z"), 1e-9).unwrap();
        let w = fourier_transform(&g).weight_per_level();
        assert!(w[0].abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        assert!(matches!(balance(&pm("Z").scale_real(0.5), 1e-9), Err(Error::NotQuantumBoolean)));
    }
}
