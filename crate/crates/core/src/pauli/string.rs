use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::DenseOperator;
use crate::scalar::Real;

/// Single-qubit Pauli symbol; the discriminant is the `{0,1,2,3}` label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_label(label: u8) -> Option<Pauli> {
        match label {
            0 => Some(Pauli::I),
            1 => Some(Pauli::X),
            2 => Some(Pauli::Y),
            3 => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' | 'i' | '0' => Some(Pauli::I),
            'X' | 'x' | '1' => Some(Pauli::X),
            'Y' | 'y' | '2' => Some(Pauli::Y),
            'Z' | 'z' | '3' => Some(Pauli::Z),
            _ => None,
        }
    }

    #[inline]
    pub fn label(self) -> u8 {
        self as u8
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    /// Row-major 2x2 matrix.
    pub fn matrix<T: Real>(self) -> [Complex<T>; 4] {
        let o = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match self {
            Pauli::I => [one, o, o, one],
            Pauli::X => [o, one, one, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [one, o, o, -one],
        }
    }
}

/// A word over `{I, X, Y, Z}` naming the stabilizer operator
/// `σ^{s_1} ⊗ ... ⊗ σ^{s_n}`.
///
/// Position 0 is the most significant tensor factor. The derived ordering is
/// lexicographic, which coincides with the base-4 [`index`](Self::index).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(word: Vec<Pauli>) -> Self {
        PauliString(word)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    /// `σ^symbol` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, symbol: Pauli) -> Self {
        let mut word = vec![Pauli::I; n];
        word[qubit] = symbol;
        PauliString(word)
    }

    pub fn from_labels(labels: &[u8]) -> Result<Self> {
        labels
            .iter()
            .map(|&l| {
                Pauli::from_label(l).ok_or_else(|| Error::MalformedOperator(format!("bad Pauli label {l}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }

    /// Inverse of [`index`](Self::index).
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut word = vec![Pauli::I; n];
        for slot in word.iter_mut().rev() {
            *slot = Pauli::from_label((index & 3) as u8).unwrap();
            index >>= 2;
        }
        PauliString(word)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, qubit: usize) -> Pauli {
        self.0[qubit]
    }

    pub fn symbols(&self) -> &[Pauli] {
        &self.0
    }

    /// Base-4 integer with qubit 0 as the most significant digit.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0usize, |acc, p| (acc << 2) | p.label() as usize)
    }

    /// `|s|`, the number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|p| !p.is_identity()).count()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_identity())
            .map(|(j, _)| j)
            .collect()
    }

    /// Two stabilizers anticommute iff they differ non-trivially on an odd
    /// number of positions.
    pub fn anticommutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let clashes = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| !a.is_identity() && !b.is_identity() && a != b)
            .count();
        clashes % 2 == 1
    }

    /// Bit mask of positions carrying X or Y (the off-diagonal factors), in the
    /// same bit order as computational-basis indices.
    pub(crate) fn flip_mask(&self) -> usize {
        self.0.iter().fold(0usize, |acc, p| {
            (acc << 1) | usize::from(matches!(p, Pauli::X | Pauli::Y))
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts `IXYZ` letters or `0123` digits, optionally comma separated.
    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .chars()
            .filter(|c| !matches!(c, ',' | '(' | ')' | ' '))
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::MalformedOperator(format!("bad Pauli symbol '{c}'"))))
            .collect::<Result<Vec<_>>>()?;
        if word.is_empty() {
            return Err(Error::MalformedOperator("empty Pauli string".into()));
        }
        Ok(PauliString(word))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Dense `2^n x 2^n` matrix of `σ^s`, built as an explicit Kronecker product.
pub fn pauli_matrix<T: Real>(s: &PauliString) -> DenseOperator<T> {
    let mut acc = DenseOperator::<T>::identity(0);
    for p in s.symbols() {
        let m = DenseOperator::from_entries(1, p.matrix::<T>().to_vec()).expect("2x2 Pauli");
        acc = acc.kron(&m);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_order() {
        let s: PauliString = "XZI".parse().unwrap();
        assert_eq!(s.index(), 1 * 16 + 3 * 4);
        assert_eq!(PauliString::from_index(3, s.index()), s);
        let t: PauliString = "XZX".parse().unwrap();
        assert!(s < t && s.index() < t.index());
    }

    #[test]
    fn weight_support_and_digits() {
        let s: PauliString = "0,2,0,3".parse().unwrap();
        assert_eq!(s.to_string(), "IYIZ");
        assert_eq!(s.weight(), 2);
        assert_eq!(s.support(), vec![1, 3]);
    }

    #[test]
    fn anticommutation_rule() {
        let xi: PauliString = "XI".parse().unwrap();
        let yz: PauliString = "YZ".parse().unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        let xx: PauliString = "XX".parse().unwrap();
        assert!(xi.anticommutes_with(&yz));
        assert!(!zz.anticommutes_with(&xx));
        assert!(!xi.anticommutes_with(&xi));
    }

    #[test]
    fn pauli_matrices() {
        let z = pauli_matrix::<f64>(&"Z".parse().unwrap());
        assert_eq!(z.get(0, 0), Complex::new(1.0, 0.0));
        assert_eq!(z.get(1, 1), Complex::new(-1.0, 0.0));
        assert_eq!(z.get(0, 1), Complex::new(0.0, 0.0));

        let id = pauli_matrix::<f64>(&"II".parse().unwrap());
        assert!(id.max_abs_diff(&DenseOperator::identity(2)).unwrap() == 0.0);

        let xz = pauli_matrix::<f64>(&"XZ".parse().unwrap());
        let zx = pauli_matrix::<f64>(&"ZX".parse().unwrap());
        assert!((xz.inner_product(&xz).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(xz.inner_product(&zx).unwrap().norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!(PauliString::from_labels(&[0, 4]).is_err());
    }
}
