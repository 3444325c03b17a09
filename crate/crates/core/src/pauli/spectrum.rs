use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::pauli::{inverse_fourier, DenseOperator, PauliString};
use crate::scalar::Real;

/// Sparse Pauli expansion `Σ_s c_s σ^s`.
///
/// Coefficients at or below [`Spectrum::sparsity_threshold`] are never
/// stored. When `hermitian` is set every stored coefficient is real.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    n: usize,
    hermitian: bool,
    coeffs: BTreeMap<PauliString, Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    /// `1e-12` in double precision.
    pub fn sparsity_threshold() -> T {
        T::tol_floor(1e-12, 16.0)
    }

    pub fn new(n: usize, hermitian: bool) -> Self {
        Spectrum { n, hermitian, coeffs: BTreeMap::new() }
    }

    /// From a full `4^n` coefficient vector indexed by [`PauliString::index`].
    pub fn from_coefficients(n: usize, coeffs: &[Complex<T>], hermitian: bool) -> Self {
        let mut spec = Self::new(n, hermitian);
        for (idx, &c) in coeffs.iter().enumerate() {
            spec.insert(PauliString::from_index(n, idx), c);
        }
        spec
    }

    pub fn from_real_terms(n: usize, terms: &[(PauliString, T)]) -> Result<Self> {
        let mut spec = Self::new(n, true);
        for (s, c) in terms {
            spec.check_key(s)?;
            spec.insert(s.clone(), Complex::new(*c, T::zero()));
        }
        Ok(spec)
    }

    fn check_key(&self, s: &PauliString) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: s.len() });
        }
        Ok(())
    }

    /// Sets a coefficient, dropping it if it falls under the threshold.
    /// In a Hermitian spectrum the imaginary part is discarded.
    pub fn insert(&mut self, s: PauliString, mut c: Complex<T>) {
        debug_assert_eq!(s.len(), self.n);
        if self.hermitian {
            c.im = T::zero();
        }
        if c.norm() > Self::sparsity_threshold() {
            self.coeffs.insert(s, c);
        } else {
            self.coeffs.remove(&s);
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, s: &PauliString) -> Complex<T> {
        self.coeffs.get(s).copied().unwrap_or_else(Complex::zero)
    }

    /// Real part of the coefficient (the coefficient itself when Hermitian).
    pub fn get_real(&self, s: &PauliString) -> T {
        self.get(s).re
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex<T>)> {
        self.coeffs.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &PauliString> {
        self.coeffs.keys()
    }

    /// Full `4^n` coefficient vector.
    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); 1usize << (2 * self.n)];
        for (s, &c) in &self.coeffs {
            out[s.index()] = c;
        }
        out
    }

    pub fn to_operator(&self) -> DenseOperator<T> {
        inverse_fourier(self)
    }

    /// Applies `g(s, c)` to every stored coefficient.
    pub fn map(&self, g: impl Fn(&PauliString, Complex<T>) -> Complex<T>) -> Self {
        let mut out = Self::new(self.n, self.hermitian);
        for (s, &c) in &self.coeffs {
            out.insert(s.clone(), g(s, c));
        }
        out
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(&PauliString) -> bool) -> Self {
        Spectrum {
            n: self.n,
            hermitian: self.hermitian,
            coeffs: self.coeffs.iter().filter(|(s, _)| keep(s)).map(|(s, c)| (s.clone(), *c)).collect(),
        }
    }

    /// `Σ_s |c_s|^2`, the squared normalized 2-norm.
    pub fn total_weight(&self) -> T {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_s |c_s|^4`.
    pub fn fourth_power_sum(&self) -> T {
        self.coeffs.values().map(|c| c.norm_sqr() * c.norm_sqr()).sum()
    }

    /// Largest weight over retained terms; 0 for the empty spectrum.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(PauliString::weight).max().unwrap_or(0)
    }

    /// Union of the supports of all retained terms.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs.keys().flat_map(|s| s.support()).collect()
    }

    /// `w[k] = Σ_{|s|=k} |c_s|^2` for `k = 0..=degree`.
    pub fn weight_per_level(&self) -> Vec<T> {
        let mut w = vec![T::zero(); self.degree() + 1];
        for (s, c) in &self.coeffs {
            w[s.weight()] += c.norm_sqr();
        }
        w
    }

    /// `f^{=k}`.
    pub fn level_projection(&self, k: usize) -> Self {
        self.filter(|s| s.weight() == k)
    }

    /// Weight strictly above level one.
    pub fn high_level_weight(&self) -> T {
        self.coeffs.iter().filter(|(s, _)| s.weight() > 1).map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Coefficient of the identity string.
    pub fn identity_coefficient(&self) -> Complex<T> {
        self.get(&PauliString::identity(self.n))
    }

    /// Terms sorted by decreasing modulus.
    pub fn sorted_by_magnitude(&self) -> Vec<(PauliString, Complex<T>)> {
        let mut v: Vec<_> = self.coeffs.iter().map(|(s, c)| (s.clone(), *c)).collect();
        v.sort_by(|a, b| b.1.norm().partial_cmp(&a.1.norm()).unwrap().then_with(|| a.0.cmp(&b.0)));
        v
    }

    /// Largest coefficient deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let keys: BTreeSet<&PauliString> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        Ok(keys.into_iter().map(|s| (self.get(s) - other.get(s)).norm()).fold(T::zero(), T::max))
    }
}

/// Writes `re`, `re+imi` or `re-imi`.
pub(crate) fn format_complex<T: Real>(c: Complex<T>, real_only: bool) -> String {
    if real_only || c.im == T::zero() {
        format!("{}", c.re)
    } else if c.im < T::zero() {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Parses a real or `re±imi` literal. A lone `imi` term is also accepted.
pub(crate) fn parse_complex<T: Real>(text: &str) -> std::result::Result<Complex<T>, String> {
    let t = text.trim();
    let num = |s: &str| s.parse::<T>().map_err(|_| format!("bad number '{s}'"));
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(num(t)?, T::zero()));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let im_text = &body[k..];
            let im = if im_text == "+" || im_text == "-" {
                num(&format!("{im_text}1"))?
            } else {
                num(im_text.trim_start_matches('+'))?
            };
            Ok(Complex::new(num(&body[..k])?, im))
        }
        None => {
            let im = match body {
                "" | "+" => T::one(),
                "-" => -T::one(),
                b => num(b)?,
            };
            Ok(Complex::new(T::zero(), im))
        }
    }
}

impl<T: Real> fmt::Display for Spectrum<T> {
    /// Text format: `n=<k>` then one `WORD coefficient` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (s, &c) in &self.coeffs {
            writeln!(f, "{s}  {}", format_complex(c, self.hermitian))?;
        }
        Ok(())
    }
}

impl<T: Real> FromStr for Spectrum<T> {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms: Vec<(PauliString, Complex<T>, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let parse_err = |message: String| Error::Parse { line: lineno, message };
            if let Some(rest) = line.strip_prefix("n=") {
                if n.is_some() {
                    return Err(parse_err("duplicate header".into()));
                }
                n = Some(rest.trim().parse().map_err(|_| parse_err(format!("bad qubit count '{rest}'")))?);
                continue;
            }
            let mut parts = line.split_whitespace();
            let word = parts.next().unwrap();
            let coeff = parts.next().ok_or_else(|| parse_err("missing coefficient".into()))?;
            if parts.next().is_some() {
                return Err(parse_err("trailing tokens".into()));
            }
            let s: PauliString = word.parse().map_err(|e: Error| parse_err(e.to_string()))?;
            let c = parse_complex::<T>(coeff).map_err(parse_err)?;
            terms.push((s, c, lineno));
        }
        let n = n.ok_or(Error::Parse { line: 0, message: "missing n=<qubits> header".into() })?;
        let hermitian = terms.iter().all(|(_, c, _)| c.im == T::zero());
        let mut spec = Spectrum::new(n, hermitian);
        for (s, c, line) in terms {
            if s.len() != n {
                return Err(Error::Parse { line, message: format!("word {s} has length {} but n={n}", s.len()) });
            }
            if spec.coeffs.contains_key(&s) {
                return Err(Error::Parse { line, message: format!("duplicate term {s}") });
            }
            spec.insert(s, c);
        }
        Ok(spec)
    }
}
