//! Simulated oracle access, Fourier sampling and estimation, and the quantum
//! Goldreich-Levin algorithm.
//!
//! Measurement statistics are drawn from the cached spectrum instead of
//! evolving the `2^{2n}`-dimensional circuit state; the outcome laws are the
//! same.

use num_complex::Complex;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{fourier_coefficients, DenseOperator, Pauli, PauliString, Spectrum};
use crate::scalar::Real;

/// Whether estimates are sampled or read off exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Sampled,
    /// Zero sampling noise: every estimate returns its mean. Query and
    /// estimation counters still advance as in sampled mode.
    Exact,
}

/// Set of strings `{t : t_j = s_j for every fixed j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndicatorString {
    fixed: Vec<Option<Pauli>>,
}

impl IndicatorString {
    pub fn wildcard(n: usize) -> Self {
        IndicatorString { fixed: vec![None; n] }
    }

    /// Fixes qubits `0..prefix.len()`.
    pub fn prefix(n: usize, prefix: &[Pauli]) -> Self {
        assert!(prefix.len() <= n);
        let mut fixed = vec![None; n];
        for (slot, p) in fixed.iter_mut().zip(prefix) {
            *slot = Some(*p);
        }
        IndicatorString { fixed }
    }

    pub fn new(fixed: Vec<Option<Pauli>>) -> Self {
        IndicatorString { fixed }
    }

    pub fn n(&self) -> usize {
        self.fixed.len()
    }

    pub fn contains(&self, t: &PauliString) -> bool {
        self.fixed.iter().zip(t.symbols()).all(|(f, p)| f.is_none_or(|q| q == *p))
    }

    /// Length of the leading run of fixed positions, if nothing is fixed
    /// after it.
    fn prefix_len(&self) -> Option<usize> {
        let k = self.fixed.iter().take_while(|f| f.is_some()).count();
        self.fixed[k..].iter().all(Option::is_none).then_some(k)
    }

    pub fn extend(&self, p: Pauli) -> Self {
        let k = self.fixed.iter().take_while(|f| f.is_some()).count();
        let mut fixed = self.fixed.clone();
        fixed[k] = Some(p);
        IndicatorString { fixed }
    }

    /// Fully fixed strings convert back to a [`PauliString`].
    pub fn to_string_if_complete(&self) -> Option<PauliString> {
        self.fixed.iter().copied().collect::<Option<Vec<_>>>().map(PauliString::new)
    }
}

impl std::fmt::Display for IndicatorString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for p in &self.fixed {
            match p {
                Some(p) => write!(f, "{}", p.as_char())?,
                None => f.write_str("*")?,
            }
        }
        Ok(())
    }
}

/// Hoeffding count for a mean of `±1` outcomes to lie within `radius` of
/// its expectation with probability at least `1 - delta`:
/// `m = ⌈2 ln(2/δ) / r²⌉`.
pub fn hoeffding_samples(radius: f64, delta: f64) -> u64 {
    (2.0 * (2.0 / delta).ln() / (radius * radius)).ceil() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub radius: f64,
    pub confidence: f64,
    pub samples: u64,
    pub queries_used: u64,
}

/// Estimate of `W(S) = Σ_{t ∈ S} |f̂_t|²`.
pub type WeightEstimate = Estimate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Identification {
    Identified(PauliString),
    /// No string won a strict majority.
    Inconclusive,
}

fn check_unit_interval(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter { name, value: x, reason: "must lie in (0, 1)" });
    }
    Ok(())
}

/// A black box for a unitary `f`, answering the query primitives used by
/// the learning algorithms and counting oracle applications.
#[derive(Debug, Clone)]
pub struct OracleHandle<T> {
    operator: DenseOperator<T>,
    spectrum: Spectrum<T>,
    coefficients: Vec<Complex<f64>>,
    /// `cumulative[k] = Σ_{idx < k} |f̂_idx|²`
    cumulative: Vec<f64>,
    bell: WeightedIndex<f64>,
    queries: u64,
    estimations: u64,
    mode: Mode,
    rng: ChaCha8Rng,
}

impl<T: Real> OracleHandle<T> {
    pub fn new(operator: DenseOperator<T>, seed: u64) -> Result<Self> {
        operator.require_unitary(T::tol_floor(1e-9, 1e3))?;
        let raw = fourier_coefficients(&operator);
        let spectrum = Spectrum::from_coefficients(operator.n(), &raw, operator.is_hermitian());
        let coefficients: Vec<Complex<f64>> = raw.iter().map(|c| Complex::new(c.re.as_f64(), c.im.as_f64())).collect();
        let weights: Vec<f64> = coefficients.iter().map(|c| c.norm_sqr()).collect();
        let mut cumulative = Vec::with_capacity(weights.len() + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        let bell = WeightedIndex::new(&weights).map_err(|_| Error::ZeroOperator)?;
        Ok(OracleHandle {
            operator,
            spectrum,
            coefficients,
            cumulative,
            bell,
            queries: 0,
            estimations: 0,
            mode: Mode::Sampled,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.operator.n()
    }

    pub fn operator(&self) -> &DenseOperator<T> {
        &self.operator
    }

    /// Hidden ground truth; not visible to a real learner.
    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    /// Number of coefficient or weight estimations performed.
    pub fn estimation_count(&self) -> u64 {
        self.estimations
    }

    /// Measures `(f ⊗ I)|Φ⟩` in the Bell basis: returns `s` with probability
    /// `|f̂_s|²`. One query.
    pub fn bell_sample(&mut self) -> PauliString {
        self.queries += 1;
        PauliString::from_index(self.n(), self.bell.sample(&mut self.rng))
    }

    /// One Bell sample, exact under the promise that `f` is a stabilizer.
    pub fn identify_stabilizer(&mut self) -> PauliString {
        self.bell_sample()
    }

    /// Majority vote over `⌈ln(1/δ) / (2ε²)⌉` Bell samples.
    pub fn robust_identify(&mut self, epsilon: f64, delta: f64) -> Result<Identification> {
        check_unit_interval("epsilon", epsilon)?;
        check_unit_interval("delta", delta)?;
        let q = ((1.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil().max(1.0) as u64;
        let mut counts = std::collections::HashMap::<usize, u64>::new();
        for _ in 0..q {
            self.queries += 1;
            *counts.entry(self.bell.sample(&mut self.rng)).or_default() += 1;
        }
        let (&best, &votes) = counts.iter().max_by_key(|(&idx, &c)| (c, std::cmp::Reverse(idx))).unwrap();
        Ok(if 2 * votes > q {
            Identification::Identified(PauliString::from_index(self.n(), best))
        } else {
            Identification::Inconclusive
        })
    }

    /// `m` draws of a `±1` variable with mean `mean`; returns the sample mean.
    fn sample_mean(&mut self, mean: f64, m: u64) -> f64 {
        let p = (0.5 + 0.5 * mean).clamp(0.0, 1.0);
        match self.mode {
            Mode::Exact => mean,
            Mode::Sampled => {
                let successes = Binomial::new(m, p).expect("valid binomial").sample(&mut self.rng);
                2.0 * successes as f64 / m as f64 - 1.0
            }
        }
    }

    fn coefficient_estimate(&mut self, s: &PauliString, eta: f64, delta: f64, imaginary: bool) -> Result<Estimate> {
        check_unit_interval("eta", eta)?;
        check_unit_interval("delta", delta)?;
        if s.len() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: s.len() });
        }
        let c = self.coefficients[s.index()];
        let mean = if imaginary { c.im } else { c.re };
        let m = hoeffding_samples(eta, delta);
        self.queries += m;
        self.estimations += 1;
        let value = self.sample_mean(mean, m);
        Ok(Estimate { value, radius: eta, confidence: 1.0 - delta, samples: m, queries_used: m })
    }

    /// Estimates `Re f̂_s` to `±η` with confidence `1 - δ`. Each draw is one
    /// run of the controlled-`f` circuit with `P[0] = 1/2 + 1/2 Re f̂_s`.
    pub fn estimate_coefficient(&mut self, s: &PauliString, eta: f64, delta: f64) -> Result<Estimate> {
        self.coefficient_estimate(s, eta, delta, false)
    }

    /// Estimates `Im f̂_s` using the same circuit with an extra `i` phase on
    /// the control qubit.
    pub fn estimate_coefficient_imag(&mut self, s: &PauliString, eta: f64, delta: f64) -> Result<Estimate> {
        self.coefficient_estimate(s, eta, delta, true)
    }

    /// True `W(S)`.
    pub fn weight(&self, set: &IndicatorString) -> f64 {
        let n = self.n();
        if let Some(k) = set.prefix_len() {
            let prefix = (0..k).fold(0usize, |acc, j| (acc << 2) | set.fixed[j].unwrap().label() as usize);
            let width = 1usize << (2 * (n - k));
            let lo = prefix * width;
            return self.cumulative[lo + width] - self.cumulative[lo];
        }
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(idx, _)| set.contains(&PauliString::from_index(n, *idx)))
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }

    /// Estimates `W(S)` to `±γ²/4` with confidence `1 - δ`.
    pub fn estimate_weight(&mut self, set: &IndicatorString, gamma: f64, delta: f64) -> Result<WeightEstimate> {
        check_unit_interval("gamma", gamma)?;
        self.estimate_weight_with_radius(set, gamma * gamma / 4.0, delta)
    }

    /// Estimates `W(S)` to `±radius`. Each draw runs the swap-style circuit
    /// with `P[0] = 1/2 + 1/2 W(S)`, using one controlled-`f` and one
    /// controlled-`f†`.
    pub fn estimate_weight_with_radius(&mut self, set: &IndicatorString, radius: f64, delta: f64) -> Result<WeightEstimate> {
        check_unit_interval("radius", radius)?;
        check_unit_interval("delta", delta)?;
        if set.n() != self.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: set.n() });
        }
        let truth = self.weight(set);
        let m = hoeffding_samples(radius, delta);
        self.queries += 2 * m;
        self.estimations += 1;
        let value = self.sample_mean(truth, m).clamp(-radius, 1.0 + radius);
        Ok(Estimate { value, radius, confidence: 1.0 - delta, samples: m, queries_used: 2 * m })
    }

    /// Quantum Goldreich-Levin at threshold `γ` and failure probability `δ`,
    /// followed by a re-estimate of every listed coefficient to `±γ/4`.
    pub fn goldreich_levin(&mut self, gamma: f64, delta: f64) -> Result<GoldreichLevin> {
        let mut gl = self.goldreich_levin_list(gamma, delta)?;
        let eta = gamma / 4.0;
        let per = (delta / (gl.list.len().max(1) as f64)).min(0.5);
        let hermitian = self.spectrum.is_hermitian();
        for entry in gl.list.iter_mut() {
            let re = self.estimate_coefficient(&entry.string, eta, per)?.value;
            let im = if hermitian { 0.0 } else { self.estimate_coefficient_imag(&entry.string, eta, per)?.value };
            entry.coefficient = Some(Complex::new(re, im));
        }
        gl.queries = self.queries - gl.queries_before;
        gl.estimations = self.estimations - gl.estimations_before;
        Ok(gl)
    }

    /// The list-building phase alone. Prefixes over qubits `0..k` are
    /// extended one qubit at a time; an extension survives when its weight
    /// estimate (radius `γ²/4`, confidence `1 - δγ²/(16n)`) is at least `γ²/2`.
    pub fn goldreich_levin_list(&mut self, gamma: f64, delta: f64) -> Result<GoldreichLevin> {
        check_unit_interval("gamma", gamma)?;
        check_unit_interval("delta", delta)?;
        let n = self.n();
        let (queries_before, estimations_before) = (self.queries, self.estimations);
        let g2 = gamma * gamma;
        let per_delta = delta * g2 / (16.0 * n as f64);
        let list_bound = 4.0 / g2;
        let mut list = vec![IndicatorString::wildcard(n)];
        let mut max_list_len = 1usize;
        let mut list_sizes = Vec::with_capacity(n);
        for _ in 0..n {
            let mut next = Vec::new();
            for prefix in &list {
                for p in Pauli::ALL {
                    let candidate = prefix.extend(p);
                    let est = self.estimate_weight_with_radius(&candidate, g2 / 4.0, per_delta)?;
                    if est.value >= g2 / 2.0 {
                        next.push(candidate);
                    }
                }
            }
            list = next;
            max_list_len = max_list_len.max(list.len());
            list_sizes.push(list.len());
        }
        let estimations = self.estimations - estimations_before;
        Ok(GoldreichLevin {
            gamma,
            delta,
            list: list
                .iter()
                .map(|s| GlEntry { string: s.to_string_if_complete().expect("complete after n rounds"), coefficient: None })
                .collect(),
            list_sizes,
            max_list_len,
            list_bound,
            list_bound_respected: max_list_len as f64 <= list_bound,
            estimations,
            estimation_bound: 16.0 * n as f64 / g2,
            queries: self.queries - queries_before,
            queries_before,
            estimations_before,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlEntry {
    pub string: PauliString,
    /// Re-estimated coefficient, when requested.
    #[serde(serialize_with = "serialize_opt_complex")]
    pub coefficient: Option<Complex<f64>>,
}

fn serialize_opt_complex<S: serde::Serializer>(
    c: &Option<Complex<f64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.serialize_some(&[c.re, c.im]),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldreichLevin {
    pub gamma: f64,
    pub delta: f64,
    pub list: Vec<GlEntry>,
    /// Surviving prefixes after each round.
    pub list_sizes: Vec<usize>,
    pub max_list_len: usize,
    /// `4/γ²`
    pub list_bound: f64,
    pub list_bound_respected: bool,
    pub estimations: u64,
    /// `16n/γ²`
    pub estimation_bound: f64,
    pub queries: u64,
    #[serde(skip)]
    queries_before: u64,
    #[serde(skip)]
    estimations_before: u64,
}

impl GoldreichLevin {
    pub fn strings(&self) -> Vec<PauliString> {
        self.list.iter().map(|e| e.string.clone()).collect()
    }

    pub fn estimations_respected(&self) -> bool {
        self.estimations as f64 <= self.estimation_bound
    }
}

/// Strings with `|f̂_s|² ≥ threshold`, in index order.
pub fn heavy_strings<T: Real>(spec: &Spectrum<T>, threshold: T) -> Vec<PauliString> {
    spec.iter().filter(|(_, c)| c.norm_sqr() >= threshold).map(|(s, _)| s.clone()).collect()
}

/// Draws `count` strings from `|f̂_s|²` without an oracle, for tests.
pub fn sample_strings<T: Real, R: Rng + ?Sized>(f: &DenseOperator<T>, count: usize, rng: &mut R) -> Result<Vec<PauliString>> {
    let dist = crate::testing::bell_distribution(f)?;
    Ok((0..count).map(|_| PauliString::from_index(f.n(), dist.sample(rng))).collect())
}
