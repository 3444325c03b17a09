//! Stabilizer, locality and Håstad tests, plus two-operator discrimination.

use num_complex::Complex;
use num_traits::Zero;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{fourier_coefficients, fourier_transform, DenseOperator, PauliString, Spectrum};
use crate::scalar::Real;

/// Default qubit ceiling for the state-vector locality computation.
pub const LOCALITY_CEILING: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AcceptProperty,
    RejectProperty,
    Inconclusive,
}

/// A string together with the phase `arg(f̂_s)` of its coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub string: PauliString,
    pub weight: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampledAcceptance {
    pub accepted: u64,
    pub trials: u64,
}

impl SampledAcceptance {
    pub fn fraction(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub exact_probability: f64,
    pub sampled_acceptance: Option<SampledAcceptance>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub epsilon_bound: Option<f64>,
    pub seed: Option<u64>,
}

impl TestReport {
    /// Binomial standard deviation of the sampled fraction around the exact
    /// probability.
    pub fn binomial_sigma(&self) -> Option<f64> {
        self.sampled_acceptance.map(|s| {
            let p = self.exact_probability;
            (p * (1.0 - p) / s.trials as f64).sqrt()
        })
    }
}

fn unitarity_tolerance<T: Real>() -> T {
    T::tol_floor(1e-9, 1e3)
}

fn witness_from<T: Real>(s: &PauliString, c: Complex<T>) -> Witness {
    Witness { string: s.clone(), weight: c.norm_sqr().as_f64(), phase: c.arg().as_f64() }
}

/// Probability `Σ_s |f̂_s|^4` and, when it exceeds `1/2`, the unique string
/// carrying weight at least that probability.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerProbability<T> {
    pub probability: T,
    pub witness: Option<Witness>,
}

pub fn stabilizer_test_probability<T: Real>(f: &DenseOperator<T>) -> Result<StabilizerProbability<T>> {
    f.require_unitary(unitarity_tolerance())?;
    Ok(stabilizer_probability_from(&fourier_transform(f)))
}

fn stabilizer_probability_from<T: Real>(spec: &Spectrum<T>) -> StabilizerProbability<T> {
    let probability = spec.fourth_power_sum().min(T::one());
    let half = T::lit(0.5);
    let witness = if probability > half {
        // max |f̂|² ≥ Σ|f̂|⁴ > 1/2, so the maximizer is unique
        spec.sorted_by_magnitude().first().map(|(s, c)| witness_from(s, *c))
    } else {
        None
    };
    StabilizerProbability { probability, witness }
}

fn stabilizer_verdict(p: f64) -> Verdict {
    if p > 0.5 {
        Verdict::AcceptProperty
    } else if p < 0.5 {
        Verdict::RejectProperty
    } else {
        Verdict::Inconclusive
    }
}

/// Exact stabilizer test report. The implied closeness bound is
/// `ε = 1 - probability`, meaningful when below `1/2`.
pub fn stabilizer_test<T: Real>(f: &DenseOperator<T>) -> Result<TestReport> {
    let exact = stabilizer_test_probability(f)?;
    let p = exact.probability.as_f64();
    Ok(TestReport {
        exact_probability: p,
        sampled_acceptance: None,
        verdict: stabilizer_verdict(p),
        witness: exact.witness,
        epsilon_bound: Some(1.0 - p),
        seed: None,
    })
}

/// Bell-measurement distribution `|f̂_s|²` over all `4^n` strings.
pub(crate) fn bell_distribution<T: Real>(f: &DenseOperator<T>) -> Result<WeightedIndex<f64>> {
    let weights: Vec<f64> = fourier_coefficients(f).iter().map(|c| c.norm_sqr().as_f64()).collect();
    WeightedIndex::new(&weights).map_err(|_| Error::ZeroOperator)
}

/// Monte-Carlo run of the two-query stabilizer test: two independent Bell
/// samples, accept iff equal.
pub fn stabilizer_test_sample<T: Real, R: Rng + ?Sized>(
    f: &DenseOperator<T>,
    trials: u64,
    rng: &mut R,
) -> Result<TestReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter { name: "trials", value: 0.0, reason: "need at least one trial" });
    }
    let mut report = stabilizer_test(f)?;
    let dist = bell_distribution(f)?;
    let accepted = (0..trials).filter(|_| dist.sample(rng) == dist.sample(rng)).count() as u64;
    report.sampled_acceptance = Some(SampledAcceptance { accepted, trials });
    Ok(report)
}

/// `2^{-n} Σ_{S ⊆ [n]} tr(ρ_S²)` for the state `(f ⊗ I)|Φ⟩`, where `ρ_S`
/// keeps the qubit pairs in `S`.
pub fn locality_test_probability<T: Real>(f: &DenseOperator<T>, ceiling: usize) -> Result<T> {
    let n = f.n();
    if n > ceiling {
        return Err(Error::QubitCeiling { n, ceiling });
    }
    let dim = f.dim();
    // amplitudes ⟨a, b|ψ⟩ = f[a, b] / √d, digit j = 2 a_j + b_j
    let norm = T::one() / T::from_usize_lossy(dim);
    let mut psi = vec![Complex::<T>::zero(); dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let mut k = 0usize;
            for j in 0..n {
                let shift = n - 1 - j;
                let digit = (((a >> shift) & 1) << 1) | ((b >> shift) & 1);
                k |= digit << (2 * shift);
            }
            psi[k] = f.get(a, b);
        }
    }
    let total: T = psi.iter().map(|z| z.norm_sqr()).sum::<T>() * norm;
    let mut sum = T::zero();
    for subset in 0..(1usize << n) {
        sum += purity(&psi, n, subset) * norm * norm / (total * total);
    }
    Ok(sum / T::from_usize_lossy(dim))
}

/// `‖Ψ Ψ†‖_F²` for `Ψ` reshaped with the digits in `subset` as rows; the
/// input need not be normalized.
fn purity<T: Real>(psi: &[Complex<T>], n: usize, subset: usize) -> T {
    let inside: Vec<usize> = (0..n).filter(|&b| subset >> b & 1 == 1).collect();
    let outside: Vec<usize> = (0..n).filter(|&b| subset >> b & 1 == 0).collect();
    // contract over the larger side
    let (rows, cols) = if inside.len() <= outside.len() { (inside, outside) } else { (outside, inside) };
    let nr = 1usize << (2 * rows.len());
    let nc = 1usize << (2 * cols.len());
    let place = |x: usize, digits: &[usize]| -> usize {
        digits.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | ((x >> (2 * i)) & 3) << (2 * b))
    };
    let row_off: Vec<usize> = (0..nr).map(|x| place(x, &rows)).collect();
    let col_off: Vec<usize> = (0..nc).map(|x| place(x, &cols)).collect();
    let mut gram = vec![Complex::<T>::zero(); nr * nr];
    for (i, &ri) in row_off.iter().enumerate() {
        for (j, &rj) in row_off.iter().enumerate().skip(i) {
            let mut acc = Complex::zero();
            for &c in &col_off {
                acc += psi[ri | c] * psi[rj | c].conj();
            }
            gram[i * nr + j] = acc;
            gram[j * nr + i] = acc.conj();
        }
    }
    gram.iter().map(|z| z.norm_sqr()).sum()
}

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if !(delta >= T::zero() && delta <= T::one()) {
        return Err(Error::InvalidParameter { name: "delta", value: delta.as_f64(), reason: "must lie in [0, 1]" });
    }
    Ok(())
}

/// `Σ_s (1-δ)^{|s|} |f̂_s|^4`.
pub fn hastad_test_probability<T: Real>(f: &DenseOperator<T>, delta: T) -> Result<T> {
    check_delta(delta)?;
    Ok(hastad_from_spectrum(&fourier_transform(f), delta))
}

pub(crate) fn hastad_from_spectrum<T: Real>(spec: &Spectrum<T>, delta: T) -> T {
    let keep = T::one() - delta;
    spec.iter().map(|(s, c)| keep.powi(s.weight() as i32) * c.norm_sqr() * c.norm_sqr()).sum()
}

/// Monte-Carlo Håstad test: a matched pair of Bell samples is accepted with
/// probability `(1-δ)^{|s|}`.
pub fn hastad_test_sample<T: Real, R: Rng + ?Sized>(
    f: &DenseOperator<T>,
    delta: T,
    trials: u64,
    rng: &mut R,
) -> Result<TestReport> {
    check_delta(delta)?;
    if trials == 0 {
        return Err(Error::InvalidParameter { name: "trials", value: 0.0, reason: "need at least one trial" });
    }
    let n = f.n();
    let exact = hastad_test_probability(f, delta)?.as_f64();
    let dist = bell_distribution(f)?;
    let keep = 1.0 - delta.as_f64();
    let mut accepted = 0u64;
    for _ in 0..trials {
        let s = dist.sample(rng);
        if s != dist.sample(rng) {
            continue;
        }
        let weight = PauliString::from_index(n, s).weight() as i32;
        if rng.random::<f64>() < keep.powi(weight) {
            accepted += 1;
        }
    }
    Ok(TestReport {
        exact_probability: exact,
        sampled_acceptance: Some(SampledAcceptance { accepted, trials }),
        verdict: Verdict::Inconclusive,
        witness: None,
        epsilon_bound: None,
        seed: None,
    })
}

/// Runs the Håstad test at `δ = 3ε/4`. Acceptance at `1 - ε` yields a
/// support-at-most-one witness with weight at least `1 - ε`. For `ε > 0.01`
/// the closeness guarantee does not apply and the verdict is inconclusive.
pub fn hastad_verdict<T: Real>(f: &DenseOperator<T>, epsilon: T) -> Result<TestReport> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon.as_f64(), reason: "must lie in (0, 1)" });
    }
    let spec = fourier_transform(f);
    let delta = epsilon * T::lit(0.75);
    let p = hastad_from_spectrum(&spec, delta);
    let threshold = T::one() - epsilon;
    let witness = spec
        .iter()
        .filter(|(s, c)| s.weight() <= 1 && c.norm_sqr() >= threshold)
        .map(|(s, c)| witness_from(s, *c))
        .next();
    let verdict = if epsilon > T::lit(0.01) {
        Verdict::Inconclusive
    } else if p >= threshold {
        if witness.is_some() {
            Verdict::AcceptProperty
        } else {
            Verdict::Inconclusive
        }
    } else {
        Verdict::RejectProperty
    };
    Ok(TestReport {
        exact_probability: p.as_f64(),
        sampled_acceptance: None,
        verdict,
        witness: if p >= threshold { witness } else { None },
        epsilon_bound: Some(epsilon.as_f64()),
        seed: None,
    })
}

/// Optimal one-query success probability `1/2 + 1/2 √(1 - |⟨f₁,f₂⟩|²)`.
pub fn discrimination_probability<T: Real>(f1: &DenseOperator<T>, f2: &DenseOperator<T>) -> Result<T> {
    f1.check_same_size(f2)?;
    f1.require_unitary(unitarity_tolerance())?;
    f2.require_unitary(unitarity_tolerance())?;
    let overlap = f1.inner_product(f2)?.norm_sqr().min(T::one());
    let half = T::lit(0.5);
    Ok(half + half * (T::one() - overlap).sqrt())
}
