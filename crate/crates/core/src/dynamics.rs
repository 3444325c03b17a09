//! One-dimensional spin chains, Heisenberg evolution of Pauli observables,
//! Lieb-Robinson profiles and learning of evolved observables.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::learning::{OracleHandle, Mode};
use crate::pauli::{pauli_matrix, DenseOperator, HermitianEigen, Pauli, PauliString, Spectrum, MAX_DENSE_QUBITS};
use crate::scalar::Real;

/// Qubit ceiling for [`learn_dynamics`].
pub const LEARNING_CEILING: usize = 8;

/// `H = Σ_j h_j` with `h_j` acting on qubits `j, j+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainHamiltonian<T> {
    n: usize,
    terms: Vec<DenseOperator<T>>,
    norm_cap: T,
}

impl<T: Real> ChainHamiltonian<T> {
    pub fn new(n: usize, terms: Vec<DenseOperator<T>>, norm_cap: T) -> Result<Self> {
        if n < 2 || n > MAX_DENSE_QUBITS {
            return Err(Error::InvalidParameter { name: "n", value: n as f64, reason: "chain needs 2 <= n <= 10" });
        }
        if terms.len() != n - 1 {
            return Err(Error::Precondition(format!("{} bond terms for {n} sites", terms.len())));
        }
        let tol = T::tol_floor(1e-9, 1e3);
        for h in &terms {
            if h.n() != 2 {
                return Err(Error::DimensionMismatch { left: 2, right: h.n() });
            }
            h.require_hermitian()?;
            let norm = h.operator_norm();
            if norm > norm_cap * (T::one() + tol) {
                return Err(Error::InvalidParameter { name: "norm_cap", value: norm.as_f64(), reason: "bond term exceeds the norm cap" });
            }
        }
        Ok(ChainHamiltonian { n, terms, norm_cap })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![DenseOperator::zeros(2); n.saturating_sub(1)], T::one())
    }

    /// Independent Gaussian Hermitian bond terms rescaled to `‖h_j‖_∞ = 1`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut terms = Vec::with_capacity(n.saturating_sub(1));
        for _ in 1..n {
            let mut data = vec![Complex::zero(); 16];
            for r in 0..4 {
                data[r * 4 + r] = Complex::new(T::lit(rng.sample(StandardNormal)), T::zero());
                for c in (r + 1)..4 {
                    let z = Complex::new(T::lit(rng.sample(StandardNormal)), T::lit(rng.sample(StandardNormal)));
                    data[r * 4 + c] = z;
                    data[c * 4 + r] = z.conj();
                }
            }
            let h = DenseOperator::from_entries(2, data)?;
            let norm = h.operator_norm();
            terms.push(h.scale_real(T::one() / norm).symmetrized());
        }
        Self::new(n, terms, T::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[DenseOperator<T>] {
        &self.terms
    }

    pub fn norm_cap(&self) -> T {
        self.norm_cap
    }

    fn embed(&self, bond: usize) -> DenseOperator<T> {
        DenseOperator::identity(bond).kron(&self.terms[bond]).kron(&DenseOperator::identity(self.n - bond - 2))
    }

    /// `H_Λ` for the sites `lo..=hi`: the bond terms with both qubits inside.
    pub fn truncated(&self, lo: usize, hi: usize) -> Result<DenseOperator<T>> {
        if lo > hi || hi >= self.n {
            return Err(Error::Precondition(format!("sites {lo}..={hi} do not form a window of the chain")));
        }
        let mut acc = DenseOperator::zeros(self.n);
        for bond in lo..hi {
            acc = &acc + &self.embed(bond);
        }
        Ok(acc.symmetrized())
    }

    pub fn dense(&self) -> DenseOperator<T> {
        self.truncated(0, self.n - 1).expect("full chain")
    }
}

/// Heisenberg picture `σ ↦ e^{-itH} σ e^{itH}` from one eigendecomposition.
#[derive(Debug, Clone)]
pub struct Evolution<T> {
    eigen: HermitianEigen<T>,
    n: usize,
}

impl<T: Real> Evolution<T> {
    pub fn new(h: &DenseOperator<T>) -> Result<Self> {
        Ok(Evolution { eigen: h.eigh()?, n: h.n() })
    }

    pub fn evolve(&self, sigma: &DenseOperator<T>, t: T) -> Result<DenseOperator<T>> {
        if sigma.n() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: sigma.n() });
        }
        let d = sigma.dim();
        let v = DenseOperator::from_entries(self.n, (0..d * d).map(|k| self.eigen.vector_entry(k / d, k % d)).collect())?;
        let mut m = v.adjoint().matmul(sigma)?.matmul(&v)?.into_entries();
        let lam = &self.eigen.values;
        for a in 0..d {
            for b in 0..d {
                m[a * d + b] = m[a * d + b] * Complex::from_polar(T::one(), -t * (lam[a] - lam[b]));
            }
        }
        let mid = DenseOperator::from_entries(self.n, m)?;
        let out = v.matmul(&mid)?.matmul(&v.adjoint())?;
        Ok(if sigma.is_hermitian() { out.symmetrized() } else { out })
    }
}

fn observable<T: Real>(n: usize, j: usize, s: Pauli) -> Result<DenseOperator<T>> {
    if j >= n {
        return Err(Error::QubitOutOfRange { index: j, n });
    }
    if s.is_identity() {
        return Err(Error::InvalidParameter { name: "s", value: 0.0, reason: "Pauli symbol must be X, Y or Z" });
    }
    Ok(pauli_matrix(&PauliString::single(n, j, s)))
}

/// `σ_j^s(t) = e^{-itH} σ_j^s e^{itH}`.
pub fn evolve_observable<T: Real>(h: &ChainHamiltonian<T>, j: usize, s: Pauli, t: T) -> Result<DenseOperator<T>> {
    let sigma = observable(h.n(), j, s)?;
    Evolution::new(&h.dense())?.evolve(&sigma, t)
}

/// `2^{-n} ‖A - B‖_F²`.
fn discrepancy<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> f64 {
    let f = (a - b).frobenius_norm().as_f64();
    f * f / a.dim() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub radius: usize,
    /// Sites `lo..=hi` of `Λ`.
    pub sites: (usize, usize),
    /// `|Λ|` in sites.
    pub size: usize,
    pub bonds: usize,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    /// Least-squares fit `ln(discrepancy) ≈ intercept + slope·|Λ|`;
    /// `-slope` estimates the velocity constant.
    pub slope: f64,
    pub intercept: f64,
    pub points_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiebRobinsonProfile {
    pub qubit: usize,
    pub t: f64,
    pub points: Vec<ProfilePoint>,
    /// `(index, increase)` wherever the discrepancy grows with `|Λ|` by more
    /// than `1e-12`.
    pub violations: Vec<(usize, f64)>,
    pub fit: Option<DecayFit>,
}

impl LiebRobinsonProfile {
    pub fn monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Discrepancy between the full evolution and the one generated by `H_Λ`
/// for `Λ = [j - r, j + r]` clipped to the chain, for each radius.
pub fn lieb_robinson_profile<T: Real>(
    h: &ChainHamiltonian<T>,
    j: usize,
    s: Pauli,
    t: T,
    radii: &[usize],
) -> Result<LiebRobinsonProfile> {
    let n = h.n();
    let sigma = observable(n, j, s)?;
    let full = Evolution::new(&h.dense())?.evolve(&sigma, t)?;
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        let (lo, hi) = (j.saturating_sub(r), (j + r).min(n - 1));
        let part = Evolution::new(&h.truncated(lo, hi)?)?.evolve(&sigma, t)?;
        points.push(ProfilePoint { radius: r, sites: (lo, hi), size: hi - lo + 1, bonds: hi - lo, discrepancy: discrepancy(&full, &part) });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (points[i].size, points[i].radius));
    let mut violations = Vec::new();
    for w in order.windows(2) {
        let (a, b) = (&points[w[0]], &points[w[1]]);
        let increase = b.discrepancy - a.discrepancy;
        if b.size > a.size && increase > 1e-12 {
            violations.push((w[1], increase));
        }
    }
    Ok(LiebRobinsonProfile { qubit: j, t: t.as_f64(), fit: fit_decay(&points), points, violations })
}

/// Discrepancy for an explicit window of sites, which must contain `j`.
pub fn window_discrepancy<T: Real>(h: &ChainHamiltonian<T>, j: usize, s: Pauli, t: T, lo: usize, hi: usize) -> Result<f64> {
    if !(lo <= j && j <= hi) {
        return Err(Error::Precondition(format!("window {lo}..={hi} does not contain qubit {j}")));
    }
    let sigma = observable(h.n(), j, s)?;
    let full = Evolution::new(&h.dense())?.evolve(&sigma, t)?;
    let part = Evolution::new(&h.truncated(lo, hi)?)?.evolve(&sigma, t)?;
    Ok(discrepancy(&full, &part))
}

fn fit_decay(points: &[ProfilePoint]) -> Option<DecayFit> {
    let data: Vec<(f64, f64)> =
        points.iter().filter(|p| p.discrepancy > 1e-300).map(|p| (p.size as f64, p.discrepancy.ln())).collect();
    if data.len() < 2 {
        return None;
    }
    let m = data.len() as f64;
    let mx = data.iter().map(|d| d.0).sum::<f64>() / m;
    let my = data.iter().map(|d| d.1).sum::<f64>() / m;
    let sxx: f64 = data.iter().map(|d| (d.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = data.iter().map(|d| (d.0 - mx) * (d.1 - my)).sum();
    let slope = sxy / sxx;
    Some(DecayFit { slope, intercept: my - slope * mx, points_used: data.len() })
}

#[derive(Debug, Clone, Serialize)]
pub struct LearnedDynamics {
    pub gamma: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Reconstructed coefficients.
    pub terms: Vec<(PauliString, f64)>,
    /// `‖estimate - σ_j^s(t)‖₂²` against the exact evolution.
    pub error: f64,
    /// `Σ_{s ∈ L} (estimate_s - f̂_s)²`, the part controlled by the
    /// re-estimation step.
    pub listed_error: f64,
    /// Exact weight of the coefficients missing from the list.
    pub unlisted_weight: f64,
    pub queries: u64,
    pub estimations: u64,
    pub list_bound_respected: bool,
    pub success: bool,
    #[serde(skip)]
    pub estimate: DenseOperator<f64>,
}

/// Runs Goldreich-Levin at threshold `γ` (confidence `δ/2`) on
/// `σ_j^s(t)`, then re-estimates every listed coefficient to
/// `±√(ε/(2|L|))` with confidence `δ/(2|L|)` each.
#[allow(clippy::too_many_arguments)]
pub fn learn_dynamics<T: Real>(
    h: &ChainHamiltonian<T>,
    j: usize,
    s: Pauli,
    t: T,
    gamma: f64,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<LearnedDynamics> {
    if h.n() > LEARNING_CEILING {
        return Err(Error::QubitCeiling { n: h.n(), ceiling: LEARNING_CEILING });
    }
    let exact = evolve_observable(h, j, s, t)?;
    learn_evolved(&exact, gamma, epsilon, delta, seed, Mode::Sampled)
}

/// The learning step of [`learn_dynamics`] on an already evolved
/// observable, so repeated runs can share one evolution.
pub fn learn_evolved<T: Real>(
    exact: &DenseOperator<T>,
    gamma: f64,
    epsilon: f64,
    delta: f64,
    seed: u64,
    mode: Mode,
) -> Result<LearnedDynamics> {
    let n = exact.n();
    if n > LEARNING_CEILING {
        return Err(Error::QubitCeiling { n, ceiling: LEARNING_CEILING });
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon, reason: "must be positive" });
    }
    let mut oracle = OracleHandle::new(exact.clone(), seed)?.with_mode(mode);
    let gl = oracle.goldreich_levin_list(gamma, delta / 2.0)?;
    let listed = gl.strings();
    let count = listed.len().max(1) as f64;
    let eta = (epsilon / (2.0 * count)).sqrt();
    let per = delta / (2.0 * count);
    let mut terms = Vec::with_capacity(listed.len());
    let mut spec = Spectrum::<T>::new(n, true);
    let mut listed_error = 0.0;
    let mut listed_weight = 0.0;
    for string in listed {
        let est = oracle.estimate_coefficient(&string, eta, per)?;
        let truth = oracle.spectrum().get_real(&string).as_f64();
        listed_error += (est.value - truth).powi(2);
        listed_weight += truth * truth;
        spec.insert(string.clone(), Complex::new(T::lit(est.value), T::zero()));
        terms.push((string, est.value));
    }
    let estimate = spec.to_operator();
    let error = discrepancy(&estimate, exact);
    let unlisted_weight = (oracle.spectrum().total_weight().as_f64() - listed_weight).max(0.0);
    let data = estimate.entries().iter().map(|z| Complex::new(z.re.as_f64(), z.im.as_f64())).collect();
    Ok(LearnedDynamics {
        gamma,
        epsilon,
        delta,
        terms,
        error,
        listed_error,
        unlisted_weight,
        queries: oracle.query_count(),
        estimations: oracle.estimation_count(),
        list_bound_respected: gl.list_bound_respected,
        success: error <= epsilon,
        estimate: DenseOperator::from_entries(n, data)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::is_quantum_boolean;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn evolution_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = ChainHamiltonian::<f64>::random(4, &mut rng).unwrap();
        let sigma = pauli_matrix::<f64>(&"IXII".parse().unwrap());
        assert!(evolve_observable(&h, 1, Pauli::X, 0.0).unwrap().max_abs_diff(&sigma).unwrap() < 1e-12);
        let z = ChainHamiltonian::<f64>::zero(4).unwrap();
        assert!(evolve_observable(&z, 1, Pauli::X, 3.0).unwrap().max_abs_diff(&sigma).unwrap() < 1e-15);
        let e = evolve_observable(&h, 2, Pauli::Y, 1.0).unwrap();
        assert!(is_quantum_boolean(&e, 1e-10));
        assert!(evolve_observable(&h, 4, Pauli::Y, 1.0).is_err());
        assert!(evolve_observable(&h, 0, Pauli::I, 1.0).is_err());
    }

    #[test]
    fn evolution_matches_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = ChainHamiltonian::<f64>::random(3, &mut rng).unwrap();
        let hd = h.dense();
        let sigma = pauli_matrix::<f64>(&"ZII".parse().unwrap());
        // e^{-itH} σ e^{itH} = Σ_k (-it)^k/k! ad_H^k(σ)
        let t = 0.3;
        let mut term = sigma.clone();
        let mut acc = sigma.clone();
        for k in 1..30 {
            term = term_commutator(&hd, &term).scale(Complex::new(0.0, -t / k as f64));
            acc = &acc + &term;
        }
        assert!(evolve_observable(&h, 0, Pauli::Z, t).unwrap().max_abs_diff(&acc).unwrap() < 1e-12);
    }

    fn term_commutator(h: &DenseOperator<f64>, x: &DenseOperator<f64>) -> DenseOperator<f64> {
        h.commutator(x).unwrap()
    }

    #[test]
    fn profile_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = ChainHamiltonian::<f64>::random(6, &mut rng).unwrap();
        let p = lieb_robinson_profile(&h, 2, Pauli::Z, 1.0, &[0, 1, 2, 3, 4]).unwrap();
        assert!(p.points.last().unwrap().discrepancy < 1e-20);
        assert!(p.monotone(), "{:?}", p.violations);
        let p0 = lieb_robinson_profile(&h, 2, Pauli::Z, 0.0, &[0, 1, 2]).unwrap();
        assert!(p0.points.iter().all(|q| q.discrepancy < 1e-20));
        assert!(window_discrepancy(&h, 2, Pauli::Z, 1.0, 3, 5).is_err());
    }

    #[test]
    fn learning_examples() {
        let z = ChainHamiltonian::<f64>::zero(3).unwrap();
        let r = learn_dynamics(&z, 1, Pauli::X, 1.0, 0.2, 0.05, 0.05, 1).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms[0].0.to_string(), "IXI");
        assert!(r.success && r.queries > 0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = ChainHamiltonian::<f64>::random(4, &mut rng).unwrap();
        let r = learn_dynamics(&h, 1, Pauli::Z, 0.5, 0.2, 0.05, 0.05, 2).unwrap();
        assert!(r.listed_error <= 0.05);
        assert!((r.error - r.listed_error - r.unlisted_weight).abs() < 1e-9);
        let big = ChainHamiltonian::<f64>::zero(9).unwrap();
        assert!(matches!(learn_dynamics(&big, 1, Pauli::X, 1.0, 0.2, 0.05, 0.05, 1), Err(Error::QubitCeiling { .. })));
    }
}
