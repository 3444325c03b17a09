//! Derivatives, influences, variance and the KKL-style bounds.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{fourier_transform, is_quantum_boolean, schatten_norm, DenseOperator, PauliString, Spectrum};
use crate::random::random_unitary;
use crate::scalar::Real;

/// Operators that admit the derivative `d_J` and a normalized 2-norm.
///
/// `d_∅` is the zero operator.
pub trait Differentiable<T: Real>: Sized {
    fn qubits(&self) -> usize;
    fn derivative_set(&self, set: &[usize]) -> Result<Self>;
    /// `‖·‖₂²` under the normalized trace.
    fn squared_norm(&self) -> T;

    fn derivative(&self, j: usize) -> Result<Self> {
        self.derivative_set(&[j])
    }
}

fn check_set(n: usize, set: &[usize]) -> Result<()> {
    match set.iter().find(|&&j| j >= n) {
        Some(&j) => Err(Error::QubitOutOfRange { index: j, n }),
        None => Ok(()),
    }
}

impl<T: Real> Differentiable<T> for DenseOperator<T> {
    fn qubits(&self) -> usize {
        self.n()
    }

    /// `f - tr_J(f) ⊗ I_J / 2^{|J|}`.
    fn derivative_set(&self, set: &[usize]) -> Result<Self> {
        check_set(self.n(), set)?;
        if set.is_empty() {
            return Ok(DenseOperator::zeros(self.n()));
        }
        Ok(self - &self.average_out(set)?)
    }

    fn squared_norm(&self) -> T {
        let f = self.frobenius_norm();
        f * f / T::from_usize_lossy(self.dim())
    }
}

impl<T: Real> Differentiable<T> for Spectrum<T> {
    fn qubits(&self) -> usize {
        self.n()
    }

    /// Keeps the coefficients whose support meets `J`.
    fn derivative_set(&self, set: &[usize]) -> Result<Self> {
        check_set(self.n(), set)?;
        Ok(self.filter(|s| set.iter().any(|&j| !s.get(j).is_identity())))
    }

    fn squared_norm(&self) -> T {
        self.total_weight()
    }
}

/// `I_j(f) = ‖d_j f‖₂²`.
pub fn influence<T: Real, F: Differentiable<T>>(f: &F, j: usize) -> Result<T> {
    Ok(f.derivative(j)?.squared_norm())
}

/// `I_J(f) = ‖d_J f‖₂²`.
pub fn influence_set<T: Real, F: Differentiable<T>>(f: &F, set: &[usize]) -> Result<T> {
    Ok(f.derivative_set(set)?.squared_norm())
}

pub fn influences<T: Real, F: Differentiable<T>>(f: &F) -> Vec<T> {
    (0..f.qubits()).map(|j| influence(f, j).expect("in range")).collect()
}

/// `I(f) = Σ_j I_j(f) = Σ_s |s| f̂_s²`.
pub fn total_influence<T: Real, F: Differentiable<T>>(f: &F) -> T {
    influences(f).into_iter().sum()
}

/// Monte-Carlo estimate of `½ E_U ‖[U_j, f]‖₂²` over Haar `U ∈ U(2)`.
/// Returns the mean and its standard error.
pub fn haar_influence<T: Real, R: Rng + ?Sized>(f: &DenseOperator<T>, j: usize, samples: usize, rng: &mut R) -> Result<(f64, f64)> {
    f.check_qubit(j)?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let u = random_unitary::<T, R>(1, rng);
        let e = u.entries();
        let block = [e[0], e[1], e[2], e[3]];
        let comm = &f.apply_left_single(j, &block) - &f.apply_right_single(j, &block);
        let x = comm.squared_norm().as_f64() / 2.0;
        sum += x;
        sum_sq += x * x;
    }
    let m = samples.max(1) as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    Ok((mean, (var / m).sqrt()))
}

/// `2^{-n} tr f² - (2^{-n} tr f)²`.
pub fn variance<T: Real>(f: &DenseOperator<T>) -> Result<T> {
    f.require_hermitian()?;
    let mean = f.normalized_trace().re;
    Ok(f.squared_norm() - mean * mean)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoincareReport {
    pub variance: f64,
    pub total_influence: f64,
    /// `I(f) - var(f)`
    pub margin: f64,
    pub influences: Vec<f64>,
    pub max_influence: f64,
    pub traceless_boolean: bool,
    /// `max_j I_j ≥ 1/n`, checked only for traceless quantum booleans.
    pub max_influence_holds: Option<bool>,
}

impl PoincareReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol && self.max_influence_holds.unwrap_or(true)
    }
}

pub fn poincare_check<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<PoincareReport> {
    let var = variance(f)?.as_f64();
    let spec = fourier_transform(f);
    let infl: Vec<f64> = influences(&spec).into_iter().map(Real::as_f64).collect();
    let total: f64 = infl.iter().sum();
    let max_influence = infl.iter().cloned().fold(0.0, f64::max);
    let traceless_boolean = f.n() > 0 && f.normalized_trace().norm() <= tol && is_quantum_boolean(f, tol);
    let max_influence_holds = traceless_boolean.then(|| max_influence >= 1.0 / f.n() as f64 - tol.as_f64());
    Ok(PoincareReport {
        variance: var,
        total_influence: total,
        margin: total - var,
        influences: infl,
        max_influence,
        traceless_boolean,
        max_influence_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TalagrandTerm {
    pub qubit: usize,
    pub norm_2: f64,
    pub norm_1: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TalagrandReport {
    pub log_base: f64,
    /// `‖f‖₂²`
    pub lhs: f64,
    /// `Σ_i 10 ‖d_i f‖₂² / ((2/3) log(‖d_i f‖₂ / ‖d_i f‖₁) + 1)`
    pub rhs: f64,
    pub margin: f64,
    pub terms: Vec<TalagrandTerm>,
}

pub fn talagrand_check<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<TalagrandReport> {
    talagrand_check_with_base(f, 2.0, tol)
}

pub fn talagrand_check_with_base<T: Real>(f: &DenseOperator<T>, log_base: f64, tol: T) -> Result<TalagrandReport> {
    f.require_hermitian()?;
    if !(log_base > 1.0) {
        return Err(Error::InvalidParameter { name: "log_base", value: log_base, reason: "must exceed 1" });
    }
    let mean = f.normalized_trace();
    if mean.norm() > tol {
        return Err(Error::NotTraceless { trace: mean.norm().as_f64() });
    }
    let mut terms = Vec::with_capacity(f.n());
    for i in 0..f.n() {
        let d = f.derivative(i)?;
        let norm_2 = d.squared_norm().as_f64().sqrt();
        let norm_1 = schatten_norm(&d, T::one())?.as_f64();
        let contribution = if norm_2 <= tol.as_f64() || norm_1 == 0.0 {
            0.0
        } else {
            let ratio = (norm_2 / norm_1).max(1.0);
            10.0 * norm_2 * norm_2 / ((2.0 / 3.0) * ratio.log(log_base) + 1.0)
        };
        terms.push(TalagrandTerm { qubit: i, norm_2, norm_1, contribution });
    }
    let lhs = f.squared_norm().as_f64();
    let rhs = terms.iter().map(|t| t.contribution).sum::<f64>();
    Ok(TalagrandReport { log_base, lhs, rhs, margin: rhs - lhs, terms })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadInfluenceStructure {
    /// `‖g² - I‖_∞` for `g = d_J f / α`.
    pub square_deviation: f64,
    /// `‖{tr_J f ⊗ I/2^{|J|}, g}‖_∞`
    pub anticommutator_norm: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadInfluenceReport {
    pub set: Vec<usize>,
    /// `α² = I_J(f)`
    pub alpha_squared: f64,
    pub norm_2: f64,
    pub norm_1: f64,
    pub bad_influence: bool,
    /// `None` when `d_J f = 0`.
    pub structure: Option<BadInfluenceStructure>,
    pub degenerate: bool,
}

/// `J` has bad influence on `f` when `‖d_J f‖₂ = ‖d_J f‖₁`.
pub fn bad_influence_detect<T: Real>(f: &DenseOperator<T>, set: &[usize], tol: T) -> Result<BadInfluenceReport> {
    if !is_quantum_boolean(f, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    let d = f.derivative_set(set)?;
    let alpha_sq = d.squared_norm();
    let norm_2 = alpha_sq.sqrt();
    let norm_1 = schatten_norm(&d, T::one())?;
    let degenerate = norm_2 <= tol;
    let bad = !degenerate && (norm_2 - norm_1).abs() <= tol;
    let structure = if bad {
        let g = d.scale_real(T::one() / norm_2);
        let square_deviation = (&g.matmul(&g)? - &DenseOperator::identity(f.n())).operator_norm();
        let avg = f.average_out(set)?;
        let anticommutator_norm = avg.anticommutator(&g)?.operator_norm();
        let slack = tol * T::lit(10.0);
        Some(BadInfluenceStructure {
            square_deviation: square_deviation.as_f64(),
            anticommutator_norm: anticommutator_norm.as_f64(),
            holds: square_deviation <= slack && anticommutator_norm <= slack,
        })
    } else {
        None
    };
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(BadInfluenceReport {
        set: sorted,
        alpha_squared: alpha_sq.as_f64(),
        norm_2: norm_2.as_f64(),
        norm_1: norm_1.as_f64(),
        bad_influence: bad,
        structure,
        degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnticommutingKklReport {
    pub terms: Vec<PauliString>,
    pub influences: Vec<f64>,
    /// `Σ_j I_j²`, at least 1.
    pub sum_of_squares: f64,
    pub max_influence: f64,
    /// `1/√n`
    pub bound: f64,
}

impl AnticommutingKklReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.sum_of_squares >= 1.0 - tol && self.max_influence >= self.bound - tol
    }
}

/// Influence bounds for a quantum boolean `f` whose Pauli terms pairwise
/// anticommute.
pub fn anticommuting_kkl_check<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<AnticommutingKklReport> {
    if !is_quantum_boolean(f, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    let spec = fourier_transform(f);
    let terms: Vec<PauliString> = spec.keys().cloned().collect();
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            if !a.anticommutes_with(b) {
                return Err(Error::CommutingTerms { first: a.to_string(), second: b.to_string() });
            }
        }
    }
    let infl: Vec<f64> = influences(&spec).into_iter().map(Real::as_f64).collect();
    let sum_of_squares = infl.iter().map(|x| x * x).sum();
    let max_influence = infl.iter().cloned().fold(0.0, f64::max);
    Ok(AnticommutingKklReport {
        terms,
        influences: infl,
        sum_of_squares,
        max_influence,
        bound: 1.0 / (f.n().max(1) as f64).sqrt(),
    })
}
