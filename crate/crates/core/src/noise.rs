//! Noise operator, depolarizing channel and hypercontractive inequalities.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{fourier_transform, schatten_from_singular, schatten_norm, DenseOperator, PauliString, Spectrum};
use crate::random::random_unit_vector;
use crate::scalar::Real;

/// `T_ε` is a quantum channel only for `-1/3 ≤ ε ≤ 1`.
pub fn is_completely_positive(epsilon: f64) -> bool {
    (-1.0 / 3.0..=1.0).contains(&epsilon)
}

/// `T_ε f = Σ_s ε^{|s|} f̂_s χ_s` for `ε ∈ [-1, 1]`.
pub fn apply_noise<T: Real>(spec: &Spectrum<T>, epsilon: T) -> Result<Spectrum<T>> {
    if !(epsilon >= -T::one() && epsilon <= T::one()) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon.as_f64(), reason: "must lie in [-1, 1]" });
    }
    Ok(spec.map(|s, c| c * epsilon.powi(s.weight() as i32)))
}

/// `D_ε^{⊗n}` with `D_ε(f) = ((1-ε)/2) tr(f) I + ε f`, applied qubit by
/// qubit. Refuses `ε < -1/3`, where the map is not completely positive.
pub fn depolarize<T: Real>(f: &DenseOperator<T>, epsilon: T) -> Result<DenseOperator<T>> {
    if !is_completely_positive(epsilon.as_f64()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon.as_f64(),
            reason: "depolarizing channel needs -1/3 <= epsilon <= 1",
        });
    }
    let mut out = f.clone();
    for j in 0..f.n() {
        let avg = out.average_out(&[j])?;
        out = &out.scale_real(epsilon) + &avg.scale_real(T::one() - epsilon);
    }
    Ok(out)
}

fn noisy_operator<T: Real>(f: &DenseOperator<T>, epsilon: T) -> Result<DenseOperator<T>> {
    Ok(apply_noise(&fourier_transform(f), epsilon)?.to_operator())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypercontractivityReport {
    pub p: f64,
    pub q: f64,
    pub epsilon: f64,
    pub norm_p: f64,
    pub noisy_norm_q: f64,
    /// `‖f‖_p - ‖T_ε f‖_q`
    pub margin: f64,
    pub in_theorem_regime: bool,
    pub completely_positive: bool,
}

impl HypercontractivityReport {
    /// The theorem's claim, vacuously true outside its regime.
    pub fn holds(&self, tol: f64) -> bool {
        !self.in_theorem_regime || self.margin >= -tol
    }
}

/// `1 ≤ p ≤ 2 ≤ q` and `ε ≤ √((p-1)/(q-1))`.
pub fn in_hypercontractive_regime(p: f64, q: f64, epsilon: f64) -> bool {
    if !(1.0..=2.0).contains(&p) || q < 2.0 {
        return false;
    }
    let limit = if q.is_infinite() { 0.0 } else { ((p - 1.0) / (q - 1.0)).sqrt() };
    // a relative slack absorbs rounding in the caller's ε
    epsilon.abs() <= limit * (1.0 + 1e-12)
}

pub fn hypercontractivity_check<T: Real>(f: &DenseOperator<T>, p: T, q: T, epsilon: T) -> Result<HypercontractivityReport> {
    f.require_hermitian()?;
    let noisy = noisy_operator(f, epsilon)?;
    let norm_p = schatten_norm(f, p)?.as_f64();
    let noisy_norm_q = schatten_norm(&noisy, q)?.as_f64();
    let (pf, qf, ef) = (p.as_f64(), q.as_f64(), epsilon.as_f64());
    Ok(HypercontractivityReport {
        p: pf,
        q: qf,
        epsilon: ef,
        norm_p,
        noisy_norm_q,
        margin: norm_p - noisy_norm_q,
        in_theorem_regime: in_hypercontractive_regime(pf, qf, ef),
        completely_positive: is_completely_positive(ef),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowDegreeReport {
    pub degree: usize,
    pub q: f64,
    /// Dual exponent `p = q/(q-1) ≤ 2`.
    pub p: f64,
    pub norm_2: f64,
    pub norm_q: f64,
    pub norm_p: f64,
    /// `(q-1)^{d/2} ‖f‖₂ - ‖f‖_q`
    pub upper_margin: f64,
    /// `‖f‖_p - (p-1)^{d/2} ‖f‖₂`
    pub lower_margin: f64,
}

impl LowDegreeReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.upper_margin >= -tol && self.lower_margin >= -tol
    }
}

/// Degree-`d` smoothness: `‖f‖_q ≤ (q-1)^{d/2} ‖f‖₂` for `q ≥ 2` and
/// `‖f‖_p ≥ (p-1)^{d/2} ‖f‖₂` at the dual `p ≤ 2`.
pub fn low_degree_norm_check<T: Real>(f: &DenseOperator<T>, q: T) -> Result<LowDegreeReport> {
    let qf = q.as_f64();
    if q.is_infinite() {
        return Err(Error::InvalidParameter { name: "q", value: qf, reason: "the bound is vacuous at q = infinity" });
    }
    if !(qf >= 2.0) {
        return Err(Error::InvalidParameter { name: "q", value: qf, reason: "need q >= 2 (the dual p <= 2 is derived)" });
    }
    let p = q / (q - T::one());
    let d = fourier_transform(f).degree();
    let sv = f.singular_values();
    let norm_2 = schatten_from_singular(&sv, T::lit(2.0))?.as_f64();
    let norm_q = schatten_from_singular(&sv, q)?.as_f64();
    let norm_p = schatten_from_singular(&sv, p)?.as_f64();
    let pf = p.as_f64();
    let half_d = d as f64 / 2.0;
    Ok(LowDegreeReport {
        degree: d,
        q: qf,
        p: pf,
        norm_2,
        norm_q,
        norm_p,
        upper_margin: (qf - 1.0).powf(half_d) * norm_2 - norm_q,
        lower_margin: norm_p - (pf - 1.0).powf(half_d) * norm_2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub degree: usize,
    pub rank: usize,
    /// `2^{n - 2 log₂(e) d}`
    pub bound: f64,
    pub margin: f64,
}

impl RankReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.margin >= -slack
    }
}

/// Relative eigenvalue-zero tolerance for rank decisions.
pub fn rank_tolerance<T: Real>() -> T {
    T::tol_floor(1e-8, 1e3)
}

/// Quantum Schwartz-Zippel: a nonzero Hermitian `f` of degree `d` has at
/// least `2^{n - 2 log₂(e) d}` nonzero eigenvalues.
pub fn rank_bound_check<T: Real>(f: &DenseOperator<T>) -> Result<RankReport> {
    let eig = f.eigenvalues()?;
    let top = eig.iter().map(|l| l.abs()).fold(T::zero(), T::max);
    if top == T::zero() {
        return Err(Error::ZeroOperator);
    }
    let cut = rank_tolerance::<T>() * top;
    let rank = eig.iter().filter(|l| l.abs() > cut).count();
    let d = fourier_transform(f).degree();
    let n = f.n();
    let bound = 2f64.powf(n as f64 - 2.0 * std::f64::consts::LOG2_E * d as f64);
    Ok(RankReport { n, degree: d, rank, bound, margin: rank as f64 - bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorLevelOneReport {
    pub q: f64,
    pub p: f64,
    pub level_one_weight: f64,
    pub norm_1: f64,
    /// `(q-1) ‖P‖₁^{2/p}`
    pub bound: f64,
    pub margin: f64,
}

/// `‖P^{=1}‖₂² ≤ (q-1) ‖P‖₁^{2/p}` with `1/p + 1/q = 1`.
pub fn projector_level1_check<T: Real>(proj: &DenseOperator<T>, q: T, tol: T) -> Result<ProjectorLevelOneReport> {
    proj.require_hermitian()?;
    let residual = &proj.matmul(proj)? - proj;
    if !residual.operator_norm_at_most(tol) {
        return Err(Error::NotProjector { deviation: residual.operator_norm().as_f64() });
    }
    let qf = q.as_f64();
    if !(qf > 1.0) {
        return Err(Error::InvalidParameter { name: "q", value: qf, reason: "need q > 1" });
    }
    let pf = if q.is_infinite() { 1.0 } else { qf / (qf - 1.0) };
    let spec = fourier_transform(proj);
    let level_one_weight = spec.level_projection(1).total_weight().as_f64();
    let norm_1 = schatten_norm(proj, T::one())?.as_f64();
    let bound = if q.is_infinite() { f64::INFINITY } else { (qf - 1.0) * norm_1.powf(2.0 / pf) };
    Ok(ProjectorLevelOneReport { q: qf, p: pf, level_one_weight, norm_1, bound, margin: bound - level_one_weight })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub p: f64,
    pub q: f64,
    pub epsilon: f64,
    pub n: usize,
    pub restarts: usize,
    pub evaluations: u64,
    /// `max ‖T_ε f‖_q / ‖f‖_p` found.
    pub best_ratio: f64,
    pub argmax: Vec<(PauliString, f64)>,
    pub in_theorem_regime: bool,
    /// Ratio above `1 + 1e-6` inside the proven regime.
    pub violation: bool,
}

/// Ratio `‖T_ε f‖_q / ‖f‖_p` for real Pauli coefficients `x`.
fn ratio(n: usize, x: &[f64], p: f64, q: f64, epsilon: f64) -> f64 {
    let coeffs: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let spec = Spectrum::from_coefficients(n, &coeffs, true);
    let f = spec.to_operator();
    let denom = schatten_norm(&f, p).unwrap_or(0.0);
    if denom == 0.0 {
        return 0.0;
    }
    let noisy = apply_noise(&spec, epsilon).expect("checked range").to_operator();
    schatten_norm(&noisy, q).unwrap_or(0.0) / denom
}

/// Maximizes `‖T_ε f‖_q / ‖f‖_p` over Hermitian `f` by random restarts and
/// coordinate-perturbation hill climbing on the unit sphere of Pauli
/// coefficient vectors. Restart 0 starts from the identity.
pub fn search_violation<R: Rng + ?Sized>(
    p: f64,
    q: f64,
    epsilon: f64,
    n: usize,
    restarts: usize,
    rng: &mut R,
) -> Result<SearchReport> {
    if !(p >= 1.0 && p <= q) {
        return Err(Error::InvalidParameter { name: "p", value: p, reason: "need 1 <= p <= q" });
    }
    if !(-1.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon, reason: "must lie in [-1, 1]" });
    }
    if n == 0 || n > 4 {
        return Err(Error::InvalidParameter { name: "n", value: n as f64, reason: "search supports 1 <= n <= 4" });
    }
    let dim = 1usize << (2 * n);
    let mut best_ratio = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; dim];
    let mut evaluations = 0u64;
    let max_evals_per_restart = 200 * dim as u64;
    for restart in 0..restarts.max(1) {
        let mut x: Vec<f64> = if restart == 0 {
            let mut v = vec![0.0; dim];
            v[0] = 1.0;
            v
        } else {
            random_unit_vector::<f64, R>(dim, rng)
        };
        let mut current = ratio(n, &x, p, q, epsilon);
        evaluations += 1;
        let mut step = 0.5;
        let mut used = 1u64;
        while step > 1e-4 && used < max_evals_per_restart {
            let mut improved = false;
            for _ in 0..dim {
                let i = rng.random_range(0..dim);
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] += sign * step;
                    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if norm == 0.0 {
                        continue;
                    }
                    y.iter_mut().for_each(|v| *v /= norm);
                    let r = ratio(n, &y, p, q, epsilon);
                    used += 1;
                    if r > current + 1e-15 {
                        current = r;
                        x = y;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        evaluations += used - 1;
        if current > best_ratio {
            best_ratio = current;
            best_x = x;
        }
    }
    let in_regime = in_hypercontractive_regime(p, q, epsilon);
    let argmax = best_x
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > 1e-12)
        .map(|(i, &v)| (PauliString::from_index(n, i), v))
        .collect();
    Ok(SearchReport {
        p,
        q,
        epsilon,
        n,
        restarts: restarts.max(1),
        evaluations,
        best_ratio,
        argmax,
        in_theorem_regime: in_regime,
        violation: in_regime && best_ratio > 1.0 + 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli_matrix;
    use crate::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pm(s: &str) -> DenseOperator<f64> {
        pauli_matrix(&s.parse::<PauliString>().unwrap())
    }

    #[test]
    fn noise_examples() {
        let spec = fourier_transform(&pm("Z"));
        let half = apply_noise(&spec, 0.5).unwrap();
        assert_eq!(half.get_real(&"Z".parse().unwrap()), 0.5);
        let id = fourier_transform(&pm("II"));
        assert_eq!(apply_noise(&id, -0.9).unwrap(), id);
        assert!(apply_noise(&spec, 1.5).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = fourier_transform(&random_hermitian::<f64, _>(3, &mut rng));
        let twice = apply_noise(&apply_noise(&s, 0.5).unwrap(), 0.5).unwrap();
        assert!(twice.max_abs_diff(&apply_noise(&s, 0.25).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn depolarize_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_hermitian::<f64, _>(2, &mut rng);
        let full = depolarize(&f, 0.0).unwrap();
        let want = DenseOperator::identity(2).scale(f.normalized_trace());
        assert!(full.max_abs_diff(&want).unwrap() < 1e-14);
        assert!(depolarize(&f, 1.0).unwrap().max_abs_diff(&f).unwrap() < 1e-15);
        assert!(depolarize(&pm("X"), 0.5).unwrap().max_abs_diff(&pm("X").scale_real(0.5)).unwrap() < 1e-15);
        assert!(depolarize(&f, -0.5).is_err());
        let channel = fourier_transform(&depolarize(&f, -0.2).unwrap());
        let multiplier = apply_noise(&fourier_transform(&f), -0.2).unwrap();
        assert!(channel.max_abs_diff(&multiplier).unwrap() < 1e-12);
    }

    #[test]
    fn hypercontractivity_examples() {
        let r = hypercontractivity_check(&pm("II"), 2.0, 4.0, 1.0 / 3f64.sqrt()).unwrap();
        assert!(r.margin.abs() < 1e-12 && r.in_theorem_regime);
        // two-point inequality
        let f = DenseOperator::from_real_diagonal(1, &[1.3, -0.2]).unwrap();
        let r = hypercontractivity_check(&f, 1.5, 3.0, 0.5).unwrap();
        assert!(r.in_theorem_regime && r.margin >= -1e-12);
        let skew = DenseOperator::from_entries(1, vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0), Complex::new(0.0, 0.0)]).unwrap();
        assert!(hypercontractivity_check(&skew, 2.0, 4.0, 0.5).is_err());
    }

    #[test]
    fn low_degree_examples() {
        let r = low_degree_norm_check(&pm("Z"), 4.0).unwrap();
        assert_eq!(r.degree, 1);
        assert!((r.norm_q - 1.0).abs() < 1e-12 && (r.upper_margin - (3f64.sqrt() - 1.0)).abs() < 1e-12);
        let r = low_degree_norm_check(&pm("II"), 4.0).unwrap();
        assert!(r.upper_margin.abs() < 1e-12 && r.lower_margin.abs() < 1e-12);
        assert!(low_degree_norm_check(&pm("Z"), f64::INFINITY).is_err());
    }

    #[test]
    fn rank_examples() {
        let r = rank_bound_check(&pm("ZZZ")).unwrap();
        assert_eq!((r.rank, r.degree), (8, 3));
        let p = DenseOperator::from_real_diagonal(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let r = rank_bound_check(&p).unwrap();
        assert_eq!((r.rank, r.degree), (1, 3));
        assert!(r.bound < 1.0 && r.holds(0.0));
        let shifted = &pm("X") + &pm("I").scale_real(0.1);
        let r = rank_bound_check(&shifted).unwrap();
        assert_eq!((r.rank, r.degree), (2, 1));
        assert!((r.bound - 2f64.powf(1.0 - 2.0 * std::f64::consts::LOG2_E)).abs() < 1e-12);
        assert!(matches!(rank_bound_check(&DenseOperator::<f64>::zeros(2)), Err(Error::ZeroOperator)));
    }

    #[test]
    fn projector_level_one_examples() {
        let r = projector_level1_check(&DenseOperator::<f64>::zeros(1), 3.0, 1e-9).unwrap();
        assert_eq!(r.level_one_weight, 0.0);
        let p = DenseOperator::from_real_diagonal(1, &[1.0, 0.0]).unwrap();
        let r = projector_level1_check(&p, 3.0, 1e-9).unwrap();
        assert!((r.level_one_weight - 0.25).abs() < 1e-15);
        assert!((r.bound - 2.0 * 0.5f64.powf(4.0 / 3.0)).abs() < 1e-12);
        let r = projector_level1_check(&DenseOperator::<f64>::identity(2), 3.0, 1e-9).unwrap();
        assert_eq!(r.level_one_weight, 0.0);
        assert!(projector_level1_check(&pm("Z"), 3.0, 1e-9).is_err());
    }

    #[test]
    fn search_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = search_violation(2.0, 4.0, 1.0 / 3f64.sqrt(), 1, 5, &mut rng).unwrap();
        assert!(r.in_theorem_regime && !r.violation, "{}", r.best_ratio);
        let r = search_violation(1.5, 3.0, 0.0, 1, 3, &mut rng).unwrap();
        assert!(r.best_ratio <= 1.0 + 1e-12);
        let r = search_violation(2.0, 2.0, 1.0, 1, 2, &mut rng).unwrap();
        assert!((r.best_ratio - 1.0).abs() < 1e-9);
    }
}
