//! Closeness to dictators: exact degree-one case, 2-norm and ∞-norm FKN.

use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::build::{anticommuting_combination, balance, sign_function};
use crate::error::{Error, Result};
use crate::pauli::{fourier_transform, is_quantum_boolean, pauli_matrix, DenseOperator, Pauli, PauliString, Spectrum};
use crate::random::{random_hermitian, random_unit_vector};
use crate::scalar::Real;

const SINGLE: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// `Σ_{|s|>1} f̂_s²`.
pub fn high_level_weight<T: Real>(f: &DenseOperator<T>) -> Result<T> {
    f.require_hermitian()?;
    Ok(fourier_transform(f).high_level_weight())
}

fn single_qubit_triple<T: Real>(spec: &Spectrum<T>, j: usize) -> [T; 3] {
    let n = spec.n();
    SINGLE.map(|p| spec.get_real(&PauliString::single(n, j, p)))
}

/// Balances `f` when its trace exceeds `tol`. Returns the operator used and
/// whether an ancilla was added as qubit 0.
fn balanced_if_needed<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<(DenseOperator<T>, bool)> {
    if f.normalized_trace().norm() > tol {
        Ok((balance(f, tol)?, true))
    } else {
        Ok((f.clone(), false))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DictatorFit {
    /// Qubit of the dictator in the (possibly balanced) operator.
    pub qubit: usize,
    pub balanced: bool,
    /// Unit coefficient vector on `σ^1, σ^2, σ^3` of `qubit`.
    pub direction: [f64; 3],
    pub single_qubit_weights: Vec<f64>,
    /// `¼ ‖f - h‖₂²`
    pub distance: f64,
    #[serde(skip)]
    pub dictator: DenseOperator<f64>,
}

/// Keeps the single-qubit terms on the qubit with the most such weight and
/// rescales the coefficient triple to unit length.
pub fn nearest_dictator<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<DictatorFit> {
    if !is_quantum_boolean(f, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    let (g, balanced) = balanced_if_needed(f, tol)?;
    let spec = fourier_transform(&g);
    let triples: Vec<[T; 3]> = (0..g.n()).map(|j| single_qubit_triple(&spec, j)).collect();
    let weights: Vec<T> = triples.iter().map(|t| t.iter().map(|&c| c * c).sum()).collect();
    let (qubit, top) = weights
        .iter()
        .cloned()
        .enumerate()
        .fold((0, T::zero()), |best, (j, w)| if w > best.1 { (j, w) } else { best });
    if top <= Spectrum::<T>::sparsity_threshold() {
        return Err(Error::NoDictator);
    }
    let norm = top.sqrt();
    let dir = triples[qubit].map(|c| c / norm);
    let mut h = DenseOperator::zeros(g.n());
    for (k, p) in SINGLE.into_iter().enumerate() {
        h = &h + &pauli_matrix::<T>(&PauliString::single(g.n(), qubit, p)).scale_real(dir[k]);
    }
    let h = h.symmetrized();
    let diff = &g - &h;
    let fro = diff.frobenius_norm();
    let distance = (fro * fro / T::from_usize_lossy(g.dim())).as_f64() / 4.0;
    Ok(DictatorFit {
        qubit,
        balanced,
        direction: dir.map(Real::as_f64),
        single_qubit_weights: weights.into_iter().map(Real::as_f64).collect(),
        distance,
        dictator: to_f64(&h),
    })
}

fn to_f64<T: Real>(f: &DenseOperator<T>) -> DenseOperator<f64> {
    let data = f.entries().iter().map(|z| Complex::new(z.re.as_f64(), z.im.as_f64())).collect();
    DenseOperator::from_entries(f.n(), data).expect("same size")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    Constant { sign: i8 },
    Dictator { qubit: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactFknReport {
    pub classification: Classification,
    pub balanced: bool,
    pub high_level_weight: f64,
    pub level_zero_weight: f64,
    /// `λ_i = √(f̂_{i:1}² + f̂_{i:2}² + f̂_{i:3}²)`
    pub lambdas: Vec<f64>,
    pub lambda_sum: f64,
}

/// A quantum boolean function of degree at most one is a dictator or a
/// constant.
pub fn exact_fkn_check<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<ExactFknReport> {
    let id = DenseOperator::identity(f.n());
    for sign in [1i8, -1] {
        let c = id.scale_real(T::lit(sign as f64));
        if f.max_abs_diff(&c)? <= tol {
            return Ok(ExactFknReport {
                classification: Classification::Constant { sign },
                balanced: false,
                high_level_weight: 0.0,
                level_zero_weight: 1.0,
                lambdas: vec![0.0; f.n()],
                lambda_sum: 0.0,
            });
        }
    }
    let spec0 = fourier_transform(f);
    if !is_quantum_boolean(f, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    let (g, balanced) = balanced_if_needed(f, tol)?;
    let spec = if balanced { fourier_transform(&g) } else { spec0 };
    let high = spec.high_level_weight();
    let level_zero = spec.identity_coefficient().norm_sqr();
    if high > tol || level_zero > tol {
        return Err(Error::Precondition(format!(
            "weight above level one {:e} and on level zero {:e} after balancing",
            high.as_f64(),
            level_zero.as_f64()
        )));
    }
    let lambdas: Vec<f64> = (0..g.n())
        .map(|j| single_qubit_triple(&spec, j).iter().map(|&c| c * c).sum::<T>().sqrt().as_f64())
        .collect();
    let lambda_sum: f64 = lambdas.iter().sum();
    let t = tol.as_f64();
    let nonzero: Vec<usize> = (0..lambdas.len()).filter(|&j| lambdas[j] > t).collect();
    if (lambda_sum - 1.0).abs() > t.sqrt().max(t) || nonzero.len() != 1 {
        return Err(Error::Precondition(format!(
            "lambda sum {lambda_sum} over {} nonzero blocks",
            nonzero.len()
        )));
    }
    Ok(ExactFknReport {
        classification: Classification::Dictator { qubit: nonzero[0] },
        balanced,
        high_level_weight: high.as_f64(),
        level_zero_weight: level_zero.as_f64(),
        lambdas,
        lambda_sum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InftyFknReport {
    pub epsilon: f64,
    /// Measured `‖f - g‖_∞`.
    pub f_g_distance: f64,
    /// `‖f - sgn(g)‖_∞`
    pub f_h_distance: f64,
    pub bound: f64,
    pub holds: bool,
    /// `max_j |λ_j↓(f) - λ_j↓(g)|`
    pub weyl_deviation: f64,
    pub weyl_holds: bool,
    #[serde(skip)]
    pub dictator: DenseOperator<f64>,
}

/// With `g = g^{=1}` and `‖f - g‖_∞ ≤ ε < 1/2`, `h = sgn(g)` satisfies
/// `‖f - h‖_∞ ≤ 2ε`.
pub fn fkn_infty_check<T: Real>(f: &DenseOperator<T>, g: &DenseOperator<T>, epsilon: T, tol: T) -> Result<InftyFknReport> {
    f.check_same_size(g)?;
    if !(epsilon < T::lit(0.5)) || epsilon < T::zero() {
        return Err(Error::InvalidParameter { name: "epsilon", value: epsilon.as_f64(), reason: "need 0 <= epsilon < 1/2" });
    }
    if !is_quantum_boolean(f, tol) {
        return Err(Error::NotQuantumBoolean);
    }
    g.require_hermitian()?;
    let spec = fourier_transform(g);
    let off_level = spec.total_weight() - spec.level_projection(1).total_weight();
    if off_level > tol {
        return Err(Error::NotDegreeOne { off_level_weight: off_level.as_f64() });
    }
    let fg = (f - g).operator_norm();
    if fg > epsilon + tol {
        return Err(Error::Precondition(format!("||f - g||_inf = {} exceeds epsilon = {}", fg.as_f64(), epsilon.as_f64())));
    }
    let h = sign_function(g)?;
    let fh = (f - &h).operator_norm();
    let mut lf = f.eigenvalues()?;
    let mut lg = g.eigenvalues()?;
    lf.reverse();
    lg.reverse();
    let weyl = lf.iter().zip(&lg).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max);
    let bound = T::lit(2.0) * epsilon;
    Ok(InftyFknReport {
        epsilon: epsilon.as_f64(),
        f_g_distance: fg.as_f64(),
        f_h_distance: fh.as_f64(),
        bound: bound.as_f64(),
        holds: fh <= bound + tol,
        weyl_deviation: weyl.as_f64(),
        weyl_holds: weyl <= fg + tol,
        dictator: to_f64(&h),
    })
}

/// A valid ∞-FKN instance `(f, g, ε)`: `h₀` a random dictator,
/// `g = (1-a)h₀` plus small level-one terms on other qubits, and `f` a
/// small unitary rotation of `h₀`. `ε` is the measured `‖f - g‖_∞`.
pub fn random_infty_fkn_instance<T: Real, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<(DenseOperator<T>, DenseOperator<T>, T)> {
    assert!(n >= 1);
    let qubit = rng.random_range(0..n);
    let single = |j: usize, v: &[T]| {
        let mut acc = DenseOperator::zeros(n);
        for (k, p) in SINGLE.into_iter().enumerate() {
            acc = &acc + &pauli_matrix::<T>(&PauliString::single(n, j, p)).scale_real(v[k]);
        }
        acc
    };
    let h0 = single(qubit, &random_unit_vector::<T, R>(3, rng)).symmetrized();
    let shrink = T::lit(rng.random_range(0.0..0.1));
    let mut g = h0.scale_real(T::one() - shrink);
    for j in (0..n).filter(|&j| j != qubit) {
        let scale = T::lit(rng.random_range(0.0..0.1 / n as f64));
        g = &g + &single(j, &random_unit_vector::<T, R>(3, rng)).scale_real(scale);
    }
    let g = g.symmetrized();
    // W = exp(iθK) with ‖K‖_∞ = 1
    let k = random_hermitian::<T, R>(n, rng);
    let k = k.scale_real(T::one() / k.operator_norm());
    let theta = T::lit(rng.random_range(0.0..0.05));
    let eig = k.eigh()?;
    let phases: Vec<Complex<T>> = eig.values.iter().map(|&l| Complex::from_polar(T::one(), theta * l)).collect();
    let w = eig.reconstruct_complex(&phases);
    let f = w.matmul(&h0)?.matmul(&w.adjoint())?.symmetrized();
    let eps = (&f - &g).operator_norm();
    Ok((f, g, eps))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deg2Report {
    pub degree: usize,
    pub squared_norm: f64,
    pub thresholds_checked: usize,
    /// Smallest `δ²(1-p)/(1-9√p) - ‖q‖₂²` over the checked thresholds.
    pub min_margin: Option<f64>,
    pub holds: bool,
}

/// `‖q‖₂² ≤ δ²(1-p)/(1-9√p)` for degree-2 Hermitian `q`, where
/// `p = Pr[|λ(q)| > δ]`. Checked at every `δ` equal to an absolute
/// eigenvalue of `q` with `9√p < 1`.
pub fn deg2_lemma_check<T: Real>(q: &DenseOperator<T>) -> Result<Deg2Report> {
    q.require_hermitian()?;
    let degree = fourier_transform(q).degree();
    if degree > 2 {
        return Err(Error::Precondition(format!("degree {degree} exceeds 2")));
    }
    let mut abs: Vec<f64> = q.eigenvalues()?.into_iter().map(|l| l.as_f64().abs()).collect();
    abs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let dim = abs.len() as f64;
    let squared_norm = abs.iter().map(|l| l * l).sum::<f64>() / dim;
    let mut min_margin: Option<f64> = None;
    let mut checked = 0;
    for (i, &delta) in abs.iter().enumerate() {
        let above = abs[i + 1..].iter().filter(|&&l| l > delta).count() as f64;
        let p = above / dim;
        let denom = 1.0 - 9.0 * p.sqrt();
        if denom <= 0.0 {
            continue;
        }
        checked += 1;
        let margin = delta * delta * (1.0 - p) / denom - squared_norm;
        min_margin = Some(min_margin.map_or(margin, |m: f64| m.min(margin)));
    }
    let holds = min_margin.is_none_or(|m| m >= -1e-10 * squared_norm.max(1.0));
    Ok(Deg2Report { degree, squared_norm, thresholds_checked: checked, min_margin, holds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoNormFknReport {
    pub high_level_weight: f64,
    pub fit: DictatorFit,
    /// `distance / high_level_weight`
    pub ratio: Option<f64>,
    /// Diagnostic on `q = l² - (1 - ε)I` with `l = f^{=1}`.
    pub deg2: Deg2Report,
}

pub fn two_norm_fkn_report<T: Real>(f: &DenseOperator<T>, tol: T) -> Result<TwoNormFknReport> {
    let fit = nearest_dictator(f, tol)?;
    let g = if fit.balanced { balance(f, tol)? } else { f.clone() };
    let spec = fourier_transform(&g);
    let high = spec.high_level_weight();
    let l = spec.level_projection(1).to_operator();
    let q = &l.matmul(&l)?.symmetrized() - &DenseOperator::identity(g.n()).scale_real(T::one() - high);
    let deg2 = deg2_lemma_check(&q.symmetrized())?;
    let high = high.as_f64();
    let ratio = (high > 1e-14).then(|| fit.distance / high);
    Ok(TwoNormFknReport { high_level_weight: high, fit, ratio, deg2 })
}

/// `cos θ σ³⊗I + sin θ σ¹⊗σ¹`.
pub fn theta_family<T: Real>(theta: T) -> Result<DenseOperator<T>> {
    let z = pauli_matrix::<T>(&"ZI".parse().expect("valid"));
    let x = pauli_matrix::<T>(&"XX".parse().expect("valid"));
    anticommuting_combination(&[theta.cos(), theta.sin()], &[z, x], T::tol_floor(1e-9, 1e3))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaPoint {
    pub theta: f64,
    pub high_level_weight: f64,
    pub distance: f64,
    pub ratio: f64,
    pub deg2_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaSweep {
    pub points: Vec<ThetaPoint>,
    /// Largest observed `distance / high_level_weight`.
    pub constant: f64,
}

pub fn theta_sweep(thetas: &[f64]) -> Result<ThetaSweep> {
    let mut points = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let f = theta_family::<f64>(theta)?;
        let r = two_norm_fkn_report(&f, 1e-9)?;
        points.push(ThetaPoint {
            theta,
            high_level_weight: r.high_level_weight,
            distance: r.fit.distance,
            ratio: r.ratio.unwrap_or(0.0),
            deg2_holds: r.deg2.holds,
        });
    }
    let constant = points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(ThetaSweep { points, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pm(s: &str) -> DenseOperator<f64> {
        pauli_matrix(&s.parse::<PauliString>().unwrap())
    }

    #[test]
    fn high_level_examples() {
        assert_eq!(high_level_weight(&pm("ZI")).unwrap(), 0.0);
        let small = anticommuting_combination(&[0.6, 0.8], &[pm("XX"), pm("YI")], 1e-9).unwrap();
        assert!((high_level_weight(&small).unwrap() - 0.36).abs() < 1e-12);
        assert!((high_level_weight(&pm("ZZ")).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_dictator_examples() {
        let r = nearest_dictator(&pm("ZI"), 1e-9).unwrap();
        assert_eq!(r.qubit, 0);
        assert!(r.distance < 1e-15 && r.dictator.max_abs_diff(&pm("ZI")).unwrap() < 1e-15);
        let theta = 0.2f64;
        let r = nearest_dictator(&theta_family(theta).unwrap(), 1e-9).unwrap();
        assert_eq!(r.qubit, 0);
        assert!((r.distance - (1.0 - theta.cos()) / 2.0).abs() < 1e-12);
        assert!(is_quantum_boolean(&r.dictator, 1e-9));
        assert!(matches!(nearest_dictator(&pm("ZZ"), 1e-9), Err(Error::NoDictator)));
    }

    #[test]
    fn exact_fkn_examples() {
        let r = exact_fkn_check(&pm("X"), 1e-9).unwrap();
        assert_eq!(r.classification, Classification::Dictator { qubit: 0 });
        let f = &pm("X").scale_real(0.6) + &pm("Z").scale_real(0.8);
        let r = exact_fkn_check(&f, 1e-9).unwrap();
        assert!((r.lambdas[0] - 1.0).abs() < 1e-12);
        let half = &pm("ZI").scale_real(0.5) + &pm("IZ").scale_real(0.5);
        assert!(matches!(exact_fkn_check(&half, 1e-9), Err(Error::NotQuantumBoolean)));
        let r = exact_fkn_check(&pm("II").scale_real(-1.0), 1e-9).unwrap();
        assert_eq!(r.classification, Classification::Constant { sign: -1 });
        assert!(matches!(exact_fkn_check(&pm("ZZ"), 1e-9), Err(Error::Precondition(_))));
        assert_eq!(exact_fkn_check(&pm("IYI"), 1e-9).unwrap().classification, Classification::Dictator { qubit: 1 });
    }

    #[test]
    fn infty_fkn_examples() {
        let r = fkn_infty_check(&pm("Z"), &pm("Z").scale_real(0.99), 0.01, 1e-9).unwrap();
        assert!(r.f_h_distance < 1e-12 && r.holds && r.weyl_holds);
        let r = fkn_infty_check(&pm("IX"), &pm("IX").scale_real(0.7), 0.3, 1e-9).unwrap();
        assert!(r.f_h_distance < 1e-12);
        assert!(matches!(fkn_infty_check(&pm("ZZ"), &pm("ZZ"), 0.1, 1e-9), Err(Error::NotDegreeOne { .. })));
        assert!(fkn_infty_check(&pm("Z"), &pm("Z"), 0.5, 1e-9).is_err());
        assert!(matches!(fkn_infty_check(&pm("Z"), &pm("X"), 0.1, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn random_infty_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..4 {
            let (f, g, eps) = random_infty_fkn_instance::<f64, _>(n, &mut rng).unwrap();
            assert!(eps < 0.5);
            let r = fkn_infty_check(&f, &g, eps, 1e-9).unwrap();
            assert!(r.holds && r.weyl_holds, "{r:?}");
        }
    }

    #[test]
    fn theta_sweep_ratio_is_bounded() {
        let thetas: Vec<f64> = (1..=10).map(|k| 0.05 * k as f64).collect();
        let s = theta_sweep(&thetas).unwrap();
        assert!(s.constant < 0.3 && s.constant > 0.25, "{}", s.constant);
        assert!(s.points.iter().all(|p| p.deg2_holds));
    }
}
