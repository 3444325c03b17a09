use crate::error::{Error, Result};
use crate::pauli::DenseOperator;
use crate::scalar::Real;

fn check_p<T: Real>(p: T) -> Result<()> {
    if p.is_nan() || p < T::one() {
        return Err(Error::InvalidParameter { name: "p", value: p.as_f64(), reason: "Schatten index must be >= 1" });
    }
    Ok(())
}

/// Normalized Schatten norm `((1/d) Σ s_j^p)^{1/p}` from precomputed
/// singular values; `p = ∞` gives the largest one.
pub fn schatten_from_singular<T: Real>(singular: &[T], p: T) -> Result<T> {
    check_p(p)?;
    let top = singular.iter().copied().fold(T::zero(), T::max);
    if p.is_infinite() || top == T::zero() {
        return Ok(top);
    }
    // scale by the largest value so large p cannot overflow
    let d = T::from_usize_lossy(singular.len());
    let sum: T = singular.iter().map(|&s| (s / top).powf(p)).sum();
    Ok(top * (sum / d).powf(p.recip()))
}

/// Normalized Schatten `p`-norm, `p ∈ [1, ∞]`.
pub fn schatten_norm<T: Real>(f: &DenseOperator<T>, p: T) -> Result<T> {
    check_p(p)?;
    schatten_from_singular(&f.singular_values(), p)
}

/// Several norms from one singular value decomposition.
pub fn schatten_norms<T: Real>(f: &DenseOperator<T>, ps: &[T]) -> Result<Vec<T>> {
    let sv = f.singular_values();
    ps.iter().map(|&p| schatten_from_singular(&sv, p)).collect()
}
