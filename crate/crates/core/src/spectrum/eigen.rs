//! Lowest eigenpairs of a symmetric tridiagonal matrix: Sturm bisection for
//! the values, shifted inverse iteration for the vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tridiagonal::{self, SymTridiagonal};

/// Absolute eigenvalue tolerance in matrix units.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;

const START_SEED: u64 = 0x7269_706c_6577_656c;
const INVERSE_STEPS: usize = 4;

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector in the Euclidean norm.
    pub vector: Vec<f64>,
    /// `‖Tv − λv‖∞`.
    pub residual: f64,
}

/// `index`-th smallest eigenvalue (0-based) by bisection on the Sturm count.
pub fn bisect_eigenvalue(t: &SymTridiagonal, index: usize) -> Result<f64> {
    if index >= t.len() {
        return Err(Error::EigensolverFailure(format!("requested eigenvalue {index} of a {}×{0} matrix", t.len())));
    }
    let (mut lo, mut hi) = t.gershgorin();
    let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    lo -= pad;
    hi += pad;
    for _ in 0..200 {
        if hi - lo <= 0.25 * EIGENVALUE_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let value = 0.5 * (lo + hi);
    if !value.is_finite() {
        return Err(Error::EigensolverFailure(format!("eigenvalue {index} did not bracket")));
    }
    Ok(value)
}

/// Eigenvector for a converged eigenvalue. The start vector is drawn from a
/// fixed-seed stream and the iterate is kept orthogonal to `previous`.
pub fn inverse_iteration(t: &SymTridiagonal, value: f64, previous: &[Vec<f64>], seed: u64) -> Result<EigenPair> {
    let n = t.len();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED ^ seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let diag: Vec<f64> = t.diag.iter().map(|d| d - value).collect();

    for _ in 0..INVERSE_STEPS {
        orthogonalize(&mut v, previous);
        normalize(&mut v)?;
        v = tridiagonal::solve_general(&t.off, &diag, &t.off, &v);
    }
    orthogonalize(&mut v, previous);
    normalize(&mut v)?;
    fix_sign(&mut v);

    let tv = t.matvec(&v);
    let residual = tv.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - value * b).abs()));
    let scale = t.diag.iter().chain(&t.off).fold(0.0f64, |m, x| m.max(x.abs()));
    if !(residual <= 1e-9 * scale.max(1.0)) {
        return Err(Error::EigensolverFailure(format!(
            "inverse iteration residual {residual:e} at eigenvalue {value}"
        )));
    }
    Ok(EigenPair { value, vector: v, residual })
}

/// The `k` smallest eigenpairs in increasing order.
pub fn lowest_eigenpairs(t: &SymTridiagonal, k: usize) -> Result<Vec<EigenPair>> {
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(k);
    for j in 0..k {
        let value = bisect_eigenvalue(t, j)?;
        let previous: Vec<Vec<f64>> = pairs.iter().map(|p| p.vector.clone()).collect();
        pairs.push(inverse_iteration(t, value, &previous, j as u64)?);
    }
    Ok(pairs)
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        for (x, y) in v.iter_mut().zip(b) {
            *x -= dot * y;
        }
    }
}

fn normalize(v: &mut [f64]) -> Result<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::EigensolverFailure(format!("degenerate iterate with norm {norm}")));
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    Ok(())
}

/// Sign convention: `Σ (i + 1)·v_i > 0`. Positive for nodeless vectors and
/// well defined for antisymmetric ones.
fn fix_sign(v: &mut [f64]) {
    let ramp: f64 = v.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).sum();
    if ramp < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}
