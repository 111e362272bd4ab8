//! Real symmetric tridiagonal matrices and the small set of dense-free
//! kernels the crate needs: products, Sturm counts, and pivoted solves.

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    /// Diagonal, length `n`.
    pub diag: Vec<f64>,
    /// Sub/super-diagonal, length `n − 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal must have length n - 1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            if q.abs() < tiny {
                q = -tiny;
            }
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Solves a general (not necessarily symmetric) tridiagonal system with
/// partial pivoting. `lower[i]` couples row `i+1` to column `i`, `upper[i]`
/// couples row `i` to column `i+1`. Exactly singular pivots are replaced by a
/// tiny perturbation, which is what inverse iteration wants.
pub fn solve_general(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(lower.len() + 1 == n && upper.len() + 1 == n && rhs.len() == n);
    if n == 1 {
        let d = if diag[0] == 0.0 { f64::EPSILON } else { diag[0] };
        return vec![rhs[0] / d];
    }
    let scale = diag.iter().chain(lower).chain(upper).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let guard = f64::EPSILON * scale;

    // Row i after elimination holds u0[i]·x_i + u1[i]·x_{i+1} + u2[i]·x_{i+2}.
    let mut u0 = diag.to_vec();
    let mut u1 = upper.to_vec();
    u1.push(0.0);
    let mut u2 = vec![0.0; n];
    let mut l = lower.to_vec();
    let mut b = rhs.to_vec();

    for i in 0..n - 1 {
        if l[i].abs() > u0[i].abs() {
            // swap rows i and i+1
            let next_upper = if i + 1 < n - 1 { u1[i + 1] } else { 0.0 };
            let (r0, r1, r2) = (l[i], u0[i + 1], next_upper);
            let (s0, s1, s2) = (u0[i], u1[i], u2[i]);
            u0[i] = r0;
            u1[i] = r1;
            u2[i] = r2;
            let m = s0 / r0;
            u0[i + 1] = s1 - m * r1;
            if i + 1 < n - 1 {
                u1[i + 1] = s2 - m * r2;
            }
            b.swap(i, i + 1);
            b[i + 1] -= m * b[i];
            l[i] = m;
        } else {
            if u0[i].abs() < guard {
                u0[i] = guard.copysign(if u0[i] == 0.0 { 1.0 } else { u0[i] });
            }
            let m = l[i] / u0[i];
            u0[i + 1] -= m * u1[i];
            b[i + 1] -= m * b[i];
            l[i] = m;
        }
    }
    if u0[n - 1].abs() < guard {
        u0[n - 1] = guard.copysign(if u0[n - 1] == 0.0 { 1.0 } else { u0[n - 1] });
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / u0[i];
    }
    x
}
