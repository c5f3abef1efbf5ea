//! Gegenbauer (ultraspherical) polynomials `G(n, a, x)`, their zeros, and
//! the bound-state eigenvectors of the chain built from them.

use crate::chain::check_levels;
use crate::error::{Error, Result};
use crate::numerics::{eigvals_symmetric, norm2, SymmetricMatrix};

/// The Gegenbauer parameter `a`, guaranteed strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct GegenbauerParam(f64);

impl GegenbauerParam {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Self(a))
        } else {
            Err(Error::NonPositiveParam(a))
        }
    }

    #[inline]
    pub fn a(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for GegenbauerParam {
    type Error = Error;

    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

/// `G(n, a, x)` by the forward three-term recurrence
/// `n·G(n) = 2(n+a−1)·x·G(n−1) − (n+2a−2)·G(n−2)`.
pub fn gegenbauer_eval(n: usize, p: GegenbauerParam, x: f64) -> f64 {
    eval_with_derivative(n, p, x).0
}

/// `G(0..=n, a, x)`; the last element is `G(n, a, x)`.
pub fn gegenbauer_sequence(n: usize, p: GegenbauerParam, x: f64) -> Vec<f64> {
    let a = p.a();
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(2.0 * a * x);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * (kf + a - 1.0) * x * out[k - 1] - (kf + 2.0 * a - 2.0) * out[k - 2]) / kf;
        out.push(next);
    }
    out
}

/// `(G(n, a, x), ∂ₓG(n, a, x))`, both by recurrence.
pub fn eval_with_derivative(n: usize, p: GegenbauerParam, x: f64) -> (f64, f64) {
    let a = p.a();
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut g0, mut d0) = (1.0, 0.0);
    let (mut g1, mut d1) = (2.0 * a * x, 2.0 * a);
    for k in 2..=n {
        let kf = k as f64;
        let c1 = 2.0 * (kf + a - 1.0);
        let c2 = kf + 2.0 * a - 2.0;
        let g2 = (c1 * x * g1 - c2 * g0) / kf;
        let d2 = (c1 * (g1 + x * d1) - c2 * d0) / kf;
        (g0, g1) = (g1, g2);
        (d0, d1) = (d1, d2);
    }
    (g1, d1)
}

/// Energies `E_n` (zeros of `G(N, a, ·)`) and the eigenvectors whose
/// components are `G(k, a, E_n)` for `k = 0..N−1`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub n_levels: usize,
    pub param: GegenbauerParam,
    /// Ascending.
    pub energies: Vec<f64>,
    /// `eigenvectors[n][k] = G(k, a, energies[n])`, not normalized.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectralData {
    /// Unit-norm copy of the n-th eigenvector.
    pub fn normalized_eigenvector(&self, n: usize) -> Vec<f64> {
        let v = &self.eigenvectors[n];
        let norm = norm2(v);
        v.iter().map(|x| x / norm).collect()
    }
}

/// Symmetric Jacobi matrix of the recurrence: zero diagonal and
/// off-diagonal `√(k(k+2a−1) / (4(k+a)(k+a−1)))`, `k = 1..N−1`. Its
/// eigenvalues are the zeros of `G(N, a, ·)`.
pub fn jacobi_matrix(n_levels: usize, p: GegenbauerParam) -> Result<SymmetricMatrix> {
    check_levels(n_levels, 1, "N >= 1")?;
    let a = p.a();
    let off: Vec<f64> = (1..n_levels)
        .map(|k| {
            let k = k as f64;
            (k * (k + 2.0 * a - 1.0) / (4.0 * (k + a) * (k + a - 1.0))).sqrt()
        })
        .collect();
    Ok(SymmetricMatrix::tridiagonal(&vec![0.0; n_levels], &off))
}

/// Zeros of `G(N, a, ·)` as eigenvalues of [`jacobi_matrix`], each polished
/// by one Newton step on the recurrence.
pub fn gegenbauer_zeros(n_levels: usize, p: GegenbauerParam) -> Result<SpectralData> {
    let mut energies = eigvals_symmetric(&jacobi_matrix(n_levels, p)?)?;
    let scale = energies.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    for e in energies.iter_mut() {
        let (g, dg) = eval_with_derivative(n_levels, p, *e);
        if dg != 0.0 && dg.is_finite() {
            let step = g / dg;
            if step.abs() <= 1e-6 * scale {
                *e -= step;
            }
        }
    }
    // The recurrence is odd/even in x, so the spectrum is symmetric about
    // zero; enforce it exactly and pin the middle zero for odd N.
    let n = energies.len();
    for i in 0..n / 2 {
        let m = 0.5 * (energies[n - 1 - i] - energies[i]);
        energies[i] = -m;
        energies[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        energies[n / 2] = 0.0;
    }

    let eigenvectors = energies
        .iter()
        .map(|&e| {
            let mut seq = gegenbauer_sequence(n_levels - 1, p, e);
            seq.truncate(n_levels);
            seq
        })
        .collect();
    Ok(SpectralData {
        n_levels,
        param: p,
        energies,
        eigenvectors,
    })
}
