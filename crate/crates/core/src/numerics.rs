//! Dense numerical backbone: symmetric eigensolvers, inertia counting,
//! singular value decomposition, nullspaces and least squares.
//!
//! Everything here works in binary64 on small dense matrices (n up to a few
//! hundred). The metrics of the chain model decay factorially along the
//! diagonal, so in practice dimensions beyond about 60 are not trustworthy in
//! double precision regardless of the solver.

use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance used for rank and inertia decisions when the caller
/// does not supply one.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const SVD_MAX_SWEEPS: usize = 100;

/// Real symmetric matrix holding only its lower triangle.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    packed: Vec<f64>,
}

#[inline]
fn packed_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "symmetric matrix dimension must be positive");
        Self {
            n,
            packed: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from `f(i, j)`, evaluated only for `i >= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.packed[packed_index(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        let mut m = Self::from_diagonal(diag);
        for (i, &e) in off.iter().enumerate() {
            m.set(i + 1, i, e);
        }
        m
    }

    /// Symmetrizes a square row-major matrix by reading its lower triangle.
    pub fn from_lower(dense: &DenseMatrix) -> Self {
        assert_eq!(dense.rows(), dense.cols(), "matrix must be square");
        Self::from_fn(dense.rows(), |i, j| dense.get(i, j))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.packed[packed_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.packed[packed_index(i, j)] = value;
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &SymmetricMatrix, scale: f64) {
        assert_eq!(self.n, other.n, "dimension mismatch");
        for (x, y) in self.packed.iter_mut().zip(&other.packed) {
            *x += scale * y;
        }
    }

    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            n: self.n,
            packed: self.packed.iter().map(|x| x * scale).collect(),
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.packed.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.packed.iter().all(|x| x.is_finite())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `xᵀ · self · y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.mul_vec(y))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Nonzero entries of the lower triangle as `(row, col, value)`, row-major.
    pub fn lower_nonzeros(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymmetricMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| format!("{:>12.6e}", self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// General real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &DenseMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn norm_inf_vec(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Eigenpairs of a symmetric matrix, ascending by eigenvalue.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    pub fn pairs(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.values
            .iter()
            .copied()
            .zip(self.vectors.iter().map(Vec::as_slice))
    }
}

/// Cyclic Jacobi eigensolver for dense symmetric matrices.
pub fn eig_symmetric(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::NonFinite("eig_symmetric input"));
    }
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let negligible = f64::EPSILON * f64::EPSILON * m.max_abs();
    let mut converged = n == 1;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p][p];
                let aqq = a[q][q];
                // Relative-accuracy threshold: negligible against both diagonal entries.
                if apq.abs() <= f64::EPSILON * 0.5 * (app.abs() * aqq.abs()).sqrt()
                    || apq.abs() <= negligible
                {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = arp - s * (arq + tau * arp);
                        a[r][q] = arq + s * (arp - tau * arq);
                        a[p][r] = a[r][p];
                        a[q][r] = a[r][q];
                    }
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = vp - s * (vq + tau * vp);
                    row[q] = vq + s * (vp - tau * vq);
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "cyclic Jacobi",
            iterations: sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&k| a[k][k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|r| v[r][k]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

pub fn eigvals_symmetric(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    eig_symmetric(m).map(|e| e.values)
}

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly below `x`, by the Sturm sequence of LDLᵀ pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let scale = diag
        .iter()
        .chain(off)
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(x.abs())
        .max(f64::MIN_POSITIVE);
    let guard = f64::EPSILON * scale;
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = diag[i] - x - coupling;
        if q == 0.0 {
            q = -guard;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a symmetric tridiagonal matrix by Sturm bisection,
/// ascending, each to absolute accuracy `abs_tol`.
pub fn tridiagonal_eigenvalues_bisection(diag: &[f64], off: &[f64], abs_tol: f64) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n, "off-diagonal length mismatch");
    // Gershgorin enclosure.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = (hi - lo).abs().max(1.0) * 1e-12;
    lo -= pad;
    hi += pad;

    (0..n)
        .map(|k| {
            // k-th eigenvalue: smallest x with count(x) > k.
            let (mut a, mut b) = (lo, hi);
            while b - a > abs_tol {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Eigenvalue counts of a symmetric matrix relative to an absolute threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Inertia {
    /// Eigenvalues below `-tol`.
    pub negatives: usize,
    /// Eigenvalues with `|λ| <= tol`.
    pub zeros: usize,
    /// Eigenvalues above `tol`.
    pub positives: usize,
    pub tol: f64,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.negatives + self.zeros + self.positives
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negatives == 0 && self.zeros == 0
    }

    /// Same counts, ignoring the threshold the counts were taken at.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.negatives, self.zeros, self.positives)
    }

    fn from_eigenvalues(values: &[f64], tol: f64) -> Self {
        let negatives = values.iter().filter(|&&x| x < -tol).count();
        let positives = values.iter().filter(|&&x| x > tol).count();
        Self {
            negatives,
            zeros: values.len() - negatives - positives,
            positives,
            tol,
        }
    }
}

/// Inertia of `m` at absolute threshold `tol`.
///
/// Uses Bunch–Kaufman LDLᵀ factorizations of the shifted matrices `m + tol·I`
/// and `tol·I − m`, whose negative pivot counts are exactly the numbers of
/// eigenvalues below `−tol` and above `tol` (Sylvester's law of inertia).
/// When a factorization meets a pivot too small to trust its sign, the counts
/// come from a full eigendecomposition instead.
pub fn inertia_of(m: &SymmetricMatrix, tol: f64) -> Result<Inertia> {
    assert!(tol >= 0.0, "inertia threshold must be non-negative");
    if !m.is_finite() {
        return Err(Error::NonFinite("inertia_of input"));
    }
    let n = m.dim();
    let mut below = m.clone();
    let mut above = m.scaled(-1.0);
    for i in 0..n {
        below.set(i, i, below.get(i, i) + tol);
        above.set(i, i, above.get(i, i) + tol);
    }
    match (ldlt_negative_pivots(&below), ldlt_negative_pivots(&above)) {
        (Some(negatives), Some(positives)) if negatives + positives <= n => Ok(Inertia {
            negatives,
            zeros: n - negatives - positives,
            positives,
            tol,
        }),
        _ => inertia_by_eigen(m, tol),
    }
}

/// Inertia by sign counting over the eigenvalues of `m`.
pub fn inertia_by_eigen(m: &SymmetricMatrix, tol: f64) -> Result<Inertia> {
    let values = eigvals_symmetric(m)?;
    Ok(Inertia::from_eigenvalues(&values, tol))
}

/// Number of negative eigenvalues of `m` read off a Bunch–Kaufman
/// factorization `PmPᵀ = LDLᵀ`. `None` on breakdown (a pivot block that is
/// numerically singular).
pub fn ldlt_negative_pivots(m: &SymmetricMatrix) -> Option<usize> {
    let n = m.dim();
    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let breakdown = f64::EPSILON * (n as f64) * m.norm_inf().max(f64::MIN_POSITIVE) * 8.0;
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).collect())
        .collect();

    let swap = |a: &mut Vec<Vec<f64>>, i: usize, j: usize| {
        if i != j {
            a.swap(i, j);
            for row in a.iter_mut() {
                row.swap(i, j);
            }
        }
    };

    let mut negatives = 0;
    let mut k = 0;
    while k < n {
        let (mut r, mut lambda) = (k, 0.0);
        for i in k + 1..n {
            if a[i][k].abs() > lambda {
                lambda = a[i][k].abs();
                r = i;
            }
        }
        let akk = a[k][k].abs();
        let block = if akk >= alpha * lambda {
            1
        } else {
            let sigma = (k..n)
                .filter(|&j| j != r)
                .fold(0.0_f64, |s, j| s.max(a[r][j].abs()));
            if akk * sigma >= alpha * lambda * lambda {
                1
            } else if a[r][r].abs() >= alpha * sigma {
                swap(&mut a, k, r);
                1
            } else {
                swap(&mut a, k + 1, r);
                2
            }
        };

        if block == 1 {
            let d = a[k][k];
            if d.abs() <= breakdown {
                return None;
            }
            if d < 0.0 {
                negatives += 1;
            }
            for i in k + 1..n {
                let l = a[i][k] / d;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..=i {
                    a[i][j] -= l * a[j][k];
                    a[j][i] = a[i][j];
                }
            }
            k += 1;
        } else {
            let (d11, d21, d22) = (a[k][k], a[k + 1][k], a[k + 1][k + 1]);
            let det = d11 * d22 - d21 * d21;
            if det.abs() <= breakdown * breakdown.max(d21.abs()) {
                return None;
            }
            if det < 0.0 {
                negatives += 1;
            } else if d11 + d22 < 0.0 {
                negatives += 2;
            }
            for i in k + 2..n {
                let (x1, x2) = (a[i][k], a[i][k + 1]);
                let l1 = (d22 * x1 - d21 * x2) / det;
                let l2 = (d11 * x2 - d21 * x1) / det;
                for j in k + 2..=i {
                    a[i][j] -= l1 * a[j][k] + l2 * a[j][k + 1];
                    a[j][i] = a[i][j];
                }
            }
            k += 2;
        }
    }
    Some(negatives)
}

/// Thin singular value decomposition `A = U·diag(σ)·Vᵀ` by one-sided
/// (Hestenes) Jacobi. Singular values are descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Right singular vectors, `v[k]` pairs with `singular_values[k]`.
    pub v: Vec<Vec<f64>>,
    /// Left singular vectors scaled by their singular value (`A·v[k]`).
    pub av: Vec<Vec<f64>>,
}

pub fn svd(a: &DenseMatrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::NonFinite("svd input"));
    }
    let (m, n) = (a.rows(), a.cols());
    // Column-major working copy of A; columns are orthogonalized in place.
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| a.get(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    // Columns this small are numerically zero; rotating them only churns roundoff.
    let frob2: f64 = cols.iter().map(|c| dot(c, c)).sum();
    let floor = f64::EPSILON * f64::EPSILON * frob2;
    let rel = (m.max(1) as f64).sqrt() * f64::EPSILON;
    let mut sweeps = 0;
    loop {
        if sweeps >= SVD_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "one-sided Jacobi SVD",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0
                    || alpha <= floor
                    || beta <= floor
                    || gamma.abs() <= rel * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cp, cq) = two_mut(&mut cols, p, q);
                rotate(cp, cq, c, s);
                let (vp, vq) = two_mut(&mut v, p, q);
                rotate(vp, vq, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));
    Ok(Svd {
        singular_values: order.iter().map(|&k| sigma[k]).collect(),
        v: order.iter().map(|&k| v[k].clone()).collect(),
        av: order.iter().map(|&k| cols[k].clone()).collect(),
    })
}

fn two_mut<T>(xs: &mut [T], p: usize, q: usize) -> (&mut T, &mut T) {
    debug_assert!(p < q);
    let (lo, hi) = xs.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let (a, b) = (*xi, *yi);
        *xi = c * a - s * b;
        *yi = s * a + c * b;
    }
}

/// Orthonormal basis of the numerical nullspace
/// `{x : ‖A·x‖ ≤ tol·‖A‖₂·‖x‖}`.
///
/// The basis is canonical for the subspace: it is brought to reduced row
/// echelon form (pivot columns left to right, pivot entries positive) and
/// then orthonormalized in pivot order, so equal subspaces give equal output
/// regardless of how the SVD happened to rotate them.
pub fn nullspace(a: &DenseMatrix, tol: f64) -> Result<Vec<Vec<f64>>> {
    let n = a.cols();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dec = svd(a)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let threshold = tol * smax;
    // Rows beyond `a.rows()` contribute nothing: for a wide matrix the
    // trailing right singular vectors have zero singular value.
    let basis: Vec<Vec<f64>> = dec
        .singular_values
        .iter()
        .zip(&dec.v)
        .filter(|(s, _)| **s <= threshold)
        .map(|(_, v)| v.clone())
        .collect();
    Ok(canonical_basis(basis))
}

fn canonical_basis(mut rows: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let k = rows.len();
    if k == 0 {
        return rows;
    }
    let n = rows[0].len();
    // Pivot acceptance relative to the (unit-norm) basis.
    let small = 1e-9;
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == k {
            break;
        }
        let (best, mag) =
            (pivot_row..k)
                .map(|r| (r, rows[r][col].abs()))
                .fold(
                    (pivot_row, -1.0),
                    |acc, x| if x.1 > acc.1 { x } else { acc },
                );
        if mag <= small {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        for x in rows[pivot_row].iter_mut() {
            *x /= p;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row {
                let f = row[col];
                if f != 0.0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    gram_schmidt(rows)
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
fn gram_schmidt(vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for _ in 0..2 {
            for q in &out {
                let c = dot(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = norm2(&v);
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            out.push(v);
        }
    }
    out
}

/// Minimum-norm least-squares solution of `A·x ≈ b`, truncating singular
/// values below `rel_tol·σ_max`.
pub fn least_squares(a: &DenseMatrix, b: &[f64], rel_tol: f64) -> Result<Vec<f64>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("least_squares right-hand side"));
    }
    let dec = svd(a)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let mut x = vec![0.0; a.cols()];
    for ((s, v), av) in dec.singular_values.iter().zip(&dec.v).zip(&dec.av) {
        if *s <= rel_tol * smax || *s == 0.0 {
            continue;
        }
        // u = av / s, coefficient = uᵀb / s
        let coeff = dot(av, b) / (s * s);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += coeff * vi;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn packed_storage_is_symmetric() {
        let mut m = SymmetricMatrix::zeros(3);
        m.set(0, 2, 5.0);
        assert_eq!(m.get(2, 0), 5.0);
        assert_eq!(m.get(0, 2), m.get(2, 0));
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_symmetric(&SymmetricMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let e = eig_symmetric(&SymmetricMatrix::from_diagonal(&[2.0, 2.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 2.0]);
    }

    #[test]
    fn jacobi_two_by_two() {
        let m = SymmetricMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let e = eig_symmetric(&m).unwrap();
        assert_close(e.values[0], 1.0, 1e-15);
        assert_close(e.values[1], 3.0, 1e-15);
        assert_close(
            e.vectors[0][0].abs(),
            std::f64::consts::FRAC_1_SQRT_2,
            1e-15,
        );
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = SymmetricMatrix::identity(2);
        m.set(1, 0, f64::NAN);
        assert!(matches!(eig_symmetric(&m), Err(Error::NonFinite(_))));
        assert!(matches!(inertia_of(&m, 0.0), Err(Error::NonFinite(_))));
    }

    #[test]
    fn inertia_of_signed_diagonal() {
        let m = SymmetricMatrix::from_diagonal(&[1.0, -1.0, 0.0]);
        let i = inertia_of(&m, 1e-12).unwrap();
        assert_eq!(i.counts(), (1, 1, 1));
        assert_eq!(inertia_by_eigen(&m, 1e-12).unwrap().counts(), (1, 1, 1));
    }

    #[test]
    fn inertia_needs_two_by_two_pivot() {
        // Zero diagonal forces a 2x2 Bunch–Kaufman block.
        let m = SymmetricMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        assert_eq!(ldlt_negative_pivots(&m), Some(1));
        assert_eq!(inertia_of(&m, 0.0).unwrap().counts(), (1, 0, 1));
    }

    #[test]
    fn singular_matrix_falls_back_to_eigen() {
        let m = SymmetricMatrix::from_fn(2, |_, _| 1.0);
        assert_eq!(ldlt_negative_pivots(&m), None);
        assert_eq!(inertia_of(&m, 0.0).unwrap().counts(), (0, 1, 1));
    }

    #[test]
    fn sturm_bisection_matches_closed_form() {
        // 1D Laplacian: 2 - 2cos(kπ/(n+1)).
        let n = 7;
        let vals = tridiagonal_eigenvalues_bisection(&vec![2.0; n], &vec![-1.0; n - 1], 1e-14);
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert_close(*v, exact, 1e-12);
        }
    }

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let ns = nullspace(&DenseMatrix::zeros(2, 3), 1e-10).unwrap();
        assert_eq!(ns.len(), 3);
        assert_eq!(ns[0], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn nullspace_of_projector() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let ns = nullspace(&a, 1e-10).unwrap();
        assert_eq!(ns.len(), 1);
        assert_close(ns[0][0], 0.0, 1e-15);
        assert_close(ns[0][1], 1.0, 1e-15);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0, 1.0]]);
        let ns = nullspace(&a, 1e-10).unwrap();
        assert_eq!(ns.len(), 2);
        for x in &ns {
            assert_close(dot(a.row(0), x), 0.0, 1e-14);
        }
        assert_close(dot(&ns[0], &ns[1]), 0.0, 1e-14);
    }

    #[test]
    fn least_squares_exact_system() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0], vec![0.0, 1.0]]);
        let x_true = [0.25, -1.5];
        let b = a.mul_vec(&x_true);
        let x = least_squares(&a, &b, 1e-12).unwrap();
        assert_close(x[0], x_true[0], 1e-14);
        assert_close(x[1], x_true[1], 1e-14);
    }
}
