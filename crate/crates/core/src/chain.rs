//! The tridiagonal chain Hamiltonian `H⁽ᴺ⁾(a)`, the diagonal similarity `Ω₀`
//! and the symmetric isospectral partner `𝔥₀ = Ω₀·H·Ω₀⁻¹`.

use crate::error::{Error, Result};
use crate::gegenbauer::GegenbauerParam;
use crate::metrics::theta0;
use crate::numerics::{eig_symmetric, norm2, DenseMatrix, SymmetricMatrix};

pub(crate) fn check_levels(n_levels: usize, min: usize, expected: &'static str) -> Result<()> {
    if n_levels < min {
        return Err(Error::Domain {
            what: "number of levels N",
            expected,
            got: n_levels.to_string(),
        });
    }
    Ok(())
}

/// Real tridiagonal `N×N` Hamiltonian with zero diagonal, stored by bands.
///
/// `H[j][j+1] = c_j = 1/(2a+2j)` and `H[j+1][j] = b_{j+1} = (2a+j)/(2a+2j+2)`
/// for `j = 0..N−2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainHamiltonian {
    n_levels: usize,
    param: GegenbauerParam,
    superdiag: Vec<f64>,
    subdiag: Vec<f64>,
}

impl ChainHamiltonian {
    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn param(&self) -> GegenbauerParam {
        self.param
    }

    /// `c_j`, `j = 0..N−2`.
    pub fn superdiag(&self) -> &[f64] {
        &self.superdiag
    }

    /// `b_{j+1}`, `j = 0..N−2`.
    pub fn subdiag(&self) -> &[f64] {
        &self.subdiag
    }

    pub fn diagonal(&self) -> Vec<f64> {
        vec![0.0; self.n_levels]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j == i + 1 {
            self.superdiag[i]
        } else if i == j + 1 {
            self.subdiag[j]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n_levels, self.n_levels, |i, j| self.get(i, j))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_levels);
        (0..self.n_levels)
            .map(|i| {
                let up = if i + 1 < self.n_levels {
                    self.superdiag[i] * x[i + 1]
                } else {
                    0.0
                };
                let down = if i > 0 {
                    self.subdiag[i - 1] * x[i - 1]
                } else {
                    0.0
                };
                up + down
            })
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n_levels)
            .map(|i| {
                let up = if i + 1 < self.n_levels {
                    self.superdiag[i].abs()
                } else {
                    0.0
                };
                let down = if i > 0 {
                    self.subdiag[i - 1].abs()
                } else {
                    0.0
                };
                up + down
            })
            .fold(0.0, f64::max)
    }

    /// Scales `d` with `d₀ = 1` and `d_{j+1}² = d_j²·c_j/b_{j+1}`, so that
    /// `D·H·D⁻¹` is symmetric. Built from the entries of `H` alone.
    pub fn symmetrizing_scales(&self) -> Vec<f64> {
        let mut d = Vec::with_capacity(self.n_levels);
        d.push(1.0);
        for j in 0..self.n_levels - 1 {
            d.push(d[j] * (self.superdiag[j] / self.subdiag[j]).sqrt());
        }
        d
    }

    /// `D·H·D⁻¹` with couplings `√(c_j·b_{j+1})`.
    pub fn symmetrized(&self) -> SymmetricMatrix {
        let off: Vec<f64> = self
            .superdiag
            .iter()
            .zip(&self.subdiag)
            .map(|(c, b)| (c * b).sqrt())
            .collect();
        SymmetricMatrix::tridiagonal(&vec![0.0; self.n_levels], &off)
    }

    /// Ascending eigenvalues of `H` with unit right eigenvectors
    /// (`H·x = E·x`), first component positive.
    pub fn eigenpairs(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let dec = eig_symmetric(&self.symmetrized())?;
        let d = self.symmetrizing_scales();
        let vectors = dec
            .vectors
            .iter()
            .map(|y| {
                let mut x: Vec<f64> = y.iter().zip(&d).map(|(yi, di)| yi / di).collect();
                let norm = norm2(&x) * if x[0] < 0.0 { -1.0 } else { 1.0 };
                x.iter_mut().for_each(|v| *v /= norm);
                x
            })
            .collect();
        Ok((dec.values, vectors))
    }
}

pub fn build_hamiltonian(n_levels: usize, p: GegenbauerParam) -> Result<ChainHamiltonian> {
    check_levels(n_levels, 1, "N >= 1")?;
    let a = p.a();
    let (superdiag, subdiag) = (0..n_levels - 1)
        .map(|j| {
            let j = j as f64;
            (
                1.0 / (2.0 * a + 2.0 * j),
                (2.0 * a + j) / (2.0 * a + 2.0 * j + 2.0),
            )
        })
        .unzip();
    Ok(ChainHamiltonian {
        n_levels,
        param: p,
        superdiag,
        subdiag,
    })
}

/// The chain whose eigenvectors are exactly `G(k, a, E)`: same `b_{j+1}` as
/// [`build_hamiltonian`] but `c_j = (j+1)/(2a+2j)`, read off the three-term
/// recurrence. Its spectrum is the zeros of `G(N, a, ·)`. For `N <= 2` it
/// coincides with [`build_hamiltonian`].
pub fn build_recurrence_hamiltonian(
    n_levels: usize,
    p: GegenbauerParam,
) -> Result<ChainHamiltonian> {
    let mut h = build_hamiltonian(n_levels, p)?;
    for (j, c) in h.superdiag.iter_mut().enumerate() {
        *c *= (j + 1) as f64;
    }
    Ok(h)
}

/// A diagonal matrix, kept as its diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMatrix(pub Vec<f64>);

impl DiagonalMatrix {
    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    /// Entrywise reciprocal.
    pub fn inverse(&self) -> DiagonalMatrix {
        DiagonalMatrix(self.0.iter().map(|x| 1.0 / x).collect())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.0.len();
        DenseMatrix::from_fn(n, n, |i, j| if i == j { self.0[i] } else { 0.0 })
    }

    /// `selfᵀ·self`, which for a diagonal matrix is the entrywise square.
    pub fn gram(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_diagonal(&self.0.iter().map(|x| x * x).collect::<Vec<_>>())
    }
}

/// `Ω₀ = diag(√θ_n)`, the square root of the diagonal metric.
pub fn build_omega0(n_levels: usize, p: GegenbauerParam) -> Result<DiagonalMatrix> {
    let theta = theta0(n_levels, p)?;
    Ok(DiagonalMatrix(
        theta.diagonal().iter().map(|t| t.sqrt()).collect(),
    ))
}

/// Symmetric tridiagonal partner with zero diagonal and couplings
/// `μ_k = ½·√((2a+k)/((a+k)(a+k+1)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPartner {
    pub n_levels: usize,
    pub param: GegenbauerParam,
    pub offdiag: Vec<f64>,
}

impl HermitianPartner {
    pub fn to_symmetric(&self) -> SymmetricMatrix {
        SymmetricMatrix::tridiagonal(&vec![0.0; self.n_levels], &self.offdiag)
    }
}

pub fn build_hermitian_partner(n_levels: usize, p: GegenbauerParam) -> Result<HermitianPartner> {
    check_levels(n_levels, 1, "N >= 1")?;
    let a = p.a();
    let offdiag = (0..n_levels - 1)
        .map(|k| {
            let k = k as f64;
            0.5 * ((2.0 * a + k) / ((a + k) * (a + k + 1.0))).sqrt()
        })
        .collect();
    Ok(HermitianPartner {
        n_levels,
        param: p,
        offdiag,
    })
}

/// `Ω₀·H·Ω₀⁻¹`, formed entrywise from the diagonal similarity.
pub fn similarity_transform(h: &ChainHamiltonian, omega: &DiagonalMatrix) -> DenseMatrix {
    let w = omega.entries();
    let w_inv = omega.inverse();
    let w_inv = w_inv.entries();
    let n = h.n_levels();
    DenseMatrix::from_fn(n, n, |i, j| w[i] * h.get(i, j) * w_inv[j])
}
