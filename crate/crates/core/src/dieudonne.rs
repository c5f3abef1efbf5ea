//! The Dieudonné equation `Hᵀ·P = P·H` for symmetric `P`.
//!
//! The linear map `L(P) = Hᵀ·P − P·H` is materialized as a constraint matrix
//! with one row per entry of the `N×N` residual and one column per
//! independent (upper-triangle) entry of `P` that an ansatz lets vary.
//! Symmetry of `P` is structural, never an extra equation.

use crate::chain::ChainHamiltonian;
use crate::error::{Error, Result};
use crate::metrics::{Normalization, Pseudometric};
use crate::numerics::{
    dot, eigvals_symmetric, least_squares, norm2, norm_inf_vec, nullspace, svd, DenseMatrix,
    SymmetricMatrix, DEFAULT_RELATIVE_TOL,
};

/// Below this magnitude (in a unit-norm nullspace vector) the seed entry is
/// treated as absent.
const SEED_FLOOR: f64 = 1e-8;

/// `L(P) = Hᵀ·P − P·H` over symmetric `P`.
#[derive(Clone, Debug)]
pub struct DieudonneOperator {
    h: ChainHamiltonian,
    dense: DenseMatrix,
}

impl DieudonneOperator {
    pub fn new(h: &ChainHamiltonian) -> Self {
        Self {
            h: h.clone(),
            dense: h.to_dense(),
        }
    }

    pub fn hamiltonian(&self) -> &ChainHamiltonian {
        &self.h
    }

    pub fn n_levels(&self) -> usize {
        self.h.n_levels()
    }

    pub fn apply(&self, p: &SymmetricMatrix) -> DenseMatrix {
        let pd = p.to_dense();
        self.dense
            .transpose()
            .matmul(&pd)
            .sub(&pd.matmul(&self.dense))
    }

    /// Column of `L` for the symmetric unit matrix supported on `(i, j)` and `(j, i)`.
    fn column(&self, i: usize, j: usize) -> Vec<f64> {
        let n = self.n_levels();
        let h = &self.dense;
        let mut col = vec![0.0; n * n];
        // L(e_i e_jᵀ) = (Hᵀe_i)e_jᵀ − e_i(e_jᵀH)
        let mut add_unit = |r0: usize, c0: usize| {
            for r in 0..n {
                col[r * n + c0] += h.get(r0, r);
            }
            for c in 0..n {
                col[r0 * n + c] -= h.get(c0, c);
            }
        };
        add_unit(i, j);
        if i != j {
            add_unit(j, i);
        }
        col
    }

    /// Constraint matrix (`N²` rows) over the entries listed in `support`.
    pub fn constraint_matrix(&self, support: &[(usize, usize)]) -> DenseMatrix {
        let n = self.n_levels();
        let cols: Vec<Vec<f64>> = support.iter().map(|&(i, j)| self.column(i, j)).collect();
        DenseMatrix::from_fn(n * n, support.len(), |r, c| cols[c][r])
    }
}

/// Every upper-triangle position `(i, j)`, `i <= j`, row-major.
pub fn full_support(n_levels: usize) -> Vec<(usize, usize)> {
    (0..n_levels)
        .flat_map(|i| (i..n_levels).map(move |j| (i, j)))
        .collect()
}

/// Shape of a banded pseudometric search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandAnsatz {
    /// Number of nonzero off-diagonals on each side.
    pub band: usize,
    /// Restrict to diagonals `d ≡ band (mod 2)`.
    pub parity: bool,
}

impl BandAnsatz {
    pub fn new(band: usize) -> Self {
        Self { band, parity: true }
    }

    pub fn without_parity(band: usize) -> Self {
        Self {
            band,
            parity: false,
        }
    }

    /// Upper-triangle positions the ansatz lets vary.
    ///
    /// Besides the band (and parity) restriction, the leading row is zero
    /// left of the seed: `[P]₀ⱼ = 0` for `j < band`. The solution space of the
    /// Dieudonné equation is parametrized by the first row of `P`, so this
    /// singles out the one new pseudometric that appears at this band.
    pub fn support(&self, n_levels: usize) -> Vec<(usize, usize)> {
        full_support(n_levels)
            .into_iter()
            .filter(|&(i, j)| {
                let d = j - i;
                d <= self.band
                    && (!self.parity || d % 2 == self.band % 2)
                    && !(i == 0 && j < self.band)
            })
            .collect()
    }
}

/// Normalized residual `‖HᵀP − PH‖∞ / (‖H‖∞·‖P‖∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub value: f64,
    /// `P` (or `H`) was zero, so the ratio is undefined; `value` is reported as 0.
    pub degenerate: bool,
}

pub fn residual(h: &ChainHamiltonian, p: &SymmetricMatrix) -> Result<Residual> {
    if p.dim() != h.n_levels() {
        return Err(Error::DimensionMismatch(format!(
            "metric is {}x{} but H is {}x{}",
            p.dim(),
            p.dim(),
            h.n_levels(),
            h.n_levels()
        )));
    }
    let op = DieudonneOperator::new(h);
    let scale = h.norm_inf() * p.norm_inf();
    if scale == 0.0 {
        return Ok(Residual {
            value: 0.0,
            degenerate: true,
        });
    }
    Ok(Residual {
        value: op.apply(p).norm_inf() / scale,
        degenerate: false,
    })
}

pub fn pseudometric_residual(h: &ChainHamiltonian, p: &Pseudometric) -> Result<Residual> {
    residual(h, &p.matrix())
}

fn matrix_from_support(n: usize, support: &[(usize, usize)], x: &[f64]) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(n);
    for (&(i, j), &v) in support.iter().zip(x) {
        m.set(i, j, v);
    }
    m
}

/// Basis of all symmetric solutions of the Dieudonné equation.
pub fn symmetric_nullspace(h: &ChainHamiltonian, tol: f64) -> Result<Vec<SymmetricMatrix>> {
    let support = full_support(h.n_levels());
    let a = DieudonneOperator::new(h).constraint_matrix(&support);
    Ok(nullspace(&a, tol)?
        .iter()
        .map(|x| matrix_from_support(h.n_levels(), &support, x))
        .collect())
}

/// Conventional value of the seed entry `[P]₀ₖ`.
pub fn seed_value(band: usize, a: f64) -> f64 {
    match band {
        0 => 2.0 * a * a,
        1 => 2.0 * a,
        _ => a,
    }
}

/// Banded pseudometrics of band `k` (with chessboard parity), rescaled to the
/// conventional seed. An empty list means no solution of that shape exists.
pub fn solve_banded(h: &ChainHamiltonian, band: usize, tol: f64) -> Result<Vec<Pseudometric>> {
    solve_with_ansatz(h, BandAnsatz::new(band), tol)
}

pub fn solve_with_ansatz(
    h: &ChainHamiltonian,
    ansatz: BandAnsatz,
    tol: f64,
) -> Result<Vec<Pseudometric>> {
    let n = h.n_levels();
    if ansatz.band >= n {
        return Err(Error::Domain {
            what: "band",
            expected: "0 <= k <= N-1",
            got: ansatz.band.to_string(),
        });
    }
    let support = ansatz.support(n);
    let a = DieudonneOperator::new(h).constraint_matrix(&support);
    let seed_col = support
        .iter()
        .position(|&(i, j)| i == 0 && j == ansatz.band);
    let target = seed_value(ansatz.band, h.param().a());

    let solutions = refined_nullspace(&a, tol)?
        .into_iter()
        .map(|mut x| {
            let seed = seed_col.map_or(0.0, |c| x[c]);
            let normalization = if seed.abs() >= SEED_FLOOR {
                let s = target / seed;
                x.iter_mut().for_each(|v| *v *= s);
                Normalization::Seed
            } else {
                let (_, peak) =
                    x.iter().fold(
                        (0.0, 0.0),
                        |(m, p), &v| if v.abs() > m { (v.abs(), v) } else { (m, p) },
                    );
                x.iter_mut().for_each(|v| *v /= peak);
                Normalization::Nonstandard
            };
            let m = matrix_from_support(n, &support, &x);
            Pseudometric::from_symmetric(&m, h.param(), ansatz.band, normalization)
        })
        .collect();
    Ok(solutions)
}

/// Nullspace of `a`; a one-dimensional result is recomputed once with the
/// unknowns rescaled by the first estimate and the rows equilibrated, which
/// recovers full relative accuracy in entries many orders of magnitude below
/// the largest one.
fn refined_nullspace(a: &DenseMatrix, tol: f64) -> Result<Vec<Vec<f64>>> {
    let first = nullspace(a, tol)?;
    if first.len() != 1 {
        return Ok(first);
    }
    let x = &first[0];
    let peak = norm_inf_vec(x);
    let scale: Vec<f64> = x.iter().map(|v| v.abs().max(f64::EPSILON * peak)).collect();
    let mut scaled = DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) * scale[j]);
    for i in 0..scaled.rows() {
        let r = norm_inf_vec(scaled.row(i));
        if r > 0.0 {
            for j in 0..scaled.cols() {
                scaled.set(i, j, scaled.get(i, j) / r);
            }
        }
    }
    let second = nullspace(&scaled, tol)?;
    if second.len() != 1 {
        return Ok(first);
    }
    let mut y: Vec<f64> = second[0].iter().zip(&scale).map(|(z, s)| z * s).collect();
    let n = norm2(&y);
    let sign = if dot(&y, x) < 0.0 { -1.0 } else { 1.0 };
    y.iter_mut().for_each(|v| *v *= sign / n);
    Ok(vec![y])
}

/// Same as [`solve_banded`] with the default relative tolerance.
pub fn solve_banded_default(h: &ChainHamiltonian, band: usize) -> Result<Vec<Pseudometric>> {
    solve_banded(h, band, DEFAULT_RELATIVE_TOL)
}

/// Solves the Dieudonné equation for the entries at `unknown` (upper or lower
/// triangle positions), the rest of `known` being held fixed. Least squares
/// over all `N²` constraints.
pub fn complete_entries(
    h: &ChainHamiltonian,
    known: &SymmetricMatrix,
    unknown: &[(usize, usize)],
) -> Result<Vec<f64>> {
    if known.dim() != h.n_levels() {
        return Err(Error::DimensionMismatch(format!(
            "partial metric is {}x{} but H is {}x{}",
            known.dim(),
            known.dim(),
            h.n_levels(),
            h.n_levels()
        )));
    }
    let op = DieudonneOperator::new(h);
    let support: Vec<(usize, usize)> = unknown.iter().map(|&(i, j)| (i.min(j), i.max(j))).collect();
    let mut fixed = known.clone();
    for &(i, j) in &support {
        fixed.set(i, j, 0.0);
    }
    let n = h.n_levels();
    let rhs_mat = op.apply(&fixed);
    let rhs: Vec<f64> = (0..n * n).map(|r| -rhs_mat.get(r / n, r % n)).collect();
    let a = op.constraint_matrix(&support);
    least_squares(&a, &rhs, 1e-13)
}

/// `Σ w_n·ψ̃_n·ψ̃_nᵀ` from unit left eigenvectors `ψ̃_n` of `H` (`Hᵀψ̃ = E·ψ̃`).
///
/// Each left eigenvector is the smallest right singular vector of
/// `Hᵀ − E_n·I`, with `E_n` the eigenvalues of `H`; no metric formula is used.
pub fn spectral_pseudometric(h: &ChainHamiltonian, weights: &[f64]) -> Result<SymmetricMatrix> {
    let n = h.n_levels();
    if weights.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for N = {}",
            weights.len(),
            n
        )));
    }
    let energies = eigvals_symmetric(&h.symmetrized())?;
    let scale = energies.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    for w in energies.windows(2) {
        if (w[1] - w[0]).abs() <= 1e-12 * scale {
            return Err(Error::DegenerateSpectrum(w[0], w[1]));
        }
    }
    let ht = h.to_dense().transpose();
    let mut out = SymmetricMatrix::zeros(n);
    for (&e, &w) in energies.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        let shifted =
            DenseMatrix::from_fn(n, n, |i, j| ht.get(i, j) - if i == j { e } else { 0.0 });
        let dec = svd(&shifted)?;
        let mut v = dec.v.last().cloned().expect("nonempty");
        // Fix the sign so the first component is positive (it never vanishes).
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let outer = SymmetricMatrix::from_fn(n, |i, j| v[i] * v[j]);
        out.add_scaled(&outer, w);
    }
    Ok(out)
}

/// Largest-magnitude entry of `x − Π·x`, where `Π` projects onto the span of
/// `basis` (orthonormal under the entrywise inner product on the upper triangle).
pub fn distance_to_span(x: &SymmetricMatrix, basis: &[SymmetricMatrix]) -> f64 {
    let n = x.dim();
    let support = full_support(n);
    let flat =
        |m: &SymmetricMatrix| -> Vec<f64> { support.iter().map(|&(i, j)| m.get(i, j)).collect() };
    let mut r = flat(x);
    let qs: Vec<Vec<f64>> = basis.iter().map(flat).collect();
    for _ in 0..2 {
        for q in &qs {
            let c: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * qi;
            }
        }
    }
    norm_inf_vec(&r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_hamiltonian;
    use crate::gegenbauer::GegenbauerParam;
    use crate::metrics::{p1, p2, p_longrange_n4, theta0};

    fn h(n: usize, a: f64) -> ChainHamiltonian {
        build_hamiltonian(n, GegenbauerParam::new(a).unwrap()).unwrap()
    }

    #[test]
    fn theta0_residual_vanishes() {
        let hh = h(6, 1.0);
        let r = residual(&hh, &theta0(6, hh.param()).unwrap().matrix()).unwrap();
        assert!(r.value <= 1e-14 && !r.degenerate);
    }

    #[test]
    fn identity_is_not_a_metric() {
        let hh = h(3, 1.0);
        let r = residual(&hh, &SymmetricMatrix::identity(3)).unwrap();
        assert!(r.value > 0.01);
    }

    #[test]
    fn zero_matrix_flags_degenerate() {
        let hh = h(3, 1.0);
        let r = residual(&hh, &SymmetricMatrix::zeros(3)).unwrap();
        assert_eq!(
            r,
            Residual {
                value: 0.0,
                degenerate: true
            }
        );
    }

    #[test]
    fn residual_dimension_mismatch() {
        assert!(matches!(
            residual(&h(3, 1.0), &SymmetricMatrix::identity(4)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn constraint_matrix_matches_direct_application() {
        let hh = h(4, 0.8);
        let op = DieudonneOperator::new(&hh);
        let support = full_support(4);
        let a = op.constraint_matrix(&support);
        let x: Vec<f64> = (0..support.len())
            .map(|k| (k as f64 * 0.37).sin())
            .collect();
        let ax = a.mul_vec(&x);
        let direct = op.apply(&matrix_from_support(4, &support, &x));
        for r in 0..16 {
            assert!((ax[r] - direct.get(r / 4, r % 4)).abs() < 1e-14);
        }
    }

    #[test]
    fn three_level_nullspace_is_three_dimensional() {
        let ns = symmetric_nullspace(&h(3, 1.0), 1e-10).unwrap();
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn recovers_theta0() {
        let sols = solve_banded(&h(5, 1.0), 0, 1e-10).unwrap();
        assert_eq!(sols.len(), 1);
        let expect = [2.0, 2.0, 1.0, 1.0 / 3.0, 1.0 / 12.0];
        for (j, e) in expect.iter().enumerate() {
            assert!((sols[0].get(j, j) - e).abs() <= 1e-12 * e);
        }
        assert_eq!(sols[0].normalization(), Normalization::Seed);
    }

    #[test]
    fn recovers_p2_with_corner() {
        let hh = h(4, 1.0);
        let sols = solve_banded(&hh, 2, 1e-10).unwrap();
        assert_eq!(sols.len(), 1);
        let closed = p2(4, hh.param()).unwrap();
        assert!((sols[0].get(3, 3) + 2.0 / 9.0).abs() < 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                assert!((sols[0].get(i, j) - closed.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn recovers_heptadiagonal_n4() {
        let hh = h(4, 1.0);
        let sols = solve_banded(&hh, 3, 1e-10).unwrap();
        assert_eq!(sols.len(), 1);
        let closed = p_longrange_n4(hh.param());
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (sols[0].get(i, j) - closed.get(i, j)).abs() < 1e-12,
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn band_out_of_range() {
        assert!(solve_banded(&h(3, 1.0), 3, 1e-10).is_err());
    }

    #[test]
    fn spectral_pseudometric_rank_one_and_definite() {
        let hh = h(4, 1.0);
        let single = spectral_pseudometric(&hh, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(residual(&hh, &single).unwrap().value <= 1e-10);
        let inertia = crate::numerics::inertia_of(&single, 1e-10).unwrap();
        assert_eq!(inertia.counts(), (0, 3, 1));
        let full = spectral_pseudometric(&hh, &[1.0; 4]).unwrap();
        assert_eq!(
            crate::numerics::inertia_of(&full, 1e-12).unwrap().counts(),
            (0, 0, 4)
        );
    }

    #[test]
    fn spectral_span_equals_solver_span() {
        let hh = h(4, 1.0);
        let basis = symmetric_nullspace(&hh, 1e-10).unwrap();
        assert_eq!(basis.len(), 4);
        let m = spectral_pseudometric(&hh, &[1.0; 4]).unwrap();
        assert!(distance_to_span(&m, &basis) <= 1e-9);
        // and the closed forms lie in it too
        let p = p1(4, hh.param()).unwrap().matrix();
        let scale = p.max_abs();
        assert!(distance_to_span(&p, &basis) <= 1e-9 * scale);
    }

    #[test]
    fn weights_length_checked() {
        assert!(spectral_pseudometric(&h(3, 1.0), &[1.0]).is_err());
    }

    #[test]
    fn ansatz_support_shapes() {
        assert_eq!(BandAnsatz::new(0).support(3), vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(BandAnsatz::new(1).support(3), vec![(0, 1), (1, 2)]);
        assert_eq!(
            BandAnsatz::new(2).support(4),
            vec![(0, 2), (1, 1), (1, 3), (2, 2), (3, 3)]
        );
        assert_eq!(
            BandAnsatz::without_parity(1).support(3),
            vec![(0, 1), (1, 1), (1, 2), (2, 2)]
        );
    }
}
