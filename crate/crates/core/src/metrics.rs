//! Closed-form pseudometrics of the chain Hamiltonian and their linear
//! combinations.
//!
//! Every constructor here returns a real symmetric banded matrix `P` solving
//! `Hᵀ·P = P·H`. The normalizations are fixed by the seed entries
//! `[P]₀₀ = 2a²` (diagonal), `[P]₀₁ = 2a` (tridiagonal), `[P]₀₂ = a`
//! (pentadiagonal) and `[P]₀,N−1 = a` (longest range), so that the solver in
//! [`crate::dieudonne`] can be compared entry by entry after one rescaling.
//!
//! Entries decay like `1/j!` along the band; beyond roughly `N = 60` the
//! trailing entries are below what binary64 can usefully resolve next to the
//! leading ones.

use crate::chain::{build_hamiltonian, check_levels};
use crate::dieudonne::complete_entries;
use crate::error::{Error, Result};
use crate::gegenbauer::GegenbauerParam;
use crate::numerics::SymmetricMatrix;

/// Which closed form (or solver output) a pseudometric is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `Θ₀`, band 0.
    Diagonal,
    /// `P₁`, band 1.
    Tridiagonal,
    /// `P₂`, band 2.
    Pentadiagonal,
    /// `P_{N−1}`, band `N−1`.
    LongRange,
    /// Any other band, only available from the solver.
    Banded,
}

impl Family {
    pub fn for_band(n_levels: usize, band: usize) -> Self {
        match band {
            0 => Family::Diagonal,
            1 => Family::Tridiagonal,
            2 => Family::Pentadiagonal,
            k if k + 1 == n_levels => Family::LongRange,
            _ => Family::Banded,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Seed entry `[P]₀ₖ` set to its conventional value.
    Seed,
    /// Seed entry vanished; scaled so the largest-magnitude entry is `+1`.
    Nonstandard,
}

/// Real symmetric banded solution of the Dieudonné equation.
///
/// Stored by diagonals: `diagonals[d][i]` is entry `(i + d, i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pseudometric {
    n_levels: usize,
    param: GegenbauerParam,
    band: usize,
    family: Family,
    normalization: Normalization,
    diagonals: Vec<Vec<f64>>,
}

impl Pseudometric {
    fn zeros(n_levels: usize, param: GegenbauerParam, band: usize) -> Self {
        let diagonals = (0..=band).map(|d| vec![0.0; n_levels - d]).collect();
        Self {
            n_levels,
            param,
            band,
            family: Family::for_band(n_levels, band),
            normalization: Normalization::Seed,
            diagonals,
        }
    }

    /// Banded copy of `m` keeping only `|i − j| <= band`.
    pub(crate) fn from_symmetric(
        m: &SymmetricMatrix,
        param: GegenbauerParam,
        band: usize,
        normalization: Normalization,
    ) -> Self {
        let n = m.dim();
        let mut p = Self::zeros(n, param, band.min(n - 1));
        for d in 0..=p.band {
            for i in 0..n - d {
                p.diagonals[d][i] = m.get(i + d, i);
            }
        }
        p.normalization = normalization;
        p
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn param(&self) -> GegenbauerParam {
        self.param
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.band {
            0.0
        } else {
            self.diagonals[d][c]
        }
    }

    fn set(&mut self, i: usize, j: usize, value: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        self.diagonals[r - c][c] = value;
    }

    /// The `d`-th sub-diagonal, `d <= band`.
    pub fn diagonal_band(&self, d: usize) -> &[f64] {
        &self.diagonals[d]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.diagonals[0].clone()
    }

    pub fn matrix(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(self.n_levels, |i, j| self.get(i, j))
    }

    /// Nonzero entries of the lower triangle as `(row, col, value)`.
    pub fn lower_nonzeros(&self) -> Vec<(usize, usize, f64)> {
        self.matrix().lower_nonzeros()
    }

    /// Whether every nonzero sits on a diagonal `d` with `d ≡ band (mod 2)`.
    pub fn has_chessboard_parity(&self) -> bool {
        (0..=self.band)
            .filter(|d| d % 2 != self.band % 2)
            .all(|d| self.diagonals[d].iter().all(|&x| x == 0.0))
    }
}

/// Products above this length are evaluated in log space.
const DIRECT_PRODUCT_LIMIT: usize = 60;

/// `Γ_n = (1+2a)(2+2a)⋯(n+2a)`, with `Γ₀ = 1`.
pub fn rising_product(a: f64, n: usize) -> f64 {
    if n <= DIRECT_PRODUCT_LIMIT {
        (1..=n).map(|i| i as f64 + 2.0 * a).product()
    } else {
        log_rising_product(a, n).exp()
    }
}

pub fn log_rising_product(a: f64, n: usize) -> f64 {
    (1..=n).map(|i| (i as f64 + 2.0 * a).ln()).sum()
}

/// `numerator / Γ_n`, without overflowing `Γ_n` for long chains.
fn over_rising(numerator: f64, a: f64, n: usize) -> f64 {
    if n <= DIRECT_PRODUCT_LIMIT || numerator == 0.0 {
        numerator / rising_product(a, n)
    } else {
        numerator.signum() * (numerator.abs().ln() - log_rising_product(a, n)).exp()
    }
}

/// `θ_j`: `θ₀ = 2a²`, `θ₁ = a+1`, `θ_j = (a+j)/Γ_{j−1}` for `j >= 2`.
pub fn theta_entry(p: GegenbauerParam, j: usize) -> f64 {
    let a = p.a();
    match j {
        0 => 2.0 * a * a,
        1 => a + 1.0,
        _ => over_rising(a + j as f64, a, j - 1),
    }
}

/// `κ_j` on the first off-diagonal, `j >= 1`: `κ₁ = 2a`, `κ_j = 1/Γ_{j−2}`.
pub fn kappa_entry(p: GegenbauerParam, j: usize) -> f64 {
    assert!(j >= 1);
    match j {
        1 => 2.0 * p.a(),
        _ => over_rising(1.0, p.a(), j - 2),
    }
}

/// `γ_j` on the second off-diagonal, `j >= 1`.
pub fn gamma_entry(p: GegenbauerParam, j: usize) -> f64 {
    assert!(j >= 1);
    let a = p.a();
    match j {
        1 => a,
        _ => over_rising((1.0 + a) / (2.0 * j as f64 + 2.0 * a), a, j - 2),
    }
}

/// `δ_j` on the diagonal of `P₂`, `j >= 1` (the generic, untruncated value).
pub fn delta_entry(p: GegenbauerParam, j: usize) -> f64 {
    assert!(j >= 1);
    let a = p.a();
    let jf = j as f64;
    let num = 2.0
        * (2.0 * a.powi(3) + 3.0 * a * a
            - (4.0 * jf - 5.0) * jf * a
            - (2.0 * jf * jf - 1.0) * (jf - 1.0));
    let den = (2.0 * jf + 2.0 + 2.0 * a) * (2.0 * jf - 2.0 + 2.0 * a);
    over_rising(num / den, a, j - 1)
}

/// The truncation-dependent corner `ω⁽ᴺ⁾ = −(u_N + v_N·a)/((2N−4+2a)·Γ_{N−2})`
/// with `u_N = (2N−3)(N−2)` and `v_N = 3N−6`.
pub fn omega_corner(n_levels: usize, p: GegenbauerParam) -> f64 {
    assert!(n_levels >= 3);
    let a = p.a();
    let n = n_levels as f64;
    let u = (2.0 * n - 3.0) * (n - 2.0);
    let v = 3.0 * n - 6.0;
    -over_rising((u + v * a) / (2.0 * n - 4.0 + 2.0 * a), a, n_levels - 2)
}

/// Diagonal metric `Θ₀ = diag(θ₀, …, θ_{N−1})`; positive definite for all `a > 0`.
pub fn theta0(n_levels: usize, p: GegenbauerParam) -> Result<Pseudometric> {
    check_levels(n_levels, 1, "N >= 1")?;
    let mut m = Pseudometric::zeros(n_levels, p, 0);
    for j in 0..n_levels {
        m.set(j, j, theta_entry(p, j));
    }
    Ok(m)
}

/// Tridiagonal pseudometric `P₁` with `[P₁]_{j−1,j} = κ_j`.
pub fn p1(n_levels: usize, p: GegenbauerParam) -> Result<Pseudometric> {
    check_levels(n_levels, 2, "N >= 2")?;
    let mut m = Pseudometric::zeros(n_levels, p, 1);
    for j in 1..n_levels {
        m.set(j - 1, j, kappa_entry(p, j));
    }
    Ok(m)
}

/// Pentadiagonal pseudometric `P₂`: `γ_j` at `(j−1, j+1)`, `δ_j` at `(j, j)`
/// for `1 <= j <= N−2`, `ω⁽ᴺ⁾` in the last diagonal corner, and `[P₂]₀₀ = 0`.
pub fn p2(n_levels: usize, p: GegenbauerParam) -> Result<Pseudometric> {
    check_levels(n_levels, 3, "N >= 3")?;
    let mut m = Pseudometric::zeros(n_levels, p, 2);
    for j in 1..n_levels - 1 {
        m.set(j - 1, j + 1, gamma_entry(p, j));
        m.set(j, j, delta_entry(p, j));
    }
    m.set(n_levels - 1, n_levels - 1, omega_corner(n_levels, p));
    Ok(m)
}

/// Heptadiagonal `P₃⁽⁴⁾`, the longest-range pseudometric at `N = 4`.
pub fn p_longrange_n4(p: GegenbauerParam) -> Pseudometric {
    let a = p.a();
    let mut m = Pseudometric::zeros(4, p, 3);
    m.set(0, 3, a);
    m.set(1, 2, (a * a + 2.0 * a + 1.0) / (a + 3.0));
    m.set(2, 3, -(3.0 * a + 5.0) / ((a + 3.0) * (2.0 * a + 1.0)));
    m
}

/// One element `p_{ij}` of the `N = 8` longest-range pseudometric.
///
/// `p_{ij}` sits at 0-indexed row `N − j`, column `j + 2i − 3` (and its mirror):
/// `i` counts anti-diagonals outward from the main anti-diagonal, `j` walks
/// along each one from the bottom-left corner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LongRangeElement {
    pub label: &'static str,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

fn n8_position(i: usize, j: usize) -> (usize, usize) {
    (8 - j, j + 2 * i - 3)
}

/// The `N = 8` elements available in fully printed closed form:
/// `p₁₁ … p₁₄`, `p₂₁`, `p₂₂` and the factored `p₂₃`.
pub fn n8_closed_form_elements(p: GegenbauerParam) -> Vec<LongRangeElement> {
    let a = p.a();
    let p11 = a;
    let p12 = (a + 1.0) * (a + 3.0) / (a + 7.0);
    let p13 = (a + 1.0) * (a + 3.0) * (2.0 * a + 5.0) * (a + 2.0)
        / ((2.0 * a + 1.0) * (a + 7.0) * (a + 6.0));
    let p14 = (2.0 * a + 5.0) * (a + 3.0).powi(2) * (a + 2.0).powi(2)
        / ((2.0 * a + 1.0) * (a + 7.0) * (a + 6.0) * (a + 5.0));
    let p21 = -3.0 * (3.0 * a + 13.0) * (a + 2.0) / ((2.0 * a + 1.0) * (a + 7.0) * (a + 6.0));
    let p22 = -5.0 * (a + 4.0) * (3.0 * a * a + 22.0 * a + 23.0) * (a + 3.0).powi(2)
        / ((2.0 * a + 1.0) * (a + 6.0) * (a + 5.0) * (a + 1.0) * (a + 7.0).powi(2));
    let quintic = (((3.0 * a + 55.0) * a + 380.0) * a + 1223.0) * a * a + 1811.0 * a + 976.0;
    let p23 = -6.0 * (2.0 * a + 5.0) * (a + 3.0) * quintic
        / ((a + 5.0)
            * (2.0 * a + 3.0)
            * (2.0 * a + 1.0)
            * (a + 1.0)
            * (a + 7.0).powi(2)
            * (a + 6.0).powi(2));
    [
        ("p11", 1, 1, p11),
        ("p12", 1, 2, p12),
        ("p13", 1, 3, p13),
        ("p14", 1, 4, p14),
        ("p21", 2, 1, p21),
        ("p22", 2, 2, p22),
        ("p23", 2, 3, p23),
    ]
    .into_iter()
    .map(|(label, i, j, value)| {
        let (row, col) = n8_position(i, j);
        LongRangeElement {
            label,
            row,
            col,
            value,
        }
    })
    .collect()
}

/// Labels and positions of the `N = 8` elements without a usable closed form.
pub fn n8_completed_positions() -> Vec<(&'static str, usize, usize)> {
    [("p31", 3, 1), ("p32", 3, 2), ("p41", 4, 1)]
        .into_iter()
        .map(|(label, i, j)| {
            let (row, col) = n8_position(i, j);
            (label, row, col)
        })
        .collect()
}

/// The 15-diagonal longest-range pseudometric at `N = 8`, normalized so that
/// `[P]₀,₇ = a`.
///
/// The closed-form elements are placed first; `p₃₁`, `p₃₂` and `p₄₁` are then
/// obtained by solving the Dieudonné equation for those three unknowns in the
/// least-squares sense.
pub fn p_longrange_n8(p: GegenbauerParam) -> Result<Pseudometric> {
    let mut m = Pseudometric::zeros(8, p, 7);
    for e in n8_closed_form_elements(p) {
        m.set(e.row, e.col, e.value);
    }
    let unknown: Vec<(usize, usize)> = n8_completed_positions()
        .iter()
        .map(|&(_, r, c)| (r, c))
        .collect();
    let h = build_hamiltonian(8, p)?;
    let values = complete_entries(&h, &m.matrix(), &unknown)?;
    for (&(r, c), v) in unknown.iter().zip(values) {
        m.set(r, c, v);
    }
    Ok(m)
}

/// `Θ = Σ αᵢ·Pᵢ` together with its parts.
#[derive(Clone, Debug)]
pub struct MetricCombination {
    pub alphas: Vec<f64>,
    pub components: Vec<Pseudometric>,
    pub assembled: SymmetricMatrix,
}

pub fn assemble_metric(components: &[Pseudometric], alphas: &[f64]) -> Result<MetricCombination> {
    if components.is_empty() {
        return Err(Error::DimensionMismatch("no components to assemble".into()));
    }
    if components.len() != alphas.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} components but {} coefficients",
            components.len(),
            alphas.len()
        )));
    }
    let (n, a) = (components[0].n_levels(), components[0].param());
    if let Some(bad) = components
        .iter()
        .find(|c| c.n_levels() != n || c.param() != a)
    {
        return Err(Error::DimensionMismatch(format!(
            "component (N={}, a={}) does not match (N={}, a={})",
            bad.n_levels(),
            bad.param().a(),
            n,
            a.a()
        )));
    }
    let mut assembled = SymmetricMatrix::zeros(n);
    for (c, &alpha) in components.iter().zip(alphas) {
        if alpha != 0.0 {
            assembled.add_scaled(&c.matrix(), alpha);
        }
    }
    Ok(MetricCombination {
        alphas: alphas.to_vec(),
        components: components.to_vec(),
        assembled,
    })
}

/// Truncated family `Θ_k = Θ₀ + Σ_{j=1..k} α_j·P_j` for `k <= 2`, the
/// coefficient of `Θ₀` being fixed to one.
pub fn truncated_metric(
    n_levels: usize,
    p: GegenbauerParam,
    alphas: &[f64],
) -> Result<MetricCombination> {
    let mut components = vec![theta0(n_levels, p)?];
    if !alphas.is_empty() {
        components.push(p1(n_levels, p)?);
    }
    if alphas.len() >= 2 {
        components.push(p2(n_levels, p)?);
    }
    if alphas.len() > 2 {
        return Err(Error::Domain {
            what: "number of couplings",
            expected: "at most 2 (closed forms exist for P1 and P2 only)",
            got: alphas.len().to_string(),
        });
    }
    let mut all = vec![1.0];
    all.extend_from_slice(alphas);
    assemble_metric(&components, &all)
}

/// `Θ₁(g) = Θ₀ + g·P₁` as a plain symmetric matrix; `Θ₀` alone when `N = 1`.
pub fn theta1_matrix(n_levels: usize, p: GegenbauerParam, g: f64) -> Result<SymmetricMatrix> {
    if n_levels == 1 {
        return Ok(theta0(1, p)?.matrix());
    }
    Ok(truncated_metric(n_levels, p, &[g])?.assembled)
}
