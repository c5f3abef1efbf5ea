//! Positivity domains of the tridiagonal metric family `Θ₁(g) = Θ₀ + g·P₁`.
//!
//! `Θ₁(g)` is positive definite on `(−G, G)`, has at most one negative
//! eigenvalue on `(−G′, G′)` and at most two on `(−G″, G″)`. The boundaries
//! are located by bisection on the inertia count.

use crate::error::{Error, Result};
use crate::gegenbauer::GegenbauerParam;
use crate::metrics::{p1, theta1_matrix, MetricCombination};
use crate::numerics::{eigvals_symmetric, inertia_of, Inertia};

/// Initial search window for the coupling `g`.
pub const G_CAP: f64 = 10.0;
/// The window doubles up to this bound before the search gives up.
pub const G_CAP_MAX: f64 = 1e4;
/// Default absolute bisection tolerance on `g`.
pub const DEFAULT_BISECTION_TOL: f64 = 1e-9;

const SCAN_POINTS: usize = 400;

/// Sorted eigenvalues of `Θ₁(g)` along a grid of couplings.
#[derive(Clone, Debug)]
pub struct EigenCurve {
    pub n_levels: usize,
    pub param: GegenbauerParam,
    pub g_samples: Vec<f64>,
    /// `eigenvalue_tracks[s]` holds the ascending eigenvalues at `g_samples[s]`.
    pub eigenvalue_tracks: Vec<Vec<f64>>,
}

impl EigenCurve {
    /// Values of the `k`-th smallest eigenvalue along the grid.
    pub fn track(&self, k: usize) -> Vec<f64> {
        self.eigenvalue_tracks.iter().map(|row| row[k]).collect()
    }
}

pub fn eigencurves(
    n_levels: usize,
    p: GegenbauerParam,
    g_min: f64,
    g_max: f64,
    samples: usize,
) -> Result<EigenCurve> {
    if samples < 2 {
        return Err(Error::Domain {
            what: "samples",
            expected: ">= 2",
            got: samples.to_string(),
        });
    }
    if !(g_min.is_finite() && g_max.is_finite()) || g_min > g_max {
        return Err(Error::Domain {
            what: "coupling range",
            expected: "finite g_min <= g_max",
            got: format!("[{g_min}, {g_max}]"),
        });
    }
    let last = (samples - 1) as f64;
    // Weighted endpoints keep a symmetric range exactly symmetric.
    let g_samples: Vec<f64> = (0..samples)
        .map(|s| (g_min * (last - s as f64) + g_max * s as f64) / last)
        .collect();
    let eigenvalue_tracks = g_samples
        .iter()
        .map(|&g| eigvals_symmetric(&theta1_matrix(n_levels, p, g)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenCurve {
        n_levels,
        param: p,
        g_samples,
        eigenvalue_tracks,
    })
}

fn negatives_at(n_levels: usize, p: GegenbauerParam, g: f64) -> Result<usize> {
    Ok(inertia_of(&theta1_matrix(n_levels, p, g)?, 0.0)?.negatives)
}

/// Smallest `g >= 0` at which `Θ₁(g)` has more than `max_negatives` negative
/// eigenvalues, to absolute tolerance `tol`.
///
/// A grid scan brackets the first change of the count, then bisection
/// narrows it. The count is checked to be non-decreasing along the scan.
pub fn boundary(
    n_levels: usize,
    p: GegenbauerParam,
    max_negatives: usize,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "bisection tolerance",
            expected: "> 0",
            got: tol.to_string(),
        });
    }
    if n_levels < 2 {
        return Err(Error::NoCrossing { g_cap: G_CAP_MAX });
    }
    let mut lo = 0.0;
    let mut count_lo = negatives_at(n_levels, p, lo)?;
    if count_lo > max_negatives {
        return Ok(0.0);
    }
    let mut cap = G_CAP;
    let mut window_start = 0.0;
    let hi = 'scan: loop {
        let step = (cap - window_start) / SCAN_POINTS as f64;
        for s in 1..=SCAN_POINTS {
            let g = if s == SCAN_POINTS {
                cap
            } else {
                window_start + step * s as f64
            };
            let count = negatives_at(n_levels, p, g)?;
            if count < count_lo {
                return Err(Error::NonMonotoneInertia {
                    g_lo: lo,
                    g_hi: g,
                    before: count_lo,
                    after: count,
                });
            }
            if count > max_negatives {
                break 'scan g;
            }
            lo = g;
            count_lo = count;
        }
        if cap >= G_CAP_MAX {
            return Err(Error::NoCrossing { g_cap: cap });
        }
        window_start = cap;
        cap = (cap * 2.0).min(G_CAP_MAX);
    };

    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if negatives_at(n_levels, p, mid)? > max_negatives {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Closed-form boundary of the two-level metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticBoundary {
    /// `√(2a+2)`, in the parametrization `Θ₁⁽²⁾(b/2, a)`.
    pub b: f64,
    /// `√(2a+2)/2`, in the coupling `g`.
    pub g: f64,
}

pub fn analytic_2x2_boundary(p: GegenbauerParam) -> AnalyticBoundary {
    let b = (2.0 * p.a() + 2.0).sqrt();
    AnalyticBoundary { b, g: 0.5 * b }
}

/// Whether the assembled metric is positive definite at threshold `tol`.
pub fn is_positive_metric(m: &MetricCombination, tol: f64) -> Result<(bool, Inertia)> {
    let inertia = inertia_of(&m.assembled, tol)?;
    Ok((inertia.is_positive_definite(), inertia))
}

/// Boundaries `G`, `G′`, `G″` of `Θ₁(g)` for one `(N, a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivityRecord {
    pub n_levels: usize,
    pub a: f64,
    /// Infinite for `N = 1`.
    pub g_boundary: f64,
    pub g_prime: Option<f64>,
    pub g_double_prime: Option<f64>,
    pub precision: f64,
}

impl PositivityRecord {
    /// The boundary for at most `max_negatives` negative eigenvalues.
    pub fn get(&self, max_negatives: usize) -> Option<f64> {
        match max_negatives {
            0 => Some(self.g_boundary),
            1 => self.g_prime,
            2 => self.g_double_prime,
            _ => None,
        }
    }
}

/// Computes `G`, `G′` and `G″`. A boundary is absent when `Θ₁(g)` can never
/// have that many negative eigenvalues: the count saturates at the number of
/// negative eigenvalues of `P₁` as `|g| → ∞`.
pub fn positivity_record(
    n_levels: usize,
    p: GegenbauerParam,
    tol: f64,
) -> Result<PositivityRecord> {
    if n_levels == 1 {
        return Ok(PositivityRecord {
            n_levels,
            a: p.a(),
            g_boundary: f64::INFINITY,
            g_prime: None,
            g_double_prime: None,
            precision: tol,
        });
    }
    let p1m = p1(n_levels, p)?.matrix();
    let saturation = inertia_of(&p1m, 1e-10 * p1m.norm_inf())?.negatives;
    let find = |m: usize| -> Result<Option<f64>> {
        if saturation <= m {
            Ok(None)
        } else {
            boundary(n_levels, p, m, tol).map(Some)
        }
    };
    Ok(PositivityRecord {
        n_levels,
        a: p.a(),
        g_boundary: find(0)?.expect("P1 always has a negative eigenvalue"),
        g_prime: find(1)?,
        g_double_prime: find(2)?,
        precision: tol,
    })
}
