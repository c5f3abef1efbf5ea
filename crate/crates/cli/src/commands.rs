use std::io::Read;

use gegenchain::dieudonne::{residual, solve_banded_default};
use gegenchain::metrics::{p1, p2, p_longrange_n4, p_longrange_n8, theta0, Pseudometric};
use gegenchain::numerics::SymmetricMatrix;
use gegenchain::positivity::{boundary, eigencurves, positivity_record, PositivityRecord};
use gegenchain::{build_hamiltonian, build_hermitian_partner, gegenbauer_zeros, GegenbauerParam};
use rayon::prelude::*;
use serde_json::Value;

use crate::error::CliError;
use crate::output::{Cell, Envelope, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Object {
    Hamiltonian,
    Theta0,
    P1,
    P2,
    Plongrange,
    Banded,
    Partner,
    Zeros,
}

impl Object {
    fn name(self) -> &'static str {
        match self {
            Object::Hamiltonian => "hamiltonian",
            Object::Theta0 => "theta0",
            Object::P1 => "p1",
            Object::P2 => "p2",
            Object::Plongrange => "plongrange",
            Object::Banded => "banded",
            Object::Partner => "partner",
            Object::Zeros => "zeros",
        }
    }

    fn is_metric(self) -> bool {
        matches!(
            self,
            Object::Theta0 | Object::P1 | Object::P2 | Object::Plongrange | Object::Banded
        )
    }

    fn from_name(name: &str) -> Option<Self> {
        <Self as clap::ValueEnum>::value_variants()
            .iter()
            .copied()
            .find(|o| o.name() == name)
    }
}

fn param(a: f64) -> Result<GegenbauerParam, CliError> {
    Ok(GegenbauerParam::new(a)?)
}

pub fn table1(n_max: usize, a: f64, tol: f64, jobs: Option<usize>) -> Result<Envelope, CliError> {
    if n_max < 1 {
        return Err(CliError::Usage("table1 needs --n >= 1".into()));
    }
    let p = param(a)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let records: Vec<PositivityRecord> = pool.install(|| {
        (1..=n_max)
            .into_par_iter()
            .map(|n| positivity_record(n, p, tol))
            .collect::<gegenchain::Result<_>>()
    })?;

    let mut t = Table::new(["N", "G", "G_prime", "G_double_prime"]);
    t.rows = records
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.n_levels),
                Cell::Num(r.g_boundary),
                r.g_prime.into(),
                r.g_double_prime.into(),
            ]
        })
        .collect();
    Ok(Envelope::new(
        "table1",
        t,
        "boundaries G, G', G'' of g at which Θ0 + g·P1 gains its first, second and third negative eigenvalue",
    )
    .param("n_max", n_max)
    .param("a", a)
    .param("tol", tol))
}

pub fn fig1(
    n: usize,
    a: f64,
    samples: usize,
    g_min: f64,
    g_max: f64,
) -> Result<Envelope, CliError> {
    let curve = eigencurves(n, param(a)?, g_min, g_max, samples)?;
    let mut t =
        Table::new(std::iter::once("g".to_string()).chain((1..=n).map(|k| format!("p{k}"))));
    t.rows = curve
        .g_samples
        .iter()
        .zip(&curve.eigenvalue_tracks)
        .map(|(&g, vals)| {
            std::iter::once(Cell::Num(g))
                .chain(vals.iter().map(|&v| Cell::Num(v)))
                .collect()
        })
        .collect();
    Ok(Envelope::new(
        "fig1",
        t,
        "ascending eigenvalues of Θ0 + g·P1 along a grid of couplings g",
    )
    .param("n", n)
    .param("a", a)
    .param("samples", samples)
    .param("g_min", g_min)
    .param("g_max", g_max))
}

fn symmetric_entries(m: &SymmetricMatrix) -> Vec<(usize, usize, f64)> {
    let n = m.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, m.get(i, j)))
        .filter(|e| e.2 != 0.0)
        .collect()
}

fn metric(
    object: Object,
    n: usize,
    p: GegenbauerParam,
    k: Option<usize>,
) -> Result<Pseudometric, CliError> {
    Ok(match object {
        Object::Theta0 => theta0(n, p)?,
        Object::P1 => p1(n, p)?,
        Object::P2 => p2(n, p)?,
        Object::Plongrange => match n {
            4 => p_longrange_n4(p),
            8 => p_longrange_n8(p)?,
            _ => {
                return Err(CliError::Usage(format!(
                    "plongrange is available for N = 4 and N = 8, not {n}"
                )))
            }
        },
        Object::Banded => {
            let k = k.ok_or_else(|| CliError::Usage("dump banded needs --k".into()))?;
            let h = build_hamiltonian(n, p)?;
            solve_banded_default(&h, k)?
                .into_iter()
                .next()
                .ok_or_else(|| CliError::Numerical(format!("no band-{k} solution at N = {n}")))?
        }
        _ => unreachable!("not a metric"),
    })
}

pub fn dump(object: Object, n: usize, a: f64, k: Option<usize>) -> Result<Envelope, CliError> {
    let p = param(a)?;
    let (payload, what) = match object {
        Object::Hamiltonian => {
            let h = build_hamiltonian(n, p)?;
            let d = h.to_dense();
            let entries = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, d.get(i, j)))
                .filter(|e| e.2 != 0.0);
            (
                Table::entries(n, entries),
                "tridiagonal chain Hamiltonian H",
            )
        }
        Object::Partner => {
            let m = build_hermitian_partner(n, p)?.to_symmetric();
            (
                Table::entries(n, symmetric_entries(&m)),
                "symmetric partner h0 = Ω0·H·Ω0⁻¹",
            )
        }
        Object::Zeros => {
            let s = gegenbauer_zeros(n, p)?;
            let mut t = Table::new(["index", "energy"]);
            t.rows = s
                .energies
                .iter()
                .enumerate()
                .map(|(i, &e)| vec![Cell::Int(i), Cell::Num(e)])
                .collect();
            (t, "zeros of the Gegenbauer polynomial G(N, a, x)")
        }
        _ => {
            let m = metric(object, n, p, k)?;
            let what = match object {
                Object::Theta0 => "diagonal metric Θ0",
                Object::P1 => "tridiagonal pseudometric P1",
                Object::P2 => "pentadiagonal pseudometric P2",
                Object::Plongrange => "longest-range pseudometric",
                _ => "banded pseudometric from the generic solver",
            };
            (Table::entries(n, symmetric_entries(&m.matrix())), what)
        }
    };
    let mut env = Envelope::new("dump", payload, what)
        .param("object", object.name())
        .param("n", n)
        .param("a", a);
    if let Some(k) = k {
        env = env.param("k", k);
    }
    Ok(env)
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value, CliError> {
    path.iter().try_fold(v, |cur, key| {
        cur.get(key)
            .ok_or_else(|| CliError::Usage(format!("input lacks field {}", path.join("."))))
    })
}

fn as_usize(v: &Value, what: &str) -> Result<usize, CliError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::Usage(format!("{what} must be a non-negative integer")))
}

/// Re-reads a metric written by `dump` (JSON) and evaluates its Dieudonné residual.
pub fn residual_of(input: &mut dyn Read) -> Result<Envelope, CliError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let v: Value = serde_json::from_str(&text)?;
    if field(&v, &["command"])?.as_str() != Some("dump") {
        return Err(CliError::Usage("input is not the output of dump".into()));
    }
    let name = field(&v, &["params", "object"])?
        .as_str()
        .unwrap_or_default();
    let object = Object::from_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown object {name:?}")))?;
    if !object.is_metric() {
        return Err(CliError::Usage(format!("{name} is not a symmetric metric")));
    }
    let n = as_usize(field(&v, &["params", "n"])?, "params.n")?;
    let a = field(&v, &["params", "a"])?
        .as_f64()
        .ok_or_else(|| CliError::Usage("params.a must be a number".into()))?;
    let rows = field(&v, &["payload", "rows"])?
        .as_array()
        .ok_or_else(|| CliError::Usage("payload.rows must be an array".into()))?;

    let mut m = SymmetricMatrix::zeros(n);
    for row in rows {
        let bad = || CliError::Usage(format!("malformed entry {row}"));
        let triple = row.as_array().filter(|r| r.len() == 3).ok_or_else(bad)?;
        let (i, j) = (as_usize(&triple[0], "row")?, as_usize(&triple[1], "col")?);
        let value = triple[2].as_f64().ok_or_else(bad)?;
        if i >= n || j >= n {
            return Err(CliError::Usage(format!(
                "entry ({i}, {j}) outside a {n}x{n} matrix"
            )));
        }
        m.set(i, j, value);
    }
    let h = build_hamiltonian(n, param(a)?)?;
    let r = residual(&h, &m)?;
    let mut t = Table::new(["object", "n", "a", "residual", "degenerate"]);
    t.rows.push(vec![
        Cell::Text(name.to_string()),
        Cell::Int(n),
        Cell::Num(a),
        Cell::Num(r.value),
        Cell::Text(r.degenerate.to_string()),
    ]);
    Ok(Envelope::new(
        "residual",
        t,
        "‖Hᵀ·P − P·H‖∞ / (‖H‖∞·‖P‖∞) of the supplied metric",
    )
    .param("object", name)
    .param("n", n)
    .param("a", a))
}

pub fn boundary_cmd(
    n: usize,
    a: f64,
    max_negatives: usize,
    tol: f64,
) -> Result<Envelope, CliError> {
    let p = param(a)?;
    let g = if n == 1 && max_negatives == 0 {
        f64::INFINITY
    } else {
        boundary(n, p, max_negatives, tol)?
    };
    let mut t = Table::new(["N", "a", "max_negatives", "g"]);
    t.rows.push(vec![
        Cell::Int(n),
        Cell::Num(a),
        Cell::Int(max_negatives),
        Cell::Num(g),
    ]);
    Ok(Envelope::new(
        "boundary",
        t,
        "smallest g >= 0 at which Θ0 + g·P1 has more than max_negatives negative eigenvalues",
    )
    .param("n", n)
    .param("a", a)
    .param("max_negatives", max_negatives)
    .param("tol", tol))
}
