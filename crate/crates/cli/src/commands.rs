use std::fmt;

use serde_json::{json, Value};

use tempjump::benchmark::{compare, REFERENCE_Q};
use tempjump::fields::wall_perturbation;
use tempjump::{
    macroscopic_profile, DirectSolution, DirectSolver, Error, FixedPointOptions, FredholmSystem,
    NeumannSeries, NeumannSolver, SpectralDensity, Vec2,
};

use crate::config::RunConfig;
use crate::output::{num, Cell, Report, Table};

/// Truncation order the oracle is compared against.
pub const ORACLE_ORDER: usize = 3;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Divergence(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Divergence(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Divergence(m) => write!(f, "oracle did not converge: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Divergence { .. } => CliError::Divergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

struct Session {
    system: FredholmSystem,
}

impl Session {
    fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        Ok(Self {
            system: FredholmSystem::new(cfg.solver_config())?,
        })
    }

    fn series(&self, order: usize) -> Result<NeumannSeries, CliError> {
        Ok(NeumannSolver::new(&self.system).series(order)?)
    }

    fn oracle(&self, q: f64, g_t: f64, tol: f64) -> Result<DirectSolution, CliError> {
        let options = FixedPointOptions::with_tol(tol);
        Ok(DirectSolver::new(&self.system).solve_fixed_point(q, g_t, &options)?)
    }
}

fn pair_json(v: Vec2) -> Value {
    json!({ "eps_n": num(v.v1), "eps_t": num(v.v2) })
}

fn series_diagnostics(series: &NeumannSeries, order: usize) -> Value {
    let residuals: Vec<Value> = series.orders()[..=order]
        .iter()
        .map(|o| num(o.pole_residual))
        .collect();
    json!({ "pole_residuals": residuals })
}

/// One jump-coefficient record.
pub fn run_point(cfg: &RunConfig) -> Result<Report, CliError> {
    let session = Session::new(cfg)?;
    let depth = if cfg.oracle {
        cfg.order.max(ORACLE_ORDER)
    } else {
        cfg.order
    };
    let series = session.series(depth)?;
    let result = series.assemble(cfg.q, cfg.g_t, cfg.order)?;

    let mut header = vec![
        "q".to_string(),
        "g_t".into(),
        "order".into(),
        "eps_n".into(),
        "eps_t".into(),
    ];
    let mut row = vec![
        Cell::Num(cfg.q),
        Cell::Num(cfg.g_t),
        Cell::Int(cfg.order),
        Cell::Num(result.eps_n),
        Cell::Num(result.eps_t),
    ];
    for (m, c) in result.coefficients.iter().enumerate() {
        header.push(format!("eps_n_{m}"));
        header.push(format!("eps_t_{m}"));
        row.push(Cell::Num(c.v1));
        row.push(Cell::Num(c.v2));
    }

    let mut results = json!({
        "q": num(cfg.q),
        "g_t": num(cfg.g_t),
        "order": cfg.order,
        "eps_n": num(result.eps_n),
        "eps_t": num(result.eps_t),
        "coefficients": result.coefficients.iter().enumerate()
            .map(|(m, &c)| json!({ "m": m, "eps_n": num(c.v1), "eps_t": num(c.v2) }))
            .collect::<Vec<_>>(),
    });

    if cfg.oracle {
        let sol = session.oracle(cfg.q, cfg.g_t, cfg.tol)?;
        let reference = series.assemble(cfg.q, cfg.g_t, ORACLE_ORDER)?;
        let deviation = (sol.eps.v1 - reference.eps_n)
            .abs()
            .max((sol.eps.v2 - reference.eps_t).abs());
        let requested = (sol.eps.v1 - result.eps_n)
            .abs()
            .max((sol.eps.v2 - result.eps_t).abs());
        for (name, cell) in [
            ("oracle_eps_n", Cell::Num(sol.eps.v1)),
            ("oracle_eps_t", Cell::Num(sol.eps.v2)),
            ("oracle_deviation", Cell::Num(deviation)),
            (
                "oracle_deviation_from_requested_order",
                Cell::Num(requested),
            ),
            ("oracle_iterations", Cell::Int(sol.iterations)),
            ("oracle_residual", Cell::Num(sol.final_residual)),
        ] {
            header.push(name.into());
            row.push(cell);
        }
        results["oracle"] = json!({
            "eps_n": num(sol.eps.v1),
            "eps_t": num(sol.eps.v2),
            "comparison_order": ORACLE_ORDER,
            "deviation": num(deviation),
            "deviation_from_requested_order": num(requested),
            "iterations": sol.iterations,
            "residual": num(sol.final_residual),
        });
    }

    let mut table = Table::new(header);
    table.push(row);
    Ok(Report {
        table,
        results: Some(results),
        diagnostics: json!({
            "mu_nodes": cfg.mu_nodes,
            "k_nodes": cfg.k_nodes,
            "map_scale": num(cfg.map_scale),
            "series": series_diagnostics(&series, cfg.order),
        }),
    })
}

/// Coefficients per unit gradient for a list of `q`, with the reference
/// values where they exist.
pub fn run_table(cfg: &RunConfig, q_list: &[f64]) -> Result<Report, CliError> {
    let q_list: Vec<f64> = if q_list.is_empty() {
        REFERENCE_Q.to_vec()
    } else {
        q_list.to_vec()
    };
    if let Some(bad) = q_list
        .iter()
        .find(|q| !(q.is_finite() && **q > 0.0 && **q <= 1.0))
    {
        return Err(CliError::Config(format!("q must lie in (0, 1], got {bad}")));
    }
    let session = Session::new(cfg)?;
    let depth = if cfg.oracle {
        cfg.order.max(ORACLE_ORDER)
    } else {
        cfg.order
    };
    let series = session.series(depth)?;

    let mut header = vec!["q", "eps_t", "eps_n", "reference_eps_t", "error_percent"];
    if cfg.oracle {
        header.extend(["oracle_eps_t", "oracle_eps_n"]);
    }
    let mut table = Table::new(header);
    for &q in &q_list {
        let r = series.assemble(q, 1.0, cfg.order)?;
        let cmp = compare(q, r.eps_t);
        let mut row = vec![
            Cell::Num(q),
            Cell::Num(r.eps_t),
            Cell::Num(r.eps_n),
            Cell::opt(cmp.reference),
            Cell::opt(cmp.error_percent),
        ];
        if cfg.oracle {
            let sol = session.oracle(q, 1.0, cfg.tol)?;
            row.push(Cell::Num(sol.eps.v2));
            row.push(Cell::Num(sol.eps.v1));
        }
        table.push(row);
    }
    Ok(Report {
        table,
        results: None,
        diagnostics: json!({
            "mu_nodes": cfg.mu_nodes,
            "k_nodes": cfg.k_nodes,
            "map_scale": num(cfg.map_scale),
            "series": series_diagnostics(&series, cfg.order),
            "reference_source": "discrete-ordinates values shipped as data",
        }),
    })
}

/// `(δn_c/n₀, δT_c/T₀)` on a uniform grid over `[0, x_max]`.
pub fn run_profile(cfg: &RunConfig, x_max: f64, points: usize) -> Result<Report, CliError> {
    if !(x_max.is_finite() && x_max > 0.0) {
        return Err(CliError::Config(format!(
            "x-max must be positive, got {x_max}"
        )));
    }
    if points < 2 {
        return Err(CliError::Config(format!(
            "points must be at least 2, got {points}"
        )));
    }
    let session = Session::new(cfg)?;
    let (eps, density, source): (Vec2, SpectralDensity, &str) = if cfg.oracle {
        let sol = session.oracle(cfg.q, cfg.g_t, cfg.tol)?;
        (sol.eps, sol.density, "fixed-point")
    } else {
        let series = session.series(cfg.order)?;
        let r = series.assemble(cfg.q, cfg.g_t, cfg.order)?;
        let e = series.assembled_density(cfg.q, cfg.g_t, cfg.order)?;
        (Vec2::new(r.eps_n, r.eps_t), e, "series")
    };

    let step = x_max / (points - 1) as f64;
    let xs: Vec<f64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                x_max
            } else {
                i as f64 * step
            }
        })
        .collect();
    let profile = macroscopic_profile(&xs, &density)?;

    let mut table = Table::new(["x", "dn", "dt"]);
    for (&x, v) in profile.x_grid.iter().zip(&profile.values) {
        table.push(vec![Cell::Num(x), Cell::Num(v.v1), Cell::Num(v.v2)]);
    }
    let boundary = tempjump::boundary_distribution(0.0, &density);
    let wall = wall_perturbation(eps, &density);
    Ok(Report {
        table,
        results: None,
        diagnostics: json!({
            "density_source": source,
            "jumps": pair_json(eps),
            "boundary_distribution_mu0": { "dn": num(boundary.v1), "dt": num(boundary.v2) },
            "wall_perturbation": { "dn": num(wall.v1), "dt": num(wall.v2) },
            "warnings": profile.warnings,
        }),
    })
}
