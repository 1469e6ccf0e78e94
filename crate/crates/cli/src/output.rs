//! CSV and JSON writers, and the reader used by `slice`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fsg_core::basis::eval_expansion;
use fsg_core::reference::ConvergenceRow;
use fsg_core::{Mesh, MomentField, RunReport};
use serde::Serialize;

/// 17 significant digits, enough to read back the same f64.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn coords(mesh: &Mesh, j: usize) -> Vec<String> {
    let c = mesh.center(j);
    if mesh.dim() == 2 {
        vec![num(c[0]), num(c[1])]
    } else {
        vec![num(c[0])]
    }
}

fn coord_header(mesh: &Mesh) -> Vec<String> {
    if mesh.dim() == 2 {
        vec!["x".into(), "y".into()]
    } else {
        vec!["x".into()]
    }
}

/// Full moment dump: `x[,y],state,mean,variance,m0..mN`, one row per active
/// cell and state.
pub fn write_field(path: &Path, mesh: &Mesh, field: &MomentField) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = coord_header(mesh);
    header.extend(["state", "mean", "variance"].map(String::from));
    header.extend((0..=field.order()).map(|i| format!("m{i}")));
    w.write_record(&header)?;
    for j in (0..mesh.cells()).filter(|&j| mesh.is_active(j)) {
        for s in 0..field.states() {
            let (mean, var) = field.mean_and_variance(s, j);
            let mut row = coords(mesh, j);
            row.push(s.to_string());
            row.push(num(mean));
            row.push(num(var));
            row.extend(field.coeffs(s, j).iter().map(|&v| num(v)));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One scalar per active cell and state: `x[,y],state,<column>`.
pub fn write_cell_values(
    path: &Path,
    mesh: &Mesh,
    states: usize,
    column: &str,
    value: impl Fn(usize, usize) -> f64,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = coord_header(mesh);
    header.push("state".into());
    header.push(column.into());
    w.write_record(&header)?;
    for j in (0..mesh.cells()).filter(|&j| mesh.is_active(j)) {
        for s in 0..states {
            let mut row = coords(mesh, j);
            row.push(s.to_string());
            row.push(num(value(s, j)));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ReportJson<'a> {
    pub scenario: &'a str,
    pub physics: &'a str,
    pub closure: &'a str,
    pub filter: &'a str,
    pub lambda: f64,
    pub order: usize,
    pub nx: usize,
    pub ny: usize,
    pub threads: usize,
    pub steps: usize,
    pub final_time: f64,
    pub wall_time_s: f64,
    pub min_dt: f64,
    pub max_dt: f64,
    pub initial_totals: &'a [f64],
    pub final_totals: &'a [f64],
    pub outflow: &'a [f64],
    pub conservation_drift: Vec<f64>,
    pub dual_iterations: usize,
}

impl<'a> ReportJson<'a> {
    pub fn new(scenario: &'a fsg_core::Scenario, report: &'a RunReport) -> Self {
        let cfg = &scenario.solver;
        Self {
            scenario: &scenario.name,
            physics: scenario.physics.name(),
            closure: cfg.closure.name(),
            filter: cfg.filter.kind.name(),
            lambda: cfg.filter.lambda,
            order: cfg.order,
            nx: scenario.domain.nx,
            ny: scenario.domain.ny,
            threads: rayon::current_num_threads(),
            steps: report.steps,
            final_time: report.final_time,
            wall_time_s: report.wall_time_s,
            min_dt: report.min_dt,
            max_dt: report.max_dt,
            initial_totals: &report.initial_totals,
            final_totals: &report.final_totals,
            outflow: &report.outflow,
            conservation_drift: report.conservation_drift(),
            dual_iterations: report.dual_iterations,
        }
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

pub const CONVERGENCE_HEADER: [&str; 7] =
    ["N", "closure", "filter", "error_solution", "error_mean", "error_variance", "walltime_s"];

pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(CONVERGENCE_HEADER)?;
    for r in rows {
        w.write_record([
            r.order.to_string(),
            r.closure.name().to_string(),
            method_filter_name(r),
            num(r.error_solution),
            num(r.error_mean),
            num(r.error_variance),
            num(r.walltime_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn method_filter_name(r: &ConvergenceRow) -> String {
    use fsg_core::FilterKind::*;
    match r.filter.kind {
        L2 | LassoFixed => format!("{}({})", r.filter.kind.name(), r.filter.lambda),
        _ => r.filter.kind.name().to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slopes {
    pub closure: String,
    pub filter: String,
    pub solution: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Log-log slope over N of each error column, per method; empty when fewer
/// than two orders were run.
pub fn slopes(rows: &[ConvergenceRow]) -> Result<Vec<Slopes>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < rows.len() {
        let key = (rows[i].closure, rows[i].filter);
        let group: Vec<&ConvergenceRow> = rows[i..].iter().take_while(|r| (r.closure, r.filter) == key).collect();
        i += group.len();
        if group.len() < 2 {
            continue;
        }
        let n: Vec<f64> = group.iter().map(|r| r.order as f64).collect();
        let fit = |f: fn(&ConvergenceRow) -> f64| {
            let y: Vec<f64> = group.iter().map(|r| f(r)).collect();
            fsg_core::reference::loglog_slope(&n, &y).map_err(anyhow::Error::from)
        };
        out.push(Slopes {
            closure: group[0].closure.name().into(),
            filter: method_filter_name(group[0]),
            solution: fit(|r| r.error_solution)?,
            mean: fit(|r| r.error_mean)?,
            variance: fit(|r| r.error_variance)?,
        });
    }
    Ok(out)
}

pub fn write_slopes(path: &Path, slopes: &[Slopes]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["closure", "filter", "slope_solution", "slope_mean", "slope_variance"])?;
    for s in slopes {
        w.write_record([s.closure.clone(), s.filter.clone(), num(s.solution), num(s.mean), num(s.variance)])?;
    }
    w.flush()?;
    Ok(())
}

/// A moment field read back from `field.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub dim: usize,
    pub order: usize,
    pub rows: Vec<FieldRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldRow {
    pub x: f64,
    pub y: f64,
    pub state: usize,
    pub coeffs: Vec<f64>,
}

pub fn read_field(path: &Path) -> Result<FieldTable> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header = r.headers()?.clone();
    let dim = match header.get(1) {
        Some("y") => 2,
        Some("state") => 1,
        _ => bail!("{} is not a field CSV", path.display()),
    };
    let first_moment = dim + 3;
    let order = header
        .len()
        .checked_sub(first_moment + 1)
        .ok_or_else(|| anyhow!("{} has no moment columns", path.display()))?;
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let f = |k: usize| -> Result<f64> {
            rec.get(k)
                .ok_or_else(|| anyhow!("row {}: missing column {k}", line + 2))?
                .parse::<f64>()
                .with_context(|| format!("row {}, column {k}", line + 2))
        };
        rows.push(FieldRow {
            x: f(0)?,
            y: if dim == 2 { f(1)? } else { 0.0 },
            state: rec.get(dim).unwrap_or("").parse().with_context(|| format!("row {}: state", line + 2))?,
            coeffs: (first_moment..first_moment + order + 1).map(f).collect::<Result<_>>()?,
        });
    }
    if rows.is_empty() {
        bail!("{} has no rows", path.display());
    }
    Ok(FieldTable { dim, order, rows })
}

fn spacing(values: impl Iterator<Item = f64>) -> Option<(f64, f64, f64)> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    let h = v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if h.is_finite() {
        Some((v[0], *v.last().unwrap(), h))
    } else {
        None
    }
}

/// Evaluate the expansion of the cell containing (x, y) on `points` equally
/// spaced ξ in [-1, 1]. Returns `(state, ξ, value)`.
pub fn slice(table: &FieldTable, x: f64, y: Option<f64>, points: usize) -> Result<Vec<(usize, f64, f64)>> {
    if points < 2 {
        bail!("a slice needs at least two ξ points");
    }
    let locate = |pos: f64, axis: &str, get: fn(&FieldRow) -> f64| -> Result<f64> {
        let (lo, hi, h) = spacing(table.rows.iter().map(get))
            .ok_or_else(|| anyhow!("cannot infer the cell width in {axis} from a single column of cells"))?;
        if !(pos >= lo - 0.5 * h && pos <= hi + 0.5 * h) {
            bail!("{axis} = {pos} lies outside the field [{}, {}]", lo - 0.5 * h, hi + 0.5 * h);
        }
        Ok(h)
    };
    let hx = locate(x, "x", |r| r.x)?;
    let (y, hy) = match (table.dim, y) {
        (2, Some(y)) => (y, locate(y, "y", |r| r.y)?),
        (2, None) => bail!("a 2D field needs --y"),
        (_, Some(_)) => bail!("--y given for a 1D field"),
        _ => (0.0, f64::INFINITY),
    };
    // first cell whose closed extent contains the point
    let inside = |r: &FieldRow| (x - r.x).abs() <= 0.5 * hx * (1.0 + 1e-12) && (y - r.y).abs() <= 0.5 * hy * (1.0 + 1e-12);
    let first = table.rows.iter().find(|r| inside(r)).ok_or_else(|| anyhow!("({x}, {y}) is not inside an active cell"))?;
    let cell: Vec<&FieldRow> = table.rows.iter().filter(|r| r.x == first.x && r.y == first.y).collect();

    let mut out = Vec::with_capacity(cell.len() * points);
    for r in cell {
        for k in 0..points {
            let xi = -1.0 + 2.0 * k as f64 / (points - 1) as f64;
            out.push((r.state, xi, eval_expansion(&r.coeffs, xi)?));
        }
    }
    Ok(out)
}

pub fn write_slice(path: &Path, rows: &[(usize, f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["state", "xi", "value"])?;
    for &(s, xi, v) in rows {
        w.write_record([s.to_string(), num(xi), num(v)])?;
    }
    w.flush()?;
    Ok(())
}
