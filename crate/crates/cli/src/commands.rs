use std::thread;
use std::time::Instant;

use anyhow::{anyhow, Result};
use hma_core::metrics::{fit_order, global_error, Column, ConvergenceEntry, ConvergenceRecord, GlobalError, Variable};
use hma_core::problem::ProblemSpec;
use hma_core::residual::{residual_map, ResidualEvaluator};
use hma_core::solver::{solve, SolutionField, SolverConfig, Tracer};
use serde_json::{json, Map, Value};

use crate::config::{ConvergenceConfig, Direction, ResidualConfig, RunConfig, TraceConfig};
use crate::output::{ensure_dir, field_csv, num, polyline_csv, unix_timestamp, write_json, write_text};

const NO_EXACT_NOTE: &str = "no exact solution";

fn final_line_errors(spec: &ProblemSpec, field: &SolutionField) -> Result<Option<[GlobalError; 5]>> {
    let Some(exact) = spec.exact.as_ref() else {
        return Ok(None);
    };
    let mut out = [GlobalError { scaled: 0.0, max_abs: 0.0 }; 5];
    for (slot, v) in out.iter_mut().zip(Variable::ALL) {
        *slot = global_error(field, Some(exact), v)?;
    }
    Ok(Some(out))
}

fn errors_json(errors: &[GlobalError; 5]) -> Value {
    let mut m = Map::new();
    for (v, e) in Variable::ALL.iter().zip(errors) {
        m.insert(v.name().into(), json!({ "max_abs": num(e.max_abs), "scaled": num(e.scaled) }));
    }
    Value::Object(m)
}

fn base_meta(run: &RunConfig, command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("config".into(), run.echo());
    m.insert("timestamp_unix".into(), json!(unix_timestamp()));
    m
}

fn field_meta(m: &mut Map<String, Value>, field: &SolutionField) {
    m.insert("n_x".into(), json!(field.n_x()));
    m.insert("h_y".into(), num(field.h_y()));
    m.insert(
        "diagnostics".into(),
        json!({
            "crossings": field.diagnostics.crossings,
            "boundary_extrapolations": field.diagnostics.boundary_extrapolations,
        }),
    );
}

fn insert_errors(m: &mut Map<String, Value>, errors: Option<&[GlobalError; 5]>) {
    match errors {
        Some(e) => {
            m.insert("final_line_errors".into(), errors_json(e));
        }
        None => {
            m.insert("note".into(), json!(NO_EXACT_NOTE));
        }
    }
}

pub fn cmd_solve(run: &RunConfig) -> Result<()> {
    ensure_dir(&run.output_dir)?;
    let start = Instant::now();
    let field = solve(&run.spec, run.n_y, run.solver)?;
    let wall = start.elapsed().as_secs_f64();
    let errors = final_line_errors(&run.spec, &field)?;

    let mut meta = base_meta(run, "solve");
    field_meta(&mut meta, &field);
    meta.insert("wall_time_s".into(), num(wall));
    insert_errors(&mut meta, errors.as_ref());

    write_text(&run.output_dir, "field.csv", &field_csv(&field))?;
    write_json(&run.output_dir, "meta.json", &Value::Object(meta))?;
    if let Some(e) = errors {
        println!("N_x = {}, E[u] = {:.3e}", field.n_x(), e[0].max_abs);
    } else {
        println!("N_x = {}, {NO_EXACT_NOTE}", field.n_x());
    }
    Ok(())
}

fn convergence_entry(spec: &ProblemSpec, n_y: usize, cfg: SolverConfig) -> Result<ConvergenceEntry> {
    let start = Instant::now();
    let field = solve(spec, n_y, cfg)?;
    let map = residual_map(&field, spec.f.as_ref())?;
    let errors = final_line_errors(spec, &field)?;
    Ok(ConvergenceEntry {
        n_y,
        h_y: field.h_y(),
        n_x: field.n_x(),
        errors,
        eps1: map.eps1,
        eps2: map.eps2,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn fitted_columns() -> Vec<Column> {
    let mut cols = Vec::new();
    for v in Variable::ALL {
        cols.push(Column::MaxAbs(v));
        cols.push(Column::Scaled(v));
    }
    cols.push(Column::Eps1);
    cols.push(Column::Eps2);
    cols
}

pub fn cmd_convergence(cfg: &ConvergenceConfig) -> Result<()> {
    let run = &cfg.run;
    ensure_dir(&run.output_dir)?;
    // Solves are independent; results are collected back in list order.
    let results: Vec<Result<ConvergenceEntry>> = thread::scope(|s| {
        let handles: Vec<_> = cfg
            .n_y_list
            .iter()
            .map(|&n| s.spawn(move || convergence_entry(&run.spec, n, run.solver)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(anyhow!("solver thread panicked"))))
            .collect()
    });
    let mut record = ConvergenceRecord::new();
    for (n, r) in cfg.n_y_list.iter().zip(results) {
        let entry = r.map_err(|e| e.context(format!("solve at N_y = {n}")))?;
        record.push(entry)?;
    }

    let mut orders = Map::new();
    for col in fitted_columns() {
        let v = fit_order(&record, col).map_or(Value::Null, num);
        orders.insert(col.name(), v);
    }

    let mut meta = base_meta(run, "convergence");
    meta.insert("n_y_list".into(), json!(cfg.n_y_list));
    let levels: Vec<Value> = record
        .entries()
        .iter()
        .map(|e| json!({ "n_y": e.n_y, "n_x": e.n_x, "wall_time_s": num(e.wall_time) }))
        .collect();
    meta.insert("levels".into(), Value::Array(levels));
    if !record.has_errors() {
        meta.insert("note".into(), json!(NO_EXACT_NOTE));
    }

    write_text(&run.output_dir, "convergence.csv", &record.to_csv())?;
    write_json(&run.output_dir, "orders.json", &Value::Object(orders.clone()))?;
    write_json(&run.output_dir, "meta.json", &Value::Object(meta))?;
    for key in ["E_u", "eps1"] {
        match orders.get(key).and_then(Value::as_f64) {
            Some(v) => println!("order {key}: {v:.3}"),
            None => println!("order {key}: n/a"),
        }
    }
    Ok(())
}

/// Exact values on uniform x-lines spaced about `h_y` apart.
fn exact_field(run: &RunConfig) -> Result<SolutionField> {
    let d = run.spec.domain;
    let h_y = (d.y_max - d.y_min) / (run.n_y - 1) as f64;
    let n_x = (((d.x_max - d.x_min) / h_y).round() as usize + 1).max(3);
    let xs: Vec<f64> = (0..n_x)
        .map(|i| d.x_min + (d.x_max - d.x_min) * i as f64 / (n_x - 1) as f64)
        .collect();
    Ok(SolutionField::from_exact(&run.spec, xs, run.n_y)?)
}

pub fn cmd_residual(cfg: &ResidualConfig) -> Result<()> {
    let run = &cfg.run;
    ensure_dir(&run.output_dir)?;
    let start = Instant::now();
    let field = if cfg.from_exact { exact_field(run)? } else { solve(&run.spec, run.n_y, run.solver)? };
    let map = ResidualEvaluator::new(&field, run.spec.f.as_ref(), cfg.gauss_points)?.map()?;
    let wall = start.elapsed().as_secs_f64();

    let mut meta = base_meta(run, "residual");
    meta.insert("source".into(), json!(if cfg.from_exact { "exact" } else { "solve" }));
    meta.insert("gauss_points".into(), json!(cfg.gauss_points));
    field_meta(&mut meta, &field);
    meta.insert("wall_time_s".into(), num(wall));
    meta.insert("eps1".into(), num(map.eps1));
    meta.insert("eps2".into(), num(map.eps2));
    if let Some(c) = map.argmax_eps1() {
        meta.insert("argmax_eps1".into(), json!({ "i": c.i + 1, "j": c.j + 1, "x": num(c.x_center), "y": num(c.y_center) }));
    }

    write_text(&run.output_dir, "residual.csv", &map.to_csv())?;
    write_json(&run.output_dir, "meta.json", &Value::Object(meta))?;
    println!("eps1 = {:.3e}, eps2 = {:.3e}", map.eps1, map.eps2);
    Ok(())
}

/// Part of a full characteristic walked away from `start`.
fn select(points: Vec<(f64, f64)>, start: (f64, f64), direction: Direction) -> Vec<(f64, f64)> {
    let k = points.iter().position(|&p| p == start).unwrap_or(0);
    match direction {
        Direction::Full => points,
        Direction::Forward => points[k..].to_vec(),
        Direction::Backward => points[..=k].iter().rev().copied().collect(),
    }
}

pub fn cmd_trace(cfg: &TraceConfig) -> Result<()> {
    let run = &cfg.run;
    ensure_dir(&run.output_dir)?;
    let field = solve(&run.spec, run.n_y, run.solver)?;
    let tracer = Tracer::new(&field)?;

    let mut files = Vec::new();
    for (k, &start) in cfg.starts.iter().enumerate() {
        for &family in &cfg.families {
            let pts = select(tracer.trace(start, family)?, start, cfg.direction);
            let name = format!("trace_{:02}_{}.csv", k + 1, family.name());
            write_text(&run.output_dir, &name, &polyline_csv(&pts))?;
            let (first, last) = (pts[0], pts[pts.len() - 1]);
            files.push(json!({
                "file": name,
                "start": [num(start.0), num(start.1)],
                "family": family.name(),
                "first": [num(first.0), num(first.1)],
                "last": [num(last.0), num(last.1)],
            }));
        }
    }

    let mut meta = base_meta(run, "trace");
    field_meta(&mut meta, &field);
    meta.insert("direction".into(), json!(cfg.direction.name()));
    meta.insert("polylines".into(), Value::Array(files));
    write_json(&run.output_dir, "meta.json", &Value::Object(meta))?;
    println!("{} polylines", cfg.starts.len() * cfg.families.len());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_walks_away_from_start() {
        let pts = vec![(0.0, 0.0), (0.5, 0.1), (1.0, 0.3)];
        assert_eq!(select(pts.clone(), (0.5, 0.1), Direction::Full), pts);
        assert_eq!(select(pts.clone(), (0.5, 0.1), Direction::Forward), vec![(0.5, 0.1), (1.0, 0.3)]);
        assert_eq!(select(pts, (0.5, 0.1), Direction::Backward), vec![(0.5, 0.1), (0.0, 0.0)]);
    }

    #[test]
    fn fitted_columns_cover_every_csv_quantity() {
        let names: Vec<String> = fitted_columns().into_iter().map(Column::name).collect();
        assert_eq!(names.len(), 12);
        assert!(names.contains(&"E_u".to_string()));
        assert!(names.contains(&"E_b_scaled".to_string()));
        assert!(names.contains(&"eps2".to_string()));
    }
}
