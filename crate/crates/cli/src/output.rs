use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hma_core::solver::SolutionField;

/// Grid values, one row per node, x-index major, 1-based indices.
pub fn field_csv(field: &SolutionField) -> String {
    let mut s = String::from("i,j,x,y,u,p,q,a,b\n");
    for (i, line) in field.lines.iter().enumerate() {
        for j in 0..line.len() {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                i + 1,
                j + 1,
                line.x,
                line.y[j],
                line.u[j],
                line.p[j],
                line.q[j],
                line.a[j],
                line.b[j]
            );
        }
    }
    s
}

pub fn polyline_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("x,y\n");
    for (x, y) in points {
        let _ = writeln!(s, "{x:.16e},{y:.16e}");
    }
    s
}

pub fn write_text(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<()> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    write_text(dir, name, &body)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// JSON number, or null for values JSON cannot hold.
pub fn num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}
