//! Final-line errors against exact solutions and convergence-order fits.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::ExactSolution;
use crate::solver::SolutionField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    U,
    P,
    Q,
    A,
    B,
}

impl Variable {
    pub const ALL: [Variable; 5] = [Variable::U, Variable::P, Variable::Q, Variable::A, Variable::B];

    pub fn name(self) -> &'static str {
        match self {
            Variable::U => "u",
            Variable::P => "p",
            Variable::Q => "q",
            Variable::A => "a",
            Variable::B => "b",
        }
    }
}

/// Deviation on the last grid line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalError {
    /// `max_j |exact - numeric| / N_y`.
    pub scaled: f64,
    /// `max_j |exact - numeric|`.
    pub max_abs: f64,
}

pub fn global_error(field: &SolutionField, exact: Option<&ExactSolution>, variable: Variable) -> Result<GlobalError> {
    let ex = exact.ok_or_else(|| Error::ExactUnavailable("field".into()))?;
    let line = field.final_line();
    let (num, f) = match variable {
        Variable::U => (&line.u, &ex.u),
        Variable::P => (&line.p, &ex.p),
        Variable::Q => (&line.q, &ex.q),
        Variable::A => (&line.a, &ex.a),
        Variable::B => (&line.b, &ex.b),
    };
    let max_abs = line
        .y
        .iter()
        .zip(num)
        .map(|(&y, &v)| (f(line.x, y) - v).abs())
        .fold(0.0, f64::max);
    Ok(GlobalError {
        scaled: max_abs / field.n_y() as f64,
        max_abs,
    })
}

/// One refinement level of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEntry {
    pub n_y: usize,
    pub h_y: f64,
    pub n_x: usize,
    /// Per variable in [`Variable::ALL`] order; absent without an exact solution.
    pub errors: Option<[GlobalError; 5]>,
    pub eps1: f64,
    pub eps2: f64,
    pub wall_time: f64,
}

/// Quantity a convergence order can be fitted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    /// Unscaled final-line max deviation.
    MaxAbs(Variable),
    /// Final-line deviation with the `1/N_y` factor.
    Scaled(Variable),
    Eps1,
    Eps2,
}

impl Column {
    pub fn name(self) -> String {
        match self {
            Column::MaxAbs(v) => format!("E_{}", v.name()),
            Column::Scaled(v) => format!("E_{}_scaled", v.name()),
            Column::Eps1 => "eps1".into(),
            Column::Eps2 => "eps2".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceRecord {
    entries: Vec<ConvergenceEntry>,
}

impl ConvergenceRecord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an entry; `h_y` must be strictly below the previous one.
    pub fn push(&mut self, entry: ConvergenceEntry) -> Result<()> {
        if let Some(last) = self.entries.last() {
            if !(entry.h_y < last.h_y) {
                return Err(Error::NonDecreasingStep);
            }
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[ConvergenceEntry] {
        &self.entries
    }

    pub fn has_errors(&self) -> bool {
        self.entries.iter().all(|e| e.errors.is_some())
    }

    pub fn column(&self, column: Column) -> Option<Vec<f64>> {
        self.entries
            .iter()
            .map(|e| match column {
                Column::MaxAbs(v) => e.errors.map(|er| er[v as usize].max_abs),
                Column::Scaled(v) => e.errors.map(|er| er[v as usize].scaled),
                Column::Eps1 => Some(e.eps1),
                Column::Eps2 => Some(e.eps2),
            })
            .collect()
    }

    /// CSV with one header row. Wall time is left out so reruns compare equal.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_y,h_y,n_x");
        for v in Variable::ALL {
            let _ = write!(s, ",E_{0}_scaled,E_{0}", v.name());
        }
        s.push_str(",eps1,eps2\n");
        for e in &self.entries {
            let _ = write!(s, "{},{:.16e},{}", e.n_y, e.h_y, e.n_x);
            match e.errors {
                Some(errs) => {
                    for g in errs {
                        let _ = write!(s, ",{:.16e},{:.16e}", g.scaled, g.max_abs);
                    }
                }
                None => s.push_str(&",".repeat(10)),
            }
            let _ = writeln!(s, ",{:.16e},{:.16e}", e.eps1, e.eps2);
        }
        s
    }
}

/// Least-squares slope of `log(err)` against `log(h_y)` for one column.
pub fn fit_order(record: &ConvergenceRecord, column: Column) -> Result<f64> {
    let values = record
        .column(column)
        .ok_or_else(|| Error::ExactUnavailable(column.name()))?;
    let hs: Vec<f64> = record.entries.iter().map(|e| e.h_y).collect();
    fit_power_law(&hs, &values)
}

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn fit_power_law(h: &[f64], err: &[f64]) -> Result<f64> {
    if h.len() < 3 || h.len() != err.len() {
        return Err(Error::TooFewEntries(h.len().min(err.len())));
    }
    if err.iter().chain(h).any(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveError);
    }
    let lx: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(hs: &[f64], f: impl Fn(f64) -> f64) -> ConvergenceRecord {
        let mut r = ConvergenceRecord::new();
        for (k, &h) in hs.iter().enumerate() {
            r.push(ConvergenceEntry {
                n_y: 10 * (k + 1),
                h_y: h,
                n_x: 1,
                errors: None,
                eps1: f(h),
                eps2: f(h),
                wall_time: 0.0,
            })
            .unwrap();
        }
        r
    }

    #[test]
    fn exact_power_law() {
        let r = record(&[0.1, 0.05, 0.025, 0.0125], |h| 3.0 * h * h);
        assert!((fit_order(&r, Column::Eps1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let r = record(&[0.1], |h| h);
        assert!(matches!(fit_order(&r, Column::Eps1), Err(Error::TooFewEntries(1))));
        let r = record(&[0.1, 0.05, 0.02], |h| h - 0.05);
        assert!(matches!(fit_order(&r, Column::Eps1), Err(Error::NonPositiveError)));
        assert!(fit_order(&record(&[0.1, 0.05, 0.02], |h| h), Column::MaxAbs(Variable::U)).is_err());
        let mut r = record(&[0.1, 0.05], |h| h);
        let mut e = r.entries()[1].clone();
        e.h_y = 0.05;
        assert!(matches!(r.push(e), Err(Error::NonDecreasingStep)));
    }

    #[test]
    fn csv_header_names_every_column() {
        let r = record(&[0.1, 0.05, 0.02], |h| h);
        let csv = r.to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 15);
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 15));
    }
}
