//! The march from the western strip to `x_max`.
//!
//! The y-grid is uniform. The x-step is chosen per line so that no
//! characteristic moves more than `gamma * h_y` vertically, which keeps the
//! fronts' extrapolation distance below one grid spacing. Refining `h_y` thus
//! refines the whole grid.

use crate::boundary::vertical_strip_point;
use crate::bspline::Spline;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::stepper::{Family, GridLine, Method, StepConfig, StepDiagnostics, Stepper};

pub const DEFAULT_GAMMA: f64 = 0.95;

/// Upper bound on the number of x-steps before a solve is declared runaway.
const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Spline order, i.e. interpolation degree + 1.
    pub spline_order: usize,
    pub gamma: f64,
    /// Use exact slopes instead of interpolated ones (needs an exact solution).
    pub oracle_slopes: bool,
}

impl SolverConfig {
    /// Method with its matching spline order and the default `gamma`.
    pub fn new(method: Method) -> Self {
        Self {
            method,
            spline_order: method.default_spline_order(),
            gamma: DEFAULT_GAMMA,
            oracle_slopes: false,
        }
    }

    pub fn with_spline_order(mut self, order: usize) -> Self {
        self.spline_order = order;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_oracle_slopes(mut self, on: bool) -> Self {
        self.oracle_slopes = on;
        self
    }

    pub fn validate(&self, n_y: usize) -> Result<()> {
        if self.spline_order < 2 || self.spline_order > crate::bspline::MAX_DEGREE + 1 {
            return Err(Error::InvalidConfig(format!(
                "spline order {} outside 2..={}",
                self.spline_order,
                crate::bspline::MAX_DEGREE + 1
            )));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::InvalidConfig(format!("gamma {} outside (0, 1]", self.gamma)));
        }
        if n_y < 2 * self.spline_order + 3 {
            return Err(Error::InvalidConfig(format!(
                "n_y = {n_y} too small for spline order {} (need at least {})",
                self.spline_order,
                2 * self.spline_order + 3
            )));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::new(Method::Rk4)
    }
}

/// Grid values of a solve, one [`GridLine`] per x-abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub lines: Vec<GridLine>,
    pub config: SolverConfig,
    pub diagnostics: StepDiagnostics,
}

impl SolutionField {
    pub fn n_x(&self) -> usize {
        self.xs.len()
    }

    pub fn n_y(&self) -> usize {
        self.ys.len()
    }

    pub fn h_y(&self) -> f64 {
        self.ys[1] - self.ys[0]
    }

    pub fn final_line(&self) -> &GridLine {
        self.lines.last().expect("at least one grid line")
    }

    /// Field filled with exact values on the given abscissae.
    pub fn from_exact(spec: &ProblemSpec, xs: Vec<f64>, n_y: usize) -> Result<Self> {
        let ex = spec.exact()?;
        let ys = uniform_ys(spec, n_y)?;
        let lines = xs
            .iter()
            .map(|&x| GridLine {
                x,
                y: ys.clone(),
                u: ys.iter().map(|&y| (ex.u)(x, y)).collect(),
                p: ys.iter().map(|&y| (ex.p)(x, y)).collect(),
                q: ys.iter().map(|&y| (ex.q)(x, y)).collect(),
                a: ys.iter().map(|&y| (ex.a)(x, y)).collect(),
                b: ys.iter().map(|&y| (ex.b)(x, y)).collect(),
            })
            .collect();
        Ok(Self {
            xs,
            ys,
            lines,
            config: SolverConfig::default(),
            diagnostics: StepDiagnostics::default(),
        })
    }
}

/// Uniform ordinates `y_min..=y_max`, the last one set exactly to `y_max`.
pub fn uniform_ys(spec: &ProblemSpec, n_y: usize) -> Result<Vec<f64>> {
    if n_y < 2 {
        return Err(Error::InvalidConfig(format!("n_y = {n_y} < 2")));
    }
    let d = spec.domain;
    let h = (d.y_max - d.y_min) / (n_y - 1) as f64;
    let mut ys: Vec<f64> = (0..n_y).map(|j| d.y_min + j as f64 * h).collect();
    ys[n_y - 1] = d.y_max;
    Ok(ys)
}

/// `gamma * h_y * min_j {1, 1/|a_j|, 1/|b_j|}`.
pub fn adaptive_hx(a_row: &[f64], b_row: &[f64], h_y: f64, gamma: f64) -> f64 {
    let steepest = a_row
        .iter()
        .chain(b_row)
        .fold(1.0f64, |m, s| m.max(s.abs()));
    gamma * h_y / steepest
}

/// Data on the western strip.
pub fn initial_line(spec: &ProblemSpec, ys: &[f64]) -> Result<GridLine> {
    let x = spec.domain.x_min;
    let mut line = GridLine {
        x,
        y: ys.to_vec(),
        u: Vec::with_capacity(ys.len()),
        p: Vec::with_capacity(ys.len()),
        q: Vec::with_capacity(ys.len()),
        a: Vec::with_capacity(ys.len()),
        b: Vec::with_capacity(ys.len()),
    };
    for &y in ys {
        let pt = vertical_strip_point(&spec.west_u, &spec.west_p, (spec.f)(x, y), y)?;
        line.u.push(pt.u);
        line.p.push(pt.p);
        line.q.push(pt.q);
        line.a.push(pt.a);
        line.b.push(pt.b);
    }
    Ok(line)
}

fn check_line(line: &GridLine) -> Result<()> {
    if !line.all_finite() {
        return Err(Error::Diverged { x: line.x });
    }
    for j in 0..line.len() {
        let (a, b) = (line.a[j], line.b[j]);
        if (a - b).abs() <= 1e-12 * (a.abs() + b.abs()) {
            return Err(Error::HyperbolicityLost { x: line.x, y: line.y[j] });
        }
    }
    Ok(())
}

/// Marches from `x_min` to `x_max` on an `n_y`-point y-grid.
pub fn solve(spec: &ProblemSpec, n_y: usize, config: SolverConfig) -> Result<SolutionField> {
    config.validate(n_y)?;
    let ys = uniform_ys(spec, n_y)?;
    let h_y = ys[1] - ys[0];
    let x_max = spec.domain.x_max;
    let mut stepper = Stepper::new(
        spec,
        StepConfig {
            method: config.method,
            degree: config.spline_order - 1,
            h_y,
            oracle_slopes: config.oracle_slopes,
        },
    )?;
    let first = initial_line(spec, &ys)?;
    check_line(&first)?;
    let mut lines = vec![first];
    loop {
        let line = lines.last().expect("non-empty");
        let x = line.x;
        let remaining = x_max - x;
        if remaining <= 0.0 {
            break;
        }
        if lines.len() > MAX_STEPS {
            return Err(Error::Diverged { x });
        }
        let mut h = adaptive_hx(&line.a, &line.b, h_y, config.gamma);
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Diverged { x });
        }
        // Spread the remainder evenly so the step size never jumps near x_max.
        let steps_left = (remaining / h).ceil();
        h = if steps_left <= 1.0 { remaining } else { remaining / steps_left };
        let mut next = stepper.step(line, h)?;
        if h == remaining {
            next.x = x_max;
        }
        check_line(&next)?;
        lines.push(next);
    }
    Ok(SolutionField {
        xs: lines.iter().map(|l| l.x).collect(),
        ys,
        lines,
        config,
        diagnostics: stepper.diagnostics,
    })
}

/// Slope field through a solution, for tracing characteristics after a solve.
pub struct Tracer<'a> {
    field: &'a SolutionField,
    a: Vec<Spline>,
    b: Vec<Spline>,
}

impl<'a> Tracer<'a> {
    /// Fits a cubic spline in y to each line's slopes.
    pub fn new(field: &'a SolutionField) -> Result<Self> {
        let degree = 3.min(field.n_y() - 1);
        let fit = |v: &Vec<f64>| Spline::fit(&field.ys, v, degree);
        let a = field.lines.iter().map(|l| fit(&l.a)).collect::<Result<_>>()?;
        let b = field.lines.iter().map(|l| fit(&l.b)).collect::<Result<_>>()?;
        Ok(Self { field, a, b })
    }

    /// Slope of `family` at `(x, y)`, linear in x between grid lines.
    pub fn slope(&self, family: Family, x: f64, y: f64) -> f64 {
        let s = match family {
            Family::Alpha => &self.a,
            Family::Beta => &self.b,
        };
        let xs = &self.field.xs;
        if xs.len() == 1 {
            return s[0].eval(y);
        }
        let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1) - 1;
        let theta = ((x - xs[i]) / (xs[i + 1] - xs[i])).clamp(0.0, 1.0);
        (1.0 - theta) * s[i].eval(y) + theta * s[i + 1].eval(y)
    }

    /// The characteristic of `family` through `start`, from its entry edge to
    /// its exit edge, ordered by increasing x.
    pub fn trace(&self, start: (f64, f64), family: Family) -> Result<Vec<(f64, f64)>> {
        let field = self.field;
        let (x0, y0) = start;
        let (y_min, y_max) = (field.ys[0], field.ys[field.n_y() - 1]);
        let (x_min, x_max) = (field.xs[0], field.xs[field.n_x() - 1]);
        if !(x0 >= x_min && x0 <= x_max && y0 >= y_min && y0 <= y_max) {
            return Err(Error::TraceStartOutside { x: x0, y: y0 });
        }
        let mut backward = self.march(start, family, false, (y_min, y_max));
        let forward = self.march(start, family, true, (y_min, y_max));
        backward.reverse();
        backward.extend_from_slice(&forward[1..]);
        Ok(backward)
    }

    fn march(&self, start: (f64, f64), family: Family, forward: bool, (y_min, y_max): (f64, f64)) -> Vec<(f64, f64)> {
        let xs = &self.field.xs;
        let mut pts = vec![start];
        // Break points: the grid abscissae on the marching side of the start.
        let stops: Vec<f64> = if forward {
            xs.iter().copied().filter(|&x| x > start.0).collect()
        } else {
            xs.iter().rev().copied().filter(|&x| x < start.0).collect()
        };
        let (mut x, mut y) = start;
        for stop in stops {
            let substeps = 2;
            let h = (stop - x) / substeps as f64;
            for k in 0..substeps {
                let xn = if k + 1 == substeps { stop } else { x + h };
                let f = |xv: f64, yv: f64| self.slope(family, xv, yv);
                let k1 = f(x, y);
                let k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
                let k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
                let k4 = f(x + h, y + h * k3);
                let yn = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if yn < y_min || yn > y_max {
                    let edge = if yn < y_min { y_min } else { y_max };
                    let t = (edge - y) / (yn - y);
                    pts.push((x + t * (xn - x), edge));
                    return pts;
                }
                x = xn;
                y = yn;
                pts.push((x, y));
            }
        }
        pts
    }
}

/// Convenience wrapper building a [`Tracer`] for one trace.
pub fn trace_characteristic(field: &SolutionField, start: (f64, f64), family: Family) -> Result<Vec<(f64, f64)>> {
    Tracer::new(field)?.trace(start, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin;

    #[test]
    fn adaptive_hx_examples() {
        assert!((adaptive_hx(&[-1.0; 3], &[1.0; 3], 0.01, 0.95) - 0.0095).abs() < 1e-17);
        assert!((adaptive_hx(&[-1.0, 2.0, 0.3], &[1.0, 0.5, 0.1], 0.01, 0.95) - 0.00475).abs() < 1e-17);
        assert_eq!(adaptive_hx(&[0.1], &[-0.2], 0.01, 0.5), 0.005);
    }

    #[test]
    fn degenerate_domain_returns_strip() {
        let spec = builtin("default").unwrap().with_x_range(0.0, 0.0).unwrap();
        let field = solve(&spec, 21, SolverConfig::new(Method::Rk4)).unwrap();
        assert_eq!(field.n_x(), 1);
        assert!(field.final_line().a.iter().all(|a| (a + 1.0).abs() < 1e-14));
    }

    #[test]
    fn lands_on_x_max_and_respects_step_bound() {
        let spec = builtin("default").unwrap();
        let cfg = SolverConfig::new(Method::Euler);
        let field = solve(&spec, 41, cfg).unwrap();
        assert_eq!(*field.xs.last().unwrap(), 1.0);
        let h_y = field.h_y();
        for w in field.xs.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] - w[0] <= cfg.gamma * h_y * (1.0 + 1e-12));
        }
    }

    #[test]
    fn rejects_small_grid() {
        let spec = builtin("default").unwrap();
        assert!(matches!(
            solve(&spec, 12, SolverConfig::new(Method::Rk4)),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn constant_slope_trace_is_straight() {
        let spec = builtin("default").unwrap();
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let mut field = SolutionField::from_exact(&spec, xs, 21).unwrap();
        for l in &mut field.lines {
            l.a.iter_mut().for_each(|a| *a = -1.0);
        }
        let path = trace_characteristic(&field, (0.2, 0.1), Family::Alpha).unwrap();
        for &(x, y) in &path {
            assert!((y - (0.1 - (x - 0.2))).abs() < 1e-12);
        }
        assert_eq!(path.first().unwrap().0, 0.0);
        assert!((path.last().unwrap().1 + 0.5).abs() < 1e-12);
        assert!(matches!(
            trace_characteristic(&field, (1.2, 0.0), Family::Beta),
            Err(Error::TraceStartOutside { .. })
        ));
    }
}
