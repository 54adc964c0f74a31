//! One march step from grid line `x_i` to `x_i + h`.
//!
//! Every grid node launches one characteristic of each family. The alpha
//! characteristic moves with slope `a` and transports `(y, u, p, q, b)`; the
//! beta characteristic moves with slope `b` and transports `(y, u, p, q, a)`.
//! A family's own slope is not part of its state: at every stage it is read
//! off the other family's front by spline interpolation. After the step the
//! two fronts are interpolated back onto the uniform y-grid, averaging the
//! two estimates of `u, p, q` where both fronts cover a grid point and
//! falling back on boundary data where neither does.

use crate::bspline::{dedup_with_tolerance, Collocation, Spline};
use crate::boundary::{horizontal_strip_point, slope_from_prescription, KnownSlope};
use crate::error::{Edge, Error, Result};
use crate::problem::{FValues, Prescription, ProblemSpec, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Alpha,
    Beta,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Alpha => "alpha",
            Family::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Euler,
    ModifiedEuler,
    Rk4,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Euler, Method::ModifiedEuler, Method::Rk4];

    pub fn name(self) -> &'static str {
        match self {
            Method::Euler => "euler",
            Method::ModifiedEuler => "modified-euler",
            Method::Rk4 => "rk4",
        }
    }

    /// Spline order (degree + 1) matching the method's accuracy.
    pub fn default_spline_order(self) -> usize {
        match self {
            Method::Euler => 2,
            Method::ModifiedEuler => 3,
            Method::Rk4 => 5,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method '{s}'")))
    }
}

/// Transported state of one characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontNode {
    pub y: f64,
    pub u: f64,
    pub p: f64,
    pub q: f64,
    /// `b` on an alpha front, `a` on a beta front.
    pub other_slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharFront {
    pub family: Family,
    pub x: f64,
    pub nodes: Vec<FrontNode>,
}

impl CharFront {
    /// Characteristics launched from the nodes of a grid line.
    pub fn from_line(line: &GridLine, family: Family) -> Self {
        let other = match family {
            Family::Alpha => &line.b,
            Family::Beta => &line.a,
        };
        let nodes = (0..line.len())
            .map(|j| FrontNode {
                y: line.y[j],
                u: line.u[j],
                p: line.p[j],
                q: line.q[j],
                other_slope: other[j],
            })
            .collect();
        Self {
            family,
            x: line.x,
            nodes,
        }
    }

    pub fn ys(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.y).collect()
    }
}

/// Values on one grid line `x = const` at the uniform ordinates `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridLine {
    pub x: f64,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl GridLine {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    fn with_capacity(x: f64, n: usize) -> Self {
        Self {
            x,
            y: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            p: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, y: f64, v: [f64; 5]) {
        self.y.push(y);
        self.u.push(v[0]);
        self.p.push(v[1]);
        self.q.push(v[2]);
        self.a.push(v[3]);
        self.b.push(v[4]);
    }

    pub fn all_finite(&self) -> bool {
        [&self.u, &self.p, &self.q, &self.a, &self.b]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

/// `d/dx` of `(x, y, u, p, q, b)` along an alpha characteristic.
pub fn rhs_alpha(node: &FrontNode, a: f64, fv: FValues) -> [f64; 6] {
    let b = node.other_slope;
    let f = fv.f;
    [
        1.0,
        a,
        node.p + a * node.q,
        -a * f,
        f,
        (b - a) / (2.0 * f) * (fv.f_x + b * fv.f_y),
    ]
}

/// `d/dx` of `(x, y, u, p, q, a)` along a beta characteristic.
pub fn rhs_beta(node: &FrontNode, b: f64, fv: FValues) -> [f64; 6] {
    let a = node.other_slope;
    let f = fv.f;
    [
        1.0,
        b,
        node.p + b * node.q,
        b * f,
        -f,
        (a - b) / (2.0 * f) * (fv.f_x + a * fv.f_y),
    ]
}

/// Nodes sorted by y with near-duplicates removed, ready for fitting.
struct SortedFront {
    ys: Vec<f64>,
    order: Vec<usize>,
    crossed: bool,
}

impl SortedFront {
    fn new(front: &CharFront, dedup_tol: f64) -> Self {
        let crossed = front.nodes.windows(2).any(|w| !(w[0].y < w[1].y));
        let mut order: Vec<usize> = (0..front.nodes.len()).collect();
        if crossed {
            order.sort_by(|&i, &j| front.nodes[i].y.total_cmp(&front.nodes[j].y));
        }
        let raw: Vec<f64> = order.iter().map(|&k| front.nodes[k].y).collect();
        let idx: Vec<f64> = order.iter().map(|&k| k as f64).collect();
        let (ys, kept) = dedup_with_tolerance(&raw, &idx, dedup_tol);
        let order = kept.into_iter().map(|k| k as usize).collect();
        Self { ys, order, crossed }
    }

    fn span(&self) -> (f64, f64) {
        (self.ys[0], self.ys[self.ys.len() - 1])
    }

    fn collocation(&self, degree: usize) -> Result<Collocation> {
        let degree = degree.min(self.ys.len() - 1);
        Collocation::new(&self.ys, degree)
    }

    fn gather(&self, front: &CharFront, pick: impl Fn(&FrontNode) -> f64) -> Vec<f64> {
        self.order.iter().map(|&k| pick(&front.nodes[k])).collect()
    }
}

/// Interpolates the slope carried by `source` (its `other_slope`) at
/// `targets`, extrapolating beyond the front's span. The fit degree drops
/// to `nodes - 1` for tiny fronts.
pub fn cross_interpolate(source: &CharFront, targets: &[f64], degree: usize, dedup_tol: f64) -> Result<Vec<f64>> {
    let sorted = SortedFront::new(source, dedup_tol);
    let spline = sorted
        .collocation(degree)?
        .interpolate(&sorted.gather(source, |n| n.other_slope))?;
    Ok(targets.iter().map(|&y| spline.eval(y)).collect())
}

/// Step settings shared by every step of a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub method: Method,
    /// Interpolation degree (spline order minus one).
    pub degree: usize,
    pub h_y: f64,
    /// Replace every interpolated slope by the exact one. Needs an exact
    /// solution; isolates the time stepping from the interpolation.
    pub oracle_slopes: bool,
}

/// Counters for events that do not abort a solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepDiagnostics {
    /// Fronts whose nodes were out of order before sorting.
    pub crossings: usize,
    /// Grid points filled by short extrapolation instead of boundary data.
    pub boundary_extrapolations: usize,
}

/// Fronts left a little short of a boundary node may be extrapolated over
/// this fraction of `h_y` when no boundary data applies there.
pub const EXTRAPOLATION_SLACK: f64 = 0.05;

pub struct Stepper<'a> {
    spec: &'a ProblemSpec,
    cfg: StepConfig,
    pub diagnostics: StepDiagnostics,
}

impl<'a> Stepper<'a> {
    pub fn new(spec: &'a ProblemSpec, cfg: StepConfig) -> Result<Self> {
        if cfg.oracle_slopes {
            spec.exact()?;
        }
        if !(cfg.h_y > 0.0) {
            return Err(Error::InvalidConfig("h_y must be positive".into()));
        }
        Ok(Self {
            spec,
            cfg,
            diagnostics: StepDiagnostics::default(),
        })
    }

    pub fn config(&self) -> &StepConfig {
        &self.cfg
    }

    fn dedup_tol(&self) -> f64 {
        1e-12 * self.cfg.h_y
    }

    fn rates(&self, front: &CharFront, own: &[f64]) -> Vec<[f64; 6]> {
        front
            .nodes
            .iter()
            .zip(own)
            .map(|(n, &s)| {
                let fv = self.spec.f_values(front.x, n.y);
                match front.family {
                    Family::Alpha => rhs_alpha(n, s, fv),
                    Family::Beta => rhs_beta(n, s, fv),
                }
            })
            .collect()
    }

    /// Own slopes of `target`'s nodes, from the other family's front.
    fn own_slopes(&mut self, target: &CharFront, other: &CharFront) -> Result<Vec<f64>> {
        if self.cfg.oracle_slopes {
            let ex = self.spec.exact()?;
            let f = match target.family {
                Family::Alpha => &ex.a,
                Family::Beta => &ex.b,
            };
            return Ok(target.nodes.iter().map(|n| f(target.x, n.y)).collect());
        }
        let sorted = SortedFront::new(other, self.dedup_tol());
        if sorted.crossed {
            self.diagnostics.crossings += 1;
        }
        let spline = sorted
            .collocation(self.cfg.degree)?
            .interpolate(&sorted.gather(other, |n| n.other_slope))?;
        Ok(target.nodes.iter().map(|n| spline.eval(n.y)).collect())
    }

    /// Own slopes of both fronts at a common stage.
    fn stage_slopes(&mut self, alpha: &CharFront, beta: &CharFront) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((self.own_slopes(alpha, beta)?, self.own_slopes(beta, alpha)?))
    }

    pub fn euler_step(&mut self, line: &GridLine, h: f64) -> Result<(CharFront, CharFront)> {
        let (a0, b0) = (CharFront::from_line(line, Family::Alpha), CharFront::from_line(line, Family::Beta));
        let ka = self.rates(&a0, &line.a);
        let kb = self.rates(&b0, &line.b);
        Ok((advance(&a0, h, &[(1.0, &ka)]), advance(&b0, h, &[(1.0, &kb)])))
    }

    pub fn modified_euler_step(&mut self, line: &GridLine, h: f64) -> Result<(CharFront, CharFront)> {
        let (a0, b0) = (CharFront::from_line(line, Family::Alpha), CharFront::from_line(line, Family::Beta));
        let ka = self.rates(&a0, &line.a);
        let kb = self.rates(&b0, &line.b);
        let a_half = advance(&a0, 0.5 * h, &[(1.0, &ka)]);
        let b_half = advance(&b0, 0.5 * h, &[(1.0, &kb)]);
        let (sa, sb) = self.stage_slopes(&a_half, &b_half)?;
        let ka = self.rates(&a_half, &sa);
        let kb = self.rates(&b_half, &sb);
        Ok((advance(&a0, h, &[(1.0, &ka)]), advance(&b0, h, &[(1.0, &kb)])))
    }

    pub fn rk4_step(&mut self, line: &GridLine, h: f64) -> Result<(CharFront, CharFront)> {
        let (a0, b0) = (CharFront::from_line(line, Family::Alpha), CharFront::from_line(line, Family::Beta));
        let k1a = self.rates(&a0, &line.a);
        let k1b = self.rates(&b0, &line.b);

        let (a1, b1) = (advance(&a0, 0.5 * h, &[(1.0, &k1a)]), advance(&b0, 0.5 * h, &[(1.0, &k1b)]));
        let (sa, sb) = self.stage_slopes(&a1, &b1)?;
        let k2a = self.rates(&a1, &sa);
        let k2b = self.rates(&b1, &sb);

        let (a2, b2) = (advance(&a0, 0.5 * h, &[(1.0, &k2a)]), advance(&b0, 0.5 * h, &[(1.0, &k2b)]));
        let (sa, sb) = self.stage_slopes(&a2, &b2)?;
        let k3a = self.rates(&a2, &sa);
        let k3b = self.rates(&b2, &sb);

        let (a3, b3) = (advance(&a0, h, &[(1.0, &k3a)]), advance(&b0, h, &[(1.0, &k3b)]));
        let (sa, sb) = self.stage_slopes(&a3, &b3)?;
        let k4a = self.rates(&a3, &sa);
        let k4b = self.rates(&b3, &sb);

        let w = [1.0 / 6.0, 2.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0];
        let alpha = advance(&a0, h, &[(w[0], &k1a), (w[1], &k2a), (w[2], &k3a), (w[3], &k4a)]);
        let beta = advance(&b0, h, &[(w[0], &k1b), (w[1], &k2b), (w[2], &k3b), (w[3], &k4b)]);
        Ok((alpha, beta))
    }

    /// One step with the configured method, regridded onto `line.y`.
    pub fn step(&mut self, line: &GridLine, h: f64) -> Result<GridLine> {
        let (alpha, beta) = match self.cfg.method {
            Method::Euler => self.euler_step(line, h)?,
            Method::ModifiedEuler => self.modified_euler_step(line, h)?,
            Method::Rk4 => self.rk4_step(line, h)?,
        };
        self.regrid(&alpha, &beta, &line.y)
    }

    /// Interpolates both fronts onto `grid_ys`.
    pub fn regrid(&mut self, alpha: &CharFront, beta: &CharFront, grid_ys: &[f64]) -> Result<GridLine> {
        let x = alpha.x;
        let spec = self.spec;
        let sa = SortedFront::new(alpha, self.dedup_tol());
        let sb = SortedFront::new(beta, self.dedup_tol());
        self.diagnostics.crossings += usize::from(sa.crossed) + usize::from(sb.crossed);
        let fit_all = |s: &SortedFront, front: &CharFront| -> Result<[Spline; 4]> {
            let c = s.collocation(self.cfg.degree)?;
            Ok([
                c.interpolate(&s.gather(front, |n| n.u))?,
                c.interpolate(&s.gather(front, |n| n.p))?,
                c.interpolate(&s.gather(front, |n| n.q))?,
                c.interpolate(&s.gather(front, |n| n.other_slope))?,
            ])
        };
        let fa = fit_all(&sa, alpha)?;
        let fb = fit_all(&sb, beta)?;
        let (spans_a, spans_b) = (sa.span(), sb.span());
        let tol = self.dedup_tol();
        let slack = EXTRAPOLATION_SLACK * self.cfg.h_y;
        let gap = |(lo, hi): (f64, f64), y: f64| (lo - y).max(y - hi).max(0.0);
        let n = grid_ys.len();
        let mut out = GridLine::with_capacity(x, n);

        for (j, &y) in grid_ys.iter().enumerate() {
            let (gap_a, gap_b) = (gap(spans_a, y), gap(spans_b, y));
            let (cov_a, cov_b) = (gap_a <= tol, gap_b <= tol);
            let edge = if j == 0 {
                Some(Edge::South)
            } else if j + 1 == n {
                Some(Edge::North)
            } else {
                None
            };
            let prescription = edge.map(|e| match e {
                Edge::South => spec.south.at(x),
                _ => spec.north.at(x),
            });
            let missing = || Error::MissingBoundaryCondition {
                edge: edge.unwrap_or(if j < n / 2 { Edge::South } else { Edge::North }),
                x,
                y,
            };

            if !cov_a && !cov_b {
                if let Some(Prescription::Strip { u, q }) = prescription {
                    let pt = horizontal_strip_point(u, q, (self.spec.f)(x, y), x)?;
                    out.push(y, [pt.u, pt.p, pt.q, pt.a, pt.b]);
                    continue;
                }
            }

            let eval = |s: &[Spline; 4], k: usize| s[k].eval(y);
            let upq = |k: usize| -> Result<f64> {
                match (cov_a, cov_b) {
                    (true, true) => Ok(0.5 * (eval(&fa, k) + eval(&fb, k))),
                    (true, false) => Ok(eval(&fa, k)),
                    (false, true) => Ok(eval(&fb, k)),
                    (false, false) => match (gap_a <= slack, gap_b <= slack) {
                        (true, true) => Ok(0.5 * (eval(&fa, k) + eval(&fb, k))),
                        (true, false) => Ok(eval(&fa, k)),
                        (false, true) => Ok(eval(&fb, k)),
                        (false, false) => Err(missing()),
                    },
                }
            };
            let (u, p, q) = (upq(0)?, upq(1)?, upq(2)?);
            if !cov_a && !cov_b {
                self.diagnostics.boundary_extrapolations += 1;
            }

            // a travels with beta, b with alpha.
            let mut a = cov_b.then(|| eval(&fb, 3));
            let mut b = cov_a.then(|| eval(&fa, 3));
            if self.cfg.oracle_slopes {
                let ex = self.spec.exact()?;
                a = Some((ex.a)(x, y));
                b = Some((ex.b)(x, y));
            }
            if a.is_none() || b.is_none() {
                let f = (spec.f)(x, y);
                match prescription {
                    Some(Prescription::Slope { quantity, value }) => {
                        let v = value.eval(x);
                        match quantity {
                            Quantity::A => a = a.or(Some(v)),
                            Quantity::B => b = b.or(Some(v)),
                            _ => {}
                        }
                        // A second-derivative prescription needs the other
                        // slope; a front just short of the node may supply it.
                        if matches!(quantity, Quantity::R | Quantity::S | Quantity::T) {
                            if a.is_none() && b.is_none() {
                                if gap_a <= slack {
                                    b = Some(eval(&fa, 3));
                                } else if gap_b <= slack {
                                    a = Some(eval(&fb, 3));
                                }
                            }
                            match (a, b) {
                                (None, Some(bv)) => {
                                    a = Some(slope_from_prescription(KnownSlope::B(bv), *quantity, v, f)?)
                                }
                                (Some(av), None) => {
                                    b = Some(slope_from_prescription(KnownSlope::A(av), *quantity, v, f)?)
                                }
                                _ => {}
                            }
                        }
                    }
                    Some(Prescription::Strip { u: us, q: qs }) => {
                        let pt = horizontal_strip_point(us, qs, f, x)?;
                        a = a.or(Some(pt.a));
                        b = b.or(Some(pt.b));
                    }
                    _ => {}
                }
                if a.is_none() {
                    if gap_b > slack {
                        return Err(missing());
                    }
                    self.diagnostics.boundary_extrapolations += 1;
                    a = Some(eval(&fb, 3));
                }
                if b.is_none() {
                    if gap_a > slack {
                        return Err(missing());
                    }
                    self.diagnostics.boundary_extrapolations += 1;
                    b = Some(eval(&fa, 3));
                }
            }
            out.push(y, [u, p, q, a.expect("a resolved"), b.expect("b resolved")]);
        }
        Ok(out)
    }
}

/// `base + h * sum(w_k * k_k)` for the transported components.
fn advance(base: &CharFront, h: f64, terms: &[(f64, &Vec<[f64; 6]>)]) -> CharFront {
    let nodes = base
        .nodes
        .iter()
        .enumerate()
        .map(|(j, n)| {
            let mut d = [0.0; 6];
            for (w, k) in terms {
                for c in 1..6 {
                    d[c] += w * k[j][c];
                }
            }
            FrontNode {
                y: n.y + h * d[1],
                u: n.u + h * d[2],
                p: n.p + h * d[3],
                q: n.q + h * d[4],
                other_slope: n.other_slope + h * d[5],
            }
        })
        .collect();
    CharFront {
        family: base.family,
        x: base.x + h,
        nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin;

    fn node(p: f64, q: f64, other: f64) -> FrontNode {
        FrontNode {
            y: 0.0,
            u: 1.0,
            p,
            q,
            other_slope: other,
        }
    }

    #[test]
    fn rhs_examples() {
        let fv = FValues { f: 1.0, f_x: 0.0, f_y: 0.0 };
        assert_eq!(rhs_alpha(&node(0.0, 0.0, 1.0), -1.0, fv), [1.0, -1.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(rhs_beta(&node(0.0, 0.0, -1.0), 1.0, fv), [1.0, 1.0, 0.0, 1.0, -1.0, 0.0]);

        let fv = FValues { f: 1.0, f_x: 1.0, f_y: 0.0 };
        assert_eq!(rhs_alpha(&node(1.0, 0.0, 1.0), -1.0, fv), [1.0, -1.0, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(rhs_beta(&node(1.0, 0.0, -1.0), 1.0, fv), [1.0, 1.0, 1.0, 1.0, -1.0, -1.0]);

        let fv = FValues { f: 2.0, f_x: 3.0, f_y: -7.0 };
        assert_eq!(rhs_alpha(&node(0.3, 0.2, 0.4), 0.4, fv)[5], 0.0);
        assert_eq!(rhs_beta(&node(0.3, 0.2, 0.4), 0.4, fv)[5], 0.0);
    }

    fn line_from_exact(case: &str, x: f64, n: usize) -> (crate::problem::ProblemSpec, GridLine) {
        let spec = builtin(case).unwrap();
        let d = spec.domain;
        let ex = spec.exact.clone().unwrap();
        let mut line = GridLine::with_capacity(x, n);
        for j in 0..n {
            let y = d.y_min + (d.y_max - d.y_min) * j as f64 / (n - 1) as f64;
            line.push(y, [(ex.u)(x, y), (ex.p)(x, y), (ex.q)(x, y), (ex.a)(x, y), (ex.b)(x, y)]);
        }
        (spec, line)
    }

    #[test]
    fn euler_step_example() {
        let (spec, line) = line_from_exact("default", 0.0, 11);
        let cfg = StepConfig { method: Method::Euler, degree: 1, h_y: 0.1, oracle_slopes: false };
        let mut st = Stepper::new(&spec, cfg).unwrap();
        let (a, b) = st.euler_step(&line, 0.1).unwrap();
        let (na, nb) = (a.nodes[5], b.nodes[5]);
        assert!((na.y + 0.1).abs() < 1e-15 && (nb.y - 0.1).abs() < 1e-15);
        assert_eq!((na.u, nb.u), (1.0, 1.0));
        assert!((na.p - 0.1).abs() < 1e-15 && (na.q - 0.1).abs() < 1e-15);
        assert_eq!(a.x, 0.1);

        let (a0, b0) = st.euler_step(&line, 0.0).unwrap();
        assert_eq!(a0, CharFront::from_line(&line, Family::Alpha));
        assert_eq!(b0, CharFront::from_line(&line, Family::Beta));
        for m in [Method::ModifiedEuler, Method::Rk4] {
            let (a0, _) = match m {
                Method::ModifiedEuler => st.modified_euler_step(&line, 0.0).unwrap(),
                _ => st.rk4_step(&line, 0.0).unwrap(),
            };
            assert_eq!(a0, CharFront::from_line(&line, Family::Alpha));
        }
    }

    #[test]
    fn constant_state_advects_unchanged_slopes() {
        let mut spec = builtin("aggregated").unwrap();
        spec.f = std::sync::Arc::new(|_, _| 1.0);
        spec.f_x = std::sync::Arc::new(|_, _| 0.0);
        let n = 9;
        let mut line = GridLine::with_capacity(0.0, n);
        for j in 0..n {
            line.push(j as f64 * 0.1, [0.0, 0.0, 0.0, -0.5, 0.5]);
        }
        let cfg = StepConfig { method: Method::Rk4, degree: 4, h_y: 0.1, oracle_slopes: false };
        let mut st = Stepper::new(&spec, cfg).unwrap();
        let (a, b) = st.rk4_step(&line, 0.05).unwrap();
        assert!(a.nodes.iter().all(|n| (n.other_slope - 0.5).abs() < 1e-14));
        assert!(b.nodes.iter().all(|n| (n.other_slope + 0.5).abs() < 1e-14));
    }

    #[test]
    fn cross_interpolation_constant_and_linear() {
        let mk = |f: &dyn Fn(f64) -> f64| CharFront {
            family: Family::Beta,
            x: 0.0,
            nodes: (0..8)
                .map(|k| {
                    let y = k as f64 * 0.1 + 0.01 * (k as f64).sin();
                    FrontNode { y, u: 0.0, p: 0.0, q: 0.0, other_slope: f(y) }
                })
                .collect(),
        };
        let targets = [-0.08, 0.0, 0.33, 0.72, 0.8];
        let v = cross_interpolate(&mk(&|_| 2.5), &targets, 4, 1e-14).unwrap();
        assert!(v.iter().all(|x| (x - 2.5).abs() < 1e-12));
        let v = cross_interpolate(&mk(&|y| 3.0 * y - 1.0), &targets, 2, 1e-14).unwrap();
        for (t, x) in targets.iter().zip(&v) {
            assert!((x - (3.0 * t - 1.0)).abs() < 1e-10);
        }
        // Two nodes only: degree falls back to linear.
        let mut small = mk(&|y| y);
        small.nodes.truncate(2);
        let v = cross_interpolate(&small, &[0.5], 4, 1e-14).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn regrid_at_nodes_is_exact() {
        let (spec, line) = line_from_exact("default", 0.3, 21);
        let cfg = StepConfig { method: Method::Rk4, degree: 4, h_y: 0.05, oracle_slopes: false };
        let mut st = Stepper::new(&spec, cfg).unwrap();
        let a = CharFront::from_line(&line, Family::Alpha);
        let b = CharFront::from_line(&line, Family::Beta);
        let out = st.regrid(&a, &b, &line.y).unwrap();
        for j in 0..line.len() {
            assert!((out.u[j] - line.u[j]).abs() < 1e-14);
            assert!((out.a[j] - line.a[j]).abs() < 1e-14);
            assert!((out.b[j] - line.b[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn lower_boundary_takes_prescribed_a() {
        let (spec, line) = line_from_exact("default", 0.0, 51);
        let h_y = line.y[1] - line.y[0];
        let cfg = StepConfig { method: Method::Euler, degree: 1, h_y, oracle_slopes: false };
        let mut st = Stepper::new(&spec, cfg).unwrap();
        let h = 0.95 * h_y;
        let out = st.step(&line, h).unwrap();
        let ex = spec.exact.as_ref().unwrap();
        assert_eq!(out.a[0], (ex.a)(h, -0.5));
        assert_eq!(out.b[50], (ex.b)(h, 0.5));
    }

    #[test]
    fn unsorted_front_flags_crossing() {
        let (spec, line) = line_from_exact("default", 0.3, 21);
        let cfg = StepConfig { method: Method::Rk4, degree: 4, h_y: 0.05, oracle_slopes: false };
        let mut st = Stepper::new(&spec, cfg).unwrap();
        let mut a = CharFront::from_line(&line, Family::Alpha);
        a.nodes.swap(3, 4);
        let b = CharFront::from_line(&line, Family::Beta);
        st.regrid(&a, &b, &line.y).unwrap();
        assert_eq!(st.diagnostics.crossings, 1);
    }
}
