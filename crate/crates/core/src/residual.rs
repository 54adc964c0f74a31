//! Integral residuals of a computed field.
//!
//! With `H1 = -p (s, t)` and `H2 = q (r, s)`, both curls equal `r t - s^2`
//! up to sign, so Green's theorem turns the PDE into
//! `contour(H_k . tau) = area integral of f^2` over every control cell. Both
//! fields can be written with `a`, `b`, `f` in place of the second
//! derivatives, so the check needs only the transported quantities.
//!
//! Cells are centred on interior grid points and bounded by the midlines
//! between neighbouring grid lines. Edge integrands are obtained by
//! separable spline interpolation of the H-components: along the edge's
//! normal direction first, then along the edge, where Gauss-Legendre
//! quadrature is applied.

use std::fmt::Write as _;

use crate::bspline::Spline;
use crate::error::{Error, Result};
use crate::solver::SolutionField;

/// Degree of the splines interpolating the H-components (order 5).
pub const H_SPLINE_DEGREE: usize = 4;
/// Default number of Gauss-Legendre points per edge.
pub const DEFAULT_GAUSS_POINTS: usize = 3;

/// Nodes and weights on `[-1, 1]` for `n` in `1..=5`.
pub fn gauss_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = match n {
        1 => (vec![0.0], vec![2.0]),
        2 => {
            let x = 1.0 / 3f64.sqrt();
            (vec![-x, x], vec![1.0, 1.0])
        }
        3 => {
            let x = (3.0f64 / 5.0).sqrt();
            (vec![-x, 0.0, x], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
        }
        4 => {
            let r = (6.0f64 / 5.0).sqrt();
            let inner = (3.0 / 7.0 - 2.0 / 7.0 * r).sqrt();
            let outer = (3.0 / 7.0 + 2.0 / 7.0 * r).sqrt();
            let s30 = 30f64.sqrt();
            let wi = (18.0 + s30) / 36.0;
            let wo = (18.0 - s30) / 36.0;
            (vec![-outer, -inner, inner, outer], vec![wo, wi, wi, wo])
        }
        5 => {
            let r = (10.0f64 / 7.0).sqrt();
            let inner = (5.0 - 2.0 * r).sqrt() / 3.0;
            let outer = (5.0 + 2.0 * r).sqrt() / 3.0;
            let s70 = 70f64.sqrt();
            let wi = (322.0 + 13.0 * s70) / 900.0;
            let wo = (322.0 - 13.0 * s70) / 900.0;
            (
                vec![-outer, -inner, 0.0, inner, outer],
                vec![wo, wi, 128.0 / 225.0, wi, wo],
            )
        }
        _ => return Err(Error::UnsupportedQuadrature(n)),
    };
    Ok(rule)
}

/// `n`-point Gauss-Legendre approximation of the integral of `g` over `[z1, z2]`.
pub fn gauss_legendre(g: impl Fn(f64) -> f64, z1: f64, z2: f64, n: usize) -> Result<f64> {
    let (nodes, weights) = gauss_rule(n)?;
    Ok(apply_rule(&nodes, &weights, &g, z1, z2))
}

fn apply_rule(nodes: &[f64], weights: &[f64], g: &impl Fn(f64) -> f64, z1: f64, z2: f64) -> f64 {
    let half = 0.5 * (z2 - z1);
    let mid = 0.5 * (z1 + z2);
    half * nodes
        .iter()
        .zip(weights)
        .map(|(&t, &w)| w * g(half * t + mid))
        .sum::<f64>()
}

/// `(H1, H2)` at one point from `p, q, a, b, f`.
pub fn h_fields(p: f64, q: f64, a: f64, b: f64, f: f64) -> Result<([f64; 2], [f64; 2])> {
    let d = a - b;
    if d.abs() < 1e-12 {
        return Err(Error::ResidualHyperbolicityLost);
    }
    let c1 = p * f / d;
    let c2 = q * f / d;
    Ok(([c1 * (a + b), -2.0 * c1], [c2 * 2.0 * a * b, -c2 * (a + b)]))
}

/// Residuals of one interior cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellResidual {
    /// 0-based grid indices of the cell centre.
    pub i: usize,
    pub j: usize,
    pub x_center: f64,
    pub y_center: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// `|contour of (H2 - H1)| / area`, zero for exact data.
    pub conservative: f64,
    /// `(contour H2 - F) - (contour H1 - F)`, signed, per unit area.
    pub signed_difference: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMap {
    pub n_x: usize,
    pub n_y: usize,
    pub cells: Vec<CellResidual>,
    pub eps1: f64,
    pub eps2: f64,
}

impl ResidualMap {
    /// CSV with columns `i, j, x_center, y_center, eps1, eps2`; indices 1-based.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,j,x_center,y_center,eps1,eps2\n");
        for c in &self.cells {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                c.i + 1,
                c.j + 1,
                c.x_center,
                c.y_center,
                c.eps1,
                c.eps2
            );
        }
        s
    }

    pub fn cell(&self, i: usize, j: usize) -> Option<&CellResidual> {
        if i == 0 || j == 0 || i + 1 >= self.n_x || j + 1 >= self.n_y {
            return None;
        }
        self.cells.get((i - 1) * (self.n_y - 2) + (j - 1))
    }

    /// Cell with the largest `eps1`.
    pub fn argmax_eps1(&self) -> Option<&CellResidual> {
        self.cells.iter().max_by(|a, b| a.eps1.total_cmp(&b.eps1))
    }
}

fn midpoints(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

fn fit(t: &[f64], g: &[f64]) -> Result<Spline> {
    Spline::fit(t, g, H_SPLINE_DEGREE.min(t.len() - 1))
}

/// Precomputed edge integrals for all interior cells of a field.
pub struct ResidualEvaluator {
    xs: Vec<f64>,
    ys: Vec<f64>,
    xh: Vec<f64>,
    yh: Vec<f64>,
    /// `ns[k][h * n_x + i]`: integral of `H_k,x` along `y = yh[h]` over cell column `i`.
    ns: [Vec<f64>; 2],
    /// `ew[k][h * n_y + j]`: integral of `H_k,y` along `x = xh[h]` over cell row `j`.
    ew: [Vec<f64>; 2],
    /// `f2[i * n_y + j]`: integral of `f^2` over cell `(i, j)`.
    f2: Vec<f64>,
}

impl ResidualEvaluator {
    pub fn new(field: &SolutionField, f: &dyn Fn(f64, f64) -> f64, gauss_points: usize) -> Result<Self> {
        let (nx, ny) = (field.n_x(), field.n_y());
        if nx < 3 || ny < 3 {
            return Err(Error::GridTooSmall { n_x: nx, n_y: ny });
        }
        let (nodes, weights) = gauss_rule(gauss_points)?;
        let xs = field.xs.clone();
        let ys = field.ys.clone();
        let xh = midpoints(&xs);
        let yh = midpoints(&ys);

        // H components on the grid, [k][component][i * ny + j].
        let mut h = [[vec![0.0; nx * ny], vec![0.0; nx * ny]], [vec![0.0; nx * ny], vec![0.0; nx * ny]]];
        for (i, line) in field.lines.iter().enumerate() {
            for j in 0..ny {
                let fv = f(line.x, line.y[j]);
                let (h1, h2) = h_fields(line.p[j], line.q[j], line.a[j], line.b[j], fv)?;
                for c in 0..2 {
                    h[0][c][i * ny + j] = h1[c];
                    h[1][c][i * ny + j] = h2[c];
                }
            }
        }

        let mut ns = [vec![0.0; (ny - 1) * nx], vec![0.0; (ny - 1) * nx]];
        let mut ew = [vec![0.0; (nx - 1) * ny], vec![0.0; (nx - 1) * ny]];
        let mut col = vec![0.0; ny];
        let mut row = vec![0.0; nx];
        for k in 0..2 {
            // x-components on the half rows y = yh[hh].
            let mut mid = vec![0.0; (ny - 1) * nx];
            for i in 0..nx {
                col.copy_from_slice(&h[k][0][i * ny..(i + 1) * ny]);
                let s = fit(&ys, &col)?;
                for (hh, &y) in yh.iter().enumerate() {
                    mid[hh * nx + i] = s.eval(y);
                }
            }
            for hh in 0..ny - 1 {
                let s = fit(&xs, &mid[hh * nx..(hh + 1) * nx])?;
                let g = |x: f64| s.eval(x);
                for i in 1..nx - 1 {
                    ns[k][hh * nx + i] = apply_rule(&nodes, &weights, &g, xh[i - 1], xh[i]);
                }
            }
            // y-components on the half columns x = xh[hh].
            let mut mid = vec![0.0; (nx - 1) * ny];
            for j in 0..ny {
                for i in 0..nx {
                    row[i] = h[k][1][i * ny + j];
                }
                let s = fit(&xs, &row)?;
                for (hh, &x) in xh.iter().enumerate() {
                    mid[hh * ny + j] = s.eval(x);
                }
            }
            for hh in 0..nx - 1 {
                let s = fit(&ys, &mid[hh * ny..(hh + 1) * ny])?;
                let g = |y: f64| s.eval(y);
                for j in 1..ny - 1 {
                    ew[k][hh * ny + j] = apply_rule(&nodes, &weights, &g, yh[j - 1], yh[j]);
                }
            }
        }

        let mut f2 = vec![0.0; nx * ny];
        for i in 1..nx - 1 {
            for j in 1..ny - 1 {
                let inner = |x: f64| {
                    apply_rule(&nodes, &weights, &|y: f64| f(x, y).powi(2), yh[j - 1], yh[j])
                };
                f2[i * ny + j] = apply_rule(&nodes, &weights, &inner, xh[i - 1], xh[i]);
            }
        }

        Ok(Self {
            xs,
            ys,
            xh,
            yh,
            ns,
            ew,
            f2,
        })
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || j == 0 || i + 1 >= self.xs.len() || j + 1 >= self.ys.len() {
            return Err(Error::NotInterior { i, j });
        }
        Ok(())
    }

    fn area(&self, i: usize, j: usize) -> f64 {
        (self.xh[i] - self.xh[i - 1]) * (self.yh[j] - self.yh[j - 1])
    }

    /// Counter-clockwise contour integral of `H_k` (k = 1, 2) around cell `(i, j)`.
    pub fn contour(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        self.check(i, j)?;
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let ns = &self.ns[k - 1];
        let ew = &self.ew[k - 1];
        let north = -ns[j * nx + i];
        let south = ns[(j - 1) * nx + i];
        let west = -ew[(i - 1) * ny + j];
        let east = ew[i * ny + j];
        Ok(north + south + west + east)
    }

    pub fn source(&self, i: usize, j: usize) -> Result<f64> {
        self.check(i, j)?;
        Ok(self.f2[i * self.ys.len() + j])
    }

    /// `eps_k(i, j)` for 0-based interior indices and `k` in `{1, 2}`.
    pub fn cell(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        if !(k == 1 || k == 2) {
            return Err(Error::InvalidConfig(format!("residual index k = {k}")));
        }
        Ok((self.contour(i, j, k)? - self.source(i, j)?).abs() / self.area(i, j))
    }

    /// `|contour of (H2 - H1)| / area`; vanishes for any smooth `p, q`.
    pub fn conservative(&self, i: usize, j: usize) -> Result<f64> {
        Ok((self.contour(i, j, 2)? - self.contour(i, j, 1)?).abs() / self.area(i, j))
    }

    pub fn map(&self) -> Result<ResidualMap> {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let mut cells = Vec::with_capacity((nx - 2) * (ny - 2));
        let (mut e1, mut e2) = (0.0f64, 0.0f64);
        for i in 1..nx - 1 {
            for j in 1..ny - 1 {
                let area = self.area(i, j);
                let src = self.source(i, j)?;
                let (c1, c2) = (self.contour(i, j, 1)?, self.contour(i, j, 2)?);
                let r1 = (c1 - src) / area;
                let r2 = (c2 - src) / area;
                let cell = CellResidual {
                    i,
                    j,
                    x_center: 0.5 * (self.xh[i - 1] + self.xh[i]),
                    y_center: 0.5 * (self.yh[j - 1] + self.yh[j]),
                    eps1: r1.abs(),
                    eps2: r2.abs(),
                    conservative: ((c2 - c1) / area).abs(),
                    signed_difference: r2 - r1,
                };
                e1 = e1.max(cell.eps1);
                e2 = e2.max(cell.eps2);
                cells.push(cell);
            }
        }
        Ok(ResidualMap {
            n_x: nx,
            n_y: ny,
            cells,
            eps1: e1,
            eps2: e2,
        })
    }
}

/// Residual map of a field with the default three-point rule.
pub fn residual_map(field: &SolutionField, f: &dyn Fn(f64, f64) -> f64) -> Result<ResidualMap> {
    ResidualEvaluator::new(field, f, DEFAULT_GAUSS_POINTS)?.map()
}

/// `eps_k(i, j)` of a single cell (0-based interior indices).
pub fn cell_residual(field: &SolutionField, f: &dyn Fn(f64, f64) -> f64, i: usize, j: usize, k: usize) -> Result<f64> {
    ResidualEvaluator::new(field, f, DEFAULT_GAUSS_POINTS)?.cell(i, j, k)
}

/// Conservative identity of a single cell (0-based interior indices).
pub fn conservative_identity(field: &SolutionField, f: &dyn Fn(f64, f64) -> f64, i: usize, j: usize) -> Result<f64> {
    ResidualEvaluator::new(field, f, DEFAULT_GAUSS_POINTS)?.conservative(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin;

    #[test]
    fn gauss_examples() {
        let v = gauss_legendre(|x| x.powi(5), 0.0, 1.0, 3).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
        for n in 1..=5 {
            assert!((gauss_legendre(|_| 1.0, 0.0, 1.0, n).unwrap() - 1.0).abs() < 1e-15);
        }
        let v = gauss_legendre(f64::sin, 0.0, std::f64::consts::PI, 3).unwrap();
        // Three-point error on [0, pi] is pi^7 / 2016000 * max|sin^(6)| at most.
        let bound = std::f64::consts::PI.powi(7) / 2_016_000.0;
        assert!((v - 2.0).abs() <= bound && (v - 2.0).abs() > 1e-4);
        assert!(matches!(gauss_legendre(|x| x, 0.0, 1.0, 6), Err(Error::UnsupportedQuadrature(6))));
    }

    #[test]
    fn h_field_examples() {
        let (h1, h2) = h_fields(0.0, 0.0, -1.0, 1.0, 1.0).unwrap();
        assert_eq!((h1, h2), ([0.0, 0.0], [0.0, 0.0]));
        let (h1, h2) = h_fields(1.0, 0.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(h1, [0.0, -1.0]);
        assert_eq!(h2, [0.0, 0.0]);
        assert!(h_fields(1.0, 1.0, 0.5, 0.5, 1.0).is_err());
    }

    #[test]
    fn zero_h_gives_unit_residual() {
        let mut spec = builtin("default").unwrap();
        spec.f = std::sync::Arc::new(|_, _| 1.0);
        let xs: Vec<f64> = (0..8).map(|i| (i as f64 / 7.0).powf(1.2)).collect();
        let mut field = SolutionField::from_exact(&builtin("default").unwrap(), xs, 9).unwrap();
        for l in &mut field.lines {
            l.p.iter_mut().for_each(|v| *v = 0.0);
            l.q.iter_mut().for_each(|v| *v = 0.0);
        }
        let map = residual_map(&field, spec.f.as_ref()).unwrap();
        assert!(map.cells.iter().all(|c| (c.eps1 - 1.0).abs() < 1e-14 && (c.eps2 - 1.0).abs() < 1e-14));
        assert_eq!(map.cells.len(), 6 * 7);
    }

    #[test]
    fn interior_only() {
        let spec = builtin("default").unwrap();
        let xs: Vec<f64> = (0..6).map(|i| i as f64 / 5.0).collect();
        let field = SolutionField::from_exact(&spec, xs, 11).unwrap();
        let ev = ResidualEvaluator::new(&field, spec.f.as_ref(), 3).unwrap();
        assert!(ev.cell(0, 3, 1).is_err());
        assert!(ev.cell(5, 3, 1).is_err());
        assert!(ev.cell(2, 10, 1).is_err());
        assert!(ev.cell(2, 9, 2).is_ok());
        let csv = ev.map().unwrap().to_csv();
        for line in csv.lines().skip(1) {
            let mut it = line.split(',');
            let i: usize = it.next().unwrap().parse().unwrap();
            let j: usize = it.next().unwrap().parse().unwrap();
            assert!(i > 1 && i < 6 && j > 1 && j < 11);
        }
    }
}
