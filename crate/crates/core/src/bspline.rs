//! Interpolating B-splines in one variable.
//!
//! Knots use the averaged construction: the end abscissae are repeated
//! `degree + 1` times and the interior knots are running averages of
//! `degree` consecutive data points. With that choice the collocation matrix
//! satisfies the Schoenberg-Whitney conditions and is banded, so fitting
//! costs O(m * degree^2).
//!
//! Evaluation outside the data range continues the first or last polynomial
//! piece, which is what the marching scheme relies on when a characteristic
//! front does not quite reach the point being interpolated.

use crate::banded::{BandedLu, BandedMatrix};
use crate::error::{Error, Result};

/// Largest supported spline degree. Evaluation works on stack buffers.
pub const MAX_DEGREE: usize = 15;

/// Non-decreasing knot sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSequence {
    knots: Vec<f64>,
}

impl KnotSequence {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        check_sorted(&knots)?;
        Ok(Self { knots })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.knots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.knots.is_empty()
    }

    /// Checks `xi_k <= t_k <= xi_{k+degree+1}` with strict inequalities
    /// except against the repeated end knots.
    pub fn satisfies_schoenberg_whitney(&self, t: &[f64], degree: usize) -> bool {
        let xi = &self.knots;
        if xi.len() != t.len() + degree + 1 {
            return false;
        }
        let (lo, hi) = (xi[0], xi[xi.len() - 1]);
        t.iter().enumerate().all(|(k, &tk)| {
            let left = xi[k];
            let right = xi[k + degree + 1];
            let left_ok = if left == lo { tk >= left } else { tk > left };
            let right_ok = if right == hi { tk <= right } else { tk < right };
            left_ok && right_ok
        })
    }
}

fn check_sorted(t: &[f64]) -> Result<()> {
    if let Some(index) = t.windows(2).position(|w| !(w[0] <= w[1])) {
        return Err(Error::UnsortedAbscissae { index: index + 1 });
    }
    Ok(())
}

/// Averaged knot sequence for interpolation of degree `degree` at `t`.
pub fn build_knots(t: &[f64], degree: usize) -> Result<KnotSequence> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidDegree(degree));
    }
    if t.len() <= degree {
        return Err(Error::InsufficientData {
            points: t.len(),
            degree,
        });
    }
    check_sorted(t)?;
    Ok(KnotSequence {
        knots: averaged_knots(t, degree),
    })
}

fn averaged_knots(t: &[f64], degree: usize) -> Vec<f64> {
    let m = t.len();
    let order = degree + 1;
    let mut knots = Vec::with_capacity(m + order);
    knots.extend(std::iter::repeat(t[0]).take(order));
    for i in 0..m - order {
        let window = &t[1 + i..1 + i + degree];
        knots.push(window.iter().sum::<f64>() / degree as f64);
    }
    knots.extend(std::iter::repeat(t[m - 1]).take(order));
    knots
}

/// B-spline `b_k` of the given degree on `knots`, by the Cox-de Boor
/// recursion. Spans are half-open, so the value at the last knot is zero.
pub fn basis(k: usize, degree: usize, x: f64, knots: &KnotSequence) -> Result<f64> {
    let xi = knots.as_slice();
    if xi.is_empty() || k + degree + 1 > xi.len() - 1 {
        return Err(Error::BasisIndexOutOfRange {
            k,
            degree,
            knots: xi.len(),
        });
    }
    Ok(cox_de_boor(k, degree, x, xi))
}

fn cox_de_boor(k: usize, n: usize, x: f64, xi: &[f64]) -> f64 {
    if n == 0 {
        return if xi[k] <= x && x < xi[k + 1] { 1.0 } else { 0.0 };
    }
    let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let left = ratio(x - xi[k], xi[k + n] - xi[k]);
    let right = ratio(xi[k + n + 1] - x, xi[k + n + 1] - xi[k + 1]);
    let mut v = 0.0;
    if left != 0.0 {
        v += left * cox_de_boor(k, n - 1, x, xi);
    }
    if right != 0.0 {
        v += right * cox_de_boor(k + 1, n - 1, x, xi);
    }
    v
}

/// Span index `l` with `xi_l <= x < xi_{l+1}`, clamped to `[degree, n_coef-1]`
/// so that points outside the range use the boundary pieces.
#[inline]
fn find_span(xi: &[f64], degree: usize, n_coef: usize, x: f64) -> usize {
    let upper = xi[..=n_coef].partition_point(|&k| k <= x);
    upper.saturating_sub(1).clamp(degree, n_coef - 1)
}

/// The `degree + 1` basis functions that can be nonzero on span `l`, written
/// into `out[..=degree]`. Outside the span this is the polynomial extension.
#[inline]
fn nonzero_basis(xi: &[f64], degree: usize, l: usize, x: f64, out: &mut [f64; MAX_DEGREE + 1]) {
    let mut left = [0.0; MAX_DEGREE + 1];
    let mut right = [0.0; MAX_DEGREE + 1];
    out[0] = 1.0;
    for j in 1..=degree {
        left[j] = x - xi[l + 1 - j];
        right[j] = xi[l + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let temp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

/// Collapses abscissae closer than `1e-12 * range` to their first occurrence.
pub fn dedup_abscissae(t: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let range = match (t.first(), t.last()) {
        (Some(a), Some(b)) => (b - a).abs(),
        _ => 0.0,
    };
    dedup_with_tolerance(t, g, 1e-12 * range)
}

pub(crate) fn dedup_with_tolerance(t: &[f64], g: &[f64], tol: f64) -> (Vec<f64>, Vec<f64>) {
    let mut ts = Vec::with_capacity(t.len());
    let mut gs = Vec::with_capacity(g.len());
    for (&ti, &gi) in t.iter().zip(g) {
        if let Some(&last) = ts.last() {
            if ti - last <= tol {
                continue;
            }
        }
        ts.push(ti);
        gs.push(gi);
    }
    (ts, gs)
}

/// Factorized collocation system for a fixed set of abscissae, reusable for
/// several ordinate vectors.
#[derive(Debug, Clone)]
pub struct Collocation {
    degree: usize,
    knots: KnotSequence,
    lu: Option<BandedLu>,
    len: usize,
}

impl Collocation {
    /// Abscissae must be sorted and distinct.
    pub fn new(t: &[f64], degree: usize) -> Result<Self> {
        if t.len() == 1 && degree == 0 {
            return Ok(Self {
                degree: 0,
                knots: KnotSequence {
                    knots: vec![t[0], t[0]],
                },
                lu: None,
                len: 1,
            });
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        let knots = build_knots(t, degree)?;
        let xi = knots.as_slice();
        let m = t.len();
        let spans: Vec<usize> = t.iter().map(|&x| find_span(xi, degree, m, x)).collect();
        let mut kl = 0;
        let mut ku = 0;
        for (j, &l) in spans.iter().enumerate() {
            let first_col = l - degree;
            kl = kl.max(j.saturating_sub(first_col));
            ku = ku.max(l.saturating_sub(j));
        }
        let mut band = BandedMatrix::zeros(m, kl, ku);
        let mut n = [0.0; MAX_DEGREE + 1];
        for (j, (&x, &l)) in t.iter().zip(&spans).enumerate() {
            nonzero_basis(xi, degree, l, x, &mut n);
            for r in 0..=degree {
                band.set(j, l - degree + r, n[r]);
            }
        }
        let lu = band.factorize()?;
        Ok(Self {
            degree,
            knots,
            lu: Some(lu),
            len: m,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn interpolate(&self, g: &[f64]) -> Result<Spline> {
        if g.len() != self.len {
            return Err(Error::LengthMismatch {
                abscissae: self.len,
                ordinates: g.len(),
            });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteData);
        }
        let coefficients = match &self.lu {
            Some(lu) => lu.solve(g),
            None => vec![g[0]],
        };
        Ok(Spline {
            degree: self.degree,
            knots: self.knots.clone(),
            coefficients,
        })
    }
}

/// Piecewise polynomial in B-spline form.
#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    degree: usize,
    knots: KnotSequence,
    coefficients: Vec<f64>,
}

impl Spline {
    /// Interpolating spline through `(t_j, g_j)`. Near-duplicate abscissae are
    /// collapsed first, keeping the first ordinate.
    pub fn fit(t: &[f64], g: &[f64], degree: usize) -> Result<Self> {
        if t.len() != g.len() {
            return Err(Error::LengthMismatch {
                abscissae: t.len(),
                ordinates: g.len(),
            });
        }
        check_sorted(t)?;
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::InvalidDegree(degree));
        }
        let (t, g) = dedup_abscissae(t, g);
        Collocation::new(&t, degree)?.interpolate(&g)
    }

    /// Builds a spline from raw parts; `coefficients.len() + degree + 1` must
    /// equal the knot count.
    pub fn from_parts(degree: usize, knots: KnotSequence, coefficients: Vec<f64>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::InvalidDegree(degree));
        }
        if coefficients.is_empty() || knots.len() != coefficients.len() + degree + 1 {
            return Err(Error::InsufficientData {
                points: coefficients.len(),
                degree,
            });
        }
        Ok(Self {
            degree,
            knots,
            coefficients,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.coefficients.len();
        if self.degree == 0 && m == 1 {
            return self.coefficients[0];
        }
        let xi = self.knots.as_slice();
        let l = find_span(xi, self.degree, m, x);
        let mut n = [0.0; MAX_DEGREE + 1];
        nonzero_basis(xi, self.degree, l, x, &mut n);
        let c = &self.coefficients[l - self.degree..=l];
        c.iter().zip(&n[..=self.degree]).map(|(a, b)| a * b).sum()
    }

    /// First derivative as a spline of one degree less.
    pub fn derivative(&self) -> Spline {
        let d = self.degree;
        let m = self.coefficients.len();
        if d == 0 || m == 1 {
            return Spline {
                degree: 0,
                knots: KnotSequence {
                    knots: vec![self.knots.knots[0]; 2],
                },
                coefficients: vec![0.0],
            };
        }
        let xi = self.knots.as_slice();
        let coefficients = (0..m - 1)
            .map(|i| {
                let den = xi[i + d + 1] - xi[i + 1];
                if den == 0.0 {
                    0.0
                } else {
                    d as f64 * (self.coefficients[i + 1] - self.coefficients[i]) / den
                }
            })
            .collect();
        Spline {
            degree: d - 1,
            knots: KnotSequence {
                knots: xi[1..xi.len() - 1].to_vec(),
            },
            coefficients,
        }
    }
}
