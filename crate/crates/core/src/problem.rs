//! Problem definitions for `u_xx u_yy - u_xy^2 + f^2 = 0` on a rectangle.
//!
//! A [`ProblemSpec`] bundles the domain, `f` with both first partials, the
//! Cauchy data on the western edge (`u` and `p = u_x`), per-edge prescriptions
//! for the north and south edges, and an exact solution when one is known.
//! Five worked cases are available through [`builtin`].

use std::fmt;
use std::sync::Arc;

use crate::bspline::Spline;
use crate::error::{Error, Result};

/// Real function of two variables, shareable across threads.
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// Real function of one variable, shareable across threads.
pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub const BUILTIN_CASES: [&str; 5] = ["default", "aggregated", "two-edge", "varying-bc", "nonsmooth"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Domain {
    /// `x_min == x_max` is accepted and yields a march of zero length.
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min > x_max || y_min >= y_max {
            return Err(Error::InvalidDomain(format!(
                "[{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// A function of one variable with its first two derivatives.
#[derive(Clone)]
pub struct Curve {
    value: Fn1,
    d1: Fn1,
    d2: Fn1,
}

impl Curve {
    pub fn analytic(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }

    /// Curve from samples; derivatives come from a quintic spline fit
    /// (lower degree when fewer than six samples are given).
    pub fn from_samples(t: &[f64], g: &[f64]) -> Result<Self> {
        let degree = 5.min(t.len().saturating_sub(1)).max(1);
        let s = Spline::fit(t, g, degree)?;
        let s1 = s.derivative();
        let s2 = s1.derivative();
        Ok(Self {
            value: Arc::new(move |x| s.eval(x)),
            d1: Arc::new(move |x| s1.eval(x)),
            d2: Arc::new(move |x| s2.eval(x)),
        })
    }

    pub fn value(&self, s: f64) -> f64 {
        (self.value)(s)
    }

    pub fn d1(&self, s: f64) -> f64 {
        (self.d1)(s)
    }

    pub fn d2(&self, s: f64) -> f64 {
        (self.d2)(s)
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Curve")
    }
}

/// Quantity that may be prescribed on an edge where one family enters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    A,
    B,
    R,
    S,
    T,
}

/// Boundary data on a stretch of a horizontal edge, as functions of x.
#[derive(Clone, Debug)]
pub enum Prescription {
    /// Both families leave; nothing is needed.
    None,
    /// One family enters; one quantity fixes its slope.
    Slope { quantity: Quantity, value: Fn1Debug },
    /// Both families enter; `u` and the normal derivative `q` are given.
    Strip { u: Curve, q: Curve },
}

/// `Fn1` with a `Debug` impl so prescriptions can derive it.
#[derive(Clone)]
pub struct Fn1Debug(pub Fn1);

impl Fn1Debug {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

impl fmt::Debug for Fn1Debug {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Fn1")
    }
}

impl Prescription {
    pub fn slope(quantity: Quantity, value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Prescription::Slope {
            quantity,
            value: Fn1Debug::new(value),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EdgeSegment {
    pub start: f64,
    pub end: f64,
    pub prescription: Prescription,
}

/// Piecewise prescription along a horizontal edge. Segment `k` owns
/// `[start, end)`; the last segment also owns its right end.
#[derive(Clone, Debug)]
pub struct EdgeData {
    segments: Vec<EdgeSegment>,
}

impl EdgeData {
    pub fn new(segments: Vec<EdgeSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidDomain("edge without segments".into()));
        }
        for w in segments.windows(2) {
            if w[0].end != w[1].start {
                return Err(Error::InvalidDomain("edge segments must be contiguous".into()));
            }
        }
        if segments.iter().any(|s| s.start > s.end) {
            return Err(Error::InvalidDomain("edge segment reversed".into()));
        }
        Ok(Self { segments })
    }

    pub fn uniform(start: f64, end: f64, prescription: Prescription) -> Self {
        Self {
            segments: vec![EdgeSegment {
                start,
                end,
                prescription,
            }],
        }
    }

    pub fn segments(&self) -> &[EdgeSegment] {
        &self.segments
    }

    pub fn at(&self, x: f64) -> &Prescription {
        let last = self.segments.len() - 1;
        let k = self.segments[..last]
            .iter()
            .position(|s| x < s.end)
            .unwrap_or(last);
        &self.segments[k].prescription
    }
}

#[derive(Clone)]
pub struct ExactSolution {
    pub u: Fn2,
    pub p: Fn2,
    pub q: Fn2,
    pub a: Fn2,
    pub b: Fn2,
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExactSolution")
    }
}

/// `f` and its partial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FValues {
    pub f: f64,
    pub f_x: f64,
    pub f_y: f64,
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub domain: Domain,
    pub f: Fn2,
    pub f_x: Fn2,
    pub f_y: Fn2,
    pub west_u: Curve,
    pub west_p: Curve,
    pub north: EdgeData,
    pub south: EdgeData,
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("north", &self.north)
            .field("south", &self.south)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn f_values(&self, x: f64, y: f64) -> FValues {
        FValues {
            f: (self.f)(x, y),
            f_x: (self.f_x)(x, y),
            f_y: (self.f_y)(x, y),
        }
    }

    pub fn exact(&self) -> Result<&ExactSolution> {
        self.exact
            .as_ref()
            .ok_or_else(|| Error::ExactUnavailable(self.name.clone()))
    }

    /// Copy of this problem with the domain's x-extent replaced.
    pub fn with_x_range(&self, x_min: f64, x_max: f64) -> Result<Self> {
        let d = self.domain;
        let mut out = self.clone();
        out.domain = Domain::new(x_min, x_max, d.y_min, d.y_max)?;
        Ok(out)
    }
}

fn arc2(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Fn2 {
    Arc::new(f)
}

/// One of the five worked cases.
pub fn builtin(name: &str) -> Result<ProblemSpec> {
    match name {
        "default" => Ok(default_case()),
        "aggregated" => Ok(aggregated_case()),
        "two-edge" => Ok(two_edge_case()),
        "varying-bc" => Ok(varying_bc_case()),
        "nonsmooth" => Ok(nonsmooth_case()),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}

fn default_f(x: f64, y: f64) -> f64 {
    (0.5 * ((2.0 * y).cos() + (2.0 * x).cosh())).sqrt()
}

fn default_a(x: f64, y: f64) -> f64 {
    -(y.sin() * x.sinh() + default_f(x, y)) / (y.cos() * x.cosh())
}

fn default_b(x: f64, y: f64) -> f64 {
    (-y.sin() * x.sinh() + default_f(x, y)) / (y.cos() * x.cosh())
}

fn default_common(name: &str) -> ProblemSpec {
    // u = cos y cosh x. The west edge owns both western corners.
    let (x0, x1) = (0.0, 1.0);
    ProblemSpec {
        name: name.to_string(),
        domain: Domain::new(x0, x1, -0.5, 0.5).expect("valid domain"),
        f: arc2(default_f),
        f_x: arc2(|x, y| (2.0 * x).sinh() / (2.0 * default_f(x, y))),
        f_y: arc2(|x, y| -(2.0 * y).sin() / (2.0 * default_f(x, y))),
        west_u: Curve::analytic(f64::cos, |y| -y.sin(), |y| -y.cos()),
        west_p: Curve::analytic(|_| 0.0, |_| 0.0, |_| 0.0),
        south: EdgeData::uniform(x0, x1, Prescription::slope(Quantity::A, |x| default_a(x, -0.5))),
        north: EdgeData::uniform(x0, x1, Prescription::slope(Quantity::B, |x| default_b(x, 0.5))),
        exact: None,
    }
}

fn default_case() -> ProblemSpec {
    let mut spec = default_common("default");
    spec.exact = Some(ExactSolution {
        u: arc2(|x, y| y.cos() * x.cosh()),
        p: arc2(|x, y| y.cos() * x.sinh()),
        q: arc2(|x, y| -y.sin() * x.cosh()),
        a: arc2(default_a),
        b: arc2(default_b),
    });
    spec
}

fn nonsmooth_case() -> ProblemSpec {
    let mut spec = default_common("nonsmooth");
    let (x0, x1) = (spec.domain.x_min, spec.domain.x_max);
    spec.south = EdgeData::uniform(
        x0,
        x1,
        Prescription::slope(Quantity::A, |x| -(-1.5 * x).exp() * (x * x + 1.0)),
    );
    spec
}

fn aggregated_case() -> ProblemSpec {
    // u = e^x cos y, f = e^x.
    let (x0, x1, y0, y1) = (0.0, 2.0, -1.0 / 3.0, 2.0 / 3.0);
    let a = |_x: f64, y: f64| -(y.sin() + 1.0) / y.cos();
    let b = |_x: f64, y: f64| (1.0 - y.sin()) / y.cos();
    ProblemSpec {
        name: "aggregated".into(),
        domain: Domain::new(x0, x1, y0, y1).expect("valid domain"),
        f: arc2(|x, _| x.exp()),
        f_x: arc2(|x, _| x.exp()),
        f_y: arc2(|_, _| 0.0),
        west_u: Curve::analytic(f64::cos, |y| -y.sin(), |y| -y.cos()),
        west_p: Curve::analytic(f64::cos, |y| -y.sin(), |y| -y.cos()),
        south: EdgeData::uniform(x0, x1, Prescription::slope(Quantity::A, move |x| a(x, y0))),
        north: EdgeData::uniform(x0, x1, Prescription::slope(Quantity::B, move |x| b(x, y1))),
        exact: Some(ExactSolution {
            u: arc2(|x, y| x.exp() * y.cos()),
            p: arc2(|x, y| x.exp() * y.cos()),
            q: arc2(|x, y| -x.exp() * y.sin()),
            a: arc2(a),
            b: arc2(b),
        }),
    }
}

fn two_edge_case() -> ProblemSpec {
    // u = x^3 y^2 + 1, f = 2 sqrt(6) x^2 y. The north-west corner belongs to
    // the west strip.
    let r6 = 6f64.sqrt();
    let (x0, x1, y0, y1) = (1.0, 2.0, 1.0, 2.0);
    ProblemSpec {
        name: "two-edge".into(),
        domain: Domain::new(x0, x1, y0, y1).expect("valid domain"),
        f: arc2(move |x, y| 2.0 * r6 * x * x * y),
        f_x: arc2(move |x, y| 4.0 * r6 * x * y),
        f_y: arc2(move |x, _| 2.0 * r6 * x * x),
        west_u: Curve::analytic(|y| y * y + 1.0, |y| 2.0 * y, |_| 2.0),
        west_p: Curve::analytic(|y| 3.0 * y * y, |y| 6.0 * y, |_| 6.0),
        south: EdgeData::uniform(x0, x1, Prescription::None),
        north: EdgeData::uniform(
            x0,
            x1,
            Prescription::Strip {
                u: Curve::analytic(|x| 4.0 * x.powi(3) + 1.0, |x| 12.0 * x * x, |x| 24.0 * x),
                q: Curve::analytic(|x| 4.0 * x.powi(3), |x| 12.0 * x * x, |x| 24.0 * x),
            },
        ),
        exact: Some(ExactSolution {
            u: arc2(|x, y| x.powi(3) * y * y + 1.0),
            p: arc2(|x, y| 3.0 * x * x * y * y),
            q: arc2(|x, y| 2.0 * x.powi(3) * y),
            a: arc2(move |x, y| (r6 - 3.0) * y / x),
            b: arc2(move |x, y| -(3.0 + r6) * y / x),
        }),
    }
}

fn varying_bc_case() -> ProblemSpec {
    // u = 1 + e^{2y/x}; a = 1 + y/x changes sign on x = -y, which fixes the
    // switch points x = 2 on the south edge and x = 1.5 on the north edge.
    let (x0, x1, y0, y1) = (1.0, 2.5, -2.0, -1.5);
    let e = |x: f64, y: f64| (2.0 * y / x).exp();
    let north = EdgeData::new(vec![
        EdgeSegment {
            start: x0,
            end: 1.5,
            prescription: Prescription::Strip {
                // u(x, -1.5) = 1 + e^{-3/x}, q(x, -1.5) = (2/x) e^{-3/x}.
                u: Curve::analytic(
                    |x| 1.0 + (-3.0 / x).exp(),
                    |x| 3.0 / (x * x) * (-3.0 / x).exp(),
                    |x| (9.0 / x.powi(4) - 6.0 / x.powi(3)) * (-3.0 / x).exp(),
                ),
                q: Curve::analytic(
                    |x| 2.0 / x * (-3.0 / x).exp(),
                    |x| (6.0 / x.powi(3) - 2.0 / (x * x)) * (-3.0 / x).exp(),
                    |x| (4.0 / x.powi(3) - 24.0 / x.powi(4) + 18.0 / x.powi(5)) * (-3.0 / x).exp(),
                ),
            },
        },
        EdgeSegment {
            start: 1.5,
            end: x1,
            prescription: Prescription::slope(Quantity::A, move |x| 1.0 + y1 / x),
        },
    ])
    .expect("contiguous segments");
    let south = EdgeData::new(vec![
        EdgeSegment {
            start: x0,
            end: 2.0,
            prescription: Prescription::None,
        },
        EdgeSegment {
            start: 2.0,
            end: x1,
            prescription: Prescription::slope(Quantity::B, move |x| y0 / x),
        },
    ])
    .expect("contiguous segments");
    ProblemSpec {
        name: "varying-bc".into(),
        domain: Domain::new(x0, x1, y0, y1).expect("valid domain"),
        f: arc2(move |x, y| 2.0 / (x * x) * e(x, y)),
        f_x: arc2(move |x, y| -e(x, y) * (4.0 / x.powi(3) + 4.0 * y / x.powi(4))),
        f_y: arc2(move |x, y| 4.0 / x.powi(3) * e(x, y)),
        west_u: Curve::analytic(
            |y| 1.0 + (2.0 * y).exp(),
            |y| 2.0 * (2.0 * y).exp(),
            |y| 4.0 * (2.0 * y).exp(),
        ),
        west_p: Curve::analytic(
            |y| -2.0 * y * (2.0 * y).exp(),
            |y| -(2.0 + 4.0 * y) * (2.0 * y).exp(),
            |y| -(8.0 + 8.0 * y) * (2.0 * y).exp(),
        ),
        north,
        south,
        exact: Some(ExactSolution {
            u: arc2(move |x, y| 1.0 + e(x, y)),
            p: arc2(move |x, y| -2.0 * y / (x * x) * e(x, y)),
            q: arc2(move |x, y| 2.0 / x * e(x, y)),
            a: arc2(|x, y| 1.0 + y / x),
            b: arc2(|x, y| y / x),
        }),
    }
}

/// Complex number as a (re, im) pair; only what the generator needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        Self::new(m * self.im.cos(), m * self.im.sin())
    }

    pub fn cos(self) -> Self {
        Self::new(self.re.cos() * self.im.cosh(), -self.re.sin() * self.im.sinh())
    }

    pub fn sin(self) -> Self {
        Self::new(self.re.sin() * self.im.cosh(), self.re.cos() * self.im.sinh())
    }

    pub fn cosh(self) -> Self {
        (Self::I * self).cos()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.re, k * self.im)
    }
}

impl std::ops::Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl std::ops::Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl std::ops::Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl std::ops::Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

/// Analytic `w` with its first two derivatives.
#[derive(Clone)]
pub struct AnalyticFunction {
    pub w: Arc<dyn Fn(Complex) -> Complex + Send + Sync>,
    pub dw: Arc<dyn Fn(Complex) -> Complex + Send + Sync>,
    pub d2w: Arc<dyn Fn(Complex) -> Complex + Send + Sync>,
}

impl AnalyticFunction {
    pub fn new(
        w: impl Fn(Complex) -> Complex + Send + Sync + 'static,
        dw: impl Fn(Complex) -> Complex + Send + Sync + 'static,
        d2w: impl Fn(Complex) -> Complex + Send + Sync + 'static,
    ) -> Self {
        Self {
            w: Arc::new(w),
            dw: Arc::new(dw),
            d2w: Arc::new(d2w),
        }
    }
}

/// Solution pair produced from an analytic function, with the gradient of `u`.
#[derive(Clone)]
pub struct GeneratedPair {
    pub u: Fn2,
    pub p: Fn2,
    pub q: Fn2,
    pub f: Fn2,
}

/// `u = Re w(x+iy)`, `f = |w''(x+iy)|`. `|w''|` is checked at `samples`.
pub fn generate_from_analytic(w: &AnalyticFunction, samples: &[(f64, f64)]) -> Result<GeneratedPair> {
    for &(x, y) in samples {
        let m = (w.d2w)(Complex::new(x, y)).abs();
        if !(m > 1e-14) {
            return Err(Error::DegenerateGenerator { x, y });
        }
    }
    let (w0, w1a, w1b, w2) = (w.w.clone(), w.dw.clone(), w.dw.clone(), w.d2w.clone());
    Ok(GeneratedPair {
        u: arc2(move |x, y| w0(Complex::new(x, y)).re),
        // w' = u_x - i u_y for u = Re w.
        p: arc2(move |x, y| w1a(Complex::new(x, y)).re),
        q: arc2(move |x, y| -w1b(Complex::new(x, y)).im),
        f: arc2(move |x, y| w2(Complex::new(x, y)).abs()),
    })
}

/// How second derivatives of `u` are obtained for [`verify_pde_identity`].
pub enum SecondDerivatives<'a> {
    /// Closed form `(r, s, t)`.
    Analytic(&'a dyn Fn(f64, f64) -> [f64; 3]),
    /// Central differences of the gradient `(p, q)`.
    Gradient(&'a dyn Fn(f64, f64) -> f64, &'a dyn Fn(f64, f64) -> f64),
    /// Central second differences of `u`.
    Values(&'a dyn Fn(f64, f64) -> f64),
}

/// Step of the finite-difference oracle.
pub const FD_STEP: f64 = 1e-4;

/// Max over `points` of `|r t - s^2 + f^2|`.
pub fn verify_pde_identity(
    derivs: &SecondDerivatives<'_>,
    f: &dyn Fn(f64, f64) -> f64,
    points: &[(f64, f64)],
) -> f64 {
    let h = FD_STEP;
    points
        .iter()
        .map(|&(x, y)| {
            let [r, s, t] = match derivs {
                SecondDerivatives::Analytic(rst) => rst(x, y),
                SecondDerivatives::Gradient(p, q) => {
                    let r = (p(x + h, y) - p(x - h, y)) / (2.0 * h);
                    let s = 0.5 * ((p(x, y + h) - p(x, y - h)) + (q(x + h, y) - q(x - h, y))) / (2.0 * h);
                    let t = (q(x, y + h) - q(x, y - h)) / (2.0 * h);
                    [r, s, t]
                }
                SecondDerivatives::Values(u) => {
                    let c = u(x, y);
                    let r = (u(x + h, y) - 2.0 * c + u(x - h, y)) / (h * h);
                    let t = (u(x, y + h) - 2.0 * c + u(x, y - h)) / (h * h);
                    let s = (u(x + h, y + h) - u(x + h, y - h) - u(x - h, y + h) + u(x - h, y - h))
                        / (4.0 * h * h);
                    [r, s, t]
                }
            };
            let fv = f(x, y);
            (r * t - s * s + fv * fv).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        for name in BUILTIN_CASES {
            assert_eq!(builtin(name).unwrap().name, name);
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownCase(_))));
        assert!(builtin("nonsmooth").unwrap().exact.is_none());
    }

    #[test]
    fn default_initial_strip_values() {
        let spec = builtin("default").unwrap();
        let ex = spec.exact.as_ref().unwrap();
        for k in 0..=20 {
            let y = -0.5 + k as f64 * 0.05;
            assert!(((ex.q)(0.0, y) + y.sin()).abs() < 1e-15);
            assert!(((ex.a)(0.0, y) + 1.0).abs() < 1e-14);
            assert!(((ex.b)(0.0, y) - 1.0).abs() < 1e-14);
            assert_eq!((ex.p)(0.0, y), 0.0);
            let f = (spec.f)(0.0, y);
            assert!((f - y.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn edge_segment_lookup() {
        let spec = builtin("varying-bc").unwrap();
        assert!(matches!(spec.north.at(1.2), Prescription::Strip { .. }));
        assert!(matches!(spec.north.at(1.5), Prescription::Slope { quantity: Quantity::A, .. }));
        assert!(matches!(spec.north.at(2.5), Prescription::Slope { .. }));
        assert!(matches!(spec.south.at(1.99), Prescription::None));
        assert!(matches!(spec.south.at(2.0), Prescription::Slope { quantity: Quantity::B, .. }));
    }

    #[test]
    fn degenerate_domain_allowed_in_x_only() {
        assert!(Domain::new(0.0, 0.0, 0.0, 1.0).is_ok());
        assert!(Domain::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Domain::new(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn sampled_curve_derivatives() {
        let t: Vec<f64> = (0..=40).map(|i| -0.5 + i as f64 / 40.0).collect();
        let g: Vec<f64> = t.iter().map(|y| y.cos()).collect();
        let c = Curve::from_samples(&t, &g).unwrap();
        for &y in &[-0.4, 0.0, 0.33] {
            assert!((c.value(y) - y.cos()).abs() < 1e-9);
            assert!((c.d1(y) + y.sin()).abs() < 1e-7);
            assert!((c.d2(y) + y.cos()).abs() < 1e-5);
        }
    }

    #[test]
    fn generator_rejects_vanishing_second_derivative() {
        let w = AnalyticFunction::new(|z| z * z * z, |z| (z * z).scale(3.0), |z| z.scale(6.0));
        assert!(matches!(
            generate_from_analytic(&w, &[(0.5, 0.5), (0.0, 0.0)]),
            Err(Error::DegenerateGenerator { .. })
        ));
    }
}
