//! Boundary classification and boundary data.
//!
//! A characteristic with tangent `(1, slope)` enters the domain through an
//! edge when the tangent points against the outward normal. Each entering
//! family needs one condition there: the slope it does not carry itself, or
//! a quantity from which that slope follows. Where both families enter, a
//! strip of `u` and the normal derivative is needed and the remaining
//! second-order data follow from the PDE.

use crate::error::{Edge, Error, Result};
use crate::problem::{Curve, ProblemSpec, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Entering,
    Leaving,
    /// Tangent to the edge; counted as leaving.
    Boundary,
}

impl Crossing {
    fn from_dot(dot: f64) -> Self {
        if dot > 0.0 {
            Crossing::Leaving
        } else if dot < 0.0 {
            Crossing::Entering
        } else {
            Crossing::Boundary
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeClassification {
    pub edge: Edge,
    pub alpha: Crossing,
    pub beta: Crossing,
    pub required_conditions: usize,
}

impl EdgeClassification {
    /// Data needed on the edge: `"none"`, `"a"`, `"b"` or `"a-and-b"`.
    ///
    /// An entering alpha characteristic arrives without a value of `b`, and
    /// an entering beta characteristic without `a`.
    pub fn required_quantities(&self) -> &'static str {
        match (self.alpha == Crossing::Entering, self.beta == Crossing::Entering) {
            (false, false) => "none",
            (true, false) => "b",
            (false, true) => "a",
            (true, true) => "a-and-b",
        }
    }
}

fn edge_from_normal(normal: [f64; 2]) -> Result<Edge> {
    match normal {
        [x, y] if x == -1.0 && y == 0.0 => Ok(Edge::West),
        [x, y] if x == 1.0 && y == 0.0 => Ok(Edge::East),
        [x, y] if x == 0.0 && y == 1.0 => Ok(Edge::North),
        [x, y] if x == 0.0 && y == -1.0 => Ok(Edge::South),
        [x, y] => Err(Error::InvalidNormal(x, y)),
    }
}

pub fn classify(
    tangent_alpha: [f64; 2],
    tangent_beta: [f64; 2],
    normal: [f64; 2],
) -> Result<EdgeClassification> {
    let edge = edge_from_normal(normal)?;
    let dot = |t: [f64; 2]| t[0] * normal[0] + t[1] * normal[1];
    let alpha = Crossing::from_dot(dot(tangent_alpha));
    let beta = Crossing::from_dot(dot(tangent_beta));
    let required_conditions = [alpha, beta]
        .iter()
        .filter(|c| **c == Crossing::Entering)
        .count();
    Ok(EdgeClassification {
        edge,
        alpha,
        beta,
        required_conditions,
    })
}

/// Classification of one stretch of an edge, sampled at its midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentClassification {
    pub start: f64,
    pub end: f64,
    pub classification: EdgeClassification,
}

/// Classifies every prescription segment of every edge using the exact
/// slopes. Order: west, south segments, north segments, east.
pub fn classify_boundary(spec: &ProblemSpec) -> Result<Vec<SegmentClassification>> {
    let ex = spec.exact()?;
    let d = spec.domain;
    let at = |edge: Edge, x: f64, y: f64| {
        classify([1.0, (ex.a)(x, y)], [1.0, (ex.b)(x, y)], edge.outward_normal())
    };
    let mut out = Vec::new();
    let y_mid = 0.5 * (d.y_min + d.y_max);
    out.push(SegmentClassification {
        start: d.y_min,
        end: d.y_max,
        classification: at(Edge::West, d.x_min, y_mid)?,
    });
    for (edge, data, y) in [(Edge::South, &spec.south, d.y_min), (Edge::North, &spec.north, d.y_max)] {
        for seg in data.segments() {
            out.push(SegmentClassification {
                start: seg.start,
                end: seg.end,
                classification: at(edge, 0.5 * (seg.start + seg.end), y)?,
            });
        }
    }
    out.push(SegmentClassification {
        start: d.y_min,
        end: d.y_max,
        classification: at(Edge::East, d.x_max, y_mid)?,
    });
    Ok(out)
}

/// Full second-order data at one point of a strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripPoint {
    pub u: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

/// Strip data sampled at `nodes` (y for a vertical strip, x for a horizontal one).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StripExtension {
    pub nodes: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl StripExtension {
    fn push(&mut self, node: f64, pt: StripPoint) {
        self.nodes.push(node);
        self.u.push(pt.u);
        self.p.push(pt.p);
        self.q.push(pt.q);
        self.r.push(pt.r);
        self.s.push(pt.s);
        self.t.push(pt.t);
        self.a.push(pt.a);
        self.b.push(pt.b);
    }

    pub fn point(&self, k: usize) -> StripPoint {
        StripPoint {
            u: self.u[k],
            p: self.p[k],
            q: self.q[k],
            r: self.r[k],
            s: self.s[k],
            t: self.t[k],
            a: self.a[k],
            b: self.b[k],
        }
    }
}

const FREE_TOL: f64 = 1e-12;

/// Strip point on a vertical edge from `u(y)` and `p(y)`.
pub fn vertical_strip_point(u: &Curve, p: &Curve, f: f64, y: f64) -> Result<StripPoint> {
    let t = u.d2(y);
    if t.abs() < FREE_TOL {
        return Err(Error::StripNotFree { y });
    }
    let s = p.d1(y);
    let a = (-s + f) / t;
    let b = (-s - f) / t;
    Ok(StripPoint {
        u: u.value(y),
        p: p.value(y),
        q: u.d1(y),
        r: 2.0 * a * b * f / (a - b),
        s,
        t,
        a,
        b,
    })
}

/// Strip point on a horizontal edge from `u(x)` and `q(x)`.
pub fn horizontal_strip_point(u: &Curve, q: &Curve, f: f64, x: f64) -> Result<StripPoint> {
    let r = u.d2(x);
    if r.abs() < FREE_TOL {
        return Err(Error::HorizontalStripNotFree { x });
    }
    let s = q.d1(x);
    let a = -r / (s + f);
    let b = -r / (s - f);
    Ok(StripPoint {
        u: u.value(x),
        p: u.d1(x),
        q: q.value(x),
        r,
        s,
        t: 2.0 * f / (a - b),
        a,
        b,
    })
}

pub fn extend_vertical_strip(
    u: &Curve,
    p: &Curve,
    f: &dyn Fn(f64) -> f64,
    nodes: &[f64],
) -> Result<StripExtension> {
    let mut out = StripExtension::default();
    for &y in nodes {
        out.push(y, vertical_strip_point(u, p, f(y), y)?);
    }
    Ok(out)
}

pub fn extend_horizontal_strip(
    u: &Curve,
    q: &Curve,
    f: &dyn Fn(f64) -> f64,
    nodes: &[f64],
) -> Result<StripExtension> {
    let mut out = StripExtension::default();
    for &x in nodes {
        out.push(x, horizontal_strip_point(u, q, f(x), x)?);
    }
    Ok(out)
}

/// The slope already known at a boundary node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KnownSlope {
    A(f64),
    B(f64),
}

fn checked_div(num: f64, den: f64, scale: f64, what: &'static str) -> Result<f64> {
    if den.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) || !den.is_finite() {
        return Err(Error::DegeneratePrescription(what));
    }
    Ok(num / den)
}

/// The missing slope at a node where one family enters, given the other
/// slope and one prescribed quantity.
pub fn slope_from_prescription(known: KnownSlope, quantity: Quantity, value: f64, f: f64) -> Result<f64> {
    match (known, quantity) {
        (KnownSlope::B(_), Quantity::A) | (KnownSlope::A(_), Quantity::B) => Ok(value),
        (KnownSlope::B(_), Quantity::B) | (KnownSlope::A(_), Quantity::A) => {
            Err(Error::DegeneratePrescription("prescribed slope is already known"))
        }
        (KnownSlope::B(b), Quantity::R) => {
            let r = value;
            let scale = r.abs() + (2.0 * b * f).abs();
            checked_div(b * r, r - 2.0 * b * f, scale, "r = 2bf")
        }
        (KnownSlope::B(b), Quantity::S) => {
            let s = value;
            Ok(checked_div(s - f, s + f, s.abs() + f.abs(), "s = -f")? * b)
        }
        (KnownSlope::B(b), Quantity::T) => Ok(b + checked_div(2.0 * f, value, 1.0, "t = 0")?),
        (KnownSlope::A(a), Quantity::R) => {
            let r = value;
            let scale = r.abs() + (2.0 * a * f).abs();
            checked_div(a * r, r + 2.0 * a * f, scale, "r = -2af")
        }
        (KnownSlope::A(a), Quantity::S) => {
            let s = value;
            Ok(checked_div(s + f, s - f, s.abs() + f.abs(), "s = f")? * a)
        }
        (KnownSlope::A(a), Quantity::T) => Ok(a - checked_div(2.0 * f, value, 1.0, "t = 0")?),
    }
}

/// Second derivatives implied by the two slopes and `f`.
pub fn second_derivatives(a: f64, b: f64, f: f64) -> [f64; 3] {
    let d = a - b;
    [2.0 * a * b * f / d, -(a + b) * f / d, 2.0 * f / d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::builtin;

    #[test]
    fn classify_examples() {
        let c = classify([1.0, -1.0], [1.0, 1.0], [-1.0, 0.0]).unwrap();
        assert_eq!((c.alpha, c.beta, c.required_conditions), (Crossing::Entering, Crossing::Entering, 2));
        assert_eq!(c.edge, Edge::West);
        let c = classify([1.0, -0.3], [1.0, 0.7], [0.0, -1.0]).unwrap();
        assert_eq!((c.alpha, c.beta, c.required_conditions), (Crossing::Leaving, Crossing::Entering, 1));
        assert_eq!(c.required_quantities(), "a");
        let c = classify([1.0, 0.0], [1.0, -1.0], [0.0, -1.0]).unwrap();
        assert_eq!(c.alpha, Crossing::Boundary);
        assert_eq!(c.required_conditions, 0);
        assert!(classify([1.0, 0.0], [1.0, 0.0], [0.6, 0.8]).is_err());
    }

    #[test]
    fn vertical_strip_examples() {
        let spec = builtin("default").unwrap();
        let nodes: Vec<f64> = (0..=10).map(|k| -0.5 + 0.1 * k as f64).collect();
        let f = |y: f64| (spec.f)(0.0, y);
        let ext = extend_vertical_strip(&spec.west_u, &spec.west_p, &f, &nodes).unwrap();
        for (k, &y) in nodes.iter().enumerate() {
            assert!((ext.a[k] + 1.0).abs() < 1e-14);
            assert!((ext.b[k] - 1.0).abs() < 1e-14);
            assert!((ext.r[k] - y.cos()).abs() < 1e-14);
        }

        let u = Curve::analytic(|y| 0.5 * y * y, |y| y, |_| 1.0);
        let p = Curve::analytic(|_| 0.0, |_| 0.0, |_| 0.0);
        let pt = vertical_strip_point(&u, &p, 1.0, 0.3).unwrap();
        assert_eq!((pt.q, pt.t, pt.s, pt.a, pt.b, pt.r), (0.3, 1.0, 0.0, 1.0, -1.0, -1.0));

        let flat = Curve::analytic(|y| y, |_| 1.0, |_| 0.0);
        assert!(matches!(
            vertical_strip_point(&flat, &p, 1.0, 0.0),
            Err(Error::StripNotFree { .. })
        ));
    }

    #[test]
    fn aggregated_strip_slopes() {
        let spec = builtin("aggregated").unwrap();
        for k in 0..=10 {
            let y = -1.0 / 3.0 + k as f64 / 10.0;
            let pt = vertical_strip_point(&spec.west_u, &spec.west_p, (spec.f)(0.0, y), y).unwrap();
            assert!((pt.a + (y.sin() + 1.0) / y.cos()).abs() < 1e-13);
            assert!((pt.b - (1.0 - y.sin()) / y.cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn horizontal_strip_examples() {
        let spec = builtin("two-edge").unwrap();
        let crate::problem::Prescription::Strip { u, q } = spec.north.at(1.5) else {
            panic!("north edge of two-edge case is a strip");
        };
        let r6 = 6f64.sqrt();
        for k in 0..=10 {
            let x = 1.0 + 0.1 * k as f64;
            let pt = horizontal_strip_point(u, q, (spec.f)(x, 2.0), x).unwrap();
            assert!((pt.a - (r6 - 3.0) * 2.0 / x).abs() < 1e-13);
            assert!((pt.b + (3.0 + r6) * 2.0 / x).abs() < 1e-13);
        }

        let u = Curve::analytic(|x| 0.5 * x * x, |x| x, |_| 1.0);
        let q = Curve::analytic(|_| 0.0, |_| 0.0, |_| 0.0);
        let pt = horizontal_strip_point(&u, &q, 1.0, 0.2).unwrap();
        assert_eq!((pt.r, pt.s, pt.a, pt.b, pt.t), (1.0, 0.0, -1.0, 1.0, -1.0));

        let lin = Curve::analytic(|x| x, |_| 1.0, |_| 0.0);
        assert!(matches!(
            horizontal_strip_point(&lin, &q, 1.0, 0.0),
            Err(Error::HorizontalStripNotFree { .. })
        ));
    }

    #[test]
    fn prescription_examples() {
        assert_eq!(slope_from_prescription(KnownSlope::B(1.0), Quantity::T, 2.0, 1.0).unwrap(), 2.0);
        assert_eq!(slope_from_prescription(KnownSlope::B(1.0), Quantity::S, 0.0, 1.0).unwrap(), -1.0);
        assert_eq!(slope_from_prescription(KnownSlope::B(-1.0), Quantity::A, 0.5, 1.0).unwrap(), 0.5);
        assert!(slope_from_prescription(KnownSlope::B(1.0), Quantity::T, 0.0, 1.0).is_err());
        assert!(slope_from_prescription(KnownSlope::B(1.0), Quantity::S, -1.0, 1.0).is_err());
        assert!(slope_from_prescription(KnownSlope::B(0.5), Quantity::R, 1.0, 1.0).is_err());
    }
}
