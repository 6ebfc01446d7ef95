use std::f64::consts::TAU;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::curve::{BoundaryCurve, CurveJet, CurveSpec};
use crate::{Error, Point2, Result};

/// Speeds below this fraction of the maximum speed count as degenerate.
pub const MIN_RELATIVE_SPEED: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Counterclockwise,
    /// Traverses the curve backwards, so `ν` points into the bounded
    /// region. Used for inner boundary components of annuli.
    Clockwise,
}

/// Geometry at one frame parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    /// Parameter of the underlying curve.
    pub t: f64,
    /// Derivatives are with respect to the frame parameter.
    pub jet: CurveJet,
}

impl FramePoint {
    pub fn point(&self) -> Point2 {
        self.jet.point
    }
    pub fn normal(&self) -> Point2 {
        self.jet.normal()
    }
    pub fn speed(&self) -> f64 {
        self.jet.speed()
    }
}

/// Equispaced nodes `s_i = 2πi/N` on a closed curve with normals and
/// trapezoid arc weights `dσ_i = (2π/N)|γ′(s_i)|`.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    curve: Arc<BoundaryCurve>,
    orientation: Orientation,
    shift: f64,
    params: Vec<f64>,
    points: Vec<Point2>,
    normals: Vec<Point2>,
    speeds: Vec<f64>,
    weights: Vec<f64>,
    diameter: f64,
}

impl BoundaryFrame {
    pub fn new(curve: Arc<BoundaryCurve>, n: usize) -> Result<Self> {
        Self::with_orientation(curve, n, Orientation::Counterclockwise, 0.0)
    }

    /// Frame whose parameter `s` maps to the curve parameter `s + shift`
    /// (counterclockwise) or `−(s + shift)` (clockwise).
    pub fn with_orientation(
        curve: Arc<BoundaryCurve>,
        n: usize,
        orientation: Orientation,
        shift: f64,
    ) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::Argument(format!("node count must be even and >= 16, got {n}")));
        }
        let mut frame = BoundaryFrame {
            curve,
            orientation,
            shift,
            params: Vec::with_capacity(n),
            points: Vec::with_capacity(n),
            normals: Vec::with_capacity(n),
            speeds: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
            diameter: 0.0,
        };
        let h = TAU / n as f64;
        for i in 0..n {
            let s = h * i as f64;
            let fp = frame.at(s);
            frame.params.push(s);
            frame.points.push(fp.point());
            frame.normals.push(fp.normal());
            frame.speeds.push(fp.speed());
            frame.weights.push(h * fp.speed());
        }
        frame.diameter = node_diameter(&frame.points);
        let vmax = frame.speeds.iter().cloned().fold(0.0, f64::max);
        let floor = MIN_RELATIVE_SPEED * vmax;
        if let Some(i) = frame.speeds.iter().position(|&v| !(v > floor)) {
            return Err(Error::Irregular {
                t: frame.params[i],
                speed: frame.speeds[i],
                min: floor,
            });
        }
        Ok(frame)
    }

    pub fn curve(&self) -> &Arc<BoundaryCurve> {
        &self.curve
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `+1` for counterclockwise frames, `−1` otherwise.
    pub fn orientation_sign(&self) -> f64 {
        match self.orientation {
            Orientation::Counterclockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn curve_param(&self, s: f64) -> f64 {
        match self.orientation {
            Orientation::Counterclockwise => s + self.shift,
            Orientation::Clockwise => -(s + self.shift),
        }
    }

    /// Geometry at an arbitrary frame parameter, derivatives taken in `s`.
    pub fn at(&self, s: f64) -> FramePoint {
        let t = self.curve_param(s);
        let mut jet = self.curve.jet(t);
        if self.orientation == Orientation::Clockwise {
            jet.d1 = [-jet.d1[0], -jet.d1[1]];
        }
        FramePoint { t, jet }
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
    pub fn points(&self) -> &[Point2] {
        &self.points
    }
    pub fn normals(&self) -> &[Point2] {
        &self.normals
    }
    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Parameter spacing `2π/N`.
    pub fn step(&self) -> f64 {
        TAU / self.len() as f64
    }

    pub fn length(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest chord between consecutive nodes.
    pub fn max_spacing(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| crate::norm2(crate::sub2(self.points[(i + 1) % n], self.points[i])))
            .fold(0.0, f64::max)
    }

    pub fn max_speed(&self) -> f64 {
        self.speeds.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest distance between two nodes.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// `½∮(x dy − y dx)` by the trapezoid rule; positive iff counterclockwise.
    pub fn signed_area(&self) -> f64 {
        let h = self.step();
        (0..self.len())
            .map(|i| {
                let fp = self.at(self.params[i]);
                let (p, d) = (fp.jet.point, fp.jet.d1);
                0.5 * h * (p[0] * d[1] - p[1] * d[0])
            })
            .sum()
    }

    /// No two non-adjacent polygon edges through the nodes intersect.
    pub fn is_simple(&self) -> bool {
        let n = self.len();
        let seg = |i: usize| (self.points[i], self.points[(i + 1) % n]);
        for i in 0..n {
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                if segments_cross(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Writes `t,x1,x2,nu1,nu2,w`, one row per node.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["t", "x1", "x2", "nu1", "nu2", "w"])?;
        for i in 0..self.len() {
            let p = self.points[i];
            let nu = self.normals[i];
            w.write_record([
                format!("{:e}", self.params[i]),
                format!("{:e}", p[0]),
                format!("{:e}", p[1]),
                format!("{:e}", nu[0]),
                format!("{:e}", nu[1]),
                format!("{:e}", self.weights[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn node_diameter(points: &[Point2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(crate::norm2(crate::sub2(*p, *q)));
        }
    }
    d
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Builds a curve preset and its frame with `n` nodes, rejecting irregular
/// or clockwise parametrizations.
pub fn make_curve(spec: CurveSpec, n: usize) -> Result<(Arc<BoundaryCurve>, BoundaryFrame)> {
    let curve = Arc::new(BoundaryCurve::new(spec)?);
    let frame = BoundaryFrame::new(curve.clone(), n)?;
    if frame.signed_area() <= 0.0 {
        return Err(Error::Argument("curve must be counterclockwise".into()));
    }
    Ok((curve, frame))
}
