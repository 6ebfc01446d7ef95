use serde::Serialize;

use super::LayerPotentials;
use crate::exec::{try_map_indexed, Exec};
use crate::geometry::{classify_point, make_curve, BoundaryDensity, BoundaryFrame, CurveSpec, Orientation};
use crate::{Error, Point2, Result, C64};

/// A density on `∂Ω` extended by zero to the circle `|x| = radius`,
/// as boundary data of the annulus `B(0, radius) \ Ω̄`. The inner
/// component is traversed clockwise on a half-step shifted grid so that
/// the annulus normal points into `Ω`.
#[derive(Debug, Clone)]
pub struct PaddedDensity {
    pub radius: f64,
    pub inner_frame: BoundaryFrame,
    pub inner: BoundaryDensity,
    pub outer_frame: BoundaryFrame,
    pub outer: BoundaryDensity,
}

impl PaddedDensity {
    pub fn new(frame: &BoundaryFrame, mu: &BoundaryDensity, radius: f64, outer_nodes: usize) -> Result<Self> {
        let m = 8 * frame.len();
        let reach = (0..m)
            .map(|i| crate::norm2(frame.at(std::f64::consts::TAU * i as f64 / m as f64).point()))
            .fold(0.0, f64::max);
        if !(radius > reach) {
            return Err(Error::Argument(format!(
                "the closed domain reaches |x| = {reach}, not inside the ball of radius {radius}"
            )));
        }
        let shift = 0.5 * frame.step();
        let inner_frame =
            BoundaryFrame::with_orientation(frame.curve().clone(), frame.len(), Orientation::Clockwise, shift)?;
        let inner = mu.transfer(frame, &inner_frame)?;
        let outer_frame = make_curve(CurveSpec::circle(radius), outer_nodes)?.1;
        let outer = BoundaryDensity::zero(&outer_frame);
        Ok(PaddedDensity { radius, inner_frame, inner, outer_frame, outer })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExteriorReduction {
    pub radius: f64,
    /// `w[μ]` on the original frame.
    pub exterior: Vec<C64>,
    /// Annulus double layer of the padded density.
    pub annulus: Vec<C64>,
    /// `|w[μ] + w_annulus[μ̃]|` at each point.
    pub defects: Vec<f64>,
    pub max_defect: f64,
}

/// Compares the exterior double layer with minus the annulus double layer
/// of the zero-padded density at points of the annulus.
pub fn exterior_reduction_check(
    layers: &LayerPotentials,
    mu: &BoundaryDensity,
    radius: f64,
    points: &[Point2],
    exec: Exec,
) -> Result<ExteriorReduction> {
    let frame = layers.frame();
    let padded = PaddedDensity::new(frame, mu, radius, frame.len().max(64))?;
    for &x in points {
        if classify_point(frame, x).inside || crate::norm2(x) >= radius {
            return Err(Error::Argument(format!("point {x:?} is not in the annulus")));
        }
    }
    let fs = layers.fundamental_solution().clone();
    let quad = *layers.quadrature();
    let inner = LayerPotentials::new(fs.clone(), padded.inner_frame.clone())?.with_quadrature(quad);
    let outer = LayerPotentials::new(fs, padded.outer_frame.clone())?.with_quadrature(quad);
    let pairs = try_map_indexed(exec, points.len(), |i| {
        let x = points[i];
        let direct = layers.double_layer(mu, x)?;
        let ann = inner.double_layer(&padded.inner, x)? + outer.double_layer(&padded.outer, x)?;
        Ok::<_, Error>((direct, ann))
    })?;
    let exterior: Vec<C64> = pairs.iter().map(|p| p.0).collect();
    let annulus: Vec<C64> = pairs.iter().map(|p| p.1).collect();
    let defects: Vec<f64> = pairs.iter().map(|(a, b)| (a + b).norm()).collect();
    let max_defect = defects.iter().cloned().fold(0.0, f64::max);
    Ok(ExteriorReduction { radius, exterior, annulus, defects, max_defect })
}
