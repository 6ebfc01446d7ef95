use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::geometry::{classify_point, frame_param, BoundaryDensity, BoundaryFrame, PointClass};
use crate::{Error, Point2, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PanelOptions {
    /// Gauss–Legendre order of the reported value.
    pub order: usize,
    /// Lower order used only for the error estimate.
    pub check_order: usize,
    /// Panels are split until arc length ≤ `ratio ·` distance to the target.
    pub ratio: f64,
    /// Longest panel in the frame parameter.
    pub max_param_length: f64,
}

impl Default for PanelOptions {
    fn default() -> Self {
        PanelOptions { order: 24, check_order: 16, ratio: 1.0, max_param_length: PI / 8.0 }
    }
}

fn rule(order: usize) -> Result<Vec<(f64, f64)>> {
    let q = NonZeroUsize::new(order).ok_or_else(|| Error::Argument("panel order must be positive".into()))?;
    Ok(GaussLegendre::new(q).as_node_weight_pairs().to_vec())
}

/// Composite Gauss–Legendre integral of `kernel(x, y, ν_y)·μ(y)` with
/// breakpoints at density kinks, curve breakpoints and the boundary point
/// nearest to `x`, refined dyadically toward `x`. Geometry and density are
/// evaluated exactly (the density through its profile, or its
/// trigonometric interpolant). Returns the value and the difference to the
/// lower-order rule on the same panels.
pub fn panel_integrate<const M: usize, F>(
    frame: &BoundaryFrame,
    density: &BoundaryDensity,
    x: Point2,
    kernel: &F,
    opts: &PanelOptions,
    class: Option<PointClass>,
) -> Result<([C64; M], f64)>
where
    F: Fn(Point2, Point2, Point2) -> [f64; M],
{
    let class = class.unwrap_or_else(|| classify_point(frame, x));
    let mut cuts: Vec<f64> = density.kinks().to_vec();
    cuts.extend(frame.curve().breakpoints().iter().map(|&t| frame_param(frame, t)));
    cuts.push(class.nearest);
    let mut cuts: Vec<f64> = cuts.into_iter().map(|c| c.rem_euclid(TAU)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let first = cuts[0];
    cuts.push(first + TAU);

    let hi = rule(opts.order)?;
    let lo = rule(opts.check_order)?;
    let mut value = [C64::default(); M];
    let mut check = [C64::default(); M];
    let mut stack: Vec<(f64, f64)> = cuts.windows(2).rev().map(|w| (w[0], w[1])).collect();
    let dist_to = |s: f64| crate::norm2(crate::sub2(frame.at(s).point(), x));
    while let Some((a, b)) = stack.pop() {
        let len = b - a;
        if len <= 0.0 {
            continue;
        }
        let m = 0.5 * (a + b);
        let speed = frame.at(a).speed().max(frame.at(m).speed()).max(frame.at(b).speed());
        let near = dist_to(a).min(dist_to(m)).min(dist_to(b));
        let split = len > opts.max_param_length || (len * speed > opts.ratio * near && len > 1e-13);
        if split {
            stack.push((m, b));
            stack.push((a, m));
            continue;
        }
        for (nodes, acc) in [(&hi, &mut value), (&lo, &mut check)] {
            for &(t, w) in nodes.iter() {
                let s = m + 0.5 * len * t;
                let fp = frame.at(s);
                let k = kernel(x, fp.point(), fp.normal());
                let wt = 0.5 * len * w * fp.speed();
                let mu = density.value_at(s);
                for c in 0..M {
                    acc[c] += k[c] * wt * mu;
                }
            }
        }
    }
    let estimate = (0..M).map(|c| (value[c] - check[c]).norm()).fold(0.0, f64::max);
    Ok((value, estimate))
}
