//! Periodic trapezoid, logarithmic product integration, upsampled
//! near-singular sums and composite Gauss–Legendre panels over closed
//! curves.

mod panels;

pub use panels::{panel_integrate, PanelOptions};

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::geometry::{classify_point, BoundaryDensity, BoundaryFrame, PointClass};
use crate::{Error, Point2, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Trapezoid,
    LogProduct,
    NearSingular,
}

/// Nodes in the frame parameter with arc-length weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub params: Vec<f64>,
    pub weights: Vec<f64>,
    /// Node index of the logarithmic singularity.
    pub target: Option<usize>,
    pub factor: usize,
}

impl QuadratureRule {
    /// `dσ_i = (2π/N)|γ′(s_i)|`.
    pub fn trapezoid(frame: &BoundaryFrame) -> Self {
        QuadratureRule {
            kind: RuleKind::Trapezoid,
            params: frame.params().to_vec(),
            weights: frame.weights().to_vec(),
            target: None,
            factor: 1,
        }
    }

    /// Weights `R_j(s_i)|γ′(s_j)|` for `∫ ln(4 sin²((s_i − s)/2)) f dσ`.
    pub fn log_product(frame: &BoundaryFrame, target: usize) -> Result<Self> {
        if target >= frame.len() {
            return Err(Error::Argument(format!("node {target} out of range")));
        }
        let r = log_product_weights(frame.len(), target)?;
        Ok(QuadratureRule {
            kind: RuleKind::LogProduct,
            params: frame.params().to_vec(),
            weights: r.iter().zip(frame.speeds()).map(|(a, b)| a * b).collect(),
            target: Some(target),
            factor: 1,
        })
    }

    /// Trapezoid on `factor·N` nodes with exact geometry.
    pub fn near_singular(frame: &BoundaryFrame, factor: usize) -> Result<Self> {
        check_factor(factor)?;
        let m = factor * frame.len();
        let h = TAU / m as f64;
        let params: Vec<f64> = (0..m).map(|j| h * j as f64).collect();
        let weights = params.iter().map(|&s| h * frame.at(s).speed()).collect();
        Ok(QuadratureRule { kind: RuleKind::NearSingular, params, weights, target: None, factor })
    }

    pub fn apply(&self, values: &[C64]) -> Result<C64> {
        if values.len() != self.weights.len() {
            return Err(Error::Argument("integrand length does not match the rule".into()));
        }
        Ok(values.iter().zip(&self.weights).map(|(v, w)| v * w).sum())
    }
}

fn check_factor(factor: usize) -> Result<()> {
    if factor == 0 || !factor.is_power_of_two() {
        return Err(Error::Argument(format!("upsampling factor must be a power of two, got {factor}")));
    }
    Ok(())
}

/// `Σ f_i dσ_i`.
pub fn integrate_smooth(frame: &BoundaryFrame, values: &[C64]) -> Result<C64> {
    QuadratureRule::trapezoid(frame).apply(values)
}

/// Product weights on `N = 2n` equispaced nodes:
/// `R_j = −(2π/n) Σ_{m<n} cos(m(s_i − s_j))/m − (π/n²) cos(n(s_i − s_j))`.
pub fn log_product_weights(nodes: usize, target: usize) -> Result<Vec<f64>> {
    if nodes < 4 || !nodes.is_multiple_of(2) {
        return Err(Error::Argument("log-product rule needs an even node count".into()));
    }
    let n = nodes / 2;
    let nf = n as f64;
    Ok((0..nodes)
        .map(|j| {
            let d = PI * (target as f64 - j as f64) / nf;
            let mut s = 0.0;
            for m in 1..n {
                s += (m as f64 * d).cos() / m as f64;
            }
            -2.0 * PI / nf * s - PI / (nf * nf) * (nf * d).cos()
        })
        .collect())
}

/// `∫ [A ln(4 sin²((s − s_t)/2)) + B] dσ` for the factored integrand given
/// by node values of `A` and `B`.
pub fn integrate_log_singular(
    frame: &BoundaryFrame,
    a: &[C64],
    b: &[C64],
    target: usize,
) -> Result<C64> {
    if a.len() != frame.len() || b.len() != frame.len() {
        return Err(Error::Argument("factored integrand does not match the frame".into()));
    }
    if a.iter().chain(b).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Capability(
            "integrand is not factored into finite smooth parts A and B".into(),
        ));
    }
    let rule = QuadratureRule::log_product(frame, target)?;
    Ok(rule.apply(a)? + integrate_smooth(frame, b)?)
}

/// Tolerances and caps for boundary integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Largest upsampling factor.
    pub max_factor: usize,
    /// Closest admissible distance, relative to the curve diameter.
    pub d_min_rel: f64,
    /// Targets closer than `ratio` node spacings are upsampled until the
    /// spacing is at most `distance / ratio`.
    pub spacing_ratio: f64,
    /// Use Gauss–Legendre panels for callable densities with kinks and for
    /// curves with breakpoints.
    pub panels: bool,
    /// Use panels for every callable density, kinked or not.
    pub prefer_panels: bool,
    /// Skip routing and always use the upsampled trapezoid with this factor,
    /// so nearby targets see the same discrete operator.
    pub fixed_factor: Option<usize>,
    pub panel: PanelOptions,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            max_factor: 64,
            d_min_rel: 1e-6,
            spacing_ratio: 4.0,
            panels: true,
            prefer_panels: false,
            fixed_factor: None,
            panel: PanelOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Trapezoid,
    Upsampled,
    Panels,
}

/// Value of a vector of `M` boundary integrals with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryIntegral<const M: usize> {
    pub value: [C64; M],
    pub method: Method,
    pub factor: usize,
    /// Difference to the next coarser rule; `0` for plain trapezoid sums.
    pub estimate: f64,
    pub class: PointClass,
}

/// Trapezoid sum of `kernel(x, y, ν_y)·μ(y)` on `factor·N` nodes.
pub fn near_singular_upsample<const M: usize, F>(
    frame: &BoundaryFrame,
    density: &BoundaryDensity,
    x: Point2,
    factor: usize,
    kernel: &F,
) -> Result<[C64; M]>
where
    F: Fn(Point2, Point2, Point2) -> [f64; M],
{
    check_factor(factor)?;
    if factor == 1 {
        return Ok(trapezoid_nodes(frame, density, x, kernel));
    }
    let m = factor * frame.len();
    let mu = density.resample(m)?;
    let h = TAU / m as f64;
    let mut acc = [C64::default(); M];
    for (j, mu_j) in mu.iter().enumerate() {
        let fp = frame.at(h * j as f64);
        let k = kernel(x, fp.point(), fp.normal());
        let w = h * fp.speed();
        for c in 0..M {
            acc[c] += k[c] * w * mu_j;
        }
    }
    Ok(acc)
}

fn trapezoid_nodes<const M: usize, F>(
    frame: &BoundaryFrame,
    density: &BoundaryDensity,
    x: Point2,
    kernel: &F,
) -> [C64; M]
where
    F: Fn(Point2, Point2, Point2) -> [f64; M],
{
    let mut acc = [C64::default(); M];
    for i in 0..frame.len() {
        let k = kernel(x, frame.points()[i], frame.normals()[i]);
        let w = frame.weights()[i] * density.values()[i];
        for c in 0..M {
            acc[c] += k[c] * w;
        }
    }
    acc
}

fn max_diff<const M: usize>(a: &[C64; M], b: &[C64; M]) -> f64 {
    (0..M).map(|c| (a[c] - b[c]).norm()).fold(0.0, f64::max)
}

/// `∫ kernel(x, y, ν_y) μ(y) dσ_y` for `x` off the boundary, routed by the
/// classification of `x`: plain trapezoid far away, upsampled trapezoid
/// near the curve, and Gauss–Legendre panels when the data have kinks.
pub fn boundary_integral<const M: usize, F>(
    frame: &BoundaryFrame,
    density: &BoundaryDensity,
    x: Point2,
    kernel: &F,
    cfg: &QuadratureConfig,
) -> Result<BoundaryIntegral<M>>
where
    F: Fn(Point2, Point2, Point2) -> [f64; M],
{
    let class = classify_point(frame, x);
    if let Some(i) = frame.points().iter().position(|&p| p == x) {
        return Err(Error::OnBoundary { node: i });
    }
    let diameter = frame.diameter();
    let floor = cfg.d_min_rel * diameter;
    let kinked = !density.kinks().is_empty() || !frame.curve().breakpoints().is_empty();
    if cfg.panels && (kinked || cfg.prefer_panels) && density.has_profile() {
        if class.distance < floor {
            let (_, estimate) = panel_integrate(frame, density, x, kernel, &cfg.panel, Some(class))?;
            return Err(Error::Precision { distance: class.distance, floor, estimate });
        }
        let (value, estimate) = panel_integrate(frame, density, x, kernel, &cfg.panel, Some(class))?;
        return Ok(BoundaryIntegral { value, method: Method::Panels, factor: 0, estimate, class });
    }
    if let Some(factor) = cfg.fixed_factor {
        if class.distance < floor {
            return Err(Error::Precision { distance: class.distance, floor, estimate: f64::NAN });
        }
        let value = near_singular_upsample(frame, density, x, factor, kernel)?;
        return Ok(BoundaryIntegral { value, method: Method::Upsampled, factor, estimate: 0.0, class });
    }
    let spacing = frame.max_speed() * frame.step();
    if class.distance >= cfg.spacing_ratio * spacing && !class.near_boundary {
        let value = trapezoid_nodes(frame, density, x, kernel);
        return Ok(BoundaryIntegral { value, method: Method::Trapezoid, factor: 1, estimate: 0.0, class });
    }
    let mut factor = 1;
    while factor < cfg.max_factor && spacing / factor as f64 > class.distance / cfg.spacing_ratio {
        factor *= 2;
    }
    let factor = factor.max(2);
    let value = near_singular_upsample(frame, density, x, factor, kernel)?;
    let coarse = near_singular_upsample(frame, density, x, factor / 2, kernel)?;
    let estimate = max_diff(&value, &coarse);
    if class.distance < floor {
        return Err(Error::Precision { distance: class.distance, floor, estimate });
    }
    Ok(BoundaryIntegral { value, method: Method::Upsampled, factor, estimate, class })
}
