use serde::{Deserialize, Serialize};

use super::{LayerField, LayerPotentials};
use crate::geometry::BoundaryDensity;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Limit from the bounded domain, `x = γ − hν`.
    Interior,
    /// Limit from the exterior, `x = γ + hν`.
    Exterior,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Interior => -1.0,
            Side::Exterior => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TraceOptions {
    /// `h₀ = h0_factor · (2π/N) · max speed`.
    pub h0_factor: f64,
    /// Number of halvings after `h₀`.
    pub levels: usize,
    /// Largest accepted extrapolation estimate, relative to `max(1, |value|)`.
    pub tolerance: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { h0_factor: 10.0, levels: 8, tolerance: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceResult {
    pub value: Vec<C64>,
    /// Difference of the two best extrapolants.
    pub estimate: f64,
    /// Observed order of the raw sequence `f(h_j)`.
    pub order: f64,
    pub steps: Vec<f64>,
}

/// Richardson extrapolation to `h → 0` of the field sampled along the
/// normal through node `node`. Near-boundary samples are integrated on
/// Gauss–Legendre panels whenever the density has a profile.
pub fn boundary_trace(
    layers: &LayerPotentials,
    field: LayerField,
    mu: &BoundaryDensity,
    node: usize,
    side: Side,
    opts: &TraceOptions,
) -> Result<TraceResult> {
    let frame = layers.frame();
    if node >= frame.len() {
        return Err(Error::Argument(format!("node {node} out of range")));
    }
    if opts.levels < 2 {
        return Err(Error::Argument("trace extrapolation needs at least two levels".into()));
    }
    let p = frame.points()[node];
    let nu = frame.normals()[node];
    let h0 = opts.h0_factor * frame.step() * frame.max_speed();
    let mut q = *layers.quadrature();
    q.prefer_panels = true;
    let local = layers.clone().with_quadrature(q);
    let m = field.components();
    let steps: Vec<f64> = (0..=opts.levels).map(|j| h0 * 0.5f64.powi(j as i32)).collect();
    let mut samples = Vec::with_capacity(steps.len());
    for &h in &steps {
        let x = [p[0] + side.sign() * h * nu[0], p[1] + side.sign() * h * nu[1]];
        samples.push(local.evaluate(field, mu, x)?);
    }
    let mut value = vec![C64::default(); m];
    let mut estimate: f64 = 0.0;
    let mut order = f64::INFINITY;
    for c in 0..m {
        let seq: Vec<C64> = samples.iter().map(|s| s[c]).collect();
        let (v, e) = neville(&seq);
        value[c] = v;
        estimate = estimate.max(e);
        order = order.min(observed_order(&seq));
    }
    let scale = value.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if !estimate.is_finite() || estimate > opts.tolerance * scale {
        return Err(Error::Trace { estimate, order });
    }
    Ok(TraceResult { value, estimate, order, steps })
}

/// Polynomial extrapolation in `h` for steps halving each level. Returns
/// the diagonal entry with the smallest change and that change.
fn neville(seq: &[C64]) -> (C64, f64) {
    let n = seq.len();
    let mut t = seq.to_vec();
    let mut best = (seq[n - 1], (seq[n - 1] - seq[n - 2]).norm());
    for k in 1..n {
        let f = (1u64 << k) as f64 - 1.0;
        let prev = t.clone();
        for j in k..n {
            t[j] = prev[j] + (prev[j] - prev[j - 1]) / f;
        }
        let e = (t[n - 1] - prev[n - 1]).norm();
        if e < best.1 {
            best = (t[n - 1], e);
        }
    }
    best
}

fn observed_order(seq: &[C64]) -> f64 {
    let n = seq.len();
    let d1 = (seq[n - 3] - seq[n - 2]).norm();
    let d2 = (seq[n - 2] - seq[n - 1]).norm();
    if d2 == 0.0 {
        return f64::INFINITY;
    }
    (d1 / d2).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpEstimate {
    /// `(w⁺ − w⁻)/μ` at each sampled node.
    pub ratios: Vec<C64>,
    pub mean: C64,
    /// Largest deviation of a ratio from the mean.
    pub spread: f64,
}

/// Interior minus exterior trace of `w[μ]` divided by `μ` at nodes where
/// `|μ|` exceeds `floor`.
pub fn double_layer_jump(
    layers: &LayerPotentials,
    mu: &BoundaryDensity,
    nodes: &[usize],
    floor: f64,
    opts: &TraceOptions,
) -> Result<JumpEstimate> {
    let mut ratios = Vec::new();
    for &i in nodes {
        let m = mu.values()[i];
        if m.norm() <= floor {
            continue;
        }
        let inner = boundary_trace(layers, LayerField::DOUBLE, mu, i, Side::Interior, opts)?;
        let outer = boundary_trace(layers, LayerField::DOUBLE, mu, i, Side::Exterior, opts)?;
        ratios.push((inner.value[0] - outer.value[0]) / m);
    }
    if ratios.is_empty() {
        return Err(Error::Argument("no sampled node has a density above the floor".into()));
    }
    let mean = ratios.iter().sum::<C64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max);
    Ok(JumpEstimate { ratios, mean, spread })
}
