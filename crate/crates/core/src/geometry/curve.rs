use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{Error, Point2, Result};

/// Smoothness class of a parametrized boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Analytic,
    /// `C^{k,1}`: `k` parameter derivatives, the last one Lipschitz.
    Ck1(u32),
}

/// Curve presets. All are radial or elliptic, counterclockwise, with
/// parameter `t ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    /// `(a cos t, b sin t)`.
    Ellipse { a: f64, b: f64 },
    /// Radius `r0 + eps cos(k t)`.
    Star { r0: f64, eps: f64, k: u32 },
    /// Radius `1 + amplitude · G(t)` where `G'' = sign(sin t)` and `G` is
    /// periodic. Curvature jumps at `t = 0, π`, so the curve is `C^{1,1}`
    /// and no smoother.
    C11Blend { amplitude: f64 },
}

impl CurveSpec {
    pub fn circle(r: f64) -> Self {
        CurveSpec::Ellipse { a: r, b: r }
    }
}

/// Position and the first two parameter derivatives at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub point: Point2,
    pub d1: Point2,
    pub d2: Point2,
}

impl CurveJet {
    pub fn speed(&self) -> f64 {
        crate::norm2(self.d1)
    }

    /// `ν = (γ₂′, −γ₁′)/|γ′|`.
    pub fn normal(&self) -> Point2 {
        let s = self.speed();
        [self.d1[1] / s, -self.d1[0] / s]
    }

    /// Parameter derivative of the unit normal.
    pub fn normal_derivative(&self) -> Point2 {
        let s = self.speed();
        let ds = crate::dot2(self.d1, self.d2) / s;
        let nu = self.normal();
        [
            self.d2[1] / s - nu[0] * ds / s,
            -self.d2[0] / s - nu[1] * ds / s,
        ]
    }

    /// Signed curvature; positive on convex arcs of a counterclockwise curve.
    pub fn curvature(&self) -> f64 {
        let s = self.speed();
        (self.d1[0] * self.d2[1] - self.d1[1] * self.d2[0]) / (s * s * s)
    }
}

/// A closed, counterclockwise, regular planar curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    spec: CurveSpec,
}

/// `G`, `G′`, `G″` for the blend radius, reduced to one period.
fn blend_profile(t: f64) -> (f64, f64, f64) {
    let t = t.rem_euclid(TAU);
    if t <= PI {
        (0.5 * t * t - 0.5 * PI * t, t - 0.5 * PI, 1.0)
    } else {
        (
            1.5 * PI * (t - PI) - 0.5 * (t * t - PI * PI),
            1.5 * PI - t,
            -1.0,
        )
    }
}

impl BoundaryCurve {
    pub fn new(spec: CurveSpec) -> Result<Self> {
        let bad = |m: &str| Err(Error::Argument(m.to_string()));
        match spec {
            CurveSpec::Ellipse { a, b } if !(a > 0.0 && b > 0.0) => {
                return bad("ellipse semi-axes must be positive")
            }
            CurveSpec::Star { r0, eps, k } if !(r0 > 0.0 && eps >= 0.0 && eps < r0 && k >= 1) => {
                return bad("star needs r0 > 0, 0 <= eps < r0 and k >= 1")
            }
            CurveSpec::C11Blend { amplitude }
                if !(amplitude.abs() * PI * PI / 8.0 < 1.0) =>
            {
                return bad("blend amplitude must keep the radius positive (|c| < 8/π²)")
            }
            _ => {}
        }
        Ok(BoundaryCurve { spec })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn smoothness(&self) -> Smoothness {
        match self.spec {
            CurveSpec::C11Blend { .. } => Smoothness::Ck1(1),
            _ => Smoothness::Analytic,
        }
    }

    /// Parameters in `[0, 2π)` where the curve fails to be smoother than
    /// its class.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.spec {
            CurveSpec::C11Blend { .. } => vec![0.0, PI],
            _ => Vec::new(),
        }
    }

    pub fn jet(&self, t: f64) -> CurveJet {
        let (s, c) = t.sin_cos();
        match self.spec {
            CurveSpec::Ellipse { a, b } => CurveJet {
                point: [a * c, b * s],
                d1: [-a * s, b * c],
                d2: [-a * c, -b * s],
            },
            CurveSpec::Star { r0, eps, k } => {
                let k = k as f64;
                let (sk, ck) = (k * t).sin_cos();
                radial(r0 + eps * ck, -eps * k * sk, -eps * k * k * ck, s, c)
            }
            CurveSpec::C11Blend { amplitude } => {
                let (g, g1, g2) = blend_profile(t);
                radial(1.0 + amplitude * g, amplitude * g1, amplitude * g2, s, c)
            }
        }
    }

    pub fn point(&self, t: f64) -> Point2 {
        self.jet(t).point
    }
}

fn radial(r: f64, r1: f64, r2: f64, s: f64, c: f64) -> CurveJet {
    CurveJet {
        point: [r * c, r * s],
        d1: [r1 * c - r * s, r1 * s + r * c],
        d2: [r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s],
    }
}
