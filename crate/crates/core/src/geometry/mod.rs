//! Boundary curves, frames, densities and tangential derivatives.

mod curve;
mod density;
mod frame;
pub mod spectral;

pub use curve::{BoundaryCurve, CurveJet, CurveSpec, Smoothness};
pub use density::{frame_param, wrapped, BoundaryDensity, Jet, Profile, Regularity};
pub use frame::{make_curve, BoundaryFrame, FramePoint, Orientation, MIN_RELATIVE_SPEED};

use std::f64::consts::TAU;

use serde::Serialize;

use crate::{Error, Point2, Result, C64};

/// `M_lr μ = ν_l ∂_r μ − ν_r ∂_l μ` for axes `l, r ∈ {0, 1}`.
///
/// In the plane `M_01` is the arc-length derivative along the frame, so the
/// result depends only on boundary values. Any sufficiently smooth density
/// is accepted once; the output carries no derivative.
pub fn tangential_derivative(
    frame: &BoundaryFrame,
    density: &BoundaryDensity,
    l: usize,
    r: usize,
) -> Result<BoundaryDensity> {
    if l > 1 || r > 1 {
        return Err(Error::Argument(format!("axes ({l}, {r}) out of range for a planar curve")));
    }
    if density.len() != frame.len() {
        return Err(Error::Argument("density does not match the frame".into()));
    }
    match (l, r) {
        (0, 1) => density.arc_derivative(frame, 1.0),
        (1, 0) => density.arc_derivative(frame, -1.0),
        _ => {
            if !density.is_differentiable() {
                return Err(Error::Capability("density has no derivative".into()));
            }
            Ok(BoundaryDensity::zero(frame))
        }
    }
}

/// Where a point sits relative to one closed boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointClass {
    pub inside: bool,
    pub distance: f64,
    /// Frame parameter of the nearest boundary point.
    pub nearest: f64,
    /// Closer than four node spacings: plain trapezoid sums lose accuracy.
    pub near_boundary: bool,
}

/// Winding number of the node polygon plus distance to the exact curve.
pub fn classify_point(frame: &BoundaryFrame, x: Point2) -> PointClass {
    let pts = frame.points();
    let n = pts.len();
    let mut winding = 0.0;
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..n {
        let a = crate::sub2(pts[i], x);
        let b = crate::sub2(pts[(i + 1) % n], x);
        winding += (a[0] * b[1] - a[1] * b[0]).atan2(crate::dot2(a, b));
        let d = crate::norm2(a);
        if d < best.0 {
            best = (d, i);
        }
    }
    let h = frame.step();
    let dist = |s: f64| crate::norm2(crate::sub2(frame.at(s).point(), x));
    let (s, d) = golden_min(&dist, frame.params()[best.1] - h, frame.params()[best.1] + h);
    let inside = (winding / TAU).round() as i64 * frame.orientation_sign() as i64 != 0;
    PointClass {
        inside,
        distance: d.min(best.0),
        nearest: s.rem_euclid(TAU),
        near_boundary: d < 4.0 * frame.max_spacing(),
    }
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    let s = 0.5 * (a + b);
    (s, f(s))
}

/// Nodal values `u(γ(s_i))` of a function given on the plane.
pub fn restrict<F: Fn(Point2) -> C64>(frame: &BoundaryFrame, u: F) -> Vec<C64> {
    frame.points().iter().map(|&p| u(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn star() -> BoundaryFrame {
        make_curve(CurveSpec::Star { r0: 1.0, eps: 0.2, k: 5 }, 256).unwrap().1
    }

    #[test]
    fn circle_tangential_derivative_of_cos() {
        let f = make_curve(CurveSpec::circle(1.0), 64).unwrap().1;
        let mu = BoundaryDensity::cos_mode(&f, 1);
        let m = tangential_derivative(&f, &mu, 0, 1).unwrap();
        let m_rev = tangential_derivative(&f, &mu, 1, 0).unwrap();
        let z = tangential_derivative(&f, &mu, 1, 1).unwrap();
        for (i, &s) in f.params().iter().enumerate() {
            assert!((m.values()[i].re + s.sin()).abs() < 1e-14);
            assert!((m_rev.values()[i].re - s.sin()).abs() < 1e-14);
            assert_eq!(z.values()[i].norm(), 0.0);
        }
        assert!(tangential_derivative(&f, &mu, 0, 2).is_err());
    }

    #[test]
    fn constant_has_zero_tangential_derivative() {
        let f = star();
        let c = BoundaryDensity::constant(&f, C64::new(2.5, 0.0));
        let m = tangential_derivative(&f, &c, 0, 1).unwrap();
        assert!(m.values().iter().all(|v| v.norm() < 1e-15));
    }

    /// For `u = x₁x₂` the spectral route (nodal values only) and the
    /// definition `ν₁∂₂u − ν₂∂₁u` with the planar gradient must agree.
    #[test]
    fn matches_planar_gradient_definition() {
        let f = star();
        let vals = restrict(&f, |p| C64::new(p[0] * p[1], 0.0));
        let mu = BoundaryDensity::from_values(&f, vals).unwrap();
        let m = tangential_derivative(&f, &mu, 0, 1).unwrap();
        for i in 0..f.len() {
            let p = f.points()[i];
            let nu = f.normals()[i];
            let exact = nu[0] * p[0] - nu[1] * p[1];
            assert!((m.values()[i].re - exact).abs() < 1e-10, "{i}");
        }
    }

    /// Two planar functions with equal boundary traces give equal
    /// tangential derivatives.
    #[test]
    fn independent_of_extension() {
        let f = make_curve(CurveSpec::circle(1.0), 128).unwrap().1;
        let u = |p: Point2| p[0] * p[1];
        // u + (|x|² − 1)·bump vanishes to first order nowhere but agrees on Γ
        let v = |p: Point2| {
            let r2 = p[0] * p[0] + p[1] * p[1];
            p[0] * p[1] + (r2 - 1.0) * (1.0 + p[0]).exp()
        };
        let grad = |g: &dyn Fn(Point2) -> f64, p: Point2| {
            let h = 1e-5;
            [
                (g([p[0] + h, p[1]]) - g([p[0] - h, p[1]])) / (2.0 * h),
                (g([p[0], p[1] + h]) - g([p[0], p[1] - h])) / (2.0 * h),
            ]
        };
        for i in (0..128).step_by(7) {
            let p = f.points()[i];
            let nu = f.normals()[i];
            let (gu, gv) = (grad(&u, p), grad(&v, p));
            let mu = nu[0] * gu[1] - nu[1] * gu[0];
            let mv = nu[0] * gv[1] - nu[1] * gv[0];
            assert!((mu - mv).abs() < 1e-8);
        }
    }

    #[test]
    fn antisymmetry_and_integration_by_parts() {
        let f = star();
        let phi = BoundaryDensity::sin_mode(&f, 3);
        let psi = BoundaryDensity::cos_mode(&f, 2);
        let m01 = tangential_derivative(&f, &phi, 0, 1).unwrap();
        let m10 = tangential_derivative(&f, &phi, 1, 0).unwrap();
        for i in 0..f.len() {
            assert!((m01.values()[i] + m10.values()[i]).norm() < 1e-14);
        }
        // ∫ M[φ] ψ dσ = −∫ φ M[ψ] dσ on a closed curve
        let mpsi = tangential_derivative(&f, &psi, 0, 1).unwrap();
        let w = f.weights();
        let lhs: C64 = (0..f.len()).map(|i| m01.values()[i] * psi.values()[i] * w[i]).sum();
        let rhs: C64 = (0..f.len()).map(|i| phi.values()[i] * mpsi.values()[i] * w[i]).sum();
        assert!((lhs + rhs).norm() < 1e-12);
    }

    #[test]
    fn leibniz_rule() {
        let f = star();
        let phi = BoundaryDensity::sin_mode(&f, 2);
        let prod = phi
            .scaled_by(&f, |fp: &FramePoint| {
                let s = fp.t;
                Jet::real(s.cos(), -s.sin())
            })
            .unwrap();
        let psi = BoundaryDensity::cos_mode(&f, 1);
        let mp = tangential_derivative(&f, &prod, 0, 1).unwrap();
        let mphi = tangential_derivative(&f, &phi, 0, 1).unwrap();
        let mpsi = tangential_derivative(&f, &psi, 0, 1).unwrap();
        for i in 0..f.len() {
            let rhs = mphi.values()[i] * psi.values()[i] + phi.values()[i] * mpsi.values()[i];
            assert!((mp.values()[i] - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn classification() {
        let f = star();
        let c = classify_point(&f, [0.0, 0.0]);
        assert!(c.inside && !c.near_boundary);
        assert!((c.distance - 0.8).abs() < 1e-9);
        let out = classify_point(&f, [3.0, 0.0]);
        assert!(!out.inside);
        assert!((out.distance - 1.8).abs() < 1e-12);
        let p = f.at(0.3).point();
        let near = classify_point(&f, [0.999 * p[0], 0.999 * p[1]]);
        assert!(near.inside && near.near_boundary);
        assert!((near.nearest - 0.3).abs() < 1e-2);
    }

    #[test]
    fn profile_and_nodal_routes_agree() {
        let f = make_curve(CurveSpec::Ellipse { a: 2.0, b: 1.0 }, 64).unwrap().1;
        let prof = BoundaryDensity::from_profile(
            &f,
            Arc::new(|s: f64| Jet::real((2.0 * s).sin(), 2.0 * (2.0 * s).cos())),
            vec![],
            Regularity::Analytic,
        )
        .unwrap();
        let nodal = BoundaryDensity::from_values(&f, prof.values().to_vec()).unwrap();
        let a = tangential_derivative(&f, &prof, 0, 1).unwrap();
        let b = tangential_derivative(&f, &nodal, 0, 1).unwrap();
        for i in 0..64 {
            assert!((a.values()[i] - b.values()[i]).norm() < 1e-12);
        }
    }
}
