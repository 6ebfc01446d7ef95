//! Single and double layer potentials, their gradients computed directly
//! and through the derivative-reduction identities, one-sided boundary
//! traces and the exterior-to-annulus reduction.
//!
//! For a frame `Γ` with unit normal `ν`:
//!
//! - `v[μ](x) = ∫ S(x − y) μ(y) dσ_y`
//! - `w[μ](x) = −∫ μ(y) Σ a_jl ν_l(y) ∂_jS(x − y) dσ_y − ∫ μ(y) Σ ν_l(y) a_l S(x − y) dσ_y`
//!
//! With these signs `w[1] = 1` inside and `0` outside for the Laplacian.

mod exterior;
mod trace;

pub use exterior::{exterior_reduction_check, ExteriorReduction, PaddedDensity};
pub use trace::{boundary_trace, double_layer_jump, JumpEstimate, Side, TraceOptions, TraceResult};

use serde::{Deserialize, Serialize};

use crate::exec::{try_map_indexed, Exec};
use crate::geometry::{tangential_derivative, BoundaryDensity, BoundaryFrame, FramePoint, Jet, Regularity};
use crate::kernels::FundamentalSolution;
use crate::quadrature::{boundary_integral, integrate_log_singular, BoundaryIntegral, Method, QuadratureConfig};
use crate::{Error, Point2, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Single,
    Double,
    GradientSingle,
    GradientDouble,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMethod {
    /// Quadrature of the differentiated kernel.
    Direct,
    /// The derivative-reduction identity.
    Reduced,
}

/// A layer potential field: what to evaluate and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerField {
    pub kind: FieldKind,
    pub method: EvalMethod,
}

impl LayerField {
    pub const SINGLE: LayerField = LayerField { kind: FieldKind::Single, method: EvalMethod::Direct };
    pub const DOUBLE: LayerField = LayerField { kind: FieldKind::Double, method: EvalMethod::Direct };

    pub fn gradient_single(method: EvalMethod) -> Self {
        LayerField { kind: FieldKind::GradientSingle, method }
    }

    pub fn gradient_double(method: EvalMethod) -> Self {
        LayerField { kind: FieldKind::GradientDouble, method }
    }

    pub fn components(&self) -> usize {
        match self.kind {
            FieldKind::Single | FieldKind::Double => 1,
            _ => 2,
        }
    }
}

/// Densities entering the single-layer gradient identity, indexed by the
/// derivative direction `j`:
///
/// - `psi[j] = Σ_{r,s} M_rj[a_rs ν_s μ / (νᵗa2ν)]`
/// - `phi[j] = ν_j μ / (νᵗa2ν)`
/// - `chi[j] = (a1·ν) ν_j μ / (νᵗa2ν)`
#[derive(Debug, Clone)]
pub struct ReductionDensities {
    pub psi: [BoundaryDensity; 2],
    pub phi: [BoundaryDensity; 2],
    pub chi: [BoundaryDensity; 2],
}

/// Layer potentials of one fundamental solution on one frame.
#[derive(Debug, Clone)]
pub struct LayerPotentials {
    fs: FundamentalSolution,
    frame: BoundaryFrame,
    quad: QuadratureConfig,
    a2: [[f64; 2]; 2],
    a1: [f64; 2],
    a0: f64,
}

fn require_differentiable(mu: &BoundaryDensity) -> Result<()> {
    match mu.regularity() {
        Regularity::Analytic | Regularity::Ck1(1..) => Ok(()),
        r => Err(Error::Capability(format!(
            "the reduction identities need a C^(1,1) or smoother density, got {}",
            r.label()
        ))),
    }
}

impl LayerPotentials {
    pub fn new(fs: FundamentalSolution, frame: BoundaryFrame) -> Result<Self> {
        if fs.dim() != 2 {
            return Err(Error::Unsupported("layer potentials are implemented on planar curves".into()));
        }
        let c = fs.coefficients();
        let a2 = c.a2_planar();
        let a1 = [c.a1()[0].re, c.a1()[1].re];
        let a0 = c.a0().re;
        // anisotropy brings the kernel's complex singularity closer by up to
        // sqrt(λ_min/λ_max), so the near zone widens accordingly
        let m = 0.5 * (a2[0][0] + a2[1][1]);
        let d = (0.5 * (a2[0][0] - a2[1][1])).hypot(a2[0][1]);
        let mut quad = QuadratureConfig::default();
        quad.spacing_ratio *= ((m + d) / (m - d)).sqrt();
        Ok(LayerPotentials { fs, frame, quad, a2, a1, a0 })
    }

    pub fn with_quadrature(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn frame(&self) -> &BoundaryFrame {
        &self.frame
    }

    pub fn fundamental_solution(&self) -> &FundamentalSolution {
        &self.fs
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    /// A copy whose quadrature rule is the one chosen for `x`, fixed for all
    /// targets. Finite differences around `x` then differentiate a single
    /// discrete operator. Panel routing is left as is.
    pub fn pinned_at(&self, x: Point2) -> Result<Self> {
        let probe = self.single_layer_detailed(&BoundaryDensity::zero(&self.frame), x)?;
        let factor = match probe.method {
            Method::Trapezoid => 1,
            Method::Upsampled => probe.factor,
            Method::Panels => return Ok(self.clone()),
        };
        let mut quad = self.quad;
        quad.fixed_factor = Some(factor);
        Ok(self.clone().with_quadrature(quad))
    }

    fn check_density(&self, mu: &BoundaryDensity) -> Result<()> {
        if mu.len() != self.frame.len() {
            return Err(Error::Argument("density does not match the frame".into()));
        }
        Ok(())
    }

    fn integrate<const M: usize, F>(&self, mu: &BoundaryDensity, x: Point2, kernel: F) -> Result<BoundaryIntegral<M>>
    where
        F: Fn(Point2, Point2, Point2) -> [f64; M],
    {
        self.check_density(mu)?;
        boundary_integral(&self.frame, mu, x, &kernel, &self.quad)
    }

    pub fn single_layer_detailed(&self, mu: &BoundaryDensity, x: Point2) -> Result<BoundaryIntegral<1>> {
        let fs = &self.fs;
        self.integrate(mu, x, |x, y, _| [fs.jet_unchecked(&crate::sub2(x, y), 0).value])
    }

    /// `v[μ](x)` for `x` off the boundary.
    pub fn single_layer(&self, mu: &BoundaryDensity, x: Point2) -> Result<C64> {
        Ok(self.single_layer_detailed(mu, x)?.value[0])
    }

    pub fn double_layer_detailed(&self, mu: &BoundaryDensity, x: Point2) -> Result<BoundaryIntegral<1>> {
        let (fs, a, b) = (&self.fs, self.a2, self.a1);
        let drift = b != [0.0, 0.0];
        self.integrate(mu, x, move |x, y, nu| {
            let k = fs.jet_unchecked(&crate::sub2(x, y), 1);
            let an = [a[0][0] * nu[0] + a[0][1] * nu[1], a[1][0] * nu[0] + a[1][1] * nu[1]];
            let mut v = -(an[0] * k.gradient[0] + an[1] * k.gradient[1]);
            if drift {
                v -= (nu[0] * b[0] + nu[1] * b[1]) * k.value;
            }
            [v]
        })
    }

    /// `w[μ](x)` for `x` off the boundary.
    pub fn double_layer(&self, mu: &BoundaryDensity, x: Point2) -> Result<C64> {
        Ok(self.double_layer_detailed(mu, x)?.value[0])
    }

    pub fn grad_single_layer_detailed(&self, mu: &BoundaryDensity, x: Point2) -> Result<BoundaryIntegral<2>> {
        let fs = &self.fs;
        self.integrate(mu, x, |x, y, _| {
            let g = fs.jet_unchecked(&crate::sub2(x, y), 1).gradient;
            [g[0], g[1]]
        })
    }

    /// `∫ ∇S(x − y) μ(y) dσ_y`.
    pub fn grad_single_layer_direct(&self, mu: &BoundaryDensity, x: Point2) -> Result<[C64; 2]> {
        Ok(self.grad_single_layer_detailed(mu, x)?.value)
    }

    pub fn grad_double_layer_detailed(&self, mu: &BoundaryDensity, x: Point2) -> Result<BoundaryIntegral<2>> {
        let (fs, a, b) = (&self.fs, self.a2, self.a1);
        self.integrate(mu, x, move |x, y, nu| {
            let k = fs.jet_unchecked(&crate::sub2(x, y), 2);
            let an = [a[0][0] * nu[0] + a[0][1] * nu[1], a[1][0] * nu[0] + a[1][1] * nu[1]];
            let nb = nu[0] * b[0] + nu[1] * b[1];
            let h = k.hessian;
            let mut out = [0.0; 2];
            for (kk, o) in out.iter_mut().enumerate() {
                *o = -(an[0] * h[0][kk] + an[1] * h[1][kk]) - nb * k.gradient[kk];
            }
            out
        })
    }

    /// Gradient of `w[μ]` by quadrature of the twice differentiated kernel.
    pub fn grad_double_layer_direct(&self, mu: &BoundaryDensity, x: Point2) -> Result<[C64; 2]> {
        Ok(self.grad_double_layer_detailed(mu, x)?.value)
    }

    pub fn reduction_densities(&self, mu: &BoundaryDensity) -> Result<ReductionDensities> {
        self.check_density(mu)?;
        require_differentiable(mu)?;
        let (a, b) = (self.a2, self.a1);
        // g_r = (a2 ν)_r / (νᵗa2ν) with its frame-parameter derivative
        let g = move |r: usize| {
            move |fp: &FramePoint| {
                let nu = fp.normal();
                let dnu = fp.jet.normal_derivative();
                let an = a[r][0] * nu[0] + a[r][1] * nu[1];
                let adn = a[r][0] * dnu[0] + a[r][1] * dnu[1];
                let q = quad_form(a, nu, nu);
                let dq = 2.0 * quad_form(a, nu, dnu);
                Jet::real(an / q, adn / q - an * dq / (q * q))
            }
        };
        let weighted: Vec<BoundaryDensity> =
            (0..2).map(|r| mu.scaled_by(&self.frame, g(r))).collect::<Result<_>>()?;
        let mut psi = Vec::with_capacity(2);
        for j in 0..2 {
            // Σ_r M_rj[weighted_r]; only r ≠ j survives in the plane
            let r = 1 - j;
            psi.push(tangential_derivative(&self.frame, &weighted[r], r, j)?);
        }
        let phi_w = move |j: usize| {
            move |fp: &FramePoint| {
                let nu = fp.normal();
                let dnu = fp.jet.normal_derivative();
                let q = quad_form(a, nu, nu);
                let dq = 2.0 * quad_form(a, nu, dnu);
                Jet::real(nu[j] / q, dnu[j] / q - nu[j] * dq / (q * q))
            }
        };
        let chi_w = move |j: usize| {
            move |fp: &FramePoint| {
                let nu = fp.normal();
                let dnu = fp.jet.normal_derivative();
                let q = quad_form(a, nu, nu);
                let dq = 2.0 * quad_form(a, nu, dnu);
                let p = b[0] * nu[0] + b[1] * nu[1];
                let dp = b[0] * dnu[0] + b[1] * dnu[1];
                let f = p * nu[j];
                let df = dp * nu[j] + p * dnu[j];
                Jet::real(f / q, df / q - f * dq / (q * q))
            }
        };
        let phi = [mu.scaled_by(&self.frame, phi_w(0))?, mu.scaled_by(&self.frame, phi_w(1))?];
        let chi = [mu.scaled_by(&self.frame, chi_w(0))?, mu.scaled_by(&self.frame, chi_w(1))?];
        let [p0, p1]: [BoundaryDensity; 2] = psi.try_into().expect("two components");
        Ok(ReductionDensities { psi: [p0, p1], phi, chi })
    }

    /// `∂_j v[μ] = v[psi_j] − w[phi_j] − v[chi_j]`.
    pub fn grad_single_layer_reduced(&self, mu: &BoundaryDensity, x: Point2) -> Result<[C64; 2]> {
        Ok(self.grad_single_layer_reduced_detailed(mu, x)?.0)
    }

    /// The reduced gradient with the largest quadrature estimate among the
    /// potentials it sums.
    pub fn grad_single_layer_reduced_detailed(&self, mu: &BoundaryDensity, x: Point2) -> Result<([C64; 2], f64)> {
        let d = self.reduction_densities(mu)?;
        let mut out = [C64::default(); 2];
        let mut est: f64 = 0.0;
        for (j, o) in out.iter_mut().enumerate() {
            let v = self.single_layer_detailed(&d.psi[j], x)?;
            let w = self.double_layer_detailed(&d.phi[j], x)?;
            *o = v.value[0] - w.value[0];
            est = est.max(v.estimate).max(w.estimate);
            if self.a1 != [0.0, 0.0] {
                let c = self.single_layer_detailed(&d.chi[j], x)?;
                *o -= c.value[0];
                est = est.max(c.estimate);
            }
        }
        Ok((out, est))
    }

    /// `∂_j w[μ] = Σ_l a_ls ∂_l v[M_js μ] + ∫ (a1·∇S + a0 S) ν_j μ − ∫ ∂_jS (νᵗa1) μ`
    /// with `s = 1 − j`; the first group uses direct single-layer gradients.
    pub fn grad_double_layer_reduced(&self, mu: &BoundaryDensity, x: Point2) -> Result<[C64; 2]> {
        Ok(self.grad_double_layer_reduced_detailed(mu, x)?.0)
    }

    pub fn grad_double_layer_reduced_detailed(&self, mu: &BoundaryDensity, x: Point2) -> Result<([C64; 2], f64)> {
        self.check_density(mu)?;
        require_differentiable(mu)?;
        let (fs, a, b, a0) = (&self.fs, self.a2, self.a1, self.a0);
        let mut out = [C64::default(); 2];
        let mut est: f64 = 0.0;
        for (j, o) in out.iter_mut().enumerate() {
            let s = 1 - j;
            let m = tangential_derivative(&self.frame, mu, j, s)?;
            let g = self.grad_single_layer_detailed(&m, x)?;
            *o = a[0][s] * g.value[0] + a[1][s] * g.value[1];
            est = est.max(g.estimate);
        }
        if b != [0.0, 0.0] || a0 != 0.0 {
            let r = self.integrate(mu, x, move |x, y, nu| {
                let k = fs.jet_unchecked(&crate::sub2(x, y), 1);
                let lower = b[0] * k.gradient[0] + b[1] * k.gradient[1] + a0 * k.value;
                let nb = nu[0] * b[0] + nu[1] * b[1];
                [
                    lower * nu[0] - k.gradient[0] * nb,
                    lower * nu[1] - k.gradient[1] * nb,
                ]
            })?;
            out[0] += r.value[0];
            out[1] += r.value[1];
            est = est.max(r.estimate);
        }
        Ok((out, est))
    }

    /// `v[μ]` at boundary node `i` by logarithmic product integration.
    pub fn boundary_single_layer(&self, mu: &BoundaryDensity, i: usize) -> Result<C64> {
        self.check_density(mu)?;
        let n = self.frame.len();
        if i >= n {
            return Err(Error::Argument(format!("node {i} out of range")));
        }
        let xi = self.frame.points()[i];
        let si = self.frame.params()[i];
        let (a0, r0) = self.fs.log_split(&[0.0, 0.0]);
        let d1 = self.frame.at(si).jet.d1;
        let mut a = vec![C64::default(); n];
        let mut b = vec![C64::default(); n];
        for j in 0..n {
            let mu_j = mu.values()[j];
            if j == i {
                let diag = a0 * self.fs.whitened_norm2(&d1).ln() + r0;
                a[j] = a0 * mu_j;
                b[j] = diag * mu_j;
                continue;
            }
            let d = crate::sub2(xi, self.frame.points()[j]);
            let (aj, rj) = self.fs.log_split(&d);
            let sj = self.frame.params()[j];
            let l = (4.0 * (0.5 * (si - sj)).sin().powi(2)).ln();
            let rho2 = self.fs.whitened_norm2(&d);
            a[j] = aj * mu_j;
            b[j] = (aj * (rho2.ln() - l) + rj) * mu_j;
        }
        integrate_log_singular(&self.frame, &a, &b, i)
    }

    /// Evaluates any supported field; scalar fields return one component.
    pub fn evaluate(&self, field: LayerField, mu: &BoundaryDensity, x: Point2) -> Result<Vec<C64>> {
        Ok(match (field.kind, field.method) {
            (FieldKind::Single, _) => vec![self.single_layer(mu, x)?],
            (FieldKind::Double, _) => vec![self.double_layer(mu, x)?],
            (FieldKind::GradientSingle, EvalMethod::Direct) => self.grad_single_layer_direct(mu, x)?.to_vec(),
            (FieldKind::GradientSingle, EvalMethod::Reduced) => self.grad_single_layer_reduced(mu, x)?.to_vec(),
            (FieldKind::GradientDouble, EvalMethod::Direct) => self.grad_double_layer_direct(mu, x)?.to_vec(),
            (FieldKind::GradientDouble, EvalMethod::Reduced) => self.grad_double_layer_reduced(mu, x)?.to_vec(),
        })
    }

    /// Evaluates a field on many points; results come back in input order.
    pub fn evaluate_many(
        &self,
        field: LayerField,
        mu: &BoundaryDensity,
        points: &[Point2],
        exec: Exec,
    ) -> Result<Vec<Vec<C64>>> {
        try_map_indexed(exec, points.len(), |i| self.evaluate(field, mu, points[i]))
    }
}

fn quad_form(a: [[f64; 2]; 2], u: Point2, v: Point2) -> f64 {
    u[0] * (a[0][0] * v[0] + a[0][1] * v[1]) + u[1] * (a[1][0] * v[0] + a[1][1] * v[1])
}
