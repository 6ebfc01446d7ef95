//! Closed-form fundamental solutions, the principal-part splitting of their
//! gradients, homogeneous kernel checks and sampled kernel-class norms.

pub mod bessel;
mod classes;
mod residual;

pub use classes::{
    homogeneity_parity_check, kernel_class_norm, HomogeneityReport, HomogeneousKernel,
    KernelClassNormEstimate, Parity,
};
pub use residual::{fd_jet, pde_residual, PdeResidual};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::operators::{factorize, Factorization, OperatorCoefficients};
use crate::{Error, Result};
use bessel::{bessel_i0, bessel_k01, EULER_GAMMA};

/// Surface measure of the unit sphere: `2π` (n = 2), `4π` (n = 3).
pub fn sphere_measure(n: usize) -> f64 {
    match n {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("unsupported dimension {n}"),
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn check_point(x: &[f64]) -> Result<f64> {
    if !(x.len() == 2 || x.len() == 3) {
        return Err(Error::Argument(format!("points must have 2 or 3 coordinates, got {}", x.len())));
    }
    let r = norm(x);
    if r == 0.0 {
        return Err(Error::Singularity);
    }
    Ok(r)
}

/// `S_n`: `ln|x|/(2π)` in the plane, `−1/(4π|x|)` in space.
pub fn laplace_value(x: &[f64]) -> Result<f64> {
    let r = check_point(x)?;
    Ok(match x.len() {
        2 => r.ln() / (2.0 * PI),
        _ => -1.0 / (4.0 * PI * r),
    })
}

/// `∇S_n = x / (s_n |x|ⁿ)`.
pub fn laplace_gradient(x: &[f64]) -> Result<Vec<f64>> {
    let r = check_point(x)?;
    let n = x.len();
    let c = 1.0 / (sphere_measure(n) * r.powi(n as i32));
    Ok(x.iter().map(|v| c * v).collect())
}

/// Fundamental solution of `Δ − k²`: `−K₀(k|x|)/(2π)` or `−e^{−k|x|}/(4π|x|)`.
pub fn yukawa_value(k: f64, x: &[f64]) -> Result<f64> {
    let r = check_point(x)?;
    if !(k > 0.0) {
        return Err(Error::Argument("yukawa needs k > 0".into()));
    }
    Ok(match x.len() {
        2 => -bessel_k01(k * r).0 / (2.0 * PI),
        _ => -(-k * r).exp() / (4.0 * PI * r),
    })
}

pub fn yukawa_gradient(k: f64, x: &[f64]) -> Result<Vec<f64>> {
    let r = check_point(x)?;
    if !(k > 0.0) {
        return Err(Error::Argument("yukawa needs k > 0".into()));
    }
    let radial = match x.len() {
        2 => k * bessel_k01(k * r).1 / (2.0 * PI),
        _ => (1.0 + k * r) * (-k * r).exp() / (4.0 * PI * r * r),
    };
    Ok(x.iter().map(|v| radial * v / r).collect())
}

/// Closed-form families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `a2 = I`, no lower order terms.
    Laplace,
    /// General `a2`, no lower order terms.
    AnisotropicPrincipal,
    /// `a2 = I`, `a1 = 0`, `a0 = −k²`.
    Yukawa { k: f64 },
    /// Real `a1`, real `a0` with `|T⁻¹a1|²/4 − a0 ≥ 0`: the substitution
    /// `u = e^{−a1ᵗa2⁻¹x/2} v` reduces `P` to a whitened Yukawa operator.
    Drift,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Laplace => "laplace",
            Family::AnisotropicPrincipal => "anisotropic",
            Family::Yukawa { .. } => "yukawa",
            Family::Drift => "drift",
        }
    }
}

/// Picks the narrowest family that covers `c`.
pub fn classify_operator(c: &OperatorCoefficients) -> Result<Family> {
    let n = c.dim();
    let identity = (0..n).all(|l| (0..n).all(|j| c.a2_entry(l, j) == if l == j { 1.0 } else { 0.0 }));
    let a1_zero = c.a1().iter().all(|z| z.norm() == 0.0);
    let a0 = c.a0();
    if a1_zero && a0.norm() == 0.0 {
        return Ok(if identity { Family::Laplace } else { Family::AnisotropicPrincipal });
    }
    if c.a1().iter().any(|z| z.im != 0.0) || a0.im != 0.0 {
        return Err(Error::Unsupported(
            "no closed-form fundamental solution for complex lower order coefficients".into(),
        ));
    }
    if identity && a1_zero && a0.re < 0.0 {
        return Ok(Family::Yukawa { k: (-a0.re).sqrt() });
    }
    Ok(Family::Drift)
}

/// Derivatives of `S` up to second order at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelJet {
    pub value: f64,
    pub gradient: [f64; 3],
    pub hessian: [[f64; 3]; 3],
}

/// `S(x) = e^{−b·x} G_κ(|T⁻¹x|) / √det a2` with `G_κ` the radial Yukawa
/// (or, for `κ = 0`, Laplace) fundamental solution in `n` dimensions.
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    coefficients: OperatorCoefficients,
    family: Family,
    factorization: Factorization,
    n: usize,
    tinv: [[f64; 3]; 3],
    b: [f64; 3],
    kappa: f64,
    sqrt_det: f64,
}

impl FundamentalSolution {
    /// Fundamental solution for `c`, with the family inferred.
    pub fn new(c: &OperatorCoefficients) -> Result<Self> {
        let family = classify_operator(c)?;
        Self::with_family(c, family)
    }

    pub fn with_family(c: &OperatorCoefficients, family: Family) -> Result<Self> {
        let inferred = classify_operator(c)?;
        let compatible = match (family, inferred) {
            (Family::Yukawa { k }, Family::Yukawa { k: k2 }) => (k - k2).abs() <= 1e-14 * k,
            (Family::AnisotropicPrincipal, Family::Laplace) => true,
            (Family::Drift, _) => true,
            (a, b) => a == b,
        };
        if !compatible {
            return Err(Error::Argument(format!(
                "operator coefficients do not match the {} family",
                family.label()
            )));
        }
        crate::operators::ellipticity_margin(c, 1024)?;
        let factorization = factorize(c)?;
        let n = c.dim();
        let mut tinv = [[0.0; 3]; 3];
        for (l, row) in tinv.iter_mut().enumerate().take(n) {
            for (j, v) in row.iter_mut().enumerate().take(n) {
                *v = factorization.t_inv()[(l, j)];
            }
        }
        // b = a2⁻¹ a1 / 2, κ² = |T⁻¹a1|²/4 − a0
        let a1: Vec<f64> = c.a1().iter().map(|z| z.re).collect();
        let mut b = [0.0; 3];
        for (l, bl) in b.iter_mut().enumerate().take(n) {
            *bl = 0.5 * (0..n).map(|j| factorization.a2_inv()[(l, j)] * a1[j]).sum::<f64>();
        }
        let w = factorization.whiten(&a1);
        let kappa2 = 0.25 * w.iter().map(|v| v * v).sum::<f64>() - c.a0().re;
        if kappa2 < -1e-14 {
            return Err(Error::Unsupported(
                "oscillatory (Helmholtz-type) operators are not supported".into(),
            ));
        }
        Ok(FundamentalSolution {
            coefficients: c.clone(),
            family,
            sqrt_det: factorization.sqrt_det(),
            factorization,
            n,
            tinv,
            b,
            kappa: kappa2.max(0.0).sqrt(),
        })
    }

    pub fn laplace(n: usize) -> Self {
        Self::new(&OperatorCoefficients::laplace(n)).expect("laplace kernel")
    }

    pub fn yukawa(n: usize, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::Argument("yukawa needs k > 0".into()));
        }
        Self::new(&OperatorCoefficients::yukawa(n, k))
    }

    pub fn coefficients(&self) -> &OperatorCoefficients {
        &self.coefficients
    }
    pub fn family(&self) -> Family {
        self.family
    }
    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }
    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Intrinsic length below which finite-difference steps should stay.
    pub fn length_scale(&self, x: &[f64]) -> f64 {
        let b = norm(&self.b[..self.n]);
        norm(x).min(1.0 / (self.kappa + b).max(1.0))
    }

    fn whiten(&self, x: &[f64]) -> [f64; 3] {
        let mut z = [0.0; 3];
        for (l, zl) in z.iter_mut().enumerate().take(self.n) {
            *zl = (0..self.n).map(|j| self.tinv[l][j] * x[j]).sum();
        }
        z
    }

    /// `G`, `G′`, `G″` of the radial profile at `ρ > 0`.
    fn radial(&self, rho: f64) -> (f64, f64, f64) {
        let k = self.kappa;
        match self.n {
            2 if k == 0.0 => {
                let c = 1.0 / (2.0 * PI);
                (c * rho.ln(), c / rho, -c / (rho * rho))
            }
            2 => {
                let (k0, k1) = bessel_k01(k * rho);
                let c = 1.0 / (2.0 * PI);
                (-c * k0, c * k * k1, -c * k * k * (k0 + k1 / (k * rho)))
            }
            _ => {
                let e = (-k * rho).exp();
                let c = 1.0 / (4.0 * PI);
                (
                    -c * e / rho,
                    c * (1.0 + k * rho) * e / (rho * rho),
                    -c * e * (2.0 + 2.0 * k * rho + k * k * rho * rho) / (rho * rho * rho),
                )
            }
        }
    }

    /// Value, gradient and Hessian. `order` 0 skips derivatives, 1 skips
    /// the Hessian.
    pub fn jet(&self, x: &[f64], order: u8) -> Result<KernelJet> {
        if x.len() != self.n {
            return Err(Error::Argument(format!("expected {} coordinates", self.n)));
        }
        check_point(x)?;
        Ok(self.jet_unchecked(x, order))
    }

    pub(crate) fn jet_unchecked(&self, x: &[f64], order: u8) -> KernelJet {
        let n = self.n;
        let z = self.whiten(x);
        let rho = norm(&z[..n]);
        let (g, g1, g2) = self.radial(rho);
        let bx: f64 = (0..n).map(|l| self.b[l] * x[l]).sum();
        let e = if bx == 0.0 { 1.0 } else { (-bx).exp() } / self.sqrt_det;
        let mut out = KernelJet { value: e * g, gradient: [0.0; 3], hessian: [[0.0; 3]; 3] };
        if order == 0 {
            return out;
        }
        // ∇_x g(T⁻¹x) = T⁻ᵗ (G′ z/ρ)
        let u: Vec<f64> = (0..n).map(|l| z[l] / rho).collect();
        let mut gx = [0.0; 3];
        for (j, gj) in gx.iter_mut().enumerate().take(n) {
            *gj = g1 * (0..n).map(|l| self.tinv[l][j] * u[l]).sum::<f64>();
        }
        for j in 0..n {
            out.gradient[j] = e * (gx[j] - self.b[j] * g);
        }
        if order == 1 {
            return out;
        }
        // ∇²g in whitened coordinates: G″ uuᵗ + (G′/ρ)(I − uuᵗ)
        let mut hz = [[0.0; 3]; 3];
        for l in 0..n {
            for m in 0..n {
                let id = if l == m { 1.0 } else { 0.0 };
                hz[l][m] = g2 * u[l] * u[m] + g1 / rho * (id - u[l] * u[m]);
            }
        }
        for j in 0..n {
            for k in 0..n {
                let mut hx = 0.0;
                for l in 0..n {
                    for m in 0..n {
                        hx += self.tinv[l][j] * hz[l][m] * self.tinv[m][k];
                    }
                }
                out.hessian[j][k] = e
                    * (hx - self.b[j] * gx[k] - gx[j] * self.b[k] + self.b[j] * self.b[k] * g);
            }
        }
        out
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.jet(x, 0)?.value)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.jet(x, 1)?.gradient[..self.n].to_vec())
    }

    /// `S(x) = A(x)·ln|T⁻¹x|² + R(x)` with `A`, `R` real analytic.
    /// Returns `(A(x), R(x))`; at `x = 0` returns the limits.
    pub fn log_split(&self, x: &[f64]) -> (f64, f64) {
        let n = self.n;
        debug_assert_eq!(n, 2, "logarithmic splitting is planar");
        let z = self.whiten(x);
        let rho = norm(&z[..n]);
        let bx: f64 = (0..n).map(|l| self.b[l] * x[l]).sum();
        let e = (-bx).exp() / self.sqrt_det;
        let k = self.kappa;
        let a = e * if k == 0.0 { 1.0 } else { bessel_i0(k * rho) } / (4.0 * PI);
        if rho == 0.0 {
            let r0 = if k == 0.0 { 0.0 } else { ((0.5 * k).ln() + EULER_GAMMA) / (2.0 * PI) };
            return (a, e * r0);
        }
        let s = self.jet_unchecked(x, 0).value;
        (a, s - a * (rho * rho).ln())
    }

    /// `|T⁻¹v|²`, the diagonal limit of `ρ² / (4 sin²((t−τ)/2))`.
    pub fn whitened_norm2(&self, v: &[f64]) -> f64 {
        let z = self.whiten(v);
        z[..self.n].iter().map(|c| c * c).sum()
    }
}

/// `S_n(T⁻¹x)/√det a2`.
pub fn principal_value(fac: &Factorization, x: &[f64]) -> Result<f64> {
    check_point(x)?;
    let z = fac.whiten(x);
    Ok(laplace_value(&z)? / fac.sqrt_det())
}

/// `J_j(x) = |T⁻¹x|⁻ⁿ (xᵗa2⁻¹)_j / (s_n √det a2)`.
pub fn principal_gradient_row(fac: &Factorization, x: &[f64]) -> Result<Vec<f64>> {
    check_point(x)?;
    let n = x.len();
    let rho = norm(&fac.whiten(x));
    let c = 1.0 / (rho.powi(n as i32) * sphere_measure(n) * fac.sqrt_det());
    let ainv = fac.a2_inv();
    Ok((0..n).map(|j| c * (0..n).map(|l| x[l] * ainv[(l, j)]).sum::<f64>()).collect())
}

/// `k_j(x) = ∂_jS(x) − J_j(x)`.
pub fn gradient_remainder(fs: &FundamentalSolution, x: &[f64]) -> Result<Vec<f64>> {
    let g = fs.gradient(x)?;
    let j = principal_gradient_row(fs.factorization(), x)?;
    Ok(g.iter().zip(&j).map(|(a, b)| a - b).collect())
}

/// Serializable kernel selection: `{"family": "yukawa", "k": 1.0, "n": 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default = "two")]
    pub n: usize,
}

fn two() -> usize {
    2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use proptest::prelude::*;

    fn aniso(a: [[f64; 2]; 2]) -> OperatorCoefficients {
        OperatorCoefficients::new(vec![a[0].to_vec(), a[1].to_vec()], vec![C64::default(); 2], C64::default())
            .unwrap()
    }

    fn drift() -> OperatorCoefficients {
        aniso([[2.0, 0.5], [0.5, 1.0]])
            .with_a1(vec![C64::new(0.6, 0.0), C64::new(-0.3, 0.0)])
            .unwrap()
            .with_a0(C64::new(-0.5, 0.0))
    }

    #[test]
    fn laplace_examples() {
        assert_eq!(laplace_value(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((laplace_value(&[0.0, 0.0, 1.0]).unwrap() + 0.0795774715459477).abs() < 1e-15);
        let e = std::f64::consts::E;
        assert!((laplace_value(&[e, 0.0]).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert_eq!(laplace_value(&[0.0, 0.0]), Err(Error::Singularity));
    }

    #[test]
    fn principal_examples() {
        let fac = factorize(&aniso([[4.0, 0.0], [0.0, 1.0]])).unwrap();
        assert!(principal_value(&fac, &[2.0, 0.0]).unwrap().abs() < 1e-16);
        assert!(principal_value(&fac, &[0.0, 1.0]).unwrap().abs() < 1e-16);
        let e = std::f64::consts::E;
        assert!((principal_value(&fac, &[2.0 * e, 0.0]).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
        let id = factorize(&OperatorCoefficients::laplace(2)).unwrap();
        let x = [0.3, -1.7];
        assert_eq!(principal_value(&id, &x).unwrap(), laplace_value(&x).unwrap());
        let j = principal_gradient_row(&id, &x).unwrap();
        let r2 = x[0] * x[0] + x[1] * x[1];
        assert!((j[0] - x[0] / (2.0 * PI * r2)).abs() < 1e-17);
    }

    #[test]
    fn principal_row_is_gradient_of_principal_value() {
        let fac = factorize(&aniso([[4.0, 0.0], [0.0, 1.0]])).unwrap();
        let x = [1.0, 1.0];
        let j = principal_gradient_row(&fac, &x).unwrap();
        // h-sweep of central differences; the best step must agree to 1e-8
        let mut best = [f64::INFINITY; 2];
        for k in 2..8 {
            let h = 10f64.powi(-k);
            for d in 0..2 {
                let mut p = x;
                let mut m = x;
                p[d] += h;
                m[d] -= h;
                let fd = (principal_value(&fac, &p).unwrap() - principal_value(&fac, &m).unwrap()) / (2.0 * h);
                best[d] = best[d].min((fd - j[d]).abs());
            }
        }
        assert!(best[0] < 1e-8 && best[1] < 1e-8, "{best:?}");
    }

    #[test]
    fn yukawa_examples() {
        let v = yukawa_value(1.0, &[1.0, 0.0, 0.0]).unwrap();
        assert!((v + (-1.0f64).exp() / (4.0 * PI)).abs() < 1e-17);
        assert!((v + 0.029274915762159).abs() < 1e-14);
        // value − laplace value bounded along a ray toward 0
        let diffs: Vec<f64> = (1..=40)
            .map(|j| {
                let r = 2f64.powi(-j);
                yukawa_value(1.0, &[r, 0.0]).unwrap() - laplace_value(&[r, 0.0]).unwrap()
            })
            .collect();
        let lim = (EULER_GAMMA - 2f64.ln()) / (2.0 * PI);
        assert!((diffs[39] - lim).abs() < 1e-10);
        assert!(diffs.iter().all(|d| d.abs() < 1.0));
        let g = yukawa_gradient(1.0, &[1.0, 0.0]).unwrap();
        assert!((g[0] - 0.6019072301972346 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(g[1], 0.0);
        // the closed form K₁(1) against the independent series route
        let series_k1 = {
            let z: f64 = 1.0;
            let q = 0.25 * z * z;
            let mut s = 0.0;
            let mut fact = 1.0;
            let mut h = 0.0;
            for k in 0..30 {
                if k > 0 {
                    fact *= k as f64;
                    h += 1.0 / k as f64;
                }
                let psi = 2.0 * h + 1.0 / (k as f64 + 1.0) - 2.0 * EULER_GAMMA;
                s += psi * q.powi(k) / (fact * fact * (k as f64 + 1.0));
            }
            1.0 / z + (0.5 * z).ln() * bessel::bessel_i1(z) - 0.25 * z * s
        };
        assert!((bessel::bessel_k1(1.0) - series_k1).abs() < 1e-15);
    }

    #[test]
    fn families_agree_with_closed_forms() {
        let lap = FundamentalSolution::laplace(2);
        let yuk = FundamentalSolution::yukawa(2, 1.3).unwrap();
        let yuk3 = FundamentalSolution::yukawa(3, 0.7).unwrap();
        for x in [[0.3, 0.4], [-2.0, 1.0], [1e-3, -5e-4]] {
            assert!((lap.value(&x).unwrap() - laplace_value(&x).unwrap()).abs() < 1e-15);
            assert!((yuk.value(&x).unwrap() - yukawa_value(1.3, &x).unwrap()).abs() < 1e-15);
            let (g, h) = (yuk.gradient(&x).unwrap(), yukawa_gradient(1.3, &x).unwrap());
            assert!((g[0] - h[0]).abs() < 1e-12 * h[0].abs().max(1.0));
            let x3 = [x[0], x[1], 0.2];
            assert!((yuk3.value(&x3).unwrap() - yukawa_value(0.7, &x3).unwrap()).abs() < 1e-15);
        }
        assert_eq!(lap.family(), Family::Laplace);
        assert_eq!(FundamentalSolution::new(&drift()).unwrap().family(), Family::Drift);
    }

    #[test]
    fn hessians_match_differences_of_gradients() {
        for fs in [
            FundamentalSolution::laplace(2),
            FundamentalSolution::yukawa(2, 1.0).unwrap(),
            FundamentalSolution::new(&aniso([[4.0, 0.0], [0.0, 1.0]])).unwrap(),
            FundamentalSolution::new(&drift()).unwrap(),
            FundamentalSolution::yukawa(3, 1.0).unwrap(),
        ] {
            let n = fs.dim();
            let x: Vec<f64> = [0.7, -0.4, 0.3][..n].to_vec();
            let jet = fs.jet(&x, 2).unwrap();
            let h = 1e-5;
            for k in 0..n {
                let mut p = x.clone();
                let mut m = x.clone();
                p[k] += h;
                m[k] -= h;
                let (gp, gm) = (fs.gradient(&p).unwrap(), fs.gradient(&m).unwrap());
                let vp = fs.value(&p).unwrap();
                let vm = fs.value(&m).unwrap();
                assert!(((vp - vm) / (2.0 * h) - jet.gradient[k]).abs() < 1e-8);
                for j in 0..n {
                    let fd = (gp[j] - gm[j]) / (2.0 * h);
                    assert!((fd - jet.hessian[j][k]).abs() < 1e-7, "{:?}", fs.family());
                }
            }
        }
    }

    #[test]
    fn remainder_vanishes_for_principal_families_and_decays_for_yukawa() {
        let lap = FundamentalSolution::new(&aniso([[2.0, 1.0], [1.0, 2.0]])).unwrap();
        let k = gradient_remainder(&lap, &[0.3, -0.2]).unwrap();
        assert!(k.iter().all(|v| v.abs() < 1e-15));
        let yuk = FundamentalSolution::yukawa(2, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for j in 1..=20 {
            let r = 2f64.powi(-j);
            let x = [r * 0.6, r * 0.8];
            let k = gradient_remainder(&yuk, &x).unwrap();
            let m = k[0].hypot(k[1]);
            assert!(m < prev);
            // bounded after dividing out the logarithm
            assert!(m / r.ln().abs() < 1.0);
            prev = m;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn log_split_reconstructs_value() {
        for fs in [
            FundamentalSolution::laplace(2),
            FundamentalSolution::yukawa(2, 2.0).unwrap(),
            FundamentalSolution::new(&drift()).unwrap(),
        ] {
            let x = [0.2, 0.1];
            let (a, r) = fs.log_split(&x);
            let rho2 = fs.whitened_norm2(&x);
            assert!((a * rho2.ln() + r - fs.value(&x).unwrap()).abs() < 1e-14);
            // the smooth remainder tends to its diagonal limit
            let (_, r0) = fs.log_split(&[0.0, 0.0]);
            let (_, rs) = fs.log_split(&[1e-7, 2e-7]);
            assert!((r0 - rs).abs() < 1e-6);
        }
    }

    #[test]
    fn unsupported_operators() {
        let helm = OperatorCoefficients::laplace(2).with_a0(C64::new(1.0, 0.0));
        assert!(matches!(FundamentalSolution::new(&helm), Err(Error::Unsupported(_))));
        let cplx = OperatorCoefficients::laplace(2).with_a0(C64::new(-1.0, 0.5));
        assert!(FundamentalSolution::new(&cplx).is_err());
        assert!(FundamentalSolution::with_family(&OperatorCoefficients::laplace(2), Family::Yukawa { k: 1.0 })
            .is_err());
    }

    #[test]
    fn kernel_spec_json() {
        let s: KernelSpec = serde_json::from_str(r#"{"family":"yukawa","k":1.0,"n":2}"#).unwrap();
        assert_eq!(s.family, Family::Yukawa { k: 1.0 });
        assert_eq!(s.n, 2);
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(
            x0 in -3.0f64..3.0, x1 in -3.0f64..3.0, which in 0usize..4
        ) {
            prop_assume!(x0.hypot(x1) > 0.1);
            let fs = match which {
                0 => FundamentalSolution::laplace(2),
                1 => FundamentalSolution::yukawa(2, 1.0).unwrap(),
                2 => FundamentalSolution::new(&aniso([[2.0, 1.0], [1.0, 2.0]])).unwrap(),
                _ => FundamentalSolution::new(&drift()).unwrap(),
            };
            let x = [x0, x1];
            let g = fs.gradient(&x).unwrap();
            let h = 1e-5 * x0.hypot(x1);
            for d in 0..2 {
                let (mut p, mut m) = (x, x);
                p[d] += h;
                m[d] -= h;
                let fd = (fs.value(&p).unwrap() - fs.value(&m).unwrap()) / (2.0 * h);
                prop_assert!((fd - g[d]).abs() <= 1e-7 * g[0].hypot(g[1]).max(1e-3));
            }
        }

        #[test]
        fn principal_row_is_odd(x0 in -3.0f64..3.0, x1 in -3.0f64..3.0) {
            prop_assume!(x0.hypot(x1) > 1e-6);
            let fac = factorize(&aniso([[2.0, 0.7], [0.7, 1.0]])).unwrap();
            let a = principal_gradient_row(&fac, &[x0, x1]).unwrap();
            let b = principal_gradient_row(&fac, &[-x0, -x1]).unwrap();
            prop_assert!((a[0] + b[0]).abs() <= 1e-15 * a[0].abs().max(1e-300));
            prop_assert!((a[1] + b[1]).abs() <= 1e-15 * a[1].abs().max(1e-300));
        }
    }
}
