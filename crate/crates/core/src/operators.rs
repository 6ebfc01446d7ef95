//! Constant-coefficient second-order operators
//! `P u = Σ a_lj ∂_l∂_j u + Σ a_l ∂_l u + a u` and their conormal operator.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::geometry::{BoundaryDensity, BoundaryFrame};
use crate::{Error, Point2, Result, C64};

/// Coefficients `a2` (real symmetric), `a1` (complex vector), `a0` (complex).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoefficients", into = "RawCoefficients")]
pub struct OperatorCoefficients {
    a2: DMatrix<f64>,
    a1: Vec<C64>,
    a0: C64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawCoefficients {
    a2: Vec<Vec<f64>>,
    #[serde(default)]
    a1: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    a0: Option<[f64; 2]>,
}

impl TryFrom<RawCoefficients> for OperatorCoefficients {
    type Error = Error;
    fn try_from(raw: RawCoefficients) -> Result<Self> {
        let n = raw.a2.len();
        let a1 = raw
            .a1
            .map(|v| v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .unwrap_or_else(|| vec![C64::new(0.0, 0.0); n]);
        let a0 = raw.a0.map(|[re, im]| C64::new(re, im)).unwrap_or_default();
        OperatorCoefficients::new(raw.a2, a1, a0)
    }
}

impl From<OperatorCoefficients> for RawCoefficients {
    fn from(c: OperatorCoefficients) -> Self {
        let n = c.dim();
        RawCoefficients {
            a2: (0..n).map(|l| (0..n).map(|j| c.a2[(l, j)]).collect()).collect(),
            a1: Some(c.a1.iter().map(|z| [z.re, z.im]).collect()),
            a0: Some([c.a0.re, c.a0.im]),
        }
    }
}

impl OperatorCoefficients {
    /// Validates dimension (2 or 3), exact symmetry and finiteness.
    pub fn new(a2: Vec<Vec<f64>>, a1: Vec<C64>, a0: C64) -> Result<Self> {
        let n = a2.len();
        if !(n == 2 || n == 3) || a2.iter().any(|row| row.len() != n) {
            return Err(Error::Argument("a2 must be a 2x2 or 3x3 matrix".into()));
        }
        if a1.len() != n {
            return Err(Error::Argument(format!("a1 must have {n} entries")));
        }
        let finite = a2.iter().flatten().all(|v| v.is_finite())
            && a1.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            && a0.re.is_finite()
            && a0.im.is_finite();
        if !finite {
            return Err(Error::Argument("coefficients must be finite".into()));
        }
        for l in 0..n {
            for j in 0..l {
                if a2[l][j] != a2[j][l] {
                    return Err(Error::Argument("a2 must be symmetric".into()));
                }
            }
        }
        let a2 = DMatrix::from_fn(n, n, |l, j| a2[l][j]);
        Ok(OperatorCoefficients { a2, a1, a0 })
    }

    /// Symmetrizes an arbitrary real second-order coefficient matrix:
    /// only `(b + bᵗ)/2` enters the operator.
    pub fn from_general(b: Vec<Vec<f64>>, a1: Vec<C64>, a0: C64) -> Result<Self> {
        let n = b.len();
        if b.iter().any(|row| row.len() != n) {
            return Err(Error::Argument("second-order coefficients must be square".into()));
        }
        let sym = (0..n)
            .map(|l| (0..n).map(|j| 0.5 * (b[l][j] + b[j][l])).collect())
            .collect();
        Self::new(sym, a1, a0)
    }

    pub fn laplace(n: usize) -> Self {
        let a2 = (0..n).map(|l| (0..n).map(|j| if l == j { 1.0 } else { 0.0 }).collect()).collect();
        Self::new(a2, vec![C64::default(); n], C64::default()).expect("laplace coefficients")
    }

    /// `Δ − k²`.
    pub fn yukawa(n: usize, k: f64) -> Self {
        let mut c = Self::laplace(n);
        c.a0 = C64::new(-k * k, 0.0);
        c
    }

    pub fn with_a1(mut self, a1: Vec<C64>) -> Result<Self> {
        if a1.len() != self.dim() {
            return Err(Error::Argument("a1 has the wrong length".into()));
        }
        self.a1 = a1;
        Ok(self)
    }

    pub fn with_a0(mut self, a0: C64) -> Self {
        self.a0 = a0;
        self
    }

    pub fn dim(&self) -> usize {
        self.a2.nrows()
    }

    pub fn a2(&self) -> &DMatrix<f64> {
        &self.a2
    }

    pub fn a2_entry(&self, l: usize, j: usize) -> f64 {
        self.a2[(l, j)]
    }

    pub fn a1(&self) -> &[C64] {
        &self.a1
    }

    pub fn a0(&self) -> C64 {
        self.a0
    }

    /// Planar `a2` as a fixed array. Panics unless `n = 2`.
    pub fn a2_planar(&self) -> [[f64; 2]; 2] {
        assert_eq!(self.dim(), 2, "planar coefficients requested for n = {}", self.dim());
        [[self.a2[(0, 0)], self.a2[(0, 1)]], [self.a2[(1, 0)], self.a2[(1, 1)]]]
    }

    pub fn a1_planar(&self) -> [C64; 2] {
        [self.a1[0], self.a1[1]]
    }

    pub fn has_lower_order(&self) -> bool {
        self.a1.iter().any(|z| z.norm() != 0.0) || self.a0.norm() != 0.0
    }

    /// `νᵗ a2 ν`.
    pub fn normal_form(&self, nu: Point2) -> f64 {
        let a = self.a2_planar();
        nu[0] * (a[0][0] * nu[0] + a[0][1] * nu[1]) + nu[1] * (a[1][0] * nu[0] + a[1][1] * nu[1])
    }
}

/// Smallest eigenvalue of a symmetric matrix of size at most 3, in closed form.
pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    match a.nrows() {
        1 => a[(0, 0)],
        2 => {
            let m = 0.5 * (a[(0, 0)] + a[(1, 1)]);
            let d = 0.5 * (a[(0, 0)] - a[(1, 1)]);
            m - d.hypot(a[(0, 1)])
        }
        3 => {
            // trigonometric solution of the characteristic cubic
            let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
            let q = a.trace() / 3.0;
            if p1 == 0.0 {
                return a[(0, 0)].min(a[(1, 1)]).min(a[(2, 2)]);
            }
            let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2)
                + 2.0 * p1;
            let p = (p2 / 6.0).sqrt();
            let b = (a - DMatrix::identity(3, 3) * q) / p;
            let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos()
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

fn sphere_samples(n: usize, m: usize) -> Vec<Vec<f64>> {
    match n {
        2 => (0..m)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / m as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * k as f64;
                    vec![r * th.cos(), r * th.sin(), z]
                })
                .collect()
        }
    }
}

/// Minimum of `ξᵗ a2 ξ` over `m` sampled unit vectors, cross-checked
/// against the closed-form smallest eigenvalue. Returns the smaller of the
/// two.
pub fn ellipticity_margin(c: &OperatorCoefficients, m: usize) -> Result<f64> {
    if m < 64 {
        return Err(Error::Argument(format!("need at least 64 sphere samples, got {m}")));
    }
    let a = c.a2();
    let n = c.dim();
    let sampled = sphere_samples(n, m)
        .iter()
        .map(|xi| {
            let mut q = 0.0;
            for l in 0..n {
                for j in 0..n {
                    q += a[(l, j)] * xi[l] * xi[j];
                }
            }
            q
        })
        .fold(f64::INFINITY, f64::min);
    let eig = min_eigenvalue(a);
    let margin = sampled.min(eig);
    if !(margin > 0.0) {
        return Err(Error::Ellipticity { margin });
    }
    Ok(margin)
}

/// `a2 = T Tᵗ` with `T` lower triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    t: DMatrix<f64>,
    t_inv: DMatrix<f64>,
    a2_inv: DMatrix<f64>,
    det_a2: f64,
}

impl Factorization {
    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }
    pub fn t_inv(&self) -> &DMatrix<f64> {
        &self.t_inv
    }
    pub fn a2_inv(&self) -> &DMatrix<f64> {
        &self.a2_inv
    }
    pub fn det_a2(&self) -> f64 {
        self.det_a2
    }
    pub fn sqrt_det(&self) -> f64 {
        self.det_a2.sqrt()
    }

    /// `T⁻¹x`.
    pub fn whiten(&self, x: &[f64]) -> Vec<f64> {
        let n = self.t.nrows();
        (0..n).map(|l| (0..n).map(|j| self.t_inv[(l, j)] * x[j]).sum()).collect()
    }
}

pub fn factorize(c: &OperatorCoefficients) -> Result<Factorization> {
    let a = c.a2().clone();
    let chol = nalgebra::Cholesky::new(a.clone())
        .ok_or_else(|| Error::Factorization("a2 is not positive definite".into()))?;
    let t = chol.l();
    let n = t.nrows();
    let mut t_inv = DMatrix::identity(n, n);
    if !t.solve_lower_triangular_mut(&mut t_inv) {
        return Err(Error::Factorization("triangular factor is singular".into()));
    }
    let det_a2 = (0..n).map(|i| t[(i, i)]).product::<f64>().powi(2);
    if !(det_a2 > 0.0) {
        return Err(Error::Factorization("det a2 is not positive".into()));
    }
    let a2_inv = t_inv.transpose() * &t_inv;
    let defect = (&t * t.transpose() - &a).norm();
    if defect > 1e-12 * a.norm() {
        return Err(Error::Factorization(format!("T Tᵗ misses a2 by {defect:e}")));
    }
    Ok(Factorization { t, t_inv, a2_inv, det_a2 })
}

/// Value, gradient and Hessian of a field at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub value: C64,
    pub gradient: Vec<C64>,
    pub hessian: Vec<Vec<C64>>,
}

/// `Σ a_lj ∂_l∂_j u + Σ a_l ∂_l u + a u`.
pub fn apply_p(c: &OperatorCoefficients, u: &FieldJet) -> Result<C64> {
    let n = c.dim();
    if u.gradient.len() != n || u.hessian.len() != n || u.hessian.iter().any(|r| r.len() != n) {
        return Err(Error::Argument("field jet has the wrong dimension".into()));
    }
    let mut acc = c.a0 * u.value;
    for l in 0..n {
        acc += c.a1[l] * u.gradient[l];
        for j in 0..n {
            acc += c.a2[(l, j)] * u.hessian[l][j];
        }
    }
    Ok(acc)
}

/// `B*v = Σ a_jl ν_l ∂_j v − Σ ν_l conj(a_l) v` at every node, for a field
/// given with its ambient gradient.
pub fn conormal_b_star<F>(
    c: &OperatorCoefficients,
    frame: &BoundaryFrame,
    v: F,
) -> Result<BoundaryDensity>
where
    F: Fn(Point2) -> (C64, [C64; 2]),
{
    if c.dim() != 2 {
        return Err(Error::Unsupported("boundary frames are planar".into()));
    }
    let a = c.a2_planar();
    let a1 = c.a1_planar();
    let values = frame
        .points()
        .iter()
        .zip(frame.normals())
        .map(|(&x, &nu)| {
            let (val, g) = v(x);
            let mut acc = C64::default();
            for j in 0..2 {
                for l in 0..2 {
                    acc += a[j][l] * nu[l] * g[j];
                }
            }
            for l in 0..2 {
                acc -= nu[l] * a1[l].conj() * val;
            }
            acc
        })
        .collect();
    BoundaryDensity::from_values(frame, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_curve, CurveSpec};
    use proptest::prelude::*;

    fn aniso(a2: [[f64; 2]; 2]) -> OperatorCoefficients {
        OperatorCoefficients::new(
            vec![a2[0].to_vec(), a2[1].to_vec()],
            vec![C64::default(); 2],
            C64::default(),
        )
        .unwrap()
    }

    #[test]
    fn margins() {
        let m = |a| ellipticity_margin(&aniso(a), 1024).unwrap();
        assert!((m([[1.0, 0.0], [0.0, 1.0]]) - 1.0).abs() < 1e-15);
        assert!((m([[4.0, 0.0], [0.0, 1.0]]) - 1.0).abs() < 1e-14);
        assert!((m([[2.0, 1.0], [1.0, 2.0]]) - 1.0).abs() < 1e-14);
        assert!(matches!(
            ellipticity_margin(&aniso([[1.0, 2.0], [2.0, 1.0]]), 1024),
            Err(Error::Ellipticity { .. })
        ));
        assert!(ellipticity_margin(&aniso([[1.0, 0.0], [0.0, 1.0]]), 10).is_err());
    }

    #[test]
    fn three_dimensional_margin_matches_eigenvalue() {
        let c = OperatorCoefficients::new(
            vec![vec![3.0, 1.0, 0.0], vec![1.0, 3.0, 0.0], vec![0.0, 0.0, 5.0]],
            vec![C64::default(); 3],
            C64::default(),
        )
        .unwrap();
        assert!((min_eigenvalue(c.a2()) - 2.0).abs() < 1e-13);
        let m = ellipticity_margin(&c, 4096).unwrap();
        assert!((m - 2.0).abs() < 1e-12);
    }

    #[test]
    fn factor_examples() {
        let f = factorize(&aniso([[4.0, 0.0], [0.0, 1.0]])).unwrap();
        assert_eq!(f.t()[(0, 0)], 2.0);
        assert_eq!(f.t()[(1, 1)], 1.0);
        assert_eq!(f.det_a2(), 4.0);
        let f = factorize(&aniso([[2.0, 1.0], [1.0, 2.0]])).unwrap();
        let s2 = 2f64.sqrt();
        assert!((f.t()[(0, 0)] - s2).abs() < 1e-15);
        assert!((f.t()[(1, 0)] - 1.0 / s2).abs() < 1e-15);
        assert!((f.t()[(1, 1)] - 1.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(f.t()[(0, 1)], 0.0);
        assert!((f.det_a2() - 3.0).abs() < 1e-14);
        assert!(matches!(
            factorize(&aniso([[1.0, 2.0], [2.0, 1.0]])),
            Err(Error::Factorization(_))
        ));
    }

    #[test]
    fn rejects_asymmetric_and_bad_shapes() {
        assert!(OperatorCoefficients::new(
            vec![vec![1.0, 0.5], vec![0.0, 1.0]],
            vec![C64::default(); 2],
            C64::default()
        )
        .is_err());
        assert!(OperatorCoefficients::new(vec![vec![1.0]], vec![C64::default()], C64::default())
            .is_err());
    }

    #[test]
    fn p_examples() {
        let jet = |v: f64, g: [f64; 2], h: [[f64; 2]; 2]| FieldJet {
            value: C64::new(v, 0.0),
            gradient: g.iter().map(|&x| C64::new(x, 0.0)).collect(),
            hessian: h.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect(),
        };
        let lap = OperatorCoefficients::laplace(2);
        // x₁² − x₂² at (0.3, 0.7)
        let u = jet(0.09 - 0.49, [0.6, -1.4], [[2.0, 0.0], [0.0, -2.0]]);
        assert_eq!(apply_p(&lap, &u).unwrap(), C64::default());
        let k: f64 = 1.5;
        let e = (k * 0.4).exp();
        let u = jet(e, [k * e, 0.0], [[k * k * e, 0.0], [0.0, 0.0]]);
        assert!(apply_p(&OperatorCoefficients::yukawa(2, k), &u).unwrap().norm() < 1e-15);
        let u = jet(0.25, [1.0, 0.0], [[2.0, 0.0], [0.0, 0.0]]);
        assert_eq!(apply_p(&aniso([[4.0, 0.0], [0.0, 1.0]]), &u).unwrap().re, 8.0);
    }

    #[test]
    fn b_star_examples() {
        let (_, f) = make_curve(CurveSpec::circle(1.0), 32).unwrap();
        let lap = OperatorCoefficients::laplace(2);
        let b = conormal_b_star(&lap, &f, |x| {
            (C64::default(), [C64::new(x[0], 0.0), C64::new(x[1], 0.0)])
        })
        .unwrap();
        assert!(b.values().iter().all(|v| (v - 1.0).norm() < 1e-15));

        let c = lap.clone().with_a1(vec![C64::new(0.0, 1.0), C64::default()]).unwrap();
        let b = conormal_b_star(&c, &f, |_| (C64::new(1.0, 0.0), [C64::default(); 2])).unwrap();
        for (v, nu) in b.values().iter().zip(f.normals()) {
            assert!((v - C64::new(0.0, nu[0])).norm() < 1e-15);
        }

        let b = conormal_b_star(&aniso([[4.0, 0.0], [0.0, 1.0]]), &f, |_| {
            (C64::default(), [C64::new(1.0, 0.0), C64::default()])
        })
        .unwrap();
        for (v, nu) in b.values().iter().zip(f.normals()) {
            assert!((v.re - 4.0 * nu[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"a2": [[2.0, 1.0], [1.0, 2.0]], "a1": [[1.0, 0.5], [0.0, 0.0]], "a0": [-1.0, 0.0]}"#;
        let c: OperatorCoefficients = serde_json::from_str(text).unwrap();
        assert_eq!(c.a1()[0], C64::new(1.0, 0.5));
        let back: OperatorCoefficients =
            serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<OperatorCoefficients>(r#"{"a2": [[1.0, 2.0], [0.0, 1.0]]}"#)
            .is_err());
    }

    fn spd() -> impl Strategy<Value = [[f64; 2]; 2]> {
        (0.1f64..5.0, 0.1f64..5.0, -1.0f64..1.0).prop_map(|(p, q, r)| {
            let c = r * (p * q).sqrt() * 0.95;
            [[p, c], [c, q]]
        })
    }

    proptest! {
        #[test]
        fn factorization_reproduces_matrix(a in spd()) {
            let c = aniso(a);
            let f = factorize(&c).unwrap();
            let rebuilt = f.t() * f.t().transpose();
            let c2 = OperatorCoefficients::new(
                vec![vec![rebuilt[(0, 0)], rebuilt[(0, 1)]], vec![rebuilt[(0, 1)], rebuilt[(1, 1)]]],
                vec![C64::default(); 2],
                C64::default(),
            ).unwrap();
            let f2 = factorize(&c2).unwrap();
            prop_assert!((f2.t() - f.t()).norm() <= 1e-12 * f.t().norm());
        }

        #[test]
        fn margin_ignores_antisymmetric_part(a in spd(), w in -3.0f64..3.0) {
            let b = vec![vec![a[0][0], a[0][1] + w], vec![a[1][0] - w, a[1][1]]];
            let c = OperatorCoefficients::from_general(b, vec![C64::default(); 2], C64::default()).unwrap();
            let m0 = ellipticity_margin(&aniso(a), 256).unwrap();
            let m1 = ellipticity_margin(&c, 256).unwrap();
            prop_assert!((m0 - m1).abs() <= 1e-14 * m0.max(1.0));
        }

        #[test]
        fn p_is_linear(x in proptest::collection::vec(-2.0f64..2.0, 14), s in -3.0f64..3.0) {
            let cj = |o: usize| FieldJet {
                value: C64::new(x[o], 0.0),
                gradient: vec![C64::new(x[o + 1], 0.0), C64::new(x[o + 2], 0.0)],
                hessian: vec![
                    vec![C64::new(x[o + 3], 0.0), C64::new(x[o + 4], 0.0)],
                    vec![C64::new(x[o + 4], 0.0), C64::new(x[o + 5], 0.0)],
                ],
            };
            let (u, v) = (cj(0), cj(6));
            let comb = FieldJet {
                value: u.value + s * v.value,
                gradient: (0..2).map(|i| u.gradient[i] + s * v.gradient[i]).collect(),
                hessian: (0..2).map(|i| (0..2).map(|j| u.hessian[i][j] + s * v.hessian[i][j]).collect()).collect(),
            };
            let c = aniso([[2.0, 0.3], [0.3, 1.0]])
                .with_a1(vec![C64::new(x[12], 1.0), C64::new(0.5, x[13])]).unwrap()
                .with_a0(C64::new(-1.0, 0.2));
            let lhs = apply_p(&c, &comb).unwrap();
            let rhs = apply_p(&c, &u).unwrap() + s * apply_p(&c, &v).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
            // linear in the coefficients too
            let c2 = c.clone().with_a0(C64::new(3.0, 0.0));
            let d = apply_p(&c2, &u).unwrap() - apply_p(&c, &u).unwrap();
            prop_assert!((d - (C64::new(3.0, 0.0) - C64::new(-1.0, 0.2)) * u.value).norm() < 1e-12);
        }
    }
}
