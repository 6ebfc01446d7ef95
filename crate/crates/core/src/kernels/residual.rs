use serde::Serialize;

use crate::operators::{FieldJet, OperatorCoefficients};
use crate::{Error, Result, C64};

const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// Fourth-order central-difference jet of `f` at `x` with step
/// `h = ε^{1/6}·length`.
pub fn fd_jet<F>(f: F, x: &[f64], length: f64) -> FieldJet
where
    F: Fn(&[f64]) -> C64,
{
    let n = x.len();
    let h = f64::EPSILON.powf(1.0 / 6.0) * length;
    let shifted = |d: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(k, s) in d {
            y[k] += s * h;
        }
        f(&y)
    };
    let f0 = f(x);
    let mut gradient = vec![C64::default(); n];
    let mut hessian = vec![vec![C64::default(); n]; n];
    for k in 0..n {
        let mut g = C64::default();
        for &(s, w) in &STENCIL {
            g += w * shifted(&[(k, s)]);
        }
        gradient[k] = g / (12.0 * h);
        let second = -shifted(&[(k, 2.0)]) + 16.0 * shifted(&[(k, 1.0)]) - 30.0 * f0
            + 16.0 * shifted(&[(k, -1.0)])
            - shifted(&[(k, -2.0)]);
        hessian[k][k] = second / (12.0 * h * h);
        for j in 0..k {
            let mut m = C64::default();
            for &(s, w) in &STENCIL {
                for &(t, v) in &STENCIL {
                    m += w * v * shifted(&[(k, s), (j, t)]);
                }
            }
            hessian[k][j] = m / (144.0 * h * h);
            hessian[j][k] = hessian[k][j];
        }
    }
    FieldJet { value: f0, gradient, hessian }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeResidual {
    pub residual: f64,
    /// Sum of the magnitudes of the individual terms of `P u`.
    pub scale: f64,
    pub relative: f64,
}

/// `|P u(x)|` from a finite-difference jet, relative to the size of the
/// terms that cancel.
pub fn pde_residual<F>(c: &OperatorCoefficients, f: F, x: &[f64], length: f64) -> Result<PdeResidual>
where
    F: Fn(&[f64]) -> C64,
{
    if x.len() != c.dim() {
        return Err(Error::Argument("point dimension does not match the operator".into()));
    }
    let jet = fd_jet(f, x, length);
    let n = c.dim();
    let mut total = c.a0() * jet.value;
    let mut scale = total.norm();
    for l in 0..n {
        let t = c.a1()[l] * jet.gradient[l];
        total += t;
        scale += t.norm();
        for j in 0..n {
            let t = c.a2_entry(l, j) * jet.hessian[l][j];
            total += t;
            scale += t.norm();
        }
    }
    let residual = total.norm();
    Ok(PdeResidual {
        residual,
        scale,
        relative: residual / scale.max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::FundamentalSolution;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polynomial_jet_is_exact() {
        let f = |x: &[f64]| C64::new(x[0] * x[0] * x[1] - 3.0 * x[1] * x[1], 0.0);
        let j = fd_jet(f, &[0.5, -1.0], 1.0);
        assert!((j.hessian[0][0].re + 2.0).abs() < 1e-8);
        assert!((j.hessian[0][1].re - 1.0).abs() < 1e-8);
        assert!((j.hessian[1][1].re + 6.0).abs() < 1e-8);
        assert!((j.gradient[1].re - 6.25).abs() < 1e-10);
    }

    #[test]
    fn fundamental_solutions_solve_the_pde() {
        let aniso = OperatorCoefficients::new(
            vec![vec![4.0, 0.0], vec![0.0, 1.0]],
            vec![C64::default(); 2],
            C64::default(),
        )
        .unwrap();
        let drift = OperatorCoefficients::new(
            vec![vec![2.0, 0.5], vec![0.5, 1.0]],
            vec![C64::new(0.6, 0.0), C64::new(-0.3, 0.0)],
            C64::new(-0.5, 0.0),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [
            OperatorCoefficients::laplace(2),
            OperatorCoefficients::yukawa(2, 1.0),
            aniso,
            drift,
            OperatorCoefficients::laplace(3),
            OperatorCoefficients::yukawa(3, 1.0),
        ] {
            let fs = FundamentalSolution::new(&c).unwrap();
            let n = c.dim();
            for _ in 0..100 {
                let r = 10f64.powf(rng.random_range(-2.0..1.0));
                let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                x.iter_mut().for_each(|v| *v *= r / s);
                let val = fs.value(&x).unwrap();
                let res = pde_residual(&c, |y| C64::new(fs.value(y).unwrap(), 0.0), &x, fs.length_scale(&x))
                    .unwrap();
                assert!(
                    res.relative < 1e-6 || res.residual < 1e-6 * val.abs() + 1e-8,
                    "{:?} at {x:?}: {res:?}",
                    fs.family()
                );
            }
        }
    }
}
