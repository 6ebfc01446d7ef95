//! Trigonometric differentiation and interpolation of periodic samples.

use rustfft::FftPlanner;

use crate::{Error, Result, C64};

fn fft(values: &[C64], inverse: bool) -> Vec<C64> {
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(&mut buf);
    buf
}

fn signed_mode(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Argument(format!("need an even number of samples, got {n}")));
    }
    Ok(())
}

/// Derivative of the trigonometric interpolant of samples at `t_i = 2πi/N`.
/// Exact for trigonometric polynomials of degree `< N/2`; the Nyquist mode
/// is dropped.
pub fn spectral_param_derivative(values: &[C64]) -> Result<Vec<C64>> {
    let n = values.len();
    check_even(n)?;
    let mut coef = fft(values, false);
    for (k, c) in coef.iter_mut().enumerate() {
        if k == n / 2 {
            *c = C64::new(0.0, 0.0);
        } else {
            *c *= C64::new(0.0, signed_mode(k, n) as f64);
        }
    }
    let scale = 1.0 / n as f64;
    Ok(fft(&coef, true).into_iter().map(|v| v * scale).collect())
}

/// Real-valued convenience wrapper around [`spectral_param_derivative`].
pub fn spectral_param_derivative_real(values: &[f64]) -> Result<Vec<f64>> {
    let c: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    Ok(spectral_param_derivative(&c)?.into_iter().map(|v| v.re).collect())
}

/// Values of the trigonometric interpolant on `factor·N` equispaced nodes.
/// The Nyquist coefficient is split evenly between `±N/2` so real data
/// stays real.
pub fn trig_upsample(values: &[C64], factor: usize) -> Result<Vec<C64>> {
    let n = values.len();
    check_even(n)?;
    if factor == 0 {
        return Err(Error::Argument("upsampling factor must be positive".into()));
    }
    if factor == 1 {
        return Ok(values.to_vec());
    }
    let m = n * factor;
    let coef = fft(values, false);
    let mut wide = vec![C64::new(0.0, 0.0); m];
    for (k, &c) in coef.iter().enumerate() {
        let mode = signed_mode(k, n);
        if k == n / 2 {
            wide[n / 2] += 0.5 * c;
            wide[m - n / 2] += 0.5 * c;
        } else {
            let idx = if mode >= 0 { mode as usize } else { (m as i64 + mode) as usize };
            wide[idx] = c;
        }
    }
    let scale = 1.0 / n as f64;
    Ok(fft(&wide, true).into_iter().map(|v| v * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| TAU * i as f64 / n as f64).collect()
    }

    #[test]
    fn derivative_of_sine_and_constant() {
        let t = grid(32);
        let d = spectral_param_derivative_real(&t.iter().map(|x| x.sin()).collect::<Vec<_>>()).unwrap();
        for (x, v) in t.iter().zip(&d) {
            assert!((v - x.cos()).abs() < 1e-14);
        }
        let d = spectral_param_derivative_real(&[3.0; 32]).unwrap();
        assert!(d.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn derivative_exact_below_half_band() {
        let t = grid(32);
        let f: Vec<f64> = t.iter().map(|x| (8.0 * x).sin()).collect();
        let d = spectral_param_derivative_real(&f).unwrap();
        for (x, v) in t.iter().zip(&d) {
            assert!((v - 8.0 * (8.0 * x).cos()).abs() < 1e-12);
        }
        let f: Vec<f64> = t.iter().map(|x| (15.0 * x).cos() + (3.0 * x).sin()).collect();
        let d = spectral_param_derivative_real(&f).unwrap();
        for (x, v) in t.iter().zip(&d) {
            assert!((v + 15.0 * (15.0 * x).sin() - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_length_rejected() {
        assert!(spectral_param_derivative_real(&[1.0; 7]).is_err());
    }

    #[test]
    fn upsampling_reproduces_band_limited_data() {
        let n = 16;
        let f = |x: f64| C64::new((3.0 * x).cos(), (5.0 * x).sin()) + C64::new(0.5, 0.0);
        let vals: Vec<C64> = grid(n).into_iter().map(f).collect();
        let up = trig_upsample(&vals, 4).unwrap();
        for (x, v) in grid(4 * n).into_iter().zip(&up) {
            assert!((v - f(x)).norm() < 1e-14);
        }
        // the Nyquist mode cos(N t/2) interpolates as a real cosine
        let ny: Vec<C64> = grid(n).into_iter().map(|x| C64::new((8.0 * x).cos(), 0.0)).collect();
        let up = trig_upsample(&ny, 2).unwrap();
        for (x, v) in grid(2 * n).into_iter().zip(&up) {
            assert!((v.re - (8.0 * x).cos()).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
    }
}
