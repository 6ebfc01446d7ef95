//! Modified Bessel functions `I₀`, `I₁`, `K₀`, `K₁` of positive real argument.

use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 2.0;

/// `Σ (z²/4)^k / (k!)²`.
pub fn bessel_i0(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `(z/2) Σ (z²/4)^k / (k!(k+1)!)`.
pub fn bessel_i1(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / (k * (k + 1)) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    0.5 * z * sum
}

/// `(K₀(z), K₁(z))` for `z > 0`.
pub fn bessel_k01(z: f64) -> (f64, f64) {
    debug_assert!(z > 0.0);
    if z <= SERIES_LIMIT {
        small_k01(z)
    } else {
        steed_k01(z)
    }
}

pub fn bessel_k0(z: f64) -> f64 {
    bessel_k01(z).0
}

pub fn bessel_k1(z: f64) -> f64 {
    bessel_k01(z).1
}

fn small_k01(z: f64) -> (f64, f64) {
    let q = 0.25 * z * z;
    let l = (0.5 * z).ln();
    // K0 = −(ln(z/2)+γ) I0 + Σ_{k≥1} H_k q^k/(k!)²
    let mut t0 = 1.0;
    let mut s0 = 0.0;
    // K1 = 1/z + ln(z/2) I1 − (z/4) Σ_{k≥0} (ψ(k+1)+ψ(k+2)) q^k/(k!(k+1)!)
    let mut t1 = 1.0;
    let mut h = 0.0;
    let mut s1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..200 {
        let kf = k as f64;
        h += 1.0 / kf;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        s0 += h * t0;
        let psi_sum = 2.0 * h + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA;
        let d1 = psi_sum * t1;
        s1 += d1;
        if (h * t0).abs() < 1e-17 * s0.abs() && d1.abs() < 1e-17 * s1.abs() {
            break;
        }
    }
    let k0 = -(l + EULER_GAMMA) * bessel_i0(z) + s0;
    let k1 = 1.0 / z + l * bessel_i1(z) - 0.25 * z * s1;
    (k0, k1)
}

/// Steed's continued fraction for `K₀`, `K₁` at order zero (Temme).
fn steed_k01(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - a1 * h) / x;
    (k0, k1)
}
