use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::frame::{BoundaryFrame, FramePoint};
use super::spectral::spectral_param_derivative;
use crate::{Error, Result, C64};

/// Value and frame-parameter derivative of a boundary function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: C64,
    pub d: C64,
}

impl Jet {
    pub fn new(v: C64, d: C64) -> Self {
        Jet { v, d }
    }
    pub fn real(v: f64, d: f64) -> Self {
        Jet { v: C64::new(v, 0.0), d: C64::new(d, 0.0) }
    }
}

/// A density given as a callable of the frame parameter.
pub type Profile = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

/// Regularity of a density in the frame parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Analytic,
    /// `C^{k,1}`.
    Ck1(u32),
    Continuous,
}

impl Regularity {
    /// Class after one derivative.
    pub fn lowered(self) -> Regularity {
        match self {
            Regularity::Analytic => Regularity::Analytic,
            Regularity::Ck1(0) | Regularity::Continuous => Regularity::Continuous,
            Regularity::Ck1(k) => Regularity::Ck1(k - 1),
        }
    }

    pub fn label(self) -> String {
        match self {
            Regularity::Analytic => "analytic".into(),
            Regularity::Ck1(k) => format!("c{k}1"),
            Regularity::Continuous => "c0".into(),
        }
    }
}

/// Density samples at the nodes of a frame. Derivatives are with respect
/// to the frame parameter; a `NaN` derivative marks data that cannot be
/// differentiated further.
#[derive(Clone)]
pub struct BoundaryDensity {
    values: Vec<C64>,
    derivs: Vec<C64>,
    coefficients: Vec<C64>,
    profile: Option<Profile>,
    kinks: Vec<f64>,
    regularity: Regularity,
}

impl fmt::Debug for BoundaryDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryDensity")
            .field("len", &self.values.len())
            .field("profile", &self.profile.is_some())
            .field("kinks", &self.kinks)
            .field("regularity", &self.regularity)
            .finish()
    }
}

fn fourier(values: &[C64]) -> Vec<C64> {
    let mut buf = values.to_vec();
    let mut planner = rustfft::FftPlanner::<f64>::new();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    let n = buf.len() as f64;
    buf.iter_mut().for_each(|c| *c /= n);
    buf
}

/// Parameter distance wrapped to `[−π, π)`.
pub fn wrapped(s: f64) -> f64 {
    (s + PI).rem_euclid(TAU) - PI
}

impl BoundaryDensity {
    /// Nodal data; derivatives come from the trigonometric interpolant.
    pub fn from_values(frame: &BoundaryFrame, values: Vec<C64>) -> Result<Self> {
        if values.len() != frame.len() {
            return Err(Error::Argument(format!(
                "density has {} samples for {} nodes",
                values.len(),
                frame.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Argument("density values must be finite".into()));
        }
        let derivs = spectral_param_derivative(&values)?;
        Ok(BoundaryDensity {
            coefficients: fourier(&values),
            values,
            derivs,
            profile: None,
            kinks: Vec::new(),
            regularity: Regularity::Analytic,
        })
    }

    /// Density defined by a callable; nodal data are sampled from it.
    pub fn from_profile(
        frame: &BoundaryFrame,
        profile: Profile,
        kinks: Vec<f64>,
        regularity: Regularity,
    ) -> Result<Self> {
        let jets: Vec<Jet> = frame.params().iter().map(|&s| profile(s)).collect();
        let values: Vec<C64> = jets.iter().map(|j| j.v).collect();
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Argument("density values must be finite".into()));
        }
        let mut kinks: Vec<f64> = kinks.into_iter().map(|k| k.rem_euclid(TAU)).collect();
        kinks.sort_by(f64::total_cmp);
        kinks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        Ok(BoundaryDensity {
            coefficients: fourier(&values),
            derivs: jets.iter().map(|j| j.d).collect(),
            values,
            profile: Some(profile),
            kinks,
            regularity,
        })
    }

    pub fn zero(frame: &BoundaryFrame) -> Self {
        Self::constant(frame, C64::new(0.0, 0.0))
    }

    pub fn constant(frame: &BoundaryFrame, c: C64) -> Self {
        Self::from_profile(
            frame,
            Arc::new(move |_| Jet::new(c, C64::new(0.0, 0.0))),
            Vec::new(),
            Regularity::Analytic,
        )
        .expect("constant density")
    }

    /// `cos(m s)`.
    pub fn cos_mode(frame: &BoundaryFrame, m: u32) -> Self {
        let m = m as f64;
        Self::from_profile(
            frame,
            Arc::new(move |s| Jet::real((m * s).cos(), -m * (m * s).sin())),
            Vec::new(),
            Regularity::Analytic,
        )
        .expect("cosine density")
    }

    /// `sin(m s)`.
    pub fn sin_mode(frame: &BoundaryFrame, m: u32) -> Self {
        let m = m as f64;
        Self::from_profile(
            frame,
            Arc::new(move |s| Jet::real((m * s).sin(), m * (m * s).cos())),
            Vec::new(),
            Regularity::Analytic,
        )
        .expect("sine density")
    }

    /// Lipschitz hat `max(0, 1 − |s − center|/width)` in the frame parameter.
    pub fn lipschitz_hat(frame: &BoundaryFrame, center: f64, width: f64) -> Result<Self> {
        check_width(width)?;
        let profile = move |s: f64| {
            let u = wrapped(s - center);
            if u.abs() >= width {
                Jet::real(0.0, 0.0)
            } else {
                Jet::real(1.0 - u.abs() / width, -u.signum() / width)
            }
        };
        Self::from_profile(
            frame,
            Arc::new(profile),
            vec![center - width, center, center + width],
            Regularity::Ck1(0),
        )
    }

    /// Piecewise quadratic bump with Lipschitz derivative, supported on
    /// `|s − center| ≤ width`.
    pub fn c11_hat(frame: &BoundaryFrame, center: f64, width: f64) -> Result<Self> {
        check_width(width)?;
        let profile = move |s: f64| {
            let u = wrapped(s - center);
            let a = u.abs() / width;
            let sg = u.signum();
            if a >= 1.0 {
                Jet::real(0.0, 0.0)
            } else if a <= 0.5 {
                Jet::real(1.0 - 2.0 * a * a, -4.0 * a * sg / width)
            } else {
                Jet::real(2.0 * (1.0 - a) * (1.0 - a), -4.0 * (1.0 - a) * sg / width)
            }
        };
        let h = 0.5 * width;
        Self::from_profile(
            frame,
            Arc::new(profile),
            vec![center - width, center - h, center + h, center + width],
            Regularity::Ck1(1),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn derivs(&self) -> &[C64] {
        &self.derivs
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn has_profile(&self) -> bool {
        self.profile.is_some()
    }

    pub fn is_differentiable(&self) -> bool {
        self.derivs.iter().all(|d| d.re.is_finite() && d.im.is_finite())
    }

    /// Value at an arbitrary frame parameter: the profile when available,
    /// the trigonometric interpolant otherwise.
    pub fn value_at(&self, s: f64) -> C64 {
        match &self.profile {
            Some(p) => p(s).v,
            None => self.interpolate(s),
        }
    }

    fn interpolate(&self, s: f64) -> C64 {
        let n = self.coefficients.len();
        let mut acc = C64::new(0.0, 0.0);
        for (k, &c) in self.coefficients.iter().enumerate() {
            if k == n / 2 {
                acc += c * (0.5 * n as f64 * s).cos();
            } else {
                let m = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
                acc += c * C64::from_polar(1.0, m * s);
            }
        }
        acc
    }

    /// The same boundary function on another frame of the same curve.
    pub fn transfer(&self, from: &BoundaryFrame, to: &BoundaryFrame) -> Result<Self> {
        if !Arc::ptr_eq(from.curve(), to.curve()) && from.curve().spec() != to.curve().spec() {
            return Err(Error::Argument("frames describe different curves".into()));
        }
        if self.len() != from.len() {
            return Err(Error::Argument("density does not match the source frame".into()));
        }
        let map = {
            let (from, to) = (from.clone(), to.clone());
            move |s: f64| frame_param(&from, to.curve_param(s))
        };
        match &self.profile {
            Some(p) => {
                let p = p.clone();
                let ratio = from.orientation_sign() * to.orientation_sign();
                let kinks = self.kinks.iter().map(|&k| frame_param(to, from.curve_param(k))).collect();
                let profile = move |s: f64| {
                    let u = p(map(s));
                    Jet::new(u.v, u.d * ratio)
                };
                Self::from_profile(to, Arc::new(profile), kinks, self.regularity)
            }
            None => {
                let values = to.params().iter().map(|&s| self.interpolate(map(s))).collect();
                let mut out = Self::from_values(to, values)?;
                out.regularity = self.regularity;
                Ok(out)
            }
        }
    }

    /// Values on `m` equispaced frame parameters.
    pub fn resample(&self, m: usize) -> Result<Vec<C64>> {
        if self.profile.is_none() && m.is_multiple_of(self.len()) {
            return super::spectral::trig_upsample(&self.values, m / self.len());
        }
        Ok((0..m).map(|i| self.value_at(TAU * i as f64 / m as f64)).collect())
    }

    /// Multiplies by a geometric weight `g(s)`, given with its derivative.
    pub fn scaled_by<F>(&self, frame: &BoundaryFrame, g: F) -> Result<Self>
    where
        F: Fn(&FramePoint) -> Jet + Send + Sync + 'static,
    {
        match &self.profile {
            Some(p) => {
                let p = p.clone();
                let fr = frame.clone();
                let profile = move |s: f64| {
                    let w = g(&fr.at(s));
                    let u = p(s);
                    Jet::new(w.v * u.v, w.d * u.v + w.v * u.d)
                };
                let mut kinks = self.kinks.clone();
                kinks.extend(frame.curve().breakpoints().iter().map(|&t| frame_param(frame, t)));
                Self::from_profile(frame, Arc::new(profile), kinks, self.regularity)
            }
            None => {
                let mut values = Vec::with_capacity(self.len());
                let mut derivs = Vec::with_capacity(self.len());
                for (i, &s) in frame.params().iter().enumerate() {
                    let w = g(&frame.at(s));
                    values.push(w.v * self.values[i]);
                    derivs.push(w.d * self.values[i] + w.v * self.derivs[i]);
                }
                Ok(BoundaryDensity {
                    coefficients: fourier(&values),
                    values,
                    derivs,
                    profile: None,
                    kinks: self.kinks.clone(),
                    regularity: self.regularity,
                })
            }
        }
    }

    /// `d/dσ` along the frame: derivative divided by the speed. The result
    /// carries no derivative of its own.
    pub(crate) fn arc_derivative(&self, frame: &BoundaryFrame, sign: f64) -> Result<Self> {
        if !self.is_differentiable() {
            return Err(Error::Capability(
                "density has no derivative; apply the tangential derivative at most once".into(),
            ));
        }
        let nan = C64::new(f64::NAN, f64::NAN);
        let values: Vec<C64> = self
            .derivs
            .iter()
            .zip(frame.speeds())
            .map(|(d, v)| sign * d / v)
            .collect();
        let profile = self.profile.as_ref().map(|p| {
            let p = p.clone();
            let fr = frame.clone();
            Arc::new(move |s: f64| Jet::new(sign * p(s).d / fr.at(s).speed(), nan)) as Profile
        });
        Ok(BoundaryDensity {
            coefficients: fourier(&values),
            derivs: vec![nan; values.len()],
            values,
            profile,
            kinks: self.kinks.clone(),
            regularity: self.regularity.lowered(),
        })
    }

    /// Pointwise combination of two densities on the same frame.
    pub fn combine(&self, other: &Self, a: C64, b: C64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Argument("densities live on different frames".into()));
        }
        let values: Vec<C64> =
            self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        let derivs: Vec<C64> =
            self.derivs.iter().zip(&other.derivs).map(|(x, y)| a * x + b * y).collect();
        let profile = match (&self.profile, &other.profile) {
            (Some(p), Some(q)) => {
                let (p, q) = (p.clone(), q.clone());
                Some(Arc::new(move |s: f64| {
                    let (u, w) = (p(s), q(s));
                    Jet::new(a * u.v + b * w.v, a * u.d + b * w.d)
                }) as Profile)
            }
            _ => None,
        };
        let mut kinks = self.kinks.clone();
        kinks.extend_from_slice(&other.kinks);
        kinks.sort_by(f64::total_cmp);
        kinks.dedup();
        let regularity = match (self.regularity, other.regularity) {
            (Regularity::Continuous, _) | (_, Regularity::Continuous) => Regularity::Continuous,
            (Regularity::Analytic, r) | (r, Regularity::Analytic) => r,
            (Regularity::Ck1(i), Regularity::Ck1(j)) => Regularity::Ck1(i.min(j)),
        };
        Ok(BoundaryDensity {
            coefficients: fourier(&values),
            values,
            derivs,
            profile,
            kinks,
            regularity,
        })
    }
}

fn check_width(width: f64) -> Result<()> {
    if !(width > 0.0 && width < PI) {
        return Err(Error::Argument(format!("hat width must lie in (0, π), got {width}")));
    }
    Ok(())
}

/// Frame parameter of curve parameter `t`.
pub fn frame_param(frame: &BoundaryFrame, t: f64) -> f64 {
    let s = match frame.orientation() {
        super::frame::Orientation::Counterclockwise => t - frame.shift(),
        super::frame::Orientation::Clockwise => -t - frame.shift(),
    };
    s.rem_euclid(TAU)
}
