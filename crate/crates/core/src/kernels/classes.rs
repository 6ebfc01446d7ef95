use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::exec::{map_indexed, Exec};
use crate::{Error, Point2, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    /// Even with zero mean over the unit circle.
    EvenMeanZero,
    General,
}

/// A planar kernel claimed to be positively homogeneous of some degree.
#[derive(Clone)]
pub struct HomogeneousKernel {
    pub degree: f64,
    pub parity: Parity,
    pub value: Arc<dyn Fn(Point2) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for HomogeneousKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomogeneousKernel")
            .field("degree", &self.degree)
            .field("parity", &self.parity)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomogeneityReport {
    /// `max |K(λx) − λ^h K(x)| / max(|λ^h K(x)|, tiny)`.
    pub homogeneity_defect: f64,
    /// `max |K(−x) ∓ K(x)|` relative, with the sign of the claimed parity.
    pub parity_defect: f64,
    /// `∫_{|x|=1} K dσ` by the trapezoid rule.
    pub sphere_mean: f64,
    pub parity_confirmed: bool,
}

/// Checks the claimed degree and parity on `samples` unit vectors and the
/// given scales.
pub fn homogeneity_parity_check(
    k: &HomogeneousKernel,
    samples: usize,
    scales: &[f64],
) -> Result<HomogeneityReport> {
    if samples < 8 || scales.is_empty() {
        return Err(Error::Argument("need at least 8 directions and one scale".into()));
    }
    let mut hom: f64 = 0.0;
    let mut par: f64 = 0.0;
    let mut mean = 0.0;
    let mut abs_mean = 0.0;
    for i in 0..samples {
        // offset by half a step so no sample sits on a coordinate axis
        let th = 2.0 * PI * (i as f64 + 0.5) / samples as f64;
        let x = [th.cos(), th.sin()];
        let v = (k.value)(x);
        mean += v * 2.0 * PI / samples as f64;
        abs_mean += v.abs() * 2.0 * PI / samples as f64;
        for &lam in scales {
            let expect = lam.powf(k.degree) * v;
            let got = (k.value)([lam * x[0], lam * x[1]]);
            hom = hom.max((got - expect).abs() / expect.abs().max(f64::MIN_POSITIVE));
        }
        let vm = (k.value)([-x[0], -x[1]]);
        let d = match k.parity {
            Parity::Odd => (vm + v).abs(),
            _ => (vm - v).abs(),
        };
        par = par.max(d / v.abs().max(f64::MIN_POSITIVE));
    }
    let parity_confirmed = match k.parity {
        Parity::Odd => par < 1e-10,
        Parity::EvenMeanZero => par < 1e-10 && mean.abs() <= 1e-10 * abs_mean.max(1.0),
        Parity::General => true,
    };
    Ok(HomogeneityReport {
        homogeneity_defect: hom,
        parity_defect: par,
        sphere_mean: mean,
        parity_confirmed,
    })
}

/// Sampled lower bound for the two suprema defining the potential-type
/// kernel class norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelClassNormEstimate {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    /// `sup |x − y|^{s1} |K(x, y)|` over `x ≠ y`.
    pub term1: f64,
    /// `sup |x′ − y|^{s2} |K(x′,y) − K(x″,y)| / |x′ − x″|^{s3}` over
    /// `x′ ≠ x″` and `|y − x′| ≥ 2|x′ − x″|`.
    pub term2: f64,
    pub pairs: usize,
    pub triples: usize,
    pub label: String,
}

impl KernelClassNormEstimate {
    pub fn total(&self) -> f64 {
        self.term1 + self.term2
    }
}

pub fn kernel_class_norm<K>(
    k: K,
    xs: &[Point2],
    ys: &[Point2],
    s: [f64; 3],
    exec: Exec,
) -> Result<KernelClassNormEstimate>
where
    K: Fn(Point2, Point2) -> C64 + Sync,
{
    let [s1, s2, s3] = s;
    let row1 = map_indexed(exec, xs.len(), |i| {
        let x = xs[i];
        let mut best: f64 = 0.0;
        let mut count = 0usize;
        for &y in ys {
            let d = crate::norm2(crate::sub2(x, y));
            if d > 0.0 {
                best = best.max(d.powf(s1) * k(x, y).norm());
                count += 1;
            }
        }
        (best, count)
    });
    let row2 = map_indexed(exec, xs.len(), |i| {
        let xp = xs[i];
        let kp: Vec<Option<C64>> = ys
            .iter()
            .map(|&y| (crate::norm2(crate::sub2(xp, y)) > 0.0).then(|| k(xp, y)))
            .collect();
        let mut best: f64 = 0.0;
        let mut count = 0usize;
        for (j, &xpp) in xs.iter().enumerate() {
            let d = crate::norm2(crate::sub2(xp, xpp));
            if j == i || d == 0.0 {
                continue;
            }
            for (l, &y) in ys.iter().enumerate() {
                let dy = crate::norm2(crate::sub2(xp, y));
                if dy < 2.0 * d {
                    continue;
                }
                let Some(a) = kp[l] else { continue };
                let q = dy.powf(s2) / d.powf(s3) * (a - k(xpp, y)).norm();
                best = best.max(q);
                count += 1;
            }
        }
        (best, count)
    });
    let (term1, pairs) = row1.iter().fold((0.0f64, 0), |(b, c), &(x, n)| (b.max(x), c + n));
    let (term2, triples) = row2.iter().fold((0.0f64, 0), |(b, c), &(x, n)| (b.max(x), c + n));
    if pairs == 0 || triples == 0 {
        return Err(Error::Argument("no admissible pairs or triples in the sample".into()));
    }
    Ok(KernelClassNormEstimate {
        s1,
        s2,
        s3,
        term1,
        term2,
        pairs,
        triples,
        label: "estimate (lower bound)".into(),
    })
}
