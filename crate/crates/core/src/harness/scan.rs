use std::f64::consts::TAU;

use serde::Serialize;
use serde_json::json;

use super::config::{curve_label, frame_for, ScanSpec};
use super::{num, Criterion, Ctx, ExperimentReport, Table};
use crate::exec::{try_map_indexed, Exec};
use crate::geometry::{frame_param, BoundaryDensity, BoundaryFrame};
use crate::kernels::FundamentalSolution;
use crate::moduli::ModulusFunction;
use crate::potentials::{FieldKind, LayerPotentials};
use crate::{Error, Point2, Result, C64};

/// Sup ratios over all pairs at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleRecord {
    pub k: u32,
    /// Arc separation `2^{-k}`.
    pub h: f64,
    pub pairs: usize,
    /// `sup |F(x) − F(x′)| / ω(|x − x′|)`, one entry per scanned modulus.
    pub ratio_sup: Vec<f64>,
    /// `sup |F(x) − F(x′)| / |x − x′|`.
    pub lipschitz_sup: f64,
    /// Pair attaining the first ratio.
    pub argmax: [Point2; 2],
    pub max_increment: f64,
    pub max_estimate: f64,
    /// Quadrature estimate above the contamination threshold.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub moduli: Vec<String>,
    pub records: Vec<ScaleRecord>,
    /// For each modulus, `max/min` of the ratio over the last included scales.
    pub variation: Vec<f64>,
    pub lipschitz_nondecreasing: bool,
}

/// Anchor parameters: density kinks, curve breakpoints and `uniform`
/// equispaced points, sorted.
pub(crate) fn anchors(frame: &BoundaryFrame, mu: &BoundaryDensity, uniform: usize) -> Vec<f64> {
    let mut a: Vec<f64> = mu.kinks().to_vec();
    a.extend(frame.curve().breakpoints().iter().map(|&t| frame_param(frame, t)));
    a.extend((0..uniform).map(|i| TAU * i as f64 / uniform as f64));
    let mut a: Vec<f64> = a.into_iter().map(|s| s.rem_euclid(TAU)).collect();
    a.sort_by(f64::total_cmp);
    a.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    a
}

/// Interior pair at arc separation `h` centred on anchor `s`, offset
/// inward by `h/4`.
fn pair(frame: &BoundaryFrame, s: f64, h: f64) -> [Point2; 2] {
    let dp = 0.5 * h / frame.at(s).speed();
    let delta = 0.25 * h;
    [s - dp, s + dp].map(|t| {
        let fp = frame.at(t);
        let p = fp.point();
        let nu = fp.normal();
        [p[0] - delta * nu[0], p[1] - delta * nu[1]]
    })
}

/// Scans a vector field returning `(values, quadrature estimate)`.
pub(crate) fn scan_field<F>(
    frame: &BoundaryFrame,
    anchors: &[f64],
    ks: std::ops::RangeInclusive<u32>,
    moduli: &[ModulusFunction],
    contamination: f64,
    exec: Exec,
    field: F,
) -> Result<Vec<ScaleRecord>>
where
    F: Fn(Point2) -> Result<(Vec<C64>, f64)> + Sync + Send,
{
    let mut records = Vec::new();
    for k in ks {
        let h = 0.5f64.powi(k as i32);
        let rows = try_map_indexed(exec, anchors.len(), |i| {
            let [x, y] = pair(frame, anchors[i], h);
            let (fx, ex) = field(x)?;
            let (fy, ey) = field(y)?;
            let inc = fx.iter().zip(&fy).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            Ok::<_, Error>(([x, y], inc, ex.max(ey)))
        })?;
        let mut ratio_sup = vec![0.0f64; moduli.len()];
        let mut lipschitz_sup: f64 = 0.0;
        let mut argmax = rows[0].0;
        let mut max_increment: f64 = 0.0;
        let mut max_estimate: f64 = 0.0;
        for (p, inc, est) in &rows {
            let r = crate::norm2(crate::sub2(p[0], p[1]));
            for (mi, (m, sup)) in moduli.iter().zip(ratio_sup.iter_mut()).enumerate() {
                let q = inc / m.eval(r);
                if q > *sup {
                    if mi == 0 {
                        argmax = *p;
                    }
                    *sup = q;
                }
            }
            lipschitz_sup = lipschitz_sup.max(inc / r);
            max_increment = max_increment.max(*inc);
            max_estimate = max_estimate.max(*est);
        }
        records.push(ScaleRecord {
            k,
            h,
            pairs: rows.len(),
            ratio_sup,
            lipschitz_sup,
            argmax,
            max_increment,
            max_estimate,
            excluded: max_estimate > contamination * max_increment,
        });
    }
    Ok(records)
}

/// `max/min` of each modulus ratio over the last `last` included scales.
pub(crate) fn variation(records: &[ScaleRecord], moduli: usize, last: usize) -> Option<Vec<f64>> {
    let kept: Vec<&ScaleRecord> = records.iter().filter(|r| !r.excluded).collect();
    if kept.len() < last {
        return None;
    }
    let tail = &kept[kept.len() - last..];
    Some(
        (0..moduli)
            .map(|m| {
                let hi = tail.iter().map(|r| r.ratio_sup[m]).fold(0.0, f64::max);
                let lo = tail.iter().map(|r| r.ratio_sup[m]).fold(f64::INFINITY, f64::min);
                hi / lo
            })
            .collect(),
    )
}

pub(crate) fn scan_table(name: &str, moduli: &[ModulusFunction], records: &[ScaleRecord]) -> Table {
    let mut header: Vec<String> = ["k", "h", "pairs"].iter().map(|s| s.to_string()).collect();
    header.extend(moduli.iter().map(|m| format!("ratio_{}", m.label())));
    header.extend(["lipschitz_ratio", "max_increment", "max_estimate", "excluded"].iter().map(|s| s.to_string()));
    let mut t = Table { name: name.into(), header, rows: Vec::new() };
    for r in records {
        let mut row = vec![r.k.to_string(), num(r.h), r.pairs.to_string()];
        row.extend(r.ratio_sup.iter().map(|&v| num(v)));
        row.extend([num(r.lipschitz_sup), num(r.max_increment), num(r.max_estimate), r.excluded.to_string()]);
        t.push(row);
    }
    t
}

pub(crate) fn scan_criteria(
    report: &mut ExperimentReport,
    id: &str,
    moduli: &[ModulusFunction],
    records: &[ScaleRecord],
    last: usize,
    factor: f64,
) -> Option<Vec<f64>> {
    for r in records.iter().filter(|r| r.excluded) {
        report.warnings.push(format!(
            "{id}: scale k = {} dropped, quadrature estimate {:e} against increment {:e}",
            r.k, r.max_estimate, r.max_increment
        ));
    }
    match variation(records, moduli.len(), last) {
        Some(v) => {
            for (m, var) in moduli.iter().zip(&v) {
                report.check(Criterion::below(
                    &format!("{id}/{}", m.label()),
                    format!("max/min of the {} ratio over the last {last} scales", m.label()),
                    *var,
                    factor,
                ));
            }
            Some(v)
        }
        None => {
            report.check(Criterion::holds(
                &format!("{id}/scales"),
                format!("at least {last} uncontaminated scales"),
                false,
            ));
            None
        }
    }
}

pub(crate) fn run_modulus_scan(spec: &ScanSpec, ctx: &mut Ctx, report: &mut ExperimentReport) -> Result<()> {
    let c = spec.operator.coefficients()?;
    let frame = frame_for(&spec.curve, spec.n)?;
    let l = LayerPotentials::new(FundamentalSolution::new(&c)?, frame.clone())?;
    let mu = spec.density.build(&frame)?;
    let a = anchors(&frame, &mu, spec.anchors);
    let records = match spec.field {
        FieldKind::Double => scan_field(&frame, &a, spec.k_min..=spec.k_max, &spec.moduli, spec.contamination, ctx.exec, |x| {
            let r = l.grad_double_layer_detailed(&mu, x)?;
            Ok((r.value.to_vec(), r.estimate))
        })?,
        _ => scan_field(&frame, &a, spec.k_min..=spec.k_max, &spec.moduli, spec.contamination, ctx.exec, |x| {
            let r = l.grad_single_layer_detailed(&mu, x)?;
            Ok((r.value.to_vec(), r.estimate))
        })?,
    };
    let id = match spec.field {
        FieldKind::Double => "scan/grad_w",
        _ => "scan/grad_v",
    };
    let var = scan_criteria(report, id, &spec.moduli, &records, spec.last_scales, spec.factor);
    let kept: Vec<&ScaleRecord> = records.iter().filter(|r| !r.excluded).collect();
    let lipschitz_nondecreasing = kept.windows(2).all(|w| w[1].lipschitz_sup >= w[0].lipschitz_sup);
    let result = ScanResult {
        moduli: spec.moduli.iter().map(|m| m.label()).collect(),
        records: records.clone(),
        variation: var.unwrap_or_default(),
        lipschitz_nondecreasing,
    };
    report.summary = json!({
        "operator": spec.operator.label(),
        "curve": curve_label(&spec.curve),
        "density": spec.density.label(),
        "n": spec.n,
        "anchors": a.len(),
        "threshold_convention": format!("factor {} over the last {} scales", spec.factor, spec.last_scales),
        "scan": result,
    });
    report.tables.push(scan_table("modulus_scan", &spec.moduli, &records));
    Ok(())
}
