use std::sync::Arc;

use rand::RngExt;
use serde_json::json;

use super::config::{curve_label, frame_for, KernelSuiteSpec, Remark21Spec};
use super::{num, Criterion, Ctx, ExperimentReport, Table};
use crate::exec::try_map_indexed;
use crate::kernels::{homogeneity_parity_check, kernel_class_norm, HomogeneousKernel, Parity};
use crate::kernels::{gradient_remainder, principal_gradient_row, FundamentalSolution};
use crate::moduli::{holder_seminorm_with, remark21_check, ModulusFunction, SampleDomain, SampledFunction};
use crate::operators::factorize;
use crate::quadrature::boundary_integral;
use crate::{Error, Point2, Result, C64};

fn ladder_growth(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(0.0, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

pub(crate) fn run_kernel_suite(spec: &KernelSuiteSpec, ctx: &mut Ctx, report: &mut ExperimentReport) -> Result<()> {
    let scales: Vec<f64> = (0..=12).map(|k| 1e-3 * 1e6f64.powf(k as f64 / 12.0)).collect();

    // principal gradient rows J_j: odd, homogeneous of degree −1
    let mut parity = Table::new("kernel_parity", &["operator", "j", "homogeneity_defect", "parity_defect", "sphere_mean"]);
    let mut worst = [0.0f64; 2];
    for op in &spec.operators {
        let fac = factorize(&op.coefficients()?)?;
        for j in 0..2 {
            let f = fac.clone();
            let k = HomogeneousKernel {
                degree: -1.0,
                parity: Parity::Odd,
                value: Arc::new(move |x: Point2| principal_gradient_row(&f, &x).map(|r| r[j]).unwrap_or(f64::NAN)),
            };
            let r = homogeneity_parity_check(&k, spec.directions, &scales)?;
            worst = [worst[0].max(r.homogeneity_defect), worst[1].max(r.parity_defect)];
            parity.push(vec![
                op.label(),
                j.to_string(),
                num(r.homogeneity_defect),
                num(r.parity_defect),
                num(r.sphere_mean),
            ]);
        }
    }
    report.check(Criterion::below("kernels/parity", "oddness defect of J_j", worst[1], spec.parity_tolerance));
    report.check(Criterion::below(
        "kernels/homogeneity",
        "degree −1 homogeneity defect of J_j",
        worst[0],
        spec.parity_tolerance,
    ));

    // Yukawa gradient remainder along dyadic rays
    let fs = FundamentalSolution::yukawa(2, spec.yukawa_k)?;
    let dir = [0.6f64.cos(), 0.6f64.sin()];
    let mut decay = Table::new("yukawa_remainder", &["j", "radius", "remainder"]);
    let mut values = Vec::new();
    for j in 0..=spec.max_ray {
        let r = 0.5f64.powi(j as i32);
        let g = gradient_remainder(&fs, &[r * dir[0], r * dir[1]])?;
        let v = g.iter().map(|c| c * c).sum::<f64>().sqrt();
        decay.push(vec![j.to_string(), num(r), num(v)]);
        values.push(v);
    }
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let last = *values.last().expect("at least one ray");
    report.check(Criterion::holds("kernels/remainder_decreasing", "yukawa k_row decreasing along the rays", decreasing));
    report.check(Criterion::below("kernels/remainder_limit", "yukawa k_row at the innermost ray", last, spec.remainder_limit));

    // kernel class norm of J_1 on boundary samples of growing size
    let j1 = {
        let fac = factorize(&spec.operators[0].coefficients()?)?;
        move |x: Point2, y: Point2| {
            C64::new(principal_gradient_row(&fac, &crate::sub2(x, y)).map(|r| r[0]).unwrap_or(f64::NAN), 0.0)
        }
    };
    let mut class = Table::new("kernel_class", &["n", "term1", "term2", "total"]);
    let mut totals = Vec::new();
    for &n in &spec.class_ladder {
        let frame = frame_for(&spec.extension_curve, n)?;
        let pts = frame.points();
        let e = kernel_class_norm(&j1, pts, pts, [1.0, 2.0, 1.0], ctx.exec)?;
        class.push(vec![n.to_string(), num(e.term1), num(e.term2), num(e.total())]);
        totals.push(e.total());
    }
    let class_growth = ladder_growth(&totals);
    report.check(Criterion::below(
        "kernels/class_norm_growth",
        "max/min of the sampled class norm of J_1 across the ladder",
        class_growth,
        spec.growth_factor,
    ));

    // ω₁ seminorm of K[J_1, μ] near the boundary, point grid refined with n
    let mut ext = Table::new("extension_seminorm", &["n", "points", "omega1_seminorm", "sup_norm"]);
    let mut seminorms = Vec::new();
    let fac = factorize(&spec.operators[0].coefficients()?)?;
    let kernel = move |x: Point2, y: Point2, _: Point2| {
        [principal_gradient_row(&fac, &crate::sub2(x, y)).map(|r| r[0]).unwrap_or(f64::NAN)]
    };
    for &n in &spec.extension_ladder {
        let frame = frame_for(&spec.extension_curve, n)?;
        let mu = spec.extension_density.build(&frame)?;
        let cfg = crate::quadrature::QuadratureConfig::default();
        let mut pts = Vec::with_capacity(2 * n);
        for i in 0..n {
            let p = frame.points()[i];
            let nu = frame.normals()[i];
            let delta = 0.25 * frame.weights()[i];
            for m in [1.0, 2.0] {
                pts.push([p[0] - m * delta * nu[0], p[1] - m * delta * nu[1]]);
            }
        }
        let vals = try_map_indexed(ctx.exec, pts.len(), |i| {
            Ok::<_, Error>(boundary_integral(&frame, &mu, pts[i], &kernel, &cfg)?.value[0])
        })?;
        let f = SampledFunction::from_points2(&pts, vals, SampleDomain::ClosedRegion)?;
        let est = holder_seminorm_with(&f, &ModulusFunction::Omega1, ctx.exec)?;
        ext.push(vec![n.to_string(), pts.len().to_string(), num(est.seminorm), num(est.sup_norm)]);
        seminorms.push(est.seminorm);
    }
    let ext_growth = ladder_growth(&seminorms);
    report.check(Criterion::below(
        "kernels/extension_seminorm_growth",
        format!(
            "max/min of the ω₁ seminorm of K[J_1, μ] on {} with {} across the ladder",
            curve_label(&spec.extension_curve),
            spec.extension_density.label()
        ),
        ext_growth,
        spec.growth_factor,
    ));

    report.summary = json!({
        "parity_defect": worst[1],
        "homogeneity_defect": worst[0],
        "yukawa_k": spec.yukawa_k,
        "remainder": values,
        "class_norm": { "ladder": spec.class_ladder, "totals": totals, "label": "estimate (lower bound)" },
        "extension_seminorm": { "ladder": spec.extension_ladder, "omega1": seminorms },
    });
    report.tables.extend([parity, decay, class, ext]);
    Ok(())
}

pub(crate) fn remark21(spec: &Remark21Spec, ctx: &mut Ctx, report: &mut ExperimentReport) -> Result<()> {
    let mut violations = 0usize;
    let mut table = Table::new("remark21", &["trial", "points", "modulus", "a", "lhs", "rhs", "holds"]);
    let mut tightest: f64 = 0.0;
    for trial in 0..spec.trials {
        let count = ctx.rng.random_range(spec.min_points..=spec.max_points);
        let pts: Vec<Point2> = (0..count).map(|_| [ctx.rng.random_range(0.0..1.0), ctx.rng.random_range(0.0..1.0)]).collect();
        let vals: Vec<C64> = (0..count)
            .map(|_| C64::new(ctx.rng.random_range(-1.0..1.0), ctx.rng.random_range(-1.0..1.0)))
            .collect();
        let omega = if ctx.rng.random_range(0.0..1.0) < 0.5 {
            ModulusFunction::Omega1
        } else {
            ModulusFunction::power(ctx.rng.random_range(0.05..1.0))?
        };
        let f = SampledFunction::from_points2(&pts, vals, SampleDomain::ClosedRegion)?;
        let mut dmax: f64 = 0.0;
        for i in 0..f.len() {
            for j in (i + 1)..f.len() {
                dmax = dmax.max(f.distance(i, j));
            }
        }
        let a = dmax * ctx.rng.random_range(0.05..1.0);
        let r = remark21_check(&f, a, &omega)?;
        if !r.holds {
            violations += 1;
        }
        tightest = tightest.max(r.lhs / r.rhs);
        table.push(vec![
            trial.to_string(),
            count.to_string(),
            omega.label(),
            num(a),
            num(r.lhs),
            num(r.rhs),
            r.holds.to_string(),
        ]);
    }
    report.check(Criterion::below(
        "remark21/violations",
        format!("far-pair bound violations over {} random samples", spec.trials),
        violations as f64,
        1.0,
    ));
    report.summary = json!({ "trials": spec.trials, "violations": violations, "max_lhs_over_rhs": tightest });
    report.tables.push(table);
    Ok(())
}
