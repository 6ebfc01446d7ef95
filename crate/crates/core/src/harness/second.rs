use serde_json::json;

use super::config::{curve_label, frame_for, SecondDerivativeSpec};
use super::identities::scaled_points;
use super::scan::{anchors, scan_criteria, scan_field, scan_table};
use super::{num, Criterion, Ctx, ExperimentReport, Table};
use crate::exec::try_map_indexed;
use crate::geometry::classify_point;
use crate::kernels::FundamentalSolution;
use crate::moduli::ModulusFunction;
use crate::potentials::{LayerPotentials, ReductionDensities};
use crate::{Error, Point2, Result, C64};

type Hessian = [[C64; 2]; 2];

/// `H[j][k] = ∂_k ∂_j v[μ]` from the reduced first derivative, with the
/// largest quadrature estimate involved.
fn reduced_hessian(l: &LayerPotentials, d: &ReductionDensities, x: Point2, drift: bool) -> Result<(Hessian, f64)> {
    let mut h = [[C64::default(); 2]; 2];
    let mut est: f64 = 0.0;
    for j in 0..2 {
        let p = l.grad_single_layer_detailed(&d.psi[j], x)?;
        let (w, ew) = l.grad_double_layer_reduced_detailed(&d.phi[j], x)?;
        est = est.max(p.estimate).max(ew);
        for k in 0..2 {
            h[j][k] = p.value[k] - w[k];
        }
        if drift {
            let c = l.grad_single_layer_detailed(&d.chi[j], x)?;
            est = est.max(c.estimate);
            for k in 0..2 {
                h[j][k] -= c.value[k];
            }
        }
    }
    Ok((h, est))
}

/// Fourth order central differences of the direct gradient, with one
/// quadrature rule for every stencil point.
fn fd_hessian(l: &LayerPotentials, mu: &crate::geometry::BoundaryDensity, x: Point2, step: f64) -> Result<Hessian> {
    let pinned = l.pinned_at(x)?;
    let mut h = [[C64::default(); 2]; 2];
    for k in 0..2 {
        let at = |t: f64| {
            let mut y = x;
            y[k] += t * step;
            pinned.grad_single_layer_direct(mu, y)
        };
        let (m2, m1, p1, p2) = (at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?);
        for j in 0..2 {
            h[j][k] = (m2[j] - 8.0 * m1[j] + 8.0 * p1[j] - p2[j]) / (12.0 * step);
        }
    }
    Ok(h)
}

fn max_entry(h: &Hessian) -> f64 {
    h.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
}

pub(crate) fn run_second_derivative_probe(
    spec: &SecondDerivativeSpec,
    ctx: &mut Ctx,
    report: &mut ExperimentReport,
) -> Result<()> {
    let c = spec.operator.coefficients()?;
    let drift = c.a1_planar().iter().any(|z| z.re != 0.0);
    let l = LayerPotentials::new(FundamentalSolution::new(&c)?, frame_for(&spec.curve, spec.n)?)?;
    let mu = spec.density.build(l.frame())?;
    let d = l.reduction_densities(&mu)?;
    let curve = l.frame().curve().clone();
    let pts = scaled_points(&curve, 0.3, spec.inner_scale, spec.points, &mut ctx.rng);
    let rows = try_map_indexed(ctx.exec, pts.len(), |i| {
        let x = pts[i];
        let dist = classify_point(l.frame(), x).distance;
        let step = (0.1 * dist).min(1e-2);
        let fd = fd_hessian(&l, &mu, x, step)?;
        let (red, _) = reduced_hessian(&l, &d, x, drift)?;
        let scale = max_entry(&red).max(1.0);
        let mut defect: f64 = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                defect = defect.max((fd[j][k] - red[j][k]).norm() / scale);
            }
        }
        let symmetry = (red[0][1] - red[1][0]).norm() / scale;
        Ok::<_, Error>((defect, symmetry, step, red))
    })?;
    let mut table = Table::new(
        "second_derivative",
        &["x1", "x2", "step", "h11", "h12", "h21", "h22", "defect", "asymmetry"],
    );
    let (mut worst, mut asym) = (0.0f64, 0.0f64);
    for (x, (defect, symmetry, step, h)) in pts.iter().zip(&rows) {
        worst = worst.max(*defect);
        asym = asym.max(*symmetry);
        table.push(vec![
            num(x[0]),
            num(x[1]),
            num(*step),
            num(h[0][0].re),
            num(h[0][1].re),
            num(h[1][0].re),
            num(h[1][1].re),
            num(*defect),
            num(*symmetry),
        ]);
    }
    report.check(Criterion::below(
        "second/two_routes",
        "relative gap between differenced and reduced second derivatives",
        worst,
        spec.tolerance,
    ));
    report.check(Criterion::below(
        "second/symmetry",
        "relative asymmetry of the reduced second derivatives",
        asym,
        spec.symmetry_tolerance,
    ));

    // modulus scan of the second derivatives for a C^{1,1} density
    let sl = LayerPotentials::new(FundamentalSolution::new(&c)?, frame_for(&spec.scan_curve, spec.scan_n)?)?;
    let smu = spec.scan_density.build(sl.frame())?;
    let sd = sl.reduction_densities(&smu)?;
    let a = anchors(sl.frame(), &smu, spec.anchors);
    let moduli = [ModulusFunction::Omega1];
    let records = scan_field(sl.frame(), &a, spec.k_min..=spec.k_max, &moduli, 0.1, ctx.exec, |x| {
        let (h, est) = reduced_hessian(&sl, &sd, x, drift)?;
        Ok((h.iter().flatten().copied().collect(), est))
    })?;
    let var = scan_criteria(report, "second/scan", &moduli, &records, spec.last_scales, spec.factor);

    report.summary = json!({
        "operator": spec.operator.label(),
        "curve": curve_label(&spec.curve),
        "density": spec.density.label(),
        "n": spec.n,
        "max_defect": worst,
        "max_asymmetry": asym,
        "scan": {
            "curve": curve_label(&spec.scan_curve),
            "density": spec.scan_density.label(),
            "n": spec.scan_n,
            "records": records,
            "variation": var.unwrap_or_default(),
        },
    });
    report.tables.push(table);
    report.tables.push(scan_table("second_scan", &moduli, &records));
    Ok(())
}
