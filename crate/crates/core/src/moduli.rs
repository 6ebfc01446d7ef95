//! Moduli of continuity and sampled Hölder seminorms.
//!
//! The generalized Hölder constant of a function `f` with respect to a
//! modulus `ω` is `sup |f(x) − f(y)| / ω(|x − y|)` over distinct pairs. On a
//! finite sample that supremum is a maximum, computed here exactly over all
//! pairs.

use std::f64::consts::E;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exec::{self, Exec};
use crate::{Error, Result, C64};

/// `r₁ = e⁻¹`, where `ω₁` switches from `r|ln r|` to its constant tail.
pub const OMEGA1_KNEE: f64 = 1.0 / E;

/// Threshold below which `ω` at the smallest grid point counts as vanishing.
pub const LIMIT0_TOL: f64 = 1e-8;

/// `ω₁(r)`: `0` at the origin, `r|ln r|` on `]0, e⁻¹]`, `e⁻¹` beyond.
///
/// The two branches meet continuously at `e⁻¹`, so the `≤` used for the
/// branch test is immaterial there.
pub fn omega1_eval(r: f64) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain(format!("omega1 needs r >= 0, got {r}")));
    }
    Ok(omega1_unchecked(r))
}

#[inline]
fn omega1_unchecked(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else if r <= OMEGA1_KNEE {
        r * r.ln().abs()
    } else {
        OMEGA1_KNEE
    }
}

/// A modulus of continuity `ω : [0, ∞) → [0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusFunction {
    /// `r^α`. Admissible moduli need `α ∈ ]0, 1]`; see [`ModulusFunction::power`].
    Power { alpha: f64 },
    /// `ω₁`.
    Omega1,
    /// Monotone piecewise-linear interpolation of a table, linear from the
    /// origin to the first knot and constant after the last one.
    Tabulated { r: Vec<f64>, w: Vec<f64> },
}

impl ModulusFunction {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Argument(format!(
                "power modulus needs alpha in ]0,1], got {alpha}"
            )));
        }
        Ok(ModulusFunction::Power { alpha })
    }

    pub fn tabulated(r: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if r.is_empty() || r.len() != w.len() {
            return Err(Error::Argument("table needs equally many r and w knots".into()));
        }
        if r[0] <= 0.0 || w[0] <= 0.0 {
            return Err(Error::Argument("first knot must be positive".into()));
        }
        if r.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Argument("r knots must be strictly increasing".into()));
        }
        if w.windows(2).any(|p| p[1] < p[0]) {
            return Err(Error::Argument("w knots must be nondecreasing".into()));
        }
        Ok(ModulusFunction::Tabulated { r, w })
    }

    /// Evaluates `ω(r)` for `r ≥ 0`.
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ModulusFunction::Power { alpha } => {
                if *alpha == 1.0 {
                    r
                } else {
                    r.powf(*alpha)
                }
            }
            ModulusFunction::Omega1 => omega1_unchecked(r),
            ModulusFunction::Tabulated { r: rs, w } => {
                if r <= rs[0] {
                    return w[0] * r / rs[0];
                }
                match rs.binary_search_by(|k| k.total_cmp(&r)) {
                    Ok(i) => w[i],
                    Err(i) if i >= rs.len() => w[rs.len() - 1],
                    Err(i) => {
                        let s = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
                        w[i - 1] + s * (w[i] - w[i - 1])
                    }
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            ModulusFunction::Power { alpha } => format!("r^{alpha}"),
            ModulusFunction::Omega1 => "omega1".into(),
            ModulusFunction::Tabulated { r, .. } => format!("tabulated({} knots)", r.len()),
        }
    }
}

/// Outcome of [`check_modulus_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusAxiomReport {
    pub positive: bool,
    pub monotone: bool,
    pub limit0: bool,
    /// `max ω(a t) / (a ω(t))` over the grid × scale grid.
    pub homogeneity_sup: f64,
}

/// Samples the modulus axioms: positivity, monotonicity, vanishing at the
/// origin and the bounded quotient `ω(at)/(aω(t))` for `a ≥ 1`.
pub fn check_modulus_axioms(
    omega: &ModulusFunction,
    grid: &[f64],
    scale_grid: &[f64],
) -> Result<ModulusAxiomReport> {
    if grid.is_empty() || scale_grid.is_empty() {
        return Err(Error::Argument("grids must be nonempty".into()));
    }
    if grid.windows(2).any(|p| p[1] < p[0]) || scale_grid.windows(2).any(|p| p[1] < p[0]) {
        return Err(Error::Argument("grids must be sorted".into()));
    }
    if grid[0] <= 0.0 || scale_grid[0] < 1.0 {
        return Err(Error::Argument("grid must be positive and scales >= 1".into()));
    }
    let values: Vec<f64> = grid.iter().map(|&t| omega.eval(t)).collect();
    let positive = values.iter().all(|&v| v > 0.0);
    let monotone = values.windows(2).all(|p| p[1] >= p[0]);
    let limit0 = values[0] < LIMIT0_TOL;
    let mut homogeneity_sup = 0.0_f64;
    for (&t, &wt) in grid.iter().zip(&values) {
        for &a in scale_grid {
            homogeneity_sup = homogeneity_sup.max(omega.eval(a * t) / (a * wt));
        }
    }
    Ok(ModulusAxiomReport {
        positive,
        monotone,
        limit0,
        homogeneity_sup,
    })
}

/// Where a sampled function lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleDomain {
    Boundary,
    ClosedRegion,
}

/// Complex values at pairwise distinct points of ℝ² or ℝ³.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    dim: usize,
    points: Vec<[f64; 3]>,
    values: Vec<C64>,
    pub domain: SampleDomain,
}

impl SampledFunction {
    /// Builds a sample from 2D or 3D points. Points must be pairwise distinct
    /// and values finite.
    pub fn new(points: Vec<Vec<f64>>, values: Vec<C64>, domain: SampleDomain) -> Result<Self> {
        let dim = points.first().map_or(2, Vec::len);
        if !(dim == 2 || dim == 3) || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Argument("points must all be 2D or all 3D".into()));
        }
        let padded = points
            .iter()
            .map(|p| [p[0], p[1], if dim == 3 { p[2] } else { 0.0 }])
            .collect();
        Self::from_padded(dim, padded, values, domain)
    }

    pub fn from_points2(points: &[[f64; 2]], values: Vec<C64>, domain: SampleDomain) -> Result<Self> {
        let padded = points.iter().map(|p| [p[0], p[1], 0.0]).collect();
        Self::from_padded(2, padded, values, domain)
    }

    fn from_padded(
        dim: usize,
        points: Vec<[f64; 3]>,
        values: Vec<C64>,
        domain: SampleDomain,
    ) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Argument(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Argument("values must be finite".into()));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Argument("coordinates must be finite".into()));
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (points[a], points[b]);
            p[0].total_cmp(&q[0])
                .then(p[1].total_cmp(&q[1]))
                .then(p[2].total_cmp(&q[2]))
        });
        if order.windows(2).any(|w| points[w[0]] == points[w[1]]) {
            return Err(Error::Argument("sample points must be pairwise distinct".into()));
        }
        Ok(SampledFunction {
            dim,
            points,
            values,
            domain,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn point(&self, i: usize) -> [f64; 3] {
        self.points[i]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (p, q) = (self.points[i], self.points[j]);
        let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Same points, new values.
    pub fn with_values(&self, values: Vec<C64>) -> Result<Self> {
        Self::from_padded(self.dim, self.points.clone(), values, self.domain)
    }

    /// Reads columns `x1,x2[,x3],re,im` with a header row.
    pub fn read_csv(path: impl AsRef<Path>, domain: SampleDomain) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        let dim = match headers.len() {
            4 => 2,
            5 => 3,
            n => return Err(Error::Argument(format!("expected 4 or 5 columns, got {n}"))),
        };
        let mut points = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record?;
            let nums: Vec<f64> = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Argument(format!("bad number in csv: {e}")))?;
            points.push(nums[..dim].to_vec());
            values.push(C64::new(nums[dim], nums[dim + 1]));
        }
        let _ = dim;
        Self::new(points, values, domain)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        if self.dim == 2 {
            w.write_record(["x1", "x2", "re", "im"])?;
        } else {
            w.write_record(["x1", "x2", "x3", "re", "im"])?;
        }
        for (p, v) in self.points.iter().zip(&self.values) {
            let mut row: Vec<String> = p[..self.dim].iter().map(|c| format!("{c:e}")).collect();
            row.push(format!("{:e}", v.re));
            row.push(format!("{:e}", v.im));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact sampled Hölder constant with the pair that attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub seminorm: f64,
    pub sup_norm: f64,
    pub pair: [usize; 2],
    pub modulus: ModulusFunction,
}

impl HolderEstimate {
    /// `sup|f| + |f|_ω`.
    pub fn norm(&self) -> f64 {
        self.sup_norm + self.seminorm
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimate serializes")
    }
}

fn check_pairs(f: &SampledFunction) -> Result<()> {
    if f.len() < 2 {
        return Err(Error::Argument("Hölder seminorm needs at least two points".into()));
    }
    Ok(())
}

/// Row-wise maxima of `ratio(i, j)` over `j > i`, reduced in index order so
/// the reported pair does not depend on the execution policy.
fn pair_scan<F>(n: usize, exec: Exec, ratio: F) -> (f64, [usize; 2])
where
    F: Fn(usize, usize) -> Option<f64> + Sync + Send,
{
    let rows = exec::map_indexed(exec, n, |i| {
        let mut best = (f64::NEG_INFINITY, [i, i]);
        for j in (i + 1)..n {
            if let Some(q) = ratio(i, j) {
                if q > best.0 {
                    best = (q, [i, j]);
                }
            }
        }
        best
    });
    rows.into_iter()
        .fold((f64::NEG_INFINITY, [0, 0]), |acc, row| if row.0 > acc.0 { row } else { acc })
}

/// `|f : 𝔻|_ω` over all sampled pairs.
pub fn holder_seminorm(f: &SampledFunction, omega: &ModulusFunction) -> Result<HolderEstimate> {
    holder_seminorm_with(f, omega, Exec::default())
}

pub fn holder_seminorm_with(
    f: &SampledFunction,
    omega: &ModulusFunction,
    exec: Exec,
) -> Result<HolderEstimate> {
    check_pairs(f)?;
    let (seminorm, pair) = pair_scan(f.len(), exec, |i, j| {
        Some((f.values[i] - f.values[j]).norm() / omega.eval(f.distance(i, j)))
    });
    Ok(HolderEstimate {
        seminorm,
        sup_norm: f.sup_norm(),
        pair,
        modulus: omega.clone(),
    })
}

/// Both sides of the far-pair bound
/// `sup_{|x−y| ≥ a} |f(x) − f(y)|/ω(|x−y|) ≤ (2/ω(a)) sup|f|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Remark21 {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Relative slack for the `lhs ≤ rhs` comparison; the equality case can
/// differ by a rounding in the last place.
const REMARK21_SLACK: f64 = 8.0 * f64::EPSILON;

pub fn remark21_check(f: &SampledFunction, a: f64, omega: &ModulusFunction) -> Result<Remark21> {
    if !(a > 0.0) {
        return Err(Error::Argument(format!("separation threshold must be positive, got {a}")));
    }
    check_pairs(f)?;
    let (lhs, _) = pair_scan(f.len(), Exec::default(), |i, j| {
        let d = f.distance(i, j);
        (d >= a).then(|| (f.values[i] - f.values[j]).norm() / omega.eval(d))
    });
    if lhs == f64::NEG_INFINITY {
        return Err(Error::Argument(format!("no sampled pair is at least {a} apart")));
    }
    let rhs = 2.0 / omega.eval(a) * f.sup_norm();
    Ok(Remark21 {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + REMARK21_SLACK),
    })
}

/// Discrete `C^{1,ω}` norm: `sup|f| + sup|∇f| + Σ_k |∂_k f|_ω`, with the
/// gradient supplied componentwise on the same points as `field`.
pub fn discrete_c1_omega_norm(
    field: &SampledFunction,
    gradient: &[SampledFunction],
    omega: &ModulusFunction,
) -> Result<f64> {
    if gradient.len() != field.dim() {
        return Err(Error::Argument(format!(
            "expected {} gradient components, got {}",
            field.dim(),
            gradient.len()
        )));
    }
    if gradient.iter().any(|g| g.points != field.points) {
        return Err(Error::Argument("gradient samples are not on the field grid".into()));
    }
    let sup_grad = (0..field.len())
        .map(|i| gradient.iter().map(|g| g.values[i].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut total = field.sup_norm() + sup_grad;
    for g in gradient {
        total += holder_seminorm(g, omega)?.seminorm;
    }
    Ok(total)
}

/// The `C^{0,1} ⊆ C^{0,ω₁}` embedding made concrete on a sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingBound {
    pub lipschitz: f64,
    pub omega1_seminorm: f64,
    /// `max(L · max_{r ≤ e⁻¹} r/ω₁(r), 2e · sup|f|)` over sampled separations.
    pub bound: f64,
}

pub fn omega1_embedding_bound(f: &SampledFunction) -> Result<EmbeddingBound> {
    let lip = holder_seminorm(f, &ModulusFunction::Power { alpha: 1.0 })?.seminorm;
    let om = holder_seminorm(f, &ModulusFunction::Omega1)?.seminorm;
    let (near_factor, _) = pair_scan(f.len(), Exec::default(), |i, j| {
        let r = f.distance(i, j);
        (r <= OMEGA1_KNEE).then(|| r / omega1_unchecked(r))
    });
    let near = if near_factor.is_finite() { lip * near_factor } else { 0.0 };
    let far = 2.0 * f.sup_norm() / OMEGA1_KNEE;
    Ok(EmbeddingBound {
        lipschitz: lip,
        omega1_seminorm: om,
        bound: near.max(far),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn real(points: &[[f64; 2]], f: impl Fn([f64; 2]) -> f64) -> SampledFunction {
        let vals = points.iter().map(|&p| C64::new(f(p), 0.0)).collect();
        SampledFunction::from_points2(points, vals, SampleDomain::ClosedRegion).unwrap()
    }

    fn unit_grid(m: usize) -> Vec<[f64; 2]> {
        let mut pts = Vec::new();
        for i in 0..m {
            for j in 0..m {
                pts.push([i as f64 / (m - 1) as f64, j as f64 / (m - 1) as f64]);
            }
        }
        pts
    }

    #[test]
    fn omega1_values() {
        assert_eq!(omega1_eval(0.0).unwrap(), 0.0);
        assert_relative_eq!(omega1_eval(OMEGA1_KNEE).unwrap(), OMEGA1_KNEE, max_relative = 1e-15);
        assert_eq!(omega1_eval(10.0).unwrap(), OMEGA1_KNEE);
        assert_relative_eq!(omega1_eval(0.1).unwrap(), 0.230_258_509_299_404_56, max_relative = 1e-15);
        assert!(matches!(omega1_eval(-1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn omega1_is_concave_on_its_log_branch() {
        let n = 4000;
        let grid: Vec<f64> = (1..=n).map(|i| OMEGA1_KNEE * i as f64 / n as f64).collect();
        for w in grid.windows(3) {
            let mid = omega1_eval(w[1]).unwrap();
            let chord = 0.5 * (omega1_eval(w[0]).unwrap() + omega1_eval(w[2]).unwrap());
            assert!(mid >= chord - 1e-15, "concavity fails at {}", w[1]);
        }
    }

    #[test]
    fn axioms_for_omega1_linear_and_square() {
        let grid: Vec<f64> = (0..=120).map(|k| 10f64.powf(-12.0 + k as f64 * 0.1)).collect();
        let scales: Vec<f64> = (0..=40).map(|k| 10f64.powf(k as f64 * 0.1)).collect();

        let r = check_modulus_axioms(&ModulusFunction::Omega1, &grid, &scales).unwrap();
        assert!(r.monotone && r.positive && r.limit0);
        assert!(r.homogeneity_sup <= 1.0 + 1e-12, "{}", r.homogeneity_sup);

        let lin = ModulusFunction::power(1.0).unwrap();
        let r = check_modulus_axioms(&lin, &grid, &scales).unwrap();
        assert_relative_eq!(r.homogeneity_sup, 1.0, max_relative = 1e-14);

        let sq = ModulusFunction::Power { alpha: 2.0 };
        let r = check_modulus_axioms(&sq, &grid, &scales).unwrap();
        assert!(r.monotone);
        assert_relative_eq!(r.homogeneity_sup, 1e4, max_relative = 1e-10);
        let short: Vec<f64> = scales[..21].to_vec();
        let r2 = check_modulus_axioms(&sq, &grid, &short).unwrap();
        assert!(r.homogeneity_sup > 10.0 * r2.homogeneity_sup);
    }

    #[test]
    fn axiom_check_rejects_bad_grids() {
        let m = ModulusFunction::Omega1;
        assert!(check_modulus_axioms(&m, &[], &[1.0]).is_err());
        assert!(check_modulus_axioms(&m, &[0.2, 0.1], &[1.0]).is_err());
        assert!(check_modulus_axioms(&m, &[0.1], &[0.5]).is_err());
    }

    #[test]
    fn power_constructor_validates_exponent() {
        assert!(ModulusFunction::power(0.0).is_err());
        assert!(ModulusFunction::power(1.5).is_err());
        assert!(ModulusFunction::power(0.5).is_ok());
    }

    #[test]
    fn tabulated_interpolates_monotonically() {
        let m = ModulusFunction::tabulated(vec![0.1, 0.2, 1.0], vec![0.5, 0.6, 1.0]).unwrap();
        assert_relative_eq!(m.eval(0.05), 0.25);
        assert_relative_eq!(m.eval(0.15), 0.55);
        assert_eq!(m.eval(5.0), 1.0);
        assert_eq!(m.eval(0.0), 0.0);
        assert!(ModulusFunction::tabulated(vec![0.2, 0.1], vec![1.0, 2.0]).is_err());
        assert!(ModulusFunction::tabulated(vec![0.1, 0.2], vec![2.0, 1.0]).is_err());
    }

    #[test]
    fn seminorm_of_constant_is_zero() {
        let f = real(&unit_grid(6), |_| 3.5);
        let est = holder_seminorm(&f, &ModulusFunction::Omega1).unwrap();
        assert_eq!(est.seminorm, 0.0);
        assert_eq!(est.norm(), 3.5);
    }

    #[test]
    fn seminorm_of_coordinate() {
        let f = real(&unit_grid(5), |p| p[0]);
        let est = holder_seminorm(&f, &ModulusFunction::power(1.0).unwrap()).unwrap();
        assert_relative_eq!(est.seminorm, 1.0, max_relative = 1e-15);
        let [i, j] = est.pair;
        assert_eq!(f.point(i)[1], f.point(j)[1], "argmax pair is axis aligned");

        let scattered = [[0.0, 0.0], [0.3, 0.4], [0.9, 0.1], [0.2, 0.8]];
        let g = real(&scattered, |p| p[0]);
        let est = holder_seminorm(&g, &ModulusFunction::power(1.0).unwrap()).unwrap();
        assert!(est.seminorm <= 1.0);
    }

    #[test]
    fn seminorm_omega1_at_e_minus_two() {
        let t = (-2.0f64).exp();
        let f = real(&[[0.0, 0.0], [t, 0.0]], |p| p[0]);
        let est = holder_seminorm(&f, &ModulusFunction::Omega1).unwrap();
        // ω₁(t) = t·|ln t| = 2t
        assert_relative_eq!(est.seminorm, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn seminorm_needs_two_points() {
        let f = real(&[[0.0, 0.0]], |_| 1.0);
        assert!(matches!(
            holder_seminorm(&f, &ModulusFunction::Omega1),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn duplicate_points_rejected() {
        let r = SampledFunction::from_points2(
            &[[0.0, 0.0], [0.0, 0.0]],
            vec![C64::new(0.0, 0.0); 2],
            SampleDomain::Boundary,
        );
        assert!(r.is_err());
        let r = SampledFunction::from_points2(
            &[[0.0, 0.0], [1.0, 0.0]],
            vec![C64::new(f64::NAN, 0.0), C64::new(0.0, 0.0)],
            SampleDomain::Boundary,
        );
        assert!(r.is_err());
    }

    #[test]
    fn remark21_cases() {
        let m = ModulusFunction::Omega1;
        let a = 0.2;
        let f = real(&[[0.0, 0.0], [a, 0.0]], |p| if p[0] == 0.0 { 4.0 } else { -4.0 });
        let r = remark21_check(&f, a, &m).unwrap();
        assert_relative_eq!(r.lhs, r.rhs, max_relative = 1e-15);
        assert!(r.holds);

        let z = real(&unit_grid(4), |_| 0.0);
        let r = remark21_check(&z, 0.5, &m).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds);

        assert!(remark21_check(&z, 10.0, &m).is_err());
    }

    #[test]
    fn c1_norm_examples() {
        let pts = unit_grid(7);
        let omega = ModulusFunction::Omega1;
        let c = real(&pts, |_| -2.0);
        let zero = real(&pts, |_| 0.0);
        let n = discrete_c1_omega_norm(&c, &[zero.clone(), zero.clone()], &omega).unwrap();
        assert_relative_eq!(n, 2.0);

        let f = real(&pts, |p| p[0]);
        let one = real(&pts, |_| 1.0);
        let n = discrete_c1_omega_norm(&f, &[one, zero.clone()], &omega).unwrap();
        assert_relative_eq!(n, 2.0);

        let q = real(&pts, |p| 0.5 * (p[0] * p[0] + p[1] * p[1]));
        let g1 = real(&pts, |p| p[0]);
        let g2 = real(&pts, |p| p[1]);
        let lip = ModulusFunction::power(1.0).unwrap();
        assert_relative_eq!(holder_seminorm(&g1, &lip).unwrap().seminorm, 1.0);
        let n = discrete_c1_omega_norm(&q, &[g1.clone(), g2.clone()], &lip).unwrap();
        assert_relative_eq!(n, 1.0 + 2f64.sqrt() + 2.0, max_relative = 1e-14);

        let shifted = real(&unit_grid(6), |p| p[0]);
        assert!(discrete_c1_omega_norm(&q, &[shifted, g2.clone()], &lip).is_err());
        assert!(discrete_c1_omega_norm(&q, &[g1], &lip).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let f = SampledFunction::new(
            vec![vec![0.0, 1.0, 2.0], vec![0.5, -1.0, 0.25]],
            vec![C64::new(1.0, -2.0), C64::new(0.125, 3.0)],
            SampleDomain::ClosedRegion,
        )
        .unwrap();
        f.write_csv(&path).unwrap();
        let back = SampledFunction::read_csv(&path, SampleDomain::ClosedRegion).unwrap();
        assert_eq!(back, f);

        let est = holder_seminorm(&f, &ModulusFunction::Omega1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&est.to_json()).unwrap();
        assert_eq!(v["pair"], serde_json::json!([0, 1]));
        assert_eq!(v["modulus"]["kind"], "omega1");
        assert!(v["seminorm"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn sequential_and_parallel_scans_agree() {
        let pts: Vec<[f64; 2]> = (0..300)
            .map(|i| {
                let t = i as f64 * 0.37;
                [t.sin() * (1.0 + 0.01 * i as f64), t.cos()]
            })
            .collect();
        let f = real(&pts, |p| (3.0 * p[0]).sin() * p[1]);
        let a = holder_seminorm_with(&f, &ModulusFunction::Omega1, Exec::Sequential).unwrap();
        let b = holder_seminorm_with(&f, &ModulusFunction::Omega1, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    fn sample_strategy() -> impl Strategy<Value = (Vec<[f64; 2]>, Vec<f64>)> {
        (3usize..40).prop_flat_map(|n| {
            (
                proptest::collection::vec([-2.0f64..2.0, -2.0f64..2.0], n),
                proptest::collection::vec(-5.0f64..5.0, n),
            )
        })
    }

    fn build(points: &[[f64; 2]], vals: &[f64]) -> Option<SampledFunction> {
        let v = vals.iter().map(|&x| C64::new(x, 0.5 * x)).collect();
        SampledFunction::from_points2(points, v, SampleDomain::ClosedRegion).ok()
    }

    proptest! {
        #[test]
        fn refinement_never_decreases_seminorm((pts, vals) in sample_strategy(), extra in [-2.0f64..2.0, -2.0f64..2.0], ev in -5.0f64..5.0) {
            let Some(f) = build(&pts, &vals) else { return Ok(()); };
            let mut p2 = pts.clone();
            p2.push(extra);
            let mut v2 = vals.clone();
            v2.push(ev);
            let Some(g) = build(&p2, &v2) else { return Ok(()); };
            for m in [ModulusFunction::Omega1, ModulusFunction::Power { alpha: 0.5 }] {
                let a = holder_seminorm(&f, &m).unwrap().seminorm;
                let b = holder_seminorm(&g, &m).unwrap().seminorm;
                prop_assert!(b >= a);
            }
        }

        #[test]
        fn remark21_always_holds((pts, vals) in sample_strategy(), frac in 0.01f64..1.0) {
            let Some(f) = build(&pts, &vals) else { return Ok(()); };
            let dmax = (0..f.len()).flat_map(|i| (0..f.len()).map(move |j| (i, j)))
                .map(|(i, j)| f.distance(i, j)).fold(0.0, f64::max);
            let r = remark21_check(&f, frac * dmax, &ModulusFunction::Omega1).unwrap();
            prop_assert!(r.holds, "{:?}", r);
        }

        #[test]
        fn embedding_chain_bound_holds((pts, vals) in sample_strategy()) {
            let Some(f) = build(&pts, &vals) else { return Ok(()); };
            let e = omega1_embedding_bound(&f).unwrap();
            prop_assert!(e.omega1_seminorm <= e.bound * (1.0 + 1e-12), "{:?}", e);
        }
    }
}
