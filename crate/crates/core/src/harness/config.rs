//! Versioned JSON experiment configuration.
//!
//! A config file holds a suite:
//!
//! ```json
//! { "version": 1, "seed": 7, "experiments": [ { "name": "...", "spec": { "kind": "identities", ... } } ] }
//! ```
//!
//! Every spec field has a default, so `{ "kind": "gauss" }` is a complete
//! experiment.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{make_curve, BoundaryDensity, BoundaryFrame, CurveSpec};
use crate::moduli::ModulusFunction;
use crate::operators::OperatorCoefficients;
use crate::potentials::FieldKind;
use crate::{Error, Result, C64};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    pub experiments: Vec<Experiment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub name: String,
    pub spec: ExperimentSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentSpec {
    Gauss(GaussSpec),
    LogPotential(LogPotentialSpec),
    Identities(IdentitySpec),
    Exterior(ExteriorSpec),
    Tangential(TangentialSpec),
    PdeResidual(PdeSpec),
    Kernels(KernelSuiteSpec),
    Remark21(Remark21Spec),
    ModulusScan(ScanSpec),
    SecondDerivative(SecondDerivativeSpec),
}

impl ExperimentSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentSpec::Gauss(_) => "gauss",
            ExperimentSpec::LogPotential(_) => "log_potential",
            ExperimentSpec::Identities(_) => "identities",
            ExperimentSpec::Exterior(_) => "exterior",
            ExperimentSpec::Tangential(_) => "tangential",
            ExperimentSpec::PdeResidual(_) => "pde_residual",
            ExperimentSpec::Kernels(_) => "kernels",
            ExperimentSpec::Remark21(_) => "remark21",
            ExperimentSpec::ModulusScan(_) => "modulus_scan",
            ExperimentSpec::SecondDerivative(_) => "second_derivative",
        }
    }

    /// The CLI subcommand that runs this kind.
    pub fn command(&self) -> Command {
        match self {
            ExperimentSpec::Gauss(_)
            | ExperimentSpec::LogPotential(_)
            | ExperimentSpec::Identities(_)
            | ExperimentSpec::Exterior(_)
            | ExperimentSpec::Tangential(_) => Command::Identities,
            ExperimentSpec::PdeResidual(_) => Command::PdeResidual,
            ExperimentSpec::Kernels(_) | ExperimentSpec::Remark21(_) => Command::Kernels,
            ExperimentSpec::ModulusScan(_) => Command::ModulusScan,
            ExperimentSpec::SecondDerivative(_) => Command::SecondDerivative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Identities,
    ModulusScan,
    Kernels,
    PdeResidual,
    SecondDerivative,
    All,
}

/// Operator presets; `general` takes raw coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum OperatorSpec {
    Laplace,
    Yukawa { k: f64 },
    Anisotropic { a2: [[f64; 2]; 2] },
    Drift { a2: [[f64; 2]; 2], a1: [f64; 2], a0: f64 },
    General { coefficients: OperatorCoefficients },
}

impl OperatorSpec {
    pub fn coefficients(&self) -> Result<OperatorCoefficients> {
        match self {
            OperatorSpec::Laplace => Ok(OperatorCoefficients::laplace(2)),
            OperatorSpec::Yukawa { k } => {
                if !(*k > 0.0 && k.is_finite()) {
                    return Err(Error::Config(format!("yukawa k must be positive, got {k}")));
                }
                Ok(OperatorCoefficients::yukawa(2, *k))
            }
            OperatorSpec::Anisotropic { a2 } => {
                OperatorCoefficients::new(a2.iter().map(|r| r.to_vec()).collect(), vec![C64::default(); 2], C64::default())
            }
            OperatorSpec::Drift { a2, a1, a0 } => OperatorCoefficients::new(
                a2.iter().map(|r| r.to_vec()).collect(),
                a1.iter().map(|&v| C64::new(v, 0.0)).collect(),
                C64::new(*a0, 0.0),
            ),
            OperatorSpec::General { coefficients } => Ok(coefficients.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            OperatorSpec::Laplace => "laplace".into(),
            OperatorSpec::Yukawa { k } => format!("yukawa(k={k})"),
            OperatorSpec::Anisotropic { .. } => "anisotropic".into(),
            OperatorSpec::Drift { .. } => "drift".into(),
            OperatorSpec::General { .. } => "general".into(),
        }
    }

    pub fn anisotropic_default() -> Self {
        OperatorSpec::Anisotropic { a2: [[2.0, 0.5], [0.5, 1.0]] }
    }

    pub fn drift_default() -> Self {
        OperatorSpec::Drift { a2: [[2.0, 0.4], [0.4, 1.0]], a1: [0.5, -0.2], a0: -0.7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Constant { value: f64 },
    Cos { m: u32 },
    Sin { m: u32 },
    LipschitzHat { center: f64, width: f64 },
    C11Hat { center: f64, width: f64 },
}

impl DensitySpec {
    pub fn build(&self, frame: &BoundaryFrame) -> Result<BoundaryDensity> {
        match *self {
            DensitySpec::Constant { value } => Ok(BoundaryDensity::constant(frame, C64::new(value, 0.0))),
            DensitySpec::Cos { m } => Ok(BoundaryDensity::cos_mode(frame, m)),
            DensitySpec::Sin { m } => Ok(BoundaryDensity::sin_mode(frame, m)),
            DensitySpec::LipschitzHat { center, width } => BoundaryDensity::lipschitz_hat(frame, center, width),
            DensitySpec::C11Hat { center, width } => BoundaryDensity::c11_hat(frame, center, width),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DensitySpec::Constant { value } => format!("const({value})"),
            DensitySpec::Cos { m } => format!("cos({m}t)"),
            DensitySpec::Sin { m } => format!("sin({m}t)"),
            DensitySpec::LipschitzHat { .. } => "lipschitz_hat".into(),
            DensitySpec::C11Hat { .. } => "c11_hat".into(),
        }
    }
}

pub fn curve_label(c: &CurveSpec) -> String {
    match c {
        CurveSpec::Ellipse { a, b } if a == b => format!("circle(r={a})"),
        CurveSpec::Ellipse { a, b } => format!("ellipse({a},{b})"),
        CurveSpec::Star { r0, eps, k } => format!("star({r0},{eps},{k})"),
        CurveSpec::C11Blend { amplitude } => format!("c11_blend({amplitude})"),
    }
}

pub fn frame_for(curve: &CurveSpec, n: usize) -> Result<BoundaryFrame> {
    Ok(make_curve(curve.clone(), n)?.1)
}

fn ellipse21() -> CurveSpec {
    CurveSpec::Ellipse { a: 2.0, b: 1.0 }
}

fn star() -> CurveSpec {
    CurveSpec::Star { r0: 1.0, eps: 0.2, k: 5 }
}

/// `w[1]` equals 1 inside and 0 outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussSpec {
    pub operators: Vec<OperatorSpec>,
    pub curves: Vec<CurveSpec>,
    pub n: usize,
    /// Points on each side.
    pub points: usize,
    pub tolerance: f64,
}

impl Default for GaussSpec {
    fn default() -> Self {
        GaussSpec {
            operators: vec![OperatorSpec::Laplace, OperatorSpec::anisotropic_default()],
            curves: vec![CurveSpec::circle(1.0), ellipse21()],
            n: 256,
            points: 25,
            tolerance: 1e-8,
        }
    }
}

/// Laplace single layer of `μ ≡ 1` on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogPotentialSpec {
    pub n: usize,
    pub points: usize,
    pub near_distance: f64,
    pub tolerance: f64,
    pub near_tolerance: f64,
}

impl Default for LogPotentialSpec {
    fn default() -> Self {
        LogPotentialSpec { n: 256, points: 25, near_distance: 1e-3, tolerance: 1e-8, near_tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityCase {
    pub operator: OperatorSpec,
    pub curve: CurveSpec,
    pub density: DensitySpec,
    pub tolerance: f64,
}

/// Two-path gradient comparisons for both reduction identities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentitySpec {
    pub cases: Vec<IdentityCase>,
    /// Strictly increasing node counts; tolerances apply at the last one.
    pub ladder: Vec<usize>,
    /// Points on each side, at `inner_scale·γ(t)` and `outer_scale·γ(t)`.
    pub points: usize,
    pub inner_scale: f64,
    pub outer_scale: f64,
    /// Required observed order between the last two ladder entries.
    pub min_order: f64,
    /// Defects below this are at rounding level and carry no order.
    pub roundoff_floor: f64,
    /// Coarse node counts whose orders are reported, not asserted.
    pub preasymptotic: Vec<usize>,
}

impl Default for IdentitySpec {
    fn default() -> Self {
        IdentitySpec {
            cases: vec![
                IdentityCase {
                    operator: OperatorSpec::Laplace,
                    curve: CurveSpec::circle(1.0),
                    density: DensitySpec::Cos { m: 1 },
                    tolerance: 1e-8,
                },
                IdentityCase {
                    operator: OperatorSpec::Yukawa { k: 1.0 },
                    curve: ellipse21(),
                    density: DensitySpec::Sin { m: 1 },
                    tolerance: 1e-6,
                },
            ],
            ladder: vec![128, 256],
            points: 25,
            inner_scale: 0.85,
            outer_scale: 1.15,
            min_order: 3.0,
            roundoff_floor: 1e-13,
            preasymptotic: vec![16, 24, 32, 48, 64],
        }
    }
}

/// Exterior double layer against the zero-padded annulus double layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExteriorSpec {
    pub operators: Vec<OperatorSpec>,
    pub curve: CurveSpec,
    pub density: DensitySpec,
    pub n: usize,
    pub radius: f64,
    pub points: usize,
    pub tolerance: f64,
}

impl Default for ExteriorSpec {
    fn default() -> Self {
        ExteriorSpec {
            operators: vec![OperatorSpec::Laplace, OperatorSpec::Yukawa { k: 1.0 }],
            curve: CurveSpec::Ellipse { a: 1.5, b: 1.0 },
            density: DensitySpec::Cos { m: 2 },
            n: 256,
            radius: 3.0,
            points: 20,
            tolerance: 1e-8,
        }
    }
}

/// Extension independence, antisymmetry and integration by parts of `M_lr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TangentialSpec {
    pub curves: Vec<CurveSpec>,
    pub n: usize,
    pub tolerance: f64,
}

impl Default for TangentialSpec {
    fn default() -> Self {
        TangentialSpec { curves: vec![ellipse21(), star()], n: 256, tolerance: 1e-10 }
    }
}

/// Finite-difference `P u` for `u = v[μ]` and `u = w[μ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdeSpec {
    pub operators: Vec<OperatorSpec>,
    pub curve: CurveSpec,
    pub density: DensitySpec,
    pub n: usize,
    /// Points per operator, half inside and half outside.
    pub points: usize,
    pub tolerance: f64,
}

impl Default for PdeSpec {
    fn default() -> Self {
        PdeSpec {
            operators: vec![
                OperatorSpec::Laplace,
                OperatorSpec::Yukawa { k: 1.0 },
                OperatorSpec::anisotropic_default(),
                OperatorSpec::drift_default(),
            ],
            curve: CurveSpec::Ellipse { a: 1.5, b: 1.0 },
            density: DensitySpec::Cos { m: 2 },
            n: 128,
            points: 100,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelSuiteSpec {
    pub operators: Vec<OperatorSpec>,
    pub directions: usize,
    pub parity_tolerance: f64,
    pub yukawa_k: f64,
    /// Rays `|x| = 2^{-j}` for `j = 0..=max_ray`.
    pub max_ray: u32,
    pub remainder_limit: f64,
    /// Boundary node counts for the kernel class norm sample.
    pub class_ladder: Vec<usize>,
    /// Node counts for the extension seminorm of `K[J_1, μ]`.
    pub extension_ladder: Vec<usize>,
    pub extension_curve: CurveSpec,
    pub extension_density: DensitySpec,
    /// Largest accepted ratio between estimates along a ladder.
    pub growth_factor: f64,
}

impl Default for KernelSuiteSpec {
    fn default() -> Self {
        KernelSuiteSpec {
            operators: vec![OperatorSpec::Laplace, OperatorSpec::anisotropic_default()],
            directions: 256,
            parity_tolerance: 1e-12,
            yukawa_k: 1.0,
            max_ray: 20,
            remainder_limit: 1e-3,
            class_ladder: vec![32, 64, 128],
            extension_ladder: vec![64, 128, 256, 512],
            extension_curve: CurveSpec::circle(1.0),
            extension_density: DensitySpec::LipschitzHat { center: PI / 2.0, width: 0.6 },
            growth_factor: 2.0,
        }
    }
}

/// Far-pair bound on randomized samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Remark21Spec {
    pub trials: usize,
    pub min_points: usize,
    pub max_points: usize,
}

impl Default for Remark21Spec {
    fn default() -> Self {
        Remark21Spec { trials: 1000, min_points: 5, max_points: 40 }
    }
}

/// Dyadic pair scan of a one-sided gradient field near the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    pub operator: OperatorSpec,
    pub curve: CurveSpec,
    pub density: DensitySpec,
    /// `single` scans `∇v⁺`, `double` scans `∇w⁺`.
    pub field: FieldKind,
    pub n: usize,
    pub k_min: u32,
    pub k_max: u32,
    /// Uniform anchors in addition to density kinks and curve breakpoints.
    pub anchors: usize,
    pub moduli: Vec<ModulusFunction>,
    /// Scales over which the ω-ratio must stay within `factor`.
    pub last_scales: usize,
    pub factor: f64,
    /// Scales whose quadrature estimate exceeds this fraction of the
    /// measured increment are dropped.
    pub contamination: f64,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            operator: OperatorSpec::Laplace,
            curve: CurveSpec::C11Blend { amplitude: 0.15 },
            density: DensitySpec::LipschitzHat { center: PI / 2.0, width: 0.6 },
            field: FieldKind::Single,
            n: 512,
            k_min: 3,
            k_max: 12,
            anchors: 16,
            moduli: vec![ModulusFunction::Omega1, ModulusFunction::Power { alpha: 0.9 }],
            last_scales: 4,
            factor: 2.0,
            contamination: 0.1,
        }
    }
}

/// Second derivatives of `v⁺` by finite differences and by applying the
/// reduction identities twice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SecondDerivativeSpec {
    pub operator: OperatorSpec,
    pub curve: CurveSpec,
    pub density: DensitySpec,
    pub n: usize,
    pub points: usize,
    pub inner_scale: f64,
    pub tolerance: f64,
    pub symmetry_tolerance: f64,
    /// Density for the second-derivative modulus scan.
    pub scan_density: DensitySpec,
    pub scan_curve: CurveSpec,
    pub scan_n: usize,
    pub k_min: u32,
    pub k_max: u32,
    pub anchors: usize,
    pub last_scales: usize,
    pub factor: f64,
}

impl Default for SecondDerivativeSpec {
    fn default() -> Self {
        SecondDerivativeSpec {
            operator: OperatorSpec::Laplace,
            curve: CurveSpec::circle(1.0),
            density: DensitySpec::Cos { m: 1 },
            n: 512,
            points: 20,
            inner_scale: 0.8,
            tolerance: 1e-5,
            symmetry_tolerance: 1e-6,
            scan_density: DensitySpec::C11Hat { center: PI / 2.0, width: 0.6 },
            scan_curve: CurveSpec::Ellipse { a: 1.3, b: 1.0 },
            scan_n: 256,
            k_min: 3,
            k_max: 10,
            anchors: 8,
            last_scales: 4,
            factor: 2.0,
        }
    }
}

fn check_n(n: usize, what: &str) -> Result<()> {
    if n < 16 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!("{what}: node count must be even and >= 16, got {n}")));
    }
    Ok(())
}

fn check_ladder(ladder: &[usize], what: &str) -> Result<()> {
    if ladder.is_empty() {
        return Err(Error::Config(format!("{what}: ladder is empty")));
    }
    for &n in ladder {
        check_n(n, what)?;
    }
    if ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("{what}: ladder must be strictly increasing")));
    }
    Ok(())
}

fn check_positive(v: f64, what: &str) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Config(format!("{what} must be positive and finite, got {v}")));
    }
    Ok(())
}

fn check_operator(op: &OperatorSpec) -> Result<()> {
    let c = op.coefficients().map_err(|e| Error::Config(format!("operator {}: {e}", op.label())))?;
    if c.dim() != 2 {
        return Err(Error::Config("experiments run on planar operators".into()));
    }
    crate::kernels::FundamentalSolution::new(&c).map_err(|e| Error::Config(format!("operator {}: {e}", op.label())))?;
    Ok(())
}

fn check_scales(k_min: u32, k_max: u32, last: usize, what: &str) -> Result<()> {
    if k_min > k_max || (k_max - k_min + 1) < last as u32 {
        return Err(Error::Config(format!("{what}: need at least {last} scales between k_min and k_max")));
    }
    if k_max > 30 {
        return Err(Error::Config(format!("{what}: k_max above 30 is below the distance floor")));
    }
    Ok(())
}

impl Experiment {
    /// Schema checks that go beyond what deserialization enforces.
    pub fn validate(&self) -> Result<()> {
        let what = self.name.as_str();
        if what.is_empty() || !what.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Config(format!("experiment name {what:?} must be non-empty [A-Za-z0-9_-]")));
        }
        match &self.spec {
            ExperimentSpec::Gauss(s) => {
                check_n(s.n, what)?;
                s.operators.iter().try_for_each(check_operator)?;
                check_positive(s.tolerance, "tolerance")?;
            }
            ExperimentSpec::LogPotential(s) => {
                check_n(s.n, what)?;
                check_positive(s.near_distance, "near_distance")?;
            }
            ExperimentSpec::Identities(s) => {
                check_ladder(&s.ladder, what)?;
                if !s.preasymptotic.is_empty() {
                    check_ladder(&s.preasymptotic, what)?;
                }
                for c in &s.cases {
                    check_operator(&c.operator)?;
                    check_positive(c.tolerance, "tolerance")?;
                }
                if !(s.inner_scale > 0.0 && s.inner_scale < 1.0 && s.outer_scale > 1.0) {
                    return Err(Error::Config(format!("{what}: scales must satisfy 0 < inner < 1 < outer")));
                }
            }
            ExperimentSpec::Exterior(s) => {
                check_n(s.n, what)?;
                s.operators.iter().try_for_each(check_operator)?;
                check_positive(s.radius, "radius")?;
            }
            ExperimentSpec::Tangential(s) => check_n(s.n, what)?,
            ExperimentSpec::PdeResidual(s) => {
                check_n(s.n, what)?;
                s.operators.iter().try_for_each(check_operator)?;
            }
            ExperimentSpec::Kernels(s) => {
                check_ladder(&s.class_ladder, what)?;
                check_ladder(&s.extension_ladder, what)?;
                s.operators.iter().try_for_each(check_operator)?;
                check_positive(s.yukawa_k, "yukawa_k")?;
            }
            ExperimentSpec::Remark21(s) => {
                if s.min_points < 2 || s.min_points > s.max_points {
                    return Err(Error::Config(format!("{what}: need 2 <= min_points <= max_points")));
                }
            }
            ExperimentSpec::ModulusScan(s) => {
                check_n(s.n, what)?;
                check_operator(&s.operator)?;
                check_scales(s.k_min, s.k_max, s.last_scales, what)?;
                if s.moduli.is_empty() {
                    return Err(Error::Config(format!("{what}: no moduli to scan")));
                }
                if matches!(s.field, FieldKind::GradientSingle | FieldKind::GradientDouble) {
                    return Err(Error::Config(format!("{what}: field must be `single` or `double`")));
                }
            }
            ExperimentSpec::SecondDerivative(s) => {
                check_n(s.n, what)?;
                check_n(s.scan_n, what)?;
                check_operator(&s.operator)?;
                check_scales(s.k_min, s.k_max, s.last_scales, what)?;
            }
        }
        Ok(())
    }
}

impl Suite {
    pub fn validate(&self) -> Result<()> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported config version {}, expected {SCHEMA_VERSION}",
                self.version
            )));
        }
        if self.experiments.is_empty() {
            return Err(Error::Config("suite has no experiments".into()));
        }
        let mut names: Vec<&str> = self.experiments.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("experiment names must be unique".into()));
        }
        self.experiments.iter().try_for_each(Experiment::validate)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let suite: Suite = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        suite.validate()?;
        Ok(suite)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Experiments that belong to `command`.
    pub fn select(&self, command: Command) -> Vec<Experiment> {
        self.experiments
            .iter()
            .filter(|e| command == Command::All || e.spec.command() == command)
            .cloned()
            .collect()
    }

    /// The built-in suite: one experiment per acceptance check.
    pub fn default_suite(seed: u64) -> Self {
        let e = |name: &str, spec| Experiment { name: name.into(), spec };
        Suite {
            version: SCHEMA_VERSION,
            seed,
            experiments: vec![
                e("gauss", ExperimentSpec::Gauss(GaussSpec::default())),
                e("log_potential", ExperimentSpec::LogPotential(LogPotentialSpec::default())),
                e("identities", ExperimentSpec::Identities(IdentitySpec::default())),
                e("exterior", ExperimentSpec::Exterior(ExteriorSpec::default())),
                e("pde_residual", ExperimentSpec::PdeResidual(PdeSpec::default())),
                e("kernels", ExperimentSpec::Kernels(KernelSuiteSpec::default())),
                e("modulus_scan", ExperimentSpec::ModulusScan(ScanSpec::default())),
                e("tangential", ExperimentSpec::Tangential(TangentialSpec::default())),
                e("remark21", ExperimentSpec::Remark21(Remark21Spec::default())),
                e("second_derivative", ExperimentSpec::SecondDerivative(SecondDerivativeSpec::default())),
            ],
        }
    }
}
