//! Acceptance checks: runs the CLI on the built-in suite and prints one
//! PASS/FAIL line per criterion.

use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_miranda-layers");

fn run_all(out: &Path) -> i32 {
    let status = Command::new(BIN)
        .args(["all", "--seed", "7", "--out"])
        .arg(out)
        .stdout(std::process::Stdio::null())
        .status()
        .expect("binary runs");
    status.code().unwrap_or(-1)
}

fn experiment<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["experiments"]
        .as_array()
        .and_then(|a| a.iter().find(|e| e["name"] == name))
        .unwrap_or_else(|| panic!("experiment {name} missing from report"))
}

/// Criteria of `name` whose id starts with one of `prefixes` (all when empty).
fn criteria<'a>(report: &'a Value, name: &str, prefixes: &[&str]) -> Vec<&'a Value> {
    experiment(report, name)["criteria"]
        .as_array()
        .expect("criteria array")
        .iter()
        .filter(|c| {
            let id = c["id"].as_str().unwrap_or("");
            prefixes.is_empty() || prefixes.iter().any(|p| id.starts_with(p))
        })
        .collect()
}

fn all_pass(cs: &[&Value]) -> bool {
    !cs.is_empty() && cs.iter().all(|c| c["pass"] == true)
}

fn worst(cs: &[&Value]) -> String {
    cs.iter()
        .filter(|c| c["comparison"] == "<")
        .map(|c| c["value"].as_f64().unwrap_or(f64::NAN))
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
        .map_or_else(|| "-".into(), |v| format!("{v:.3e}"))
}

fn files_equal(a: &Path, b: &Path) -> Result<(), String> {
    let mut names: Vec<String> = Vec::new();
    for dir in ["", "plotdata"] {
        for e in fs::read_dir(a.join(dir)).map_err(|e| e.to_string())? {
            let e = e.map_err(|e| e.to_string())?;
            let rel = Path::new(dir).join(e.file_name());
            if e.path().is_file() && rel.to_str() != Some("timing.json") {
                names.push(rel.to_string_lossy().into_owned());
            }
        }
    }
    names.sort();
    for n in &names {
        let x = fs::read(a.join(n)).map_err(|e| format!("{n}: {e}"))?;
        let y = fs::read(b.join(n)).map_err(|e| format!("{n}: {e}"))?;
        if x != y {
            return Err(format!("{n} differs"));
        }
    }
    Ok(())
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let code = run_all(&a);
    let code2 = run_all(&b);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(a.join("report.json")).expect("report written")).expect("valid json");
    let timing: Value =
        serde_json::from_str(&fs::read_to_string(a.join("timing.json")).expect("timing written")).expect("valid json");
    let runtime = |name: &str| timing["runtime_seconds"][name].as_f64().unwrap_or(f64::INFINITY);

    let mut lines: Vec<(String, bool, String)> = Vec::new();
    let mut add = |label: &str, ok: bool, detail: String| lines.push((label.to_string(), ok, detail));

    let c = criteria(&report, "gauss", &[]);
    add(
        "1 double layer of 1 on circle and ellipse, laplace and anisotropic",
        all_pass(&c) && runtime("gauss") < 10.0,
        format!("max defect {}, {:.2} s", worst(&c), runtime("gauss")),
    );
    let c = criteria(&report, "log_potential", &[]);
    add("2 single layer of 1 on the unit circle, far and near", all_pass(&c), format!("max defect {}", worst(&c)));
    let c = criteria(&report, "identities", &["identity/single", "order/single"]);
    add("3 single layer gradient reduction, defects and order", all_pass(&c), format!("max defect {}", worst(&c)));
    let c = criteria(&report, "identities", &["identity/double", "order/double"]);
    add("4 double layer gradient formula, defects and order", all_pass(&c), format!("max defect {}", worst(&c)));
    let c = criteria(&report, "exterior", &[]);
    add("5 exterior reduction on the annulus", all_pass(&c), format!("max defect {}", worst(&c)));
    let c = criteria(&report, "pde_residual", &[]);
    add("6 relative PDE residual of v and w", all_pass(&c), format!("max residual {}", worst(&c)));
    let c = criteria(&report, "kernels", &["kernels/parity", "kernels/homogeneity", "kernels/remainder"]);
    add("7 J_j parity and homogeneity, yukawa remainder decay", all_pass(&c), format!("worst {}", worst(&c)));
    let mut c = criteria(&report, "modulus_scan", &[]);
    c.extend(criteria(&report, "kernels", &["kernels/class_norm", "kernels/extension"]));
    add(
        "8 omega_1 and r^0.9 scans of grad v, class and extension growth",
        all_pass(&c) && runtime("modulus_scan") < 120.0,
        format!("worst ratio variation {}, scan {:.2} s", worst(&c), runtime("modulus_scan")),
    );
    let c = criteria(&report, "tangential", &[]);
    add("9 tangential derivative extension, antisymmetry, integration by parts", all_pass(&c), format!("max defect {}", worst(&c)));
    let c = criteria(&report, "remark21", &[]);
    add("10 far-pair bound on random samples", all_pass(&c), format!("violations {}", worst(&c)));
    let same = files_equal(&a, &b);
    add(
        "11 repeated all --seed 7 runs byte-identical",
        same.is_ok() && code == code2,
        same.err().unwrap_or_else(|| "identical".into()),
    );
    let c = criteria(&report, "second_derivative", &[]);
    add("   second derivatives, two routes, symmetry and scan", all_pass(&c), format!("worst {}", worst(&c)));

    let mut failed = 0;
    for (label, ok, detail) in &lines {
        println!("{} {label}: {detail}", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("cli exit code {code}");
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
