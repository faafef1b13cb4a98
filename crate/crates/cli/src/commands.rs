use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use serde::Serialize;
use serde_json::{json, Value};

use tripath_core::atlas::{export_canonical_tables, render, sample_atlas, Format};
use tripath_core::hilbert::normalize;
use tripath_core::kd::{inequality_sum, violation, KD_PAIRS};
use tripath_core::states::{decompose_in_basis, joint_basis, named_states, t_2f_example};
use tripath_core::verify::run_checks;
use tripath_core::{
    kd_profile, max_violation, probabilities, InterferometerSpec, Path, PathSystem, RayState, SubclassTable,
};

use crate::{Cli, Command};

/// Accepted deviation of the input norm from one before a warning is printed.
const NORM_SLACK: f64 = 1e-9;

fn system(cli: &Cli) -> Result<PathSystem> {
    let Some(path) = &cli.config else {
        return Ok(PathSystem::standard());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = InterferometerSpec::from_config_str(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(PathSystem::build(spec)?)
}

fn state(coeffs: [f64; 3]) -> Result<RayState> {
    let n = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let psi = normalize(coeffs).context("--state")?;
    if (n - 1.0).abs() > NORM_SLACK {
        eprintln!("warning: --state has norm {n}; normalized to {psi}");
    }
    Ok(psi)
}

fn emit(cli: &Cli, doc: Value, text: impl FnOnce() -> String) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
    } else {
        print!("{}", text());
    }
}

fn coeffs(r: &RayState) -> String {
    let c = r.coeffs();
    // adding 0.0 turns -0.0 into 0.0
    format!("({:>9.6}, {:>9.6}, {:>9.6})", c[0] + 0.0, c[1] + 0.0, c[2] + 0.0)
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::States => states(cli)?,
        Command::Kd(arg) => kd(cli, state(arg.state)?)?,
        Command::Classify(arg) => classify(cli, state(arg.state)?)?,
        Command::Inequality { state: Some(s), .. } => inequality(cli, state(*s)?)?,
        Command::Inequality { state: None, .. } => inequality_max(cli)?,
        Command::Basis => basis(cli)?,
        Command::Atlas {
            resolution,
            out,
            format,
            tables,
            out_dir,
        } => atlas(cli, *resolution as usize, out.clone(), format, *tables, out_dir.clone())?,
        Command::Verify => return verify(cli),
    }
    Ok(ExitCode::SUCCESS)
}

fn states(cli: &Cli) -> Result<()> {
    let all = named_states(&system(cli)?)?;
    emit(cli, json!({ "states": all }), || {
        all.iter()
            .map(|s| {
                let def = if s.definition.is_empty() {
                    String::new()
                } else {
                    format!("  orthogonal to {}", s.definition.join(", "))
                };
                format!("{:<9} {}{def}\n", s.name, coeffs(&s.ray))
            })
            .collect()
    });
    Ok(())
}

fn kd(cli: &Cli, psi: RayState) -> Result<()> {
    let profile = kd_profile(&psi, &system(cli)?);
    emit(cli, json!({ "state": psi, "kd": profile }), || {
        let mut s = format!("state {}\n", coeffs(&psi));
        for (pair, v) in profile.iter() {
            s += &format!("  {:<8} {:>13.10}\n", pair.label(), v);
        }
        s
    });
    Ok(())
}

fn classify(cli: &Cli, psi: RayState) -> Result<()> {
    let result = SubclassTable::standard().classify(&psi, cli.tol)?;
    let doc = serde_json::to_value(&result)?;
    emit(cli, doc, || {
        let labels: Vec<String> = result.labels.iter().map(ToString::to_string).collect();
        let header: Vec<String> = KD_PAIRS.iter().map(|p| p.label()).collect();
        format!(
            "state   {}\npairs   {}\npattern {}\nlabels  {}\n",
            coeffs(&psi),
            header.join(" "),
            result.pattern,
            labels.join(", ")
        )
    });
    Ok(())
}

fn inequality(cli: &Cli, psi: RayState) -> Result<()> {
    let sum = inequality_sum(&psi, &system(cli)?);
    let v = violation(sum);
    emit(cli, json!({ "state": psi, "sum": sum, "violation": v }), || {
        format!("state     {}\nsum       {sum:.12}\nviolation {v:.12}\n", coeffs(&psi))
    });
    Ok(())
}

fn inequality_max(cli: &Cli) -> Result<()> {
    let sys = system(cli)?;
    let mv = max_violation(&sys);
    let p = probabilities(&mv.state, &sys);
    let doc = json!({
        "state": mv.state,
        "min_eigenvalue": mv.min_eigenvalue,
        "sum": mv.min_eigenvalue,
        "violation": mv.violation,
        "probabilities": p,
    });
    emit(cli, doc, || {
        format!(
            "state     {}\nsum       {:.12}\nviolation {:.12}\nP(1) {:.4}  P(2) {:.4}  P(3) {:.4}\n",
            coeffs(&mv.state),
            mv.min_eigenvalue,
            mv.violation,
            p.get(Path::One),
            p.get(Path::Two),
            p.get(Path::Three)
        )
    });
    Ok(())
}

#[derive(Serialize)]
struct FidelityRow {
    path: Path,
    /// `P(basis_k | path)` in basis order.
    probabilities: [f64; 3],
    outcome: String,
}

fn basis(cli: &Cli) -> Result<()> {
    let sys = PathSystem::standard();
    let basis = joint_basis(&sys)?;
    let rows: Vec<FidelityRow> = Path::ALL
        .iter()
        .map(|&p| {
            let probs = basis.each_ref().map(|b| b.ray.overlap(&sys.ray(p)));
            let best = (0..3).max_by(|&a, &b| probs[a].total_cmp(&probs[b])).expect("three entries");
            FidelityRow {
                path: p,
                probabilities: probs,
                outcome: basis[best].name.clone(),
            }
        })
        .collect();
    let example = t_2f_example();
    let coef = decompose_in_basis(&sys, &example.ray)?;
    let doc = json!({
        "basis": basis,
        "fidelities": rows,
        "example": { "name": example.name, "state": example.ray, "coefficients": coef },
    });
    emit(cli, doc, || {
        let mut s = String::new();
        for b in &basis {
            s += &format!("{:<9} {}\n", b.name, coeffs(&b.ray));
        }
        s += &format!("\n{:<5}{:>11}{:>11}{:>11}  outcome\n", "path", basis[0].name, basis[1].name, basis[2].name);
        for r in &rows {
            s += &format!(
                "{:<5}{:>11.6}{:>11.6}{:>11.6}  {}\n",
                r.path.to_string(),
                r.probabilities[0],
                r.probabilities[1],
                r.probabilities[2],
                r.outcome
            );
        }
        s += &format!(
            "\n{} = {:.6} {} + {:.6} {} + {:.6} {}\n",
            example.name, coef[0], basis[0].name, coef[1], basis[1].name, coef[2], basis[2].name
        );
        s
    });
    Ok(())
}

fn atlas(
    cli: &Cli,
    resolution: usize,
    out: Option<PathBuf>,
    format: &str,
    tables: bool,
    out_dir: Option<PathBuf>,
) -> Result<()> {
    let format: Format = format.parse()?;
    let dir = out_dir.unwrap_or_else(|| PathBuf::from("."));
    let out = out.unwrap_or_else(|| dir.join(format!("atlas.{}", format.extension())));
    let grid = sample_atlas(resolution, cli.tol)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(&out, render(&grid, format)).with_context(|| format!("writing {}", out.display()))?;
    let mut written = vec![out.clone()];
    if tables {
        let table_dir = out.parent().map(PathBuf::from).unwrap_or_default();
        written.extend(export_canonical_tables()?.write_to(&table_dir)?);
    }
    let counts = grid.label_counts();
    let doc = json!({
        "resolution": resolution,
        "format": format.extension(),
        "labels": counts.len(),
        "files": written,
    });
    emit(cli, doc, || {
        let mut s = format!("{} sub-classes at resolution {resolution}\n", counts.len());
        for f in &written {
            s += &format!("wrote {}\n", f.display());
        }
        s
    });
    Ok(())
}

fn verify(cli: &Cli) -> Result<ExitCode> {
    let checks = run_checks()?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let doc = json!({ "passed": failed == 0, "total": checks.len(), "failed": failed, "checks": checks });
    emit(cli, doc, || {
        let mut s = String::new();
        for c in &checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            s += &format!("{mark} {:<48} expected {:<24} got {}\n", c.name, c.expected, c.actual);
        }
        s += &format!("{} of {} checks passed\n", checks.len() - failed, checks.len());
        s
    });
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
