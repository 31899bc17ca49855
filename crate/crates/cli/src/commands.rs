use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use polar_ed::catalog::{catalog_build, catalog_list, FamilyId, FamilySpec};
use polar_ed::polarity::{
    certify_slice, extract_slice, polarity_test, verify_slice, MembershipRoute, PolarityOptions,
    SliceVerdict, Verdict, MAX_TRIALS,
};
use polar_ed::rep::{self, slice_from_json_str, slice_to_json_string, RepFile};
use polar_ed::transfer::{
    self, critical_points_singular_values, critical_points_spectrum, ed_degree_adjoint_orbit,
    ed_degree_spectrum, CriticalPointSet, SingularValueProblem, SpectrumProblem,
};
use serde_json::{json, Value};

use crate::output::{format_list, format_matrix, CommandResult};
use crate::{
    CatalogCmd, Cli, CliError, Command, CriticalCmd, EddegCmd, Expectation, Format, GlobalOpts,
    PolarityCmd, Route, SingularArgs, SpectrumArgs, TransferCmd, EXIT_MISMATCH, EXIT_OK,
};

/// A successful command before rendering.
struct Outcome {
    command: &'static str,
    result: Value,
    text: String,
    exit_code: i32,
    /// Written to `--out` instead of the whole document when present.
    artifact: Option<String>,
    note: Option<String>,
}

impl Outcome {
    fn new(command: &'static str, result: Value, text: String) -> Self {
        Outcome {
            command,
            result,
            text,
            exit_code: EXIT_OK,
            artifact: None,
            note: None,
        }
    }
}

pub fn run(cli: &Cli) -> CommandResult {
    let g = &cli.global;
    let outcome = execute(cli).and_then(|o| {
        let doc = document(g, &o);
        if let Some(path) = &g.out {
            let body = match &o.artifact {
                Some(a) => format!("{}\n", a.trim_end()),
                None => pretty(&doc),
            };
            fs::write(path, body)
                .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok((o, doc))
    });
    match outcome {
        Ok((o, doc)) => {
            let stdout = match g.format {
                Format::Json => pretty(&doc),
                Format::Text => format!("{}\n", o.text.trim_end()),
            };
            CommandResult {
                exit_code: o.exit_code,
                stdout,
                stderr: o.note.map(|n| format!("{n}\n")).unwrap_or_default(),
                payload: Some(doc),
            }
        }
        Err(e) => CommandResult::text(e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn document(g: &GlobalOpts, o: &Outcome) -> Value {
    json!({
        "command": o.command,
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "seed": g.seed,
            "trials": g.trials,
            "tol": g.tol,
        },
        "result": o.result,
    })
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(CliError::Invalid(format!("--tol must be positive, got {}", g.tol)));
    }
    match &cli.command {
        Command::Catalog(CatalogCmd::List) => Ok(catalog_list_cmd()),
        Command::Catalog(CatalogCmd::Export { family, params }) => catalog_export(family, params),
        Command::Polarity(PolarityCmd::Test { rep, expect, route }) => polarity_test_cmd(g, rep, *expect, *route),
        Command::Polarity(PolarityCmd::Slice { rep }) => polarity_slice(g, rep),
        Command::Polarity(PolarityCmd::Verify { rep, slice }) => polarity_verify(g, rep, slice.as_deref()),
        Command::Nearest(TransferCmd::Spectrum(a)) => nearest_spectrum(g, a),
        Command::Nearest(TransferCmd::Singular(a)) => nearest_singular(g, a),
        Command::Critical(CriticalCmd::Enumerate(TransferCmd::Spectrum(a))) => critical_spectrum(g, a),
        Command::Critical(CriticalCmd::Enumerate(TransferCmd::Singular(a))) => critical_singular(g, a),
        Command::Eddeg(EddegCmd::Spectrum { lambda }) => {
            let d = ed_degree_spectrum(lambda)?;
            Ok(Outcome::new("eddeg spectrum", json!({ "ed_degree": big(d) }), d.to_string()))
        }
        Command::Eddeg(EddegCmd::Adjoint { n }) => {
            let d = ed_degree_adjoint_orbit(*n)?;
            Ok(Outcome::new("eddeg adjoint", json!({ "ed_degree": big(d) }), d.to_string()))
        }
    }
}

fn big(x: u128) -> Value {
    u64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn catalog_list_cmd() -> Outcome {
    let list = catalog_list();
    let text = list
        .iter()
        .map(|t| {
            let params: Vec<String> = t.params.iter().map(|p| format!("{}≥{}", p.name, p.min)).collect();
            format!(
                "{:<22} {:<10} {}{}  {} on {}",
                t.family.as_str(),
                params.join(","),
                if t.polar { "polar" } else { "not polar" },
                if t.n_le_m { " (n≤m)" } else { "" },
                t.group,
                t.space
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Outcome::new("catalog list", json!({ "families": list }), text)
}

fn catalog_export(family: &str, params: &[usize]) -> Result<Outcome, CliError> {
    let family: FamilyId = family.parse()?;
    let entry = catalog_build(&FamilySpec::new(family, params))?;
    let file = RepFile {
        rep: entry.rep,
        slice: entry.slice,
    };
    let body = file.to_json_string();
    let text = format!(
        "{}: dim {}, {} generators{}",
        file.rep.name,
        file.rep.dim,
        file.rep.generators.len(),
        if file.slice.is_some() { ", claimed slice included" } else { "" }
    );
    let mut o = Outcome::new(
        "catalog export",
        json!({ "file": serde_json::from_str::<Value>(&body).expect("serialized file is JSON") }),
        text,
    );
    o.artifact = Some(body);
    Ok(o)
}

fn options(g: &GlobalOpts, route: Route) -> PolarityOptions {
    PolarityOptions {
        seed: g.seed,
        trials: g.trials,
        max_trials: MAX_TRIALS.max(g.trials),
        route: match route {
            Route::Kernel => MembershipRoute::Kernel,
            Route::Dense => MembershipRoute::Dense,
        },
    }
}

fn polarity_test_cmd(
    g: &GlobalOpts,
    path: &Path,
    expect: Option<Expectation>,
    route: Route,
) -> Result<Outcome, CliError> {
    let file = rep::load(path)?;
    let report = polarity_test(&file.rep, &options(g, route))?;
    let matched = expect.map(|e| {
        let want = match e {
            Expectation::Polar => Verdict::Polar,
            Expectation::NotPolar => Verdict::NotPolar,
        };
        want == report.verdict
    });
    let mut text = format!(
        "{}: {} (dim {}, generic orbit dimension {}, cohomogeneity {}, {} trials, seed {})",
        file.rep.name, report.verdict, report.dim, report.orbit_dim, report.cohomogeneity, report.trials, report.seed
    );
    if let Some(w) = &report.witness {
        text.push_str(&format!("\nwitness: generator {} fails at sample seed {}", w.generator, w.seed));
    }
    let mut result = serde_json::to_value(&report).expect("report serializes");
    result["name"] = json!(file.rep.name);
    if let Some(m) = matched {
        result["expectation_met"] = json!(m);
    }
    let mut o = Outcome::new("polarity test", result, text);
    if matched == Some(false) {
        o.exit_code = EXIT_MISMATCH;
        o.note = Some(format!("expectation not met: verdict is {}", report.verdict));
    }
    Ok(o)
}

fn polarity_slice(g: &GlobalOpts, path: &Path) -> Result<Outcome, CliError> {
    let file = rep::load(path)?;
    let report = polarity_test(&file.rep, &options(g, Route::Kernel))?;
    if report.verdict != Verdict::Polar {
        return Err(CliError::Invalid(format!("{} is not polar; no slice to extract", file.rep.name)));
    }
    let v = report.usable_vector(&file.rep).expect("polar verdict has a usable sample");
    let slice = extract_slice(&file.rep, &v)?;
    let (verdict, slice) = certify_slice(&file.rep, &slice, g.seed, g.trials)?;
    let body = slice_to_json_string(&slice);
    let text = format!(
        "{}: slice of dimension {} extracted at sample seed {}, {}",
        file.rep.name,
        slice.dim(),
        report.samples.iter().find(|s| s.membership.is_some()).map_or(g.seed, |s| s.seed),
        if verdict.is_certified() { "certified" } else { "not certified" }
    );
    let mut o = Outcome::new(
        "polarity slice",
        json!({
            "name": file.rep.name,
            "point": v.iter().map(polar_ed::exact::format_rational).collect::<Vec<_>>(),
            "slice": serde_json::from_str::<Value>(&body).expect("slice is JSON"),
            "verification": verdict,
        }),
        text,
    );
    o.artifact = Some(body);
    Ok(o)
}

fn polarity_verify(g: &GlobalOpts, path: &Path, slice_path: Option<&Path>) -> Result<Outcome, CliError> {
    let file = rep::load(path)?;
    let slice = match slice_path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", p.display())))?;
            slice_from_json_str(&text)?
        }
        None => file
            .slice
            .clone()
            .ok_or_else(|| CliError::Invalid(format!("{} carries no slice; pass --slice", path.display())))?,
    };
    let verdict = verify_slice(&file.rep, &slice, g.seed, g.trials)?;
    let text = match &verdict {
        SliceVerdict::Certified => format!("{}: slice CERTIFIED", file.rep.name),
        SliceVerdict::Rejected { condition, .. } => format!("{}: slice REJECTED, fails {condition}", file.rep.name),
    };
    let mut o = Outcome::new("polarity verify", json!({ "name": file.rep.name, "verdict": verdict }), text);
    if verdict.is_certified() {
        let (_, certified) = certify_slice(&file.rep, &slice, g.seed, g.trials)?;
        o.artifact = Some(slice_to_json_string(&certified));
    }
    Ok(o)
}

fn read_matrix(path: &Path) -> Result<DMatrix<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: expected an array of numeric rows: {e}", path.display())))?;
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Invalid(format!("{}: matrix must be non-empty and rectangular", path.display())));
    }
    Ok(DMatrix::from_row_iterator(rows.len(), ncols, rows.into_iter().flatten()))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn nearest_spectrum(g: &GlobalOpts, a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let p = SpectrumProblem::new(read_matrix(&a.data)?, a.lambda.clone())?;
    let b = transfer::nearest_with_spectrum(&p, g.tol)?;
    Ok(nearest_outcome("nearest spectrum", p.data(), &b))
}

fn nearest_singular(g: &GlobalOpts, a: &SingularArgs) -> Result<Outcome, CliError> {
    let p = SingularValueProblem::new(read_matrix(&a.data)?, a.sigma.clone())?;
    let b = transfer::nearest_with_singular_values(&p, g.tol)?;
    Ok(nearest_outcome("nearest singular", p.data(), &b))
}

fn nearest_outcome(command: &'static str, data: &DMatrix<f64>, b: &DMatrix<f64>) -> Outcome {
    let distance = (data - b).norm();
    Outcome::new(
        command,
        json!({ "point": rows(b), "distance": distance }),
        format!("nearest point (distance {distance:.6}):\n{}", format_matrix(&rows(b))),
    )
}

fn critical_spectrum(g: &GlobalOpts, a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let p = SpectrumProblem::new(read_matrix(&a.data)?, a.lambda.clone())?;
    let set = critical_points_spectrum(&p, g.tol)?;
    Ok(critical_outcome("critical enumerate spectrum", &set))
}

fn critical_singular(g: &GlobalOpts, a: &SingularArgs) -> Result<Outcome, CliError> {
    let p = SingularValueProblem::new(read_matrix(&a.data)?, a.sigma.clone())?;
    let set = critical_points_singular_values(&p, g.tol)?;
    Ok(critical_outcome("critical enumerate singular", &set))
}

fn critical_outcome(command: &'static str, set: &CriticalPointSet) -> Outcome {
    let points: Vec<Value> = (0..set.len())
        .map(|i| {
            json!({
                "assignment": set.slice_points[i],
                "point": rows(&set.points[i]),
                "squared_distance": set.distances[i],
                "residual": set.residuals[i],
            })
        })
        .collect();
    let mut text = format!(
        "{} critical points (ED degree {}), nearest is #{}",
        set.len(),
        set.ed_degree_expected,
        set.nearest_index()
    );
    for i in 0..set.len() {
        text.push_str(&format!(
            "\n#{i} {}  squared distance {:.6}  residual {:.1e}",
            format_list(&set.slice_points[i]),
            set.distances[i],
            set.residuals[i]
        ));
    }
    Outcome::new(
        command,
        json!({
            "count": set.len(),
            "ed_degree": big(set.ed_degree_expected),
            "nearest_index": set.nearest_index(),
            "points": points,
        }),
        text,
    )
}
