mod commands;
mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use subriem::structure::SubPRStructure;
use subriem::symexpr::SamplingPlan;

use doc::{DocError, Params, StructureDoc, Task};
use report::Outcome;

#[derive(Parser, Debug)]
#[command(
    name = "subriem",
    version,
    about = "Invariants, curvature, Einstein-Weyl and isometry checks for contact sub-pseudo-Riemannian frames"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Structure-definition document (JSON).
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "builtin")]
    structure: Option<PathBuf>,
    /// Named example structure.
    #[arg(long, global = true, value_name = "NAME")]
    builtin: Option<String>,
    /// Scale of the Reeb direction in G^c.
    #[arg(long, global = true, value_name = "EXPR", allow_hyphen_values = true)]
    c: Option<String>,
    /// Deformation parameter of the Weyl pair.
    #[arg(
        long,
        global = true,
        value_name = "RATIONAL",
        allow_hyphen_values = true
    )]
    epsilon: Option<String>,
    #[arg(long, global = true, default_value_t = SamplingPlan::default().seed)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    #[arg(long, global = true, value_name = "REAL", default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here; `-` sends it to stdout instead of the text report.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Print wall-clock time to stderr (kept out of the reports).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contact form, Reeb field, structure functions, h and κ.
    Invariants,
    /// Connections, curvature and the κ^c decomposition of G^c (default c = 1).
    Curvature,
    /// Einstein-Weyl check of (G^c, 2εcα).
    Ew {
        /// Also evaluate the printed coordinate family G_ε.
        #[arg(long)]
        coordinate_family: bool,
    },
    /// Isometry verdicts; without a selector, the full suite.
    Isometry {
        /// Map components, separated by ';'.
        #[arg(long, value_name = "EXPRS", allow_hyphen_values = true)]
        map: Option<String>,
        /// Inverse map components; defaults to the inverse of an affine map.
        #[arg(
            long,
            value_name = "EXPRS",
            requires = "map",
            allow_hyphen_values = true
        )]
        inverse: Option<String>,
        /// Left translation by t = (x1; y1; x2; y2; z).
        #[arg(long, value_name = "EXPRS", conflicts_with_all = ["map", "family"], allow_hyphen_values = true)]
        translation: Option<String>,
        /// Listed one-parameter family, CASE:INDEX.
        #[arg(long, value_name = "CASE:INDEX", conflicts_with = "map")]
        family: Option<String>,
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        theta: Option<String>,
        #[arg(long, value_parser = ["literal", "corrected"])]
        reading: Option<String>,
    },
    /// Lift of a model surface and its curvature (euclidean, hyperbolic, spherical).
    Lift {
        #[arg(long)]
        base: String,
    },
    /// Run the tasks listed in the structure document.
    Run,
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Doc(DocError),
    Engine(subriem::Error),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Doc(DocError::Io { .. }) => "io",
            Failure::Doc(DocError::Json(_)) => "json",
            Failure::Doc(DocError::Schema(_)) => "schema",
            Failure::Doc(DocError::Engine(e)) | Failure::Engine(e) => engine_kind(e),
        }
    }

    fn exit(&self) -> u8 {
        // a failed internal cross-check is a verdict, everything else is bad input
        match self {
            Failure::Doc(DocError::Engine(subriem::Error::EngineDefect(_)))
            | Failure::Engine(subriem::Error::EngineDefect(_)) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Doc(e) => write!(f, "{e}"),
            Failure::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Engine(e) => Failure::Engine(e),
            e => Failure::Doc(e),
        }
    }
}

impl From<subriem::Error> for Failure {
    fn from(e: subriem::Error) -> Self {
        Failure::Engine(e)
    }
}

fn engine_kind(e: &subriem::Error) -> &'static str {
    use subriem::Error::*;
    match e {
        Chart(_) => "chart",
        Syntax { .. } | UnknownIdentifier(_) | UnknownFunction(_) => "expression",
        Eval(_) | NoAdmissibleSample { .. } => "evaluation",
        NotContact => "not_contact",
        SignObstruction | SignChange(_) => "normalization",
        Dimension(_) | Index(_) => "dimension",
        Singular(_) | DegenerateMetric(_) | DegeneratePlane(..) | ZeroScale(_) => "degenerate",
        Precondition(_) => "precondition",
        EngineDefect(_) => "engine_defect",
    }
}

struct Input {
    doc: StructureDoc,
    echo: Value,
}

fn load(g: &Global) -> Result<Option<Input>, Failure> {
    if let Some(path) = &g.structure {
        let doc = StructureDoc::read(&path.to_string_lossy())?;
        let echo = serde_json::to_value(&doc).expect("documents serialize");
        return Ok(Some(Input { doc, echo }));
    }
    if let Some(name) = &g.builtin {
        let doc = StructureDoc::from_builtin(name)?;
        let mut echo = serde_json::to_value(&doc).expect("documents serialize");
        echo["builtin"] = json!(name);
        return Ok(Some(Input { doc, echo }));
    }
    Ok(None)
}

fn need(input: &Option<Input>) -> Result<&Input, Failure> {
    input.as_ref().ok_or_else(|| {
        Failure::Usage("this command needs --structure FILE or --builtin NAME".into())
    })
}

fn run_task(
    command: &str,
    params: &Params,
    s: Option<&SubPRStructure>,
    plan: SamplingPlan,
) -> Result<Outcome, Failure> {
    let s = || s.ok_or_else(|| Failure::Usage(format!("'{command}' needs a structure")));
    Ok(match command {
        "invariants" => commands::invariants(s()?)?,
        "curvature" => commands::curvature(s()?, params.c.as_deref().unwrap_or("1"))?,
        "ew" => {
            let eps = params
                .epsilon
                .as_deref()
                .ok_or_else(|| Failure::Usage("ew needs an epsilon".into()))?;
            commands::ew(
                s()?,
                eps,
                params.c.as_deref(),
                params.coordinate_family,
                plan,
            )?
        }
        "isometry" => commands::isometry(s()?, params)?,
        "lift" => {
            let base = params
                .base
                .as_deref()
                .ok_or_else(|| Failure::Usage("lift needs a base".into()))?;
            commands::lift(base, plan)?
        }
        other => return Err(Failure::Usage(format!("unknown command '{other}'"))),
    })
}

fn params_from_flags(g: &Global, cmd: &Command) -> Params {
    let mut p = Params {
        c: g.c.clone(),
        epsilon: g.epsilon.clone(),
        ..Params::default()
    };
    match cmd {
        Command::Ew { coordinate_family } => p.coordinate_family = *coordinate_family,
        Command::Isometry {
            map,
            inverse,
            translation,
            family,
            theta,
            reading,
        } => {
            p.map = map.as_deref().map(commands::split_list);
            p.inverse = inverse.as_deref().map(commands::split_list);
            p.translation = translation.as_deref().map(commands::split_list);
            p.family = family.clone();
            p.theta = theta.clone();
            p.reading = reading.clone();
        }
        Command::Lift { base } => p.base = Some(base.clone()),
        _ => {}
    }
    p
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Invariants => "invariants",
        Command::Curvature => "curvature",
        Command::Ew { .. } => "ew",
        Command::Isometry { .. } => "isometry",
        Command::Lift { .. } => "lift",
        Command::Run => "run",
        Command::Selftest => "selftest",
    }
}

/// Builds the whole report; `Ok((passed, report))`.
fn execute(cli: &Cli, plan: SamplingPlan) -> Result<(bool, Value), Failure> {
    let name = command_name(&cli.command);
    let input = load(&cli.global)?;
    let structure =
        |input: &Input| -> Result<SubPRStructure, Failure> { Ok(input.doc.build(plan)?) };
    let echo = input.as_ref().map(|i| i.echo.clone());
    let mut body = Map::new();
    let passed = match &cli.command {
        Command::Selftest => {
            let o = commands::selftest(plan);
            body.insert("results".into(), o.results);
            o.passed
        }
        Command::Run => {
            let input = need(&input)?;
            let tasks = input.doc.parsed_tasks()?;
            if tasks.is_empty() {
                return Err(Failure::Usage("the document lists no tasks".into()));
            }
            let s = structure(input)?;
            let outcomes: Vec<Result<Outcome, Failure>> = std::thread::scope(|scope| {
                let handles: Vec<_> = tasks
                    .iter()
                    .map(|t| scope.spawn(|| run_task(&t.command, &t.params, Some(&s), plan)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("task thread panicked"))
                    .collect()
            });
            let mut all = true;
            let mut list = Vec::new();
            for (Task { command, params }, o) in tasks.iter().zip(outcomes) {
                let o = o?;
                all &= o.passed;
                list.push(json!({
                    "command": command,
                    "params": params,
                    "passed": o.passed,
                    "results": o.results,
                }));
            }
            body.insert("tasks".into(), Value::Array(list));
            all
        }
        Command::Lift { .. } => {
            let o = run_task(
                name,
                &params_from_flags(&cli.global, &cli.command),
                None,
                plan,
            )?;
            body.insert("results".into(), o.results);
            o.passed
        }
        cmd => {
            let s = structure(need(&input)?)?;
            let params = params_from_flags(&cli.global, cmd);
            let o = run_task(name, &params, Some(&s), plan)?;
            body.insert(
                "params".into(),
                serde_json::to_value(&params).expect("params serialize"),
            );
            body.insert("results".into(), o.results);
            o.passed
        }
    };
    body.insert("passed".into(), json!(passed));
    Ok((passed, report::envelope(name, plan, echo, body)))
}

fn human(report: &Value) -> String {
    if report["command"] == "selftest" {
        if let Ok(list) =
            serde_json::from_value::<Vec<Value>>(report["results"]["criteria"].clone())
        {
            let mut s = String::new();
            for r in list {
                let mark = if r["passed"] == true { "PASS" } else { "FAIL" };
                s.push_str(&format!(
                    "[{mark}] criterion {:>2}: {} — {}\n",
                    r["id"],
                    r["title"].as_str().unwrap_or(""),
                    r["detail"].as_str().unwrap_or("")
                ));
            }
            return s;
        }
    }
    report::render(report)
}

fn emit(json_path: &Option<PathBuf>, report: &Value) -> Result<(), Failure> {
    match json_path {
        Some(p) if p.as_os_str() == "-" => print!("{}", report::to_json(report)),
        Some(p) => {
            std::fs::write(p, report::to_json(report))
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            print!("{}", human(report));
        }
        None => print!("{}", human(report)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let plan = SamplingPlan {
        samples: cli.global.samples,
        tolerance: cli.global.tol,
        seed: cli.global.seed,
    };
    let start = Instant::now();
    let result = if plan.samples == 0 || plan.tolerance.is_nan() || plan.tolerance <= 0.0 {
        Err(Failure::Usage(
            "--samples must be positive and --tol a positive number".into(),
        ))
    } else {
        execute(&cli, plan)
    };
    if cli.global.timing {
        eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok((passed, report)) => {
            if let Err(f) = emit(&cli.global.json, &report) {
                eprintln!("error: {f}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {f}");
            let r = report::error_report(f.kind(), &f.to_string());
            if let Some(p) = &cli.global.json {
                if p.as_os_str() == "-" {
                    print!("{}", report::to_json(&r));
                } else {
                    let _ = std::fs::write(p, report::to_json(&r));
                }
            }
            ExitCode::from(f.exit())
        }
    }
}
