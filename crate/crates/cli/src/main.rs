mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gpt_coexist::coexistence::{
    coexist_oracle, coexistence_region, criterion_verdict, ellipse_area, quantum_limit_gap,
    CoexistenceVerdict,
};
use gpt_coexist::geometry::Vec2;
use gpt_coexist::theory::{
    build_classical_theory, build_displaced_hexagon, build_regular_polygon_theory,
    build_square_bit, from_json, to_json, to_json_string, Effect, Theory,
};
use gpt_coexist::verify::{run_all, run_check, VerifyOptions, BOUNDARY_BAND};
use gpt_coexist::Error;
use serde_json::json;

use output::{fmt, region_csv, region_svg, ProbeStats};

#[derive(Parser)]
#[command(
    name = "gptc",
    version,
    about = "Coexistence of effects in polygon probability theories"
)]
struct Cli {
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for effect membership and criterion verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Regular polygon theory with N pure states.
    #[arg(long, value_name = "N")]
    polygon: Option<usize>,
    /// Classical theory with N levels.
    #[arg(long, value_name = "N")]
    classical: Option<usize>,
    /// The square bit.
    #[arg(long)]
    square_bit: bool,
    /// Hexagon effect space with one opposite pair displaced by D.
    #[arg(long, value_name = "D")]
    displaced_hexagon: Option<f64>,
    /// A theory document written by `gptc theory`.
    #[arg(long, value_name = "FILE")]
    theory: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Criterion,
    Oracle,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Build a theory and write its document.
    Theory {
        #[command(flatten)]
        source: Source,
    },
    /// List the extremal effects of a theory as CSV.
    Effects {
        #[command(flatten)]
        source: Source,
    },
    /// Decide whether two effects coexist.
    Coexist {
        #[command(flatten)]
        source: Source,
        /// First effect: x,y (unbiased) or all coordinates.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// Second effect.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Coexistence region of an unbiased effect in an even polygon theory.
    Region {
        #[arg(long, value_name = "N")]
        polygon: usize,
        /// Fixed effect x,y.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["edge_ratio", "vertex_ratio"])]
        e: Option<String>,
        /// Place e at this fraction of the apothem toward the k=0 edge.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "vertex_ratio")]
        edge_ratio: Option<f64>,
        /// Place e at this fraction of the circumradius toward the k=0 vertex.
        #[arg(long, allow_hyphen_values = true)]
        vertex_ratio: Option<f64>,
        /// Also draw the region as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Area gap to the qubit ellipse for a list of even n.
    Limit {
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
        n_list: Vec<usize>,
    },
    /// Run the verification checks.
    Verify {
        /// Run a single check.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

/// Exit codes: 2 bad input, 3 construction failure, 4 criterion not
/// applicable, 1 failed verification, 5 criterion and oracle disagree.
fn input_error(e: Error) -> Failure {
    match e {
        Error::OddPolygon(_) => Failure::new(4, e.to_string()),
        _ => Failure::new(2, e.to_string()),
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(Failure::new(2, "--tol must be a nonnegative number"));
    }
    match &cli.command {
        Command::Theory { source } => cmd_theory(cli, source),
        Command::Effects { source } => cmd_effects(cli, source),
        Command::Coexist {
            source,
            e,
            f,
            method,
        } => cmd_coexist(cli, source, e, f, *method),
        Command::Region {
            polygon,
            e,
            edge_ratio,
            vertex_ratio,
            svg,
        } => cmd_region(
            cli,
            *polygon,
            e.as_deref(),
            *edge_ratio,
            *vertex_ratio,
            svg.as_ref(),
        ),
        Command::Limit { e, n_list } => cmd_limit(cli, e, n_list),
        Command::Verify { only, samples } => cmd_verify(cli, only.as_deref(), *samples),
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Summary lines go to stdout when the document went to a file, otherwise
/// to stderr so stdout stays machine-readable.
fn summary(cli: &Cli, line: &str) {
    if cli.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn build(source: &Source) -> Result<Theory, Failure> {
    let built = if let Some(n) = source.polygon {
        build_regular_polygon_theory(n)
    } else if let Some(n) = source.classical {
        build_classical_theory(n)
    } else if source.square_bit {
        Ok(build_square_bit())
    } else if let Some(d) = source.displaced_hexagon {
        build_displaced_hexagon(d)
    } else if let Some(path) = &source.theory {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", path.display())))?;
        from_json(&text)
    } else {
        unreachable!("clap requires one theory source")
    };
    built.map_err(|e| Failure::new(3, e.to_string()))
}

fn cmd_theory(cli: &Cli, source: &Source) -> CliResult {
    let t = build(source)?;
    emit(cli, &to_json(&t))?;
    summary(cli, &format!("theory: {}", t.name()));
    summary(
        cli,
        &format!("extremal effects: {}", t.extremal_effects().len()),
    );
    let plane = match t.reflecting_hyperplane() {
        Some(h) => {
            let normal: Vec<String> = h.normal.iter().map(|c| format!("{c}")).collect();
            format!("normal ({}) offset {}", normal.join(", "), h.offset)
        }
        None => "none".into(),
    };
    summary(cli, &format!("reflecting hyperplane: {plane}"));
    Ok(())
}

fn cmd_effects(cli: &Cli, source: &Source) -> CliResult {
    let t = build(source)?;
    let mut text = format!("# theory={}\n# d={}\n", t.name(), t.dim());
    let cols: Vec<String> = (0..t.dim()).map(|i| format!("c{i}")).collect();
    text.push_str(&format!("index,{}\n", cols.join(",")));
    for (i, e) in t.extremal_effects().iter().enumerate() {
        let cells: Vec<String> = e.coords().iter().map(|&c| fmt(c)).collect();
        text.push_str(&format!("{i},{}\n", cells.join(",")));
    }
    emit(cli, &text)
}

fn parse_coords(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::new(2, format!("bad coordinate `{c}` in `{s}`")))
        })
        .collect()
}

fn parse_vec2(s: &str) -> Result<Vec2, Failure> {
    match parse_coords(s)?.as_slice() {
        &[x, y] => Ok(Vec2::new(x, y)),
        _ => Err(Failure::new(2, format!("expected x,y, got `{s}`"))),
    }
}

/// Two coordinates give the unbiased effect `(x, y, 1/2)` of a
/// three-dimensional theory; otherwise all d coordinates are expected.
fn parse_effect(t: &Theory, s: &str) -> Result<Effect, Failure> {
    let c = parse_coords(s)?;
    let e = if c.len() == 2 && t.dim() == 3 {
        Effect::unbiased(Vec2::new(c[0], c[1]))
    } else if c.len() == t.dim() {
        Effect::new(c).map_err(input_error)?
    } else {
        return Err(Failure::new(
            2,
            format!(
                "`{s}` has {} coordinates; theory has d={}",
                c.len(),
                t.dim()
            ),
        ));
    };
    Ok(e)
}

fn verdict_json(v: &CoexistenceVerdict) -> serde_json::Value {
    let mut obj = json!({ "coexistent": v.coexistent });
    if let Some(w) = &v.witness {
        obj["witness"] = json!(w.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>());
    }
    if let Some(s) = v.slack {
        obj["slack"] = json!(s);
    }
    if let Some(b) = &v.binding {
        obj["binding"] = json!(b);
    }
    obj
}

fn cmd_coexist(cli: &Cli, source: &Source, e: &str, f: &str, method: Method) -> CliResult {
    let t = build(source)?;
    let (e, f) = (parse_effect(&t, e)?, parse_effect(&t, f)?);
    for x in [&e, &f] {
        if !t.is_effect(x, cli.tol) {
            return Err(Failure::new(
                2,
                format!("{:?} is not an effect of {}", x.coords(), t.name()),
            ));
        }
    }
    let criterion = if method == Method::Oracle {
        None
    } else {
        let n = match source.polygon {
            Some(n) if n % 2 == 0 => n,
            Some(n) => return Err(Failure::new(4, Error::OddPolygon(n).to_string())),
            None => {
                return Err(Failure::new(
                    4,
                    "the criterion applies only to even polygon theories",
                ))
            }
        };
        if (e.coords()[2] - 0.5).abs() > cli.tol || (f.coords()[2] - 0.5).abs() > cli.tol {
            return Err(Failure::new(
                2,
                "the criterion needs unbiased effects (z = 1/2)",
            ));
        }
        let mut v = criterion_verdict(n, e.planar(), f.planar()).map_err(input_error)?;
        v.coexistent = v.slack.expect("criterion slack") >= -cli.tol;
        Some(v)
    };
    let oracle = if method == Method::Criterion {
        None
    } else {
        Some(coexist_oracle(&t, &e, &f).map_err(|e| Failure::new(3, e.to_string()))?)
    };
    let (doc, disagree) = match (&criterion, &oracle) {
        (Some(c), None) => {
            let mut d = verdict_json(c);
            d["method"] = json!("criterion");
            (d, false)
        }
        (None, Some(o)) => {
            let mut d = verdict_json(o);
            d["method"] = json!("oracle");
            (d, false)
        }
        (Some(c), Some(o)) => {
            let slack = c.slack.expect("criterion slack");
            let in_band = slack.abs() <= BOUNDARY_BAND.max(cli.tol);
            let agree = c.coexistent == o.coexistent;
            let d = json!({
                "method": "both",
                "coexistent": o.coexistent,
                "agree": agree,
                "boundary_band": in_band,
                "slack": slack,
                "criterion": verdict_json(c),
                "oracle": verdict_json(o),
            });
            (d, !agree && !in_band)
        }
        (None, None) => unreachable!("some method runs"),
    };
    let mut text = to_json_string(&doc);
    text.push('\n');
    emit(cli, &text)?;
    if disagree {
        return Err(Failure::new(
            5,
            "criterion and oracle disagree outside the boundary band",
        ));
    }
    Ok(())
}

fn cmd_region(
    cli: &Cli,
    n: usize,
    e: Option<&str>,
    edge_ratio: Option<f64>,
    vertex_ratio: Option<f64>,
    svg: Option<&PathBuf>,
) -> CliResult {
    if n % 2 == 1 {
        return Err(Failure::new(4, Error::OddPolygon(n).to_string()));
    }
    let nf = n as f64;
    let point = match (e, edge_ratio, vertex_ratio) {
        (Some(s), None, None) => parse_vec2(s)?,
        (None, Some(s), None) => Vec2::new(0.5 * s, 0.0),
        (None, None, Some(v)) => {
            let t = std::f64::consts::PI / nf;
            Vec2::from_angle(t) * (0.5 / t.cos() * v)
        }
        (None, None, None) => Vec2::ZERO,
        _ => {
            return Err(Failure::new(
                2,
                "give at most one of --e, --edge-ratio, --vertex-ratio",
            ))
        }
    };
    let report = coexistence_region(n, point).map_err(input_error)?;
    let probe = ProbeStats::compute(&report).map_err(input_error)?;
    emit(cli, &region_csv(&report, &probe))?;
    if let Some(path) = svg {
        fs::write(path, region_svg(&report))
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))?;
    }
    summary(cli, &format!("area: {}", fmt(report.area)));
    Ok(())
}

fn cmd_limit(cli: &Cli, e: &str, n_list: &[usize]) -> CliResult {
    let e = parse_vec2(e)?;
    if e.norm() >= 0.5 {
        return Err(Failure::new(
            2,
            format!("|e| = {} must be below 1/2", e.norm()),
        ));
    }
    let mut text = format!(
        "# e={},{}\n# version={}\nn,area,ellipse_area,gap\n",
        fmt(e.x),
        fmt(e.y),
        env!("CARGO_PKG_VERSION")
    );
    let ellipse = ellipse_area(e);
    for &n in n_list {
        let area = coexistence_region(n, e).map_err(input_error)?.area;
        let gap = quantum_limit_gap(n, e).map_err(input_error)?;
        text.push_str(&format!(
            "{n},{},{},{}\n",
            fmt(area),
            fmt(ellipse),
            fmt(gap)
        ));
    }
    emit(cli, &text)
}

fn cmd_verify(cli: &Cli, only: Option<&str>, samples: usize) -> CliResult {
    let opts = VerifyOptions {
        seed: cli.seed.unwrap_or(1),
        samples,
    };
    let reports = match only {
        Some(name) => vec![run_check(name, opts).map_err(input_error)?],
        None => run_all(opts),
    };
    let mut text = String::new();
    for r in &reports {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("{mark} {}: {}\n", r.name, r.summary));
        for d in &r.details {
            text.push_str(&format!("    {d}\n"));
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let failed = reports.len() - passed;
    let machine = json!({
        "seed": opts.seed,
        "samples": opts.samples,
        "passed": passed,
        "failed": failed,
        "checks": reports.iter().map(|r| json!({"name": r.name, "passed": r.passed})).collect::<Vec<_>>(),
    });
    text.push_str(&to_json_string(&machine));
    text.push('\n');
    emit(cli, &text)?;
    if failed > 0 {
        return Err(Failure::new(1, format!("{failed} check(s) failed")));
    }
    Ok(())
}
