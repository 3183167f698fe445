//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::{exit, Command};
use std::time::Instant;

use gpt_coexist::coexistence::ellipse_area;
use gpt_coexist::geometry::Vec2;
use gpt_coexist::theory::{
    build_regular_polygon_theory, build_square_bit, probability_table, square_bit_labeled_effects,
};
use gpt_coexist::verify::{run_check, CheckReport, VerifyOptions};

struct Outcome {
    passed: bool,
    line: String,
}

fn outcome(passed: bool, line: String) -> Outcome {
    Outcome { passed, line }
}

fn library_check(name: &str) -> CheckReport {
    run_check(name, VerifyOptions::default()).unwrap_or_else(|e| CheckReport {
        name: "error",
        passed: false,
        summary: format!("error: {e}"),
        details: vec![],
    })
}

fn failed_details(r: &CheckReport) -> String {
    let bad: Vec<&str> = r
        .details
        .iter()
        .filter(|d| d.starts_with("FAIL"))
        .map(String::as_str)
        .collect();
    if bad.is_empty() {
        String::new()
    } else {
        format!(" [{}]", bad.join("; "))
    }
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut x = [0.0; 3];
    for (c, xc) in x.iter_mut().enumerate() {
        let mut mc = m;
        for r in 0..3 {
            mc[r][c] = b[r];
        }
        *xc = det(mc) / d;
    }
    Some(x)
}

/// Extremal effects of the n-gon theory by brute force over triples of
/// tight constraints `⟨e, ω⟩ ∈ {0, 1}`.
fn brute_force_extremals(n: usize) -> Vec<[f64; 3]> {
    let states: Vec<[f64; 3]> = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            [a.cos(), a.sin(), 1.0]
        })
        .collect();
    let planes: Vec<([f64; 3], f64)> = states.iter().flat_map(|&w| [(w, 0.0), (w, 1.0)]).collect();
    let mut out: Vec<[f64; 3]> = Vec::new();
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            for k in j + 1..planes.len() {
                let m = [planes[i].0, planes[j].0, planes[k].0];
                let Some(x) = solve3(m, [planes[i].1, planes[j].1, planes[k].1]) else {
                    continue;
                };
                let ok = states.iter().all(|w| {
                    let p = w[0] * x[0] + w[1] * x[1] + w[2] * x[2];
                    (-1e-9..=1.0 + 1e-9).contains(&p)
                });
                if ok && !out.iter().any(|y| dist(y, &x) < 1e-7) {
                    out.push(x);
                }
            }
        }
    }
    out
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Extremal effects written out from the closed-form table.
fn table_formulas(n: usize) -> Vec<[f64; 3]> {
    let nf = n as f64;
    let mut v = vec![[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / nf;
        if n.is_multiple_of(2) {
            let t = (PI / nf).tan();
            v.push([
                0.5 * (th.cos() + t * th.sin()),
                0.5 * (-th.sin() + t * th.cos()),
                0.5,
            ]);
        } else {
            let c = ((nf - 1.0) * PI / nf).cos();
            let s = 1.0 / (1.0 - c);
            v.push([s * th.cos(), s * th.sin(), -s * c]);
            v.push([-s * th.cos(), -s * th.sin(), s]);
        }
    }
    v
}

/// Largest distance from a point of `a` to its nearest point of `b`, in
/// both directions, or infinity when the counts differ.
fn set_distance(a: &[[f64; 3]], b: &[Vec<f64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let one_way = a
        .iter()
        .map(|x| b.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let other_way = b
        .iter()
        .map(|y| a.iter().map(|x| dist(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    one_way.max(other_way)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut enumerated = Vec::new();
    for n in 3..=12 {
        match build_regular_polygon_theory(n) {
            Ok(t) => enumerated.push(
                t.extremal_effects()
                    .iter()
                    .map(|e| e.coords().to_vec())
                    .collect::<Vec<_>>(),
            ),
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let mut worst: f64 = 0.0;
    let mut counts_ok = true;
    for (i, got) in enumerated.iter().enumerate() {
        let n = i + 3;
        let want = if n % 2 == 1 { 2 * n + 2 } else { n + 2 };
        counts_ok &= got.len() == want;
        worst = worst.max(set_distance(&table_formulas(n), got));
        let brute: Vec<Vec<f64>> = brute_force_extremals(n)
            .iter()
            .map(|x| x.to_vec())
            .collect();
        worst = worst.max(set_distance(&table_formulas(n), &brute));
    }
    let lib = library_check("table2");
    let passed = counts_ok && worst < 1e-9 && secs < 5.0 && lib.passed;
    outcome(
        passed,
        format!(
            "extremal effect sets: n=3..12 counts ok {counts_ok}, max error {worst:.3e} vs formulas and brute force, enumeration {secs:.3} s{}",
            failed_details(&lib)
        ),
    )
}

fn criterion_2() -> Outcome {
    let native_states = [
        [0.75, -0.25, 0.25, 0.25],
        [0.25, 0.25, -0.25, 0.75],
        [0.25, 0.25, 0.75, -0.25],
        [-0.25, 0.75, 0.25, 0.25],
    ];
    let native_effects = [
        [0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
        [1.0, 1.0, 1.0, 1.0],
    ];
    let printed = [
        [0.0, 1.0, 0.0, 0.0, 1.0, 1.0],
        [0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 1.0, 1.0, 0.0, 1.0],
    ];
    let t = build_square_bit();
    let effects: Vec<_> = square_bit_labeled_effects()
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    let table = match probability_table(t.states(), &effects) {
        Ok(x) => x,
        Err(e) => return outcome(false, format!("square-bit probability table: {e}")),
    };
    let mut worst: f64 = 0.0;
    for (i, w) in native_states.iter().enumerate() {
        for (j, e) in native_effects.iter().enumerate() {
            let native: f64 = w.iter().zip(e).map(|(a, b)| a * b).sum();
            worst = worst
                .max((native - printed[i][j]).abs())
                .max((table[i][j] - printed[i][j]).abs());
        }
    }
    let lib = library_check("table1");
    outcome(
        worst < 1e-12 && lib.passed && table.len() == 4,
        format!(
            "square-bit probability table: 4x6 max error {worst:.3e}{}",
            failed_details(&lib)
        ),
    )
}

fn timed_check(label: &str, name: &str, limit: Option<f64>) -> Outcome {
    let start = Instant::now();
    let r = library_check(name);
    let secs = start.elapsed().as_secs_f64();
    let in_time = limit.is_none_or(|l| secs < l);
    outcome(
        r.passed && in_time,
        format!("{label}: {} ({secs:.2} s){}", r.summary, failed_details(&r)),
    )
}

fn criterion_7() -> Outcome {
    let e = Vec2::new(0.2, 0.0);
    let closed = PI * 0.5 * (0.25f64 - 0.04).sqrt();
    let err = (ellipse_area(e) - closed).abs();
    let r = library_check("quantum-limit");
    outcome(
        r.passed && err < 1e-12,
        format!(
            "quantum limit: {}; ellipse area error {err:.3e}{}",
            r.summary,
            failed_details(&r)
        ),
    )
}

fn run_twice(args: &[&str]) -> Result<bool, String> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gptc"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() {
        return Err(format!(
            "`gptc {}` exited with {}",
            args.join(" "),
            a.status
        ));
    }
    Ok(a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status)
}

fn criterion_10() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["verify", "--seed", "1"],
        &["region", "--polygon", "6", "--edge-ratio", "0.6667"],
        &[
            "region",
            "--polygon",
            "8",
            "--e",
            "0.1,-0.2",
            "--svg",
            "/dev/stdout",
        ],
        &["limit", "--e", "0.2,0", "--n-list", "8,16,32,64,128"],
    ];
    let mut identical = 0;
    let mut problems = Vec::new();
    for args in runs {
        match run_twice(args) {
            Ok(true) => identical += 1,
            Ok(false) => problems.push(format!("`gptc {}` differs", args.join(" "))),
            Err(e) => problems.push(e),
        }
    }
    let lib = library_check("determinism");
    let mut line = format!(
        "determinism: {identical}/{} command pairs byte-identical; {}",
        runs.len(),
        lib.summary
    );
    if !problems.is_empty() {
        line.push_str(&format!(" [{}]", problems.join("; ")));
    }
    line.push_str(&failed_details(&lib));
    outcome(problems.is_empty() && lib.passed, line)
}

fn main() {
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (
            3,
            Box::new(|| {
                timed_check(
                    "criterion-oracle equivalence",
                    "criterion-oracle",
                    Some(60.0),
                )
            }),
        ),
        (
            4,
            Box::new(|| timed_check("extremal vanishing", "extremal-vanishing", None)),
        ),
        (
            5,
            Box::new(|| timed_check("parallelogram characterization", "parallelogram", None)),
        ),
        (
            6,
            Box::new(|| timed_check("hyperplane iff point symmetry", "prop2", None)),
        ),
        (7, Box::new(criterion_7)),
        (
            8,
            Box::new(|| timed_check("classical coexistence", "classical", None)),
        ),
        (
            9,
            Box::new(|| timed_check("edge structure", "edge-lemmas", None)),
        ),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, run) in criteria {
        let o = run();
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!("{mark} criterion {i:>2}: {}", o.line);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        exit(1);
    }
}
