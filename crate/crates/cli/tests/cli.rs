use std::fs;
use std::process::{Command, Output};

fn gptc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gptc"))
        .args(args)
        .output()
        .expect("run gptc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("JSON on stdout")
}

#[test]
fn theory_polygon_six() {
    let o = gptc(&["theory", "--polygon", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["extremal_effects"].as_array().unwrap().len(), 8);
    assert_eq!(doc["reflecting_hyperplane"]["offset"].as_f64(), Some(0.5));
    assert!(stderr(&o).contains("extremal effects: 8"));
    assert!(stderr(&o).contains("offset 0.5"));
}

#[test]
fn theory_square_bit_and_bad_polygon() {
    let o = gptc(&["theory", "--square-bit"]);
    assert_eq!(json(&o)["extremal_effects"].as_array().unwrap().len(), 6);
    assert_eq!(gptc(&["theory", "--polygon", "2"]).status.code(), Some(3));
    assert_eq!(
        gptc(&["theory", "--classical", "13"]).status.code(),
        Some(3)
    );
}

#[test]
fn theory_source_must_be_unique() {
    assert_eq!(gptc(&["theory"]).status.code(), Some(2));
    let o = gptc(&["theory", "--polygon", "6", "--square-bit"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theory_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    let p = path.to_str().unwrap();
    for args in [
        vec!["theory", "--polygon", "6", "--out", p],
        vec!["theory", "--displaced-hexagon", "0.25", "--out", p],
    ] {
        let o = gptc(&args);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("extremal effects"));
        let first: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let o = gptc(&["theory", "--theory", p]);
        assert_eq!(o.status.code(), Some(0));
        let again = json(&o);
        let a = first["extremal_effects"].as_array().unwrap();
        let b = again["extremal_effects"].as_array().unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            for (u, v) in x.as_array().unwrap().iter().zip(y.as_array().unwrap()) {
                assert!((u.as_f64().unwrap() - v.as_f64().unwrap()).abs() < 1e-12);
            }
        }
    }
    assert_eq!(
        gptc(&["theory", "--theory", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn effects_csv() {
    let o = gptc(&["effects", "--polygon", "4"]);
    let text = stdout(&o);
    assert!(text.starts_with("# theory=polygon-4\n# d=3\nindex,c0,c1,c2\n"));
    assert_eq!(text.lines().count(), 3 + 6);
}

#[test]
fn coexist_examples() {
    let o = gptc(&[
        "coexist",
        "--polygon",
        "4",
        "--e",
        "0.5,0.5",
        "--f",
        "0.5,-0.5",
        "--method",
        "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["coexistent"], false);
    assert_eq!(v["agree"], true);

    let o = gptc(&[
        "coexist",
        "--polygon",
        "6",
        "--e",
        "0,0",
        "--f",
        "0.3,0.1",
        "--method",
        "criterion",
    ]);
    assert_eq!(json(&o)["coexistent"], true);

    let o = gptc(&[
        "coexist",
        "--polygon",
        "5",
        "--e",
        "0,0",
        "--f",
        "0,0",
        "--method",
        "criterion",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = gptc(&[
        "coexist",
        "--square-bit",
        "--e",
        "0,0",
        "--f",
        "0,0",
        "--method",
        "criterion",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn coexist_oracle_witness_and_bad_coords() {
    let o = gptc(&[
        "coexist",
        "--polygon",
        "6",
        "--e",
        "0.2,0",
        "--f",
        "0,-0.2",
        "--method",
        "oracle",
    ]);
    let v = json(&o);
    assert_eq!(v["coexistent"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    let o = gptc(&["coexist", "--polygon", "6", "--e", "1,0", "--f", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gptc(&["coexist", "--polygon", "6", "--e", "a,b", "--f", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gptc(&[
        "coexist",
        "--classical",
        "2",
        "--e",
        "0.3,0.9",
        "--f",
        "1,0",
        "--method",
        "oracle",
    ]);
    assert_eq!(json(&o)["coexistent"], true);
}

#[test]
fn region_examples() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    let o = gptc(&[
        "region",
        "--polygon",
        "6",
        "--edge-ratio",
        "0.6667",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("# n=6\n"));
    assert!(csv.contains("# method=criterion\n"));
    assert!(csv.contains("\nx,y\n"));
    let drawing = fs::read_to_string(&svg).unwrap();
    assert!(drawing.contains("viewBox=\"0 0 600 600\""));
    for color in ["#1f6fb4", "#2ca02c", "#ffffff", "#e8e8e8"] {
        assert!(drawing.contains(color));
    }

    // Edge midpoint is not extremal: the antipodal pair makes every f tight,
    // and the oracle confirms a rhombus of area 1/(2√3), not an empty set.
    let o = gptc(&["region", "--polygon", "6", "--edge-ratio", "1.0"]);
    let area_line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("# area="))
        .unwrap()
        .to_string();
    let area: f64 = area_line.trim_start_matches("# area=").parse().unwrap();
    assert!((area - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-12);
    let o = gptc(&[
        "coexist",
        "--polygon",
        "6",
        "--e",
        "0.5,0",
        "--f",
        "0.2,0",
        "--method",
        "oracle",
    ]);
    assert_eq!(json(&o)["coexistent"], true);

    let o = gptc(&["region", "--polygon", "6", "--vertex-ratio", "1.0"]);
    let area_line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("# area="))
        .unwrap()
        .to_string();
    let area: f64 = area_line.trim_start_matches("# area=").parse().unwrap();
    assert!(area < 1e-12);

    assert_eq!(gptc(&["region", "--polygon", "5"]).status.code(), Some(4));
    assert_eq!(
        gptc(&["region", "--polygon", "6", "--e", "0.6,0"])
            .status
            .code(),
        Some(2)
    );
    let o = gptc(&[
        "region",
        "--polygon",
        "6",
        "--edge-ratio",
        "0.5",
        "--vertex-ratio",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn region_probe_grid_agrees() {
    let o = gptc(&["region", "--polygon", "12", "--vertex-ratio", "0.5"]);
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("# probes="))
        .unwrap()
        .to_string();
    let nums: Vec<usize> = line
        .split(' ')
        .skip(1)
        .map(|kv| kv.split('=').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(nums[0], nums[1], "{line}");
}

#[test]
fn limit_examples() {
    let o = gptc(&["limit", "--e", "0.2,0", "--n-list", "8,16,32,64,128"]);
    assert_eq!(o.status.code(), Some(0));
    let gaps: Vec<f64> = stdout(&o)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 5);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));

    let o = gptc(&["limit", "--e", "0,0", "--n-list", "8"]);
    let gap: f64 = stdout(&o)
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(3)
        .unwrap()
        .parse()
        .unwrap();
    let pi = std::f64::consts::PI;
    let want = (2.0 * (pi / 8.0).tan() - pi * 0.5 * 0.5) / (pi / 4.0);
    assert!((gap - want).abs() < 1e-12);

    assert_eq!(gptc(&["limit", "--e", "0.6,0"]).status.code(), Some(2));
}

#[test]
fn verify_single_check() {
    let o = gptc(&["verify", "--only", "table2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS table2"));
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["passed"], 1);
    assert_eq!(last["failed"], 0);
    assert_eq!(gptc(&["verify", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn region_output_is_byte_identical() {
    let args = ["region", "--polygon", "8", "--e", "0.1,-0.2"];
    assert_eq!(gptc(&args).stdout, gptc(&args).stdout);
}
