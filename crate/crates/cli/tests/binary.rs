use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn darts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darts")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("darts-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

/// Data rows of a CSV, skipping `#` lines and the header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

const SQUARE: [&str; 10] = ["g-curve", "--dart", "uniform(0,2)", "--payoff", "squarewave", "--d-min", "1", "--d-max", "1.5", "--steps"];

#[test]
fn exit_codes() {
    let mut args = SQUARE.to_vec();
    args.push("5");
    assert_eq!(code(&darts(&args)), 0);
    args.push("--expect-monotone");
    assert_eq!(code(&darts(&args)), 3);

    let decreasing = ["g-curve", "--dart", "normal(0,1)", "--payoff", "cos", "--d-min", "0.5", "--d-max", "3", "--expect-monotone"];
    assert_eq!(code(&darts(&decreasing)), 0);

    let budget = ["g-curve", "--dart", "uniform(0,2)", "--payoff", "squarewave", "--d-min", "1", "--d-max", "1.5", "--steps", "1"];
    let out = darts(&[&budget[..], &["--engine", "mc", "--tol", "1e-9", "--max-evals", "2000", "--expect-monotone"]].concat());
    assert_eq!(code(&out), 4, "budget outranks the increase");
    assert!(String::from_utf8_lossy(&out.stdout).contains(",budget\n"));

    assert_eq!(code(&darts(&["g-curve", "--dart", "bern(1.5)", "--payoff", "cos", "--d-min", "1", "--d-max", "2"])), 2);
    assert_eq!(code(&darts(&["g-curve", "--dart", "normal(0,1", "--payoff", "cos", "--d-min", "1", "--d-max", "2"])), 2);
    assert_eq!(code(&darts(&["g-curve", "--dart", "normal(0,1)", "--payoff", "cos", "--d-min", "2", "--d-max", "1"])), 2);
    assert_eq!(code(&darts(&["g-curve", "--payoff", "cos", "--d-min", "1", "--d-max", "2"])), 2);
    assert_eq!(code(&darts(&["frobnicate"])), 2);
    assert_eq!(code(&darts(&["--help"])), 0);
}

#[test]
fn syntax_errors_report_positions() {
    let out = darts(&["g-curve", "--dart", "normal(0,1", "--payoff", "cos", "--d-min", "1", "--d-max", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 10"));
}

#[test]
fn unknown_case_is_a_usage_error() {
    let out = darts(&["reproduce", "unknown"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("uniform-squarewave") && err.contains("tent-cf"));
}

#[test]
fn reproduce_prints_verdicts() {
    let out = darts(&["reproduce", "uniform-squarewave"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS uniform-squarewave g(1): 0.5000"));
    assert!(text.contains("PASS uniform-squarewave g(1.5): 0.6667"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn failing_case_exits_nonzero() {
    let out = darts(&["reproduce", "kdelta"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l.starts_with("FAIL kdelta")));
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let a = scratch("same.csv");
    let base = ["g-curve", "--dart", "mix(0.5:atomic((0,1)),0.5:normal(0,1))", "--payoff", "kdelta(0.1,0.5)", "--d-min", "0.5", "--d-max", "2"];
    let extra = ["--steps", "3", "--engine", "mc", "--tol", "1e-2", "--seed", "11", "--out"];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = darts(&[&base[..], &extra[..], &[a.to_str().unwrap()]].concat());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        runs.push(std::fs::read(&a).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let c = scratch("same-c.csv");
    let mut other = extra;
    other[7] = "12";
    darts(&[&base[..], &other[..], &[c.to_str().unwrap()]].concat());
    let strip = |p: &Path| rows(&read(p));
    assert_ne!(strip(&a), strip(&c), "a different seed changes the estimates");
}

#[test]
fn manifest_header() {
    let out = darts(&["g-curve", "--dart", "uniform( 0 , 2 )", "--payoff", "SquareWave", "--d-min", "1", "--d-max", "1.5", "--steps", "1", "--seed", "5"]);
    let csv = String::from_utf8_lossy(&out.stdout);
    let header: Vec<&str> = csv.lines().take_while(|l| l.starts_with('#')).collect();
    assert!(header[0].starts_with("# command: darts g-curve --dart 'uniform( 0 , 2 )'"));
    assert!(header.iter().any(|l| l.starts_with("# version: darts-cli ")));
    assert!(header.contains(&"# seed: 5"));
    assert!(header.contains(&"# dart: uniform(0,2)"));
    assert!(header.contains(&"# payoff: squarewave"));
    assert!(header.iter().any(|l| l.starts_with("# increases: (1,1.5,")));
    assert!(!csv.contains("wall time"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall time"));
    assert_eq!(csv.lines().nth(header.len()), Some("d,g,aim_0,err_est,n_evals,status"));
}

/// Every number drawn or printed in the SVG comes from the CSV next to it.
fn check_svg_against_csv(csv: &str, svg: &str, x_col: usize, y_col: usize) {
    let data = rows(csv);
    let fields: Vec<&str> = data.iter().flat_map(|r| r.iter().map(String::as_str)).collect();
    for piece in svg.split("<text").skip(1) {
        let label = piece.split('>').nth(1).unwrap().split('<').next().unwrap();
        let numeric = label.parse::<f64>().is_ok();
        assert!(!numeric || fields.contains(&label), "label {label} is not a CSV field");
    }
    let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(pts.split(' ').count(), data.len());
    let xs: Vec<f64> = data.iter().map(|r| r[x_col].parse().unwrap()).collect();
    let ys: Vec<f64> = data.iter().map(|r| r[y_col].parse().unwrap()).collect();
    let (xlo, xhi) = (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let (ylo, yhi) = (ys.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    for (p, (x, y)) in pts.split(' ').zip(xs.iter().zip(&ys)) {
        let (px, py) = p.split_once(',').unwrap();
        let (px, py): (f64, f64) = (px.parse().unwrap(), py.parse().unwrap());
        assert!((px - (80.0 + (x - xlo) / (xhi - xlo) * 616.0)).abs() < 0.01);
        assert!((py - (384.0 - (y - ylo) / (yhi - ylo) * 344.0)).abs() < 0.01);
    }
    let increases = csv.lines().find(|l| l.starts_with("# increases: ")).unwrap();
    let n_inc = if increases.ends_with("none") { 0 } else { increases.matches(';').count() + 1 };
    assert_eq!(svg.matches("<circle").count(), n_inc);
    let digest = csv.lines().find_map(|l| l.strip_prefix("# sha256 svg: ")).unwrap();
    assert_eq!(digest, darts_cli::output::sha256_hex(svg.as_bytes()));
}

#[test]
fn g_curve_svg_matches_csv() {
    let (csv, svg) = (scratch("curve.csv"), scratch("curve.svg"));
    let mut args = SQUARE.to_vec();
    args.extend(["4", "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&darts(&args)), 0);
    check_svg_against_csv(&read(&csv), &read(&svg), 0, 1);
}

#[test]
fn sweep_svg_matches_csv() {
    let (csv, svg) = (scratch("sweep.csv"), scratch("sweep.svg"));
    let out = darts(&["dartboard-sweep", "--r-min", "32", "--r-max", "38", "--steps", "3", "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&csv);
    assert!(text.contains("\nradius_mm,best_score,aim_x_mm,aim_y_mm,sector_label,err_est\n"));
    assert!(text.contains("# boundaries: "));
    let data = rows(&text);
    assert_eq!(data.len(), 4);
    assert!(data.iter().all(|r| r[4] == "20"));
    check_svg_against_csv(&text, &read(&svg), 0, 1);
}

#[test]
fn config_supplies_flags_and_command_line_wins() {
    let cfg = scratch("run.conf");
    std::fs::write(&cfg, "# distances\ndart = normal(0,1)\npayoff = cos\nd-min = 1\nd-max = 2\nsteps = 4\nexpect-monotone = true\n").unwrap();
    let out = darts(&["g-curve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(rows(&String::from_utf8_lossy(&out.stdout)).len(), 5);

    let out = darts(&["g-curve", "--config", cfg.to_str().unwrap(), "--steps", "2", "--dart", "bern(0.5)", "--d-max", "8"]);
    let csv = String::from_utf8_lossy(&out.stdout).into_owned();
    assert_eq!(rows(&csv).len(), 3);
    assert!(csv.contains("# dart: atomic((0,0.5);(1,0.5))"));
    assert_eq!(code(&out), 3, "the config's expect-monotone still applies");

    std::fs::write(&cfg, "steps 4\n").unwrap();
    assert_eq!(code(&darts(&["g-curve", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&darts(&["g-curve", "--config", scratch("missing.conf").to_str().unwrap()])), 2);
}

#[test]
fn threads_flag_is_accepted() {
    let mut args = SQUARE.to_vec();
    args.extend(["1", "--threads", "4"]);
    let out = darts(&args);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("threads=1 (requested 4)"));
}
