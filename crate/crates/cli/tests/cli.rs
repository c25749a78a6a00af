use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;
use std::time::Duration;

use jumpmc_cli::plot::render_svg;
use jumpmc_cli::{effective_config, RunArgs};
use jumpmc_core::config::MethodSpec;
use jumpmc_core::mlmc::SummaryRow;
use jumpmc_core::ProblemConfig;

const SMALL: [&str; 8] = ["--methods", "adapted,nonadapted", "--levels", "0..1", "--reps", "2", "--ref-level", "2"];

fn jumpmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jumpmc"))
        .args(args)
        .env_remove("JUMPMC_THREADS")
        .output()
        .expect("binary runs")
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// One small study shared by the tests below; written into a nested,
/// not yet existing directory.
fn small_run() -> &'static PathBuf {
    static RUN: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    &RUN.get_or_init(|| {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("nested/dir/out");
        let mut args = vec!["run", "-q", "--threads", "2", "--out", path_arg(&out)];
        args.extend(SMALL);
        let o = jumpmc(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (tmp, out)
    })
    .1
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn run_writes_documented_outputs() {
    let out = small_run();
    for name in jumpmc_cli::OUTPUTS {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let (h, rows) = read_csv(&out.join("study.csv"));
    assert_eq!(h, ["method", "L", "h_L", "rep", "estimate", "reference", "rel_error"]);
    assert_eq!(rows.len(), 2 * 2 * 2);
    let (h, rows) = read_csv(&out.join("summary.csv"));
    assert_eq!(h, ["method", "L", "h_L", "reps", "rmse", "slope"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], "adapted-standard");
    assert_eq!(rows[2][0], "nonadapted-standard");
    let (h, _) = read_csv(&out.join("timing.csv"));
    assert_eq!(h, ["method", "L", "rep", "wall_seconds"]);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "jumpmc");
    assert_eq!(manifest["seed"], 20240501);
    assert_eq!(manifest["threads"], 2);
    assert_eq!(manifest["reference"]["level"], 2);
    let svg = std::fs::read_to_string(out.join("rmse.svg")).unwrap();
    roxmltree::Document::parse(&svg).expect("well-formed svg");
}

#[test]
fn summary_is_recomputable_from_study() {
    let out = small_run();
    let (_, study) = read_csv(&out.join("study.csv"));
    let (_, summary) = read_csv(&out.join("summary.csv"));
    for s in &summary {
        let rows: Vec<&Vec<String>> = study.iter().filter(|r| r[0] == s[0] && r[1] == s[1]).collect();
        assert_eq!(rows.len().to_string(), s[3]);
        let reference: f64 = rows[0][5].parse().unwrap();
        let sq: f64 = rows
            .iter()
            .map(|r| (r[4].parse::<f64>().unwrap() - reference).powi(2))
            .sum();
        let rmse = (sq / rows.len() as f64).sqrt() / reference.abs();
        assert_eq!(rmse.to_string(), s[4], "{s:?}");
    }
    for method in ["adapted-standard", "nonadapted-standard"] {
        let pts: Vec<(f64, f64)> = summary
            .iter()
            .filter(|s| s[0] == method)
            .map(|s| (s[2].parse::<f64>().unwrap().ln(), s[4].parse::<f64>().unwrap().ln()))
            .collect();
        // two points: the slope is the secant
        let secant = (pts[1].1 - pts[0].1) / (pts[1].0 - pts[0].0);
        let written: f64 = summary.iter().find(|s| s[0] == method).unwrap()[5].parse().unwrap();
        assert!((written - secant).abs() <= 1e-12 * secant.abs(), "{written} vs {secant}");
    }
}

#[test]
fn rerun_is_byte_identical_across_thread_counts() {
    let first = small_run();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("again");
    let config = first.join("config.toml");
    // fresh cache, so the reference is recomputed as well
    let o = jumpmc(&["run", "-q", "--config", path_arg(&config), "--threads", "1", "--out", path_arg(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["study.csv", "summary.csv"] {
        let a = std::fs::read(first.join(name)).unwrap();
        let b = std::fs::read(out.join(name)).unwrap();
        assert!(a == b, "{name} differs");
    }
}

#[test]
fn cached_reference_is_reused() {
    let first = small_run();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("cached");
    let mut args = vec!["run", "-q", "--levels", "0", "--cache-dir", path_arg(first), "--out", path_arg(&out)];
    args.extend(&SMALL[..2]);
    args.extend(&SMALL[4..]);
    let o = jumpmc(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let read = |p: &Path| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(p.join("manifest.json")).unwrap()).unwrap()
    };
    let (a, b) = (read(first), read(&out));
    assert_eq!(b["reference"]["cached"], true);
    assert_eq!(a["reference"]["value"], b["reference"]["value"]);
    assert_eq!(a["config_fingerprint"], b["config_fingerprint"]);
}

#[test]
fn unwritable_output_exits_with_io_code() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "not a directory").unwrap();
    let out = blocker.join("out");
    let o = jumpmc(&["run", "-q", "--levels", "0", "--ref-level", "1", "--out", path_arg(&out)]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn configuration_errors_exit_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let cases: [(&str, &[&str]); 5] = [
        ("kappa = 0.4\n", &[]),
        ("unknown_key = 1\n", &[]),
        ("", &["--levels", "0..3", "--ref-level", "3"]),
        ("", &["--methods", "adapted,bogus"]),
        ("[study]\nreps = 0\n", &[]),
    ];
    for (i, (text, extra)) in cases.iter().enumerate() {
        let cfg = tmp.path().join(format!("c{i}.toml"));
        std::fs::write(&cfg, text).unwrap();
        let mut args = vec!["run", "-q", "--config", path_arg(&cfg), "--out", path_arg(&out)];
        args.extend(*extra);
        let o = jumpmc(&args);
        assert_eq!(o.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let missing = tmp.path().join("absent.toml");
    let o = jumpmc(&["run", "--config", path_arg(&missing), "--out", path_arg(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_config_file_means_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("empty.toml");
    std::fs::write(&cfg, "").unwrap();
    let args = RunArgs {
        config: Some(cfg),
        out: tmp.path().join("out"),
        ..RunArgs::default()
    };
    let loaded = effective_config(&args).unwrap();
    assert_eq!(loaded, ProblemConfig::default());
    assert_eq!(loaded.fingerprint(), ProblemConfig::default().fingerprint());
}

#[test]
fn schedule_command_prints_sample_counts() {
    let o = jumpmc(&["schedule", "--method", "adapted", "--level", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let counts: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().last().unwrap())
        .collect();
    assert_eq!(counts, ["16384", "19", "11", "5"]);
    let o = jumpmc(&["schedule", "--method", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

fn summary_row(method: &str, level: usize, h_bar: f64, rmse: f64) -> SummaryRow {
    SummaryRow {
        method: MethodSpec::parse_list(method).unwrap()[0],
        level,
        h_bar,
        reps: 20,
        rmse,
        mean_wall_time: Duration::from_millis(10 * (level as u64 + 1)),
    }
}

/// Markers inside the clipped data group of panel `i`.
fn markers_in_panel(doc: &roxmltree::Document, i: usize) -> usize {
    let url = format!("url(#clip{i})");
    doc.descendants()
        .filter(|n| n.attribute("clip-path") == Some(url.as_str()))
        .flat_map(|g| g.descendants())
        .filter(|n| n.attribute("class") == Some("marker"))
        .count()
}

fn legend_labels(doc: &roxmltree::Document) -> Vec<String> {
    doc.descendants()
        .filter(|n| n.attribute("class") == Some("legend"))
        .map(|g| g.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect::<String>())
        .collect()
}

#[test]
fn single_point_plot_has_one_marker_per_panel() {
    let svg = render_svg(&[summary_row("adapted", 0, 0.25, 0.07)]);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(markers_in_panel(&doc, 0), 1);
    assert_eq!(markers_in_panel(&doc, 1), 1);
}

#[test]
fn exact_square_law_is_annotated_with_slope_two() {
    let rows: Vec<SummaryRow> = (0..4)
        .map(|l| {
            let h = 0.25 * 0.5f64.powi(l);
            summary_row("adapted", l as usize, h, 3.0 * h * h)
        })
        .collect();
    let svg = render_svg(&rows);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(legend_labels(&doc), ["adapted-standard (slope 2.00)"]);
    assert_eq!(markers_in_panel(&doc, 0), 4);
}

#[test]
fn two_methods_get_distinct_series() {
    let mut rows = Vec::new();
    for l in 0..3 {
        let h = 0.25 * 0.5f64.powi(l);
        rows.push(summary_row("adapted", l as usize, h, h * h));
        rows.push(summary_row("nonadapted", l as usize, h, h));
    }
    let svg = render_svg(&rows);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let labels = legend_labels(&doc);
    assert_eq!(labels, ["adapted-standard (slope 2.00)", "nonadapted-standard (slope 1.00)"]);
    let colors: std::collections::BTreeSet<&str> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("marker"))
        .filter_map(|n| n.attribute("fill"))
        .collect();
    assert_eq!(colors.len(), 2);
    assert!(svg.contains("order 1") && svg.contains("order 2"));
}
