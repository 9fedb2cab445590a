use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SAMPLE: &str = "55.948413846216582,-3.363214449536430,00:11:39\n\
                    55.944855742591862,-3.361568243977290,00:12:41\n\
                    55.937544319811479,-3.358045792384101,00:13:43\n";

fn routeprobe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_routeprobe"))
        .args(args)
        .env_remove("ROUTEPROBE_CONFIG_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(dir: &Path, count: &str, seed: &str, extra: &[&str]) -> Output {
    let mut args = vec![
        "synth",
        "--count",
        count,
        "--seed",
        seed,
        "--out",
        path(dir),
    ];
    args.extend_from_slice(extra);
    routeprobe(&args)
}

fn labels(dir: &Path) -> Vec<(String, String)> {
    fs::read_to_string(dir.join("labels.txt"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.to_string(), b.to_string())
        })
        .collect()
}

#[test]
fn synth_then_report_matches_labels() {
    let tmp = TempDir::new().unwrap();
    let fleet = tmp.path().join("fleet");
    let o = synth(&fleet, "11", "947", &["--detour"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let labels = labels(&fleet);
    assert_eq!(labels.len(), 11);
    assert_eq!(labels.iter().filter(|(_, l)| l == "Rejected").count(), 1);

    let o = routeprobe(&["report", path(&fleet)]);
    assert_eq!(o.status.code(), Some(1));
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 13);
    for (id, label) in &labels {
        let row = table.lines().find(|l| l.starts_with(id.as_str())).unwrap();
        assert!(row.ends_with(label.as_str()), "{row}");
    }

    let o = routeprobe(&["report", "--format", "records", path(&fleet)]);
    assert_eq!(stdout(&o).lines().count(), 11);
    assert!(stdout(&o).lines().all(|l| l.starts_with('{')));

    for (id, label) in &labels {
        let trace = fleet.join(format!("{id}.csv"));
        let o = routeprobe(&["check", path(&trace)]);
        let want = if label == "Accepted" { 0 } else { 1 };
        assert_eq!(o.status.code(), Some(want));
        assert!(stdout(&o).contains(label.as_str()));
        if want == 1 {
            assert!(stdout(&o).contains("Error at event:"));
            let rec = stdout(&routeprobe(&["check", "--format", "records", path(&trace)]));
            assert!(rec.contains("\"error_event_index\":"));
        }
    }
}

#[test]
fn synth_is_reproducible_and_handles_zero() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    synth(&a, "4", "3", &[]);
    synth(&b, "4", "3", &[]);
    for (id, _) in labels(&a) {
        let f = format!("{id}.csv");
        assert_eq!(fs::read(a.join(&f)).unwrap(), fs::read(b.join(&f)).unwrap());
    }
    let empty = tmp.path().join("empty");
    assert_eq!(synth(&empty, "0", "1", &[]).status.code(), Some(0));
    assert!(!empty.exists() || fs::read_dir(&empty).unwrap().next().is_none());
    assert_eq!(
        synth(&empty, "0", "1", &["--detour"]).status.code(),
        Some(2)
    );
}

#[test]
fn report_keeps_going_past_bad_files() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("a.csv"), SAMPLE).unwrap();
    fs::write(tmp.path().join("b.csv"), "not,a,trace\n").unwrap();
    fs::write(tmp.path().join("c.csv"), SAMPLE).unwrap();
    fs::write(tmp.path().join("notes.txt"), "ignored").unwrap();
    let o = routeprobe(&["report", path(tmp.path())]);
    assert_eq!(o.status.code(), Some(1));
    let table = stdout(&o);
    let rows: Vec<&str> = table.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("a ") && rows[0].ends_with("Accepted"));
    assert!(rows[1].starts_with("b ") && rows[1].ends_with("Error"));
    assert!(rows[2].starts_with("c ") && rows[2].ends_with("Accepted"));

    let one = routeprobe(&["report", path(&tmp.path().join("a.csv"))]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one).lines().count(), 3);
}

#[test]
fn check_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    let trace = tmp.path().join("t.csv");
    fs::write(&trace, SAMPLE).unwrap();
    let missing = tmp.path().join("nope.csv");
    let o = routeprobe(&["check", path(&trace), "--regions", path(&missing)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot access"));

    fs::write(tmp.path().join("bad.csv"), "55.9,-3.36,25:00:00\n").unwrap();
    let o = routeprobe(&["check", path(&tmp.path().join("bad.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));

    let probe = tmp.path().join("p.toml");
    fs::write(&probe, "states = [\"X\", \"E\"]\nerror_state = \"E\"\ntransitions = [[\"X\", 'in(harbour)', \"X\"]]\ninitial = { fixed = \"X\" }\n").unwrap();
    let o = routeprobe(&["check", path(&trace), "--probe", path(&probe)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid configuration"));

    assert_eq!(routeprobe(&["check"]).status.code(), Some(2));
}

#[test]
fn strict_probe_and_config_dir() {
    let tmp = TempDir::new().unwrap();
    let trace = tmp.path().join("sample.csv");
    fs::write(&trace, SAMPLE).unwrap();
    let o = routeprobe(&["check", path(&trace), "--probe", "strict"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Initial state:   A"));

    // Regions from the config directory: a smaller airport that misses the
    // first sample fix.
    let dir = tmp.path().join("conf");
    fs::create_dir(&dir).unwrap();
    fs::write(
        dir.join("regions.csv"),
        "name,min_long,max_long,min_lat,max_lat\n\
         airport,-3.38,-3.34,55.935,55.940\n\
         suburbs1,-3.34,-3.28,55.935,55.945\n\
         suburbs2,-3.28,-3.22,55.940,55.950\n\
         centre,-3.22,-3.18,55.945,55.955\n\
         garage,-3.20,-3.18,55.955,55.965\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_routeprobe"))
        .args(["check", path(&trace)])
        .env("ROUTEPROBE_CONFIG_DIR", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Initial state:   ERROR"));

    let partial = tmp.path().join("partial.csv");
    fs::write(
        &partial,
        "name,min_long,max_long,min_lat,max_lat\ncentre,-3.22,-3.18,55.945,55.955\n",
    )
    .unwrap();
    let o = routeprobe(&["validate", "--regions", path(&partial)]);
    assert_eq!(o.status.code(), Some(2));

    let o = routeprobe(&["validate", "--probe", "strict"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8 states"));
}

#[test]
fn measures_files() {
    let tmp = TempDir::new().unwrap();
    let trace = tmp.path().join("sample.csv");
    fs::write(&trace, SAMPLE).unwrap();
    let out = tmp.path().join("m");
    let o = routeprobe(&["measures", path(&trace), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let max = fs::read_to_string(out.join("MaxLatitude.csv")).unwrap();
    let lines: Vec<&str> = max.lines().collect();
    assert_eq!(
        lines,
        [
            "elapsed_s,value",
            "0,55.948413846216582",
            "62,55.948413846216582",
            "124,55.948413846216582"
        ]
    );
    let error = fs::read_to_string(out.join("ProbeInStateERROR.csv")).unwrap();
    assert!(error.lines().skip(1).all(|l| l.ends_with(",0")));
    let names = [
        "AIRPORT", "SUBURBS1", "SUBURBS2", "CENTRE", "GARAGE", "ERROR",
    ];
    let mut sums = [0.0; 3];
    for n in names {
        let s = fs::read_to_string(out.join(format!("ProbeInState{n}.csv"))).unwrap();
        for (sum, line) in sums.iter_mut().zip(s.lines().skip(1)) {
            *sum += line.split(',').nth(1).unwrap().parse::<f64>().unwrap();
        }
    }
    assert_eq!(sums, [1.0; 3]);
}

#[test]
fn codegen_output() {
    let tmp = TempDir::new().unwrap();
    let trace = tmp.path().join("sample.csv");
    fs::write(&trace, SAMPLE).unwrap();
    let file = tmp.path().join("bus.component");
    let o = routeprobe(&["codegen", path(&trace), "--out", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.contains("<55.948413846216582,-3.363214449536430,00,11,39>"));
    let again = stdout(&routeprobe(&["codegen", path(&trace)]));
    assert_eq!(text, again);
    let chunked = stdout(&routeprobe(&["codegen", path(&trace), "--chunk-size", "1"]));
    assert_eq!(chunked.matches("move*[true]").count(), 3);
    assert!(chunked.contains("CHUNK2 {") && !chunked.contains("CHUNK3"));
    assert_eq!(
        routeprobe(&["codegen", path(&trace), "--chunk-size", "0"])
            .status
            .code(),
        Some(2)
    );
}
