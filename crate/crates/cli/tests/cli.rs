use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use homdyn_cli::{parse, run_source, Item, MapSpec, Registry, RunConfig};
use proptest::prelude::*;

const PAPER: &str = include_str!("../data/paper.map");

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/paper.map")
}

fn homdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homdyn")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = homdyn(args);
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn d() -> String {
    data().display().to_string()
}

#[test]
fn registry_lists_every_command() {
    let names: Vec<&str> = Registry::default().iter().map(|c| c.name()).collect();
    assert_eq!(names, ["analyze", "beta", "bf", "fix", "rotset", "shadow", "torus"]);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for n in names {
        assert!(out.contains(n));
    }
}

#[test]
fn shadow_certifies_phi3() {
    let (code, out, _) = run(&["shadow", &d(), "--map", "phi3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "CERTIFIED_INJECTIVE");
    assert_eq!(v["delta"], "3/28");
}

#[test]
fn shadow_finds_phi2_witness() {
    let (code, out, _) = run(&["shadow", &d(), "--map", "phi2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "NOT_INJECTIVE");
    assert_eq!(v["witness"]["x"], serde_json::json!(["1/2", "0"]));
    assert_eq!(v["witness"]["y"], serde_json::json!(["1", "-1/2"]));
    assert_eq!(v["witness"]["image"], serde_json::json!(["2", "0"]));
}

#[test]
fn unknown_verdict_exits_two() {
    let (code, out, _) = run(&["shadow", &d(), "--map", "phi3", "--depth", "0"]);
    assert_eq!(code, 2);
    assert!(out.contains("\"UNKNOWN\""));
}

#[test]
fn root_of_unity_exits_one() {
    let (code, out, err) = run(&["bf", &d(), "--map", "phi1", "--k", "1"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("bfgroup::RootOfUnitySpectrum"), "{err}");
}

#[test]
fn budget_exits_three() {
    let (code, _, err) = run(&["fix", &d(), "--map", "phi2", "--k", "6", "--budget", "10"]);
    assert_eq!(code, 3);
    assert!(err.contains("BudgetExceeded"));
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.map");
    std::fs::write(&p, "map p rank 2 {\n  a -> a b ;\n  c -> a ;\n}\n").unwrap();
    let (code, _, err) = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("cli::UndeclaredGenerator") && err.contains("3:3"), "{err}");
    let (code, _, err) = run(&["analyze", "/nonexistent/file.map"]);
    assert_eq!(code, 1);
    assert!(err.contains("cli::Io"));
    let (code, _, err) = run(&["frobnicate", &d()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown command"));
}

#[test]
fn bf_table() {
    let (code, out, _) = run(&["bf", &d(), "--map", "phi2", "--k", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "k,group,invariant_factors,order\n1,Z_3,3,3\n2,Z_3 + Z_15,3 15,45\n3,Z_7 + Z_63,7 63,441\n"
    );
    let (_, out, _) = run(&["bf", &d(), "--map", "A4", "--k", "5"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let groups: Vec<&str> = v["levels"].as_array().unwrap().iter().map(|l| l["group"].as_str().unwrap()).collect();
    assert_eq!(groups, ["0", "Z_5", "Z_4 + Z_4", "Z_3 + Z_15", "Z_11 + Z_11"]);
}

#[test]
fn fix_table_for_phi2() {
    let (code, out, _) = run(&["fix", &d(), "--map", "phi2"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<Vec<String>> = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    assert_eq!(rows.len(), 5);
    let a13 = &rows[1];
    assert_eq!(&a13[..3], ["(a, 1/3)", "a", "1/3"]);
    assert_eq!(&a13[6..8], ["1", "0"]);
    assert_eq!(&a13[9..], ["2/3", "2/3"]);
    assert_eq!(rows[2][9..], ["1/3", "1/3"]);
    assert_eq!(rows[1][8], rows[3][8]);
}

#[test]
fn torus_lists_bf_many_points() {
    let (code, out, _) = run(&["torus", &d(), "--map", "phi2", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 46);
}

#[test]
fn numeric_tables_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["fix", "--map", "phi2", "--k", "2"],
        vec!["torus", "--map", "A4", "--k", "3"],
        vec!["rotset", "--map", "phi1"],
        vec!["beta", "--map", "phi2", "--k", "2"],
        vec!["bf", "--map", "phi2", "--k", "4", "--format", "csv"],
    ] {
        let out = dir.path().join("t.csv");
        let mut full = vec![args[0], d().leak()];
        full.extend(&args[1..]);
        full.extend(["--out", out.to_str().unwrap()]);
        let (code, _, err) = run(&full);
        assert_eq!(code, 0, "{err}");
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(!text.contains('.'), "float in {}: {text}", args[0]);
    }
    let (_, out, _) = run(&["analyze", &d(), "--map", "phi3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sigma"]["c"], "3/7");
    assert_eq!(v["sigma"]["delta"], "3/28");
    assert_eq!(v["charpoly"], serde_json::json!(["1", "-12", "35"]));
}

#[test]
fn figures_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut svgs = Vec::new();
    for i in 0..2 {
        let svg = dir.path().join(format!("beta{i}.svg"));
        let csv = dir.path().join(format!("beta{i}.csv"));
        let (code, _, _) = run(&[
            "beta", &d(), "--map", "phi2", "--k", "4", "--window", "2",
            "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        svgs.push(std::fs::read(&svg).unwrap());
    }
    assert_eq!(svgs[0], svgs[1]);
    let text = String::from_utf8(svgs.remove(0)).unwrap();
    assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
    // 25 translates x 2 edges, and 5 fixed points per translate
    assert_eq!(text.matches("<polyline").count(), 50);
    assert_eq!(text.matches("class=\"periodic\"").count(), 125);

    let svg = dir.path().join("rot.svg");
    run(&["rotset", &d(), "--map", "phi1", "--svg", svg.to_str().unwrap()]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"fixed\"").count(), 6);
    assert_eq!(text.matches("class=\"period2\"").count(), 4);
    assert_eq!(text.matches("<polygon").count(), 1);
}

#[test]
fn beta_csv_matches_breakpoints() {
    let cfg = RunConfig { k: 2, window: 0, ..RunConfig::default() };
    let r = run_source(&Registry::default(), "beta", PAPER, Some("phi2"), &cfg).unwrap();
    let line = r.body.lines().find(|l| l.starts_with("beta,a,0,0,4,")).unwrap();
    assert_eq!(line, "beta,a,0,0,4,1/4,3/8,-1/8");
    let line = r.body.lines().find(|l| l.starts_with("beta,a,0,0,16,")).unwrap();
    assert_eq!(line, "beta,a,0,0,16,1,1,0");
    assert!(r.body.contains("periodic,\"(a, 1/3)\",0,0,,1/3,2/3,-1/3"));
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_homdyn"))
        .args(["bf", "-", "--k", "2", "--format", "csv"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"matrix A2 rank 2 { 3 1 ; 1 3 ; }").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("2,Z_3 + Z_15,3 15,45"));
}

#[test]
fn paper_file_round_trips() {
    let items = parse(PAPER).unwrap();
    assert_eq!(items.len(), 5);
    let printed: Vec<String> = items.iter().map(ToString::to_string).collect();
    assert_eq!(parse(&printed.join("\n")).unwrap(), items);
}

fn map_spec() -> impl Strategy<Value = MapSpec> {
    (1usize..=4).prop_flat_map(|rank| {
        let letter = (0..rank, any::<bool>()).prop_map(|(g, inv)| {
            let c = (b'a' + g as u8) as char;
            if inv { c.to_ascii_uppercase() } else { c }
        });
        (
            "[a-z][a-z0-9_]{0,6}",
            proptest::collection::vec(proptest::collection::vec(letter, 0..8).prop_map(String::from_iter), rank),
        )
            .prop_map(move |(name, rules)| MapSpec { name, rank, rules })
    })
}

proptest! {
    #[test]
    fn parse_print_round_trip(spec in map_spec()) {
        let text = spec.to_string();
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(parsed, vec![Item::Map(spec.clone())]);
        // compact form without optional whitespace
        let rules: String = spec
            .rules
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}->{w};", (b'a' + i as u8) as char))
            .collect();
        let compact = format!("map {} rank {}{{{rules}}}", spec.name, spec.rank);
        prop_assert_eq!(parse(&compact).unwrap(), vec![Item::Map(spec)]);
    }
}
