use std::path::{Path, PathBuf};
use std::process::Command;

use swbounds::io::render_model;
use swbounds::{JointSource, MarkovChainSpec, Partition};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn swbounds(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_swbounds"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write_model(dir: &Path, name: &str, source: &JointSource) -> String {
    let path = dir.join(name);
    std::fs::write(&path, render_model(source, None)).unwrap();
    path.to_str().unwrap().to_string()
}

fn dsbs() -> JointSource {
    JointSource::new(vec![2, 2], vec![0.375, 0.125, 0.125, 0.375]).unwrap()
}

fn copy_pair() -> JointSource {
    JointSource::new(vec![2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap()
}

fn independent(n: usize) -> JointSource {
    JointSource::new(vec![2; n], vec![1.0 / (1 << n) as f64; 1 << n]).unwrap()
}

fn chain(n: usize) -> JointSource {
    let t = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
    JointSource::from_markov_chain(&MarkovChainSpec::new(vec![0.3, 0.7], vec![t; n - 1]).unwrap())
        .unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn region_two_node_writes_boundary_file() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "dsbs.toml", &dsbs());
    let out: PathBuf = dir.path().join("region.csv");
    let run = swbounds(&["region", "--model", &model, "--format", "csv", "--out", path_str(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let region = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv_rows(&region).len(), 3);
    let boundary = std::fs::read_to_string(dir.path().join("region.boundary.csv")).unwrap();
    let vertices: Vec<_> = csv_rows(&boundary)
        .into_iter()
        .filter(|r| r[0] == "vertex")
        .collect();
    assert_eq!(vertices.len(), 2);
    let h: f64 = vertices[0][2].parse().unwrap();
    assert!((h - 0.811_278_124_459_132_8).abs() < 1e-9);
}

#[test]
fn region_three_nodes_has_seven_lines() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "c3.toml", &chain(3));
    let run = swbounds(&["region", "--model", &model]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("region: N=3, 7 inequalities\n"));
    assert_eq!(run.stdout.lines().count(), 8);
    assert!(!run.stdout.contains("kind,r1,r2"));
}

#[test]
fn region_reports_slack_and_membership() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "u.toml", &independent(2));
    let ok = swbounds(&["region", "--model", &model, "--rates", "1,1"]);
    assert_eq!(ok.code, 0);
    assert!(ok.stdout.contains("admissible: true"));
    let bad = swbounds(&["region", "--model", &model, "--rates", "0.5,1.6"]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("admissible: false"));
}

#[test]
fn malformed_model_names_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "n_vars = 2\nalphabet_sizes = [2, 2]\npmf = [0.5, 0.5, 0.5, 0.5]\n").unwrap();
    let run = swbounds(&["region", "--model", path_str(&path)]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("sum to 2"), "{}", run.stderr);
    let missing = swbounds(&["region", "--model", path_str(&dir.path().join("none.toml"))]);
    assert_eq!(missing.code, 2);
}

#[test]
fn bounds_markov_model_ties() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "c4.toml", &chain(4));
    let run = swbounds(&["bounds", "--model", &model, "--config", "full,markov", "--format", "csv"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let totals: Vec<f64> = csv_rows(&run.stdout)
        .into_iter()
        .filter(|r| r[1] == "total")
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(totals.len(), 2);
    assert!((totals[0] - totals[1]).abs() < 1e-10);
}

#[test]
fn bounds_adjacency_on_independent_source() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "i3.toml", &independent(3));
    let run = swbounds(&["bounds", "--model", &model, "--config", "adjacency", "--tau", "0.1"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("H(X3)"));
    assert!(run.stdout.contains("total: 3.000000"));
}

#[test]
fn bounds_rejects_bad_mixed_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "c5.toml", &chain(5));
    let run = swbounds(&["bounds", "--model", &model, "--config", "mixed", "--k", "1", "--r", "0"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("k >= 2"), "{}", run.stderr);
    let run = swbounds(&["bounds", "--model", &model, "--config", "mixed", "--k", "2", "--r", "1"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("H(X5|X4,X3)"));
}

#[test]
fn graph_independent_and_copy() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "i3.toml", &independent(3));
    let run = swbounds(&["graph", "--model", &model, "--tau", "0.1"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("node,1,2,3\n1,0,0,0\n2,0,0,0\n3,0,0,0\n"));
    assert!(run.stderr.contains("k = 3"));

    let model = write_model(dir.path(), "copy.toml", &copy_pair());
    let out = dir.path().join("adj.csv");
    let run = swbounds(&["graph", "--model", &model, "--tau", "0.5", "--out", path_str(&out)]);
    assert_eq!(run.code, 0);
    assert!(run.stderr.contains("k = 1"));
    assert_eq!(std::fs::read_to_string(dir.path().join("adj.partition")).unwrap(), "1,2\n");
}

#[test]
fn graph_two_pairs_between_mi_levels() {
    // Copy pair (MI 1 bit) on nodes 1,2; DSBS pair (MI 0.1887) on nodes 3,4.
    let part = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
    let s = JointSource::product_of_groups(&[copy_pair(), dsbs()], &part).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "pairs.toml", &s);
    let between = swbounds(&["graph", "--model", &model, "--tau", "0.5"]);
    assert!(between.stderr.contains("k = 3"));
    assert!(between.stdout.ends_with("1,2\n3\n4\n"));
    let below = swbounds(&["graph", "--model", &model, "--tau", "0.1"]);
    assert!(below.stderr.contains("k = 2"));
    let missing_tau = swbounds(&["graph", "--model", &model]);
    assert_eq!(missing_tau.code, 1);
    let bad_metric = swbounds(&["graph", "--model", &model, "--tau", "0.1", "--metric", "pearson"]);
    assert_eq!(bad_metric.code, 1);
}

#[test]
fn compare_all_configs_on_disjoint_markov_model() {
    let t = vec![vec![0.85, 0.15], vec![0.25, 0.75]];
    let c = JointSource::from_markov_chain(&MarkovChainSpec::new(vec![0.6, 0.4], vec![t]).unwrap())
        .unwrap();
    let part = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
    let s = JointSource::product_of_groups(&[c.clone(), c], &part).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "dm.toml", &s);
    let run = swbounds(&[
        "compare", "--model", &model, "--config", "all", "--k", "2", "--r", "0", "--tau", "0.05",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&run.stdout);
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], "full");
    for name in ["full", "markov", "disjoint", "disjoint-markov"] {
        let row = rows.iter().find(|r| r[0] == name).unwrap();
        let penalty: f64 = row[2].parse().unwrap();
        assert!(penalty.abs() < 1e-10, "{name}: {penalty}");
    }
}

#[test]
fn compare_empty_adjacency_costs_rate() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "c3.toml", &chain(3));
    let run = swbounds(&["compare", "--model", &model, "--config", "full,adjacency", "--tau", "inf"]);
    assert_eq!(run.code, 0);
    let rows = csv_rows(&run.stdout);
    assert_eq!(rows[1][0], "adjacency(tau=inf)");
    assert!(rows[1][2].parse::<f64>().unwrap() > 0.0);
    let single = swbounds(&["compare", "--model", &model, "--config", "full"]);
    let rows = csv_rows(&single.stdout);
    assert_eq!(rows.len(), 1);
    assert!(rows[0][2].parse::<f64>().unwrap().abs() < 1e-10);
}

#[test]
fn ingest_examples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("s.csv");
    std::fs::write(&samples, "0,0\n1,1\n1,1\n0,0\n").unwrap();
    let run = swbounds(&["ingest", "--samples", path_str(&samples), "--alphabet-sizes", "2,2"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("# ingested from 4 rows, smoothing 0\n"));
    let s = swbounds::io::parse_model(&run.stdout).unwrap();
    assert_eq!(s.pmf(), &[0.5, 0.0, 0.0, 0.5]);

    std::fs::write(&samples, "x1,x2\n0,0\n").unwrap();
    let run = swbounds(&[
        "ingest", "--samples", path_str(&samples), "--alphabet-sizes", "2,2", "--smoothing", "1",
        "--skip-header",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let s = swbounds::io::parse_model(&run.stdout).unwrap();
    let expected = [0.4, 0.2, 0.2, 0.2];
    assert!(s.pmf().iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-15));

    std::fs::write(&samples, "0,1\n1,3\n").unwrap();
    let run = swbounds(&["ingest", "--samples", path_str(&samples), "--alphabet-sizes", "2,2"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("row 2, column 2"), "{}", run.stderr);

    std::fs::write(&samples, "").unwrap();
    let run = swbounds(&["ingest", "--samples", path_str(&samples), "--alphabet-sizes", "2,2"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("no observations"));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "c4.toml", &chain(4));
    let run = swbounds(&["verify", "--model", &model]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("markov property [1,2,3,4]: PASS"));

    let part = Partition::new(vec![vec![0, 2], vec![1]], 3).unwrap();
    let s = JointSource::product_of_groups(&[dsbs(), JointSource::new(vec![3], vec![0.2, 0.3, 0.5]).unwrap()], &part)
        .unwrap();
    let model = write_model(dir.path(), "pg.toml", &s);
    let pfile = dir.path().join("p.txt");
    std::fs::write(&pfile, "1,3\n2\n").unwrap();
    let run = swbounds(&[
        "verify", "--model", &model, "--partition", path_str(&pfile), "--checks", "oracle,independence",
    ]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("group independence [1,3 | 2]: PASS"));

    let model = write_model(dir.path(), "dsbs.toml", &dsbs());
    let pfile = dir.path().join("single.txt");
    std::fs::write(&pfile, "1\n2\n").unwrap();
    let run = swbounds(&["verify", "--model", &model, "--partition", path_str(&pfile)]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.contains("group independence [1 | 2]: FAIL  deviation 1.887219e-1"));
    assert!(run.stdout.ends_with("result: FAIL\n"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let model = write_model(dir.path(), "c4.toml", &chain(4));
    for args in [
        vec!["region", "--model", &model],
        vec!["bounds", "--model", &model, "--config", "all", "--k", "2", "--tau", "0.05"],
        vec!["compare", "--model", &model, "--tau", "0.05", "--k", "2"],
        vec!["verify", "--model", &model, "--seed", "9"],
    ] {
        let a = swbounds(&args);
        let b = swbounds(&args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
    }
}
