use std::path::PathBuf;
use std::process::{Command, Output};

fn topology() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/six_node.txt")
}

fn edss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edss"))
        .args(args)
        .env_remove("RUST_BACKTRACE")
        .output()
        .expect("binary runs")
}

fn run_to_csv(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out.to_str().unwrap().to_string();
    full.extend(["--out", &out_str]);
    let result = edss(&full);
    assert!(
        result.status.success(),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn negativity_sweep_schema() {
    let csv = run_to_csv(&["negativity-sweep", "--lambda", "0:1:3"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("protocol,lambda,L_km,negativity,fidelity,p_meas")
    );
    assert_eq!(lines.count(), 9);
    assert!(!csv.contains('\r'));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let topo = topology();
    let args = [
        "ebit-rates",
        "--topology",
        topo.to_str().unwrap(),
        "--gate-p",
        "0.25,0.417",
        "--lambda",
        "0.001:0.004:2",
    ];
    assert_eq!(run_to_csv(&args), run_to_csv(&args));
}

#[test]
fn all_pairs_rows_cover_every_unordered_pair() {
    let topo = topology();
    let csv = run_to_csv(&["pair-rates", "--topology", topo.to_str().unwrap()]);
    // 6 nodes → 15 pairs, three protocols.
    assert_eq!(csv.lines().count(), 1 + 3 * 15);
}

#[test]
fn stdout_shows_a_table() {
    let out = edss(&["distill-compare", "--lambda", "0.2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("distill_protocol"));
    assert!(text.contains("DEJMPS"));
}

#[test]
fn unknown_node_is_reported() {
    let topo = topology();
    let out = edss(&[
        "pair-rates",
        "--topology",
        topo.to_str().unwrap(),
        "--pairs",
        "n1-zz",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("zz"));
}

#[test]
fn topology_is_required_where_needed() {
    let out = edss(&["rate-vs-P"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("topology"));
}

#[test]
fn gate_p_out_of_range_is_rejected() {
    let out = edss(&["negativity-sweep", "--gate-p", "1.5"]);
    assert!(!out.status.success());
}

#[test]
fn parameter_overrides_change_rates() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.txt");
    std::fs::write(&params, "# lossier switches\nl_wss_db = 5.0\n").unwrap();
    let topo = topology();
    let t = topo.to_str().unwrap();
    let base = run_to_csv(&["pair-rates", "--topology", t, "--pairs", "n1-n2"]);
    let lossy = run_to_csv(&[
        "pair-rates",
        "--topology",
        t,
        "--pairs",
        "n1-n2",
        "--params",
        params.to_str().unwrap(),
    ]);
    assert_ne!(base, lossy);

    std::fs::write(&params, "bogus = 1\n").unwrap();
    let out = edss(&[
        "pair-rates",
        "--topology",
        t,
        "--params",
        params.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}
