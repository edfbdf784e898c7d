use std::path::PathBuf;
use std::process::{Command, Output};

fn locgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locgen"))
        .args(args)
        .output()
        .expect("spawn locgen")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("locgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn degenerate_window_is_a_usage_error() {
    let o = locgen(&["gen", "wires", "--window", "0x5"]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flags_exit_3() {
    assert_eq!(code(&locgen(&["gen", "wires", "--bogus"])), 3);
    assert_eq!(code(&locgen(&["verify", "validity", "--pattern", "x.pat"])), 3);
    assert_eq!(code(&locgen(&["--help"])), 0);
}

#[test]
fn census_summary_line() {
    let o = locgen(&["classify", "--auto-group"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().last(), Some("classes=36 nonminimal=8 remaining=28"));
    assert!(out.starts_with("# group rotate90+mirror+axis_swap order=32"));
}

#[test]
fn two_cycle_needs_square() {
    let g = scratch("cycle2.g", "# two-cycle\nvertices 2\nedge 0 1\nedge 1 0\n");
    let o = locgen(&["graph1d", "transitive", "--graph", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("k=2"));
}

#[test]
fn walk_follows_edges() {
    let g = scratch("gm.g", "vertices 3\nedge 0 0\nedge 0 1\nedge 1 2\nedge 2 0\nedge 2 1\n");
    let o = locgen(&[
        "graph1d",
        "walk",
        "--graph",
        g.to_str().unwrap(),
        "--seed",
        "9",
        "--window",
        "-5..20",
    ]);
    assert_eq!(code(&o), 0);
    let ids: Vec<u32> = stdout(&o).split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(ids.len(), 26);
    let edges = [(0, 0), (0, 1), (1, 2), (2, 0), (2, 1)];
    assert!(ids.windows(2).all(|w| edges.contains(&(w[0], w[1]))));
}

#[test]
fn checkerboard_pseudo_witness_fails() {
    let o = locgen(&["verify", "ramification", "--spec", "checkerboard"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).lines().last(), Some("FAIL lambda=-2 mu=2"));

    let o = locgen(&[
        "verify",
        "graft",
        "--spec",
        "checkerboard",
        "--lambda",
        "-2",
        "--mu",
        "2",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("lambda=-2 mu=2 CONFIRMED"));
}

#[test]
fn triangle_witness_passes() {
    let o = locgen(&["verify", "ramification", "--spec", "triangles", "--r", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));
}

#[test]
fn generation_is_deterministic() {
    for g in ["wires", "corners", "triangles", "dominoes"] {
        let args = ["gen", g, "--seed", "17", "--window", "20x12", "--out", "pattern"];
        let a = locgen(&args);
        let b = locgen(&args);
        assert_eq!(code(&a), 0, "{g}");
        assert_eq!(a.stdout, b.stdout, "{g}");
    }
    let a = locgen(&["gen", "wires", "--seed", "1", "--window", "8x8"]);
    let b = locgen(&["gen", "wires", "--seed", "2", "--window", "8x8"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn generated_patterns_verify() {
    for (g, spec) in [("wires", "wires"), ("triangles", "triangles"), ("dominoes", "dominoes")] {
        let o = locgen(&["gen", g, "--seed", "5", "--window", "7x7", "--out", "pattern"]);
        let p = scratch(&format!("{g}.pat"), &stdout(&o));
        let v = locgen(&[
            "verify",
            "validity",
            "--spec",
            spec,
            "--pattern",
            p.to_str().unwrap(),
            "--period-bound",
            "12",
        ]);
        assert_eq!(code(&v), 0, "{g}: {}", stdout(&v));
    }
}

#[test]
fn invalid_pattern_is_refuted() {
    // Two horizontally adjacent black cells.
    let p = scratch("bad.pat", "dim=2\n0 0 1\n1 0 1\n");
    let v = locgen(&[
        "verify",
        "validity",
        "--spec",
        "checkerboard",
        "--pattern",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).starts_with("VERDICT INVALID_WINDOW"));
}

#[test]
fn white_cell_renders_white() {
    let p = scratch("white.pat", "dim=2\n0 0 0\n");
    let t = scratch("white.tiles", "0 0 0 0\n");
    let o = locgen(&[
        "render",
        "--pattern",
        p.to_str().unwrap(),
        "--tiles",
        t.to_str().unwrap(),
        "--scale",
        "8",
    ]);
    assert_eq!(code(&o), 0);
    let header = b"P6\n8 8\n255\n";
    assert!(o.stdout.starts_with(header));
    let body = &o.stdout[header.len()..];
    assert_eq!(body.len(), 8 * 8 * 3);
    assert!(body.iter().all(|&b| b == 255));
}

#[test]
fn manifest_records_run() {
    let m = std::env::temp_dir().join(format!("locgen-manifest-{}.txt", std::process::id()));
    let o = locgen(&[
        "--manifest",
        m.to_str().unwrap(),
        "gen",
        "wires",
        "--seed",
        "42",
        "--window",
        "3x3",
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&m).unwrap();
    assert!(text.contains("seed 42"));
    assert!(text.contains("exit 0"));
    assert!(text.lines().any(|l| l.starts_with("wall_ms ")));
}

#[test]
fn wires_windows_are_corners() {
    let o = locgen(&["recode", "window", "--rule", "wires"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("output 0,0 window 0,0;1,0;0,1;1,1 size=4"));
    assert_eq!(out.lines().last(), Some("radius=4"));
}

#[test]
fn intertwine_round_trip() {
    let a = scratch("a.pat", "dim=1\n0 0\n1 1\n");
    let b = scratch("b.pat", "dim=1\n0 1\n1 1\n");
    let o = locgen(&[
        "recode",
        "intertwine",
        "--a",
        "2",
        "--window",
        "0..3",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let merged = scratch("m.pat", &stdout(&o));
    let back = locgen(&[
        "recode",
        "intertwine",
        "--a",
        "2",
        "--inverse",
        merged.to_str().unwrap(),
    ]);
    assert_eq!(code(&back), 0);
    let text = stdout(&back);
    assert!(text.contains(&std::fs::read_to_string(&a).unwrap()));
    assert!(text.contains(&std::fs::read_to_string(&b).unwrap()));
}
