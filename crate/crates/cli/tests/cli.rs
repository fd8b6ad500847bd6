use std::path::Path;
use std::process::{Command, Output};

use localmis::graph::{girth, verify_maximal_independent, Girth};
use localmis::io::{read_graph, read_reports_csv};
use localmis::NodeSet;

fn localmis(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localmis"))
        .args(args)
        .current_dir(dir)
        .env("LOCALMIS_RESULTS_DIR", dir.join("results"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Path printed after `label: ` on stdout.
fn printed_path(o: &Output, label: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(label))
        .unwrap_or_else(|| panic!("no `{label}` line in {}", stdout(o)))
        .trim()
        .to_string()
}

#[test]
fn gen_regular_meets_girth() {
    let dir = tempfile::tempdir().unwrap();
    let o = localmis(
        dir.path(),
        &[
            "gen",
            "--family",
            "regular",
            "--n",
            "30",
            "--d",
            "3",
            "--min-girth",
            "7",
            "--seed",
            "1",
            "-o",
            "g.txt",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    let g = read_graph(&dir.path().join("g.txt")).unwrap();
    assert_eq!((g.node_count(), g.regular_degree()), (30, Some(3)));
    assert!(matches!(girth(&g).girth, Girth::Finite(k) if k >= 7));
    assert!(stdout(&o).contains("girth=7"));
}

#[test]
fn gen_named_and_tree() {
    let dir = tempfile::tempdir().unwrap();
    let o = localmis(
        dir.path(),
        &["gen", "--family", "named", "--name", "mcgee", "-o", "m.txt"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        read_graph(&dir.path().join("m.txt")).unwrap().node_count(),
        24
    );
    let o = localmis(
        dir.path(),
        &[
            "gen", "--family", "tree", "--n", "100", "--seed", "2", "-o", "t.txt",
        ],
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("girth=infinite"));
}

#[test]
fn gen_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a.txt", "b.txt"] {
        let o = localmis(
            dir.path(),
            &[
                "gen",
                "--family",
                "bipartite",
                "--n",
                "40",
                "--d",
                "6",
                "--seed",
                "3",
                "-o",
                out,
            ],
        );
        assert_eq!(code(&o), 0);
    }
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.txt"), read("b.txt"));
}

#[test]
fn gen_usage_and_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["gen", "--family", "regular", "--n", "30", "-o", "x.txt"]
        )),
        2
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["gen", "--family", "named", "--name", "nope", "-o", "x.txt"]
        )),
        2
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &[
                "gen",
                "--family",
                "bipartite",
                "--n",
                "3",
                "--d",
                "5",
                "-o",
                "x.txt"
            ]
        )),
        1
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["gen", "--family", "regular", "--bogus"]
        )),
        2
    );
}

#[test]
fn run_full_and_luby() {
    let dir = tempfile::tempdir().unwrap();
    localmis(
        dir.path(),
        &["gen", "--family", "named", "--name", "mcgee", "-o", "m.txt"],
    );
    let o = localmis(
        dir.path(),
        &["run", "--graph", "m.txt", "--algo", "luby", "--seed", "5"],
    );
    assert_eq!(code(&o), 0, "{o:?}");

    let o = localmis(
        dir.path(),
        &[
            "run",
            "--graph",
            "m.txt",
            "--algo",
            "full",
            "--profile",
            "desk:tau=0.0001,ell=1,beta=0.5,k=2,T=40",
            "--seed",
            "5",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("mis_size="))
        .unwrap()
        .to_string();
    let field = |k: &str| -> u64 {
        line.split_whitespace()
            .find_map(|t| t.strip_prefix(k))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(field("main="), 80);
    assert_eq!(field("total="), 80 + field("completion="));

    // The stored set checks out independently.
    let mis_path = printed_path(&o, "mis:");
    let run_dir = printed_path(&o, "results:");
    let g = read_graph(&dir.path().join("m.txt")).unwrap();
    let members: Vec<usize> = std::fs::read_to_string(&mis_path)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert!(verify_maximal_independent(&g, &NodeSet::from_members(24, members)).unwrap());
    let o = localmis(
        dir.path(),
        &["verify", "--graph", "m.txt", "--set", &mis_path],
    );
    assert_eq!(code(&o), 0);

    let run_dir = Path::new(&run_dir);
    for f in [
        "manifest.json",
        "reports.csv",
        "reports.json",
        "traces.jsonl",
    ] {
        assert!(run_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn run_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["run", "--graph", "missing.txt", "--algo", "luby"]
        )),
        2
    );
    localmis(
        dir.path(),
        &[
            "gen", "--family", "named", "--name", "petersen", "-o", "p.txt",
        ],
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["run", "--graph", "p.txt", "--algo", "bogus"]
        )),
        2
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &[
                "run",
                "--graph",
                "p.txt",
                "--algo",
                "full",
                "--profile",
                "desk:tau=2"
            ]
        )),
        2
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["run", "--graph", "p.txt", "--algo", "luby", "--id", "same"]
        )),
        0
    );
    // Result directories are never overwritten.
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["run", "--graph", "p.txt", "--algo", "luby", "--id", "same"]
        )),
        2
    );
}

#[test]
fn verify_rejects_non_maximal_set() {
    let dir = tempfile::tempdir().unwrap();
    localmis(
        dir.path(),
        &[
            "gen", "--family", "named", "--name", "path(3)", "-o", "p.txt",
        ],
    );
    std::fs::write(dir.path().join("s.txt"), "0\n").unwrap();
    let o = localmis(
        dir.path(),
        &["verify", "--graph", "p.txt", "--set", "s.txt"],
    );
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("maximal=no"));
}

#[test]
fn check_exponent_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = localmis(dir.path(), &["check", "--suite", "exponent"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("pass=1 fail=0"));
}

#[test]
fn check_prop33_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    localmis(
        dir.path(),
        &[
            "gen",
            "--family",
            "bipartite",
            "--n",
            "50",
            "--d",
            "10",
            "--seed",
            "1",
            "-o",
            "b.txt",
        ],
    );
    let mut csvs = Vec::new();
    for id in ["a", "b"] {
        let o = localmis(
            dir.path(),
            &[
                "check",
                "--suite",
                "prop33",
                "--graph",
                "b.txt",
                "--trials",
                "1000",
                "--seed",
                "9",
                "--profile",
                "desk:tau=0.04,ell=1,beta=0.5,k=1,T=1",
                "--id",
                id,
            ],
        );
        assert_eq!(code(&o), 0, "{o:?}");
        let run = printed_path(&o, "results:");
        csvs.push(std::fs::read(Path::new(&run).join("reports.csv")).unwrap());
        assert_eq!(
            read_reports_csv(&Path::new(&run).join("reports.csv"))
                .unwrap()
                .len(),
            1
        );
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn check_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&localmis(dir.path(), &["check", "--suite", "prop33"])),
        2
    );
    assert_eq!(
        code(&localmis(dir.path(), &["check", "--suite", "nope"])),
        2
    );
    assert_eq!(
        code(&localmis(
            dir.path(),
            &["check", "--suite", "lemma31", "--delta", "20", "--trials", "10"]
        )),
        2
    );
}

#[test]
fn check_reports_fail_with_exit_one() {
    // At delta = 6 the first interval is (5/6, 1] and a candidate needs all
    // six neighbours above 5/6 as well: about 4e-6 against a target of
    // 1/(2 e^4 6) ~ 1.5e-3.
    let dir = tempfile::tempdir().unwrap();
    let o = localmis(
        dir.path(),
        &[
            "check", "--suite", "lemma31", "--delta", "6", "--trials", "20000",
        ],
    );
    assert_eq!(code(&o), 1, "{o:?}");
    assert!(stdout(&o).contains("fail=1"), "{}", stdout(&o));
}

#[test]
fn bench_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = localmis(
        dir.path(),
        &[
            "bench",
            "--family",
            "bipartite",
            "--n",
            "60",
            "--d",
            "3,10,50",
            "--seeds",
            "3",
            "--algos",
            "luby,full",
            "-o",
            "bench.csv",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("family,n,d,girth,algo,seed,rounds,mis_size")
    );
    assert_eq!(lines.count(), 18);

    let o = localmis(
        dir.path(),
        &["bench", "--family", "bipartite", "--n", "60", "--d", ""],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "family,n,d,girth,algo,seed,rounds,mis_size\n");

    let o = localmis(
        dir.path(),
        &[
            "bench",
            "--family",
            "bipartite",
            "--n",
            "60",
            "--d",
            "3",
            "--algos",
            "luby,nope",
        ],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn jobs_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str| {
        let o = localmis(
            dir.path(),
            &[
                "--jobs",
                jobs,
                "bench",
                "--family",
                "regular",
                "--n",
                "60",
                "--d",
                "3,4",
                "--seeds",
                "2",
                "--algos",
                "luby,ghaffari",
            ],
        );
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    assert_eq!(run("1"), run("4"));
}
