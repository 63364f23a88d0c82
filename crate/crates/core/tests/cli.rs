use std::fs;
use std::process::{Command, Output};

fn mgl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bounds_prints_all_quantities() {
    let o = mgl(&[
        "bounds", "--n", "100", "--delta", "0.1", "--dg", "1", "--dG", "1", "--dGH", "1", "--bigC", "1", "--cardG", "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("foreach_bound=0.35968737"));
    assert!(text.contains("forall_bound=0.57181957"));
    assert!(text.contains("sample_size_vc=166\n"));
    assert!(text.contains("sample_size_cardinality=120\n"));
    assert!(text.lines().next().unwrap().starts_with("alpha_n="));
}

#[test]
fn exit_codes() {
    assert_eq!(mgl(&["bounds", "--delta", "1.5"]).status.code(), Some(1));
    assert_eq!(mgl(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(mgl(&["reduce", "/nonexistent.cnf"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.txt");
    let o = mgl(&[
        "generate",
        "--spec",
        "prop1-singletons:m=24",
        "--out",
        inst.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    // 2^24 candidate concepts exceeds the enumeration cap
    assert_eq!(mgl(&["vc", inst.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        mgl(&["vc", inst.to_str().unwrap(), "--class", "groups"]).status.code(),
        Some(0)
    );
}

#[test]
fn reduce_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("phi.cnf");
    fs::write(&cnf, "c satisfiable\np cnf 4 2\n1 2 3 0\n-1 2 4 0\n").unwrap();
    let red = dir.path().join("red.txt");
    assert!(mgl(&["reduce", cnf.to_str().unwrap(), "--out", red.to_str().unwrap()])
        .status
        .success());
    let o = mgl(&["solve-erm", red.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("consistent\n"));
    assert!(text.contains("C1 +1\nC2 +1\n"));

    let unsat = dir.path().join("unsat.cnf");
    // exactly one of x1..x3 true and exactly one false cannot both hold
    fs::write(&unsat, "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap();
    let o = mgl(&["verify-reduction", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.ends_with("formulas=2 agree=2 disagree=0\n"));
}

#[test]
fn solve_with_external_sample() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    fs::write(
        &inst,
        "[domain]\na b c\n[groups]\ng1: a b\ng2: b c\n[hypotheses]\nneg: -1 -1 -1\npos: +1 +1 +1\n",
    )
    .unwrap();
    let ok = dir.path().join("ok.txt");
    fs::write(&ok, "a +1\nc +1\n").unwrap();
    let o = mgl(&["solve-erm", inst.to_str().unwrap(), ok.to_str().unwrap()]);
    assert_eq!(
        stdout(&o),
        "consistent\n[concept]\na +1\nb +1\nc +1\n[witness]\ng1: pos\ng2: pos\n"
    );
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "a +1\nc -1\n").unwrap();
    let o = mgl(&["solve-erm", inst.to_str().unwrap(), bad.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "inconsistent\n");
    fs::write(&bad, "a +1\na -1\n").unwrap();
    assert_eq!(
        mgl(&["solve-erm", inst.to_str().unwrap(), bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn vc_of_singleton_construction() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("p.txt");
    assert!(mgl(&[
        "generate",
        "--spec",
        "prop1-singletons:m=12",
        "--out",
        inst.to_str().unwrap()
    ])
    .status
    .success());
    let path = inst.to_str().unwrap();
    assert_eq!(stdout(&mgl(&["vc", path, "--class", "groups"])), "vc=1\n");
    assert_eq!(stdout(&mgl(&["vc", path, "--class", "hypotheses"])), "vc=1\n");
    assert_eq!(stdout(&mgl(&["vc", path])), "members=4096\nvc=12\n");
}

#[test]
fn curve_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = mgl(&[
        "curve",
        "--learner",
        "erm-concepts",
        "--spec",
        "threshold-line:m=32,groups=3,overlap=2,gamma=0.1",
        "--n-grid",
        "50,100",
        "--trials",
        "2",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,trial,worst_group_error,worst_group_id");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("50,0,"));
    assert_eq!(
        mgl(&["curve", "--learner", "bogus", "--spec", "prop1-singletons"])
            .status
            .code(),
        Some(1)
    );
}
