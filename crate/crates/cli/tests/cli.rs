use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kripke-min")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn minimize_f2_gives_two_states() {
    let o = run(&["minimize", &f("f2.kripke")]);
    assert_eq!(o.status.code(), Some(0));
    let k = kripke_min::kripke::parse_kripke(&stdout(&o)).unwrap();
    assert_eq!(k.num_states(), 2);
    assert!(kripke_min::minimize::is_reduced(&k));
}

#[test]
fn minimize_writes_output_and_map_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("min.kripke");
    let o = run(&["minimize", &f("f2.kripke"), "-o", out.to_str().unwrap(), "--map", "--stats"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(kripke_min::kripke::parse_kripke(&written).unwrap().num_states(), 2);
    let map = std::fs::read_to_string(dir.path().join("min.kripke.map")).unwrap();
    assert_eq!(map, "b0: s0 s2 s4\nb1: s1 s3\n");
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("states before: 5"));
    assert!(stderr.contains("states after: 2"));
    assert!(stderr.contains("refinement rounds: 1"));
}

#[test]
fn stats_rounds_match_refinement() {
    use kripke_min::minimize::{initial_partition, refine_counting};
    let path = f("f3.kripke");
    let k = kripke_min::kripke::parse_kripke(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let (_, rounds) = refine_counting(&k, &initial_partition(&k));
    let o = run(&["minimize", &path, "--stats"]);
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains(&format!("refinement rounds: {rounds}\n")));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["minimize", "F", "--map"],
        vec!["dot", "F"],
        vec!["unwind", "F", "--state", "s0"],
    ] {
        let path = f("f2.kripke");
        let args: Vec<&str> = args.iter().map(|a| if *a == "F" { path.as_str() } else { a }).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn bisim_verdicts() {
    let o = run(&["bisim", &f("f1.kripke"), &f("f1-renamed.kripke")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "RESULT: true\n");
    // F2 collapses onto the same a/b cycle
    assert_eq!(run(&["bisim", &f("f1.kripke"), &f("f2.kripke")]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let stuck = dir.path().join("stuck.kripke");
    std::fs::write(&stuck, "kripke\naps a b\nstate s1 : a\ninit s1\ntrans s1 -> s1\n").unwrap();
    let o = run(&["bisim", &f("f1.kripke"), stuck.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "RESULT: false\n");
    assert_eq!(run(&["bisim", &f("f1.kripke"), &f("f3.kripke")]).status.code(), Some(2));
}

#[test]
fn bisimilar_states_verdicts() {
    assert_eq!(run(&["bisimilar", &f("f2.kripke"), "s0", "s4"]).status.code(), Some(0));
    assert_eq!(run(&["bisimilar", &f("f2.kripke"), "s0", "s1"]).status.code(), Some(1));
    assert_eq!(run(&["bisimilar", &f("f2.kripke"), "s0", "zz"]).status.code(), Some(2));
}

#[test]
fn check_reports_per_initial_state() {
    let o = run(&["check", &f("f1.kripke"), "--formula", "b"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "s1: false\nRESULT: false\n");
    let o = run(&["check", &f("f1.kripke"), "--formula", "AG (a -> AX b)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn fold_and_unfold() {
    let o = run(&["fold", &f("g3.kgram")]);
    assert_eq!(o.status.code(), Some(0));
    let folded = kripke_min::kripke::parse_kripke(&stdout(&o)).unwrap();
    assert_eq!(folded.num_states(), 10);
    let o = run(&["unfold", &f("g3.kgram"), "--depth", "3"]);
    let unfolded = kripke_min::kripke::parse_kripke(&stdout(&o)).unwrap();
    assert_eq!(unfolded.num_states(), 6 + 3 * 5);
    assert_eq!(run(&["unfold", &f("g3.kgram"), "--depth", "0"]).status.code(), Some(2));
}

#[test]
fn unwind_defaults_to_state_count() {
    let o = run(&["unwind", &f("f1.kripke"), "--state", "s1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{a}\n  {b}\n    {a} …\n");
}

#[test]
fn dot_export() {
    let o = run(&["dot", &f("f1.kripke")]);
    assert!(stdout(&o).starts_with("digraph kripke {\n"));
}

#[test]
fn selfloop_completion_is_opt_in_and_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dead.kripke");
    std::fs::write(&path, "kripke\naps p\nstate s0 : p\nstate s1 :\ninit s0\ntrans s0 -> s1\n")
        .unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["validate", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = run(&["validate", "--complete-selfloops", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# added self-loop s1 -> s1\n"));
    let o = run(&["minimize", p, "--complete-selfloops"]);
    assert!(stdout(&o).starts_with("# added self-loop s1 -> s1\nkripke\n"));
    assert!(String::from_utf8(o.stderr).unwrap().contains("added self-loop s1 -> s1"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["minimize", &f("f1.kripke"), "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["unfold", &f("g3.kgram")]).status.code(), Some(2));
    assert_eq!(run(&["validate", "/nonexistent.kripke"]).status.code(), Some(2));
    let o = run(&["check", &f("f1.kripke"), "--formula", "EX ("]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.kripke");
    std::fs::write(&bad, "kripke\naps a\nstate s0 a\n").unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("3:"));
}
