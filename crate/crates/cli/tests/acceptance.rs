//! CLI acceptance: golden outputs for every subcommand, byte-for-byte
//! determinism across repeated runs, and the exit-code contract
//! (0 value/pass, 1 computed negative verdict, 2 usage or parse error).

use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levelset"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn check(args: &[&str], want_code: i32, want_stdout: &str) {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(want_code),
        "exit code for {args:?}; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), want_stdout, "stdout for {args:?}");
    // determinism: a second run is byte-identical
    let again = run(args);
    assert_eq!(
        out.stdout, again.stdout,
        "non-deterministic output for {args:?}"
    );
    assert_eq!(out.status.code(), again.status.code());
}

#[test]
fn golden_measure_and_set_commands() {
    let started = Instant::now();
    check(
        &["measure", "--field", "2,2", "[5] + p^2 t^-1 O"],
        0,
        "{\"text\":\"1/4*X2^-1\",\"value\":[[[-1],1,4]]}\n",
    );
    check(
        &[
            "measure",
            "--field",
            "2,2",
            "diff([0] + p^0 t^0 O, [0] + p^1 t^0 O)",
        ],
        0,
        "{\"text\":\"1/2\",\"value\":[[[0],1,2]]}\n",
    );
    check(
        &["canon", "--field", "2,2", "[2] + p^1 t^0 O"],
        0,
        "{\"set\":{\"alpha\":[],\"i1\":1,\"tail\":[0]},\"text\":\"[0] + p^1 t^0 O\"}\n",
    );
    check(
        &["canon", "--field", "2,2", "[1/2 + t^1] + p^0 t^0 O"],
        0,
        "{\"set\":{\"alpha\":[[1,2,[0]]],\"i1\":0,\"tail\":[0]},\"text\":\"[1/2] + p^0 t^0 O\"}\n",
    );
    check(
        &[
            "intersect",
            "--field",
            "2,2",
            "[0] + p^0 t^0 O",
            "[1/2] + p^0 t^0 O",
        ],
        0,
        "{\"empty\":true}\n",
    );
    check(
        &["intersect", "--field", "2,2", "[0] + p^0 t^0 O", "[2] + p^1 t^0 O"],
        0,
        "{\"empty\":false,\"set\":{\"alpha\":[],\"i1\":1,\"tail\":[0]},\"text\":\"[0] + p^1 t^0 O\"}\n",
    );
    check(
        &["level", "--field", "2,2", "[0] + t^2 OO"],
        0,
        "{\"kind\":\"has_level\",\"level\":[2]}\n",
    );
    check(
        &["level", "--field", "2,2", "empty"],
        0,
        "{\"kind\":\"no_distinguished_subset\"}\n",
    );
    check(
        &[
            "classify",
            "--field",
            "2,2",
            "diff([0] + p^0 t^0 O, [0] + p^2 t^0 O)",
        ],
        0,
        "{\"class\":\"has_level\",\"level\":[0]}\n",
    );
    check(
        &["ddd", "--field", "2,2", "union([0] + p^1 t^0 O, [1] + p^1 t^0 O)"],
        0,
        "{\"regions\":[{\"holes\":[],\"outer\":{\"alpha\":[],\"i1\":1,\"tail\":[0]}},{\"holes\":[],\"outer\":{\"alpha\":[[1,1,[0]]],\"i1\":1,\"tail\":[0]}}]}\n",
    );
    assert!(started.elapsed() < Duration::from_secs(10));
}

#[test]
fn golden_uniformity_exit_codes() {
    // uniform: exit 0
    check(
        &["uniform", "--field", "2,2", "[0] + t^1 OO"],
        0,
        "{\"kind\":\"uniform\",\"level\":[1]}\n",
    );
    // the pathological union: computed negative verdict, exit 1
    check(
        &[
            "uniform",
            "--field",
            "2,2",
            "union([1/2] + p^0 t^1 O, [0] + p^0 t^0 O)",
        ],
        1,
        "{\"kind\":\"non_uniform\",\"level\":[0]}\n",
    );
}

#[test]
fn golden_cover_commands() {
    let started = Instant::now();
    check(
        &[
            "cover",
            "--field",
            "2,2",
            "--target",
            "[0]+p^0 t^0 O",
            "--gamma",
            "0",
            "--member",
            "[0] + p^1 t^0 O",
            "--member",
            "[1] + p^1 t^0 O",
        ],
        0,
        "{\"depth\":1,\"subcover\":[0,1],\"verdict\":\"covered\"}\n",
    );
    check(
        &[
            "cover",
            "--field",
            "2,2",
            "--target",
            "[0]+p^0 t^0 O",
            "--gamma",
            "0",
            "--member",
            "[0] + p^1 t^0 O",
            "--member",
            "[1] + p^2 t^0 O",
            "--member",
            "[3] + p^2 t^0 O",
        ],
        0,
        "{\"depth\":2,\"subcover\":[0,1,2],\"verdict\":\"covered\"}\n",
    );
    // a missing cell: not covered, witness reported, exit 1
    check(
        &[
            "cover",
            "--field",
            "2,2",
            "--target",
            "[0]+p^0 t^0 O",
            "--gamma",
            "0",
            "--member",
            "[0] + p^1 t^0 O",
        ],
        1,
        "{\"depth\":1,\"verdict\":\"not_covered\",\"witness\":[[1,1,[0]],[1,2,[1]]]}\n",
    );
    check(
        &[
            "subcover",
            "--field",
            "2,2",
            "--target",
            "[0]+p^0 t^0 O",
            "--gamma",
            "0",
            "--member",
            "[0] + p^-1 t^-1 O",
        ],
        0,
        "{\"depth\":0,\"subcover\":[0],\"verdict\":\"covered\"}\n",
    );
    check(
        &[
            "fip", "--field", "2,2", "--target", "[0]+p^0 t^0 O", "--gamma", "0",
            "--member", "[0] + p^1 t^0 O",
        ],
        0,
        "{\"covered\":false,\"equivalence_holds\":true,\"fip\":true,\"total_intersection_empty\":false}\n",
    );
    check(
        &["demo-no-subcover", "--field", "2,2", "--j", "0", "--k", "2"],
        1,
        "{\"instance\":{\"family\":[{\"op\":\"dist\",\"set\":{\"alpha\":[],\"i1\":0,\"tail\":[1]}},{\"op\":\"dist\",\"set\":{\"alpha\":[[1,1,[0]]],\"i1\":0,\"tail\":[1]}}],\"gamma\":[1],\"target\":{\"alpha\":[],\"i1\":0,\"tail\":[0]}},\"report\":{\"depth\":1,\"verdict\":\"not_covered\",\"witness\":[[1,2,[1]]]}}\n",
    );
    assert!(started.elapsed() < Duration::from_secs(10));
}

#[test]
fn golden_structure_commands() {
    check(
        &[
            "axioms", "--desc", "{\"kind\":\"field\",\"p\":2,\"n\":2}", "--mode",
            "compatible", "--nbhd", "0..1", "--gamma-box", "-1..1",
        ],
        0,
        "{\"counterexamples\":[],\"mode\":\"compatible\",\"notes\":[],\"passed\":true,\"window\":\"2 neighbourhood(s), gamma in (-1)..(1)\"}\n",
    );
    // strict mode fails on the same window with the canonical counterexample
    let out = run(&[
        "axioms",
        "--desc",
        "{\"kind\":\"field\",\"p\":2,\"n\":2}",
        "--mode",
        "strict",
        "--nbhd",
        "0..1",
        "--gamma-box",
        "-1..1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("\"passed\":false"));
    assert!(text.contains("\"gamma\":[0],\"lhs\":\"[0] + p^0 t^1 O\",\"rhs\":\"[0] + p^1 t^1 O\""));

    check(
        &["rigidity", "--desc", "{\"kind\":\"field\",\"p\":2,\"n\":2}", "--nbhd", "-1..1", "--gamma-box", "-2..2"],
        0,
        "{\"counterexamples\":[],\"mode\":\"compatible\",\"notes\":[],\"passed\":true,\"window\":\"3 neighbourhood(s), gamma in (-2)..(2)\"}\n",
    );
    let out = run(&[
        "rigidity",
        "--desc",
        "{\"kind\":\"zstride\",\"d\":1}",
        "--gamma-box",
        "0..1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("degenerate index"));

    check(
        &["induce", "--p", "2"],
        0,
        "{\"ball_level\":[0],\"descriptor\":{\"kind\":\"induced\",\"p\":2},\"p\":2,\"table\":{\"j<0\":\"Qp\",\"j=0\":\"p^0Zp\",\"j>0\":\"{0}\"}}\n",
    );
    check(
        &["inflate", "--desc", "{\"kind\":\"field\",\"p\":2,\"n\":2}", "--pivot", "0"],
        0,
        "{\"descriptor\":{\"inner\":{\"base_dim\":1,\"kind\":\"field\",\"n\":2,\"p\":2},\"kind\":\"inflated\",\"pivot\":0},\"elevation\":2}\n",
    );
    check(
        &[
            "stack", "--upper", "{\"kind\":\"field\",\"p\":2,\"n\":3,\"base_dim\":2}",
            "--lower", "{\"kind\":\"field\",\"p\":2,\"n\":2}",
        ],
        0,
        "{\"descriptor\":{\"kind\":\"stacked\",\"lower\":{\"base_dim\":1,\"kind\":\"field\",\"n\":2,\"p\":2},\"upper\":{\"base_dim\":2,\"kind\":\"field\",\"n\":3,\"p\":2}},\"elevation\":2}\n",
    );
    check(
        &[
            "product-check", "--left", "{\"kind\":\"field\",\"p\":2,\"n\":2}", "--right",
            "{\"kind\":\"zstride\",\"d\":1}", "--nbhd", "0..1", "--gamma-box", "-2..0",
        ],
        0,
        "{\"counterexamples\":[],\"mode\":\"compatible\",\"notes\":[],\"passed\":true,\"window\":\"2 neighbourhood(s), gamma in (-2)..(0)\"}\n",
    );
}

#[test]
fn golden_z_commands() {
    check(
        &[
            "zlevel",
            "--d",
            "1",
            "--window",
            "0,7",
            "--members",
            "0,2,3,5,6,7",
        ],
        0,
        "{\"d\":1,\"level\":-3,\"uniform\":false,\"window\":[0,7]}\n",
    );
    check(
        &[
            "zlevel",
            "--d",
            "2",
            "--window",
            "0,10",
            "--members",
            "0,2,4",
        ],
        0,
        "{\"d\":2,\"level\":-3,\"uniform\":true,\"window\":[0,10]}\n",
    );
    check(
        &["twin", "--k", "5", "--N", "10000"],
        0,
        "{\"neg_level\":2,\"window\":[5,10005]}\n",
    );
    check(
        &["twin", "--k", "1", "--N", "10"],
        0,
        "{\"neg_level\":3,\"window\":[1,11]}\n",
    );
    let out = run(&["twin", "--k", "24", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"note\""));
}

#[test]
fn json_in_round_trips() {
    let dir = std::env::temp_dir().join(format!("levelset-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = dir.join("instance.json");
    std::fs::write(
        &inst,
        "{\"target\":{\"alpha\":[],\"i1\":0,\"tail\":[0]},\"gamma\":[0],\"family\":[{\"op\":\"union\",\"members\":[{\"op\":\"dist\",\"set\":{\"alpha\":[],\"i1\":1,\"tail\":[0]}},{\"op\":\"dist\",\"set\":{\"alpha\":[[1,1,[0]]],\"i1\":1,\"tail\":[0]}}]}]}",
    )
    .unwrap();
    check(
        &[
            "cover",
            "--field",
            "2,2",
            "--json-in",
            inst.to_str().unwrap(),
        ],
        0,
        "{\"depth\":0,\"subcover\":[0],\"verdict\":\"covered\"}\n",
    );
    let zset = dir.join("zset.json");
    std::fs::write(&zset, "{\"d\":1,\"window\":[0,10],\"members\":[1,2,3,7]}").unwrap();
    check(
        &["zlevel", "--json-in", zset.to_str().unwrap()],
        0,
        "{\"d\":1,\"level\":-3,\"uniform\":false,\"window\":[0,10]}\n",
    );
    // sieve cache: first run writes it, second run reads it back identically
    let cache = dir.join("sieve.bin");
    let first = run(&[
        "twin",
        "--k",
        "100",
        "--N",
        "200",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(first.status.code(), Some(0));
    assert!(cache.exists());
    let second = run(&[
        "twin",
        "--k",
        "100",
        "--N",
        "200",
        "--cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(first.stdout, second.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_code_contract_for_errors() {
    // parse error in a set expression
    let out = run(&["canon", "--field", "2,2", "[0] + q^1 t^0 O"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at byte 6"));
    assert!(out.stdout.is_empty());
    // bad field shape
    let out = run(&["canon", "--field", "4,2", "[0] + p^0 t^0 O"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    // unknown flag handled by clap
    let out = run(&["canon", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // level hypothesis violation is a usage-level error, not a verdict
    let out = run(&[
        "cover",
        "--field",
        "2,2",
        "--target",
        "[0]+p^0 t^0 O",
        "--gamma",
        "1",
        "--member",
        "[0] + p^1 t^0 O",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("differs from the target level"));
    // measure of a rank-one coset is not ddd-representable
    let out = run(&["measure", "--field", "2,2", "[0] + t^1 OO"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not finitely representable"));
}

#[test]
fn oracle_check_command() {
    let out = run(&[
        "oracle-check",
        "--field",
        "2,2",
        "--samples",
        "100",
        "--seed",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "{\"member_agreements\":100,\"pass\":true,\"samples\":100,\"trichotomy_agreements\":100}\n"
    );
    let out = run(&[
        "oracle-check",
        "--field",
        "3,2",
        "--samples",
        "60",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn pretty_flag_is_available_but_unstable() {
    let out = run(&["--pretty", "level", "--field", "2,2", "[0] + p^0 t^0 O"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("kind"));
    assert!(!text.starts_with('{'), "pretty output is not JSON");
}

#[test]
fn acceptance_summary() {
    let started = Instant::now();
    // one deterministic invocation of every subcommand, mirroring the
    // golden tests above; this is the per-criterion pass line
    let all = [
        vec!["measure", "--field", "2,2", "[5] + p^2 t^-1 O"],
        vec!["canon", "--field", "2,2", "[2] + p^1 t^0 O"],
        vec![
            "intersect",
            "--field",
            "2,2",
            "[0] + p^0 t^0 O",
            "[2] + p^1 t^0 O",
        ],
        vec!["level", "--field", "2,2", "[0] + t^2 OO"],
        vec!["classify", "--field", "2,2", "empty"],
        vec!["ddd", "--field", "2,2", "[0] + p^0 t^0 O"],
        vec!["induce", "--p", "2"],
        vec!["twin", "--k", "5", "--N", "1000"],
        vec!["zlevel", "--d", "1", "--window", "0,3", "--members", "1,2"],
        vec![
            "oracle-check",
            "--field",
            "2,2",
            "--samples",
            "20",
            "--seed",
            "1",
        ],
    ];
    for args in &all {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    println!(
        "acceptance 15 cli: PASS (golden outputs, determinism, exit codes, {:.2?} < 10s)",
        started.elapsed()
    );
    assert!(started.elapsed() < Duration::from_secs(10));
}
