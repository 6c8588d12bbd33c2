use std::process::{Command, Output};

fn freelie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freelie")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn hall_lists_five_elements_to_degree_three() {
    let out = freelie(&["hall", "--alphabet", "a,b", "--max-degree", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 5);
    let j = json(&freelie(&["hall", "--max-degree", "3", "--json"]));
    assert_eq!(j["count"], 5);
    assert_eq!(j["basis"][4]["bracket"], "[[a,b],b]");
}

#[test]
fn nat_certify_reports_divisible_set() {
    let out = freelie(&["nat-certify", "--b", "b", "--m", "2", "--window", "-1..4", "--json"]);
    assert!(out.status.success());
    let j = json(&out);
    assert_eq!(j["divisible"], serde_json::json!([0, 1, 2]));
    assert_eq!(j["holds"], true);
}

#[test]
fn normal_forms() {
    assert_eq!(stdout(&freelie(&["nf", "[a,[a,b]] + 2*a"])).trim(), "[a,[a,b]] + 2*a");
    assert_eq!(stdout(&freelie(&["nf", "(a)(b+1)(b+0)"])).trim(), "[[a,b],b] + [a,b]");
    assert_eq!(stdout(&freelie(&["mul", "b", "a"])).trim(), "-1*[a,b]");
    assert_eq!(stdout(&freelie(&["shift", "a", "b", "--alphas", "1,0"])).trim(), "[[a,b],b] + [a,b]");
}

#[test]
fn element_json_round_trips_through_the_cli() {
    let first = freelie(&["nf", "--ring", "Q", "3*a - 1/2*b + [a,[a,b]]", "--json"]);
    let text = stdout(&first);
    assert_eq!(
        text.trim(),
        r#"{"ring":"Q","alphabet":["a","b"],"terms":[{"word":"a","coeff":"3"},{"word":"b","coeff":"-1/2"},{"word":"aab","coeff":"1"}]}"#
    );
    let second = freelie(&["nf", "--ring", "Q", text.trim(), "--json"]);
    assert_eq!(stdout(&second), text);
}

#[test]
fn syntax_errors_are_structured() {
    let out = freelie(&["nf", "[a a]", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "syntax");
    assert!(err["error"]["message"].as_str().unwrap().contains("column 4"));
}

#[test]
fn division_results_and_absence() {
    assert_eq!(stdout(&freelie(&["divide", "[[a,b],b] + [a,b]", "b", "--alpha", "1"])).trim(), "[a,b]");
    assert_eq!(stdout(&freelie(&["divide", "[[a,b],b] + [a,b]", "b", "--alpha", "0"])).trim(), "[a,b] + a");
    let out = freelie(&["divide", "[[a,b],b] + [a,b]", "b", "--alpha", "5", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "absent");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(freelie(&["hall", "--ring", "R"]).status.code(), Some(2));
    assert_eq!(freelie(&["hall", "--alphabet", "a,a"]).status.code(), Some(2));
    assert_eq!(freelie(&["nat-certify", "--b", "b", "--m", "1", "--window", "0-3"]).status.code(), Some(2));
    assert_eq!(freelie(&["bogus"]).status.code(), Some(2));
}

#[test]
fn lemma_and_decomposition() {
    let out = stdout(&freelie(&["lemma-main", "b", "--pair", "0:[a,b]+a", "--pair", "1:[a,b]"]));
    assert_eq!(out, "gamma = 1\nw = a\n");
    assert_eq!(stdout(&freelie(&["decompose-l2", "[a,[a,b]]"])).trim(), "[-1*[a,b], a]");
    let err = freelie(&["lemma-main", "b", "--pair", "0:a", "--pair", "0:a", "--json"]);
    assert_eq!(err.status.code(), Some(1));
}

#[test]
fn interpretation_commands() {
    assert_eq!(stdout(&freelie(&["rx", "a", "2*a", "3*a", "--op", "times"])).trim(), "6*a");
    assert_eq!(stdout(&freelie(&["rx", "a", "2*a", "3*a", "--op", "plus"])).trim(), "5*a");
    assert_eq!(stdout(&freelie(&["transport", "a", "2*a", "b"])).trim(), "2*b");
    assert_eq!(freelie(&["transport", "a", "2*a + b", "b"]).status.code(), Some(1));
    let j = json(&freelie(&["in-line", "3*[a,b]", "[a,b]", "--json"]));
    assert_eq!(j["r"], "3");
    let j = json(&freelie(&["centralizer", "2*[a,b]", "-3*[a,b]", "--json"]));
    assert_eq!((j["alpha"].as_str(), j["beta"].as_str()), (Some("3"), Some("-2")));
}

#[test]
fn width_checks() {
    let pass = freelie(&["width-check", "--m", "2", "--max-degree", "5", "--json"]);
    assert!(pass.status.success());
    assert_eq!(json(&pass)["result"], "pass");
    let fail = freelie(&["width-check", "--m", "1", "--max-degree", "3", "--json"]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(json(&fail)["witness"]["terms"][0]["word"], "abb");
}

#[test]
fn bounded_evaluation() {
    let j = json(&freelie(&["eval", "E[h<=5] r:scalar. x = r*z", "--let", "x=3*[a,b]", "--let", "z=[a,b]", "--json"]));
    assert_eq!(j["verdict"], "witnessed-true");
    assert_eq!(j["evidence"][0]["value"], "3");
    let j = json(&freelie(&["eval", "A[d<=3,h<=3] u. [u,b] = 0 -> u = 0", "--json"]));
    assert_eq!(j["verdict"], "counterexample-false");
    let j = json(&freelie(&["eval", "A[d<=3,h<=3] u. sp(u,b,1) = 0 -> u = 0", "--json"]));
    assert_eq!(j["verdict"], "unknown");
    let out = freelie(&["eval", "A u. u = u", "--json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scalar_commands() {
    let inst = r#"{"p": 2, "d1": 2, "d2": 2, "dN": 1, "tensor": [[[0],[1]],[[1],[0]]]}"#;
    assert_eq!(json(&freelie(&["scalars-sym", inst, "--json"]))["dimension"], 4);
    let psw = json(&freelie(&["scalars-psw", inst, "--json"]));
    let brute = json(&freelie(&["scalars-brute", inst, "--json"]));
    assert_eq!(psw, brute);
    assert_eq!(psw["size"], 2);
    let lie = stdout(&freelie(&["scalars-lie-instance", "--k", "2", "--p", "3", "--json"]));
    let ring = json(&freelie(&["scalars-psw", lie.trim(), "--json"]));
    assert_eq!(ring["size"], 3);
    assert_eq!(ring["isomorphic_to_prime_field"], true);
    let bad = freelie(&["scalars-psw", r#"{"p": 4, "d1": 1, "d2": 1, "dN": 1, "tensor": [[[1]]]}"#, "--json"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn suite_subset_is_deterministic() {
    let a = freelie(&["suite", "--seed", "7", "--only", "3,11"]);
    let b = freelie(&["suite", "--seed", "7", "--only", "3,11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(freelie(&["suite", "--only", "99"]).status.code(), Some(2));
}
