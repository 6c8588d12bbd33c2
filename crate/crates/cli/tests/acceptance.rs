//! Acceptance criteria, one line each. Runs the seeded properties in process,
//! enforces the runtime targets, and checks that the CLI suite output is
//! byte-identical across invocations.

use std::process::{Command, ExitCode};
use std::thread;
use std::time::{Duration, Instant};

use freelie::interp::{default_window, nat_certify};
use freelie::suite::{run_criterion, CriterionReport, CRITERIA};
use freelie::{Algebra, Alphabet, LieElement, Ring};

const SEED: u64 = 42;

fn certificate_times() -> Result<Vec<Duration>, String> {
    let alg = Algebra::new(Alphabet::parse("a,b").unwrap(), Ring::Z);
    let b = LieElement::generator(&alg, "b").unwrap();
    (0..=3u32)
        .map(|m| {
            let start = Instant::now();
            nat_certify(&b, m, &default_window(m), m as usize + 2).map_err(|e| e.to_string())?;
            Ok(start.elapsed())
        })
        .collect()
}

fn cli_suite() -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_freelie"))
        .args(["suite", "--seed", &SEED.to_string()])
        .output()
        .expect("freelie binary runs");
    (out.status.code(), out.stdout)
}

fn main() -> ExitCode {
    let mut cli_runs = Some(thread::spawn(|| {
        let first = thread::spawn(cli_suite);
        let second = cli_suite();
        (first.join().expect("cli run"), second)
    }));

    let mut reports: Vec<CriterionReport> = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let mut report = run_criterion(id, SEED).expect("known criterion");
        let elapsed = start.elapsed();
        match id {
            1 if elapsed >= Duration::from_secs(60) => {
                report.passed = false;
                report.detail = format!("runtime {elapsed:?} exceeds 60 s; {}", report.detail);
            }
            7 => match certificate_times() {
                Ok(times) if times.iter().all(|t| *t < Duration::from_secs(30)) => {
                    report.detail = format!("{}; each certificate under 30 s", report.detail);
                }
                Ok(times) => {
                    report.passed = false;
                    report.detail = format!("certificate runtimes {times:?} exceed 30 s");
                }
                Err(e) => {
                    report.passed = false;
                    report.detail = e;
                }
            },
            12 => {
                let ((code_a, out_a), (code_b, out_b)) = cli_runs.take().expect("criterion 12 runs once").join().expect("cli runs");
                if code_a != Some(0) || code_b != Some(0) {
                    report.passed = false;
                    report.detail = format!("`freelie suite --seed {SEED}` exited with {code_a:?} / {code_b:?}");
                } else if out_a != out_b {
                    report.passed = false;
                    report.detail = format!("`freelie suite --seed {SEED}` output differs between invocations");
                } else {
                    report.detail = format!("{}; `freelie suite --seed {SEED}` byte-identical across 2 invocations", report.detail);
                }
            }
            _ => {}
        }
        println!("{report}  ({:.1}s)", elapsed.as_secs_f64());
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed", reports.len());
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
