mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freelie::Ring;
use serde_json::json;

use commands::{CliError, Output};

#[derive(Parser, Debug)]
#[command(name = "freelie", version, about = "Exact computation in free Lie algebras over Z and Q")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Comma-separated generator names.
    #[arg(long, global = true, default_value = "a,b")]
    pub alphabet: String,
    /// Coefficient ring.
    #[arg(long, global = true, default_value = "Z", value_parser = parse_ring)]
    pub ring: Ring,
    /// Degree bound, where the command uses one.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Machine-readable output; errors go to stderr as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the randomized suite.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse().map_err(|_| format!("expected Z or Q, got {s:?}"))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the Hall basis up to the degree bound (default 4).
    Hall,
    /// Witt dimensions per degree up to the degree bound (default 8).
    Dims,
    /// Normal form of an expression.
    Nf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Bracket [u, v].
    Mul {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },
    /// Shifted chain u(v+α₁)…(v+αₙ).
    Shift {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
        /// Comma-separated shifts, applied left to right.
        #[arg(long, allow_hyphen_values = true)]
        alphas: String,
    },
    /// Solve target = u(v+α) for u.
    Divide {
        #[arg(allow_hyphen_values = true)]
        target: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Certificate (γ, w) with γ·u = w(v+α₁)…(v+αₙ) from pairs `α:u_i`.
    LemmaMain {
        #[arg(allow_hyphen_values = true)]
        v: String,
        /// A pair `α:u_i`; repeat for each shift.
        #[arg(long = "pair", required = true, allow_hyphen_values = true)]
        pairs: Vec<String>,
    },
    /// Write p ∈ L² as a sum of brackets [z_i, x_i] over generators.
    DecomposeL2 {
        #[arg(allow_hyphen_values = true)]
        p: String,
        /// Generator elements; defaults to the alphabet letters.
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Nonzero (α, β) with α·u = β·v, if u and v are proportional.
    Centralizer {
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },
    /// The r with x = r·z, if x lies on the line Rz.
    InLine {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// The y′ with x′ ∈ Rx, y′ ∈ Ry and x′y = xy′.
    Transport {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        x_prime: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Ring operation on the line Rx.
    Rx {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(long, value_parser = ["plus", "times"])]
        op: String,
    },
    /// Divisibility certificate of a·b(b+1)…(b+m) over a window of shifts.
    NatCertify {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        m: u32,
        /// Inclusive range `lo..hi`; defaults to -3..m+3.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Check that L² has width at most m over the given generators.
    WidthCheck {
        #[arg(long)]
        m: usize,
        /// Generator elements; defaults to the first m alphabet letters.
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
    },
    /// Bounded three-valued evaluation of a formula.
    Eval {
        formula: String,
        /// Free variable assignment `name=value`; a bare number is a scalar.
        #[arg(long = "let", allow_hyphen_values = true)]
        bindings: Vec<String>,
        /// Largest candidate space one quantifier may search.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Basis of the pairs (A, B) with f(Ax, y) = f(x, By).
    ScalarsSym { instance: String },
    /// Ring of scalars of an instance, by linear algebra.
    ScalarsPsw { instance: String },
    /// Ring of scalars of an instance, by exhaustive search.
    ScalarsBrute { instance: String },
    /// Bracket instance of a truncated free Lie algebra over F_p.
    ScalarsLieInstance {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
    },
    /// Run the seeded acceptance properties.
    Suite {
        /// Run only these criteria (comma-separated ids).
        #[arg(long)]
        only: Option<String>,
    },
}

fn emit(out: &Output, json: bool) {
    let mut stdout = std::io::stdout().lock();
    let text = if json {
        serde_json::to_string(&out.json).expect("json value serializes")
    } else {
        out.text.trim_end().to_string()
    };
    let _ = writeln!(stdout, "{text}");
}

fn report_error(err: &CliError, json: bool) {
    if json {
        let value = json!({"error": {"kind": err.kind(), "message": err.to_string()}});
        eprintln!("{value}");
    } else {
        eprintln!("error: {err}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.global, &cli.command) {
        Ok(out) => {
            emit(&out, cli.global.json);
            ExitCode::from(out.code)
        }
        Err(err) => {
            report_error(&err, cli.global.json);
            ExitCode::from(err.code())
        }
    }
}
