use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use degzero::combinatorics::Partition;
use degzero::curve::{c_elliptic_constant, free_energy_deg0, CurveTarget};
use degzero::hodge::{theorem_a_value, HodgeClass, HodgeTable};
use degzero::loop_zero::{b_coefficients, m_inverse_closed, m_matrix, w_g, Formula};
use degzero::rational;
use degzero::verify::{self, Suite};

/// Exact degree-zero Gromov–Witten invariants of curves and ψ–λ Hodge integrals.
#[derive(Parser)]
#[command(name = "degzero", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// The universal function W_g (g >= 2).
    Wg {
        #[arg(short)]
        g: u32,
        #[arg(long, default_value = "theorem1")]
        formula: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Pole coefficients B_{g,j}, j = 1..2g-1.
    Bg {
        #[arg(short)]
        g: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The triangular matrix M or its inverse.
    Matrix {
        #[arg(short)]
        g: u32,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// A table of ψ–λ_g or ψ–λ_{g-1} integrals.
    Hodge {
        #[arg(short)]
        g: u32,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 3)]
        max_points: u32,
        #[arg(long)]
        max_psi: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// ∫ ψ^{2g-1} λ_{g-1} over M_{g,1}.
    TheoremA {
        #[arg(short)]
        g: u32,
    },
    /// Degree-zero free energy of a genus-h target curve.
    Fe {
        #[arg(short)]
        g: u32,
        #[arg(long, default_value_t = 0)]
        target_genus: u32,
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[arg(long, default_value_t = 3)]
        max_index: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Constant term of the elliptic stationary series for a partition.
    Constants {
        #[arg(long)]
        partition: String,
    },
    /// Run invariant suites and report each check.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        gmax: u32,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<degzero::Error> for Failure {
    fn from(e: degzero::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn unsupported(format: Format, what: &str) -> Failure {
    let name = match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Failure::Usage(format!("{what} has no {name} output"))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Wg { g, formula, format } => {
            let formula: Formula = formula.parse()?;
            let w = w_g(g, formula)?;
            match format {
                Format::Text => println!("{w}"),
                Format::Json => println!(
                    "{}",
                    pretty(&json!({"g": g, "W": w.to_json(), "formula": formula.name()}))
                ),
                Format::Csv => return Err(unsupported(format, "wg")),
            }
        }
        Command::Bg { g, format } => {
            let b = b_coefficients(g)?;
            match format {
                Format::Text => {
                    for (j, p) in b.as_vec().iter().enumerate() {
                        println!("{}\t{p}", j + 1);
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = b
                        .as_vec()
                        .iter()
                        .enumerate()
                        .map(|(j, p)| json!({"j": j + 1, "B": p.to_json()}))
                        .collect();
                    println!("{}", pretty(&json!({"g": g, "coefficients": rows})));
                }
                Format::Csv => return Err(unsupported(format, "bg")),
            }
        }
        Command::Matrix { g, inverse, format } => {
            let m = if inverse {
                m_inverse_closed(g)?
            } else {
                m_matrix(g)?
            };
            match format {
                Format::Text => print!("{m}"),
                Format::Json => println!("{}", pretty(&m.to_json())),
                Format::Csv => return Err(unsupported(format, "matrix")),
            }
        }
        Command::Hodge {
            g,
            class,
            max_points,
            max_psi,
            format,
        } => {
            let class: HodgeClass = class.parse()?;
            let max_psi =
                max_psi.unwrap_or_else(|| class.psi_degree(g.max(1), max_points).max(0) as u32);
            let t = HodgeTable::build(g, class, max_points, max_psi)?;
            match format {
                Format::Csv => print!("{}", t.to_csv()),
                Format::Json => println!("{}", pretty(&t.to_json())),
                Format::Text => return Err(unsupported(format, "hodge")),
            }
        }
        Command::TheoremA { g } => println!("{}", rational::to_text(&theorem_a_value(g)?)),
        Command::Fe {
            g,
            target_genus,
            order,
            max_index,
            format,
        } => {
            let f = free_energy_deg0(g, CurveTarget::new(target_genus), max_index, order)?;
            match format {
                Format::Json => println!("{}", pretty(&f.to_json())),
                Format::Text => print!("{f}"),
                Format::Csv => return Err(unsupported(format, "fe")),
            }
        }
        Command::Constants { partition } => {
            let lam: Partition = partition.parse()?;
            println!("{}", rational::to_text(&c_elliptic_constant(&lam)));
        }
        Command::Verify { suite, gmax } => {
            let suites = Suite::parse_list(&suite)?;
            let checks = verify::run(&suites, gmax);
            let mut all_ok = true;
            for s in &suites {
                let mine: Vec<_> = checks.iter().filter(|c| c.suite == *s).collect();
                for c in &mine {
                    println!("  {c}");
                }
                let passed = mine.iter().filter(|c| c.passed).count();
                let ok = passed == mine.len();
                all_ok &= ok;
                println!(
                    "{} {s} ({passed}/{})",
                    if ok { "ok" } else { "FAIL" },
                    mine.len()
                );
            }
            if !all_ok {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("DEGZERO_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool configured once");
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
