//! `surjvcsp` command-line interface.
//!
//! Exit codes: 0 ok, 1 usage, 2 parse/data error, 3 resource guard,
//! 4 verify mismatch.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use surjvcsp::classify::classify_language;
use surjvcsp::gadgets;
use surjvcsp::gmc::LambdaClass;
use surjvcsp::instance::Instance;
use surjvcsp::oracle;
use surjvcsp::solver::{
    enumerate_optimal_surjective, fixup_surjective, solve_surjective, SolveMode,
};

use surjvcsp_cli::{
    matrix_from_rows, parse_assignment, parse_gmc, parse_graph, parse_instance, parse_matrix,
    parse_rational_arg, write_instance, write_result, AssignmentRecord, CliError, LambdaRecord,
    ResultRecord, SolutionRecord, VerdictRecord,
};

#[derive(Parser)]
#[command(
    name = "surjvcsp",
    version,
    about = "Boolean surjective valued CSPs: classify, solve, enumerate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Eds,
    Brute,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> SolveMode {
        match m {
            ModeArg::Auto => SolveMode::Auto,
            ModeArg::Eds => SolveMode::Eds,
            ModeArg::Brute => SolveMode::Brute,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the dichotomy verdict of the language of an instance file.
    Classify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Find an optimal surjective assignment.
    Solve {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
    /// Stream all optimal surjective assignments, one JSON object per line.
    Enumerate {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Classify λ of a generalised min-cut file; optionally enumerate.
    Gmc {
        #[arg(short, long)]
        input: PathBuf,
        /// Also list all optimal solutions.
        #[arg(long)]
        all_optimal: bool,
        /// Also list all α-optimal solutions for this factor (P or P/Q).
        #[arg(long, conflicts_with = "all_optimal")]
        alpha: Option<String>,
    },
    /// Surjective fix-up of an assignment for a maximisation instance.
    Fixup {
        #[arg(short, long)]
        input: PathBuf,
        /// The starting assignment as a 0/1 string.
        #[arg(long)]
        assignment: String,
        /// The ε of the (r − ε) guarantee (P or P/Q).
        #[arg(long)]
        epsilon: String,
        /// The approximation ratio r of the starting assignment.
        #[arg(long, default_value = "1")]
        ratio: String,
    },
    /// Instance transformers; each prints a new instance file.
    Gadget {
        #[command(subcommand)]
        gadget: GadgetCommand,
    },
    /// Cross-check the solver against the brute-force oracle.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Time the pipeline stages and print a CSV.
    Bench {
        #[arg(short, long)]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Minimum-distance encoding of a parity check matrix file.
    Mindist {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Max-cut encoding of a graph (gmc file; f lines ignored).
    Maxcut {
        #[arg(long)]
        graph: PathBuf,
        /// Gadget parameter, at least 2|E| + 1.
        #[arg(long)]
        w: i128,
    },
    /// Append two fresh unconstrained variables.
    Pad {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Replace crisp constants by order constraints on fresh variables.
    LeqConstants {
        #[arg(short, long)]
        input: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = read_file(path)?;
    let (_, instance) = parse_instance(&text)?;
    Ok(instance)
}

fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Classify { input } => {
            let text = read_file(&input)?;
            let (lang, _) = parse_instance(&text)?;
            let verdict = classify_language(&lang);
            emit(&serde_json::to_string(&VerdictRecord::from(&verdict)).unwrap());
            Ok(0)
        }
        Command::Solve { input, mode } => {
            let instance = load_instance(&input)?;
            let result = solve_surjective(&instance, mode.into())?;
            emit(&write_result(&ResultRecord::from(&result)));
            Ok(0)
        }
        Command::Enumerate { input } => {
            let instance = load_instance(&input)?;
            let stream = enumerate_optimal_surjective(&instance)?;
            for s in stream {
                let record = AssignmentRecord::new(&instance, &s);
                emit(&serde_json::to_string(&record).unwrap());
            }
            Ok(0)
        }
        Command::Gmc {
            input,
            all_optimal,
            alpha,
        } => {
            let text = read_file(&input)?;
            let j = parse_gmc(&text)?;
            let class = j.classify_lambda()?;
            let record = match &class {
                LambdaClass::Zero(witness) => LambdaRecord {
                    lambda_class: "zero".into(),
                    lambda: Some("0".into()),
                    witness: Some(
                        surjvcsp::subset::elements(*witness)
                            .into_iter()
                            .map(|v| v + 1)
                            .collect(),
                    ),
                },
                LambdaClass::Finite(lambda) => LambdaRecord {
                    lambda_class: "finite".into(),
                    lambda: Some(lambda.to_string()),
                    witness: None,
                },
                LambdaClass::Infinite => LambdaRecord {
                    lambda_class: "infinite".into(),
                    lambda: Some("inf".into()),
                    witness: None,
                },
            };
            emit(&serde_json::to_string(&record).unwrap());
            if all_optimal {
                let (_, sols) = j.enumerate_optimal()?;
                for mask in sols {
                    emit(&serde_json::to_string(&SolutionRecord::new(&j, mask)).unwrap());
                }
            } else if let Some(alpha) = alpha {
                let alpha = parse_rational_arg(&alpha)?;
                for mask in j.enumerate_alpha_optimal(&alpha)? {
                    emit(&serde_json::to_string(&SolutionRecord::new(&j, mask)).unwrap());
                }
            }
            Ok(0)
        }
        Command::Fixup {
            input,
            assignment,
            epsilon,
            ratio,
        } => {
            let instance = load_instance(&input)?;
            let s = parse_assignment(&assignment)?;
            let epsilon = parse_rational_arg(&epsilon)?;
            let ratio = parse_rational_arg(&ratio)?;
            let fixed = fixup_surjective(&instance, &s, &ratio, &epsilon)?;
            let record = AssignmentRecord::new(&instance, &fixed);
            emit(&serde_json::to_string(&record).unwrap());
            Ok(0)
        }
        Command::Gadget { gadget } => {
            let instance = match gadget {
                GadgetCommand::Mindist { matrix } => {
                    let rows = parse_matrix(&read_file(&matrix)?)?;
                    let h = matrix_from_rows(rows)?;
                    gadgets::encode_min_distance(&h)?
                }
                GadgetCommand::Maxcut { graph, w } => {
                    let g = parse_graph(&read_file(&graph)?)?;
                    gadgets::encode_maxcut(&g, w)?
                }
                GadgetCommand::Pad { input } => gadgets::pad_surjective(&load_instance(&input)?),
                GadgetCommand::LeqConstants { input } => {
                    gadgets::simulate_constants_with_leq(&load_instance(&input)?)?
                }
            };
            print!("{}", write_instance(&instance));
            Ok(0)
        }
        Command::Verify { input } => {
            let instance = load_instance(&input)?;
            let fast = solve_surjective(&instance, SolveMode::Auto)?;
            let slow = oracle::brute_vcsp_surjective(&instance)?;
            let matches = fast.status == slow.status && fast.value == slow.value;
            let line = format!(
                "{{\"match\":{matches},\"solver_value\":\"{}\",\"oracle_value\":\"{}\",\"path\":\"{}\"}}",
                fast.value,
                slow.value,
                fast.path.as_str()
            );
            emit(&line);
            Ok(if matches { 0 } else { 4 })
        }
        Command::Bench { input } => {
            let text = read_file(&input)?;
            emit("step,microseconds");
            let t = Instant::now();
            let (lang, instance) = parse_instance(&text)?;
            emit(&format!("parse,{}", t.elapsed().as_micros()));
            let t = Instant::now();
            let _ = classify_language(&lang);
            emit(&format!("classify,{}", t.elapsed().as_micros()));
            let t = Instant::now();
            let _ = solve_surjective(&instance, SolveMode::Auto)?;
            emit(&format!("solve,{}", t.elapsed().as_micros()));
            let t = Instant::now();
            let count = enumerate_optimal_surjective(&instance)?.count();
            emit(&format!("enumerate,{}", t.elapsed().as_micros()));
            emit(&format!("optimal_count,{count}"));
            Ok(0)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
