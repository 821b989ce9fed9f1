use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pamat::analytics::{
    avoiding_permanent, enumerate_avoiding, extend_avoiding, is_fully_indecomposable, is_sigma_permutation_avoiding,
    is_total_support, permanent,
};
use pamat::construct312::{construct_312_maximal_seeded, construct_312_shadow, random_lr_path};
use pamat::containment::contains;
use pamat::error::Error;
use pamat::extremal::{
    construct_canonical_identity_avoiding, construct_identity_avoiding_from_path, decompose_jn, extremal_formula,
    greedy_saturate, peel_zigzag_decomposition, FormulaStatus,
};
use pamat::matrix::BinaryMatrix;
use pamat::oracle::{
    brute_max_ones, check_conjecture_k1, conjecture_membership, enumerate_maximal, search_max_avoiding_permanent,
    PermanentConstraint,
};
use pamat::permutation::Permutation;
use pamat::zigzag::{crucial_and_corner_ones, recognize_zigzag, ZigzagPath};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "pamat", version, about = "Pattern-avoiding (0,1)-matrix toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recursive,
    Shadow,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a matrix contains a pattern.
    Check { pattern: String, matrix: PathBuf },
    /// Largest number of ones in a pattern-avoiding m x n matrix.
    MaxOnes { pattern: String, m: usize, n: usize },
    /// Build a maximal pattern-avoiding matrix (12..k and the 312 class).
    Construct {
        pattern: String,
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Zigzag path file: the base path for 12..k, the seed path for 312.
        #[arg(long)]
        path: Option<PathBuf>,
        /// Construction used for 312.
        #[arg(long, value_enum, default_value = "recursive")]
        method: Method,
    },
    /// Greedily add ones until the matrix is maximal.
    Saturate {
        pattern: String,
        matrix: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Split a maximal 12..k-avoiding matrix into k-1 zigzag paths.
    Decompose {
        matrix: PathBuf,
        #[arg(short, long)]
        k: usize,
    },
    /// Recognize a matrix whose ones form one complete right-to-left zigzag path.
    Recognize { matrix: PathBuf },
    /// Crucial and corner ones of a zigzag path file.
    Crucial { path: PathBuf },
    /// The n permutations whose matrices sum to J_n.
    DecomposeJn { n: usize },
    /// Permanent, or the pattern-avoiding permanent with --avoid.
    Permanent {
        matrix: PathBuf,
        #[arg(long)]
        avoid: Option<String>,
        /// List the counted permutations (with --avoid).
        #[arg(long)]
        witnesses: bool,
    },
    /// List the pattern-avoiding permutations of {1..n}.
    Enumerate {
        n: usize,
        pattern: String,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Least pattern-avoiding permutation of {1..n} containing the given values in order.
    Extend {
        pattern: String,
        n: usize,
        /// Comma-separated values, e.g. 4,6,1.
        values: String,
    },
    /// Total support and full indecomposability of a square matrix.
    Support {
        matrix: PathBuf,
        /// Also test whether every supported permutation avoids this pattern.
        #[arg(long)]
        avoid: Option<String>,
    },
    /// Exhaustive searches on small instances.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive maximum of ones, compared with the closed form.
    MaxOnes { pattern: String, m: usize, n: usize },
    /// Every maximal pattern-avoiding m x n matrix.
    EnumerateMaximal {
        pattern: String,
        m: usize,
        n: usize,
        #[arg(long)]
        count: bool,
    },
    /// Check the conjectured bound for k12..(k-1).
    Conjecture { m: usize, n: usize, k: usize },
    /// Check a given matrix against the conjectured bound for k12..(k-1).
    Membership { matrix: PathBuf, k: usize },
    /// Maximum pattern-avoiding permanent over n x n matrices.
    Permanent {
        pattern: String,
        n: usize,
        #[arg(long, default_value = "none")]
        constraint: String,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Format { .. }) | Failure::Io(..) => 2,
            Failure::Lib(Error::Resource(_)) => 3,
            Failure::Lib(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(p, e) => format!("cannot read {}: {e}", p.display()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_matrix(path: &Path) -> Result<BinaryMatrix, Failure> {
    Ok(BinaryMatrix::parse(&read(path)?)?)
}

fn read_path(path: &Path) -> Result<ZigzagPath, Failure> {
    Ok(ZigzagPath::parse(&read(path)?)?)
}

fn pattern(word: &str) -> Result<Permutation, Failure> {
    Ok(Permutation::parse_word(word)?)
}

fn render_paths(paths: &[ZigzagPath]) -> String {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let cells: Vec<String> = p.cells().iter().map(ToString::to_string).collect();
            format!("path {} ({} cells): {}", i + 1, p.len(), cells.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn status_label(status: FormulaStatus) -> &'static str {
    match status {
        FormulaStatus::Trivial => "trivial",
        FormulaStatus::Proven => "proven",
        FormulaStatus::Conjectured => "conjectured",
    }
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Check { pattern: word, matrix } => {
            let sigma = pattern(&word)?;
            let a = read_matrix(&matrix)?;
            let hit = contains(&a, &sigma);
            Ok(Output::new(
                if hit { "contains" } else { "avoids" },
                json!({ "pattern": sigma, "contains": hit }),
            ))
        }
        Command::MaxOnes { pattern: word, m, n } => {
            let sigma = pattern(&word)?;
            if m == 0 || n == 0 {
                return Err(Error::Domain("dimensions must be positive".into()).into());
            }
            let Some(value) = extremal_formula(m, n, &sigma) else {
                return Err(Error::Domain(format!(
                    "no closed form for {sigma}; supported are 12..k, 312 and k12..(k-1) up to symmetry"
                ))
                .into());
            };
            let text = match value.status {
                FormulaStatus::Conjectured => format!("{} (conjectured)", value.value),
                _ => value.value.to_string(),
            };
            Ok(Output::new(
                text,
                json!({ "pattern": sigma, "m": m, "n": n, "value": value.value, "status": status_label(value.status) }),
            ))
        }
        Command::Construct { pattern: word, m, n, seed, path, method } => {
            let sigma = pattern(&word)?;
            let a = if sigma.is_identity() {
                let k = sigma.len();
                match path {
                    Some(p) => construct_identity_avoiding_from_path(m, n, k, &read_path(&p)?)?,
                    None => construct_canonical_identity_avoiding(m, n, k)?,
                }
            } else if sigma.values() == [3, 1, 2] {
                let zigzag = match path {
                    Some(p) => read_path(&p)?,
                    None => random_lr_path(m, n, seed)?,
                };
                match method {
                    Method::Recursive => construct_312_maximal_seeded(m, n, &zigzag, seed)?,
                    Method::Shadow => construct_312_shadow(m, n, &zigzag)?,
                }
            } else {
                return Err(Error::Domain(format!("no construction for {sigma}; use 12..k or 312")).into());
            };
            Ok(Output::new(a.render(), json!({ "pattern": sigma, "matrix": a, "ones": a.count_ones() })))
        }
        Command::Saturate { pattern: word, matrix, seed } => {
            let sigma = pattern(&word)?;
            let a = greedy_saturate(&read_matrix(&matrix)?, &sigma, seed)?;
            Ok(Output::new(a.render(), json!({ "pattern": sigma, "seed": seed, "matrix": a, "ones": a.count_ones() })))
        }
        Command::Decompose { matrix, k } => {
            let paths = peel_zigzag_decomposition(&read_matrix(&matrix)?, k)?;
            let lengths: Vec<usize> = paths.iter().map(ZigzagPath::len).collect();
            Ok(Output::new(render_paths(&paths), json!({ "k": k, "lengths": lengths, "paths": paths })))
        }
        Command::Recognize { matrix } => {
            let found = recognize_zigzag(&read_matrix(&matrix)?);
            let text = match &found {
                Some(p) => p.render(),
                None => "not a complete zigzag path".to_string(),
            };
            Ok(Output::new(text, json!({ "path": found })))
        }
        Command::Crucial { path } => {
            let (crucial, corners) = crucial_and_corner_ones(&read_path(&path)?)?;
            let list = |v: &[pamat::matrix::Position]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            Ok(Output::new(
                format!("crucial: {}\ncorners: {}", list(&crucial), list(&corners)),
                json!({ "crucial": crucial, "corners": corners }),
            ))
        }
        Command::DecomposeJn { n } => {
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()).into());
            }
            let perms = decompose_jn(n);
            let text = perms.iter().map(Permutation::comma_list).collect::<Vec<_>>().join("\n");
            Ok(Output::new(text, json!({ "n": n, "permutations": perms })))
        }
        Command::Permanent { matrix, avoid, witnesses } => {
            let a = read_matrix(&matrix)?;
            match avoid {
                None => {
                    let value = permanent(&a)?;
                    // Values past u64 go out as decimal strings.
                    let v = u64::try_from(value).map_or_else(|_| json!(value.to_string()), |v| json!(v));
                    Ok(Output::new(value.to_string(), json!({ "value": v })))
                }
                Some(word) => {
                    let sigma = pattern(&word)?;
                    let report = avoiding_permanent(&a, &sigma, witnesses)?;
                    let mut text = report.value.to_string();
                    for w in report.witnesses.iter().flatten() {
                        text.push('\n');
                        text.push_str(&w.comma_list());
                    }
                    Ok(Output::new(text, json!({ "pattern": sigma, "report": report })))
                }
            }
        }
        Command::Enumerate { n, pattern: word, count } => {
            let sigma = pattern(&word)?;
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()).into());
            }
            let perms: Vec<Permutation> = enumerate_avoiding(n, &sigma).collect();
            let text = if count {
                perms.len().to_string()
            } else {
                perms.iter().map(Permutation::comma_list).collect::<Vec<_>>().join("\n")
            };
            let json = if count {
                json!({ "n": n, "pattern": sigma, "count": perms.len() })
            } else {
                json!({ "n": n, "pattern": sigma, "count": perms.len(), "permutations": perms })
            };
            Ok(Output::new(text, json))
        }
        Command::Extend { pattern: word, n, values } => {
            let sigma = pattern(&word)?;
            let sub: Vec<usize> = values
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .enumerate()
                .map(|(i, s)| {
                    s.trim().parse::<usize>().map_err(|_| Error::Format {
                        line: 1,
                        column: Some(i + 1),
                        message: format!("bad value {s:?}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            let found = extend_avoiding(&sub, n, &sigma)?;
            let text = found.as_ref().map_or_else(|| "none".to_string(), Permutation::comma_list);
            Ok(Output::new(text, json!({ "pattern": sigma, "n": n, "values": sub, "extension": found })))
        }
        Command::Support { matrix, avoid } => {
            let a = read_matrix(&matrix)?;
            let total = is_total_support(&a)?;
            let fully = is_fully_indecomposable(&a)?;
            let mut text = format!("total support: {total}\nfully indecomposable: {fully}");
            let mut json = json!({ "total_support": total, "fully_indecomposable": fully });
            if let Some(word) = avoid {
                let sigma = pattern(&word)?;
                let ok = is_sigma_permutation_avoiding(&a, &sigma)?;
                text.push_str(&format!("\n{sigma}-permutation-avoiding: {ok}"));
                json["pattern"] = json!(sigma);
                json["permutation_avoiding"] = json!(ok);
            }
            Ok(Output::new(text, json))
        }
        Command::Oracle { command } => run_oracle(command),
    }
}

fn run_oracle(command: OracleCommand) -> Result<Output, Failure> {
    match command {
        OracleCommand::MaxOnes { pattern: word, m, n } => {
            let r = brute_max_ones(m, n, &pattern(&word)?)?;
            let formula = match (r.formula_value, r.formula_status) {
                (Some(v), Some(s)) => format!("{v} ({})", status_label(s)),
                _ => "none".to_string(),
            };
            let text = format!(
                "exhaustive maximum: {}\nformula: {formula}\nagreement: {}\nscanned: {}\nwitness:\n{}",
                r.exhaustive_max,
                r.agreement,
                r.matrices_scanned,
                r.witness.render()
            );
            Ok(Output::new(text, json!({ "report": r })))
        }
        OracleCommand::EnumerateMaximal { pattern: word, m, n, count } => {
            let sigma = pattern(&word)?;
            let all: Vec<BinaryMatrix> = enumerate_maximal(m, n, &sigma)?.collect();
            let mut counts: Vec<usize> = all.iter().map(BinaryMatrix::count_ones).collect();
            counts.sort_unstable();
            counts.dedup();
            let text = if count {
                format!("{} maximal matrices; one-counts {counts:?}", all.len())
            } else {
                all.iter().map(BinaryMatrix::render).collect::<Vec<_>>().join("\n\n")
            };
            let mut json = json!({ "pattern": sigma, "m": m, "n": n, "count": all.len(), "one_counts": counts });
            if !count {
                json["matrices"] = json!(all);
            }
            Ok(Output::new(text, json))
        }
        OracleCommand::Conjecture { m, n, k } => {
            let r = check_conjecture_k1(m, n, k)?;
            let mut text = format!(
                "pattern: {}\nbound: {}\nexhaustive maximum: {}\nbound exact: {}",
                r.oracle.sigma, r.bound, r.oracle.exhaustive_max, r.bound_exact
            );
            if let Some(s) = &r.saturation {
                text.push_str(&format!(
                    "\nmaximal matrices: {}\nall maximal at bound: {}",
                    s.maximal_matrices, s.all_at_bound
                ));
            }
            if let Some(c) = r.counterexample.as_ref().or(r.saturation.as_ref().and_then(|s| s.counterexample.as_ref())) {
                text.push_str(&format!("\ncounterexample:\n{}", c.render()));
            }
            Ok(Output::new(text, json!({ "report": r })))
        }
        OracleCommand::Membership { matrix, k } => {
            let r = conjecture_membership(&read_matrix(&matrix)?, k)?;
            let text = format!(
                "avoids {}: {}\nones: {}\nbound: {}\nmaximal: {}",
                Permutation::max_first(k),
                r.avoids,
                r.ones,
                r.bound,
                r.maximal
            );
            Ok(Output::new(text, json!({ "report": r })))
        }
        OracleCommand::Permanent { pattern: word, n, constraint } => {
            let sigma = pattern(&word)?;
            let constraint: PermanentConstraint = constraint.parse()?;
            let r = search_max_avoiding_permanent(n, &sigma, constraint)?;
            let text = format!("maximum: {}\nscanned: {}\nwitness:\n{}", r.maximum, r.matrices_scanned, r.witness.render());
            Ok(Output::new(text, json!({ "report": r })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command) {
        Ok(out) => {
            match format {
                Format::Text => println!("{}", out.text),
                Format::Json => {
                    let mut body = json!({ "schema": SCHEMA });
                    if let Value::Object(fields) = out.json {
                        body.as_object_mut().unwrap().extend(fields);
                    }
                    println!("{}", serde_json::to_string_pretty(&body).unwrap());
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match format {
                Format::Text => eprintln!("error: {}", f.message()),
                Format::Json => {
                    let body = json!({ "schema": SCHEMA, "error": f.message(), "exit_code": f.exit_code() });
                    println!("{}", serde_json::to_string_pretty(&body).unwrap());
                }
            }
            ExitCode::from(f.exit_code())
        }
    }
}
