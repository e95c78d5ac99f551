//! Command-line front end for labeled-graph (`.gbs`) files.
//!
//! Exit codes: 0 success (for `classify`: a knot group), 10 not a knot group,
//! 2 input error, 3 internal error (word-problem step budget exhausted).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gbsknot::report::{abelian_json, modular_json, witnesses_json};
use gbsknot::{
    build_presentation, canonicalize_signs, classify_with_budget, parse_file, reduce, serialize, ClassifyError,
    LabeledGraph, Report, Word, WordEngine, WordError, DEFAULT_STEP_BUDGET,
};
use rayon::prelude::*;

const EXIT_NOT_KNOT: u8 = 10;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "gbsknot", version, about = "Labeled graphs, GBS groups and knot-group recognition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file parses to a valid labeled graph
    Validate { file: PathBuf },
    /// Collapse until reduced and print the result in file syntax
    Reduce {
        file: PathBuf,
        /// Also flip generator signs so tree labels are positive where possible
        #[arg(long)]
        canonical: bool,
    },
    /// Print the presentation for the default spanning tree
    Present {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Abelianization, optionally of the quotient by extra relators
    Abelianize {
        file: PathBuf,
        /// Words to kill (added as relators)
        #[arg(long, num_args = 1..)]
        kill: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Image of the modular homomorphism in Q*
    Modular {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Full classification of a file, or of every *.gbs file in a directory
    /// (one JSON line per file)
    Classify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Witness homomorphisms with their verification status
    Witness {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Normal form of a word, or an equality / ellipticity test
    Word {
        file: PathBuf,
        word: String,
        #[arg(long, conflicts_with = "elliptic")]
        equal: Option<String>,
        #[arg(long)]
        elliptic: bool,
        #[arg(long)]
        json: bool,
    },
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        let code = match e {
            WordError::BudgetExceeded(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Word(w) => w.into(),
            other => Failure {
                code: EXIT_INTERNAL,
                message: other.to_string(),
            },
        }
    }
}

type Outcome = Result<u8, Failure>;

fn step_budget() -> Result<u64, Failure> {
    match std::env::var("GBSKNOT_STEP_BUDGET") {
        Err(_) => Ok(DEFAULT_STEP_BUDGET),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("GBSKNOT_STEP_BUDGET must be a nonnegative integer, got `{s}`"))),
    }
}

fn load(path: &Path) -> Result<LabeledGraph, Failure> {
    parse_file(path).map_err(|e| {
        if e.line == 0 {
            Failure::input(e.message)
        } else {
            Failure::input(format!("{}:{}:{}: {}", path.display(), e.line, e.col, e.message))
        }
    })
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.parse::<Word>()
        .map_err(|e| Failure::input(format!("word `{s}`, column {}: {}", e.col, e.message)))
}

fn json_line(value: serde_json::Value) {
    println!("{value}");
}

fn run(cli: Cli) -> Outcome {
    let budget = step_budget()?;
    match cli.command {
        Command::Validate { file } => {
            let g = load(&file)?;
            println!(
                "ok: {} vertices, {} edges, betti1 {}, {}",
                g.vertices().len(),
                g.edges().len(),
                g.betti1(),
                if g.is_reduced() { "reduced" } else { "not reduced" }
            );
            Ok(0)
        }
        Command::Reduce { file, canonical } => {
            let mut r = reduce(&load(&file)?);
            if canonical {
                r = canonicalize_signs(&r);
            }
            print!("{}", serialize(&r));
            Ok(0)
        }
        Command::Present { file, json } => {
            let g = load(&file)?;
            let p = build_presentation(&g, &g.spanning_tree()).map_err(|e| Failure::input(e.to_string()))?;
            if json {
                json_line(serde_json::json!({
                    "generators": p.generators().collect::<Vec<_>>(),
                    "relators": p.relators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }));
            } else {
                println!("{p}");
            }
            Ok(0)
        }
        Command::Abelianize { file, kill, json } => {
            let g = load(&file)?;
            let p = build_presentation(&g, &g.spanning_tree()).map_err(|e| Failure::input(e.to_string()))?;
            let extra = kill.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>, _>>()?;
            let ab = p
                .quotient_abelianization(&extra)
                .map_err(|e| Failure::input(e.to_string()))?;
            if json {
                println!("{}", abelian_json(&ab));
            } else {
                println!("{ab}");
            }
            Ok(0)
        }
        Command::Modular { file, json } => {
            let m = gbsknot::modular_image(&load(&file)?);
            if json {
                println!("{}", modular_json(&m));
            } else {
                println!("{m}");
            }
            Ok(0)
        }
        Command::Classify { path, json } => {
            if path.is_dir() {
                classify_dir(&path, budget)
            } else {
                classify_file(&path, json, budget)
            }
        }
        Command::Witness { file, json } => {
            let v = classify_with_budget(&load(&file)?, budget)?;
            if json {
                println!("{}", witnesses_json(&v.witnesses));
            } else if v.witnesses.is_empty() {
                println!("no witness: {}", v.n_knot_ge3);
            } else {
                for w in &v.witnesses {
                    println!("source: {}", w.source);
                    for (g, img) in &w.images {
                        println!("  {g} -> {img}");
                    }
                    for s in &w.elimination {
                        let status = if s.verified { "verified" } else { "NOT verified" };
                        println!("  {} = {}  [{status}]", s.vertex, s.word);
                    }
                    println!("  relators map to 1: {}", if w.verified { "verified" } else { "NOT verified" });
                }
            }
            let all_verified = v.witnesses.iter().all(|w| w.verified);
            Ok(if v.witnesses.is_empty() || !all_verified {
                EXIT_NOT_KNOT
            } else {
                0
            })
        }
        Command::Word {
            file,
            word,
            equal,
            elliptic,
            json,
        } => {
            let g = load(&file)?;
            let w = parse_word(&word)?;
            let engine = WordEngine::new(&g).with_budget(budget);
            if let Some(other) = equal {
                let o = parse_word(&other)?;
                let eq = engine.equal(&w, &o)?;
                if json {
                    json_line(serde_json::json!({ "equal": eq }));
                } else {
                    println!("{eq}");
                }
            } else if elliptic {
                let el = engine.is_elliptic(&w)?;
                if json {
                    json_line(serde_json::json!({ "elliptic": el }));
                } else {
                    println!("{el}");
                }
            } else {
                let nf = engine.normal_form(&w)?;
                if json {
                    json_line(serde_json::json!({
                        "normal_form": nf.to_string(),
                        "identity": engine.is_identity(&w)?,
                    }));
                } else {
                    println!("{nf}");
                }
            }
            Ok(0)
        }
    }
}

fn classify_file(path: &Path, json: bool, budget: u64) -> Outcome {
    let v = classify_with_budget(&load(path)?, budget)?;
    if json {
        println!("{}", Report::new(path.display().to_string(), &v).to_json());
    } else {
        println!("input: {}", path.display());
        println!("reduced graph:");
        for line in serialize(&v.reduced).lines() {
            println!("  {line}");
        }
        println!("shape: {}", v.shape);
        println!("betti1: {}", v.betti1);
        println!("abelianization: {}", v.abelianization);
        println!("modular image: {}", v.modular);
        if let Some(e) = v.exceptional {
            println!("exceptional: {e}");
        }
        println!("1-knot group: {}", v.one_knot);
        println!("n-knot group (n >= 3): {}", v.n_knot_ge3);
        for w in &v.witnesses {
            let status = if w.verified { "verified" } else { "NOT verified" };
            println!("witness: {} [{status}]", w.source);
        }
    }
    Ok(if v.is_knot_group() { 0 } else { EXIT_NOT_KNOT })
}

/// One JSON line per `*.gbs` file, in file-name order. Exit 2 if any file
/// failed, otherwise 0.
fn classify_dir(dir: &Path, budget: u64) -> Outcome {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "gbs"))
        .collect();
    files.sort();
    let lines: Vec<(String, bool)> = files
        .par_iter()
        .map(|p| {
            let name = p.display().to_string();
            let result = load(p).and_then(|g| Ok(classify_with_budget(&g, budget)?));
            match result {
                Ok(v) => (Report::new(name, &v).to_json(), true),
                Err(f) => {
                    // same leading key as a report
                    let line = format!(
                        "{{\"input\":{},\"error\":{}}}",
                        serde_json::Value::from(name),
                        serde_json::Value::from(f.message)
                    );
                    (line, false)
                }
            }
        })
        .collect();
    let mut ok = true;
    for (line, good) in lines {
        println!("{line}");
        ok &= good;
    }
    Ok(if ok { 0 } else { EXIT_INPUT })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
