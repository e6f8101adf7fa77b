//! `scatter-ef`: command-line access to the engine, the closed forms and the
//! validation suites.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use scatter_ef::closed_form::{predict, Relation};
use scatter_ef::engine::{BoundsConfig, Half, Length, Move, Scale};
use scatter_ef::harness::{
    classify, cross_validate, finite_oracle, monomial_inventory, CacheStore, CaseBudget, SuiteReport, ALL_PROPERTIES,
    GRID_SUITES,
};
use scatter_ef::term::{hausdorff_rank, normalize};
use scatter_ef::{parse_term, print_term, Engine, EngineError, Term};

type CliResult = Result<ExitCode, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "scatter-ef",
    version,
    about = "Ehrenfeucht-Fraisse games on scattered linear orders"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Memo cache file, read before and extended after the command.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a term and show its structure.
    Parse { expr: String },
    /// Canonical printed form.
    Print { expr: String },
    /// Rewrite to a normal form of the same n-theory for every n.
    Normalize { expr: String },
    /// Hausdorff rank of the presentation.
    Rank { expr: String },
    /// Whether the order has least and greatest points.
    Ends { expr: String },
    /// Decide A ≡ₙ B.
    Equiv {
        #[arg(short = 'n')]
        n: u32,
        a: String,
        b: String,
    },
    /// l(A, B), or a report that the orders agree up to the cap.
    Length {
        #[arg(long)]
        cap: u32,
        a: String,
        b: String,
    },
    /// A winning play for player I in the n-move game.
    Witness {
        #[arg(short = 'n')]
        n: u32,
        a: String,
        b: String,
    },
    /// Closed-form prediction with the rule it comes from.
    Predict { a: String, b: String },
    /// ≡ₙ classes of all alternating monomials up to an exponent sum.
    Classify {
        #[arg(long)]
        max_exp_sum: u32,
        #[arg(short = 'n')]
        n: u32,
    },
    /// Run a validation suite; exits 2 when it finds a mismatch.
    Validate {
        /// A suite name, `properties`, or `all`.
        #[arg(long)]
        suite: String,
        /// Comma-separated `max-exp-sum=S`, `depth=D`, `cases=C`.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Factor on the engine's enumeration caps, e.g. `2` or `3/2`.
        #[arg(long)]
        bound_scale: Option<Scale>,
    },
    /// Brute-force minimax on finite chains of sizes k and l.
    OracleFinite { k: u64, l: u64, n: u32 },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn term(src: &str) -> Result<Term, Box<dyn Error>> {
    parse_term(src).map_err(|e| format!("'{src}': {e}").into())
}

fn emit(json: bool, value: Value, text: impl FnOnce() -> String) {
    if json {
        println!("{value}");
    } else {
        println!("{}", text());
    }
}

fn run(cli: Cli) -> CliResult {
    let json = cli.json;
    match cli.command {
        Command::Parse { expr } => {
            let t = term(&expr)?;
            let printed = print_term(&t);
            let structure = format!("{t:?}");
            emit(
                json,
                json!({"input": expr, "term": printed, "structure": structure}),
                || format!("{structure}\n{printed}"),
            );
        }
        Command::Print { expr } => {
            let printed = print_term(&term(&expr)?);
            emit(json, json!({"term": printed}), || printed.clone());
        }
        Command::Normalize { expr } => {
            let t = term(&expr)?;
            let nf = print_term(&normalize(&t));
            emit(json, json!({"term": print_term(&t), "normal_form": nf}), || nf.clone());
        }
        Command::Rank { expr } => {
            let t = term(&expr)?;
            let r = hausdorff_rank(&t).to_string();
            emit(json, json!({"term": print_term(&t), "rank": r}), || r.clone());
        }
        Command::Ends { expr } => {
            let t = term(&expr)?;
            let e = t.endpoints();
            let yes = |b: bool| if b { "yes" } else { "no" };
            emit(
                json,
                json!({"term": print_term(&t), "empty": e.is_empty, "least": e.has_least, "greatest": e.has_greatest}),
                || format!("least: {}\ngreatest: {}", yes(e.has_least), yes(e.has_greatest)),
            );
        }
        Command::Equiv { n, a, b } => {
            let (a, b) = (term(&a)?, term(&b)?);
            let v = with_engine(cli.cache, |e| e.first_difference(&a, &b, n))?;
            let (relation, value) = match v {
                None => ("equivalent_up_to", n),
                Some(k) => ("optimal_length", k.saturating_sub(1)),
            };
            emit(
                json,
                verdict(&a, &b, relation, Some(value), "engine", None),
                || match v {
                    None => format!("equivalent at depth {n}"),
                    Some(k) => format!(
                        "not equivalent at depth {n} (first difference at {k}, l = {})",
                        k.saturating_sub(1)
                    ),
                },
            );
        }
        Command::Length { cap, a, b } => {
            let (a, b) = (term(&a)?, term(&b)?);
            let l = with_engine(cli.cache, |e| e.optimal_length(&a, &b, cap))?;
            let (relation, value) = match l {
                Length::Exact(l) => ("optimal_length", l),
                Length::EquivalentUpTo(c) => ("equivalent_up_to", c),
            };
            emit(
                json,
                verdict(&a, &b, relation, Some(value), "engine", None),
                || match l {
                    Length::Exact(l) => l.to_string(),
                    Length::EquivalentUpTo(c) => format!("equivalent up to {c}"),
                },
            );
        }
        Command::Witness { n, a, b } => {
            let (a, b) = (term(&a)?, term(&b)?);
            let res = with_engine(cli.cache, |e| match e.witness(&a, &b, n) {
                Ok(trace) => {
                    e.validate_trace(&trace).map_err(|err| err.to_string())?;
                    Ok(Some(trace))
                }
                Err(EngineError::Equivalent(_)) => Ok(None),
                Err(err) => Err(err.to_string()),
            })?;
            match res {
                Some(trace) => {
                    let moves = serde_json::to_value(&trace.moves)?;
                    let k = trace.len() as u32;
                    emit(
                        json,
                        verdict(&a, &b, "inequivalent_at_most", Some(k), "engine", Some(moves)),
                        || {
                            trace
                                .moves
                                .iter()
                                .enumerate()
                                .map(|(i, m)| describe_move(i + 1, m))
                                .collect::<Vec<_>>()
                                .join("\n")
                        },
                    );
                }
                None => emit(
                    json,
                    verdict(&a, &b, "equivalent_up_to", Some(n), "engine", None),
                    || format!("equivalent at depth {n}: player II wins"),
                ),
            }
        }
        Command::Predict { a, b } => {
            let (a, b) = (term(&a)?, term(&b)?);
            let v = predict(&a, &b);
            let (relation, value) = match v.relation {
                Relation::EquivalentElementarily => ("equivalent_up_to", None),
                Relation::OptimalLength(l) => ("optimal_length", Some(l)),
                Relation::InequivalentAtMost(k) => ("inequivalent_at_most", k),
                Relation::OutOfScope(_) => ("out_of_scope", None),
            };
            emit(json, verdict(&a, &b, relation, value, v.source.id(), None), || {
                format!("{} [{}]", v.relation, v.source.id())
            });
        }
        Command::Classify { max_exp_sum, n } => {
            let inv = monomial_inventory(max_exp_sum);
            let classes = with_engine(cli.cache, |e| classify(e, &inv, n))?;
            emit(json, serde_json::to_value(&classes)?, || {
                classes
                    .iter()
                    .map(|c| {
                        let ms: Vec<String> = c.members.iter().map(print_term).collect();
                        format!("{}: {}", print_term(&c.representative), ms.join(", "))
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        }
        Command::Validate {
            suite,
            budget,
            seed,
            bound_scale,
        } => {
            let mut b = match budget {
                Some(text) => parse_budget(&text)?,
                None => CaseBudget::default(),
            };
            if let Some(s) = seed {
                b.seed = s;
            }
            if let Some(s) = bound_scale {
                b.bound_scale = s;
            }
            let names: Vec<&str> = if suite == "all" {
                GRID_SUITES.iter().copied().chain([ALL_PROPERTIES]).collect()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            for name in names {
                reports.push(cross_validate(name, &b)?);
            }
            if json {
                println!("{}", serde_json::to_value(&reports)?);
            } else {
                for r in &reports {
                    print_report(r);
                }
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(2));
            }
        }
        Command::OracleFinite { k, l, n } => {
            let v = finite_oracle(k, l, n)?;
            emit(json, json!({"k": k, "l": l, "n": n, "equivalent": v}), || v.to_string());
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Runs `f` on an engine primed from the cache, then writes the memo back.
fn with_engine<T, E: Into<Box<dyn Error>>>(
    cache: Option<PathBuf>,
    f: impl FnOnce(&mut Engine) -> Result<T, E>,
) -> Result<T, Box<dyn Error>> {
    let mut engine = Engine::new(BoundsConfig::default());
    let Some(path) = cache else {
        return f(&mut engine).map_err(Into::into);
    };
    let mut store = CacheStore::open(&path, &engine.config().digest())?;
    store.load_into(&mut engine);
    for w in &store.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    let out = f(&mut engine).map_err(Into::into)?;
    if store.foreign {
        eprintln!("warning: {}: left unchanged", path.display());
    } else if store.record(&engine) > 0 {
        store.save()?;
    }
    Ok(out)
}

fn verdict(a: &Term, b: &Term, relation: &str, value: Option<u32>, source: &str, witness: Option<Value>) -> Value {
    json!({
        "a": print_term(a),
        "b": print_term(b),
        "relation": relation,
        "value": value,
        "source": source,
        "witness": witness,
    })
}

fn describe_move(i: usize, m: &Move) -> String {
    let answer = match &m.response {
        Some(r) => format!(
            "II answers {} | {} ({})",
            print_term(&r.left),
            print_term(&r.right),
            r.label
        ),
        None => "II cannot answer".to_string(),
    };
    let next = match m.continue_in {
        Some(Half::Left) => "; play continues on the left",
        Some(Half::Right) => "; play continues on the right",
        None => "",
    };
    format!(
        "{i}. I plays in {} at {} | {} ({}); {answer}{next}",
        m.structure,
        print_term(&m.split.left),
        print_term(&m.split.right),
        m.split.label
    )
}

fn parse_budget(text: &str) -> Result<CaseBudget, Box<dyn Error>> {
    let mut b = CaseBudget::default();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| format!("budget entry '{item}' is not key=value"))?;
        let bad = |_| format!("budget entry '{item}' needs a number");
        match key.trim() {
            "max-exp-sum" => b.max_exp_sum = val.trim().parse().map_err(bad)?,
            "depth" => b.max_depth = val.trim().parse().map_err(bad)?,
            "cases" => b.cases = val.trim().parse().map_err(bad)?,
            other => return Err(format!("unknown budget key '{other}' (max-exp-sum, depth, cases)").into()),
        }
    }
    Ok(b)
}

fn print_report(r: &SuiteReport) {
    println!(
        "{}: {} cases, {} skipped, {} failures, seed {}, {:.2}s",
        r.suite,
        r.cases_run,
        r.skipped,
        r.failures.len(),
        r.seed,
        r.wall_time
    );
    for f in &r.failures {
        println!("  FAIL {}: expected {}, got {}", f.inputs, f.expected, f.got);
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}
