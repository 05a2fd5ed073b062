use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use opalg::algebra::{LoadError, PMode, RbLieAlgebra};
use opalg::enveloping::Enveloping;
use opalg::gsb::{check_gsb, Bounds, CheckedCase, GsbReport, Kind, Verdict, Witness};
use opalg::rewrite::{Budget, Rewriter};
use opalg::rules::{RuleError, RuleSet, RuleSystem};
use opalg::terms::{Alphabet, Poly};

const EXIT_AXIOM: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_GSB_FAIL: u8 = 4;
const EXIT_BUDGET: u8 = 5;

/// Diverged cases beyond this many are counted, not listed, in text output.
const LISTED_DIVERGED: usize = 20;

#[derive(Parser)]
#[command(
    name = "opalg",
    version,
    about = "Normal forms and Gröbner-Shirshov checks for enveloping Rota-Baxter algebras"
)]
struct Cli {
    /// Admit basis elements with P(x) = 0.
    #[arg(long, global = true)]
    allow_degenerate_p: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra file against the Rota-Baxter Lie axioms.
    Validate { file: PathBuf },
    /// Print the normal form of an expression.
    Nf {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Rules::T)]
        rules: Rules,
        /// Print each rewriting step.
        #[arg(long)]
        trace: bool,
        /// Rewrite at seeded random positions instead of leftmost-innermost.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Multiply two elements of the enveloping algebra.
    Mul {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Apply the Rota-Baxter operator in the enveloping algebra.
    ApplyP {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        expr: String,
    },
    /// List irreducible words of T within bounds.
    Basis {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        max_depth: usize,
    },
    /// Check every composition within bounds for triviality.
    CheckGsb {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long, value_enum, default_value_t = Rules::T)]
        rules: Rules,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        max_depth: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra specification file.
    #[arg(long = "algebra")]
    path: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rules {
    #[value(name = "S")]
    S,
    #[value(name = "T")]
    T,
}

impl From<Rules> for RuleSet {
    fn from(r: Rules) -> Self {
        match r {
            Rules::S => RuleSet::S,
            Rules::T => RuleSet::T,
        }
    }
}

/// A message for stderr paired with the process exit code.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure(EXIT_INPUT, msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = if cli.allow_degenerate_p {
        PMode::AllowDegenerate
    } else {
        PMode::Strict
    };
    match run(cli.command, mode) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command, mode: PMode) -> Result<u8, Failure> {
    match command {
        Command::Validate { file } => validate(&file, mode),
        Command::Nf {
            algebra,
            expr,
            rules,
            trace,
            seed,
        } => {
            let rules = load_rules(&algebra.path, rules.into(), mode)?;
            let a = rules.alphabet();
            let f = parse(a, &expr)?;
            let mut rw = Rewriter::new(&rules);
            let result = match seed {
                Some(seed) if !trace => {
                    rw.normal_form_random(&f, &mut ChaCha8Rng::seed_from_u64(seed))
                }
                Some(_) => return Err(Failure::input("--trace and --seed cannot be combined")),
                None if trace => {
                    let (result, steps) = rw.normal_form_traced(&f);
                    print!("{}", steps.render(a));
                    result
                }
                None => rw.normal_form(&f),
            };
            let nf = result.map_err(|e| Failure(EXIT_BUDGET, e.to_string()))?;
            println!("{}", a.poly(&nf));
            Ok(0)
        }
        Command::Mul {
            algebra,
            left,
            right,
        } => {
            let env = load_enveloping(&algebra.path, mode)?;
            let a = env.algebra().alphabet();
            let l = env.element(&parse(a, &left)?).map_err(budget)?;
            let r = env.element(&parse(a, &right)?).map_err(budget)?;
            let p = env.multiply(&l, &r).map_err(budget)?;
            println!("{}", a.poly(p.poly()));
            Ok(0)
        }
        Command::ApplyP { algebra, expr } => {
            let env = load_enveloping(&algebra.path, mode)?;
            let a = env.algebra().alphabet();
            let x = env.element(&parse(a, &expr)?).map_err(budget)?;
            let p = env.apply_rb(&x).map_err(budget)?;
            println!("{}", a.poly(p.poly()));
            Ok(0)
        }
        Command::Basis {
            algebra,
            max_degree,
            max_depth,
        } => {
            let env = load_enveloping(&algebra.path, mode)?;
            let a = env.algebra().alphabet();
            let basis = env.enumerate_irr_basis(max_degree, max_depth);
            for w in &basis {
                println!("{}", a.word(w));
            }
            println!("count: {}", basis.len());
            Ok(0)
        }
        Command::CheckGsb {
            algebra,
            rules,
            max_degree,
            max_depth,
            jobs,
            output,
        } => {
            let rules = load_rules(&algebra.path, rules.into(), mode)?;
            let bounds = Bounds {
                max_degree,
                max_depth,
            };
            let start = Instant::now();
            let report = check_gsb(&rules, bounds, Budget::default(), jobs.max(1));
            eprintln!("checked in {:.2?}", start.elapsed());
            print!("{}", render_report(&rules, &report));
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&report_json(&rules, &report))
                    .expect("json values serialize");
                fs::write(&path, text + "\n")
                    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            }
            Ok(if report.passed() { 0 } else { EXIT_GSB_FAIL })
        }
    }
}

fn budget(e: opalg::rewrite::RewriteError) -> Failure {
    Failure(EXIT_BUDGET, e.to_string())
}

fn parse(a: &Alphabet, text: &str) -> Result<Poly, Failure> {
    a.parse_poly(text)
        .map_err(|e| Failure::input(format!("cannot parse {text:?}: {e}")))
}

fn load(path: &Path) -> Result<RbLieAlgebra, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    RbLieAlgebra::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Loads, validates and checks the P mode; the exit codes match `validate`.
fn load_checked(path: &Path, mode: PMode) -> Result<RbLieAlgebra, Failure> {
    let g = load(path)?;
    let report = g.validate();
    if let Some(v) = report.violations.first() {
        return Err(Failure(
            EXIT_AXIOM,
            format!("{}: {}", path.display(), g.describe_violation(v)),
        ));
    }
    g.check_p_mode(mode)
        .map_err(|e: LoadError| Failure::input(e.to_string()))?;
    Ok(g)
}

fn load_rules(path: &Path, set: RuleSet, mode: PMode) -> Result<RuleSystem, Failure> {
    let g = load_checked(path, mode)?;
    RuleSystem::new(Arc::new(g), set, mode).map_err(|e: RuleError| Failure::input(e.to_string()))
}

fn load_enveloping(path: &Path, mode: PMode) -> Result<Enveloping, Failure> {
    Ok(Enveloping::new(load_rules(path, RuleSet::T, mode)?))
}

fn validate(path: &Path, mode: PMode) -> Result<u8, Failure> {
    let g = load(path)?;
    let report = g.validate();
    if !report.accepted() {
        for v in &report.violations {
            println!("{}", g.describe_violation(v));
        }
        println!("rejected: {} violation(s)", report.violations.len());
        return Ok(EXIT_AXIOM);
    }
    g.check_p_mode(mode)
        .map_err(|e| Failure::input(e.to_string()))?;
    println!(
        "accepted: dimension {}, weight {}",
        g.dim(),
        opalg::terms::format_scalar(g.weight())
    );
    Ok(0)
}

fn describe_case(rules: &RuleSystem, c: &CheckedCase) -> String {
    let a = rules.alphabet();
    let case = &c.case;
    let outcome = match &c.verdict {
        Verdict::Trivial => "trivial".to_string(),
        Verdict::NonReduced { residual, .. } => format!("residual {}", a.poly(residual)),
        Verdict::Diverged { error } => format!("diverged: {error}"),
    };
    format!(
        "{}: f = {}, g = {}, w = {}, composition {} -> {}",
        case.pair(),
        rules.describe(&case.f.id),
        rules.describe(&case.g.id),
        a.word(&case.w),
        a.poly(&case.composition),
        outcome
    )
}

fn render_report(rules: &RuleSystem, r: &GsbReport) -> String {
    let mut out = format!(
        "rules {}, degree <= {}, depth <= {}\n",
        r.rules, r.bounds.max_degree, r.bounds.max_depth
    );
    for (pair, s) in &r.pairs {
        out += &format!(
            "  {pair}: {} cases, {} trivial, {} non-reduced, {} diverged\n",
            s.cases, s.trivial, s.non_reduced, s.diverged
        );
    }
    out += &format!(
        "{} cases ({} intersection, {} including): {} non-reduced, {} diverged\n",
        r.total(),
        r.total_by_kind(Kind::Intersection),
        r.total_by_kind(Kind::Including),
        r.non_reduced(),
        r.diverged()
    );
    out += &format!(
        "order violations: {}, untabulated cases: {}\n",
        r.order_violations, r.untabulated
    );
    let mut diverged = 0;
    for c in &r.failures {
        if matches!(c.verdict, Verdict::Diverged { .. }) {
            diverged += 1;
            if diverged > LISTED_DIVERGED {
                continue;
            }
        }
        out += &format!("FAILURE {}\n", describe_case(rules, c));
    }
    if diverged > LISTED_DIVERGED {
        out += &format!(
            "... {} more diverged cases not listed\n",
            diverged - LISTED_DIVERGED
        );
    }
    out += if r.passed() { "PASS\n" } else { "FAIL\n" };
    out
}

fn report_json(rules: &RuleSystem, r: &GsbReport) -> Value {
    let a = rules.alphabet();
    let pairs: Vec<Value> = r
        .pairs
        .iter()
        .map(|(k, s)| {
            json!({
                "kind": k.kind,
                "f": k.f.form(),
                "g": k.g.form(),
                "cases": s.cases,
                "trivial": s.trivial,
                "non_reduced": s.non_reduced,
                "diverged": s.diverged,
            })
        })
        .collect();
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|c| {
            let case = &c.case;
            let witness = match &case.witness {
                Witness::Intersection { u, v } => {
                    json!({ "u": a.format_word(u), "v": a.format_word(v) })
                }
                Witness::Including { context } => {
                    json!({ "context": a.context(context).to_string() })
                }
            };
            let mut v = json!({
                "kind": case.kind,
                "pair": case.pair().to_string(),
                "f": rules.describe(&case.f.id),
                "g": rules.describe(&case.g.id),
                "w": a.format_word(&case.w),
                "witness": witness,
                "composition": a.format_poly(&case.composition),
            });
            match &c.verdict {
                Verdict::NonReduced { residual, .. } => {
                    v["residual"] = json!(a.format_poly(residual))
                }
                Verdict::Diverged { error } => v["diverged"] = json!(error.to_string()),
                Verdict::Trivial => {}
            }
            v
        })
        .collect();
    json!({
        "rules": r.rules.to_string(),
        "bounds": r.bounds,
        "passed": r.passed(),
        "totals": {
            "cases": r.total(),
            "intersection": r.total_by_kind(Kind::Intersection),
            "including": r.total_by_kind(Kind::Including),
            "non_reduced": r.non_reduced(),
            "diverged": r.diverged(),
            "order_violations": r.order_violations,
            "untabulated": r.untabulated,
        },
        "pairs": pairs,
        "failures": failures,
    })
}
