//! Command-line front end. Exit status 0 means success or a true verdict,
//! 1 a false verdict or a countermodel, 2 a usage or input error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::fixtures::replay_corpus;
use crate::models::{factive_companion, is_factive, update_model, validate_model, KyModel};
use crate::proofs::{check_derivation, Derivation, LambdaConfig, ProofSystem, Verdict};
use crate::search::{check_equivalence, search_countermodel, Countermodel, Equivalence, SearchBounds};
use crate::semantics::{eval_at, SemanticsVariant};
use crate::syntax::{classify_language, parse_formula, Formula};

#[derive(Parser, Debug)]
#[command(
    name = "kywhy",
    version,
    about = "Model checking, proof checking and countermodel search for knowing-why logics"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its normal form and language.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula at a world of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        variant: VariantArgs,
    },
    /// Restrict a model to the worlds satisfying an announcement.
    Update {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        announce: String,
        /// Write the updated model here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a model's structural conditions and tautology ground.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Report factivity and build the factive companion.
    Factive {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a line derivation.
    ProveCheck {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, default_value = "skyr")]
        system: ProofSystem,
        /// JSON array of tautology-ground formulas.
        #[arg(long)]
        lambda: Option<PathBuf>,
    },
    /// Search bounded models for a pointed model refuting a formula.
    FindCountermodel {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        variant: VariantArgs,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Search bounded models for a pointed model separating two formulas.
    Equiv {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        variant: VariantArgs,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Replay the embedded fixture corpus.
    Corpus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantName {
    Standard,
    AltKyr,
    Context,
}

#[derive(Args, Debug)]
struct VariantArgs {
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantName,
    /// Context formula for the context variant.
    #[arg(long)]
    context: Option<String>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    min_worlds: usize,
    #[arg(long, default_value_t = 3)]
    max_worlds: usize,
    #[arg(long, default_value_t = 2)]
    max_extents: usize,
    /// Comma-separated agents; the formula's own agents are always added.
    #[arg(long, value_delimiter = ',')]
    agents: Vec<String>,
    /// Enumerate arbitrary relations rather than equivalence relations.
    #[arg(long)]
    all_relations: bool,
    #[arg(long)]
    max_models: Option<u64>,
}

/// Exit status and text produced by one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn input_error(message: String) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr: message }
    }
}

struct Ctx {
    json: bool,
}

impl Ctx {
    fn emit(&self, code: i32, text: String, value: Value) -> Outcome {
        if self.json {
            Outcome::ok(code, format!("{value:#}\n"))
        } else {
            Outcome::ok(code, text)
        }
    }
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                stdout: if code == 0 { e.to_string() } else { String::new() },
                stderr: if code == 0 { String::new() } else { e.to_string() },
            };
        }
    };
    let ctx = Ctx { json: cli.json };
    dispatch(&ctx, cli.command).unwrap_or_else(Outcome::input_error)
}

fn formula(text: &str) -> Result<Formula, String> {
    parse_formula(text).map_err(|e| format!("cannot parse `{text}`: {e}"))
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load_model(path: &Path) -> Result<KyModel, String> {
    let m = KyModel::from_json(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let violations = validate_model(&m);
    if let Some(v) = violations.first() {
        return Err(format!("{}: invalid model: {v}", path.display()));
    }
    Ok(m)
}

fn variant(args: &VariantArgs) -> Result<SemanticsVariant, String> {
    match (args.variant, &args.context) {
        (VariantName::Standard, None) => Ok(SemanticsVariant::Standard),
        (VariantName::AltKyr, None) => Ok(SemanticsVariant::AltKyr),
        (VariantName::Context, None) => Ok(SemanticsVariant::context()),
        (VariantName::Context, Some(rho)) => Ok(SemanticsVariant::Context(formula(rho)?)),
        (_, Some(_)) => Err("--context requires --variant context".to_string()),
    }
}

fn bounds(args: &BoundsArgs) -> SearchBounds {
    let mut b = SearchBounds {
        min_worlds: args.min_worlds,
        max_worlds: args.max_worlds,
        max_extents_per_formula: args.max_extents,
        s5_frames: !args.all_relations,
        max_models: args.max_models,
        ..SearchBounds::default()
    };
    if !args.agents.is_empty() {
        b.agents = args.agents.iter().map(|a| a.as_str().into()).collect();
    }
    b
}

fn countermodel_json(c: &Countermodel) -> Value {
    json!({
        "world": c.world_name(),
        "model": serde_json::from_str::<Value>(&c.model.to_json()).expect("model JSON"),
        "transcript": c.transcript,
    })
}

fn countermodel_text(c: &Countermodel) -> String {
    let mut out = format!("refuted at {} of the model\n{}\ntranscript:\n", c.world_name(), c.model.to_json());
    for line in &c.transcript {
        out.push_str("  ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

fn dispatch(ctx: &Ctx, command: Command) -> Result<Outcome, String> {
    match command {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            let lang = classify_language(&f).map(|t| t.to_string()).map_err(|e| e.to_string());
            let shown = lang.clone().unwrap_or_else(|e| format!("none ({e})"));
            Ok(ctx.emit(
                0,
                format!("{f}\nlanguage: {shown}\n"),
                json!({ "formula": f.to_string(), "language": lang.ok() }),
            ))
        }
        Command::Eval { model, world, formula: text, variant: va } => {
            let m = load_model(&model)?;
            let f = formula(&text)?;
            let v = variant(&va)?;
            let r = eval_at(&m, &world, &f, &v).map_err(|e| e.to_string())?;
            let witness = r.witness.as_ref().map(|w| (w.term.to_string(), m.names_of(w.extent)));
            let mut text = format!("{}\n", r.verdict);
            if let Some((term, extent)) = &witness {
                text.push_str(&format!("witness: {term} with extent {{{}}}\n", extent.join(",")));
            }
            Ok(ctx.emit(
                if r.verdict { 0 } else { 1 },
                text,
                json!({
                    "verdict": r.verdict,
                    "world": world,
                    "formula": f.to_string(),
                    "variant": v.name(),
                    "witness": witness.map(|(term, extent)| json!({"term": term, "extent": extent})),
                }),
            ))
        }
        Command::Update { model, announce, out } => {
            let m = load_model(&model)?;
            let f = formula(&announce)?;
            let u = update_model(&m, &f).map_err(|e| e.to_string())?;
            let violations: Vec<String> = validate_model(&u).iter().map(ToString::to_string).collect();
            let model_json = u.to_json();
            let mut text = String::new();
            match &out {
                Some(path) => {
                    write(path, &model_json)?;
                    text.push_str(&format!("kept {{{}}}; wrote {}\n", u.world_names().join(","), path.display()));
                }
                None => text.push_str(&model_json),
            }
            for v in &violations {
                text.push_str(&format!("warning: {v}\n"));
            }
            Ok(ctx.emit(
                0,
                text,
                json!({
                    "worlds": u.world_names(),
                    "violations": violations,
                    "model": serde_json::from_str::<Value>(&model_json).expect("model JSON"),
                }),
            ))
        }
        Command::Validate { model } => {
            let m = KyModel::from_json(&read(&model)?).map_err(|e| format!("{}: {e}", model.display()))?;
            let violations: Vec<String> = validate_model(&m).iter().map(ToString::to_string).collect();
            let text = if violations.is_empty() { "valid\n".to_string() } else { violations.join("\n") + "\n" };
            Ok(ctx.emit(
                if violations.is_empty() { 0 } else { 1 },
                text,
                json!({ "valid": violations.is_empty(), "violations": violations }),
            ))
        }
        Command::Factive { model, out } => {
            let m = load_model(&model)?;
            let factive = is_factive(&m).map_err(|e| e.to_string())?;
            let c = factive_companion(&m).map_err(|e| e.to_string())?;
            let companion = c.to_json();
            let mut text = format!("factive: {factive}\n");
            match &out {
                Some(path) => {
                    write(path, &companion)?;
                    text.push_str(&format!("wrote companion to {}\n", path.display()));
                }
                None => text.push_str(&companion),
            }
            Ok(ctx.emit(
                if factive { 0 } else { 1 },
                text,
                json!({
                    "factive": factive,
                    "companion": serde_json::from_str::<Value>(&companion).expect("model JSON"),
                }),
            ))
        }
        Command::ProveCheck { proof, system, lambda } => {
            let d = Derivation::from_json(&read(&proof)?).map_err(|e| format!("{}: {e}", proof.display()))?;
            let lam = match lambda {
                Some(path) => LambdaConfig::from_json(&read(&path)?).map_err(|e| format!("{}: {e}", path.display()))?,
                None => LambdaConfig::default(),
            };
            Ok(match check_derivation(&d, system, &lam) {
                Verdict::Ok => ctx.emit(
                    0,
                    format!("ok: {} lines in {system}\n", d.lines.len()),
                    json!({ "ok": true, "system": system.name(), "lines": d.lines.len() }),
                ),
                Verdict::Failed { line, reason } => ctx.emit(
                    1,
                    format!("failed at line {line}: {reason}\n"),
                    json!({ "ok": false, "system": system.name(), "line": line, "reason": reason }),
                ),
            })
        }
        Command::FindCountermodel { formula: text, variant: va, bounds: ba } => {
            let f = formula(&text)?;
            let v = variant(&va)?;
            let report = search_countermodel(&f, &v, &bounds(&ba)).map_err(|e| e.to_string())?;
            Ok(match &report.countermodel {
                Some(c) => ctx.emit(
                    1,
                    countermodel_text(c),
                    json!({ "found": true, "models_examined": report.models_examined, "countermodel": countermodel_json(c) }),
                ),
                None => ctx.emit(
                    0,
                    format!("no countermodel up to bounds ({} models examined)\n", report.models_examined),
                    json!({ "found": false, "models_examined": report.models_examined }),
                ),
            })
        }
        Command::Equiv { left, right, variant: va, bounds: ba } => {
            let (f, g) = (formula(&left)?, formula(&right)?);
            let v = variant(&va)?;
            Ok(match check_equivalence(&f, &g, &v, &bounds(&ba)).map_err(|e| e.to_string())? {
                Equivalence::Separated(c) => ctx.emit(
                    1,
                    format!("separated\n{}", countermodel_text(&c)),
                    json!({ "equivalent_within_bounds": false, "separation": countermodel_json(&c) }),
                ),
                Equivalence::Indistinguishable { models_examined } => ctx.emit(
                    0,
                    format!("indistinguishable up to bounds ({models_examined} models examined)\n"),
                    json!({ "equivalent_within_bounds": true, "models_examined": models_examined }),
                ),
            })
        }
        Command::Corpus => {
            let checks = replay_corpus();
            let all = checks.iter().all(|c| c.passed);
            let mut text = String::new();
            for c in &checks {
                text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            Ok(ctx.emit(if all { 0 } else { 1 }, text, json!({ "passed": all, "checks": checks })))
        }
    }
}
