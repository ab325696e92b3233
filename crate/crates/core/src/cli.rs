//! The `profpres` command line. [`run`] takes the arguments and the text of
//! stdin and returns the exit status with both output streams, so tests can
//! drive it without a process.
//!
//! Exit status: 0 success, holds, valid or iso; 1 certified failure;
//! 2 inconclusive within budget; 3 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bridge::{check_conservative, check_nongenerative, curry, uncurry, uncurry_morphism, BridgeError, CheckOutcome, CheckStatus};
use crate::compose::{coherence_suite, compose_curried};
use crate::dsl::{export_json, parse_workspace_named, Entity, Workspace};
use crate::presentations::{validate_curried, validate_morphism, AnyMorphism, CrossProver, TermProver, ValidationReport, ValidationStatus};
use crate::prover::{derivation_json, replay, Budget, ProofOutcome, Prover, Theory, Verdict};
use crate::semantics::{
    category_table, check_mu_iso, check_unit_hom, coend_compose, curried_table, find_table_iso, instance_table, uncurried_table, IsoReport,
    IsoStatus, ProfunctorTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Inconclusive = 2,
    Usage = 3,
}

impl Exit {
    /// Certified failure dominates inconclusive, which dominates success.
    fn worst(self, other: Exit) -> Exit {
        match (self, other) {
            (Exit::Usage, _) | (_, Exit::Usage) => Exit::Usage,
            (Exit::Failure, _) | (_, Exit::Failure) => Exit::Failure,
            (Exit::Inconclusive, _) | (_, Exit::Inconclusive) => Exit::Inconclusive,
            _ => Exit::Success,
        }
    }

    fn of_outcome(o: &ProofOutcome) -> Exit {
        if o.is_proved() {
            Exit::Success
        } else if o.is_refuted() {
            Exit::Failure
        } else {
            Exit::Inconclusive
        }
    }

    fn of_report(r: &ValidationReport) -> Exit {
        match r.status() {
            ValidationStatus::Valid => Exit::Success,
            ValidationStatus::Invalid => Exit::Failure,
            ValidationStatus::Inconclusive => Exit::Inconclusive,
        }
    }

    fn of_iso(r: &IsoReport) -> Exit {
        match r.status {
            IsoStatus::Iso { .. } => Exit::Success,
            IsoStatus::NotIso { .. } => Exit::Failure,
            IsoStatus::Inconclusive { .. } => Exit::Inconclusive,
        }
    }

    fn of_check(c: &CheckOutcome) -> Exit {
        match c.status {
            CheckStatus::Holds | CheckStatus::HoldsUpToBudget => Exit::Success,
            CheckStatus::FailsWithWitness => Exit::Failure,
            CheckStatus::InconclusiveWithinBudget => Exit::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "profpres", version, about = "Presentations of categories and profunctors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Longest path considered by bounded search.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_len: usize,
    /// Saturation rounds of the bounded closure.
    #[arg(long, global = true, default_value_t = 16)]
    pub rounds: usize,
    /// Step limit of completion.
    #[arg(long, global = true, default_value_t = 500)]
    pub kb_steps: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl Options {
    fn budget(&self) -> Budget {
        Budget { max_path_length: self.max_len, max_closure_rounds: self.rounds, max_kb_steps: self.kb_steps }
    }
}

#[derive(Debug, Args)]
pub struct Input {
    /// Workspace file; `-` or nothing reads stdin.
    pub file: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate entities, or run the nongenerativity and conservativity checks.
    Check {
        #[command(flatten)]
        input: Input,
        /// Only this entity; every entity by default.
        #[arg(long)]
        entity: Option<String>,
        /// Each short left cross-path of an uncurried presentation equals a right one.
        #[arg(long)]
        nongenerative: bool,
        /// Fibers prove no more equations than the collage (bounded search).
        #[arg(long)]
        conservative: bool,
        /// Syntactic pairing of short left cross-paths (implies --nongenerative).
        #[arg(long)]
        strict: bool,
    },
    /// Decide or search for an equation in a category, instance or uncurried presentation.
    Prove {
        #[command(flatten)]
        input: Input,
        /// Category, instance or uncurried presentation.
        #[arg(long)]
        theory: String,
        /// `LHS = RHS` in the dot notation of the theory.
        #[arg(long)]
        eq: String,
    },
    /// Compose two curried presentations.
    Compose {
        #[command(flatten)]
        input: Input,
        /// The factor `P : C -> D` of `P * Q`.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Uncurry a curried presentation or globular morphism.
    Uncurry {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        entity: String,
    },
    /// Curry an uncurried presentation.
    Curry {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        entity: String,
    },
    /// Bounded table of a category or profunctor.
    Semantics {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        entity: String,
        /// Largest number of category symbols in a representative.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Coend of the tables of two composable profunctors.
    Coend {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Table depth of both sides.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Check the comparison map from the coend to the composite, or with
    /// --tables search for an isomorphism between two tables.
    IsoCheck {
        #[command(flatten)]
        input: Input,
        /// Curried presentation, or any profunctor with --tables.
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Compare the tables of LEFT and RIGHT instead.
        #[arg(long)]
        tables: bool,
        /// Table depth.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Coherence laws of the named curried presentations and the unit check of categories.
    Laws {
        #[command(flatten)]
        input: Input,
        /// Entities to include; all curried presentations and categories by default.
        #[arg(long)]
        entity: Vec<String>,
        /// Table depth of the unit check.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// Captured result of one invocation.
#[derive(Debug)]
pub struct Run {
    pub exit: Exit,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    format: Format,
    budget: Budget,
    out: String,
    err: String,
}

type Step = Result<Exit, String>;

impl Ctx {
    fn emit(&mut self, text: impl FnOnce() -> String, json: impl FnOnce() -> Value) {
        match self.format {
            Format::Text => self.out.push_str(&text()),
            Format::Json => {
                self.out.push_str(&serde_json::to_string_pretty(&json()).expect("json"));
                self.out.push('\n');
            }
        }
    }

    fn emit_entity(&mut self, e: &Entity) {
        match self.format {
            Format::Text => self.out.push_str(&e.render()),
            Format::Json => self.out.push_str(&String::from_utf8(export_json(e)).expect("utf-8")),
        }
    }
}

pub fn run<I, T>(args: I, stdin: impl FnOnce() -> std::io::Result<String>) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Run { exit: Exit::Success, stdout: text, stderr: String::new() }
                }
                _ => Run { exit: Exit::Usage, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut ctx = Ctx { format: cli.opts.format, budget: cli.opts.budget(), out: String::new(), err: String::new() };
    let exit = match dispatch(&cli.command, &mut ctx, stdin) {
        Ok(e) => e,
        Err(msg) => {
            ctx.err.push_str(&msg);
            if !msg.ends_with('\n') {
                ctx.err.push('\n');
            }
            Exit::Usage
        }
    };
    Run { exit, stdout: ctx.out, stderr: ctx.err }
}

fn input_of(cmd: &Command) -> &Input {
    match cmd {
        Command::Check { input, .. }
        | Command::Prove { input, .. }
        | Command::Compose { input, .. }
        | Command::Uncurry { input, .. }
        | Command::Curry { input, .. }
        | Command::Semantics { input, .. }
        | Command::Coend { input, .. }
        | Command::IsoCheck { input, .. }
        | Command::Laws { input, .. } => input,
    }
}

fn load(input: &Input, stdin: impl FnOnce() -> std::io::Result<String>) -> Result<Workspace, String> {
    let (text, name) = match input.file.as_deref() {
        None | Some("-") => (stdin().map_err(|e| format!("cannot read stdin: {e}"))?, "<stdin>".to_string()),
        Some(path) => (std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?, path.to_string()),
    };
    parse_workspace_named(&text, &name).map_err(|e| format!("{e}\n{}", e.snippet(&text)))
}

fn entity<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Entity, String> {
    ws.get(name).ok_or_else(|| format!("no entity named `{name}`"))
}

fn dispatch(cmd: &Command, ctx: &mut Ctx, stdin: impl FnOnce() -> std::io::Result<String>) -> Step {
    let ws = load(input_of(cmd), stdin)?;
    match cmd {
        Command::Check { entity: name, nongenerative, conservative, strict, .. } => {
            if *nongenerative || *conservative || *strict {
                let name = name.as_deref().ok_or("--nongenerative and --conservative need --entity")?;
                bridge_checks(&ws, name, *nongenerative || *strict, *strict, *conservative, ctx)
            } else {
                validate(&ws, name.as_deref(), ctx)
            }
        }
        Command::Prove { theory, eq, .. } => prove(&ws, theory, eq, ctx),
        Command::Compose { left, right, .. } => {
            let (p, q) = (curried(&ws, left)?, curried(&ws, right)?);
            let pq = compose_curried(p, q).map_err(|e| e.to_string())?;
            ctx.emit_entity(&Entity::from(pq));
            Ok(Exit::Success)
        }
        Command::Uncurry { entity: name, .. } => match entity(&ws, name)? {
            Entity::Curried(p) => {
                ctx.emit_entity(&Entity::from(uncurry(p)));
                Ok(Exit::Success)
            }
            Entity::CurriedMorphism(m) => match uncurry_morphism(m) {
                Ok(u) => {
                    ctx.emit_entity(&Entity::from(u));
                    Ok(Exit::Success)
                }
                Err(e) => {
                    ctx.err.push_str(&format!("{e}\n"));
                    Ok(Exit::Failure)
                }
            },
            other => Err(format!("`{name}` is a {}; uncurry takes a curried presentation or morphism", other.kind())),
        },
        Command::Curry { entity: name, .. } => {
            let Entity::Uncurried(q) = entity(&ws, name)? else {
                return Err(format!("`{name}` is not an uncurried presentation"));
            };
            match curry(q, ctx.budget) {
                Ok(p) => {
                    ctx.emit_entity(&Entity::from(p));
                    Ok(Exit::Success)
                }
                Err(e) => {
                    let exit = match &e {
                        BridgeError::CurryValidationFailed { .. } => Exit::Failure,
                        BridgeError::NongenerativityUnverified(_) | BridgeError::CurryValidationInconclusive { .. } => Exit::Inconclusive,
                        _ => return Err(e.to_string()),
                    };
                    let err = e.to_string();
                    ctx.emit(
                        || format!("curry failed: {err}\n"),
                        || json!({ "status": "failed", "reason": err, "certified": exit == Exit::Failure }),
                    );
                    Ok(exit)
                }
            }
        }
        Command::Semantics { entity: name, depth, .. } => {
            let budget = ctx.budget.with_length(*depth);
            if let Entity::Category(c) = entity(&ws, name)? {
                let t = category_table(c, budget).map_err(|e| e.to_string())?;
                ctx.emit(|| t.to_string(), || t.to_json());
            } else {
                let t = table(&ws, name, budget)?;
                ctx.emit(|| t.to_string(), || t.to_json());
            }
            Ok(Exit::Success)
        }
        Command::Coend { left, right, depth, .. } => {
            let budget = ctx.budget.with_length(*depth);
            let t = coend_compose(&table(&ws, left, budget)?, &table(&ws, right, budget)?).map_err(|e| e.to_string())?;
            ctx.emit(|| t.to_string(), || t.to_json());
            Ok(Exit::Success)
        }
        Command::IsoCheck { left, right, tables, depth, .. } => {
            let budget = ctx.budget.with_length(*depth);
            let report = if *tables {
                find_table_iso(&table(&ws, left, budget)?, &table(&ws, right, budget)?)
            } else {
                check_mu_iso(curried(&ws, left)?, curried(&ws, right)?, budget)
            }
            .map_err(|e| e.to_string())?;
            ctx.emit(|| report.to_string(), || report.to_json());
            Ok(Exit::of_iso(&report))
        }
        Command::Laws { entity: names, depth, .. } => laws(&ws, names, *depth, ctx),
    }
}

fn curried<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Arc<crate::presentations::CurriedPresentation>, String> {
    ws.curried(name).ok_or_else(|| match ws.get(name) {
        Some(e) => format!("`{name}` is a {}, not a curried presentation", e.kind()),
        None => format!("no entity named `{name}`"),
    })
}

fn table(ws: &Workspace, name: &str, budget: Budget) -> Result<ProfunctorTable, String> {
    let t = match entity(ws, name)? {
        Entity::Curried(p) => curried_table(p, budget),
        Entity::Uncurried(q) => uncurried_table(q, budget),
        Entity::Instance(i) => instance_table(i, budget),
        other => return Err(format!("`{name}` is a {}; tables are built for profunctors and instances", other.kind())),
    };
    t.map_err(|e| e.to_string())
}

fn plural(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn report_line(name: &str, r: &ValidationReport) -> String {
    let mut s = match r.status() {
        ValidationStatus::Valid => format!("{name}: valid ({})\n", plural(r.obligations.len(), "obligation")),
        ValidationStatus::Invalid => {
            let o = r.counterexample().expect("refuted");
            format!("{name}: invalid at {}: {} = {}\n", o.label, o.lhs, o.rhs)
        }
        ValidationStatus::Inconclusive => format!("{name}: inconclusive\n"),
    };
    if r.status() == ValidationStatus::Inconclusive {
        for o in r.open() {
            let _ = writeln!(s, "  open {}: {} = {}", o.label, o.lhs, o.rhs);
        }
    }
    s
}

fn validate(ws: &Workspace, only: Option<&str>, ctx: &mut Ctx) -> Step {
    let targets: Vec<&Entity> = match only {
        Some(n) => vec![entity(ws, n)?],
        None => ws.entities().collect(),
    };
    let mut exit = Exit::Success;
    let (mut text, mut docs) = (String::new(), Vec::new());
    for e in targets {
        let name = e.name().to_string();
        let report = match e {
            Entity::Category(c) => {
                let exact = Prover::for_category(c, ctx.budget).map_err(|e| e.to_string())?.is_exact();
                let how = if exact { "decided by completion" } else { "bounded search only" };
                let _ = writeln!(text, "{name}: valid (word problem {how})");
                docs.push(json!({ "entity": name, "kind": e.kind(), "status": "valid", "complete": exact }));
                continue;
            }
            Entity::Instance(_) | Entity::Uncurried(_) => {
                let _ = writeln!(text, "{name}: valid");
                docs.push(json!({ "entity": name, "kind": e.kind(), "status": "valid" }));
                continue;
            }
            Entity::Curried(p) => validate_curried(p, ctx.budget),
            Entity::CatMorphism(m) => validate_morphism(AnyMorphism::Cat(m), ctx.budget),
            Entity::InstanceMorphism(m) => validate_morphism(AnyMorphism::Instance(m), ctx.budget),
            Entity::UncurriedMorphism(m) => validate_morphism(AnyMorphism::Uncurried(m), ctx.budget),
            Entity::CurriedMorphism(m) => validate_morphism(AnyMorphism::Curried(m), ctx.budget),
        }
        .map_err(|e| e.to_string())?;
        exit = exit.worst(Exit::of_report(&report));
        text.push_str(&report_line(&name, &report));
        let mut doc = report.to_json();
        doc["entity"] = json!(name);
        doc["kind"] = json!(e.kind());
        docs.push(doc);
    }
    ctx.emit(|| text, || json!(docs));
    Ok(exit)
}

fn check_json(what: &str, strict: bool, name: &str, c: &CheckOutcome) -> Value {
    json!({
        "check": what,
        "strict": strict,
        "entity": name,
        "status": c.status,
        "witnesses": c.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "budget_used": c.budget_used,
    })
}

fn check_text(what: &str, c: &CheckOutcome) -> String {
    let status = match c.status {
        CheckStatus::Holds => "holds",
        CheckStatus::HoldsUpToBudget => "holds up to budget",
        CheckStatus::FailsWithWitness => "fails",
        CheckStatus::InconclusiveWithinBudget => "inconclusive within budget",
    };
    let mut s = format!("{what}: {status}\n");
    for w in &c.witnesses {
        let _ = writeln!(s, "  witness {w}");
    }
    s
}

fn bridge_checks(ws: &Workspace, name: &str, nongenerative: bool, strict: bool, conservative: bool, ctx: &mut Ctx) -> Step {
    let q = match entity(ws, name)? {
        Entity::Uncurried(q) => (**q).clone(),
        Entity::Curried(p) => uncurry(p),
        other => return Err(format!("`{name}` is a {}; these checks take an uncurried or curried presentation", other.kind())),
    };
    let mut exit = Exit::Success;
    let (mut text, mut docs) = (String::new(), Vec::new());
    if nongenerative {
        let c = check_nongenerative(&q, ctx.budget, strict).map_err(|e| e.to_string())?;
        let what = if strict { "nongenerative (strict)" } else { "nongenerative" };
        exit = exit.worst(Exit::of_check(&c));
        text.push_str(&check_text(what, &c));
        docs.push(check_json("nongenerative", strict, name, &c));
    }
    if conservative {
        let c = check_conservative(&q, ctx.budget).map_err(|e| e.to_string())?;
        exit = exit.worst(Exit::of_check(&c));
        text.push_str(&check_text("conservative", &c));
        docs.push(check_json("conservative", false, name, &c));
    }
    ctx.emit(|| text, || json!(docs));
    Ok(exit)
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Proved { depth } => format!("proved (derivation depth {depth})"),
        Verdict::Decided { equal: true } => "decided: equal".into(),
        Verdict::Decided { equal: false } => "decided: not equal".into(),
        Verdict::NotProvedWithinBudget => "not proved within budget".into(),
    }
}

fn prove(ws: &Workspace, theory: &str, eq: &str, ctx: &mut Ctx) -> Step {
    let (lhs, rhs) = eq.split_once('=').ok_or("--eq must have the form `lhs = rhs`")?;
    let (outcome, th): (ProofOutcome, Arc<Theory>) = match entity(ws, theory)? {
        Entity::Category(c) => {
            let (a, b) = (c.path(lhs).map_err(|e| e.to_string())?, c.path(rhs).map_err(|e| e.to_string())?);
            let prover = Prover::for_category(c, ctx.budget).map_err(|e| e.to_string())?;
            (prover.prove_paths(&a, &b).map_err(|e| e.to_string())?, prover.theory().clone())
        }
        Entity::Instance(i) => {
            let (a, b) = (i.term(lhs).map_err(|e| e.to_string())?, i.term(rhs).map_err(|e| e.to_string())?);
            let prover = TermProver::new(i.clone(), ctx.budget).map_err(|e| e.to_string())?;
            (prover.prove(&a, &b).map_err(|e| e.to_string())?, prover.prover().theory().clone())
        }
        Entity::Uncurried(q) => {
            let (a, b) = (q.cross(lhs).map_err(|e| e.to_string())?, q.cross(rhs).map_err(|e| e.to_string())?);
            let prover = CrossProver::new(q.clone(), ctx.budget).map_err(|e| e.to_string())?;
            (prover.prove(&a, &b).map_err(|e| e.to_string())?, prover.prover().theory().clone())
        }
        other => return Err(format!("`{theory}` is a {}; prove takes a category, instance or uncurried presentation", other.kind())),
    };
    let replayed = outcome.witness.as_ref().map(|d| replay(&th, d).is_ok());
    let (l, r) = (lhs.trim().to_string(), rhs.trim().to_string());
    ctx.emit(
        || {
            let mut s = format!("{l} = {r}: {}\n", verdict_text(&outcome.verdict));
            if let (Some(d), Some(ok)) = (&outcome.witness, replayed) {
                let _ = writeln!(s, "  derivation of {}, replay {}", plural(d.size(), "step"), if ok { "ok" } else { "FAILED" });
            }
            s
        },
        || {
            json!({
                "theory": theory,
                "lhs": l,
                "rhs": r,
                "verdict": outcome.verdict,
                "budget_used": outcome.budget_used,
                "derivation": outcome.witness.as_ref().map(|d| derivation_json(&th, d)),
                "replayed": replayed,
            })
        },
    );
    let exit = Exit::of_outcome(&outcome);
    Ok(if replayed == Some(false) { Exit::Failure } else { exit })
}

fn laws(ws: &Workspace, names: &[String], depth: usize, ctx: &mut Ctx) -> Step {
    let picked: Vec<&Entity> = if names.is_empty() {
        ws.entities().filter(|e| matches!(e, Entity::Curried(_) | Entity::Category(_))).collect()
    } else {
        names.iter().map(|n| entity(ws, n)).collect::<Result<_, _>>()?
    };
    let mut ps = Vec::new();
    let mut cats = Vec::new();
    for e in picked {
        match e {
            Entity::Curried(p) => ps.push(p.as_ref()),
            Entity::Category(c) => cats.push(c.clone()),
            other => return Err(format!("`{}` is a {}; laws take curried presentations and categories", other.name(), other.kind())),
        }
    }
    let checks = coherence_suite(&ps, ctx.budget).map_err(|e| e.to_string())?;
    let mut exit = Exit::Success;
    let (mut text, mut docs) = (String::new(), Vec::new());
    for c in &checks {
        let e = if c.holds() {
            Exit::Success
        } else if c.outcome.is_refuted() || c.report.as_ref().is_some_and(|r| r.status() == ValidationStatus::Invalid) {
            Exit::Failure
        } else {
            Exit::Inconclusive
        };
        exit = exit.worst(e);
        let mark = ["ok", "FAIL", "open"][e as usize];
        let _ = writeln!(text, "{mark:<4} {}", c.law);
        docs.push(json!({ "law": c.law, "holds": c.holds(), "verdict": c.outcome.verdict }));
    }
    for c in &cats {
        let r = check_unit_hom(c, ctx.budget.with_length(depth)).map_err(|e| e.to_string())?;
        let e = Exit::of_iso(&r);
        exit = exit.worst(e);
        let law = format!("unit {}", c.name());
        let shown = r.to_string();
        let status = shown.lines().next().unwrap_or_default();
        let mark = ["ok", "FAIL", "open"][e as usize];
        let _ = writeln!(text, "{mark:<4} {law}: {status}");
        let mut doc = r.to_json();
        doc["law"] = json!(law);
        docs.push(doc);
    }
    ctx.emit(|| text, || json!(docs));
    Ok(exit)
}
