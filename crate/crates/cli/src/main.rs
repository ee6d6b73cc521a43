use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use deontic_core::fixtures;
use deontic_core::formula::{expand_pw, is_tautology, parse, Formula, Schema};
use deontic_core::frames::{
    check_property, classify_frame, parse_properties, rule_valid_on_frame, schema_valid_on_frame,
    FrameProperty, PropertyCheck,
};
use deontic_core::inclusions::{class_names, inclusion_report};
use deontic_core::inventory::{AxiomName, RuleName};
use deontic_core::model::{eval, truth_set, NeighbourhoodModel};
use deontic_core::proof::{run_scenario, verify_table1, Checker, ProofScript, SCENARIO_NAMES};
use deontic_core::search::{
    compute_remainder, find_countermodel, verify_found, Outcome, RemainderError, SearchBounds,
    Target, Theory,
};
use deontic_core::systems::{Registry, BUILTIN_NAMES};

#[derive(Parser)]
#[command(
    name = "deontic",
    version,
    about = "Deontic logics with guarded free choice permission"
)]
struct Cli {
    /// Structured JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form.
    Parse { formula: String },
    /// Evaluate a formula at a world of a model (or at every world).
    Eval {
        model: String,
        formula: String,
        #[arg(long)]
        world: Option<String>,
    },
    /// List the frame properties a model's frame has.
    Classify { model: String },
    /// Check a frame property, axiom, rule or schema on a model's frame.
    CheckFrame {
        model: String,
        /// A frame property, e.g. AFCPO.
        #[arg(long, conflicts_with_all = ["principle", "schema"])]
        property: Option<String>,
        /// An axiom or rule name, e.g. M_O or IFCP_O.
        #[arg(long, conflicts_with = "schema")]
        principle: Option<String>,
        /// A schema over the metavariables p, q, r, s.
        #[arg(long)]
        schema: Option<String>,
    },
    /// Check a proof script.
    Prove {
        script: String,
        /// Check in this system instead of the script's own.
        #[arg(long)]
        system: Option<String>,
        /// TOML system definitions to load first.
        #[arg(long = "systems")]
        systems: Vec<PathBuf>,
    },
    /// Check the bundled scripts for each system's derivable principles.
    #[command(name = "verify-table1")]
    VerifyTable1 {
        system: Option<String>,
        #[arg(long, conflicts_with = "system")]
        all: bool,
    },
    /// Search for a finite countermodel.
    Countermodel(CountermodelArgs),
    /// Detach what remains of a disjunctive strong permission.
    Remainder {
        /// The permitted disjunction, e.g. "p | q | r".
        disjunction: String,
        /// Theory file: one formula per line.
        theory: PathBuf,
        /// Also eliminate by O r with r -> ~d among the theory's theorems.
        #[arg(long)]
        ifcp: bool,
    },
    /// Replay a bundled scenario.
    Demo {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Print the inclusions between the FCP systems with their checks.
    Inclusions,
}

#[derive(Args)]
struct CountermodelArgs {
    /// A formula over --atoms, or an axiom or rule name.
    #[arg(long)]
    target: String,
    /// Read --target as a schema over p, q, r, s.
    #[arg(long)]
    schema: bool,
    /// Required frame properties, comma separated.
    #[arg(long, default_value = "")]
    require: String,
    /// Also require the frame class of this system.
    #[arg(long)]
    system: Option<String>,
    #[arg(long, default_value_t = 3)]
    max_worlds: usize,
    #[arg(long, default_value_t = 2)]
    max_sets: usize,
    /// Atoms, comma separated; defaults to the target's atoms or metavariables.
    #[arg(long)]
    atoms: Option<String>,
    #[arg(long)]
    timeout_secs: Option<u64>,
}

/// Errors in the input rather than failed checks.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

type CmdResult = std::result::Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(e)) => {
            if cli.json {
                println!("{}", json!({ "error": format!("{e:#}") }));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let json = cli.json;
    match &cli.command {
        Command::Parse { formula } => cmd_parse(formula, json),
        Command::Eval {
            model,
            formula,
            world,
        } => cmd_eval(model, formula, world.as_deref(), json),
        Command::Classify { model } => cmd_classify(model, json),
        Command::CheckFrame {
            model,
            property,
            principle,
            schema,
        } => cmd_check_frame(
            model,
            property.as_deref(),
            principle.as_deref(),
            schema.as_deref(),
            json,
        ),
        Command::Prove {
            script,
            system,
            systems,
        } => cmd_prove(script, system.as_deref(), systems, json),
        Command::VerifyTable1 { system, all } => cmd_verify_table1(system.as_deref(), *all, json),
        Command::Countermodel(args) => cmd_countermodel(args, json),
        Command::Remainder {
            disjunction,
            theory,
            ifcp,
        } => cmd_remainder(disjunction, theory, *ifcp, json),
        Command::Demo { name, list } => cmd_demo(name.as_deref(), *list, json),
        Command::Inclusions => cmd_inclusions(json),
    }
}

fn emit(json: bool, value: Value, text: impl FnOnce() -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("JSON output")
        );
    } else {
        print!("{}", text());
    }
}

/// A file, the same path with `.json` (or `.proof`) appended, or a bundled
/// fixture with that file stem.
fn load_text(arg: &str, ext: &str, bundled: fn(&str) -> Option<&'static str>) -> Result<String> {
    let path = Path::new(arg);
    for candidate in [path.to_path_buf(), PathBuf::from(format!("{arg}.{ext}"))] {
        if candidate.is_file() {
            return std::fs::read_to_string(&candidate)
                .with_context(|| format!("reading {}", candidate.display()));
        }
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    bundled(stem)
        .map(str::to_string)
        .ok_or_else(|| anyhow!("no file `{arg}` or `{arg}.{ext}`, and no bundled fixture `{stem}`"))
}

fn load_model(arg: &str) -> Result<NeighbourhoodModel> {
    let text = load_text(arg, "json", fixtures::model)?;
    NeighbourhoodModel::from_json(&text).with_context(|| format!("loading model {arg}"))
}

fn formula(text: &str) -> Result<Formula> {
    parse(text).map_err(|e| anyhow!("syntax error in `{text}`: {e}"))
}

fn cmd_parse(text: &str, json: bool) -> CmdResult {
    let f = formula(text)?;
    let expanded = expand_pw(&f);
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    emit(
        json,
        json!({
            "formula": f.to_string(),
            "expanded": expanded.to_string(),
            "atoms": atoms,
            "modal_depth": f.depth(),
            "tautology": is_tautology(&expanded),
        }),
        || {
            format!(
                "{f}\nexpanded: {expanded}\natoms: {}\nmodal depth: {}\ntautology: {}\n",
                atoms.join(", "),
                f.depth(),
                is_tautology(&expanded)
            )
        },
    );
    Ok(true)
}

fn cmd_eval(model: &str, text: &str, world: Option<&str>, json: bool) -> CmdResult {
    let m = load_model(model)?;
    let f = formula(text)?;
    let worlds: Vec<String> = match world {
        Some(w) => {
            m.world(w)?;
            vec![w.to_string()]
        }
        None => m.frame.worlds.clone(),
    };
    let mut values = serde_json::Map::new();
    let mut out = String::new();
    for w in &worlds {
        let v = eval(&m, w, &f)?;
        values.insert(w.clone(), Value::Bool(v));
        out.push_str(&format!("{w}: {v}\n"));
    }
    let ts = m.frame.names(truth_set(&m, &f));
    out.push_str(&format!("truth set: {{{}}}\n", ts.join(", ")));
    emit(
        json,
        json!({ "formula": f.to_string(), "values": values, "truth_set": ts }),
        || out,
    );
    Ok(true)
}

fn cmd_classify(model: &str, json: bool) -> CmdResult {
    let m = load_model(model)?;
    let present = classify_frame(&m.frame)?;
    let mut rows = vec![];
    let mut out = String::new();
    for p in FrameProperty::ALL {
        let has = present.contains(&p);
        rows.push(json!({ "property": p.name(), "present": has }));
        out.push_str(&format!(
            "{:<14} {}\n",
            p.name(),
            if has { "present" } else { "absent" }
        ));
    }
    emit(json, json!({ "model": model, "properties": rows }), || out);
    Ok(true)
}

fn cmd_check_frame(
    model: &str,
    property: Option<&str>,
    principle: Option<&str>,
    schema: Option<&str>,
    json: bool,
) -> CmdResult {
    let m = load_model(model)?;
    let (label, ok, detail) = if let Some(p) = property {
        let p: FrameProperty = p.parse().map_err(|e: String| anyhow!(e))?;
        match check_property(&m.frame, p)? {
            PropertyCheck::Satisfied => (p.name().to_string(), true, "satisfied".to_string()),
            PropertyCheck::Violated(w) => (
                p.name().to_string(),
                false,
                format!("violated {}", w.describe(&m.frame)),
            ),
        }
    } else if let Some(name) = principle {
        let check = if let Ok(a) = name.parse::<AxiomName>() {
            schema_valid_on_frame(&m.frame, &a.schema())?
        } else if let Ok(r) = name.parse::<RuleName>() {
            let rs = r
                .schema()
                .ok_or_else(|| anyhow!("{r} has no frame-checkable form"))?;
            rule_valid_on_frame(&m.frame, &rs)?
        } else {
            return Err(anyhow!("unknown axiom or rule `{name}`").into());
        };
        (name.to_string(), check.is_valid(), check.describe(&m.frame))
    } else if let Some(text) = schema {
        let s = Schema::parse("schema", text)?;
        let check = schema_valid_on_frame(&m.frame, &s)?;
        (
            s.body.to_string(),
            check.is_valid(),
            check.describe(&m.frame),
        )
    } else {
        return Err(anyhow!("give one of --property, --principle or --schema").into());
    };
    emit(
        json,
        json!({ "check": label, "holds": ok, "detail": detail }),
        || format!("{label}: {detail}\n"),
    );
    Ok(ok)
}

fn cmd_prove(arg: &str, system: Option<&str>, systems: &[PathBuf], json: bool) -> CmdResult {
    let text = load_text(arg, "proof", |stem| {
        fixtures::proof(stem).or_else(|| fixtures::scenario(stem))
    })?;
    let script = ProofScript::parse(&text)?;
    let mut registry = fixtures::registry();
    for path in systems {
        let toml =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        registry.define_from_toml(&toml)?;
    }
    let checker = Checker::new(registry);
    let report = match system {
        Some(s) => checker.check_in(&script, s)?,
        None => checker.check(&script)?,
    };
    let ok = report.verdict.is_valid();
    emit(
        json,
        serde_json::to_value(&report).expect("report serializes"),
        || {
            let mut out = format!("system {}\n", report.system);
            for (l, tier) in script
                .lines
                .iter()
                .zip(report.tiers.iter().map(Some).chain(std::iter::repeat(None)))
            {
                let tier = tier.map_or("-".to_string(), |t| t.to_string());
                out.push_str(&format!(
                    "{:>3}. {:<40} [{tier}] {}\n",
                    l.number,
                    l.formula.to_string(),
                    l.source
                ));
            }
            out.push_str(&format!("verdict: {}\n", report.verdict));
            if let Some(t) = report.conclusion_tier() {
                out.push_str(&format!("conclusion tier: {t}\n"));
            }
            out
        },
    );
    Ok(ok)
}

fn cmd_verify_table1(system: Option<&str>, all: bool, json: bool) -> CmdResult {
    let systems: Vec<&str> = match (system, all) {
        (Some(s), _) => vec![s],
        (None, true) => BUILTIN_NAMES.to_vec(),
        (None, false) => return Err(anyhow!("give a system name or --all").into()),
    };
    let checker = Checker::default();
    let mut rows = vec![];
    let mut out = String::new();
    let mut ok = true;
    for s in systems {
        for r in verify_table1(&checker, s)? {
            ok &= r.verdict.is_valid();
            out.push_str(&format!(
                "{:<6} {:<8} {:<14} {}\n",
                r.system,
                r.principle.name(),
                r.script,
                r.verdict
            ));
            rows.push(serde_json::to_value(&r).expect("entry serializes"));
        }
    }
    for (s, p) in deontic_core::proof::EXCLUDED_DERIVABLES {
        if system.is_none()
            || system.map(deontic_core::systems::canonical_name).as_deref() == Some(s)
        {
            out.push_str(&format!(
                "{s:<6} {p:<8} excluded: no definition to check against\n"
            ));
        }
    }
    emit(json, json!({ "entries": rows, "all_valid": ok }), || out);
    Ok(ok)
}

fn comma_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(String::from)
        .collect()
}

fn cmd_countermodel(a: &CountermodelArgs, json: bool) -> CmdResult {
    let (target, default_atoms): (Target, Vec<String>) =
        if let Ok(ax) = a.target.parse::<AxiomName>() {
            let s = ax.schema();
            let vars = s.metavariable_list();
            (Target::Schema(s), vars)
        } else if let Ok(r) = a.target.parse::<RuleName>() {
            let rs = r
                .schema()
                .ok_or_else(|| anyhow!("{r} has no frame-checkable form"))?;
            let vars = rs.metavariables();
            (Target::Rule(rs), vars)
        } else if a.schema {
            let s = Schema::parse("target", &a.target)?;
            let vars = s.metavariable_list();
            (Target::Schema(s), vars)
        } else {
            let f = formula(&a.target)?;
            let atoms = f.atoms().into_iter().collect();
            (Target::Formula(f), atoms)
        };
    let atoms = a.atoms.as_deref().map(comma_list).unwrap_or(default_atoms);
    let mut required: BTreeSet<FrameProperty> =
        parse_properties(&a.require).map_err(|e| anyhow!(e))?;
    if let Some(s) = &a.system {
        required.extend(fixtures::registry().frame_class(s)?.iter().copied());
    }
    let bounds = SearchBounds::new(a.max_worlds, a.max_sets, atoms);
    let report = find_countermodel(
        &target,
        &required,
        &bounds,
        a.timeout_secs.map(Duration::from_secs),
    )?;
    let found = report.is_found();
    if found && !verify_found(&report, &required) {
        return Err(anyhow!("internal error: the countermodel does not re-verify").into());
    }
    emit(
        json,
        serde_json::to_value(&report).expect("report serializes"),
        || {
            let s = &report.stats;
            let mut out = match &report.outcome {
                Outcome::Found {
                    model,
                    world,
                    falsified,
                    sides,
                } => {
                    let mut o = format!("found: `{falsified}` is false at {world}\n");
                    if !sides.is_empty() {
                        o.push_str(&format!(
                            "side conditions valid in the model: {}\n",
                            sides.join(", ")
                        ));
                    }
                    o.push_str(&format!(
                        "frame properties: {}\n",
                        class_names(&classify_frame(&model.frame).unwrap_or_default())
                    ));
                    o.push_str(&model.to_json());
                    o.push('\n');
                    o
                }
                Outcome::ExhaustedUpToBounds => "no countermodel within the bounds\n".to_string(),
                Outcome::TimedOut => "timed out before exhausting the bounds\n".to_string(),
            };
            out.push_str(&format!(
                "examined {} models, pruned {} by property and {} as isomorphic, {} ms{}\n",
                s.models_examined,
                s.pruned_by_property,
                s.pruned_isomorphic,
                s.elapsed_ms,
                if s.tautology_shortcut {
                    " (tautology)"
                } else {
                    ""
                }
            ));
            out
        },
    );
    Ok(found)
}

fn cmd_remainder(disjunction: &str, theory: &Path, ifcp: bool, json: bool) -> CmdResult {
    let f = formula(disjunction)?;
    let disjuncts: Vec<Formula> = f.disjuncts().into_iter().cloned().collect();
    let text =
        std::fs::read_to_string(theory).with_context(|| format!("reading {}", theory.display()))?;
    let t = Theory::parse(&text)?;
    match compute_remainder(&disjuncts, &t, ifcp) {
        Ok(r) => {
            emit(
                json,
                serde_json::to_value(&r).expect("result serializes"),
                || {
                    let mut out = String::new();
                    for e in &r.eliminated {
                        out.push_str(&format!("eliminated {} by {}\n", e.disjunct, e.by));
                    }
                    out.push_str(&format!("remainder: {}\n", r.remainder));
                    if !r.detached.is_empty() {
                        out.push_str(&format!("detached: {}\n", r.detached.join(", ")));
                    }
                    out
                },
            );
            Ok(true)
        }
        Err(e @ RemainderError::FullElimination) => {
            emit(json, json!({ "error": e.to_string() }), || format!("{e}\n"));
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_demo(name: Option<&str>, list: bool, json: bool) -> CmdResult {
    let name = match (name, list) {
        (Some(n), false) => n,
        _ => {
            let rows: Vec<Value> = SCENARIO_NAMES
                .iter()
                .filter_map(|n| deontic_core::proof::scenario(n))
                .map(|s| json!({ "name": s.name, "description": s.description }))
                .collect();
            emit(json, json!(rows), || {
                SCENARIO_NAMES
                    .iter()
                    .filter_map(|n| deontic_core::proof::scenario(n))
                    .map(|s| format!("{:<22} {}\n", s.name, s.description))
                    .collect()
            });
            return Ok(list);
        }
    };
    let report = run_scenario(name)?.ok_or_else(|| {
        anyhow!(
            "unknown scenario `{name}`; available: {}",
            SCENARIO_NAMES.join(", ")
        )
    })?;
    let ok = report.all_valid();
    emit(
        json,
        serde_json::to_value(&report).expect("report serializes"),
        || report.transcript(),
    );
    Ok(ok)
}

fn cmd_inclusions(json: bool) -> CmdResult {
    let report = inclusion_report();
    let registry = Registry::new();
    let mut out = String::new();
    for f in &report {
        let status = if f.verified() {
            "strict"
        } else if f.collapses() {
            "NOT STRICT: the systems are equal"
        } else if f.included() {
            "included, strictness unverified"
        } else {
            "UNVERIFIED"
        };
        out.push_str(&format!("{} ⊂ {}: {status}\n", f.smaller, f.larger));
        for e in &f.evidence {
            out.push_str(&format!(
                "  {} in {}: {} ({})\n",
                e.principle,
                f.larger,
                if e.ok { "ok" } else { "FAILED" },
                e.source
            ));
        }
        if let Some(s) = &f.separator {
            out.push_str(&format!(
                "  separator {}: in class {}, refutes {}: {}\n",
                s.fixture, s.in_class, s.refuted, s.witness
            ));
        }
        if f.collapses() {
            for e in &f.converse {
                out.push_str(&format!(
                    "  converse: {} in {} ({})\n",
                    e.principle, f.smaller, e.source
                ));
            }
        }
        if let Some(ex) = &f.example {
            for c in &ex.claims {
                out.push_str(&format!(
                    "  {}: {} {}\n",
                    ex.fixture,
                    c.statement,
                    if c.holds { "holds" } else { "does NOT hold" }
                ));
            }
        }
        let classes = (
            registry.frame_class(&f.larger),
            registry.frame_class(&f.smaller),
        );
        if let (Ok(l), Ok(s)) = classes {
            out.push_str(&format!(
                "  frame classes: {{{}}} within {{{}}}: {}\n",
                class_names(l),
                class_names(s),
                f.antitone
            ));
        }
    }
    let ok = report.iter().all(|f| f.verified());
    emit(
        json,
        json!({ "inclusions": report, "all_strict": ok }),
        || out,
    );
    Ok(ok)
}
