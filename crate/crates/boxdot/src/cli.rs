//! The `boxdot` command-line front end.
//!
//! Exit codes: 0 for a positive verdict (valid / proved / all checks
//! pass), 1 for a negative verdict with a certificate, 2 for usage or
//! format errors, 3 for an exceeded resource budget. The environment
//! variable `BOXDOT_BUDGET` overrides both enumeration and tableau
//! budgets.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::formula::{self, boxdot_translate, build_x, fresh_variable, print, Formula};
use crate::frame_ops::{double, find_p_morphism, FrameOpsError, WorldMap};
use crate::io::{Example31Doc, FileError, FrameDoc, WitnessDoc};
use crate::prover::{certify, global_consequence, prove, LogicId, ProverError, Verdict};
use crate::semantics::{
    eval, valid_in_frame, Frame, Model, SemanticsError, Validity, World, WorldSet,
};
use crate::theorem_engine::{self, witness, WitnessError};
use crate::Limits;

#[derive(Parser)]
#[command(name = "boxdot", version, about = "Modal-logic workbench for the boxdot translation")]
pub struct Cli {
    /// Emit a machine-readable JSON object instead of text
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub cmd: Cmd,
}

fn parse_logic(s: &str) -> Result<LogicId, String> {
    s.parse()
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Apply the boxdot translation to a formula
    Translate { formula: String },
    /// Evaluate a formula at a world of a model file
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        formula: String,
    },
    /// Check validity of a formula on a frame file
    Valid {
        #[arg(long)]
        frame: PathBuf,
        formula: String,
    },
    /// Decide theoremhood in K, T, K4, or S4
    Prove {
        #[arg(long, value_parser = parse_logic)]
        logic: LogicId,
        formula: String,
    },
    /// Least deduction index n with []^<=n of the assumptions proving the goal
    Consequence {
        #[arg(long, value_parser = parse_logic)]
        logic: LogicId,
        #[arg(long = "assume")]
        assume: Vec<String>,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        nmax: usize,
    },
    /// Double a frame file (two tagged copies of every world)
    Double {
        #[arg(long)]
        frame: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a p-morphism between two frame files
    Pmorphism {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        onto: bool,
    },
    /// Build the assumption set X for a formula
    Buildx {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        q: Option<String>,
    },
    /// Run the full witness construction and certify every check
    Witness {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = parse_logic)]
        logic: LogicId,
        #[arg(long = "l0-axiom", required = true)]
        l0_axiom: Vec<String>,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
    /// Reproduce a built-in demonstration
    Demo {
        #[arg(value_parser = ["example31", "conjecture"])]
        which: String,
    },
    /// Run the acceptance checks
    Selftest,
}

enum AppError {
    Input(String),
    Budget(String),
}

impl AppError {
    fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 2,
            AppError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Input(msg) | AppError::Budget(msg) => msg,
        }
    }
}

impl From<formula::ParseError> for AppError {
    fn from(err: formula::ParseError) -> AppError {
        AppError::Input(err.to_string())
    }
}

impl From<FileError> for AppError {
    fn from(err: FileError) -> AppError {
        AppError::Input(err.to_string())
    }
}

impl From<SemanticsError> for AppError {
    fn from(err: SemanticsError) -> AppError {
        match err {
            SemanticsError::BudgetExceeded { .. } => AppError::Budget(err.to_string()),
            _ => AppError::Input(err.to_string()),
        }
    }
}

impl From<FrameOpsError> for AppError {
    fn from(err: FrameOpsError) -> AppError {
        match err {
            FrameOpsError::SearchBudgetExceeded { .. } => AppError::Budget(err.to_string()),
            FrameOpsError::Semantics(inner) => inner.into(),
            _ => AppError::Input(err.to_string()),
        }
    }
}

impl From<ProverError> for AppError {
    fn from(err: ProverError) -> AppError {
        match err {
            ProverError::NodeBudget(_) => AppError::Budget(err.to_string()),
            ProverError::CertifyOnProved => AppError::Input(err.to_string()),
        }
    }
}

impl From<WitnessError> for AppError {
    fn from(err: WitnessError) -> AppError {
        match err {
            WitnessError::Prover(inner) => inner.into(),
            WitnessError::Semantics(inner) => inner.into(),
            WitnessError::FrameOps(inner) => inner.into(),
            _ => AppError::Input(err.to_string()),
        }
    }
}

fn limits_from_env() -> Result<Limits, AppError> {
    match std::env::var("BOXDOT_BUDGET") {
        Ok(value) => value
            .parse::<u64>()
            .map(Limits::uniform)
            .map_err(|_| AppError::Input(format!("BOXDOT_BUDGET must be an integer, got {value:?}"))),
        Err(_) => Ok(Limits::default()),
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    let limits = match limits_from_env() {
        Ok(limits) => limits,
        Err(err) => {
            eprintln!("error: {}", err.message());
            return err.exit_code();
        }
    };
    match dispatch(&cli, &limits) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}

fn emit_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn load_frame(path: &std::path::Path) -> Result<Frame, AppError> {
    Ok(FrameDoc::load(path)?.to_frame()?)
}

fn load_model(path: &std::path::Path) -> Result<Model, AppError> {
    Ok(FrameDoc::load(path)?.to_model()?)
}

fn render_valuation(frame: &Frame, valuation: &BTreeMap<String, WorldSet>) -> String {
    let k = frame.kripke();
    valuation
        .iter()
        .map(|(var, set)| {
            let worlds: Vec<&str> = set.iter().map(|w| k.world_name(w)).collect();
            format!("{var} = {{{}}}", worlds.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn render_model(m: &Model) -> String {
    let k = m.frame().kripke();
    let mut lines = Vec::new();
    lines.push(format!("  worlds: {}", k.world_names().join(" ")));
    let edges: Vec<String> = k
        .edges()
        .iter()
        .map(|&(i, j)| format!("{}->{}", k.world_name(World(i)), k.world_name(World(j))))
        .collect();
    lines.push(format!("  relation: {}", edges.join(" ")));
    lines.push(format!(
        "  valuation: {}",
        render_valuation(m.frame(), m.valuation())
    ));
    if let Some(root) = m.root() {
        lines.push(format!("  root: {}", k.world_name(root)));
    }
    lines.join("\n")
}

fn dispatch(cli: &Cli, limits: &Limits) -> Result<i32, AppError> {
    match &cli.cmd {
        Cmd::Translate { formula } => {
            let f = formula::parse(formula)?;
            let translated = boxdot_translate(&f);
            if cli.json {
                #[derive(Serialize)]
                struct Out {
                    input: String,
                    translation: String,
                }
                emit_json(&Out {
                    input: print(&f),
                    translation: print(&translated),
                });
            } else {
                println!("{}", print(&translated));
            }
            Ok(0)
        }

        Cmd::Eval {
            model,
            world,
            formula,
        } => {
            let f = formula::parse(formula)?;
            let m = load_model(model)?;
            let w = m
                .frame()
                .kripke()
                .world_index(world)
                .ok_or_else(|| AppError::Input(format!("unknown world {world:?}")))?;
            let value = eval(&m, w, &f);
            if cli.json {
                #[derive(Serialize)]
                struct Out {
                    world: String,
                    formula: String,
                    value: bool,
                }
                emit_json(&Out {
                    world: world.clone(),
                    formula: print(&f),
                    value,
                });
            } else {
                println!("{value}");
            }
            Ok(if value { 0 } else { 1 })
        }

        Cmd::Valid { frame, formula } => {
            let f = formula::parse(formula)?;
            let fr = load_frame(frame)?;
            match valid_in_frame(&fr, &f, limits)? {
                Validity::Valid => {
                    if cli.json {
                        #[derive(Serialize)]
                        struct Out {
                            verdict: String,
                        }
                        emit_json(&Out {
                            verdict: "valid".into(),
                        });
                    } else {
                        println!("valid");
                    }
                    Ok(0)
                }
                Validity::Invalid { valuation, world } => {
                    let k = fr.kripke();
                    if cli.json {
                        #[derive(Serialize)]
                        struct Out {
                            verdict: String,
                            world: String,
                            valuation: BTreeMap<String, Vec<String>>,
                        }
                        emit_json(&Out {
                            verdict: "invalid".into(),
                            world: k.world_name(world).to_owned(),
                            valuation: valuation
                                .iter()
                                .map(|(var, set)| {
                                    (
                                        var.clone(),
                                        set.iter()
                                            .map(|w| k.world_name(w).to_owned())
                                            .collect(),
                                    )
                                })
                                .collect(),
                        });
                    } else {
                        println!("invalid");
                        println!("world: {}", k.world_name(world));
                        println!("valuation: {}", render_valuation(&fr, &valuation));
                    }
                    Ok(1)
                }
            }
        }

        Cmd::Prove { logic, formula } => {
            let f = formula::parse(formula)?;
            let result = prove(*logic, &f, limits)?;
            match result.verdict {
                Verdict::Proved => {
                    if cli.json {
                        #[derive(Serialize)]
                        struct Out {
                            logic: String,
                            verdict: String,
                            nodes: u64,
                            depth: usize,
                        }
                        emit_json(&Out {
                            logic: logic.to_string(),
                            verdict: "proved".into(),
                            nodes: result.stats.nodes,
                            depth: result.stats.depth,
                        });
                    } else {
                        println!("proved");
                    }
                    Ok(0)
                }
                Verdict::Refuted => {
                    if !certify(&result, &f).expect("refuted result") {
                        return Err(AppError::Input(
                            "internal error: countermodel failed certification".into(),
                        ));
                    }
                    let model = result.countermodel.as_ref().expect("refuted result");
                    if cli.json {
                        #[derive(Serialize)]
                        struct Out {
                            logic: String,
                            verdict: String,
                            countermodel: FrameDoc,
                            certified: bool,
                            nodes: u64,
                            depth: usize,
                        }
                        emit_json(&Out {
                            logic: logic.to_string(),
                            verdict: "refuted".into(),
                            countermodel: FrameDoc::from_model(model),
                            certified: true,
                            nodes: result.stats.nodes,
                            depth: result.stats.depth,
                        });
                    } else {
                        println!("refuted");
                        println!("countermodel:");
                        println!("{}", render_model(model));
                    }
                    Ok(1)
                }
            }
        }

        Cmd::Consequence {
            logic,
            assume,
            goal,
            nmax,
        } => {
            let assumptions: Vec<Formula> = assume
                .iter()
                .map(|s| formula::parse(s))
                .collect::<Result<_, _>>()?;
            let goal = formula::parse(goal)?;
            let n = global_consequence(*logic, &assumptions, &goal, *nmax, limits)?;
            // on a miss, the countermodel of the last attempted index is
            // the certificate
            let last_countermodel = if n.is_none() {
                let last = Formula::imp(
                    formula::box_le_n(*nmax, &formula::conjoin(assumptions.iter().cloned())),
                    goal.clone(),
                );
                prove(*logic, &last, limits)?
                    .countermodel
                    .map(|m| FrameDoc::from_model(&m))
            } else {
                None
            };
            if cli.json {
                #[derive(Serialize)]
                struct Out {
                    n: Option<usize>,
                    nmax: usize,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    last_countermodel: Option<FrameDoc>,
                }
                emit_json(&Out {
                    n,
                    nmax: *nmax,
                    last_countermodel,
                });
            } else {
                match n {
                    Some(n) => println!("n = {n}"),
                    None => println!("no derivation with n <= {nmax}"),
                }
            }
            Ok(if n.is_some() { 0 } else { 1 })
        }

        Cmd::Double { frame, output } => {
            let fr = load_frame(frame)?;
            let doubled = double(&fr)?;
            let doc = FrameDoc::from_frame(&doubled);
            match output {
                Some(path) => {
                    doc.save(path)?;
                    println!("wrote {}", path.display());
                }
                None => {
                    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
                    text.push('\n');
                    print!("{text}");
                }
            }
            Ok(0)
        }

        Cmd::Pmorphism { from, to, onto } => {
            let src = load_frame(from)?;
            let dst = load_frame(to)?;
            let found: Option<WorldMap> = find_p_morphism(&src, &dst, *onto, limits)?;
            match found {
                Some(map) => {
                    let names = map.to_names(src.kripke(), dst.kripke());
                    if cli.json {
                        #[derive(Serialize)]
                        struct Out {
                            found: bool,
                            onto: bool,
                            map: BTreeMap<String, String>,
                        }
                        emit_json(&Out {
                            found: true,
                            onto: *onto,
                            map: names,
                        });
                    } else {
                        println!("found");
                        for (from, to) in names {
                            println!("  {from} -> {to}");
                        }
                    }
                    Ok(0)
                }
                None => {
                    if cli.json {
                        #[derive(Serialize)]
                        struct Out {
                            found: bool,
                            onto: bool,
                        }
                        emit_json(&Out {
                            found: false,
                            onto: *onto,
                        });
                    } else {
                        println!("none");
                    }
                    Ok(1)
                }
            }
        }

        Cmd::Buildx { phi, q } => {
            let phi = formula::parse(phi)?;
            let q = match q {
                Some(name) => name.clone(),
                None => fresh_variable([&phi]),
            };
            let x = build_x(&phi, &q).map_err(|e| AppError::Input(e.to_string()))?;
            if cli.json {
                #[derive(Serialize)]
                struct Out {
                    phi: String,
                    q: String,
                    x: Vec<String>,
                }
                emit_json(&Out {
                    phi: print(&phi),
                    q,
                    x: x.iter().map(print).collect(),
                });
            } else {
                println!("q = {q}");
                for member in &x {
                    println!("{}", print(member));
                }
            }
            Ok(0)
        }

        Cmd::Witness {
            phi,
            model,
            logic,
            l0_axiom,
            nmax,
        } => {
            let phi = formula::parse(phi)?;
            let m = load_model(model)?;
            let root = m.root().ok_or_else(|| {
                AppError::Input("model file has no \"root\" world".into())
            })?;
            let axioms: Vec<Formula> = l0_axiom
                .iter()
                .map(|s| formula::parse(s))
                .collect::<Result<_, _>>()?;
            let report = witness(&phi, &m, root, *logic, &axioms, *nmax, limits)?;
            print_witness(cli.json, &report);
            Ok(if report.checks.all_pass() { 0 } else { 1 })
        }

        Cmd::Demo { which } => match which.as_str() {
            "example31" => {
                let report = theorem_engine::example_31(limits)?;
                if cli.json {
                    emit_json(&Example31Doc::from_report(&report));
                } else {
                    println!(
                        "reflexivize(i2) = c2: {}",
                        report.reflexivized_i2_equals_c2
                    );
                    println!("formula: {}", print(&report.formula));
                    println!("valid in i2: {}", report.valid_in_i2);
                    match (&report.c2_counter_valuation, &report.c2_counter_world) {
                        (Some(valuation), Some(world)) => println!(
                            "invalid in c2: {} (world {world}, valuation {})",
                            report.invalid_in_c2,
                            render_valuation(&Frame::Kripke(theorem_engine::c2()), valuation)
                        ),
                        _ => println!("invalid in c2: {}", report.invalid_in_c2),
                    }
                    println!(
                        "bdi agreement: {}/{} formulas agree",
                        report.corpus_size - report.bdi_mismatches.len(),
                        report.corpus_size
                    );
                    println!(
                        "{}",
                        if report.all_pass() {
                            "all checks pass"
                        } else {
                            "CHECKS FAILED"
                        }
                    );
                }
                Ok(if report.all_pass() { 0 } else { 1 })
            }
            "conjecture" => {
                let report = theorem_engine::demo_conjecture(limits)?;
                print_witness(cli.json, &report);
                Ok(if report.checks.all_pass() { 0 } else { 1 })
            }
            _ => unreachable!("clap validates the demo name"),
        },

        Cmd::Selftest => {
            let outcomes = crate::selftest::run_all(limits);
            let all_pass = outcomes.iter().all(|o| o.pass);
            if cli.json {
                #[derive(Serialize)]
                struct Criterion {
                    index: usize,
                    name: String,
                    pass: bool,
                    detail: String,
                }
                #[derive(Serialize)]
                struct Out {
                    criteria: Vec<Criterion>,
                    all_pass: bool,
                }
                emit_json(&Out {
                    criteria: outcomes
                        .iter()
                        .map(|o| Criterion {
                            index: o.index,
                            name: o.name.to_owned(),
                            pass: o.pass,
                            detail: o.detail.clone(),
                        })
                        .collect(),
                    all_pass,
                });
            } else {
                for outcome in &outcomes {
                    println!("{}", outcome.line());
                }
                println!(
                    "{}",
                    if all_pass {
                        "all criteria pass"
                    } else {
                        "CRITERIA FAILED"
                    }
                );
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn print_witness(json: bool, report: &theorem_engine::WitnessReport) {
    if json {
        emit_json(&WitnessDoc::from_report(report));
        return;
    }
    println!("phi: {}", print(&report.phi));
    println!("q: {}", report.q);
    println!("n: {}", report.n);
    println!("|X|: {}", report.x.len());
    for (i, member) in report.x.iter().enumerate() {
        println!("X[{i}]: {}", print(member));
    }
    println!("chi: {}", print(&report.chi));
    println!("chi_bd: {}", print(&report.chi_bd));
    println!("checks:");
    let checks = &report.checks;
    println!(
        "  x_translation_consequence: {}",
        checks.x_translation_consequence
    );
    println!("  two_m_satisfies_x: {}", checks.two_m_satisfies_x);
    println!("  two_m_refutes_phi: {}", checks.two_m_refutes_phi);
    match &report.chi_refuting_world {
        Some(world) => println!(
            "  chi_refuted_in_doubled_frame: {} (at {world})",
            checks.chi_refuted_in_doubled_frame
        ),
        None => println!(
            "  chi_refuted_in_doubled_frame: {}",
            checks.chi_refuted_in_doubled_frame
        ),
    }
    println!(
        "  doubled_frame_is_l0_frame: {}",
        checks.doubled_frame_is_l0_frame
    );
    println!("  chi_bd_proved_in_l: {}", checks.chi_bd_proved_in_l);
    println!("x_nonconsequence_in_l0: {}", report.x_nonconsequence_in_l0);
    println!(
        "{}",
        if checks.all_pass() {
            "all checks pass"
        } else {
            "CHECKS FAILED"
        }
    );
}
