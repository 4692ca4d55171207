//! Command-line front end for the hyperstruct library.
//!
//! Every subcommand prints human-readable text followed by exactly one JSON
//! object on the final stdout line (`export-dot` is the exception: its whole
//! output is the DOT text). Exit codes: 0 success, 1 domain findings
//! (validation violations, axiom failures, gluing inconsistencies), 2
//! malformed input or usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use hyperstruct::entangle::{entanglement_order, PartitionTree, TensorState};
use hyperstruct::gft::{assign, assignment_from_json, parse_value, Value};
use hyperstruct::multimod::{action_table_from_json, ActionSystem, FiniteModule, FiniteRing};
use hyperstruct::nest::{build_nest, FiniteTopology, NestFamily};
use hyperstruct::Hyperstructure;

#[derive(Parser)]
#[command(name = "hyperstruct", version, about = "Leveled bond structures: build, validate, classify, globalize")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a hyperstructure file against every structural law.
    Validate {
        /// Hyperstructure JSON file.
        file: PathBuf,
    },
    /// Build the nested-open-set hyperstructure of a topology and family.
    BuildNest {
        /// Topology JSON file: {"points": [...], "opens": [[...], ...]}.
        #[arg(long)]
        topology: PathBuf,
        /// Family JSON file: {"depth": n, "words": {"1,2": [...], ...}}.
        #[arg(long)]
        family: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify the module axioms of a ring family acting on a module.
    VerifyModule {
        /// Ring file or builtin (zn:6, m2zp:2); repeat per family position.
        #[arg(long = "ring", required = true)]
        rings: Vec<String>,
        /// Module file or builtin (zn:6).
        #[arg(long)]
        module: String,
        /// Action table file: nested arrays indexed [w][t][r][m].
        #[arg(long)]
        action: PathBuf,
        /// Also require pairwise commutativity across family positions.
        #[arg(long)]
        commuting: bool,
    },
    /// Classify the entanglement order of a state against a partition tree.
    ClassifyState {
        /// State JSON file: {"dims": [...], "amps": [[re, im], ...]}.
        file: PathBuf,
        /// Partition tree JSON file: nested arrays of leaf indices.
        #[arg(long)]
        tree: PathBuf,
    },
    /// Globalize an assignment over a hyperstructure.
    Globalize {
        /// Assignment JSON file: {"recipient": {...}, "leaves": {...}}.
        file: PathBuf,
        /// Hyperstructure JSON file the assignment lives on.
        #[arg(long)]
        hyper: PathBuf,
    },
    /// Edit leaf values and re-globalize, reporting both globals.
    Tunnel {
        /// Assignment JSON file.
        file: PathBuf,
        /// Hyperstructure JSON file.
        #[arg(long)]
        hyper: PathBuf,
        /// Leaf edit key=value; repeatable. Values use the leaf JSON forms.
        #[arg(long = "set")]
        sets: Vec<String>,
    },
    /// Fuse two hyperstructures level-wise (left keys L:, right keys R:).
    Fuse {
        /// Left hyperstructure JSON file.
        #[arg(long)]
        left: PathBuf,
        /// Right hyperstructure JSON file.
        #[arg(long)]
        right: PathBuf,
        /// Bind both previous top levels under one new top bond.
        #[arg(long)]
        add_top: bool,
        /// Write the result here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a hyperstructure as a DOT digraph on stdout.
    ExportDot {
        /// Hyperstructure JSON file.
        file: PathBuf,
    },
}

/// A failure routed to an exit code: 1 for domain findings, 2 for malformed
/// input.
struct Failure {
    code: u8,
    name: &'static str,
    message: String,
}

impl Failure {
    fn domain(name: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            name,
            message: message.into(),
        }
    }

    fn malformed(name: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            name,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::malformed("ReadError", format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<Hyperstructure, Failure> {
    Hyperstructure::from_json(&read(path)?)
        .map_err(|e| Failure::malformed("ParseError", e.to_string()))
}

/// Accepts a builtin spec (`zn:6`, `m2zp:2`) or a path to a ring file.
fn load_ring(spec: &str) -> Result<FiniteRing, Failure> {
    if let Some(n) = spec.strip_prefix("zn:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::malformed("ParseError", format!("bad modulus in {spec:?}")))?;
        if n == 0 {
            return Err(Failure::malformed("ParseError", "Z_0 is not a ring"));
        }
        return Ok(FiniteRing::zn(n));
    }
    if let Some(p) = spec.strip_prefix("m2zp:") {
        let p: usize = p
            .parse()
            .map_err(|_| Failure::malformed("ParseError", format!("bad prime in {spec:?}")))?;
        return FiniteRing::m2_zp(p)
            .map_err(|e| Failure::malformed("ParseError", e.to_string()));
    }
    FiniteRing::from_json(&read(Path::new(spec))?)
        .map_err(|e| Failure::malformed("ParseError", e.to_string()))
}

fn load_module(spec: &str) -> Result<FiniteModule, Failure> {
    if let Some(n) = spec.strip_prefix("zn:") {
        let n: usize = n
            .parse()
            .map_err(|_| Failure::malformed("ParseError", format!("bad modulus in {spec:?}")))?;
        if n == 0 {
            return Err(Failure::malformed("ParseError", "Z_0 is not a module"));
        }
        return Ok(FiniteModule::zn(n));
    }
    FiniteModule::from_json(&read(Path::new(spec))?)
        .map_err(|e| Failure::malformed("ParseError", e.to_string()))
}

fn emit_structure(h: &Hyperstructure, output: Option<&Path>, extra: serde_json::Value) -> Result<(), Failure> {
    let text = h.to_json();
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n"))
                .map_err(|e| Failure::malformed("WriteError", format!("{}: {e}", path.display())))?;
            println!(
                "wrote {} ({} elements, {} bonds)",
                path.display(),
                h.element_count(),
                h.bond_count()
            );
            let mut line = json!({
                "written": path.display().to_string(),
                "elements": h.element_count(),
                "bonds": h.bond_count(),
            });
            if let (Some(obj), Some(add)) = (line.as_object_mut(), extra.as_object()) {
                obj.extend(add.clone());
            }
            println!("{line}");
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn value_to_json(value: &Value) -> serde_json::Value {
    match value {
        Value::Element(name) => json!(name),
        Value::Multiset(m) => json!(m),
        Value::Tensor(t) => serde_json::from_str(&t.to_json()).expect("state json is valid"),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let h = load_structure(&file)?;
            let report = h.validate();
            print!("{report}");
            let count = report.violations().len();
            println!("{}", json!({ "violations": count }));
            if count > 0 {
                return Err(Failure {
                    code: 1,
                    name: "ValidationFailed",
                    message: String::new(),
                });
            }
        }
        Command::BuildNest {
            topology,
            family,
            output,
        } => {
            let t = FiniteTopology::from_json(&read(&topology)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let f = NestFamily::from_json(&read(&family)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let h = build_nest(&t, &f).map_err(|e| Failure::domain("BuildFailed", e.to_string()))?;
            emit_structure(&h, output.as_deref(), json!({}))?;
        }
        Command::VerifyModule {
            rings,
            module,
            action,
            commuting,
        } => {
            let rings = rings
                .iter()
                .map(|spec| load_ring(spec))
                .collect::<Result<Vec<_>, _>>()?;
            let module = load_module(&module)?;
            let act = action_table_from_json(&read(&action)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let system = ActionSystem::new(rings, module, act, commuting)
                .map_err(|e| Failure::malformed("BadActionShape", e.to_string()))?;
            let report = system.verify();
            print!("{report}");
            println!(
                "{}",
                json!({
                    "violations": report.violations().len(),
                    "truncated": report.truncated(),
                })
            );
            if !report.is_empty() {
                return Err(Failure {
                    code: 1,
                    name: "AxiomFailure",
                    message: String::new(),
                });
            }
        }
        Command::ClassifyState { file, tree } => {
            let state = TensorState::from_json(&read(&file)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let tree = PartitionTree::from_json(&read(&tree)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let result = entanglement_order(&state, &tree)
                .map_err(|e| Failure::malformed("BadTree", e.to_string()))?;
            match &result.witness_node {
                Some(node) => println!("order {} (factorization fails at {node})", result.order),
                None => println!("order {} (full product)", result.order),
            }
            println!(
                "{}",
                json!({
                    "order": result.order,
                    "witness": result.witness_node.as_ref().map(|n| n.to_string()),
                })
            );
        }
        Command::Globalize { file, hyper } => {
            let h = load_structure(&hyper)?;
            let (recipient, leaves) = assignment_from_json(&read(&file)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let a = assign(&h, recipient, leaves)
                .map_err(|e| Failure::domain("AssignFailed", e.to_string()))?;
            let result = a
                .globalize()
                .map_err(|e| Failure::domain("GlobalizeFailed", e.to_string()))?;
            for level in 0..=result.depth() {
                let values = result.level_values(level).expect("level in range");
                for (key, value) in values {
                    println!("level {level}: {key} = {value}");
                }
            }
            for issue in result.glue_report() {
                println!("glue issue: {issue}");
            }
            match result.global() {
                Some(global) => {
                    println!(
                        "{}",
                        json!({ "global": value_to_json(global), "glue_issues": 0 })
                    );
                }
                None => {
                    println!(
                        "{}",
                        json!({
                            "global": serde_json::Value::Null,
                            "glue_issues": result.glue_report().len(),
                        })
                    );
                    return Err(Failure {
                        code: 1,
                        name: "GlueInconsistent",
                        message: String::new(),
                    });
                }
            }
        }
        Command::Tunnel { file, hyper, sets } => {
            let h = load_structure(&hyper)?;
            let (recipient, leaves) = assignment_from_json(&read(&file)?)
                .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
            let mut edits = BTreeMap::new();
            for setting in &sets {
                let (key, raw) = setting.split_once('=').ok_or_else(|| {
                    Failure::malformed("ParseError", format!("--set needs key=value, got {setting:?}"))
                })?;
                let raw_value: serde_json::Value = serde_json::from_str(raw)
                    .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
                let value = parse_value(&recipient, &raw_value)
                    .map_err(|e| Failure::malformed("ParseError", e.to_string()))?;
                edits.insert(key.to_string(), value);
            }
            let a = assign(&h, recipient, leaves)
                .map_err(|e| Failure::domain("AssignFailed", e.to_string()))?;
            let (old, new) = a
                .tunnel(&edits)
                .map_err(|e| Failure::domain("TunnelFailed", e.to_string()))?;
            println!("global before: {old}");
            println!("global after:  {new}");
            println!(
                "{}",
                json!({ "old": value_to_json(&old), "new": value_to_json(&new) })
            );
        }
        Command::Fuse {
            left,
            right,
            add_top,
            output,
        } => {
            let l = load_structure(&left)?;
            let r = load_structure(&right)?;
            let fused = l.fuse(&r, add_top);
            emit_structure(&fused, output.as_deref(), json!({}))?;
        }
        Command::ExportDot { file } => {
            let h = load_structure(&file)?;
            print!("{}", h.export_dot());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("{}: {}", failure.name, failure.message);
                println!("{}", json!({ "error": failure.name, "message": failure.message }));
            }
            ExitCode::from(failure.code)
        }
    }
}
