//! The `algebroid` command-line tool.
//!
//! Exit status: 0 on success, 1 when a check finds a violated axiom, 2 on
//! malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebroid::{Algebroid, AxiomReport, Section};
use crate::catalog::{self, Payload};
use crate::error::Error;
use crate::groupoid::{EquivariantBundle, FiniteGroupoid, GroupoidDefect, GroupoidReport};
use crate::poly::{parse_expression, Poly};
use crate::schema;
use crate::uea::{Enveloping, FreeWord, StarProduct, UeaElement};

#[derive(Parser, Debug)]
#[command(
    name = "algebroid",
    version,
    about = "Exact computations with Lie algebroids, enveloping algebras, star products and finite groupoids"
)]
struct Cli {
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check antisymmetry, the anchor morphism property and Jacobi.
    CheckAlgebroid { file: PathBuf },
    /// Lie-Poisson bracket {f, g} of two functions on the dual bundle.
    Poisson { file: PathBuf, f: String, g: String },
    /// Bracket of two sections, written in e1..en or as linear forms in xi.
    Bracket { file: PathBuf, x: String, y: String },
    /// PBW normal form of an expression in functions and e1..en.
    NormalForm {
        file: PathBuf,
        expr: String,
        /// Normal-order in the enveloping algebra of the adiabatic algebroid.
        #[arg(long)]
        adiabatic: bool,
    },
    /// Full symbol of an enveloping-algebra element.
    Symbol {
        file: PathBuf,
        expr: String,
        #[arg(long)]
        adiabatic: bool,
    },
    /// Symmetrization of a fiberwise-polynomial function.
    Quantize {
        file: PathBuf,
        f: String,
        #[arg(long)]
        adiabatic: bool,
    },
    /// The adiabatic star product f * g.
    Star { file: PathBuf, f: String, g: String },
    /// Print the adiabatic algebroid as an algebroid file.
    Adiabatic { file: PathBuf },
    /// Finite groupoid computations.
    #[command(subcommand)]
    Groupoid(GroupoidCommand),
    /// Built-in examples.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand, Debug)]
enum GroupoidCommand {
    /// Check the composition table and the groupoid axioms.
    Check { file: PathBuf },
    /// Convolution of two kernels.
    Convolve {
        file: PathBuf,
        k1: PathBuf,
        k2: PathBuf,
    },
    /// Apply the representation of a kernel to a section.
    Rep(RepArgs),
    /// Kernel to invariant family and back.
    KernelRoundtrip { file: PathBuf, kernel: PathBuf },
}

#[derive(Args, Debug)]
struct RepArgs {
    file: PathBuf,
    kernel: PathBuf,
    section: PathBuf,
    /// Equivariant bundle; defaults to the trivial line bundle.
    #[arg(long)]
    bundle: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    /// List the built-in examples.
    List,
    /// Write examples as schema files.
    Export {
        dir: PathBuf,
        /// Entries to export; all when omitted.
        names: Vec<String>,
    },
}

/// A finished report: text form, JSON form, and whether a check failed.
struct Report {
    text: String,
    json: Value,
    failed: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            failed: false,
        }
    }

    fn result(text: String) -> Self {
        let json = json!({ "result": text });
        Report::ok(text, json)
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_algebroid(path: &Path) -> Result<Algebroid, Failure> {
    schema::algebroid_from_json(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, Failure> {
    schema::groupoid_from_json(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_poly(src: &str) -> Result<Poly, Failure> {
    src.parse::<Poly>()
        .map_err(|e| Failure::Input(format!("{src:?}: {e}")))
}

fn enveloping(alg: Algebroid, adiabatic: bool) -> Result<Enveloping, Failure> {
    if adiabatic {
        Ok(Enveloping::adiabatic(&alg)?)
    } else {
        Ok(Enveloping::new(alg))
    }
}

fn parse_element(env: &Enveloping, src: &str) -> Result<UeaElement, Failure> {
    let expr = parse_expression(src).map_err(|e| Failure::Input(format!("{src:?}: {e}")))?;
    Ok(env.normal_form_sum(&FreeWord::from_expr(&expr))?)
}

fn parse_section(alg: &Algebroid, src: &str) -> Result<Section, Failure> {
    let expr = parse_expression(src).map_err(|e| Failure::Input(format!("{src:?}: {e}")))?;
    if expr.mentions_generators() {
        let env = Enveloping::new(alg.clone());
        let elem = env.normal_form_sum(&FreeWord::from_expr(&expr))?;
        let mut comps = vec![Poly::zero(); alg.rank()];
        for (alpha, c) in elem.terms() {
            match alpha.iter().position(|&a| a > 0) {
                Some(i) if alpha.iter().sum::<u32>() == 1 => comps[i] = c.clone(),
                _ => {
                    return Err(Failure::Input(format!(
                        "{src:?} is not a section: every term needs exactly one generator"
                    )))
                }
            }
        }
        Ok(Section(comps))
    } else {
        let p = expr.to_poly()?;
        alg.check_fiber_poly(&p)?;
        Ok(Section::from_fiber_poly(alg.rank(), &p)?)
    }
}

fn section_text(alg: &Algebroid, s: &Section) -> String {
    let env = Enveloping::new(alg.clone());
    env.inject_section(s)
        .map(|e| e.to_string())
        .unwrap_or_else(|_| s.to_fiber_poly().to_string())
}

fn axiom_report(rep: &AxiomReport) -> Report {
    let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let json = json!({
        "antisymmetry": {
            "status": status(rep.antisymmetry_ok()),
            "failures": rep.antisymmetry.iter().map(|&(i, j, k)| [i + 1, j + 1, k + 1]).collect::<Vec<_>>(),
        },
        "anchor": {
            "status": status(rep.anchor_ok()),
            "failures": rep.anchor_failures().iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        },
        "jacobi": {
            "status": status(rep.jacobi_ok()),
            "failures": rep.jacobi_failures().iter().map(|&(i, j, l)| [i + 1, j + 1, l + 1]).collect::<Vec<_>>(),
        },
    });
    Report {
        text: rep.to_string(),
        json,
        failed: !rep.passed(),
    }
}

fn groupoid_report(g: &FiniteGroupoid, rep: &GroupoidReport) -> Report {
    let items = |ds: &[GroupoidDefect]| -> Value {
        let list: Vec<String> = ds.iter().map(|d| g.defect_label(d)).collect();
        json!({
            "status": if ds.is_empty() { "PASS" } else { "FAIL" },
            "failures": list,
        })
    };
    let json = json!({
        "composition": items(&rep.composition),
        "axiom_i": items(&rep.axiom_i),
        "axiom_ii": items(&rep.axiom_ii),
        "axiom_iii": items(&rep.axiom_iii),
    });
    Report {
        text: g.describe(rep),
        json,
        failed: !rep.passed(),
    }
}

fn execute(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::CheckAlgebroid { file } => Ok(axiom_report(&load_algebroid(&file)?.check_axioms())),
        Command::Poisson { file, f, g } => {
            let alg = load_algebroid(&file)?;
            let p = alg.poisson(&parse_poly(&f)?, &parse_poly(&g)?)?;
            Ok(Report::result(p.to_string()))
        }
        Command::Bracket { file, x, y } => {
            let alg = load_algebroid(&file)?;
            let s = alg.bracket(&parse_section(&alg, &x)?, &parse_section(&alg, &y)?)?;
            Ok(Report::result(section_text(&alg, &s)))
        }
        Command::NormalForm {
            file,
            expr,
            adiabatic,
        } => {
            let env = enveloping(load_algebroid(&file)?, adiabatic)?;
            Ok(Report::result(parse_element(&env, &expr)?.to_string()))
        }
        Command::Symbol {
            file,
            expr,
            adiabatic,
        } => {
            let env = enveloping(load_algebroid(&file)?, adiabatic)?;
            let a = parse_element(&env, &expr)?;
            Ok(Report::result(env.symbol(&a)?.to_string()))
        }
        Command::Quantize { file, f, adiabatic } => {
            let env = enveloping(load_algebroid(&file)?, adiabatic)?;
            Ok(Report::result(env.quantize(&parse_poly(&f)?)?.to_string()))
        }
        Command::Star { file, f, g } => {
            let sp = StarProduct::for_algebroid(&load_algebroid(&file)?)?;
            Ok(Report::result(sp.star(&parse_poly(&f)?, &parse_poly(&g)?)?.to_string()))
        }
        Command::Adiabatic { file } => {
            let at = load_algebroid(&file)?.adiabatic()?;
            Ok(Report::ok(
                schema::algebroid_to_json(&at).trim_end().to_string(),
                schema::algebroid_to_value(&at),
            ))
        }
        Command::Groupoid(sub) => execute_groupoid(sub),
        Command::Catalog(sub) => execute_catalog(sub),
    }
}

fn execute_groupoid(cmd: GroupoidCommand) -> Result<Report, Failure> {
    match cmd {
        GroupoidCommand::Check { file } => {
            let g = load_groupoid(&file)?;
            Ok(groupoid_report(&g, &g.check()))
        }
        GroupoidCommand::Convolve { file, k1, k2 } => {
            let g = checked_groupoid(&file)?;
            let f1 = schema::kernel_from_json(&g, &read(&k1)?)?;
            let f2 = schema::kernel_from_json(&g, &read(&k2)?)?;
            let k = g.convolve(&f1, &f2)?;
            Ok(Report::ok(
                schema::kernel_to_json(&g, &k).trim_end().to_string(),
                schema::kernel_to_value(&g, &k),
            ))
        }
        GroupoidCommand::Rep(args) => {
            let g = checked_groupoid(&args.file)?;
            let k = schema::kernel_from_json(&g, &read(&args.kernel)?)?;
            let bundle = match &args.bundle {
                Some(p) => schema::bundle_from_json(&g, &read(p)?)?,
                None => EquivariantBundle::trivial(&g),
            };
            let sizes: Vec<usize> = (0..g.unit_count())
                .map(|x| k.dims()[x] * bundle.dims()[x])
                .collect();
            let phi = schema::section_from_json(&g, &sizes, &read(&args.section)?)?;
            let out = g.represent(&k, &bundle, &phi)?;
            let value = schema::section_to_value(&g, &out);
            Ok(Report::ok(schema::pretty(&value).trim_end().to_string(), value))
        }
        GroupoidCommand::KernelRoundtrip { file, kernel } => {
            let g = checked_groupoid(&file)?;
            let k = schema::kernel_from_json(&g, &read(&kernel)?)?;
            let family = g.family_from_kernel(&k)?;
            let invariant = family.check_invariance(&g).is_ok();
            let back = g.kernel_from_family(&family).ok();
            let same = back.as_ref() == Some(&k);
            let mut lines = Vec::new();
            let mut operators = serde_json::Map::new();
            for x in 0..g.unit_count() {
                let op = family.operator(&g, x);
                lines.push(format!("P[{}] = {op}", g.unit_name(x)));
                operators.insert(g.unit_name(x).to_string(), json!(op.to_string()));
            }
            let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
            lines.push(format!("invariance: {}", status(invariant)));
            lines.push(format!("roundtrip: {}", status(same)));
            Ok(Report {
                text: lines.join("\n"),
                json: json!({
                    "operators": operators,
                    "invariance": status(invariant),
                    "roundtrip": status(same),
                }),
                failed: !(invariant && same),
            })
        }
    }
}

fn checked_groupoid(path: &Path) -> Result<FiniteGroupoid, Failure> {
    let g = load_groupoid(path)?;
    let rep = g.check();
    if !rep.passed() {
        return Err(Failure::Input(format!(
            "{} is not a groupoid:\n{}",
            path.display(),
            g.describe(&rep)
        )));
    }
    Ok(g)
}

fn entry_json(payload: &Payload) -> String {
    match payload {
        Payload::Algebroid(a) => schema::algebroid_to_json(a),
        Payload::Groupoid(g) => schema::groupoid_to_json(g),
    }
}

fn execute_catalog(cmd: CatalogCommand) -> Result<Report, Failure> {
    let entries = catalog::catalog();
    match cmd {
        CatalogCommand::List => {
            let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
            let text = entries
                .iter()
                .map(|e| format!("{:<width$}  {:<15}  {}", e.name, e.kind(), e.description))
                .collect::<Vec<_>>()
                .join("\n");
            let json = Value::Array(
                entries
                    .iter()
                    .map(|e| json!({"name": e.name, "kind": e.kind(), "description": e.description}))
                    .collect(),
            );
            Ok(Report::ok(text, json))
        }
        CatalogCommand::Export { dir, names } => {
            if let Some(bad) = names.iter().find(|n| !entries.iter().any(|e| &&e.name == n)) {
                return Err(Failure::Input(format!("no catalog entry named {bad}")));
            }
            fs::create_dir_all(&dir)
                .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for e in entries
                .iter()
                .filter(|e| names.is_empty() || names.contains(&e.name))
            {
                let path = dir.join(format!("{}.json", e.name));
                fs::write(&path, entry_json(&e.payload))
                    .map_err(|err| Failure::Input(format!("{}: {err}", path.display())))?;
                written.push(path.display().to_string());
            }
            Ok(Report::ok(written.join("\n"), json!({ "written": written })))
        }
    }
}

/// Runs the tool on `argv` (including the program name) and returns the
/// exit status.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let json = cli.json;
    match execute(cli.command) {
        Ok(rep) => {
            let body = if json {
                schema::pretty(&rep.json)
            } else {
                format!("{}\n", rep.text)
            };
            let _ = out.write_all(body.as_bytes());
            i32::from(rep.failed)
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
