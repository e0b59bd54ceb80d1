//! `tml`: command-line front end.
//!
//! Exit status: 0 for pass / true / OK, 1 for fail / false / rejection,
//! 2 for usage and load errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tml::format::{load_model, load_proof, load_signature, parse_model, parse_proof, LoadedModel};
use tml::hilbert::check_proof;
use tml::nonstandard::{extension_ns, satisfies_ns, NonStandardModel};
use tml::semantics::{enumerate_countermodel, extension_std, satisfies_std, Bounds, Frame, Valuation, World};
use tml::suite::{self, FuzzConfig, Report};
use tml::syntax::{check_formula, parse_formula, parse_signature, Formula, Rel, Signature, TypedTree};

#[derive(Parser)]
#[command(name = "tml", version, about = "Two-sorted term-modal logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    /// Human-readable report.
    Text,
    /// `CLAIM <label> <pass|fail> <cases> <seed>` lines and a final `RESULT`.
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check a formula (with --sig) or a .tms/.tmm/.tmn/.tmp file.
    CheckSyntax {
        /// Signature file for a formula argument.
        #[arg(long)]
        sig: Option<PathBuf>,
        /// A formula when --sig is given, otherwise a file.
        input: String,
    },
    /// Evaluate a formula at a world of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: String,
        /// Valuation, e.g. "x=a,y=o".
        #[arg(long, default_value = "")]
        val: String,
        /// Also print the denotation of every term argument of every atom.
        #[arg(long)]
        explain: bool,
        formula: String,
    },
    /// Search all standard models within bounds for a countermodel.
    Validity {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long, default_value_t = 2)]
        agents: usize,
        #[arg(long, default_value_t = 1)]
        objects: usize,
        #[arg(long, default_value_t = 2)]
        worlds: usize,
        /// Refuse searches estimated above this many models.
        #[arg(long, default_value_t = tml::semantics::DEFAULT_CEILING)]
        ceiling: u64,
        formula: String,
    },
    /// Check a .tmp proof file.
    CheckProof { file: PathBuf },
    /// Run the combined incompleteness report.
    Incompleteness {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the soundness and substitution fuzz suites.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(verdict)` on completed work, `Err` on usage or load problems.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::CheckSyntax { sig, input } => check_syntax(sig.as_deref(), &input),
        Command::Eval {
            model,
            world,
            val,
            explain,
            formula,
        } => eval(&model, &world, &val, explain, &formula),
        Command::Validity {
            sig,
            agents,
            objects,
            worlds,
            ceiling,
            formula,
        } => validity(&sig, Bounds::new(agents, objects, worlds), ceiling, &formula),
        Command::CheckProof { file } => {
            let pf = load_proof(&file)?;
            match check_proof(&pf.sig, &pf.proof) {
                Ok(()) => {
                    println!("OK");
                    Ok(true)
                }
                Err(e) => {
                    let src = pf.source_lines.get(e.line.wrapping_sub(1)).copied();
                    match src {
                        Some(s) => println!("{}:{s}: proof {e}", file.display()),
                        None => println!("{e}"),
                    }
                    Ok(false)
                }
            }
        }
        Command::Incompleteness { format } => Ok(emit(&suite::demonstrate_incompleteness(), format)),
        Command::Fuzz { seed, samples, format } => {
            let cfg = FuzzConfig::with_seed(seed, samples);
            cfg.validate().map_err(|e| anyhow!(e))?;
            let mut all = Report::new(format!("fuzz suites, seed {seed}"));
            all.children = vec![suite::fuzz_soundness(cfg), suite::fuzz_substitution_lemmas(cfg)];
            Ok(emit(&all, format))
        }
    }
}

fn emit(r: &Report, format: Format) -> bool {
    match format {
        Format::Text => print!("{}", r.render_text(false)),
        Format::Records => print!("{}", r.render_records()),
    }
    r.passed()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn check_syntax(sig: Option<&Path>, input: &str) -> Result<bool> {
    if let Some(sig_path) = sig {
        let sig = load_signature(sig_path)?;
        return Ok(
            match parse_formula(&sig, input).and_then(|phi| check_formula(&sig, &phi).map(|()| phi)) {
                Ok(phi) => {
                    print!(
                        "{}",
                        TypedTree {
                            sig: &sig,
                            formula: &phi
                        }
                    );
                    true
                }
                Err(e) => {
                    println!("{e}");
                    false
                }
            },
        );
    }
    let path = Path::new(input);
    let text = read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let resolve = move |rel: &str| std::fs::read_to_string(base.join(rel)).map_err(|e| format!("{rel}: {e}"));
    let header = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let outcome = if header.starts_with("model") {
        parse_model(&text, &resolve).map(|m| {
            let f = m.frame();
            format!(
                "{} model: {} agent(s), {} object(s), {} world(s)",
                m.kind(),
                f.agent_count(),
                f.object_count(),
                f.world_count()
            )
        })
    } else if header == "proof" {
        parse_proof(&text, &resolve).map(|pf| {
            let mut out = format!("proof with {} line(s)", pf.proof.lines.len());
            for (i, l) in pf.proof.lines.iter().enumerate() {
                out.push_str(&format!("\n{}: {} ; {}", i + 1, l.formula, l.justification));
            }
            out
        })
    } else {
        return Ok(match parse_signature(&text) {
            Ok(sig) => {
                print!("{sig}");
                true
            }
            Err(e) => {
                println!("{}: {e}", path.display());
                false
            }
        });
    };
    Ok(match outcome {
        Ok(summary) => {
            println!("{summary}");
            true
        }
        Err(e) => {
            println!("{}", e.in_file(path.display().to_string()));
            false
        }
    })
}

fn parse_valuation(text: &str, sig: &Signature, frame: &Frame) -> Result<Valuation> {
    let mut v = Valuation::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, e) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("valuation entry `{part}` is not of the form name=element"))?;
        let (x, e) = (x.trim(), e.trim());
        let d = frame
            .element(e)
            .ok_or_else(|| anyhow!("`{e}` is not an element of the model"))?;
        v.insert(x, d);
    }
    v.check(sig, frame)?;
    Ok(v)
}

fn eval(model: &Path, world: &str, val: &str, explain: bool, formula: &str) -> Result<bool> {
    let m = load_model(model)?;
    let (sig, frame) = (m.signature().clone(), m.frame().clone());
    let w = frame
        .world(world)
        .ok_or_else(|| anyhow!("`{world}` is not a world of {}", model.display()))?;
    let v = parse_valuation(val, &sig, &frame)?;
    let phi = parse_formula(&sig, formula)?;
    if let Some(x) = v.covers(&phi.free_vars()) {
        bail!("the valuation does not assign the free variable `{x}`");
    }
    let verdict = match &m {
        LoadedModel::Standard(sm) => satisfies_std(sm, w, &v, &phi)?,
        LoadedModel::NonStandard(n) => satisfies_ns(n, w, &v, &phi)?,
    };
    println!("{verdict}");
    if explain {
        explain_atoms(&m, w, &v, &phi);
    }
    Ok(verdict)
}

/// Prints each atom's argument denotations at `w`. Arguments with variables
/// bound inside the formula are skipped.
fn explain_atoms(m: &LoadedModel, w: World, v: &Valuation, phi: &Formula) {
    let frame = m.frame();
    phi.visit(&mut |sub| {
        let Formula::Atom(rel, args) = sub else { return };
        let atom = sub.to_string();
        let key = match (m, rel) {
            (LoadedModel::NonStandard(n), Rel::Eq) => Some(n.diag().clone()),
            (LoadedModel::NonStandard(n), Rel::Named(p)) => n.relation(p, w).cloned(),
            (LoadedModel::Standard(_), _) => None,
        };
        if let Some(k) = &key {
            println!("{atom}: key {}", k.render(frame));
        } else {
            println!("{atom}:");
        }
        for t in args {
            if v.covers(&t.vars()).is_some() {
                println!("  {t} ↦ (bound variable)");
                continue;
            }
            let value = match (m, &key) {
                (LoadedModel::NonStandard(n), Some(k)) => extension_ns(n, w, v, k, t),
                (LoadedModel::NonStandard(n), None) => ns_fallback(n, w, v, t),
                (LoadedModel::Standard(sm), _) => extension_std(sm, w, v, t),
            };
            match value {
                Ok(e) => println!("  {t} ↦ {}", frame.element_name(e)),
                Err(e) => println!("  {t} ↦ error: {e}"),
            }
        }
    });
}

fn ns_fallback(
    n: &NonStandardModel,
    w: World,
    v: &Valuation,
    t: &tml::syntax::Term,
) -> Result<tml::semantics::Element, tml::semantics::EvalError> {
    extension_ns(n, w, v, &tml::nonstandard::RelExtension::empty(), t)
}

fn validity(sig_path: &Path, bounds: Bounds, ceiling: u64, formula: &str) -> Result<bool> {
    let sig = load_signature(sig_path)?;
    let phi = parse_formula(&sig, formula)?;
    let outcome = enumerate_countermodel(&sig, &phi, bounds, ceiling)?;
    println!("{outcome}");
    match &outcome.countermodel {
        None => Ok(true),
        Some(cm) => {
            print!("{}", tml::format::write_standard(&cm.model));
            Ok(false)
        }
    }
}
