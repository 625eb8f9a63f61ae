//! `fulliso` — batch front end for the full iso-recursive types toolkit.
//!
//! Exit codes: 0 success, 1 the judgement asked about is false (or
//! evaluation ran out of fuel), 2 errors and ill-formed input.

use std::fmt::Display;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fulliso::castcalc::{type_of, TypeError};
use fulliso::elaborate::{check_elab, infer_elab, simulate_pair, SimError};
use fulliso::equiv::{self, head_normalize};
use fulliso::eval::{evaluate, EvalOutcome, Mode};
use fulliso::harness::{equality_suite, subtyping_suite, write_findings};
use fulliso::kernel::{parse_cast, parse_term, parse_type, CastDisplay, Term, TermCtx, TermDisplay, Type};
use fulliso::subtype::{
    check_elab_sub, decompose, decompose_synchronized, infer_elab_sub, sub_equi, sub_iso_closed,
    type_of_sub, SubError,
};

#[derive(Parser)]
#[command(name = "fulliso", version, about = "Full iso-recursive types: typing, casts, evaluation, elaboration")]
struct Cli {
    /// Machine-readable output: one tab-separated judgement per line.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Print the declared source/target pairs on `fix` casts.
    #[arg(long, global = true)]
    show_annotations: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypingMode {
    Iso,
    Equi,
    IsoSub,
    EquiSub,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Iso,
    Equi,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and print in canonical form (a term unless --type/--cast).
    Parse {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "cast")]
        r#type: bool,
        #[arg(long)]
        cast: bool,
    },
    /// Type a term.
    Typecheck {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "iso")]
        mode: TypingMode,
        /// Also decide whether the term has (or, with subtyping, fits) this type.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Evaluate a term.
    Eval {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "iso")]
        mode: EvalMode,
        #[arg(long, default_value_t = fulliso::eval::DEFAULT_FUEL)]
        fuel: usize,
        /// Print every step as `<rule> |- <term>`.
        #[arg(long)]
        trace: bool,
    },
    /// Elaborate a cast-free term into the cast calculus.
    Elaborate {
        file: Option<PathBuf>,
        /// Allow subtyping (Top, iso-subsumption, decomposition).
        #[arg(long)]
        sub: bool,
        /// Elaborate against this type.
        #[arg(long)]
        check: Option<String>,
        /// Retype the output and check that it erases back to the input.
        #[arg(long)]
        verify: bool,
        /// Also print the head-normal form of the type.
        #[arg(long)]
        head_normal: bool,
    },
    /// Remove all casts from a term.
    Erase { file: Option<PathBuf> },
    /// Decide equi-recursive equality of two types.
    Equal {
        lhs: String,
        rhs: String,
        /// Print the cast witnessing the equality.
        #[arg(long)]
        emit_cast: bool,
    },
    /// Decide subtyping between two types.
    Subtype {
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value = "equi")]
        mode: EvalMode,
        /// Split an equi-recursive subtyping into equality, iso-subtyping, equality.
        #[arg(long)]
        decompose: bool,
        #[arg(long, default_value_t = fulliso::subtype::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Run a cast-free term and its elaboration in lockstep.
    Simulate {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000)]
        fuel: usize,
        /// Elaborate with subtyping.
        #[arg(long)]
        sub: bool,
    },
    /// Differential checks of the deciders against the tree oracles.
    Selftest {
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        /// Write disagreements here, one per line.
        #[arg(long)]
        findings: Option<PathBuf>,
    },
}

enum Failure {
    False,
    Error(String),
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

type Res = Result<(), Failure>;

struct Out {
    porcelain: bool,
    annotated: bool,
}

impl Out {
    fn term(&self, e: &Term) -> String {
        if self.annotated {
            TermDisplay::annotated(e).to_string()
        } else {
            e.to_string()
        }
    }

    fn cast(&self, c: &fulliso::Cast) -> String {
        if self.annotated {
            CastDisplay::annotated(c).to_string()
        } else {
            c.to_string()
        }
    }

    /// Human form `human`, porcelain form as tab-separated `fields`.
    fn line(&self, human: impl Display, fields: &[&str]) {
        if self.porcelain {
            println!("{}", fields.join("\t"));
        } else {
            println!("{human}");
        }
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String, Failure> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::Error(format!("{}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_term(file: &Option<PathBuf>) -> Result<Term, Failure> {
    Ok(parse_term(&read_input(file)?)?)
}

fn closed_type(src: &str) -> Result<Type, Failure> {
    let t = parse_type(src)?;
    if !t.is_closed() {
        return Err(Failure::Error(format!("type is not closed: {t}")));
    }
    Ok(t)
}

fn verdict(out: &Out, holds: bool, fields: &[&str]) -> Res {
    let mut all: Vec<&str> = fields.to_vec();
    let word = if holds { "true" } else { "false" };
    all.push(word);
    out.line(word, &all);
    if holds {
        Ok(())
    } else {
        Err(Failure::False)
    }
}

fn typecheck(out: &Out, file: &Option<PathBuf>, mode: TypingMode, expect: &Option<String>) -> Res {
    let e = read_term(file)?;
    let ctx = TermCtx::new();
    let (t, name) = match mode {
        TypingMode::Iso => (type_of(&ctx, &e).map_err(type_err)?, "iso"),
        TypingMode::IsoSub => (type_of_sub(&ctx, &e).map_err(type_err)?, "iso-sub"),
        TypingMode::Equi => (infer_elab(&ctx, &e)?.0, "equi"),
        TypingMode::EquiSub => (infer_elab_sub(&ctx, &e)?.0, "equi-sub"),
    };
    let shown = t.to_string();
    out.line(&shown, &["type", name, &shown]);
    let Some(expect) = expect else { return Ok(()) };
    let want = closed_type(expect)?;
    let holds = match mode {
        TypingMode::Iso => t == want,
        TypingMode::IsoSub => sub_iso_closed(&t, &want),
        TypingMode::Equi => equiv::equal(&t, &want)?,
        TypingMode::EquiSub => sub_equi(&t, &want)?,
    };
    let ws = want.to_string();
    verdict(out, holds, &["expect", &ws])
}

fn type_err(e: TypeError) -> Failure {
    Failure::Error(e.to_string())
}

fn eval(out: &Out, file: &Option<PathBuf>, mode: EvalMode, fuel: usize, trace: bool) -> Res {
    let e = read_term(file)?;
    let m = match mode {
        EvalMode::Iso => Mode::Iso,
        EvalMode::Equi => Mode::Equi,
    };
    let result = evaluate(&e, m, fuel)?;
    if trace {
        print!("{}", result.trace().render(out.annotated));
    }
    if m == Mode::Iso && result.trace().steps.iter().any(|s| s.mismatched_elim) {
        eprintln!("warning: an unfold cancelled a fold with a different annotation");
    }
    let term = out.term(result.term());
    let steps = result.trace().len().to_string();
    match &result {
        EvalOutcome::Value(..) => {
            out.line(&term, &["value", &steps, &term]);
            Ok(())
        }
        EvalOutcome::FuelExhausted(..) => {
            out.line(
                format!("fuel exhausted after {steps} steps at {term}"),
                &["fuel-exhausted", &steps, &term],
            );
            Err(Failure::False)
        }
        EvalOutcome::Stuck(..) => {
            out.line(format!("stuck after {steps} steps at {term}"), &["stuck", &steps, &term]);
            Err(Failure::Error("evaluation is stuck".into()))
        }
    }
}

fn elaborate(out: &Out, file: &Option<PathBuf>, sub: bool, check: &Option<String>, verify: bool, head: bool) -> Res {
    let e = read_term(file)?;
    let ctx = TermCtx::new();
    let (t, e2) = match check {
        Some(src) => {
            let want = closed_type(src)?;
            let e2 = if sub {
                check_elab_sub(&ctx, &e, &want)?
            } else {
                check_elab(&ctx, &e, &want)?
            };
            (want, e2)
        }
        None if sub => infer_elab_sub(&ctx, &e)?,
        None => infer_elab(&ctx, &e)?,
    };
    let (term, ts) = (out.term(&e2), t.to_string());
    out.line(format!("{term}\n  : {ts}"), &["elaborated", &term, &ts]);
    if head {
        let hn = head_normalize(&t)?.head.to_string();
        out.line(format!("  head-normal: {hn}"), &["head-normal", &hn]);
    }
    if verify {
        let back = if sub { type_of_sub(&ctx, &e2) } else { type_of(&ctx, &e2) }.map_err(type_err)?;
        if e2.erase() != e {
            return Err(Failure::Error("elaboration does not erase to the input".into()));
        }
        let fits = if check.is_some() && sub { sub_iso_closed(&back, &t) } else { back == t };
        if !fits {
            return Err(Failure::Error(format!("elaboration retypes at {back}, not {t}")));
        }
        out.line("verified", &["verified", "true"]);
    }
    Ok(())
}

fn equal(out: &Out, lhs: &str, rhs: &str, emit: bool) -> Res {
    let (a, b) = (closed_type(lhs)?, closed_type(rhs)?);
    let (sa, sb) = (a.to_string(), b.to_string());
    match equiv::synthesize_cast(&a, &b) {
        Ok(c) => {
            verdict(out, true, &["equal", &sa, &sb])?;
            if emit {
                let cs = out.cast(&c);
                out.line(&cs, &["cast", &cs]);
            }
            Ok(())
        }
        Err(equiv::EquivError::NotEqual { .. }) => verdict(out, false, &["equal", &sa, &sb]),
        Err(e) => Err(e.into()),
    }
}

fn subtype(out: &Out, lhs: &str, rhs: &str, mode: EvalMode, split: bool, depth: usize) -> Res {
    let (a, b) = (closed_type(lhs)?, closed_type(rhs)?);
    let (sa, sb) = (a.to_string(), b.to_string());
    let holds = match mode {
        EvalMode::Iso => sub_iso_closed(&a, &b),
        EvalMode::Equi => sub_equi(&a, &b)?,
    };
    let name = match mode {
        EvalMode::Iso => "iso",
        EvalMode::Equi => "equi",
    };
    if !split || !holds {
        return verdict(out, holds, &["subtype", name, &sa, &sb]);
    }
    verdict(out, true, &["subtype", name, &sa, &sb])?;
    let d = match decompose(&a, &b, depth) {
        Ok(d) => d,
        Err(SubError::SearchExhausted { .. }) => {
            eprintln!("no decomposition within depth {depth}; using the synchronized construction");
            decompose_synchronized(&a, &b)?
        }
        Err(e) => return Err(e.into()),
    };
    let (c1, c2) = (d.c1.to_string(), d.c2.to_string());
    let (ci, co) = (out.cast(&d.cast_in), out.cast(&d.cast_out));
    out.line(
        format!("C1 = {c1}\nC2 = {c2}\ncast in  = {ci}\ncast out = {co}"),
        &["decomposition", &c1, &c2, &ci, &co],
    );
    Ok(())
}

fn simulate(out: &Out, file: &Option<PathBuf>, fuel: usize, sub: bool) -> Res {
    let e = read_term(file)?;
    let ctx = TermCtx::new();
    let (_, iso) = if sub { infer_elab_sub(&ctx, &e)? } else { infer_elab(&ctx, &e)? };
    match simulate_pair(&e, &iso, fuel, fuel.saturating_mul(100)) {
        Ok(r) => {
            let (es, is) = (r.equi.len().to_string(), r.iso.len().to_string());
            let status = if r.completed { "ok" } else { "ok-partial" };
            out.line(
                format!(
                    "{status}: {es} equi steps matched by {is} iso steps{}",
                    if r.completed { ", both reached values" } else { " (equi fuel ran out)" }
                ),
                &["simulate", status, &es, &is],
            );
            Ok(())
        }
        Err(err @ (SimError::Mismatch { .. } | SimError::NoMatchWithinFuel { .. } | SimError::IsoStuck { .. })) => {
            out.line(format!("mismatch: {err}"), &["simulate", "mismatch", &err.to_string()]);
            Err(Failure::False)
        }
        Err(err) => Err(err.into()),
    }
}

fn selftest(out: &Out, max_size: usize, findings: &Option<PathBuf>) -> Res {
    let eq = equality_suite(max_size);
    out.line(
        format!(
            "equality: {} types, {} pairs, {} equal, {} findings",
            eq.types,
            eq.pairs,
            eq.equal_pairs,
            eq.findings.len()
        ),
        &["selftest", "equality", &eq.pairs.to_string(), &eq.findings.len().to_string()],
    );
    let sub = subtyping_suite(max_size);
    out.line(
        format!(
            "subtyping: {} types, {} pairs, {} transitivity triples, {} findings",
            sub.types,
            sub.pairs,
            sub.triples_checked,
            sub.findings.len()
        ),
        &["selftest", "subtyping", &sub.pairs.to_string(), &sub.findings.len().to_string()],
    );
    let all: Vec<_> = eq.findings.into_iter().chain(sub.findings).collect();
    for f in &all {
        eprintln!("{f}");
    }
    if let Some(path) = findings {
        write_findings(path, &all)?;
    }
    if all.is_empty() {
        Ok(())
    } else {
        Err(Failure::False)
    }
}

fn run(cli: &Cli) -> Res {
    let out = Out {
        porcelain: cli.porcelain,
        annotated: cli.show_annotations,
    };
    match &cli.command {
        Command::Parse { file, r#type, cast } => {
            let src = read_input(file)?;
            let shown = if *r#type {
                parse_type(&src)?.to_string()
            } else if *cast {
                out.cast(&parse_cast(&src)?)
            } else {
                out.term(&parse_term(&src)?)
            };
            let kind = if *r#type { "type" } else if *cast { "cast" } else { "term" };
            out.line(&shown, &[kind, &shown]);
            Ok(())
        }
        Command::Typecheck { file, mode, expect } => typecheck(&out, file, *mode, expect),
        Command::Eval {
            file,
            mode,
            fuel,
            trace,
        } => eval(&out, file, *mode, *fuel, *trace),
        Command::Elaborate {
            file,
            sub,
            check,
            verify,
            head_normal,
        } => elaborate(&out, file, *sub, check, *verify, *head_normal),
        Command::Erase { file } => {
            let erased = read_term(file)?.erase().to_string();
            out.line(&erased, &["term", &erased]);
            Ok(())
        }
        Command::Equal { lhs, rhs, emit_cast } => equal(&out, lhs, rhs, *emit_cast),
        Command::Subtype {
            lhs,
            rhs,
            mode,
            decompose,
            depth,
        } => subtype(&out, lhs, rhs, *mode, *decompose, *depth),
        Command::Simulate { file, fuel, sub } => simulate(&out, file, *fuel, *sub),
        Command::Selftest { max_size, findings } => selftest(&out, *max_size, findings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::False) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
