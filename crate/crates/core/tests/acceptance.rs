//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails or runs over its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fulliso::castcalc::{check_closed, reverse, type_of, TypeError};
use fulliso::elaborate::{infer_elab, simulate_pair, ElabError};
use fulliso::equiv::{equal, synthesize_cast};
use fulliso::eval::{evaluate, steps, EvalOutcome, Mode, Rule};
use fulliso::harness::{equality_suite, generate_well_typed, subtyping_suite, GenMode};
use fulliso::kernel::{parse_term, parse_type, Term, TermCtx, Type};
use fulliso::subtype::{decompose, infer_elab_sub, sub_equi, sub_iso_closed, type_of_sub};

const TERMS: u64 = 10_000;
const MAX_SIZE: u64 = 12;

fn ty(s: &str) -> Type {
    parse_type(s).expect("type parses")
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn equality_golden() -> Outcome {
    let (a, b) = (ty("mu a. Int -> a"), ty("mu a. Int -> Int -> a"));
    ensure(equal(&a, &b).map_err(|e| e.to_string())?, || "equalE returned false".into())?;
    let c = synthesize_cast(&a, &b).map_err(|e| e.to_string())?;
    ensure(check_closed(&c, &a, &b), || format!("cast {c} does not check A ~> B"))?;
    ensure(check_closed(&reverse(&c), &b, &a), || "reversed cast does not check B ~> A".into())?;
    Ok(format!("cast {c}"))
}

fn push_rule_trace() -> Outcome {
    let a = "mu a. Int -> a";
    let r = format!("mu r. r -> {a}");
    let half = format!("\\s: {r}. cast<fold[{a}]>(\\z: Int. cast<unfold[{r}]>(s) s)");
    let v = format!("\\y: Int. \\z: Int. ({half}) cast<fold[{r}]>({half})");
    let e = parse_term(&format!("cast<id -> fold[{a}]>({v}) 1")).map_err(|e| e.to_string())?;
    type_of(&TermCtx::new(), &e).map_err(|e| e.to_string())?;
    let out = evaluate(&e, Mode::Iso, 1_000).map_err(|e| e.to_string())?;
    let trace = out.trace();
    ensure(out.is_value(), || format!("ended as {}", out.kind()))?;
    ensure(trace.steps.first().map(|s| s.rule) == Some(Rule::CastArr), || {
        "first rule is not Red-cast-arr".into()
    })?;
    ensure(trace.steps.get(1).map(|s| s.rule) == Some(Rule::CastId), || {
        "second rule is not Red-cast-id".into()
    })?;
    let plain = e.erase();
    let mut chain = vec![plain.clone()];
    let mut cur = plain;
    while let Some(s) = fulliso::eval::step_equi(&cur).map_err(|e| e.to_string())? {
        cur = s.term;
        chain.push(cur.clone());
    }
    for t in trace.terms() {
        let er = t.erase();
        ensure(chain.contains(&er), || format!("erasure {er} is not on the equi chain"))?;
    }
    Ok(format!("{} steps, value reached", trace.len()))
}

fn equality_oracle(max_size: usize) -> (Outcome, Outcome) {
    let r = equality_suite(max_size);
    let kinds = |k: &[&str]| r.findings.iter().filter(|f| k.contains(&f.kind.as_str())).count();
    let eq_bad = kinds(&["equal", "cast"]);
    let rev_bad = kinds(&["reverse", "involution"]);
    let show = |n: usize| {
        r.findings
            .iter()
            .take(n)
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    };
    let three = if eq_bad == 0 {
        Ok(format!(
            "{} types, {} pairs, {} equal, all casts validated",
            r.types, r.pairs, r.equal_pairs
        ))
    } else {
        Err(format!("{eq_bad} disagreements: {}", show(3)))
    };
    let four = if rev_bad == 0 {
        Ok(format!("{} casts reversed and re-reversed", r.casts_checked))
    } else {
        Err(format!("{rev_bad} failures: {}", show(3)))
    };
    (three, four)
}

/// Progress and preservation on generated iso terms. `sub` switches to the
/// subtyping judgement, where a step may refine the type to an iso-subtype.
fn soundness(mode: GenMode) -> Outcome {
    let sub = mode.subtyping();
    let ctx = TermCtx::new();
    let type_in = |e: &Term| -> Result<Type, TypeError> {
        if sub {
            type_of_sub(&ctx, e)
        } else {
            type_of(&ctx, e)
        }
    };
    let (mut values, mut exhausted, mut total_steps) = (0, 0, 0usize);
    for seed in 0..TERMS {
        let size = 1 + (seed % MAX_SIZE) as usize;
        let e = generate_well_typed(seed, size, mode);
        let mut prev = type_in(&e).map_err(|err| format!("seed {seed}: generated term ill-typed: {err}"))?;
        let mut it = steps(&e, Mode::Iso);
        let mut n = 0;
        for s in it.by_ref().take(10_000) {
            n += 1;
            let t = type_in(&s.term).map_err(|err| format!("seed {seed} step {n}: {err}"))?;
            let kept = if sub { sub_iso_closed(&t, &prev) } else { t == prev };
            ensure(kept, || format!("seed {seed} step {n}: type {prev} became {t}"))?;
            prev = t;
        }
        total_steps += n;
        let last = it.current();
        if last.is_value() {
            values += 1;
        } else if fulliso::eval::step_iso(last).is_some() {
            exhausted += 1;
        } else {
            return Err(format!("seed {seed}: stuck at {last}"));
        }
    }
    Ok(format!(
        "{TERMS} terms, 0 stuck, {values} values, {exhausted} out of fuel, {total_steps} steps typed"
    ))
}

fn elaborate_in(mode: GenMode, e: &Term) -> Result<(Type, Term), ElabError> {
    if mode.subtyping() {
        infer_elab_sub(&TermCtx::new(), e)
    } else {
        infer_elab(&TermCtx::new(), e)
    }
}

fn round_trip(mode: GenMode) -> Outcome {
    let ctx = TermCtx::new();
    for seed in 0..TERMS {
        let size = 1 + (seed % MAX_SIZE) as usize;
        let e = generate_well_typed(seed, size, mode);
        let (a, e2) = elaborate_in(mode, &e).map_err(|err| format!("seed {seed}: {err} :: {e}"))?;
        ensure(e2.erase() == e, || format!("seed {seed}: erasure differs for {e}"))?;
        let back = if mode.subtyping() {
            type_of_sub(&ctx, &e2)
        } else {
            type_of(&ctx, &e2)
        }
        .map_err(|err| format!("seed {seed}: elaboration ill-typed: {err}"))?;
        ensure(back == a, || format!("seed {seed}: elaborated at {a}, typed at {back}"))?;
    }
    Ok(format!("{TERMS} terms elaborated, erased back and retyped"))
}

fn behaviour(mode: GenMode) -> Outcome {
    let (mut compared, mut skipped) = (0, 0);
    for seed in 0..TERMS {
        let size = 1 + (seed % MAX_SIZE) as usize;
        let e = generate_well_typed(seed, size, mode);
        let out = evaluate(&e, Mode::Equi, 500).map_err(|err| err.to_string())?;
        let EvalOutcome::Value(v, _) = out else {
            skipped += 1;
            continue;
        };
        let (_, iso) = elaborate_in(mode, &e).map_err(|err| format!("seed {seed}: {err}"))?;
        let report =
            simulate_pair(&e, &iso, 500, 50_000).map_err(|err| format!("seed {seed}: {err}"))?;
        ensure(report.completed, || format!("seed {seed}: simulation incomplete"))?;
        let iv = report.iso.last();
        ensure(iv.is_value() && iv.erase() == v, || {
            format!("seed {seed}: iso value {iv} does not erase to {v}")
        })?;
        compared += 1;
    }
    Ok(format!("{compared} terms matched step for step, {skipped} without an equi value in 500 steps"))
}

fn subtyping_properties(max_size: usize) -> Outcome {
    let r = subtyping_suite(max_size);
    if r.findings.is_empty() {
        Ok(format!(
            "{} types, {} pairs ({} <=i, {} <=e), {} transitivity triples",
            r.types, r.pairs, r.iso_related, r.equi_related, r.triples_checked
        ))
    } else {
        let shown: Vec<String> = r.findings.iter().take(3).map(|f| f.to_string()).collect();
        Err(format!("{} findings: {}", r.findings.len(), shown.join("; ")))
    }
}

fn decomposition_golden() -> Outcome {
    let (a, b) = (ty("Int -> (mu a. Top -> a)"), ty("mu a. Int -> Top -> a"));
    ensure(sub_equi(&a, &b).map_err(|e| e.to_string())?, || "subEqui returned false".into())?;
    let d = decompose(&a, &b, 2).map_err(|e| e.to_string())?;
    ensure(equal(&a, &d.c1).unwrap_or(false), || "A and C1 differ".into())?;
    ensure(sub_iso_closed(&d.c1, &d.c2), || "C1 is not an iso-subtype of C2".into())?;
    ensure(equal(&d.c2, &b).unwrap_or(false), || "C2 and B differ".into())?;
    ensure(d.c1 == ty("Int -> Top -> (mu a. Top -> Top -> a)"), || format!("C1 = {}", d.c1))?;
    ensure(d.c2 == ty("Int -> Top -> (mu a. Int -> Top -> a)"), || format!("C2 = {}", d.c2))?;
    Ok(format!("C1 = {}, C2 = {}", d.c1, d.c2))
}

fn subtyping_mode() -> Outcome {
    let a = soundness(GenMode::IsoSub)?;
    let b = round_trip(GenMode::EquiSub)?;
    let c = behaviour(GenMode::EquiSub)?;
    Ok(format!("soundness: {a} | round trip: {b} | behaviour: {c}"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, limit: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let out = match out {
            Ok(msg) if took > limit => Err(format!("{msg} — took {took:.1?}, limit {limit:?}")),
            other => other,
        };
        match out {
            Ok(msg) => println!("PASS [{id}] {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{id}] {name} ({took:.2?}): {msg}");
            }
        }
    };
    let secs = Duration::from_secs;

    report(1, "equality golden pair", secs(1), &mut equality_golden);
    report(2, "push-rule trace", secs(1), &mut push_rule_trace);
    let mut pair = None;
    report(3, "equalE vs bisimulation oracle, size <= 7", secs(300), &mut || {
        let (three, four) = equality_oracle(7);
        pair = Some(four);
        three
    });
    report(4, "cast reversal and involution", secs(300), &mut || {
        pair.take().unwrap_or_else(|| Err("criterion 3 did not run".into()))
    });
    report(5, "progress and preservation", secs(600), &mut || soundness(GenMode::Iso));
    report(6, "round-tripping of elaboration", secs(600), &mut || round_trip(GenMode::Equi));
    report(7, "behavioural equivalence (terminating half)", secs(600), &mut || {
        behaviour(GenMode::Equi)
    });
    report(8, "subtyping properties and oracle, size <= 6 with Top", secs(300), &mut || {
        subtyping_properties(6)
    });
    report(9, "subtyping decomposition golden", secs(1), &mut decomposition_golden);
    report(10, "soundness and equivalence with subtyping", secs(900), &mut subtyping_mode);

    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
