//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use fuzzchain::chain::derive_ftf;
use fuzzchain::check::{find_suite, run_suite};
use fuzzchain::expr::{parse_expr, Notation};
use fuzzchain::fixtures::{builtin_fixtures, builtin_fixtures_with, FixtureCounts, PHI, PSI1_REC};
use fuzzchain::recursion::symbolic_expand;
use fuzzchain::system::{connection_matrix, Cell};
use fuzzchain::trace::trace_eval;
use fuzzchain::{Assignment, Atom};

/// Every comparison below is exact: max and min only ever return one of
/// their arguments, so no rounding can enter.
const TOLERANCE: f64 = 0.0;

/// Seed for the randomised criteria.
const SEED: u64 = 42;

const TRIALS_TRIANGLE: u64 = 500;
const TRIALS_CLOSURE: u64 = 500;
const TRIALS_POWER: u64 = 100;
/// psi1_rec plus 100 random self-recursive systems.
const TRIALS_RECURSION: u64 = 101;
const TRIALS_INVARIANT: u64 = 50;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(name: &str, trials: u64) -> Verdict {
    let s = find_suite(name).ok_or_else(|| format!("no suite {name}"))?;
    let rep = run_suite(s, SEED, Some(trials));
    if rep.ok() {
        Ok(format!("{name} {}/{}", rep.passed, rep.trials))
    } else {
        Err(format!("{rep}: {}", rep.failures.join("; ")))
    }
}

fn fixture_fidelity() -> Verdict {
    let r = builtin_fixtures();
    let published = [
        ("psi1", "x*z + x*xbar*w + y*w + y*xbar*z"),
        ("psi2", "xbar*z + xbar*x*w + y*w + y*x*z"),
        ("psi3", "xbar*z + xbar*w*x + y*x + y*w*z"),
        ("psi4", "xbar*w + xbar*y*z + x*z + x*y*w"),
        ("psi5", "xbar*y + xbar*w*z + x*z + x*w*y"),
    ];
    for (name, text) in published {
        let got = derive_ftf(r.get(name).map_err(|e| e.to_string())?);
        let want = parse_expr(text).map_err(|e| e.to_string())?;
        ensure(
            got.canonical() == want.canonical(),
            format!("{name}: {got}"),
        )?;
    }

    for k in [[1, 1, 1, 1, 1], [1, 2, 3, 4, 5]] {
        let r = builtin_fixtures_with(FixtureCounts { phi: k, rec: 2 });
        let got = derive_ftf(r.get(PHI).map_err(|e| e.to_string())?);
        let want = parse_expr(&format!(
            "psi2^{b}*psi4^{d} + psi2^{b}*psi1^{a}*psi5^{e} + psi3^{c}*psi1^{a}*psi4^{d} + psi3^{c}*psi5^{e}",
            a = k[0],
            b = k[1],
            c = k[2],
            d = k[3],
            e = k[4]
        ))
        .map_err(|e| e.to_string())?;
        ensure(
            got.canonical() == want.canonical(),
            format!("phi {k:?}: {got}"),
        )?;
    }

    let v = |s: &str| Cell::Label(Atom::var(s));
    let psi1_cells = [
        [Cell::One, Cell::Zero, v("y"), v("x")],
        [Cell::Zero, Cell::One, v("w"), v("z")],
        [v("y"), v("w"), Cell::One, v("xbar")],
        [v("x"), v("z"), v("xbar"), Cell::One],
    ];
    let m = connection_matrix(r.get("psi1").map_err(|e| e.to_string())?);
    ensure(m.vertices() == ["A", "B", "C", "D"], "psi1 vertex order")?;
    for (i, row) in psi1_cells.iter().enumerate() {
        ensure(m.row(i) == row, format!("psi1 matrix row {i}"))?;
    }

    for k1 in [1, 2, 4] {
        let r = builtin_fixtures_with(FixtureCounts {
            rec: k1,
            ..Default::default()
        });
        let call = Cell::Label(Atom::call(PSI1_REC, k1));
        let rec_cells = [
            [Cell::One, Cell::Zero, v("y"), v("x")],
            [Cell::Zero, Cell::One, v("w"), v("z")],
            [v("y"), v("w"), Cell::One, call.clone()],
            [v("x"), v("z"), call.clone(), Cell::One],
        ];
        let m = connection_matrix(r.get(PSI1_REC).map_err(|e| e.to_string())?);
        for (i, row) in rec_cells.iter().enumerate() {
            ensure(
                m.row(i) == row,
                format!("recursive matrix row {i}, k1={k1}"),
            )?;
        }
    }
    Ok("FTFs of psi1..psi5 and phi, psi1 matrix, recursive matrix".into())
}

fn nested_expansion() -> Verdict {
    let r = builtin_fixtures();
    let sigma = Assignment::from_pairs([("x", 0.3), ("y", 0.7), ("w", 0.6), ("z", 0.8)]);
    let t = trace_eval(&r, PSI1_REC, &sigma).map_err(|e| e.to_string())?;
    let text = t.render();
    ensure(
        text.contains("RETURN via=A-D-C-B expr=y(xxzw + xyww)z\n"),
        "trace lacks y(xxzw + xyww)z",
    )?;
    ensure(text.contains("expr=x(xz + yw)w"), "trace lacks x(xz + yw)w")?;

    // push z, push w, pop w, pop z in that order
    let wanted = [
        "PUSH return=z",
        "PUSH return=w",
        "POP return=w",
        "POP return=z",
    ];
    let lines: Vec<&str> = text.lines().collect();
    let mut at = 0;
    for l in &lines {
        if at < wanted.len() && *l == wanted[at] {
            at += 1;
        }
    }
    ensure(at == wanted.len(), "stack order z, w, w, z not found")?;

    let expanded = symbolic_expand(&r, PSI1_REC).map_err(|e| e.to_string())?;
    let raw = expanded.render(Notation::Raw);
    ensure(
        raw.contains("y*x*x*z*w*z + y*x*y*w*w*z"),
        format!("raw expansion lacks the y(xxzw + xyww)z terms: {raw}"),
    )?;
    ensure(
        expanded.eval_with(&sigma).map_err(|e| e.to_string())? == t.value,
        "expansion and trace disagree",
    )?;

    let base = builtin_fixtures_with(FixtureCounts {
        rec: 0,
        ..Default::default()
    });
    let e = symbolic_expand(&base, PSI1_REC).map_err(|e| e.to_string())?;
    ensure(
        e.render(Notation::Compact) == "xz + yw",
        format!("base case: {e}"),
    )?;

    for stem in ["trace_psi1_rec@sigma", "expand_psi1_rec_base"] {
        let (_, args) = common::CASES
            .iter()
            .find(|(s, _)| *s == stem)
            .ok_or_else(|| format!("no golden case {stem}"))?;
        common::check_case(stem, args)?;
    }
    let golden = std::fs::read_to_string(common::golden_path("trace_psi1_rec"))
        .map_err(|e| e.to_string())?;
    ensure(
        golden.contains("expr=y(xxzw + xyww)z"),
        "golden trace lacks the branch",
    )?;
    let base_golden = std::fs::read_to_string(common::golden_path("expand_psi1_rec_base"))
        .map_err(|e| e.to_string())?;
    ensure(base_golden == "xz + yw\n", "golden base case")?;
    Ok("y(xxzw + xyww)z in trace, base case xz + yw".into())
}

fn cli_determinism() -> Verdict {
    for (stem, args) in common::CASES {
        common::check_case(stem, args)?;
    }
    Ok(format!(
        "{} golden cases, two runs each",
        common::CASES.len()
    ))
}

fn main() {
    assert_eq!(TOLERANCE, 0.0);
    let criteria: [Criterion; 8] = [
        ("1 fixture fidelity", fixture_fidelity),
        ("2 nested expansion", nested_expansion),
        ("3 triangle equality", || suite("triangle", TRIALS_TRIANGLE)),
        ("4 closure correctness", || suite("closure", TRIALS_CLOSURE)),
        ("5 power collapse", || {
            let p = suite("power", TRIALS_POWER)?;
            let m = suite("multinomial", 0)?;
            Ok(format!("{p}, {m}"))
        }),
        ("6 recursion laws", || suite("recursion", TRIALS_RECURSION)),
        ("7 loop invariant", || suite("invariant", TRIALS_INVARIANT)),
        ("8 cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; tolerance {TOLERANCE})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
