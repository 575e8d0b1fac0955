//! Differential suites: engine results against the brute-force oracles on
//! seeded random instances.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::chain::derive_ftf;
use crate::closure::{
    matrix_power, transmission, warshall_closure, warshall_closure_observed, NumericMatrix,
};
use crate::error::Result;
use crate::expr::{multinomial_coefficient, multinomial_expand, FtfExpr};
use crate::fixtures::{builtin_fixtures_with, FixtureCounts, PSI1_REC};
use crate::membership::Assignment;
use crate::oracle::{
    edges_of_matrix, oracle_closure_within, oracle_compositions, oracle_path_enum,
    oracle_power_eval, oracle_resolved_edges, oracle_system_eval, LIMITS,
};
use crate::random::{
    random_assignment, random_expr, random_layered_registry, random_reflexive_symmetric,
    random_self_recursive, trial_rng, var_pool, SystemShape, TrialRng,
};
use crate::recursion::{eval_system, resolve_call, symbolic_expand};
use crate::system::SystemRegistry;
use crate::trace::trace_eval;

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: u64,
    pub passed: u64,
    /// Up to five failing trials, lowest index first.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "ok" } else { "FAIL" };
        write!(
            f,
            "{:<12} {}/{} {status}",
            self.name, self.passed, self.trials
        )
    }
}

/// A named property checked once per trial.
pub struct Suite {
    pub name: &'static str,
    /// Trial count used when the caller does not override it.
    pub default_trials: u64,
    /// Deterministic suites ignore trial overrides.
    pub fixed: bool,
    check: fn(&mut TrialRng, u64) -> std::result::Result<(), String>,
}

pub const SHAPE_TRIANGLE: SystemShape = SystemShape {
    max_vertices: 7,
    max_edges: 12,
    vars: 5,
    call_percent: 30,
    max_count: 3,
};

/// Small enough that unmemoised tracing and full expansion stay cheap.
pub const SHAPE_SMALL: SystemShape = SystemShape {
    max_vertices: 5,
    max_edges: 6,
    vars: 4,
    call_percent: 35,
    max_count: 2,
};

pub const SHAPE_SELF: SystemShape = SystemShape {
    max_vertices: 6,
    max_edges: 9,
    vars: 4,
    call_percent: 35,
    max_count: 3,
};

fn fail<T: fmt::Debug>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    Err(format!("{what}: got {got:?}, expected {want:?}"))
}

fn eq<T: PartialEq + fmt::Debug>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        fail(what, got, want)
    }
}

fn err(e: crate::error::Error) -> String {
    e.to_string()
}

fn registry_vars(r: &SystemRegistry, root: &str) -> Result<Vec<String>> {
    Ok(r.reachable_vars(root)?.into_iter().collect())
}

fn layered(rng: &mut TrialRng, shape: &SystemShape) -> (SystemRegistry, String, Assignment) {
    let systems = rng_range(rng, 1, 3);
    let r = random_layered_registry(rng, systems, shape);
    let root = format!("s{}", systems - 1);
    let vars = var_pool(shape.vars);
    let sigma = random_assignment(rng, vars.iter().map(String::as_str));
    (r, root, sigma)
}

fn rng_range(rng: &mut TrialRng, lo: usize, hi: usize) -> usize {
    use rand::Rng;
    rng.random_range(lo..=hi)
}

fn triangle(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let (r, root, sigma) = layered(rng, &SHAPE_TRIANGLE);
    let v = eval_system(&r, &root, &sigma).map_err(err)?;
    let t = transmission(&r, &root, &sigma).map_err(err)?;
    let o = oracle_system_eval(&r, &root, &sigma).map_err(err)?;
    eq("eval_system vs transmission", v, t)?;
    eq("eval_system vs oracle", v, o)
}

fn call_free(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let shape = SystemShape {
        call_percent: 0,
        ..SHAPE_TRIANGLE
    };
    let r = random_layered_registry(rng, 1, &shape);
    let s = r.get("s0").map_err(err)?;
    let sigma = random_assignment(rng, var_pool(shape.vars).iter().map(String::as_str));
    let ftf = derive_ftf(s);
    let sym = ftf.eval_with(&sigma).map_err(err)?;
    let edges = oracle_resolved_edges(&r, "s0", &sigma).map_err(err)?;
    let o = oracle_path_enum(s.vertex_count(), &edges, s.input(), s.output());
    eq("derive_ftf value vs oracle", sym, o)?;
    eq(
        "canonical form value",
        ftf.canonical().eval_with(&sigma).map_err(err)?,
        o,
    )?;
    eq(
        "simplified form value",
        ftf.simplified().eval_with(&sigma).map_err(err)?,
        o,
    )
}

#[allow(clippy::needless_range_loop)]
fn closure(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let rows = random_reflexive_symmetric(rng, LIMITS.max_vertices);
    let n = rows.len();
    let m = NumericMatrix::numbered(rows.clone()).map_err(err)?;
    let c = warshall_closure(&m);
    let edges = edges_of_matrix(&rows);
    for i in 0..n {
        for j in 0..n {
            let want = if i == j {
                rows[i][i]
            } else {
                oracle_path_enum(n, &edges, i, j)
            };
            eq(&format!("closure entry ({i}, {j})"), c.get(i, j), want)?;
        }
    }
    let p = matrix_power(&m, (n as u32 - 1).max(1)).map_err(err)?;
    eq("closure vs power n-1", c.rows(), p.rows())
}

fn power(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let vars = var_pool(5);
    let e = random_expr(rng, &vars, LIMITS.max_terms, 4);
    let base_powers: Vec<FtfExpr> = (2..=3)
        .map(|k| e.power(k))
        .collect::<Result<_>>()
        .map_err(err)?;
    for _ in 0..10 {
        let sigma = random_assignment(rng, vars.iter().map(String::as_str));
        let base = e.eval_with(&sigma).map_err(err)?;
        for (k, p) in (2..=3).zip(&base_powers) {
            eq(
                &format!("e^{k} vs e"),
                p.eval_with(&sigma).map_err(err)?,
                base,
            )?;
            eq(
                &format!("oracle e^{k} vs e"),
                oracle_power_eval(&e, k, &sigma).map_err(err)?,
                base,
            )?;
        }
    }
    Ok(())
}

fn factorial(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

/// Trial `t` covers `k = t / 4 + 1`, `t % 4 + 1` terms.
fn multinomial(_: &mut TrialRng, t: u64) -> std::result::Result<(), String> {
    let k = (t / 4 + 1) as u32;
    let terms = (t % 4 + 1) as usize;
    let comps = oracle_compositions(k, terms);
    let vars = var_pool(terms);
    let e: FtfExpr = vars
        .iter()
        .map(|v| FtfExpr::var(v.clone()).terms()[0].clone())
        .collect();
    let entries = multinomial_expand(&e, k).map_err(err)?;
    eq("composition count", entries.len(), comps.len())?;
    let mut total = BigUint::from(0u32);
    for c in &comps {
        let want = factorial(k) / c.iter().map(|&n| factorial(n)).product::<u64>();
        let got = multinomial_coefficient(k, c).map_err(err)?;
        eq(
            &format!("coefficient {c:?}"),
            got.clone(),
            BigUint::from(want),
        )?;
        if !entries
            .iter()
            .any(|en| &en.composition == c && en.coefficient == got)
        {
            return Err(format!("composition {c:?} missing from expansion"));
        }
        total += got;
    }
    eq(
        "coefficient sum",
        total,
        BigUint::from((terms as u64).pow(k)),
    )
}

fn laws_on(
    r: &SystemRegistry,
    root: &str,
    sigma: &Assignment,
    self_only: bool,
) -> std::result::Result<(), String> {
    let kmax = r.max_declared_count();
    let top = (kmax + 3).max(6);
    let values: Vec<_> = (0..=top)
        .map(|k| resolve_call(r, root, k, sigma))
        .collect::<Result<_>>()
        .map_err(err)?;
    for k in 0..top as usize {
        if values[k] > values[k + 1] {
            return fail(&format!("monotonicity at k={k}"), values[k], values[k + 1]);
        }
    }
    for k in (kmax + 1) as usize..=top as usize {
        eq(
            &format!("stabilization at k={k}"),
            values[k],
            values[(kmax + 1) as usize],
        )?;
    }
    eq(
        "top-level value",
        eval_system(r, root, sigma).map_err(err)?,
        values[kmax as usize],
    )?;
    if self_only {
        for (k, v) in values.iter().enumerate() {
            eq(&format!("self-call collapse at k={k}"), *v, values[0])?;
        }
    }
    Ok(())
}

fn recursion_laws(rng: &mut TrialRng, t: u64) -> std::result::Result<(), String> {
    if t == 0 {
        // the built-in self-recursive fixture at several declared counts
        for rec in 0..=3 {
            let r = builtin_fixtures_with(FixtureCounts {
                rec,
                ..Default::default()
            });
            let vars = registry_vars(&r, PSI1_REC).map_err(err)?;
            let sigma = random_assignment(rng, vars.iter().map(String::as_str));
            laws_on(&r, PSI1_REC, &sigma, true)?;
        }
        return Ok(());
    }
    let r = random_self_recursive(rng, &SHAPE_SELF);
    let sigma = random_assignment(rng, var_pool(SHAPE_SELF.vars).iter().map(String::as_str));
    laws_on(&r, "self_rec", &sigma, true)?;
    let (r, root, sigma) = layered(rng, &SHAPE_TRIANGLE);
    laws_on(&r, &root, &sigma, false)
}

fn invariant(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let rows = random_reflexive_symmetric(rng, 6);
    let m = NumericMatrix::numbered(rows.clone()).map_err(err)?;
    let mut outcome = Ok(());
    warshall_closure_observed(&m, |k, rho| {
        if outcome.is_err() {
            return;
        }
        let want = oracle_closure_within(&rows, k + 1);
        outcome = eq(&format!("after pivot {k}"), rho.rows(), want);
    });
    outcome
}

fn expansion(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let (r, root, sigma) = layered(rng, &SHAPE_SMALL);
    let e = symbolic_expand(&r, &root).map_err(err)?;
    let v = eval_system(&r, &root, &sigma).map_err(err)?;
    eq("expansion value", e.eval_with(&sigma).map_err(err)?, v)?;
    eq(
        "simplified expansion value",
        e.simplified().eval_with(&sigma).map_err(err)?,
        v,
    )
}

fn trace(rng: &mut TrialRng, _: u64) -> std::result::Result<(), String> {
    let (r, root, sigma) = layered(rng, &SHAPE_SMALL);
    let t = trace_eval(&r, &root, &sigma).map_err(err)?;
    if !t.is_balanced() {
        return Err("unbalanced trace".into());
    }
    eq(
        "trace value",
        t.value,
        eval_system(&r, &root, &sigma).map_err(err)?,
    )?;
    eq(
        "trace expansion",
        t.expansion,
        symbolic_expand(&r, &root).map_err(err)?,
    )
}

pub const SUITES: [Suite; 9] = [
    Suite {
        name: "triangle",
        default_trials: 500,
        fixed: false,
        check: triangle,
    },
    Suite {
        name: "call-free",
        default_trials: 500,
        fixed: false,
        check: call_free,
    },
    Suite {
        name: "closure",
        default_trials: 500,
        fixed: false,
        check: closure,
    },
    Suite {
        name: "power",
        default_trials: 100,
        fixed: false,
        check: power,
    },
    Suite {
        name: "multinomial",
        default_trials: 16,
        fixed: true,
        check: multinomial,
    },
    Suite {
        name: "recursion",
        default_trials: 101,
        fixed: false,
        check: recursion_laws,
    },
    Suite {
        name: "invariant",
        default_trials: 50,
        fixed: false,
        check: invariant,
    },
    Suite {
        name: "expansion",
        default_trials: 200,
        fixed: false,
        check: expansion,
    },
    Suite {
        name: "trace",
        default_trials: 200,
        fixed: false,
        check: trace,
    },
];

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs `suite` for `trials` trials (default when `None`) from `seed`.
pub fn run_suite(suite: &Suite, seed: u64, trials: Option<u64>) -> SuiteReport {
    let trials = if suite.fixed {
        suite.default_trials
    } else {
        trials.unwrap_or(suite.default_trials)
    };
    let tag = SUITES
        .iter()
        .position(|s| s.name == suite.name)
        .unwrap_or(0) as u64;
    let results: Vec<(u64, std::result::Result<(), String>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, tag, t);
            (t, (suite.check)(&mut rng, t))
        })
        .collect();
    let passed = results.iter().filter(|(_, r)| r.is_ok()).count() as u64;
    let failures = results
        .into_iter()
        .filter_map(|(t, r)| r.err().map(|e| format!("trial {t}: {e}")))
        .take(5)
        .collect();
    SuiteReport {
        name: suite.name,
        trials,
        passed,
        failures,
    }
}

pub fn run_all(seed: u64, trials: Option<u64>) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, seed, trials)).collect()
}
