use fuzzchain::chain::derive_ftf;
use fuzzchain::closure::{matrix_power, maxmin_matmul, warshall_closure, NumericMatrix};
use fuzzchain::expr::{parse_expr, Notation};
use fuzzchain::membership::{snorm_max, tnorm_min};
use fuzzchain::oracle::{edges_of_matrix, oracle_path_enum, oracle_power_eval, oracle_system_eval};
use fuzzchain::random::{random_layered_registry, random_self_recursive, trial_rng, SystemShape};
use fuzzchain::recursion::{eval_system, resolve_call, symbolic_expand};
use fuzzchain::system::{format_registry, parse_registry};
use fuzzchain::trace::trace_eval;
use fuzzchain::{Assignment, Atom, FtfExpr, Membership, Term};
use proptest::prelude::*;

const VARS: [&str; 5] = ["a", "b", "c", "d", "e"];

fn grid() -> impl Strategy<Value = Membership> {
    (0u32..=20).prop_map(|i| Membership::new(f64::from(i) / 20.0).unwrap())
}

fn unit() -> impl Strategy<Value = Membership> {
    (0.0f64..=1.0).prop_map(|v| Membership::new(v).unwrap())
}

fn expr() -> impl Strategy<Value = FtfExpr> {
    prop::collection::vec(prop::collection::vec(0..VARS.len(), 1..=4), 0..=5).prop_map(|terms| {
        terms
            .into_iter()
            .map(|t| t.into_iter().map(|i| Atom::var(VARS[i])).collect::<Term>())
            .collect()
    })
}

fn sigma() -> impl Strategy<Value = Assignment> {
    prop::collection::vec(unit(), VARS.len()).prop_map(|vs| {
        VARS.iter()
            .zip(vs)
            .map(|(n, v)| (n.to_string(), v))
            .collect()
    })
}

fn matrix(max_n: usize) -> impl Strategy<Value = Vec<Vec<Membership>>> {
    (1..=max_n).prop_flat_map(sized_matrix)
}

fn sized_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<Membership>>> {
    {
        prop::collection::vec(grid(), n * n).prop_map(move |cells| {
            let mut rows = vec![vec![Membership::ZERO; n]; n];
            for i in 0..n {
                rows[i][i] = Membership::ONE;
                for j in i + 1..n {
                    rows[i][j] = cells[i * n + j];
                    rows[j][i] = cells[i * n + j];
                }
            }
            rows
        })
    }
}

fn general_matrix(n: usize) -> impl Strategy<Value = NumericMatrix> {
    prop::collection::vec(grid(), n * n).prop_map(move |cells| {
        NumericMatrix::numbered(cells.chunks(n).map(<[_]>::to_vec).collect()).unwrap()
    })
}

const SHAPE: SystemShape = SystemShape {
    max_vertices: 5,
    max_edges: 7,
    vars: 4,
    call_percent: 40,
    max_count: 3,
};

fn pool_sigma(seed: u64) -> Assignment {
    (0..SHAPE.vars)
        .map(|i| {
            let v = ((seed >> (i * 5)) % 21) as f64 / 20.0;
            (format!("v{i}"), Membership::new(v).unwrap())
        })
        .collect()
}

proptest! {
    #[test]
    fn semiring_laws(a in unit(), b in unit(), c in unit()) {
        prop_assert_eq!(snorm_max(a, b), snorm_max(b, a));
        prop_assert_eq!(tnorm_min(a, b), tnorm_min(b, a));
        prop_assert_eq!(snorm_max(a, snorm_max(b, c)), snorm_max(snorm_max(a, b), c));
        prop_assert_eq!(tnorm_min(a, tnorm_min(b, c)), tnorm_min(tnorm_min(a, b), c));
        prop_assert_eq!(tnorm_min(a, snorm_max(b, c)), snorm_max(tnorm_min(a, b), tnorm_min(a, c)));
        prop_assert_eq!(snorm_max(a, Membership::ZERO), a);
        prop_assert_eq!(tnorm_min(a, Membership::ONE), a);
        prop_assert_eq!(snorm_max(a, a), a);
        // no new values
        prop_assert!(tnorm_min(a, b) == a || tnorm_min(a, b) == b);
    }

    #[test]
    fn canonical_forms(e in expr(), s in sigma()) {
        let c = e.canonical();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(e.simplified().simplified(), e.simplified());
        let v = e.eval_with(&s).unwrap();
        prop_assert_eq!(c.eval_with(&s).unwrap(), v);
        prop_assert_eq!(e.simplified().eval_with(&s).unwrap(), v);
        for mode in [Notation::Raw, Notation::Canonical] {
            let back = parse_expr(&e.render(mode)).unwrap();
            prop_assert_eq!(back.canonical(), c.clone());
        }
    }

    #[test]
    fn union_and_concat_evaluate_to_max_and_min(e in expr(), f in expr(), s in sigma()) {
        let (a, b) = (e.eval_with(&s).unwrap(), f.eval_with(&s).unwrap());
        prop_assert_eq!(e.union(&f).eval_with(&s).unwrap(), snorm_max(a, b));
        prop_assert_eq!(e.concat(&f).eval_with(&s).unwrap(), tnorm_min(a, b));
        prop_assert!(e.union(&f).equivalent(&f.union(&e)));
        prop_assert!(e.concat(&f).equivalent(&f.concat(&e)));
    }

    #[test]
    fn powers_collapse(e in expr(), s in sigma(), k in 1u32..=3) {
        let v = e.eval_with(&s).unwrap();
        prop_assert_eq!(e.power(k).unwrap().eval_with(&s).unwrap(), v);
        prop_assert_eq!(oracle_power_eval(&e, k, &s).unwrap(), v);
    }

    #[test]
    fn closure_properties(rows in matrix(7)) {
        let m = NumericMatrix::numbered(rows.clone()).unwrap();
        let c = warshall_closure(&m);
        prop_assert_eq!(warshall_closure(&c), c.clone());
        prop_assert!(c.dominates(&m));
        prop_assert!(c.is_symmetric() && c.has_unit_diagonal());
        prop_assert_eq!(maxmin_matmul(&c, &c).unwrap(), c.clone());
        let n = rows.len();
        prop_assert_eq!(matrix_power(&m, (n as u32).saturating_sub(1).max(1)).unwrap(), c.clone());
        let edges = edges_of_matrix(&rows);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert_eq!(c.get(i, j), oracle_path_enum(n, &edges, i, j));
                }
            }
        }
    }

    #[test]
    fn matmul_is_associative(
        (a, b, c) in (1usize..=4).prop_flat_map(|n| (general_matrix(n), general_matrix(n), general_matrix(n)))
    ) {
        let left = maxmin_matmul(&maxmin_matmul(&a, &b).unwrap(), &c).unwrap();
        let right = maxmin_matmul(&a, &maxmin_matmul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn deep_systems_agree(seed in any::<u64>(), systems in 1usize..=3) {
        let mut rng = trial_rng(seed, 99, 0);
        let r = random_layered_registry(&mut rng, systems, &SHAPE);
        let root = format!("s{}", systems - 1);
        let s = pool_sigma(seed);
        let v = eval_system(&r, &root, &s).unwrap();
        prop_assert_eq!(oracle_system_eval(&r, &root, &s).unwrap(), v);
        prop_assert_eq!(symbolic_expand(&r, &root).unwrap().eval_with(&s).unwrap(), v);
        let t = trace_eval(&r, &root, &s).unwrap();
        prop_assert!(t.is_balanced());
        prop_assert_eq!(t.value, v);
        // call-free roots: the symbolic FTF agrees too
        if !r.get(&root).unwrap().has_calls() {
            prop_assert_eq!(derive_ftf(r.get(&root).unwrap()).eval_with(&s).unwrap(), v);
        }
        prop_assert_eq!(parse_registry(&format_registry(&r)).unwrap(), r);
    }

    #[test]
    fn budget_laws(seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 98, 0);
        let r = random_layered_registry(&mut rng, 3, &SHAPE);
        let s = pool_sigma(seed);
        let kmax = r.max_declared_count();
        let vals: Vec<Membership> = (0..=kmax + 2).map(|k| resolve_call(&r, "s2", k, &s).unwrap()).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(vals[kmax as usize], vals[vals.len() - 1]);

        let r = random_self_recursive(&mut rng, &SHAPE);
        let base = resolve_call(&r, "self_rec", 0, &s).unwrap();
        for k in 1..=4 {
            prop_assert_eq!(resolve_call(&r, "self_rec", k, &s).unwrap(), base);
        }
    }
}
