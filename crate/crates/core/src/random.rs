//! Seeded random instances for differential checks.
//!
//! Every generator draws from a SplitMix64 stream. Trial `t` of a suite uses
//! its own stream derived from `(seed, suite, t)`, so results do not depend
//! on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::expr::{Atom, FtfExpr, Term};
use crate::membership::{Assignment, Membership};
use crate::system::{FuzzySystem, SystemRegistry};

pub type TrialRng = SplitMix64;

/// Stream for trial `trial` of suite `suite`.
pub fn trial_rng(seed: u64, suite: u64, trial: u64) -> TrialRng {
    let mut mix = SplitMix64::seed_from_u64(seed ^ suite.wrapping_mul(0xA076_1D64_78BD_642F));
    let base: u64 = mix.random();
    SplitMix64::seed_from_u64(base.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// One of `1/20, 2/20, …, 20/20`.
pub fn grid_membership(rng: &mut TrialRng) -> Membership {
    let i: u32 = rng.random_range(1..=20);
    Membership::new(f64::from(i) / 20.0).expect("grid value in [0, 1]")
}

/// Grid values for `vars`.
pub fn random_assignment<'a>(
    rng: &mut TrialRng,
    vars: impl IntoIterator<Item = &'a str>,
) -> Assignment {
    let mut sigma = Assignment::new();
    for v in vars {
        sigma.set(v, grid_membership(rng));
    }
    sigma
}

/// Variable names `v0 .. v{n-1}`.
pub fn var_pool(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Call-free expression with `1..=max_terms` terms of `1..=max_atoms` atoms.
pub fn random_expr(
    rng: &mut TrialRng,
    vars: &[String],
    max_terms: usize,
    max_atoms: usize,
) -> FtfExpr {
    let terms = rng.random_range(1..=max_terms);
    (0..terms)
        .map(|_| {
            let atoms = rng.random_range(1..=max_atoms);
            (0..atoms)
                .map(|_| Atom::var(vars[rng.random_range(0..vars.len())].clone()))
                .collect::<Term>()
        })
        .collect()
}

/// Shape of generated systems.
#[derive(Debug, Clone, Copy)]
pub struct SystemShape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub vars: usize,
    /// Percent chance that an edge is a call, when a target is available.
    pub call_percent: u32,
    pub max_count: u32,
}

fn random_edges(rng: &mut TrialRng, shape: &SystemShape) -> (usize, Vec<(usize, usize)>) {
    let n = rng.random_range(2..=shape.max_vertices);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    // Fisher-Yates, then keep a prefix
    for i in (1..pairs.len()).rev() {
        let j = rng.random_range(0..=i);
        pairs.swap(i, j);
    }
    let m = rng.random_range(1..=shape.max_edges.min(pairs.len()));
    pairs.truncate(m);
    (n, pairs)
}

fn build(name: &str, n: usize, edges: Vec<(usize, usize, Atom)>) -> FuzzySystem {
    let vertices: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let edges = edges
        .into_iter()
        .map(|(u, v, a)| (vertices[u].clone(), vertices[v].clone(), a))
        .collect();
    FuzzySystem::new(name, vertices, "n0", "n1", edges).expect("generated system is well formed")
}

/// `systems` systems `s0, s1, …`; an edge of `s_i` may call any `s_j` with
/// `j < i`. The last system is the root.
pub fn random_layered_registry(
    rng: &mut TrialRng,
    systems: usize,
    shape: &SystemShape,
) -> SystemRegistry {
    let vars = var_pool(shape.vars);
    let mut r = SystemRegistry::new();
    for i in 0..systems {
        let (n, pairs) = random_edges(rng, shape);
        let edges = pairs
            .into_iter()
            .map(|(u, v)| {
                let label = if i > 0 && rng.random_range(0..100) < shape.call_percent {
                    let target = rng.random_range(0..i);
                    Atom::call(format!("s{target}"), rng.random_range(0..=shape.max_count))
                } else {
                    Atom::var(vars[rng.random_range(0..vars.len())].clone())
                };
                (u, v, label)
            })
            .collect();
        r.insert(build(&format!("s{i}"), n, edges))
            .expect("fresh names");
    }
    r
}

/// A single system `self_rec` whose calls all target itself.
pub fn random_self_recursive(rng: &mut TrialRng, shape: &SystemShape) -> SystemRegistry {
    let vars = var_pool(shape.vars);
    let (n, pairs) = random_edges(rng, shape);
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let label = if rng.random_range(0..100) < shape.call_percent {
                Atom::call("self_rec", rng.random_range(0..=shape.max_count))
            } else {
                Atom::var(vars[rng.random_range(0..vars.len())].clone())
            };
            (u, v, label)
        })
        .collect();
    let mut r = SystemRegistry::new();
    r.insert(build("self_rec", n, edges))
        .expect("fresh registry");
    r
}

/// Reflexive symmetric matrix of size `1..=max_n`; each off-diagonal pair is
/// 0 with probability 1/3, otherwise a grid value.
#[allow(clippy::needless_range_loop)]
pub fn random_reflexive_symmetric(rng: &mut TrialRng, max_n: usize) -> Vec<Vec<Membership>> {
    let n = rng.random_range(1..=max_n);
    let mut rows = vec![vec![Membership::ZERO; n]; n];
    for i in 0..n {
        rows[i][i] = Membership::ONE;
        for j in i + 1..n {
            let v = if rng.random_range(0..3) == 0 {
                Membership::ZERO
            } else {
                grid_membership(rng)
            };
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(42, 1, 7).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| trial_rng(42, 1, 7).random()).collect();
        assert_eq!(a, b);
        let c: u64 = trial_rng(42, 1, 8).random();
        let d: u64 = trial_rng(42, 2, 7).random();
        assert_ne!(a[0], c);
        assert_ne!(a[0], d);
    }

    #[test]
    fn splitmix_reference_value() {
        let mut rng = SplitMix64::seed_from_u64(42);
        let first: u64 = rng.random();
        assert_eq!(first, 13679457532755275413);
    }

    #[test]
    fn generators_respect_shape() {
        let shape = SystemShape {
            max_vertices: 7,
            max_edges: 12,
            vars: 5,
            call_percent: 30,
            max_count: 3,
        };
        for t in 0..50 {
            let mut rng = trial_rng(1, 0, t);
            let r = random_layered_registry(&mut rng, 3, &shape);
            assert!(r
                .validate()
                .iter()
                .all(|d| d.severity != crate::system::Severity::Error));
            for s in r.iter() {
                assert!(s.vertex_count() <= 7 && s.edges().len() <= 12);
            }
            assert!(r.max_declared_count() <= 3);
            let m = random_reflexive_symmetric(&mut rng, 8);
            assert!(m.len() <= 8);
            let e = random_expr(&mut rng, &var_pool(4), 4, 4);
            assert!((1..=4).contains(&e.len()));
        }
    }
}
