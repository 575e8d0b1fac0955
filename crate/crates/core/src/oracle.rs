//! Brute-force reference implementations for differential testing.
//!
//! Nothing here calls into the chain, recursion or closure engines. Only the
//! scalar max/min and the expression and system data types are shared.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{Atom, FtfExpr};
use crate::membership::{snorm_max, tnorm_min, Assignment, Membership};
use crate::system::SystemRegistry;

/// Instance-size caps for oracle-backed checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_power: u32,
    pub max_terms: usize,
}

pub const LIMITS: OracleLimits = OracleLimits {
    max_vertices: 8,
    max_power: 3,
    max_terms: 4,
};

/// Undirected weighted edges keyed by `(min, max)` vertex index.
pub type EdgeMap = BTreeMap<(usize, usize), Membership>;

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Max over simple `from → to` paths of the min edge weight; 0 if no path,
/// 1 for `from == to`.
pub fn oracle_path_enum(n: usize, edges: &EdgeMap, from: usize, to: usize) -> Membership {
    oracle_path_enum_within(n, edges, from, to, n)
}

/// As [`oracle_path_enum`], but intermediate vertices must be `< limit`.
pub fn oracle_path_enum_within(
    n: usize,
    edges: &EdgeMap,
    from: usize,
    to: usize,
    limit: usize,
) -> Membership {
    if from == to {
        return Membership::ONE;
    }
    let mut visited = vec![false; n];
    visited[from] = true;
    walk(n, edges, from, to, limit, Membership::ONE, &mut visited)
}

fn walk(
    n: usize,
    edges: &EdgeMap,
    here: usize,
    to: usize,
    limit: usize,
    acc: Membership,
    visited: &mut [bool],
) -> Membership {
    let mut best = Membership::ZERO;
    for next in 0..n {
        if visited[next] {
            continue;
        }
        let Some(&w) = edges.get(&key(here, next)) else {
            continue;
        };
        let along = tnorm_min(acc, w);
        if next == to {
            best = snorm_max(best, along);
        } else if next < limit {
            visited[next] = true;
            best = snorm_max(best, walk(n, edges, next, to, limit, along, visited));
            visited[next] = false;
        }
    }
    best
}

/// Off-diagonal entries of a square matrix as an edge map (zeros dropped).
pub fn edges_of_matrix(rows: &[Vec<Membership>]) -> EdgeMap {
    let mut edges = EdgeMap::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i < j && v > Membership::ZERO {
                edges.insert((i, j), v);
            }
        }
    }
    edges
}

/// All-pairs [`oracle_path_enum_within`] over a square matrix's edges.
pub fn oracle_closure_within(rows: &[Vec<Membership>], limit: usize) -> Vec<Vec<Membership>> {
    let n = rows.len();
    let edges = edges_of_matrix(rows);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        rows[i][i]
                    } else {
                        oracle_path_enum_within(n, &edges, i, j, limit)
                    }
                })
                .collect()
        })
        .collect()
}

/// Value of `name` with at most `budget` nested calls, by direct recursion
/// on the definition.
pub fn oracle_unroll_eval(
    r: &SystemRegistry,
    name: &str,
    sigma: &Assignment,
    budget: u32,
) -> Result<Membership> {
    let s = r.get(name)?;
    let mut edges = EdgeMap::new();
    for e in s.edges() {
        let v = match &e.label {
            Atom::Var(v) => sigma.require(v)?,
            Atom::Call { target, count } => {
                let c = (*count).min(budget);
                if c == 0 {
                    r.get(target)?;
                    Membership::ZERO
                } else {
                    oracle_unroll_eval(r, target, sigma, c - 1)?
                }
            }
        };
        if v > Membership::ZERO {
            edges.insert(key(e.u, e.v), v);
        }
    }
    Ok(oracle_path_enum(
        s.vertex_count(),
        &edges,
        s.input(),
        s.output(),
    ))
}

/// Resolved edge map of `name` at top level: each call at its declared count.
pub fn oracle_resolved_edges(
    r: &SystemRegistry,
    name: &str,
    sigma: &Assignment,
) -> Result<EdgeMap> {
    let s = r.get(name)?;
    let mut edges = EdgeMap::new();
    for e in s.edges() {
        let v = match &e.label {
            Atom::Var(v) => sigma.require(v)?,
            Atom::Call { target, count } if *count == 0 => {
                r.get(target)?;
                Membership::ZERO
            }
            Atom::Call { target, count } => oracle_unroll_eval(r, target, sigma, count - 1)?,
        };
        edges.insert(key(e.u, e.v), v);
    }
    Ok(edges)
}

/// Top-level value of `name`: path enumeration on the resolved graph.
pub fn oracle_system_eval(
    r: &SystemRegistry,
    name: &str,
    sigma: &Assignment,
) -> Result<Membership> {
    let s = r.get(name)?;
    let edges = oracle_resolved_edges(r, name, sigma)?;
    Ok(oracle_path_enum(
        s.vertex_count(),
        &edges,
        s.input(),
        s.output(),
    ))
}

fn term_min(e: &FtfExpr, t: usize, sigma: &Assignment) -> Result<Membership> {
    let mut acc = Membership::ONE;
    for a in e.terms()[t].atoms() {
        match a {
            Atom::Var(v) => acc = tnorm_min(acc, sigma.require(v)?),
            Atom::Call { .. } => {
                return Err(Error::InvalidArgument(
                    "power oracle needs a call-free expression".into(),
                ))
            }
        }
    }
    Ok(acc)
}

/// `e^k` evaluated by listing every composition `n_1 + … + n_t = k` and
/// taking the min over the atoms of each repeated term.
pub fn oracle_power_eval(e: &FtfExpr, k: u32, sigma: &Assignment) -> Result<Membership> {
    if k == 0 || k > LIMITS.max_power {
        return Err(Error::InvalidArgument(format!(
            "power oracle supports k in 1..={}",
            LIMITS.max_power
        )));
    }
    let t = e.len();
    let mins: Vec<Membership> = (0..t)
        .map(|i| term_min(e, i, sigma))
        .collect::<Result<_>>()?;
    let mut best = Membership::ZERO;
    let mut parts = vec![0u32; t];
    compositions(k, 0, &mut parts, &mut |parts| {
        let mut v = Membership::ONE;
        for (i, &n) in parts.iter().enumerate() {
            for _ in 0..n {
                v = tnorm_min(v, mins[i]);
            }
        }
        best = snorm_max(best, v);
    });
    Ok(best)
}

fn compositions(left: u32, i: usize, parts: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if i + 1 >= parts.len() {
        if let Some(last) = parts.last_mut() {
            *last = left;
            f(parts);
        }
        return;
    }
    for n in 0..=left {
        parts[i] = n;
        compositions(left - n, i + 1, parts, f);
    }
}

/// Every composition of `k` into `t` parts, in the order the loops above
/// produce them.
pub fn oracle_compositions(k: u32, t: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut parts = vec![0u32; t];
    compositions(k, 0, &mut parts, &mut |p| out.push(p.to_vec()));
    out
}
