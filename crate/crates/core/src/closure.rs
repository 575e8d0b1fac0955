//! Numeric max-min matrix algebra and Warshall-style closure.
//!
//! Recursive entries of a connection matrix are resolved before the closure
//! runs (see [`resolve_matrix`]). A call's value depends only on the registry,
//! the call count and the bindings, never on closure state, so resolving up
//! front is equivalent to resolving when the pivot loop first reaches it.

use crate::error::{Error, Result};
use crate::expr::Atom;
use crate::membership::{snorm_max, tnorm_min, Assignment, Membership};
use crate::recursion::Evaluator;
use crate::system::{render_table, FuzzySystem, SystemRegistry};

/// Square matrix of memberships over labelled rows/columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericMatrix {
    labels: Vec<String>,
    data: Vec<Membership>,
}

impl NumericMatrix {
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<Membership>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rows.len(),
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NonSquare {
                    rows: n,
                    len: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(NumericMatrix { labels, data })
    }

    /// Unit diagonal, zero elsewhere: the two-sided unit of [`maxmin_matmul`].
    pub fn identity(labels: Vec<String>) -> Self {
        let n = labels.len();
        let mut data = vec![Membership::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Membership::ONE;
        }
        NumericMatrix { labels, data }
    }

    /// Labels `0, 1, …, n-1`.
    pub fn numbered(rows: Vec<Vec<Membership>>) -> Result<Self> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::from_rows(labels, rows)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Membership {
        self.data[i * self.size() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Membership) {
        let n = self.size();
        self.data[i * n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Membership>> {
        let n = self.size();
        self.data
            .chunks(n.max(1))
            .take(n)
            .map(<[_]>::to_vec)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.size()).all(|i| self.get(i, i) == Membership::ONE)
    }

    /// Pointwise `self >= other`.
    pub fn dominates(&self, other: &NumericMatrix) -> bool {
        self.size() == other.size() && self.data.iter().zip(&other.data).all(|(a, b)| a >= b)
    }

    /// Header row of labels; entries in shortest round-trip decimal, right-aligned.
    pub fn render(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect())
            .collect();
        render_table(&self.labels, &rows)
    }
}

/// `(a ∘ b)(i, j) = max_t min(a(i, t), b(t, j))`.
pub fn maxmin_matmul(a: &NumericMatrix, b: &NumericMatrix) -> Result<NumericMatrix> {
    if a.size() != b.size() {
        return Err(Error::DimensionMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    let n = a.size();
    let mut out = NumericMatrix {
        labels: a.labels.clone(),
        data: vec![Membership::ZERO; n * n],
    };
    for i in 0..n {
        for t in 0..n {
            let ait = a.get(i, t);
            if ait == Membership::ZERO {
                continue;
            }
            for j in 0..n {
                let v = tnorm_min(ait, b.get(t, j));
                let cur = out.get(i, j);
                out.set(i, j, snorm_max(cur, v));
            }
        }
    }
    Ok(out)
}

/// `p`-fold max-min product of `m` with itself.
pub fn matrix_power(m: &NumericMatrix, p: u32) -> Result<NumericMatrix> {
    if p == 0 {
        return Err(Error::UndefinedPower);
    }
    let mut acc = m.clone();
    for _ in 1..p {
        acc = maxmin_matmul(&acc, m)?;
    }
    Ok(acc)
}

/// Max-min transitive closure: pivots `K = 0..n`, relaxing
/// `ρ(I, J) ← max(ρ(I, J), min(ρ(I, K), ρ(K, J)))`.
pub fn warshall_closure(m: &NumericMatrix) -> NumericMatrix {
    warshall_closure_observed(m, |_, _| {})
}

/// As [`warshall_closure`], calling `observe(k, matrix)` after pivot `k`.
///
/// After pivot `k`, entry `(i, j)` is the best max-min value over paths whose
/// intermediate vertices all lie in `0..=k`.
pub fn warshall_closure_observed<F>(m: &NumericMatrix, mut observe: F) -> NumericMatrix
where
    F: FnMut(usize, &NumericMatrix),
{
    let mut rho = m.clone();
    let n = rho.size();
    for k in 0..n {
        for i in 0..n {
            let rik = rho.get(i, k);
            // min(0, _) = 0 never improves an entry
            if rik == Membership::ZERO {
                continue;
            }
            for j in 0..n {
                let via = tnorm_min(rik, rho.get(k, j));
                if via > rho.get(i, j) {
                    rho.set(i, j, via);
                }
            }
        }
        observe(k, &rho);
    }
    rho
}

/// Numeric connection matrix of `s`: variables from `sigma`, calls resolved
/// through the recursion engine at their declared count.
pub fn resolve_matrix(
    r: &SystemRegistry,
    s: &FuzzySystem,
    sigma: &Assignment,
) -> Result<NumericMatrix> {
    let mut ev = Evaluator::for_system(r, s, sigma)?;
    resolve_with(&mut ev, s, sigma)
}

fn resolve_with(
    ev: &mut Evaluator<'_>,
    s: &FuzzySystem,
    sigma: &Assignment,
) -> Result<NumericMatrix> {
    let mut m = NumericMatrix::identity(s.vertices().to_vec());
    for e in s.edges() {
        let v = match &e.label {
            Atom::Var(name) => sigma.require(name)?,
            Atom::Call { target, count } => ev.call_value(target, *count)?,
        };
        m.set(e.u, e.v, v);
        m.set(e.v, e.u, v);
    }
    Ok(m)
}

/// Closure entry from the input to the output terminal of system `name`.
pub fn transmission(r: &SystemRegistry, name: &str, sigma: &Assignment) -> Result<Membership> {
    let s = r.get(name)?;
    let m = resolve_matrix(r, s, sigma)?;
    Ok(warshall_closure(&m).get(s.input(), s.output()))
}
