//! Chains between the terminals of a system, symbolic FTF derivation, and
//! higher-degree chain spaces (chains whose items are themselves chains).

use crate::closure::{warshall_closure, NumericMatrix};
use crate::error::{Error, Result};
use crate::expr::{Atom, FtfExpr, Term};
use crate::membership::{tnorm_min, Membership};
use crate::system::FuzzySystem;

/// A simple path from the input to the output terminal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Chain {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edge indices into [`FuzzySystem::edges`], in traversal order.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn labels<'a>(&'a self, s: &'a FuzzySystem) -> impl Iterator<Item = &'a Atom> + 'a {
        self.edges.iter().map(move |&e| &s.edges()[e].label)
    }

    /// `A-D-C-B`
    pub fn render(&self, s: &FuzzySystem) -> String {
        self.vertices
            .iter()
            .map(|&v| s.vertices()[v].as_str())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// All simple input→output paths. Neighbours are explored in edge
/// declaration order, so the result is deterministic.
pub fn enumerate_chains(s: &FuzzySystem) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut on_path = vec![false; s.vertex_count()];
    let mut vertices = vec![s.input()];
    let mut edges = Vec::new();
    on_path[s.input()] = true;
    extend(s, &mut on_path, &mut vertices, &mut edges, &mut out);
    out
}

fn extend(
    s: &FuzzySystem,
    on_path: &mut [bool],
    vertices: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<Chain>,
) {
    let here = *vertices.last().expect("path starts at the input");
    if here == s.output() {
        out.push(Chain {
            vertices: vertices.clone(),
            edges: edges.clone(),
        });
        return;
    }
    for &(next, edge) in s.neighbors(here) {
        if on_path[next] {
            continue;
        }
        on_path[next] = true;
        vertices.push(next);
        edges.push(edge);
        extend(s, on_path, vertices, edges, out);
        edges.pop();
        vertices.pop();
        on_path[next] = false;
    }
}

/// Union over chains of the concatenation of their edge labels.
///
/// The result is raw: terms follow chain order and atoms follow traversal
/// order. Nothing is absorbed, matching the usual written form; compare
/// with [`FtfExpr::canonical`].
pub fn derive_ftf(s: &FuzzySystem) -> FtfExpr {
    enumerate_chains(s)
        .iter()
        .map(|c| c.labels(s).cloned().collect::<Term>())
        .collect()
}

/// Labels for a system's chains, usable as the items of a degree-2 space.
pub fn chain_items(s: &FuzzySystem) -> Vec<String> {
    enumerate_chains(s).iter().map(|c| c.render(s)).collect()
}

/// Items of some degree together with the transition grades between them.
///
/// At degree 1 the items are points and `mu` their pairwise grades; at
/// degree n the items are degree-(n−1) chains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpace {
    degree: u32,
    items: Vec<String>,
    mu: NumericMatrix,
}

impl ChainSpace {
    pub fn new(degree: u32, items: Vec<String>, mu: Vec<Vec<Membership>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument(
                "chain degree must be at least 1".into(),
            ));
        }
        if mu.len() != items.len() {
            return Err(Error::DimensionMismatch {
                left: items.len(),
                right: mu.len(),
            });
        }
        let mu = NumericMatrix::from_rows(items.clone(), mu)?;
        Ok(ChainSpace { degree, items, mu })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn mu(&self) -> &NumericMatrix {
        &self.mu
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: self.len(),
            })
        }
    }

    /// Min of the transition grades along `seq`.
    pub fn chain_value(&self, seq: &[usize]) -> Result<Membership> {
        if seq.len() < 2 {
            return Err(Error::InvalidArgument(
                "a chain needs at least two items".into(),
            ));
        }
        for &i in seq {
            self.check(i)?;
        }
        Ok(seq.windows(2).fold(Membership::ONE, |acc, w| {
            tnorm_min(acc, self.mu.get(w[0], w[1]))
        }))
    }

    /// Best chain value between two items: 1 for `from == to`, otherwise the
    /// max-min closure entry.
    pub fn best_chain_value(&self, from: usize, to: usize) -> Result<Membership> {
        self.check(from)?;
        self.check(to)?;
        if from == to {
            return Ok(Membership::ONE);
        }
        Ok(warshall_closure(&self.mu).get(from, to))
    }

    /// All repetition-free item sequences from `from` to `to` (length ≥ 2).
    /// Exponential; meant for small spaces and for building the next degree.
    pub fn simple_sequences(&self, from: usize, to: usize) -> Result<Vec<Vec<usize>>> {
        self.check(from)?;
        self.check(to)?;
        let mut out = Vec::new();
        if from == to {
            return Ok(out);
        }
        let mut seq = vec![from];
        let mut used = vec![false; self.len()];
        used[from] = true;
        self.sequences(to, &mut seq, &mut used, &mut out);
        Ok(out)
    }

    fn sequences(
        &self,
        to: usize,
        seq: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let here = *seq.last().expect("non-empty");
        if here == to {
            out.push(seq.clone());
            return;
        }
        for next in 0..self.len() {
            if used[next] {
                continue;
            }
            used[next] = true;
            seq.push(next);
            self.sequences(to, seq, used, out);
            seq.pop();
            used[next] = false;
        }
    }

    /// `f1-f3-f2` style label for a sequence of this space's items.
    pub fn sequence_label(&self, seq: &[usize]) -> String {
        let parts: Vec<String> = seq
            .iter()
            .map(|&i| {
                let item = &self.items[i];
                if item.contains('-') {
                    format!("({item})")
                } else {
                    item.clone()
                }
            })
            .collect();
        parts.join("-")
    }
}

/// A degree-`degree` space over degree-(degree−1) chains `items` with
/// transition grades `mu`.
pub fn lift_chain_space(
    items: Vec<String>,
    mu: Vec<Vec<Membership>>,
    degree: u32,
) -> Result<ChainSpace> {
    if degree < 2 {
        return Err(Error::InvalidArgument(
            "lifted chain spaces have degree at least 2".into(),
        ));
    }
    ChainSpace::new(degree, items, mu)
}
