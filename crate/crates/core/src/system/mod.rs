//! Two-terminal fuzzy systems and the registry that resolves calls between them.

mod format;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::expr::{render_product, Atom, Piece};

pub use format::{format_registry, parse_registry};

/// An undirected labeled edge. `u`/`v` index into [`FuzzySystem::vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Atom,
}

/// A single-input, single-output fuzzy graph.
///
/// Vertex order and edge order are the declaration order; adjacency lists
/// follow edge order, which fixes the order chains are enumerated in.
#[derive(Debug, Clone)]
pub struct FuzzySystem {
    name: String,
    vertices: Vec<String>,
    input: usize,
    output: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for FuzzySystem {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.input == other.input
            && self.output == other.output
            && self.edges == other.edges
    }
}

impl Eq for FuzzySystem {}

fn pair_key(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl FuzzySystem {
    /// Builds a system from named vertices and `(u, v, label)` edges.
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<String>,
        input: &str,
        output: &str,
        edges: Vec<(String, String, Atom)>,
    ) -> Result<Self> {
        let name = name.into();
        let position = |v: &str| vertices.iter().position(|x| x == v);
        let terminal = |v: &str, which: &str| {
            position(v).ok_or_else(|| Error::InvalidTerminals {
                system: name.clone(),
                message: format!("{which} terminal {v} is not a vertex"),
            })
        };
        let input_ix = terminal(input, "input")?;
        let output_ix = terminal(output, "output")?;
        if input_ix == output_ix {
            return Err(Error::InvalidTerminals {
                system: name,
                message: format!("input and output terminal are both {input}"),
            });
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidArgument(format!(
                    "system `{name}`: vertex {v} listed twice"
                )));
            }
        }

        let mut sys = FuzzySystem {
            name,
            adjacency: vec![Vec::new(); vertices.len()],
            vertices,
            input: input_ix,
            output: output_ix,
            edges: Vec::new(),
            pair_index: HashMap::new(),
        };
        for (u, v, label) in edges {
            sys.push_edge(&u, &v, label)?;
        }
        Ok(sys)
    }

    fn push_edge(&mut self, u: &str, v: &str, label: Atom) -> Result<()> {
        let find = |x: &str| {
            self.vertices.iter().position(|y| y == x).ok_or_else(|| {
                Error::InvalidArgument(format!("system `{}`: unknown vertex {x}", self.name))
            })
        };
        let (ui, vi) = (find(u)?, find(v)?);
        if ui == vi {
            return Err(Error::SelfLoop {
                system: self.name.clone(),
                vertex: u.to_string(),
            });
        }
        let key = pair_key(ui, vi);
        if self.pair_index.contains_key(&key) {
            return Err(Error::DuplicateEdge {
                system: self.name.clone(),
                u: u.to_string(),
                v: v.to_string(),
            });
        }
        let idx = self.edges.len();
        self.edges.push(Edge {
            u: ui,
            v: vi,
            label,
        });
        self.pair_index.insert(key, idx);
        self.adjacency[ui].push((vi, idx));
        self.adjacency[vi].push((ui, idx));
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn input(&self) -> usize {
        self.input
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(neighbour, edge index)` in edge declaration order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge> {
        self.pair_index
            .get(&pair_key(u, v))
            .map(|&i| &self.edges[i])
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn labels(&self) -> impl Iterator<Item = &Atom> {
        self.edges.iter().map(|e| &e.label)
    }

    pub fn has_calls(&self) -> bool {
        self.labels().any(Atom::is_call)
    }

    /// Same graph with every label passed through `f`.
    pub fn map_labels(&self, mut f: impl FnMut(&Atom) -> Atom) -> FuzzySystem {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.label = f(&e.label);
        }
        out
    }

    pub fn with_name(&self, name: impl Into<String>) -> FuzzySystem {
        let mut out = self.clone();
        out.name = name.into();
        out
    }
}

/// Named systems in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemRegistry {
    systems: IndexMap<String, FuzzySystem>,
}

impl SystemRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, system: FuzzySystem) -> Result<()> {
        if self.systems.contains_key(system.name()) {
            return Err(Error::DuplicateSystem(system.name().to_string()));
        }
        self.systems.insert(system.name().to_string(), system);
        Ok(())
    }

    /// Inserts or replaces.
    pub fn replace(&mut self, system: FuzzySystem) {
        self.systems.insert(system.name().to_string(), system);
    }

    pub fn get(&self, name: &str) -> Result<&FuzzySystem> {
        self.systems
            .get(name)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.systems
            .get_index_of(name)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    pub fn by_index(&self, idx: usize) -> &FuzzySystem {
        &self.systems[idx]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.systems.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &FuzzySystem> {
        self.systems.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.systems.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.systems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.systems.is_empty()
    }

    /// Largest declared call count anywhere in the registry (0 if none).
    pub fn max_declared_count(&self) -> u32 {
        self.iter()
            .flat_map(FuzzySystem::labels)
            .filter_map(|a| match a {
                Atom::Call { count, .. } => Some(*count),
                Atom::Var(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Systems reachable from `name` through call edges, `name` first.
    pub fn reachable(&self, name: &str) -> Result<Vec<&FuzzySystem>> {
        let mut out: Vec<&FuzzySystem> = vec![self.get(name)?];
        let mut i = 0;
        while i < out.len() {
            for atom in out[i].labels() {
                if let Atom::Call { target, .. } = atom {
                    let t = self.get(target)?;
                    if !out.iter().any(|s| s.name() == t.name()) {
                        out.push(t);
                    }
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// Variable names used by `name` and everything it can call.
    pub fn reachable_vars(&self, name: &str) -> Result<BTreeSet<String>> {
        let mut vars = BTreeSet::new();
        for s in self.reachable(name)? {
            for atom in s.labels() {
                if let Atom::Var(v) = atom {
                    vars.insert(v.clone());
                }
            }
        }
        Ok(vars)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        validate_registry(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub system: String,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}: system {}: {}", self.system, self.message)
    }
}

/// Checks call targets and terminal connectivity. An empty result means the
/// registry is fully resolvable.
pub fn validate_registry(r: &SystemRegistry) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for s in r.iter() {
        for e in s.edges() {
            if let Atom::Call { target, .. } = &e.label {
                if !r.contains(target) {
                    out.push(Diagnostic {
                        system: s.name().to_string(),
                        severity: Severity::Error,
                        message: format!(
                            "unknown call target `{target}` on edge {}-{}",
                            s.vertices()[e.u],
                            s.vertices()[e.v]
                        ),
                    });
                }
            }
        }
        for (which, t) in [("input", s.input()), ("output", s.output())] {
            if s.neighbors(t).is_empty() {
                out.push(Diagnostic {
                    system: s.name().to_string(),
                    severity: Severity::Warning,
                    message: format!(
                        "disconnected terminal: {which} terminal {} has no incident edges",
                        s.vertices()[t]
                    ),
                });
            }
        }
    }
    out
}

/// A symbolic connection-matrix cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    One,
    Zero,
    Label(Atom),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::One => f.write_str("1"),
            Cell::Zero => f.write_str("0"),
            Cell::Label(a) => write!(f, "{a}"),
        }
    }
}

/// Square symmetric matrix of edge labels with unit diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionMatrix {
    vertices: Vec<String>,
    cells: Vec<Cell>,
}

impl ConnectionMatrix {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn get(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.size() + j]
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        let n = self.size();
        &self.cells[i * n..(i + 1) * n]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Header row of vertex names, then one row per vertex; columns right-aligned.
    pub fn render(&self) -> String {
        let header: Vec<String> = self.vertices.clone();
        let rows: Vec<Vec<String>> = (0..self.size())
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|c| match c {
                        Cell::Label(a) => render_product(&[Piece::Atom(a)]),
                        other => other.to_string(),
                    })
                    .collect()
            })
            .collect();
        render_table(&header, &rows)
    }
}

/// Shared tabular layout for symbolic and numeric matrices.
pub(crate) fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let label_w = header.iter().map(|h| h.len()).max().unwrap_or(0);
    let col_w = header
        .iter()
        .map(|h| h.len())
        .chain(rows.iter().flatten().map(|c| c.len()))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str(&" ".repeat(label_w));
    for h in header {
        out.push_str("  ");
        out.push_str(&format!("{h:>col_w$}"));
    }
    out.push('\n');
    for (name, row) in header.iter().zip(rows) {
        out.push_str(&format!("{name:<label_w$}"));
        for c in row {
            out.push_str("  ");
            out.push_str(&format!("{c:>col_w$}"));
        }
        out.push('\n');
    }
    out
}

/// Diagonal `One`, edge label where an edge exists, `Zero` elsewhere.
pub fn connection_matrix(s: &FuzzySystem) -> ConnectionMatrix {
    let n = s.vertex_count();
    let mut cells = vec![Cell::Zero; n * n];
    for i in 0..n {
        cells[i * n + i] = Cell::One;
    }
    for e in s.edges() {
        cells[e.u * n + e.v] = Cell::Label(e.label.clone());
        cells[e.v * n + e.u] = Cell::Label(e.label.clone());
    }
    ConnectionMatrix {
        vertices: s.vertices().to_vec(),
        cells,
    }
}
