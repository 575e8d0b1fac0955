//! Stack-traced evaluation of a deep system.
//!
//! Evaluation runs on an explicit frame stack. Entering a call pushes the
//! label of the point evaluation returns to (the next atom on the caller's
//! chain, or the caller's output terminal when the call is the chain's last
//! edge); finishing the callee pops it. Each completed chain reports its
//! nested symbolic form and value.

use std::fmt;

use crate::chain::enumerate_chains;
use crate::error::Result;
use crate::expr::{render_product, Atom, FtfExpr, Piece, Term};
use crate::membership::{snorm_max, tnorm_min, Assignment, Membership};
use crate::recursion::{CallBudget, Evaluator};
use crate::system::{FuzzySystem, SystemRegistry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Enter {
        system: String,
        budget: u32,
    },
    PushReturn {
        label: String,
    },
    PopReturn {
        label: String,
    },
    /// A callee chain substituted back into the caller's chain.
    Return {
        via: String,
        expr: String,
    },
    /// A finished chain. Exhausted chains have `expr` `0` and value 0.
    BranchResult {
        chain: String,
        expr: String,
        value: Membership,
    },
    Exit {
        system: String,
        value: Membership,
    },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Enter { system, budget } => {
                write!(f, "ENTER system={system} budget={budget}")
            }
            TraceEvent::PushReturn { label } => write!(f, "PUSH return={label}"),
            TraceEvent::PopReturn { label } => write!(f, "POP return={label}"),
            TraceEvent::Return { via, expr } => write!(f, "RETURN via={via} expr={expr}"),
            TraceEvent::BranchResult { chain, expr, value } => {
                write!(f, "BRANCH chain={chain} expr={expr} value={value}")
            }
            TraceEvent::Exit { system, value } => write!(f, "EXIT system={system} value={value}"),
        }
    }
}

/// Result of [`trace_eval`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalTrace {
    pub events: Vec<TraceEvent>,
    pub value: Membership,
    /// Call-free expansion built along the way (raw form).
    pub expansion: FtfExpr,
}

impl EvalTrace {
    /// One event per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Push/pop labels pair up last-in first-out, and so do enter/exit.
    pub fn is_balanced(&self) -> bool {
        let mut returns: Vec<&str> = Vec::new();
        let mut systems: Vec<&str> = Vec::new();
        for e in &self.events {
            match e {
                TraceEvent::PushReturn { label } => returns.push(label),
                TraceEvent::PopReturn { label } if returns.pop() != Some(label.as_str()) => {
                    return false;
                }
                TraceEvent::Enter { system, .. } => systems.push(system),
                TraceEvent::Exit { system, .. } if systems.pop() != Some(system.as_str()) => {
                    return false;
                }
                _ => {}
            }
        }
        returns.is_empty() && systems.is_empty()
    }

    pub fn push_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, TraceEvent::PushReturn { .. }))
            .count()
    }
}

enum Part {
    Atom(Atom),
    /// A finished call and its call-free expansion.
    Group(Atom, FtfExpr),
}

struct Frame<'r> {
    system: &'r FuzzySystem,
    budget: CallBudget,
    chains: Vec<(String, Vec<Atom>)>,
    chain: usize,
    atom: usize,
    acc: Membership,
    parts: Vec<Part>,
    flat: FtfExpr,
    best: Membership,
    union: Vec<Term>,
    /// Completed chains with their call-free expansions.
    branches: Vec<(String, FtfExpr)>,
    pending: Option<String>,
}

impl<'r> Frame<'r> {
    fn new(system: &'r FuzzySystem, budget: CallBudget) -> Self {
        let chains = enumerate_chains(system)
            .iter()
            .map(|c| (c.render(system), c.labels(system).cloned().collect()))
            .collect();
        Frame {
            system,
            budget,
            chains,
            chain: 0,
            atom: 0,
            acc: Membership::ONE,
            parts: Vec::new(),
            flat: FtfExpr::one(),
            best: Membership::ZERO,
            union: Vec::new(),
            branches: Vec::new(),
            pending: None,
        }
    }

    fn next_chain(&mut self) {
        self.chain += 1;
        self.atom = 0;
        self.acc = Membership::ONE;
        self.parts.clear();
        self.flat = FtfExpr::one();
    }

    /// Nested form of the current chain so far. With `extra`, the expansion
    /// of the call in progress is spliced in, the rest of the chain is
    /// appended and earlier calls stay symbolic.
    fn render_parts(&self, extra: Option<&FtfExpr>) -> String {
        let mut pieces: Vec<Piece<'_>> = self
            .parts
            .iter()
            .map(|p| match (p, extra) {
                (Part::Atom(a), _) | (Part::Group(a, _), Some(_)) => Piece::Atom(a),
                (Part::Group(_, e), None) => Piece::Group(e),
            })
            .collect();
        if let Some(e) = extra {
            pieces.push(Piece::Group(e));
            let atoms = &self.chains[self.chain].1;
            pieces.extend(atoms[self.atom + 1..].iter().map(Piece::Atom));
        }
        render_product(&pieces)
    }

    fn return_label(&self) -> String {
        let atoms = &self.chains[self.chain].1;
        match atoms.get(self.atom + 1) {
            Some(a) => render_product(&[Piece::Atom(a)]),
            None => self.system.vertices()[self.system.output()].clone(),
        }
    }
}

/// Evaluates `name` with calls at their declared counts, recording every
/// stack operation. No memoisation: each call is expanded where it occurs.
pub fn trace_eval(r: &SystemRegistry, name: &str, sigma: &Assignment) -> Result<EvalTrace> {
    Evaluator::new(r, name, sigma)?;
    let root = r.get(name)?;
    let budget = CallBudget::top(r);
    let mut events = vec![TraceEvent::Enter {
        system: root.name().to_string(),
        budget: budget.0,
    }];
    let mut stack = vec![Frame::new(root, budget)];

    loop {
        let top = stack
            .last_mut()
            .expect("stack is non-empty inside the loop");

        if top.chain == top.chains.len() {
            let done = stack.pop().expect("top frame");
            events.push(TraceEvent::Exit {
                system: done.system.name().to_string(),
                value: done.best,
            });
            let union = FtfExpr::new(done.union);
            let Some(caller) = stack.last_mut() else {
                return Ok(EvalTrace {
                    events,
                    value: done.best,
                    expansion: union,
                });
            };
            let label = caller.pending.take().expect("caller pushed a return point");
            events.push(TraceEvent::PopReturn { label });
            for (via, flat) in &done.branches {
                events.push(TraceEvent::Return {
                    via: via.clone(),
                    expr: caller.render_parts(Some(flat)),
                });
            }
            caller.acc = tnorm_min(caller.acc, done.best);
            caller.flat = caller.flat.concat(&union);
            let call = caller.chains[caller.chain].1[caller.atom].clone();
            caller.parts.push(Part::Group(call, union));
            caller.atom += 1;
            continue;
        }

        let (chain_name, atoms) = &top.chains[top.chain];
        if top.atom == atoms.len() {
            events.push(TraceEvent::BranchResult {
                chain: chain_name.clone(),
                expr: top.render_parts(None),
                value: top.acc,
            });
            top.best = snorm_max(top.best, top.acc);
            top.branches.push((chain_name.clone(), top.flat.clone()));
            let flat = std::mem::replace(&mut top.flat, FtfExpr::one());
            top.union.extend(flat.into_terms());
            top.next_chain();
            continue;
        }

        let atom = atoms[top.atom].clone();
        match &atom {
            Atom::Var(v) => {
                top.acc = tnorm_min(top.acc, sigma.require(v)?);
                top.flat = top.flat.concat(&FtfExpr::atom(atom.clone()));
                top.parts.push(Part::Atom(atom));
                top.atom += 1;
            }
            Atom::Call { target, count } => match top.budget.admit(*count) {
                None => {
                    events.push(TraceEvent::BranchResult {
                        chain: chain_name.clone(),
                        expr: "0".to_string(),
                        value: Membership::ZERO,
                    });
                    top.next_chain();
                }
                Some(b) => {
                    let label = top.return_label();
                    top.pending = Some(label.clone());
                    events.push(TraceEvent::PushReturn { label });
                    let callee = r.get(target)?;
                    events.push(TraceEvent::Enter {
                        system: callee.name().to_string(),
                        budget: b.0,
                    });
                    stack.push(Frame::new(callee, b));
                }
            },
        }
    }
}
