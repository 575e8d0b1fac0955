//! Budgeted evaluation of deep systems.
//!
//! `V(τ, k)` is the value of system `τ` when at most `k` further nested calls
//! may be made. It is the max over τ's chains of the min over each chain's
//! labels, where a variable contributes its binding and a call `τ'^m`
//! contributes:
//!
//! * `0` if `c = min(m, k)` is 0 (the call is exhausted and its chain drops out);
//! * `V(τ', c − 1)` otherwise: the call itself uses one unit of budget.
//!
//! A top-level evaluation of `τ` runs at the registry's largest declared
//! count, so every call starts from exactly its declared count.

use std::collections::HashMap;

use crate::chain::{enumerate_chains, Chain};
use crate::error::Result;
use crate::expr::{Atom, FtfExpr, Term};
use crate::membership::{snorm_max, tnorm_min, Assignment, Membership};
use crate::system::{FuzzySystem, SystemRegistry};

/// Remaining nested-call allowance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CallBudget(pub u32);

impl CallBudget {
    /// Budget handed to the callee of a `count`-fold call, or `None` if the
    /// call cannot be made.
    pub fn admit(self, count: u32) -> Option<CallBudget> {
        let c = count.min(self.0);
        c.checked_sub(1).map(CallBudget)
    }

    /// Budget at which a top-level evaluation of `r` starts.
    pub fn top(r: &SystemRegistry) -> CallBudget {
        CallBudget(r.max_declared_count())
    }
}

/// Memoising evaluator for one registry and one assignment.
pub struct Evaluator<'r> {
    registry: &'r SystemRegistry,
    sigma: &'r Assignment,
    chains: HashMap<usize, Vec<Chain>>,
    memo: HashMap<(usize, CallBudget), Membership>,
}

impl<'r> Evaluator<'r> {
    /// Checks that every system reachable from `root` exists and that every
    /// variable they use is bound.
    pub fn new(registry: &'r SystemRegistry, root: &str, sigma: &'r Assignment) -> Result<Self> {
        for v in registry.reachable_vars(root)? {
            sigma.require(&v)?;
        }
        Ok(Evaluator {
            registry,
            sigma,
            chains: HashMap::new(),
            memo: HashMap::new(),
        })
    }

    /// As [`Evaluator::new`] for a system that need not be registered.
    pub fn for_system(
        registry: &'r SystemRegistry,
        s: &FuzzySystem,
        sigma: &'r Assignment,
    ) -> Result<Self> {
        for atom in s.labels() {
            match atom {
                Atom::Var(v) => {
                    sigma.require(v)?;
                }
                Atom::Call { target, .. } => {
                    for v in registry.reachable_vars(target)? {
                        sigma.require(&v)?;
                    }
                }
            }
        }
        Ok(Evaluator {
            registry,
            sigma,
            chains: HashMap::new(),
            memo: HashMap::new(),
        })
    }

    /// `V(name, budget)`.
    pub fn value(&mut self, name: &str, budget: CallBudget) -> Result<Membership> {
        let idx = self.registry.index_of(name)?;
        self.value_at(idx, budget)
    }

    /// Value of the atom `target^count` as it appears on a top-level edge.
    pub fn call_value(&mut self, target: &str, count: u32) -> Result<Membership> {
        match CallBudget(count).admit(count) {
            None => {
                self.registry.get(target)?;
                Ok(Membership::ZERO)
            }
            Some(b) => self.value(target, b),
        }
    }

    fn value_at(&mut self, idx: usize, budget: CallBudget) -> Result<Membership> {
        if let Some(&v) = self.memo.get(&(idx, budget)) {
            return Ok(v);
        }
        let registry = self.registry;
        let s = registry.by_index(idx);
        let chains = self
            .chains
            .entry(idx)
            .or_insert_with(|| enumerate_chains(s))
            .clone();
        let mut best = Membership::ZERO;
        'chains: for chain in &chains {
            let mut acc = Membership::ONE;
            for atom in chain.labels(s) {
                let v = match atom {
                    Atom::Var(name) => self.sigma.require(name)?,
                    Atom::Call { target, count } => match budget.admit(*count) {
                        None => continue 'chains,
                        Some(b) => {
                            let t = registry.index_of(target)?;
                            self.value_at(t, b)?
                        }
                    },
                };
                acc = tnorm_min(acc, v);
                if acc <= best {
                    continue 'chains;
                }
            }
            best = snorm_max(best, acc);
        }
        self.memo.insert((idx, budget), best);
        Ok(best)
    }
}

/// `V(name, k)`: value of `name` with at most `k` nested calls.
pub fn resolve_call(
    r: &SystemRegistry,
    name: &str,
    k: u32,
    sigma: &Assignment,
) -> Result<Membership> {
    Evaluator::new(r, name, sigma)?.value(name, CallBudget(k))
}

/// Value of system `name` with every call at its declared count.
pub fn eval_system(r: &SystemRegistry, name: &str, sigma: &Assignment) -> Result<Membership> {
    Evaluator::new(r, name, sigma)?.value(name, CallBudget::top(r))
}

/// Call-free FTF of `name` obtained by unrolling every call; exhausted calls
/// drop their chain. Terms follow chain order (raw form).
pub fn symbolic_expand(r: &SystemRegistry, name: &str) -> Result<FtfExpr> {
    r.reachable(name)?;
    let mut memo = HashMap::new();
    expand_at(r, r.index_of(name)?, CallBudget::top(r), &mut memo)
}

fn expand_at(
    r: &SystemRegistry,
    idx: usize,
    budget: CallBudget,
    memo: &mut HashMap<(usize, CallBudget), FtfExpr>,
) -> Result<FtfExpr> {
    if let Some(e) = memo.get(&(idx, budget)) {
        return Ok(e.clone());
    }
    let s = r.by_index(idx);
    let mut terms = Vec::new();
    'chains: for chain in enumerate_chains(s) {
        let mut acc = FtfExpr::one();
        for atom in chain.labels(s) {
            let factor = match atom {
                Atom::Var(_) => FtfExpr::new(vec![Term::new(vec![atom.clone()])]),
                Atom::Call { target, count } => match budget.admit(*count) {
                    None => continue 'chains,
                    Some(b) => expand_at(r, r.index_of(target)?, b, memo)?,
                },
            };
            acc = acc.concat(&factor);
        }
        terms.extend(acc.into_terms());
    }
    let e = FtfExpr::new(terms);
    memo.insert((idx, budget), e.clone());
    Ok(e)
}
