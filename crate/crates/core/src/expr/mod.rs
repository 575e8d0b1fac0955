//! Sum-of-products fuzzy transmission functions.
//!
//! An [`FtfExpr`] is a union (max) of [`Term`]s, each a concatenation (min)
//! of [`Atom`]s. Two forms coexist:
//!
//! * **raw**: construction order preserved, duplicate atoms and terms kept.
//!   This is what chain derivation and symbolic expansion produce, so that
//!   expansions such as `xxzw + xyww` can be printed exactly as built.
//! * **canonical**: atoms sorted and deduplicated inside each term, terms
//!   sorted and deduplicated. Idempotence of both operations makes this
//!   evaluation-preserving; it is the form used for comparison.
//!
//! [`FtfExpr::simplified`] additionally applies absorption (`a + ab = a`).

mod multinomial;
mod parse;

use std::fmt;

use crate::error::{Error, Result};
use crate::membership::{snorm_max, tnorm_min, Assignment, Membership};

pub use multinomial::{multinomial_coefficient, multinomial_expand, MultinomialEntry};
pub use parse::parse_expr;

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An edge label: a membership variable or a budgeted call to another system.
///
/// The derived ordering (variables before calls, then by name, then count) is
/// the canonical atom order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Var(String),
    Call { target: String, count: u32 },
}

impl Atom {
    pub fn var(name: impl Into<String>) -> Self {
        Atom::Var(name.into())
    }

    pub fn call(target: impl Into<String>, count: u32) -> Self {
        Atom::Call {
            target: target.into(),
            count,
        }
    }

    pub fn is_call(&self) -> bool {
        matches!(self, Atom::Call { .. })
    }

    /// Single-character variables are juxtaposed in compact notation; anything
    /// wider needs an explicit `*`.
    fn is_wide(&self) -> bool {
        match self {
            Atom::Var(name) => name.chars().count() > 1,
            Atom::Call { .. } => true,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Var(name) => f.write_str(name),
            Atom::Call { target, count } => write!(f, "{target}^{count}"),
        }
    }
}

/// A concatenation of atoms; evaluates to the min of its atoms (1 if empty).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Vec<Atom>);

impl Term {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Term(atoms)
    }

    pub fn one() -> Self {
        Term(Vec::new())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Term) -> Term {
        let mut atoms = Vec::with_capacity(self.0.len() + other.0.len());
        atoms.extend_from_slice(&self.0);
        atoms.extend_from_slice(&other.0);
        Term(atoms)
    }

    pub fn canonical(&self) -> Term {
        let mut atoms = self.0.clone();
        atoms.sort();
        atoms.dedup();
        Term(atoms)
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    /// Atom-set inclusion; both terms must be canonical.
    fn is_subset_of(&self, other: &Term) -> bool {
        let mut rest = other.0.iter();
        'outer: for a in &self.0 {
            for b in rest.by_ref() {
                if a == b {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn eval<F>(&self, valuation: &mut F) -> Result<Membership>
    where
        F: FnMut(&Atom) -> Option<Membership>,
    {
        let mut acc = Membership::ONE;
        for atom in &self.0 {
            let v = valuation(atom).ok_or_else(|| Error::MissingBinding(atom.to_string()))?;
            acc = tnorm_min(acc, v);
        }
        Ok(acc)
    }

    fn render(&self, notation: Notation) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        match notation {
            Notation::Compact => {
                let pieces: Vec<Piece<'_>> = self.0.iter().map(Piece::Atom).collect();
                render_product(&pieces)
            }
            Notation::Raw | Notation::Canonical => self
                .0
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join("*"),
        }
    }
}

impl FromIterator<Atom> for Term {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        Term(iter.into_iter().collect())
    }
}

/// How an expression is printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Notation {
    /// Construction order, atoms joined with `*`.
    Raw,
    /// Canonical form, atoms joined with `*`. Re-parses to the same value.
    Canonical,
    /// Construction order, single-character variables juxtaposed (`xz + x*xbar*w`).
    Compact,
}

impl std::str::FromStr for Notation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Notation::Raw),
            "canonical" => Ok(Notation::Canonical),
            "compact" | "paper" => Ok(Notation::Compact),
            other => Err(Error::InvalidArgument(format!(
                "unknown notation `{other}` (expected raw, canonical or compact)"
            ))),
        }
    }
}

/// A fuzzy transmission function in sum-of-products form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FtfExpr(Vec<Term>);

impl FtfExpr {
    pub fn new(terms: Vec<Term>) -> Self {
        FtfExpr(terms)
    }

    /// The empty union, constant 0.
    pub fn zero() -> Self {
        FtfExpr(Vec::new())
    }

    /// A single empty term, constant 1.
    pub fn one() -> Self {
        FtfExpr(vec![Term::one()])
    }

    pub fn atom(atom: Atom) -> Self {
        FtfExpr(vec![Term(vec![atom])])
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::atom(Atom::var(name))
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter().flat_map(|t| t.0.iter())
    }

    pub fn is_call_free(&self) -> bool {
        !self.atoms().any(Atom::is_call)
    }

    /// Term multiset union (max). Raw: no deduplication.
    pub fn union(&self, other: &FtfExpr) -> FtfExpr {
        let mut terms = self.0.clone();
        terms.extend_from_slice(&other.0);
        FtfExpr(terms)
    }

    /// Cross product of terms (min), `self`'s terms varying slowest.
    pub fn concat(&self, other: &FtfExpr) -> FtfExpr {
        let mut terms = Vec::with_capacity(self.0.len() * other.0.len());
        for a in &self.0 {
            for b in &other.0 {
                terms.push(a.concat(b));
            }
        }
        FtfExpr(terms)
    }

    pub fn canonical(&self) -> FtfExpr {
        let mut terms: Vec<Term> = self.0.iter().map(Term::canonical).collect();
        terms.sort();
        terms.dedup();
        FtfExpr(terms)
    }

    /// Canonical form with absorbed terms removed.
    pub fn simplified(&self) -> FtfExpr {
        let canon = self.canonical();
        let kept = canon
            .0
            .iter()
            .enumerate()
            .filter(|(i, t)| {
                !canon
                    .0
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != *i && other.is_subset_of(t))
            })
            .map(|(_, t)| t.clone())
            .collect();
        FtfExpr(kept)
    }

    pub fn canonicalize(&self, simplify: bool) -> FtfExpr {
        if simplify {
            self.simplified()
        } else {
            self.canonical()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.0.iter().all(Term::is_canonical) && self.0.windows(2).all(|w| w[0] < w[1])
    }

    /// Canonical term-set equality.
    pub fn equivalent(&self, other: &FtfExpr) -> bool {
        self.canonical() == other.canonical()
    }

    /// Max over terms of the min over each term's atom values.
    pub fn eval<F>(&self, mut valuation: F) -> Result<Membership>
    where
        F: FnMut(&Atom) -> Option<Membership>,
    {
        let mut acc = Membership::ZERO;
        for term in &self.0 {
            acc = snorm_max(acc, term.eval(&mut valuation)?);
        }
        Ok(acc)
    }

    /// Evaluates a call-free expression; call atoms report a missing binding.
    pub fn eval_with(&self, sigma: &Assignment) -> Result<Membership> {
        self.eval(|atom| match atom {
            Atom::Var(name) => sigma.get(name),
            Atom::Call { .. } => None,
        })
    }

    /// k-fold self-concatenation, canonicalised. `k = 0` has no meaning.
    pub fn power(&self, k: u32) -> Result<FtfExpr> {
        if k == 0 {
            return Err(Error::UndefinedPower);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.concat(self).canonical();
        }
        Ok(acc.canonical())
    }

    pub fn render(&self, notation: Notation) -> String {
        let owned;
        let expr = if notation == Notation::Canonical {
            owned = self.canonical();
            &owned
        } else {
            self
        };
        if expr.0.is_empty() {
            return "0".to_string();
        }
        expr.0
            .iter()
            .map(|t| t.render(notation))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for FtfExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Notation::Raw))
    }
}

impl FromIterator<Term> for FtfExpr {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        FtfExpr(iter.into_iter().collect())
    }
}

/// One factor of a rendered product: an atom, or a parenthesised sub-expression.
#[derive(Debug, Clone)]
pub enum Piece<'a> {
    Atom(&'a Atom),
    Group(&'a FtfExpr),
    /// Pre-rendered text, treated like a group for spacing.
    Text(String),
}

/// Compact product: juxtaposition, with `*` next to wide atoms.
pub fn render_product(pieces: &[Piece<'_>]) -> String {
    if pieces.is_empty() {
        return "1".to_string();
    }
    let mut out = String::new();
    let mut prev_wide = false;
    for (i, piece) in pieces.iter().enumerate() {
        let wide = matches!(piece, Piece::Atom(a) if a.is_wide());
        if i > 0 && (wide || prev_wide) {
            out.push('*');
        }
        match piece {
            Piece::Atom(a) => out.push_str(&a.to_string()),
            Piece::Group(e) => {
                out.push('(');
                out.push_str(&e.render(Notation::Compact));
                out.push(')');
            }
            Piece::Text(s) => out.push_str(s),
        }
        prev_wide = wide;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: f64) -> Membership {
        Membership::new(v).unwrap()
    }

    fn p(s: &str) -> FtfExpr {
        parse_expr(s).unwrap()
    }

    fn psi1_ftf() -> FtfExpr {
        p("x*z + x*xbar*w + y*w + y*xbar*z")
    }

    fn sigma() -> Assignment {
        Assignment::from_pairs([
            ("x", 0.3),
            ("y", 0.7),
            ("w", 0.6),
            ("z", 0.8),
            ("xbar", 0.5),
        ])
    }

    #[test]
    fn eval_examples() {
        // xz = .3, x xbar w = .3, yw = .6, y xbar z = .5
        assert_eq!(psi1_ftf().eval_with(&sigma()).unwrap(), m(0.6));
        assert_eq!(
            FtfExpr::zero().eval_with(&sigma()).unwrap(),
            Membership::ZERO
        );
        assert_eq!(FtfExpr::one().eval_with(&sigma()).unwrap(), Membership::ONE);
        let a = Assignment::from_pairs([("x", 0.42)]);
        assert_eq!(FtfExpr::var("x").eval_with(&a).unwrap(), m(0.42));
    }

    #[test]
    fn eval_reports_missing_atom() {
        let err = p("x*q").eval_with(&sigma()).unwrap_err();
        assert_eq!(err, Error::MissingBinding("q".into()));
        let err = p("psi1^2").eval_with(&sigma()).unwrap_err();
        assert_eq!(err, Error::MissingBinding("psi1^2".into()));
    }

    #[test]
    fn union_examples() {
        assert_eq!(p("x*z").union(&p("y*w")), p("x*z + y*w"));
        assert_eq!(psi1_ftf().union(&FtfExpr::zero()), psi1_ftf());
        let u = p("x*z + y*w").union(&p("x*z"));
        assert_eq!(u.len(), 3);
        assert_eq!(u.canonical(), p("x*z + y*w").canonical());
    }

    #[test]
    fn concat_examples() {
        assert_eq!(p("x").concat(&p("z")), p("x*z"));
        let e = p("y").concat(&p("x*z + y*w")).concat(&p("z"));
        assert_eq!(e, p("y*x*z*z + y*y*w*z"));
        assert_eq!(psi1_ftf().concat(&FtfExpr::one()), psi1_ftf());
        assert_eq!(FtfExpr::one().concat(&psi1_ftf()), psi1_ftf());
    }

    #[test]
    fn canonicalize_examples() {
        let e = p("y*x*x*z*w*z");
        assert_eq!(
            e.canonical().terms(),
            &[Term::new(vec![
                Atom::var("w"),
                Atom::var("x"),
                Atom::var("y"),
                Atom::var("z")
            ])]
        );
        assert_eq!(p("x*z + x*y*z*w").simplified(), p("x*z"));
        let c = psi1_ftf().canonical();
        assert!(c.is_canonical());
        assert_eq!(c.canonical(), c);
        assert_eq!(c.simplified().simplified(), c.simplified());
        // the empty term absorbs everything
        assert_eq!(p("x + 1").simplified(), FtfExpr::one());
    }

    #[test]
    fn power_examples() {
        let e = p("x*z + y*w");
        let sq = e.power(2).unwrap();
        assert_eq!(sq, p("x*z + w*x*y*z + w*y").canonical());
        assert_eq!(sq.len(), 3);
        assert_eq!(e.power(1).unwrap(), e.canonical());
        let s = Assignment::from_pairs([("x", 0.9), ("z", 0.8), ("y", 0.2), ("w", 0.1)]);
        assert_eq!(sq.eval_with(&s).unwrap(), m(0.8));
        assert_eq!(e.eval_with(&s).unwrap(), m(0.8));
        assert_eq!(e.power(0), Err(Error::UndefinedPower));
    }

    #[test]
    fn compact_rendering() {
        assert_eq!(
            psi1_ftf().render(Notation::Compact),
            "xz + x*xbar*w + yw + y*xbar*z"
        );
        assert_eq!(
            psi1_ftf().render(Notation::Raw),
            "x*z + x*xbar*w + y*w + y*xbar*z"
        );
        assert_eq!(
            p("psi2^1*psi4^1 + y*psi1^2*z").render(Notation::Compact),
            "psi2^1*psi4^1 + y*psi1^2*z"
        );
        assert_eq!(FtfExpr::zero().render(Notation::Compact), "0");
        assert_eq!(FtfExpr::one().render(Notation::Raw), "1");
        let inner = p("x*z + y*w");
        let x = Atom::var("x");
        let w = Atom::var("w");
        assert_eq!(
            render_product(&[Piece::Atom(&x), Piece::Group(&inner), Piece::Atom(&w)]),
            "x(xz + yw)w"
        );
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("psi1_rec"));
        assert!(is_identifier("_x"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
    }
}
