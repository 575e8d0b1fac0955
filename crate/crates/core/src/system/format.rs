//! Line-oriented system definition format.
//!
//! ```text
//! # comment
//! system psi1_rec {
//!   terminals A -> B
//!   edge A C y
//!   edge C D call psi1_rec 2
//! }
//! ```
//!
//! Clauses are separated by newlines or `;`. Vertex order is first-seen
//! order across the clauses; an optional `vertices A B C` clause fixes it
//! explicitly and can introduce vertices without edges.

use super::{FuzzySystem, SystemRegistry};
use crate::error::{Error, Result};
use crate::expr::{is_identifier, Atom};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Arrow,
    LBrace,
    RBrace,
    Sep,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |out: &mut Vec<Spanned>, tok| {
                out.push(Spanned {
                    tok,
                    line: line_no,
                    column,
                })
            };
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '{' => {
                    push(&mut out, Tok::LBrace);
                    i += 1;
                }
                '}' => {
                    push(&mut out, Tok::RBrace);
                    i += 1;
                }
                ';' => {
                    push(&mut out, Tok::Sep);
                    i += 1;
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    i += 2;
                }
                c if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '-' | '.'))
                    {
                        if chars[i] == '-' && chars.get(i + 1) == Some(&'>') {
                            break;
                        }
                        i += 1;
                    }
                    push(&mut out, Tok::Word(chars[start..i].iter().collect()));
                }
                other => {
                    return Err(syntax(
                        line_no,
                        column,
                        format!("unexpected character `{other}`"),
                    ))
                }
            }
        }
        out.push(Spanned {
            tok: Tok::Sep,
            line: line_no,
            column: chars.len() + 1,
        });
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Cursor {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Spanned> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| syntax(self.eof.0, self.eof.1, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn skip_seps(&mut self) {
        while matches!(self.peek(), Some(Spanned { tok: Tok::Sep, .. })) {
            self.pos += 1;
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        let t = self.next()?;
        match t.tok {
            Tok::Word(w) if is_identifier(&w) => Ok(w),
            other => Err(syntax(
                t.line,
                t.column,
                format!("expected {what}, found {}", describe(&other)),
            )),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let t = self.next()?;
        if t.tok == want {
            Ok(())
        } else {
            Err(syntax(
                t.line,
                t.column,
                format!("expected {what}, found {}", describe(&t.tok)),
            ))
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::Arrow => "`->`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Sep => "end of clause".into(),
    }
}

/// Parses a definition file. Call targets are not resolved here; see
/// [`super::validate_registry`].
pub fn parse_registry(text: &str) -> Result<SystemRegistry> {
    let toks = tokenize(text)?;
    let eof = (text.lines().count().max(1), 1);
    let mut cur = Cursor { toks, pos: 0, eof };
    let mut registry = SystemRegistry::new();
    loop {
        cur.skip_seps();
        let Some(start) = cur.peek().cloned() else {
            break;
        };
        match &start.tok {
            Tok::Word(w) if w == "system" => {
                cur.pos += 1;
            }
            other => {
                return Err(syntax(
                    start.line,
                    start.column,
                    format!("expected `system`, found {}", describe(other)),
                ))
            }
        }
        let system = parse_system(&mut cur)?;
        if registry.contains(system.name()) {
            return Err(syntax(
                start.line,
                start.column,
                format!("duplicate system `{}`", system.name()),
            ));
        }
        registry.insert(system)?;
    }
    Ok(registry)
}

fn parse_system(cur: &mut Cursor) -> Result<FuzzySystem> {
    let name = cur.ident("system name")?;
    cur.skip_seps();
    cur.expect(Tok::LBrace, "`{`")?;

    let mut vertices: Vec<String> = Vec::new();
    let see = |v: &str, vertices: &mut Vec<String>| {
        if !vertices.iter().any(|x| x == v) {
            vertices.push(v.to_string());
        }
    };
    let mut terminals: Option<(String, String)> = None;
    let mut listed = false;
    let mut edges: Vec<(String, String, Atom)> = Vec::new();
    let mut edge_pos: Vec<(usize, usize)> = Vec::new();

    loop {
        cur.skip_seps();
        let t = cur.next()?;
        match t.tok {
            Tok::RBrace => break,
            Tok::Word(ref w) if w == "terminals" => {
                if terminals.is_some() {
                    return Err(syntax(t.line, t.column, "terminals declared twice"));
                }
                let a = cur.ident("input terminal")?;
                cur.expect(Tok::Arrow, "`->`")?;
                let b = cur.ident("output terminal")?;
                see(&a, &mut vertices);
                see(&b, &mut vertices);
                terminals = Some((a, b));
            }
            Tok::Word(ref w) if w == "vertices" => {
                if listed {
                    return Err(syntax(t.line, t.column, "vertices declared twice"));
                }
                listed = true;
                while let Some(Spanned {
                    tok: Tok::Word(_), ..
                }) = cur.peek()
                {
                    let v = cur.ident("vertex")?;
                    see(&v, &mut vertices);
                }
            }
            Tok::Word(ref w) if w == "edge" => {
                let u = cur.ident("vertex")?;
                let v = cur.ident("vertex")?;
                let label = parse_label(cur)?;
                see(&u, &mut vertices);
                see(&v, &mut vertices);
                edges.push((u, v, label));
                edge_pos.push((t.line, t.column));
            }
            other => {
                return Err(syntax(
                    t.line,
                    t.column,
                    format!(
                        "expected `vertices`, `terminals`, `edge` or `}}`, found {}",
                        describe(&other)
                    ),
                ))
            }
        }
        let end = cur.peek().cloned();
        match end {
            Some(Spanned { tok: Tok::Sep, .. })
            | Some(Spanned {
                tok: Tok::RBrace, ..
            }) => {}
            Some(s) => {
                return Err(syntax(
                    s.line,
                    s.column,
                    format!("expected end of clause, found {}", describe(&s.tok)),
                ))
            }
            None => return Err(syntax(cur.eof.0, cur.eof.1, "unterminated system block")),
        }
    }

    let Some((input, output)) = terminals else {
        return Err(Error::InvalidTerminals {
            system: name,
            message: "missing `terminals` clause".into(),
        });
    };
    // build edge by edge so errors can point at the offending clause
    let mut sys = FuzzySystem::new(name, vertices, &input, &output, Vec::new())?;
    for ((u, v, label), (line, column)) in edges.into_iter().zip(edge_pos) {
        sys.push_edge(&u, &v, label).map_err(|e| match e {
            Error::DuplicateEdge { .. } | Error::SelfLoop { .. } => {
                syntax(line, column, e.to_string())
            }
            other => other,
        })?;
    }
    Ok(sys)
}

fn parse_label(cur: &mut Cursor) -> Result<Atom> {
    let t = cur.next()?;
    match t.tok {
        Tok::Word(ref w) if w == "call" => {
            let target = cur.ident("call target")?;
            let c = cur.next()?;
            match c.tok {
                Tok::Word(ref n) if !n.is_empty() && n.chars().all(|ch| ch.is_ascii_digit()) => {
                    let count = n.parse().map_err(|_| {
                        syntax(c.line, c.column, format!("call count `{n}` is too large"))
                    })?;
                    Ok(Atom::call(target, count))
                }
                other => Err(syntax(
                    c.line,
                    c.column,
                    format!(
                        "call count must be a non-negative integer, found {}",
                        describe(&other)
                    ),
                )),
            }
        }
        Tok::Word(ref w) if is_identifier(w) => Ok(Atom::Var(w.clone())),
        other => Err(syntax(
            t.line,
            t.column,
            format!("expected edge label, found {}", describe(&other)),
        )),
    }
}

/// Renders a registry in the definition format; [`parse_registry`] reads it back
/// to an identical registry.
pub fn format_registry(r: &SystemRegistry) -> String {
    let mut out = String::new();
    for (i, s) in r.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format_system(s));
    }
    out
}

fn format_system(s: &FuzzySystem) -> String {
    let v = s.vertices();
    let mut out = format!("system {} {{\n", s.name());
    let mut seen: Vec<&str> = vec![&v[s.input()]];
    for name in
        std::iter::once(&v[s.output()]).chain(s.edges().iter().flat_map(|e| [&v[e.u], &v[e.v]]))
    {
        if !seen.contains(&name.as_str()) {
            seen.push(name);
        }
    }
    if seen != v {
        out.push_str(&format!("  vertices {}\n", v.join(" ")));
    }
    out.push_str(&format!(
        "  terminals {} -> {}\n",
        v[s.input()],
        v[s.output()]
    ));
    for e in s.edges() {
        let label = match &e.label {
            Atom::Var(name) => name.clone(),
            Atom::Call { target, count } => format!("call {target} {count}"),
        };
        out.push_str(&format!("  edge {} {} {}\n", v[e.u], v[e.v], label));
    }
    out.push_str("}\n");
    out
}
