//! The line-oriented workspace format, its JSON mirror, and DOT export.
//!
//! ```text
//! # comment
//! elements: a b c d
//! cover: a c
//! cover: b c
//! joinspec U1: {a b} {}
//! ```
//!
//! Identifiers match `[A-Za-z_][A-Za-z0-9_']*`. Singletons are implicit in
//! every join-specification and `{}` denotes the empty set.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::IdealLattice;
use crate::joinspec::JoinSpec;
use crate::lattice::FiniteOrder;
use crate::poset::{Limits, Poset};

/// A join-specification declared in a workspace file.
#[derive(Debug, Clone)]
pub struct NamedSpec {
    pub name: String,
    pub spec: JoinSpec,
    /// Line of the declaration (1-based; 0 when not parsed from text).
    pub line: usize,
}

/// One poset and the join-specifications declared over it.
#[derive(Debug, Clone)]
pub struct Workspace {
    poset: Arc<Poset>,
    specs: Vec<NamedSpec>,
    source: Option<String>,
}

/// Names resolved without a declaration: `B`, `Uinf` and `Uall`.
pub const BUILTIN_SPECS: [&str; 3] = ["B", "Uinf", "Uall"];

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::TooManyElements { .. } | Error::CapExceeded { .. } => e,
        other => Error::Parse { line, message: other.to_string() },
    }
}

struct RawSpec {
    name: String,
    sets: Vec<Vec<String>>,
    line: usize,
}

fn parse_sets(rest: &str, line: usize) -> Result<Vec<Vec<String>>> {
    let mut sets = Vec::new();
    let mut cur: Option<Vec<String>> = None;
    let mut word = String::new();
    let flush = |word: &mut String, cur: &mut Option<Vec<String>>| -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let w = std::mem::take(word);
        if !is_ident(&w) {
            return Err(syntax(line, format!("invalid identifier `{w}`")));
        }
        match cur {
            Some(set) => {
                set.push(w);
                Ok(())
            }
            None => Err(syntax(line, format!("`{w}` outside braces"))),
        }
    };
    for ch in rest.chars() {
        match ch {
            '{' => {
                flush(&mut word, &mut cur)?;
                if cur.is_some() {
                    return Err(syntax(line, "nested `{`"));
                }
                cur = Some(Vec::new());
            }
            '}' => {
                flush(&mut word, &mut cur)?;
                sets.push(cur.take().ok_or_else(|| syntax(line, "unmatched `}`"))?);
            }
            c if c.is_whitespace() => flush(&mut word, &mut cur)?,
            c => word.push(c),
        }
    }
    flush(&mut word, &mut cur)?;
    if cur.is_some() {
        return Err(syntax(line, "unclosed `{`"));
    }
    Ok(sets)
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace> {
        Self::parse_with(text, Limits::default())
    }

    pub fn parse_with(text: &str, limits: Limits) -> Result<Workspace> {
        let mut elements: Option<(Vec<String>, usize)> = None;
        let mut covers: Vec<(String, String, usize)> = Vec::new();
        let mut raw_specs: Vec<RawSpec> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (head, rest) = content
                .split_once(':')
                .ok_or_else(|| syntax(line, "expected `elements:`, `cover:` or `joinspec NAME:`"))?;
            let head = head.trim();
            let words: Vec<&str> = rest.split_whitespace().collect();
            if head == "elements" {
                if elements.is_some() {
                    return Err(syntax(line, "`elements:` declared twice"));
                }
                if words.is_empty() {
                    return Err(syntax(line, "no elements"));
                }
                if let Some(bad) = words.iter().find(|w| !is_ident(w)) {
                    return Err(syntax(line, format!("invalid identifier `{bad}`")));
                }
                elements = Some((words.iter().map(|w| w.to_string()).collect(), line));
            } else if head == "cover" {
                match words.as_slice() {
                    [lo, hi] if is_ident(lo) && is_ident(hi) => covers.push((lo.to_string(), hi.to_string(), line)),
                    _ => return Err(syntax(line, "expected `cover: LOWER UPPER`")),
                }
            } else if let Some(name) = head.strip_prefix("joinspec") {
                let name = name.trim();
                if !is_ident(name) || !head.starts_with("joinspec ") {
                    return Err(syntax(line, format!("invalid joinspec name `{name}`")));
                }
                if raw_specs.iter().any(|s| s.name == name) {
                    return Err(syntax(line, format!("joinspec `{name}` declared twice")));
                }
                raw_specs.push(RawSpec { name: name.to_string(), sets: parse_sets(rest, line)?, line });
            } else {
                return Err(syntax(line, format!("unknown directive `{head}`")));
            }
        }
        let (labels, elements_line) = elements.ok_or_else(|| syntax(1, "missing `elements:` line"))?;
        for (lo, hi, line) in &covers {
            for l in [lo, hi] {
                if !labels.contains(l) {
                    return Err(at_line(*line, Error::UnknownLabel(l.clone())));
                }
            }
        }
        let pairs: Vec<(String, String)> = covers.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
        let poset = Poset::from_covers_with(&labels, &pairs, limits).map_err(|e| {
            let line = match &e {
                Error::Cycle(cycle) => covers
                    .iter()
                    .find(|(a, b, _)| cycle.contains(a) && cycle.contains(b))
                    .map_or(elements_line, |c| c.2),
                _ => elements_line,
            };
            at_line(line, e)
        })?;
        let poset = Arc::new(poset);
        let mut specs = Vec::with_capacity(raw_specs.len());
        for raw in raw_specs {
            let spec = JoinSpec::from_labels(poset.clone(), &raw.sets).map_err(|e| at_line(raw.line, e))?;
            specs.push(NamedSpec { name: raw.name, spec, line: raw.line });
        }
        Ok(Workspace { poset, specs, source: None })
    }

    pub fn from_parts(poset: Arc<Poset>, specs: Vec<(String, JoinSpec)>) -> Result<Workspace> {
        let mut out = Workspace { poset, specs: Vec::new(), source: None };
        for (name, spec) in specs {
            if !is_ident(&name) || out.specs.iter().any(|s| s.name == name) {
                return Err(Error::Precondition(format!("bad or duplicate joinspec name `{name}`")));
            }
            if spec.poset().id() != out.poset.id() {
                return Err(Error::OwnerMismatch);
            }
            out.specs.push(NamedSpec { name, spec, line: 0 });
        }
        Ok(out)
    }

    /// Records where the workspace was read from.
    pub fn with_source(mut self, source: impl Into<String>) -> Workspace {
        self.source = Some(source.into());
        self
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn specs(&self) -> &[NamedSpec] {
        &self.specs
    }

    /// A declared specification, or one of [`BUILTIN_SPECS`].
    pub fn spec(&self, name: &str) -> Result<JoinSpec> {
        if let Some(s) = self.specs.iter().find(|s| s.name == name) {
            return Ok(s.spec.clone());
        }
        match name {
            "B" => Ok(JoinSpec::bp(self.poset.clone())),
            "Uinf" => JoinSpec::u_infty(self.poset.clone()),
            "Uall" => JoinSpec::u_max(self.poset.clone()),
            _ => Err(Error::Precondition(format!("unknown joinspec `{name}`"))),
        }
    }

    /// The workspace in the text grammar (covers are the transitive reduction).
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.poset);
        for s in &self.specs {
            let _ = writeln!(out, "joinspec {}: {}", s.name, spec_setlist(&s.spec));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let p = &self.poset;
        let doc = WorkspaceJson {
            covers: p.covers().into_iter().map(|(a, b)| [p.label(a).to_string(), p.label(b).to_string()]).collect(),
            elements: p.labels().to_vec(),
            joinspecs: self
                .specs
                .iter()
                .map(|s| SpecJson { name: s.name.clone(), sets: spec_label_sets(&s.spec) })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("workspace serialises") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Workspace> {
        let doc: WorkspaceJson =
            serde_json::from_str(text).map_err(|e| syntax(e.line(), format!("invalid JSON: {e}")))?;
        let poset = Arc::new(Poset::from_covers(
            &doc.elements,
            &doc.covers.iter().map(|[a, b]| (a.clone(), b.clone())).collect::<Vec<_>>(),
        )?);
        let specs = doc
            .joinspecs
            .iter()
            .map(|s| Ok((s.name.clone(), JoinSpec::from_labels(poset.clone(), &s.sets)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(poset, specs)
    }

    /// Same labels, order and named specifications (member sets by label).
    pub fn same_content(&self, other: &Workspace) -> bool {
        let (p, q) = (&self.poset, &other.poset);
        p.labels() == q.labels()
            && (0..p.len()).all(|a| (0..p.len()).all(|b| p.leq(a, b) == q.leq(a, b)))
            && self.specs.len() == other.specs.len()
            && self
                .specs
                .iter()
                .zip(&other.specs)
                .all(|(a, b)| a.name == b.name && spec_label_sets(&a.spec) == spec_label_sets(&b.spec))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorkspaceJson {
    covers: Vec<[String; 2]>,
    elements: Vec<String>,
    joinspecs: Vec<SpecJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecJson {
    name: String,
    sets: Vec<Vec<String>>,
}

/// Non-singleton members as label lists, in canonical order.
pub fn spec_label_sets(u: &JoinSpec) -> Vec<Vec<String>> {
    let p = u.poset();
    u.extra_members()
        .iter()
        .map(|s| s.iter().map(|i| p.label(i).to_string()).collect())
        .collect()
}

/// Non-singleton members in the `{a b} {}` syntax.
pub fn spec_setlist(u: &JoinSpec) -> String {
    spec_label_sets(u)
        .iter()
        .map(|s| format!("{{{}}}", s.join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The Hasse diagram, edges pointing upwards.
pub fn dot_poset(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for l in p.labels() {
        let _ = writeln!(out, "  {};", quote(l));
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  {} -> {};", quote(p.label(a)), quote(p.label(b)));
    }
    out.push_str("}\n");
    out
}

/// The covering graph of an ideal lattice, nodes labelled by their sets.
pub fn dot_ideals(lat: &IdealLattice) -> String {
    let mut out = String::from("digraph ideals {\n  rankdir=BT;\n");
    for i in 0..lat.len() {
        let _ = writeln!(out, "  {};", quote(&lat.element_label(i)));
    }
    for (a, b) in lat.covers() {
        let _ = writeln!(out, "  {} -> {};", quote(&lat.element_label(a)), quote(&lat.element_label(b)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const NO_UNION: &str = "\
# six points
elements: a b c d e f
cover: a d
cover: b d
cover: b e
cover: c e
cover: d f
cover: e f
joinspec U1: {a b}
joinspec U2: {b c} {d e}
";

    #[test]
    fn parses_fixture() {
        let w = Workspace::parse(NO_UNION).unwrap();
        assert_eq!(w.poset().len(), 6);
        let u1 = w.spec("U1").unwrap();
        assert_eq!(u1.len(), 7);
        assert_eq!(w.specs()[1].line, 10);
        assert_eq!(w.spec("B").unwrap(), JoinSpec::bp(w.poset().clone()));
        assert!(w.spec("nope").is_err());
    }

    #[test]
    fn singleton_and_errors() {
        let w = Workspace::parse("elements: a").unwrap();
        assert_eq!(w.poset().len(), 1);
        assert_eq!(w.spec("B").unwrap().len(), 1);
        let err = |t: &str| Workspace::parse(t).unwrap_err();
        assert!(matches!(err("elements: a\ncover: a a"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("elements: a b\ncover: a c"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("elements: a b\njoinspec U: {a b}"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("elements: a b\njoinspec U: {}"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("elements: a b\nfoo: x"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("cover: a b"), Error::Parse { .. }));
        assert!(matches!(err("elements: a b\njoinspec U: {a"), Error::Parse { line: 2, .. }));
        assert!(matches!(err("elements: a b\ncover: a b\ncover: b a"), Error::Parse { line: 2, .. }));
    }

    #[test]
    fn shadowing_builtins() {
        let w = Workspace::parse("elements: c d\ncover: c d\njoinspec Uinf: {} {c d}").unwrap();
        assert!(w.spec("Uinf").unwrap().contains_empty());
    }

    #[test]
    fn json_and_text_round_trip() {
        let w = Workspace::parse(NO_UNION).unwrap();
        let back = Workspace::from_json(&w.to_json()).unwrap();
        assert!(w.same_content(&back));
        let again = Workspace::parse(&w.to_text()).unwrap();
        assert!(w.same_content(&again));
        assert_eq!(w.to_json(), back.to_json());
    }

    #[test]
    fn dot_output() {
        let w = Workspace::parse(NO_UNION).unwrap();
        let dot = dot_poset(w.poset());
        assert_eq!(dot.matches(" -> ").count(), 6);
        assert_eq!(dot.lines().filter(|l| l.ends_with(';') && !l.contains("->") && !l.contains('=')).count(), 6);
    }
}
