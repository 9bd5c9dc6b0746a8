//! The `.dlkb` text format.
//!
//! ```text
//! # comment
//! concept Wife Priest
//! role HasHusband
//! const mary
//! exists HasHusband <= Wife
//! Priest <= not exists HasHusband-
//! HasHusband <=r HasSpouse
//! funct HasHusband
//! HasHusband(mary, john)
//! exists HasHusband-(john)
//! ```

use crate::error::{Error, Result};
use crate::kb::{Assertion, Axiom, Basic, Concept, KnowledgeBase, Membership, Role, Signature};
use crate::abox_evolution::CarefulResult;
use crate::evolution::{EvolutionResult, ResultVariant};
use crate::finite_models::ModelSet;
use crate::postulates::{PostulateReport, Verdict, Witness};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Minus,
    Le,
    RoleLe,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn lex(line_no: usize, line: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if c == '<' && chars.get(i + 1) == Some(&'=') {
            let boundary = chars.get(i + 3).is_none_or(|c| !(c.is_ascii_alphanumeric() || *c == '_'));
            if chars.get(i + 2) == Some(&'r') && boundary {
                out.push(Spanned { tok: Tok::RoleLe, col });
                i += 3;
            } else {
                out.push(Spanned { tok: Tok::Le, col });
                i += 2;
            }
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '-' => Tok::Minus,
                _ => return Err(perr(line_no, col, format!("unexpected character {c:?}"))),
            };
            out.push(Spanned { tok, col });
            i += 1;
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 6] = ["concept", "role", "const", "funct", "exists", "not"];

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    eol: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.eol, |s| s.col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col(), msg)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s.clone())
            }
            Some(Tok::Ident(s)) => Err(self.err(format!("keyword {s} used as a name"))),
            _ => Err(self.err("expected a name")),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn role(&mut self) -> Result<Role> {
        let name = self.name()?;
        let inverse = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        Ok(Role { name, inverse })
    }

    fn basic(&mut self) -> Result<Basic> {
        if self.is_kw("exists") {
            self.pos += 1;
            Ok(Basic::Exists(self.role()?))
        } else {
            Ok(Basic::Atomic(self.name()?))
        }
    }

    fn concept(&mut self) -> Result<Concept> {
        if self.is_kw("not") {
            self.pos += 1;
            Ok(Concept::neg(self.basic()?))
        } else {
            Ok(Concept::pos(self.basic()?))
        }
    }

    fn args(&mut self) -> Result<Vec<String>> {
        self.expect(Tok::LParen, "'('")?;
        let mut v = vec![self.name()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            v.push(self.name()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(v)
    }
}

/// Parses one assertion line without declarations.
fn assertion_line(c: &mut Cursor) -> Result<Assertion> {
    if c.is_kw("funct") {
        c.pos += 1;
        let r = c.role()?;
        c.done()?;
        return Ok(Assertion::T(Axiom::Funct(r)));
    }
    let has = |t: &Tok| c.toks.iter().any(|s| s.tok == *t);
    if has(&Tok::RoleLe) {
        let l = c.role()?;
        c.expect(Tok::RoleLe, "'<=r'")?;
        let r = c.role()?;
        c.done()?;
        return Ok(Assertion::T(Axiom::role_incl(l, r)));
    }
    if has(&Tok::Le) {
        let l = c.basic()?;
        c.expect(Tok::Le, "'<='")?;
        let r = c.concept()?;
        c.done()?;
        return Ok(Assertion::T(Axiom::ConceptIncl(l, r)));
    }
    let b = c.basic()?;
    let args_col = c.col();
    let args = c.args()?;
    c.done()?;
    match (b, args.len()) {
        (b, 1) => Ok(Assertion::A(Membership::Concept(b, args[0].clone()))),
        (Basic::Atomic(p), 2) => Ok(Assertion::A(Membership::Role(p, args[0].clone(), args[1].clone()))),
        (Basic::Exists(_), _) => Err(perr(c.line, args_col, "existential membership takes one argument")),
        _ => Err(perr(c.line, args_col, "membership takes one or two arguments")),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses a single assertion such as `A <= not B`, `exists R-(a)` or `P(a, b)`.
pub fn parse_assertion(text: &str) -> Result<Assertion> {
    let text = strip_comment(text.trim());
    let toks = lex(1, text)?;
    if toks.is_empty() {
        return Err(perr(1, 1, "empty assertion"));
    }
    let mut c = Cursor { toks: &toks, pos: 0, line: 1, eol: text.chars().count() + 1 };
    assertion_line(&mut c)
}

/// Parses a `.dlkb` document.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase> {
    let mut sig = Signature::default();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let toks = lex(line_no, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor { toks: &toks, pos: 0, line: line_no, eol: line.chars().count() + 1 };
        let target = if c.is_kw("concept") {
            Some(0)
        } else if c.is_kw("role") {
            Some(1)
        } else if c.is_kw("const") {
            Some(2)
        } else {
            None
        };
        match target {
            Some(t) => {
                c.next();
                if c.peek().is_none() {
                    return Err(c.err("declaration needs at least one name"));
                }
                while c.peek().is_some() {
                    let n = c.name()?;
                    let set = match t {
                        0 => &mut sig.concepts,
                        1 => &mut sig.roles,
                        _ => &mut sig.constants,
                    };
                    set.insert(n);
                }
            }
            None => lines.push((line_no, toks, line.chars().count() + 1)),
        }
    }
    let mut kb = KnowledgeBase::new(sig.clone());
    for (line_no, toks, eol) in lines {
        let mut c = Cursor { toks: &toks, pos: 0, line: line_no, eol };
        let a = assertion_line(&mut c)?;
        check_declared(&sig, &a, line_no, &toks)?;
        if let Assertion::A(m) = &a {
            for k in m.constants() {
                kb.signature.constants.insert(k.to_string());
            }
        }
        match a {
            Assertion::T(ax) => {
                kb.tbox.insert(ax);
            }
            Assertion::A(m) => {
                kb.abox.insert(m);
            }
        }
    }
    let v = kb.validate();
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    Ok(kb)
}

fn check_declared(sig: &Signature, a: &Assertion, line: usize, toks: &[Spanned]) -> Result<()> {
    let col_of = |name: &str| {
        toks.iter()
            .find(|s| matches!(&s.tok, Tok::Ident(n) if n == name))
            .map_or(1, |s| s.col)
    };
    let mut used = Signature::default();
    crate::kb::declare_symbols(&mut used, a);
    for c in &used.concepts {
        if !sig.concepts.contains(c) {
            let hint = if sig.roles.contains(c) { " (declared as a role)" } else { "" };
            return Err(perr(line, col_of(c), format!("undeclared concept {c}{hint}")));
        }
    }
    for r in &used.roles {
        if !sig.roles.contains(r) {
            let hint = if sig.concepts.contains(r) { " (declared as a concept)" } else { "" };
            return Err(perr(line, col_of(r), format!("undeclared role {r}{hint}")));
        }
    }
    Ok(())
}

/// Canonical rendering; `parse_kb(&print_kb(kb)) == kb` for valid KBs.
pub fn print_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let decl = |out: &mut String, kw: &str, names: &BTreeSet<String>| {
        if !names.is_empty() {
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let _ = writeln!(out, "{kw} {}", names.join(" "));
        }
    };
    decl(&mut out, "concept", &kb.signature.concepts);
    decl(&mut out, "role", &kb.signature.roles);
    decl(&mut out, "const", &kb.signature.constants);
    let mut tbox: Vec<String> = kb.tbox.iter().map(|a| a.to_string()).collect();
    tbox.sort();
    let mut abox: Vec<String> = kb.abox.iter().map(|a| a.to_string()).collect();
    abox.sort();
    for line in tbox.into_iter().chain(abox) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    let mut v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    v.sort();
    v
}

/// `{signature: {concepts, roles, constants}, tbox, abox}` with sorted string arrays.
pub fn kb_json(kb: &KnowledgeBase) -> Value {
    json!({
        "signature": {
            "concepts": strings(&kb.signature.concepts),
            "roles": strings(&kb.signature.roles),
            "constants": strings(&kb.signature.constants),
        },
        "tbox": strings(&kb.tbox),
        "abox": strings(&kb.abox),
    })
}

/// `{semantics, variant: "single" | "disjunctive", members: [kb], dropped: [[assertion]]}`;
/// members of a disjunctive result are sorted by their printed text.
pub fn result_json(r: &EvolutionResult) -> Value {
    let (variant, mut members) = match &r.variant {
        ResultVariant::Single(k) => ("single", vec![k]),
        ResultVariant::Disjunctive(v) => ("disjunctive", v.iter().collect()),
    };
    members.sort_by_key(|k| print_kb(k));
    json!({
        "semantics": r.semantics,
        "variant": variant,
        "members": members.into_iter().map(kb_json).collect::<Vec<_>>(),
        "dropped": r.dropped.iter().map(strings).collect::<Vec<_>>(),
    })
}

/// `{kept: [assertion], dropped: [{assertion, reason}], result: kb}`.
pub fn careful_json(r: &CarefulResult) -> Value {
    json!({
        "kept": strings(&r.kept),
        "dropped": r.dropped.iter().map(|d| json!({"assertion": d.assertion.to_string(), "reason": d.reason})).collect::<Vec<_>>(),
        "result": kb_json(&r.result),
    })
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Assertion(a) => json!({"kind": "assertion", "value": a.to_string()}),
        Witness::Symbol(s) => json!({"kind": "symbol", "value": s}),
        Witness::Kb(k) => json!({"kind": "kb", "value": kb_json(k)}),
        Witness::KbPair(a, b) => json!({"kind": "kb_pair", "value": [kb_json(a), kb_json(b)]}),
        Witness::Model(m) => json!({"kind": "model", "domain": m.domain, "atoms": strings(&m.atoms)}),
    }
}

/// `{operator, instance, verdicts: [{postulate, verdict, witness?, reason?}], notes}`.
pub fn report_json(r: &PostulateReport) -> Value {
    let verdicts: Vec<Value> = r
        .verdicts
        .iter()
        .map(|(name, v)| match v {
            Verdict::Holds => json!({"postulate": name, "verdict": "holds"}),
            Verdict::Fails(w) => json!({"postulate": name, "verdict": "fails", "witness": witness_json(w)}),
            Verdict::NotApplicable(why) => json!({"postulate": name, "verdict": "not_applicable", "reason": why}),
        })
        .collect();
    json!({"operator": r.operator, "instance": r.instance, "verdicts": verdicts, "notes": r.notes})
}

/// `{domain, count, models: [[atom]]}`, listing at most `limit` models.
pub fn models_json(ms: &ModelSet, limit: usize) -> Result<Value> {
    let members = ms.members()?;
    let models: Vec<Value> = members.iter().take(limit).map(|&j| json!(strings(&ms.universe.decode(j).atoms))).collect();
    Ok(json!({"domain": ms.universe.domain, "count": members.len(), "models": models}))
}
