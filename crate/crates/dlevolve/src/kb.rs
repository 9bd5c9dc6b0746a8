//! Signatures, concepts, roles, axioms, assertions and knowledge bases.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// An atomic role `P` or its inverse `P-`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Role {
    pub name: String,
    pub inverse: bool,
}

impl Role {
    pub fn new(name: impl Into<String>) -> Self {
        Role { name: name.into(), inverse: false }
    }

    pub fn inv(name: impl Into<String>) -> Self {
        Role { name: name.into(), inverse: true }
    }

    /// The inverse role; `(P-)-` is `P`.
    pub fn inverted(&self) -> Self {
        Role { name: self.name.clone(), inverse: !self.inverse }
    }
}

/// `A` or `exists R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basic {
    Atomic(String),
    Exists(Role),
}

impl Basic {
    pub fn atomic(name: impl Into<String>) -> Self {
        Basic::Atomic(name.into())
    }

    pub fn exists(role: Role) -> Self {
        Basic::Exists(role)
    }
}

/// `B` or `not B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Concept {
    pub base: Basic,
    pub negated: bool,
}

impl Concept {
    pub fn pos(base: Basic) -> Self {
        Concept { base, negated: false }
    }

    pub fn neg(base: Basic) -> Self {
        Concept { base, negated: true }
    }
}

/// A TBox assertion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    ConceptIncl(Basic, Concept),
    RoleIncl(Role, Role),
    Funct(Role),
}

impl Axiom {
    pub fn incl(lhs: Basic, rhs: Basic) -> Self {
        Axiom::ConceptIncl(lhs, Concept::pos(rhs))
    }

    pub fn disj(lhs: Basic, rhs: Basic) -> Self {
        Axiom::ConceptIncl(lhs, Concept::neg(rhs))
    }

    /// Role inclusion in canonical form: `P- <= Q` is stored as `P <= Q-`.
    pub fn role_incl(lhs: Role, rhs: Role) -> Self {
        if lhs.inverse {
            Axiom::RoleIncl(lhs.inverted(), rhs.inverted())
        } else {
            Axiom::RoleIncl(lhs, rhs)
        }
    }

    /// `B <= B` and `R <= R`.
    pub fn is_trivial(&self) -> bool {
        match self {
            Axiom::ConceptIncl(l, r) => !r.negated && *l == r.base,
            Axiom::RoleIncl(l, r) => l == r,
            Axiom::Funct(_) => false,
        }
    }
}

/// An ABox assertion `B(a)` or `P(a,b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Membership {
    Concept(Basic, String),
    Role(String, String, String),
}

impl Membership {
    pub fn concept(b: Basic, a: impl Into<String>) -> Self {
        Membership::Concept(b, a.into())
    }

    pub fn atomic(c: &str, a: &str) -> Self {
        Membership::Concept(Basic::atomic(c), a.to_string())
    }

    pub fn role(p: &str, a: &str, b: &str) -> Self {
        Membership::Role(p.to_string(), a.to_string(), b.to_string())
    }

    /// `R(a,b)` for a possibly inverse role, normalized to an atomic role atom.
    pub fn role_of(r: &Role, a: &str, b: &str) -> Self {
        if r.inverse {
            Membership::role(&r.name, b, a)
        } else {
            Membership::role(&r.name, a, b)
        }
    }

    pub fn constants(&self) -> Vec<&str> {
        match self {
            Membership::Concept(_, a) => vec![a.as_str()],
            Membership::Role(_, a, b) => vec![a.as_str(), b.as_str()],
        }
    }
}

/// Any assertion: TBox axiom or ABox membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Assertion {
    T(Axiom),
    A(Membership),
}

impl From<Axiom> for Assertion {
    fn from(a: Axiom) -> Self {
        Assertion::T(a)
    }
}

impl From<Membership> for Assertion {
    fn from(m: Membership) -> Self {
        Assertion::A(m)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub concepts: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub constants: BTreeSet<String>,
}

impl Signature {
    pub fn new<I, J, K, S1, S2, S3>(concepts: I, roles: J, constants: K) -> Self
    where
        I: IntoIterator<Item = S1>,
        J: IntoIterator<Item = S2>,
        K: IntoIterator<Item = S3>,
        S1: Into<String>,
        S2: Into<String>,
        S3: Into<String>,
    {
        Signature {
            concepts: concepts.into_iter().map(Into::into).collect(),
            roles: roles.into_iter().map(Into::into).collect(),
            constants: constants.into_iter().map(Into::into).collect(),
        }
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            concepts: self.concepts.union(&other.concepts).cloned().collect(),
            roles: self.roles.union(&other.roles).cloned().collect(),
            constants: self.constants.union(&other.constants).cloned().collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fragment {
    Core,
    F,
    FR,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Core => "core",
            Fragment::F => "F",
            Fragment::FR => "FR",
        })
    }
}

/// `K = T ∪ A` over a declared signature.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnowledgeBase {
    pub signature: Signature,
    pub tbox: BTreeSet<Axiom>,
    pub abox: BTreeSet<Membership>,
}

impl KnowledgeBase {
    pub fn new(signature: Signature) -> Self {
        KnowledgeBase { signature, ..Default::default() }
    }

    /// Builds a KB whose signature is exactly the symbols used.
    pub fn from_assertions<I: IntoIterator<Item = Assertion>>(items: I) -> Self {
        let mut kb = KnowledgeBase::default();
        for a in items {
            kb.insert(a);
        }
        kb
    }

    pub fn with_signature<I: IntoIterator<Item = Assertion>>(signature: Signature, items: I) -> Self {
        let mut kb = KnowledgeBase::new(signature);
        for a in items {
            kb.insert(a);
        }
        kb
    }

    /// Inserts an assertion, declaring any symbols it uses.
    pub fn insert(&mut self, a: Assertion) {
        declare_symbols(&mut self.signature, &a);
        match a {
            Assertion::T(ax) => {
                self.tbox.insert(ax);
            }
            Assertion::A(m) => {
                self.abox.insert(m);
            }
        }
    }

    pub fn remove(&mut self, a: &Assertion) -> bool {
        match a {
            Assertion::T(ax) => self.tbox.remove(ax),
            Assertion::A(m) => self.abox.remove(m),
        }
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        match a {
            Assertion::T(ax) => self.tbox.contains(ax),
            Assertion::A(m) => self.abox.contains(m),
        }
    }

    pub fn len(&self) -> usize {
        self.tbox.len() + self.abox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbox.is_empty() && self.abox.is_empty()
    }

    /// All assertions, TBox first, each part in structural order.
    pub fn assertions(&self) -> Vec<Assertion> {
        self.tbox
            .iter()
            .cloned()
            .map(Assertion::T)
            .chain(self.abox.iter().cloned().map(Assertion::A))
            .collect()
    }

    /// Assertions sorted by their canonical text rendering.
    pub fn canonical_order(&self) -> Vec<Assertion> {
        let mut v = self.assertions();
        v.sort_by_cached_key(|a| a.to_string());
        v
    }

    /// Same signature and TBox, ABox replaced.
    pub fn with_abox<I: IntoIterator<Item = Membership>>(&self, abox: I) -> Self {
        let mut kb = KnowledgeBase {
            signature: self.signature.clone(),
            tbox: self.tbox.clone(),
            abox: BTreeSet::new(),
        };
        for m in abox {
            kb.insert(Assertion::A(m));
        }
        kb
    }

    pub fn tbox_only(&self) -> Self {
        self.with_abox(std::iter::empty())
    }

    /// Union of assertions and signatures.
    pub fn union(&self, other: &KnowledgeBase) -> Self {
        KnowledgeBase {
            signature: self.signature.union(&other.signature),
            tbox: self.tbox.union(&other.tbox).cloned().collect(),
            abox: self.abox.union(&other.abox).cloned().collect(),
        }
    }

    /// Constants occurring in the ABox.
    pub fn adom(&self) -> BTreeSet<String> {
        self.abox
            .iter()
            .flat_map(|m| m.constants().into_iter().map(str::to_string))
            .collect()
    }

    pub fn validate(&self) -> Vec<String> {
        validate(self)
    }

    pub fn fragment(&self) -> Fragment {
        fragment_of(self)
    }
}

/// Adds the symbols used by `a` to `sig`.
pub fn declare_symbols(sig: &mut Signature, a: &Assertion) {
    fn basic(sig: &mut Signature, b: &Basic) {
        match b {
            Basic::Atomic(c) => {
                sig.concepts.insert(c.clone());
            }
            Basic::Exists(r) => {
                sig.roles.insert(r.name.clone());
            }
        }
    }
    match a {
        Assertion::T(Axiom::ConceptIncl(l, r)) => {
            basic(sig, l);
            basic(sig, &r.base);
        }
        Assertion::T(Axiom::RoleIncl(l, r)) => {
            sig.roles.insert(l.name.clone());
            sig.roles.insert(r.name.clone());
        }
        Assertion::T(Axiom::Funct(r)) => {
            sig.roles.insert(r.name.clone());
        }
        Assertion::A(Membership::Concept(b, a)) => {
            basic(sig, b);
            sig.constants.insert(a.clone());
        }
        Assertion::A(Membership::Role(p, a, b)) => {
            sig.roles.insert(p.clone());
            sig.constants.insert(a.clone());
            sig.constants.insert(b.clone());
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One description per violated invariant; empty iff the KB is well formed.
pub fn validate(kb: &KnowledgeBase) -> Vec<String> {
    let sig = &kb.signature;
    let mut out = Vec::new();
    for name in sig.concepts.intersection(&sig.roles) {
        out.push(format!("name {name} declared both as concept and role"));
    }
    for name in sig.concepts.iter().chain(&sig.roles).chain(&sig.constants) {
        if !is_identifier(name) {
            out.push(format!("invalid identifier {name:?}"));
        }
    }
    let check_basic = |b: &Basic, ctx: &str, out: &mut Vec<String>| match b {
        Basic::Atomic(c) if !sig.concepts.contains(c) => {
            out.push(format!("unknown concept {c} in {ctx}"))
        }
        Basic::Exists(r) if !sig.roles.contains(&r.name) => {
            out.push(format!("unknown role {} in {ctx}", r.name))
        }
        _ => {}
    };
    for ax in &kb.tbox {
        let ctx = ax.to_string();
        match ax {
            Axiom::ConceptIncl(l, r) => {
                check_basic(l, &ctx, &mut out);
                check_basic(&r.base, &ctx, &mut out);
            }
            Axiom::RoleIncl(l, r) => {
                for role in [l, r] {
                    if !sig.roles.contains(&role.name) {
                        out.push(format!("unknown role {} in {ctx}", role.name));
                    }
                }
            }
            Axiom::Funct(r) => {
                if !sig.roles.contains(&r.name) {
                    out.push(format!("unknown role {} in {ctx}", r.name));
                }
            }
        }
    }
    let superroles: BTreeSet<&str> = kb
        .tbox
        .iter()
        .filter_map(|ax| match ax {
            Axiom::RoleIncl(_, r) => Some(r.name.as_str()),
            _ => None,
        })
        .collect();
    for ax in &kb.tbox {
        if let Axiom::Funct(r) = ax {
            if superroles.contains(r.name.as_str()) {
                out.push(format!("functional superrole {} in {ax}", r.name));
            }
        }
    }
    for m in &kb.abox {
        let ctx = m.to_string();
        match m {
            Membership::Concept(b, _) => check_basic(b, &ctx, &mut out),
            Membership::Role(p, _, _) => {
                if !sig.roles.contains(p) {
                    out.push(format!("unknown role {p} in {ctx}"));
                }
            }
        }
        for c in m.constants() {
            if !sig.constants.contains(c) {
                out.push(format!("unknown constant {c} in {ctx}"));
            }
        }
    }
    out
}

pub fn fragment_of(kb: &KnowledgeBase) -> Fragment {
    let has_ri = kb.tbox.iter().any(|a| matches!(a, Axiom::RoleIncl(..)));
    let has_f = kb.tbox.iter().any(|a| matches!(a, Axiom::Funct(..)));
    match (has_f, has_ri) {
        (_, true) => Fragment::FR,
        (true, false) => Fragment::F,
        (false, false) => Fragment::Core,
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}-", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basic::Atomic(c) => f.write_str(c),
            Basic::Exists(r) => write!(f, "exists {r}"),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not {}", self.base)
        } else {
            write!(f, "{}", self.base)
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::ConceptIncl(l, r) => write!(f, "{l} <= {r}"),
            Axiom::RoleIncl(l, r) => write!(f, "{l} <=r {r}"),
            Axiom::Funct(r) => write!(f, "funct {r}"),
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Concept(b, a) => write!(f, "{b}({a})"),
            Membership::Role(p, a, b) => write!(f, "{p}({a}, {b})"),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::T(a) => a.fmt(f),
            Assertion::A(m) => m.fmt(f),
        }
    }
}
