//! Bounded-domain interpretations and the model-based evolution semantics.
//!
//! A KB over a fixed finite domain is grounded into CNF over at most 128
//! ground atoms; an interpretation is a bit vector over those atoms.
//! Models are enumerated with a small DPLL search and minimal-distance
//! models are found by a repair search that flips atoms of violated clauses.

use crate::error::{Error, Result};
use crate::kb::{Assertion, Axiom, Basic, KnowledgeBase, Membership, Role, Signature};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

pub type Bits = u128;

pub const MAX_ATOMS: usize = 128;
/// Upper bound on interpretations materialized by any single enumeration.
pub const MAX_MODELS: usize = 1 << 24;
/// Upper bound on candidate atoms for the exhaustive all-interpretations oracle.
pub const NAIVE_MAX_ATOMS: usize = 24;
const MAX_SYMBOLS: usize = 16;

/// `J ⊨ clause` iff some positive atom is true or some negative atom is false.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub pos: Bits,
    pub neg: Bits,
}

impl Clause {
    #[inline]
    pub fn sat(&self, j: Bits) -> bool {
        (self.pos & j) != 0 || (self.neg & !j) != 0
    }

    fn unit_pos(a: Bits) -> Self {
        Clause { pos: a, neg: 0 }
    }

    fn unit_neg(a: Bits) -> Self {
        Clause { pos: 0, neg: a }
    }
}

#[inline]
fn bits_iter(mut b: Bits) -> impl Iterator<Item = Bits> {
    std::iter::from_fn(move || {
        if b == 0 {
            None
        } else {
            let low = b & b.wrapping_neg();
            b ^= low;
            Some(low)
        }
    })
}

pub fn holds(j: Bits, clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| c.sat(j))
}

/// A ground atom over the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroundAtom {
    Concept(String, String),
    Role(String, String, String),
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundAtom::Concept(c, a) => write!(f, "{c}({a})"),
            GroundAtom::Role(p, a, b) => write!(f, "{p}({a}, {b})"),
        }
    }
}

/// A finite interpretation viewed as a set of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interpretation {
    pub domain: Vec<String>,
    pub atoms: BTreeSet<GroundAtom>,
}

impl Interpretation {
    fn concept_ext(&self, c: &str) -> BTreeSet<&str> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                GroundAtom::Concept(x, o) if x == c => Some(o.as_str()),
                _ => None,
            })
            .collect()
    }

    fn role_ext(&self, r: &Role) -> BTreeSet<(&str, &str)> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                GroundAtom::Role(p, x, y) if *p == r.name => {
                    Some(if r.inverse { (y.as_str(), x.as_str()) } else { (x.as_str(), y.as_str()) })
                }
                _ => None,
            })
            .collect()
    }

    fn basic_ext(&self, b: &Basic) -> BTreeSet<&str> {
        match b {
            Basic::Atomic(c) => self.concept_ext(c),
            Basic::Exists(r) => self.role_ext(r).into_iter().map(|(x, _)| x).collect(),
        }
    }

    /// Direct model checking from the set-theoretic semantics.
    pub fn satisfies(&self, a: &Assertion) -> bool {
        match a {
            Assertion::T(Axiom::ConceptIncl(l, r)) => {
                let le = self.basic_ext(l);
                let re = self.basic_ext(&r.base);
                if r.negated {
                    le.is_disjoint(&re)
                } else {
                    le.is_subset(&re)
                }
            }
            Assertion::T(Axiom::RoleIncl(l, r)) => self.role_ext(l).is_subset(&self.role_ext(r)),
            Assertion::T(Axiom::Funct(r)) => {
                let e: Vec<(&str, &str)> = self.role_ext(r).into_iter().collect();
                e.windows(2).all(|w| w[0].0 != w[1].0)
            }
            Assertion::A(Membership::Concept(b, x)) => self.basic_ext(b).contains(x.as_str()),
            Assertion::A(Membership::Role(p, x, y)) => {
                self.atoms.contains(&GroundAtom::Role(p.clone(), x.clone(), y.clone()))
            }
        }
    }

    pub fn is_model(&self, kb: &KnowledgeBase) -> bool {
        kb.assertions().iter().all(|a| self.satisfies(a))
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", atoms.join(", "))
    }
}

/// The ground-atom space for a signature and domain.
#[derive(Clone, Debug)]
pub struct Universe {
    pub domain: Vec<String>,
    pub n_named: usize,
    pub concepts: Vec<String>,
    pub roles: Vec<String>,
    cidx: HashMap<String, usize>,
    ridx: HashMap<String, usize>,
    didx: HashMap<String, usize>,
    pub n_atoms: usize,
    symbol_masks: Vec<Bits>,
}

impl Universe {
    /// Named constants of `sig` first, then anonymous elements up to `domain_size`.
    pub fn new(sig: &Signature, domain_size: usize) -> Result<Self> {
        let named: Vec<String> = sig.constants.iter().cloned().collect();
        if domain_size < named.len() || domain_size == 0 {
            return Err(Error::DomainTooSmall { size: domain_size, needed: named.len().max(1) });
        }
        let mut domain = named.clone();
        let mut k = 1;
        while domain.len() < domain_size {
            let name = format!("_o{k}");
            k += 1;
            if !sig.constants.contains(&name) {
                domain.push(name);
            }
        }
        let concepts: Vec<String> = sig.concepts.iter().cloned().collect();
        let roles: Vec<String> = sig.roles.iter().cloned().collect();
        let d = domain.len();
        let n_atoms = concepts.len() * d + roles.len() * d * d;
        if n_atoms > MAX_ATOMS {
            return Err(Error::SearchSpaceTooLarge(format!(
                "{n_atoms} candidate atoms exceed the limit of {MAX_ATOMS}"
            )));
        }
        let mut u = Universe {
            cidx: concepts.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect(),
            ridx: roles.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect(),
            didx: domain.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect(),
            n_named: named.len(),
            domain,
            concepts,
            roles,
            n_atoms,
            symbol_masks: Vec::new(),
        };
        let mut masks = Vec::new();
        for c in 0..u.concepts.len() {
            masks.push((0..d).fold(0, |m, x| m | u.concept_atom(c, x)));
        }
        for p in 0..u.roles.len() {
            let mut m = 0;
            for x in 0..d {
                for y in 0..d {
                    m |= u.role_atom(p, x, y);
                }
            }
            masks.push(m);
        }
        u.symbol_masks = masks;
        Ok(u)
    }

    pub fn d(&self) -> usize {
        self.domain.len()
    }

    pub fn all_atoms(&self) -> Bits {
        if self.n_atoms == 128 {
            Bits::MAX
        } else {
            (1u128 << self.n_atoms) - 1
        }
    }

    fn concept_atom(&self, c: usize, x: usize) -> Bits {
        1u128 << (c * self.d() + x)
    }

    fn role_atom(&self, p: usize, x: usize, y: usize) -> Bits {
        let d = self.d();
        1u128 << (self.concepts.len() * d + p * d * d + x * d + y)
    }

    pub fn n_symbols(&self) -> usize {
        self.symbol_masks.len()
    }

    pub fn symbol_name(&self, s: usize) -> &str {
        if s < self.concepts.len() {
            &self.concepts[s]
        } else {
            &self.roles[s - self.concepts.len()]
        }
    }

    pub fn symbol_mask(&self, s: usize) -> Bits {
        self.symbol_masks[s]
    }

    /// Symbols whose extension differs between two interpretations.
    pub fn symbol_diff(&self, i: Bits, j: Bits) -> u32 {
        let x = i ^ j;
        let mut d = 0u32;
        for (s, m) in self.symbol_masks.iter().enumerate() {
            if x & m != 0 {
                d |= 1 << s;
            }
        }
        d
    }

    fn elem(&self, a: &str) -> usize {
        self.didx[a]
    }

    fn role_pair(&self, r: &Role, x: usize, y: usize) -> Bits {
        let p = self.ridx[&r.name];
        if r.inverse {
            self.role_atom(p, y, x)
        } else {
            self.role_atom(p, x, y)
        }
    }

    /// The atoms any one of which makes `b(x)` true.
    fn lits(&self, b: &Basic, x: usize) -> Bits {
        match b {
            Basic::Atomic(c) => self.concept_atom(self.cidx[c], x),
            Basic::Exists(r) => (0..self.d()).fold(0, |m, y| m | self.role_pair(r, x, y)),
        }
    }

    fn check_symbols(&self, a: &Assertion) -> Result<()> {
        let mut s = Signature::default();
        crate::kb::declare_symbols(&mut s, a);
        for c in &s.concepts {
            if !self.cidx.contains_key(c) {
                return Err(Error::PreconditionViolated(format!("concept {c} outside the universe")));
            }
        }
        for r in &s.roles {
            if !self.ridx.contains_key(r) {
                return Err(Error::PreconditionViolated(format!("role {r} outside the universe")));
            }
        }
        for k in &s.constants {
            if !self.didx.contains_key(k) {
                return Err(Error::PreconditionViolated(format!("constant {k} outside the domain")));
            }
        }
        Ok(())
    }

    /// Clauses whose conjunction holds exactly in the interpretations satisfying `a`.
    pub fn compile(&self, a: &Assertion) -> Result<Vec<Clause>> {
        self.check_symbols(a)?;
        let d = self.d();
        let mut out = Vec::new();
        let mut push = |c: Clause| {
            if c.pos & c.neg == 0 {
                out.push(c);
            }
        };
        match a {
            Assertion::T(Axiom::ConceptIncl(l, r)) => {
                for x in 0..d {
                    let ll = self.lits(l, x);
                    let rl = self.lits(&r.base, x);
                    for la in bits_iter(ll) {
                        if r.negated {
                            for ra in bits_iter(rl) {
                                push(Clause::unit_neg(la | ra));
                            }
                        } else {
                            push(Clause { pos: rl, neg: la });
                        }
                    }
                }
            }
            Assertion::T(Axiom::RoleIncl(l, r)) => {
                for x in 0..d {
                    for y in 0..d {
                        push(Clause { pos: self.role_pair(r, x, y), neg: self.role_pair(l, x, y) });
                    }
                }
            }
            Assertion::T(Axiom::Funct(r)) => {
                for x in 0..d {
                    for y1 in 0..d {
                        for y2 in y1 + 1..d {
                            push(Clause::unit_neg(self.role_pair(r, x, y1) | self.role_pair(r, x, y2)));
                        }
                    }
                }
            }
            Assertion::A(Membership::Concept(b, a)) => push(Clause::unit_pos(self.lits(b, self.elem(a)))),
            Assertion::A(Membership::Role(p, a, b)) => {
                push(Clause::unit_pos(self.role_pair(&Role::new(p.as_str()), self.elem(a), self.elem(b))))
            }
        }
        Ok(out)
    }

    /// Cases whose disjunction holds exactly in the interpretations falsifying `a`.
    pub fn negate(&self, a: &Assertion) -> Result<Vec<Vec<Clause>>> {
        self.check_symbols(a)?;
        let d = self.d();
        let units_false = |m: Bits| bits_iter(m).map(Clause::unit_neg).collect::<Vec<_>>();
        let mut cases = Vec::new();
        match a {
            Assertion::T(Axiom::ConceptIncl(l, r)) => {
                for x in 0..d {
                    let mut case = vec![Clause::unit_pos(self.lits(l, x))];
                    let rl = self.lits(&r.base, x);
                    if r.negated {
                        case.push(Clause::unit_pos(rl));
                    } else {
                        case.extend(units_false(rl));
                    }
                    cases.push(case);
                }
            }
            Assertion::T(Axiom::RoleIncl(l, r)) => {
                for x in 0..d {
                    for y in 0..d {
                        cases.push(vec![
                            Clause::unit_pos(self.role_pair(l, x, y)),
                            Clause::unit_neg(self.role_pair(r, x, y)),
                        ]);
                    }
                }
            }
            Assertion::T(Axiom::Funct(r)) => {
                for x in 0..d {
                    for y1 in 0..d {
                        for y2 in y1 + 1..d {
                            cases.push(vec![
                                Clause::unit_pos(self.role_pair(r, x, y1)),
                                Clause::unit_pos(self.role_pair(r, x, y2)),
                            ]);
                        }
                    }
                }
            }
            Assertion::A(Membership::Concept(b, a)) => cases.push(units_false(self.lits(b, self.elem(a)))),
            Assertion::A(Membership::Role(p, a, b)) => cases.push(vec![Clause::unit_neg(self.role_pair(
                &Role::new(p.as_str()),
                self.elem(a),
                self.elem(b),
            ))]),
        }
        cases.retain(|c| c.iter().all(|cl| cl.pos | cl.neg != 0));
        Ok(cases)
    }

    pub fn theory(&self, kb: &KnowledgeBase) -> Result<Vec<Clause>> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for a in kb.assertions() {
            for c in self.compile(&a)? {
                if seen.insert(c) {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    pub fn holds_assertion(&self, j: Bits, a: &Assertion) -> Result<bool> {
        Ok(holds(j, &self.compile(a)?))
    }

    pub fn decode(&self, j: Bits) -> Interpretation {
        let d = self.d();
        let mut atoms = BTreeSet::new();
        for (c, name) in self.concepts.iter().enumerate() {
            for x in 0..d {
                if j & self.concept_atom(c, x) != 0 {
                    atoms.insert(GroundAtom::Concept(name.clone(), self.domain[x].clone()));
                }
            }
        }
        for (p, name) in self.roles.iter().enumerate() {
            for x in 0..d {
                for y in 0..d {
                    if j & self.role_atom(p, x, y) != 0 {
                        atoms.insert(GroundAtom::Role(
                            name.clone(),
                            self.domain[x].clone(),
                            self.domain[y].clone(),
                        ));
                    }
                }
            }
        }
        Interpretation { domain: self.domain.clone(), atoms }
    }

    pub fn encode(&self, i: &Interpretation) -> Result<Bits> {
        let mut j = 0;
        for a in &i.atoms {
            let bad = || Error::PreconditionViolated(format!("atom {a} outside the universe"));
            j |= match a {
                GroundAtom::Concept(c, x) => {
                    let c = *self.cidx.get(c).ok_or_else(bad)?;
                    self.concept_atom(c, *self.didx.get(x).ok_or_else(bad)?)
                }
                GroundAtom::Role(p, x, y) => {
                    let p = *self.ridx.get(p).ok_or_else(bad)?;
                    let x = *self.didx.get(x).ok_or_else(bad)?;
                    self.role_atom(p, x, *self.didx.get(y).ok_or_else(bad)?)
                }
            };
        }
        Ok(j)
    }
}

/// Unit propagation over a partial assignment; false on conflict.
fn propagate(clauses: &[Clause], assigned: &mut Bits, val: &mut Bits) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            let t = *assigned & *val;
            let f = *assigned & !*val;
            if (c.pos & t) != 0 || (c.neg & f) != 0 {
                continue;
            }
            let open = (c.pos | c.neg) & !*assigned;
            if open == 0 {
                return false;
            }
            if open & (open - 1) == 0 {
                *assigned |= open;
                if c.pos & open != 0 {
                    *val |= open;
                } else {
                    *val &= !open;
                }
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
}

/// An unassigned atom from the first clause not yet satisfied, else any unassigned atom.
fn pick(clauses: &[Clause], assigned: Bits, val: Bits, all: Bits) -> Option<Bits> {
    let t = assigned & val;
    let f = assigned & !val;
    for c in clauses {
        if (c.pos & t) != 0 || (c.neg & f) != 0 {
            continue;
        }
        let open = (c.pos | c.neg) & !assigned;
        return Some(open & open.wrapping_neg());
    }
    let free = all & !assigned;
    if free == 0 {
        None
    } else {
        Some(free & free.wrapping_neg())
    }
}

fn sat_rec(clauses: &[Clause], all: Bits, mut assigned: Bits, mut val: Bits) -> bool {
    if !propagate(clauses, &mut assigned, &mut val) {
        return false;
    }
    let t = assigned & val;
    let f = assigned & !val;
    let open_clause = clauses.iter().find(|c| (c.pos & t) == 0 && (c.neg & f) == 0);
    let Some(c) = open_clause else { return true };
    let open = (c.pos | c.neg) & !assigned;
    let v = open & open.wrapping_neg();
    let first_true = c.pos & v != 0;
    for value in [first_true, !first_true] {
        let nv = if value { val | v } else { val & !v };
        if sat_rec(clauses, all, assigned | v, nv) {
            return true;
        }
    }
    let _ = all;
    false
}

/// Is there a model of `clauses` agreeing with `val` on `mask`?
pub fn satisfiable(clauses: &[Clause], all: Bits, mask: Bits, val: Bits) -> bool {
    sat_rec(clauses, all, mask, val & mask)
}

fn enum_rec(
    clauses: &[Clause],
    all: Bits,
    mut assigned: Bits,
    mut val: Bits,
    out: &mut Vec<Bits>,
    cap: usize,
) -> Result<()> {
    if !propagate(clauses, &mut assigned, &mut val) {
        return Ok(());
    }
    match pick(clauses, assigned, val, all) {
        None => {
            if out.len() >= cap {
                return Err(Error::SearchSpaceTooLarge(format!("more than {cap} models")));
            }
            out.push(val);
            Ok(())
        }
        Some(v) => {
            enum_rec(clauses, all, assigned | v, val & !v, out, cap)?;
            enum_rec(clauses, all, assigned | v, val | v, out, cap)
        }
    }
}

/// All models of `clauses` agreeing with `val` on `mask`, sorted.
pub fn models_of(clauses: &[Clause], all: Bits, mask: Bits, val: Bits, cap: usize) -> Result<Vec<Bits>> {
    let mut out = Vec::new();
    enum_rec(clauses, all, mask, val & mask, &mut out, cap)?;
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Debug)]
enum Part {
    Explicit(BTreeSet<Bits>),
    /// Models of `cnf` agreeing with `val` on `mask`.
    Cylinder { cnf: Arc<Vec<Clause>>, mask: Bits, val: Bits },
}

/// A finite union of explicit interpretations and constrained model sets.
#[derive(Clone, Debug)]
pub struct ModelSet {
    pub universe: Arc<Universe>,
    parts: Vec<Part>,
}

impl ModelSet {
    pub fn explicit(universe: Arc<Universe>, models: impl IntoIterator<Item = Bits>) -> Self {
        ModelSet { universe, parts: vec![Part::Explicit(models.into_iter().collect())] }
    }

    pub fn from_interpretations(universe: Arc<Universe>, items: &[Interpretation]) -> Result<Self> {
        let bits = items.iter().map(|i| universe.encode(i)).collect::<Result<Vec<_>>>()?;
        Ok(ModelSet::explicit(universe, bits))
    }

    /// Does some member satisfy every clause of `extra`?
    pub fn any_with(&self, extra: &[Clause]) -> bool {
        let all = self.universe.all_atoms();
        self.parts.iter().any(|p| match p {
            Part::Explicit(s) => s.iter().any(|&j| holds(j, extra)),
            Part::Cylinder { cnf, mask, val } => {
                let mut c: Vec<Clause> = extra.to_vec();
                c.extend_from_slice(cnf);
                satisfiable(&c, all, *mask, *val)
            }
        })
    }

    pub fn is_empty(&self) -> bool {
        !self.any_with(&[])
    }

    /// Some member falsifies `a`.
    pub fn any_violating(&self, a: &Assertion) -> Result<bool> {
        Ok(self.universe.negate(a)?.iter().any(|case| self.any_with(case)))
    }

    /// Some member falsifies both `a` and `b`.
    pub fn any_violating_both(&self, a: &Assertion, b: &Assertion) -> Result<bool> {
        let na = self.universe.negate(a)?;
        let nb = self.universe.negate(b)?;
        for ca in &na {
            for cb in &nb {
                let mut c = ca.clone();
                c.extend_from_slice(cb);
                if self.any_with(&c) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    pub fn all_satisfy(&self, a: &Assertion) -> Result<bool> {
        Ok(!self.any_violating(a)?)
    }

    pub fn contains(&self, j: Bits) -> bool {
        self.parts.iter().any(|p| match p {
            Part::Explicit(s) => s.contains(&j),
            Part::Cylinder { cnf, mask, val } => j & mask == val & mask && holds(j, cnf),
        })
    }

    /// Every member, sorted.
    pub fn members(&self) -> Result<BTreeSet<Bits>> {
        let all = self.universe.all_atoms();
        let mut out = BTreeSet::new();
        for p in &self.parts {
            match p {
                Part::Explicit(s) => out.extend(s.iter().copied()),
                Part::Cylinder { cnf, mask, val } => out.extend(models_of(cnf, all, *mask, *val, MAX_MODELS)?),
            }
            if out.len() > MAX_MODELS {
                return Err(Error::SearchSpaceTooLarge(format!("more than {MAX_MODELS} models")));
            }
        }
        Ok(out)
    }

    pub fn interpretations(&self) -> Result<Vec<Interpretation>> {
        Ok(self.members()?.into_iter().map(|j| self.universe.decode(j)).collect())
    }

    pub fn len(&self) -> Result<usize> {
        Ok(self.members()?.len())
    }

    /// Is every member of `self` a member of `other`? Both must share the universe.
    pub fn subset_of(&self, other: &ModelSet) -> Result<bool> {
        Ok(self.members()?.iter().all(|&j| other.contains(j)))
    }

    pub fn n_parts(&self) -> usize {
        self.parts.len()
    }
}

pub(crate) fn universe_for(kbs: &[&KnowledgeBase], extra: &[&Assertion], domain_size: usize) -> Result<Universe> {
    let mut sig = Signature::default();
    for kb in kbs {
        sig = sig.union(&kb.signature);
        for a in kb.assertions() {
            crate::kb::declare_symbols(&mut sig, &a);
        }
    }
    for a in extra {
        crate::kb::declare_symbols(&mut sig, a);
    }
    Universe::new(&sig, domain_size)
}

/// All models of `kb` over a domain of the given size, in a fixed order.
pub fn enumerate_models(kb: &KnowledgeBase, domain_size: usize) -> Result<Vec<Interpretation>> {
    let u = universe_for(&[kb], &[], domain_size)?;
    let t = u.theory(kb)?;
    let ms = models_of(&t, u.all_atoms(), 0, 0, MAX_MODELS)?;
    Ok(ms.into_iter().map(|j| u.decode(j)).collect())
}

/// Exhaustive scan of all `2^n` interpretations, checked by direct semantics.
pub fn naive_models(kb: &KnowledgeBase, domain_size: usize) -> Result<Vec<Interpretation>> {
    let u = universe_for(&[kb], &[], domain_size)?;
    if u.n_atoms > NAIVE_MAX_ATOMS {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{} candidate atoms exceed the limit of {NAIVE_MAX_ATOMS}",
            u.n_atoms
        )));
    }
    let items = kb.assertions();
    Ok((0..(1u128 << u.n_atoms))
        .map(|j| u.decode(j))
        .filter(|i| items.iter().all(|a| i.satisfies(a)))
        .collect())
}

/// Every bounded-domain model of `kb` satisfies `a`.
pub fn brute_entails(kb: &KnowledgeBase, a: &Assertion, domain_size: usize) -> Result<bool> {
    let u = universe_for(&[kb], &[a], domain_size)?;
    let t = u.theory(kb)?;
    for case in u.negate(a)? {
        let mut c = t.clone();
        c.extend(case);
        if satisfiable(&c, u.all_atoms(), 0, 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `kb` has a model over a domain of the given size.
pub fn brute_satisfiable(kb: &KnowledgeBase, domain_size: usize) -> Result<bool> {
    let u = universe_for(&[kb], &[], domain_size)?;
    Ok(satisfiable(&u.theory(kb)?, u.all_atoms(), 0, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scope {
    Local,
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Granularity {
    Atoms,
    Symbols,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    Set,
    Card,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvolutionKind {
    Kb,
    Abox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MbaConfig {
    pub scope: Scope,
    pub granularity: Granularity,
    pub measure: Measure,
    pub kind: EvolutionKind,
    pub domain_size: usize,
}

impl MbaConfig {
    pub fn new(scope: Scope, granularity: Granularity, measure: Measure, domain_size: usize) -> Self {
        MbaConfig { scope, granularity, measure, kind: EvolutionKind::Kb, domain_size }
    }

    pub fn abox(self) -> Self {
        MbaConfig { kind: EvolutionKind::Abox, ..self }
    }

    /// The eight semantics at a domain size.
    pub fn all(domain_size: usize) -> Vec<MbaConfig> {
        let mut v = Vec::new();
        for scope in [Scope::Local, Scope::Global] {
            for granularity in [Granularity::Atoms, Granularity::Symbols] {
                for measure in [Measure::Set, Measure::Card] {
                    v.push(MbaConfig::new(scope, granularity, measure, domain_size));
                }
            }
        }
        v
    }
}

impl fmt::Display for MbaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.scope {
            Scope::Local => "L",
            Scope::Global => "G",
        };
        let g = match self.granularity {
            Granularity::Atoms => "a",
            Granularity::Symbols => "s",
        };
        let m = match self.measure {
            Measure::Set => "set",
            Measure::Card => "card",
        };
        let k = match self.kind {
            EvolutionKind::Kb => "",
            EvolutionKind::Abox => ",abox",
        };
        write!(f, "{s}^{g}_{m}(d={}{k})", self.domain_size)
    }
}

pub fn atom_distance(i: Bits, j: Bits) -> Bits {
    i ^ j
}

pub fn atom_count(i: Bits, j: Bits) -> u32 {
    (i ^ j).count_ones()
}

/// Minimal flip sets `F` with `I xor F` a model of one of `cases`.
struct RepairSearch<'a> {
    cases: &'a [Arc<Vec<Clause>>],
    measure: Measure,
    found: Vec<Bits>,
    best: u32,
}

impl RepairSearch<'_> {
    fn run(cases: &[Arc<Vec<Clause>>], measure: Measure, i: Bits) -> (Vec<Bits>, u32) {
        let mut s = RepairSearch { cases, measure, found: Vec::new(), best: u32::MAX };
        for c in cases.iter() {
            s.dfs(c, i, 0, 0);
        }
        let _ = s.cases;
        (s.found, s.best)
    }

    fn dfs(&mut self, cnf: &[Clause], j: Bits, f: Bits, frozen: Bits) {
        let k = f.count_ones();
        match self.measure {
            Measure::Card if k > self.best => return,
            Measure::Set if self.found.iter().any(|&g| g & f == g) => return,
            _ => {}
        }
        let Some(c) = cnf.iter().find(|c| !c.sat(j)) else {
            match self.measure {
                Measure::Card => {
                    if k < self.best {
                        self.best = k;
                        self.found.clear();
                    }
                    self.found.push(f);
                }
                Measure::Set => {
                    self.found.retain(|&g| g & f != f);
                    self.found.push(f);
                    self.best = self.best.min(k);
                }
            }
            return;
        };
        if self.measure == Measure::Card && k + 1 > self.best {
            return;
        }
        let mut fr = frozen;
        for a in bits_iter((c.pos | c.neg) & !frozen) {
            self.dfs(cnf, j ^ a, f | a, fr | a);
            fr |= a;
        }
    }
}

/// Subsets of `n` symbols ordered by size, then value.
fn subsets_by_size(n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..(1u32 << n)).collect();
    v.sort_by_key(|s| (s.count_ones(), *s));
    v
}

struct SymbolSearch<'a> {
    u: &'a Universe,
    cases: &'a [Arc<Vec<Clause>>],
    order: Vec<u32>,
    memo: HashMap<(u32, Bits), bool>,
}

impl<'a> SymbolSearch<'a> {
    fn new(u: &'a Universe, cases: &'a [Arc<Vec<Clause>>]) -> Result<Self> {
        if u.n_symbols() > MAX_SYMBOLS {
            return Err(Error::SearchSpaceTooLarge(format!(
                "{} symbols exceed the limit of {MAX_SYMBOLS} for symbol distances",
                u.n_symbols()
            )));
        }
        Ok(SymbolSearch { u, cases, order: subsets_by_size(u.n_symbols()), memo: HashMap::new() })
    }

    fn outside(&self, d: u32) -> Bits {
        let mut m = self.u.all_atoms();
        for s in 0..self.u.n_symbols() {
            if d & (1 << s) != 0 {
                m &= !self.u.symbol_mask(s);
            }
        }
        m
    }

    fn reachable(&mut self, i: Bits, d: u32) -> bool {
        let mask = self.outside(d);
        let key = (d, i & mask);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let all = self.u.all_atoms();
        let r = self.cases.iter().any(|c| satisfiable(c, all, mask, i));
        self.memo.insert(key, r);
        r
    }

    /// Minimal symbol sets (by inclusion or by size) that can absorb all changes from `i`.
    fn minima(&mut self, i: Bits, measure: Measure) -> Vec<u32> {
        let mut found: Vec<u32> = Vec::new();
        let mut level = None;
        for idx in 0..self.order.len() {
            let d = self.order[idx];
            let size = d.count_ones();
            if measure == Measure::Card && level.is_some_and(|l| size > l) {
                break;
            }
            if measure == Measure::Set && found.iter().any(|&g| g & d == g) {
                continue;
            }
            if self.reachable(i, d) {
                found.push(d);
                level.get_or_insert(size);
            }
        }
        found
    }

    fn cylinders(&self, i: Bits, d: u32) -> Vec<(usize, Bits, Bits)> {
        let mask = self.outside(d);
        let all = self.u.all_atoms();
        self.cases
            .iter()
            .enumerate()
            .filter(|(_, c)| satisfiable(c, all, mask, i))
            .map(|(k, _)| (k, mask, i & mask))
            .collect()
    }
}

fn minimal_sets<T: Copy + Eq + std::hash::Hash + Ord>(items: impl IntoIterator<Item = T>, subset: impl Fn(T, T) -> bool) -> HashSet<T> {
    let mut v: Vec<T> = items.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    v.sort();
    let mut keep: Vec<T> = Vec::new();
    for &x in &v {
        if !v.iter().any(|&y| y != x && subset(y, x)) {
            keep.push(x);
        }
    }
    keep.into_iter().collect()
}

/// The argmin union over `mods` towards the target model set `cases`.
fn evolve(u: &Arc<Universe>, mods: &[Bits], cases: Vec<Arc<Vec<Clause>>>, cfg: &MbaConfig) -> Result<Vec<Part>> {
    match cfg.granularity {
        Granularity::Atoms => {
            let per_i: Vec<(Bits, Vec<Bits>, u32)> = mods
                .iter()
                .map(|&i| {
                    let (f, best) = RepairSearch::run(&cases, cfg.measure, i);
                    (i, f, best)
                })
                .collect();
            let keep: BTreeSet<Bits> = match (cfg.scope, cfg.measure) {
                (Scope::Local, _) => per_i.iter().flat_map(|(i, fs, _)| fs.iter().map(move |f| i ^ f)).collect(),
                (Scope::Global, Measure::Card) => {
                    let min = per_i.iter().map(|x| x.2).min().unwrap_or(u32::MAX);
                    per_i
                        .iter()
                        .filter(|x| x.2 == min)
                        .flat_map(|(i, fs, _)| fs.iter().map(move |f| i ^ f))
                        .collect()
                }
                (Scope::Global, Measure::Set) => {
                    let mins = minimal_sets(per_i.iter().flat_map(|x| x.1.iter().copied()), |a, b| a & b == a);
                    per_i
                        .iter()
                        .flat_map(|(i, fs, _)| fs.iter().filter(|f| mins.contains(f)).map(move |f| i ^ f))
                        .collect()
                }
            };
            Ok(vec![Part::Explicit(keep)])
        }
        Granularity::Symbols => {
            let mut search = SymbolSearch::new(u, &cases)?;
            let per_i: Vec<(Bits, Vec<u32>)> = mods.iter().map(|&i| (i, search.minima(i, cfg.measure))).collect();
            let chosen: Vec<(Bits, u32)> = match cfg.scope {
                Scope::Local => per_i.iter().flat_map(|(i, ds)| ds.iter().map(move |&d| (*i, d))).collect(),
                Scope::Global => {
                    let all: Vec<u32> = per_i.iter().flat_map(|x| x.1.iter().copied()).collect();
                    let ok: HashSet<u32> = match cfg.measure {
                        Measure::Card => {
                            let min = all.iter().map(|d| d.count_ones()).min().unwrap_or(0);
                            all.iter().copied().filter(|d| d.count_ones() == min).collect()
                        }
                        Measure::Set => minimal_sets(all.iter().copied(), |a, b| a & b == a),
                    };
                    per_i
                        .iter()
                        .flat_map(|(i, ds)| ds.iter().filter(|d| ok.contains(d)).map(move |&d| (*i, d)))
                        .collect()
                }
            };
            let mut seen = HashSet::new();
            let mut parts = Vec::new();
            for (i, d) in chosen {
                for (k, mask, val) in search.cylinders(i, d) {
                    if seen.insert((k, mask, val)) {
                        parts.push(Part::Cylinder { cnf: cases[k].clone(), mask, val });
                    }
                }
            }
            Ok(parts)
        }
    }
}

fn reject_non_abox(n: &KnowledgeBase) -> Result<()> {
    match n.tbox.iter().next() {
        Some(ax) => Err(Error::NonAboxNewInfo(ax.to_string())),
        None => Ok(()),
    }
}

/// Models of `kb` and the universe shared with `n`.
fn setup(kb: &KnowledgeBase, n: &KnowledgeBase, cfg: &MbaConfig) -> Result<(Arc<Universe>, Vec<Bits>)> {
    if cfg.kind == EvolutionKind::Abox {
        reject_non_abox(n)?;
    }
    let u = Arc::new(universe_for(&[kb, n], &[], cfg.domain_size)?);
    let mods = models_of(&u.theory(kb)?, u.all_atoms(), 0, 0, MAX_MODELS)?;
    if mods.is_empty() {
        return Err(Error::UnsatisfiableInput(format!("the KB has no model over {} elements", cfg.domain_size)));
    }
    Ok((u, mods))
}

/// `K ⊕ N` under a model-based semantics over a bounded domain.
pub fn mba_expand(kb: &KnowledgeBase, n: &KnowledgeBase, cfg: &MbaConfig) -> Result<ModelSet> {
    let (u, mods) = setup(kb, n, cfg)?;
    let target = match cfg.kind {
        EvolutionKind::Kb => n.clone(),
        EvolutionKind::Abox => n.union(&kb.tbox_only()),
    };
    let m = u.theory(&target)?;
    if !satisfiable(&m, u.all_atoms(), 0, 0) {
        return Err(Error::UnsatisfiableInput(format!(
            "the new information has no model over {} elements",
            cfg.domain_size
        )));
    }
    let parts = evolve(&u, &mods, vec![Arc::new(m)], cfg)?;
    Ok(ModelSet { universe: u, parts })
}

/// `K ⊖ N` under a model-based semantics over a bounded domain.
pub fn mba_contract(kb: &KnowledgeBase, n: &KnowledgeBase, cfg: &MbaConfig) -> Result<ModelSet> {
    let (u, mods) = setup(kb, n, cfg)?;
    let empty = KnowledgeBase::default();
    for phi in n.assertions() {
        if crate::reasoner::entails_assertion(&empty, &phi)? {
            return Err(Error::Tautology(phi.to_string()));
        }
    }
    let base = match cfg.kind {
        EvolutionKind::Kb => Vec::new(),
        EvolutionKind::Abox => u.theory(&kb.tbox_only())?,
    };
    let mut parts = vec![Part::Cylinder { cnf: Arc::new(u.theory(kb)?), mask: 0, val: 0 }];
    for phi in n.assertions() {
        let cases: Vec<Arc<Vec<Clause>>> = u
            .negate(&phi)?
            .into_iter()
            .map(|c| {
                let mut v = base.clone();
                v.extend(c);
                Arc::new(v)
            })
            .filter(|c| satisfiable(c, u.all_atoms(), 0, 0))
            .collect();
        if cases.is_empty() {
            continue;
        }
        parts.extend(evolve(&u, &mods, cases, cfg)?);
    }
    Ok(ModelSet { universe: u, parts })
}

/// The result is forced into a disjunction: every member satisfies
/// `phi` or `psi`, and each of them is falsified by some member.
pub fn check_disjunction_witness(models: &ModelSet, phi: &Assertion, psi: &Assertion) -> Result<bool> {
    if models.is_empty() {
        return Err(Error::PreconditionViolated("model set is empty".into()));
    }
    Ok(!models.any_violating_both(phi, psi)? && models.any_violating(phi)? && models.any_violating(psi)?)
}

/// Distances of the four kinds between two interpretations of one universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distance {
    AtomSet(Bits),
    AtomCount(u32),
    SymbolSet(u32),
    SymbolCount(u32),
}

pub fn distance(u: &Universe, g: Granularity, m: Measure, i: Bits, j: Bits) -> Distance {
    match (g, m) {
        (Granularity::Atoms, Measure::Set) => Distance::AtomSet(i ^ j),
        (Granularity::Atoms, Measure::Card) => Distance::AtomCount((i ^ j).count_ones()),
        (Granularity::Symbols, Measure::Set) => Distance::SymbolSet(u.symbol_diff(i, j)),
        (Granularity::Symbols, Measure::Card) => Distance::SymbolCount(u.symbol_diff(i, j).count_ones()),
    }
}
