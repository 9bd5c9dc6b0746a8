//! Closure-based reasoning over integer-indexed basic concepts.

use crate::error::{Error, Result};
use crate::kb::{Assertion, Axiom, Basic, KnowledgeBase, Membership, Role, Signature};
use fixedbitset::FixedBitSet;
use std::collections::{BTreeSet, HashMap, HashSet};

/// Dense numbering of concepts, roles and basic concepts.
///
/// Basic concept ids: atomic concepts first, then `exists P` at
/// `nc + 2j` and `exists P-` at `nc + 2j + 1`. Role ids: `2j` for `P`,
/// `2j + 1` for `P-`.
#[derive(Clone, Debug)]
pub struct Vocab {
    pub concepts: Vec<String>,
    pub roles: Vec<String>,
    cidx: HashMap<String, usize>,
    ridx: HashMap<String, usize>,
}

impl Vocab {
    pub fn new(sig: &Signature) -> Self {
        let concepts: Vec<String> = sig.concepts.iter().cloned().collect();
        let roles: Vec<String> = sig.roles.iter().cloned().collect();
        let cidx = concepts.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let ridx = roles.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Vocab { concepts, roles, cidx, ridx }
    }

    pub fn n_basic(&self) -> usize {
        self.concepts.len() + 2 * self.roles.len()
    }

    pub fn n_roles(&self) -> usize {
        2 * self.roles.len()
    }

    pub fn role_id(&self, r: &Role) -> Option<usize> {
        self.ridx.get(&r.name).map(|j| 2 * j + r.inverse as usize)
    }

    pub fn atomic_role_id(&self, p: &str) -> Option<usize> {
        self.ridx.get(p).copied()
    }

    pub fn basic_id(&self, b: &Basic) -> Option<usize> {
        match b {
            Basic::Atomic(c) => self.cidx.get(c).copied(),
            Basic::Exists(r) => self.role_id(r).map(|r| self.exists_of(r)),
        }
    }

    pub fn exists_of(&self, role_id: usize) -> usize {
        self.concepts.len() + role_id
    }

    /// The role `R` if `b` is `exists R`.
    pub fn role_of_exists(&self, b: usize) -> Option<usize> {
        b.checked_sub(self.concepts.len())
    }

    pub fn role(&self, id: usize) -> Role {
        Role { name: self.roles[id / 2].clone(), inverse: id % 2 == 1 }
    }

    pub fn basic(&self, id: usize) -> Basic {
        match self.role_of_exists(id) {
            None => Basic::Atomic(self.concepts[id].clone()),
            Some(r) => Basic::Exists(self.role(r)),
        }
    }
}

fn bitset(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

fn full(n: usize) -> FixedBitSet {
    let mut s = bitset(n);
    s.insert_range(..);
    s
}

/// The closure of a TBox in indexed form.
#[derive(Clone, Debug)]
pub struct TBoxIndex {
    pub vocab: Vocab,
    /// `reach[b]`: basics subsuming `b`, including `b`.
    reach: Vec<FixedBitSet>,
    /// `neg[b]`: basics `b2` with `b <= not b2` entailed.
    neg: Vec<FixedBitSet>,
    unsat: FixedBitSet,
    /// `role_reach[r]`: roles subsuming `r`, including `r`.
    role_reach: Vec<FixedBitSet>,
    funct: FixedBitSet,
}

fn reachability(n: usize, adj: &[Vec<usize>]) -> Vec<FixedBitSet> {
    let mut out = Vec::with_capacity(n);
    let mut stack = Vec::new();
    for s in 0..n {
        let mut seen = bitset(n);
        seen.insert(s);
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen.put(v) {
                    stack.push(v);
                }
            }
        }
        out.push(seen);
    }
    out
}

impl TBoxIndex {
    /// Indexes `tbox` over `sig` extended with the symbols the TBox uses.
    pub fn new(sig: &Signature, tbox: &BTreeSet<Axiom>) -> Self {
        let mut sig = sig.clone();
        for ax in tbox {
            crate::kb::declare_symbols(&mut sig, &Assertion::T(ax.clone()));
        }
        let vocab = Vocab::new(&sig);
        let nb = vocab.n_basic();
        let nr = vocab.n_roles();

        let mut radj = vec![Vec::new(); nr];
        let mut funct = bitset(nr);
        let mut badj = vec![Vec::new(); nb];
        let mut ni: Vec<(usize, usize)> = Vec::new();
        for ax in tbox {
            match ax {
                Axiom::RoleIncl(l, r) => {
                    let (l, r) = (vocab.role_id(l).unwrap(), vocab.role_id(r).unwrap());
                    radj[l].push(r);
                    radj[l ^ 1].push(r ^ 1);
                    badj[vocab.exists_of(l)].push(vocab.exists_of(r));
                    badj[vocab.exists_of(l ^ 1)].push(vocab.exists_of(r ^ 1));
                }
                Axiom::Funct(r) => funct.insert(vocab.role_id(r).unwrap()),
                Axiom::ConceptIncl(l, r) => {
                    let l = vocab.basic_id(l).unwrap();
                    let rb = vocab.basic_id(&r.base).unwrap();
                    if r.negated {
                        ni.push((l, rb));
                    } else {
                        badj[l].push(rb);
                    }
                }
            }
        }
        let role_reach = reachability(nr, &radj);
        let reach = reachability(nb, &badj);

        let mut rreach = vec![bitset(nb); nb];
        for (b, r) in reach.iter().enumerate() {
            for x in r.ones() {
                rreach[x].insert(b);
            }
        }
        let mut partners = vec![Vec::new(); nb];
        for &(x, y) in &ni {
            partners[x].push(y);
            partners[y].push(x);
        }
        let mut neg = Vec::with_capacity(nb);
        for b in 0..nb {
            let mut negset = bitset(nb);
            for x in reach[b].ones() {
                for &y in &partners[x] {
                    negset.insert(y);
                }
            }
            let mut n = bitset(nb);
            for y in negset.ones() {
                n.union_with(&rreach[y]);
            }
            neg.push(n);
        }

        let mut unsat = bitset(nb);
        for b in 0..nb {
            if neg[b][b] {
                unsat.insert(b);
            }
        }
        loop {
            let mut next = unsat.clone();
            for u in unsat.ones() {
                next.union_with(&rreach[u]);
                if let Some(r) = vocab.role_of_exists(u) {
                    next.insert(vocab.exists_of(r ^ 1));
                }
            }
            if next == unsat {
                break;
            }
            unsat = next;
        }

        let mut reach = reach;
        let mut role_reach = role_reach;
        for u in unsat.ones() {
            reach[u] = full(nb);
            neg[u] = full(nb);
            if let Some(r) = vocab.role_of_exists(u) {
                role_reach[r] = full(nr);
            }
        }
        for n in neg.iter_mut() {
            n.union_with(&unsat);
        }
        TBoxIndex { vocab, reach, neg, unsat, role_reach, funct }
    }

    pub fn from_kb(kb: &KnowledgeBase) -> Self {
        TBoxIndex::new(&kb.signature, &kb.tbox)
    }

    pub fn subsumes(&self, sub: usize, sup: usize) -> bool {
        self.reach[sub][sup]
    }

    pub fn disjoint(&self, a: usize, b: usize) -> bool {
        self.neg[a][b]
    }

    pub fn is_unsat(&self, b: usize) -> bool {
        self.unsat[b]
    }

    pub fn role_subsumes(&self, sub: usize, sup: usize) -> bool {
        self.role_reach[sub][sup]
    }

    pub fn is_funct(&self, r: usize) -> bool {
        self.funct[r]
    }

    pub fn role_empty(&self, r: usize) -> bool {
        self.unsat[self.vocab.exists_of(r)]
    }

    pub fn supers(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.reach[b].ones()
    }

    pub fn role_supers(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.role_reach[r].ones()
    }

    /// Basics `b2` such that `b <= not b2` is entailed.
    pub fn disjoint_with(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.neg[b].ones()
    }

    /// Functional roles as given.
    pub fn functional_roles(&self) -> impl Iterator<Item = usize> + '_ {
        self.funct.ones()
    }

    /// The closed TBox: every entailed non-trivial assertion over the vocabulary,
    /// except functionality of empty roles and inclusions of empty roles into
    /// functional ones (which would break the no-functional-superrole restriction).
    pub fn closure(&self) -> BTreeSet<Axiom> {
        let v = &self.vocab;
        let nb = v.n_basic();
        let basics: Vec<Basic> = (0..nb).map(|b| v.basic(b)).collect();
        let mut out = BTreeSet::new();
        for b in 0..nb {
            for s in self.reach[b].ones() {
                if s != b {
                    out.insert(Axiom::incl(basics[b].clone(), basics[s].clone()));
                }
            }
            for s in self.neg[b].ones() {
                out.insert(Axiom::disj(basics[b].clone(), basics[s].clone()));
            }
        }
        for r in (0..v.n_roles()).step_by(2) {
            for s in self.role_reach[r].ones() {
                if s != r && !(self.role_empty(r) && (self.is_funct(s) || self.is_funct(s ^ 1))) {
                    out.insert(Axiom::RoleIncl(v.role(r), v.role(s)));
                }
            }
        }
        for r in self.funct.ones() {
            out.insert(Axiom::Funct(v.role(r)));
        }
        out
    }

    /// Entailment of a TBox assertion whose symbols are in the vocabulary.
    fn entails_axiom_known(&self, ax: &Axiom) -> Option<bool> {
        let v = &self.vocab;
        Some(match ax {
            Axiom::ConceptIncl(l, r) => {
                let l = v.basic_id(l)?;
                let rb = v.basic_id(&r.base)?;
                if r.negated {
                    self.disjoint(l, rb)
                } else {
                    l == rb || self.subsumes(l, rb)
                }
            }
            Axiom::RoleIncl(l, r) => {
                let (l, r) = (v.role_id(l)?, v.role_id(r)?);
                l == r || self.role_subsumes(l, r)
            }
            Axiom::Funct(r) => {
                let r = v.role_id(r)?;
                self.is_funct(r) || self.role_empty(r)
            }
        })
    }

    /// Entailment of a TBox assertion; symbols outside the vocabulary are unconstrained.
    pub fn entails_axiom(&self, ax: &Axiom) -> bool {
        if ax.is_trivial() {
            return true;
        }
        if let Some(r) = self.entails_axiom_known(ax) {
            return r;
        }
        let v = &self.vocab;
        match ax {
            Axiom::ConceptIncl(l, _) => v.basic_id(l).is_some_and(|l| self.is_unsat(l)),
            Axiom::RoleIncl(l, _) => v.role_id(l).is_some_and(|l| self.role_empty(l)),
            Axiom::Funct(_) => false,
        }
    }
}

/// The positive saturation of an ABox w.r.t. a TBox.
#[derive(Clone, Debug)]
pub struct AboxIndex {
    pub constants: Vec<String>,
    cidx: HashMap<String, usize>,
    /// Per constant, the basics it belongs to.
    concepts: Vec<FixedBitSet>,
    /// Saturated role atoms `(atomic role index, subject, object)`.
    roles: HashSet<(usize, usize, usize)>,
}

impl AboxIndex {
    pub fn new(t: &TBoxIndex, abox: &BTreeSet<Membership>) -> Self {
        let v = &t.vocab;
        let nb = v.n_basic();
        let constants: Vec<String> = abox
            .iter()
            .flat_map(|m| m.constants().into_iter().map(str::to_string))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cidx: HashMap<String, usize> =
            constants.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut seeds = vec![bitset(nb); constants.len()];
        let mut roles = HashSet::new();
        for m in abox {
            match m {
                Membership::Concept(b, a) => {
                    let b = v.basic_id(b).expect("concept in vocabulary");
                    seeds[cidx[a]].insert(b);
                }
                Membership::Role(p, a, b) => {
                    let r = 2 * v.atomic_role_id(p).expect("role in vocabulary");
                    let (a, b) = (cidx[a], cidx[b]);
                    for s in t.role_supers(r) {
                        if s % 2 == 0 {
                            roles.insert((s / 2, a, b));
                        } else {
                            roles.insert((s / 2, b, a));
                        }
                    }
                }
            }
        }
        for &(p, a, b) in &roles {
            seeds[a].insert(v.exists_of(2 * p));
            seeds[b].insert(v.exists_of(2 * p + 1));
        }
        let concepts = seeds
            .into_iter()
            .map(|s| {
                let mut c = bitset(nb);
                for b in s.ones() {
                    c.union_with(&t.reach[b]);
                }
                c
            })
            .collect();
        AboxIndex { constants, cidx, concepts, roles }
    }

    pub fn const_id(&self, a: &str) -> Option<usize> {
        self.cidx.get(a).copied()
    }

    pub fn has_concept(&self, a: usize, b: usize) -> bool {
        self.concepts[a][b]
    }

    pub fn concepts_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.concepts[a].ones()
    }

    pub fn has_role(&self, p: usize, a: usize, b: usize) -> bool {
        self.roles.contains(&(p, a, b))
    }

    /// Saturated atoms of role `r` (possibly inverse) as `(subject, object)` pairs.
    pub fn role_pairs(&self, r: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .roles
            .iter()
            .filter(|(p, _, _)| *p == r / 2)
            .map(|&(_, a, b)| if r % 2 == 0 { (a, b) } else { (b, a) })
            .collect();
        v.sort_unstable();
        v
    }

    /// A conflicting pair of saturated facts, if any.
    pub fn conflict(&self, t: &TBoxIndex) -> Option<String> {
        let v = &t.vocab;
        for (a, cs) in self.concepts.iter().enumerate() {
            for b in cs.ones() {
                if t.is_unsat(b) {
                    return Some(format!("{}({}) is unsatisfiable", v.basic(b), self.constants[a]));
                }
                let mut clash = t.neg[b].clone();
                clash.intersect_with(cs);
                if let Some(c) = clash.ones().next() {
                    return Some(format!(
                        "{}({}) and {}({}) are disjoint",
                        v.basic(b),
                        self.constants[a],
                        v.basic(c),
                        self.constants[a]
                    ));
                }
            }
        }
        for r in t.functional_roles() {
            let pairs = self.role_pairs(r);
            for w in pairs.windows(2) {
                if w[0].0 == w[1].0 {
                    return Some(format!(
                        "funct {} violated at {}",
                        v.role(r),
                        self.constants[w[0].0]
                    ));
                }
            }
        }
        None
    }

    pub fn closure(&self, t: &TBoxIndex) -> BTreeSet<Membership> {
        let v = &t.vocab;
        let mut out = BTreeSet::new();
        for (a, cs) in self.concepts.iter().enumerate() {
            for b in cs.ones() {
                out.insert(Membership::Concept(v.basic(b), self.constants[a].clone()));
            }
        }
        for &(p, a, b) in &self.roles {
            out.insert(Membership::Role(
                v.roles[p].clone(),
                self.constants[a].clone(),
                self.constants[b].clone(),
            ));
        }
        out
    }

    pub fn entails(&self, t: &TBoxIndex, m: &Membership) -> bool {
        let v = &t.vocab;
        match m {
            Membership::Concept(b, a) => match (v.basic_id(b), self.const_id(a)) {
                (Some(b), Some(a)) => self.has_concept(a, b),
                _ => false,
            },
            Membership::Role(p, a, b) => match (v.atomic_role_id(p), self.const_id(a), self.const_id(b)) {
                (Some(p), Some(a), Some(b)) => self.has_role(p, a, b),
                _ => false,
            },
        }
    }

    /// `not b(a)` is entailed.
    pub fn entails_negative(&self, t: &TBoxIndex, b: usize, a: &str) -> bool {
        if t.is_unsat(b) {
            return true;
        }
        match self.const_id(a) {
            Some(a) => self.concepts[a].ones().any(|c| t.disjoint(c, b)),
            None => false,
        }
    }
}

/// Reasoner state for one KB.
#[derive(Clone, Debug)]
pub struct Reasoner {
    pub t: TBoxIndex,
    pub a: AboxIndex,
}

impl Reasoner {
    pub fn new(kb: &KnowledgeBase) -> Self {
        let t = TBoxIndex::from_kb(kb);
        let a = AboxIndex::new(&t, &kb.abox);
        Reasoner { t, a }
    }

    /// Builds a reasoner whose vocabulary also covers `extra`.
    pub fn with_extra(kb: &KnowledgeBase, extra: &Assertion) -> Self {
        let mut sig = kb.signature.clone();
        crate::kb::declare_symbols(&mut sig, extra);
        let t = TBoxIndex::new(&sig, &kb.tbox);
        let a = AboxIndex::new(&t, &kb.abox);
        Reasoner { t, a }
    }

    pub fn is_satisfiable(&self) -> bool {
        self.a.conflict(&self.t).is_none()
    }

    /// Satisfiable and no declared symbol forced empty.
    pub fn is_coherent(&self, sig: &Signature) -> bool {
        if !self.is_satisfiable() {
            return false;
        }
        let v = &self.t.vocab;
        sig.concepts
            .iter()
            .all(|c| !self.t.is_unsat(v.basic_id(&Basic::atomic(c.as_str())).unwrap()))
            && sig
                .roles
                .iter()
                .all(|p| !self.t.role_empty(2 * v.atomic_role_id(p).unwrap()))
    }

    pub fn entails(&self, a: &Assertion) -> bool {
        match a {
            Assertion::T(ax) => self.t.entails_axiom(ax),
            Assertion::A(m) => self.a.entails(&self.t, m),
        }
    }
}

fn check_valid(kb: &KnowledgeBase) -> Result<()> {
    let v = kb.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v))
    }
}

/// `cl(T)` over the symbols of `tbox`.
pub fn tbox_closure(tbox: &BTreeSet<Axiom>) -> BTreeSet<Axiom> {
    TBoxIndex::new(&Signature::default(), tbox).closure()
}

/// `cl_T(A)`, restricted to the constants of `A`.
pub fn abox_closure(kb: &KnowledgeBase) -> Result<BTreeSet<Membership>> {
    check_valid(kb)?;
    let r = Reasoner::new(kb);
    if !r.is_satisfiable() {
        return Err(Error::UnsatisfiableKb);
    }
    Ok(r.a.closure(&r.t))
}

/// `cl(T) ∪ cl_T(A)` with the signature of `kb`.
pub fn close_kb(kb: &KnowledgeBase) -> Result<KnowledgeBase> {
    check_valid(kb)?;
    let r = Reasoner::new(kb);
    if !r.is_satisfiable() {
        return Err(Error::UnsatisfiableKb);
    }
    Ok(closed_from(kb, &r))
}

/// Closure of a possibly unsatisfiable KB: `cl(T)` plus the positive ABox saturation.
pub fn close_kb_lenient(kb: &KnowledgeBase) -> KnowledgeBase {
    closed_from(kb, &Reasoner::new(kb))
}

fn closed_from(kb: &KnowledgeBase, r: &Reasoner) -> KnowledgeBase {
    KnowledgeBase {
        signature: kb.signature.clone(),
        tbox: r.t.closure(),
        abox: r.a.closure(&r.t),
    }
}

/// The first assertion of the closure missing from `kb`, if any.
pub fn missing_from_closure(kb: &KnowledgeBase) -> Option<Assertion> {
    let closed = close_kb_lenient(kb);
    closed.assertions().into_iter().find(|a| !kb.contains(a))
}

pub fn is_closed(kb: &KnowledgeBase) -> bool {
    missing_from_closure(kb).is_none()
}

pub fn is_satisfiable(kb: &KnowledgeBase) -> Result<bool> {
    check_valid(kb)?;
    Ok(Reasoner::new(kb).is_satisfiable())
}

pub fn is_coherent(kb: &KnowledgeBase) -> Result<bool> {
    check_valid(kb)?;
    Ok(Reasoner::new(kb).is_coherent(&kb.signature))
}

pub fn entails_assertion(kb: &KnowledgeBase, a: &Assertion) -> Result<bool> {
    check_valid(kb)?;
    let r = Reasoner::with_extra(kb, a);
    if !r.is_satisfiable() {
        return Err(Error::UnsatisfiableKb);
    }
    Ok(r.entails(a))
}

pub fn entails_negative_membership(kb: &KnowledgeBase, b: &Basic, a: &str) -> Result<bool> {
    check_valid(kb)?;
    let r = Reasoner::with_extra(kb, &Assertion::A(Membership::Concept(b.clone(), a.to_string())));
    if !r.is_satisfiable() {
        return Err(Error::UnsatisfiableKb);
    }
    let id = r.t.vocab.basic_id(b).unwrap();
    Ok(r.a.entails_negative(&r.t, id, a))
}

pub fn entails_kb(kb1: &KnowledgeBase, kb2: &KnowledgeBase) -> Result<bool> {
    check_valid(kb1)?;
    check_valid(kb2)?;
    let sig = kb1.signature.union(&kb2.signature);
    let t = TBoxIndex::new(&sig, &kb1.tbox);
    let a = AboxIndex::new(&t, &kb1.abox);
    if a.conflict(&t).is_some() {
        return Err(Error::UnsatisfiableKb);
    }
    let r = Reasoner { t, a };
    Ok(kb2.assertions().iter().all(|x| r.entails(x)))
}

/// Mutual entailment, decided by comparing closures over the joint signature.
pub fn kb_equivalent(kb1: &KnowledgeBase, kb2: &KnowledgeBase) -> Result<bool> {
    check_valid(kb1)?;
    check_valid(kb2)?;
    let sig = kb1.signature.union(&kb2.signature);
    let t1 = TBoxIndex::new(&sig, &kb1.tbox);
    let t2 = TBoxIndex::new(&sig, &kb2.tbox);
    let a1 = AboxIndex::new(&t1, &kb1.abox);
    let a2 = AboxIndex::new(&t2, &kb2.abox);
    if a1.conflict(&t1).is_some() || a2.conflict(&t2).is_some() {
        return Err(Error::UnsatisfiableKb);
    }
    let strip = |t: &TBoxIndex| -> BTreeSet<Axiom> {
        t.closure()
            .into_iter()
            .filter(|ax| match ax {
                Axiom::Funct(r) => !t.role_empty(t.vocab.role_id(r).unwrap()),
                _ => true,
            })
            .collect()
    };
    Ok(strip(&t1) == strip(&t2) && a1.closure(&t1) == a2.closure(&t2))
}

/// Does `tbox ∪ abox` entail `m`? Assumes satisfiability.
pub fn t_entails(tbox: &TBoxIndex, abox: &BTreeSet<Membership>, m: &Membership) -> bool {
    AboxIndex::new(tbox, abox).entails(tbox, m)
}
