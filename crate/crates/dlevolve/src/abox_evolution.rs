//! ABox evolution with a protected TBox, fast algorithms and careful updates.

use crate::error::{Error, Result};
use crate::evolution::{self, Kind};
use crate::kb::{Assertion, Axiom, Basic, KnowledgeBase, Membership, Role, Signature};
use crate::reasoner::{self, kb_equivalent, AboxIndex, Reasoner, TBoxIndex};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

fn require_abox(n: &KnowledgeBase) -> Result<()> {
    match n.tbox.iter().next() {
        Some(ax) => Err(Error::NonAboxNewInfo(ax.to_string())),
        None => Ok(()),
    }
}

fn joint_sig(kb: &KnowledgeBase, n: &KnowledgeBase) -> Signature {
    kb.signature.union(&n.signature)
}

/// Checks the ABox-evolution preconditions shared by every operator here.
pub fn check_abox_input(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<()> {
    require_abox(n)?;
    if !reasoner::is_satisfiable(kb)? {
        return Err(Error::UnsatisfiableKb);
    }
    if let Some(a) = reasoner::missing_from_closure(kb) {
        return Err(Error::InputNotClosed(a.to_string()));
    }
    let tn = n.union(&kb.tbox_only());
    match kind {
        Kind::Expansion => {
            if !reasoner::is_coherent(&tn)? {
                return Err(Error::IncoherentWithTbox);
            }
        }
        Kind::Contraction => {
            for b in &n.abox {
                if reasoner::entails_assertion(&kb.tbox_only(), &Assertion::A(b.clone()))? {
                    return Err(Error::Tautology(b.to_string()));
                }
            }
        }
    }
    Ok(())
}

/// Is `T ∪ items` satisfiable, over the joint signature?
fn sat_with(t: &TBoxIndex, items: &[&Membership]) -> bool {
    let abox: BTreeSet<Membership> = items.iter().map(|m| (*m).clone()).collect();
    AboxIndex::new(t, &abox).conflict(t).is_none()
}

fn single_entails(t: &TBoxIndex, alpha: &Membership, beta: &Membership) -> bool {
    let abox: BTreeSet<Membership> = [alpha.clone()].into();
    AboxIndex::new(t, &abox).entails(t, beta)
}

/// The unique T-pinned maximal subset: binary conflicts (expansion) or
/// single support (contraction) decide what is dropped.
pub fn abox_maximal(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<KnowledgeBase> {
    check_abox_input(kb, n, kind)?;
    let t = TBoxIndex::new(&joint_sig(kb, n), &kb.tbox);
    let keep = kb.abox.iter().filter(|alpha| match kind {
        Kind::Expansion => n.abox.iter().all(|beta| sat_with(&t, &[alpha, beta])),
        Kind::Contraction => n.abox.iter().all(|beta| !single_entails(&t, alpha, beta)),
    });
    let mut out = kb.tbox_only();
    for m in keep {
        out.insert(Assertion::A(m.clone()));
    }
    Ok(out)
}

/// Syntactic consequences read off the closed TBox.
struct ClosedTbox {
    cl: BTreeSet<Axiom>,
}

impl ClosedTbox {
    fn new(tbox: &BTreeSet<Axiom>) -> Self {
        ClosedTbox { cl: reasoner::tbox_closure(tbox) }
    }

    fn sub(&self, b1: &Basic, b2: &Basic) -> bool {
        b1 == b2 || self.cl.contains(&Axiom::incl(b1.clone(), b2.clone()))
    }

    fn disj(&self, b1: &Basic, b2: &Basic) -> bool {
        self.cl.contains(&Axiom::disj(b1.clone(), b2.clone())) || self.cl.contains(&Axiom::disj(b2.clone(), b1.clone()))
    }

    fn role_sub(&self, r1: &Role, r2: &Role) -> bool {
        r1 == r2 || self.cl.contains(&Axiom::role_incl(r1.clone(), r2.clone()))
    }

    fn funct(&self, r: &Role) -> bool {
        self.cl.contains(&Axiom::Funct(r.clone()))
    }

    fn roles(&self, extra: &[&Membership]) -> BTreeSet<Role> {
        let mut sig = Signature::default();
        for ax in &self.cl {
            crate::kb::declare_symbols(&mut sig, &Assertion::T(ax.clone()));
        }
        for m in extra {
            crate::kb::declare_symbols(&mut sig, &Assertion::A((*m).clone()));
        }
        sig.roles.iter().flat_map(|p| [Role::new(p.as_str()), Role::inv(p.as_str())]).collect()
    }

    /// Basic facts `B(c)` stated directly by `m`.
    fn facts(m: &Membership) -> Vec<(Basic, &str)> {
        match m {
            Membership::Concept(b, c) => vec![(b.clone(), c.as_str())],
            Membership::Role(p, a, b) => vec![
                (Basic::Exists(Role::new(p.as_str())), a.as_str()),
                (Basic::Exists(Role::inv(p.as_str())), b.as_str()),
            ],
        }
    }

    /// Does `alpha` alone entail the concept fact `b(c)`?
    fn entails_fact(&self, alpha: &Membership, b: &Basic, c: &str) -> bool {
        Self::facts(alpha).iter().any(|(b0, c0)| *c0 == c && self.sub(b0, b))
    }

    /// Role atoms `(R, subject, object)` for every role `R` including `alpha`'s own.
    fn role_facts<'a>(&self, alpha: &'a Membership, roles: &BTreeSet<Role>) -> Vec<(Role, &'a str, &'a str)> {
        match alpha {
            Membership::Role(p, a, b) => {
                let base = Role::new(p.as_str());
                roles
                    .iter()
                    .filter(|r| self.role_sub(&base, r))
                    .map(|r| (r.clone(), a.as_str(), b.as_str()))
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

/// FC: drop every assertion whose own consequences include an assertion of `n`.
pub fn fast_contract(kb: &KnowledgeBase, n: &KnowledgeBase) -> Result<KnowledgeBase> {
    check_abox_input(kb, n, Kind::Contraction)?;
    let ct = ClosedTbox::new(&kb.tbox);
    let targets: Vec<&Membership> = n.abox.iter().collect();
    let roles = ct.roles(&targets);
    let hit = |alpha: &Membership| {
        targets.iter().any(|beta| match beta {
            _ if alpha == *beta => true,
            Membership::Concept(b1, c) => ct.entails_fact(alpha, b1, c),
            Membership::Role(p1, a, b) => {
                let r1 = Role::new(p1.as_str());
                let r1i = Role::inv(p1.as_str());
                ct.role_facts(alpha, &roles).iter().any(|(r, x, y)| {
                    (*r == r1 && x == a && y == b) || (*r == r1i && x == b && y == a)
                })
            }
        })
    };
    let mut out = kb.tbox_only();
    for m in kb.abox.iter().filter(|m| !hit(m)) {
        out.insert(Assertion::A(m.clone()));
    }
    Ok(out)
}

/// FE: collect the assertions clashing with `n` through a disjointness or a
/// functionality assertion of the closed TBox, drop them and add `n`.
pub fn fast_expand(kb: &KnowledgeBase, n: &KnowledgeBase) -> Result<KnowledgeBase> {
    check_abox_input(kb, n, Kind::Expansion)?;
    let ct = ClosedTbox::new(&kb.tbox);
    let all: Vec<&Membership> = kb.abox.iter().chain(n.abox.iter()).collect();
    let roles = ct.roles(&all);
    let facts_closed = |m: &Membership| -> Vec<(Basic, String)> {
        let mut out = Vec::new();
        for (b0, c) in ClosedTbox::facts(m) {
            out.push((b0.clone(), c.to_string()));
            for ax in &ct.cl {
                if let Axiom::ConceptIncl(l, r) = ax {
                    if *l == b0 && !r.negated {
                        out.push((r.base.clone(), c.to_string()));
                    }
                }
            }
        }
        out
    };
    let clash = |alpha: &Membership, beta: &Membership| -> bool {
        let fa = facts_closed(alpha);
        let fb = facts_closed(beta);
        let disjoint = fa.iter().any(|(b1, c1)| fb.iter().any(|(b2, c2)| c1 == c2 && ct.disj(b1, b2)));
        let ra = ct.role_facts(alpha, &roles);
        let rb = ct.role_facts(beta, &roles);
        let functional = ra.iter().any(|(r, x, y)| {
            rb.iter().any(|(r2, x2, y2)| {
                r == r2 && ((ct.funct(r) && x == x2 && y != y2) || (ct.funct(&r.inverted()) && y == y2 && x != x2))
            })
        });
        disjoint || functional
    };
    let ca: BTreeSet<&Membership> = kb.abox.iter().filter(|b| n.abox.iter().any(|a| clash(a, b))).collect();
    let mut out = kb.tbox_only();
    for m in kb.abox.iter().filter(|m| !ca.contains(m)) {
        out.insert(Assertion::A(m.clone()));
    }
    Ok(out.union(n))
}

fn tbox_first_order(kb: &KnowledgeBase, reverse_abox: bool) -> Vec<Assertion> {
    let mut order: Vec<Assertion> = kb.tbox.iter().cloned().map(Assertion::T).collect();
    order.sort_by_key(|a| a.to_string());
    let mut ab: Vec<Assertion> = kb.abox.iter().cloned().map(Assertion::A).collect();
    ab.sort_by_key(|a| a.to_string());
    if reverse_abox {
        ab.reverse();
    }
    order.extend(ab);
    order
}

/// Results of every formula-based operator with the TBox pinned, in a fixed order:
/// CP member, WIDTIO, bold in two orders, and the fast algorithm.
pub fn coincidence_results(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<(usize, Vec<(String, KnowledgeBase)>)> {
    check_abox_input(kb, n, kind)?;
    let pinned: BTreeSet<Assertion> = kb.tbox.iter().cloned().map(Assertion::T).collect();
    let fam = evolution::maximal_subsets_pinned(kb, n, kind, &pinned)?;
    let lift = |m: &KnowledgeBase| match kind {
        Kind::Expansion => m.union(n),
        Kind::Contraction => m.clone(),
    };
    let mut out = Vec::new();
    for m in &fam.members {
        out.push(("cp".to_string(), lift(m)));
    }
    let w = evolution::widtio_from_family(kb, &fam);
    out.push(("widtio".into(), w.single().expect("single").clone()));
    for (label, rev) in [("bold", false), ("bold-reversed", true)] {
        let order = tbox_first_order(kb, rev);
        let r = match kind {
            Kind::Expansion => evolution::bold_expand(kb, n, Some(&order))?,
            Kind::Contraction => evolution::bold_contract(kb, n, Some(&order))?,
        };
        out.push((label.into(), r.single().expect("single").clone()));
    }
    let fast = match kind {
        Kind::Expansion => fast_expand(kb, n)?,
        Kind::Contraction => fast_contract(kb, n)?,
    };
    out.push(("fast".into(), fast));
    out.push(("maximal".into(), lift(&abox_maximal(kb, n, kind)?)));
    Ok((fam.members.len(), out))
}

/// CP, WIDTIO, bold and the fast algorithm agree up to equivalence, and the
/// T-pinned family has exactly one member.
pub fn coincidence_check(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<bool> {
    let (members, results) = coincidence_results(kb, n, kind)?;
    if members != 1 {
        return Ok(false);
    }
    let first = &results[0].1;
    for (_, r) in &results[1..] {
        if !kb_equivalent(first, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∃x (R(a, x) ∧ x ≠ c_1 ∧ … ∧ x ≠ c_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoleConstrainingFormula {
    pub role: Role,
    pub subject: String,
    pub excluded: BTreeSet<String>,
}

impl RoleConstrainingFormula {
    pub fn new(role: Role, subject: &str, excluded: &[&str]) -> Self {
        RoleConstrainingFormula {
            role,
            subject: subject.to_string(),
            excluded: excluded.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl fmt::Display for RoleConstrainingFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exists x ({}({}, x)", self.role, self.subject)?;
        for c in &self.excluded {
            write!(f, " and x != {c}")?;
        }
        write!(f, ")")
    }
}

/// Entailment of role-constraining formulas by one KB.
pub struct RcfReasoner {
    r: Reasoner,
}

impl RcfReasoner {
    pub fn new(tbox: &BTreeSet<Axiom>, abox: &BTreeSet<Membership>, sig: &Signature) -> Self {
        let t = TBoxIndex::new(sig, tbox);
        let a = AboxIndex::new(&t, abox);
        RcfReasoner { r: Reasoner { t, a } }
    }

    pub fn is_satisfiable(&self) -> bool {
        self.r.is_satisfiable()
    }

    fn entails_m(&self, m: &Membership) -> bool {
        self.r.a.entails(&self.r.t, m)
    }

    pub fn entails_exists(&self, r: &Role, a: &str) -> bool {
        self.entails_m(&Membership::concept(Basic::Exists(r.clone()), a))
    }

    pub fn entails_not_range(&self, r: &Role, c: &str) -> bool {
        match self.r.t.vocab.basic_id(&Basic::Exists(r.inverted())) {
            Some(b) => self.r.a.entails_negative(&self.r.t, b, c),
            None => false,
        }
    }

    /// Case (i): a named successor outside the exclusions; case (ii): an
    /// entailed successor while every excluded constant is kept out of the range.
    pub fn entails(&self, f: &RoleConstrainingFormula) -> bool {
        let named = self.r.a.constants.iter().any(|b| {
            !f.excluded.contains(b) && self.entails_m(&Membership::role_of(&f.role, &f.subject, b))
        });
        named
            || (self.entails_exists(&f.role, &f.subject)
                && f.excluded.iter().all(|c| self.entails_not_range(&f.role, c)))
    }
}

pub fn rcf_entailed(kb: &KnowledgeBase, f: &RoleConstrainingFormula) -> Result<bool> {
    let mut sig = kb.signature.clone();
    sig.roles.insert(f.role.name.clone());
    let r = RcfReasoner::new(&kb.tbox, &kb.abox, &sig);
    if !r.is_satisfiable() {
        return Err(Error::UnsatisfiableKb);
    }
    Ok(r.entails(f))
}

fn abox_sig(t: &BTreeSet<Axiom>, parts: &[&BTreeSet<Membership>]) -> Signature {
    let mut sig = Signature::default();
    for ax in t {
        crate::kb::declare_symbols(&mut sig, &Assertion::T(ax.clone()));
    }
    for p in parts {
        for m in p.iter() {
            crate::kb::declare_symbols(&mut sig, &Assertion::A(m.clone()));
        }
    }
    sig
}

/// Single-exclusion candidates over the roles and constants of the inputs.
fn rcf_candidates(sig: &Signature) -> Vec<RoleConstrainingFormula> {
    let mut out = Vec::new();
    for p in &sig.roles {
        for role in [Role::new(p.as_str()), Role::inv(p.as_str())] {
            for a in &sig.constants {
                for c in &sig.constants {
                    out.push(RoleConstrainingFormula::new(role.clone(), a, &[c]));
                }
            }
        }
    }
    out
}

/// Single-exclusion RCFs entailed by `a1 ∪ a2` but by neither alone.
pub fn unexpected_rcfs(
    a1: &BTreeSet<Membership>,
    a2: &BTreeSet<Membership>,
    t: &BTreeSet<Axiom>,
) -> Result<BTreeSet<RoleConstrainingFormula>> {
    let sig = abox_sig(t, &[a1, a2]);
    let both: BTreeSet<Membership> = a1.union(a2).cloned().collect();
    let ru = RcfReasoner::new(t, &both, &sig);
    if !ru.is_satisfiable() {
        return Err(Error::UnsatisfiableUnion);
    }
    let r1 = RcfReasoner::new(t, a1, &sig);
    let r2 = RcfReasoner::new(t, a2, &sig);
    Ok(rcf_candidates(&sig)
        .into_iter()
        .filter(|f| ru.entails(f) && !r1.entails(f) && !r2.entails(f))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dropped {
    pub assertion: Membership,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarefulResult {
    /// `A_0 ⊆ cl_T(A)`.
    pub kept: BTreeSet<Membership>,
    pub dropped: Vec<Dropped>,
    /// `(T, A_0 ∪ N)`.
    pub result: KnowledgeBase,
}

/// The unique maximal careful subset of `cl_T(A)` satisfiable with `n`.
pub fn careful_update(kb: &KnowledgeBase, n: &KnowledgeBase) -> Result<CarefulResult> {
    require_abox(n)?;
    let tn = n.union(&kb.tbox_only());
    if !reasoner::is_satisfiable(kb)? {
        return Err(Error::UnsatisfiableInput("the KB is unsatisfiable".into()));
    }
    if !reasoner::is_satisfiable(&tn)? {
        return Err(Error::UnsatisfiableInput("the update is unsatisfiable with the TBox".into()));
    }
    let t = &kb.tbox;
    let a = reasoner::abox_closure(kb)?;
    let u = reasoner::abox_closure(&tn)?;
    let sig = abox_sig(t, &[&a, &u]).union(&kb.signature).union(&n.signature);
    let ti = TBoxIndex::new(&sig, t);
    let mut dropped = Vec::new();

    let mut a0: BTreeSet<Membership> = BTreeSet::new();
    for alpha in &a {
        match u.iter().find(|beta| !sat_with(&ti, &[alpha, beta])) {
            Some(beta) => dropped.push(Dropped {
                assertion: alpha.clone(),
                reason: format!("unsatisfiable together with {beta}"),
            }),
            None => {
                a0.insert(alpha.clone());
            }
        }
    }

    let ru = RcfReasoner::new(t, &u, &sig);
    loop {
        let r0 = RcfReasoner::new(t, &a0, &sig);
        let both: BTreeSet<Membership> = a0.union(&u).cloned().collect();
        let rb = RcfReasoner::new(t, &both, &sig);
        let Some(f) = rcf_candidates(&sig)
            .into_iter()
            .find(|f| rb.entails(f) && !r0.entails(f) && !ru.entails(f))
        else {
            break;
        };
        let c = f.excluded.iter().next().expect("single exclusion").clone();
        let range = Basic::Exists(f.role.inverted());
        let remove: Vec<Membership> = if ru.entails_exists(&f.role, &f.subject) {
            let probe = Membership::concept(range, c.as_str());
            a0.iter().filter(|g| !sat_with(&ti, &[g, &probe])).cloned().collect()
        } else {
            let target = Membership::concept(Basic::Exists(f.role.clone()), f.subject.as_str());
            a0.iter().filter(|g| single_entails(&ti, g, &target)).cloned().collect()
        };
        if remove.is_empty() {
            return Err(Error::PreconditionViolated(format!("no assertion supports {f}")));
        }
        let gone: Vec<Membership> = a0
            .iter()
            .filter(|g| remove.iter().any(|d| *g == d || single_entails(&ti, g, d)))
            .cloned()
            .collect();
        for g in gone {
            a0.remove(&g);
            dropped.push(Dropped { assertion: g, reason: format!("prevents unexpected {f}") });
        }
    }

    let mut result = kb.tbox_only();
    result.signature = result.signature.union(&n.signature);
    for m in a0.iter().chain(n.abox.iter()) {
        result.insert(Assertion::A(m.clone()));
    }
    Ok(CarefulResult { kept: a0, dropped, result })
}

/// Is `a0` careful w.r.t. `u`: no RCF with any nonempty exclusion set over the
/// input constants is entailed by the union but by neither part.
pub fn is_careful(
    a0: &BTreeSet<Membership>,
    u: &BTreeSet<Membership>,
    t: &BTreeSet<Axiom>,
    sig: &Signature,
) -> bool {
    let both: BTreeSet<Membership> = a0.union(u).cloned().collect();
    let rb = RcfReasoner::new(t, &both, sig);
    let r0 = RcfReasoner::new(t, a0, sig);
    let ru = RcfReasoner::new(t, u, sig);
    let consts: Vec<&String> = sig.constants.iter().collect();
    for p in &sig.roles {
        for role in [Role::new(p.as_str()), Role::inv(p.as_str())] {
            for a in &consts {
                for mask in 1u32..(1 << consts.len()) {
                    let ex: Vec<&str> =
                        (0..consts.len()).filter(|i| mask & (1 << i) != 0).map(|i| consts[i].as_str()).collect();
                    let f = RoleConstrainingFormula::new(role.clone(), a, &ex);
                    if rb.entails(&f) && !r0.entails(&f) && !ru.entails(&f) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_kb;
    use crate::reasoner::close_kb;

    fn m(s: &str) -> Membership {
        match crate::io::parse_assertion(s).unwrap() {
            Assertion::A(m) => m,
            _ => panic!(),
        }
    }

    fn names(s: &BTreeSet<Membership>) -> BTreeSet<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    fn strs(v: &[&str]) -> BTreeSet<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn marriage_expansion() {
        let k = close_kb(
            &parse_kb(
                "concept Priest Wife\nrole HasHusband\nPriest <= not exists HasHusband-\nexists HasHusband <= Wife\nWife <= exists HasHusband\nHasHusband(mary, john)",
            )
            .unwrap(),
        )
        .unwrap();
        let n = parse_kb("concept Priest\nPriest(john)").unwrap();
        let r = abox_maximal(&k, &n, Kind::Expansion).unwrap();
        assert_eq!(names(&r.abox), strs(&["Wife(mary)", "exists HasHusband(mary)"]));
        let f = fast_expand(&k, &n).unwrap();
        assert!(kb_equivalent(&f, &r.union(&n)).unwrap());
        assert!(coincidence_check(&k, &n, Kind::Expansion).unwrap());
    }

    #[test]
    fn subsumption_contraction_drops_all() {
        let k = close_kb(&parse_kb("concept B1 B2\nB2 <= B1\nB2(c)").unwrap()).unwrap();
        let n = parse_kb("concept B1\nB1(c)").unwrap();
        assert!(abox_maximal(&k, &n, Kind::Contraction).unwrap().abox.is_empty());
        assert!(fast_contract(&k, &n).unwrap().abox.is_empty());
        assert!(coincidence_check(&k, &n, Kind::Contraction).unwrap());
    }

    #[test]
    fn existential_contraction_keeps_range() {
        let k = close_kb(&parse_kb("role P\nP(a, b)").unwrap()).unwrap();
        let n = parse_kb("role P\nexists P(a)").unwrap();
        let r = fast_contract(&k, &n).unwrap();
        assert_eq!(names(&r.abox), strs(&["exists P-(b)"]));
    }

    #[test]
    fn functional_expansion() {
        let k = close_kb(&parse_kb("role R\nfunct R\nR(a, b)").unwrap()).unwrap();
        let n = parse_kb("role R\nR(a, c)").unwrap();
        let r = fast_expand(&k, &n).unwrap();
        assert!(!r.abox.contains(&m("R(a, b)")));
        assert!(r.abox.contains(&m("R(a, c)")));
        assert!(coincidence_check(&k, &n, Kind::Expansion).unwrap());
    }

    #[test]
    fn rcf_examples() {
        let k = parse_kb("concept C\nrole R\nexists R- <= not C\nC(d)\nexists R(a)").unwrap();
        let f = RoleConstrainingFormula::new(Role::new("R"), "a", &["d"]);
        assert!(rcf_entailed(&k, &f).unwrap());
        let k = parse_kb("role R\nR(a, b)\nconst c").unwrap();
        assert!(rcf_entailed(&k, &RoleConstrainingFormula::new(Role::new("R"), "a", &["c"])).unwrap());
        assert!(!rcf_entailed(&k, &RoleConstrainingFormula::new(Role::new("R"), "a", &["b"])).unwrap());
    }

    #[test]
    fn unexpected_examples() {
        let t = parse_kb("concept C\nrole R\nexists R- <= not C").unwrap().tbox;
        let u = unexpected_rcfs(&[m("C(d)")].into(), &[m("exists R(a)")].into(), &t).unwrap();
        let want: BTreeSet<_> = [RoleConstrainingFormula::new(Role::new("R"), "a", &["d"])].into();
        assert_eq!(u, want);
        let t = parse_kb("concept D\nrole Q\nexists Q- <= not D").unwrap().tbox;
        let u = unexpected_rcfs(&[m("exists Q(b)")].into(), &[m("D(e)")].into(), &t).unwrap();
        assert!(u.contains(&RoleConstrainingFormula::new(Role::new("Q"), "b", &["e"])));
        let u = unexpected_rcfs(&[m("exists Q(b)"), m("D(e)")].into(), &[m("D(e)")].into(), &t).unwrap();
        assert!(u.is_empty());
    }

    const CAREFUL_T: &str = "concept C D\nrole R Q\nexists R- <= not C\nexists Q- <= not D\n";
    const CAREFUL_SIG: &str = "concept C D\nrole R Q\n";

    #[test]
    fn careful_first_update() {
        let k = parse_kb(&format!("{CAREFUL_T}C(d)\nexists Q(b)")).unwrap();
        let n = parse_kb(&format!("{CAREFUL_SIG}exists R(a)")).unwrap();
        let r = careful_update(&k, &n).unwrap();
        assert_eq!(names(&r.kept), strs(&["exists Q(b)"]));
        assert_eq!(names(&r.result.abox), strs(&["exists Q(b)", "exists R(a)"]));
    }

    #[test]
    fn careful_second_update() {
        let k = parse_kb(&format!("{CAREFUL_T}C(d)\nexists Q(b)")).unwrap();
        let n = parse_kb(&format!("{CAREFUL_SIG}exists R(a)\nR(a, c)\nD(e)")).unwrap();
        let r = careful_update(&k, &n).unwrap();
        assert_eq!(names(&r.kept), strs(&["C(d)"]));
    }

    #[test]
    fn careful_entailed_update_keeps_closure() {
        let k = parse_kb(&format!("{CAREFUL_T}C(d)\nR(a, b)")).unwrap();
        let n = parse_kb(&format!("{CAREFUL_SIG}exists R(a)")).unwrap();
        let r = careful_update(&k, &n).unwrap();
        assert_eq!(r.kept, reasoner::abox_closure(&k).unwrap());
    }

    #[test]
    fn rejects_tbox_new_info() {
        let k = close_kb(&parse_kb("concept A B\nA(a)").unwrap()).unwrap();
        let n = parse_kb("concept A B\nA <= B").unwrap();
        assert!(matches!(abox_maximal(&k, &n, Kind::Expansion), Err(Error::NonAboxNewInfo(_))));
    }
}
