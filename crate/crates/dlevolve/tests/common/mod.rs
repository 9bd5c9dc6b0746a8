#![allow(dead_code)]

use dlevolve::abox_evolution::{abox_maximal, check_abox_input, RoleConstrainingFormula};
use dlevolve::evolution::Kind;
use dlevolve::generators::{random_abox, random_membership, random_satisfiable_kb, shape_signature, KbShape};
use dlevolve::io::parse_kb;
use dlevolve::reasoner::{abox_closure, close_kb, entails_assertion, entails_negative_membership, is_satisfiable};
use dlevolve::{Assertion, Basic, KnowledgeBase, Membership, Role};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn kb(text: &str) -> KnowledgeBase {
    parse_kb(text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

pub fn abox_shape() -> KbShape {
    KbShape { concepts: 3, roles: 2, constants: 3, max_tbox: 4, max_abox: 2, funct: true, role_incl: true }
}

pub fn abox_only<R: Rng>(rng: &mut R, s: &KbShape, size: usize) -> KnowledgeBase {
    KnowledgeBase { signature: shape_signature(s), tbox: BTreeSet::new(), abox: random_abox(rng, s, size) }
}

/// A closed satisfiable KB, its ABox new information and the evolution kind.
/// Candidates that leave the ABox unchanged are retried a few times.
pub fn abox_instance(rng: &mut ChaCha8Rng, s: &KbShape) -> (KnowledgeBase, KnowledgeBase, Kind) {
    loop {
        let k = close_kb(&random_satisfiable_kb(rng, s)).unwrap();
        let kind = if rng.gen_bool(0.5) { Kind::Expansion } else { Kind::Contraction };
        let mut last = None;
        for _ in 0..6 {
            let size = rng.gen_range(1..=2);
            let n = abox_only(rng, s, size);
            if check_abox_input(&k, &n, kind).is_err() {
                continue;
            }
            let changed = abox_maximal(&k, &n, kind).unwrap().abox != k.abox;
            last = Some(n);
            if changed {
                break;
            }
        }
        if let Some(n) = last {
            return (k, n, kind);
        }
    }
}

pub fn abox_suite(rng: &mut ChaCha8Rng, count: usize) -> Vec<(KnowledgeBase, KnowledgeBase, Kind)> {
    let s = abox_shape();
    (0..count).map(|_| abox_instance(rng, &s)).collect()
}

fn rcf_holds(t: &KnowledgeBase, a: &BTreeSet<Membership>, f: &RoleConstrainingFormula) -> bool {
    let k = t.with_abox(a.iter().cloned());
    for b in &t.signature.constants {
        if !f.excluded.contains(b) && entails_assertion(&k, &Assertion::A(Membership::role_of(&f.role, &f.subject, b))).unwrap() {
            return true;
        }
    }
    entails_assertion(&k, &Assertion::A(Membership::concept(Basic::exists(f.role.clone()), f.subject.as_str()))).unwrap()
        && f.excluded.iter().all(|c| entails_negative_membership(&k, &Basic::exists(f.role.inverted()), c).unwrap())
}

/// Every role-constraining formula over the signature, with any nonempty exclusion set.
pub fn all_rcfs(t: &KnowledgeBase) -> Vec<RoleConstrainingFormula> {
    let sig = &t.signature;
    let cs: Vec<&str> = sig.constants.iter().map(|c| c.as_str()).collect();
    let mut out = Vec::new();
    for p in &sig.roles {
        for role in [Role::new(p.as_str()), Role::inv(p.as_str())] {
            for a in &cs {
                for em in 1u32..(1 << cs.len()) {
                    let ex: Vec<&str> = (0..cs.len()).filter(|i| em >> i & 1 == 1).map(|i| cs[i]).collect();
                    out.push(RoleConstrainingFormula::new(role.clone(), a, &ex));
                }
            }
        }
    }
    out
}

/// Exhaustive search for the careful subsets of cl_T(A) that are maximal
/// under inclusion.
pub fn careful_oracle(k: &KnowledgeBase, n: &KnowledgeBase) -> Vec<BTreeSet<Membership>> {
    let cl: Vec<Membership> = abox_closure(k).unwrap().into_iter().collect();
    assert!(cl.len() <= 14);
    let tb = KnowledgeBase { signature: k.signature.union(&n.signature), ..k.tbox_only() };
    let u = abox_closure(&n.union(&tb)).unwrap();
    let rcfs: Vec<RoleConstrainingFormula> = all_rcfs(&tb).into_iter().filter(|f| !rcf_holds(&tb, &u, f)).collect();
    let subset = |mask: u32| -> BTreeSet<Membership> { (0..cl.len()).filter(|i| mask >> i & 1 == 1).map(|i| cl[i].clone()).collect() };
    let mut good = Vec::new();
    for mask in 0u32..(1 << cl.len()) {
        let a0 = subset(mask);
        let both: BTreeSet<Membership> = a0.union(&u).cloned().collect();
        if !is_satisfiable(&tb.with_abox(both.iter().cloned())).unwrap() {
            continue;
        }
        if rcfs.iter().all(|f| !rcf_holds(&tb, &both, f) || rcf_holds(&tb, &a0, f)) {
            good.push(mask);
        }
    }
    good.iter()
        .copied()
        .filter(|&m| !good.iter().any(|&o| o != m && o & m == m))
        .map(subset)
        .collect()
}

pub fn careful_shape() -> KbShape {
    KbShape { concepts: 3, roles: 2, constants: 3, max_tbox: 6, max_abox: 3, funct: false, role_incl: true }
}

/// A careful-update instance whose closed ABox has 2 to 10 assertions; the
/// new information often carries an existential.
pub fn careful_instance(rng: &mut ChaCha8Rng) -> (KnowledgeBase, KnowledgeBase) {
    let s = careful_shape();
    loop {
        let k = random_satisfiable_kb(rng, &s);
        let size = abox_closure(&k).unwrap().len();
        if !(2..=10).contains(&size) {
            continue;
        }
        let size = rng.gen_range(1..=2);
        let mut n = abox_only(rng, &s, size);
        if rng.gen_bool(0.5) {
            let p = ["P", "Q"][rng.gen_range(0..2)];
            let r = if rng.gen_bool(0.5) { Role::new(p) } else { Role::inv(p) };
            let a = ["a", "b", "c"][rng.gen_range(0..3)];
            n.abox.insert(Membership::concept(Basic::exists(r), a));
        } else if rng.gen_bool(0.3) {
            n.abox.insert(random_membership(rng, &s));
        }
        if is_satisfiable(&n.union(&k.tbox_only())).unwrap() {
            return (k, n);
        }
    }
}

pub const CAREFUL_SIG: &str = "concept C D\nrole R Q\n";

pub const CAREFUL_T: &str = "concept C D\nrole R Q\nexists R- <= not C\nexists Q- <= not D\n";

pub fn careful_fixture() -> KnowledgeBase {
    kb(&format!("{CAREFUL_T}C(d)\nexists Q(b)"))
}

pub fn tbox_expansion_fixture() -> (KnowledgeBase, KnowledgeBase) {
    (kb("concept A B C\nA <= B\nA <= C\nA(a)"), kb("concept B C\nB <= not C"))
}

pub fn tbox_contraction_fixture() -> (KnowledgeBase, KnowledgeBase) {
    (kb("concept Priest Cleric Renter\nPriest <= Cleric\nCleric <= Renter"), kb("concept Priest Renter\nPriest <= Renter"))
}

pub const MARRIAGE: &str = "concept EmpWife Wife Priest\nrole HasHusband\nEmpWife <= Wife\nWife <= exists HasHusband\nexists HasHusband <= Wife\nPriest <= not exists HasHusband-\nEmpWife(mary)\nHasHusband(mary, john)\nPriest(adam)\nPriest(bob)";

pub const MARRIAGE_SYMBOLS: &str = "concept Wife Priest P0 P1 P2\nrole HasHusband\nWife <= exists HasHusband\nexists HasHusband <= Wife\nPriest <= not exists HasHusband-\nP0 <= Priest\nP1 <= Priest\nP2 <= Priest\nHasHusband(mary, john)\nPriest(adam)\nP1(adam)\nPriest(bob)\nP2(bob)";

pub const MARRIAGE_SYMBOLS_REPAIRED: &str = "concept EmpWife Wife Priest P0 P1 P2\nrole HasHusband\nEmpWife <= Wife\nWife <= exists HasHusband\nexists HasHusband <= Wife\nPriest <= not exists HasHusband-\nP0 <= Priest\nP1 <= Priest\nP2 <= Priest\nP0 <= not P1\nP0 <= not P2\nP1 <= not P2\nEmpWife(mary)\nHasHusband(mary, john)\nPriest(adam)\nP1(adam)\nPriest(bob)\nP2(bob)";

pub fn marriage_expansion() -> KnowledgeBase {
    kb("concept Priest\nPriest(john)")
}

pub fn marriage_contraction() -> KnowledgeBase {
    kb("role HasHusband\nHasHusband(mary, john)")
}

pub fn postulate_shape() -> KbShape {
    KbShape { concepts: 3, roles: 1, constants: 2, max_tbox: 3, max_abox: 2, funct: true, role_incl: true }
}

fn random_assertion<R: Rng>(rng: &mut R, s: &KbShape) -> Assertion {
    if rng.gen_bool(0.5) {
        Assertion::T(dlevolve::generators::random_axiom(rng, s))
    } else {
        Assertion::A(random_membership(rng, s))
    }
}

/// A small closed KB and two new-information sets accepted for `kind`.
pub fn postulate_instance(rng: &mut ChaCha8Rng, s: &KbShape, kind: Kind) -> (KnowledgeBase, KnowledgeBase, KnowledgeBase) {
    use dlevolve::evolution::check_new_info;
    let new_info = |rng: &mut ChaCha8Rng| loop {
        let mut n = KnowledgeBase::new(shape_signature(s));
        n.insert(random_assertion(rng, s));
        if n.validate().is_empty() && check_new_info(&n, kind).is_ok() {
            return n;
        }
    };
    loop {
        let k = close_kb(&random_satisfiable_kb(rng, s)).unwrap();
        if k.len() > 12 {
            continue;
        }
        let n1 = new_info(rng);
        let n2 = new_info(rng);
        let n12 = n1.union(&n2);
        if k.union(&n12).validate().is_empty() && check_new_info(&n12, kind).is_ok() {
            return (k, n1, n2);
        }
    }
}

pub fn mba_shape() -> KbShape {
    KbShape { concepts: 2, roles: 1, constants: 1, max_tbox: 2, max_abox: 1, funct: false, role_incl: false }
}
