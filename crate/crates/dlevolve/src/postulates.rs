//! Decision procedures for the evolution postulates on concrete instances.
//!
//! Formula-based results are given as a list of KBs read as their disjunction.
//! Entailment between such disjunctions is decided member-wise: a satisfiable
//! DL-Lite KB entails a disjunction of KBs iff it entails one of them.

use crate::error::Result;
use crate::evolution::{self, Kind};
use crate::finite_models::{
    holds, mba_contract, mba_expand, satisfiable, universe_for, Bits, Clause, Interpretation, MbaConfig, ModelSet,
    Universe,
};
use crate::kb::{Assertion, KnowledgeBase, Signature};
use crate::reasoner::{self, kb_equivalent, Reasoner};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// An assertion wrongly entailed or wrongly missed.
    Assertion(Assertion),
    /// A symbol forced empty.
    Symbol(String),
    Kb(KnowledgeBase),
    KbPair(KnowledgeBase, KnowledgeBase),
    Model(Interpretation),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    NotApplicable(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    fn from_failure(w: Option<Witness>) -> Verdict {
        match w {
            Some(w) => Verdict::Fails(w),
            None => Verdict::Holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostulateReport {
    pub operator: String,
    pub instance: String,
    pub verdicts: Vec<(String, Verdict)>,
    pub notes: Vec<String>,
}

impl PostulateReport {
    pub fn new(operator: &str, instance: &str) -> Self {
        PostulateReport { operator: operator.into(), instance: instance.into(), verdicts: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, name: &str, v: Verdict) {
        self.verdicts.push((name.to_string(), v));
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Appends the verdicts of `other`.
    pub fn extend(&mut self, other: PostulateReport) {
        self.verdicts.extend(other.verdicts);
        self.notes.extend(other.notes);
    }
}

fn sat(kb: &KnowledgeBase) -> Result<bool> {
    reasoner::is_satisfiable(kb)
}

fn with_sig(kb: &KnowledgeBase, sig: &Signature) -> KnowledgeBase {
    let mut k = kb.clone();
    k.signature = k.signature.union(sig);
    k
}

/// Equivalence that also relates two unsatisfiable KBs.
pub fn equivalent(a: &KnowledgeBase, b: &KnowledgeBase) -> Result<bool> {
    match (sat(a)?, sat(b)?) {
        (true, true) => kb_equivalent(a, b),
        (sa, sb) => Ok(sa == sb),
    }
}

fn entails(a: &KnowledgeBase, b: &KnowledgeBase) -> Result<bool> {
    if !sat(a)? {
        return Ok(true);
    }
    reasoner::entails_kb(a, b)
}

/// First member of `d1` entailing no member of `d2`, if any.
pub fn disjunction_counterexample<'a>(d1: &'a [KnowledgeBase], d2: &[KnowledgeBase]) -> Result<Option<&'a KnowledgeBase>> {
    for m in d1 {
        if !sat(m)? {
            continue;
        }
        let mut ok = false;
        for l in d2 {
            if entails(m, l)? {
                ok = true;
                break;
            }
        }
        if !ok {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

pub fn disjunction_equivalent(d1: &[KnowledgeBase], d2: &[KnowledgeBase]) -> Result<bool> {
    Ok(disjunction_counterexample(d1, d2)?.is_none() && disjunction_counterexample(d2, d1)?.is_none())
}

/// Symbols of `sig` forced empty in every member of the disjunction.
fn empty_symbol(members: &[KnowledgeBase], sig: &Signature) -> Result<Option<String>> {
    let mut possible: BTreeSet<String> = BTreeSet::new();
    for m in members {
        let m = with_sig(m, sig);
        if !sat(&m)? {
            continue;
        }
        let r = Reasoner::new(&m);
        let v = &r.t.vocab;
        for c in &sig.concepts {
            if !r.t.is_unsat(v.basic_id(&crate::kb::Basic::atomic(c.as_str())).unwrap()) {
                possible.insert(c.clone());
            }
        }
        for p in &sig.roles {
            if !r.t.role_empty(2 * v.atomic_role_id(p).unwrap()) {
                possible.insert(p.clone());
            }
        }
    }
    if possible.is_empty() && members.iter().all(|m| !sat(m).unwrap_or(false)) {
        return Ok(Some(sig.concepts.iter().chain(sig.roles.iter()).next().cloned().unwrap_or_default()));
    }
    Ok(sig.concepts.iter().chain(sig.roles.iter()).find(|s| !possible.contains(*s)).cloned())
}

fn all_unsat(members: &[KnowledgeBase]) -> Result<bool> {
    for m in members {
        if sat(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A smallest-by-inclusion model of `kb` over a small domain that falsifies `a`.
pub fn countermodel(kb: &KnowledgeBase, a: &Assertion) -> Result<Option<Interpretation>> {
    let named = {
        let mut sig = kb.signature.clone();
        for x in kb.assertions() {
            crate::kb::declare_symbols(&mut sig, &x);
        }
        crate::kb::declare_symbols(&mut sig, a);
        sig.constants.len()
    };
    for d in named.max(1)..=named + 2 {
        let u = match universe_for(&[kb], &[a], d) {
            Ok(u) => u,
            Err(crate::error::Error::SearchSpaceTooLarge(_)) => break,
            Err(e) => return Err(e),
        };
        let t = u.theory(kb)?;
        for case in u.negate(a)? {
            let mut c = t.clone();
            c.extend(case);
            if let Some(j) = minimal_model(&u, &c) {
                return Ok(Some(u.decode(j)));
            }
        }
    }
    Ok(None)
}

fn minimal_model(u: &Universe, c: &[Clause]) -> Option<Bits> {
    let all = u.all_atoms();
    if !satisfiable(c, all, 0, 0) {
        return None;
    }
    let mut mask: Bits = 0;
    for i in 0..u.n_atoms {
        let bit = 1u128 << i;
        if satisfiable(c, all, mask | bit, 0) {
            mask |= bit;
        }
    }
    let j = all & !mask;
    debug_assert!(holds(j, c));
    Some(j)
}

fn joint(kb: &KnowledgeBase, n: &KnowledgeBase) -> Signature {
    kb.signature.union(&n.signature)
}

/// EP1 to EP3 for a formula-based expansion result.
pub fn check_expansion(kb: &KnowledgeBase, n: &KnowledgeBase, result: &[KnowledgeBase], operator: &str) -> Result<PostulateReport> {
    let mut rep = PostulateReport::new(operator, "expansion");
    let sig = joint(kb, n);
    let kbj = with_sig(kb, &sig);

    rep.push(
        "EP1",
        if !reasoner::is_coherent(&kbj)? {
            Verdict::NotApplicable("the KB is incoherent".into())
        } else {
            Verdict::from_failure(empty_symbol(result, &sig)?.map(Witness::Symbol))
        },
    );

    let mut ep2 = None;
    'outer: for m in result {
        if !sat(m)? {
            continue;
        }
        for a in n.assertions() {
            if !reasoner::entails_assertion(&with_sig(m, &sig), &a)? {
                ep2 = Some(Witness::Assertion(a));
                break 'outer;
            }
        }
    }
    if ep2.is_none() && all_unsat(result)? {
        ep2 = Some(Witness::Kb(KnowledgeBase::default()));
    }
    rep.push("EP2", Verdict::from_failure(ep2));

    rep.push(
        "EP3",
        if !sat(kb)? || !reasoner::entails_kb(kb, n)? {
            Verdict::NotApplicable("the KB does not entail the new information".into())
        } else {
            equivalence_verdict(std::slice::from_ref(kb), result)?
        },
    );
    Ok(rep)
}

fn equivalence_verdict(d1: &[KnowledgeBase], d2: &[KnowledgeBase]) -> Result<Verdict> {
    if let Some(m) = disjunction_counterexample(d2, d1)? {
        return Ok(Verdict::Fails(Witness::Kb(m.clone())));
    }
    if let Some(m) = disjunction_counterexample(d1, d2)? {
        return Ok(Verdict::Fails(Witness::Kb(m.clone())));
    }
    Ok(Verdict::Holds)
}

/// EP4: `(K ⊕ N1) ∪ N2` implies `K ⊕ (N1 ∪ N2)`.
pub fn check_ep4(
    _kb: &KnowledgeBase,
    _n1: &KnowledgeBase,
    n2: &KnowledgeBase,
    r1: &[KnowledgeBase],
    r12: &[KnowledgeBase],
) -> Result<Verdict> {
    let lhs: Vec<KnowledgeBase> = r1.iter().map(|m| m.union(n2)).collect();
    Ok(match disjunction_counterexample(&lhs, r12)? {
        None => Verdict::Holds,
        Some(m) => Verdict::Fails(Witness::Kb(m.clone())),
    })
}

/// EP5 / CP5: equivalent inputs give equivalent results.
pub fn check_ep5(
    k1: &KnowledgeBase,
    n1: &KnowledgeBase,
    r1: &[KnowledgeBase],
    k2: &KnowledgeBase,
    n2: &KnowledgeBase,
    r2: &[KnowledgeBase],
) -> Result<Verdict> {
    if !equivalent(k1, k2)? || !equivalent(n1, n2)? {
        return Ok(Verdict::NotApplicable("the inputs are not equivalent".into()));
    }
    equivalence_verdict(r1, r2)
}

/// CP1 to CP4 for a formula-based contraction result; CP2' is reported with CP2's verdict.
pub fn check_contraction(kb: &KnowledgeBase, n: &KnowledgeBase, result: &[KnowledgeBase], operator: &str) -> Result<PostulateReport> {
    let mut rep = PostulateReport::new(operator, "contraction");
    let sig = joint(kb, n);

    let ok1 = disjunction_counterexample(std::slice::from_ref(kb), result)?.is_none();
    rep.push("CP1", if ok1 { Verdict::Holds } else { Verdict::Fails(Witness::Kb(kb.clone())) });

    let mut cp2 = None;
    for a in n.assertions() {
        let mut avoided = false;
        for m in result {
            let m = with_sig(m, &sig);
            if sat(&m)? && !reasoner::entails_assertion(&m, &a)? {
                avoided = true;
                break;
            }
        }
        if !avoided {
            cp2 = Some(Witness::Assertion(a));
            break;
        }
    }
    let cp2 = Verdict::from_failure(cp2);
    rep.push("CP2", cp2.clone());
    rep.push("CP2'", cp2);
    rep.notes.push("CP2' coincides with CP2 since a DL-Lite KB entails a disjunction only through a disjunct".into());

    let mut entailed = false;
    if sat(kb)? {
        for a in n.assertions() {
            if reasoner::entails_assertion(&with_sig(kb, &sig), &a)? {
                entailed = true;
            }
        }
    }
    rep.push(
        "CP3",
        if entailed || !sat(kb)? {
            Verdict::NotApplicable("the KB entails some of the new information".into())
        } else {
            equivalence_verdict(std::slice::from_ref(kb), result)?
        },
    );

    let mut cp4 = None;
    'members: for m in result {
        let mn = m.union(n);
        if !sat(&mn)? {
            continue;
        }
        let missed: Vec<Assertion> = kb
            .canonical_order()
            .into_iter()
            .filter(|a| !reasoner::entails_assertion(&with_sig(&mn, &sig), a).unwrap_or(true))
            .collect();
        if let Some(first) = missed.first() {
            let mut best: Option<Interpretation> = None;
            for a in &missed {
                if let Some(j) = countermodel(&mn, a)? {
                    let key = |i: &Interpretation| (i.domain.len(), i.atoms.len());
                    if best.as_ref().is_none_or(|b| key(&j) < key(b)) {
                        best = Some(j);
                    }
                }
            }
            cp4 = Some(match best {
                Some(j) => Witness::Model(j),
                None => Witness::Assertion(first.clone()),
            });
            break 'members;
        }
    }
    rep.push("CP4", Verdict::from_failure(cp4));
    Ok(rep)
}

/// EP4B for the family pair and EP5B / CP5B against an equivalent variant of the inputs.
pub fn check_bold_family(
    kb: &KnowledgeBase,
    n1: &KnowledgeBase,
    n2: Option<&KnowledgeBase>,
    variant: Option<(&KnowledgeBase, &KnowledgeBase)>,
    kind: Kind,
) -> Result<PostulateReport> {
    let mut rep = PostulateReport::new("bold", &kind.to_string());
    let f1 = evolution::maximal_subsets(kb, n1, kind)?;
    match (kind, n2) {
        (Kind::Expansion, Some(n2)) => {
            let f12 = evolution::maximal_subsets(kb, &n1.union(n2), kind)?;
            let mut w = None;
            for k2 in &f12.members {
                let mut covered = false;
                for k1 in &f1.members {
                    if entails(k1, k2)? {
                        covered = true;
                        break;
                    }
                }
                if !covered {
                    w = Some(Witness::Kb(k2.clone()));
                    break;
                }
            }
            rep.push("EP4B", Verdict::from_failure(w));
        }
        _ => rep.push("EP4B", Verdict::NotApplicable("needs an expansion pair".into())),
    }
    let name = match kind {
        Kind::Expansion => "EP5B",
        Kind::Contraction => "CP5B",
    };
    match variant {
        None => rep.push(name, Verdict::NotApplicable("no variant given".into())),
        Some((k2, n1b)) => {
            if !equivalent(kb, k2)? || !equivalent(n1, n1b)? {
                rep.push(name, Verdict::NotApplicable("the inputs are not equivalent".into()));
            } else {
                let f2 = evolution::maximal_subsets(k2, n1b, kind)?;
                rep.push(name, family_equivalence(&f1.members, &f2.members)?);
            }
        }
    }
    Ok(rep)
}

/// Every member of each family has an equivalent member in the other.
fn family_equivalence(f1: &[KnowledgeBase], f2: &[KnowledgeBase]) -> Result<Verdict> {
    for (a, b) in [(f1, f2), (f2, f1)] {
        for m in a {
            let mut found = false;
            for l in b {
                if equivalent(m, l)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(Verdict::Fails(Witness::Kb(m.clone())));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn members(ms: &ModelSet) -> Result<BTreeSet<Bits>> {
    ms.members()
}

fn models_in(u: &Universe, kb: &KnowledgeBase) -> Result<BTreeSet<Bits>> {
    let t = u.theory(kb)?;
    Ok(crate::finite_models::models_of(&t, u.all_atoms(), 0, 0, crate::finite_models::MAX_MODELS)?
        .into_iter()
        .collect())
}

fn empty_in(u: &Universe, ms: &BTreeSet<Bits>) -> Option<String> {
    (0..u.n_symbols()).find(|&s| ms.iter().all(|j| j & u.symbol_mask(s) == 0)).map(|s| u.symbol_name(s).to_string())
}

fn set_equality(u: &Universe, a: &BTreeSet<Bits>, b: &BTreeSet<Bits>) -> Verdict {
    match a.symmetric_difference(b).next() {
        None => Verdict::Holds,
        Some(&j) => Verdict::Fails(Witness::Model(u.decode(j))),
    }
}

fn all_symbols(kbs: &[&KnowledgeBase]) -> Signature {
    let mut sig = Signature::default();
    for kb in kbs {
        sig = sig.union(&kb.signature);
        for a in kb.assertions() {
            crate::kb::declare_symbols(&mut sig, &a);
        }
    }
    sig
}

/// EP1 to EP3 for a model-based expansion over the configured domain.
/// Preconditions are read at the finite level.
pub fn check_mba_expansion(kb: &KnowledgeBase, n: &KnowledgeBase, cfg: &MbaConfig) -> Result<PostulateReport> {
    let mut rep = PostulateReport::new(&cfg.to_string(), "expansion");
    let kbw = with_sig(kb, &all_symbols(&[kb, n]));
    let r = mba_expand(&kbw, n, cfg)?;
    let u = r.universe.clone();
    let rm = members(&r)?;
    let km = models_in(&u, &kbw)?;
    let target = match cfg.kind {
        crate::finite_models::EvolutionKind::Kb => n.clone(),
        crate::finite_models::EvolutionKind::Abox => n.union(&kb.tbox_only()),
    };
    rep.push(
        "EP1",
        if empty_in(&u, &km).is_some() {
            Verdict::NotApplicable("the KB is incoherent over the domain".into())
        } else {
            Verdict::from_failure(empty_in(&u, &rm).map(Witness::Symbol))
        },
    );
    let nt = u.theory(&target)?;
    rep.push("EP2", Verdict::from_failure(rm.iter().find(|&&j| !holds(j, &nt)).map(|&j| Witness::Model(u.decode(j)))));
    rep.push(
        "EP3",
        if km.iter().all(|&j| holds(j, &nt)) {
            set_equality(&u, &km, &rm)
        } else {
            Verdict::NotApplicable("the KB does not entail the new information over the domain".into())
        },
    );
    Ok(rep)
}

/// EP4 at the model level: `(K ⊕ N1) ∩ Mod(N2) ⊆ K ⊕ (N1 ∪ N2)`.
pub fn check_mba_ep4(kb: &KnowledgeBase, n1: &KnowledgeBase, n2: &KnowledgeBase, cfg: &MbaConfig) -> Result<Verdict> {
    let kbw = with_sig(kb, &all_symbols(&[kb, n1, n2]));
    let n12 = n1.union(n2);
    let r1 = mba_expand(&kbw, n1, cfg)?;
    let r12 = match mba_expand(&kbw, &n12, cfg) {
        Ok(r) => r,
        Err(crate::error::Error::UnsatisfiableInput(_)) => return Ok(Verdict::Holds),
        Err(e) => return Err(e),
    };
    let u = r1.universe.clone();
    let t2 = u.theory(n2)?;
    for j in members(&r1)? {
        if holds(j, &t2) && !r12.contains(j) {
            return Ok(Verdict::Fails(Witness::Model(u.decode(j))));
        }
    }
    Ok(Verdict::Holds)
}

/// CP1 to CP4 for a model-based contraction over the configured domain.
pub fn check_mba_contraction(kb: &KnowledgeBase, n: &KnowledgeBase, cfg: &MbaConfig) -> Result<PostulateReport> {
    let mut rep = PostulateReport::new(&cfg.to_string(), "contraction");
    let kbw = with_sig(kb, &all_symbols(&[kb, n]));
    let r = mba_contract(&kbw, n, cfg)?;
    let u = r.universe.clone();
    let rm = members(&r)?;
    let km = models_in(&u, &kbw)?;
    rep.push("CP1", Verdict::from_failure(km.difference(&rm).next().map(|&j| Witness::Model(u.decode(j)))));
    let mut cp2 = None;
    let mut cp3_applies = true;
    for a in n.assertions() {
        let c = u.compile(&a)?;
        if rm.iter().all(|&j| holds(j, &c)) {
            cp2.get_or_insert(Witness::Assertion(a.clone()));
        }
        if km.iter().all(|&j| holds(j, &c)) {
            cp3_applies = false;
        }
    }
    let cp2 = Verdict::from_failure(cp2);
    rep.push("CP2", cp2.clone());
    rep.push("CP2'", cp2);
    rep.push(
        "CP3",
        if cp3_applies {
            set_equality(&u, &km, &rm)
        } else {
            Verdict::NotApplicable("the KB entails some of the new information over the domain".into())
        },
    );
    let nt = u.theory(n)?;
    rep.push(
        "CP4",
        Verdict::from_failure(
            rm.iter().find(|&&j| holds(j, &nt) && !km.contains(&j)).map(|&j| Witness::Model(u.decode(j))),
        ),
    );
    Ok(rep)
}

/// EP5 / CP5 at the model level.
pub fn check_mba_syntax(
    k1: &KnowledgeBase,
    n1: &KnowledgeBase,
    k2: &KnowledgeBase,
    n2: &KnowledgeBase,
    cfg: &MbaConfig,
    kind: Kind,
) -> Result<Verdict> {
    if !equivalent(k1, k2)? || !equivalent(n1, n2)? {
        return Ok(Verdict::NotApplicable("the inputs are not equivalent".into()));
    }
    let sig = all_symbols(&[k1, n1, k2, n2]);
    let (a, b) = (with_sig(k1, &sig), with_sig(k2, &sig));
    let (r1, r2) = match kind {
        Kind::Expansion => (mba_expand(&a, n1, cfg)?, mba_expand(&b, n2, cfg)?),
        Kind::Contraction => (mba_contract(&a, n1, cfg)?, mba_contract(&b, n2, cfg)?),
    };
    let u = r1.universe.clone();
    Ok(set_equality(&u, &members(&r1)?, &members(&r2)?))
}
