//! Formula-based evolution: maximal subsets, CP, WIDTIO and bold semantics.

use crate::error::{Error, Result};
use crate::kb::{Assertion, KnowledgeBase};
use crate::reasoner::{self, Reasoner};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Expansion,
    Contraction,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Expansion => "expansion",
            Kind::Contraction => "contraction",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalSubsetFamily {
    pub kind: Kind,
    pub members: Vec<KnowledgeBase>,
    pub new_info: KnowledgeBase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResultVariant {
    Single(KnowledgeBase),
    Disjunctive(Vec<KnowledgeBase>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvolutionResult {
    pub variant: ResultVariant,
    pub semantics: String,
    /// Assertions of the input dropped by each member (one entry for a single result).
    pub dropped: Vec<Vec<Assertion>>,
}

impl EvolutionResult {
    pub fn single(&self) -> Option<&KnowledgeBase> {
        match &self.variant {
            ResultVariant::Single(k) => Some(k),
            ResultVariant::Disjunctive(_) => None,
        }
    }

    pub fn members(&self) -> Vec<&KnowledgeBase> {
        match &self.variant {
            ResultVariant::Single(k) => vec![k],
            ResultVariant::Disjunctive(v) => v.iter().collect(),
        }
    }
}

fn dropped_from(kb: &KnowledgeBase, kept: &KnowledgeBase) -> Vec<Assertion> {
    kb.canonical_order().into_iter().filter(|a| !kept.contains(a)).collect()
}

fn require_closed(kb: &KnowledgeBase) -> Result<()> {
    match reasoner::missing_from_closure(kb) {
        Some(a) => Err(Error::InputNotClosed(a.to_string())),
        None => Ok(()),
    }
}

fn is_tautology(a: &Assertion) -> Result<bool> {
    reasoner::entails_assertion(&KnowledgeBase::default(), a)
}

/// Rejects new information the given kind of evolution cannot take.
pub fn check_new_info(n: &KnowledgeBase, kind: Kind) -> Result<()> {
    match kind {
        Kind::Expansion => {
            if !reasoner::is_coherent(n)? {
                return Err(Error::IncoherentNewInfo);
            }
        }
        Kind::Contraction => {
            reasoner::is_satisfiable(n)?;
            for a in n.canonical_order() {
                if is_tautology(&a)? {
                    return Err(Error::Tautology(a.to_string()));
                }
            }
        }
    }
    Ok(())
}

/// Decides the defining property of members of `M_e` / `M_c` for a candidate subset.
pub(crate) struct Admissibility<'a> {
    kind: Kind,
    n: &'a KnowledgeBase,
    base: KnowledgeBase,
}

impl<'a> Admissibility<'a> {
    pub(crate) fn new(kb: &KnowledgeBase, n: &'a KnowledgeBase, kind: Kind) -> Self {
        let base = KnowledgeBase::new(kb.signature.union(&n.signature));
        Admissibility { kind, n, base }
    }

    pub(crate) fn holds<'b>(&self, items: impl IntoIterator<Item = &'b Assertion>) -> bool {
        let mut k = self.base.clone();
        for a in items {
            k.insert(a.clone());
        }
        match self.kind {
            Kind::Expansion => {
                for a in self.n.assertions() {
                    k.insert(a);
                }
                Reasoner::new(&k).is_coherent(&k.signature)
            }
            Kind::Contraction => {
                let mut sig = k.signature.clone();
                for a in self.n.assertions() {
                    crate::kb::declare_symbols(&mut sig, &a);
                }
                let k = KnowledgeBase { signature: sig, ..k };
                let r = Reasoner::new(&k);
                r.is_satisfiable() && self.n.assertions().iter().all(|a| !r.entails(a))
            }
        }
    }
}

/// All ⊆-maximal subsets `S` of `items` with `pinned ∪ S` admissible, as
/// index sets in increasing order. Include-first depth-first search; the
/// exclude branch is cut once everything left could be added.
pub(crate) fn maximal_index_sets(
    items: &[Assertion],
    pinned: &[Assertion],
    adm: &Admissibility<'_>,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut excluded = Vec::new();
    let check = |idx: &[usize]| adm.holds(pinned.iter().chain(idx.iter().map(|&i| &items[i])));
    if !check(&[]) {
        return out;
    }
    fn rec(
        i: usize,
        items: &[Assertion],
        chosen: &mut Vec<usize>,
        excluded: &mut Vec<usize>,
        check: &dyn Fn(&[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == items.len() {
            let maximal = excluded.iter().all(|&e| {
                let mut s = chosen.clone();
                s.push(e);
                !check(&s)
            });
            if maximal {
                out.push(chosen.clone());
            }
            return;
        }
        chosen.push(i);
        let inc = check(chosen);
        if inc {
            rec(i + 1, items, chosen, excluded, check, out);
        }
        chosen.pop();
        let mut all_rest = chosen.clone();
        all_rest.extend(i..items.len());
        if inc && check(&all_rest) {
            return;
        }
        excluded.push(i);
        rec(i + 1, items, chosen, excluded, check, out);
        excluded.pop();
    }
    rec(0, items, &mut chosen, &mut excluded, &check, &mut out);
    out
}

fn subset_kb(kb: &KnowledgeBase, items: impl IntoIterator<Item = Assertion>) -> KnowledgeBase {
    KnowledgeBase::with_signature(kb.signature.clone(), items)
}

/// Maximal family with the assertions of `pinned` forced into every member.
pub fn maximal_subsets_pinned(
    kb: &KnowledgeBase,
    n: &KnowledgeBase,
    kind: Kind,
    pinned: &BTreeSet<Assertion>,
) -> Result<MaximalSubsetFamily> {
    let adm = Admissibility::new(kb, n, kind);
    let pins: Vec<Assertion> = pinned.iter().cloned().collect();
    let items: Vec<Assertion> = kb.canonical_order().into_iter().filter(|a| !pinned.contains(a)).collect();
    let members = maximal_index_sets(&items, &pins, &adm)
        .into_iter()
        .map(|idx| subset_kb(kb, pins.iter().cloned().chain(idx.into_iter().map(|i| items[i].clone()))))
        .collect();
    Ok(MaximalSubsetFamily { kind, members, new_info: n.clone() })
}

/// `M_e(K, N)` or `M_c(K, N)` for a closed `kb`.
pub fn maximal_subsets(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<MaximalSubsetFamily> {
    require_closed(kb)?;
    check_new_info(n, kind)?;
    maximal_subsets_pinned(kb, n, kind, &BTreeSet::new())
}

/// Family members as they appear in the evolution result (`K_m ∪ N` for expansion).
fn result_members(fam: &MaximalSubsetFamily) -> Vec<KnowledgeBase> {
    fam.members
        .iter()
        .map(|m| match fam.kind {
            Kind::Expansion => m.union(&fam.new_info),
            Kind::Contraction => m.clone(),
        })
        .collect()
}

fn family_result(kb: &KnowledgeBase, fam: &MaximalSubsetFamily, label: &str) -> EvolutionResult {
    EvolutionResult {
        variant: ResultVariant::Disjunctive(result_members(fam)),
        semantics: format!("{label} {}", fam.kind),
        dropped: fam.members.iter().map(|m| dropped_from(kb, m)).collect(),
    }
}

/// The intersection of the family members, plus `N` for expansion.
fn intersect(kb: &KnowledgeBase, fam: &MaximalSubsetFamily) -> KnowledgeBase {
    let mut it = fam.members.iter();
    let mut common: BTreeSet<Assertion> = match it.next() {
        Some(m) => m.assertions().into_iter().collect(),
        None => BTreeSet::new(),
    };
    for m in it {
        common.retain(|a| m.contains(a));
    }
    let k = subset_kb(kb, common);
    match fam.kind {
        Kind::Expansion => k.union(&fam.new_info),
        Kind::Contraction => k,
    }
}

pub fn cp(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<EvolutionResult> {
    let fam = maximal_subsets(kb, n, kind)?;
    Ok(family_result(kb, &fam, "cp"))
}

pub fn widtio(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind) -> Result<EvolutionResult> {
    let fam = maximal_subsets(kb, n, kind)?;
    Ok(widtio_from_family(kb, &fam))
}

pub fn widtio_from_family(kb: &KnowledgeBase, fam: &MaximalSubsetFamily) -> EvolutionResult {
    let k = intersect(kb, fam);
    EvolutionResult {
        dropped: vec![dropped_from(kb, &k)],
        variant: ResultVariant::Single(k),
        semantics: format!("widtio {}", fam.kind),
    }
}

/// Does the WIDTIO result entail `a`?
pub fn widtio_member(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind, a: &Assertion) -> Result<bool> {
    let r = widtio(kb, n, kind)?;
    let k = r.single().expect("widtio is single");
    reasoner::entails_assertion(k, a)
}

fn resolve_order(kb: &KnowledgeBase, order: Option<&[Assertion]>) -> Result<Vec<Assertion>> {
    match order {
        None => Ok(kb.canonical_order()),
        Some(o) => {
            let given: BTreeSet<&Assertion> = o.iter().collect();
            let all = kb.assertions();
            if given.len() != o.len() || given.len() != all.len() || !all.iter().all(|a| given.contains(a)) {
                return Err(Error::PreconditionViolated(
                    "order must list every assertion of the KB exactly once".into(),
                ));
            }
            Ok(o.to_vec())
        }
    }
}

/// BE: start from `N` and keep each assertion of `kb` that leaves the result coherent.
pub fn bold_expand(kb: &KnowledgeBase, n: &KnowledgeBase, order: Option<&[Assertion]>) -> Result<EvolutionResult> {
    require_closed(kb)?;
    check_new_info(n, Kind::Expansion)?;
    let order = resolve_order(kb, order)?;
    let mut cur = KnowledgeBase::new(kb.signature.union(&n.signature)).union(n);
    let mut kept = Vec::new();
    for a in order {
        let mut next = cur.clone();
        next.insert(a.clone());
        if Reasoner::new(&next).is_coherent(&next.signature) {
            cur = next;
            kept.push(a);
        }
    }
    let km = subset_kb(kb, kept);
    Ok(EvolutionResult {
        dropped: vec![dropped_from(kb, &km)],
        variant: ResultVariant::Single(cur),
        semantics: "bold expansion".into(),
    })
}

/// BC: start from the empty KB and keep each assertion that entails nothing of `N`.
pub fn bold_contract(kb: &KnowledgeBase, n: &KnowledgeBase, order: Option<&[Assertion]>) -> Result<EvolutionResult> {
    require_closed(kb)?;
    check_new_info(n, Kind::Contraction)?;
    let order = resolve_order(kb, order)?;
    let adm = Admissibility::new(kb, n, Kind::Contraction);
    let mut kept: Vec<Assertion> = Vec::new();
    for a in order {
        kept.push(a);
        if !adm.holds(kept.iter()) {
            kept.pop();
        }
    }
    let km = subset_kb(kb, kept);
    Ok(EvolutionResult {
        dropped: vec![dropped_from(kb, &km)],
        variant: ResultVariant::Single(km),
        semantics: "bold contraction".into(),
    })
}

/// Certificate that `km ⊆ kb` belongs to `M_e` / `M_c`: admissible, and each
/// dropped assertion breaks admissibility when added back.
pub fn certify_member(kb: &KnowledgeBase, n: &KnowledgeBase, kind: Kind, km: &KnowledgeBase) -> Result<bool> {
    let adm = Admissibility::new(kb, n, kind);
    let items = km.assertions();
    if !items.iter().all(|a| kb.contains(a)) || !adm.holds(items.iter()) {
        return Ok(false);
    }
    Ok(kb.assertions().iter().filter(|a| !km.contains(a)).all(|a| !adm.holds(items.iter().chain(std::iter::once(a)))))
}

/// Is `k0` at least as large as every member of `M_e(kb, n)`?
pub fn is_max_cardinality_member(kb: &KnowledgeBase, n: &KnowledgeBase, k0: &KnowledgeBase) -> Result<bool> {
    let adm = Admissibility::new(kb, n, Kind::Expansion);
    let items = k0.assertions();
    if !items.iter().all(|a| kb.contains(a)) {
        return Err(Error::PreconditionViolated("k0 is not a subset of the KB".into()));
    }
    if !adm.holds(items.iter()) {
        return Err(Error::SubsetNotCoherentWithN);
    }
    let fam = maximal_subsets_pinned(kb, n, Kind::Expansion, &BTreeSet::new())?;
    Ok(fam.members.iter().all(|m| m.len() <= k0.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_assertion, parse_kb};
    use crate::reasoner::{close_kb, kb_equivalent};

    fn a(s: &str) -> Assertion {
        parse_assertion(s).unwrap()
    }

    fn closed(s: &str) -> KnowledgeBase {
        close_kb(&parse_kb(s).unwrap()).unwrap()
    }

    fn set(k: &KnowledgeBase) -> BTreeSet<String> {
        k.assertions().iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn contraction_family_has_two_members() {
        let k = closed("concept A B\nA <= B\nA(a)");
        let n = parse_kb("concept B\nB(a)").unwrap();
        let fam = maximal_subsets(&k, &n, Kind::Contraction).unwrap();
        let got: BTreeSet<BTreeSet<String>> = fam.members.iter().map(set).collect();
        let want: BTreeSet<BTreeSet<String>> =
            [["A(a)"].iter().map(|s| s.to_string()).collect(), ["A <= B"].iter().map(|s| s.to_string()).collect()]
                .into_iter()
                .collect();
        assert_eq!(got, want);
        let w = widtio(&k, &n, Kind::Contraction).unwrap();
        assert!(w.single().unwrap().is_empty());
    }

    #[test]
    fn entailed_expansion_keeps_everything() {
        let k = closed("concept A B\nA <= B\nA(a)");
        let n = parse_kb("concept A B\nB(a)").unwrap();
        let fam = maximal_subsets(&k, &n, Kind::Expansion).unwrap();
        assert_eq!(fam.members, vec![k.clone()]);
        let b = bold_expand(&k, &n, None).unwrap();
        assert!(kb_equivalent(b.single().unwrap(), &k).unwrap());
    }

    #[test]
    fn two_member_expansion() {
        let k = closed("concept A B C\nA <= B\nA <= C\nA(a)");
        let n = parse_kb("concept B C\nB <= not C").unwrap();
        let fam = maximal_subsets(&k, &n, Kind::Expansion).unwrap();
        let got: BTreeSet<BTreeSet<String>> = fam.members.iter().map(set).collect();
        let want: BTreeSet<BTreeSet<String>> = [
            vec!["A <= B", "A(a)", "B(a)"],
            vec!["A <= C", "A(a)", "C(a)"],
            vec!["A <= B", "C(a)"],
            vec!["A <= C", "B(a)"],
        ]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();
        assert_eq!(got, want);
        let b = bold_expand(&k, &n, None).unwrap();
        let kept = b.single().unwrap();
        assert!(kept.contains(&a("A <= B")) && kept.contains(&a("B(a)")));
        let km = subset_kb(&k, k.assertions().into_iter().filter(|x| kept.contains(x)));
        assert!(certify_member(&k, &n, Kind::Expansion, &km).unwrap());
    }

    #[test]
    fn chain_has_eight_members() {
        let mut s = String::from("concept");
        for i in 1..=3 {
            s += &format!(" A{i} B{i} C{i}");
        }
        s.push('\n');
        for i in 1..=3 {
            s += &format!("A{i} <= B{i}\nB{i} <= C{i}\n");
        }
        let k = closed(&s);
        let n = parse_kb(&format!("{}\nA1 <= not C1\nA2 <= not C2\nA3 <= not C3", s.lines().next().unwrap())).unwrap();
        let fam = maximal_subsets(&k, &n, Kind::Expansion).unwrap();
        assert_eq!(fam.members.len(), 8);
        let w = widtio(&k, &n, Kind::Expansion).unwrap();
        let w = w.single().unwrap();
        for i in 1..=3 {
            assert!(!w.contains(&a(&format!("A{i} <= B{i}"))));
            assert!(!w.contains(&a(&format!("B{i} <= C{i}"))));
        }
    }

    #[test]
    fn bold_contraction_depends_on_order() {
        let k = closed("concept A B\nA <= B\nA(a)");
        let n = parse_kb("concept B\nB(a)").unwrap();
        let o1 = vec![a("A(a)"), a("A <= B"), a("B(a)")];
        let o2 = vec![a("A <= B"), a("A(a)"), a("B(a)")];
        assert_eq!(set(bold_contract(&k, &n, Some(&o1)).unwrap().single().unwrap()), ["A(a)".to_string()].into());
        assert_eq!(set(bold_contract(&k, &n, Some(&o2)).unwrap().single().unwrap()), ["A <= B".to_string()].into());
        assert!(bold_contract(&k, &n, Some(&o1[..2])).is_err());
    }

    #[test]
    fn preconditions() {
        let open = parse_kb("concept A B\nA <= B\nA(a)").unwrap();
        let n = parse_kb("concept B\nB(a)").unwrap();
        assert!(matches!(maximal_subsets(&open, &n, Kind::Contraction), Err(Error::InputNotClosed(_))));
        let k = closed("concept A B\nA <= B\nA(a)");
        let taut = parse_kb("concept B\nB <= B").unwrap();
        assert!(matches!(maximal_subsets(&k, &taut, Kind::Contraction), Err(Error::Tautology(_))));
        let bad = parse_kb("concept B\nB <= not B").unwrap();
        assert!(matches!(maximal_subsets(&k, &bad, Kind::Expansion), Err(Error::IncoherentNewInfo)));
    }

    #[test]
    fn max_cardinality_on_paths() {
        let k = parse_kb("concept S Aa Ab Ac\nS <= Aa\nS <= Ab\nS <= Ac").unwrap();
        let n = parse_kb("concept Aa Ab Ac\nAa <= not Ab\nAb <= not Ac").unwrap();
        let k0 = parse_kb("concept S Aa\nS <= Aa").unwrap();
        assert!(!is_max_cardinality_member(&k, &n, &k0).unwrap());
        let k0 = parse_kb("concept S Aa Ac\nS <= Aa\nS <= Ac").unwrap();
        assert!(is_max_cardinality_member(&k, &n, &k0).unwrap());
        let k0 = parse_kb("concept S Aa Ab\nS <= Aa\nS <= Ab").unwrap();
        assert!(matches!(is_max_cardinality_member(&k, &n, &k0), Err(Error::SubsetNotCoherentWithN)));
    }
}
