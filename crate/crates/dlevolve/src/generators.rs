//! Reduction instances, their brute-force oracles, and seeded random inputs.

use crate::error::{Error, Result};
use crate::kb::{Assertion, Axiom, Basic, Concept, KnowledgeBase, Membership, Role, Signature};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A literal: variable index and polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf3 {
    pub vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    /// Clauses as triples of signed 1-based variable indices.
    pub fn from_ints(clauses: &[[i32; 3]]) -> Self {
        let lit = |x: i32| Literal { var: x.unsigned_abs() as usize - 1, positive: x > 0 };
        let vars = clauses.iter().flatten().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0);
        Cnf3 { vars, clauses: clauses.iter().map(|c| [lit(c[0]), lit(c[1]), lit(c[2])]).collect() }
    }

    /// Every variable occurs both positively and negatively.
    pub fn check(&self) -> Result<()> {
        for v in 0..self.vars {
            for pol in [true, false] {
                if !self.clauses.iter().flatten().any(|l| l.var == v && l.positive == pol) {
                    return Err(Error::PreconditionViolated(format!(
                        "variable p{} never occurs {}",
                        v + 1,
                        if pol { "positively" } else { "negatively" }
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, assignment: u32) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| (assignment >> l.var & 1 == 1) == l.positive))
    }
}

impl fmt::Display for Cnf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lit = |l: &Literal| format!("{}p{}", if l.positive { "" } else { "-" }, l.var + 1);
        let parts: Vec<String> =
            self.clauses.iter().map(|c| format!("({})", c.iter().map(lit).collect::<Vec<_>>().join(" | "))).collect();
        f.write_str(&parts.join(" & "))
    }
}

pub fn brute_sat(psi: &Cnf3) -> Result<bool> {
    if psi.vars > 20 {
        return Err(Error::TooLarge(format!("{} variables", psi.vars)));
    }
    Ok((0..1u32 << psi.vars).any(|a| psi.eval(a)))
}

#[derive(Clone, Debug)]
pub struct WidtioInstance {
    pub kb: KnowledgeBase,
    pub n: KnowledgeBase,
    pub phi: Assertion,
    pub concepts: usize,
}

pub fn x_name(i: usize, j: usize) -> String {
    format!("X_{i:02}_{j}")
}

pub fn y_name(i: usize, j: usize) -> String {
    format!("Y_{i:02}_{j}")
}

fn z_name(i: usize) -> String {
    format!("Z_{i:02}")
}

fn incl(a: &str, b: &str) -> Assertion {
    Assertion::T(Axiom::incl(Basic::atomic(a), Basic::atomic(b)))
}

fn disj(a: &str, b: &str) -> Assertion {
    Assertion::T(Axiom::disj(Basic::atomic(a), Basic::atomic(b)))
}

/// `K^ψ`, `N^ψ` and `φ = Z_0 ⊑ ¬Z_n` for a 3-CNF formula with `n` clauses.
pub fn gen_widtio_instance(psi: &Cnf3) -> Result<WidtioInstance> {
    psi.check()?;
    let n = psi.clauses.len();
    let mut sig = Signature::default();
    for i in 1..=n {
        for j in 1..=3 {
            sig.concepts.insert(x_name(i, j));
            sig.concepts.insert(y_name(i, j));
        }
    }
    for l in 1..=psi.vars {
        for p in ["S", "P", "N"] {
            sig.concepts.insert(format!("{p}_{l:02}"));
        }
    }
    for i in 0..=n {
        sig.concepts.insert(z_name(i));
    }
    let phi = disj(&z_name(0), &z_name(n));
    let mut k = KnowledgeBase::new(sig.clone());
    let mut nk = KnowledgeBase::new(sig.clone());
    for (i0, c) in psi.clauses.iter().enumerate() {
        let i = i0 + 1;
        for (j0, lit) in c.iter().enumerate() {
            let j = j0 + 1;
            let l = lit.var + 1;
            k.insert(incl(&x_name(i, j), &y_name(i, j)));
            nk.insert(incl(&format!("S_{l:02}"), &x_name(i, j)));
            let target = if lit.positive { format!("P_{l:02}") } else { format!("N_{l:02}") };
            nk.insert(incl(&y_name(i, j), &target));
            nk.insert(incl(&z_name(i - 1), &x_name(i, j)));
            nk.insert(incl(&y_name(i, j), &z_name(i)));
        }
    }
    for l in 1..=psi.vars {
        nk.insert(disj(&format!("P_{l:02}"), &format!("N_{l:02}")));
    }
    k.insert(phi.clone());
    let kb = crate::reasoner::close_kb(&k)?;
    Ok(WidtioInstance { kb, n: nk, phi, concepts: sig.concepts.len() })
}

/// The member of `M_e` read off a satisfying assignment: arcs of the true literals.
pub fn assignment_member(psi: &Cnf3, inst: &WidtioInstance, assignment: u32) -> KnowledgeBase {
    let mut k = KnowledgeBase::new(inst.kb.signature.clone());
    for (i0, c) in psi.clauses.iter().enumerate() {
        for (j0, lit) in c.iter().enumerate() {
            if (assignment >> lit.var & 1 == 1) == lit.positive {
                k.insert(incl(&x_name(i0 + 1, j0 + 1), &y_name(i0 + 1, j0 + 1)));
            }
        }
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph { vertices, edges: BTreeSet::new() };
        for &(a, b) in edges {
            if a == b || a >= vertices || b >= vertices {
                return Err(Error::PreconditionViolated(format!("bad edge ({a}, {b})")));
            }
            g.edges.insert((a.min(b), a.max(b)));
        }
        Ok(g)
    }

    pub fn is_independent(&self, set: u32) -> bool {
        self.edges.iter().all(|&(a, b)| set >> a & 1 == 0 || set >> b & 1 == 0)
    }
}

pub fn max_independent_set(g: &Graph) -> Result<usize> {
    if g.vertices > 20 {
        return Err(Error::TooLarge(format!("{} vertices", g.vertices)));
    }
    Ok((0..1u32 << g.vertices).filter(|&s| g.is_independent(s)).map(|s| s.count_ones() as usize).max().unwrap_or(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Tbox,
    Abox,
}

pub fn a_name(i: usize) -> String {
    format!("A_{i:02}")
}

/// The assertion of `K` standing for vertex `i`.
pub fn vertex_assertion(i: usize, variant: Variant) -> Assertion {
    match variant {
        Variant::Tbox => incl("S", &a_name(i)),
        Variant::Abox => Assertion::A(Membership::atomic(&a_name(i), "b")),
    }
}

/// `K` with one assertion per vertex and `N = {A_i ⊑ ¬A_j | (v_i, v_j) ∈ E}`.
pub fn gen_indepset_instance(g: &Graph, variant: Variant) -> (KnowledgeBase, KnowledgeBase) {
    let mut sig = Signature::default();
    for i in 0..g.vertices {
        sig.concepts.insert(a_name(i));
    }
    let nsig = sig.clone();
    if variant == Variant::Tbox {
        sig.concepts.insert("S".into());
    }
    let mut k = KnowledgeBase::new(sig);
    for i in 0..g.vertices {
        k.insert(vertex_assertion(i, variant));
    }
    let mut n = KnowledgeBase::new(nsig);
    for &(a, b) in &g.edges {
        n.insert(disj(&a_name(a), &a_name(b)));
    }
    (k, n)
}

/// The subset of `K` for a vertex set.
pub fn vertex_subset(k: &KnowledgeBase, set: u32, vertices: usize, variant: Variant) -> KnowledgeBase {
    let mut out = KnowledgeBase::new(k.signature.clone());
    for i in 0..vertices {
        if set >> i & 1 == 1 {
            out.insert(vertex_assertion(i, variant));
        }
    }
    out
}

/// 3-CNF over at most `max_vars` variables with at most `max_clauses` clauses,
/// each variable occurring in both polarities.
pub fn random_cnf3<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> Cnf3 {
    loop {
        let vars = rng.gen_range(1..=max_vars);
        let n = rng.gen_range(2..=max_clauses.max(2));
        let clauses = (0..n)
            .map(|_| {
                [0, 1, 2].map(|_| Literal { var: rng.gen_range(0..vars), positive: rng.gen_bool(0.5) })
            })
            .collect();
        let c = Cnf3 { vars, clauses };
        if c.check().is_ok() {
            return c;
        }
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(vertices, &edges).expect("valid edges")
}

/// Shape of random KBs.
#[derive(Clone, Copy, Debug)]
pub struct KbShape {
    pub concepts: usize,
    pub roles: usize,
    pub constants: usize,
    pub max_tbox: usize,
    pub max_abox: usize,
    pub funct: bool,
    pub role_incl: bool,
}

impl KbShape {
    pub fn small() -> Self {
        KbShape { concepts: 3, roles: 2, constants: 3, max_tbox: 6, max_abox: 4, funct: true, role_incl: true }
    }
}

const CONCEPTS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
const ROLES: [&str; 3] = ["P", "Q", "R"];
const CONSTANTS: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn shape_signature(s: &KbShape) -> Signature {
    Signature::new(CONCEPTS[..s.concepts].iter().copied(), ROLES[..s.roles].iter().copied(), CONSTANTS[..s.constants].iter().copied())
}

fn random_role<R: Rng>(rng: &mut R, s: &KbShape) -> Role {
    let p = ROLES[rng.gen_range(0..s.roles)];
    if rng.gen_bool(0.5) {
        Role::new(p)
    } else {
        Role::inv(p)
    }
}

pub fn random_basic<R: Rng>(rng: &mut R, s: &KbShape) -> Basic {
    if s.roles == 0 || rng.gen_bool(0.6) {
        Basic::atomic(CONCEPTS[rng.gen_range(0..s.concepts)])
    } else {
        Basic::exists(random_role(rng, s))
    }
}

pub fn random_axiom<R: Rng>(rng: &mut R, s: &KbShape) -> Axiom {
    let x: f64 = rng.gen();
    if s.roles > 0 && s.funct && x < 0.1 {
        Axiom::Funct(random_role(rng, s))
    } else if s.roles > 0 && s.role_incl && x < 0.2 {
        let a = random_role(rng, s);
        let mut b = random_role(rng, s);
        if rng.gen_bool(0.5) && b.name == a.name {
            b = b.inverted();
        }
        Axiom::role_incl(a, b)
    } else {
        let l = random_basic(rng, s);
        let r = random_basic(rng, s);
        let c = if rng.gen_bool(0.3) { Concept::neg(r) } else { Concept::pos(r) };
        Axiom::ConceptIncl(l, c)
    }
}

pub fn random_membership<R: Rng>(rng: &mut R, s: &KbShape) -> Membership {
    let a = CONSTANTS[rng.gen_range(0..s.constants)];
    if s.roles > 0 && rng.gen_bool(0.35) {
        let p = ROLES[rng.gen_range(0..s.roles)];
        let b = CONSTANTS[rng.gen_range(0..s.constants)];
        Membership::role(p, a, b)
    } else {
        Membership::concept(random_basic(rng, s), a)
    }
}

/// A valid DL-Lite_FR TBox without trivial axioms.
pub fn random_tbox<R: Rng>(rng: &mut R, s: &KbShape, size: usize) -> BTreeSet<Axiom> {
    let sig = shape_signature(s);
    let mut t = BTreeSet::new();
    let mut tries = 0;
    while t.len() < size && tries < 50 * (size + 1) {
        tries += 1;
        let ax = random_axiom(rng, s);
        if ax.is_trivial() {
            continue;
        }
        let mut cand = t.clone();
        cand.insert(ax);
        let kb = KnowledgeBase { signature: sig.clone(), tbox: cand.clone(), abox: BTreeSet::new() };
        if kb.validate().is_empty() {
            t = cand;
        }
    }
    t
}

pub fn random_abox<R: Rng>(rng: &mut R, s: &KbShape, size: usize) -> BTreeSet<Membership> {
    let mut a = BTreeSet::new();
    let mut tries = 0;
    while a.len() < size && tries < 20 * (size + 1) {
        tries += 1;
        a.insert(random_membership(rng, s));
    }
    a
}

/// A random KB over the shape's full signature (not necessarily satisfiable).
pub fn random_kb<R: Rng>(rng: &mut R, s: &KbShape) -> KnowledgeBase {
    let nt = rng.gen_range(0..=s.max_tbox);
    let na = rng.gen_range(0..=s.max_abox);
    KnowledgeBase { signature: shape_signature(s), tbox: random_tbox(rng, s, nt), abox: random_abox(rng, s, na) }
}

/// A random satisfiable KB.
pub fn random_satisfiable_kb<R: Rng>(rng: &mut R, s: &KbShape) -> KnowledgeBase {
    loop {
        let k = random_kb(rng, s);
        if crate::reasoner::is_satisfiable(&k).unwrap_or(false) {
            return k;
        }
    }
}

/// A random nonempty subset of the given items.
pub fn random_pick<R: Rng, T: Clone>(rng: &mut R, items: &[T], max: usize) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    let k = rng.gen_range(1..=max.min(v.len()).max(1));
    v.truncate(k);
    v
}
