//! Structural verdicts about `Aut(ΓG)` read off the join decomposition of Γ
//! and a little metadata about the vertex groups.
//!
//! Properties that cannot be decided from a group specification (whether a
//! vertex group splits as a graph product, whether `Aut` of the clique part is
//! finite) are carried as asserted metadata and echoed into the condition
//! lists. Whether a given element is fixed by a virtually cyclic subgroup of
//! automorphisms is not decided here.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph_core::{JoinDecomposition, SimplicialGraph, VertexId, VertexSet};
use crate::word_engine::{GroupKind, Presentation, Syllable, VertexGroup, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("vertex `{vertex}` is missing metadata `{field}`")]
    MissingMetadata { vertex: String, field: &'static str },
    #[error("vertex group at `{0}` splits as a graph product; simplify first")]
    GraphicallyReducible(String),
    #[error("expected {expected} metadata entries, got {got}")]
    MetadataCount { expected: usize, got: usize },
    #[error("graph is a join or has fewer than two vertices")]
    JoinGraph,
    #[error("no walk through every vertex from {0} to {1} in the opposite graph")]
    NoSpanningWalk(String, String),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexMeta {
    pub is_finite: bool,
    pub has_finite_abelianization: bool,
    /// Asserted: the vertex group does not split non-trivially as a graph product.
    pub is_graphically_irreducible: Option<bool>,
    /// Asserted, and only consulted on the clique part.
    pub aut_is_finite: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexGroupMeta {
    pub vertices: Vec<VertexMeta>,
}

fn is_prime_power(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap();
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

impl VertexGroupMeta {
    /// What can be read off the group specifications. Cyclic groups are
    /// graphically irreducible exactly when their order is a prime power or
    /// infinite; table groups are left unasserted.
    pub fn derive(p: &Presentation) -> Self {
        let vertices = p
            .groups()
            .iter()
            .map(|g| {
                let irreducible = match g.kind() {
                    GroupKind::Cyclic(n) => Some(is_prime_power(*n)),
                    GroupKind::InfiniteCyclic => Some(true),
                    GroupKind::Table(_) => None,
                };
                VertexMeta {
                    is_finite: g.is_finite(),
                    has_finite_abelianization: g.is_finite(),
                    is_graphically_irreducible: irreducible,
                    // finite groups and ℤ have finite automorphism groups
                    aut_is_finite: Some(true),
                }
            })
            .collect();
        VertexGroupMeta { vertices }
    }

    pub fn uniform(n: usize, meta: VertexMeta) -> Self {
        VertexGroupMeta { vertices: vec![meta; n] }
    }

    pub fn raag(n: usize) -> Self {
        Self::uniform(
            n,
            VertexMeta {
                is_finite: false,
                has_finite_abelianization: false,
                is_graphically_irreducible: Some(true),
                aut_is_finite: Some(true),
            },
        )
    }

    pub fn racg(n: usize) -> Self {
        Self::uniform(
            n,
            VertexMeta {
                is_finite: true,
                has_finite_abelianization: true,
                is_graphically_irreducible: Some(true),
                aut_is_finite: Some(true),
            },
        )
    }

    /// `is_finite ⇒ has_finite_abelianization`, and finite kinds are finite.
    pub fn is_consistent_with(&self, p: &Presentation) -> bool {
        self.vertices.len() == p.n()
            && self
                .vertices
                .iter()
                .zip(p.groups())
                .all(|(m, g)| (!m.is_finite || m.has_finite_abelianization) && (!g.is_finite() || m.is_finite))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FactorFlag {
    AcylindricallyHyperbolic,
    DihedralException,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub decomposition: JoinDecomposition,
    pub formula: String,
    pub factor_flags: Vec<FactorFlag>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Group,
    Aut,
    Raag,
    Racg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Yes,
    No,
    DihedralException,
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::DihedralException => "dihedral-exception",
            Answer::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    /// `None` when the metadata needed to decide it is missing.
    pub holds: Option<bool>,
    pub detail: String,
    /// Which list of sufficient conditions this belongs to, when there are two.
    pub alternative: Option<u8>,
}

impl Condition {
    fn new(name: &'static str, holds: Option<bool>, detail: impl Into<String>) -> Self {
        Condition { name, holds, detail: detail.into(), alternative: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub conditions: Vec<Condition>,
}

impl Verdict {
    fn conjunction(conditions: Vec<Condition>) -> Self {
        let answer = if conditions.iter().any(|c| c.holds == Some(false)) {
            Answer::No
        } else if conditions.iter().all(|c| c.holds == Some(true)) {
            Answer::Yes
        } else {
            Answer::Unknown
        };
        Verdict { answer, conditions }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VastnessReport {
    pub sq_universal: Option<bool>,
    pub many_quasimorphisms: Option<bool>,
    pub not_boundedly_generated: Option<bool>,
    pub conditions: Vec<Condition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Genset {
    pub words: Vec<Word>,
    /// Multipliers were enumerated completely (all vertex groups involved are finite).
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EndoCheck {
    Valid,
    Violated(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DehnClass {
    /// `n ↦ n^k`; finite groups and ℤ are `Polynomial(1)`.
    Polynomial(u32),
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantBounds {
    pub asdim: Option<u32>,
    pub dehn: String,
}

/// Γ1 … Γn with two edgeless vertices both labelled ℤ2.
fn is_z2_pair(p: &Presentation, factor: VertexSet) -> bool {
    let vs = factor.to_vec();
    vs.len() == 2 && !p.graph().adjacent(vs[0], vs[1]) && vs.iter().all(|&v| p.group(v).is_z2())
}

fn names(g: &SimplicialGraph, set: VertexSet) -> String {
    set.iter().map(|v| g.name(v)).collect::<Vec<_>>().join(",")
}

fn group_name(g: &VertexGroup, vertex: &str) -> String {
    match g.kind() {
        GroupKind::Cyclic(n) => format!("ℤ{n}"),
        GroupKind::InfiniteCyclic => "ℤ".to_string(),
        GroupKind::Table(_) => format!("G_{vertex}"),
    }
}

/// ⟨set⟩ written out when it is a free product or a direct sum of vertex groups.
fn subgroup_name(p: &Presentation, set: VertexSet) -> String {
    let g = p.graph();
    let parts: Vec<String> = set.iter().map(|v| group_name(p.group(v), g.name(v))).collect();
    if set.len() == 1 {
        parts[0].clone()
    } else if g.edges().iter().all(|&(a, b)| !(set.contains(a) && set.contains(b))) {
        parts.join("∗")
    } else if g.is_complete_set(set) {
        parts.join("⊕")
    } else {
        format!("⟨{}⟩", names(g, set))
    }
}

fn check_meta(p: &Presentation, meta: &VertexGroupMeta) -> Result<(), AutError> {
    if meta.vertices.len() != p.n() {
        return Err(AutError::MetadataCount { expected: p.n(), got: meta.vertices.len() });
    }
    for (v, m) in meta.vertices.iter().enumerate() {
        match m.is_graphically_irreducible {
            None => {
                return Err(AutError::MissingMetadata {
                    vertex: p.graph().name(v).to_string(),
                    field: "is_graphically_irreducible",
                })
            }
            Some(false) => return Err(AutError::GraphicallyReducible(p.graph().name(v).to_string())),
            Some(true) => {}
        }
    }
    Ok(())
}

fn irreducibility_condition(p: &Presentation, meta: &VertexGroupMeta) -> Condition {
    let missing: Vec<&str> = (0..p.n())
        .filter(|&v| meta.vertices.get(v).and_then(|m| m.is_graphically_irreducible).is_none())
        .map(|v| p.graph().name(v))
        .collect();
    let failing: Vec<&str> = (0..p.n())
        .filter(|&v| meta.vertices.get(v).and_then(|m| m.is_graphically_irreducible) == Some(false))
        .map(|v| p.graph().name(v))
        .collect();
    let holds = if !failing.is_empty() {
        Some(false)
    } else if missing.is_empty() {
        Some(true)
    } else {
        None
    };
    let detail = if !failing.is_empty() {
        format!("reducible at {}", failing.join(","))
    } else if !missing.is_empty() {
        format!("missing is_graphically_irreducible at {}", missing.join(","))
    } else {
        "asserted".to_string()
    };
    Condition::new("vertex groups graphically irreducible", holds, detail)
}

fn all_of(p: &Presentation, set: VertexSet, f: impl Fn(VertexId) -> Option<bool>, field: &str) -> (Option<bool>, String) {
    let g = p.graph();
    let mut missing = Vec::new();
    for v in set.iter() {
        match f(v) {
            Some(false) => return (Some(false), format!("fails at {}", g.name(v))),
            None => missing.push(g.name(v)),
            Some(true) => {}
        }
    }
    if missing.is_empty() {
        (Some(true), format!("over {{{}}}", names(g, set)))
    } else {
        (None, format!("missing {field} at {}", missing.join(",")))
    }
}

fn single_factor(p: &Presentation, jd: &JoinDecomposition) -> Condition {
    let g = p.graph();
    let holds = jd.factors.len() == 1 && !is_z2_pair(p, jd.factors[0]);
    let detail = match jd.factors.as_slice() {
        [] => "n=0".to_string(),
        [f] if is_z2_pair(p, *f) => format!("Γ1={{{}}} is an isolated ℤ2 pair", names(g, *f)),
        [f] => format!("n=1, Γ1={{{}}}", names(g, *f)),
        fs => format!("n={}", fs.len()),
    };
    Condition::new("n=1 and Γ1 not an isolated ℤ2 pair", Some(holds), detail)
}

fn finite_clique_groups(p: &Presentation, meta: &VertexGroupMeta, jd: &JoinDecomposition) -> Condition {
    let (holds, detail) = all_of(p, jd.clique_part, |v| Some(meta.vertices[v].is_finite), "is_finite");
    Condition::new("G_u finite on Γ0", holds, detail)
}

fn bi_alternative(mut first: Vec<Condition>, second: Vec<Condition>) -> Verdict {
    let a = Verdict::conjunction(first.clone());
    let b = Verdict::conjunction(second.clone());
    let answer = match (a.answer, b.answer) {
        (Answer::Yes, _) | (_, Answer::Yes) => Answer::Yes,
        (Answer::No, Answer::No) => Answer::No,
        _ => Answer::Unknown,
    };
    first.iter_mut().for_each(|c| c.alternative = Some(1));
    first.extend(second.into_iter().map(|c| Condition { alternative: Some(2), ..c }));
    Verdict { answer, conditions: first }
}

impl Presentation {
    pub fn structure_report(&self, meta: &VertexGroupMeta) -> Result<StructureReport, AutError> {
        check_meta(self, meta)?;
        let jd = self.graph().join_decomposition();
        let factor_flags: Vec<FactorFlag> = jd
            .factors
            .iter()
            .map(|&f| if is_z2_pair(self, f) { FactorFlag::DihedralException } else { FactorFlag::AcylindricallyHyperbolic })
            .collect();
        let factors: Vec<String> = jd.factors.iter().map(|&f| subgroup_name(self, f)).collect();
        let mut auts: Vec<String> = factors.iter().map(|f| format!("Aut({f})")).collect();
        let tail = match auts.len() {
            0 => None,
            1 => auts.pop(),
            _ => Some(format!("({}) ⋊ S", auts.join(" ⊕ "))),
        };
        let formula = if jd.clique_part.is_empty() {
            tail.unwrap_or_else(|| "1".to_string())
        } else {
            let z = subgroup_name(self, jd.clique_part);
            match tail {
                None => format!("Aut({z})"),
                Some(t) => {
                    let sum = if factors.len() == 1 { factors[0].clone() } else { factors.join(" ⊕ ") };
                    format!("Hom({sum} → Z({z})) ⋊ (Aut({z}) ⊕ {t})")
                }
            }
        };
        Ok(StructureReport { decomposition: jd, formula, factor_flags })
    }

    pub fn acyl_verdict(&self, meta: &VertexGroupMeta, target: Target) -> Verdict {
        let g = self.graph();
        let jd = g.join_decomposition();
        let clique = g.is_complete();
        match target {
            Target::Raag | Target::Racg => {
                let meta = if target == Target::Raag { VertexGroupMeta::raag(self.n()) } else { VertexGroupMeta::racg(self.n()) };
                let group = if target == Target::Raag { VertexGroup::infinite_cyclic() } else { VertexGroup::cyclic(2).unwrap() };
                let model = Presentation::uniform(g.clone(), group);
                if clique {
                    return Verdict {
                        answer: Answer::No,
                        conditions: vec![Condition::new(
                            "Γ not a clique",
                            Some(false),
                            "clique: outside the Aut criterion, answered by the RAAG/RACG corollary",
                        )],
                    };
                }
                model.acyl_verdict(&meta, Target::Aut)
            }
            Target::Group => {
                if clique {
                    let (fin, detail) = all_of(self, g.vertices(), |v| meta.vertices.get(v).map(|m| m.is_finite), "is_finite");
                    let answer = if fin == Some(true) { Answer::No } else { Answer::Unknown };
                    return Verdict {
                        answer,
                        conditions: vec![Condition::new("Γ not a clique", Some(false), format!("direct sum; finite {detail}"))],
                    };
                }
                let conds = vec![
                    irreducibility_condition(self, meta),
                    finite_clique_groups(self, meta, &jd),
                    single_factor(self, &jd),
                ];
                self.dihedral_or(Verdict::conjunction(conds))
            }
            Target::Aut => {
                if clique {
                    return Verdict {
                        answer: Answer::Unknown,
                        conditions: vec![Condition::new("Γ not a clique", Some(false), "Aut of a direct sum is not covered")],
                    };
                }
                let irr = irreducibility_condition(self, meta);
                let first = vec![irr.clone(), finite_clique_groups(self, meta, &jd), single_factor(self, &jd)];
                let rest = jd.factors.iter().fold(VertexSet::EMPTY, |a, &f| a.union(f));
                let (ab, ab_detail) =
                    all_of(self, rest, |v| meta.vertices.get(v).map(|m| m.has_finite_abelianization), "has_finite_abelianization");
                let (aut0, aut0_detail) = if jd.clique_part.is_empty() {
                    (Some(true), "Γ0 empty".to_string())
                } else {
                    all_of(
                        self,
                        jd.clique_part,
                        |v| meta.vertices.get(v).and_then(|m| m.aut_is_finite.or(m.is_finite.then_some(true))),
                        "aut_is_finite",
                    )
                };
                let second = vec![
                    irr,
                    Condition::new("G_u finite abelianisation on Γ1 … Γn", ab, ab_detail),
                    Condition::new("Aut(⟨Γ0⟩) finite", aut0, aut0_detail),
                    single_factor(self, &jd),
                ];
                self.dihedral_or(bi_alternative(first, second))
            }
        }
    }

    /// Γ itself an isolated ℤ2 pair.
    fn dihedral_or(&self, v: Verdict) -> Verdict {
        if is_z2_pair(self, self.graph().vertices()) {
            Verdict { answer: Answer::DihedralException, conditions: v.conditions }
        } else {
            v
        }
    }

    /// Acylindrical hyperbolicity of `ΓG ⋊_φ H`, given whether the kernel of
    /// `H → Out(ΓG)` is finite.
    pub fn extension_verdict(&self, meta: &VertexGroupMeta, kernel_finite: bool) -> Verdict {
        let g = self.graph();
        if g.is_complete() {
            return Verdict {
                answer: Answer::Unknown,
                conditions: vec![Condition::new("Γ not a clique", Some(false), "outside the criterion")],
            };
        }
        let jd = g.join_decomposition();
        Verdict::conjunction(vec![
            irreducibility_condition(self, meta),
            finite_clique_groups(self, meta, &jd),
            single_factor(self, &jd),
            Condition::new("kernel of H → Out finite", Some(kernel_finite), "asserted"),
        ])
    }

    pub fn vastness_report(&self, meta: &VertexGroupMeta) -> VastnessReport {
        let jd = self.graph().join_decomposition();
        let excluded = jd.factors.iter().all(|&f| is_z2_pair(self, f));
        let irr = irreducibility_condition(self, meta);
        let shape = Condition::new(
            "Γ not a clique joined with isolated ℤ2 pairs",
            Some(!excluded),
            format!("{} factor(s) besides Γ0", jd.factors.len()),
        );
        let flag = match (irr.holds, excluded) {
            (Some(true), false) => Some(true),
            _ => None,
        };
        VastnessReport {
            sq_universal: flag,
            many_quasimorphisms: flag,
            not_boundedly_generated: flag,
            conditions: vec![irr, shape],
        }
    }

    fn default_letter(&self, v: VertexId) -> Word {
        let e = self.group(v).generators()[0];
        self.letter(v, e).expect("generators are nontrivial")
    }

    /// Elements used as right multipliers from ⟨set⟩: everything when `set`
    /// is a single finite vertex group, else the identity and the letters
    /// `v^e` with `e` among the generators and their inverses.
    fn multipliers(&self, set: VertexSet) -> (Vec<Word>, bool) {
        let mut out = vec![Word::identity()];
        let complete = set.len() == 1 && self.group(set.first().unwrap()).is_finite();
        for v in set.iter() {
            let g = self.group(v);
            let elems: Vec<i64> = if complete {
                g.nontrivial_elements(1)
            } else {
                let mut e: Vec<i64> = g.generators().iter().flat_map(|&s| [s, g.inv(s)]).collect();
                e.sort_unstable();
                e.dedup();
                e
            };
            out.extend(elems.into_iter().map(|e| self.letter(v, e).unwrap()));
        }
        (out, complete)
    }

    /// A walk in Γ^opp from `a` to `b` through every vertex, made of
    /// shortest-path hops to the nearest unvisited vertex.
    fn spanning_walk(&self, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        let n = self.n();
        let opp = self.graph().opposite();
        let hop = |from: VertexId, to: &dyn Fn(VertexId) -> bool| -> Option<Vec<VertexId>> {
            let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
            let mut q = VecDeque::from([from]);
            let mut seen = VertexSet::singleton(from);
            while let Some(x) = q.pop_front() {
                if x != from && to(x) {
                    let mut path = vec![x];
                    let mut c = x;
                    while let Some(&p) = prev.get(&c) {
                        path.push(p);
                        c = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                for y in opp.link(x).iter() {
                    if !seen.contains(y) {
                        seen.insert(y);
                        prev.insert(y, x);
                        q.push_back(y);
                    }
                }
            }
            None
        };
        let mut walk = vec![a];
        let mut visited = VertexSet::singleton(a);
        while visited.len() < n {
            let cur = *walk.last().unwrap();
            let path = hop(cur, &|x| !visited.contains(x))?;
            for &x in &path[1..] {
                visited.insert(x);
            }
            walk.extend_from_slice(&path[1..]);
        }
        let cur = *walk.last().unwrap();
        if cur != b {
            let path = hop(cur, &|x| x == b)?;
            walk.extend_from_slice(&path[1..]);
        }
        Some(walk)
    }

    /// Pairwise non-commuting generators with maximal centralisers. For
    /// connected Γ these are `g_u·s`, `s ∈ G_u`, where `g_u` follows a walk in
    /// Γ^opp from `α(u)` to `ω(u)` through every vertex; for disconnected Γ
    /// the free-product words `a₁ b a₂·r` and `a₁ b a₁ b a₂ b·s` are used.
    pub fn build_noncommuting_genset(&self) -> Result<Genset, AutError> {
        let g = self.graph();
        if self.n() < 2 || g.is_join() {
            return Err(AutError::JoinGraph);
        }
        if !g.is_connected() {
            return Ok(self.free_product_genset());
        }
        let opp = g.opposite();
        let mut words = Vec::new();
        let mut complete = true;
        let mut used_lengths: Vec<usize> = Vec::new();
        for u in 0..self.n() {
            let lu = opp.link(u);
            let su = opp.star(u);
            let (alpha, omega) = lu
                .iter()
                .find_map(|y| {
                    let sy = opp.star(y);
                    (0..self.n()).find(|&x| !su.contains(x) && !sy.contains(x)).map(|x| (x, y))
                })
                .ok_or(AutError::JoinGraph)?;
            let mut walk = self
                .spanning_walk(alpha, omega)
                .ok_or_else(|| AutError::NoSpanningWalk(g.name(alpha).into(), g.name(omega).into()))?;
            // pad with back-and-forth steps until the length is at distance ≥ 2 from earlier ones
            while used_lengths.iter().any(|&l| l.abs_diff(walk.len()) < 2) {
                let (x, y) = (walk[0], walk[1]);
                walk.splice(0..0, [x, y]);
            }
            used_lengths.push(walk.len());
            let raw: Vec<Syllable> =
                walk.iter().map(|&v| Syllable::new(v, self.group(v).generators()[0])).collect();
            let gu = self.reduce(&raw).expect("walk letters are valid");
            let (mult, c) = self.multipliers(VertexSet::singleton(u));
            complete &= c;
            words.extend(mult.iter().map(|s| self.compose(&gu, s)));
        }
        Ok(Genset { words, complete })
    }

    fn free_product_genset(&self) -> Genset {
        let g = self.graph();
        let comps = g.components_of(g.vertices());
        if comps.len() == 2
            && comps.iter().all(|c| c.len() == 1)
            && comps.iter().all(|c| self.group(c.first().unwrap()).is_z2())
        {
            let words = comps.iter().map(|c| self.default_letter(c.first().unwrap())).collect();
            return Genset { words, complete: true };
        }
        // A needs at least three elements
        let big = |c: &VertexSet| {
            c.len() > 1 || self.group(c.first().unwrap()).order().is_none_or(|o| o >= 3)
        };
        // with only ℤ2 components, several of them together form A
        let a_set = match comps.iter().find(|c| big(c)) {
            Some(&c) => c,
            None => comps[..comps.len() - 1].iter().fold(VertexSet::EMPTY, |a, &c| a.union(c)),
        };
        let b_set = g.vertices().difference(a_set);
        let (a1, a2) = if a_set.len() > 1 {
            let vs = a_set.to_vec();
            (self.default_letter(vs[0]), self.default_letter(vs[1]))
        } else {
            let v = a_set.first().unwrap();
            let gr = self.group(v);
            let e1 = gr.generators()[0];
            // a₂ = a₁⁻¹ would make g a conjugate of b, so avoid it when the group allows
            let others: Vec<i64> = gr.nontrivial_elements(2).into_iter().filter(|&e| e != e1).collect();
            let e2 = [gr.mul(e1, e1)]
                .into_iter()
                .chain(others.iter().copied())
                .find(|&e| e != 0 && e != e1 && gr.mul(e1, e) != 0)
                .unwrap_or(others[0]);
            (self.letter(v, e1).unwrap(), self.letter(v, e2).unwrap())
        };
        let b = self.default_letter(b_set.first().unwrap());
        let gw = self.compose_all([&a1, &b, &a2]);
        let hw = self.compose_all([&a1, &b, &a1, &b, &a2, &b]);
        let (rb, cb) = self.multipliers(b_set);
        let (sa, ca) = self.multipliers(a_set);
        let mut words: Vec<Word> = rb.iter().map(|r| self.compose(&gw, r)).collect();
        words.extend(sa.iter().map(|s| self.compose(&hw, s)));
        Genset { words, complete: cb && ca }
    }

    /// Check that generator images satisfy every defining relation: the
    /// vertex-group relations and the commutations across edges. `images`
    /// lists one word per generator, vertices in order and generators of each
    /// vertex group in order.
    pub fn check_endomorphism(&self, images: &[Word]) -> Result<EndoCheck, AutError> {
        let gens: Vec<(VertexId, i64)> =
            (0..self.n()).flat_map(|v| self.group(v).generators().iter().map(move |&s| (v, s))).collect();
        if images.len() != gens.len() {
            return Err(AutError::ImageCount { expected: gens.len(), got: images.len() });
        }
        let g = self.graph();
        let one = Word::identity();
        let mut offset = 0;
        for v in 0..self.n() {
            let grp = self.group(v);
            let k = grp.generators().len();
            let imgs = &images[offset..offset + k];
            if let Some(rel) = self.vertex_relation_failure(v, imgs) {
                return Ok(EndoCheck::Violated(rel));
            }
            offset += k;
        }
        for (i, &(u, s)) in gens.iter().enumerate() {
            for (j, &(v, t)) in gens.iter().enumerate().skip(i + 1) {
                if u != v && g.adjacent(u, v) && self.commutator(&images[i], &images[j]) != one {
                    return Ok(EndoCheck::Violated(format!(
                        "[{}, {}] = 1",
                        self.format_syllable(&Syllable::new(u, s)),
                        self.format_syllable(&Syllable::new(v, t))
                    )));
                }
            }
        }
        Ok(EndoCheck::Valid)
    }

    /// Relations of `G_v`: for ℤn the order of the generator, for tables the
    /// Cayley-graph relations `w(a)·s = w(a·s)` with `w` a spanning-tree word.
    fn vertex_relation_failure(&self, v: VertexId, imgs: &[Word]) -> Option<String> {
        let grp = self.group(v);
        let gens = grp.generators();
        let name = self.graph().name(v);
        match grp.kind() {
            GroupKind::InfiniteCyclic => None,
            GroupKind::Cyclic(n) => {
                (!self.power(&imgs[0], *n as i64).is_identity()).then(|| format!("{name}^{n} = 1"))
            }
            GroupKind::Table(_) => {
                let order = grp.order().unwrap();
                let mut word_of: Vec<Option<Word>> = vec![None; order];
                word_of[0] = Some(Word::identity());
                let mut q = VecDeque::from([0i64]);
                while let Some(a) = q.pop_front() {
                    for (k, &s) in gens.iter().enumerate() {
                        let b = grp.mul(a, s);
                        if word_of[b as usize].is_none() {
                            word_of[b as usize] = Some(self.compose(word_of[a as usize].as_ref().unwrap(), &imgs[k]));
                            q.push_back(b);
                        }
                    }
                }
                for a in 0..order as i64 {
                    for (k, &s) in gens.iter().enumerate() {
                        let lhs = self.compose(word_of[a as usize].as_ref()?, &imgs[k]);
                        if &lhs != word_of[grp.mul(a, s) as usize].as_ref()? {
                            return Some(format!("{name}: w({a})·{s} = w({})", grp.mul(a, s)));
                        }
                    }
                }
                None
            }
        }
    }

    /// `asdim ≤ Σ max(1, asdim G_u)` and `δ ≺ ∏ max(n, δ_u)`.
    pub fn invariant_bounds(&self, asdim: &[Option<u32>], dehn: &[DehnClass]) -> InvariantBounds {
        let asdim_bound = asdim.iter().try_fold(0u32, |acc, a| a.map(|a| acc + a.max(1)));
        let asdim_bound = if asdim.len() == self.n() { asdim_bound } else { None };
        let dehn = if dehn.iter().all(|d| matches!(d, DehnClass::Polynomial(_))) {
            let k: u32 = dehn
                .iter()
                .map(|d| match d {
                    DehnClass::Polynomial(k) => (*k).max(1),
                    DehnClass::Exponential => unreachable!(),
                })
                .sum();
            format!("n^{k}")
        } else {
            dehn.iter()
                .map(|d| match d {
                    DehnClass::Polynomial(k) => format!("n^{}", (*k).max(1)),
                    DehnClass::Exponential => "exp(n)".to_string(),
                })
                .collect::<Vec<_>>()
                .join(" · ")
        };
        InvariantBounds { asdim: asdim_bound, dehn }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn formulas() {
        let z = fixtures::z_sum_z3_z2();
        let r = z.structure_report(&VertexGroupMeta::derive(&z)).unwrap();
        assert_eq!(r.formula, "Hom(ℤ3∗ℤ2 → Z(ℤ)) ⋊ (Aut(ℤ) ⊕ Aut(ℤ3∗ℤ2))");
        let c5 = fixtures::c5();
        let r = c5.structure_report(&VertexGroupMeta::derive(&c5)).unwrap();
        assert_eq!(r.formula, "Aut(⟨v1,v2,v3,v4,v5⟩)");
        let d = fixtures::dinf();
        let r = d.structure_report(&VertexGroupMeta::derive(&d)).unwrap();
        assert_eq!(r.factor_flags, vec![FactorFlag::DihedralException]);
    }

    #[test]
    fn cyclic_groups_of_composite_order_split() {
        let g = SimplicialGraph::from_names(&["a", "b"], &[]).unwrap();
        let p = Presentation::uniform(g, VertexGroup::cyclic(6).unwrap());
        assert!(matches!(p.structure_report(&VertexGroupMeta::derive(&p)), Err(AutError::GraphicallyReducible(_))));
    }

    #[test]
    fn verdict_examples() {
        let p4 = fixtures::p4();
        let m = VertexGroupMeta::derive(&p4);
        assert_eq!(p4.acyl_verdict(&m, Target::Raag).answer, Answer::Yes);
        let p3 = fixtures::p3();
        assert_eq!(p3.acyl_verdict(&VertexGroupMeta::derive(&p3), Target::Raag).answer, Answer::No);
        let c5 = fixtures::c5();
        assert_eq!(c5.acyl_verdict(&VertexGroupMeta::derive(&c5), Target::Racg).answer, Answer::Yes);
        let z = fixtures::z_sum_z3_z2();
        let mz = VertexGroupMeta::derive(&z);
        assert_eq!(z.acyl_verdict(&mz, Target::Aut).answer, Answer::Yes);
        assert_eq!(z.acyl_verdict(&mz, Target::Group).answer, Answer::No);
        let d = fixtures::dinf();
        assert_eq!(d.acyl_verdict(&VertexGroupMeta::derive(&d), Target::Aut).answer, Answer::DihedralException);
    }

    #[test]
    fn extension_and_vastness() {
        let p4 = fixtures::p4();
        let m = VertexGroupMeta::derive(&p4);
        assert_eq!(p4.extension_verdict(&m, true).answer, Answer::Yes);
        assert_eq!(p4.extension_verdict(&m, false).answer, Answer::No);
        let p3 = fixtures::p3();
        let m3 = VertexGroupMeta::derive(&p3);
        assert_eq!(p3.extension_verdict(&m3, true).answer, Answer::No);
        assert_eq!(p4.vastness_report(&m).sq_universal, Some(true));
        let d = fixtures::dinf();
        assert_eq!(d.vastness_report(&VertexGroupMeta::derive(&d)).sq_universal, None);
    }

    #[test]
    fn gensets() {
        let c5 = fixtures::c5();
        let s = c5.build_noncommuting_genset().unwrap();
        assert_eq!(s.words.len(), 10);
        assert!(s.complete);
        let fp = fixtures::fp();
        let s = fp.build_noncommuting_genset().unwrap();
        assert_eq!(s.words[0], fp.parse_word("u v u^2").unwrap());
        assert!(s.words.contains(&fp.parse_word("u v u v u^2 v").unwrap()));
        assert_eq!(s.words.len(), 3 + 4);
        assert!(fixtures::p3().build_noncommuting_genset().is_err());
    }

    #[test]
    fn endomorphisms() {
        let c5 = fixtures::c5();
        let id: Vec<Word> = (0..5).map(|v| c5.letter(v, 1).unwrap()).collect();
        assert_eq!(c5.check_endomorphism(&id).unwrap(), EndoCheck::Valid);
        let mut bad = id.clone();
        bad[0] = c5.letter(1, 1).unwrap();
        assert!(matches!(c5.check_endomorphism(&bad).unwrap(), EndoCheck::Violated(_)));
    }

    #[test]
    fn bounds() {
        let c5 = fixtures::c5();
        let b = c5.invariant_bounds(&[Some(0); 5], &[DehnClass::Polynomial(1); 5]);
        assert_eq!(b.asdim, Some(5));
        assert_eq!(b.dehn, "n^5");
        let p4 = fixtures::p4();
        assert_eq!(p4.invariant_bounds(&[Some(1); 4], &[DehnClass::Polynomial(1); 4]).asdim, Some(4));
    }
}
