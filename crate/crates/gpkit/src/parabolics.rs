//! Parabolic cosets `g⟨Λ⟩`, projections onto them, double cosets, and the
//! shape of centralisers.

use serde::Serialize;

use crate::graph_core::{VertexId, VertexSet};
use crate::verdict::{Verdict3, Witness};
use crate::word_engine::{Presentation, Syllable, Word, WordError};

/// The coset `rep·⟨lambda⟩`, with `rep` its unique shortest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coset {
    pub rep: Word,
    pub lambda: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ElementSet {
    Whole,
    Elements(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPart {
    pub vertex: VertexId,
    pub centralizer: ElementSet,
}

/// `C(x) = h·(⟨link_part⟩ × ∏ C(a_u) × ∏ ⟨c_j⟩)·h⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerDescription {
    pub conjugator: Word,
    pub link_part: VertexSet,
    pub vertex_parts: Vec<VertexPart>,
    pub cyclic_parts: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterDescription {
    pub clique_part: VertexSet,
    pub parts: Vec<VertexPart>,
}

impl CenterDescription {
    pub fn is_trivial(&self) -> bool {
        self.parts
            .iter()
            .all(|p| matches!(&p.centralizer, ElementSet::Elements(e) if e.iter().all(|&x| x == 0)))
    }
}

impl Presentation {
    /// Split `w = rest·tail` with `tail` the maximal suffix in `⟨Λ⟩`.
    pub fn tail_decompose(&self, w: &Word, lambda: VertexSet) -> (Word, Word) {
        let mut kept_after = VertexSet::EMPTY;
        let mut keep = Vec::new();
        let mut strip = Vec::new();
        for s in w.syllables().iter().rev() {
            if lambda.contains(s.vertex) && kept_after.is_subset(self.graph().link(s.vertex)) {
                strip.push(*s);
            } else {
                keep.push(*s);
                kept_after.insert(s.vertex);
            }
        }
        keep.reverse();
        strip.reverse();
        (self.wrap_reduced(keep), self.wrap_reduced(strip))
    }

    /// Split `w = head·rest` with `head` the maximal prefix in `⟨Λ⟩`.
    pub fn head_decompose(&self, w: &Word, lambda: VertexSet) -> (Word, Word) {
        let mut kept_before = VertexSet::EMPTY;
        let mut keep = Vec::new();
        let mut strip = Vec::new();
        for s in w.syllables() {
            if lambda.contains(s.vertex) && kept_before.is_subset(self.graph().link(s.vertex)) {
                strip.push(*s);
            } else {
                keep.push(*s);
                kept_before.insert(s.vertex);
            }
        }
        (self.wrap_reduced(strip), self.wrap_reduced(keep))
    }

    pub fn coset(&self, g: &Word, lambda: VertexSet) -> Coset {
        Coset { rep: self.tail_decompose(g, lambda).0, lambda }
    }

    pub fn in_subgroup(&self, x: &Word, lambda: VertexSet) -> bool {
        x.vertices().is_subset(lambda)
    }

    pub fn membership(&self, x: &Word, c: &Coset) -> bool {
        self.in_subgroup(&self.difference(&c.rep, x), c.lambda)
    }

    /// Left translate of a coset.
    pub fn translate(&self, g: &Word, c: &Coset) -> Coset {
        self.coset(&self.compose(g, &c.rep), c.lambda)
    }

    /// Nearest point projection onto a coset.
    pub fn project(&self, x: &Word, c: &Coset) -> Word {
        let (head, _) = self.head_decompose(&self.difference(&c.rep, x), c.lambda);
        self.compose(&c.rep, &head)
    }

    /// Syllable distance from `x` to the coset.
    pub fn distance_to_coset(&self, x: &Word, c: &Coset) -> usize {
        self.distance(x, &self.project(x, c))
    }

    pub fn cosets_intersect(&self, c1: &Coset, c2: &Coset) -> bool {
        let w = self.difference(&c1.rep, &c2.rep);
        self.double_coset_member(&w, c1.lambda, c2.lambda).is_certified()
    }

    /// Support of the normaliser of `⟨Λ⟩`: `Λ ∪ link(Λ)`.
    pub fn normalizer_support(&self, lambda: VertexSet) -> VertexSet {
        lambda.union(self.graph().common_link(lambda))
    }

    /// Decide `w ∈ ⟨A⟩·⟨B⟩` by stripping the maximal `⟨A⟩`-head. The greedy
    /// choice is complete; a refutation carries the residual word.
    pub fn double_coset_member(&self, w: &Word, a: VertexSet, b: VertexSet) -> Verdict3 {
        let (_, rest) = self.head_decompose(w, a);
        let (residual, _) = self.tail_decompose(&rest, b);
        if residual.is_identity() {
            Verdict3::certified("greedy-head-tail")
        } else {
            Verdict3::refuted("greedy-head-tail", Witness::Word(residual))
        }
    }

    /// Elements of `G_u` commuting with `a`.
    fn vertex_centralizer(&self, u: VertexId, a: i64) -> ElementSet {
        let g = self.group(u);
        if g.is_abelian() {
            return ElementSet::Whole;
        }
        let elems = g
            .elements()
            .expect("non-abelian groups are tables")
            .into_iter()
            .filter(|&b| g.mul(a, b) == g.mul(b, a))
            .collect();
        ElementSet::Elements(elems)
    }

    pub fn centralizer_description(&self, x: &Word, root_bound: usize) -> Result<CentralizerDescription, WordError> {
        let (h, y) = self.cyclic_reduce(x);
        let supp = y.vertices();
        let dec = self.graph().join_decomposition_of(supp);
        let vertex_parts = dec
            .clique_part
            .iter()
            .map(|u| {
                let a = y.syllables().iter().find(|s| s.vertex == u).expect("support vertex").elem;
                VertexPart { vertex: u, centralizer: self.vertex_centralizer(u, a) }
            })
            .collect();
        let mut cyclic_parts = Vec::new();
        for factor in &dec.factors {
            let piece: Vec<Syllable> =
                y.syllables().iter().copied().filter(|s| factor.contains(s.vertex)).collect();
            let piece = self.wrap_reduced(piece);
            let (root, _) = self.primitive_root(&piece, root_bound)?;
            cyclic_parts.push(root);
        }
        Ok(CentralizerDescription {
            conjugator: h,
            link_part: self.graph().common_link(supp),
            vertex_parts,
            cyclic_parts,
        })
    }

    /// Centre of the graph product: the centres of the vertex groups in Γ0.
    pub fn center(&self) -> CenterDescription {
        let clique_part = self.graph().join_decomposition().clique_part;
        let parts = clique_part
            .iter()
            .map(|u| {
                let g = self.group(u);
                let centralizer = if g.is_abelian() {
                    ElementSet::Whole
                } else {
                    let elems = g.elements().unwrap();
                    ElementSet::Elements(
                        elems
                            .iter()
                            .copied()
                            .filter(|&a| elems.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
                            .collect(),
                    )
                };
                VertexPart { vertex: u, centralizer }
            })
            .collect();
        CenterDescription { clique_part, parts }
    }
}

impl CentralizerDescription {
    /// A finite generating set of the described subgroup. Infinite vertex
    /// groups contribute their generators, finite ones every element.
    pub fn generators(&self, p: &Presentation) -> Vec<Word> {
        let mut raw: Vec<Word> = Vec::new();
        for u in self.link_part.iter() {
            for e in p.group(u).nontrivial_elements(1) {
                raw.push(p.letter(u, e).expect("valid element"));
            }
        }
        for part in &self.vertex_parts {
            let elems = match &part.centralizer {
                ElementSet::Whole => p.group(part.vertex).nontrivial_elements(1),
                ElementSet::Elements(e) => e.iter().copied().filter(|&a| a != 0).collect(),
            };
            for e in elems {
                raw.push(p.letter(part.vertex, e).expect("valid element"));
            }
        }
        raw.extend(self.cyclic_parts.iter().cloned());
        raw.iter().map(|w| p.conjugate(&self.conjugator, w)).collect()
    }
}
