//! Elements of a graph product as canonical graphically reduced words.
//!
//! A [`Word`] is always stored in normal form: no identity syllables, no two
//! same-vertex syllables that could be shuffled together, and among the words
//! obtained by swapping adjacent commuting syllables, the one whose vertex
//! sequence is lexicographically least.

mod ball;
mod group;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph_core::{GraphError, SimplicialGraph, VertexId, VertexSet};

pub use ball::{ball, ball_with_exponents, sphere_sizes};
pub use group::{s3_table, GroupKind, VertexGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("element {0} is out of range for its vertex group")]
    BadElement(i64),
    #[error("invalid vertex group: {0}")]
    BadGroup(String),
    #[error("expected {expected} vertex groups, got {got}")]
    GroupCount { expected: usize, got: usize },
    #[error("cannot parse token `{token}`: {reason}")]
    Token { token: String, reason: String },
    #[error("element is not irreducible within its support")]
    Reducible,
    #[error("no root within length bound {0}")]
    RootNotFound(usize),
    #[error("word too long for poset enumeration ({0} syllables, limit 64)")]
    TooLong(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Syllable {
    pub vertex: VertexId,
    pub elem: i64,
}

impl Syllable {
    pub fn new(vertex: VertexId, elem: i64) -> Self {
        Syllable { vertex, elem }
    }
}

/// A canonical graphically reduced word. Only [`Presentation`] builds these.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Word(Vec<Syllable>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Vertices of the syllables (not the support of the cyclic core).
    pub fn vertices(&self) -> VertexSet {
        self.0.iter().map(|s| s.vertex).collect()
    }

    pub fn count(&self, u: VertexId) -> usize {
        self.0.iter().filter(|s| s.vertex == u).count()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", s.vertex, s.elem)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDistance {
    pub d: usize,
    pub d_u: Vec<usize>,
    pub delta_u: Vec<u64>,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportInfo {
    pub support: VertexSet,
    pub is_single_vertex: bool,
    /// The support itself induces a join.
    pub support_is_join: bool,
    /// Not a single vertex and not contained in any join subgraph of Γ.
    pub is_irreducible: bool,
    pub has_full_support: bool,
}

/// A graph together with one group per vertex.
#[derive(Clone, Debug)]
pub struct Presentation {
    graph: SimplicialGraph,
    groups: Vec<VertexGroup>,
}

impl Presentation {
    pub fn new(graph: SimplicialGraph, groups: Vec<VertexGroup>) -> Result<Self, WordError> {
        if graph.n() != groups.len() {
            return Err(WordError::GroupCount { expected: graph.n(), got: groups.len() });
        }
        Ok(Presentation { graph, groups })
    }

    /// Every vertex group is `group`.
    pub fn uniform(graph: SimplicialGraph, group: VertexGroup) -> Self {
        let groups = vec![group; graph.n()];
        Presentation { graph, groups }
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn group(&self, v: VertexId) -> &VertexGroup {
        &self.groups[v]
    }

    pub fn groups(&self) -> &[VertexGroup] {
        &self.groups
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Syllables commute when they sit at distinct adjacent vertices.
    pub fn commute(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.graph.adjacent(a, b)
    }

    /// Single-syllable word. Identity elements give the empty word.
    pub fn letter(&self, v: VertexId, elem: i64) -> Result<Word, WordError> {
        self.reduce(&[Syllable::new(v, elem)])
    }

    /// Reduce an arbitrary syllable list to normal form.
    pub fn reduce(&self, raw: &[Syllable]) -> Result<Word, WordError> {
        let mut stack = Vec::with_capacity(raw.len());
        for s in raw {
            if s.vertex >= self.n() {
                return Err(GraphError::VertexOutOfRange(s.vertex).into());
            }
            let e = self.groups[s.vertex].normalize(s.elem)?;
            self.push(&mut stack, Syllable::new(s.vertex, e));
        }
        Ok(self.canonicalize(stack))
    }

    /// Append one syllable to a reduced stack, merging or cancelling with the
    /// nearest same-vertex syllable that it can reach by commuting leftwards.
    fn push(&self, stack: &mut Vec<Syllable>, s: Syllable) {
        if s.elem == 0 {
            return;
        }
        for j in (0..stack.len()).rev() {
            let t = stack[j];
            if t.vertex == s.vertex {
                let e = self.groups[s.vertex].mul(t.elem, s.elem);
                if e == 0 {
                    stack.remove(j);
                } else {
                    stack[j].elem = e;
                }
                return;
            }
            if !self.graph.adjacent(t.vertex, s.vertex) {
                break;
            }
        }
        stack.push(s);
    }

    /// Greedy front normal form: repeatedly emit the least vertex among the
    /// syllables that can be shuffled to the front.
    /// Sorts in place: the chosen syllable is rotated to the front of the
    /// unsorted tail, which keeps the order of the others.
    fn canonicalize(&self, mut syl: Vec<Syllable>) -> Word {
        for k in 0..syl.len() {
            let mut seen = VertexSet::EMPTY;
            let mut best = k;
            for i in k..syl.len() {
                let s = syl[i];
                if seen.is_subset(self.graph.link(s.vertex)) && syl[best].vertex > s.vertex {
                    best = i;
                }
                seen.insert(s.vertex);
                // a vertex already seen is blocked, so nothing later can beat `best`
                if VertexSet((1u64 << syl[best].vertex) - 1).is_subset(seen) {
                    break;
                }
            }
            syl[k..=best].rotate_right(1);
        }
        Word(syl)
    }

    /// Build a word from syllables already known to be reduced; used internally
    /// for subwords of reduced words.
    pub(crate) fn wrap_reduced(&self, syl: Vec<Syllable>) -> Word {
        self.canonicalize(syl)
    }

    pub fn compose(&self, x: &Word, y: &Word) -> Word {
        let mut stack = x.0.clone();
        for &s in &y.0 {
            self.push(&mut stack, s);
        }
        self.canonicalize(stack)
    }

    pub fn compose_all<'a>(&self, words: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut stack = Vec::new();
        for w in words {
            for &s in &w.0 {
                self.push(&mut stack, s);
            }
        }
        self.canonicalize(stack)
    }

    pub fn invert(&self, x: &Word) -> Word {
        let syl = x
            .0
            .iter()
            .rev()
            .map(|s| Syllable::new(s.vertex, self.groups[s.vertex].inv(s.elem)))
            .collect();
        self.canonicalize(syl)
    }

    /// `x⁻¹y`.
    pub fn difference(&self, x: &Word, y: &Word) -> Word {
        self.compose(&self.invert(x), y)
    }

    pub fn conjugate(&self, c: &Word, x: &Word) -> Word {
        self.compose_all([c, x, &self.invert(c)])
    }

    pub fn power(&self, x: &Word, k: i64) -> Word {
        let base = if k < 0 { self.invert(x) } else { x.clone() };
        let mut stack = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &s in &base.0 {
                self.push(&mut stack, s);
            }
        }
        self.canonicalize(stack)
    }

    pub fn commutator(&self, x: &Word, y: &Word) -> Word {
        let xi = self.invert(x);
        let yi = self.invert(y);
        self.compose_all([x, y, &xi, &yi])
    }

    pub fn commutes(&self, x: &Word, y: &Word) -> bool {
        self.compose(x, y) == self.compose(y, x)
    }

    /// Syllables that can be shuffled to the end of `x`.
    pub fn tail(&self, x: &Word) -> Vec<Syllable> {
        let mut after = VertexSet::EMPTY;
        let mut out = Vec::new();
        for s in x.0.iter().rev() {
            if after.is_subset(self.graph.link(s.vertex)) {
                out.push(*s);
            }
            after.insert(s.vertex);
        }
        out.reverse();
        out
    }

    /// Syllables that can be shuffled to the front of `x`.
    pub fn head(&self, x: &Word) -> Vec<Syllable> {
        let mut before = VertexSet::EMPTY;
        let mut out = Vec::new();
        for s in &x.0 {
            if before.is_subset(self.graph.link(s.vertex)) {
                out.push(*s);
            }
            before.insert(s.vertex);
        }
        out
    }

    /// Write `x = conj · core · conj⁻¹` with `core` graphically cyclically reduced.
    /// Each round conjugates off the head/tail pair with the least vertex.
    pub fn cyclic_reduce(&self, x: &Word) -> (Word, Word) {
        let mut conj = Word::identity();
        let mut core = x.clone();
        loop {
            let head = self.head(&core);
            let tail = self.tail(&core);
            let pair = head
                .iter()
                .filter_map(|h| {
                    let pos_h = core.0.iter().position(|s| s == h)?;
                    let t = tail.iter().find(|t| t.vertex == h.vertex)?;
                    let pos_t = core.0.iter().rposition(|s| s == t)?;
                    (pos_h != pos_t).then_some(*h)
                })
                .min_by_key(|s| s.vertex);
            let Some(a) = pair else { break };
            let aw = Word(vec![a]);
            core = self.compose_all([&self.invert(&aw), &core, &aw]);
            conj = self.compose(&conj, &aw);
        }
        (conj, core)
    }

    pub fn support(&self, x: &Word) -> VertexSet {
        self.cyclic_reduce(x).1.vertices()
    }

    pub fn support_classify(&self, x: &Word) -> SupportInfo {
        let support = self.support(x);
        let single = support.len() == 1;
        SupportInfo {
            support,
            is_single_vertex: single,
            support_is_join: self.graph.is_join_set(support),
            is_irreducible: support.len() >= 2 && !self.graph.lies_in_join(support),
            has_full_support: support == self.graph.vertices(),
        }
    }

    pub fn graded_distance(&self, x: &Word, y: &Word) -> GradedDistance {
        let w = self.difference(x, y);
        let mut d_u = vec![0; self.n()];
        let mut delta_u = vec![0; self.n()];
        for s in &w.0 {
            d_u[s.vertex] += 1;
            delta_u[s.vertex] += self.groups[s.vertex].length(s.elem);
        }
        GradedDistance { d: w.len(), d_u, delta: delta_u.iter().sum(), delta_u }
    }

    pub fn distance(&self, x: &Word, y: &Word) -> usize {
        self.difference(x, y).len()
    }

    /// For each syllable position, the bitmask of earlier positions that must
    /// precede it in every equivalent word (transitively closed).
    pub fn poset_predecessors(&self, w: &Word) -> Result<Vec<u64>, WordError> {
        if w.len() > 64 {
            return Err(WordError::TooLong(w.len()));
        }
        let mut pred = vec![0u64; w.len()];
        for j in 0..w.len() {
            for i in 0..j {
                if !self.commute(w.0[i].vertex, w.0[j].vertex) {
                    pred[j] |= 1u64 << i | pred[i];
                }
            }
        }
        Ok(pred)
    }

    /// All downward-closed position sets of the commutation poset, each giving a
    /// prefix of `w`. Ordered by size, then by mask.
    pub fn downsets(&self, w: &Word) -> Result<Vec<u64>, WordError> {
        let pred = self.poset_predecessors(w)?;
        let mut layers = vec![vec![0u64]];
        for _ in 0..w.len() {
            let mut next: Vec<u64> = Vec::new();
            for &m in layers.last().unwrap() {
                for (i, &p) in pred.iter().enumerate() {
                    if m >> i & 1 == 0 && p & !m == 0 {
                        next.push(m | 1u64 << i);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            layers.push(next);
        }
        Ok(layers.into_iter().flatten().collect())
    }

    /// The prefix of `w` given by a downset mask.
    pub fn prefix(&self, w: &Word, mask: u64) -> Word {
        let syl = w
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| *s)
            .collect();
        self.wrap_reduced(syl)
    }

    /// Largest-exponent root of an element that is irreducible within the
    /// subgroup generated by its support. Roots longer than `bound` are ignored.
    pub fn primitive_root(&self, x: &Word, bound: usize) -> Result<(Word, u32), WordError> {
        let info = self.support_classify(x);
        if info.support.len() < 2 || info.support_is_join {
            return Err(WordError::Reducible);
        }
        let (c, y) = self.cyclic_reduce(x);
        let n = y.len();
        let downsets = self.downsets(&y)?;
        for k in (1..=n).rev() {
            if n % k != 0 {
                continue;
            }
            let size = (n / k) as u32;
            for &m in downsets.iter().filter(|m| m.count_ones() == size) {
                let s = self.prefix(&y, m);
                if self.power(&s, k as i64) != y {
                    continue;
                }
                let root = self.conjugate(&c, &s);
                if root.len() <= bound {
                    return Ok((root, k as u32));
                }
            }
        }
        Err(WordError::RootNotFound(bound))
    }

    /// Parse whitespace-separated tokens `v`, `v^k` or `v:idx` and reduce.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            raw.push(self.parse_token(token)?);
        }
        self.reduce(&raw)
    }

    fn parse_token(&self, token: &str) -> Result<Syllable, WordError> {
        let bad = |reason: &str| WordError::Token { token: token.to_string(), reason: reason.to_string() };
        if let Some((name, idx)) = token.split_once(':') {
            let v = self.graph.index_of(name)?;
            let idx: i64 = idx.parse().map_err(|_| bad("index is not an integer"))?;
            let g = &self.groups[v];
            let e = g.normalize(idx).map_err(|_| bad("index out of range"))?;
            if !g.is_finite() {
                return Err(bad("`v:idx` needs a finite group; use `v^k`"));
            }
            return Ok(Syllable::new(v, e));
        }
        let (name, k) = match token.split_once('^') {
            Some((name, k)) => (name, k.parse::<i64>().map_err(|_| bad("exponent is not an integer"))?),
            None => (token, 1),
        };
        let v = self.graph.index_of(name)?;
        let g = &self.groups[v];
        let gen = g.generators()[0];
        Ok(Syllable::new(v, g.pow(gen, k)))
    }

    pub fn format_syllable(&self, s: &Syllable) -> String {
        let name = self.graph.name(s.vertex);
        let g = &self.groups[s.vertex];
        match g.kind() {
            GroupKind::Table(_) => format!("{name}:{}", s.elem),
            _ if s.elem == 1 => name.to_string(),
            _ => format!("{name}^{}", s.elem),
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        let parts: Vec<_> = w.0.iter().map(|s| self.format_syllable(s)).collect();
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn reduce_examples() {
        let p3 = fixtures::p3();
        let w = p3.parse_word("a b a^-1").unwrap();
        assert_eq!(p3.format_word(&w), "b");
        let c5 = fixtures::c5();
        let w = c5.parse_word("v1 v3 v1").unwrap();
        assert_eq!(w.len(), 3);
        let fp = fixtures::fp();
        assert!(fp.parse_word("u u u u").unwrap().is_identity());
    }

    #[test]
    fn canonical_order_prefers_low_vertices() {
        let p4 = fixtures::p4();
        let tb = p4.parse_word("b").unwrap();
        let ta = p4.parse_word("a").unwrap();
        assert_eq!(p4.format_word(&p4.compose(&tb, &ta)), "a b");
        let tc = p4.parse_word("c").unwrap();
        assert_eq!(p4.format_word(&p4.compose(&tc, &ta)), "c a");
    }

    #[test]
    fn fp_inverse() {
        let fp = fixtures::fp();
        let x = fp.parse_word("u v").unwrap();
        assert_eq!(fp.format_word(&fp.invert(&x)), "v^2 u^3");
    }

    #[test]
    fn tails() {
        let p3 = fixtures::p3();
        let x = p3.parse_word("a b").unwrap();
        assert_eq!(p3.tail(&x).len(), 2);
        let c5 = fixtures::c5();
        let x = c5.parse_word("v1 v3 v1").unwrap();
        assert_eq!(c5.tail(&x), vec![Syllable::new(0, 1)]);
        assert!(c5.tail(&Word::identity()).is_empty());
    }

    #[test]
    fn cyclic_reduction() {
        let c5 = fixtures::c5();
        let (conj, core) = c5.cyclic_reduce(&c5.parse_word("v1 v3 v1").unwrap());
        assert_eq!(c5.format_word(&conj), "v1");
        assert_eq!(c5.format_word(&core), "v3");
        let x = c5.parse_word("v1 v3").unwrap();
        assert_eq!(c5.cyclic_reduce(&x), (Word::identity(), x));
        let fp = fixtures::fp();
        let (conj, core) = fp.cyclic_reduce(&fp.parse_word("u v u^-1").unwrap());
        assert_eq!(fp.format_word(&conj), "u");
        assert_eq!(fp.format_word(&core), "v");
    }

    #[test]
    fn graded_distance_examples() {
        let fp = fixtures::fp();
        let y = fp.parse_word("u v u^2").unwrap();
        let gd = fp.graded_distance(&Word::identity(), &y);
        assert_eq!((gd.d, gd.d_u.clone(), gd.delta_u.clone(), gd.delta), (3, vec![2, 1], vec![3, 1], 4));
        let c5 = fixtures::c5();
        let gd = c5.graded_distance(&Word::identity(), &c5.parse_word("v1 v3 v1").unwrap());
        assert_eq!((gd.d, gd.d_u[0], gd.d_u[2], gd.delta), (3, 2, 1, 3));
    }

    #[test]
    fn roots() {
        let c5 = fixtures::c5();
        let x = c5.parse_word("v1 v3 v1 v3").unwrap();
        let (r, k) = c5.primitive_root(&x, x.len()).unwrap();
        assert_eq!((c5.format_word(&r).as_str(), k), ("v1 v3", 2));
        let fp = fixtures::fp();
        let x = fp.parse_word("u v u v u v").unwrap();
        let (r, k) = fp.primitive_root(&x, x.len()).unwrap();
        assert_eq!((fp.format_word(&r).as_str(), k), ("u v", 3));
        let p4 = fixtures::p4();
        assert_eq!(p4.primitive_root(&p4.parse_word("a b").unwrap(), 4), Err(WordError::Reducible));
    }

    #[test]
    fn table_tokens() {
        let g = SimplicialGraph::from_names(&["s", "t"], &[]).unwrap();
        let p = Presentation::uniform(g, VertexGroup::table(s3_table()).unwrap());
        let w = p.parse_word("s:1 s:1 t:4").unwrap();
        assert_eq!(p.format_word(&w), "t:4");
        assert!(p.parse_word("s:9").is_err());
    }
}
