//! Finite simplicial graphs and the graph-level predicates used everywhere else:
//! links, stars, opposite graphs, join decompositions, the `≺` relation and
//! maximal joins.
//!
//! Vertices are indices into a fixed, ordered list. Vertex sets are bitmasks, so
//! graphs are limited to 64 vertices.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type VertexId = usize;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("loop at vertex `{0}`")]
    Loop(String),
    #[error("graphs are limited to {MAX_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("vertex set induces a disconnected opposite graph")]
    DisconnectedOpposite,
    #[error("exhaustive subset search is limited to {limit} vertices, got {got}")]
    TooLargeForSearch { limit: usize, got: usize },
}

/// A set of vertices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: VertexId) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: VertexId) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: VertexId) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<VertexId> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = VertexId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkMode {
    Link,
    Star,
}

/// Γ0 (the clique part) together with the factors Γ1, …, Γn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinDecomposition {
    pub clique_part: VertexSet,
    pub factors: Vec<VertexSet>,
}

impl JoinDecomposition {
    /// Whether the decomposed set is a join (at least two parts).
    pub fn is_join(&self) -> bool {
        self.clique_part.len() + self.factors.len() >= 2
    }
}

/// The `≺` relation, its maximal vertices and its equivalence classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecStructure {
    /// `table[u][v]` is `link(u) ⊆ star(v)`.
    pub table: Vec<Vec<bool>>,
    pub maximal: VertexSet,
    pub classes: Vec<VertexSet>,
}

impl PrecStructure {
    pub fn prec(&self, u: VertexId, v: VertexId) -> bool {
        self.table[u][v]
    }
}

/// How a vertex of a simplified graph is assembled from original vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum VertexExpr {
    Base(VertexId),
    /// Vertices with a common star: their groups form a direct sum.
    DirectSum(Vec<VertexExpr>),
    /// Vertices with a common link: their groups form a free product.
    FreeProduct(Vec<VertexExpr>),
}

impl VertexExpr {
    pub fn base_vertices(&self) -> Vec<VertexId> {
        match self {
            VertexExpr::Base(v) => vec![*v],
            VertexExpr::DirectSum(xs) | VertexExpr::FreeProduct(xs) => {
                let mut out: Vec<_> = xs.iter().flat_map(|x| x.base_vertices()).collect();
                out.sort_unstable();
                out
            }
        }
    }

    fn render(&self, names: &[String]) -> String {
        match self {
            VertexExpr::Base(v) => names[*v].clone(),
            VertexExpr::DirectSum(xs) => {
                let parts: Vec<_> = xs.iter().map(|x| x.render(names)).collect();
                format!("({})", parts.join("+"))
            }
            VertexExpr::FreeProduct(xs) => {
                let parts: Vec<_> = xs.iter().map(|x| x.render(names)).collect();
                format!("({})", parts.join("*"))
            }
        }
    }
}

/// Result of collapsing same-star and same-link classes.
#[derive(Clone, Debug)]
pub struct Simplification {
    pub graph: SimplicialGraph,
    /// One expression per vertex of `graph`, in its vertex order.
    pub classes: Vec<VertexExpr>,
}

impl Simplification {
    pub fn is_identity(&self) -> bool {
        self.classes.iter().all(|c| matches!(c, VertexExpr::Base(_)))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(a, b)| format!("{}-{}", self.names[a], self.names[b]))
            .collect();
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

impl SimplicialGraph {
    pub fn new(names: Vec<String>, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        if names.len() > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(GraphError::DuplicateVertex(n.clone()));
            }
        }
        let mut adj = vec![VertexSet::EMPTY; names.len()];
        for &(a, b) in edges {
            if a >= names.len() {
                return Err(GraphError::VertexOutOfRange(a));
            }
            if b >= names.len() {
                return Err(GraphError::VertexOutOfRange(b));
            }
            if a == b {
                return Err(GraphError::Loop(names[a].clone()));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(SimplicialGraph { names, adj })
    }

    pub fn from_names(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| GraphError::UnknownVertex(s.to_string()))
        };
        let mut es = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            es.push((idx(a)?, idx(b)?));
        }
        SimplicialGraph::new(names, &es)
    }

    /// Graph on `n` vertices named `x0, x1, …` with edges given by a bitmask over
    /// the pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        let names = (0..n).map(|i| format!("x{i}")).collect();
        SimplicialGraph::new(names, &edges).expect("well-formed edge mask")
    }

    pub fn complete(names: &[&str]) -> Self {
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                edges.push((i, j));
            }
        }
        SimplicialGraph::new(names.iter().map(|s| s.to_string()).collect(), &edges)
            .expect("complete graph")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<VertexId, GraphError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for b in self.adj[a].iter() {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn link(&self, u: VertexId) -> VertexSet {
        self.adj[u]
    }

    pub fn star(&self, u: VertexId) -> VertexSet {
        self.adj[u].with(u)
    }

    pub fn link_star(&self, u: VertexId, mode: LinkMode) -> Result<VertexSet, GraphError> {
        if u >= self.n() {
            return Err(GraphError::VertexOutOfRange(u));
        }
        Ok(match mode {
            LinkMode::Link => self.link(u),
            LinkMode::Star => self.star(u),
        })
    }

    /// Vertices outside `set` adjacent to every vertex of `set`.
    pub fn common_link(&self, set: VertexSet) -> VertexSet {
        let mut acc = self.vertices();
        for v in set.iter() {
            acc = acc.intersection(self.adj[v]);
        }
        acc.difference(set)
    }

    pub fn opposite(&self) -> SimplicialGraph {
        let all = self.vertices();
        let adj = (0..self.n())
            .map(|v| all.difference(self.adj[v]).without(v))
            .collect();
        SimplicialGraph { names: self.names.clone(), adj }
    }

    pub fn is_complete_set(&self, set: VertexSet) -> bool {
        set.iter().all(|v| set.without(v).is_subset(self.adj[v]))
    }

    pub fn is_complete(&self) -> bool {
        self.is_complete_set(self.vertices())
    }

    /// Connected components of the subgraph induced on `set`, ordered by least vertex.
    pub fn components_of(&self, set: VertexSet) -> Vec<VertexSet> {
        let mut rest = set;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.adj[v].intersection(set));
                }
                frontier = next.difference(comp);
                comp = comp.union(frontier);
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_of(self.vertices()).len() <= 1
    }

    /// Components of the opposite graph induced on `set`.
    pub fn opposite_components_of(&self, set: VertexSet) -> Vec<VertexSet> {
        let all = self.vertices();
        let mut rest = set;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    let opp = all.difference(self.adj[v]).without(v);
                    next = next.union(opp.intersection(set));
                }
                frontier = next.difference(comp);
                comp = comp.union(frontier);
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Whether the subgraph induced on `set` is a join: at least two vertices and a
    /// disconnected opposite graph.
    pub fn is_join_set(&self, set: VertexSet) -> bool {
        set.len() >= 2 && self.opposite_components_of(set).len() >= 2
    }

    pub fn is_join(&self) -> bool {
        self.is_join_set(self.vertices())
    }

    pub fn join_decomposition_of(&self, set: VertexSet) -> JoinDecomposition {
        let mut clique_part = VertexSet::EMPTY;
        let mut factors = Vec::new();
        for c in self.opposite_components_of(set) {
            if c.len() == 1 {
                clique_part = clique_part.union(c);
            } else {
                factors.push(c);
            }
        }
        JoinDecomposition { clique_part, factors }
    }

    pub fn join_decomposition(&self) -> JoinDecomposition {
        self.join_decomposition_of(self.vertices())
    }

    /// Whether `set` lies inside some join subgraph of the whole graph.
    pub fn lies_in_join(&self, set: VertexSet) -> bool {
        if self.is_join_set(set) {
            return true;
        }
        // A set that is not itself a join lies in a join exactly when some vertex
        // outside it is adjacent to all of it.
        !set.is_empty() && !self.common_link(set).is_empty()
    }

    pub fn prec(&self, u: VertexId, v: VertexId) -> bool {
        self.link(u).is_subset(self.star(v))
    }

    pub fn prec_structure(&self) -> PrecStructure {
        let n = self.n();
        let table: Vec<Vec<bool>> = (0..n)
            .map(|u| (0..n).map(|v| self.prec(u, v)).collect())
            .collect();
        let mut maximal = VertexSet::EMPTY;
        for u in 0..n {
            let strictly_larger = (0..n).any(|v| table[u][v] && !table[v][u]);
            if !strictly_larger {
                maximal.insert(u);
            }
        }
        let mut classes: Vec<VertexSet> = Vec::new();
        let mut seen = VertexSet::EMPTY;
        for u in 0..n {
            if seen.contains(u) {
                continue;
            }
            let class: VertexSet = (0..n).filter(|&v| table[u][v] && table[v][u]).collect();
            seen = seen.union(class);
            classes.push(class);
        }
        PrecStructure { table, maximal, classes }
    }

    /// Collapse same-star classes (direct sums) and then same-link classes (free
    /// products), repeating until neither kind of coincidence remains.
    pub fn simplify_same_star_link(&self) -> Simplification {
        let mut graph = self.clone();
        let mut classes: Vec<VertexExpr> = (0..self.n()).map(VertexExpr::Base).collect();
        loop {
            let (g1, c1, changed_star) = collapse(&graph, classes, true, &self.names);
            let (g2, c2, changed_link) = collapse(&g1, c1, false, &self.names);
            graph = g2;
            classes = c2;
            if !changed_star && !changed_link {
                break;
            }
        }
        Simplification { graph, classes }
    }

    /// All inclusion-maximal join subgraphs, found by exhaustive subset search and
    /// listed in increasing bitmask order.
    pub fn maximal_joins(&self) -> Result<Vec<VertexSet>, GraphError> {
        const LIMIT: usize = 20;
        let n = self.n();
        if n > LIMIT {
            return Err(GraphError::TooLargeForSearch { limit: LIMIT, got: n });
        }
        let joins: Vec<VertexSet> = (1u64..1u64 << n)
            .map(VertexSet)
            .filter(|&s| self.is_join_set(s))
            .collect();
        Ok(joins
            .iter()
            .copied()
            .filter(|&s| !joins.iter().any(|&t| t != s && s.is_subset(t)))
            .collect())
    }

    /// Isolated vertices: the vertices lying in no join.
    pub fn isolated_vertices(&self) -> VertexSet {
        (0..self.n()).filter(|&v| self.adj[v].is_empty()).collect()
    }

    /// BFS distances from `src` inside the subgraph induced on `set`.
    fn distances_within(&self, src: VertexId, set: VertexSet, opposite: bool) -> Vec<Option<usize>> {
        let all = self.vertices();
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let nbrs = if opposite {
                all.difference(self.adj[v]).without(v)
            } else {
                self.adj[v]
            };
            for w in nbrs.intersection(set).iter() {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn diameter_within(&self, set: VertexSet, opposite: bool) -> Option<usize> {
        let mut best = 0;
        for v in set.iter() {
            let d = self.distances_within(v, set, opposite);
            for w in set.iter() {
                best = best.max(d[w]?);
            }
        }
        Some(best)
    }

    /// Diameter of the graph; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        self.diameter_within(self.vertices(), false)
    }

    /// Diameter of the opposite graph induced on `support`.
    pub fn opp_diameter(&self, support: VertexSet) -> Result<usize, GraphError> {
        self.diameter_within(support, true)
            .ok_or(GraphError::DisconnectedOpposite)
    }

    /// Shortest path from `a` to `b` in the opposite graph, endpoints included.
    pub fn opposite_path(&self, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        let all = self.vertices();
        let mut prev = vec![usize::MAX; self.n()];
        let mut seen = VertexSet::singleton(a);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                let mut path = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in all.difference(self.adj[v]).without(v).iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Size of a largest clique (brute force).
    pub fn clique_number(&self) -> usize {
        let mut best = 0;
        fn grow(g: &SimplicialGraph, cur: VertexSet, cand: VertexSet, best: &mut usize) {
            *best = (*best).max(cur.len());
            if cur.len() + cand.len() <= *best {
                return;
            }
            let mut cand = cand;
            while let Some(v) = cand.first() {
                cand.remove(v);
                grow(g, cur.with(v), cand.intersection(g.adj[v]), best);
            }
        }
        grow(self, VertexSet::EMPTY, self.vertices(), &mut best);
        best
    }

    /// Induced subgraph on `set`, with vertices renumbered in order.
    pub fn induced(&self, set: VertexSet) -> SimplicialGraph {
        let verts = set.to_vec();
        let names = verts.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    edges.push((i, j));
                }
            }
        }
        SimplicialGraph::new(names, &edges).expect("induced subgraph")
    }

    pub fn render_set(&self, set: VertexSet) -> String {
        let parts: Vec<_> = set.iter().map(|v| self.names[v].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Merge one round of equivalence classes: same star (`by_star`) or same link.
fn collapse(
    g: &SimplicialGraph,
    classes: Vec<VertexExpr>,
    by_star: bool,
    base_names: &[String],
) -> (SimplicialGraph, Vec<VertexExpr>, bool) {
    let n = g.n();
    let key = |v: VertexId| if by_star { g.star(v) } else { g.link(v) };
    let mut rep = vec![usize::MAX; n];
    let mut groups: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..n {
        if rep[v] != usize::MAX {
            continue;
        }
        let members: Vec<_> = (v..n).filter(|&w| rep[w] == usize::MAX && key(w) == key(v)).collect();
        for &w in &members {
            rep[w] = groups.len();
        }
        groups.push(members);
    }
    if groups.len() == n {
        return (g.clone(), classes, false);
    }
    let mut new_classes = Vec::with_capacity(groups.len());
    let mut names = Vec::with_capacity(groups.len());
    for members in &groups {
        if members.len() == 1 {
            new_classes.push(classes[members[0]].clone());
            names.push(g.names[members[0]].clone());
        } else {
            let parts: Vec<_> = members.iter().map(|&m| classes[m].clone()).collect();
            let expr = if by_star {
                VertexExpr::DirectSum(parts)
            } else {
                VertexExpr::FreeProduct(parts)
            };
            names.push(expr.render(base_names));
            new_classes.push(expr);
        }
    }
    let mut edges = Vec::new();
    for (i, a) in groups.iter().enumerate() {
        for (j, b) in groups.iter().enumerate().skip(i + 1) {
            if g.adjacent(a[0], b[0]) {
                edges.push((i, j));
            }
        }
    }
    let names = dedupe_names(names);
    let graph = SimplicialGraph::new(names, &edges).expect("collapsed graph");
    (graph, new_classes, true)
}

fn dedupe_names(names: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(names.len());
    for name in names {
        let mut candidate = name.clone();
        let mut k = 1;
        while out.contains(&candidate) {
            candidate = format!("{name}#{k}");
            k += 1;
        }
        out.push(candidate);
    }
    out
}
