//! Independent oracles for the fixtures. Nothing here calls the normal-form code:
//! the pentagon group is modelled by its Tits representation, ℤ4 ∗ ℤ3 by
//! naive free reduction, and geometry by explicit graphs and BFS.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

/// A raw letter: vertex index and group element.
pub type Letter = (usize, i64);

pub trait Oracle {
    type Id: Clone + Eq + Hash + Ord + std::fmt::Debug;
    fn identity(&self) -> Self::Id;
    fn mul_letter(&self, x: &Self::Id, l: Letter) -> Self::Id;
    /// Non-identity letters of every vertex group.
    fn letters(&self) -> Vec<Letter>;
    fn inverse_letter(&self, l: Letter) -> Letter;

    fn eval(&self, word: &[Letter]) -> Self::Id {
        word.iter().fold(self.identity(), |acc, &l| self.mul_letter(&acc, l))
    }
    fn eval_inverse(&self, word: &[Letter]) -> Self::Id {
        word.iter().rev().fold(self.identity(), |acc, &l| self.mul_letter(&acc, self.inverse_letter(l)))
    }
    /// Id of `x⁻¹·y` for raw words.
    fn quotient(&self, x: &[Letter], y: &[Letter]) -> Self::Id {
        let mut acc = self.eval_inverse(x);
        for &l in y {
            acc = self.mul_letter(&acc, l);
        }
        acc
    }
}

/// Right-angled Coxeter group of the pentagon through the Tits
/// representation: `B(e_i, e_j)` is 1 on the diagonal, 0 for commuting
/// generators and −1 otherwise. Elements are integer matrices (row-major).
pub struct TitsC5 {
    adjacent: [[bool; 5]; 5],
}

impl TitsC5 {
    pub fn new() -> Self {
        let mut adjacent = [[false; 5]; 5];
        for i in 0..5 {
            adjacent[i][(i + 1) % 5] = true;
            adjacent[(i + 1) % 5][i] = true;
        }
        TitsC5 { adjacent }
    }

    fn b(&self, i: usize, j: usize) -> i64 {
        if i == j {
            1
        } else if self.adjacent[i][j] {
            0
        } else {
            -1
        }
    }
}

impl Oracle for TitsC5 {
    type Id = [i64; 25];

    fn identity(&self) -> Self::Id {
        let mut m = [0; 25];
        for i in 0..5 {
            m[i * 5 + i] = 1;
        }
        m
    }

    /// Right multiplication by the reflection `σ_i(x) = x − 2B(e_i, x)e_i`.
    fn mul_letter(&self, x: &Self::Id, l: Letter) -> Self::Id {
        let i = l.0;
        let mut s = [0i64; 25];
        for c in 0..5 {
            for r in 0..5 {
                let delta = if r == c { 1 } else { 0 };
                let corr = if r == i { 2 * self.b(i, c) } else { 0 };
                s[r * 5 + c] = delta - corr;
            }
        }
        let mut out = [0i64; 25];
        for r in 0..5 {
            for c in 0..5 {
                out[r * 5 + c] = (0..5).map(|k| x[r * 5 + k] * s[k * 5 + c]).sum();
            }
        }
        out
    }

    fn letters(&self) -> Vec<Letter> {
        (0..5).map(|v| (v, 1)).collect()
    }

    fn inverse_letter(&self, l: Letter) -> Letter {
        l
    }
}

/// Free product of finite cyclic groups by naive reduction.
pub struct FreeCyclic {
    pub orders: Vec<i64>,
}

impl FreeCyclic {
    pub fn z4_z3() -> Self {
        FreeCyclic { orders: vec![4, 3] }
    }
}

impl Oracle for FreeCyclic {
    type Id = Vec<Letter>;

    fn identity(&self) -> Self::Id {
        Vec::new()
    }

    fn mul_letter(&self, x: &Self::Id, l: Letter) -> Self::Id {
        let n = self.orders[l.0];
        let e = l.1.rem_euclid(n);
        let mut out = x.clone();
        if e == 0 {
            return out;
        }
        match out.last_mut() {
            Some(last) if last.0 == l.0 => {
                let m = (last.1 + e) % n;
                if m == 0 {
                    out.pop();
                } else {
                    last.1 = m;
                }
            }
            _ => out.push((l.0, e)),
        }
        out
    }

    fn letters(&self) -> Vec<Letter> {
        self.orders
            .iter()
            .enumerate()
            .flat_map(|(v, &n)| (1..n).map(move |e| (v, e)))
            .collect()
    }

    fn inverse_letter(&self, l: Letter) -> Letter {
        (l.0, (-l.1).rem_euclid(self.orders[l.0]))
    }
}

/// All raw letter sequences of length at most `max_len`.
pub fn raw_words(letters: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in letters {
                let mut x: Vec<Letter> = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// BFS distances from the identity in the Cayley graph with the given step
/// letters, up to `radius`.
pub fn cayley_bfs<O: Oracle>(o: &O, steps: &[Letter], radius: usize) -> HashMap<O::Id, usize> {
    let mut dist = HashMap::new();
    let id = o.identity();
    dist.insert(id.clone(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for &l in steps {
            let y = o.mul_letter(&x, l);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// An explicit ball of the quasi-median graph: vertices are oracle ids, each
/// carrying a raw word reaching it; edges join `x` and `x·l`.
pub struct ExplicitBall<O: Oracle> {
    pub ids: Vec<O::Id>,
    pub words: Vec<Vec<Letter>>,
    pub index: HashMap<O::Id, usize>,
    pub dist: Vec<usize>,
    /// Adjacency lists with the vertex label of each edge.
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl<O: Oracle> ExplicitBall<O> {
    pub fn build(o: &O, radius: usize) -> Self {
        let letters = o.letters();
        let id = o.identity();
        let mut ids = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(id, 0)]);
        let mut dist = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if dist[i] == radius {
                continue;
            }
            for &l in &letters {
                let y = o.mul_letter(&ids[i], l);
                if !index.contains_key(&y) {
                    let j = ids.len();
                    index.insert(y.clone(), j);
                    ids.push(y);
                    let mut w = words[i].clone();
                    w.push(l);
                    words.push(w);
                    dist.push(dist[i] + 1);
                    queue.push_back(j);
                }
            }
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for i in 0..ids.len() {
            for &l in &letters {
                let y = o.mul_letter(&ids[i], l);
                if let Some(&j) = index.get(&y) {
                    adj[i].push((j, l.0));
                }
            }
            adj[i].sort_unstable();
            adj[i].dedup();
        }
        ExplicitBall { ids, words, index, dist, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].iter().any(|&(x, _)| x == b)
    }

    /// Undirected edges `(a, b)` with `a < b`, indexed.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for &(b, lab) in &self.adj[a] {
                if a < b {
                    out.push((a, b, lab));
                }
            }
        }
        out
    }
}

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Edge classes generated by "same triangle" and "opposite in a square",
/// plus the pairs of classes that cross in some square.
pub struct WallClasses {
    pub edge_index: HashMap<(usize, usize), usize>,
    pub class_of: Vec<usize>,
    pub crossing: std::collections::HashSet<(usize, usize)>,
}

pub fn wall_classes<O: Oracle>(ball: &ExplicitBall<O>) -> WallClasses {
    let edges = ball.edges();
    let edge_index: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &(a, b, _))| ((a, b), i)).collect();
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let mut uf = UnionFind::new(edges.len());
    let mut squares = Vec::new();
    for x in 0..ball.len() {
        let nbrs: Vec<usize> = ball.adj[x].iter().map(|&(y, _)| y).collect();
        for (i, &y) in nbrs.iter().enumerate() {
            for &z in &nbrs[i + 1..] {
                if ball.adjacent(y, z) {
                    uf.union(edge_index[&key(x, y)], edge_index[&key(x, z)]);
                    uf.union(edge_index[&key(x, y)], edge_index[&key(y, z)]);
                } else {
                    for &(w, _) in &ball.adj[y] {
                        if w != x && ball.adjacent(w, z) && !ball.adjacent(w, x) {
                            squares.push((x, y, w, z));
                            uf.union(edge_index[&key(x, y)], edge_index[&key(z, w)]);
                            uf.union(edge_index[&key(x, z)], edge_index[&key(y, w)]);
                        }
                    }
                }
            }
        }
    }
    let class_of: Vec<usize> = (0..edges.len()).map(|e| uf.find(e)).collect();
    let mut crossing = std::collections::HashSet::new();
    for (x, y, _w, z) in squares {
        let c1 = class_of[edge_index[&key(x, y)]];
        let c2 = class_of[edge_index[&key(x, z)]];
        crossing.insert((c1.min(c2), c1.max(c2)));
    }
    WallClasses { edge_index, class_of, crossing }
}

/// Explicit `T_u` and `TS_u` inside a ball. Node `comp[x]` is the component of
/// `x` after deleting the `u`-edges. In `T_u` the other nodes are `u`-wall
/// classes; in `TS_u` they are fibers, the classes of `link(u)`-edges.
pub struct TreeWindow {
    pub comp: Vec<usize>,
    pub tree: Vec<Vec<usize>>,
    pub spaces: Vec<Vec<usize>>,
}

impl TreeWindow {
    pub fn build<O: Oracle>(
        o: &O,
        b: &ExplicitBall<O>,
        u: usize,
        in_link: impl Fn(usize) -> bool,
        is_step: impl Fn(Letter) -> bool,
    ) -> Self {
        let n = b.len();
        let edges = b.edges();
        let wc = wall_classes(b);
        let mut off = UnionFind::new(n);
        let mut fib = UnionFind::new(n);
        for &(x, y, lab) in &edges {
            if lab != u {
                off.union(x, y);
            }
            if in_link(lab) {
                fib.union(x, y);
            }
        }
        let comp: Vec<usize> = (0..n).map(|x| off.find(x)).collect();
        let fiber: Vec<usize> = (0..n).map(|x| fib.find(x)).collect();

        // nodes 0..n are components (by root), n.. are walls or fibers
        let mut tree = vec![Vec::new(); n + edges.len()];
        let mut spaces = vec![Vec::new(); 2 * n];
        let link_nodes = |g: &mut Vec<Vec<usize>>, a: usize, c: usize| {
            g[a].push(c);
            g[c].push(a);
        };
        for (e, &(x, y, lab)) in edges.iter().enumerate() {
            if lab == u {
                let w = n + wc.class_of[e];
                link_nodes(&mut tree, comp[x], w);
                link_nodes(&mut tree, comp[y], w);
            }
        }
        // pieces of TS_u are Cayley graphs of G_u, so only generator steps
        for x in 0..n {
            for l in o.letters() {
                if l.0 == u && is_step(l) {
                    if let Some(&y) = b.index.get(&o.mul_letter(&b.ids[x], l)) {
                        link_nodes(&mut spaces, n + fiber[x], n + fiber[y]);
                    }
                }
            }
        }
        for x in 0..n {
            link_nodes(&mut spaces, comp[x], n + fiber[x]);
        }
        TreeWindow { comp, tree, spaces }
    }
}

pub fn bfs(g: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; g.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(a) = q.pop_front() {
        for &b in &g[a] {
            if d[b] == usize::MAX {
                d[b] = d[a] + 1;
                q.push_back(b);
            }
        }
    }
    d
}
