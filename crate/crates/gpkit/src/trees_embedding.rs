//! The trees `T_u` (Bass–Serre trees of the splittings over `⟨link u⟩`) and
//! the trees of spaces `TS_u`, with the maps `η_u` and `π_u`.
//!
//! Component-vertices of both are the cosets `g⟨V ∖ {u}⟩`; they are stored by
//! their canonical coset. Nothing is materialised beyond what a query needs.

use serde::Serialize;

use crate::graph_core::{VertexId, VertexSet};
use crate::parabolics::Coset;
use crate::qm_geometry::Hyperplane;
use crate::word_engine::{Presentation, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeCoordinate {
    pub components: Vec<Coset>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeOfSpacesCoordinate {
    pub components: Vec<Coset>,
}

/// A vertex of `T_u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TreeVertex {
    Component(Coset),
    Wall(Hyperplane),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MedianDefect {
    /// Largest ℓ¹ distance in `∏ T_u` from a corner image to the tree median.
    pub eta: usize,
    /// The same for the median set in `∏ TS_u`.
    pub pi: usize,
    pub bound: usize,
}

impl Presentation {
    fn complement(&self, u: VertexId) -> VertexSet {
        self.graph().vertices().without(u)
    }

    pub fn eta_u(&self, u: VertexId, x: &Word) -> Coset {
        self.coset(x, self.complement(u))
    }

    pub fn embed(&self, x: &Word) -> (TreeCoordinate, TreeOfSpacesCoordinate) {
        let components: Vec<Coset> = (0..self.n()).map(|u| self.eta_u(u, x)).collect();
        (TreeCoordinate { components: components.clone() }, TreeOfSpacesCoordinate { components })
    }

    /// `(d_{T_u}, d_{TS_u}) = (2 d_u, 2 d_u + δ_u)`.
    pub fn tree_distance(&self, u: VertexId, x: &Word, y: &Word) -> (usize, u64) {
        let g = self.graded_distance(x, y);
        let d_t = 2 * g.d_u[u];
        (d_t, d_t as u64 + g.delta_u[u])
    }

    /// Distance in `T_u` from a tree vertex to `η_u(z)`.
    pub fn tree_vertex_distance(&self, u: VertexId, t: &TreeVertex, z: &Word) -> usize {
        match t {
            TreeVertex::Component(c) => 2 * self.graded_distance(&c.rep, z).d_u[u],
            TreeVertex::Wall(j) => {
                let p = self.project(z, &j.carrier);
                1 + 2 * self.graded_distance(&p, z).d_u[u]
            }
        }
    }

    /// The vertices of the `T_u`-geodesic from `η_u(x)` to `η_u(y)`: the
    /// components met along a normal-form geodesic and the `u`-walls it crosses.
    pub fn tree_geodesic(&self, u: VertexId, x: &Word, y: &Word) -> Vec<TreeVertex> {
        let mut out = vec![TreeVertex::Component(self.eta_u(u, x))];
        let w = self.difference(x, y);
        let mut cur = x.clone();
        for s in w.syllables() {
            if s.vertex == u {
                out.push(TreeVertex::Wall(self.hyperplane(&cur, u)));
            }
            cur = self.compose(&cur, &self.letter(s.vertex, s.elem).unwrap());
            let c = TreeVertex::Component(self.eta_u(u, &cur));
            if out.last() != Some(&c) {
                out.push(c);
            }
        }
        out
    }

    /// The median of `η_u(x), η_u(y), η_u(z)` in `T_u`.
    pub fn tree_median(&self, u: VertexId, x: &Word, y: &Word, z: &Word) -> TreeVertex {
        let dxz = 2 * self.graded_distance(x, z).d_u[u];
        let dyz = 2 * self.graded_distance(y, z).d_u[u];
        self.tree_geodesic(u, x, y)
            .into_iter()
            .find(|m| {
                let (a, b, c) =
                    (self.tree_vertex_distance(u, m, x), self.tree_vertex_distance(u, m, y), self.tree_vertex_distance(u, m, z));
                a + c == dxz && b + c == dyz
            })
            .expect("a tree geodesic contains the median")
    }

    /// How far the corners of the median triangle land from the coordinatewise
    /// median in the product of trees, and in the product of trees of spaces.
    pub fn almost_median_defect(&self, x: &Word, y: &Word, z: &Word) -> MedianDefect {
        let tri = self.median_triangle(x, y, z).expect("median triangles exist");
        let mut eta = 0;
        let mut pi = 0;
        for corner in &tri.corners {
            let mut e = 0;
            let mut p = 0;
            for u in 0..self.n() {
                let m = self.tree_median(u, x, y, z);
                let d = self.tree_vertex_distance(u, &m, corner);
                e += d;
                // the median set of TS_u is then a piece, one step from π_u(corner)
                if matches!(m, TreeVertex::Wall(_)) {
                    p += 1;
                }
            }
            eta = eta.max(e);
            pi = pi.max(p);
        }
        MedianDefect { eta, pi, bound: self.n() }
    }
}
