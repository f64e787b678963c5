//! Standard small presentations used across tests, examples and the CLI.

use crate::graph_core::SimplicialGraph;
use crate::word_engine::{Presentation, VertexGroup};

fn raag(vertices: &[&str], edges: &[(&str, &str)]) -> Presentation {
    let g = SimplicialGraph::from_names(vertices, edges).expect("fixture graph");
    Presentation::uniform(g, VertexGroup::infinite_cyclic())
}

/// Right-angled Artin group on the path a–b–c–d.
pub fn p4() -> Presentation {
    raag(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")])
}

/// Right-angled Artin group on the path a–b–c.
pub fn p3() -> Presentation {
    raag(&["a", "b", "c"], &[("a", "b"), ("b", "c")])
}

pub fn c5_graph() -> SimplicialGraph {
    SimplicialGraph::from_names(
        &["v1", "v2", "v3", "v4", "v5"],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v5"), ("v5", "v1")],
    )
    .expect("pentagon")
}

/// Right-angled Coxeter group on the pentagon v1–v2–v3–v4–v5–v1.
pub fn c5() -> Presentation {
    Presentation::uniform(c5_graph(), VertexGroup::cyclic(2).unwrap())
}

/// ℤ4 ∗ ℤ3 on two isolated vertices `u` (order 4) and `v` (order 3).
pub fn fp() -> Presentation {
    let g = SimplicialGraph::from_names(&["u", "v"], &[]).expect("two points");
    Presentation::new(g, vec![VertexGroup::cyclic(4).unwrap(), VertexGroup::cyclic(3).unwrap()])
        .expect("two groups")
}

/// The infinite dihedral group ℤ2 ∗ ℤ2.
pub fn dinf() -> Presentation {
    let g = SimplicialGraph::from_names(&["s", "t"], &[]).expect("two points");
    Presentation::uniform(g, VertexGroup::cyclic(2).unwrap())
}

/// ℤ ⊕ (ℤ3 ∗ ℤ2): `z` is joined to the isolated pair `a`, `b`.
pub fn z_sum_z3_z2() -> Presentation {
    let g = SimplicialGraph::from_names(&["z", "a", "b"], &[("z", "a"), ("z", "b")]).expect("graph");
    Presentation::new(
        g,
        vec![VertexGroup::infinite_cyclic(), VertexGroup::cyclic(3).unwrap(), VertexGroup::cyclic(2).unwrap()],
    )
    .expect("three groups")
}

/// ℤ2³ on the triangle.
pub fn k3() -> Presentation {
    Presentation::uniform(SimplicialGraph::complete(&["x", "y", "z"]), VertexGroup::cyclic(2).unwrap())
}
