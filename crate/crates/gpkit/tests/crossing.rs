mod common;

use std::collections::HashMap;

use common::{wall_classes, ExplicitBall, FreeCyclic, Letter, Oracle, TitsC5};
use gpkit::fixtures;
use gpkit::qm_geometry::Hyperplane;
use gpkit::{Presentation, Syllable, Word};

fn word_of(p: &Presentation, raw: &[Letter]) -> Word {
    let syl: Vec<Syllable> = raw.iter().map(|&(v, e)| Syllable::new(v, e)).collect();
    p.reduce(&syl).unwrap()
}

/// Walls of edges with both ends within `inner`, compared against the
/// union-find classes of the explicit ball.
fn check_walls_against_squares<O: Oracle>(p: &Presentation, o: &O, inner: usize, outer: usize) {
    let b = ExplicitBall::build(o, outer);
    let wc = wall_classes(&b);
    let mut class_by_wall: HashMap<Hyperplane, usize> = HashMap::new();
    let mut wall_by_class: HashMap<usize, Hyperplane> = HashMap::new();
    let mut sample = Vec::new();
    for (e, &(x, y, lab)) in b.edges().iter().enumerate() {
        if b.dist[x] > inner || b.dist[y] > inner {
            continue;
        }
        let h = p.hyperplane(&word_of(p, &b.words[x]), lab);
        assert!(p.separates(&h, &word_of(p, &b.words[x]), &word_of(p, &b.words[y])));
        let c = wc.class_of[e];
        assert_eq!(*class_by_wall.entry(h.clone()).or_insert(c), c, "{h:?}");
        assert_eq!(*wall_by_class.entry(c).or_insert_with(|| h.clone()), h);
        sample.push((h, c));
    }
    sample.sort();
    sample.dedup();
    for (i, (h1, c1)) in sample.iter().enumerate() {
        for (h2, c2) in &sample[i + 1..] {
            let oracle = wc.crossing.contains(&(*c1.min(c2), *c1.max(c2)));
            assert_eq!(p.transverse(h1, h2), oracle, "{h1:?} {h2:?}");
        }
    }
}

#[test]
fn walls_match_square_classes_c5() {
    check_walls_against_squares(&fixtures::c5(), &TitsC5::new(), 2, 5);
}

#[test]
fn walls_match_square_classes_fp() {
    check_walls_against_squares(&fixtures::fp(), &FreeCyclic::z4_z3(), 2, 4);
}

#[test]
fn window_distances_never_grow_with_radius() {
    let c5 = fixtures::c5();
    let one = Word::identity();
    let w2 = c5.build_window(&one, 2, false).unwrap();
    let w3 = c5.build_window(&one, 3, false).unwrap();
    for (i, a) in w2.hyperplanes.iter().enumerate() {
        let d2 = w2.distances_from(i, None);
        for (j, b) in w2.hyperplanes.iter().enumerate() {
            let d3 = c5.crossing_distance(&w3, a, b);
            assert!(d3.unwrap() <= d2[j].unwrap());
        }
    }
}

#[test]
fn small_crossing_graph_is_geodesic_in_p4() {
    let p4 = fixtures::p4();
    let w = p4.build_window(&Word::identity(), 3, false).unwrap();
    assert!(w.small_mask.iter().any(|m| !m));
    for a in 0..w.len() {
        if !w.small_mask[a] {
            continue;
        }
        let full = w.distances_from(a, None);
        let small = w.distances_from(a, Some(&w.small_mask));
        for b in 0..w.len() {
            if w.small_mask[b] && full[b].is_some() {
                // short pairs only, where the truncated window already holds every geodesic
                if full[b].unwrap() <= 2 {
                    assert_eq!(small[b], full[b]);
                }
            }
        }
    }
}

#[test]
fn straight_path_examples() {
    let p4 = fixtures::p4();
    let one = Word::identity();
    let chain: Vec<Hyperplane> = (0..4).map(|v| p4.hyperplane(&one, v)).collect();
    let path = p4.straight_path(&chain).unwrap();
    assert!(path.iter().all(|x| x.is_identity()));
    assert_eq!(p4.straighten(&chain).unwrap(), chain);

    let c5 = fixtures::c5();
    let chain: Vec<Hyperplane> = (0..3).map(|v| c5.hyperplane(&one, v)).collect();
    let path = c5.straight_path(&chain).unwrap();
    assert_eq!(path[0], path[1]);
    assert!(c5.straight_path(&chain[..2]).is_err());
    let broken = vec![chain[0].clone(), chain[2].clone(), chain[1].clone()];
    assert!(c5.straight_path(&broken).is_err());
}

#[test]
fn straightened_paths_are_qm_geodesics() {
    let c5 = fixtures::c5();
    let one = Word::identity();
    let inner = c5.build_window(&one, 2, false).unwrap();
    let outer = c5.build_window(&one, 3, false).unwrap();
    let mut checked = 0;
    for (i, a) in inner.hyperplanes.iter().enumerate() {
        for b in &inner.hyperplanes[i + 1..] {
            let Some(d) = c5.certified_crossing_distance(&inner, &outer, a, b) else { continue };
            if d < 2 {
                continue;
            }
            let (ia, ib) = (outer.index_of(a).unwrap(), outer.index_of(b).unwrap());
            let geo: Vec<Hyperplane> =
                outer.geodesic(ia, ib).unwrap().into_iter().map(|k| outer.hyperplanes[k].clone()).collect();
            let s = c5.straighten(&geo).unwrap();
            assert_eq!(s.len(), geo.len());
            assert_eq!((s.first(), s.last()), (geo.first(), geo.last()));
            assert!(c5.is_straight(&s).unwrap());
            assert_eq!(c5.straighten(&s).unwrap(), s);
            let xs = c5.straight_path(&s).unwrap();
            let total: usize = xs.windows(2).map(|w| c5.distance(&w[0], &w[1])).sum();
            assert_eq!(total, c5.distance(&xs[0], xs.last().unwrap()));
            assert_eq!(xs[0], xs[1]);
            checked += 1;
        }
    }
    assert!(checked > 10, "{checked}");
}

#[test]
fn delta_estimate_on_an_axis_pair() {
    let c5 = fixtures::c5();
    let one = Word::identity();
    let a = c5.hyperplane(&one, 0);
    let g = c5.power(&c5.parse_word("v1 v3").unwrap(), 4);
    let b = c5.translate_hyperplane(&g, &a);
    let mid = c5.power(&c5.parse_word("v1 v3").unwrap(), 2);
    let outer = c5.build_window(&mid, 5, false).unwrap();
    let d = c5.crossing_distance(&outer, &a, &b).unwrap();
    let audit = c5.delta_estimate_audit(&a, &b, d);
    assert!(audit.holds, "{audit:?}");
    assert!(audit.delta <= d && d <= 6 * (audit.delta + 1));
}

#[test]
fn bottleneck_reports() {
    let c5 = fixtures::c5();
    let w = c5.build_window(&Word::identity(), 3, false).unwrap();
    let pairs: Vec<(usize, usize)> = (0..w.len()).flat_map(|a| (a + 1..w.len()).map(move |b| (a, b))).collect();
    let r = c5.bottleneck_audit(&w, &pairs);
    assert_eq!(r.delta, 22);
    assert_eq!(r.violations, 0);
    assert!(!r.degenerate);
    let fp = fixtures::fp();
    let w = fp.build_window(&Word::identity(), 2, false).unwrap();
    let r = fp.bottleneck_audit(&w, &[(0, 1)]);
    assert!(r.degenerate && r.pairs == 0);
}

#[test]
fn axis_chain_members_separate_neighbours() {
    let c5 = fixtures::c5();
    let w0 = c5.parse_word("v1 v3 v5 v2 v4").unwrap();
    let axis = c5.contracting_axis(&w0, -1..=1, 0).unwrap();
    assert!(axis.separation_ok);
    assert_eq!(axis.refuted(), 0);
}

#[test]
fn maximal_products_match_small_crossing_graph() {
    let c5 = fixtures::c5();
    let one = Word::identity();
    let st = c5.build_window(&one, 2, true).unwrap();
    let m = c5.maximal_products_window(&one, 3).unwrap();
    let r = c5.qi_compare(&st, &m).unwrap();
    assert!(r.pairs > 0);
    // q is a quasi-isometry with additive error controlled by diam Γ
    assert!(r.max_additive <= 2 + 2, "{r:?}");
    for ((i, j), w) in &m.witnesses {
        let (a, b) = (&m.cosets[*i], &m.cosets[*j]);
        for c in [a, b] {
            let inner = c5.difference(&c.rep, &c5.compose(w, &c.rep));
            assert!(c5.in_subgroup(&inner, c.lambda));
        }
    }
}
