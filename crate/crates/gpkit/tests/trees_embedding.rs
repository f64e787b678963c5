mod common;

use common::{bfs, ExplicitBall, FreeCyclic, Letter, Oracle, TitsC5, TreeWindow};
use gpkit::fixtures;
use gpkit::{Presentation, Syllable, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn word_of(p: &Presentation, raw: &[Letter]) -> Word {
    let syl: Vec<Syllable> = raw.iter().map(|&(v, e)| Syllable::new(v, e)).collect();
    p.reduce(&syl).unwrap()
}

fn tree_window<O: Oracle>(o: &O, b: &ExplicitBall<O>, p: &Presentation, u: usize) -> TreeWindow {
    let link = p.graph().link(u);
    TreeWindow::build(o, b, u, |lab| link.contains(lab), |l| p.group(u).length(l.1) == 1)
}

fn check_tree_formulas<O: Oracle>(p: &Presentation, o: &O, inner: usize, outer: usize) -> usize {
    let b = ExplicitBall::build(o, outer);
    let words: Vec<Word> = b.words.iter().map(|w| word_of(p, w)).collect();
    let pts: Vec<usize> = (0..b.len()).filter(|&i| b.dist[i] <= inner).collect();
    let mut checked = 0;
    for u in 0..p.n() {
        let tw = tree_window(o, &b, p, u);
        for &i in &pts {
            let dt = bfs(&tw.tree, tw.comp[i]);
            let ds = bfs(&tw.spaces, tw.comp[i]);
            for &j in &pts {
                let (t, s) = p.tree_distance(u, &words[i], &words[j]);
                assert_eq!(t, dt[tw.comp[j]], "T_{u} {:?} {:?}", b.words[i], b.words[j]);
                assert_eq!(s as usize, ds[tw.comp[j]], "TS_{u} {:?} {:?}", b.words[i], b.words[j]);
                checked += 1;
            }
        }
    }
    checked
}

#[test]
fn fp_tree_distances_match_explicit_trees() {
    let n = check_tree_formulas(&fixtures::fp(), &FreeCyclic::z4_z3(), 3, 3);
    assert!(n > 1000);
}

#[test]
fn c5_tree_distances_match_explicit_trees() {
    check_tree_formulas(&fixtures::c5(), &TitsC5::new(), 2, 5);
}

#[test]
fn tree_medians_match_explicit_trees() {
    let p = fixtures::fp();
    let o = FreeCyclic::z4_z3();
    let b = ExplicitBall::build(&o, 3);
    let words: Vec<Word> = b.words.iter().map(|w| word_of(&p, w)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for u in 0..p.n() {
        let tw = tree_window(&o, &b, &p, u);
        for _ in 0..60 {
            let t: Vec<usize> = (0..3).map(|_| rng.gen_range(0..b.len())).collect();
            let ds: Vec<Vec<usize>> = t.iter().map(|&i| bfs(&tw.tree, tw.comp[i])).collect();
            let d = |a: usize, c: usize| ds[a][tw.comp[t[c]]];
            let m = (0..tw.tree.len())
                .find(|&m| {
                    ds.iter().all(|d| d[m] != usize::MAX) &&
                    ds[0][m] + ds[1][m] == d(0, 1) && ds[1][m] + ds[2][m] == d(1, 2) && ds[0][m] + ds[2][m] == d(0, 2)
                })
                .unwrap();
            let (x, y, z) = (&words[t[0]], &words[t[1]], &words[t[2]]);
            let lm = p.tree_median(u, x, y, z);
            for (k, w) in [x, y, z].into_iter().enumerate() {
                assert_eq!(p.tree_vertex_distance(u, &lm, w), ds[k][m]);
            }
        }
    }
}

#[test]
fn embedding_is_equivariant() {
    let c5 = fixtures::c5();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = c5.parse_word("v1 v3 v2").unwrap();
    let (tx, sx) = c5.embed(&x);
    for _ in 0..100 {
        let raw: Vec<Syllable> = (0..rng.gen_range(0..8)).map(|_| Syllable::new(rng.gen_range(0..5), 1)).collect();
        let g = c5.reduce(&raw).unwrap();
        let (tg, sg) = c5.embed(&c5.compose(&g, &x));
        for u in 0..5 {
            let moved = c5.coset(&c5.compose(&g, &tx.components[u].rep), tx.components[u].lambda);
            assert_eq!(tg.components[u], moved);
            assert_eq!(sg.components[u], c5.coset(&c5.compose(&g, &sx.components[u].rep), moved.lambda));
        }
    }
}

#[test]
fn median_defects_are_bounded_on_fp_ball() {
    let fp = fixtures::fp();
    let pts = gpkit::word_engine::ball(&fp, 2);
    let mut worst = 0;
    for x in &pts {
        for y in &pts {
            let d = fp.almost_median_defect(&Word::identity(), x, y);
            assert!(d.eta <= d.bound && d.pi <= d.bound);
            worst = worst.max(d.eta);
        }
    }
    assert!(worst > 0);
}

fn c5_word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..5, 0..9).prop_map(|vs| {
        let p = fixtures::c5();
        let raw: Vec<Syllable> = vs.into_iter().map(|v| Syllable::new(v, 1)).collect();
        p.reduce(&raw).unwrap()
    })
}

fn fp_word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..2, 1i64..4), 0..7).prop_map(|vs| {
        let p = fixtures::fp();
        let raw: Vec<Syllable> = vs.into_iter().map(|(v, e)| Syllable::new(v, e)).collect();
        p.reduce(&raw).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_sums_recover_distances(x in fp_word(), y in fp_word()) {
        let p = fixtures::fp();
        let g = p.graded_distance(&x, &y);
        let (mut st, mut ss) = (0usize, 0u64);
        for u in 0..p.n() {
            let (t, s) = p.tree_distance(u, &x, &y);
            prop_assert!(g.delta_u[u] <= s && s <= 3 * g.delta_u[u]);
            st += t;
            ss += s;
        }
        prop_assert_eq!(st, 2 * g.d);
        prop_assert_eq!(ss, 2 * g.d as u64 + g.delta);
    }

    #[test]
    fn c5_median_defect_at_most_vertex_count(x in c5_word(), y in c5_word(), z in c5_word()) {
        let p = fixtures::c5();
        let d = p.almost_median_defect(&x, &y, &z);
        prop_assert!(d.eta <= 5 && d.pi <= 5);
    }
}
