//! Invariant batteries for one presentation. Each check reports a measured
//! value next to the value the invariant demands.

use std::thread;

use gpkit::aut_structure::Target;
use gpkit::word_engine::{ball, ball_with_exponents};
use gpkit::{Presentation, Word};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub check: &'static str,
    pub instance: String,
    pub status: &'static str,
    pub value: Value,
    pub expected: Value,
}

pub struct SuiteArgs {
    pub radius: usize,
    pub samples: usize,
    pub seed: u64,
    pub threads: usize,
}

struct Ctx<'a> {
    p: &'a Presentation,
    c: &'a Config,
    points: Vec<Word>,
    pairs: Vec<(usize, usize)>,
    triples: Vec<(usize, usize, usize)>,
    radius: usize,
    seed: u64,
}

type Check = fn(&Ctx) -> (bool, Value, Value);

fn points(p: &Presentation, radius: usize) -> Vec<Word> {
    if p.groups().iter().all(|g| g.is_finite()) {
        ball(p, radius)
    } else {
        ball_with_exponents(p, radius, 2)
    }
}

fn pass_count(ok: usize, total: usize) -> (bool, Value, Value) {
    (ok == total, json!(ok), json!(total))
}

fn inverses(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .points
        .iter()
        .filter(|x| p.compose(x, &p.invert(x)).is_identity() && p.invert(&p.invert(x)) == **x)
        .count();
    pass_count(ok, cx.points.len())
}

fn format_round_trip(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .points
        .iter()
        .filter(|x| x.is_identity() || p.parse_word(&p.format_word(x)).as_ref() == Ok(*x))
        .count();
    pass_count(ok, cx.points.len())
}

fn associativity(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .triples
        .iter()
        .filter(|&&(a, b, c)| {
            let (x, y, z) = (&cx.points[a], &cx.points[b], &cx.points[c]);
            p.compose(&p.compose(x, y), z) == p.compose(x, &p.compose(y, z))
        })
        .count();
    pass_count(ok, cx.triples.len())
}

fn distance_formula(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .pairs
        .iter()
        .filter(|&&(a, b)| {
            let (x, y) = (&cx.points[a], &cx.points[b]);
            let g = p.graded_distance(x, y);
            let n = p.separating_hyperplanes(x, y).len();
            g.d == n
                && g.d == p.difference(x, y).len()
                && g.d == g.d_u.iter().sum::<usize>()
                && g.delta == g.delta_u.iter().sum::<u64>()
                && g.d == p.distance(y, x)
        })
        .count();
    pass_count(ok, cx.pairs.len())
}

fn triangle_inequality(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .triples
        .iter()
        .filter(|&&(a, b, c)| {
            let (x, y, z) = (&cx.points[a], &cx.points[b], &cx.points[c]);
            p.distance(x, z) <= p.distance(x, y) + p.distance(y, z)
        })
        .count();
    pass_count(ok, cx.triples.len())
}

fn median_identities(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .triples
        .iter()
        .filter(|&&(a, b, c)| {
            let v = [&cx.points[a], &cx.points[b], &cx.points[c]];
            let Ok(t) = p.median_triangle(v[0], v[1], v[2]) else { return false };
            let k = &t.corners;
            let d = |x: &Word, y: &Word| p.distance(x, y);
            [(0, 1), (1, 2), (0, 2)]
                .iter()
                .all(|&(i, j)| d(v[i], v[j]) == d(v[i], &k[i]) + d(&k[i], &k[j]) + d(&k[j], v[j]))
                && k.iter().all(|w| p.membership(w, &t.prism))
                && p.graph().is_complete_set(t.prism.lambda)
        })
        .count();
    pass_count(ok, cx.triples.len())
}

fn tree_sums(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .pairs
        .iter()
        .filter(|&&(a, b)| {
            let (x, y) = (&cx.points[a], &cx.points[b]);
            let g = p.graded_distance(x, y);
            let (t, s) = (0..p.n()).map(|u| p.tree_distance(u, x, y)).fold((0, 0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
            t == 2 * g.d && s == 2 * g.d as u64 + g.delta
        })
        .count();
    pass_count(ok, cx.pairs.len())
}

fn median_defect(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let worst = cx
        .triples
        .iter()
        .map(|&(a, b, c)| {
            let d = p.almost_median_defect(&cx.points[a], &cx.points[b], &cx.points[c]);
            d.eta.max(d.pi)
        })
        .max()
        .unwrap_or(0);
    (worst <= p.n(), json!(worst), json!(format!("<= {}", p.n())))
}

fn transverse_symmetric(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let Ok(w) = p.build_window(&Word::identity(), cx.radius.clamp(1, 2), false) else {
        return (false, json!("window failed"), json!("window"));
    };
    let hs = &w.hyperplanes;
    let mut total = 0;
    let mut ok = 0;
    for a in hs {
        for b in hs {
            total += 1;
            // transverse walls have intersecting carriers and differ in label
            let t = p.transverse(a, b);
            if t == p.transverse(b, a) && (!t || (a.label != b.label && p.carriers_intersect(a, b))) {
                ok += 1;
            }
        }
    }
    pass_count(ok, total)
}

fn delta_estimate(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let r = cx.radius.clamp(1, 3);
    let (Ok(inner), Ok(outer)) =
        (p.build_window(&Word::identity(), r, false), p.build_window(&Word::identity(), r + 1, false))
    else {
        return (false, json!("window failed"), json!("window"));
    };
    let mut violations = 0;
    let mut certified = 0;
    for (i, a) in inner.hyperplanes.iter().enumerate() {
        for b in &inner.hyperplanes[i + 1..] {
            if let Some(d) = p.certified_crossing_distance(&inner, &outer, a, b) {
                certified += 1;
                if !p.delta_estimate_audit(a, b, d).holds {
                    violations += 1;
                }
            }
        }
    }
    (violations == 0, json!({"certified": certified, "violations": violations}), json!({"violations": 0}))
}

fn coneoff_lower_bound(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let ok = cx
        .pairs
        .iter()
        .filter(|&&(a, b)| {
            let (x, y) = (&cx.points[a], &cx.points[b]);
            let cert = p.block_chain_certificate(x, y);
            p.check_block_chain(&cert) && p.coneoff_distance(x, y, 4 * cx.radius + 4).is_none_or(|d| d >= cert.lower_bound())
        })
        .count();
    pass_count(ok, cx.pairs.len())
}

fn coarse_median(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    // the defect scan is quartic in the sample
    let mut pts = points(p, cx.radius.min(2));
    if pts.len() > 16 {
        pts.shuffle(&mut ChaCha8Rng::seed_from_u64(cx.seed ^ 0x6d));
        pts.truncate(16);
    }
    let d = p.coarse_median_defects(&pts);
    let bound = 2 * p.graph().clique_number() + 2;
    (d.kappa() <= bound, json!({"kappa": d.kappa(), "c0": d.c0, "c1": d.c1, "c2": d.c2}), json!(format!("kappa <= {bound}")))
}

fn genset(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let g = p.graph();
    if g.n() < 2 || g.is_join() {
        return (true, json!("skipped: join graph"), json!(null));
    }
    match p.build_noncommuting_genset() {
        Ok(s) => {
            let n = s.words.len();
            let commuting =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p.commutes(&s.words[i], &s.words[j])).count();
            (commuting == 0, json!({"words": n, "commuting_pairs": commuting}), json!({"commuting_pairs": 0}))
        }
        Err(e) => (false, json!(e.to_string()), json!("a generating set")),
    }
}

fn verdicts(cx: &Ctx) -> (bool, Value, Value) {
    let p = cx.p;
    let group = p.acyl_verdict(&cx.c.meta, Target::Group).answer;
    let aut = p.acyl_verdict(&cx.c.meta, Target::Aut).answer;
    let structure = p.structure_report(&cx.c.meta).map_or_else(|e| format!("error: {e}"), |r| r.formula);
    (true, json!({"group": group, "aut": aut, "structure": structure}), json!(null))
}

const CHECKS: [(&str, Check); 13] = [
    ("inverses", inverses),
    ("format-round-trip", format_round_trip),
    ("associativity", associativity),
    ("distance-formula", distance_formula),
    ("triangle-inequality", triangle_inequality),
    ("median-identities", median_identities),
    ("tree-sums", tree_sums),
    ("median-defect", median_defect),
    ("transverse-symmetric", transverse_symmetric),
    ("delta-estimate", delta_estimate),
    ("coneoff-lower-bound", coneoff_lower_bound),
    ("coarse-median", coarse_median),
    ("genset-noncommuting", genset),
];

fn sample<T: Clone>(all: Vec<T>, n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    if all.len() <= n {
        all
    } else {
        all.choose_multiple(rng, n).cloned().collect()
    }
}

/// Results come back in check order whatever the thread count.
pub fn run(c: &Config, instance: &str, a: &SuiteArgs) -> Vec<CheckLine> {
    let p = &c.presentation;
    let pts = points(p, a.radius);
    let n = pts.len();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let pairs = sample((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(), a.samples, &mut rng);
    let triples: Vec<(usize, usize, usize)> = if n * n * n <= a.samples {
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect()
    } else {
        use rand::Rng;
        (0..a.samples).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    let cx = Ctx { p, c, points: pts, pairs, triples, radius: a.radius, seed: a.seed };

    let mut checks: Vec<(&str, Check)> = CHECKS.to_vec();
    checks.push(("verdicts", verdicts));
    let threads = a.threads.max(1).min(checks.len());
    let mut results: Vec<Option<(bool, Value, Value)>> = vec![None; checks.len()];
    thread::scope(|s| {
        let cx = &cx;
        let checks = &checks;
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    (t..checks.len()).step_by(threads).map(|i| (i, (checks[i].1)(cx))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("check panicked") {
                results[i] = Some(r);
            }
        }
    });
    checks
        .iter()
        .zip(results)
        .map(|((name, _), r)| {
            let (ok, value, expected) = r.expect("every check ran");
            let status = if expected.is_null() && ok {
                "info"
            } else if ok {
                "pass"
            } else {
                "fail"
            };
            CheckLine { check: name, instance: instance.to_string(), status, value, expected }
        })
        .collect()
}
