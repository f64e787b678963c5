//! Balls in the syllable metric, i.e. in the quasi-median graph.

use std::collections::HashSet;

use super::{Presentation, Syllable, Word};

/// All elements of syllable length at most `radius`, sorted by length and then
/// by word. Infinite cyclic vertex groups contribute the exponents `±1`.
pub fn ball(p: &Presentation, radius: usize) -> Vec<Word> {
    ball_with_exponents(p, radius, 1)
}

/// As [`ball`], with infinite cyclic syllables ranging over `±1, …, ±k`. The
/// result is then a subset of the true ball.
pub fn ball_with_exponents(p: &Presentation, radius: usize, k: i64) -> Vec<Word> {
    let letters: Vec<Syllable> = (0..p.n())
        .flat_map(|v| p.group(v).nontrivial_elements(k).into_iter().map(move |e| Syllable::new(v, e)))
        .collect();
    let mut all = vec![Word::identity()];
    let mut seen: HashSet<Word> = all.iter().cloned().collect();
    let mut frontier = all.clone();
    for r in 1..=radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &s in &letters {
                let x = p.compose(w, &Word(vec![s]));
                if x.len() == r && seen.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        next.sort();
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Number of elements at each syllable length up to `radius`.
pub fn sphere_sizes(p: &Presentation, radius: usize) -> Vec<usize> {
    let mut sizes = vec![0; radius + 1];
    for w in ball(p, radius) {
        sizes[w.len()] += 1;
    }
    sizes
}
