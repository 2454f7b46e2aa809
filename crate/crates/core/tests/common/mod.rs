#![allow(dead_code)]

use std::collections::BTreeSet;

use d0l::{D0LSystem, Letter, Morphism, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SYMBOLS: [&str; 4] = ["a", "b", "c", "d"];

/// Random system with alphabet size `<= 4`, images of length `<= 3`, and an
/// axiom of length 1 or 2.
pub fn random_system(rng: &mut ChaCha8Rng) -> D0LSystem {
    let n = rng.gen_range(1..=4);
    let mut rules = Vec::new();
    for a in &SYMBOLS[..n] {
        let len = rng.gen_range(0..=3);
        let image: String = (0..len).map(|_| SYMBOLS[rng.gen_range(0..n)]).collect();
        rules.push((*a, image));
    }
    let axiom_len = rng.gen_range(1..=2);
    let axiom: String = (0..axiom_len)
        .map(|_| SYMBOLS[rng.gen_range(0..n)])
        .collect();
    let rules: Vec<(&str, &str)> = rules.iter().map(|(a, w)| (*a, w.as_str())).collect();
    D0LSystem::parse(&SYMBOLS[..n], &rules, &axiom).expect("well-formed random system")
}

pub fn corpus(size: usize, seed: u64) -> Vec<D0LSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| random_system(&mut rng)).collect()
}

pub fn describe(s: &D0LSystem) -> String {
    let a = s.alphabet();
    let rules: Vec<String> = a
        .letters()
        .map(|x| format!("{}->{}", a.symbol(x), a.render(s.morphism().image(x))))
        .collect();
    format!("{} | axiom {}", rules.join(", "), a.render(s.axiom()))
}

/// Letters whose orbit under `φ` is finite, by direct simulation: the orbit
/// of `a` is followed for `2·n^4` steps, and any word longer than `cutoff`
/// counts as unbounded growth.
pub fn simulated_bounded(phi: &Morphism, cutoff: usize) -> BTreeSet<Letter> {
    let n = phi.source().len();
    let steps = 2 * n.pow(4);
    let mut out = BTreeSet::new();
    for a in phi.source().letters() {
        let mut seen = BTreeSet::new();
        let mut cur = Word::letter(a);
        for _ in 0..=steps {
            if cur.len() > cutoff {
                break;
            }
            if !seen.insert(cur.clone()) {
                out.insert(a);
                break;
            }
            cur = phi.apply(&cur).expect("endomorphism");
        }
    }
    out
}
