//! Brute-force reference for the engine.
//!
//! Two independent views of the factors of a D0L language:
//!
//! * iterate scanning: expand `φ^n(axiom)` for `n <= depth` and read powers
//!   off the words directly, with a growth test between two depths to tell
//!   unbounded repetition from a large but fixed power;
//! * a factor window: the exact set of language factors up to a fixed
//!   length, computed as a closure without expanding any iterate. A class
//!   `[v]` is observed when `v^K` lies in the window.
//!
//! Neither uses the simplification or the side/first-letter graphs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{precondition, Error, Result};
use crate::morphism::D0LSystem;
use crate::words::{canonical_rotation, is_primitive, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleParams {
    /// Largest iterate index scanned.
    pub depth: usize,
    /// Longest period tracked.
    pub max_len: usize,
    /// Power needed to count a class as observed.
    pub power: usize,
    /// Longest iterate the scanner is allowed to build.
    pub length_cap: usize,
}

pub const DEFAULT_LENGTH_CAP: usize = 1_000_000;

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            depth: 12,
            max_len: 8,
            power: 3,
            length_cap: DEFAULT_LENGTH_CAP,
        }
    }
}

impl OracleParams {
    pub fn new(depth: usize, max_len: usize, power: usize) -> Result<Self> {
        let p = OracleParams {
            depth,
            max_len,
            power,
            length_cap: DEFAULT_LENGTH_CAP,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 || self.max_len < 1 || self.power < 2 {
            return precondition("oracle parameters need depth >= 1, max_len >= 1, power >= 2");
        }
        Ok(())
    }

    /// Largest depth `<= self.depth` whose iterate fits under the length cap.
    pub fn fitted_depth(&self, system: &D0LSystem) -> usize {
        let lengths = iterate_lengths(system, self.depth);
        lengths
            .iter()
            .rposition(|&l| l <= self.length_cap as u128)
            .unwrap_or(0)
    }
}

/// `|φ^n(axiom)|` for `n = 0..=depth`, from letter counts.
fn iterate_lengths(system: &D0LSystem, depth: usize) -> Vec<u128> {
    let phi = system.morphism();
    let n = system.alphabet().len();
    let mut counts = vec![0u128; n];
    for a in system.axiom().iter() {
        counts[a.0] += 1;
    }
    let mut out = vec![counts.iter().sum()];
    for _ in 0..depth {
        let mut next = vec![0u128; n];
        for (a, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for b in phi.image(Letter(a)).iter() {
                next[b.0] = next[b.0].saturating_add(c);
            }
        }
        counts = next;
        out.push(counts.iter().fold(0u128, |s, &c| s.saturating_add(c)));
    }
    out
}

/// Iterates `φ^0(axiom) .. φ^depth(axiom)`, failing past the length cap.
fn iterates(system: &D0LSystem, params: &OracleParams) -> Result<Vec<Word>> {
    params.validate()?;
    let phi = system.morphism();
    let mut out = vec![system.axiom().clone()];
    for n in 1..=params.depth {
        let prev = out.last().expect("non-empty");
        let len: usize = prev.iter().map(|a| phi.image(*a).len()).sum();
        if len > params.length_cap {
            return Err(Error::Resource(format!(
                "iterate {n} has {len} letters, above the cap of {}",
                params.length_cap
            )));
        }
        let mut next = Vec::with_capacity(len);
        for a in prev.iter() {
            next.extend_from_slice(phi.image(*a));
        }
        out.push(Word::from(next));
    }
    Ok(out)
}

/// Calls `f(start, end)` for every maximal interval of `text` with period `p`
/// and length at least `p`.
fn for_each_run(text: &[Letter], p: usize, mut f: impl FnMut(usize, usize)) {
    let n = text.len();
    if p == 0 || n < p {
        return;
    }
    let mut start = 0;
    for j in p..n {
        if text[j] != text[j - p] {
            f(start, j);
            start = j + 1 - p;
        }
    }
    f(start, n);
}

/// Largest power of each primitive class of period `<= max_len` in `text`,
/// keyed by canonical rotation.
fn class_powers(text: &[Letter], max_len: usize, into: &mut BTreeMap<Word, usize>) {
    for p in 1..=max_len {
        for_each_run(text, p, |s, e| {
            let v = &text[s..s + p];
            if !is_primitive(v).expect("non-empty") {
                return;
            }
            let key = canonical_rotation(v).expect("non-empty");
            let m = (e - s) / p;
            let slot = into.entry(key).or_insert(0);
            *slot = (*slot).max(m);
        });
    }
}

/// Largest `m` with `v^m` a factor of `text`.
fn word_power(text: &[Letter], v: &[Letter]) -> usize {
    let p = v.len();
    let mut best = 0;
    for_each_run(text, p, |s, e| {
        for o in 0..p.min(e - s - p + 1) {
            if &text[s + o..s + o + p] == v {
                best = best.max((e - s - o) / p);
            }
        }
    });
    best
}

/// All factors of length `1..=max_len` of the iterates up to `depth`.
pub fn factors_up_to(system: &D0LSystem, params: &OracleParams) -> Result<BTreeSet<Word>> {
    let mut out = BTreeSet::new();
    for w in iterates(system, params)? {
        for len in 1..=params.max_len.min(w.len()) {
            for win in w.windows(len) {
                out.insert(Word::from(win));
            }
        }
    }
    Ok(out)
}

/// Largest `m` such that `v^m` is a factor of some iterate up to `depth`.
pub fn max_power(system: &D0LSystem, v: &[Letter], params: &OracleParams) -> Result<usize> {
    if v.is_empty() || !is_primitive(v)? {
        return precondition("max_power needs a primitive word");
    }
    if v.len() > params.max_len {
        return precondition("max_power needs |v| <= max_len");
    }
    Ok(iterates(system, params)?
        .iter()
        .map(|w| word_power(w, v))
        .max()
        .unwrap_or(0))
}

/// Class powers accumulated over the iterates `0..=depth`.
pub fn class_powers_up_to(
    system: &D0LSystem,
    params: &OracleParams,
) -> Result<Vec<BTreeMap<Word, usize>>> {
    let mut acc = BTreeMap::new();
    let mut out = Vec::new();
    for w in iterates(system, params)? {
        class_powers(&w, params.max_len, &mut acc);
        out.push(acc.clone());
    }
    Ok(out)
}

/// Classes whose power reaches `power` by `depth` and is still growing
/// between depth `⌈depth/2⌉` and `depth`.
pub fn observed_classes(system: &D0LSystem, params: &OracleParams) -> Result<BTreeSet<Word>> {
    let by_depth = class_powers_up_to(system, params)?;
    let last = &by_depth[params.depth];
    let half = &by_depth[params.depth.div_ceil(2)];
    Ok(last
        .iter()
        .filter(|(v, &m)| m >= params.power && m > half.get(*v).copied().unwrap_or(0))
        .map(|(v, _)| v.clone())
        .collect())
}

/// Exact set of language factors of length `<= window`, stored as a set of
/// generator words whose factors are exactly those factors.
#[derive(Debug, Clone)]
pub struct FactorWindow {
    window: usize,
    generators: Vec<Vec<usize>>,
}

type Images = Vec<Vec<usize>>;

fn push_windows(word: &[usize], window: usize, out: &mut Vec<Vec<usize>>) {
    if word.is_empty() {
        return;
    }
    if word.len() <= window {
        out.push(word.to_vec());
    } else {
        for w in word.windows(window) {
            out.push(w.to_vec());
        }
    }
}

/// Generators for the factors of `{ψ(x) : x factor of the language generated
/// from `seeds`}` where `images` is non-erasing on every letter in play.
fn close(
    images: &Images,
    seeds: Vec<Vec<usize>>,
    window: usize,
    cap: usize,
) -> Result<HashSet<Vec<usize>>> {
    let mut set: HashSet<Vec<usize>> = HashSet::new();
    let mut work: Vec<Vec<usize>> = Vec::new();
    for s in seeds {
        if set.insert(s.clone()) {
            work.push(s);
        }
    }
    let mut buf = Vec::new();
    while let Some(g) = work.pop() {
        let img: Vec<usize> = g.iter().flat_map(|&a| images[a].iter().copied()).collect();
        buf.clear();
        push_windows(&img, window, &mut buf);
        for w in buf.drain(..) {
            if !set.contains(&w) {
                set.insert(w.clone());
                work.push(w);
            }
        }
        if set.len() > cap {
            return Err(Error::Resource(format!(
                "factor window exceeds {cap} generators"
            )));
        }
    }
    Ok(set)
}

/// Generators for the factors (length `<= window`) of the language of
/// `(images, axiom)` restricted to the `active` letters. Letters with empty
/// images are projected away recursively: with `π` deleting them and
/// `ψ = π∘φ`, `φ^n(w) = φ(ψ^{n-1}(π w))` for `n >= 1`.
fn language_generators(
    images: &Images,
    active: &[bool],
    axiom: &[usize],
    window: usize,
    cap: usize,
) -> Result<HashSet<Vec<usize>>> {
    let mut seeds = Vec::new();
    push_windows(axiom, window, &mut seeds);
    let erasing: Vec<bool> = images
        .iter()
        .zip(active)
        .map(|(w, &on)| on && w.is_empty())
        .collect();
    if !erasing.contains(&true) {
        return close(images, seeds, window, cap);
    }
    let mut out: HashSet<Vec<usize>> = seeds.into_iter().collect();
    let pi_axiom: Vec<usize> = axiom.iter().copied().filter(|&a| !erasing[a]).collect();
    if pi_axiom.is_empty() {
        return Ok(out);
    }
    let projected: Images = images
        .iter()
        .map(|w| w.iter().copied().filter(|&b| !erasing[b]).collect())
        .collect();
    let still_active: Vec<bool> = active
        .iter()
        .zip(&erasing)
        .map(|(&on, &e)| on && !e)
        .collect();
    let inner = language_generators(&projected, &still_active, &pi_axiom, window, cap)?;
    let mut buf = Vec::new();
    for g in inner {
        let img: Vec<usize> = g.iter().flat_map(|&a| images[a].iter().copied()).collect();
        push_windows(&img, window, &mut buf);
    }
    out.extend(buf);
    if out.len() > cap {
        return Err(Error::Resource(format!(
            "factor window exceeds {cap} generators"
        )));
    }
    Ok(out)
}

pub const DEFAULT_GENERATOR_CAP: usize = 2_000_000;

impl FactorWindow {
    pub fn new(system: &D0LSystem, window: usize) -> Result<Self> {
        if window == 0 {
            return precondition("factor window length must be positive");
        }
        let images: Images = system
            .morphism()
            .images()
            .iter()
            .map(|w| w.ids().collect())
            .collect();
        let axiom: Vec<usize> = system.axiom().ids().collect();
        let active = vec![true; images.len()];
        let set = language_generators(&images, &active, &axiom, window, DEFAULT_GENERATOR_CAP)?;
        let mut generators: Vec<Vec<usize>> = set.into_iter().collect();
        generators.sort();
        Ok(FactorWindow { window, generators })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `w` is a factor of the language. Only meaningful for `|w| <= window`.
    pub fn contains(&self, w: &[Letter]) -> bool {
        if w.is_empty() {
            return true;
        }
        let ids: Vec<usize> = w.iter().map(|a| a.0).collect();
        self.generators
            .iter()
            .any(|g| g.len() >= ids.len() && g.windows(ids.len()).any(|x| x == &ids[..]))
    }

    /// Every factor of length `1..=len`.
    pub fn factors(&self, len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for g in &self.generators {
            for l in 1..=len.min(g.len()) {
                for win in g.windows(l) {
                    out.insert(Word::from_ids(win.iter().copied()));
                }
            }
        }
        out
    }

    /// Largest class power for every primitive period `<= max_len`, capped by
    /// the window.
    pub fn class_powers(&self, max_len: usize) -> BTreeMap<Word, usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            let text: Vec<Letter> = g.iter().map(|&a| Letter(a)).collect();
            class_powers(&text, max_len, &mut out);
        }
        out
    }
}

/// Classes `[v]` with `|v| <= max_len` whose powers fill a whole window:
/// some factor of length `window` has period `|v|`, so `v^{⌊window/|v|⌋}` is
/// a factor of the language.
pub fn observed_classes_exact(
    system: &D0LSystem,
    max_len: usize,
    window: usize,
) -> Result<BTreeSet<Word>> {
    if max_len == 0 || window < 2 * max_len {
        return precondition("the window must hold at least two periods of length max_len");
    }
    let fw = FactorWindow::new(system, window)?;
    Ok(fw
        .class_powers(max_len)
        .into_iter()
        .filter(|(v, m)| *m >= window / v.len())
        .map(|(v, _)| v)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> D0LSystem {
        D0LSystem::parse(
            &["0", "1", "2"],
            &[("0", "012"), ("1", "2"), ("2", "1")],
            "0",
        )
        .unwrap()
    }

    fn tm() -> D0LSystem {
        D0LSystem::parse(&["0", "1"], &[("0", "01"), ("1", "10")], "0").unwrap()
    }

    fn words(s: &D0LSystem, list: &[&str]) -> BTreeSet<Word> {
        list.iter()
            .map(|w| s.alphabet().parse_word(w).unwrap())
            .collect()
    }

    #[test]
    fn factors_of_g() {
        let params = OracleParams {
            depth: 1,
            max_len: 2,
            ..Default::default()
        };
        let f = factors_up_to(&g(), &params).unwrap();
        assert_eq!(f, words(&g(), &["0", "1", "2", "01", "12"]));

        let params = OracleParams {
            depth: 4,
            max_len: 4,
            ..Default::default()
        };
        let f = factors_up_to(&g(), &params).unwrap();
        assert!(f.contains(&g().alphabet().parse_word("1221").unwrap()));
    }

    #[test]
    fn max_power_examples() {
        let g = g();
        let v = g.alphabet().parse_word("1221").unwrap();
        let p6 = max_power(&g, &v, &OracleParams::new(6, 4, 2).unwrap()).unwrap();
        let p12 = max_power(&g, &v, &OracleParams::new(12, 4, 2).unwrap()).unwrap();
        assert!(p6 >= 2 && p12 > p6);

        let zero = tm().alphabet().parse_word("0").unwrap();
        assert_eq!(
            max_power(&tm(), &zero, &OracleParams::new(10, 4, 2).unwrap()).unwrap(),
            2
        );

        let x = D0LSystem::parse(&["x"], &[("x", "xx")], "x").unwrap();
        let p = max_power(
            &x,
            &Word::letter(Letter(0)),
            &OracleParams::new(7, 1, 2).unwrap(),
        );
        assert_eq!(p.unwrap(), 128);

        let nonprim = g.alphabet().parse_word("1212").unwrap();
        assert!(max_power(&g, &nonprim, &OracleParams::default()).is_err());
    }

    #[test]
    fn length_cap_is_enforced() {
        let x = D0LSystem::parse(&["x"], &[("x", "xx")], "x").unwrap();
        let params = OracleParams {
            depth: 30,
            max_len: 1,
            power: 2,
            length_cap: 1000,
        };
        assert!(matches!(
            factors_up_to(&x, &params),
            Err(Error::Resource(_))
        ));
        assert_eq!(params.fitted_depth(&x), 9);
    }

    #[test]
    fn observed_by_scanning() {
        let params = OracleParams::new(12, 8, 3).unwrap();
        assert_eq!(
            observed_classes(&g(), &params).unwrap(),
            words(&g(), &["1122"])
        );
        assert!(observed_classes(&tm(), &params).unwrap().is_empty());
        let ab = D0LSystem::parse(&["a", "b"], &[("a", "ab"), ("b", "ab")], "a").unwrap();
        assert_eq!(observed_classes(&ab, &params).unwrap(), words(&ab, &["ab"]));
    }

    #[test]
    fn window_matches_scanned_factors() {
        // for a short window every factor shows up within a few iterates
        for s in [g(), tm()] {
            let fw = FactorWindow::new(&s, 5).unwrap();
            let params = OracleParams::new(10, 5, 2).unwrap();
            assert_eq!(fw.factors(5), factors_up_to(&s, &params).unwrap());
        }
    }

    #[test]
    fn window_handles_erasing_letters() {
        // z vanishes after one step: factors are those of a(zb)... projected
        let s = D0LSystem::parse(
            &["a", "b", "z"],
            &[("a", "azb"), ("b", "zb"), ("z", "")],
            "a",
        )
        .unwrap();
        let fw = FactorWindow::new(&s, 4).unwrap();
        let params = OracleParams::new(10, 4, 2).unwrap();
        assert_eq!(fw.factors(4), factors_up_to(&s, &params).unwrap());
    }

    #[test]
    fn bounded_powers_are_not_observed() {
        // c^8 occurs (from a^4 = φ(bc)) but no longer run of c does
        let s = D0LSystem::parse(
            &["a", "b", "c"],
            &[("a", "cc"), ("b", "aaa"), ("c", "ab")],
            "c",
        )
        .unwrap();
        let fw = FactorWindow::new(&s, 48).unwrap();
        assert_eq!(fw.class_powers(1)[&Word::letter(Letter(2))], 8);
        assert!(observed_classes_exact(&s, 6, 48).unwrap().is_empty());
    }

    #[test]
    fn observed_exact() {
        assert_eq!(
            observed_classes_exact(&g(), 6, 48).unwrap(),
            words(&g(), &["1122"])
        );
        assert!(observed_classes_exact(&tm(), 6, 48).unwrap().is_empty());
        let fib = D0LSystem::parse(&["0", "1"], &[("0", "01"), ("1", "0")], "0").unwrap();
        assert!(observed_classes_exact(&fib, 8, 32).unwrap().is_empty());
        assert!(observed_classes_exact(&fib, 8, 8).is_err());
    }
}
