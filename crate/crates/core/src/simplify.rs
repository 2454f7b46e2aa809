//! Simplifications of D0L-systems.
//!
//! A simplification of `f: A* -> A*` is a pair of morphisms `h: A* -> B*`,
//! `k: B* -> A*` over a strictly smaller alphabet with `k ∘ h = f`; the
//! simplified morphism is `g = h ∘ k`. Repeating this until the morphism is
//! injective gives a chain whose last system has the same infinite periodic
//! factors, read through `h` (forwards) and `k` (backwards).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::alphabet::Alphabet;
use crate::code::{factorize, is_code};
use crate::error::{precondition, Error, Result};
use crate::morphism::{compose, D0LSystem, Morphism};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    ErasingElimination,
    DuplicateMerge,
    CodeReduction,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::ErasingElimination => "erasing-elimination",
            StepKind::DuplicateMerge => "duplicate-merge",
            StepKind::CodeReduction => "code-reduction",
        })
    }
}

/// One simplification `(h, k)` of a morphism `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationStep {
    h: Morphism,
    k: Morphism,
    kind: StepKind,
}

impl SimplificationStep {
    /// Checks `k ∘ h = f` letter by letter and that the alphabet shrinks.
    pub fn new(f: &Morphism, h: Morphism, k: Morphism, kind: StepKind) -> Result<Self> {
        if h.target().len() >= f.source().len() {
            return Err(Error::Invariant(format!(
                "{kind} step does not shrink the alphabet ({} -> {})",
                f.source().len(),
                h.target().len()
            )));
        }
        let kh = compose(&k, &h)?;
        if &kh != f {
            return Err(Error::Invariant(format!("{kind} step violates k ∘ h = f")));
        }
        Ok(SimplificationStep { h, k, kind })
    }

    pub fn h(&self) -> &Morphism {
        &self.h
    }

    pub fn k(&self) -> &Morphism {
        &self.k
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    /// The simplified morphism `h ∘ k`.
    pub fn simplified(&self) -> Morphism {
        compose(&self.h, &self.k).expect("h and k are composable by construction")
    }

    /// Restrict the middle alphabet to `keep`. Every letter used by `h` must
    /// be kept.
    fn restrict(&self, f: &Morphism, keep: &[Letter]) -> Result<Self> {
        let (sub, map) = self.h.target().restrict(keep)?;
        let h_images = self
            .h
            .images()
            .iter()
            .map(|w| {
                w.iter()
                    .map(|a| {
                        map[a.0].ok_or_else(|| {
                            Error::Invariant("restriction drops a letter used by h".into())
                        })
                    })
                    .collect::<Result<Word>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let h = Morphism::new(self.h.source().clone(), sub.clone(), h_images)?;
        let k_images = keep.iter().map(|&b| self.k.image(b).clone()).collect();
        let k = Morphism::new(sub, self.k.target().clone(), k_images)?;
        SimplificationStep::new(f, h, k, self.kind)
    }
}

fn lowest_erasing_letter(f: &Morphism) -> Option<Letter> {
    f.source().letters().find(|&a| f.image(a).is_empty())
}

/// Drop the lowest erasing letter `z`: `h` deletes `z`, `k` is `f` on the rest.
pub fn eliminate_erasing(f: &Morphism) -> Result<SimplificationStep> {
    f.require_endomorphism("eliminate_erasing")?;
    let Some(z) = lowest_erasing_letter(f) else {
        return precondition("eliminate_erasing needs a letter with an empty image");
    };
    let keep: Vec<Letter> = f.source().letters().filter(|&a| a != z).collect();
    if keep.is_empty() {
        return precondition("cannot eliminate the only letter of the alphabet");
    }
    let (b, map) = f.source().restrict(&keep)?;
    let h_images = f
        .source()
        .letters()
        .map(|a| map[a.0].map(Word::letter).unwrap_or_default())
        .collect();
    let h = Morphism::new(f.source().clone(), b.clone(), h_images)?;
    let k_images = keep.iter().map(|&a| f.image(a).clone()).collect();
    let k = Morphism::new(b, f.source().clone(), k_images)?;
    SimplificationStep::new(f, h, k, StepKind::ErasingElimination)
}

/// Merge letters with identical images. Each class is represented by its
/// lowest letter, which keeps its symbol.
pub fn merge_duplicate_images(f: &Morphism) -> Result<SimplificationStep> {
    f.require_endomorphism("merge_duplicate_images")?;
    if f.is_erasing() {
        return precondition("merge_duplicate_images needs a non-erasing morphism");
    }
    let mut reps: Vec<Letter> = Vec::new();
    let mut class_of: Vec<usize> = Vec::with_capacity(f.source().len());
    let mut by_image: BTreeMap<&Word, usize> = BTreeMap::new();
    for a in f.source().letters() {
        let next = reps.len();
        let class = *by_image.entry(f.image(a)).or_insert(next);
        if class == next {
            reps.push(a);
        }
        class_of.push(class);
    }
    if reps.len() == f.source().len() {
        return precondition("merge_duplicate_images needs two letters with equal images");
    }
    let (b, _) = f.source().restrict(&reps)?;
    let h_images = class_of.iter().map(|&c| Word::letter(Letter(c))).collect();
    let h = Morphism::new(f.source().clone(), b.clone(), h_images)?;
    let k_images = reps.iter().map(|&a| f.image(a).clone()).collect();
    let k = Morphism::new(b, f.source().clone(), k_images)?;
    SimplificationStep::new(f, h, k, StepKind::DuplicateMerge)
}

fn canonical_order(set: &mut Vec<Word>) {
    set.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
    set.dedup();
}

/// Shrink the image set `X` of `f` to a code `Y` with `X ⊆ Y⁺`.
///
/// Rules, applied until `Y` is a code: drop an element that factorizes over
/// the others; otherwise replace `v` by `u⁻¹v` for the least pair `(u, v)`
/// with `u` a proper prefix of `v`. Total length strictly decreases.
pub fn reduce_to_code(x: &[Word]) -> Vec<Word> {
    let mut y: Vec<Word> = x.iter().filter(|w| !w.is_empty()).cloned().collect();
    canonical_order(&mut y);
    loop {
        if is_code(&y) {
            return y;
        }
        let decomposable = (0..y.len()).find(|&i| {
            let others: Vec<Word> = y
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| w.clone())
                .collect();
            factorize(&y[i], &others).is_some()
        });
        if let Some(i) = decomposable {
            y.remove(i);
            continue;
        }
        let mut best: Option<(&Word, &Word)> = None;
        for u in &y {
            for v in &y {
                if v.len() > u.len() && v.starts_with(u) && best.is_none_or(|b| (u, v) < b) {
                    best = Some((u, v));
                }
            }
        }
        let (u, v) = best.expect("a set that is not a code is not prefix-free");
        let (u, v) = (u.clone(), v.clone());
        let rest = v.slice(u.len(), v.len());
        y.retain(|w| w != &v);
        y.push(rest);
        canonical_order(&mut y);
    }
}

/// Exhaustive search for fewer than `#X` words that jointly factorize every
/// element of `X`. Candidates are factors of elements of `X`.
fn search_smaller_base(x: &[Word], budget: usize) -> Option<Vec<Word>> {
    let mut cands: BTreeSet<(usize, Word)> = BTreeSet::new();
    for w in x {
        for i in 0..w.len() {
            for j in (i + 1)..=w.len() {
                cands.insert((j - i, w.slice(i, j)));
            }
        }
    }
    let cands: Vec<Word> = cands.into_iter().map(|(_, w)| w).collect();
    let mut checked = 0usize;
    for size in 1..x.len() {
        if size > cands.len() {
            break;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            checked += 1;
            if checked > budget {
                return None;
            }
            let base: Vec<Word> = idx.iter().map(|&i| cands[i].clone()).collect();
            if x.iter().all(|w| factorize(w, &base).is_some()) {
                return Some(base);
            }
            if !next_combination(&mut idx, cands.len()) {
                break;
            }
        }
    }
    None
}

/// Advance `idx` to the next `idx.len()`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in (i + 1)..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

const FALLBACK_BUDGET: usize = 2_000_000;

/// Simplify a non-erasing morphism with distinct images that is not
/// injective: the new letters `x0, x1, ...` stand for the words of a smaller
/// code `Y` covering the images.
pub fn code_reduce(f: &Morphism) -> Result<SimplificationStep> {
    f.require_endomorphism("code_reduce")?;
    if f.is_erasing() {
        return precondition("code_reduce needs a non-erasing morphism");
    }
    let x = f.images().to_vec();
    let distinct: BTreeSet<&Word> = x.iter().collect();
    if distinct.len() != x.len() {
        return precondition("code_reduce needs pairwise distinct images");
    }
    if f.is_injective() {
        return precondition("code_reduce needs a non-injective morphism");
    }

    let mut y = reduce_to_code(&x);
    if y.len() >= x.len() {
        y = search_smaller_base(&x, FALLBACK_BUDGET).ok_or_else(|| {
            let rendered: Vec<String> = x.iter().map(|w| f.source().render(w)).collect();
            Error::DefectReduction(format!("{{{}}}", rendered.join(", ")))
        })?;
    }

    let b = Alphabet::fresh(y.len())?;
    let h_images = x
        .iter()
        .map(|w| {
            factorize(w, &y).map(Word::from_ids).ok_or_else(|| {
                Error::Invariant("image does not factorize over the reduced set".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let h = Morphism::new(f.source().clone(), b.clone(), h_images)?;
    let k = Morphism::new(b, f.source().clone(), y)?;
    SimplificationStep::new(f, h, k, StepKind::CodeReduction)
}

/// A chain of simplifications ending in an injective system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationChain {
    steps: Vec<SimplificationStep>,
    systems: Vec<D0LSystem>,
}

impl SimplificationChain {
    /// The empty chain on an already injective (or finite) system.
    pub fn trivial(system: D0LSystem) -> Self {
        SimplificationChain {
            steps: Vec::new(),
            systems: vec![system],
        }
    }

    pub fn steps(&self) -> &[SimplificationStep] {
        &self.steps
    }

    /// Systems along the chain: the original first, the final one last.
    pub fn systems(&self) -> &[D0LSystem] {
        &self.systems
    }

    pub fn original_system(&self) -> &D0LSystem {
        &self.systems[0]
    }

    pub fn final_system(&self) -> &D0LSystem {
        self.systems
            .last()
            .expect("chain holds at least the original system")
    }

    /// Read a word of the final system back in the original alphabet by
    /// applying the `k` morphisms in reverse order.
    pub fn map_back(&self, w: &[Letter]) -> Word {
        let mut cur = Word::from(w);
        for step in self.steps.iter().rev() {
            cur = step.k.apply_unchecked(&cur);
        }
        cur
    }

    /// Push a word of the original system forward through every `h`.
    pub fn map_forward(&self, w: &[Letter]) -> Word {
        let mut cur = Word::from(w);
        for step in &self.steps {
            cur = step.h.apply_unchecked(&cur);
        }
        cur
    }
}

fn next_step(f: &Morphism) -> Result<SimplificationStep> {
    if f.is_erasing() {
        return eliminate_erasing(f);
    }
    let distinct: BTreeSet<&Word> = f.images().iter().collect();
    if distinct.len() < f.images().len() {
        return merge_duplicate_images(f);
    }
    code_reduce(f)
}

/// Simplify a reduced system until its morphism is injective, re-reducing
/// after every step.
pub fn injective_simplification(system: &D0LSystem) -> Result<SimplificationChain> {
    if !system.is_reduced() {
        return precondition("injective_simplification needs a reduced system");
    }
    let mut steps = Vec::new();
    let mut systems = vec![system.clone()];
    loop {
        let current = systems.last().expect("non-empty");
        let f = current.morphism();
        if f.is_injective() {
            break;
        }
        let mut step = next_step(f)?;
        let axiom = step.h.apply_unchecked(current.axiom());
        if axiom.is_empty() {
            return precondition("the language is finite: the axiom simplifies to the empty word");
        }
        let mut next = D0LSystem::new(step.simplified(), axiom)?;
        if !next.is_reduced() {
            let keep = next.reachable_letters();
            step = step.restrict(f, &keep)?;
            next = D0LSystem::new(step.simplified(), step.h.apply_unchecked(current.axiom()))?;
        }
        steps.push(step);
        systems.push(next);
    }
    Ok(SimplificationChain { steps, systems })
}
