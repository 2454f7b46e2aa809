//! Infinite periodic factors that contain an unbounded letter.
//!
//! On an injective system every such class is the period of a purely
//! periodic fixed point `(φ^ℓ)^ω(a)` with `a` unbounded and `ℓ` at most the
//! alphabet size. Candidates `(a, ℓ)` come from the graph of first letters;
//! each is settled by Lando's three-step check.

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::morphism::{D0LSystem, LetterClassification, Morphism};
use crate::words::{exact_power_of, primitive_root, Letter, Word};

/// Unbounded letter `a` with the least `ℓ <= #A` such that `first(φ^ℓ(a)) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FirstLetterCandidate {
    pub letter: Letter,
    pub period: usize,
}

pub fn first_letter_candidates(
    system: &D0LSystem,
    classes: &LetterClassification,
) -> Result<Vec<FirstLetterCandidate>> {
    let phi = system.morphism();
    if phi.is_erasing() {
        return precondition("first_letter_candidates needs a non-erasing morphism");
    }
    let n = system.alphabet().len();
    let mut out = Vec::new();
    for &a in &classes.unbounded {
        let mut cur = a;
        for l in 1..=n {
            cur = phi.first_letter(cur)?;
            if cur == a {
                out.push(FirstLetterCandidate {
                    letter: a,
                    period: l,
                });
                break;
            }
        }
    }
    Ok(out)
}

fn has_repeated_unbounded(w: &[Letter], classes: &LetterClassification) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    w.iter()
        .any(|&b| classes.is_unbounded(b) && !seen.insert(b))
}

/// Decide whether `(φ^ℓ)^ω(a)` is purely periodic; if so return the word
/// `v` with `(φ^ℓ)^ω(a) = v^ω`.
///
/// With `ψ = φ^ℓ`: find the least `s <= #A` for which `ψ^s(a)` repeats some
/// unbounded letter, require that `a` itself repeats there, cut `v` just
/// before the second `a`, and accept iff `ψ(v) = v^m` with `m >= 2`.
pub fn lando_periodic_check(
    phi: &Morphism,
    period: usize,
    a: Letter,
    classes: &LetterClassification,
) -> Result<Option<Word>> {
    if period == 0 {
        return precondition("lando_periodic_check needs a positive period");
    }
    if !classes.is_unbounded(a) {
        return precondition("lando_periodic_check needs an unbounded letter");
    }
    let psi = phi.power(period)?;
    if psi.image(a).first() != Some(a) {
        return precondition(format!(
            "first(φ^{period}({})) is not the letter itself",
            phi.source().symbol(a)
        ));
    }

    let n = phi.source().len();
    let mut cur = Word::letter(a);
    let mut found = false;
    for _ in 1..=n {
        cur = psi.apply_unchecked(&cur);
        if has_repeated_unbounded(&cur, classes) {
            found = true;
            break;
        }
    }
    if !found {
        return Ok(None);
    }
    let Some(second) = cur.iter().skip(1).position(|&b| b == a).map(|i| i + 1) else {
        return Ok(None);
    };
    let v = cur.slice(0, second);
    match exact_power_of(&psi.apply_unchecked(&v), &v)? {
        Some(m) if m >= 2 => Ok(Some(v)),
        Some(m) => Err(Error::Invariant(format!(
            "periodic point with an unbounded letter has exponent {m}"
        ))),
        None => Ok(None),
    }
}

/// A purely periodic point found from a first-letter candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnboundedPeriod {
    pub candidate: FirstLetterCandidate,
    /// The word returned by the check: `(φ^ℓ)^ω(a) = v^ω`.
    pub v: Word,
    /// Primitive root of `v`.
    pub word: Word,
}

/// Every candidate letter is tested; equivalent results are left for the
/// caller to deduplicate.
pub fn unbounded_periodic_classes(
    system: &D0LSystem,
    classes: &LetterClassification,
) -> Result<Vec<UnboundedPeriod>> {
    let mut out = Vec::new();
    for candidate in first_letter_candidates(system, classes)? {
        if let Some(v) = lando_periodic_check(
            system.morphism(),
            candidate.period,
            candidate.letter,
            classes,
        )? {
            let word = primitive_root(&v)?;
            out.push(UnboundedPeriod { candidate, v, word });
        }
    }
    Ok(out)
}
