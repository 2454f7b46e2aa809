//! Morphisms of free monoids and D0L-systems built on them.

use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::code;
use crate::error::{precondition, Error, Result};
use crate::words::{Letter, Word};

/// A morphism `source* -> target*`, given by the image of each source letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} source letters",
                images.len(),
                source.len()
            )));
        }
        for img in &images {
            target.check_word(img)?;
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// Endomorphism on `alphabet` from `(letter, image)` pairs written in the
    /// notation accepted by [`Alphabet::parse_word`]. Every letter needs a rule.
    pub fn from_rules(alphabet: &Alphabet, rules: &[(&str, &str)]) -> Result<Self> {
        let mut images: Vec<Option<Word>> = vec![None; alphabet.len()];
        for (lhs, rhs) in rules {
            let a = alphabet.letter(lhs)?;
            if images[a.0].replace(alphabet.parse_word(rhs)?).is_some() {
                return precondition(format!("duplicate rule for `{lhs}`"));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| {
                    Error::Precondition(format!("no rule for `{}`", alphabet.symbol(Letter(i))))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet.clone(), alphabet.clone(), images)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = alphabet.letters().map(Word::letter).collect();
        Morphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a.0]
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_erasing(&self) -> bool {
        self.images.iter().any(|w| w.is_empty())
    }

    /// Concatenation of the images of the letters of `w`.
    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        self.source.check_word(w)?;
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(w.len() * 2);
        for a in w {
            out.extend_from_slice(&self.images[a.0]);
        }
        Word::from(out)
    }

    /// `self^n(w)`.
    pub fn iterate(&self, w: &[Letter], n: usize) -> Result<Word> {
        self.require_endomorphism("iterate")?;
        self.source.check_word(w)?;
        let mut cur = Word::from(w);
        for _ in 0..n {
            cur = self.apply_unchecked(&cur);
        }
        Ok(cur)
    }

    /// `self^n` as a morphism.
    pub fn power(&self, n: usize) -> Result<Morphism> {
        self.require_endomorphism("power")?;
        let mut out = Morphism::identity(&self.source);
        for _ in 0..n {
            out = compose(self, &out)?;
        }
        Ok(out)
    }

    /// First letter of the image of `a`.
    pub fn first_letter(&self, a: Letter) -> Result<Letter> {
        match self.images[a.0].first() {
            Some(b) => Ok(b),
            None => precondition(format!(
                "first_letter of the empty image of `{}`",
                self.source.symbol(a)
            )),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    /// Two distinct words with equal images, shortest first, or `None` when
    /// the morphism is injective.
    pub fn injectivity_witness(&self) -> Option<(Word, Word)> {
        if let Some(i) = self.images.iter().position(|w| w.is_empty()) {
            return Some((Word::empty(), Word::letter(Letter(i))));
        }
        for i in 0..self.images.len() {
            for j in (i + 1)..self.images.len() {
                if self.images[i] == self.images[j] {
                    return Some((Word::letter(Letter(i)), Word::letter(Letter(j))));
                }
            }
        }
        let (x, y) = code::double_factorization(&self.images)?;
        let x = Word::from_ids(x);
        let y = Word::from_ids(y);
        Some(if (x.len(), &x) <= (y.len(), &y) {
            (x, y)
        } else {
            (y, x)
        })
    }

    pub(crate) fn require_endomorphism(&self, op: &str) -> Result<()> {
        if !self.is_endomorphism() {
            return Err(Error::AlphabetMismatch(format!(
                "{op} needs an endomorphism"
            )));
        }
        Ok(())
    }
}

/// `outer ∘ inner`: maps `a` to `outer(inner(a))`.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
    if inner.target != outer.source {
        return Err(Error::AlphabetMismatch(
            "inner target alphabet differs from outer source alphabet".into(),
        ));
    }
    let images = inner
        .images
        .iter()
        .map(|w| outer.apply_unchecked(w))
        .collect();
    Ok(Morphism {
        source: inner.source.clone(),
        target: outer.target.clone(),
        images,
    })
}

/// Letters `a` with `φ^k(a) = ε` for some `k`.
pub fn mortal_letters(phi: &Morphism) -> BTreeSet<Letter> {
    let n = phi.images.len();
    let mut mortal = vec![false; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if !mortal[a] && phi.images[a].iter().all(|b| mortal[b.0]) {
                mortal[a] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).filter(|&a| mortal[a]).map(Letter).collect()
}

/// Partition of an alphabet into bounded letters (finite orbit) and
/// unbounded ones. Mortal letters are bounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterClassification {
    pub mortal: BTreeSet<Letter>,
    pub bounded: BTreeSet<Letter>,
    pub unbounded: BTreeSet<Letter>,
}

impl LetterClassification {
    pub fn is_bounded(&self, a: Letter) -> bool {
        self.bounded.contains(&a)
    }

    pub fn is_unbounded(&self, a: Letter) -> bool {
        self.unbounded.contains(&a)
    }

    pub fn is_mortal(&self, a: Letter) -> bool {
        self.mortal.contains(&a)
    }

    pub fn all_bounded(&self, w: &[Letter]) -> bool {
        w.iter().all(|a| self.is_bounded(*a))
    }
}

/// Classify letters by orbit finiteness.
///
/// On the digraph of immortal letters (`a -> b` when `b` occurs in `φ(a)`), a
/// letter is unbounded exactly when it reaches a letter `c` on a cycle such
/// that `c` in turn reaches a letter whose image holds two or more immortal
/// letters. Every pass through the cycle then adds at least one immortal
/// letter to the word.
pub fn bounded_letters(phi: &Morphism) -> Result<LetterClassification> {
    phi.require_endomorphism("bounded_letters")?;
    let n = phi.images.len();
    let mortal = mortal_letters(phi);
    let immortal = |a: usize| !mortal.contains(&Letter(a));

    let succ: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            if !immortal(a) {
                return Vec::new();
            }
            let mut s: Vec<usize> = phi.images[a].ids().filter(|&b| immortal(b)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let branching: Vec<bool> = (0..n)
        .map(|a| immortal(a) && phi.images[a].ids().filter(|&b| immortal(b)).count() >= 2)
        .collect();

    // reach[a]: letters reachable from a in zero or more steps
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            let mut seen = vec![false; n];
            let mut stack = vec![a];
            seen[a] = true;
            while let Some(x) = stack.pop() {
                for &y in &succ[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect();
    let on_cycle = |c: usize| succ[c].iter().any(|&d| reach[d][c]);
    let growing: Vec<bool> = (0..n)
        .map(|c| immortal(c) && on_cycle(c) && (0..n).any(|b| reach[c][b] && branching[b]))
        .collect();

    let mut bounded = BTreeSet::new();
    let mut unbounded = BTreeSet::new();
    for (a, reach_a) in reach.iter().enumerate() {
        if immortal(a) && (0..n).any(|c| reach_a[c] && growing[c]) {
            unbounded.insert(Letter(a));
        } else {
            bounded.insert(Letter(a));
        }
    }
    Ok(LetterClassification {
        mortal,
        bounded,
        unbounded,
    })
}

/// A D0L-system: an endomorphism together with a non-empty axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D0LSystem {
    morphism: Morphism,
    axiom: Word,
}

impl D0LSystem {
    pub fn new(morphism: Morphism, axiom: Word) -> Result<Self> {
        morphism.require_endomorphism("D0LSystem")?;
        if axiom.is_empty() {
            return precondition("the axiom must be non-empty");
        }
        morphism.source.check_word(&axiom)?;
        Ok(D0LSystem { morphism, axiom })
    }

    /// Convenience constructor: `alphabet` symbols, rules and axiom in the
    /// notation of [`Alphabet::parse_word`].
    pub fn parse(alphabet: &[&str], rules: &[(&str, &str)], axiom: &str) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet.iter().copied())?;
        let morphism = Morphism::from_rules(&alphabet, rules)?;
        let axiom = alphabet.parse_word(axiom)?;
        D0LSystem::new(morphism, axiom)
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn axiom(&self) -> &Word {
        &self.axiom
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.morphism.source
    }

    /// `φ^n(axiom)`.
    pub fn iterate(&self, n: usize) -> Word {
        let mut cur = self.axiom.clone();
        for _ in 0..n {
            cur = self.morphism.apply_unchecked(&cur);
        }
        cur
    }

    /// Letters occurring in some word of the language.
    pub fn reachable_letters(&self) -> Vec<Letter> {
        let n = self.alphabet().len();
        let mut seen = vec![false; n];
        let mut stack: Vec<Letter> = Vec::new();
        for &a in self.axiom.iter() {
            if !seen[a.0] {
                seen[a.0] = true;
                stack.push(a);
            }
        }
        while let Some(a) = stack.pop() {
            for &b in self.morphism.image(a).iter() {
                if !seen[b.0] {
                    seen[b.0] = true;
                    stack.push(b);
                }
            }
        }
        (0..n).filter(|&a| seen[a]).map(Letter).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.reachable_letters().len() == self.alphabet().len()
    }

    /// Restriction to the letters that occur in the language, together with
    /// the inclusion morphism of the new alphabet into the old one.
    pub fn reduce_with_embedding(&self) -> (D0LSystem, Morphism) {
        let keep = self.reachable_letters();
        let (sub, map) = self
            .alphabet()
            .restrict(&keep)
            .expect("symbols of a valid alphabet stay valid");
        let rename = |w: &Word| -> Word {
            w.iter()
                .map(|a| map[a.0].expect("closed under images"))
                .collect()
        };
        let images = keep
            .iter()
            .map(|&a| rename(self.morphism.image(a)))
            .collect();
        let morphism = Morphism {
            source: sub.clone(),
            target: sub.clone(),
            images,
        };
        let axiom = rename(&self.axiom);
        let embedding = Morphism {
            source: sub,
            target: self.alphabet().clone(),
            images: keep.into_iter().map(Word::letter).collect(),
        };
        (D0LSystem { morphism, axiom }, embedding)
    }

    /// The reduced system: alphabet cut down to letters reachable from the axiom.
    pub fn reduce(&self) -> D0LSystem {
        self.reduce_with_embedding().0
    }
}
