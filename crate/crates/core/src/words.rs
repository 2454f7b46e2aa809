//! Finite words and the handful of combinatorics-on-words primitives the
//! rest of the crate is built from.
//!
//! Letters are plain indices into an [`Alphabet`](crate::Alphabet); a
//! [`Word`] is a sequence of them. Nothing here knows about symbols, so
//! every operation compares letters by id.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// A letter, identified by its index in some alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub usize);

impl Letter {
    pub fn id(self) -> usize {
        self.0
    }
}

/// A finite, possibly empty, word.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        Word(ids.into_iter().map(Letter).collect())
    }

    pub fn letter(a: Letter) -> Self {
        Word(vec![a])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|a| a.0)
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn extend_from(&mut self, other: &[Letter]) {
        self.0.extend_from_slice(other);
    }

    /// `self` repeated `k` times.
    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn concat<'a, I: IntoIterator<Item = &'a Word>>(parts: I) -> Word {
        let mut out = Vec::new();
        for p in parts {
            out.extend_from_slice(&p.0);
        }
        Word(out)
    }

    /// The factor `self[start..end]`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Rotation `yx` where `self = xy` and `|x| = shift`.
    pub fn rotate(&self, shift: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(shift % n);
        }
        Word(v)
    }

    pub fn contains_letter(&self, a: Letter) -> bool {
        self.0.contains(&a)
    }

    pub fn count(&self, a: Letter) -> usize {
        self.0.iter().filter(|&&b| b == a).count()
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    // Letter ids, dot separated: `0.1.2`. Symbols need an alphabet.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", a.0)?;
        }
        write!(f, ")")
    }
}

fn require_non_empty(w: &[Letter], op: &str) -> Result<()> {
    if w.is_empty() {
        return precondition(format!("{op} requires a non-empty word"));
    }
    Ok(())
}

/// Length of the smallest period `p` of `w` that divides `|w|`.
fn root_len(w: &[Letter]) -> usize {
    let n = w.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

/// The shortest `x` such that `w = x^m` for some `m >= 1`.
pub fn primitive_root(w: &[Letter]) -> Result<Word> {
    require_non_empty(w, "primitive_root")?;
    Ok(Word::from(&w[..root_len(w)]))
}

pub fn is_primitive(w: &[Letter]) -> Result<bool> {
    require_non_empty(w, "is_primitive")?;
    Ok(root_len(w) == w.len())
}

/// All rotations of `w`, deduplicated.
pub fn conjugates(w: &[Letter]) -> Result<BTreeSet<Word>> {
    require_non_empty(w, "conjugates")?;
    let w = Word::from(w);
    Ok((0..w.len()).map(|i| w.rotate(i)).collect())
}

/// `u` and `v` have the same length and `u` occurs in `vv`.
pub fn are_conjugate(u: &[Letter], v: &[Letter]) -> bool {
    if u.len() != v.len() {
        return false;
    }
    if u.is_empty() {
        return true;
    }
    let vv: Vec<Letter> = v.iter().chain(v.iter()).copied().collect();
    vv.windows(u.len()).any(|win| win == u)
}

/// The least rotation of `w` in letter-id order.
pub fn canonical_rotation(w: &[Letter]) -> Result<Word> {
    require_non_empty(w, "canonical_rotation")?;
    let n = w.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            let a = w[i..].iter().chain(&w[..i]);
            let b = w[j..].iter().chain(&w[..j]);
            a.cmp(b)
        })
        .expect("non-empty");
    Ok(Word::from(w).rotate(best))
}

/// Canonical representative of the class `[v]^ω`: the least rotation of the
/// primitive root.
pub fn class_representative(w: &[Letter]) -> Result<Word> {
    let root = primitive_root(w)?;
    canonical_rotation(&root)
}

/// `Some(m)` when `w = v^m`. The empty word is `v^0`.
pub fn exact_power_of(w: &[Letter], v: &[Letter]) -> Result<Option<usize>> {
    require_non_empty(v, "exact_power_of")?;
    if !w.len().is_multiple_of(v.len()) {
        return Ok(None);
    }
    if w.chunks(v.len()).all(|c| c == v) {
        Ok(Some(w.len() / v.len()))
    } else {
        Ok(None)
    }
}

/// Start positions of every (possibly overlapping) occurrence of `pattern`.
pub fn factor_occurrences(text: &[Letter], pattern: &[Letter]) -> Result<Vec<usize>> {
    require_non_empty(pattern, "factor_occurrences")?;
    if pattern.len() > text.len() {
        return Ok(Vec::new());
    }
    Ok(text
        .windows(pattern.len())
        .enumerate()
        .filter(|(_, win)| *win == pattern)
        .map(|(i, _)| i)
        .collect())
}

pub fn is_factor(text: &[Letter], pattern: &[Letter]) -> bool {
    pattern.is_empty()
        || (pattern.len() <= text.len() && text.windows(pattern.len()).any(|w| w == pattern))
}
