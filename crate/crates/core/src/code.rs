//! Sardinas–Patterson test for unique decipherability, with certificates.
//!
//! The search walks dangling suffixes breadth first. Each state remembers
//! the two factorizations that produced it, so when the empty suffix shows
//! up the two factorizations are a shortest double parse.

use std::collections::{HashSet, VecDeque};

use crate::words::{Letter, Word};

struct State {
    // images(behind) . suffix = images(ahead)
    behind: Vec<usize>,
    ahead: Vec<usize>,
    suffix: Vec<Letter>,
}

/// Two distinct index sequences with equal concatenated images, if the
/// words in `set` do not form a code. Requires non-empty, pairwise
/// distinct words.
pub fn double_factorization(set: &[Word]) -> Option<(Vec<usize>, Vec<usize>)> {
    debug_assert!(set.iter().all(|w| !w.is_empty()));
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue = VecDeque::new();

    for (i, x) in set.iter().enumerate() {
        for (j, y) in set.iter().enumerate() {
            if i != j && y.len() > x.len() && y.starts_with(x) {
                let suffix = y[x.len()..].to_vec();
                if seen.insert(suffix.clone()) {
                    queue.push_back(State {
                        behind: vec![i],
                        ahead: vec![j],
                        suffix,
                    });
                }
            }
        }
    }

    while let Some(State {
        behind,
        ahead,
        suffix,
    }) = queue.pop_front()
    {
        for (c, x) in set.iter().enumerate() {
            let mut extended = behind.clone();
            extended.push(c);
            if x[..] == suffix[..] {
                return Some((extended, ahead));
            }
            let next = if suffix.starts_with(x) {
                State {
                    behind: extended,
                    ahead: ahead.clone(),
                    suffix: suffix[x.len()..].to_vec(),
                }
            } else if x.starts_with(&suffix) {
                State {
                    behind: ahead.clone(),
                    ahead: extended,
                    suffix: x[suffix.len()..].to_vec(),
                }
            } else {
                continue;
            };
            if seen.insert(next.suffix.clone()) {
                queue.push_back(next);
            }
        }
    }
    None
}

pub fn is_code(set: &[Word]) -> bool {
    let distinct: HashSet<&Word> = set.iter().collect();
    distinct.len() == set.len()
        && set.iter().all(|w| !w.is_empty())
        && double_factorization(set).is_none()
}

/// One factorization of `w` over `set`, as indices, or `None`.
pub fn factorize(w: &[Letter], set: &[Word]) -> Option<Vec<usize>> {
    // back[i]: index of the last block of some factorization of w[..i]
    let n = w.len();
    let mut back: Vec<Option<usize>> = vec![None; n + 1];
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for i in 0..n {
        if !ok[i] {
            continue;
        }
        for (j, y) in set.iter().enumerate() {
            let end = i + y.len();
            if !y.is_empty() && end <= n && !ok[end] && w[i..end] == y[..] {
                ok[end] = true;
                back[end] = Some(j);
            }
        }
    }
    if !ok[n] {
        return None;
    }
    let mut out = Vec::new();
    let mut pos = n;
    while pos > 0 {
        let j = back[pos].expect("reachable position has a predecessor");
        out.push(j);
        pos -= set[j].len();
    }
    out.reverse();
    Some(out)
}
