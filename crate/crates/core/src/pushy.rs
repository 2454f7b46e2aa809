//! Infinite periodic factors made of bounded letters.
//!
//! Each unbounded letter `a` has exactly one edge in the right graph: to the
//! last unbounded letter `b` of `φ(a) = v b u`, labelled by the bounded
//! suffix `u`. The left graph mirrors this with the first unbounded letter
//! and the bounded prefix. Both graphs are functional, so each component
//! holds one cycle. A cycle carrying an immortal label sheds a bounded block
//! on every lap, and the blocks `u, φ^k(u), φ^{2k}(u), ...` are eventually
//! periodic; their period is the bounded infinite periodic factor.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::morphism::{D0LSystem, LetterClassification, Morphism};
use crate::words::{primitive_root, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Functional graph on the unbounded letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideGraph {
    side: Side,
    edges: BTreeMap<Letter, (Letter, Word)>,
}

impl SideGraph {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn vertices(&self) -> impl Iterator<Item = Letter> + '_ {
        self.edges.keys().copied()
    }

    /// Target and label of the single edge leaving `a`.
    pub fn edge(&self, a: Letter) -> Option<(Letter, &Word)> {
        self.edges.get(&a).map(|(b, u)| (*b, u))
    }

    /// Build a graph directly from its edges. Each vertex needs exactly one
    /// outgoing edge whose target is also a vertex.
    pub fn from_edges(side: Side, edges: BTreeMap<Letter, (Letter, Word)>) -> Result<Self> {
        if let Some((_, (b, _))) = edges.iter().find(|(_, (b, _))| !edges.contains_key(b)) {
            return Err(Error::Invariant(format!(
                "edge target #{} is not a vertex",
                b.0
            )));
        }
        Ok(SideGraph { side, edges })
    }
}

/// A cycle `a_0 -u_1-> a_1 -u_2-> ... -u_k-> a_0`, starting at its lowest letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideCycle {
    pub side: Side,
    pub vertices: Vec<Letter>,
    /// `labels[j]` labels the edge leaving `vertices[j]`.
    pub labels: Vec<Word>,
}

impl SideCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The same cycle entered at `vertices[j]`.
    pub fn rotated(&self, j: usize) -> SideCycle {
        let mut vertices = self.vertices.clone();
        let mut labels = self.labels.clone();
        vertices.rotate_left(j);
        labels.rotate_left(j);
        SideCycle {
            side: self.side,
            vertices,
            labels,
        }
    }
}

pub fn build_side_graph(
    system: &D0LSystem,
    classes: &LetterClassification,
    side: Side,
) -> Result<SideGraph> {
    let phi = system.morphism();
    if phi.is_erasing() {
        return precondition("side graphs need a non-erasing morphism");
    }
    let mut edges = BTreeMap::new();
    for &a in &classes.unbounded {
        let img = phi.image(a);
        let pos = match side {
            Side::Right => img.iter().rposition(|&b| classes.is_unbounded(b)),
            Side::Left => img.iter().position(|&b| classes.is_unbounded(b)),
        };
        let Some(pos) = pos else {
            return Err(Error::Invariant(format!(
                "unbounded letter `{}` has an image without unbounded letters",
                system.alphabet().symbol(a)
            )));
        };
        let label = match side {
            Side::Right => img.slice(pos + 1, img.len()),
            Side::Left => img.slice(0, pos),
        };
        edges.insert(a, (img[pos], label));
    }
    Ok(SideGraph { side, edges })
}

/// Every cycle of the graph, once each, ordered by entry letter.
pub fn cycles(graph: &SideGraph) -> Vec<SideCycle> {
    // 0 unvisited, 1 on the current walk, 2 finished
    let mut state: BTreeMap<Letter, u8> = graph.edges.keys().map(|&a| (a, 0)).collect();
    let mut out = Vec::new();
    for start in graph.vertices() {
        if state[&start] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        while state[&cur] == 0 {
            state.insert(cur, 1);
            walk.push(cur);
            cur = graph.edges[&cur].0;
        }
        if state[&cur] == 1 {
            let at = walk
                .iter()
                .position(|&a| a == cur)
                .expect("on the current walk");
            let ring = &walk[at..];
            let entry = ring
                .iter()
                .enumerate()
                .min_by_key(|(_, a)| **a)
                .map(|(i, _)| i)
                .unwrap();
            let vertices: Vec<Letter> = ring[entry..]
                .iter()
                .chain(&ring[..entry])
                .copied()
                .collect();
            let labels = vertices.iter().map(|a| graph.edges[a].1.clone()).collect();
            out.push(SideCycle {
                side: graph.side,
                vertices,
                labels,
            });
        }
        for a in walk {
            state.insert(a, 2);
        }
    }
    out.sort_by_key(|c| c.vertices[0]);
    out
}

fn has_immortal_label(cycle: &SideCycle, classes: &LetterClassification) -> bool {
    cycle
        .labels
        .iter()
        .any(|u| u.iter().any(|&b| !classes.is_mortal(b)))
}

/// Some cycle of the left or right graph carries a label with an immortal letter.
pub fn is_pushy(system: &D0LSystem, classes: &LetterClassification) -> Result<bool> {
    for side in [Side::Left, Side::Right] {
        let graph = build_side_graph(system, classes, side)?;
        if cycles(&graph)
            .iter()
            .any(|c| has_immortal_label(c, classes))
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The bounded period found on one qualifying cycle, with the quantities
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedPeriod {
    pub cycle: SideCycle,
    /// The block shed per lap: `u` on the right, `p` on the left.
    pub block: Word,
    /// Least `s >= 0`, `t >= 1` with `φ^s(block) = φ^{s+t}(block)`.
    pub preperiod: usize,
    pub period: usize,
    pub l0: usize,
    pub l1: usize,
    /// Primitive root of the concatenated periodic blocks.
    pub word: Word,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `(s, t)`: first repeat in the orbit `w, φ(w), φ²(w), ...`.
fn orbit_period(phi: &Morphism, w: &Word) -> (usize, usize, Vec<Word>) {
    let mut index: HashMap<Word, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut cur = w.clone();
    loop {
        if let Some(&s) = index.get(&cur) {
            let t = orbit.len() - s;
            return (s, t, orbit);
        }
        index.insert(cur.clone(), orbit.len());
        orbit.push(cur.clone());
        cur = phi.apply_unchecked(&cur);
    }
}

/// Period words of all bounded infinite periodic factors: one per vertex of
/// each cycle of the left or right graph whose labels are not all mortal.
/// Entering a cycle of length `k` at its `k` vertices yields the classes
/// `[P], [φ(P)], ..., [φ^{k-1}(P)]`, so the result is closed under `φ`.
pub fn bounded_periodic_classes(
    system: &D0LSystem,
    classes: &LetterClassification,
) -> Result<Vec<BoundedPeriod>> {
    let phi = system.morphism();
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let graph = build_side_graph(system, classes, side)?;
        let entries = cycles(&graph)
            .into_iter()
            .filter(|c| has_immortal_label(c, classes))
            .flat_map(|c| (0..c.len()).map(move |j| c.rotated(j)));
        for cycle in entries {
            let k = cycle.len();
            // exponent of φ applied to u_j is k - j (labels[j-1] = u_j)
            let pieces: Vec<Word> = (1..=k)
                .map(|j| phi.iterate(&cycle.labels[j - 1], k - j))
                .collect::<Result<_>>()?;
            let block = match side {
                Side::Right => Word::concat(pieces.iter().rev()),
                Side::Left => Word::concat(pieces.iter()),
            };
            if !classes.all_bounded(&block) {
                return Err(Error::Invariant(
                    "cycle block contains an unbounded letter".into(),
                ));
            }
            let (s, t, orbit) = orbit_period(phi, &block);
            let l0 = s.div_ceil(k);
            let l1 = l0 + lcm(t, k) / k;
            // φ^{ik}(block) read off the finite orbit
            let at = |i: usize| -> &Word {
                let e = i * k;
                if e < orbit.len() {
                    &orbit[e]
                } else {
                    &orbit[s + (e - s) % t]
                }
            };
            let blocks: Vec<&Word> = match side {
                Side::Right => ((l0 + 1)..=l1).map(at).collect(),
                Side::Left => ((l0 + 1)..=l1).rev().map(at).collect(),
            };
            let p = Word::concat(blocks);
            if p.is_empty() {
                return Err(Error::Invariant(
                    "immortal cycle produced an empty period".into(),
                ));
            }
            let word = primitive_root(&p)?;
            out.push(BoundedPeriod {
                cycle,
                block,
                preperiod: s,
                period: t,
                l0,
                l1,
                word,
            });
        }
    }
    Ok(out)
}
