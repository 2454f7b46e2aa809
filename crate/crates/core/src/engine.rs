//! The full analysis: reduce, simplify to an injective system, collect the
//! bounded and unbounded periods there, and read them back in the original
//! alphabet as conjugacy classes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::{bounded_letters, D0LSystem, LetterClassification, Morphism};
use crate::pushy::{bounded_periodic_classes, is_pushy, BoundedPeriod};
use crate::simplify::{injective_simplification, SimplificationChain};
use crate::unbounded::{unbounded_periodic_classes, UnboundedPeriod};
use crate::words::{class_representative, conjugates, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Bounded,
    Unbounded,
}

/// The class `[v]^ω` of an infinite periodic factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicFactorClass {
    representative: Word,
    conjugates: BTreeSet<Word>,
    source: Source,
}

impl PeriodicFactorClass {
    fn new(word: &Word, classes: &LetterClassification) -> Result<Self> {
        let representative = class_representative(word)?;
        let conjugates = conjugates(&representative)?;
        let source = if classes.all_bounded(&representative) {
            Source::Bounded
        } else {
            Source::Unbounded
        };
        Ok(PeriodicFactorClass {
            representative,
            conjugates,
            source,
        })
    }

    /// Least rotation of the primitive period.
    pub fn representative(&self) -> &Word {
        &self.representative
    }

    pub fn conjugates(&self) -> &BTreeSet<Word> {
        &self.conjugates
    }

    pub fn source(&self) -> Source {
        self.source
    }
}

/// The action of `φ` on classes: `[v] -> [φ(v)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicFactorGraph {
    vertices: Vec<Word>,
    successor: Vec<usize>,
}

impl PeriodicFactorGraph {
    /// Build the graph on `representatives` (canonical words of `system`) and
    /// check it is a disjoint union of cycles.
    pub fn build(system: &D0LSystem, representatives: &BTreeSet<Word>) -> Result<Self> {
        let vertices: Vec<Word> = representatives.iter().cloned().collect();
        let index: BTreeMap<&Word, usize> =
            vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut successor = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let image = system.morphism().apply(v)?;
            if image.is_empty() {
                return Err(Error::Invariant(
                    "a periodic class maps to the empty word".into(),
                ));
            }
            let target = class_representative(&image)?;
            let Some(&j) = index.get(&target) else {
                return Err(Error::Invariant(format!(
                    "class {} maps outside the reported classes",
                    system.alphabet().render(v)
                )));
            };
            successor.push(j);
        }
        let mut indegree = vec![0usize; vertices.len()];
        for &j in &successor {
            indegree[j] += 1;
        }
        if let Some(i) = indegree.iter().position(|&d| d != 1) {
            return Err(Error::Invariant(format!(
                "class {} has indegree {} in the graph of periodic factors",
                system.alphabet().render(&vertices[i]),
                indegree[i]
            )));
        }
        Ok(PeriodicFactorGraph {
            vertices,
            successor,
        })
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn successor(&self, i: usize) -> usize {
        self.successor[i]
    }

    /// Cycle lengths, one entry per cycle, ordered by lowest vertex.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                cur = self.successor[cur];
            }
            out.push(len);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub original: D0LSystem,
    /// Inclusion of the reduced alphabet into the original one.
    pub embedding: Morphism,
    pub chain: SimplificationChain,
    /// Bounded/unbounded letters of the original system.
    pub classification: LetterClassification,
    pub pushy: bool,
    pub repetitive: bool,
    pub strongly_repetitive: bool,
    /// Classes over the original alphabet, sorted by representative.
    pub classes: Vec<PeriodicFactorClass>,
    /// Canonical class words of the final injective system.
    pub final_classes: BTreeSet<Word>,
    pub graph: PeriodicFactorGraph,
    pub bounded_periods: Vec<BoundedPeriod>,
    pub unbounded_periods: Vec<UnboundedPeriod>,
}

impl AnalysisReport {
    pub fn final_system(&self) -> &D0LSystem {
        self.chain.final_system()
    }
}

/// Run the whole pipeline on `system`.
pub fn analyze(system: &D0LSystem) -> Result<AnalysisReport> {
    let classification = bounded_letters(system.morphism())?;
    let (reduced, embedding) = system.reduce_with_embedding();
    let reduced_classes = bounded_letters(reduced.morphism())?;

    if reduced_classes.unbounded.is_empty() {
        // finite language
        let chain = SimplificationChain::trivial(reduced);
        let graph = PeriodicFactorGraph::build(chain.final_system(), &BTreeSet::new())?;
        return Ok(AnalysisReport {
            original: system.clone(),
            embedding,
            chain,
            classification,
            pushy: false,
            repetitive: false,
            strongly_repetitive: false,
            classes: Vec::new(),
            final_classes: BTreeSet::new(),
            graph,
            bounded_periods: Vec::new(),
            unbounded_periods: Vec::new(),
        });
    }

    let chain = injective_simplification(&reduced)?;
    let last = chain.final_system();
    if !last.is_reduced() || !last.morphism().is_injective() {
        return Err(Error::Invariant(
            "simplification did not end in a reduced injective system".into(),
        ));
    }
    let last_classes = bounded_letters(last.morphism())?;

    let bounded_periods = bounded_periodic_classes(last, &last_classes)?;
    let unbounded_periods = unbounded_periodic_classes(last, &last_classes)?;
    let final_classes: BTreeSet<Word> = bounded_periods
        .iter()
        .map(|b| &b.word)
        .chain(unbounded_periods.iter().map(|u| &u.word))
        .map(|w| class_representative(w))
        .collect::<Result<_>>()?;
    let graph = PeriodicFactorGraph::build(last, &final_classes)?;

    let mut by_rep: BTreeMap<Word, PeriodicFactorClass> = BTreeMap::new();
    for z in &final_classes {
        let back = embedding.apply(&chain.map_back(z))?;
        if back.is_empty() {
            return Err(Error::Invariant(
                "a class maps back to the empty word".into(),
            ));
        }
        let class = PeriodicFactorClass::new(&back, &classification)?;
        by_rep.entry(class.representative.clone()).or_insert(class);
    }
    let classes: Vec<PeriodicFactorClass> = by_rep.into_values().collect();

    let pushy = is_pushy(last, &last_classes)?;
    let repetitive = !classes.is_empty();
    Ok(AnalysisReport {
        original: system.clone(),
        embedding,
        chain,
        classification,
        pushy,
        repetitive,
        strongly_repetitive: repetitive,
        classes,
        final_classes,
        graph,
        bounded_periods,
        unbounded_periods,
    })
}

pub fn is_repetitive(system: &D0LSystem) -> Result<bool> {
    Ok(analyze(system)?.repetitive)
}

/// The graph of infinite periodic factors of the report's final system.
pub fn periodic_factor_graph(report: &AnalysisReport) -> Result<PeriodicFactorGraph> {
    PeriodicFactorGraph::build(report.final_system(), &report.final_classes)
}
