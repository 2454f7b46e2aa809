use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// An ordered, non-empty set of distinct letter symbols. A letter's id is
/// its position in this list.
#[derive(Debug, Clone)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Letter>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Precondition("alphabet must not be empty".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::Precondition(format!("invalid letter symbol {s:?}")));
            }
            if index.insert(s.clone(), Letter(i)).is_some() {
                return Err(Error::Precondition(format!(
                    "duplicate letter symbol `{s}`"
                )));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// Alphabet with symbols `x0, x1, ..., x{n-1}`.
    pub fn fresh(n: usize) -> Result<Self> {
        Alphabet::new((0..n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.symbols.len()).map(Letter)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, a: Letter) -> &str {
        &self.symbols[a.0]
    }

    pub fn letter(&self, symbol: &str) -> Result<Letter> {
        self.index
            .get(symbol)
            .copied()
            .ok_or_else(|| Error::Domain(symbol.to_string()))
    }

    pub fn contains(&self, a: Letter) -> bool {
        a.0 < self.symbols.len()
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|a| !self.contains(**a)) {
            Some(a) => Err(Error::Domain(format!("#{}", a.0))),
            None => Ok(()),
        }
    }

    pub fn word_from_symbols<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Word> {
        symbols.iter().map(|s| self.letter(s.as_ref())).collect()
    }

    /// Parse a word written either as whitespace-separated symbols or, when a
    /// token is not itself a symbol, as a run of single-character symbols.
    /// `"0 1 2"` and `"012"` read the same over `{0, 1, 2}`.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Word::empty();
        for token in text.split_whitespace() {
            if let Ok(a) = self.letter(token) {
                out.push(a);
                continue;
            }
            let mut buf = [0u8; 4];
            for c in token.chars() {
                out.push(self.letter(c.encode_utf8(&mut buf))?);
            }
        }
        Ok(out)
    }

    pub fn symbols_of(&self, w: &[Letter]) -> Vec<String> {
        w.iter().map(|&a| self.symbols[a.0].clone()).collect()
    }

    /// Human-readable form: symbols juxtaposed when they are all one
    /// character long, space separated otherwise. The empty word is `ε`.
    pub fn render(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            " "
        };
        w.iter()
            .map(|&a| self.symbols[a.0].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Sub-alphabet keeping `keep` (in ascending id order), plus the map from
    /// old ids to new letters.
    pub(crate) fn restrict(&self, keep: &[Letter]) -> Result<(Alphabet, Vec<Option<Letter>>)> {
        let mut map = vec![None; self.len()];
        let mut symbols = Vec::with_capacity(keep.len());
        for (new, &old) in keep.iter().enumerate() {
            map[old.0] = Some(Letter(new));
            symbols.push(self.symbols[old.0].clone());
        }
        Ok((Alphabet::new(symbols)?, map))
    }
}
