use std::fmt;

use serde::{Deserialize, Serialize};

/// A word in the generators of a group: a sequence of `(generator, exponent)`
/// syllables. Words are plain data; normal forms are the business of the
/// owning [`GroupOracle`](super::GroupOracle).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw syllables, dropping zero exponents and merging
    /// adjacent syllables on the same generator.
    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(syllables: I) -> Self {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![(g, 1)])
    }

    pub fn gen_pow(g: usize, e: i64) -> Self {
        Word::from_syllables([(g, e)])
    }

    /// Appends a syllable with free reduction against the current tail.
    pub fn push(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((g, e));
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free concatenation (no relations applied beyond free reduction).
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.0 {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    /// Free power; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Total exponent of each generator, for abelianization.
    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.0.iter().filter(|s| s.0 == generator).map(|s| s.1).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|s| s.0).max()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(g, e)| {
                let name = names.get(g).cloned().unwrap_or_else(|| format!("x{g}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}
