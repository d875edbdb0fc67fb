//! Text ingestion. Char mode maps onto a fixed 30-symbol alphabet
//! (a–z, space, period, comma, apostrophe); word mode keeps the most
//! frequent `vocab_size` words and funnels the rest into a reserved
//! out-of-vocabulary id.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::path::Path;

/// Fixed char-mode alphabet; letters first so ids 0..26 are a..z.
pub const CHAR_ALPHABET: [char; 30] = [
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r',
    's', 't', 'u', 'v', 'w', 'x', 'y', 'z', ' ', '.', ',', '\'',
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenMode {
    Char,
    Word,
}

impl TokenMode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "char" => Ok(TokenMode::Char),
            "word" => Ok(TokenMode::Word),
            other => Err(Error::invalid("token_mode", format!("unknown mode '{}'", other))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub mode: TokenMode,
    tokens: Vec<u32>,
    /// id -> surface form. In word mode the last entry is the OOV bucket.
    symbols: Vec<String>,
    vocab_size: usize,
}

impl Corpus {
    pub fn tokens(&self) -> &[u32] {
        &self.tokens
    }

    /// Number of real symbol ids; in-vocabulary tokens are < vocab_size.
    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Word mode reserves id == vocab_size for out-of-vocabulary words.
    pub fn oov_id(&self) -> Option<u32> {
        match self.mode {
            TokenMode::Char => None,
            TokenMode::Word => Some(self.vocab_size as u32),
        }
    }

    pub fn symbol(&self, id: u32) -> &str {
        &self.symbols[id as usize]
    }

    /// Per-symbol occurrence counts over the in-vocabulary ids.
    pub fn unigram_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.vocab_size];
        for &t in &self.tokens {
            if (t as usize) < self.vocab_size {
                counts[t as usize] += 1;
            }
        }
        counts
    }
}

pub fn load_corpus(path: &Path, mode: TokenMode, vocab_size: usize) -> Result<Corpus> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    corpus_from_text(&text, mode, vocab_size)
}

/// Same construction from in-memory text (tests and the generator use it).
pub fn corpus_from_text(text: &str, mode: TokenMode, vocab_size: usize) -> Result<Corpus> {
    match mode {
        TokenMode::Char => char_corpus(text),
        TokenMode::Word => word_corpus(text, vocab_size),
    }
}

fn char_corpus(text: &str) -> Result<Corpus> {
    let mut id_of = HashMap::new();
    for (i, &c) in CHAR_ALPHABET.iter().enumerate() {
        id_of.insert(c, i as u32);
    }
    let space = id_of[&' '];
    let mut tokens: Vec<u32> = Vec::with_capacity(text.len());
    for raw in text.chars() {
        let c = if raw.is_whitespace() {
            ' '
        } else {
            let mut lowered = raw.to_lowercase();
            match lowered.next() {
                Some(l) => l,
                None => continue,
            }
        };
        if let Some(&id) = id_of.get(&c) {
            if id == space && tokens.last() == Some(&space) {
                continue; // collapse whitespace runs
            }
            tokens.push(id);
        }
    }
    if tokens.is_empty() {
        return Err(Error::invalid("load_corpus", "empty corpus after normalization"));
    }
    Ok(Corpus {
        mode: TokenMode::Char,
        tokens,
        symbols: CHAR_ALPHABET.iter().map(|c| c.to_string()).collect(),
        vocab_size: CHAR_ALPHABET.len(),
    })
}

fn word_corpus(text: &str, vocab_size: usize) -> Result<Corpus> {
    if vocab_size == 0 {
        return Err(Error::invalid("load_corpus", "vocab_size must be positive"));
    }
    let lowered = text.to_lowercase();
    let words: Vec<&str> = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect();
    if words.is_empty() {
        return Err(Error::invalid("load_corpus", "empty corpus after tokenization"));
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for &w in &words {
        *counts.entry(w).or_insert(0) += 1;
    }
    // Rank by count descending, ties alphabetically, for a deterministic table.
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.truncate(vocab_size);

    let mut id_of: HashMap<&str, u32> = HashMap::new();
    let mut symbols: Vec<String> = Vec::with_capacity(ranked.len() + 1);
    for (i, &(w, _)) in ranked.iter().enumerate() {
        id_of.insert(w, i as u32);
        symbols.push(w.to_string());
    }
    let oov = symbols.len() as u32;
    symbols.push("<oov>".to_string());

    let tokens: Vec<u32> = words.iter().map(|w| id_of.get(w).copied().unwrap_or(oov)).collect();
    Ok(Corpus { mode: TokenMode::Word, tokens, symbols, vocab_size: oov as usize })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_mode_folds_case() {
        let c = corpus_from_text("AbC", TokenMode::Char, 0).unwrap();
        assert_eq!(c.tokens(), &[0, 1, 2]);
        assert_eq!(c.vocab_size(), 30);
    }

    #[test]
    fn char_mode_collapses_whitespace_and_drops_foreign_chars() {
        let c = corpus_from_text("a \t\n b;8c", TokenMode::Char, 0).unwrap();
        // ';' and '8' are dropped, the whitespace run becomes one space.
        let space = 26u32;
        assert_eq!(c.tokens(), &[0, space, 1, 2]);
    }

    #[test]
    fn word_mode_keeps_top_words_and_reserves_oov() {
        let c = corpus_from_text("a a b b b c", TokenMode::Word, 2).unwrap();
        assert_eq!(c.vocab_size(), 2);
        assert_eq!(c.symbol(0), "b");
        assert_eq!(c.symbol(1), "a");
        assert_eq!(c.oov_id(), Some(2));
        assert_eq!(c.tokens(), &[1, 1, 0, 0, 0, 2]);
    }

    #[test]
    fn same_text_twice_gives_identical_corpus() {
        let text = "the cat sat on the mat. the dog ran.";
        let a = corpus_from_text(text, TokenMode::Word, 5).unwrap();
        let b = corpus_from_text(text, TokenMode::Word, 5).unwrap();
        assert_eq!(a.tokens(), b.tokens());
        assert_eq!(a.vocab_size(), b.vocab_size());
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(corpus_from_text("123456", TokenMode::Char, 0).is_err());
        assert!(corpus_from_text("", TokenMode::Word, 10).is_err());
    }
}
