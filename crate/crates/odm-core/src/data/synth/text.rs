//! Seeded corpus generator. Sentences draw function words globally and
//! content words through a topic layer, so every content word gets a
//! distinctive co-occurrence signature on top of its Zipf-ranked
//! frequency. That structure is what makes symbol mappings identifiable
//! beyond raw frequency matching.

use super::words::{CONTENT_WORDS, FUNCTION_WORDS, RARE_LETTER_WORDS};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOPICS: usize = 60;
/// Probability that a sentence slot is a function word.
const FUNCTION_RATE: f64 = 0.42;
/// Probability of drawing from the rare-letter floor instead of a topic.
const RARE_RATE: f64 = 0.05;

struct WeightedTable {
    items: Vec<usize>,
    cdf: Vec<f64>,
}

impl WeightedTable {
    fn new(items: Vec<usize>, weights: &[f64]) -> Self {
        let mut cdf = Vec::with_capacity(items.len());
        let mut acc = 0.0;
        for &i in &items {
            acc += weights[i];
            cdf.push(acc);
        }
        WeightedTable { items, cdf }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c < u);
        self.items[idx.min(self.items.len() - 1)]
    }
}

/// Deterministic English-like text of at least `target_bytes` bytes.
pub fn generate_corpus_text(seed: u64, target_bytes: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Zipf-ish global weights over the content list order.
    let content_weights: Vec<f64> =
        (0..CONTENT_WORDS.len()).map(|r| 1.0 / (r as f64 + 12.0).powf(0.85)).collect();
    let function_weights: Vec<f64> =
        (0..FUNCTION_WORDS.len()).map(|r| 1.0 / (r as f64 + 2.0).powf(1.05)).collect();

    // Each content word joins 2-3 topics; each topic owns a weighted table
    // over its members.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); TOPICS];
    for w in 0..CONTENT_WORDS.len() {
        let k = 2 + (rng.random_range(0..2usize));
        let mut chosen = Vec::with_capacity(k);
        while chosen.len() < k {
            let t = rng.random_range(0..TOPICS);
            if !chosen.contains(&t) {
                chosen.push(t);
                members[t].push(w);
            }
        }
    }
    let topic_tables: Vec<WeightedTable> =
        members.into_iter().map(|m| WeightedTable::new(m, &content_weights)).collect();
    let function_table =
        WeightedTable::new((0..FUNCTION_WORDS.len()).collect(), &function_weights);

    let mut out = String::with_capacity(target_bytes + 256);
    let mut sentences_in_paragraph = 0usize;
    let mut paragraph_len = 8 + rng.random_range(0..7usize);
    while out.len() < target_bytes {
        let topic = rng.random_range(0..TOPICS);
        let len = 4 + rng.random_range(0..11usize);
        for i in 0..len {
            let roll: f64 = rng.random();
            let word = if roll < FUNCTION_RATE {
                FUNCTION_WORDS[function_table.sample(&mut rng)]
            } else if roll < FUNCTION_RATE + RARE_RATE {
                RARE_LETTER_WORDS[rng.random_range(0..RARE_LETTER_WORDS.len())]
            } else {
                CONTENT_WORDS[topic_tables[topic].sample(&mut rng)]
            };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(word);
            if i + 1 < len && rng.random::<f64>() < 0.06 {
                out.push(',');
            }
        }
        // Occasional possessives keep apostrophes at a workable frequency.
        if rng.random::<f64>() < 0.13 {
            out.push_str(match rng.random_range(0..4u8) {
                0 => " of nature's kind",
                1 => " by the breeder's art",
                2 => " in the species' range",
                _ => " under the sun's heat",
            });
        }
        out.push('.');
        sentences_in_paragraph += 1;
        if sentences_in_paragraph >= paragraph_len {
            out.push('\n');
            sentences_in_paragraph = 0;
            paragraph_len = 8 + rng.random_range(0..7usize);
        } else {
            out.push(' ');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::corpus::{corpus_from_text, TokenMode};

    #[test]
    fn generation_is_deterministic() {
        let a = generate_corpus_text(3, 40_000);
        let b = generate_corpus_text(3, 40_000);
        assert_eq!(a, b);
        let c = generate_corpus_text(4, 40_000);
        assert_ne!(a, c);
    }

    #[test]
    fn meets_target_size_and_tokenizes_cleanly() {
        let text = generate_corpus_text(1, 200_000);
        assert!(text.len() >= 200_000);
        let chars = corpus_from_text(&text, TokenMode::Char, 0).unwrap();
        assert!(chars.tokens().len() > 150_000);
        let words = corpus_from_text(&text, TokenMode::Word, 1000).unwrap();
        assert_eq!(words.vocab_size(), 1000);
        // The embedded vocabulary is large enough that a 1000-word table
        // leaves some words out-of-vocabulary.
        let oov = words.oov_id().unwrap();
        assert!(words.tokens().iter().any(|&t| t == oov));
    }

    #[test]
    fn top_vocabulary_words_all_occur_reasonably_often() {
        let text = generate_corpus_text(2, 2_000_000);
        let words = corpus_from_text(&text, TokenMode::Word, 1000).unwrap();
        let counts = words.unigram_counts();
        let min = counts.iter().min().unwrap();
        assert!(*min >= 30, "rarest top-1000 word occurs only {} times", min);
    }
}
