//! The OCR task sources: a label file made by consistently replacing each
//! letter of a char corpus with a digit, and an image sequence replacing
//! each digit with a random same-class training image.

use super::corpus::{Corpus, TokenMode};
use super::mnist::MnistSet;
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct LabelFile {
    pub digits: Vec<u8>,
    /// letter id (0..26) -> digit; drawn once per seed, many-to-one.
    pub letter_map: [u8; 26],
    pub seed: u64,
}

/// Keep only the alphabetic characters of the corpus and push them
/// through a consistent random letter→digit map.
pub fn make_label_file(corpus: &Corpus, seed: u64) -> Result<LabelFile> {
    if corpus.mode != TokenMode::Char {
        return Err(Error::invalid("make_label_file", "corpus must be in char mode"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut letter_map = [0u8; 26];
    for slot in letter_map.iter_mut() {
        *slot = rng.random_range(0..10u8);
    }
    // Letter ids are 0..26 by alphabet construction.
    let digits: Vec<u8> = corpus
        .tokens()
        .iter()
        .filter(|&&t| t < 26)
        .map(|&t| letter_map[t as usize])
        .collect();
    if digits.is_empty() {
        return Err(Error::invalid("make_label_file", "corpus contains no letters"));
    }
    Ok(LabelFile { digits, letter_map, seed })
}

#[derive(Debug, Clone)]
pub struct ImageSequence {
    /// Training-set image indices, aligned one-to-one with the label file.
    pub indices: Vec<u32>,
}

pub fn make_image_sequence(
    label_file: &LabelFile,
    train: &MnistSet,
    seed: u64,
) -> Result<ImageSequence> {
    let by_class = train.class_index();
    for digit in 0..10u8 {
        if label_file.digits.contains(&digit) && by_class[digit as usize].is_empty() {
            return Err(Error::invalid(
                "make_image_sequence",
                format!("training set has no images of digit {}", digit),
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = label_file
        .digits
        .iter()
        .map(|&d| {
            let pool = &by_class[d as usize];
            pool[rng.random_range(0..pool.len())]
        })
        .collect();
    Ok(ImageSequence { indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::corpus::corpus_from_text;
    use crate::data::mnist::IMAGE_PIXELS;

    fn corpus() -> Corpus {
        corpus_from_text(
            "on the origin of species, by means of natural selection.",
            TokenMode::Char,
            0,
        )
        .unwrap()
    }

    fn tiny_train() -> MnistSet {
        // One flat image per digit class.
        let mut images = Vec::new();
        let mut labels = Vec::new();
        for d in 0..10u8 {
            images.extend(std::iter::repeat(d as f32 / 10.0).take(IMAGE_PIXELS));
            labels.push(d);
        }
        MnistSet::new(images, labels).unwrap()
    }

    #[test]
    fn digits_stay_in_range_and_map_is_consistent() {
        let lf = make_label_file(&corpus(), 4).unwrap();
        assert!(lf.digits.iter().all(|&d| d < 10));
        // Reapplying the map by hand reproduces the file.
        let again: Vec<u8> = corpus()
            .tokens()
            .iter()
            .filter(|&&t| t < 26)
            .map(|&t| lf.letter_map[t as usize])
            .collect();
        assert_eq!(lf.digits, again);
    }

    #[test]
    fn image_sequence_matches_labels() {
        let lf = make_label_file(&corpus(), 4).unwrap();
        let train = tiny_train();
        let seq = make_image_sequence(&lf, &train, 9).unwrap();
        assert_eq!(seq.indices.len(), lf.digits.len());
        for (&idx, &d) in seq.indices.iter().zip(&lf.digits) {
            assert_eq!(train.label(idx as usize), d);
        }
    }

    #[test]
    fn different_seeds_differ_in_map_but_share_marginals_up_to_the_map() {
        let c = corpus();
        let a = make_label_file(&c, 1).unwrap();
        let b = make_label_file(&c, 2).unwrap();
        assert_ne!(a.letter_map, b.letter_map);
        // Letter counts are identical, so the digit histogram of each file
        // equals the letter histogram pushed through its own map.
        let letter_counts: Vec<u64> = {
            let mut counts = vec![0u64; 26];
            for &t in c.tokens() {
                if t < 26 {
                    counts[t as usize] += 1;
                }
            }
            counts
        };
        for lf in [&a, &b] {
            let mut expect = vec![0u64; 10];
            for (letter, &count) in letter_counts.iter().enumerate() {
                expect[lf.letter_map[letter] as usize] += count;
            }
            let mut got = vec![0u64; 10];
            for &d in &lf.digits {
                got[d as usize] += 1;
            }
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn corpus_without_letters_is_an_error() {
        let c = corpus_from_text(". , ' .", TokenMode::Char, 0).unwrap();
        assert!(make_label_file(&c, 0).is_err());
    }
}
