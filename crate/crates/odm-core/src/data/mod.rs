//! Deterministic construction of every task: text corpora and symbol
//! vocabularies, substitution ciphers, bag-of-n sampling, IDX image sets,
//! pixel permutation, the OCR label file / image sequence, and the
//! synthetic sources that generate corpus text and digit images locally.

pub mod bags;
pub mod cipher;
pub mod corpus;
pub mod labelfile;
pub mod mnist;
pub mod perm;
pub mod synth;

pub use bags::sample_bags;
pub use cipher::{frequency_baseline, make_cipher, mapping_accuracy, CipherTask, SymbolMap};
pub use corpus::{load_corpus, Corpus, TokenMode, CHAR_ALPHABET};
pub use labelfile::{make_image_sequence, make_label_file, ImageSequence, LabelFile};
pub use mnist::{load_idx, write_idx, MnistSet};
pub use perm::PermutationTask;
