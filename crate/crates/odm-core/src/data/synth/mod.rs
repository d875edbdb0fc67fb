//! Local stand-ins for the external datasets: a seeded English-like corpus
//! generator and a procedural digit renderer. Both are pure functions of
//! their seed.

mod digits;
mod text;
mod words;

pub use digits::generate_digit_set;
pub use text::generate_corpus_text;
