//! Shared fixtures for the benchmark targets.

use word_measures::{CyclicWord, GraphMorphism, MultiCoreGraph, Word};

/// Rank-two words of increasing difficulty for the exact pipeline.
pub const WORDS: [&str; 4] = ["xyXY", "xxyy", "xyxYXy", "xyXYxyXY"];

pub fn word(text: &str) -> Word {
    Word::parse(text, 2).expect("fixture words parse")
}

/// The cycle of `text` mapped onto the rank-two bouquet.
pub fn cycle_to_bouquet(text: &str) -> GraphMorphism {
    let cycle = MultiCoreGraph::cycle(&CyclicWord::parse(text, 2).expect("fixture words parse"));
    GraphMorphism::to_bouquet(&cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        for w in WORDS {
            assert!(!word(w).is_identity());
            assert!(cycle_to_bouquet(w).is_surjective());
        }
    }
}
