//! Social-media tokenization and greedy lexicon matching.
//!
//! ```bash
//! cargo run -p granulate --example tokenize_text
//! ```

use granulate::tokenizer::{match_terms, tokenize, MatchVocab};

fn main() {
    for text in [
        "I can't sleep :(",
        "@ana #blessed https://t.co/x what a day!!!",
        "Panic attack before the meeting, full of dread",
    ] {
        println!("{text}");
        println!("  tokens: {:?}", tokenize(text));
    }

    // bigrams win over their parts; matching is case-insensitive
    let vocab = MatchVocab::from_terms(["panic attack", "panic", "dread", "good", "good morning"]);
    let tokens = tokenize("Panic attack at dawn but good morning anyway, no panic now");
    let matches = match_terms(&tokens, &vocab, true);
    println!("\nmatches over {:?}:", tokens);
    for m in matches {
        println!("  position {:>2}  {:?}", m.position, m.term);
    }
}
