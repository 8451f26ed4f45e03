//! Loading the bundled intensity lexicon, applying the three stoplists, and
//! inspecting pair-exclusive views.
//!
//! ```bash
//! cargo run -p granulate --example lexicon_views
//! ```

use std::path::Path;

use granulate::lexicon::{
    load_stoplist, Emotion, EmotionLexicon, RemovalReason, ALL_EMOTIONS,
};

fn main() -> granulate::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut lexicon = EmotionLexicon::load(&data.join("lexicon.tsv"))?;
    println!("raw lexicon: {} terms", lexicon.n_terms());
    for e in ALL_EMOTIONS {
        println!("  {e:<13} {} terms", lexicon.term_count(e));
    }

    let stoplists = [
        load_stoplist(&data.join("stopwords_common.txt"), RemovalReason::CommonStopword)?,
        load_stoplist(&data.join("stopwords_domain.txt"), RemovalReason::DomainStopword)?,
        load_stoplist(&data.join("stopwords_mhc.txt"), RemovalReason::MhcTerm)?,
    ];
    let report = lexicon.apply_stoplists(&stoplists);
    println!(
        "\nafter stoplists: {} terms ({} removed, {} bigrams suppressed, {} listed terms absent)",
        lexicon.n_terms(),
        report.removed,
        report.suppressed_bigrams,
        report.not_in_lexicon.len()
    );
    for (term, reason) in lexicon.removed_terms().iter().take(5) {
        println!("  removed {term:?} ({})", reason.as_str());
    }

    let view = lexicon.pair_exclusive(Emotion::Anger, Emotion::Fear)?;
    println!(
        "\nanger-fear view: {} shared terms dropped, {} anger-exclusive, {} fear-exclusive",
        view.n_common,
        view.a_exclusive.len(),
        view.b_exclusive.len()
    );
    Ok(())
}
