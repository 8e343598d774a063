use proptest::prelude::*;

use ursell_core::corpus::{corpus_rng, random_multigraph, random_separate_restrictions};
use ursell_core::format::Document;
use ursell_core::r_graph;

proptest! {
    #[test]
    fn text_round_trips_and_keeps_r(seed in any::<u64>()) {
        let mut rng = corpus_rng(seed);
        let g = random_multigraph(&mut rng, 5, 5, 2, true);
        let rs = random_separate_restrictions(&mut rng, &g, 1);
        let mut doc = Document::from_multigraph(&g);
        doc.restrictions = rs.items().iter().map(|r| (r.a, r.b, r.mode)).collect();
        let back = Document::parse(&doc.to_text()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(
            r_graph(&back.multigraph().unwrap(), &back.restriction_set().unwrap()).unwrap(),
            r_graph(&g, &rs).unwrap()
        );
    }

    #[test]
    fn parser_never_panics(text in "[vsemctJlp0-9 /#\n.-]{0,80}") {
        let _ = Document::parse(&text);
    }
}
