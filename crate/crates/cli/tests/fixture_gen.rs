//! Regenerates the bundled mining fixture under `fixtures/mining/`.
//!
//! Run manually after changing the generation logic:
//!
//! ```text
//! cargo test -p bitext-cli --test fixture_gen -- --ignored
//! ```
//!
//! The fixture is deterministic (fixed RNG seed) and self-validating: the
//! generator asserts the separation margins the acceptance suite relies on
//! (planted pairs score high against their true counterpart and low against
//! everything else) before writing anything.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::prelude::*;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use bitext_core::filter::{
    overlap_similarity, ratio_similarity, synonym_similarity,
};
use bitext_core::text::{
    remove_stopwords, segment_sentences, tokenize, AbbreviationList, StopwordSet, SynonymLexicon,
};
use bitext_core::LangCode;

/// Core bilingual vocabulary; the gloss lexicon and all TM-exact planted
/// sentences draw from these.
const VOCAB: &[(&str, &str)] = &[
    ("kot", "cat"),
    ("pies", "puppy"),
    ("dom", "home"),
    ("woda", "water"),
    ("ogień", "fire"),
    ("ziemia", "ground"),
    ("niebo", "sky"),
    ("drzewo", "tree"),
    ("kwiat", "flower"),
    ("rzeka", "river"),
    ("góra", "mountain"),
    ("morze", "sea"),
    ("słońce", "sun"),
    ("księżyc", "moon"),
    ("gwiazda", "celestial"),
    ("droga", "road"),
    ("miasto", "city"),
    ("wieś", "village"),
    ("chleb", "bread"),
    ("mleko", "milk"),
    ("jabłko", "apple"),
    ("stary", "ancient"),
    ("nowy", "recent"),
    ("duży", "sizable"),
    ("mały", "little"),
    ("zimny", "chilly"),
    ("ciepły", "warm"),
    ("szybki", "speedy"),
    ("wolny", "slow"),
    ("jasny", "bright"),
    ("ciemny", "dark"),
    ("pije", "drinks"),
    ("je", "eats"),
    ("widzi", "sees"),
    ("buduje", "builds"),
    ("niesie", "carries"),
    ("śpiewa", "sings"),
    ("czyta", "reads"),
    ("pisze", "writes"),
    ("biegnie", "runs"),
    ("płynie", "flows"),
    ("rośnie", "grows"),
    ("świeci", "shines"),
    ("pada", "falls"),
    ("leży", "rests"),
    ("okno", "window"),
    ("most", "bridge"),
    ("las", "forest"),
    ("pole", "field"),
    ("ptak", "bird"),
    ("ryba", "fish"),
    ("koń", "stallion"),
    ("zima", "winter"),
    ("lato", "summer"),
    ("ranek", "morning"),
    ("wieczór", "evening"),
];

/// Source-side noise words: never in the lexicon or TM, so their lines pass
/// through translation untouched and share nothing with the target side.
const PL_NOISE: &[&str] = &[
    "żyrafa", "wydra", "jeż", "żubr", "świerszcz", "szerszeń", "jaszczurka", "wiewiórka",
    "dzięcioł", "zając", "żółw", "łoś", "borsuk", "kuna", "puszczyk", "wilga",
];

/// Target-side noise words, letter-distribution-distinct from the mapped
/// vocabulary.
const EN_NOISE: &[&str] = &[
    "quasar", "nebula", "pulsar", "meteor", "comet", "eclipse", "galaxy", "photon",
    "quark", "plasma", "cosmos", "zenith", "equinox", "axiom", "matrix", "vector",
];

struct Special {
    /// Source-language sentence (the TM key).
    pl: Vec<&'static str>,
    /// What the TM translates it to.
    trans: Vec<&'static str>,
    /// The true target sentence.
    en: Vec<&'static str>,
    /// The ladder rung expected to accept it: 1 = normalized overlap,
    /// 2 = ratio, 3 = synonym ratio.
    expect_tier: usize,
}

/// Hand-built pairs that exercise the deeper ladder rungs.
fn specials_for(doc: usize) -> Vec<Special> {
    match doc {
        // Inflection-style mismatches: word counting fails, the character
        // ratio clears it.
        3 => vec![
            Special {
                pl: vec!["starzy", "chłopcy", "piją", "zimne", "wody"],
                trans: vec!["old", "boys", "drink", "cold", "waters"],
                en: vec!["old", "boy", "drinks", "cold", "water"],
                expect_tier: 2,
            },
            Special {
                pl: vec!["młode", "dziewczyny", "czytają", "grube", "książki"],
                trans: vec!["young", "girls", "read", "thick", "books"],
                en: vec!["young", "girl", "reads", "thick", "book"],
                expect_tier: 2,
            },
        ],
        5 => vec![
            Special {
                pl: vec!["ciche", "ogrody", "kwitną", "wiosnami"],
                trans: vec!["quiet", "gardens", "bloom", "springs"],
                en: vec!["quiet", "garden", "blooms", "spring"],
                expect_tier: 2,
            },
            Special {
                pl: vec!["górskie", "strumienie", "szumią", "nocami"],
                trans: vec!["alpine", "streams", "murmur", "nights"],
                en: vec!["alpine", "stream", "murmurs", "night"],
                expect_tier: 2,
            },
        ],
        // Synonym substitutions: only the many-to-many expansion matches.
        7 => vec![
            Special {
                pl: vec!["targ", "kupno", "wielki", "piec", "wóz"],
                trans: vec!["market", "purchase", "big", "hound", "automobile"],
                en: vec!["market", "buy", "large", "dog", "car"],
                expect_tier: 3,
            },
            Special {
                pl: vec!["port", "prędki", "chata", "początek", "szczeniak"],
                trans: vec!["harbor", "quick", "dwelling", "begin", "hound"],
                en: vec!["harbor", "fast", "house", "start", "dog"],
                expect_tier: 3,
            },
        ],
        // Partially bridged pairs landing just above the synonym threshold;
        // the threshold sweep drops exactly these.
        9 => vec![
            Special {
                pl: vec!["zakup", "cyrkon"],
                trans: vec!["purchase", "zirconium"],
                en: vec!["buy", "mahogany"],
                expect_tier: 3,
            },
            Special {
                pl: vec!["starter", "chrom"],
                trans: vec!["begin", "chromium"],
                en: vec!["start", "cardamon"],
                expect_tier: 3,
            },
        ],
        _ => vec![],
    }
}

fn capitalize(sentence: &[String]) -> String {
    let joined = sentence.join(" ");
    let mut chars = joined.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str() + ".",
        None => String::new(),
    }
}

struct Doc {
    id: String,
    pl_sentences: Vec<String>,
    en_sentences: Vec<String>,
    /// (source index, target index) of every planted pair.
    truth: Vec<(usize, usize)>,
    /// TM rows contributed by this doc.
    tm: Vec<(String, String)>,
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

#[test]
#[ignore = "regenerates fixtures/mining; run explicitly when the fixture changes"]
fn regenerate_mining_fixture() {
    let root = workspace_root();
    let out = root.join("fixtures/mining");
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    let stopwords = StopwordSet::from_file(
        LangCode::new("en").unwrap(),
        &root.join("data/stopwords.en.txt"),
    )
    .unwrap();
    let synonyms = SynonymLexicon::from_file(&root.join("data/synonyms.en.tsv")).unwrap();
    let pl_abbrev = AbbreviationList::from_file(&root.join("data/abbreviations.pl.txt")).unwrap();
    let en_abbrev = AbbreviationList::from_file(&root.join("data/abbreviations.en.txt")).unwrap();

    let mut docs: Vec<Doc> = Vec::new();
    for d in 1..=20usize {
        let gloss_route = d >= 19; // no TM rows: exercises the gloss fallback
        let planted = if gloss_route { 6 } else { rng.random_range(5..=10) };

        // Sampled word-for-word parallel sentences, unique per doc.
        let mut pl_planted: Vec<Vec<String>> = Vec::new();
        let mut en_planted: Vec<Vec<String>> = Vec::new();
        let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
        while pl_planted.len() < planted {
            let len = rng.random_range(4..=7);
            let mut picks: Vec<usize> = (0..VOCAB.len()).collect();
            picks.shuffle(&mut rng);
            picks.truncate(len);
            let en: Vec<String> = picks.iter().map(|&i| VOCAB[i].1.to_string()).collect();
            if !seen.insert(en.clone()) {
                continue;
            }
            pl_planted.push(picks.iter().map(|&i| VOCAB[i].0.to_string()).collect());
            en_planted.push(en);
        }

        let specials = specials_for(d);
        let special_base = pl_planted.len();
        for s in &specials {
            pl_planted.push(s.pl.iter().map(|w| w.to_string()).collect());
            en_planted.push(s.en.iter().map(|w| w.to_string()).collect());
        }

        // Article-like texture on the target side: "the" before one noun of
        // the sampled sentences. Stopword removal must erase the difference.
        let mut en_display: Vec<Vec<String>> = en_planted.clone();
        for (k, sent) in en_display.iter_mut().enumerate() {
            if k < special_base && sent.len() >= 4 && rng.random_bool(0.5) {
                sent.insert(0, "the".to_string());
            }
        }

        let n_src_noise = rng.random_range(3..=6);
        let n_tgt_noise = rng.random_range(3..=6);
        let noise_sentence = |rng: &mut ChaCha8Rng, pool: &[&str]| -> Vec<String> {
            let len = rng.random_range(3..=5);
            let mut picks: Vec<&str> = pool.to_vec();
            picks.shuffle(rng);
            picks.truncate(len);
            picks.iter().map(|w| w.to_string()).collect()
        };
        let src_noise: Vec<Vec<String>> =
            (0..n_src_noise).map(|_| noise_sentence(&mut rng, PL_NOISE)).collect();
        let tgt_noise: Vec<Vec<String>> =
            (0..n_tgt_noise).map(|_| noise_sentence(&mut rng, EN_NOISE)).collect();

        // Shuffle both sides: target order is unrelated to source order, so
        // the planted links cross.
        let mut src_slots: Vec<Option<usize>> = (0..pl_planted.len())
            .map(Some)
            .chain((0..src_noise.len()).map(|_| None))
            .collect();
        let mut tgt_slots: Vec<Option<usize>> = (0..en_display.len())
            .map(Some)
            .chain((0..tgt_noise.len()).map(|_| None))
            .collect();
        src_slots.shuffle(&mut rng);
        tgt_slots.shuffle(&mut rng);

        let mut pl_sentences = Vec::new();
        let mut src_pos = vec![usize::MAX; pl_planted.len()];
        let mut noise_iter = src_noise.iter();
        for slot in &src_slots {
            match slot {
                Some(k) => {
                    src_pos[*k] = pl_sentences.len();
                    pl_sentences.push(capitalize(&pl_planted[*k]));
                }
                None => pl_sentences.push(capitalize(noise_iter.next().unwrap())),
            }
        }
        let mut en_sentences = Vec::new();
        let mut tgt_pos = vec![usize::MAX; en_display.len()];
        let mut noise_iter = tgt_noise.iter();
        for slot in &tgt_slots {
            match slot {
                Some(k) => {
                    tgt_pos[*k] = en_sentences.len();
                    en_sentences.push(capitalize(&en_display[*k]));
                }
                None => en_sentences.push(capitalize(noise_iter.next().unwrap())),
            }
        }

        let truth: Vec<(usize, usize)> = (0..pl_planted.len())
            .map(|k| (src_pos[k], tgt_pos[k]))
            .collect();

        // TM rows: exact translations for every planted sentence except in
        // the gloss-route docs; specials translate to their variant form.
        let mut tm = Vec::new();
        if !gloss_route {
            for k in 0..pl_planted.len() {
                let source = capitalize(&pl_planted[k]);
                let translation = if k < special_base {
                    capitalize(&en_planted[k])
                } else {
                    capitalize(
                        &specials[k - special_base]
                            .trans
                            .iter()
                            .map(|w| w.to_string())
                            .collect::<Vec<_>>(),
                    )
                };
                tm.push((source, translation));
            }
        }

        docs.push(Doc {
            id: format!("{d:04}-fixture"),
            pl_sentences,
            en_sentences,
            truth,
            tm,
        });

        // Margin checks: the intended tier accepts the true pair, nothing
        // else comes close.
        let doc = docs.last().unwrap();
        let prep = |line: &str| remove_stopwords(&tokenize(line), &stopwords);
        for (k, &(si, ti)) in doc.truth.iter().enumerate() {
            let trans_line = if gloss_route || k < special_base {
                // Gloss route and sampled TM rows both yield the exact
                // word-for-word translation.
                capitalize(&en_planted[k])
            } else {
                capitalize(
                    &specials[k - special_base]
                        .trans
                        .iter()
                        .map(|w| w.to_string())
                        .collect::<Vec<_>>(),
                )
            };
            let a = prep(&trans_line);
            let a_joined = a.join(" ");
            let expect_tier = if k < special_base {
                1
            } else {
                specials[k - special_base].expect_tier
            };

            for (j, tgt_line) in doc.en_sentences.iter().enumerate() {
                let b = prep(tgt_line);
                let b_joined = b.join(" ");
                let t1 = overlap_similarity(&a, &b).value();
                if j == ti {
                    match expect_tier {
                        1 => assert_eq!(t1, 1.0, "doc {d} pair {k}: tier1 must be exact"),
                        2 => {
                            assert!(t1 < 0.65, "doc {d} pair {k}: tier1 {t1} too high");
                            let t2 = ratio_similarity(&a_joined, &b_joined).value();
                            assert!(t2 >= 0.65, "doc {d} pair {k}: tier2 {t2} too low");
                        }
                        3 => {
                            assert!(t1 < 0.65, "doc {d} pair {k}: tier1 {t1} too high");
                            let t2 = ratio_similarity(&a_joined, &b_joined).value();
                            assert!(t2 < 0.57, "doc {d} pair {k}: tier2 {t2} too high");
                            let t3 = synonym_similarity(&a, &b, &synonyms, 64).value();
                            assert!(t3 >= 0.61, "doc {d} pair {k}: tier3 {t3} too low");
                        }
                        _ => unreachable!(),
                    }
                } else {
                    assert!(t1 <= 0.65, "doc {d} pair {k} vs {j}: tier1 {t1} too high");
                    // Lines that fail tier 1 descend the ladder, so for them
                    // no wrong candidate may clear the lower rungs either.
                    // Tier-1 pairs never descend: their exact match always
                    // accepts first.
                    if expect_tier >= 2 {
                        let t2 = ratio_similarity(&a_joined, &b_joined).value();
                        assert!(t2 <= 0.58, "doc {d} pair {k} vs {j}: tier2 {t2} too high");
                        let t3 = synonym_similarity(&a, &b, &synonyms, 64).value();
                        assert!(t3 <= 0.58, "doc {d} pair {k} vs {j}: tier3 {t3} too high");
                    }
                }
            }
        }
        // Noise lines (pass-through source text) must miss every target.
        for (si, line) in doc.pl_sentences.iter().enumerate() {
            if doc.truth.iter().any(|&(s, _)| s == si) {
                continue;
            }
            let a = prep(line);
            let a_joined = a.join(" ");
            for tgt_line in &doc.en_sentences {
                let b = prep(tgt_line);
                let t1 = overlap_similarity(&a, &b).value();
                let t2 = ratio_similarity(&a_joined, &b.join(" ")).value();
                let t3 = synonym_similarity(&a, &b, &synonyms, 64).value();
                assert!(
                    t1 <= 0.58 && t2 <= 0.58 && t3 <= 0.58,
                    "doc {d} noise line {si} too similar ({t1} {t2} {t3})"
                );
            }
        }
    }

    // Band pairs in doc 9 must sit strictly inside (0.6, 0.7): accepted by
    // the default ladder, dropped by the first +0.1 sweep step.
    for s in specials_for(9) {
        let a: Vec<String> = s.trans.iter().map(|w| w.to_string()).collect();
        let b: Vec<String> = s.en.iter().map(|w| w.to_string()).collect();
        let t3 = synonym_similarity(&a, &b, &synonyms, 64).value();
        assert!(
            (0.61..=0.69).contains(&t3),
            "band pair {:?} scored {t3}, outside (0.61, 0.69)",
            s.trans
        );
    }

    // Write everything.
    let corpus = out.join("corpus");
    if corpus.exists() {
        std::fs::remove_dir_all(&corpus).unwrap();
    }
    let mut tm_body = String::new();
    let mut truth_body = String::from("doc_id\tsrc_idx\ttgt_idx\n");
    for (n, doc) in docs.iter().enumerate() {
        let dir = corpus.join(&doc.id);
        std::fs::create_dir_all(&dir).unwrap();
        let paragraphs = |sents: &[String]| -> String {
            sents
                .chunks(4)
                .map(|c| c.join(" "))
                .collect::<Vec<_>>()
                .join("\n\n")
        };
        let pl_text = paragraphs(&doc.pl_sentences);
        let en_text = paragraphs(&doc.en_sentences);

        // The committed indices must match what the real segmenter sees.
        let seg_pl: Vec<String> = segment_sentences(&pl_text, &pl_abbrev)
            .iter()
            .map(|s| s.single_line())
            .collect();
        let seg_en: Vec<String> = segment_sentences(&en_text, &en_abbrev)
            .iter()
            .map(|s| s.single_line())
            .collect();
        assert_eq!(seg_pl, doc.pl_sentences, "doc {} pl segmentation drifted", doc.id);
        assert_eq!(seg_en, doc.en_sentences, "doc {} en segmentation drifted", doc.id);

        std::fs::write(dir.join(format!("{}.pl.txt", doc.id)), pl_text).unwrap();
        std::fs::write(dir.join(format!("{}.en.txt", doc.id)), en_text).unwrap();
        let meta = format!(
            concat!(
                "{{\n  \"id\": \"{id}\",\n  \"origin\": \"fixture\",\n",
                "  \"source\": {{\n    \"lang\": \"pl\",\n    \"title\": \"Dokument {n}\",\n    \"url\": \"fixture://dokument-{n}\"\n  }},\n",
                "  \"target\": {{\n    \"lang\": \"en\",\n    \"title\": \"Document {n}\",\n    \"url\": \"fixture://document-{n}\"\n  }}\n}}\n"
            ),
            id = doc.id,
            n = n + 1,
        );
        std::fs::write(dir.join(format!("{}.meta.json", doc.id)), meta).unwrap();

        for (src, trans) in &doc.tm {
            writeln!(tm_body, "{src}\t{trans}").unwrap();
        }
        for &(si, ti) in &doc.truth {
            writeln!(truth_body, "{}\t{si}\t{ti}", doc.id).unwrap();
        }
    }
    std::fs::write(out.join("tm.pl-en.tsv"), tm_body).unwrap();
    std::fs::write(out.join("ground_truth.tsv"), truth_body).unwrap();

    let mut lexicon_body = String::new();
    for (pl, en) in VOCAB {
        writeln!(lexicon_body, "{pl}\t{en}\t1.000000").unwrap();
    }
    std::fs::write(out.join("lexicon.pl-en.tsv"), lexicon_body).unwrap();

    let total: usize = docs.iter().map(|d| d.truth.len()).sum();
    println!("wrote 20 documents with {total} planted pairs");
}
