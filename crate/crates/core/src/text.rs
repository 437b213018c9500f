//! Text primitives: sentence segmentation, tokenization, stopword removal,
//! and synonym expansion.
//!
//! Everything here is a pure function over immutable inputs; the resource
//! types (stopword sets, abbreviation lists, synonym lexicons) load from
//! plain UTF-8 text files so a new language only needs new data files.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lang::LangCode;

/// A segmented sentence together with its derived token and length views.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    /// Original sentence text, surrounding whitespace trimmed.
    pub text: String,
    /// Lowercased word tokens; punctuation-only tokens are dropped.
    pub tokens: Vec<String>,
    /// Length in characters, excluding whitespace.
    pub char_len: usize,
}

impl Sentence {
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into().trim().to_string();
        let tokens = tokenize(&text);
        let char_len = text.chars().filter(|c| !c.is_whitespace()).count();
        Sentence {
            text,
            tokens,
            char_len,
        }
    }

    /// Sentence text with internal whitespace runs collapsed to single
    /// spaces, safe to write into one-sentence-per-line files.
    pub fn single_line(&self) -> String {
        self.text.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

/// Abbreviations that suppress a sentence break at a following period,
/// stored lowercase without the trailing dot ("dr", "prof", ...).
#[derive(Debug, Clone, Default)]
pub struct AbbreviationList {
    entries: BTreeSet<String>,
}

impl AbbreviationList {
    pub fn from_entries<I: IntoIterator<Item = S>, S: AsRef<str>>(entries: I) -> Self {
        let entries = entries
            .into_iter()
            .map(|e| e.as_ref().trim().trim_end_matches('.').to_lowercase())
            .filter(|e| !e.is_empty())
            .collect();
        AbbreviationList { entries }
    }

    /// One entry per line; blank lines and `#` comments ignored.
    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_entries(
            body.lines().filter(|l| !l.trim_start().starts_with('#')),
        ))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries
            .contains(&word.trim_end_matches('.').to_lowercase())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Splits plain text into sentences.
///
/// A sentence ends at a run of `.`, `!` or `?` (plus any closing quotes or
/// brackets) that is followed by whitespace and an uppercase letter, or by
/// the end of the text. A single period does not end a sentence when the
/// word before it is a known abbreviation. Concatenating the returned
/// sentence texts reproduces the input modulo whitespace.
pub fn segment_sentences(text: &str, abbrev: &AbbreviationList) -> Vec<Sentence> {
    const TERMINALS: &[char] = &['.', '!', '?'];
    const CLOSERS: &[char] = &['"', '\'', ')', ']', '\u{201d}', '\u{2019}', '\u{00bb}'];
    const OPENERS: &[char] = &['"', '\'', '(', '[', '\u{201c}', '\u{2018}', '\u{00ab}'];

    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut i = 0;

    while i < chars.len() {
        if !TERMINALS.contains(&chars[i]) {
            i += 1;
            continue;
        }
        let punct_start = i;
        while i < chars.len() && TERMINALS.contains(&chars[i]) {
            i += 1;
        }
        let mut end = i;
        while end < chars.len() && CLOSERS.contains(&chars[end]) {
            end += 1;
        }

        // A lone period after an abbreviation does not terminate.
        let is_single_period = i - punct_start == 1 && chars[punct_start] == '.';
        if is_single_period && !abbrev.is_empty() {
            let word: String = chars[start..punct_start]
                .iter()
                .rev()
                .take_while(|c| !c.is_whitespace())
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            if !word.is_empty() && abbrev.contains(&word) {
                continue;
            }
        }

        // Boundary confirmed by end-of-text or whitespace + uppercase (an
        // opening quote or bracket may precede the capital).
        let mut j = end;
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        let saw_whitespace = j > end;
        while j < chars.len() && OPENERS.contains(&chars[j]) {
            j += 1;
        }
        let at_end = j >= chars.len();
        let followed_by_upper = saw_whitespace && !at_end && chars[j].is_uppercase();
        if at_end || followed_by_upper {
            let slice: String = chars[start..end].iter().collect();
            let sentence = Sentence::new(slice);
            if !sentence.text.is_empty() {
                sentences.push(sentence);
            }
            start = end;
            i = end;
        }
    }

    if start < chars.len() {
        let tail: String = chars[start..].iter().collect();
        let sentence = Sentence::new(tail);
        if !sentence.text.is_empty() {
            sentences.push(sentence);
        }
    }

    sentences
}

/// Lowercases and splits on whitespace, trimming any non-alphanumeric
/// characters from token edges. Internal hyphens and apostrophes survive;
/// tokens that are punctuation-only are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric());
            if trimmed.is_empty() {
                None
            } else {
                Some(trimmed.to_lowercase())
            }
        })
        .collect()
}

/// Per-language stopword set; all entries lowercase.
#[derive(Debug, Clone)]
pub struct StopwordSet {
    pub lang: LangCode,
    words: BTreeSet<String>,
}

impl StopwordSet {
    pub fn empty(lang: LangCode) -> Self {
        StopwordSet {
            lang,
            words: BTreeSet::new(),
        }
    }

    pub fn from_words<I: IntoIterator<Item = S>, S: AsRef<str>>(lang: LangCode, words: I) -> Self {
        let words = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        StopwordSet { lang, words }
    }

    /// One word per line; blank lines and `#` comments ignored.
    pub fn from_file(lang: LangCode, path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_words(
            lang,
            body.lines().filter(|l| !l.trim_start().starts_with('#')),
        ))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Removes every stopword from `tokens`, preserving order.
pub fn remove_stopwords(tokens: &[String], stops: &StopwordSet) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| !stops.contains(t))
        .cloned()
        .collect()
}

/// Word → synonym set, stored exactly as given (symmetry is not assumed).
#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl SynonymLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, word: &str, synonym: &str) {
        let word = word.to_lowercase();
        let synonym = synonym.to_lowercase();
        if word == synonym {
            return; // a token is never its own synonym
        }
        self.entries.entry(word).or_default().insert(synonym);
    }

    /// TSV format: `word<TAB>syn1,syn2,...` per line.
    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lex = SynonymLexicon::new();
        for (idx, line) in body.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (word, syns) = line.split_once('\t').ok_or_else(|| Error::ParseFile {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: "expected `word<TAB>syn1,syn2,...`".to_string(),
            })?;
            for syn in syns.split(',') {
                let syn = syn.trim();
                if !syn.is_empty() {
                    lex.insert(word.trim(), syn);
                }
            }
        }
        Ok(lex)
    }

    pub fn synonyms(&self, token: &str) -> impl Iterator<Item = &str> {
        self.entries
            .get(token)
            .into_iter()
            .flat_map(|s| s.iter().map(|s| s.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Enumerates the sentences obtainable by substituting each token with
/// itself or one of its synonyms.
///
/// Variants are generated in a fixed order — the untouched sentence first,
/// then a mixed-radix sweep where the leftmost position varies fastest and
/// each position cycles through its synonyms in sorted order — deduplicated,
/// and truncated to `max_variants`.
pub fn expand_synonyms(
    tokens: &[String],
    lex: &SynonymLexicon,
    max_variants: usize,
) -> Vec<Vec<String>> {
    assert!(max_variants >= 1, "max_variants must be at least 1");

    // Options per position: original token first, then sorted synonyms.
    let options: Vec<Vec<&str>> = tokens
        .iter()
        .map(|t| {
            let mut opts = vec![t.as_str()];
            opts.extend(lex.synonyms(t));
            opts
        })
        .collect();

    let mut variants: Vec<Vec<String>> = Vec::new();
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut counters = vec![0usize; options.len()];

    loop {
        let variant: Vec<String> = counters
            .iter()
            .zip(&options)
            .map(|(&c, opts)| opts[c].to_string())
            .collect();
        if seen.insert(variant.clone()) {
            variants.push(variant);
            if variants.len() >= max_variants {
                break;
            }
        }

        // Odometer step, leftmost digit fastest.
        let mut pos = 0;
        loop {
            if pos >= counters.len() {
                return variants; // full sweep finished
            }
            counters[pos] += 1;
            if counters[pos] < options[pos].len() {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
    }

    variants
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lang(code: &str) -> LangCode {
        LangCode::new(code).unwrap()
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn segments_empty_input_to_nothing() {
        assert!(segment_sentences("", &AbbreviationList::default()).is_empty());
        assert!(segment_sentences("  \n ", &AbbreviationList::default()).is_empty());
    }

    #[test]
    fn segments_two_plain_sentences() {
        let got = segment_sentences("It is origami. This is origami.", &AbbreviationList::default());
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].text, "It is origami.");
        assert_eq!(got[1].text, "This is origami.");
    }

    #[test]
    fn abbreviation_does_not_break_sentence() {
        let abbrev = AbbreviationList::from_entries(["Dr."]);
        let got = segment_sentences("Dr. Smith left. He ran.", &abbrev);
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].text, "Dr. Smith left.");
        assert_eq!(got[1].text, "He ran.");
    }

    #[test]
    fn trailing_sentence_without_terminal_is_kept() {
        let got = segment_sentences("One done. And then silence", &AbbreviationList::default());
        assert_eq!(got.len(), 2);
        assert_eq!(got[1].text, "And then silence");
    }

    #[test]
    fn multi_punctuation_and_closers() {
        let got = segment_sentences("Really?! \"Sure.\" Fine.", &AbbreviationList::default());
        let texts: Vec<&str> = got.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, ["Really?!", "\"Sure.\"", "Fine."]);
    }

    #[test]
    fn lowercase_follower_does_not_split() {
        let got = segment_sentences("approx. twenty people came.", &AbbreviationList::default());
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn tokenize_basic_examples() {
        assert_eq!(tokenize("It is origami."), toks(&["it", "is", "origami"]));
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(
            tokenize("Kupiłem sobie nowy samochód."),
            toks(&["kupiłem", "sobie", "nowy", "samochód"])
        );
    }

    #[test]
    fn tokenize_keeps_internal_marks_drops_bare_punct() {
        assert_eq!(
            tokenize("well-known 'words' -- don't !"),
            toks(&["well-known", "words", "don't"])
        );
    }

    #[test]
    fn char_len_excludes_whitespace() {
        let s = Sentence::new("ab cd  e");
        assert_eq!(s.char_len, 5);
    }

    #[test]
    fn remove_stopwords_examples() {
        let stops = StopwordSet::from_words(lang("en"), ["it", "is"]);
        assert_eq!(
            remove_stopwords(&toks(&["it", "is", "origami"]), &stops),
            toks(&["origami"])
        );
        let empty = StopwordSet::empty(lang("en"));
        assert_eq!(
            remove_stopwords(&toks(&["origami"]), &empty),
            toks(&["origami"])
        );
        let the = StopwordSet::from_words(lang("en"), ["the"]);
        assert!(remove_stopwords(&toks(&["the", "the"]), &the).is_empty());
    }

    #[test]
    fn expand_synonyms_paper_pair() {
        let mut lex = SynonymLexicon::new();
        lex.insert("will", "would");
        let got = expand_synonyms(&toks(&["i", "will", "call"]), &lex, 10);
        assert_eq!(got.len(), 2);
        assert_eq!(got[0], toks(&["i", "will", "call"]));
        assert_eq!(got[1], toks(&["i", "would", "call"]));
    }

    #[test]
    fn expand_synonyms_empty_lexicon_is_identity() {
        let got = expand_synonyms(&toks(&["a", "b"]), &SynonymLexicon::new(), 8);
        assert_eq!(got, vec![toks(&["a", "b"])]);
    }

    #[test]
    fn expand_synonyms_truncates_to_max() {
        let mut lex = SynonymLexicon::new();
        for (w, s1, s2) in [("a", "x", "y"), ("b", "u", "v"), ("c", "p", "q")] {
            lex.insert(w, s1);
            lex.insert(w, s2);
        }
        // 3 options at each of 3 positions: 27 total, truncated to 5.
        let got = expand_synonyms(&toks(&["a", "b", "c"]), &lex, 5);
        assert_eq!(got.len(), 5);
        assert_eq!(got[0], toks(&["a", "b", "c"]));
    }

    #[test]
    fn synonym_lexicon_never_lists_self() {
        let mut lex = SynonymLexicon::new();
        lex.insert("cat", "cat");
        lex.insert("cat", "feline");
        let syns: Vec<&str> = lex.synonyms("cat").collect();
        assert_eq!(syns, ["feline"]);
    }

    proptest! {
        #[test]
        fn tokenize_is_idempotent_on_its_own_output(raw in "\\PC{0,80}") {
            let once = tokenize(&raw);
            let twice = tokenize(&once.join(" "));
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn segmentation_preserves_non_whitespace_chars(raw in "[a-zA-Z .!?]{0,120}") {
            let joined: String = segment_sentences(&raw, &AbbreviationList::default())
                .iter()
                .map(|s| s.text.clone())
                .collect();
            let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
            prop_assert_eq!(strip(&joined), strip(&raw));
        }

        #[test]
        fn stopword_removal_shrinks_and_excludes(words in proptest::collection::vec("[a-e]{1,3}", 0..20)) {
            let stops = StopwordSet::from_words(LangCode::new("en").unwrap(), ["a", "ab", "abc"]);
            let tokens: Vec<String> = words;
            let out = remove_stopwords(&tokens, &stops);
            prop_assert!(out.len() <= tokens.len());
            prop_assert!(out.iter().all(|t| !stops.contains(t)));
        }

        #[test]
        fn expand_synonyms_bounds(words in proptest::collection::vec("[a-c]{1,2}", 1..6), max in 1usize..20) {
            let mut lex = SynonymLexicon::new();
            lex.insert("a", "z");
            lex.insert("b", "y");
            let tokens: Vec<String> = words;
            let got = expand_synonyms(&tokens, &lex, max);
            prop_assert!(!got.is_empty());
            prop_assert!(got.len() <= max);
            prop_assert_eq!(got[0].clone(), tokens);
        }
    }
}
