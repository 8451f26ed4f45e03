//! Social-media-aware tokenization and lexicon term matching.
//!
//! The tokenizer splits on whitespace and then peels protected entities off
//! each chunk: URLs, @-mentions, #-hashtags, and common ASCII emoticons
//! survive as single tokens, contractions stay attached, and punctuation runs
//! become their own tokens. Tokens are not lowercased; matching lowercases
//! separately so the original surface forms stay available.

use std::collections::HashSet;

/// Tokens for a sequence of utterances, with a parallel map back to the
/// utterance each token came from.
#[derive(Debug, Clone, Default)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub source_utterance_index: Vec<usize>,
}

impl TokenStream {
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut stream = TokenStream::default();
        for (i, text) in texts.into_iter().enumerate() {
            for tok in tokenize(text) {
                stream.tokens.push(tok);
                stream.source_utterance_index.push(i);
            }
        }
        stream
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

fn is_url_start(s: &str) -> bool {
    let lower = s.get(..8).unwrap_or(s).to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Returns true when the token is a URL under the corpus-filter definition:
/// scheme-prefixed or a "www."-prefixed token.
pub fn is_url_token(tok: &str) -> bool {
    is_url_start(tok)
}

const EMOTICON_SPECIALS: [&str; 12] = [
    "<3", "</3", "^_^", "^-^", "^^", "-_-", "o_o", "O_o", "o_O", "T_T", "D:", "D8",
];

fn is_eye(c: char) -> bool {
    matches!(c, ':' | ';' | '=' | '8')
}

fn is_nose(c: char) -> bool {
    matches!(c, '-' | 'o' | '\'' | '^' | '*')
}

fn is_mouth(c: char) -> bool {
    matches!(
        c,
        ')' | '(' | 'D' | 'P' | 'p' | 'd' | '/' | '\\' | '|' | '}' | '{' | '[' | ']' | 'O' | 'o'
            | '0' | '*' | '3' | '@' | '$'
    )
}

/// Length in bytes of an emoticon starting at the beginning of `s`, if any.
fn emoticon_len(s: &str) -> Option<usize> {
    for special in EMOTICON_SPECIALS {
        if s.starts_with(special) {
            return Some(special.len());
        }
    }
    let chars: Vec<char> = s.chars().take(8).collect();
    if chars.is_empty() {
        return None;
    }
    // forward form: eyes [nose] mouth+  (e.g. ":)", ";-D", ":'(", ":)))")
    if is_eye(chars[0]) {
        for start in [1usize, 2] {
            if start == 2 && !(chars.len() > 1 && is_nose(chars[1])) {
                continue;
            }
            if chars.len() > start && is_mouth(chars[start]) {
                let mouth = chars[start];
                let mut end = start + 1;
                while end < chars.len() && chars[end] == mouth {
                    end += 1;
                }
                return Some(chars[..end].iter().map(|c| c.len_utf8()).sum());
            }
        }
    }
    // reversed form: mouth eyes (e.g. "(:", "):")
    if matches!(chars[0], ')' | '(') && chars.len() > 1 && is_eye(chars[1]) {
        return Some(chars[0].len_utf8() + chars[1].len_utf8());
    }
    None
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_word_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '_')
}

/// Length in bytes of a word starting at the beginning of `s`, if any.
/// Apostrophes, hyphens and underscores are kept when flanked by word
/// characters, and `.`/`,` are kept between digits ("3.5").
fn word_len(s: &str) -> Option<usize> {
    let mut chars = s.char_indices().peekable();
    let (_, first) = chars.next()?;
    if !is_word_char(first) {
        return None;
    }
    let mut end = first.len_utf8();
    let mut prev = first;
    while let Some(&(i, c)) = chars.peek() {
        if is_word_char(c) {
            end = i + c.len_utf8();
            prev = c;
            chars.next();
        } else if is_word_joiner(c) || ((c == '.' || c == ',') && prev.is_ascii_digit()) {
            // look ahead: joiner must be followed by a word character
            let rest = &s[i + c.len_utf8()..];
            match rest.chars().next() {
                Some(n)
                    if is_word_char(n)
                        && !((c == '.' || c == ',') && !n.is_ascii_digit()) =>
                {
                    end = i + c.len_utf8() + n.len_utf8();
                    chars.next();
                    chars.next();
                    prev = n;
                }
                _ => break,
            }
        } else {
            break;
        }
    }
    Some(end)
}

fn mention_or_hashtag_len(s: &str) -> Option<usize> {
    let mut chars = s.char_indices();
    let (_, marker) = chars.next()?;
    if marker != '@' && marker != '#' {
        return None;
    }
    let (_, first) = chars.next()?;
    let ok_first = if marker == '#' {
        first.is_alphabetic()
    } else {
        first.is_alphanumeric() || first == '_'
    };
    if !ok_first {
        return None;
    }
    let mut end = marker.len_utf8() + first.len_utf8();
    for (i, c) in chars {
        if c.is_alphanumeric() || c == '_' {
            end = i + c.len_utf8();
        } else {
            break;
        }
    }
    Some(end)
}

/// Tokenize one utterance. Total and deterministic.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let mut rest = chunk;
        while !rest.is_empty() {
            if is_url_start(rest) {
                // URLs run to the end of the whitespace chunk
                out.push(rest.to_string());
                break;
            }
            if let Some(n) = emoticon_len(rest) {
                out.push(rest[..n].to_string());
                rest = &rest[n..];
                continue;
            }
            if let Some(n) = mention_or_hashtag_len(rest) {
                out.push(rest[..n].to_string());
                rest = &rest[n..];
                continue;
            }
            if let Some(n) = word_len(rest) {
                out.push(rest[..n].to_string());
                rest = &rest[n..];
                continue;
            }
            // punctuation: group a run of the same character, re-checking for
            // emoticons at every boundary
            let first = rest.chars().next().unwrap();
            let mut end = first.len_utf8();
            for (i, c) in rest.char_indices().skip(1) {
                if c == first && emoticon_len(&rest[i..]).is_none() {
                    end = i + c.len_utf8();
                } else {
                    break;
                }
            }
            out.push(rest[..end].to_string());
            rest = &rest[end..];
        }
    }
    out
}

/// Vocabulary for term matching: lowercase unigrams plus lowercase bigrams
/// (exactly one space inside).
#[derive(Debug, Clone, Default)]
pub struct MatchVocab {
    unigrams: HashSet<String>,
    bigrams: HashSet<(String, String)>,
}

impl MatchVocab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = &'a str>) -> Self {
        let mut vocab = Self::new();
        for t in terms {
            vocab.insert(t);
        }
        vocab
    }

    pub fn insert(&mut self, term: &str) {
        debug_assert_eq!(term, term.to_lowercase(), "vocabulary terms are lowercase");
        match term.split_once(' ') {
            Some((a, b)) => {
                debug_assert!(!b.contains(' '), "bigrams contain exactly one space");
                self.bigrams.insert((a.to_string(), b.to_string()));
            }
            None => {
                self.unigrams.insert(term.to_string());
            }
        }
    }

    pub fn contains_unigram(&self, key: &str) -> bool {
        self.unigrams.contains(key)
    }

    pub fn contains_bigram(&self, a: &str, b: &str) -> bool {
        self.bigrams.contains(&(a.to_string(), b.to_string()))
    }

    pub fn is_empty(&self) -> bool {
        self.unigrams.is_empty() && self.bigrams.is_empty()
    }
}

/// One matched term: `len` is 1 for unigrams, 2 for bigrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMatch {
    pub position: usize,
    pub len: usize,
    pub term: String,
}

/// Lowercased form of a token used for lexicon lookup; optionally strips a
/// single leading `#` so hashtag bodies can match.
pub fn match_key(token: &str, strip_hashtags: bool) -> String {
    let t = if strip_hashtags {
        token.strip_prefix('#').unwrap_or(token)
    } else {
        token
    };
    t.to_lowercase()
}

/// Greedy left-to-right, case-insensitive matching. Bigrams take precedence
/// over their constituent unigrams; every token position participates in at
/// most one match, so returned spans never overlap.
pub fn match_terms(tokens: &[String], vocab: &MatchVocab, strip_hashtags: bool) -> Vec<TermMatch> {
    let keys: Vec<String> = tokens
        .iter()
        .map(|t| match_key(t, strip_hashtags))
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        if i + 1 < keys.len() && vocab.bigrams.contains(&(keys[i].clone(), keys[i + 1].clone())) {
            out.push(TermMatch {
                position: i,
                len: 2,
                term: format!("{} {}", keys[i], keys[i + 1]),
            });
            i += 2;
        } else if vocab.unigrams.contains(&keys[i]) {
            out.push(TermMatch {
                position: i,
                len: 1,
                term: keys[i].clone(),
            });
            i += 1;
        } else {
            i += 1;
        }
    }
    out
}
