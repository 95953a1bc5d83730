use super::{Sentence, Token};

const ELISIONS: [&str; 9] = ["l", "d", "qu", "n", "s", "j", "m", "t", "c"];

pub(crate) fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

/// Characters that always form a token of their own.
pub(crate) fn is_split_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ','
            | ';'
            | ':'
            | '!'
            | '?'
            | '('
            | ')'
            | '['
            | ']'
            | '{'
            | '}'
            | '"'
            | '«'
            | '»'
            | '“'
            | '”'
            | '…'
    )
}

fn is_terminal(surface: &str) -> bool {
    matches!(surface, "." | "!" | "?")
}

/// A token before sentence assignment, with the whitespace that preceded it.
#[derive(Debug, Clone)]
pub(crate) struct RawToken {
    pub surface: String,
    pub char_start: usize,
    pub char_end: usize,
    pub space_before: bool,
    pub newline_before: bool,
}

/// Splits one whitespace-free chunk starting at character offset `start`.
pub(crate) fn split_chunk(chunk: &str, start: usize, mut space_before: bool, mut newline_before: bool, out: &mut Vec<RawToken>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut push = |surface: String, from: usize, to: usize, out: &mut Vec<RawToken>| {
        out.push(RawToken {
            surface,
            char_start: start + from,
            char_end: start + to,
            space_before,
            newline_before,
        });
        space_before = false;
        newline_before = false;
    };
    let mut word_start: Option<usize> = None;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if is_split_punct(c) {
            if let Some(ws) = word_start.take() {
                push(chars[ws..i].iter().collect(), ws, i, out);
            }
            push(c.to_string(), i, i + 1, out);
            i += 1;
            continue;
        }
        if word_start.is_none() {
            if let Some(len) = elision_at(&chars[i..]) {
                push(chars[i..i + len].iter().collect(), i, i + len, out);
                i += len;
                continue;
            }
            word_start = Some(i);
        }
        i += 1;
    }
    if let Some(ws) = word_start {
        push(chars[ws..].iter().collect(), ws, chars.len(), out);
    }
}

/// Length of an elided clitic (`l'`, `qu'`, ...) at the start of `chars`,
/// provided more word material follows it.
fn elision_at(chars: &[char]) -> Option<usize> {
    ELISIONS.iter().find_map(|prefix| {
        let n = prefix.chars().count();
        let matches_prefix = chars.len() > n + 1
            && chars[..n]
                .iter()
                .zip(prefix.chars())
                .all(|(a, b)| a.to_lowercase().eq(std::iter::once(b)))
            && is_apostrophe(chars[n])
            && !is_split_punct(chars[n + 1]);
        matches_prefix.then_some(n + 1)
    })
}

/// Walks `text` chunk by chunk, handing each whitespace-delimited chunk to
/// `visit` together with its character offset and the kind of whitespace
/// that preceded it.
pub(crate) fn for_each_chunk(text: &str, mut visit: impl FnMut(&str, usize, bool, bool)) {
    let mut chunk_start_byte: Option<usize> = None;
    let mut chunk_start_char = 0;
    let mut space_before = false;
    let mut newline_before = false;
    for (char_idx, (byte, c)) in text.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some(sb) = chunk_start_byte.take() {
                visit(&text[sb..byte], chunk_start_char, space_before, newline_before);
                newline_before = false;
            }
            space_before = true;
            if c == '\n' {
                newline_before = true;
            }
        } else if chunk_start_byte.is_none() {
            chunk_start_byte = Some(byte);
            chunk_start_char = char_idx;
        }
    }
    if let Some(sb) = chunk_start_byte {
        visit(&text[sb..], chunk_start_char, space_before, newline_before);
    }
}

/// Indices `i` such that a sentence ends after raw token `i`.
pub(crate) fn sentence_breaks(tokens: &[RawToken]) -> Vec<usize> {
    let mut breaks = Vec::new();
    for i in 0..tokens.len() {
        let Some(next) = tokens.get(i + 1) else {
            breaks.push(i);
            break;
        };
        let starts_upper = next.surface.chars().next().is_some_and(char::is_uppercase);
        if next.newline_before || (is_terminal(&tokens[i].surface) && next.space_before && starts_upper) {
            breaks.push(i);
        }
    }
    breaks
}

pub(crate) fn raw_tokens(text: &str) -> Vec<RawToken> {
    let mut out = Vec::new();
    for_each_chunk(text, |chunk, start, space, newline| {
        split_chunk(chunk, start, space, newline, &mut out)
    });
    out
}

/// Groups raw tokens into sentences at the given break points.
pub(crate) fn assemble(tokens: Vec<RawToken>, breaks: &[usize]) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut current = Sentence::default();
    let mut breaks = breaks.iter().peekable();
    for (i, raw) in tokens.into_iter().enumerate() {
        current.tokens.push(Token {
            sent_index: current.tokens.len(),
            surface: raw.surface,
            char_start: raw.char_start,
            char_end: raw.char_end,
        });
        if breaks.peek() == Some(&&i) {
            breaks.next();
            sentences.push(std::mem::take(&mut current));
        }
    }
    if !current.tokens.is_empty() {
        sentences.push(current);
    }
    sentences
}

/// Splits raw text into sentences of tokens.
///
/// Tokens are whitespace-separated chunks, with punctuation marks split off
/// as tokens of their own and French elided clitics (`l'`, `d'`, `qu'`, `n'`,
/// `s'`, `j'`, `m'`, `t'`, `c'`) split from the following word. A sentence
/// ends at `.`, `!` or `?` followed by whitespace and an uppercase letter, at
/// a line break, or at the end of the input.
///
/// ```
/// use metonymy::corpus::tokenize;
///
/// let sentences = tokenize("l'ONU décide. Bien.");
/// assert_eq!(sentences.len(), 2);
/// let first: Vec<_> = sentences[0].surfaces().collect();
/// assert_eq!(first, ["l'", "ONU", "décide", "."]);
/// ```
pub fn tokenize(raw: &str) -> Vec<Sentence> {
    let tokens = raw_tokens(raw);
    let breaks = sentence_breaks(&tokens);
    assemble(tokens, &breaks)
}
