//! Surface chunking with finite-state patterns over part-of-speech labels.
//!
//! A pattern is a sequence of elements, each a POS label or a parenthesised
//! alternation of labels, optionally followed by `?`, `*` or `+`:
//!
//! ```text
//! NP	DET? ADJ* (NOUN|PROPN)+ ADJ*
//! ```
//!
//! Chunking scans a sentence left to right. At each position the patterns
//! are tried in order and the first one that matches takes its longest
//! match; those tokens are consumed. Tokens no pattern matches stay outside
//! every chunk. Attachment is never resolved.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lexicon::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChunkKind {
    Np,
    Vp,
    Pp,
}

impl ChunkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChunkKind::Np => "NP",
            ChunkKind::Vp => "VP",
            ChunkKind::Pp => "PP",
        }
    }
}

impl fmt::Display for ChunkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChunkKind {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NP" => Ok(ChunkKind::Np),
            "VP" => Ok(ChunkKind::Vp),
            "PP" => Ok(ChunkKind::Pp),
            other => Err(PatternError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern syntax error at position {position}: {reason}")]
    PatternSyntax { position: usize, reason: String },
    #[error("unknown chunk kind `{0}`")]
    UnknownKind(String),
    #[error("line {line}: {source}")]
    File {
        line: usize,
        #[source]
        source: Box<PatternError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    One,
    Optional,
    Star,
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternElement {
    pub labels: Vec<Pos>,
    pub quantifier: Quantifier,
}

impl PatternElement {
    fn accepts(&self, pos: Pos) -> bool {
        self.labels.contains(&pos)
    }
}

/// A compiled chunk pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkPattern {
    pub kind: ChunkKind,
    pub elements: Vec<PatternElement>,
}

impl fmt::Display for ChunkPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .elements
            .iter()
            .map(|e| {
                let atom = if e.labels.len() == 1 {
                    e.labels[0].to_string()
                } else {
                    let alts: Vec<&str> = e.labels.iter().map(|p| p.as_str()).collect();
                    format!("({})", alts.join("|"))
                };
                let q = match e.quantifier {
                    Quantifier::One => "",
                    Quantifier::Optional => "?",
                    Quantifier::Star => "*",
                    Quantifier::Plus => "+",
                };
                format!("{atom}{q}")
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Compiles pattern text such as `DET? ADJ* (NOUN|PROPN)+`.
///
/// ```
/// use metonymy::chunker::{compile_pattern, ChunkKind};
///
/// assert!(compile_pattern(ChunkKind::Np, "DET? ADJ* NOUN+").is_ok());
/// assert!(compile_pattern(ChunkKind::Np, "DET ++").is_err());
/// ```
pub fn compile_pattern(kind: ChunkKind, pattern_text: &str) -> Result<ChunkPattern, PatternError> {
    let chars: Vec<char> = pattern_text.chars().collect();
    let err = |position: usize, reason: &str| PatternError::PatternSyntax {
        position,
        reason: reason.to_string(),
    };
    let label_at = |start: usize| -> Result<(Pos, usize), PatternError> {
        let mut end = start;
        while end < chars.len() && (chars[end].is_ascii_uppercase()) {
            end += 1;
        }
        if end == start {
            return Err(err(start, "expected a part-of-speech label"));
        }
        let name: String = chars[start..end].iter().collect();
        let pos = name
            .parse::<Pos>()
            .map_err(|_| err(start, &format!("unknown label `{name}`")))?;
        Ok((pos, end))
    };

    let mut elements = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let labels = if c == '(' {
            let mut labels = Vec::new();
            i += 1;
            loop {
                let (pos, end) = label_at(i)?;
                labels.push(pos);
                i = end;
                match chars.get(i) {
                    Some('|') => i += 1,
                    Some(')') => {
                        i += 1;
                        break;
                    }
                    _ => return Err(err(i, "expected `|` or `)`")),
                }
            }
            labels
        } else if c.is_ascii_uppercase() {
            let (pos, end) = label_at(i)?;
            i = end;
            vec![pos]
        } else {
            return Err(err(i, &format!("unexpected `{c}`")));
        };
        let quantifier = match chars.get(i) {
            Some('?') => Quantifier::Optional,
            Some('*') => Quantifier::Star,
            Some('+') => Quantifier::Plus,
            _ => Quantifier::One,
        };
        if quantifier != Quantifier::One {
            i += 1;
        }
        if let Some(&next) = chars.get(i) {
            if !next.is_whitespace() && next != '(' {
                return Err(err(i, &format!("unexpected `{next}`")));
            }
        }
        elements.push(PatternElement { labels, quantifier });
    }
    if elements.is_empty() {
        return Err(err(0, "empty pattern"));
    }
    Ok(ChunkPattern { kind, elements })
}

/// Reads a pattern file: `KIND<TAB>pattern` per line, `#` comments.
pub fn parse_patterns(text: &str) -> Result<Vec<ChunkPattern>, PatternError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let wrap = |source| PatternError::File {
            line: idx + 1,
            source: Box::new(source),
        };
        let (kind, pattern) = line
            .split_once('\t')
            .ok_or_else(|| wrap(PatternError::UnknownKind(line.to_string())))?;
        let kind: ChunkKind = kind.trim().parse().map_err(wrap)?;
        out.push(compile_pattern(kind, pattern.trim()).map_err(wrap)?);
    }
    Ok(out)
}

/// The bundled NP / VP / PP patterns.
pub fn default_patterns() -> Vec<ChunkPattern> {
    parse_patterns(crate::resources::PATTERNS).expect("bundled patterns are valid")
}

impl ChunkPattern {
    /// Length of the longest non-empty match starting at `start`.
    pub fn longest_match(&self, pos: &[Pos], start: usize) -> Option<usize> {
        let n = self.elements.len();
        // NFA states are element indices; state `n` accepts.
        let closure = |states: &mut Vec<bool>| {
            for i in 0..n {
                if states[i] && matches!(self.elements[i].quantifier, Quantifier::Optional | Quantifier::Star) {
                    states[i + 1] = true;
                }
            }
        };
        // `Plus` elements that already matched once behave like `Star`.
        let mut states = vec![false; n + 1];
        let mut plus_done = vec![false; n + 1];
        states[0] = true;
        closure(&mut states);
        let mut best = None;
        let mut len = 0;
        while start + len < pos.len() {
            let p = pos[start + len];
            let mut next = vec![false; n + 1];
            let mut next_plus = vec![false; n + 1];
            for i in 0..n {
                let live = states[i] || plus_done[i];
                if !live || !self.elements[i].accepts(p) {
                    continue;
                }
                match self.elements[i].quantifier {
                    Quantifier::One | Quantifier::Optional => next[i + 1] = true,
                    Quantifier::Star => {
                        next[i] = true;
                        next[i + 1] = true;
                    }
                    Quantifier::Plus => {
                        next_plus[i] = true;
                        next[i + 1] = true;
                    }
                }
            }
            closure(&mut next);
            if !next.iter().any(|&s| s) && !next_plus.iter().any(|&s| s) {
                break;
            }
            len += 1;
            if next[n] {
                best = Some(len);
            }
            states = next;
            plus_done = next_plus;
        }
        best
    }
}

/// A chunk over an inclusive token range with its head token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chunk {
    pub kind: ChunkKind,
    pub first_token: usize,
    pub last_token: usize,
    pub head: usize,
}

impl Chunk {
    pub fn contains(&self, token: usize) -> bool {
        self.first_token <= token && token <= self.last_token
    }
}

/// Chunks a sentence given one POS per token.
///
/// ```
/// use metonymy::chunker::{chunk_sentence, default_patterns, ChunkKind};
/// use metonymy::lexicon::Pos;
///
/// let pos = [Pos::Det, Pos::Propn, Pos::Verb, Pos::Det, Pos::Noun];
/// let chunks = chunk_sentence(&pos, &default_patterns());
/// let kinds: Vec<_> = chunks.iter().map(|c| (c.kind, c.first_token, c.last_token)).collect();
/// assert_eq!(kinds, [(ChunkKind::Np, 0, 1), (ChunkKind::Vp, 2, 2), (ChunkKind::Np, 3, 4)]);
/// ```
pub fn chunk_sentence(pos: &[Pos], patterns: &[ChunkPattern]) -> Vec<Chunk> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < pos.len() {
        let hit = patterns
            .iter()
            .find_map(|p| p.longest_match(pos, i).map(|len| (p.kind, len)));
        match hit {
            Some((kind, len)) => {
                let mut chunk = Chunk {
                    kind,
                    first_token: i,
                    last_token: i + len - 1,
                    head: i,
                };
                chunk.head = chunk_head(&chunk, pos);
                chunks.push(chunk);
                i += len;
            }
            None => i += 1,
        }
    }
    chunks
}

/// Head of a chunk: the rightmost NOUN or PROPN for NP and PP, the leftmost
/// VERB for VP; the last token when no such label occurs.
pub fn chunk_head(chunk: &Chunk, pos: &[Pos]) -> usize {
    let range = chunk.first_token..=chunk.last_token;
    let found = match chunk.kind {
        ChunkKind::Np | ChunkKind::Pp => range.rev().find(|&i| matches!(pos[i], Pos::Noun | Pos::Propn)),
        ChunkKind::Vp => range.into_iter().find(|&i| pos[i] == Pos::Verb),
    };
    found.unwrap_or(chunk.last_token)
}
