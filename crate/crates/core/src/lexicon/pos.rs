use std::fmt;
use std::str::FromStr;

/// Part-of-speech labels used by the morphological dictionary and the
/// chunk patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Det,
    Prep,
    Pron,
    Adv,
    Punc,
    Propn,
    Unk,
}

impl Pos {
    pub const ALL: [Pos; 10] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Adj,
        Pos::Det,
        Pos::Prep,
        Pos::Pron,
        Pos::Adv,
        Pos::Punc,
        Pos::Propn,
        Pos::Unk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Det => "DET",
            Pos::Prep => "PREP",
            Pos::Pron => "PRON",
            Pos::Adv => "ADV",
            Pos::Punc => "PUNC",
            Pos::Propn => "PROPN",
            Pos::Unk => "UNK",
        }
    }

    /// Rank used to pick a single analysis for chunking; lower wins.
    /// NOUN < VERB < ADJ < DET < PREP < PRON < ADV < PUNC < PROPN < UNK.
    pub fn priority(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPos(pub String);

impl fmt::Display for UnknownPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown part-of-speech label `{}`", self.0)
    }
}

impl std::error::Error for UnknownPos {}

impl FromStr for Pos {
    type Err = UnknownPos;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownPos(s.to_string()))
    }
}
