use std::collections::HashMap;

use super::{GazetteerEntry, Granularity, TriggerRole};

/// A gazetteer hit over an inclusive token range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GazetteerMatch {
    pub first_token: usize,
    pub last_token: usize,
    pub category: String,
    pub trigger_role: Option<TriggerRole>,
    pub granularity: Option<Granularity>,
}

impl GazetteerMatch {
    pub fn is_trigger(&self) -> bool {
        self.trigger_role.is_some()
    }
}

#[derive(Debug, Default, Clone)]
struct Node {
    children: HashMap<String, usize>,
    /// Indices into `entries`; the first one is the primary reading.
    entries: Vec<usize>,
}

/// Token-level trie over gazetteer phrases.
#[derive(Debug, Clone)]
pub(crate) struct Gazetteer {
    nodes: Vec<Node>,
    entries: Vec<GazetteerEntry>,
}

impl Default for Gazetteer {
    fn default() -> Self {
        Self {
            nodes: vec![Node::default()],
            entries: Vec::new(),
        }
    }
}

impl Gazetteer {
    /// Inserts an entry; returns false if an identical entry already exists.
    pub fn insert(&mut self, entry: GazetteerEntry) -> bool {
        let mut node = 0;
        for token in &entry.phrase {
            node = match self.nodes[node].children.get(token) {
                Some(&next) => next,
                None => {
                    self.nodes.push(Node::default());
                    let next = self.nodes.len() - 1;
                    self.nodes[node].children.insert(token.clone(), next);
                    next
                }
            };
        }
        if self.nodes[node].entries.iter().any(|&e| self.entries[e] == entry) {
            return false;
        }
        self.entries.push(entry);
        self.nodes[node].entries.push(self.entries.len() - 1);
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    /// Longest phrase starting at `start`, trying each token verbatim and
    /// lowercased. Returns the exclusive end and the primary entry. Among
    /// equally long paths the one with more verbatim tokens wins.
    fn longest_at<S: AsRef<str>>(&self, tokens: &[S], start: usize) -> Option<(usize, usize)> {
        // (end, exact tokens, entry)
        let mut best: Option<(usize, usize, usize)> = None;
        let mut stack = vec![(0usize, start, 0usize)];
        while let Some((node, pos, exact)) = stack.pop() {
            if pos > start {
                if let Some(&entry) = self.nodes[node].entries.first() {
                    if best.is_none_or(|(end, ex, _)| (pos, exact) > (end, ex)) {
                        best = Some((pos, exact, entry));
                    }
                }
            }
            let Some(token) = tokens.get(pos) else { continue };
            let token = token.as_ref();
            let children = &self.nodes[node].children;
            if let Some(&next) = children.get(token) {
                stack.push((next, pos + 1, exact + 1));
            }
            let lower = token.to_lowercase();
            if lower != token {
                if let Some(&next) = children.get(&lower) {
                    stack.push((next, pos + 1, exact));
                }
            }
        }
        best.map(|(end, _, entry)| (end, entry))
    }

    /// Leftmost-longest, non-overlapping scan.
    pub fn scan<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<GazetteerMatch> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            match self.longest_at(tokens, i) {
                Some((end, entry)) => {
                    let e = &self.entries[entry];
                    out.push(GazetteerMatch {
                        first_token: i,
                        last_token: end - 1,
                        category: e.category.clone(),
                        trigger_role: e.trigger_role,
                        granularity: e.granularity,
                    });
                    i = end;
                }
                None => i += 1,
            }
        }
        out
    }

    /// Primary entry for exactly this phrase.
    pub fn entry_for<S: AsRef<str>>(&self, phrase: &[S]) -> Option<&GazetteerEntry> {
        let mut node = 0;
        for token in phrase {
            let token = token.as_ref();
            let children = &self.nodes[node].children;
            node = match children.get(token) {
                Some(&n) => n,
                None => *children.get(&token.to_lowercase())?,
            };
        }
        self.nodes[node].entries.first().map(|&e| &self.entries[e])
    }
}
