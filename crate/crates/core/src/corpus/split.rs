use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Corpus;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplitError {
    #[error("need at least two documents to split, got {0}")]
    TooFewDocuments(usize),
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
}

/// Document-level train/test split. The train side receives
/// `round(train_fraction * n)` documents, clamped so each side keeps at
/// least one. Both sides keep the original document order.
pub fn split_corpus(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<(Corpus, Corpus), SplitError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(SplitError::InvalidFraction(train_fraction));
    }
    let n = corpus.documents.len();
    if n < 2 {
        return Err(SplitError::TooFewDocuments(n));
    }
    let n_train = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut in_train = vec![false; n];
    for &i in &order[..n_train] {
        in_train[i] = true;
    }
    let (train, test): (Vec<_>, Vec<_>) = corpus
        .documents
        .iter()
        .cloned()
        .zip(in_train)
        .partition(|(_, t)| *t);
    let strip = |docs: Vec<(crate::corpus::Document, bool)>| docs.into_iter().map(|(d, _)| d).collect();
    Ok((
        Corpus::new(strip(train), corpus.schema.clone()),
        Corpus::new(strip(test), corpus.schema.clone()),
    ))
}
