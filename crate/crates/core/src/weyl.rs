//! Simple reflections, reduced words, inversion sequences and braid moves.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::weight::{RootVec, Weight};

/// Default node cap for braid-class closures.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    /// 1-based position of the first letter whose partial image is negative.
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("braid closure exceeded {0} words")]
    ExplosionGuard(usize),
    #[error("no reduced word of this element ends in index {0}")]
    NoSuchWord(usize),
    #[error("no longest element found within length {0}; the type is not finite")]
    NotFinite(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
}

/// `s_i λ = λ − ⟨h_i, λ⟩ α_i`.
pub fn reflect(datum: &CartanDatum, i: usize, lambda: &Weight) -> Weight {
    let mut out = lambda.clone();
    out.add_root(i, -datum.pairing(i, lambda));
    out
}

/// `s_i β = β − ⟨h_i, β⟩ α_i` on the root lattice.
pub fn reflect_root(datum: &CartanDatum, i: usize, beta: &RootVec) -> RootVec {
    let mut out = beta.clone();
    out.coeffs[i] -= datum.pairing_root(i, beta);
    out
}

/// `s_{i_1} ∘ ⋯ ∘ s_{i_k}` applied to `λ`, rightmost factor first.
pub fn act(datum: &CartanDatum, word: &[usize], lambda: &Weight) -> Weight {
    word.iter()
        .rev()
        .fold(lambda.clone(), |acc, &i| reflect(datum, i, &acc))
}

pub fn act_root(datum: &CartanDatum, word: &[usize], beta: &RootVec) -> RootVec {
    word.iter()
        .rev()
        .fold(beta.clone(), |acc, &i| reflect_root(datum, i, &acc))
}

/// The partial images `β_k = s_{i_1} ⋯ s_{i_{k−1}} α_{i_k}`, failing at the
/// first nonpositive one.
pub fn beta_sequence(datum: &CartanDatum, word: &[usize]) -> Result<Vec<RootVec>, WeylError> {
    let n = datum.rank();
    let mut betas = Vec::with_capacity(word.len());
    for (k, &i) in word.iter().enumerate() {
        if i >= n {
            return Err(WeylError::IndexOutOfRange(i));
        }
        let beta = act_root(datum, &word[..k], &RootVec::simple(n, i));
        if !beta.is_positive() {
            return Err(WeylError::NotReduced(k + 1));
        }
        betas.push(beta);
    }
    Ok(betas)
}

pub fn is_reduced(datum: &CartanDatum, word: &[usize]) -> bool {
    beta_sequence(datum, word).is_ok()
}

/// `w s_j < w`, i.e. the word followed by `j` is not reduced.
pub fn has_right_descent(datum: &CartanDatum, word: &[usize], j: usize) -> bool {
    let n = datum.rank();
    !act_root(datum, word, &RootVec::simple(n, j)).is_positive()
}

/// Two words represent the same Weyl group element iff they act equally on
/// every fundamental weight.
pub fn same_element(datum: &CartanDatum, u: &[usize], v: &[usize]) -> bool {
    let n = datum.rank();
    (0..n).all(|i| {
        let l = Weight::fundamental(n, i);
        act(datum, u, &l) == act(datum, v, &l)
    })
}

/// Every word obtained from `word` by one rank-two braid substitution
/// `ijij⋯ ↦ jiji⋯` of length `m_ij`.
pub fn braid_neighbors(datum: &CartanDatum, word: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let len = word.len();
    for p in 0..len.saturating_sub(1) {
        let (i, j) = (word[p], word[p + 1]);
        if i == j {
            continue;
        }
        let Some(m) = datum.braid_order(i, j) else {
            continue;
        };
        if p + m > len {
            continue;
        }
        let alternates = (0..m).all(|t| word[p + t] == if t % 2 == 0 { i } else { j });
        if !alternates {
            continue;
        }
        let mut next = word.to_vec();
        for t in 0..m {
            next[p + t] = if t % 2 == 0 { j } else { i };
        }
        out.insert(next);
    }
    out
}

/// The Matsumoto class of `word`: all reduced words of the same element.
pub fn all_reduced_words(
    datum: &CartanDatum,
    word: &[usize],
    cap: usize,
) -> Result<BTreeSet<Vec<usize>>, WeylError> {
    beta_sequence(datum, word)?;
    let mut seen = BTreeSet::from([word.to_vec()]);
    let mut layer = alloc::vec![word.to_vec()];
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for w in &layer {
            for nb in braid_neighbors(datum, w) {
                if !seen.contains(&nb) {
                    next.insert(nb);
                }
            }
        }
        seen.extend(next.iter().cloned());
        if seen.len() > cap {
            return Err(WeylError::ExplosionGuard(cap));
        }
        layer = next.into_iter().collect();
    }
    Ok(seen)
}

/// A reduced word of the same element ending in `j`: the lexicographically
/// smallest one in the earliest BFS layer that contains one.
pub fn word_ending_in(
    datum: &CartanDatum,
    word: &[usize],
    j: usize,
    cap: usize,
) -> Result<Vec<usize>, WeylError> {
    beta_sequence(datum, word)?;
    if j >= datum.rank() {
        return Err(WeylError::IndexOutOfRange(j));
    }
    if !has_right_descent(datum, word, j) {
        return Err(WeylError::NoSuchWord(j));
    }
    if word.last() == Some(&j) {
        return Ok(word.to_vec());
    }
    let mut seen = BTreeSet::from([word.to_vec()]);
    let mut layer = alloc::vec![word.to_vec()];
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for w in &layer {
            for nb in braid_neighbors(datum, w) {
                if !seen.contains(&nb) {
                    next.insert(nb);
                }
            }
        }
        if let Some(hit) = next.iter().find(|w| w.last() == Some(&j)) {
            return Ok(hit.clone());
        }
        seen.extend(next.iter().cloned());
        if seen.len() > cap {
            return Err(WeylError::ExplosionGuard(cap));
        }
        layer = next.into_iter().collect();
    }
    // unreachable for a reduced word with a right descent at j
    Err(WeylError::NoSuchWord(j))
}

/// `(β, λ) ≥ 0` for every `β ∈ Δ₊ ∩ w⁻¹Δ₋`, the inversion set of `w⁻¹`.
pub fn is_w_dominant(datum: &CartanDatum, lambda: &Weight, word: &ReducedWord) -> bool {
    let reversed: Vec<usize> = word.letters().iter().rev().copied().collect();
    let betas = beta_sequence(datum, &reversed).expect("reverse of a reduced word is reduced");
    betas.iter().all(|b| datum.form(b, lambda) >= 0)
}

/// A reduced word of the longest element, built by appending the smallest
/// index that keeps the word reduced.
pub fn longest_word(datum: &CartanDatum, max_len: usize) -> Result<Vec<usize>, WeylError> {
    let n = datum.rank();
    let mut word = Vec::new();
    loop {
        match (0..n).find(|&j| !has_right_descent(datum, &word, j)) {
            None => return Ok(word),
            Some(j) => {
                if word.len() == max_len {
                    return Err(WeylError::NotFinite(max_len));
                }
                word.push(j);
            }
        }
    }
}

/// A word with its cached inversion sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWord {
    letters: Vec<usize>,
    betas: Vec<RootVec>,
}

impl ReducedWord {
    pub fn new(datum: &CartanDatum, letters: Vec<usize>) -> Result<Self, WeylError> {
        let betas = beta_sequence(datum, &letters)?;
        Ok(ReducedWord { letters, betas })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn betas(&self) -> &[RootVec] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.letters.contains(&i)
    }

    pub fn last(&self) -> Option<usize> {
        self.letters.last().copied()
    }
}
