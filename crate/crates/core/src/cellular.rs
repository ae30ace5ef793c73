//! The cellular crystal `B_w = B_{i_1} ⊗ ⋯ ⊗ B_{i_ℓ}` on `ℤ^ℓ`.
//!
//! A vector `x = (x_1, …, x_ℓ)` stands for `(−x_1)_{i_1} ⊗ ⋯ ⊗ (−x_ℓ)_{i_ℓ}`.
//! With `σ_k(x) = x_k + Σ_{j<k} ⟨h_{i_k}, α_{i_j}⟩ x_j`:
//!
//! - `ε_i(x) = max{σ_k(x) : i_k = i}` (`−∞` when `i` does not occur),
//! - `f̃_i` adds one at the last maximizing position, `ẽ_i` subtracts one at
//!   the first,
//! - `wt(x) = −Σ x_k α_{i_k}` and `φ_i = ε_i + ⟨h_i, wt⟩`.
//!
//! Positions are 0-based throughout the API.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Neg, Sub};

use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::crystal::{Crystal, CrystalValue, Element};
use crate::weight::Weight;
use crate::weyl::{self, ReducedWord, WeylError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellularError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("a cellular crystal needs a nonempty word")]
    EmptyWord,
    #[error("weight is not dominant")]
    NotDominant,
    #[error("coroot pairing at position {0} is not integral")]
    NonIntegralCoroot(usize),
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// An element of a cellular crystal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellVec(pub Vec<i64>);

impl CellVec {
    pub fn zero(len: usize) -> Self {
        CellVec(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `Σ x_k`.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `Σ |x_k|`.
    pub fn norm1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// Drops the last coordinate.
    pub fn drop_last(&self) -> CellVec {
        CellVec(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    pub fn last(&self) -> Option<i64> {
        self.0.last().copied()
    }
}

impl From<Vec<i64>> for CellVec {
    fn from(v: Vec<i64>) -> Self {
        CellVec(v)
    }
}

impl Index<usize> for CellVec {
    type Output = i64;

    fn index(&self, k: usize) -> &i64 {
        &self.0[k]
    }
}

impl Add for &CellVec {
    type Output = CellVec;

    fn add(self, rhs: &CellVec) -> CellVec {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        CellVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CellVec {
    type Output = CellVec;

    fn sub(self, rhs: &CellVec) -> CellVec {
        assert_eq!(self.len(), rhs.len(), "length mismatch");
        CellVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CellVec {
    type Output = CellVec;

    fn neg(self) -> CellVec {
        CellVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for CellVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `B_w` for a fixed reduced word of `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularCrystal {
    datum: CartanDatum,
    word: ReducedWord,
}

impl CellularCrystal {
    pub fn new(datum: CartanDatum, letters: Vec<usize>) -> Result<Self, CellularError> {
        if letters.is_empty() {
            return Err(CellularError::EmptyWord);
        }
        let word = ReducedWord::new(&datum, letters)?;
        Ok(CellularCrystal { datum, word })
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn letters(&self) -> &[usize] {
        self.word.letters()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.word.contains(i)
    }

    pub fn zero(&self) -> CellVec {
        CellVec::zero(self.len())
    }

    pub fn check_len(&self, x: &CellVec) -> Result<(), CellularError> {
        if x.len() == self.len() {
            Ok(())
        } else {
            Err(CellularError::LengthMismatch {
                expected: self.len(),
                got: x.len(),
            })
        }
    }

    /// `σ_k(x) = x_k + Σ_{j<k} ⟨h_{i_k}, α_{i_j}⟩ x_j`.
    pub fn sigma(&self, x: &CellVec, k: usize) -> i64 {
        let letters = self.letters();
        let ik = letters[k];
        x[k] + (0..k).map(|j| self.datum.a(ik, letters[j]) * x[j]).sum::<i64>()
    }

    /// `(σ̃_i, first maximizer, last maximizer)` in one pass.
    fn scan(&self, x: &CellVec, i: usize) -> Option<(i64, usize, usize)> {
        let mut prefix = 0i64;
        let mut best: Option<(i64, usize, usize)> = None;
        for (k, &ik) in self.letters().iter().enumerate() {
            if ik == i {
                let s = x[k] + prefix;
                best = match best {
                    Some((m, first, _)) if s == m => Some((m, first, k)),
                    Some((m, _, _)) if s < m => best,
                    _ => Some((s, k, k)),
                };
            }
            prefix += self.datum.a(i, ik) * x[k];
        }
        best
    }

    /// `σ̃_i(x) = max{σ_k(x) : i_k = i}`.
    pub fn sigma_tilde(&self, x: &CellVec, i: usize) -> CrystalValue {
        match self.scan(x, i) {
            Some((m, _, _)) => CrystalValue::Finite(m),
            None => CrystalValue::NegInf,
        }
    }

    /// `M̃_i(x)`: the positions attaining `σ̃_i`.
    pub fn argmax_set(&self, x: &CellVec, i: usize) -> Vec<usize> {
        let Some((m, _, _)) = self.scan(x, i) else {
            return Vec::new();
        };
        (0..self.len())
            .filter(|&k| self.letters()[k] == i && self.sigma(x, k) == m)
            .collect()
    }

    /// `m̃ᶠ_i = max M̃_i`.
    pub fn m_f(&self, x: &CellVec, i: usize) -> Option<usize> {
        self.scan(x, i).map(|(_, _, last)| last)
    }

    /// `m̃ᵉ_i = min M̃_i`.
    pub fn m_e(&self, x: &CellVec, i: usize) -> Option<usize> {
        self.scan(x, i).map(|(_, first, _)| first)
    }

    pub fn f_op(&self, i: usize, x: &CellVec) -> Option<CellVec> {
        let k = self.m_f(x, i)?;
        let mut y = x.clone();
        y.0[k] += 1;
        Some(y)
    }

    pub fn e_op(&self, i: usize, x: &CellVec) -> Option<CellVec> {
        let k = self.m_e(x, i)?;
        let mut y = x.clone();
        y.0[k] -= 1;
        Some(y)
    }

    /// `f̃_i^n` for `n ≥ 0`, `ẽ_i^{−n}` for `n < 0`.
    pub fn f_pow(&self, i: usize, x: &CellVec, n: i64) -> Option<CellVec> {
        let mut y = x.clone();
        for _ in 0..n.abs() {
            y = if n > 0 { self.f_op(i, &y)? } else { self.e_op(i, &y)? };
        }
        Some(y)
    }

    /// `wt(x) = −Σ x_k α_{i_k}`.
    pub fn weight(&self, x: &CellVec) -> Weight {
        let mut w = Weight::zero(self.datum.rank());
        for (k, &ik) in self.letters().iter().enumerate() {
            w.add_root(ik, -x[k]);
        }
        w
    }

    /// The corresponding element `(−x_1)_{i_1} ⊗ ⋯ ⊗ (−x_ℓ)_{i_ℓ}` of the
    /// generic tensor model.
    pub fn to_element(&self, x: &CellVec) -> Element {
        Element::Tensor(
            self.letters()
                .iter()
                .zip(&x.0)
                .map(|(&i, &c)| Element::b(i, -c))
                .collect(),
        )
    }

    /// Inverse of [`to_element`](Self::to_element).
    pub fn from_element(&self, e: &Element) -> Option<CellVec> {
        let Element::Tensor(parts) = e else {
            return None;
        };
        if parts.len() != self.len() {
            return None;
        }
        parts
            .iter()
            .zip(self.letters())
            .map(|(p, &i)| match p {
                Element::B { i: j, n } if *j == i => Some(-n),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(CellVec)
    }

    /// `wΛ` for the Weyl group element of the word.
    pub fn w_act(&self, lambda: &Weight) -> Weight {
        weyl::act(&self.datum, self.letters(), lambda)
    }

    /// `m_k = ⟨h_{i_k}, s_{i_{k+1}} ⋯ s_{i_ℓ} Λ⟩`.
    pub fn h_exponents(&self, lambda: &Weight) -> Vec<i64> {
        let letters = self.letters();
        (0..letters.len())
            .map(|k| {
                let tail = weyl::act(&self.datum, &letters[k + 1..], lambda);
                self.datum.pairing(letters[k], &tail)
            })
            .collect()
    }

    /// `h_Λ = f̃_{i_1}^{m_1} ⋯ f̃_{i_ℓ}^{m_ℓ}(0)`, rightmost power applied first.
    pub fn h_vector(&self, lambda: &Weight) -> Result<CellVec, CellularError> {
        let n = self.datum.rank();
        if (0..n).any(|i| self.datum.pairing(i, lambda) < 0) {
            return Err(CellularError::NotDominant);
        }
        let m = self.h_exponents(lambda);
        let letters = self.letters();
        let mut x = self.zero();
        for k in (0..letters.len()).rev() {
            x = self
                .f_pow(letters[k], &x, m[k])
                .expect("letters of the word are present");
        }
        Ok(x)
    }

    /// Central coordinates `(−(β_k^∨, wλ))_k` with `β_k^∨ = β_k / d_{β_k}`.
    pub fn central_cp(&self, lambda: &Weight) -> Result<CellVec, CellularError> {
        let wl = self.w_act(lambda);
        let mut out = Vec::with_capacity(self.len());
        for (k, beta) in self.word.betas().iter().enumerate() {
            let norm = self.datum.root_form(beta, beta);
            let d_beta = norm / 2;
            let pairing = self.datum.form(beta, &wl);
            if norm <= 0 || norm % 2 != 0 || pairing % d_beta != 0 {
                return Err(CellularError::NonIntegralCoroot(k));
            }
            out.push(-(pairing / d_beta));
        }
        Ok(CellVec(out))
    }

    /// `f̃_i(CP(C̃_λ) + b) = CP(C̃_λ) + f̃_i(b)`, its `ẽ_i` analogue, and
    /// `ε_i(CP(C̃_λ)) = −⟨h_i, wλ⟩`.
    pub fn check_fc(&self, lambda: &Weight, b: &CellVec, i: usize) -> Result<FcReport, CellularError> {
        self.check_len(b)?;
        let c = self.central_cp(lambda)?;
        let shifted = &c + b;
        let shift = |y: Option<CellVec>| y.map(|y| &c + &y);
        Ok(FcReport {
            f_lhs: self.f_op(i, &shifted),
            f_rhs: shift(self.f_op(i, b)),
            e_lhs: self.e_op(i, &shifted),
            e_rhs: shift(self.e_op(i, b)),
            eps_central: self.eps(i, &c),
            expected_eps: CrystalValue::Finite(-self.datum.pairing(i, &self.w_act(lambda))),
        })
    }
}

/// Both sides of the central-shift identities for one `(λ, b, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcReport {
    pub f_lhs: Option<CellVec>,
    pub f_rhs: Option<CellVec>,
    pub e_lhs: Option<CellVec>,
    pub e_rhs: Option<CellVec>,
    pub eps_central: CrystalValue,
    pub expected_eps: CrystalValue,
}

impl FcReport {
    pub fn passed(&self) -> bool {
        self.f_lhs == self.f_rhs && self.e_lhs == self.e_rhs && self.eps_central == self.expected_eps
    }
}

impl Crystal for CellularCrystal {
    type Elem = CellVec;

    fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    fn wt(&self, x: &CellVec) -> Weight {
        self.weight(x)
    }

    fn eps(&self, i: usize, x: &CellVec) -> CrystalValue {
        self.sigma_tilde(x, i)
    }

    fn phi(&self, i: usize, x: &CellVec) -> CrystalValue {
        self.sigma_tilde(x, i) + self.datum.pairing(i, &self.weight(x))
    }

    fn e(&self, i: usize, x: &CellVec) -> Option<CellVec> {
        self.e_op(i, x)
    }

    fn f(&self, i: usize, x: &CellVec) -> Option<CellVec> {
        self.f_op(i, x)
    }
}
