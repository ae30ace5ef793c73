//! Weight and root lattice vectors.
//!
//! A [`Weight`] is a formal sum `Σ lam_i Λ_i + Σ rt_j α_j`. Equality is
//! componentwise on the two parts; every operation in this crate is linear
//! and only ever inspects weights through pairings, so two formal
//! representatives of the same lattice point never meet.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

/// Formal integer combination of fundamental weights and simple roots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    /// Coefficients over `{Λ_i}`.
    pub lam: Vec<i64>,
    /// Coefficients over `{α_i}`.
    pub rt: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            lam: vec![0; rank],
            rt: vec![0; rank],
        }
    }

    /// The fundamental weight `Λ_i`.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.lam[i] = 1;
        w
    }

    /// The simple root `α_i` viewed as a weight.
    pub fn simple_root(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.rt[i] = 1;
        w
    }

    /// `Σ c_i Λ_i`.
    pub fn from_fundamental(coeffs: &[i64]) -> Self {
        Weight {
            lam: coeffs.to_vec(),
            rt: vec![0; coeffs.len()],
        }
    }

    pub fn from_root(root: &RootVec) -> Self {
        Weight {
            lam: vec![0; root.rank()],
            rt: root.coeffs.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.lam.len()
    }

    pub fn is_zero(&self) -> bool {
        self.lam.iter().chain(self.rt.iter()).all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Weight {
            lam: self.lam.iter().map(|&c| c * k).collect(),
            rt: self.rt.iter().map(|&c| c * k).collect(),
        }
    }

    /// Adds `k α_i` in place.
    pub fn add_root(&mut self, i: usize, k: i64) {
        self.rt[i] += k;
    }
}

impl Add for &Weight {
    type Output = Weight;

    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            lam: zip_with(&self.lam, &rhs.lam, |a, b| a + b),
            rt: zip_with(&self.rt, &rhs.rt, |a, b| a + b),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;

    fn sub(self, rhs: &Weight) -> Weight {
        Weight {
            lam: zip_with(&self.lam, &rhs.lam, |a, b| a - b),
            rt: zip_with(&self.rt, &rhs.rt, |a, b| a - b),
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;

    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

/// Integer vector over the simple roots, an element of the root lattice `Q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootVec {
    pub coeffs: Vec<i64>,
}

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec {
            coeffs: vec![0; rank],
        }
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut r = Self::zero(rank);
        r.coeffs[i] = 1;
        r
    }

    pub fn new(coeffs: Vec<i64>) -> Self {
        RootVec { coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ |c_i|`.
    pub fn height(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Nonzero with all coefficients nonnegative.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl Add for &RootVec {
    type Output = RootVec;

    fn add(self, rhs: &RootVec) -> RootVec {
        RootVec::new(zip_with(&self.coeffs, &rhs.coeffs, |a, b| a + b))
    }
}

impl Sub for &RootVec {
    type Output = RootVec;

    fn sub(self, rhs: &RootVec) -> RootVec {
        RootVec::new(zip_with(&self.coeffs, &rhs.coeffs, |a, b| a - b))
    }
}

fn zip_with(a: &[i64], b: &[i64], f: impl Fn(i64, i64) -> i64) -> Vec<i64> {
    assert_eq!(a.len(), b.len(), "rank mismatch");
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}
