//! Generalized Cartan matrices with their minimal symmetrizers.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::weight::{RootVec, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("cartan matrix is empty")]
    Empty,
    #[error("cartan matrix is not square")]
    NotSquare,
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate index label {0:?}")]
    DuplicateLabel(String),
    #[error("diagonal entry a[{0}][{0}] must be 2")]
    Diagonal(usize),
    #[error("off-diagonal entry a[{0}][{1}] must be nonpositive")]
    PositiveOffDiagonal(usize, usize),
    #[error("a[{0}][{1}] and a[{1}][{0}] must vanish together")]
    ZeroAsymmetry(usize, usize),
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("symmetrizers must be positive with d_i a_ij = d_j a_ji")]
    BadSymmetrizers,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("unknown index label {0:?}")]
    UnknownLabel(String),
    #[error("unknown cartan type {0:?}")]
    UnknownType(String),
}

/// A symmetrizable generalized Cartan matrix `a_ij = ⟨h_i, α_j⟩` together
/// with the minimal positive symmetrizer `d_i = (α_i, α_i)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
}

impl CartanDatum {
    /// Validates the matrix and computes the minimal symmetrizer. Supplied
    /// symmetrizers are checked and then canonicalized to the minimal ones.
    #[allow(clippy::needless_range_loop)]
    pub fn new(
        labels: Vec<String>,
        matrix: Vec<Vec<i64>>,
        symmetrizers: Option<Vec<i64>>,
    ) -> Result<Self, CartanError> {
        let n = matrix.len();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        if matrix.iter().any(|row| row.len() != n) {
            return Err(CartanError::NotSquare);
        }
        if labels.len() != n {
            return Err(CartanError::LabelCount {
                expected: n,
                got: labels.len(),
            });
        }
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(CartanError::DuplicateLabel(l.clone()));
            }
        }
        for i in 0..n {
            if matrix[i][i] != 2 {
                return Err(CartanError::Diagonal(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if matrix[i][j] > 0 {
                    return Err(CartanError::PositiveOffDiagonal(i, j));
                }
                if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                    return Err(CartanError::ZeroAsymmetry(i, j));
                }
            }
        }
        let minimal = minimal_symmetrizer(&matrix)?;
        if let Some(d) = symmetrizers {
            if d.len() != n || d.iter().any(|&x| x <= 0) || !is_symmetrizer(&matrix, &d) {
                return Err(CartanError::BadSymmetrizers);
            }
        }
        Ok(CartanDatum {
            labels,
            matrix,
            symmetrizers: minimal,
        })
    }

    /// Datum with labels `"1"`, …, `"n"`.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let labels = (1..=matrix.len()).map(|k| k.to_string()).collect();
        Self::new(labels, matrix, None)
    }

    pub fn builtin(ty: CartanType) -> Self {
        let (labels, matrix) = ty.matrix();
        Self::new(labels, matrix, None).expect("built-in cartan types are valid")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.symmetrizers
    }

    /// `a_ij = ⟨h_i, α_j⟩`.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.symmetrizers[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, CartanError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CartanError::UnknownLabel(label.to_string()))
    }

    pub fn check_index(&self, i: usize) -> Result<usize, CartanError> {
        if i < self.rank() {
            Ok(i)
        } else {
            Err(CartanError::IndexOutOfRange(i))
        }
    }

    /// Rank-two braid order `m_ij`; `None` stands for `∞`.
    pub fn braid_order(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return Some(1);
        }
        match self.a(i, j) * self.a(j, i) {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// `⟨h_i, λ⟩ = lam_i + Σ_j rt_j a_ij`.
    pub fn pairing(&self, i: usize, lambda: &Weight) -> i64 {
        let row = &self.matrix[i];
        lambda.lam[i] + row.iter().zip(&lambda.rt).map(|(a, c)| a * c).sum::<i64>()
    }

    /// Checked variant of [`pairing`](Self::pairing).
    pub fn try_pairing(&self, i: usize, lambda: &Weight) -> Result<i64, CartanError> {
        self.check_index(i)?;
        if lambda.rank() != self.rank() {
            return Err(CartanError::IndexOutOfRange(lambda.rank()));
        }
        Ok(self.pairing(i, lambda))
    }

    /// `⟨h_i, β⟩` for a root lattice vector.
    pub fn pairing_root(&self, i: usize, beta: &RootVec) -> i64 {
        self.matrix[i]
            .iter()
            .zip(&beta.coeffs)
            .map(|(a, c)| a * c)
            .sum()
    }

    /// `(β, λ) = Σ_i β_i d_i ⟨h_i, λ⟩`.
    pub fn form(&self, beta: &RootVec, lambda: &Weight) -> i64 {
        beta.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| c * self.symmetrizers[i] * self.pairing(i, lambda))
            .sum()
    }

    /// `(β, γ)` on the root lattice, with `(α_i, α_j) = d_i a_ij`.
    pub fn root_form(&self, beta: &RootVec, gamma: &RootVec) -> i64 {
        beta.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| c * self.symmetrizers[i] * self.pairing_root(i, gamma))
            .sum()
    }

    /// True when every `a_ij a_ji < 4` and the matrix is of finite type,
    /// detected by the existence of a longest Weyl group element.
    pub fn is_finite_type(&self) -> bool {
        crate::weyl::longest_word(self, 4096).is_ok()
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.matrix {
            let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
            writeln!(f, "[{}]", cells.join(""))?;
        }
        Ok(())
    }
}

fn is_symmetrizer(a: &[Vec<i64>], d: &[i64]) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| d[i] * a[i][j] == d[j] * a[j][i]))
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Symmetrizers are unique up to one positive scale per connected
/// component of the Dynkin diagram; the minimal one has coprime entries on
/// each component.
fn minimal_symmetrizer(a: &[Vec<i64>]) -> Result<Vec<i64>, CartanError> {
    let n = a.len();
    // d_i = num[i] / den[i]
    let mut num = vec![0i64; n];
    let mut den = vec![0i64; n];
    let mut component = vec![usize::MAX; n];
    let mut comps = 0;
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        num[root] = 1;
        den[root] = 1;
        component[root] = comps;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if i == j || a[i][j] == 0 || component[j] != usize::MAX {
                    continue;
                }
                // d_j = d_i a_ij / a_ji
                let (mut p, mut q) = (num[i] * a[i][j], den[i] * a[j][i]);
                if q < 0 {
                    p = -p;
                    q = -q;
                }
                let g = gcd(p, q);
                num[j] = p / g;
                den[j] = q / g;
                component[j] = comps;
                queue.push_back(j);
            }
        }
        comps += 1;
    }
    let mut d = vec![0i64; n];
    for c in 0..comps {
        let members: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
        let l = members
            .iter()
            .fold(1i64, |acc, &i| acc / gcd(acc, den[i]) * den[i]);
        for &i in &members {
            d[i] = num[i] * (l / den[i]);
        }
        let g = members.iter().fold(0i64, |acc, &i| gcd(acc, d[i]));
        for &i in &members {
            d[i] /= g;
        }
    }
    if d.iter().any(|&x| x <= 0) || !is_symmetrizer(a, &d) {
        return Err(CartanError::NotSymmetrizable);
    }
    Ok(d)
}

/// Built-in Cartan types, Bourbaki numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    /// Untwisted affine `A_1^(1)`, labels `"0"`, `"1"`.
    A1Affine,
}

impl CartanType {
    fn matrix(self) -> (Vec<String>, Vec<Vec<i64>>) {
        let chain = |n: usize| {
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                m[i][i] = 2;
                if i + 1 < n {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
            }
            m
        };
        let numbered = |n: usize| (1..=n).map(|k| k.to_string()).collect::<Vec<_>>();
        match self {
            CartanType::A(n) => (numbered(n), chain(n)),
            CartanType::B(n) => {
                let mut m = chain(n);
                m[n - 1][n - 2] = -2;
                (numbered(n), m)
            }
            CartanType::C(n) => {
                let mut m = chain(n);
                m[n - 2][n - 1] = -2;
                (numbered(n), m)
            }
            CartanType::D(n) => {
                let mut m = chain(n);
                m[n - 2][n - 1] = 0;
                m[n - 1][n - 2] = 0;
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
                (numbered(n), m)
            }
            CartanType::E(n) => {
                // 1-3-4-5-…-n with 2 attached to 4.
                let mut m = vec![vec![0i64; n]; n];
                let mut edge = |i: usize, j: usize| {
                    m[i - 1][j - 1] = -1;
                    m[j - 1][i - 1] = -1;
                };
                edge(1, 3);
                edge(2, 4);
                for k in 3..n {
                    edge(k, k + 1);
                }
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = 2;
                }
                (numbered(n), m)
            }
            CartanType::F4 => {
                let mut m = chain(4);
                m[2][1] = -2;
                (numbered(4), m)
            }
            CartanType::G2 => (numbered(2), vec![vec![2, -3], vec![-1, 2]]),
            CartanType::A1Affine => (
                vec!["0".to_string(), "1".to_string()],
                vec![vec![2, -2], vec![-2, 2]],
            ),
        }
    }
}

impl FromStr for CartanType {
    type Err = CartanError;

    /// Accepts `A3`, `B2`, `E6`, `F4`, `G2`, and `A1^(1)` (also `A1(1)`,
    /// `A1_1`, `A1~`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CartanError::UnknownType(s.to_string());
        let t = s.trim();
        if matches!(t, "A1^(1)" | "A1(1)" | "A1_1" | "A1~" | "a1^(1)") {
            return Ok(CartanType::A1Affine);
        }
        let mut chars = t.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let ty = match (family, n) {
            ('A', n) if n >= 1 => CartanType::A(n),
            ('B', n) if n >= 2 => CartanType::B(n),
            ('C', n) if n >= 2 => CartanType::C(n),
            ('D', n) if n >= 4 => CartanType::D(n),
            ('E', 6..=8) => CartanType::E(n),
            ('F', 4) => CartanType::F4,
            ('G', 2) => CartanType::G2,
            _ => return Err(unknown()),
        };
        Ok(ty)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E(n) => write!(f, "E{n}"),
            CartanType::F4 => f.write_str("F4"),
            CartanType::G2 => f.write_str("G2"),
            CartanType::A1Affine => f.write_str("A1^(1)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> CartanDatum {
        CartanDatum::builtin(s.parse().unwrap())
    }

    #[test]
    fn registry_symmetrizers() {
        assert_eq!(ty("A3").symmetrizers(), &[1, 1, 1]);
        assert_eq!(ty("B2").symmetrizers(), &[2, 1]);
        assert_eq!(ty("C3").symmetrizers(), &[1, 1, 2]);
        assert_eq!(ty("B4").symmetrizers(), &[2, 2, 2, 1]);
        assert_eq!(ty("F4").symmetrizers(), &[2, 2, 1, 1]);
        assert_eq!(ty("G2").symmetrizers(), &[1, 3]);
        assert_eq!(ty("E8").symmetrizers(), &[1; 8]);
        assert_eq!(ty("A1^(1)").symmetrizers(), &[1, 1]);
        assert_eq!(ty("A1^(1)").labels(), &["0", "1"]);
    }

    #[test]
    fn every_builtin_is_finite_except_affine() {
        for s in ["A1", "A4", "B3", "C4", "D4", "D5", "E6", "E7", "F4", "G2"] {
            assert!(ty(s).is_finite_type(), "{s}");
        }
        assert!(!ty("A1^(1)").is_finite_type());
    }

    #[test]
    fn supplied_symmetrizers_are_canonicalized() {
        let m = vec![vec![2, -1], vec![-2, 2]];
        let d = CartanDatum::new(
            vec!["1".into(), "2".into()],
            m.clone(),
            Some(vec![4, 2]),
        )
        .unwrap();
        assert_eq!(d.symmetrizers(), &[2, 1]);
        let bad = CartanDatum::new(vec!["1".into(), "2".into()], m, Some(vec![1, 1]));
        assert_eq!(bad, Err(CartanError::BadSymmetrizers));
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        let m = |rows: Vec<Vec<i64>>| CartanDatum::from_matrix(rows);
        assert_eq!(m(vec![]), Err(CartanError::Empty));
        assert_eq!(m(vec![vec![2, -1]]), Err(CartanError::NotSquare));
        assert_eq!(m(vec![vec![1]]), Err(CartanError::Diagonal(0)));
        assert_eq!(
            m(vec![vec![2, 1], vec![-1, 2]]),
            Err(CartanError::PositiveOffDiagonal(0, 1))
        );
        assert_eq!(
            m(vec![vec![2, 0], vec![-1, 2]]),
            Err(CartanError::ZeroAsymmetry(0, 1))
        );
        // a 3-cycle whose products of ratios are not 1
        assert_eq!(
            m(vec![vec![2, -1, -1], vec![-2, 2, -1], vec![-1, -1, 2]]),
            Err(CartanError::NotSymmetrizable)
        );
        assert!(matches!(
            CartanDatum::new(vec!["1".into(), "1".into()], vec![vec![2, 0], vec![0, 2]], None),
            Err(CartanError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn pairings_on_a2() {
        let a2 = ty("A2");
        let l1 = Weight::fundamental(2, 0);
        let a2r = Weight::simple_root(2, 1);
        assert_eq!(a2.pairing(0, &l1), 1);
        assert_eq!(a2.pairing(0, &a2r), -1);
        let beta = RootVec::new(vec![1, 1]);
        let lam = Weight {
            lam: vec![1, 0],
            rt: vec![-1, -1],
        };
        assert_eq!(a2.form(&beta, &lam), -1);
        assert_eq!(a2.try_pairing(2, &l1), Err(CartanError::IndexOutOfRange(2)));
        assert!(matches!(a2.index_of("7"), Err(CartanError::UnknownLabel(_))));
    }

    #[test]
    fn braid_orders() {
        assert_eq!(ty("A3").braid_order(0, 2), Some(2));
        assert_eq!(ty("A3").braid_order(0, 1), Some(3));
        assert_eq!(ty("B2").braid_order(0, 1), Some(4));
        assert_eq!(ty("G2").braid_order(1, 0), Some(6));
        assert_eq!(ty("A1^(1)").braid_order(0, 1), None);
    }

    #[test]
    fn parse_types() {
        assert_eq!("a3".parse::<CartanType>(), Ok(CartanType::A(3)));
        assert!("D3".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("".parse::<CartanType>().is_err());
        assert_eq!(CartanType::A1Affine.to_string(), "A1^(1)");
    }
}
